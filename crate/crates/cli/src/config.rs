//! Flat `key = value` experiment configuration.
//!
//! One setting per line, dotted keys for grouped settings, `#` starts a
//! comment. Every key is optional; omitted keys take the defaults of the
//! prime-sequence experiment. Unknown or duplicated keys are rejected.
//!
//! ```text
//! problem = primes
//! primes.n = 100
//! p_m = 0.2
//! extinction.policy = low_complexity_purge
//! extinction.threshold = 1000000
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use selfrep::{
    Element, EngineMode, ExtinctionKind, ExtinctionPolicy, RuleKind, SimError, SimParams,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Malformed { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key `{key}` is set more than once")]
    DuplicateKey { line: usize, key: String },

    #[error("`{key}`: cannot parse `{value}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("`{key}`: {reason}")]
    OutOfRange { key: String, reason: String },

    #[error("`{key}` does not apply to problem `{problem}`")]
    WrongProblem { key: String, problem: String },
}

impl ConfigError {
    /// The configuration key the diagnostic is about, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Malformed { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::DuplicateKey { key, .. }
            | ConfigError::InvalidValue { key, .. }
            | ConfigError::OutOfRange { key, .. }
            | ConfigError::WrongProblem { key, .. } => Some(key),
        }
    }
}

const KEYS: &[&str] = &[
    "problem",
    "primes.n",
    "onemax.target_len",
    "sequence.values",
    "elements",
    "g_max",
    "lifetime",
    "p_m",
    "n_a",
    "seed",
    "engine",
    "population_cap",
    "reseed_on_extinction",
    "stop_at_target",
    "target_complexity",
    "max_genome_len",
    "extinction.policy",
    "extinction.threshold",
    "extinction.keep_top_k",
    "runs",
    "seed_base",
    "out_dir",
    "emit_chart",
];

/// A complete experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub problem: RuleKind,
    pub params: SimParams,
    /// Number of seeds in a sweep.
    pub runs: u32,
    /// First seed of a sweep.
    pub seed_base: u64,
    pub out_dir: PathBuf,
    pub emit_chart: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            problem: RuleKind::Primes { limit: 100 },
            params: SimParams::default(),
            runs: 30,
            seed_base: 0,
            out_dir: PathBuf::from("out"),
            emit_chart: false,
        }
    }
}

impl SimConfig {
    /// Configuration for a problem with its natural element set and
    /// otherwise default settings.
    pub fn for_problem(problem: RuleKind) -> Self {
        let params = SimParams {
            element_set: problem.default_elements(),
            ..SimParams::default()
        };
        SimConfig {
            problem,
            params,
            ..SimConfig::default()
        }
    }

    /// Renders the effective configuration; parsing the result yields an
    /// equal value.
    pub fn to_config_string(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            writeln!(s, "{k} = {v}").expect("writing to a String");
        };
        kv("problem", &self.problem.name());
        match &self.problem {
            RuleKind::Primes { limit } => kv("primes.n", limit),
            RuleKind::OneMax { target_len } => {
                if let Some(t) = target_len {
                    kv("onemax.target_len", t);
                }
            }
            RuleKind::Sequence { values } => kv("sequence.values", &join(values)),
        }
        kv("elements", &format_elements(&p.element_set));
        kv("g_max", &p.g_max);
        kv("lifetime", &p.lifetime);
        kv("p_m", &p.p_m);
        kv("n_a", &p.n_a);
        kv("seed", &p.seed);
        kv("engine", &p.engine_mode.as_str());
        kv("population_cap", &p.population_cap);
        kv("reseed_on_extinction", &p.reseed_on_extinction);
        kv("stop_at_target", &p.stop_at_target);
        if let Some(t) = p.target_complexity {
            kv("target_complexity", &t);
        }
        kv("max_genome_len", &p.max_genome_len);
        kv("extinction.policy", &p.extinction.kind.as_str());
        kv("extinction.threshold", &p.extinction.trigger_threshold);
        kv("extinction.keep_top_k", &p.extinction.keep_top_k);
        kv("runs", &self.runs);
        kv("seed_base", &self.seed_base);
        kv("out_dir", &self.out_dir.display());
        kv("emit_chart", &self.emit_chart);
        s
    }
}

fn join(values: &[Element]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Compact element list: runs of three or more consecutive values become
/// `a..b` (inclusive).
pub fn format_elements(elements: &[Element]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut j = i;
        while j + 1 < elements.len() && elements[j + 1] == elements[j].wrapping_add(1) {
            j += 1;
        }
        if j - i >= 2 {
            parts.push(format!("{}..{}", elements[i], elements[j]));
        } else {
            for e in &elements[i..=j] {
                parts.push(e.to_string());
            }
        }
        i = j + 1;
    }
    parts.join(",")
}

/// Parses `a,b,c..d` into an explicit list (ranges inclusive).
pub fn parse_elements(text: &str) -> Result<Vec<Element>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: Element = lo.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
            let hi: Element = hi.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
            if lo > hi {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|e| format!("`{part}`: {e}"))?);
        }
    }
    Ok(out)
}

struct Entries(BTreeMap<&'static str, String>);

impl Entries {
    fn take<T>(&mut self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.take_with(key, |v| v.parse::<T>().map_err(|e| e.to_string()))
    }

    fn take_with<T>(
        &mut self,
        key: &'static str,
        parse: impl FnOnce(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ConfigError> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(value) => parse(&value)
                .map(Some)
                .map_err(|reason| ConfigError::InvalidValue {
                    key: key.to_string(),
                    value,
                    reason,
                }),
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut raw = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        }
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        };
        if raw.insert(known, value.to_string()).is_some() {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: key.to_string(),
            });
        }
    }
    let mut e = Entries(raw);

    let problem_name: String = e.take("problem")?.unwrap_or_else(|| "primes".into());
    let not_for = |key: &str| ConfigError::WrongProblem {
        key: key.to_string(),
        problem: problem_name.clone(),
    };
    let primes_n: Option<u32> = e.take("primes.n")?;
    let target_len: Option<usize> = e.take("onemax.target_len")?;
    let seq_values = e.take_with("sequence.values", parse_elements)?;
    let problem = match problem_name.as_str() {
        "primes" => {
            if target_len.is_some() {
                return Err(not_for("onemax.target_len"));
            }
            if seq_values.is_some() {
                return Err(not_for("sequence.values"));
            }
            let limit = primes_n.unwrap_or(100);
            if limit < 2 {
                return Err(out_of_range("primes.n", "must be at least 2"));
            }
            RuleKind::Primes { limit }
        }
        "onemax" => {
            if primes_n.is_some() {
                return Err(not_for("primes.n"));
            }
            if seq_values.is_some() {
                return Err(not_for("sequence.values"));
            }
            if target_len == Some(0) {
                return Err(out_of_range("onemax.target_len", "must be at least 1"));
            }
            RuleKind::OneMax { target_len }
        }
        "sequence" => {
            if primes_n.is_some() {
                return Err(not_for("primes.n"));
            }
            if target_len.is_some() {
                return Err(not_for("onemax.target_len"));
            }
            let values = seq_values.unwrap_or_default();
            if values.is_empty() {
                return Err(out_of_range(
                    "sequence.values",
                    "must list at least one value",
                ));
            }
            RuleKind::Sequence { values }
        }
        other => {
            return Err(ConfigError::InvalidValue {
                key: "problem".into(),
                value: other.into(),
                reason: "expected primes, onemax or sequence".into(),
            })
        }
    };

    let d = SimParams::default();
    let dc = SimConfig::default();
    let element_set = e
        .take_with("elements", parse_elements)?
        .unwrap_or_else(|| problem.default_elements());
    let params = SimParams {
        g_max: e.take("g_max")?.unwrap_or(d.g_max),
        lifetime: e.take("lifetime")?.unwrap_or(d.lifetime),
        p_m: e.take("p_m")?.unwrap_or(d.p_m),
        n_a: e.take("n_a")?.unwrap_or(d.n_a),
        element_set,
        seed: e.take("seed")?.unwrap_or(d.seed),
        engine_mode: e.take::<EngineMode>("engine")?.unwrap_or(d.engine_mode),
        population_cap: e.take("population_cap")?.unwrap_or(d.population_cap),
        reseed_on_extinction: e
            .take("reseed_on_extinction")?
            .unwrap_or(d.reseed_on_extinction),
        stop_at_target: e.take("stop_at_target")?.unwrap_or(d.stop_at_target),
        target_complexity: e.take("target_complexity")?,
        max_genome_len: e.take("max_genome_len")?.unwrap_or(d.max_genome_len),
        extinction: ExtinctionPolicy {
            kind: e
                .take::<ExtinctionKind>("extinction.policy")?
                .unwrap_or(d.extinction.kind),
            trigger_threshold: e
                .take("extinction.threshold")?
                .unwrap_or(d.extinction.trigger_threshold),
            keep_top_k: e
                .take("extinction.keep_top_k")?
                .unwrap_or(d.extinction.keep_top_k),
        },
    };
    params.validate().map_err(|err| match err {
        SimError::InvalidParam { key, reason } => out_of_range(key, &reason),
        other => out_of_range("params", &other.to_string()),
    })?;

    let runs: u32 = e.take("runs")?.unwrap_or(dc.runs);
    if runs < 1 {
        return Err(out_of_range("runs", "must be at least 1"));
    }
    let config = SimConfig {
        problem,
        params,
        runs,
        seed_base: e.take("seed_base")?.unwrap_or(dc.seed_base),
        out_dir: e.take("out_dir")?.unwrap_or(dc.out_dir),
        emit_chart: e.take("emit_chart")?.unwrap_or(dc.emit_chart),
    };
    debug_assert!(e.0.is_empty(), "unconsumed keys: {:?}", e.0.keys());
    Ok(config)
}

fn out_of_range(key: &str, reason: &str) -> ConfigError {
    ConfigError::OutOfRange {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.problem, RuleKind::Primes { limit: 100 });
        let p = &c.params;
        assert_eq!((p.g_max, p.lifetime, p.n_a), (500, 4, 100));
        assert_eq!(p.p_m, 0.2);
        assert_eq!(p.element_set, (1..=100).collect::<Vec<_>>());
        assert_eq!(p.extinction.kind, ExtinctionKind::None);
        assert_eq!(c, SimConfig::default());
    }

    #[test]
    fn out_of_range_names_key() {
        let err = parse_config("p_m = 1.5").unwrap_err();
        assert!(matches!(err, ConfigError::OutOfRange { .. }));
        assert_eq!(err.key(), Some("p_m"));
        assert!(err.to_string().contains("p_m"));
    }

    #[test]
    fn onemax_problem() {
        let c = parse_config("problem = onemax\nonemax.target_len = 20\n").unwrap();
        assert_eq!(
            c.problem,
            RuleKind::OneMax {
                target_len: Some(20)
            }
        );
        assert_eq!(c.params.element_set, vec![0, 1]);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert_eq!(
            parse_config("# comment\np_n = 0.1").unwrap_err(),
            ConfigError::UnknownKey {
                line: 2,
                key: "p_n".into()
            }
        );
        assert!(matches!(
            parse_config("g_max = 3\ng_max = 4").unwrap_err(),
            ConfigError::DuplicateKey { line: 2, .. }
        ));
        assert!(matches!(
            parse_config("just words").unwrap_err(),
            ConfigError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            parse_config("g_max = lots").unwrap_err(),
            ConfigError::InvalidValue { .. }
        ));
    }

    #[test]
    fn problem_keys_must_match_problem() {
        let err = parse_config("problem = onemax\nprimes.n = 50").unwrap_err();
        assert_eq!(err.key(), Some("primes.n"));
        assert_eq!(
            parse_config("primes.n = 1").unwrap_err().key(),
            Some("primes.n")
        );
        assert_eq!(
            parse_config("problem = onemax\nonemax.target_len = 0")
                .unwrap_err()
                .key(),
            Some("onemax.target_len")
        );
    }

    #[test]
    fn comments_and_dotted_keys() {
        let c = parse_config(
            "# purge setup\nextinction.policy = low_complexity_purge # inline\nextinction.threshold=1000\n",
        )
        .unwrap();
        assert_eq!(c.params.extinction, ExtinctionPolicy::purge(1000, 1));
    }

    #[test]
    fn element_lists() {
        assert_eq!(
            parse_elements("1..3,7,9..10").unwrap(),
            vec![1, 2, 3, 7, 9, 10]
        );
        assert_eq!(format_elements(&[1, 2, 3, 7, 9, 10]), "1..3,7,9,10");
        assert_eq!(format_elements(&[0, 1]), "0,1");
        assert!(parse_elements("5..2").is_err());
    }

    #[test]
    fn sequence_problem_elements_default() {
        let c = parse_config("problem = sequence\nsequence.values = 1,4,9").unwrap();
        assert_eq!(c.params.element_set, (1..=9).collect::<Vec<_>>());
    }
}
