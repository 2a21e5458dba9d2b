//! File emission: per-run CSV series, JSON sweep summary, SVG line charts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use selfrep::{GenerationStats, RunResult};
use thiserror::Error;

use crate::sweep::{summarize, SeedRun, Summary, SweepOutcome};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("no results")]
    NoResults,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Column order of the per-run CSV.
pub const CSV_HEADER: [&str; 12] = [
    "run_seed",
    "generation",
    "population_total",
    "satisfying_total",
    "distinct_genomes",
    "max_complexity",
    "mean_complexity",
    "births",
    "rule_deaths",
    "lifetime_deaths",
    "purged",
    "extinction_triggered",
];

fn csv_row(seed: u64, s: &GenerationStats) -> [String; 12] {
    [
        seed.to_string(),
        s.generation.to_string(),
        s.population_total.to_string(),
        s.satisfying_total.to_string(),
        s.distinct_genomes.to_string(),
        s.max_complexity.to_string(),
        s.mean_complexity_f64().to_string(),
        s.births.to_string(),
        s.rule_deaths.to_string(),
        s.lifetime_deaths.to_string(),
        s.purged.to_string(),
        s.extinction_triggered.to_string(),
    ]
}

/// Writes one row per entry of `result.series`.
pub fn write_series_csv(path: &Path, seed: u64, result: &RunResult) -> Result<(), OutputError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_HEADER)?;
    for s in &result.series {
        w.write_record(csv_row(seed, s))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<(), OutputError> {
    if summary.runs == 0 {
        return Err(OutputError::NoResults);
    }
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// A numeric column that can be charted against the generation index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ChartColumn {
    PopulationTotal,
    DistinctGenomes,
    MaxComplexity,
    /// Running maximum of `max_complexity`.
    RecordMaxComplexity,
    MeanComplexity,
}

impl ChartColumn {
    pub fn name(self) -> &'static str {
        match self {
            ChartColumn::PopulationTotal => "population_total",
            ChartColumn::DistinctGenomes => "distinct_genomes",
            ChartColumn::MaxComplexity => "max_complexity",
            ChartColumn::RecordMaxComplexity => "record_max_complexity",
            ChartColumn::MeanComplexity => "mean_complexity",
        }
    }

    pub fn points(self, series: &[GenerationStats]) -> Vec<(f64, f64)> {
        let mut record = 0f64;
        series
            .iter()
            .map(|s| {
                let y = match self {
                    ChartColumn::PopulationTotal => s.population_total as f64,
                    ChartColumn::DistinctGenomes => s.distinct_genomes as f64,
                    ChartColumn::MaxComplexity => s.max_complexity as f64,
                    ChartColumn::RecordMaxComplexity => {
                        record = record.max(s.max_complexity as f64);
                        record
                    }
                    ChartColumn::MeanComplexity => s.mean_complexity_f64(),
                };
                (s.generation as f64, y)
            })
            .collect()
    }

    /// Points of the cross-seed mean of this column.
    pub fn sweep_points(self, summary: &Summary) -> Vec<(f64, f64)> {
        let mut record = 0f64;
        summary
            .per_generation
            .iter()
            .map(|g| {
                let y = match self {
                    ChartColumn::PopulationTotal => g.population_total_mean,
                    ChartColumn::DistinctGenomes => g.distinct_genomes_mean,
                    ChartColumn::MaxComplexity => g.max_complexity_mean,
                    ChartColumn::RecordMaxComplexity => {
                        record = record.max(g.max_complexity_mean);
                        record
                    }
                    ChartColumn::MeanComplexity => g.mean_complexity_mean,
                };
                (g.generation as f64, y)
            })
            .collect()
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Renders `points` as an SVG polyline. With `log_y` the vertical axis is
/// `log10(1 + y)`.
pub fn render_chart(title: &str, y_label: &str, points: &[(f64, f64)], log_y: bool) -> String {
    let ty = |y: f64| if log_y { (1.0 + y.max(0.0)).log10() } else { y };
    let (mut x_max, mut y_max) = (1.0f64, 1.0f64);
    for &(x, y) in points {
        x_max = x_max.max(x);
        y_max = y_max.max(ty(y));
    }
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - ty(y) / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">generation (max {x_max})</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let y_top = if log_y {
        10f64.powf(y_max) - 1.0
    } else {
        y_max
    };
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle" font-family="sans-serif" font-size="12">{}{} (max {:.0})</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
        if log_y { ", log scale" } else { "" },
        y_top
    );
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn write_chart(path: &Path, svg: &str) -> Result<(), OutputError> {
    fs::write(path, svg).map_err(io_err(path))
}

/// Writes `run_<seed>.csv`, `summary.json` and optionally a chart for a
/// single run.
pub fn write_run_files(
    dir: &Path,
    problem: &str,
    seed: u64,
    result: RunResult,
    chart: Option<ChartColumn>,
) -> Result<(), OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_series_csv(&dir.join(format!("run_{seed}.csv")), seed, &result)?;
    if let Some(column) = chart {
        let svg = render_chart(
            &format!("{problem} seed {seed}"),
            column.name(),
            &column.points(&result.series),
            column == ChartColumn::PopulationTotal,
        );
        write_chart(&dir.join(format!("run_{seed}_{}.svg", column.name())), &svg)?;
    }
    let summary = summarize(
        problem,
        &[SeedRun {
            seed,
            result: Ok(result),
        }],
    );
    write_summary(&dir.join("summary.json"), &summary)
}

/// Writes one CSV per successful seed, `summary.json` and optionally a
/// chart of the cross-seed mean.
pub fn write_sweep_files(
    dir: &Path,
    outcome: &SweepOutcome,
    chart: Option<ChartColumn>,
) -> Result<(), OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for r in &outcome.runs {
        if let Ok(result) = &r.result {
            write_series_csv(&dir.join(format!("run_{}.csv", r.seed)), r.seed, result)?;
        }
    }
    if let Some(column) = chart {
        let s = &outcome.summary;
        let svg = render_chart(
            &format!("{} sweep of {} runs (mean)", s.problem, s.runs),
            column.name(),
            &column.sweep_points(s),
            column == ChartColumn::PopulationTotal,
        );
        write_chart(&dir.join(format!("sweep_{}.svg", column.name())), &svg)?;
    }
    write_summary(&dir.join("summary.json"), &outcome.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_has_one_vertex_per_point() {
        let svg = render_chart("t", "y", &[(0.0, 1.0), (1.0, 3.0), (2.0, 2.0)], false);
        assert!(svg.starts_with("<svg"));
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.matches(',').count(), 3);
    }

    #[test]
    fn log_chart_handles_zero() {
        let svg = render_chart("pop", "population_total", &[(0.0, 0.0), (1.0, 1e6)], true);
        assert!(!svg.contains("NaN"));
        assert!(svg.contains("log scale"));
    }
}
