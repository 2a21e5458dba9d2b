//! Agent genomes: ordered sequences of fundamental elements.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a fundamental element.
pub type Element = u32;

/// An agent's entire state. Its length is the agent's complexity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome(Vec<Element>);

impl Genome {
    pub fn new(elements: Vec<Element>) -> Self {
        Genome(elements)
    }

    pub fn empty() -> Self {
        Genome(Vec::new())
    }

    pub fn single(element: Element) -> Self {
        Genome(vec![element])
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn complexity(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of this genome with `element` appended at the end.
    pub fn appended(&self, element: Element) -> Genome {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(element);
        Genome(v)
    }

    /// Copy of this genome with the element at `index` deleted.
    ///
    /// Panics if `index` is out of bounds.
    pub fn removed(&self, index: usize) -> Genome {
        let mut v = self.0.clone();
        v.remove(index);
        Genome(v)
    }

    pub fn into_inner(self) -> Vec<Element> {
        self.0
    }
}

impl From<Vec<Element>> for Genome {
    fn from(v: Vec<Element>) -> Self {
        Genome(v)
    }
}

impl<const N: usize> From<[Element; N]> for Genome {
    fn from(v: [Element; N]) -> Self {
        Genome(v.to_vec())
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_and_remove() {
        let g = Genome::from([2, 3]);
        assert_eq!(g.appended(5), Genome::from([2, 3, 5]));
        assert_eq!(g.removed(0), Genome::from([3]));
        assert_eq!(Genome::single(7).removed(0), Genome::empty());
        assert_eq!(g.complexity(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(Genome::from([2, 3, 5]).to_string(), "[2,3,5]");
        assert_eq!(Genome::empty().to_string(), "[]");
    }
}
