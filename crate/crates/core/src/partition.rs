//! Color partitions: the map from polynomial variables to color classes.

use crate::error::{Error, Result};

/// Where a color class came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassSource {
    /// Fixed structurally by a coloring guide.
    Guide,
    /// Assigned by a hash-family or splitter vector.
    Hashed,
}

/// Partition of variables `0..num_vars` into `k` color classes `0..k`.
///
/// A variable may be left unassigned; it is never zeroed and always
/// evaluates to 1. Empty classes are allowed (their sieve contribution is 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorPartition {
    class_of: Vec<Option<usize>>,
    sources: Vec<ClassSource>,
}

impl ColorPartition {
    pub fn new(class_of: Vec<Option<usize>>, sources: Vec<ClassSource>) -> Result<Self> {
        let k = sources.len();
        if let Some(&bad) = class_of.iter().flatten().find(|&&c| c >= k) {
            return Err(Error::ClassOutOfRange {
                index: bad,
                classes: k,
            });
        }
        Ok(Self { class_of, sources })
    }

    /// Every variable in its own class.
    pub fn identity(num_vars: usize) -> Self {
        Self {
            class_of: (0..num_vars).map(Some).collect(),
            sources: vec![ClassSource::Guide; num_vars],
        }
    }

    /// Classes from a hash vector with 1-based colors in `1..=k`.
    pub fn from_vector(colors: &[u32], k: usize) -> Result<Self> {
        Self::new(
            colors.iter().map(|&c| Some(c as usize - 1)).collect(),
            vec![ClassSource::Hashed; k],
        )
    }

    pub fn k(&self) -> usize {
        self.sources.len()
    }

    pub fn num_vars(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, var: usize) -> Option<usize> {
        self.class_of[var]
    }

    pub fn sources(&self) -> &[ClassSource] {
        &self.sources
    }

    /// Bitmask of classes that came from the coloring guide.
    pub fn guide_mask(&self) -> u64 {
        self.sources
            .iter()
            .enumerate()
            .filter(|&(_, s)| *s == ClassSource::Guide)
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}
