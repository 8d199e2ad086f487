use std::fmt;

use super::check_dim;
use crate::error::{Error, Result};

/// Harmonic mode `(m, l)` in ambient dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    n: usize,
    m: usize,
    l: usize,
}

impl ModeIndex {
    pub fn new(n: usize, m: usize, l: usize) -> Result<Self> {
        let lm = mode_count(n, m)?;
        if l == 0 || l > lm {
            return Err(Error::invalid(format!(
                "mode index l = {l} out of range 1..={lm} for n = {n}, m = {m}"
            )));
        }
        Ok(Self { n, m, l })
    }

    /// The radial mode `(m, l) = (0, 1)`.
    pub fn radial(n: usize) -> Self {
        Self { n, m: 0, l: 1 }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn index(&self) -> usize {
        self.l
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, l={})", self.m, self.l)
    }
}

/// Number `l_m` of independent harmonics of degree `m` on `S^{n-1}`.
pub fn mode_count(n: usize, m: usize) -> Result<usize> {
    check_dim(n)?;
    Ok(match (n, m) {
        (_, 0) => 1,
        (2, _) => 2,
        _ => 2 * m + 1,
    })
}

/// Every mode of degree `0..=m_max`, ordered by `(m, l)`.
pub fn modes_up_to(n: usize, m_max: usize) -> Result<Vec<ModeIndex>> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        for l in 1..=mode_count(n, m)? {
            out.push(ModeIndex { n, m, l });
        }
    }
    Ok(out)
}
