//! Horizon parameters: the finite truncation applied to every limit.

use crate::error::{Error, Result};
use crate::rational::{ratio, Rat};
use num::Zero;

/// Finite-horizon knobs shared by all estimating operations.
///
/// `n` is the index horizon (how far into ω evaluation reaches), `rows` the
/// trace length, `epsilon` the decision tolerance, and `recurrence` the
/// fraction of sampled rows a level must recur in before it counts as
/// persistent.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonParams {
    pub n: u64,
    pub rows: usize,
    pub epsilon: Rat,
    pub recurrence: Rat,
}

impl Default for HorizonParams {
    fn default() -> Self {
        HorizonParams {
            n: 100_000,
            rows: 1_000,
            epsilon: ratio(1, 100),
            recurrence: ratio(1, 10),
        }
    }
}

impl HorizonParams {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 {
            return Err(Error::InvalidSpec("rows must be at least 1".into()));
        }
        if self.n < self.rows as u64 {
            return Err(Error::InvalidSpec(format!(
                "index horizon {} smaller than rows {}",
                self.n, self.rows
            )));
        }
        if self.epsilon <= Rat::zero() {
            return Err(Error::InvalidSpec("epsilon must be positive".into()));
        }
        if self.recurrence <= Rat::zero() || self.recurrence > ratio(1, 1) {
            return Err(Error::InvalidSpec("recurrence must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// `rows` evenly spread sample points over `[0, n]`, strictly increasing,
    /// ending at the horizon. Used for density traces at sampled horizons.
    pub fn sample_points(&self) -> Vec<u64> {
        let rows = self.rows as u64;
        let mut pts: Vec<u64> = (1..=rows).map(|j| j * self.n / rows).collect();
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = HorizonParams::default();
        p.validate().unwrap();
        let pts = p.sample_points();
        assert_eq!(*pts.last().unwrap(), p.n);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = HorizonParams::default();
        p.epsilon = Rat::zero();
        assert!(p.validate().is_err());
        let mut p = HorizonParams::default();
        p.rows = 0;
        assert!(p.validate().is_err());
        let mut p = HorizonParams::default();
        p.n = 10;
        assert!(p.validate().is_err());
    }
}
