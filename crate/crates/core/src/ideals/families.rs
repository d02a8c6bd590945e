//! Payload specifications for the parametric ideal families: weight
//! functions for summable ideals, block partitions for lacunary and
//! generalized density ideals, and per-block submeasures.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rat_string, rat_vec, Rat};
use crate::setexpr::SetExpr;

/// Nonnegative weight `f : ω → [0, ∞)` given by a named rule. A finite table
/// may override the head; the tail rule takes over from the table length on,
/// evaluated at the global index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum WeightSpec {
    #[serde(rename = "harmonic")]
    Harmonic,
    #[serde(rename = "constant")]
    Constant {
        #[serde(with = "rat_string")]
        c: Rat,
    },
    #[serde(rename = "table")]
    Table {
        #[serde(with = "rat_vec")]
        values: Vec<Rat>,
        tail: Box<WeightTail>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum WeightTail {
    #[serde(rename = "harmonic")]
    Harmonic,
    #[serde(rename = "constant")]
    Constant {
        #[serde(with = "rat_string")]
        c: Rat,
    },
    #[serde(rename = "zeroAfter")]
    ZeroAfter,
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Harmonic => Ok(()),
            WeightSpec::Constant { c } => {
                if c.is_negative() {
                    Err(Error::InvalidSpec("weight constant must be nonnegative".into()))
                } else {
                    Ok(())
                }
            }
            WeightSpec::Table { values, tail } => {
                if values.iter().any(Rat::is_negative) {
                    return Err(Error::InvalidSpec("weight table values must be nonnegative".into()));
                }
                if let WeightTail::Constant { c } = &**tail {
                    if c.is_negative() {
                        return Err(Error::InvalidSpec(
                            "weight tail constant must be nonnegative".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, n: u64) -> Rat {
        match self {
            WeightSpec::Harmonic => Rat::new(1.into(), (n + 1).into()),
            WeightSpec::Constant { c } => c.clone(),
            WeightSpec::Table { values, tail } => {
                if let Some(v) = values.get(n as usize) {
                    v.clone()
                } else {
                    match &**tail {
                        WeightTail::Harmonic => Rat::new(1.into(), (n + 1).into()),
                        WeightTail::Constant { c } => c.clone(),
                        WeightTail::ZeroAfter => Rat::zero(),
                    }
                }
            }
        }
    }

    /// Whether Σ f(n) = ∞, decided symbolically from the named rule. Required
    /// for use as a summable-ideal weight.
    pub fn sum_diverges(&self) -> bool {
        match self {
            WeightSpec::Harmonic => true,
            WeightSpec::Constant { c } => c.is_positive(),
            WeightSpec::Table { tail, .. } => match &**tail {
                WeightTail::Harmonic => true,
                WeightTail::Constant { c } => c.is_positive(),
                WeightTail::ZeroAfter => false,
            },
        }
    }

    /// limsup f(n), exact from the rule.
    pub fn limsup(&self) -> Rat {
        match self {
            WeightSpec::Harmonic => Rat::zero(),
            WeightSpec::Constant { c } => c.clone(),
            WeightSpec::Table { tail, .. } => match &**tail {
                WeightTail::Harmonic | WeightTail::ZeroAfter => Rat::zero(),
                WeightTail::Constant { c } => c.clone(),
            },
        }
    }

    /// Length of the table prefix; 0 for plain rules.
    pub fn table_len(&self) -> u64 {
        match self {
            WeightSpec::Table { values, .. } => values.len() as u64,
            _ => 0,
        }
    }

    /// `{n : f(n) ≥ t}` as a set expression, exact for eventually-constant
    /// rules (where it is the useful nontall witness).
    pub fn level_set_geq(&self, t: &Rat) -> SetExpr {
        match self {
            WeightSpec::Harmonic => {
                // 1/(n+1) ≥ t fails from some point on; finite head only.
                if t.is_positive() {
                    let hi = t.recip().floor().to_integer();
                    match num::ToPrimitive::to_u64(&hi) {
                        Some(h) if h >= 1 => SetExpr::Range { lo: 0, hi: h - 1 },
                        _ => SetExpr::empty(),
                    }
                } else {
                    SetExpr::omega()
                }
            }
            WeightSpec::Constant { c } => {
                if c >= t {
                    SetExpr::ap(0, 1)
                } else {
                    SetExpr::empty()
                }
            }
            WeightSpec::Table { values, tail } => {
                let hits: Vec<u64> = values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| *v >= t)
                    .map(|(n, _)| n as u64)
                    .collect();
                let len = values.len() as u64;
                match &**tail {
                    WeightTail::Constant { c } if c >= t => {
                        SetExpr::union2(SetExpr::finite(hits), SetExpr::ap(len, 1))
                    }
                    WeightTail::Harmonic => {
                        let tail_part = WeightSpec::Harmonic.level_set_geq(t);
                        let clipped = SetExpr::inter2(
                            tail_part,
                            SetExpr::complement(SetExpr::finite((0..len).collect())),
                        );
                        SetExpr::union2(SetExpr::finite(hits), clipped)
                    }
                    _ => SetExpr::finite(hits),
                }
            }
        }
    }
}

/// Block lengths `|I_n| ≥ 1` generating the consecutive interval partition
/// I_0, I_1, ... of ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum LengthRule {
    #[serde(rename = "constant")]
    Constant { l: u64 },
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "table")]
    Table { values: Vec<u64>, tail: Box<LengthRule> },
}

impl LengthRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            LengthRule::Constant { l } => {
                if *l == 0 {
                    Err(Error::InvalidSpec("block lengths must be ≥ 1".into()))
                } else {
                    Ok(())
                }
            }
            LengthRule::Linear => Ok(()),
            LengthRule::Table { values, tail } => {
                if values.iter().any(|&l| l == 0) {
                    return Err(Error::InvalidSpec("block lengths must be ≥ 1".into()));
                }
                match &**tail {
                    LengthRule::Table { .. } => Err(Error::InvalidSpec(
                        "length table tail must be a plain rule".into(),
                    )),
                    other => other.validate(),
                }
            }
        }
    }

    /// |I_n|, with table tails evaluated at the global block index.
    pub fn len(&self, n: u64) -> u64 {
        match self {
            LengthRule::Constant { l } => *l,
            LengthRule::Linear => n + 1,
            LengthRule::Table { values, tail } => values
                .get(n as usize)
                .copied()
                .unwrap_or_else(|| tail.len(n)),
        }
    }

    /// First element of I_n (closed form plus a short table prefix sum).
    pub fn start(&self, n: u64) -> u64 {
        match self {
            LengthRule::Constant { l } => n * l,
            LengthRule::Linear => n * (n + 1) / 2,
            LengthRule::Table { values, tail } => {
                let tl = values.len() as u64;
                let head: u64 = values.iter().take(n as usize).sum();
                if n <= tl {
                    head
                } else {
                    head + tail.start(n) - tail.start(tl)
                }
            }
        }
    }

    /// Inclusive interval of block n.
    pub fn interval(&self, n: u64) -> (u64, u64) {
        let s = self.start(n);
        (s, s + self.len(n) - 1)
    }

    /// Block index containing k.
    pub fn block_of(&self, k: u64) -> u64 {
        match self {
            LengthRule::Constant { l } => k / l,
            LengthRule::Linear => {
                // Invert the triangular numbers.
                let n = (((8 * k + 1).isqrt()).saturating_sub(1)) / 2;
                // Guard rounding: start(n) ≤ k < start(n+1).
                let mut n = n;
                while self.start(n + 1) <= k {
                    n += 1;
                }
                while n > 0 && self.start(n) > k {
                    n -= 1;
                }
                n
            }
            LengthRule::Table { values, tail } => {
                let tl = values.len() as u64;
                let head = self.start(tl);
                if k < head {
                    let mut n = 0;
                    while self.start(n + 1) <= k {
                        n += 1;
                    }
                    n
                } else {
                    // Shift into the tail's own coordinates.
                    let offset = head - tail.start(tl);
                    let mut n = tail.block_of(k - offset).max(tl);
                    while self.start(n + 1) <= k {
                        n += 1;
                    }
                    while n > tl && self.start(n) > k {
                        n -= 1;
                    }
                    n
                }
            }
        }
    }

    pub fn unbounded(&self) -> bool {
        match self {
            LengthRule::Constant { .. } => false,
            LengthRule::Linear => true,
            LengthRule::Table { tail, .. } => tail.unbounded(),
        }
    }

    /// Tail length for eventually-constant rules.
    pub fn eventual_constant(&self) -> Option<u64> {
        match self {
            LengthRule::Constant { l } => Some(*l),
            LengthRule::Linear => None,
            LengthRule::Table { tail, .. } => tail.eventual_constant(),
        }
    }

    pub fn table_len(&self) -> u64 {
        match self {
            LengthRule::Table { values, .. } => values.len() as u64,
            _ => 0,
        }
    }

    /// Smallest block index from which every later block has length ≥ min.
    pub fn first_block_all_geq(&self, min: u64) -> Option<u64> {
        match self {
            LengthRule::Constant { l } => (*l >= min).then_some(0),
            LengthRule::Linear => Some(min.saturating_sub(1)),
            LengthRule::Table { values, tail } => {
                let from_tail = match &**tail {
                    LengthRule::Constant { l } => (*l >= min).then_some(values.len() as u64)?,
                    LengthRule::Linear => (values.len() as u64).max(min.saturating_sub(1)),
                    LengthRule::Table { .. } => return None,
                };
                let last_bad = values
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, &l)| l < min)
                    .map(|(i, _)| i as u64 + 1)
                    .unwrap_or(0);
                Some(from_tail.max(last_bad))
            }
        }
    }
}

/// Per-block submeasure kind over a block partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubmeasureKind {
    #[serde(rename = "normalizedCounting")]
    NormalizedCounting,
    #[serde(rename = "weightedSum")]
    WeightedSum { weights: WeightSpec },
    #[serde(rename = "weightedMax")]
    WeightedMax { weights: WeightSpec },
}

/// A generalized density specification: blocks plus a submeasure evaluated
/// on each block. φ_n(S) depends only on S ∩ I_n.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSubmeasure<'a> {
    pub blocks: &'a LengthRule,
    pub kind: &'a SubmeasureKind,
}

impl<'a> BlockSubmeasure<'a> {
    pub fn phi(&self, n: u64, s: &SetExpr) -> Rat {
        let (a, b) = self.blocks.interval(n);
        match self.kind {
            SubmeasureKind::NormalizedCounting => {
                let count = (a..=b).filter(|&k| s.indicator(k)).count() as u64;
                Rat::new(count.into(), self.blocks.len(n).into())
            }
            SubmeasureKind::WeightedSum { weights } => (a..=b)
                .filter(|&k| s.indicator(k))
                .map(|k| weights.eval(k))
                .fold(Rat::zero(), |acc, w| acc + w),
            SubmeasureKind::WeightedMax { weights } => (a..=b)
                .filter(|&k| s.indicator(k))
                .map(|k| weights.eval(k))
                .fold(Rat::zero(), |acc, w| acc.max(w)),
        }
    }

    /// max_k φ_n({k}) over block n, exact.
    pub fn singleton_sup(&self, n: u64) -> Rat {
        match self.kind {
            SubmeasureKind::NormalizedCounting => {
                Rat::new(1.into(), self.blocks.len(n).into())
            }
            SubmeasureKind::WeightedSum { weights } | SubmeasureKind::WeightedMax { weights } => {
                let (a, b) = self.blocks.interval(n);
                match weights {
                    WeightSpec::Harmonic => Rat::new(1.into(), (a + 1).into()),
                    WeightSpec::Constant { c } => c.clone(),
                    WeightSpec::Table { .. } => (a..=b)
                        .map(|k| weights.eval(k))
                        .fold(Rat::zero(), |acc, w| acc.max(w)),
                }
            }
        }
    }

    /// limsup_n max_k φ_n({k}), decided symbolically; the tallness criterion.
    pub fn singleton_limsup(&self) -> Rat {
        match self.kind {
            SubmeasureKind::NormalizedCounting => match self.blocks.eventual_constant() {
                Some(l) => Rat::new(1.into(), l.into()),
                None => Rat::zero(),
            },
            SubmeasureKind::WeightedSum { weights } | SubmeasureKind::WeightedMax { weights } => {
                weights.limsup()
            }
        }
    }

    /// Properness: limsup_n φ_n(I_n) > 0. Vanishing block mass would put ω in
    /// the ideal.
    pub fn check_proper(&self) -> Result<()> {
        let fail = |why: &str| {
            Err(Error::InvalidSpec(format!(
                "improper generalized density ideal: {why}"
            )))
        };
        match self.kind {
            SubmeasureKind::NormalizedCounting => Ok(()),
            SubmeasureKind::WeightedSum { weights } => match weights.limsup() {
                l if l.is_positive() => Ok(()),
                _ => fail("block masses Σ_{k∈I_n} w(k) vanish (weights have vanishing tail)"),
            },
            SubmeasureKind::WeightedMax { weights } => match weights.limsup() {
                l if l.is_positive() => Ok(()),
                _ => fail("block maxima of the weights vanish"),
            },
        }
    }

    /// One singleton per block with φ ≥ t, as a closed-form set expression.
    /// Only meaningful when the singleton limsup is ≥ t (nontall case).
    pub fn singleton_witness(&self, t: &Rat) -> Option<SetExpr> {
        let step = self.blocks.eventual_constant();
        let wlen = match self.kind {
            SubmeasureKind::NormalizedCounting => 0,
            SubmeasureKind::WeightedSum { weights } | SubmeasureKind::WeightedMax { weights } => {
                weights.table_len()
            }
        };
        match self.kind {
            SubmeasureKind::NormalizedCounting => {
                let l = step?;
                if Rat::new(1.into(), l.into()) < *t {
                    return None;
                }
                // Block starts from the first tail block on.
                let b0 = self.blocks.table_len();
                Some(SetExpr::ap(self.blocks.start(b0), l))
            }
            SubmeasureKind::WeightedSum { weights } | SubmeasureKind::WeightedMax { weights } => {
                let l = step?;
                if weights.limsup() < *t {
                    return None;
                }
                // First tail block whose start clears the weight table, so
                // every chosen singleton carries the tail weight.
                let mut b = self.blocks.table_len();
                while self.blocks.start(b) < wlen {
                    b += 1;
                }
                Some(SetExpr::ap(self.blocks.start(b), l))
            }
        }
    }
}

/// Convenience: the total weight of `{k ∈ s : k ≤ end}` under `f`, exact.
pub fn weight_sum_prefix(f: &WeightSpec, s: &SetExpr, end: u64) -> Rat {
    s.enumerate_prefix(end)
        .into_iter()
        .map(|k| f.eval(k))
        .fold(Rat::zero(), |acc, w| acc + w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_u64, ratio};

    #[test]
    fn weight_rules() {
        assert_eq!(WeightSpec::Harmonic.eval(3), ratio(1, 4));
        let t = WeightSpec::Table {
            values: vec![rat_u64(5), ratio(1, 2)],
            tail: Box::new(WeightTail::Constant { c: rat_u64(1) }),
        };
        assert_eq!(t.eval(0), rat_u64(5));
        assert_eq!(t.eval(1), ratio(1, 2));
        assert_eq!(t.eval(7), rat_u64(1));
        assert!(t.sum_diverges());
        assert_eq!(t.limsup(), rat_u64(1));
        let z = WeightSpec::Table {
            values: vec![rat_u64(1)],
            tail: Box::new(WeightTail::ZeroAfter),
        };
        assert!(!z.sum_diverges());
    }

    #[test]
    fn weight_level_sets() {
        let t = WeightSpec::Table {
            values: vec![rat_u64(5), ratio(1, 4)],
            tail: Box::new(WeightTail::Constant { c: rat_u64(1) }),
        };
        let lv = t.level_set_geq(&ratio(1, 2));
        assert!(lv.indicator(0));
        assert!(!lv.indicator(1));
        assert!(lv.indicator(2));
        assert!(lv.indicator(100));
        assert_eq!(
            WeightSpec::Harmonic.level_set_geq(&ratio(1, 3)),
            SetExpr::Range { lo: 0, hi: 2 }
        );
    }

    #[test]
    fn block_geometry_linear() {
        let r = LengthRule::Linear;
        assert_eq!(r.interval(0), (0, 0));
        assert_eq!(r.interval(1), (1, 2));
        assert_eq!(r.interval(2), (3, 5));
        assert_eq!(r.interval(3), (6, 9));
        for k in 0..500u64 {
            let b = r.block_of(k);
            let (a, z) = r.interval(b);
            assert!((a..=z).contains(&k), "k={k} landed in block {b} = [{a},{z}]");
        }
    }

    #[test]
    fn block_geometry_table() {
        let r = LengthRule::Table {
            values: vec![3, 1, 4],
            tail: Box::new(LengthRule::Constant { l: 2 }),
        };
        r.validate().unwrap();
        assert_eq!(r.interval(0), (0, 2));
        assert_eq!(r.interval(1), (3, 3));
        assert_eq!(r.interval(2), (4, 7));
        assert_eq!(r.interval(3), (8, 9));
        assert_eq!(r.interval(4), (10, 11));
        for k in 0..300u64 {
            let b = r.block_of(k);
            let (a, z) = r.interval(b);
            assert!((a..=z).contains(&k), "k={k} landed in block {b} = [{a},{z}]");
        }
        assert_eq!(r.first_block_all_geq(2), Some(2));
        assert_eq!(r.first_block_all_geq(3), None);
        assert_eq!(LengthRule::Linear.first_block_all_geq(8), Some(7));
    }

    #[test]
    fn submeasure_values() {
        let blocks = LengthRule::Linear;
        let nc = SubmeasureKind::NormalizedCounting;
        let sm = BlockSubmeasure { blocks: &blocks, kind: &nc };
        assert_eq!(sm.phi(2, &SetExpr::omega()), rat_u64(1));
        // block 2 = [3, 5]; even members {4} → 1/3
        assert_eq!(sm.phi(2, &SetExpr::ap(0, 2)), ratio(1, 3));
        assert_eq!(sm.singleton_sup(3), ratio(1, 4));
        assert_eq!(sm.singleton_limsup(), Rat::zero());
        sm.check_proper().unwrap();
    }

    #[test]
    fn submeasure_properness() {
        let blocks = LengthRule::Constant { l: 4 };
        let bad = SubmeasureKind::WeightedSum {
            weights: WeightSpec::Harmonic,
        };
        let sm = BlockSubmeasure { blocks: &blocks, kind: &bad };
        assert!(sm.check_proper().is_err());
        let good = SubmeasureKind::WeightedSum {
            weights: WeightSpec::Constant { c: rat_u64(1) },
        };
        let sm = BlockSubmeasure { blocks: &blocks, kind: &good };
        sm.check_proper().unwrap();
        assert_eq!(sm.singleton_limsup(), rat_u64(1));
    }

    #[test]
    fn singleton_witness_is_blockwise() {
        let blocks = LengthRule::Constant { l: 3 };
        let nc = SubmeasureKind::NormalizedCounting;
        let sm = BlockSubmeasure { blocks: &blocks, kind: &nc };
        let w = sm.singleton_witness(&ratio(1, 6)).unwrap();
        assert_eq!(w, SetExpr::ap(0, 3));
    }
}
