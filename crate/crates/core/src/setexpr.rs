//! Symbolic subsets of ω with exact membership, prefix enumeration, and
//! counting.
//!
//! Every variant denotes a concrete subset of the nonnegative integers and
//! `indicator` is total: finite lists, inclusive ranges, arithmetic
//! progressions `{a + d·n}`, the built-in sparse rules (squares, powers of
//! two, factorials), dyadic valuation levels `{n ≥ 1 : ν₂(n) = k}` (with 0
//! at level 0), and boolean combinations. Counting uses closed forms
//! wherever the variant admits one and falls back to a brute-force sweep for
//! unions and intersections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::rational::{pow2, rat_u64, Rat};
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SparseRule {
    Squares,
    PowersOfTwo,
    Factorials,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SetExpr {
    #[serde(rename = "finite")]
    Finite { elems: Vec<u64> },
    #[serde(rename = "range")]
    Range { lo: u64, hi: u64 },
    #[serde(rename = "ap")]
    ArithProg { a: u64, d: u64 },
    #[serde(rename = "sparse")]
    Sparse { rule: SparseRule },
    #[serde(rename = "nu2")]
    Nu2Level { k: u32 },
    #[serde(rename = "union")]
    Union { args: Vec<SetExpr> },
    #[serde(rename = "intersect")]
    Intersect { args: Vec<SetExpr> },
    #[serde(rename = "complement")]
    Complement { arg: Box<SetExpr> },
}

/// 2-adic valuation with the convention ν₂(0) = 0.
pub fn nu2(n: u64) -> u32 {
    if n == 0 {
        0
    } else {
        n.trailing_zeros()
    }
}

fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Factorials representable in u64: 0! = 1! = 1 up to 20!.
const FACTORIALS: [u64; 20] = [
    1,
    2,
    6,
    24,
    120,
    720,
    5_040,
    40_320,
    362_880,
    3_628_800,
    39_916_800,
    479_001_600,
    6_227_020_800,
    87_178_291_200,
    1_307_674_368_000,
    20_922_789_888_000,
    355_687_428_096_000,
    6_402_373_705_728_000,
    121_645_100_408_832_000,
    2_432_902_008_176_640_000,
];

impl SparseRule {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SparseRule::Squares => is_square(n),
            SparseRule::PowersOfTwo => n.is_power_of_two(),
            SparseRule::Factorials => FACTORIALS.binary_search(&n).is_ok(),
        }
    }

    /// |{m ≤ end : m in rule}| in closed form.
    pub fn count_upto(&self, end: u64) -> u64 {
        match self {
            SparseRule::Squares => end.isqrt() + 1,
            SparseRule::PowersOfTwo => {
                if end == 0 {
                    0
                } else {
                    end.ilog2() as u64 + 1
                }
            }
            SparseRule::Factorials => FACTORIALS.iter().take_while(|&&f| f <= end).count() as u64,
        }
    }

    /// Smallest member ≥ from, if representable.
    fn next_member(&self, from: u64) -> Option<u64> {
        match self {
            SparseRule::Squares => {
                let r = from.isqrt();
                if r * r >= from {
                    Some(r * r)
                } else {
                    (r + 1).checked_mul(r + 1)
                }
            }
            SparseRule::PowersOfTwo => {
                if from <= 1 {
                    Some(1)
                } else {
                    from.checked_next_power_of_two()
                }
            }
            SparseRule::Factorials => FACTORIALS.iter().find(|&&f| f >= from).copied(),
        }
    }
}

impl SetExpr {
    pub fn empty() -> Self {
        SetExpr::Finite { elems: vec![] }
    }

    /// ω as a set expression (complement of the empty set).
    pub fn omega() -> Self {
        SetExpr::Complement {
            arg: Box::new(SetExpr::empty()),
        }
    }

    /// Finite set; sorts and deduplicates the payload.
    pub fn finite(mut elems: Vec<u64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        SetExpr::Finite { elems }
    }

    pub fn ap(a: u64, d: u64) -> Self {
        SetExpr::ArithProg { a, d }
    }

    pub fn sparse(rule: SparseRule) -> Self {
        SetExpr::Sparse { rule }
    }

    pub fn complement(arg: SetExpr) -> Self {
        SetExpr::Complement { arg: Box::new(arg) }
    }

    pub fn is_empty_expr(&self) -> bool {
        matches!(self, SetExpr::Finite { elems } if elems.is_empty())
    }

    pub fn is_omega_expr(&self) -> bool {
        matches!(self, SetExpr::Complement { arg } if arg.is_empty_expr())
    }

    /// Intersection with ∅/ω absorption, keeping exceedance sets readable.
    pub fn inter2(a: SetExpr, b: SetExpr) -> SetExpr {
        if a.is_omega_expr() {
            return b;
        }
        if b.is_omega_expr() {
            return a;
        }
        if a.is_empty_expr() || b.is_empty_expr() {
            return SetExpr::empty();
        }
        SetExpr::Intersect { args: vec![a, b] }
    }

    /// Union with ∅/ω absorption.
    pub fn union2(a: SetExpr, b: SetExpr) -> SetExpr {
        if a.is_empty_expr() {
            return b;
        }
        if b.is_empty_expr() {
            return a;
        }
        if a.is_omega_expr() || b.is_omega_expr() {
            return SetExpr::omega();
        }
        SetExpr::Union { args: vec![a, b] }
    }

    /// Structural validation: finite payloads sorted and duplicate-free,
    /// progressions with step ≥ 1, ranges nonempty.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetExpr::Finite { elems } => {
                if elems.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidSpec(
                        "finite payload must be sorted and duplicate-free".into(),
                    ));
                }
                Ok(())
            }
            SetExpr::Range { lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidSpec(format!("empty range {lo}..{hi}")));
                }
                Ok(())
            }
            SetExpr::ArithProg { d, .. } => {
                if *d == 0 {
                    return Err(Error::InvalidSpec("progression step must be ≥ 1".into()));
                }
                Ok(())
            }
            SetExpr::Sparse { .. } | SetExpr::Nu2Level { .. } => Ok(()),
            SetExpr::Union { args } | SetExpr::Intersect { args } => {
                args.iter().try_for_each(SetExpr::validate)
            }
            SetExpr::Complement { arg } => arg.validate(),
        }
    }

    /// Total membership test.
    pub fn indicator(&self, n: u64) -> bool {
        match self {
            SetExpr::Finite { elems } => elems.binary_search(&n).is_ok(),
            SetExpr::Range { lo, hi } => (*lo..=*hi).contains(&n),
            SetExpr::ArithProg { a, d } => n >= *a && (n - a) % d == 0,
            SetExpr::Sparse { rule } => rule.contains(n),
            SetExpr::Nu2Level { k } => {
                if n == 0 {
                    *k == 0
                } else {
                    n.trailing_zeros() == *k
                }
            }
            SetExpr::Union { args } => args.iter().any(|s| s.indicator(n)),
            SetExpr::Intersect { args } => args.iter().all(|s| s.indicator(n)),
            SetExpr::Complement { arg } => !arg.indicator(n),
        }
    }

    /// All members ≤ end, sorted.
    pub fn enumerate_prefix(&self, end: u64) -> Vec<u64> {
        match self {
            SetExpr::Finite { elems } => elems.iter().copied().take_while(|&x| x <= end).collect(),
            SetExpr::Range { lo, hi } => (*lo..=(*hi).min(end)).collect(),
            SetExpr::ArithProg { a, d } => (*a..=end).step_by(*d as usize).collect(),
            SetExpr::Sparse { rule } => {
                let mut out = Vec::new();
                let mut from = 0u64;
                while let Some(m) = rule.next_member(from) {
                    if m > end {
                        break;
                    }
                    out.push(m);
                    match m.checked_add(1) {
                        Some(next) => from = next,
                        None => break,
                    }
                }
                out
            }
            SetExpr::Nu2Level { k } => {
                let mut out = Vec::new();
                if *k == 0 {
                    out.push(0);
                }
                if *k < 64 {
                    let base = 1u64 << k;
                    let mut m = base;
                    while m <= end {
                        out.push(m);
                        match m.checked_add(base << 1) {
                            Some(next) => m = next,
                            None => break,
                        }
                    }
                }
                out
            }
            _ => (0..=end).filter(|&n| self.indicator(n)).collect(),
        }
    }

    /// |{n ≤ end : n ∈ self}|; closed form for every primitive variant, a
    /// parallelizable sweep for unions/intersections.
    pub fn count_prefix(&self, end: u64) -> u64 {
        match self {
            SetExpr::Finite { elems } => elems.partition_point(|&x| x <= end) as u64,
            SetExpr::Range { lo, hi } => {
                if *lo > end {
                    0
                } else {
                    (*hi).min(end) - lo + 1
                }
            }
            SetExpr::ArithProg { a, d } => {
                if *a > end {
                    0
                } else {
                    (end - a) / d + 1
                }
            }
            SetExpr::Sparse { rule } => rule.count_upto(end),
            SetExpr::Nu2Level { k } => {
                // Odd multiples of 2^k up to end, plus 0 at level 0.
                let zero = u64::from(*k == 0);
                if *k >= 64 {
                    return zero;
                }
                let q = end >> k;
                zero + (q + 1) / 2
            }
            SetExpr::Complement { arg } => end + 1 - arg.count_prefix(end),
            SetExpr::Union { .. } | SetExpr::Intersect { .. } => {
                exec::count_range(0, end, |n| self.indicator(n))
            }
        }
    }

    /// Exact prefix density |S ∩ [0, n]| / (n + 1).
    pub fn prefix_density(&self, n: u64) -> Rat {
        Rat::new(self.count_prefix(n).into(), (n + 1).into())
    }

    /// Syntactic cardinality: `Some(true)` certified finite, `Some(false)`
    /// certified infinite, `None` not decided structurally.
    pub fn certified_finite(&self) -> Option<bool> {
        match self {
            SetExpr::Finite { .. } | SetExpr::Range { .. } => Some(true),
            SetExpr::ArithProg { .. } | SetExpr::Sparse { .. } | SetExpr::Nu2Level { .. } => {
                Some(false)
            }
            SetExpr::Union { args } => {
                let flags: Vec<_> = args.iter().map(SetExpr::certified_finite).collect();
                if flags.iter().any(|f| *f == Some(false)) {
                    Some(false)
                } else if flags.iter().all(|f| *f == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
            SetExpr::Intersect { args } => {
                if args.iter().any(|s| s.certified_finite() == Some(true)) {
                    Some(true)
                } else if args.iter().all(|s| s.certified_cofinite() == Some(true)) {
                    // Intersection of cofinite sets is cofinite.
                    Some(false)
                } else {
                    None
                }
            }
            SetExpr::Complement { arg } => match arg.certified_cofinite() {
                Some(true) => Some(true),
                _ => match arg.certified_finite() {
                    Some(true) => Some(false),
                    _ => None,
                },
            },
        }
    }

    /// Syntactic cofiniteness: `Some(true)` certified cofinite, `Some(false)`
    /// certified co-infinite, `None` undecided.
    pub fn certified_cofinite(&self) -> Option<bool> {
        match self {
            SetExpr::Finite { .. } | SetExpr::Range { .. } => Some(false),
            SetExpr::ArithProg { d, .. } => Some(*d == 1),
            SetExpr::Sparse { .. } => Some(false),
            SetExpr::Nu2Level { .. } => Some(false),
            SetExpr::Union { args } => {
                if args.iter().any(|s| s.certified_cofinite() == Some(true)) {
                    Some(true)
                } else if args.iter().all(|s| s.certified_finite() == Some(true)) {
                    Some(false)
                } else {
                    None
                }
            }
            SetExpr::Intersect { args } => {
                let flags: Vec<_> = args.iter().map(SetExpr::certified_cofinite).collect();
                if flags.iter().all(|f| *f == Some(true)) {
                    Some(true)
                } else if args.iter().any(|s| s.certified_finite() == Some(true)) {
                    Some(false)
                } else {
                    None
                }
            }
            SetExpr::Complement { arg } => match arg.certified_finite() {
                Some(true) => Some(true),
                Some(false) => {
                    // Complement of a certified-infinite set: cofinite only if
                    // the inner set is finite, which it is not.
                    Some(false)
                }
                None => None,
            },
        }
    }

    /// Closed-form natural density when the structure admits one.
    pub fn natural_density(&self) -> Option<Rat> {
        if self.certified_finite() == Some(true) {
            return Some(Rat::zero());
        }
        match self {
            SetExpr::ArithProg { d, .. } => Some(Rat::new(num::BigInt::one(), (*d).into())),
            SetExpr::Sparse { .. } => Some(Rat::zero()),
            SetExpr::Nu2Level { k } => {
                // Odd multiples of 2^k have density 2^-(k+1).
                Some(pow2(-(i64::from(*k) + 1)))
            }
            SetExpr::Complement { arg } => {
                arg.natural_density().map(|d| rat_u64(1) - d)
            }
            _ => None,
        }
    }

    /// Whether Σ_{n ∈ self} 1/(n+1) converges: `Some(true)` convergent,
    /// `Some(false)` divergent, `None` undecided. Exact on the lattice of
    /// built-in variants.
    pub fn harmonic_sum_converges(&self) -> Option<bool> {
        if self.certified_finite() == Some(true) {
            return Some(true);
        }
        match self {
            SetExpr::ArithProg { .. } => Some(false),
            SetExpr::Sparse { .. } => Some(true),
            SetExpr::Nu2Level { .. } => Some(false),
            SetExpr::Union { args } => {
                let flags: Vec<_> = args.iter().map(SetExpr::harmonic_sum_converges).collect();
                if flags.iter().any(|f| *f == Some(false)) {
                    Some(false)
                } else if flags.iter().all(|f| *f == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
            SetExpr::Intersect { args } => {
                if args.iter().any(|s| s.harmonic_sum_converges() == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
            SetExpr::Complement { arg } => match arg.harmonic_sum_converges() {
                Some(true) => Some(false),
                _ => None,
            },
            SetExpr::Finite { .. } | SetExpr::Range { .. } => Some(true),
        }
    }

    /// Some syntactically contained infinite progression, if one is visible.
    /// Used for positive-block-density arguments.
    pub fn contains_progression(&self) -> Option<(u64, u64)> {
        match self {
            SetExpr::ArithProg { a, d } => Some((*a, *d)),
            SetExpr::Union { args } => args.iter().find_map(SetExpr::contains_progression),
            SetExpr::Complement { arg } => match &**arg {
                // ω \ {a + d·n} contains the shifted progression for d ≥ 2.
                SetExpr::ArithProg { a, d } if *d >= 2 => Some((a + 1, *d)),
                SetExpr::Finite { elems } => {
                    let start = elems.last().map_or(0, |m| m + 1);
                    Some((start, 1))
                }
                SetExpr::Range { hi, .. } => Some((hi + 1, 1)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Smallest member ≥ `from`. Closed form for primitive variants; bounded
    /// upward scan (guarded by `scan_limit` steps) for compounds.
    pub fn next_member(&self, from: u64, scan_limit: u64) -> Option<u64> {
        match self {
            SetExpr::Finite { elems } => {
                let i = elems.partition_point(|&x| x < from);
                elems.get(i).copied()
            }
            SetExpr::Range { lo, hi } => {
                let c = from.max(*lo);
                (c <= *hi).then_some(c)
            }
            SetExpr::ArithProg { a, d } => {
                if from <= *a {
                    Some(*a)
                } else {
                    let steps = (from - a).div_ceil(*d);
                    a.checked_add(steps.checked_mul(*d)?)
                }
            }
            SetExpr::Sparse { rule } => rule.next_member(from),
            SetExpr::Nu2Level { k } => {
                if *k == 0 && from == 0 {
                    return Some(0);
                }
                if *k >= 64 {
                    return None;
                }
                let base = 1u64 << k;
                // Smallest odd multiple of 2^k that is ≥ from.
                let q = from.div_ceil(base).max(1);
                let q = if q % 2 == 0 { q + 1 } else { q };
                q.checked_mul(base)
            }
            SetExpr::Union { args } => args
                .iter()
                .filter_map(|s| s.next_member(from, scan_limit))
                .min(),
            _ => {
                let mut n = from;
                for _ in 0..scan_limit {
                    if self.indicator(n) {
                        return Some(n);
                    }
                    n = n.checked_add(1)?;
                }
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn evens() -> SetExpr {
        SetExpr::ap(0, 2)
    }

    #[test]
    fn indicator_examples() {
        assert!(!evens().indicator(7));
        assert!(SetExpr::Nu2Level { k: 0 }.indicator(5));
        assert!(!SetExpr::complement(SetExpr::finite(vec![0, 1])).indicator(1));
        assert!(SetExpr::Nu2Level { k: 0 }.indicator(0));
        assert!(!SetExpr::Nu2Level { k: 3 }.indicator(0));
        assert!(SetExpr::Nu2Level { k: 3 }.indicator(8));
        assert!(SetExpr::Nu2Level { k: 3 }.indicator(24));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            SetExpr::sparse(SparseRule::Squares).enumerate_prefix(10),
            vec![0, 1, 4, 9]
        );
        assert_eq!(SetExpr::ap(1, 2).enumerate_prefix(6), vec![1, 3, 5]);
        let u = SetExpr::Union {
            args: vec![SetExpr::finite(vec![2]), SetExpr::ap(0, 4)],
        };
        // Oracle: brute-force indicator over 0..=8.
        let brute: Vec<u64> = (0..=8).filter(|&n| u.indicator(n)).collect();
        assert_eq!(u.enumerate_prefix(8), brute);
        assert_eq!(brute, vec![0, 2, 4, 8]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(evens().count_prefix(99), 50);
        assert_eq!(SetExpr::empty().count_prefix(1000), 0);
        assert_eq!(SetExpr::sparse(SparseRule::PowersOfTwo).count_prefix(64), 7);
        assert_eq!(SetExpr::sparse(SparseRule::Factorials).count_prefix(24), 4);
        assert_eq!(SetExpr::Nu2Level { k: 0 }.count_prefix(5), 4); // {0,1,3,5}
        assert_eq!(SetExpr::Nu2Level { k: 1 }.count_prefix(10), 3); // {2,6,10}
    }

    #[test]
    fn count_matches_enumeration_on_compounds() {
        let exprs = vec![
            SetExpr::Union {
                args: vec![evens(), SetExpr::sparse(SparseRule::Squares)],
            },
            SetExpr::Intersect {
                args: vec![evens(), SetExpr::Nu2Level { k: 1 }],
            },
            SetExpr::complement(SetExpr::ap(0, 3)),
        ];
        for s in &exprs {
            for end in [0u64, 1, 17, 256] {
                assert_eq!(
                    s.count_prefix(end),
                    s.enumerate_prefix(end).len() as u64,
                    "mismatch for {s:?} at {end}"
                );
            }
        }
    }

    #[test]
    fn densities() {
        assert_eq!(evens().natural_density(), Some(ratio(1, 2)));
        assert_eq!(SetExpr::Nu2Level { k: 0 }.natural_density(), Some(ratio(1, 2)));
        assert_eq!(SetExpr::Nu2Level { k: 2 }.natural_density(), Some(ratio(1, 8)));
        assert_eq!(
            SetExpr::complement(evens()).natural_density(),
            Some(ratio(1, 2))
        );
        assert_eq!(
            SetExpr::sparse(SparseRule::Squares).natural_density(),
            Some(ratio(0, 1))
        );
        assert_eq!(SetExpr::finite(vec![3, 1]).natural_density(), Some(ratio(0, 1)));
    }

    #[test]
    fn cardinality_analysis() {
        assert_eq!(SetExpr::omega().certified_finite(), Some(false));
        assert_eq!(SetExpr::omega().certified_cofinite(), Some(true));
        assert_eq!(SetExpr::finite(vec![1, 2]).certified_finite(), Some(true));
        assert_eq!(evens().certified_cofinite(), Some(false));
        assert_eq!(SetExpr::ap(5, 1).certified_cofinite(), Some(true));
        let mix = SetExpr::Union {
            args: vec![SetExpr::finite(vec![1]), evens()],
        };
        assert_eq!(mix.certified_finite(), Some(false));
        let caps = SetExpr::Intersect {
            args: vec![SetExpr::omega(), SetExpr::ap(3, 1)],
        };
        assert_eq!(caps.certified_cofinite(), Some(true));
        assert_eq!(caps.certified_finite(), Some(false));
    }

    #[test]
    fn harmonic_analysis() {
        assert_eq!(evens().harmonic_sum_converges(), Some(false));
        assert_eq!(
            SetExpr::sparse(SparseRule::Squares).harmonic_sum_converges(),
            Some(true)
        );
        assert_eq!(
            SetExpr::complement(SetExpr::sparse(SparseRule::Squares)).harmonic_sum_converges(),
            Some(false)
        );
        assert_eq!(SetExpr::Nu2Level { k: 4 }.harmonic_sum_converges(), Some(false));
    }

    #[test]
    fn next_member_closed_forms() {
        let sq = SetExpr::sparse(SparseRule::Squares);
        assert_eq!(sq.next_member(0, 10), Some(0));
        assert_eq!(sq.next_member(2, 10), Some(4));
        assert_eq!(sq.next_member(10, 10), Some(16));
        assert_eq!(SetExpr::ap(1, 2).next_member(6, 10), Some(7));
        assert_eq!(SetExpr::Nu2Level { k: 2 }.next_member(5, 10), Some(12));
        assert_eq!(SetExpr::Nu2Level { k: 0 }.next_member(0, 10), Some(0));
        assert_eq!(SetExpr::Nu2Level { k: 0 }.next_member(1, 10), Some(1));
        assert_eq!(SetExpr::Nu2Level { k: 0 }.next_member(2, 10), Some(3));
        // compound: scan path
        let comp = SetExpr::Intersect {
            args: vec![evens(), SetExpr::ap(0, 3)],
        };
        assert_eq!(comp.next_member(1, 100), Some(6));
    }

    #[test]
    fn json_schema_round_trip() {
        let s = SetExpr::Union {
            args: vec![
                SetExpr::finite(vec![2]),
                SetExpr::ap(0, 4),
                SetExpr::sparse(SparseRule::Squares),
                SetExpr::Nu2Level { k: 1 },
                SetExpr::Range { lo: 0, hi: 9 },
                SetExpr::complement(SetExpr::finite(vec![5])),
            ],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"kind\":\"ap\""));
        assert!(json.contains("\"kind\":\"nu2\""));
        assert!(json.contains("\"rule\":\"squares\""));
        let back: SetExpr = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
        let fixed: SetExpr = serde_json::from_str(r#"{"kind":"sparse","rule":"powersOfTwo"}"#).unwrap();
        assert_eq!(fixed, SetExpr::sparse(SparseRule::PowersOfTwo));
    }

    #[test]
    fn validation() {
        assert!(SetExpr::Finite { elems: vec![2, 1] }.validate().is_err());
        assert!(SetExpr::Finite { elems: vec![1, 1] }.validate().is_err());
        assert!(SetExpr::ArithProg { a: 0, d: 0 }.validate().is_err());
        assert!(SetExpr::Range { lo: 3, hi: 1 }.validate().is_err());
        assert!(SetExpr::finite(vec![2, 1]).validate().is_ok());
    }
}
