//! Real sequences with exact rational values, symbolic supports and
//! exceedance sets, ideal-limit estimation, and classification into the
//! sequence spaces c₀₀ / c₀ / c / ℓ∞ relative to an ideal.
//!
//! The whole module is rational end-to-end: an exceedance set
//! `{n : |x(n) − η| > ε}` is produced as a [`SetExpr`], exactly, for every
//! representable sequence, so membership verdicts inherit the ideal module's
//! certificates.

use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{member, IdealSpec, Membership, Verdict};
use crate::params::HorizonParams;
use crate::rational::{pow2, rat_string, rat_pairs, rat_u64, Rat};
use crate::setexpr::SetExpr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum NamedRule {
    #[serde(rename = "constant")]
    Constant {
        #[serde(with = "rat_string")]
        c: Rat,
    },
    #[serde(rename = "unit")]
    Unit { k: u64 },
    #[serde(rename = "powersOfTwo")]
    PowersOfTwo,
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "harmonic")]
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Seq {
    #[serde(rename = "finiteSupport")]
    FiniteSupport {
        #[serde(with = "rat_pairs")]
        entries: Vec<(u64, Rat)>,
    },
    #[serde(rename = "named")]
    Named {
        #[serde(flatten)]
        rule: NamedRule,
    },
    #[serde(rename = "overlay")]
    Overlay {
        base: Box<Seq>,
        #[serde(with = "rat_pairs")]
        patch: Vec<(u64, Rat)>,
    },
    /// Pointwise mask: `base(n)` on `set`, zero elsewhere. This is how
    /// indicator sequences and "identity on a set" sequences are written.
    #[serde(rename = "restrict")]
    Restrict { base: Box<Seq>, set: SetExpr },
}

impl Seq {
    pub fn constant(c: Rat) -> Seq {
        Seq::Named {
            rule: NamedRule::Constant { c },
        }
    }

    pub fn unit(k: u64) -> Seq {
        Seq::Named {
            rule: NamedRule::Unit { k },
        }
    }

    pub fn powers_of_two() -> Seq {
        Seq::Named {
            rule: NamedRule::PowersOfTwo,
        }
    }

    pub fn identity() -> Seq {
        Seq::Named {
            rule: NamedRule::Identity,
        }
    }

    pub fn harmonic() -> Seq {
        Seq::Named {
            rule: NamedRule::Harmonic,
        }
    }

    pub fn finite_support(mut entries: Vec<(u64, Rat)>) -> Seq {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(n, _)| *n);
        Seq::FiniteSupport { entries }
    }

    /// Indicator of a set, 1 on the set and 0 elsewhere.
    pub fn indicator(set: SetExpr) -> Seq {
        Seq::Restrict {
            base: Box::new(Seq::constant(rat_u64(1))),
            set,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Seq::FiniteSupport { entries } => {
                if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::InvalidSpec(
                        "finite-support indices must be strictly increasing".into(),
                    ));
                }
                if entries.iter().any(|(_, v)| v.is_zero()) {
                    return Err(Error::InvalidSpec(
                        "finite-support values must be nonzero".into(),
                    ));
                }
                Ok(())
            }
            Seq::Named { .. } => Ok(()),
            Seq::Overlay { base, patch } => {
                base.validate()?;
                if patch.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::InvalidSpec(
                        "overlay patch indices must be strictly increasing".into(),
                    ));
                }
                if patch.iter().any(|(_, v)| v.is_zero()) {
                    return Err(Error::InvalidSpec("overlay patch values must be nonzero".into()));
                }
                Ok(())
            }
            Seq::Restrict { base, set } => {
                base.validate()?;
                set.validate()
            }
        }
    }

    /// Denotational value at `n`.
    pub fn eval(&self, n: u64) -> Rat {
        match self {
            Seq::FiniteSupport { entries } => entries
                .binary_search_by_key(&n, |(i, _)| *i)
                .map(|i| entries[i].1.clone())
                .unwrap_or_else(|_| Rat::zero()),
            Seq::Named { rule } => match rule {
                NamedRule::Constant { c } => c.clone(),
                NamedRule::Unit { k } => {
                    if n == *k {
                        rat_u64(1)
                    } else {
                        Rat::zero()
                    }
                }
                NamedRule::PowersOfTwo => pow2(n as i64),
                NamedRule::Identity => rat_u64(n),
                NamedRule::Harmonic => Rat::new(1.into(), (n + 1).into()),
            },
            Seq::Overlay { base, patch } => patch
                .binary_search_by_key(&n, |(i, _)| *i)
                .map(|i| patch[i].1.clone())
                .unwrap_or_else(|_| base.eval(n)),
            Seq::Restrict { base, set } => {
                if set.indicator(n) {
                    base.eval(n)
                } else {
                    Rat::zero()
                }
            }
        }
    }

    /// Exact symbolic support `{n : x(n) ≠ 0}`.
    pub fn support(&self) -> SetExpr {
        match self {
            Seq::FiniteSupport { entries } => {
                SetExpr::finite(entries.iter().map(|(n, _)| *n).collect())
            }
            Seq::Named { rule } => match rule {
                NamedRule::Constant { c } => {
                    if c.is_zero() {
                        SetExpr::empty()
                    } else {
                        SetExpr::omega()
                    }
                }
                NamedRule::Unit { k } => SetExpr::finite(vec![*k]),
                NamedRule::PowersOfTwo | NamedRule::Harmonic => SetExpr::omega(),
                NamedRule::Identity => SetExpr::complement(SetExpr::finite(vec![0])),
            },
            Seq::Overlay { base, patch } => {
                let idx: Vec<u64> = patch.iter().map(|(n, _)| *n).collect();
                SetExpr::union2(
                    SetExpr::inter2(
                        base.support(),
                        SetExpr::complement(SetExpr::finite(idx.clone())),
                    ),
                    SetExpr::finite(idx),
                )
            }
            Seq::Restrict { base, set } => SetExpr::inter2(base.support(), set.clone()),
        }
    }

    /// Exact `{n ≤ end : x(n) ≠ 0}` as a finite set expression.
    pub fn support_prefix(&self, end: u64) -> SetExpr {
        SetExpr::finite(self.support().enumerate_prefix(end))
    }

    /// Exact symbolic exceedance set `{n : |x(n) − η| > ε}`.
    pub fn exceedance_set(&self, eta: &Rat, eps: &Rat) -> SetExpr {
        let exceeds = |v: &Rat| (v - eta).abs() > *eps;
        match self {
            Seq::FiniteSupport { entries } => {
                if exceeds(&Rat::zero()) {
                    // All off-support indices exceed; carve out the support
                    // points that happen to sit within tolerance.
                    let ok: Vec<u64> = entries
                        .iter()
                        .filter(|(_, v)| !exceeds(v))
                        .map(|(n, _)| *n)
                        .collect();
                    SetExpr::complement(SetExpr::finite(ok))
                } else {
                    let bad: Vec<u64> = entries
                        .iter()
                        .filter(|(_, v)| exceeds(v))
                        .map(|(n, _)| *n)
                        .collect();
                    SetExpr::finite(bad)
                }
            }
            Seq::Named { rule } => match rule {
                NamedRule::Constant { c } => {
                    if exceeds(c) {
                        SetExpr::omega()
                    } else {
                        SetExpr::empty()
                    }
                }
                NamedRule::Unit { k } => {
                    let off = exceeds(&Rat::zero());
                    let at = exceeds(&rat_u64(1));
                    match (off, at) {
                        (false, false) => SetExpr::empty(),
                        (false, true) => SetExpr::finite(vec![*k]),
                        (true, false) => SetExpr::complement(SetExpr::finite(vec![*k])),
                        (true, true) => SetExpr::omega(),
                    }
                }
                NamedRule::Identity => {
                    // Comfort zone is the integer interval [η−ε, η+ε] ∩ ω.
                    let lo_rat = eta - eps;
                    let hi_rat = eta + eps;
                    if hi_rat < Rat::zero() {
                        return SetExpr::omega();
                    }
                    let lo = lo_rat.max(Rat::zero()).ceil().to_integer();
                    let hi = hi_rat.floor().to_integer();
                    match (lo.to_u64(), hi.to_u64()) {
                        (Some(lo), Some(hi)) if lo <= hi => {
                            SetExpr::complement(SetExpr::Range { lo, hi })
                        }
                        _ => SetExpr::omega(),
                    }
                }
                NamedRule::PowersOfTwo => {
                    let lo_rat = eta - eps;
                    let hi_rat = eta + eps;
                    match dyadic_window(&lo_rat, &hi_rat) {
                        Some((lo, hi)) => SetExpr::complement(SetExpr::Range { lo, hi }),
                        None => SetExpr::omega(),
                    }
                }
                NamedRule::Harmonic => {
                    // Values 1/(n+1) decrease strictly from 1 toward 0.
                    let hi_rat = eta + eps;
                    if hi_rat <= Rat::zero() {
                        return SetExpr::omega();
                    }
                    // n is comfortable from the first index with 1/(n+1) ≤ η+ε.
                    let lo = hi_rat
                        .recip()
                        .ceil()
                        .to_integer()
                        .to_u64()
                        .map(|m| m.saturating_sub(1));
                    let lo_rat = eta - eps;
                    match lo {
                        None => SetExpr::omega(),
                        Some(lo) => {
                            if lo_rat <= Rat::zero() {
                                // Tail is all comfortable: exceedance is the prefix.
                                if lo == 0 {
                                    SetExpr::empty()
                                } else {
                                    SetExpr::Range { lo: 0, hi: lo - 1 }
                                }
                            } else {
                                // 1/(n+1) ≥ η−ε ⟺ n+1 ≤ 1/(η−ε).
                                let hi = lo_rat.recip().floor().to_integer().to_u64();
                                match hi {
                                    Some(h) if h >= 1 && h - 1 >= lo => SetExpr::complement(
                                        SetExpr::Range { lo, hi: h - 1 },
                                    ),
                                    _ => SetExpr::omega(),
                                }
                            }
                        }
                    }
                }
            },
            Seq::Overlay { base, patch } => {
                let base_exc = base.exceedance_set(eta, eps);
                let idx: Vec<u64> = patch.iter().map(|(n, _)| *n).collect();
                let bad: Vec<u64> = patch
                    .iter()
                    .filter(|(_, v)| exceeds(v))
                    .map(|(n, _)| *n)
                    .collect();
                SetExpr::union2(
                    SetExpr::inter2(base_exc, SetExpr::complement(SetExpr::finite(idx))),
                    SetExpr::finite(bad),
                )
            }
            Seq::Restrict { base, set } => {
                let on = SetExpr::inter2(set.clone(), base.exceedance_set(eta, eps));
                if exceeds(&Rat::zero()) {
                    SetExpr::union2(on, SetExpr::complement(set.clone()))
                } else {
                    on
                }
            }
        }
    }

    /// `(off_value, on_value)` when the sequence is syntactically two-valued.
    fn two_valued(&self) -> Option<(Rat, Rat)> {
        match self {
            Seq::Restrict { base, .. } => match &**base {
                Seq::Named {
                    rule: NamedRule::Constant { c },
                } => Some((Rat::zero(), c.clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

/// Largest window of exponents n with η−ε ≤ 2ⁿ ≤ η+ε, computed through bit
/// lengths so enormous candidates stay cheap.
fn dyadic_window(lo: &Rat, hi: &Rat) -> Option<(u64, u64)> {
    if *hi < rat_u64(1) {
        return None;
    }
    let hi_exp = floor_log2(hi)?;
    let hi_exp = hi_exp.max(0) as u64;
    let lo_exp = if *lo <= rat_u64(1) {
        0
    } else {
        let f = floor_log2(lo)?;
        let f = f.max(0) as u64;
        if pow2(f as i64) >= *lo {
            f
        } else {
            f + 1
        }
    };
    (lo_exp <= hi_exp).then_some((lo_exp, hi_exp))
}

/// floor(log₂ r) for r > 0 via numerator/denominator bit lengths.
fn floor_log2(r: &Rat) -> Option<i64> {
    if *r <= Rat::zero() {
        return None;
    }
    let p = r.numer();
    let q = r.denom();
    let guess = p.bits() as i64 - q.bits() as i64;
    for e in [guess, guess - 1, guess + 1] {
        let lo = pow2(e);
        let hi = pow2(e + 1);
        if lo <= *r && *r < hi {
            return Some(e);
        }
    }
    None
}

/// Result of estimating an ideal limit: the exact exceedance set together
/// with its membership verdict.
#[derive(Debug, Clone, Serialize)]
pub struct LimitEstimate {
    pub membership: Membership,
    pub exceedance: SetExpr,
}

/// `x` is I-convergent to η at tolerance ε exactly when the exceedance set
/// belongs to the ideal.
pub fn ideal_limit_estimate(
    ideal: &IdealSpec,
    x: &Seq,
    eta: &Rat,
    eps: &Rat,
    params: &HorizonParams,
) -> Result<LimitEstimate> {
    if *eps <= Rat::zero() {
        return Err(Error::InvalidSpec("tolerance must be positive".into()));
    }
    x.validate()?;
    let exceedance = x.exceedance_set(eta, eps);
    let membership = member(ideal, &exceedance, params)?;
    Ok(LimitEstimate {
        membership,
        exceedance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceFlag {
    #[serde(flatten)]
    pub membership: Membership,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundednessFlag {
    #[serde(flatten)]
    pub membership: Membership,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
}

/// Tri-state flags for the four sequence spaces.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceReport {
    pub c00: Membership,
    pub c0: Membership,
    pub c: ConvergenceFlag,
    pub linf: BoundednessFlag,
}

const LADDER_DEPTH: i64 = 16;

/// Runs the decreasing ε-ladder at a fixed η; `In` only if every rung is in
/// the ideal.
fn ladder_estimate(
    ideal: &IdealSpec,
    x: &Seq,
    eta: &Rat,
    params: &HorizonParams,
) -> Result<Membership> {
    let mut last_unknown: Option<Membership> = None;
    for j in 0..=LADDER_DEPTH {
        let eps = pow2(-j);
        let est = ideal_limit_estimate(ideal, x, eta, &eps, params)?;
        match est.membership.verdict {
            Verdict::In => {}
            Verdict::Out => {
                let mut m = est.membership;
                m.certificate = m
                    .certificate
                    .map(|c| format!("fails at tolerance 1/2^{j}: {c}"));
                return Ok(m);
            }
            Verdict::Unknown => last_unknown = Some(est.membership),
        }
    }
    if let Some(m) = last_unknown {
        return Ok(m);
    }
    Ok(Membership::certified(
        Verdict::In,
        format!("exceedance in ideal at every tolerance down to 1/2^{LADDER_DEPTH}"),
    ))
}

/// Candidate limits: 0, 1, the syntactic level of two-valued sequences,
/// values recurring with at least the configured frequency among sampled
/// indices, and the final sampled values.
fn limit_candidates(x: &Seq, params: &HorizonParams) -> Vec<Rat> {
    let mut cands = vec![Rat::zero(), rat_u64(1)];
    if let Some((off, on)) = x.two_valued() {
        cands.push(off);
        cands.push(on);
    }
    if let Seq::Named {
        rule: NamedRule::Constant { c },
    } = x
    {
        cands.push(c.clone());
    }
    let pts = params.sample_points();
    let vals: Vec<Rat> = pts.iter().map(|&n| x.eval(n)).collect();
    let mut counts: std::collections::BTreeMap<&Rat, usize> = Default::default();
    for v in &vals {
        *counts.entry(v).or_default() += 1;
    }
    let threshold = &params.recurrence * rat_u64(vals.len() as u64);
    for (v, c) in counts {
        if rat_u64(c as u64) >= threshold {
            cands.push(v.clone());
        }
    }
    for v in vals.iter().rev().take(3) {
        cands.push(v.clone());
    }
    cands.dedup_by(|a, b| a == b);
    let mut seen = Vec::new();
    for c in cands {
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    seen.truncate(10);
    seen
}

/// Classifies `x` against c₀₀(I), c₀(I), c(I), and ℓ∞(I).
pub fn classify_space(ideal: &IdealSpec, x: &Seq, params: &HorizonParams) -> Result<SpaceReport> {
    x.validate()?;
    params.validate()?;

    let c00 = member(ideal, &x.support(), params)?;
    let c0 = ladder_estimate(ideal, x, &Rat::zero(), params)?;

    // c(I): candidate-limit search.
    let mut c_flag = ConvergenceFlag {
        membership: Membership::unknown(None),
        eta: None,
    };
    let candidates = limit_candidates(x, params);
    let mut all_out = !candidates.is_empty();
    let mut witness_out: Option<Membership> = None;
    for eta in &candidates {
        let m = ladder_estimate(ideal, x, eta, params)?;
        match m.verdict {
            Verdict::In => {
                c_flag = ConvergenceFlag {
                    eta: Some(crate::rational::format_rat(eta)),
                    membership: m,
                };
                all_out = false;
                break;
            }
            Verdict::Out => {
                if witness_out.is_none() {
                    witness_out = Some(m);
                }
            }
            Verdict::Unknown => all_out = false,
        }
    }
    if c_flag.membership.verdict == Verdict::Unknown {
        if all_out && x.two_valued().is_some() {
            c_flag.membership = Membership::certified(
                Verdict::Out,
                "two-valued sequence; both level sets certified outside the ideal".to_string(),
            );
        } else if let Some(w) = witness_out {
            // Keep the strongest refutation trace around for inspection.
            c_flag.membership = Membership {
                verdict: Verdict::Unknown,
                certificate: None,
                trace: w.trace,
            };
        }
    }

    // ℓ∞(I): dyadic bound ladder.
    let mut linf = BoundednessFlag {
        membership: Membership::unknown(None),
        bound: None,
    };
    let mut every_out = true;
    let mut last = None;
    for j in 0..=LADDER_DEPTH {
        let bound = pow2(j);
        let est = ideal_limit_estimate(ideal, x, &Rat::zero(), &bound, params)?;
        match est.membership.verdict {
            Verdict::In => {
                linf = BoundednessFlag {
                    membership: est.membership,
                    bound: Some(crate::rational::format_rat(&bound)),
                };
                every_out = false;
                break;
            }
            Verdict::Out => last = Some(est.membership),
            Verdict::Unknown => {
                every_out = false;
                last = Some(est.membership);
            }
        }
    }
    if linf.bound.is_none() {
        if every_out {
            linf.membership = Membership {
                verdict: Verdict::Out,
                certificate: Some(format!(
                    "exceedance outside the ideal at every bound up to 2^{LADDER_DEPTH}"
                )),
                trace: last.and_then(|m| m.trace),
            };
        } else if let Some(m) = last {
            linf.membership = Membership {
                verdict: Verdict::Unknown,
                certificate: None,
                trace: m.trace,
            };
        }
    }

    let mut report = SpaceReport {
        c00,
        c0,
        c: c_flag,
        linf,
    };
    reconcile(&mut report);
    Ok(report)
}

/// Inclusion chain c₀₀ ⊆ c₀ ⊆ c ⊆ ℓ∞: In propagates toward weaker spaces,
/// Out toward stronger ones.
fn reconcile(report: &mut SpaceReport) {
    let implied_in = |m: &mut Membership, why: &str| {
        if m.verdict == Verdict::Unknown {
            *m = Membership::certified(Verdict::In, why.to_string());
        }
    };
    let implied_out = |m: &mut Membership, why: &str| {
        if m.verdict == Verdict::Unknown {
            *m = Membership::certified(Verdict::Out, why.to_string());
        }
    };

    if report.c00.verdict == Verdict::In {
        implied_in(&mut report.c0, "implied: support belongs to the ideal");
    }
    if report.c0.verdict == Verdict::In && report.c.membership.verdict == Verdict::Unknown {
        report.c.membership =
            Membership::certified(Verdict::In, "implied: ideal-convergent to 0".to_string());
        report.c.eta = Some("0".into());
    }
    if report.c.membership.verdict == Verdict::In {
        implied_in(
            &mut report.linf.membership,
            "implied: ideal-convergent sequences are ideal-bounded",
        );
    }

    if report.linf.membership.verdict == Verdict::Out {
        implied_out(
            &mut report.c.membership,
            "implied: not ideal-bounded",
        );
    }
    if report.c.membership.verdict == Verdict::Out {
        implied_out(&mut report.c0, "implied: not ideal-convergent");
    }
    if report.c0.verdict == Verdict::Out {
        implied_out(&mut report.c00, "implied: not ideal-convergent to 0");
    }

    debug_assert!(
        !(report.c00.verdict == Verdict::In && report.c0.verdict == Verdict::Out),
        "inclusion chain violated: c00 In but c0 Out"
    );
    debug_assert!(
        !(report.c0.verdict == Verdict::In && report.c.membership.verdict == Verdict::Out),
        "inclusion chain violated: c0 In but c Out"
    );
    debug_assert!(
        !(report.c.membership.verdict == Verdict::In
            && report.linf.membership.verdict == Verdict::Out),
        "inclusion chain violated: c In but linf Out"
    );
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum IndicatorVerdict {
    Convergent,
    NotConvergent,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndicatorReport {
    pub verdict: IndicatorVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    pub direct: Membership,
    pub dual: Membership,
}

/// Classifies a 0/1 indicator sequence: it ideal-converges exactly when the
/// set or its complement belongs to the ideal (limits 0 and 1 respectively).
pub fn classify_indicator(
    ideal: &IdealSpec,
    a: &SetExpr,
    params: &HorizonParams,
) -> Result<IndicatorReport> {
    a.validate()?;
    let direct = member(ideal, a, params)?;
    let dual = member(ideal, &SetExpr::complement(a.clone()), params)?;
    let (verdict, eta) = match (direct.verdict, dual.verdict) {
        (Verdict::In, _) => (IndicatorVerdict::Convergent, Some("0".to_string())),
        (_, Verdict::In) => (IndicatorVerdict::Convergent, Some("1".to_string())),
        (Verdict::Out, Verdict::Out) => (IndicatorVerdict::NotConvergent, None),
        _ => (IndicatorVerdict::Unknown, None),
    };
    Ok(IndicatorReport {
        verdict,
        eta,
        direct,
        dual,
    })
}
