//! Nonnegative summability matrices as lazy row generators: regularity and
//! Pringsheim-limit certificates, exact matrix transforms, the two seminorm
//! families of the transform domain, and horizon membership in c_A(I).

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::ideals::{windowed_trend, IdealSpec, Membership, Verdict};
use crate::params::HorizonParams;
use crate::rational::{format_rat, opt_rat_pairs, pow2, rat_u64, Rat};
use crate::seqspace::{classify_space, Seq};

/// Entries accept `"p/q"` strings or plain integers.
mod rat_matrix {
    use crate::rational::{format_rat, parse_rat, Rat};
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Cell {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(
        rows: &[Vec<Rat>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let rendered: Vec<String> = row.iter().map(format_rat).collect();
            seq.serialize_element(&rendered)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
        let raw: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|cell| match cell {
                        Cell::Int(i) => Ok(Rat::from_integer(i.into())),
                        Cell::Str(t) => parse_rat(&t).map_err(de::Error::custom),
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRule {
    #[serde(rename = "repeatLast")]
    RepeatLast,
    #[serde(rename = "cesaroTail")]
    CesaroTail,
}

/// A nonnegative infinite matrix with finitely supported rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MatrixSpec {
    #[serde(rename = "cesaro")]
    Cesaro,
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "rows")]
    ExplicitRows {
        #[serde(with = "rat_matrix")]
        rows: Vec<Vec<Rat>>,
        tail: TailRule,
    },
}

fn cesaro_entry(n: u64, k: u64) -> Rat {
    if k <= n {
        Rat::new(1.into(), (n + 1).into())
    } else {
        Rat::zero()
    }
}

impl MatrixSpec {
    pub fn validate(&self) -> Result<()> {
        if let MatrixSpec::ExplicitRows { rows, .. } = self {
            if rows.is_empty() {
                return Err(Error::InvalidSpec("explicit matrix needs at least one row".into()));
            }
            if rows.iter().flatten().any(Rat::is_negative) {
                return Err(Error::InvalidSpec("matrix entries must be nonnegative".into()));
            }
        }
        Ok(())
    }

    pub fn entry(&self, n: u64, k: u64) -> Rat {
        match self {
            MatrixSpec::Cesaro => cesaro_entry(n, k),
            MatrixSpec::Identity => {
                if n == k {
                    rat_u64(1)
                } else {
                    Rat::zero()
                }
            }
            MatrixSpec::ExplicitRows { rows, tail } => {
                if let Some(row) = rows.get(n as usize) {
                    row.get(k as usize).cloned().unwrap_or_else(Rat::zero)
                } else {
                    match tail {
                        TailRule::RepeatLast => rows
                            .last()
                            .and_then(|row| row.get(k as usize).cloned())
                            .unwrap_or_else(Rat::zero),
                        TailRule::CesaroTail => cesaro_entry(n, k),
                    }
                }
            }
        }
    }

    /// Largest column index that can carry a nonzero entry in row n.
    pub fn row_support_bound(&self, n: u64) -> u64 {
        match self {
            MatrixSpec::Cesaro | MatrixSpec::Identity => n,
            MatrixSpec::ExplicitRows { rows, tail } => {
                if let Some(row) = rows.get(n as usize) {
                    (row.len() as u64).saturating_sub(1)
                } else {
                    match tail {
                        TailRule::RepeatLast => {
                            (rows.last().map_or(0, Vec::len) as u64).saturating_sub(1)
                        }
                        TailRule::CesaroTail => n,
                    }
                }
            }
        }
    }

    pub fn row_sum(&self, n: u64) -> Rat {
        match self {
            MatrixSpec::Cesaro | MatrixSpec::Identity => rat_u64(1),
            MatrixSpec::ExplicitRows { rows, tail } => {
                if let Some(row) = rows.get(n as usize) {
                    row.iter().fold(Rat::zero(), |acc, v| acc + v)
                } else {
                    match tail {
                        TailRule::RepeatLast => rows
                            .last()
                            .map(|row| row.iter().fold(Rat::zero(), |acc, v| acc + v))
                            .unwrap_or_else(Rat::zero),
                        TailRule::CesaroTail => rat_u64(1),
                    }
                }
            }
        }
    }

    pub fn row_max(&self, n: u64) -> Rat {
        match self {
            MatrixSpec::Cesaro => Rat::new(1.into(), (n + 1).into()),
            MatrixSpec::Identity => rat_u64(1),
            MatrixSpec::ExplicitRows { rows, tail } => {
                if let Some(row) = rows.get(n as usize) {
                    row.iter().cloned().fold(Rat::zero(), Rat::max)
                } else {
                    match tail {
                        TailRule::RepeatLast => rows
                            .last()
                            .map(|row| row.iter().cloned().fold(Rat::zero(), Rat::max))
                            .unwrap_or_else(Rat::zero),
                        TailRule::CesaroTail => Rat::new(1.into(), (n + 1).into()),
                    }
                }
            }
        }
    }

    /// Number of explicitly listed rows (0 for the named variants).
    pub fn prefix_len(&self) -> u64 {
        match self {
            MatrixSpec::ExplicitRows { rows, .. } => rows.len() as u64,
            _ => 0,
        }
    }

    /// Whether the induced ideal coincides with the density-zero ideal: true
    /// for the Cesàro matrix and for explicit prefixes with a Cesàro tail
    /// (the finite prefix cannot change the limit behaviour).
    pub fn cesaro_like(&self) -> bool {
        matches!(
            self,
            MatrixSpec::Cesaro
                | MatrixSpec::ExplicitRows {
                    tail: TailRule::CesaroTail,
                    ..
                }
        )
    }

    /// Σ_{k ∈ s} a_{n,k}, exact, truncated at the row support bound.
    pub fn row_sum_over(&self, s: &crate::setexpr::SetExpr, n: u64) -> Rat {
        match self {
            MatrixSpec::Cesaro => {
                Rat::new(s.count_prefix(n).into(), (n + 1).into())
            }
            MatrixSpec::Identity => {
                if s.indicator(n) {
                    rat_u64(1)
                } else {
                    Rat::zero()
                }
            }
            MatrixSpec::ExplicitRows { rows, tail } => {
                if let Some(row) = rows.get(n as usize) {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| s.indicator(*k as u64))
                        .fold(Rat::zero(), |acc, (_, v)| acc + v)
                } else {
                    match tail {
                        TailRule::RepeatLast => rows
                            .last()
                            .map(|row| {
                                row.iter()
                                    .enumerate()
                                    .filter(|(k, _)| s.indicator(*k as u64))
                                    .fold(Rat::zero(), |acc, (_, v)| acc + v)
                            })
                            .unwrap_or_else(Rat::zero),
                        TailRule::CesaroTail => {
                            Rat::new(s.count_prefix(n).into(), (n + 1).into())
                        }
                    }
                }
            }
        }
    }
}

/// Silverman–Toeplitz check: bounded row sums, row sums → 1, columns → 0.
/// Named variants certify symbolically; explicit matrices with a repeated
/// last row have no declared closed form and stay Unknown with traces.
pub fn check_regularity(a: &MatrixSpec, params: &HorizonParams) -> Result<Membership> {
    a.validate()?;
    params.validate()?;
    Ok(match a {
        MatrixSpec::Cesaro => Membership::certified(
            Verdict::In,
            "row sums exactly 1; column k entries 1/(n+1) → 0; sup of row sums 1".to_string(),
        ),
        MatrixSpec::Identity => Membership::certified(
            Verdict::In,
            "row sums exactly 1; column k hits 1 once then vanishes".to_string(),
        ),
        MatrixSpec::ExplicitRows { tail, .. } => match tail {
            TailRule::CesaroTail => Membership::certified(
                Verdict::In,
                "finite explicit prefix; all later rows are Cesàro rows".to_string(),
            ),
            TailRule::RepeatLast => {
                let samples: Vec<(u64, Rat)> = sampled_rows(a, params)
                    .into_iter()
                    .map(|n| (n, a.row_sum(n)))
                    .collect();
                Membership::unknown(Some(samples))
            }
        },
    })
}

fn sampled_rows(a: &MatrixSpec, params: &HorizonParams) -> Vec<u64> {
    let prefix = a.prefix_len();
    let mut rows: Vec<u64> = (0..prefix.min(32)).collect();
    for p in params.sample_points().into_iter().take(32) {
        rows.push(p);
    }
    rows.sort_unstable();
    rows.dedup();
    rows
}

/// Estimates whether the double sequence of entries tends to 0 in the
/// Pringsheim sense. Named variants are decided in closed form; a repeated
/// nonzero row is a persistent entry level recurring in every window, which
/// refutes the limit.
pub fn pringsheim_zero_estimate(a: &MatrixSpec, params: &HorizonParams) -> Result<Membership> {
    a.validate()?;
    params.validate()?;
    let decay_trace = |prefix: u64| -> Vec<(u64, Rat)> {
        params
            .sample_points()
            .into_iter()
            .take(32)
            .map(|n| {
                let n = n.max(prefix);
                (n, Rat::new(1.into(), (n + 1).into()))
            })
            .collect()
    };
    Ok(match a {
        MatrixSpec::Cesaro => Membership {
            verdict: Verdict::In,
            certificate: Some("max entry of row n is 1/(n+1), vanishing".to_string()),
            trace: Some(decay_trace(0)),
        },
        MatrixSpec::Identity => Membership::certified(
            Verdict::Out,
            "diagonal entries equal 1 at every index (persistent level 1)".to_string(),
        ),
        MatrixSpec::ExplicitRows { rows, tail } => match tail {
            TailRule::CesaroTail => Membership {
                verdict: Verdict::In,
                certificate: Some(format!(
                    "beyond the {} listed rows the max entry is 1/(n+1), vanishing",
                    rows.len()
                )),
                trace: Some(decay_trace(rows.len() as u64)),
            },
            TailRule::RepeatLast => {
                let level = rows
                    .last()
                    .map(|row| row.iter().cloned().fold(Rat::zero(), Rat::max))
                    .unwrap_or_else(Rat::zero);
                if level.is_zero() {
                    Membership::certified(
                        Verdict::In,
                        "repeated row vanishes; all entries beyond the prefix are 0".to_string(),
                    )
                } else {
                    Membership::certified(
                        Verdict::Out,
                        format!(
                            "repeated row has persistent entry level {} (recurrence 1)",
                            format_rat(&level)
                        ),
                    )
                }
            }
        },
    })
}

const TRANSFORM_ROW_CAP: u64 = 100_000;

/// (Ax)(n) for n < rows, exact rationals. Every shipped variant has finitely
/// supported rows, so the defining series is a finite sum.
pub fn transform_prefix(
    a: &MatrixSpec,
    x: &Seq,
    rows: u64,
    params: &HorizonParams,
) -> Result<Vec<Rat>> {
    a.validate()?;
    x.validate()?;
    params.validate()?;
    if rows == 0 {
        return Err(Error::InvalidSpec("transform needs at least one row".into()));
    }
    if rows > TRANSFORM_ROW_CAP {
        return Err(Error::DomainError(format!(
            "exact transform limited to {TRANSFORM_ROW_CAP} rows"
        )));
    }
    match a {
        MatrixSpec::Identity => Ok((0..rows).map(|n| x.eval(n)).collect()),
        MatrixSpec::Cesaro => Ok(cesaro_means(x, rows)),
        MatrixSpec::ExplicitRows { rows: listed, tail } => {
            let prefix = listed.len() as u64;
            let mut out = Vec::with_capacity(rows as usize);
            for n in 0..rows.min(prefix) {
                let row = &listed[n as usize];
                let val = row
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .fold(Rat::zero(), |acc, (k, a)| acc + a * x.eval(k as u64));
                out.push(val);
            }
            if rows > prefix {
                match tail {
                    TailRule::RepeatLast => {
                        let last = listed.last().expect("validated nonempty");
                        let val = last
                            .iter()
                            .enumerate()
                            .filter(|(_, a)| !a.is_zero())
                            .fold(Rat::zero(), |acc, (k, a)| acc + a * x.eval(k as u64));
                        out.resize(rows as usize, val);
                    }
                    TailRule::CesaroTail => {
                        let means = cesaro_means(x, rows);
                        out.extend_from_slice(&means[prefix as usize..]);
                    }
                }
            }
            Ok(out)
        }
    }
}

fn cesaro_means(x: &Seq, rows: u64) -> Vec<Rat> {
    let mut out = Vec::with_capacity(rows as usize);
    let mut partial = Rat::zero();
    for n in 0..rows {
        partial += x.eval(n);
        out.push(&partial / rat_u64(n + 1));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SeminormReport {
    pub p: String,
    pub q: String,
    pub stabilized: bool,
}

const SEMINORM_TERM_CAP: u64 = 200_000;

/// The coordinate seminorm p_n(x) = |x(n)| and the section seminorm
/// q_n(x) = sup_m |Σ_{k≤m} a_{n,k} x(k)|, the sup taken over m ≤ params.n.
/// `stabilized` records whether the row support was exhausted inside the
/// window, in which case q is the exact sup.
pub fn eval_seminorms(
    a: &MatrixSpec,
    x: &Seq,
    n: u64,
    params: &HorizonParams,
) -> Result<SeminormReport> {
    a.validate()?;
    x.validate()?;
    params.validate()?;
    let p = x.eval(n).abs();
    let bound = a.row_support_bound(n);
    let cap = bound.min(params.n);
    if cap + 1 > SEMINORM_TERM_CAP {
        return Err(Error::DomainError(format!(
            "exact partial sums limited to {SEMINORM_TERM_CAP} terms"
        )));
    }
    let mut partial = Rat::zero();
    let mut best = Rat::zero();
    for k in 0..=cap {
        let entry = a.entry(n, k);
        if !entry.is_zero() {
            partial += entry * x.eval(k);
        }
        let mag = partial.abs();
        if mag > best {
            best = mag;
        }
    }
    Ok(SeminormReport {
        p: format_rat(&p),
        q: format_rat(&best),
        stabilized: bound <= params.n,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CaReport {
    #[serde(flatten)]
    pub membership: Membership,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    pub route: String,
    #[serde(with = "opt_rat_pairs", skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<(u64, Rat)>>,
}

/// Horizon membership of `x` in c_A(I) = {x ∈ d_A : Ax ∈ c(I)}.
///
/// The identity matrix routes symbolically through `classify_space`. For the
/// other variants the transform prefix is computed exactly and candidate
/// limits are tested with a per-family window trend: exceedances intersected
/// with the evaluated window must become negligible on its last quarter.
pub fn ca_membership_estimate(
    a: &MatrixSpec,
    ideal: &IdealSpec,
    x: &Seq,
    params: &HorizonParams,
) -> Result<CaReport> {
    ideal.validate()?;
    if matches!(a, MatrixSpec::Identity) {
        let report = classify_space(ideal, x, params)?;
        return Ok(CaReport {
            membership: report.c.membership,
            eta: report.c.eta,
            route: "symbolic".into(),
            values: None,
        });
    }

    let window = params.rows as u64;
    let vals = transform_prefix(a, x, window, params)?;
    let sampled: Vec<(u64, Rat)> = vals
        .iter()
        .enumerate()
        .step_by((window as usize / 32).max(1))
        .map(|(n, v)| (n as u64, v.clone()))
        .collect();

    // Divergence check: every value on the last quarter beyond 2^20.
    let quarter = &vals[(vals.len() * 3) / 4..];
    let big = pow2(20);
    if !quarter.is_empty() && quarter.iter().all(|v| v.abs() > big) {
        return Ok(CaReport {
            membership: Membership::certified(
                Verdict::Out,
                "transform magnitude exceeds 2^20 across the final window".to_string(),
            ),
            eta: None,
            route: "windowed".into(),
            values: Some(sampled),
        });
    }

    let mut candidates: Vec<Rat> = vec![Rat::zero(), rat_u64(1)];
    for v in vals.iter().rev().take(3) {
        candidates.push(v.clone());
    }
    let mut counts: std::collections::BTreeMap<&Rat, usize> = Default::default();
    for v in &vals {
        *counts.entry(v).or_default() += 1;
    }
    let threshold = &params.recurrence * rat_u64(vals.len() as u64);
    for (v, c) in counts {
        if rat_u64(c as u64) >= threshold {
            candidates.push(v.clone());
        }
    }
    let mut seen: Vec<Rat> = Vec::new();
    for c in candidates {
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    seen.truncate(10);

    for eta in &seen {
        let exceed: Vec<u64> = vals
            .iter()
            .enumerate()
            .filter(|(_, v)| (*v - eta).abs() > params.epsilon)
            .map(|(n, _)| n as u64)
            .collect();
        if windowed_trend(ideal, &exceed, window, params)? {
            return Ok(CaReport {
                membership: Membership::certified(
                    Verdict::In,
                    format!(
                        "transform window trends to {} at tolerance {}",
                        format_rat(eta),
                        format_rat(&params.epsilon)
                    ),
                ),
                eta: Some(format_rat(eta)),
                route: "windowed".into(),
                values: Some(sampled),
            });
        }
    }

    Ok(CaReport {
        membership: Membership::unknown(Some(sampled.clone())),
        eta: None,
        route: "windowed".into(),
        values: Some(sampled),
    })
}

/// Row maxima sweep used by benches and tallness traces.
pub fn row_maxima(a: &MatrixSpec, rows: usize) -> Vec<Rat> {
    exec::map_rows(rows, |n| a.row_max(n as u64))
}

/// Sequential twin of [`row_maxima`].
pub fn row_maxima_seq(a: &MatrixSpec, rows: usize) -> Vec<Rat> {
    exec::map_rows_seq(rows, |n| a.row_max(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::setexpr::SetExpr;

    #[test]
    fn entries_and_bounds() {
        let c = MatrixSpec::Cesaro;
        assert_eq!(c.entry(2, 1), ratio(1, 3));
        assert_eq!(c.entry(2, 3), Rat::zero());
        assert_eq!(c.row_support_bound(5), 5);
        let i = MatrixSpec::Identity;
        assert_eq!(i.entry(4, 4), rat_u64(1));
        assert_eq!(i.entry(4, 3), Rat::zero());
        let e = MatrixSpec::ExplicitRows {
            rows: vec![vec![rat_u64(1)], vec![ratio(1, 2), ratio(1, 2)]],
            tail: TailRule::RepeatLast,
        };
        assert_eq!(e.entry(7, 1), ratio(1, 2));
        assert_eq!(e.row_support_bound(7), 1);
    }

    #[test]
    fn transform_examples() {
        let p = HorizonParams::default();
        let ones = Seq::constant(rat_u64(1));
        assert_eq!(
            transform_prefix(&MatrixSpec::Cesaro, &ones, 3, &p).unwrap(),
            vec![rat_u64(1), rat_u64(1), rat_u64(1)]
        );
        let spike = Seq::finite_support(vec![(0, rat_u64(1))]);
        assert_eq!(
            transform_prefix(&MatrixSpec::Cesaro, &spike, 3, &p).unwrap(),
            vec![rat_u64(1), ratio(1, 2), ratio(1, 3)]
        );
        assert_eq!(
            transform_prefix(&MatrixSpec::Identity, &Seq::identity(), 4, &p).unwrap(),
            vec![rat_u64(0), rat_u64(1), rat_u64(2), rat_u64(3)]
        );
    }

    #[test]
    fn regularity_catalog() {
        let p = HorizonParams::default();
        assert_eq!(
            check_regularity(&MatrixSpec::Cesaro, &p).unwrap().verdict,
            Verdict::In
        );
        assert_eq!(
            check_regularity(&MatrixSpec::Identity, &p).unwrap().verdict,
            Verdict::In
        );
        let cesaro_tail = MatrixSpec::ExplicitRows {
            rows: vec![vec![rat_u64(1)]],
            tail: TailRule::CesaroTail,
        };
        assert_eq!(check_regularity(&cesaro_tail, &p).unwrap().verdict, Verdict::In);
        let repeat = MatrixSpec::ExplicitRows {
            rows: vec![vec![ratio(1, 2), ratio(1, 2)]],
            tail: TailRule::RepeatLast,
        };
        let m = check_regularity(&repeat, &p).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
        assert!(m.trace.is_some());
    }

    #[test]
    fn pringsheim_catalog() {
        let p = HorizonParams::default();
        let c = pringsheim_zero_estimate(&MatrixSpec::Cesaro, &p).unwrap();
        assert_eq!(c.verdict, Verdict::In);
        // τ · (n+1) = 1 exactly along the trace.
        for (n, v) in c.trace.unwrap() {
            assert_eq!(v * rat_u64(n + 1), rat_u64(1));
        }
        assert_eq!(
            pringsheim_zero_estimate(&MatrixSpec::Identity, &p).unwrap().verdict,
            Verdict::Out
        );
        let repeat = MatrixSpec::ExplicitRows {
            rows: vec![vec![ratio(1, 2), ratio(1, 2)]],
            tail: TailRule::RepeatLast,
        };
        assert_eq!(
            pringsheim_zero_estimate(&repeat, &p).unwrap().verdict,
            Verdict::Out
        );
        let zero_repeat = MatrixSpec::ExplicitRows {
            rows: vec![vec![rat_u64(1)], vec![]],
            tail: TailRule::RepeatLast,
        };
        assert_eq!(
            pringsheim_zero_estimate(&zero_repeat, &p).unwrap().verdict,
            Verdict::In
        );
    }

    #[test]
    fn seminorm_examples() {
        let p = HorizonParams::default();
        let r = eval_seminorms(&MatrixSpec::Cesaro, &Seq::constant(rat_u64(1)), 2, &p).unwrap();
        assert_eq!(r.p, "1");
        assert_eq!(r.q, "1");
        assert!(r.stabilized);
        let spike = Seq::finite_support(vec![(0, rat_u64(1))]);
        let r = eval_seminorms(&MatrixSpec::Cesaro, &spike, 1, &p).unwrap();
        assert_eq!(r.p, "0");
        assert_eq!(r.q, "1/2");
        let r = eval_seminorms(&MatrixSpec::Identity, &Seq::powers_of_two(), 3, &p).unwrap();
        assert_eq!(r.p, "8");
        assert_eq!(r.q, "8");
    }

    #[test]
    fn row_sum_over_matches_entries() {
        let evens = SetExpr::ap(0, 2);
        for a in [MatrixSpec::Cesaro, MatrixSpec::Identity] {
            for n in 0..12u64 {
                let brute = (0..=a.row_support_bound(n))
                    .filter(|&k| evens.indicator(k))
                    .fold(Rat::zero(), |acc, k| acc + a.entry(n, k));
                assert_eq!(a.row_sum_over(&evens, n), brute, "row {n}");
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let specs = vec![
            MatrixSpec::Cesaro,
            MatrixSpec::Identity,
            MatrixSpec::ExplicitRows {
                rows: vec![vec![rat_u64(1)], vec![ratio(1, 2), ratio(1, 2)]],
                tail: TailRule::RepeatLast,
            },
        ];
        for a in specs {
            let json = serde_json::to_string(&a).unwrap();
            let back: MatrixSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(a, back);
        }
        let from_ints: MatrixSpec =
            serde_json::from_str(r#"{"kind":"rows","rows":[[1,0],["1/2","1/2"]],"tail":"cesaroTail"}"#)
                .unwrap();
        assert_eq!(from_ints.entry(1, 1), ratio(1, 2));
        assert_eq!(from_ints.entry(0, 0), rat_u64(1));
    }
}
