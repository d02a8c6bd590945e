//! The membership engine: certified fast paths, ideal-axiom combinators,
//! density traces, and horizon trends.

use num::{BigInt, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec;
use crate::params::HorizonParams;
use crate::rational::{format_rat, pow2, rat_u64, Rat};
use crate::setexpr::{SetExpr, SparseRule};
use crate::summability::{MatrixSpec, TailRule};

use super::{IdealSpec, Membership, SubmeasureKind, Verdict, WeightSpec, WeightTail};

/// Unwraps double complements so the combinators see the simplest shape.
fn strip(s: &SetExpr) -> &SetExpr {
    let mut cur = s;
    while let SetExpr::Complement { arg } = cur {
        if let SetExpr::Complement { arg: inner } = &**arg {
            cur = inner;
        } else {
            break;
        }
    }
    cur
}

/// Tri-state membership with a certificate for every decision.
///
/// Guarantees: certified-finite sets are In for every family; certified
/// cofinite sets are Out for every family (properness). Restrictions answer
/// through the base family on the intersected set. Everything undecided
/// comes back Unknown with a sampled trace of the family functional.
pub fn member(ideal: &IdealSpec, s: &SetExpr, params: &HorizonParams) -> Result<Membership> {
    ideal.validate()?;
    s.validate()?;
    params.validate()?;
    member_unvalidated(ideal, s, params)
}

fn member_unvalidated(
    ideal: &IdealSpec,
    s: &SetExpr,
    params: &HorizonParams,
) -> Result<Membership> {
    if let IdealSpec::Restriction { base, set } = ideal {
        let s = strip(s);
        if s.certified_finite() == Some(true) {
            return Ok(Membership::certified(Verdict::In, "finite-set".into()));
        }
        if s.certified_cofinite() == Some(true) {
            return Ok(Membership::certified(
                Verdict::Out,
                "restriction-properness: the restriction set lies outside the base family"
                    .into(),
            ));
        }
        let mut m =
            member_unvalidated(base, &SetExpr::inter2(s.clone(), set.clone()), params)?;
        m.certificate = m.certificate.map(|c| format!("restricted: {c}"));
        return Ok(m);
    }
    if let Some((verdict, certificate)) = decide(ideal, s) {
        return Ok(Membership::certified(verdict, certificate));
    }
    let trace = sampled_functional(ideal, s, params);
    Ok(Membership::unknown(Some(trace)))
}

/// Membership of the complement: `s` belongs to the dual filter exactly when
/// its complement belongs to the ideal.
pub fn dual_member(ideal: &IdealSpec, s: &SetExpr, params: &HorizonParams) -> Result<Membership> {
    member(ideal, &SetExpr::complement(s.clone()), params)
}

/// Certificate-only verdict, used where traces are not needed (validation).
pub(crate) fn quick_verdict(ideal: &IdealSpec, s: &SetExpr) -> Verdict {
    if let IdealSpec::Restriction { base, set } = ideal {
        let s = strip(s);
        if s.certified_finite() == Some(true) {
            return Verdict::In;
        }
        if s.certified_cofinite() == Some(true) {
            return Verdict::Out;
        }
        return quick_verdict(base, &SetExpr::inter2(s.clone(), set.clone()));
    }
    decide(ideal, s).map_or(Verdict::Unknown, |(v, _)| v)
}

/// Recursive certified decision procedure. Fast paths first, then the ideal
/// axioms on boolean structure.
fn decide(ideal: &IdealSpec, s: &SetExpr) -> Option<(Verdict, String)> {
    let s = strip(s);
    if s.certified_finite() == Some(true) {
        return Some((Verdict::In, "finite-set".into()));
    }
    if s.certified_cofinite() == Some(true) {
        return Some((Verdict::Out, "cofinite set; the family is proper".into()));
    }
    if let Some(hit) = family_decide(ideal, s) {
        return Some(hit);
    }
    match s {
        SetExpr::Union { args } => {
            let verdicts: Vec<_> = args.iter().map(|a| decide(ideal, a)).collect();
            if verdicts.iter().any(|v| matches!(v, Some((Verdict::Out, _)))) {
                Some((
                    Verdict::Out,
                    "superset of a certified non-member (hereditarity)".into(),
                ))
            } else if verdicts.iter().all(|v| matches!(v, Some((Verdict::In, _)))) {
                Some((
                    Verdict::In,
                    "finite union of certified members".into(),
                ))
            } else {
                None
            }
        }
        SetExpr::Intersect { args } => {
            if args
                .iter()
                .any(|a| matches!(decide(ideal, a), Some((Verdict::In, _))))
            {
                Some((
                    Verdict::In,
                    "subset of a certified member (hereditarity)".into(),
                ))
            } else {
                None
            }
        }
        SetExpr::Complement { arg } => {
            if matches!(decide(ideal, arg), Some((Verdict::In, _))) {
                Some((
                    Verdict::Out,
                    "complement of a certified member; the family is proper".into(),
                ))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn family_decide(ideal: &IdealSpec, s: &SetExpr) -> Option<(Verdict, String)> {
    match ideal {
        IdealSpec::Fin => match s.certified_finite() {
            Some(false) => Some((Verdict::Out, "certified infinite set".into())),
            _ => None,
        },
        IdealSpec::DensityZero => density_zero_decide(s),
        IdealSpec::Matrix { matrix } => matrix_decide(matrix, s),
        IdealSpec::Summable { f } => summable_decide(f, s),
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            block_decide(view.blocks, view.kind, s)
        }
        IdealSpec::FubiniEmptyFin => fubini_decide(s),
        IdealSpec::Restriction { .. } => None,
    }
}

fn density_zero_decide(s: &SetExpr) -> Option<(Verdict, String)> {
    let d = s.natural_density()?;
    if d.is_zero() {
        let flavor = match s {
            SetExpr::Sparse { rule: SparseRule::Squares } => {
                "counting function O(sqrt N): density 0"
            }
            SetExpr::Sparse { rule: SparseRule::PowersOfTwo } => {
                "counting function O(log N): density 0"
            }
            SetExpr::Sparse { rule: SparseRule::Factorials } => {
                "inverse-factorial counting function: density 0"
            }
            _ => "closed-form density 0",
        };
        Some((Verdict::In, flavor.into()))
    } else {
        Some((
            Verdict::Out,
            format!("closed-form density {} > 0", format_rat(&d)),
        ))
    }
}

fn matrix_decide(matrix: &MatrixSpec, s: &SetExpr) -> Option<(Verdict, String)> {
    if matrix.cesaro_like() {
        // The induced ideal coincides with the density-zero ideal.
        return density_zero_decide(s)
            .map(|(v, cert)| (v, format!("Cesàro row sums: {cert}")));
    }
    match matrix {
        MatrixSpec::Identity => match s.certified_finite() {
            Some(false) => Some((
                Verdict::Out,
                "identity rows: the indicator of an infinite set does not vanish".into(),
            )),
            _ => None,
        },
        _ => None,
    }
}

fn summable_decide(f: &WeightSpec, s: &SetExpr) -> Option<(Verdict, String)> {
    enum Tail {
        Harmonic,
        Constant(Rat),
    }
    let tail = match f {
        WeightSpec::Harmonic => Tail::Harmonic,
        WeightSpec::Constant { c } => Tail::Constant(c.clone()),
        WeightSpec::Table { tail, .. } => match &**tail {
            WeightTail::Harmonic => Tail::Harmonic,
            WeightTail::Constant { c } => Tail::Constant(c.clone()),
            WeightTail::ZeroAfter => return None, // rejected by validation
        },
    };
    match tail {
        Tail::Harmonic => match s.harmonic_sum_converges() {
            Some(true) => Some((
                Verdict::In,
                "integral-test comparison: the harmonic-tail sum over the set converges".into(),
            )),
            Some(false) => Some((
                Verdict::Out,
                "integral-test comparison: the harmonic-tail sum over the set diverges".into(),
            )),
            None => None,
        },
        Tail::Constant(c) => {
            if c.is_positive() {
                match s.certified_finite() {
                    Some(false) => Some((
                        Verdict::Out,
                        format!(
                            "eventually-constant weight {}: infinite sets have divergent sums",
                            format_rat(&c)
                        ),
                    )),
                    _ => None,
                }
            } else {
                None
            }
        }
    }
}

fn block_decide(
    blocks: &super::LengthRule,
    kind: &SubmeasureKind,
    s: &SetExpr,
) -> Option<(Verdict, String)> {
    match kind {
        SubmeasureKind::NormalizedCounting => {
            if let Some(l) = blocks.eventual_constant() {
                if s.certified_finite() == Some(false) {
                    return Some((
                        Verdict::Out,
                        format!(
                            "bounded blocks: an infinite set meets infinitely many blocks with measure ≥ 1/{l}"
                        ),
                    ));
                }
            }
            if let Some((_, d)) = s.contains_progression() {
                return Some((
                    Verdict::Out,
                    format!(
                        "contains a progression of step {d}: every interval of length ≥ {} carries measure ≥ 1/{}",
                        2 * d,
                        2 * d
                    ),
                ));
            }
            None
        }
        SubmeasureKind::WeightedSum { weights } | SubmeasureKind::WeightedMax { weights } => {
            // Valid weighted configurations have eventually-constant positive
            // weights (vanishing tails are rejected as improper).
            let c = weights.limsup();
            if c.is_positive() && s.certified_finite() == Some(false) {
                Some((
                    Verdict::Out,
                    format!(
                        "eventually-constant block weight {}: infinite sets keep block mass",
                        format_rat(&c)
                    ),
                ))
            } else {
                None
            }
        }
    }
}

fn fubini_decide(s: &SetExpr) -> Option<(Verdict, String)> {
    match s {
        SetExpr::Nu2Level { k } => Some((
            Verdict::Out,
            format!("level slice infinite: every element has dyadic valuation {k}"),
        )),
        SetExpr::Sparse { rule: SparseRule::PowersOfTwo } => Some((
            Verdict::In,
            "each dyadic level contains at most one power of two".into(),
        )),
        _ => None,
    }
}

/// The family's canonical functional at n = 0..rows−1, exactly the values
/// whose limit defines membership: prefix densities, matrix row sums,
/// partial weight sums, or block submeasures.
pub fn density_trace(ideal: &IdealSpec, s: &SetExpr, rows: u64) -> Result<Vec<(u64, Rat)>> {
    ideal.validate()?;
    s.validate()?;
    if rows == 0 {
        return Err(Error::InvalidSpec("trace needs at least one row".into()));
    }
    match ideal {
        IdealSpec::Fin | IdealSpec::FubiniEmptyFin | IdealSpec::Restriction { .. } => {
            Err(Error::UnsupportedFamily(format!(
                "{} has no canonical density functional",
                family_name(ideal)
            )))
        }
        IdealSpec::DensityZero => Ok(prefix_density_rows(s, rows)),
        IdealSpec::Matrix { matrix } => {
            if matrix.cesaro_like() && matrix.prefix_len() == 0 {
                return Ok(prefix_density_rows(s, rows));
            }
            Ok(exec::map_rows(rows as usize, |n| {
                let n = n as u64;
                (n, matrix.row_sum_over(s, n))
            }))
        }
        IdealSpec::Summable { f } => {
            let mut out = Vec::with_capacity(rows as usize);
            let mut acc = Rat::zero();
            for n in 0..rows {
                if s.indicator(n) {
                    acc += f.eval(n);
                }
                out.push((n, acc.clone()));
            }
            Ok(out)
        }
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            Ok(exec::map_rows(rows as usize, |n| {
                let n = n as u64;
                (n, view.phi(n, s))
            }))
        }
    }
}

fn family_name(ideal: &IdealSpec) -> &'static str {
    match ideal {
        IdealSpec::Fin => "fin",
        IdealSpec::DensityZero => "densityZero",
        IdealSpec::Matrix { .. } => "matrix",
        IdealSpec::Summable { .. } => "summable",
        IdealSpec::GenDensity { .. } => "genDensity",
        IdealSpec::Lacunary { .. } => "lacunary",
        IdealSpec::FubiniEmptyFin => "fubiniEmptyFin",
        IdealSpec::Restriction { .. } => "restriction",
    }
}

/// Exact prefix densities at n = 0..rows−1 in one sweep.
fn prefix_density_rows(s: &SetExpr, rows: u64) -> Vec<(u64, Rat)> {
    let mut out = Vec::with_capacity(rows as usize);
    let mut count = 0u64;
    for n in 0..rows {
        if s.indicator(n) {
            count += 1;
        }
        out.push((n, Rat::new(count.into(), (n + 1).into())));
    }
    out
}

/// The family functional at horizons sampled across `[0, params.n]`. Total
/// for every family: families without a canonical functional report the
/// observed prefix densities. Summable partial sums are quantized to the
/// dyadic grid 2⁻³² to keep exact arithmetic bounded over long horizons.
pub fn density_samples(
    ideal: &IdealSpec,
    s: &SetExpr,
    params: &HorizonParams,
) -> Result<Vec<(u64, Rat)>> {
    ideal.validate()?;
    s.validate()?;
    params.validate()?;
    Ok(sampled_functional(ideal, s, params))
}

fn sampled_functional(ideal: &IdealSpec, s: &SetExpr, params: &HorizonParams) -> Vec<(u64, Rat)> {
    match ideal {
        IdealSpec::Fin | IdealSpec::FubiniEmptyFin | IdealSpec::DensityZero => {
            sampled_prefix_densities(s, params)
        }
        IdealSpec::Matrix { matrix } => match matrix {
            MatrixSpec::Cesaro => sampled_prefix_densities(s, params),
            MatrixSpec::Identity => params
                .sample_points()
                .into_iter()
                .map(|n| (n, rat_u64(u64::from(s.indicator(n)))))
                .collect(),
            MatrixSpec::ExplicitRows { rows, tail } => {
                let prefix = rows.len() as u64;
                match tail {
                    TailRule::CesaroTail => sampled_prefix_densities(s, params),
                    TailRule::RepeatLast => {
                        let steady = matrix.row_sum_over(s, prefix);
                        params
                            .sample_points()
                            .into_iter()
                            .map(|n| {
                                let v = if n < prefix {
                                    matrix.row_sum_over(s, n)
                                } else {
                                    steady.clone()
                                };
                                (n, v)
                            })
                            .collect()
                    }
                }
            }
        },
        IdealSpec::Summable { f } => {
            // Quantized partial sums: numerators over the fixed denominator
            // 2^32, rounded down per checkpoint.
            let scale = BigInt::from(1u64) << 32;
            let scale_rat = pow2(32);
            let mut acc = Rat::zero();
            let mut out = Vec::new();
            let mut checkpoints = params.sample_points().into_iter().peekable();
            for n in 0..=params.n {
                if s.indicator(n) {
                    acc += f.eval(n);
                    // Quantize the accumulator so denominators stay put.
                    acc = Rat::new((&acc * &scale_rat).floor().to_integer(), scale.clone());
                }
                while checkpoints.peek() == Some(&n) {
                    checkpoints.next();
                    out.push((n, acc.clone()));
                }
            }
            out
        }
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            let top_block = view.blocks.block_of(params.n);
            let samples = (params.rows as u64).min(top_block + 1);
            let pts: Vec<u64> = (1..=samples)
                .map(|j| j * top_block / samples)
                .collect();
            let mut pts = pts;
            pts.dedup();
            exec::map_rows(pts.len(), |i| {
                let n = pts[i];
                (n, view.phi(n, s))
            })
        }
        IdealSpec::Restriction { base, set } => {
            sampled_functional(base, &SetExpr::inter2(s.clone(), set.clone()), params)
        }
    }
}

fn sampled_prefix_densities(s: &SetExpr, params: &HorizonParams) -> Vec<(u64, Rat)> {
    let mut out = Vec::new();
    let mut count = 0u64;
    let mut checkpoints = params.sample_points().into_iter().peekable();
    for n in 0..=params.n {
        if s.indicator(n) {
            count += 1;
        }
        while checkpoints.peek() == Some(&n) {
            checkpoints.next();
            out.push((n, Rat::new(count.into(), (n + 1).into())));
        }
    }
    out
}

/// Whether a finite exceedance list, relative to an evaluated window,
/// trends into the ideal: the family functional of the exceedance must be
/// negligible on the window's last quarter.
pub fn windowed_trend(
    ideal: &IdealSpec,
    exceed: &[u64],
    window: u64,
    params: &HorizonParams,
) -> Result<bool> {
    let start = window - window / 4;
    let count_upto = |n: u64| exceed.partition_point(|&e| e <= n) as u64;
    match ideal {
        IdealSpec::Fin | IdealSpec::FubiniEmptyFin => {
            Ok(exceed.iter().all(|&e| e < start || e >= window))
        }
        IdealSpec::DensityZero => Ok(last_quarter_points(start, window)
            .into_iter()
            .all(|n| Rat::new(count_upto(n).into(), (n + 1).into()) < params.epsilon)),
        IdealSpec::Matrix { matrix } => {
            if matches!(matrix, MatrixSpec::Identity) {
                return Ok(exceed.iter().all(|&e| e < start || e >= window));
            }
            let set = SetExpr::finite(exceed.to_vec());
            Ok(last_quarter_points(start, window)
                .into_iter()
                .all(|n| matrix.row_sum_over(&set, n) < params.epsilon))
        }
        IdealSpec::Summable { f } => {
            let tail: Rat = exceed
                .iter()
                .filter(|&&e| e >= start && e < window)
                .map(|&e| f.eval(e))
                .fold(Rat::zero(), |acc, w| acc + w);
            Ok(tail < params.epsilon)
        }
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            let set = SetExpr::finite(exceed.to_vec());
            let top = view.blocks.block_of(window.saturating_sub(1));
            let from = top - top / 4;
            Ok((from..=top).all(|b| view.phi(b, &set) < params.epsilon))
        }
        IdealSpec::Restriction { base, set } => {
            let filtered: Vec<u64> = exceed
                .iter()
                .copied()
                .filter(|&e| set.indicator(e))
                .collect();
            windowed_trend(base, &filtered, window, params)
        }
    }
}

fn last_quarter_points(start: u64, window: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (1..=8u64)
        .map(|j| start + j * (window.saturating_sub(start + 1)) / 8)
        .collect();
    pts.push(window.saturating_sub(1));
    pts.sort_unstable();
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::LengthRule;
    use crate::rational::ratio;

    fn params() -> HorizonParams {
        HorizonParams::default()
    }

    fn evens() -> SetExpr {
        SetExpr::ap(0, 2)
    }

    fn squares() -> SetExpr {
        SetExpr::sparse(SparseRule::Squares)
    }

    #[test]
    fn density_zero_fast_paths() {
        let p = params();
        let m = member(&IdealSpec::DensityZero, &squares(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::In);
        assert!(m.certificate.unwrap().contains("sqrt"));
        let m = member(&IdealSpec::DensityZero, &evens(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::Out);
        assert!(m.certificate.unwrap().contains("1/2"));
        let m = member(&IdealSpec::FubiniEmptyFin, &SetExpr::Nu2Level { k: 3 }, &p).unwrap();
        assert_eq!(m.verdict, Verdict::Out);
        let m = member(
            &IdealSpec::summable(WeightSpec::Constant { c: rat_u64(1) }),
            &SetExpr::finite(vec![5, 7]),
            &p,
        )
        .unwrap();
        assert_eq!(m.verdict, Verdict::In);
        assert_eq!(m.certificate.as_deref(), Some("finite-set"));
    }

    #[test]
    fn dual_member_examples() {
        let p = params();
        // Complement of a density-zero set lies in the dual filter.
        let m = dual_member(
            &IdealSpec::DensityZero,
            &SetExpr::complement(squares()),
            &p,
        )
        .unwrap();
        assert_eq!(m.verdict, Verdict::In);
        // Evens are not in the dual filter of Fin (odds are infinite).
        let m = dual_member(&IdealSpec::Fin, &evens(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::Out);
        // Nor in the dual filter of the density ideal (odds have density 1/2).
        let m = dual_member(&IdealSpec::DensityZero, &evens(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::Out);
        // Exactness: dual_member is literally member of the complement.
        let direct = member(
            &IdealSpec::DensityZero,
            &SetExpr::complement(evens()),
            &p,
        )
        .unwrap();
        assert_eq!(m, direct);
    }

    #[test]
    fn properness_everywhere() {
        let p = params();
        let omega = SetExpr::omega();
        for ideal in all_families() {
            let m = member(&ideal, &omega, &p).unwrap();
            assert_eq!(m.verdict, Verdict::Out, "ω must be Out for {ideal:?}");
            assert!(m.certificate.is_some());
        }
    }

    pub(crate) fn all_families() -> Vec<IdealSpec> {
        vec![
            IdealSpec::Fin,
            IdealSpec::DensityZero,
            IdealSpec::matrix(MatrixSpec::Cesaro),
            IdealSpec::summable(WeightSpec::Harmonic),
            IdealSpec::GenDensity {
                blocks: LengthRule::Linear,
                submeasure: SubmeasureKind::NormalizedCounting,
            },
            IdealSpec::Lacunary {
                lengths: LengthRule::Linear,
            },
            IdealSpec::FubiniEmptyFin,
            IdealSpec::Restriction {
                base: Box::new(IdealSpec::DensityZero),
                set: SetExpr::ap(0, 2),
            },
        ]
    }

    #[test]
    fn restriction_intersects_first() {
        let p = params();
        let restriction = IdealSpec::Restriction {
            base: Box::new(IdealSpec::DensityZero),
            set: evens(),
        };
        // Squares within the evens: subset of the squares, certified In.
        let m = member(&restriction, &squares(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::In);
        // A set disjoint from the restriction set intersects to ∅.
        let m = member(&restriction, &SetExpr::ap(1, 2), &p).unwrap();
        assert_eq!(m.verdict, Verdict::In);
    }

    #[test]
    fn summable_comparisons() {
        let p = params();
        let harmonic = IdealSpec::summable(WeightSpec::Harmonic);
        assert_eq!(member(&harmonic, &squares(), &p).unwrap().verdict, Verdict::In);
        assert_eq!(member(&harmonic, &evens(), &p).unwrap().verdict, Verdict::Out);
        assert_eq!(
            member(&harmonic, &SetExpr::Nu2Level { k: 2 }, &p).unwrap().verdict,
            Verdict::Out
        );
        let const1 = IdealSpec::summable(WeightSpec::Constant { c: rat_u64(1) });
        assert_eq!(member(&const1, &squares(), &p).unwrap().verdict, Verdict::Out);
    }

    #[test]
    fn block_family_decisions() {
        let p = params();
        let lac = IdealSpec::Lacunary {
            lengths: LengthRule::Linear,
        };
        assert_eq!(member(&lac, &evens(), &p).unwrap().verdict, Verdict::Out);
        // Squares under lacunary blocks: no fast path, Unknown with trace.
        let m = member(&lac, &squares(), &p).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
        assert!(m.trace.is_some());
        // Bounded blocks collapse to Fin.
        let bounded = IdealSpec::Lacunary {
            lengths: LengthRule::Constant { l: 3 },
        };
        assert_eq!(member(&bounded, &squares(), &p).unwrap().verdict, Verdict::Out);
    }

    #[test]
    fn fubini_powers_fast_path() {
        let p = params();
        let m = member(
            &IdealSpec::FubiniEmptyFin,
            &SetExpr::sparse(SparseRule::PowersOfTwo),
            &p,
        )
        .unwrap();
        assert_eq!(m.verdict, Verdict::In);
    }

    #[test]
    fn density_trace_examples() {
        let t = density_trace(&IdealSpec::DensityZero, &evens(), 5).unwrap();
        let expect = [
            (0u64, ratio(1, 1)),
            (1, ratio(1, 2)),
            (2, ratio(2, 3)),
            (3, ratio(1, 2)),
            (4, ratio(3, 5)),
        ];
        assert_eq!(t, expect.to_vec());

        let t = density_trace(
            &IdealSpec::summable(WeightSpec::Harmonic),
            &SetExpr::empty(),
            3,
        )
        .unwrap();
        assert!(t.iter().all(|(_, v)| v.is_zero()));

        let t = density_trace(
            &IdealSpec::Lacunary { lengths: LengthRule::Linear },
            &SetExpr::ap(0, 1),
            3,
        )
        .unwrap();
        assert!(t.iter().all(|(_, v)| *v == rat_u64(1)));

        assert!(matches!(
            density_trace(&IdealSpec::Fin, &evens(), 3),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn matrix_trace_matches_density_zero() {
        let ces = IdealSpec::matrix(MatrixSpec::Cesaro);
        let a = density_trace(&ces, &evens(), 32).unwrap();
        let b = density_trace(&IdealSpec::DensityZero, &evens(), 32).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_carries_trace() {
        let p = params();
        // No fast path decides the intersection of evens with non-squares.
        let s = SetExpr::Intersect {
            args: vec![evens(), SetExpr::complement(squares())],
        };
        let m = member(&IdealSpec::DensityZero, &s, &p).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
        let trace = m.trace.unwrap();
        assert!(!trace.is_empty());
        // Observed density should hover near 1/2.
        let (_, last) = trace.last().unwrap();
        assert!((last - ratio(1, 2)).abs() < ratio(1, 50));
    }

    #[test]
    fn windowed_trends() {
        let p = params();
        // Exceedances confined to the head trend In under Fin.
        assert!(windowed_trend(&IdealSpec::Fin, &[0, 1, 2], 1000, &p).unwrap());
        assert!(!windowed_trend(&IdealSpec::Fin, &[900], 1000, &p).unwrap());
        // Sparse exceedances trend In under the density ideal.
        let sparse: Vec<u64> = (0..10).map(|j| j * j).collect();
        assert!(windowed_trend(&IdealSpec::DensityZero, &sparse, 1000, &p).unwrap());
        let dense: Vec<u64> = (0..500).map(|j| 2 * j).collect();
        assert!(!windowed_trend(&IdealSpec::DensityZero, &dense, 1000, &p).unwrap());
    }
}
