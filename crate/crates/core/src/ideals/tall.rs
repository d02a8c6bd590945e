//! Tallness decisions with certificates, nontall witnesses, and the greedy
//! extraction of sparse ideal members from arbitrary infinite sets.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::HorizonParams;
use crate::rational::{format_rat, opt_rat_pairs, pow2, rat_u64, Rat};
use crate::setexpr::{SetExpr, SparseRule};
use crate::summability::MatrixSpec;

use super::{BlockSubmeasure, IdealSpec, LengthRule, SubmeasureKind, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TallVerdict {
    Tall,
    NotTall,
    Unknown,
}

/// Outcome of a tallness decision. Tall verdicts carry the criterion and a
/// numeric decay trace; NotTall verdicts carry a witness set every infinite
/// subset of which stays outside the family.
#[derive(Debug, Clone, Serialize)]
pub struct TallnessReport {
    pub verdict: TallVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SetExpr>,
    #[serde(with = "opt_rat_pairs", skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(u64, Rat)>>,
}

impl TallnessReport {
    fn tall(criterion: String, trace: Vec<(u64, Rat)>) -> Self {
        TallnessReport {
            verdict: TallVerdict::Tall,
            criterion: Some(criterion),
            witness: None,
            trace: Some(trace),
        }
    }

    fn not_tall(criterion: String, witness: SetExpr) -> Self {
        TallnessReport {
            verdict: TallVerdict::NotTall,
            criterion: Some(criterion),
            witness: Some(witness),
            trace: None,
        }
    }
}

fn decay_trace<F: Fn(u64) -> Rat>(params: &HorizonParams, f: F) -> Vec<(u64, Rat)> {
    params
        .sample_points()
        .into_iter()
        .take(32)
        .map(|n| (n, f(n)))
        .collect()
}

/// Decides tallness symbolically from the family parameters.
pub fn is_tall(ideal: &IdealSpec, params: &HorizonParams) -> Result<TallnessReport> {
    ideal.validate()?;
    params.validate()?;
    Ok(match ideal {
        IdealSpec::Fin => TallnessReport::not_tall(
            "every infinite subset of ω is infinite, hence outside Fin".into(),
            SetExpr::omega(),
        ),
        IdealSpec::DensityZero => TallnessReport::tall(
            "max-entry decay: Cesàro rows have maximal entry 1/(n+1) → 0".into(),
            decay_trace(params, |n| Rat::new(1.into(), (n + 1).into())),
        ),
        IdealSpec::Matrix { matrix } => {
            if matrix.cesaro_like() {
                let prefix = matrix.prefix_len();
                TallnessReport::tall(
                    "max-entry decay: rows beyond the prefix have maximal entry 1/(n+1) → 0"
                        .into(),
                    decay_trace(params, |n| {
                        let n = n.max(prefix);
                        Rat::new(1.into(), (n + 1).into())
                    }),
                )
            } else {
                // Identity is the only other variant passing validation.
                TallnessReport::not_tall(
                    "persistent entry level 1 on distinct diagonal columns".into(),
                    SetExpr::ap(0, 1),
                )
            }
        }
        IdealSpec::Summable { f } => {
            let delta = f.limsup();
            if delta.is_zero() {
                TallnessReport::tall(
                    "vanishing weights: limsup f = 0, greedy summable subsets exist".into(),
                    decay_trace(params, |n| f.eval(n)),
                )
            } else {
                let half = &delta / rat_u64(2);
                TallnessReport::not_tall(
                    format!(
                        "weights recur at level {}: sums over infinite subsets of the witness diverge",
                        format_rat(&delta)
                    ),
                    f.level_set_geq(&half),
                )
            }
        }
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            let delta = view.singleton_limsup();
            if delta.is_zero() {
                let blocks = view.blocks.clone();
                let kind = view.kind.clone();
                TallnessReport::tall(
                    "singleton submeasures vanish: max_k φ_n({k}) → 0".into(),
                    decay_trace(params, |n| {
                        let b = blocks.block_of(n);
                        BlockSubmeasure {
                            blocks: &blocks,
                            kind: &kind,
                        }
                        .singleton_sup(b)
                    }),
                )
            } else {
                let half = &delta / rat_u64(2);
                let witness = view.singleton_witness(&half).unwrap_or_else(|| {
                    // Unbounded blocks with eventually-constant weights: the
                    // powers of two eventually occupy distinct blocks.
                    SetExpr::sparse(SparseRule::PowersOfTwo)
                });
                TallnessReport::not_tall(
                    format!(
                        "singleton submeasures recur at level {}: one pivot per block stays out",
                        format_rat(&delta)
                    ),
                    witness,
                )
            }
        }
        IdealSpec::FubiniEmptyFin => TallnessReport::not_tall(
            "every infinite set of odd-valuation-0 numbers has an infinite level-0 slice".into(),
            SetExpr::Nu2Level { k: 0 },
        ),
        IdealSpec::Restriction { base, .. } => {
            let inner = is_tall(base, params)?;
            match inner.verdict {
                TallVerdict::Tall => TallnessReport {
                    verdict: TallVerdict::Tall,
                    criterion: Some(format!(
                        "inherited: restrictions of tall families are tall ({})",
                        inner.criterion.unwrap_or_default()
                    )),
                    witness: None,
                    trace: inner.trace,
                },
                _ => TallnessReport {
                    verdict: TallVerdict::Unknown,
                    criterion: None,
                    witness: None,
                    trace: inner.trace,
                },
            }
        }
    })
}

/// The infinite set every infinite subset of which is certified outside the
/// family. Defined exactly when the tallness verdict is NotTall.
pub fn nontall_witness(ideal: &IdealSpec, params: &HorizonParams) -> Result<SetExpr> {
    let report = is_tall(ideal, params)?;
    match report.verdict {
        TallVerdict::NotTall => report
            .witness
            .ok_or_else(|| Error::NotApplicable("missing witness".into())),
        TallVerdict::Tall => Err(Error::NotApplicable(
            "the family is tall; no nontall witness exists".into(),
        )),
        TallVerdict::Unknown => Err(Error::NotApplicable(
            "tallness undecided; no witness available".into(),
        )),
    }
}

/// Greedy pick schedule for extracting a sparse ideal member from an
/// arbitrary infinite set, one flavor per tall family.
#[derive(Debug, Clone)]
pub enum GreedySchedule {
    /// Doubling gaps: counting function O(log N) forces density 0.
    DoublingGap,
    /// Row thresholds n_j with max-entry ≤ 2⁻ʲ from n_j on; picks clear the
    /// thresholds so the selected columns carry vanishing row mass.
    RowDecay { matrix: MatrixSpec },
    /// One pick per block, restricted to blocks with singleton measure ≤ 2⁻ʲ.
    BlockDecay {
        blocks: LengthRule,
        kind: SubmeasureKind,
    },
    /// Picks with weight ≤ 2⁻ʲ, so the selected subset has a geometric sum.
    WeightDecay { f: WeightSpec },
}

impl GreedySchedule {
    /// Schedule for a tall family; errors with NotTall otherwise.
    pub fn for_ideal(ideal: &IdealSpec) -> Result<GreedySchedule> {
        match ideal {
            IdealSpec::DensityZero => Ok(GreedySchedule::DoublingGap),
            IdealSpec::Matrix { matrix } if matrix.cesaro_like() => Ok(GreedySchedule::RowDecay {
                matrix: matrix.clone(),
            }),
            IdealSpec::Summable { f } if f.limsup().is_zero() => Ok(GreedySchedule::WeightDecay {
                f: f.clone(),
            }),
            IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
                let view = ideal.submeasure_view().expect("block family");
                if view.singleton_limsup().is_zero() {
                    Ok(GreedySchedule::BlockDecay {
                        blocks: view.blocks.clone(),
                        kind: view.kind.clone(),
                    })
                } else {
                    Err(Error::NotTall)
                }
            }
            IdealSpec::Restriction { base, .. } => GreedySchedule::for_ideal(base),
            _ => Err(Error::NotTall),
        }
    }

    /// Smallest admissible pick at step j after `last`; None on overflow.
    pub fn next_bound(&self, j: u64, last: Option<u64>) -> Option<u64> {
        let after = match last {
            None => 0,
            Some(l) => l.checked_add(1)?,
        };
        match self {
            GreedySchedule::DoublingGap => match last {
                None => Some(0),
                Some(l) => Some(l.checked_mul(2)?.max(after)),
            },
            GreedySchedule::RowDecay { matrix } => {
                let threshold = 1u64.checked_shl(j.try_into().ok()?)?.checked_sub(1)?;
                Some(threshold.max(matrix.prefix_len()).max(after))
            }
            GreedySchedule::BlockDecay { blocks, .. } => {
                let min_len = 1u64.checked_shl(j.try_into().ok()?)?;
                let block = blocks.first_block_all_geq(min_len)?;
                let mut bound = blocks.start(block);
                if let Some(l) = last {
                    let (_, end) = blocks.interval(blocks.block_of(l));
                    bound = bound.max(end.checked_add(1)?);
                }
                Some(bound)
            }
            GreedySchedule::WeightDecay { f } => {
                let threshold = 1u64.checked_shl(j.try_into().ok()?)?.checked_sub(1)?;
                Some(threshold.max(f.table_len()).max(after))
            }
        }
    }

    /// Re-validates a candidate pick against the step's threshold.
    pub fn validate_pick(&self, j: u64, k: u64) -> bool {
        let tol = pow2(-(j as i64));
        match self {
            GreedySchedule::DoublingGap => true,
            GreedySchedule::RowDecay { matrix } => {
                // Column window: every row that meets column k up to the next
                // threshold must sit below 2⁻ʲ. Beyond the prefix the column
                // maximum is the first Cesàro hit 1/(k+1).
                if Rat::new(1.into(), (k + 1).into()) > tol {
                    return false;
                }
                let prefix = matrix.prefix_len();
                (0..prefix).all(|n| matrix.entry(n, k) <= tol)
            }
            GreedySchedule::BlockDecay { blocks, kind } => {
                let view = BlockSubmeasure { blocks, kind };
                view.singleton_sup(blocks.block_of(k)) <= tol
            }
            GreedySchedule::WeightDecay { f } => f.eval(k) <= tol,
        }
    }
}

/// A certified greedy selection: the picked elements, their expression, and
/// the family functional trace along the picks.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessSelection {
    pub picks: Vec<u64>,
    pub expr: SetExpr,
    #[serde(with = "crate::rational::rat_pairs")]
    pub trace: Vec<(u64, Rat)>,
}

const MIN_PICKS: usize = 4;
const NEXT_MEMBER_SCAN: u64 = 1 << 21;

/// Greedy extraction of a sparse subset of `s` trending into a tall family.
/// The returned finite prefix covers `[0, horizon]`, where the horizon is
/// `params.n` unless `target_max` extends it.
pub fn tall_subset_selection(
    ideal: &IdealSpec,
    s: &SetExpr,
    params: &HorizonParams,
    target_max: Option<u64>,
) -> Result<WitnessSelection> {
    ideal.validate()?;
    s.validate()?;
    params.validate()?;
    let report = is_tall(ideal, params)?;
    if report.verdict != TallVerdict::Tall {
        return Err(Error::NotApplicable("the family is not certified tall".into()));
    }
    if s.certified_finite() == Some(true) {
        return Err(Error::NotInfinite);
    }
    // Horizon trend check for sets without a structural infinitude
    // certificate: the counting function must still be growing.
    if s.certified_finite().is_none() {
        let half = s.count_prefix(params.n / 2);
        let full = s.count_prefix(params.n);
        if full <= half {
            return Err(Error::NotInfinite);
        }
    }

    let horizon = target_max.unwrap_or(params.n);
    let schedule = GreedySchedule::for_ideal(ideal)?;
    let mut picks: Vec<u64> = Vec::new();
    let mut last = None;
    let mut j = 0u64;
    loop {
        let Some(mut bound) = schedule.next_bound(j, last) else {
            break;
        };
        if bound > horizon {
            break;
        }
        let mut found = None;
        for _ in 0..64 {
            match s.next_member(bound, NEXT_MEMBER_SCAN) {
                Some(k) if k <= horizon => {
                    if schedule.validate_pick(j, k) {
                        found = Some(k);
                        break;
                    }
                    bound = k + 1;
                }
                _ => break,
            }
        }
        match found {
            Some(k) => {
                picks.push(k);
                last = Some(k);
                j += 1;
            }
            None => break,
        }
    }
    if picks.len() < MIN_PICKS {
        return Err(Error::InsufficientHorizon(format!(
            "only {} picks available below {horizon}",
            picks.len()
        )));
    }
    let trace = certify_selection(ideal, &picks, params, horizon)?;
    Ok(WitnessSelection {
        expr: SetExpr::finite(picks.clone()),
        picks,
        trace,
    })
}

/// Spec-facing wrapper returning the witness as a set expression.
pub fn tall_subset_witness(
    ideal: &IdealSpec,
    s: &SetExpr,
    params: &HorizonParams,
) -> Result<SetExpr> {
    Ok(tall_subset_selection(ideal, s, params, None)?.expr)
}

fn sample_horizons(horizon: u64, rows: usize) -> Vec<u64> {
    let rows = rows as u64;
    let mut pts: Vec<u64> = (1..=rows).map(|i| i * horizon / rows).collect();
    pts.dedup();
    pts
}

/// Certifies that the family functional decays below ε along the picks,
/// checking the last quarter of sampled horizons.
pub(crate) fn certify_selection(
    ideal: &IdealSpec,
    picks: &[u64],
    params: &HorizonParams,
    horizon: u64,
) -> Result<Vec<(u64, Rat)>> {
    let count_upto = |n: u64| picks.partition_point(|&p| p <= n) as u64;
    let pts = sample_horizons(horizon, params.rows.min(256));
    let trace: Vec<(u64, Rat)> = match ideal {
        IdealSpec::DensityZero => pts
            .iter()
            .map(|&n| (n, Rat::new(count_upto(n).into(), (n + 1).into())))
            .collect(),
        IdealSpec::Matrix { matrix } => {
            let set = SetExpr::finite(picks.to_vec());
            pts.iter().map(|&n| (n, matrix.row_sum_over(&set, n))).collect()
        }
        IdealSpec::GenDensity { .. } | IdealSpec::Lacunary { .. } => {
            let view = ideal.submeasure_view().expect("block family");
            let set = SetExpr::finite(picks.to_vec());
            let top = view.blocks.block_of(horizon);
            sample_horizons(top.max(1), params.rows.min(256))
                .into_iter()
                .map(|b| (b, view.phi(b, &set)))
                .collect()
        }
        IdealSpec::Summable { f } => {
            let mut acc = Rat::zero();
            let mut trace = Vec::new();
            let mut iter = picks.iter().peekable();
            for &n in &pts {
                while let Some(&&p) = iter.peek() {
                    if p <= n {
                        acc += f.eval(p);
                        iter.next();
                    } else {
                        break;
                    }
                }
                trace.push((n, acc.clone()));
            }
            trace
        }
        IdealSpec::Restriction { base, .. } => {
            return certify_selection(base, picks, params, horizon);
        }
        _ => return Err(Error::NotApplicable("family has no decay functional".into())),
    };

    let quarter = trace.len() - trace.len() / 4;
    let ok = match ideal {
        IdealSpec::Summable { .. } => {
            // Partial sums stabilize: the increment over the last quarter is
            // below tolerance.
            let base = &trace[quarter.saturating_sub(1).min(trace.len() - 1)].1;
            let last = &trace.last().expect("nonempty").1;
            (last - base).abs() < params.epsilon
        }
        _ => trace[quarter..].iter().all(|(_, v)| *v < params.epsilon),
    };
    if !ok {
        return Err(Error::InsufficientHorizon(
            "selection decay not certified below epsilon on the final quarter".into(),
        ));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{WeightSpec, WeightTail};
    use crate::rational::ratio;

    fn params() -> HorizonParams {
        HorizonParams::default()
    }

    #[test]
    fn tallness_catalog() {
        let p = params();
        let r = is_tall(&IdealSpec::matrix(MatrixSpec::Cesaro), &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::Tall);
        // Max-entry trace is exactly 1/(n+1).
        for (n, v) in r.trace.unwrap() {
            assert_eq!(v * rat_u64(n + 1), rat_u64(1));
        }

        let r = is_tall(&IdealSpec::matrix(MatrixSpec::Identity), &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::NotTall);
        assert_eq!(r.witness.unwrap(), SetExpr::ap(0, 1));

        let r = is_tall(&IdealSpec::summable(WeightSpec::Harmonic), &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::Tall);

        let r = is_tall(&IdealSpec::summable(WeightSpec::Constant { c: rat_u64(1) }), &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::NotTall);
        assert_eq!(r.witness.unwrap(), SetExpr::ap(0, 1));

        let r = is_tall(
            &IdealSpec::Lacunary {
                lengths: LengthRule::Linear,
            },
            &p,
        )
        .unwrap();
        assert_eq!(r.verdict, TallVerdict::Tall);

        let r = is_tall(&IdealSpec::FubiniEmptyFin, &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::NotTall);
        assert_eq!(r.witness.unwrap(), SetExpr::Nu2Level { k: 0 });

        let r = is_tall(&IdealSpec::Fin, &p).unwrap();
        assert_eq!(r.verdict, TallVerdict::NotTall);
        assert_eq!(r.witness.unwrap(), SetExpr::omega());
    }

    #[test]
    fn restriction_inherits_tallness() {
        let p = params();
        let r = is_tall(
            &IdealSpec::Restriction {
                base: Box::new(IdealSpec::DensityZero),
                set: SetExpr::ap(0, 2),
            },
            &p,
        )
        .unwrap();
        assert_eq!(r.verdict, TallVerdict::Tall);
        let r = is_tall(
            &IdealSpec::Restriction {
                base: Box::new(IdealSpec::FubiniEmptyFin),
                set: SetExpr::ap(0, 2),
            },
            &p,
        )
        .unwrap();
        assert_eq!(r.verdict, TallVerdict::Unknown);
    }

    #[test]
    fn summable_table_witness() {
        let p = params();
        let f = WeightSpec::Table {
            values: vec![rat_u64(1), ratio(1, 2), rat_u64(1), ratio(1, 3)],
            tail: Box::new(WeightTail::Constant { c: rat_u64(1) }),
        };
        let w = nontall_witness(&IdealSpec::summable(f), &p).unwrap();
        // δ = 1, so the witness is {n : f(n) ≥ 1/2}.
        assert!(w.indicator(0));
        assert!(w.indicator(1));
        assert!(w.indicator(2));
        assert!(!w.indicator(3));
        assert!(w.indicator(4));
        assert!(w.indicator(1000));
    }

    #[test]
    fn doubling_gap_on_evens() {
        let p = params();
        let sel =
            tall_subset_selection(&IdealSpec::DensityZero, &SetExpr::ap(0, 2), &p, None).unwrap();
        // Gaps double: 0, 2, 4, 8, 16, ...
        assert_eq!(&sel.picks[..5], &[0, 2, 4, 8, 16]);
        for w in sel.picks.windows(2).skip(1) {
            assert!(w[1] >= 2 * w[0], "gap not doubling: {w:?}");
        }
        // Final density below tolerance.
        let (_, last) = sel.trace.last().unwrap();
        assert!(*last < p.epsilon);
    }

    #[test]
    fn matrix_greedy_on_odds() {
        let p = params();
        let sel = tall_subset_selection(
            &IdealSpec::matrix(MatrixSpec::Cesaro),
            &SetExpr::ap(1, 2),
            &p,
            None,
        )
        .unwrap();
        assert!(sel.picks.len() >= 8);
        let (_, last) = sel.trace.last().unwrap();
        assert!(*last < p.epsilon);
        // All picks odd.
        assert!(sel.picks.iter().all(|k| k % 2 == 1));
    }

    #[test]
    fn squares_already_decay() {
        let p = params();
        let sel = tall_subset_selection(
            &IdealSpec::DensityZero,
            &SetExpr::sparse(SparseRule::Squares),
            &p,
            None,
        )
        .unwrap();
        let (_, last) = sel.trace.last().unwrap();
        assert!(*last < ratio(1, 50));
        assert!(sel.picks.iter().all(|&k| {
            let r = k.isqrt();
            r * r == k
        }));
    }

    #[test]
    fn block_greedy_distinct_blocks() {
        let p = params();
        let ideal = IdealSpec::Lacunary {
            lengths: LengthRule::Linear,
        };
        let sel = tall_subset_selection(&ideal, &SetExpr::ap(0, 1), &p, None).unwrap();
        let blocks = LengthRule::Linear;
        let mut seen: Vec<u64> = sel.picks.iter().map(|&k| blocks.block_of(k)).collect();
        let len_before = seen.len();
        seen.dedup();
        assert_eq!(seen.len(), len_before, "picks share a block");
        let (_, last) = sel.trace.last().unwrap();
        assert!(*last < p.epsilon);
    }

    #[test]
    fn witness_requires_infinite_input() {
        let p = params();
        assert!(matches!(
            tall_subset_witness(&IdealSpec::DensityZero, &SetExpr::finite(vec![1, 2, 3]), &p),
            Err(Error::NotInfinite)
        ));
        assert!(matches!(
            tall_subset_witness(&IdealSpec::Fin, &SetExpr::ap(0, 2), &p),
            Err(Error::NotApplicable(_))
        ));
    }
}
