//! Parametric ideal families on ω with certified membership, density
//! traces, tallness decisions, and constructive witnesses.
//!
//! An [`IdealSpec`] is a finite description of an ideal. Membership answers
//! are tri-state: `In`/`Out` only ever come with a machine-checkable
//! certificate naming the closed form that decided them; everything else is
//! `Unknown` with a numeric trace of the family's canonical functional.

mod families;
mod fk;
mod member;
mod tall;

pub use families::{BlockSubmeasure, LengthRule, SubmeasureKind, WeightSpec, WeightTail};
pub use fk::{fk_classify, noninclusion_witness, FkReport, FkVerdict, NoninclusionReport, PositiveBundle};
pub use member::{density_samples, density_trace, dual_member, member, windowed_trend};
pub use tall::{
    is_tall, nontall_witness, tall_subset_selection, tall_subset_witness, GreedySchedule,
    TallVerdict, TallnessReport, WitnessSelection,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::HorizonParams;
use crate::rational::{opt_rat_pairs, Rat};
use crate::setexpr::SetExpr;
use crate::summability::MatrixSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

/// Tri-state membership verdict. In/Out always carry a certificate; Unknown
/// carries the sampled trace of the family functional when one exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(with = "opt_rat_pairs", skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(u64, Rat)>>,
}

impl Membership {
    pub fn certified(verdict: Verdict, certificate: String) -> Self {
        Membership {
            verdict,
            certificate: Some(certificate),
            trace: None,
        }
    }

    pub fn unknown(trace: Option<Vec<(u64, Rat)>>) -> Self {
        Membership {
            verdict: Verdict::Unknown,
            certificate: None,
            trace,
        }
    }
}

/// Parametric ideal family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum IdealSpec {
    /// Finite sets.
    #[serde(rename = "fin")]
    Fin,
    /// Sets of natural density zero.
    #[serde(rename = "densityZero")]
    DensityZero,
    /// Sets whose matrix row sums vanish, for a regular nonnegative matrix.
    #[serde(rename = "matrix")]
    Matrix { matrix: MatrixSpec },
    /// Sets with convergent weight sum, for a divergent nonnegative weight.
    #[serde(rename = "summable")]
    Summable { f: WeightSpec },
    /// Sets whose per-block submeasures vanish.
    #[serde(rename = "genDensity")]
    GenDensity {
        blocks: LengthRule,
        submeasure: SubmeasureKind,
    },
    /// Normalized block counting over an interval partition.
    #[serde(rename = "lacunary")]
    Lacunary { lengths: LengthRule },
    /// Sets all of whose dyadic valuation slices are finite.
    #[serde(rename = "fubiniEmptyFin")]
    FubiniEmptyFin,
    /// Membership of the base family after intersecting with a set outside
    /// the base.
    #[serde(rename = "restriction")]
    Restriction { base: Box<IdealSpec>, set: SetExpr },
}

impl IdealSpec {
    pub fn matrix(matrix: MatrixSpec) -> Self {
        IdealSpec::Matrix { matrix }
    }

    pub fn summable(f: WeightSpec) -> Self {
        IdealSpec::Summable { f }
    }

    /// Structural validation: properness and payload invariants.
    ///
    /// Matrix ideals require a regularity certificate; summable ideals a
    /// divergent weight sum; generalized density ideals nonvanishing block
    /// mass; restrictions a set not already inside the base family.
    pub fn validate(&self) -> Result<()> {
        match self {
            IdealSpec::Fin | IdealSpec::DensityZero | IdealSpec::FubiniEmptyFin => Ok(()),
            IdealSpec::Matrix { matrix } => {
                matrix.validate()?;
                let params = HorizonParams::default();
                let reg = crate::summability::check_regularity(matrix, &params)?;
                if reg.verdict != Verdict::In {
                    return Err(Error::InvalidSpec(format!(
                        "matrix ideal requires certified regularity, got {:?}",
                        reg.verdict
                    )));
                }
                Ok(())
            }
            IdealSpec::Summable { f } => {
                f.validate()?;
                if !f.sum_diverges() {
                    return Err(Error::InvalidSpec(
                        "summable ideal requires a divergent weight sum".into(),
                    ));
                }
                Ok(())
            }
            IdealSpec::GenDensity { blocks, submeasure } => {
                blocks.validate()?;
                if let SubmeasureKind::WeightedSum { weights }
                | SubmeasureKind::WeightedMax { weights } = submeasure
                {
                    weights.validate()?;
                }
                BlockSubmeasure {
                    blocks,
                    kind: submeasure,
                }
                .check_proper()
            }
            IdealSpec::Lacunary { lengths } => lengths.validate(),
            IdealSpec::Restriction { base, set } => {
                base.validate()?;
                set.validate()?;
                if member::quick_verdict(base, set) == Verdict::In {
                    return Err(Error::InvalidSpec(
                        "restriction set must lie outside the base ideal".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Block submeasure view for the two block families.
    pub(crate) fn submeasure_view(&self) -> Option<BlockSubmeasure<'_>> {
        match self {
            IdealSpec::GenDensity { blocks, submeasure } => Some(BlockSubmeasure {
                blocks,
                kind: submeasure,
            }),
            IdealSpec::Lacunary { lengths } => Some(BlockSubmeasure {
                blocks: lengths,
                kind: &SubmeasureKind::NormalizedCounting,
            }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_u64;
    use crate::summability::TailRule;

    #[test]
    fn spec_json_round_trip() {
        let specs = vec![
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
        ];
        for s in specs {
            let json = serde_json::to_string(&s).unwrap();
            let back: IdealSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(s, back);
        }
        let fixed: IdealSpec =
            serde_json::from_str(r#"{"kind":"summable","f":{"rule":"harmonic"}}"#).unwrap();
        assert_eq!(fixed, IdealSpec::summable(WeightSpec::Harmonic));
        let lac: IdealSpec =
            serde_json::from_str(r#"{"kind":"lacunary","lengths":{"rule":"linear"}}"#).unwrap();
        assert_eq!(
            lac,
            IdealSpec::Lacunary {
                lengths: LengthRule::Linear
            }
        );
    }

    #[test]
    fn validation_gates() {
        // Constant-zero weight: the sum converges, so the family is improper.
        let zero = IdealSpec::summable(WeightSpec::Constant { c: Rat::from_integer(0.into()) });
        assert!(zero.validate().is_err());
        let one = IdealSpec::summable(WeightSpec::Constant { c: rat_u64(1) });
        one.validate().unwrap();

        // Repeat-last matrices carry no regularity certificate.
        let repeat = IdealSpec::matrix(MatrixSpec::ExplicitRows {
            rows: vec![vec![rat_u64(1)]],
            tail: TailRule::RepeatLast,
        });
        assert!(repeat.validate().is_err());

        // Harmonic block weights have vanishing block mass.
        let improper = IdealSpec::GenDensity {
            blocks: LengthRule::Constant { l: 4 },
            submeasure: SubmeasureKind::WeightedSum {
                weights: WeightSpec::Harmonic,
            },
        };
        assert!(improper.validate().is_err());

        // A restriction set certified inside the base is rejected.
        let bad = IdealSpec::Restriction {
            base: Box::new(IdealSpec::DensityZero),
            set: SetExpr::sparse(crate::setexpr::SparseRule::Squares),
        };
        assert!(bad.validate().is_err());
        let good = IdealSpec::Restriction {
            base: Box::new(IdealSpec::DensityZero),
            set: SetExpr::ap(0, 2),
        };
        good.validate().unwrap();
    }
}
