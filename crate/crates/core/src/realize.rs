//! Realizability of pairs of knots as cross-sections.
//!
//! For even `n` every pair is realizable. For odd `n = 2k+1` the pair
//! `(K₁, K₂)` is realizable exactly when the Arf invariants agree (`k` even)
//! or the signatures agree (`k` odd). A positive odd verdict carries a
//! [`RealizationCertificate`]: a bridge knot `K₃` reached from `K₁` by
//! pass-moves, and a metabolizer showing `K₃` cobordant to `K₂`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cobordism::{
    algebraically_slice, cobordism_block, find_metabolizer, necessary_obstructions, scope_for,
    CobordismError, CobordismVerdict, Metabolizer, MetabolizerError, Obstruction,
};
use crate::exactalg::IntMatrix;
use crate::hyperbolic::DEFAULT_ISOTROPIC_BOUND;
use crate::passmove::{check_schedule, plan_trivializing_schedule, PassMoveError, PassMoveSchedule};
use crate::seifert::{SeifertError, SeifertKnot, Z2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("knot dimension must be positive")]
    ZeroDimension,
    #[error("n = {n} is odd and needs both Seifert matrices")]
    MissingKnot { n: u64 },
    #[error("n = {n} needs k = {expected}, got k = {found}")]
    DimensionMismatch { n: u64, expected: u64, found: u32 },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    PassMove(#[from] PassMoveError),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("schedule does not start at K1 plus trivial pairs")]
    WrongStart,
    #[error("schedule ends at {found:?}, not at K3")]
    WrongEnd { found: IntMatrix },
    #[error("schedule fails: {0}")]
    Schedule(String),
    #[error("metabolizer lives on the wrong block")]
    WrongBlock,
    #[error(transparent)]
    Metabolizer(#[from] MetabolizerError),
    #[error("K3 and K2 are separated: {0}")]
    Obstructed(Obstruction),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
}

/// The invariant values a decision compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Compared {
    Arf { left: Z2, right: Z2 },
    Sigma { left: i64, right: i64 },
}

impl Compared {
    pub fn agree(&self) -> bool {
        match *self {
            Self::Arf { left, right } => left == right,
            Self::Sigma { left, right } => left == right,
        }
    }

    /// The obstruction when the values differ.
    pub fn obstruction(&self) -> Option<Obstruction> {
        if self.agree() {
            return None;
        }
        Some(match *self {
            Self::Arf { left, right } => Obstruction::Arf { left, right },
            Self::Sigma { left, right } => Obstruction::Sigma { left, right },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizabilityVerdict {
    pub realizable: bool,
    pub n: u64,
    /// `None` for even `n`, where nothing is compared.
    pub compared: Option<Compared>,
    pub certificate: Option<RealizationCertificate>,
}

impl RealizabilityVerdict {
    pub fn obstruction(&self) -> Option<Obstruction> {
        self.compared.and_then(|c| c.obstruction())
    }
}

/// Evidence for a realizable odd-dimensional pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationCertificate {
    /// `K₁ # K̃` with `K̃` pass-move trivial.
    pub k3: SeifertKnot,
    /// Pass-moves from `K₁ # trivial` to `K₃`.
    pub schedule: PassMoveSchedule,
    /// A metabolizer of `A₃ ⊕ (-A₂)`, or an inconclusive search.
    pub metabolizer: CobordismVerdict,
}

impl RealizationCertificate {
    /// Replays the schedule and validates the metabolizer against `k1`, `k2`.
    ///
    /// An inconclusive metabolizer passes only when the invariants of `K₃`
    /// and `K₂` agree.
    pub fn verify(&self, k1: &SeifertKnot, k2: &SeifertKnot) -> Result<(), CertificateError> {
        let pad = SeifertKnot::trivial_blocks(k1.k(), self.k3.dim().saturating_sub(k1.dim()) / 2);
        let start = k1.connected_sum(&pad).map_err(CobordismError::from)?;
        if self.schedule.start != start {
            return Err(CertificateError::WrongStart);
        }
        if &self.schedule.claimed_end != self.k3.matrix() {
            return Err(CertificateError::WrongEnd {
                found: self.schedule.claimed_end.clone(),
            });
        }
        check_schedule(&self.schedule).map_err(|f| CertificateError::Schedule(f.to_string()))?;
        let block = cobordism_block(&self.k3, k2)?;
        match &self.metabolizer {
            CobordismVerdict::Cobordant { witness, .. } => {
                if witness.context() != &block {
                    return Err(CertificateError::WrongBlock);
                }
                witness.validate()?;
                Ok(())
            }
            CobordismVerdict::Obstructed(o) => Err(CertificateError::Obstructed(*o)),
            CobordismVerdict::Inconclusive { .. } => match necessary_obstructions(&self.k3, k2)? {
                CobordismVerdict::Obstructed(o) => Err(CertificateError::Obstructed(o)),
                _ => Ok(()),
            },
        }
    }
}

fn check_k(n: u64, knot: &SeifertKnot) -> Result<(), RealizeError> {
    let expected = (n - 1) / 2;
    if u64::from(knot.k()) != expected {
        return Err(RealizeError::DimensionMismatch {
            n,
            expected,
            found: knot.k(),
        });
    }
    Ok(())
}

/// For odd `n`, both knots checked against `k = (n-1)/2`.
fn odd_pair<'a>(
    n: u64,
    k1: Option<&'a SeifertKnot>,
    k2: Option<&'a SeifertKnot>,
) -> Result<(&'a SeifertKnot, &'a SeifertKnot), RealizeError> {
    let (Some(a), Some(b)) = (k1, k2) else {
        return Err(RealizeError::MissingKnot { n });
    };
    check_k(n, a)?;
    check_k(n, b)?;
    Ok((a, b))
}

fn compare(k1: &SeifertKnot, k2: &SeifertKnot) -> Result<Compared, SeifertError> {
    Ok(if k1.is_k_even() {
        Compared::Arf {
            left: k1.arf()?,
            right: k2.arf()?,
        }
    } else {
        Compared::Sigma {
            left: k1.sigma()?,
            right: k2.sigma()?,
        }
    })
}

/// Decides whether `(K₁, K₂)` is realizable for `n`-knots.
///
/// Even `n` needs no matrices and any given ones are ignored.
pub fn decide_realizable(
    n: u64,
    k1: Option<&SeifertKnot>,
    k2: Option<&SeifertKnot>,
) -> Result<RealizabilityVerdict, RealizeError> {
    if n == 0 {
        return Err(RealizeError::ZeroDimension);
    }
    if n % 2 == 0 {
        return Ok(RealizabilityVerdict {
            realizable: true,
            n,
            compared: None,
            certificate: None,
        });
    }
    let (k1, k2) = odd_pair(n, k1, k2)?;
    let compared = compare(k1, k2)?;
    let certificate = if compared.agree() {
        Some(build_certificate(k1, k2, crate::cobordism::DEFAULT_METABOLIZER_BOUND)?)
    } else {
        None
    };
    Ok(RealizabilityVerdict {
        realizable: compared.agree(),
        n,
        compared: Some(compared),
        certificate,
    })
}

/// Builds `K₃ = K₁ # K̃` where `K̃` is the normalized, pass-move trivial form
/// of `D = (-K₁*) # K₂`.
///
/// With `D` put in the basis `S`, so `X = S·D·ᵗS`, the block
/// `A₁ ⊕ X ⊕ (-A₂)` is `P·(A₁ ⊕ (-A₁) ⊕ A₂ ⊕ (-A₂))·ᵗP` for
/// `P = I ⊕ S ⊕ I`. The diagonal metabolizer of the right-hand block moved by
/// `P⁻¹` is the metabolizer of the certificate. A search bounded by
/// `coeff_bound` is the fallback.
pub fn build_certificate(
    k1: &SeifertKnot,
    k2: &SeifertKnot,
    coeff_bound: u32,
) -> Result<RealizationCertificate, RealizeError> {
    let d = k1.minus_star().connected_sum(k2)?;
    let plan = plan_trivializing_schedule(&d, DEFAULT_ISOTROPIC_BOUND)?;
    let tilde = SeifertKnot::new(k1.k(), plan.target().clone())?;
    let k3 = k1.connected_sum(&tilde)?;
    let schedule = plan.schedule.behind_summand(k1)?;
    let block = cobordism_block(&k3, k2)?;
    let s_inv = plan.witness.inverse();
    let metabolizer = match transported_metabolizer(k1.dim(), k2.dim(), s_inv.transform(), &block) {
        Some(witness) => CobordismVerdict::Cobordant {
            witness,
            scope: scope_for(k1.k()),
        },
        None => match find_metabolizer(&block, coeff_bound)? {
            CobordismVerdict::Cobordant { witness, .. } => CobordismVerdict::Cobordant {
                witness,
                scope: scope_for(k1.k()),
            },
            other => other,
        },
    };
    Ok(RealizationCertificate {
        k3,
        schedule,
        metabolizer,
    })
}

/// Rows `eᵢ + e_{d₁+i}` and `e_{2d₁+j} + e_{2d₁+d₂+j}` multiplied by `P⁻¹`.
fn transported_metabolizer(d1: usize, d2: usize, s_inv: &IntMatrix, block: &IntMatrix) -> Option<Metabolizer> {
    let total = 2 * (d1 + d2);
    let mid = d1 + d2;
    let mut vectors = Vec::with_capacity(d1 + d2);
    for i in 0..d1 {
        let mut v = vec![BigInt::zero(); total];
        v[i] = BigInt::from(1);
        // e_i of the middle block times S⁻¹ is row i of S⁻¹
        v[d1..d1 + mid].clone_from_slice(s_inv.row(i));
        vectors.push(v);
    }
    for j in 0..d2 {
        let mut v = vec![BigInt::zero(); total];
        v[d1..d1 + mid].clone_from_slice(s_inv.row(d1 + j));
        v[d1 + mid + j] = BigInt::from(1);
        vectors.push(v);
    }
    Metabolizer::new(vectors, block.clone()).ok()
}

/// Sliceness evidence for a 4-tuple of `(n, n+2)`-knots with middle pair `(K₁, K₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FourTupleVerdict {
    /// Even `n`: every 4-tuple is realizable.
    EvenDimension,
    /// Both knots are algebraically slice, which suffices.
    BothSlice { first: Metabolizer, second: Metabolizer },
    /// One of the knots is not slice, so the sufficient condition fails.
    /// Realizability is left open.
    NotCertified { first: CobordismVerdict, second: CobordismVerdict },
    /// The slice searches gave no answer within the bound.
    Inconclusive { first: CobordismVerdict, second: CobordismVerdict },
}

impl FourTupleVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::EvenDimension | Self::BothSlice { .. })
    }
}

pub fn decide_4tuple(
    n: u64,
    k1: Option<&SeifertKnot>,
    k2: Option<&SeifertKnot>,
    coeff_bound: u32,
) -> Result<FourTupleVerdict, RealizeError> {
    if n == 0 {
        return Err(RealizeError::ZeroDimension);
    }
    if n % 2 == 0 {
        return Ok(FourTupleVerdict::EvenDimension);
    }
    let (k1, k2) = odd_pair(n, k1, k2)?;
    let first = algebraically_slice(k1, coeff_bound)?;
    let second = algebraically_slice(k2, coeff_bound)?;
    Ok(match (&first, &second) {
        (CobordismVerdict::Cobordant { witness: a, .. }, CobordismVerdict::Cobordant { witness: b, .. }) => {
            FourTupleVerdict::BothSlice {
                first: a.clone(),
                second: b.clone(),
            }
        }
        _ if first.is_obstructed() || second.is_obstructed() => FourTupleVerdict::NotCertified { first, second },
        _ => FourTupleVerdict::Inconclusive { first, second },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{negative_e8_knot, random_e8_knot, random_knot};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arf_one(k: u32) -> SeifertKnot {
        SeifertKnot::new(k, IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap()
    }

    #[test]
    fn even_dimension_needs_nothing() {
        let v = decide_realizable(2, None, None).unwrap();
        assert!(v.realizable && v.compared.is_none() && v.certificate.is_none());
        assert_eq!(decide_4tuple(4, None, None, 1).unwrap(), FourTupleVerdict::EvenDimension);
    }

    #[test]
    fn arf_mismatch_is_reported() {
        let v = decide_realizable(5, Some(&arf_one(2)), Some(&SeifertKnot::trivial(2))).unwrap();
        assert!(!v.realizable);
        assert_eq!(
            v.obstruction(),
            Some(Obstruction::Arf {
                left: Z2::ONE,
                right: Z2::ZERO
            })
        );
    }

    #[test]
    fn trivial_pair_has_empty_certificate() {
        let t = SeifertKnot::trivial(1);
        let c = build_certificate(&t, &t, 1).unwrap();
        assert_eq!(c.k3.dim(), 0);
        assert!(c.schedule.is_empty());
        assert_eq!(c.metabolizer.witness().unwrap().rank(), 0);
        c.verify(&t, &t).unwrap();
    }

    #[test]
    fn e8_pair_is_realizable_with_certificate() {
        let k = negative_e8_knot(1);
        let v = decide_realizable(3, Some(&k), Some(&k)).unwrap();
        assert!(v.realizable);
        assert_eq!(v.compared, Some(Compared::Sigma { left: -8, right: -8 }));
        let c = v.certificate.unwrap();
        assert!(c.metabolizer.is_cobordant());
        c.verify(&k, &k).unwrap();
    }

    #[test]
    fn obstructed_precondition_is_an_error() {
        let err = build_certificate(&SeifertKnot::trivial(1), &negative_e8_knot(1), 1).unwrap_err();
        assert!(matches!(err, RealizeError::PassMove(PassMoveError::ObstructionNonzero(_))));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let t = SeifertKnot::trivial(1);
        assert_eq!(decide_realizable(0, None, None).unwrap_err(), RealizeError::ZeroDimension);
        assert_eq!(
            decide_realizable(3, Some(&t), None).unwrap_err(),
            RealizeError::MissingKnot { n: 3 }
        );
        assert!(matches!(
            decide_realizable(5, Some(&t), Some(&t)).unwrap_err(),
            RealizeError::DimensionMismatch { n: 5, expected: 2, found: 1 }
        ));
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k1 = random_knot(&mut rng, 1, 2, 6);
        let k2 = random_knot(&mut rng, 1, 1, 6);
        let mut c = build_certificate(&k1, &k2, 1).unwrap();
        c.verify(&k1, &k2).unwrap();
        assert!(c.verify(&k2, &k1).is_err());
        if let Some(op) = c.schedule.ops.first_mut() {
            op.delta = -op.delta;
            assert!(c.verify(&k1, &k2).is_err());
        }
    }

    #[test]
    fn four_tuple_examples() {
        let t = SeifertKnot::trivial_blocks(1, 2);
        assert!(matches!(
            decide_4tuple(3, Some(&t), Some(&t), 1).unwrap(),
            FourTupleVerdict::BothSlice { .. }
        ));
        let e8 = negative_e8_knot(1);
        let v = decide_4tuple(3, Some(&e8), Some(&t), 1).unwrap();
        assert!(matches!(v, FourTupleVerdict::NotCertified { .. }));
        assert!(!v.is_certified());
    }

    fn pair(seed: u64, k: u32) -> (SeifertKnot, SeifertKnot) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = |rng: &mut ChaCha8Rng| {
            if k % 2 == 1 && rng.gen_bool(0.3) {
                let extra = rng.gen_range(0..2);
                random_e8_knot(rng, k, extra)
            } else {
                let pairs = rng.gen_range(0..3);
                random_knot(rng, k, pairs, 8)
            }
        };
        let a = one(&mut rng);
        let b = one(&mut rng);
        (a, b)
    }


    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn decision_is_symmetric_and_certified(seed in any::<u64>(), k in 0u32..4) {
            let (a, b) = pair(seed, k);
            let n = 2 * u64::from(k) + 1;
            let ab = decide_realizable(n, Some(&a), Some(&b)).unwrap();
            let ba = decide_realizable(n, Some(&b), Some(&a)).unwrap();
            prop_assert_eq!(ab.realizable, ba.realizable);
            prop_assert_eq!(ab.realizable, ab.obstruction().is_none());
            if let Some(c) = &ab.certificate {
                prop_assert!(c.verify(&a, &b).is_ok());
            }
            prop_assert_eq!(ab.realizable, ab.certificate.is_some());
        }

        #[test]
        fn pairs_with_themselves_are_realizable(seed in any::<u64>(), k in 0u32..4) {
            let (a, _) = pair(seed, k);
            let v = decide_realizable(2 * u64::from(k) + 1, Some(&a), Some(&a)).unwrap();
            prop_assert!(v.realizable);
            prop_assert!(v.certificate.unwrap().verify(&a, &a).is_ok());
        }

        #[test]
        fn realizability_survives_cobordism(seed in any::<u64>(), k in 0u32..4) {
            let (a, b) = pair(seed, k);
            let n = 2 * u64::from(k) + 1;
            // b # (a # -a*) is cobordant to b
            let c = b.connected_sum(&a.connected_sum(&a.minus_star()).unwrap()).unwrap();
            let (db, da) = (b.dim(), a.dim());
            let diagonal = |i: usize, j: usize| {
                let mut v = vec![BigInt::zero(); 2 * (db + da)];
                v[i] = BigInt::from(1);
                v[j] = BigInt::from(1);
                v
            };
            let rows = (0..db)
                .map(|i| diagonal(i, db + i))
                .chain((0..da).map(|i| diagonal(2 * db + i, 2 * db + da + i)))
                .collect();
            prop_assert!(Metabolizer::new(rows, cobordism_block(&b, &c).unwrap()).is_ok());
            let ab = decide_realizable(n, Some(&a), Some(&b)).unwrap();
            let ac = decide_realizable(n, Some(&a), Some(&c)).unwrap();
            prop_assert_eq!(ab.realizable, ac.realizable);
        }
    }
}
