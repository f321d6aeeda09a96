//! Certified width bounds assembled from mechanically checked hypotheses.
//!
//! Two mechanisms, both exact:
//!
//! * **Lower bound.** A fixed point of a Hamiltonian circle action whose
//!   isotropy weights are all one, on a compact connected manifold with
//!   integral symplectic class, admits an embedded ball of capacity one: the
//!   moment map's distance to the next critical level is integral, and all
//!   weights one means the full unit-capacity flow-out survives.
//! * **Upper bound.** A nonvanishing genus-zero three-point invariant through
//!   the point class forces every symplectic ball to have capacity at most
//!   the area lambda of the curve class, provided the manifold is monotone
//!   and the class is indecomposable: a bigger ball would miss the curves
//!   that the invariant says must pass through its center.
//!
//! A [`WidthCertificate`] records the bounds together with every hypothesis
//! checked on the way; it is evidence, not a formal proof object.

use crate::partition::{BoxContext, Partition};
use crate::rational;
use crate::schubert::{gw_invariant_3pt, SchubertError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("empty isotropy weight list: not a fixed point of an effective action")]
    EmptyWeights,
    #[error("negative candidate bound {0}: capacities are positive")]
    NegativeLambda(String),
    #[error(transparent)]
    Schubert(#[from] SchubertError),
}

/// Evidence that the manifold is monotone: omega and c1 are proportional on
/// the generator of a rank-one second homology, with positive ratio.
///
/// `lambda` is the symplectic area of the curve class A itself (the candidate
/// width bound), not the monotonicity constant omega(A)/c1(A).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    #[serde(with = "rational::bigint")]
    pub c1_of_a: BigInt,
    #[serde(with = "rational")]
    pub omega_of_a: BigRational,
    #[serde(with = "rational")]
    pub lambda: BigRational,
}

impl MonotonicityCheck {
    pub fn new(c1_of_a: BigInt, omega_of_a: BigRational) -> Self {
        let lambda = omega_of_a.clone();
        MonotonicityCheck { c1_of_a, omega_of_a, lambda }
    }

    pub fn passes(&self) -> bool {
        self.c1_of_a.is_positive() && self.lambda.is_positive()
    }
}

/// Evidence that the curve class cannot split into two or more spherical
/// classes of positive area: its area already equals the minimal positive
/// period of omega on spherical classes, so any splitting would need a
/// summand below the minimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndecomposabilityCheck {
    #[serde(with = "rational")]
    pub omega_of_a: BigRational,
    #[serde(with = "rational")]
    pub minimal_positive_period: BigRational,
}

impl IndecomposabilityCheck {
    pub fn passes(&self) -> bool {
        self.minimal_positive_period.is_positive()
            && self.omega_of_a == self.minimal_positive_period
    }
}

/// Why the lower bound holds: the fixed point used, its isotropy weights, and
/// the integrality of the symplectic class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerReason {
    pub fixed_point: String,
    pub weights: Vec<i64>,
    pub form_is_integral: bool,
}

/// Why the upper bound holds: the three classes, degree, invariant value, and
/// the three hypothesis checks feeding [`upper_bound_from_invariant`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperReason {
    pub lambda_class: Partition,
    pub mu_class: Partition,
    pub nu_class: Partition,
    pub degree: u64,
    #[serde(with = "rational::bigint")]
    pub invariant: BigInt,
    pub dimension_ok: bool,
    pub monotonicity: MonotonicityCheck,
    pub indecomposability: IndecomposabilityCheck,
}

/// Certified bounds on the Gromov width, with the checked hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthCertificate {
    #[serde(with = "rational::opt")]
    pub lower: Option<BigRational>,
    #[serde(with = "rational::opt")]
    pub upper: Option<BigRational>,
    pub lower_reason: LowerReason,
    pub upper_reason: UpperReason,
}

/// Ball of capacity one from a fixed point where every isotropy weight is one
/// and the symplectic class is integral; no conclusion otherwise.
pub fn lower_bound_all_weights_one(
    weights: &[i64],
    form_is_integral: bool,
) -> Result<Option<BigRational>, CertificateError> {
    if weights.is_empty() {
        return Err(CertificateError::EmptyWeights);
    }
    if form_is_integral && weights.iter().all(|&w| w == 1) {
        Ok(Some(BigRational::one()))
    } else {
        Ok(None)
    }
}

/// Genus-zero invariant dimension count for s marked constraints: the
/// constraint codimensions must use up the moduli dimension exactly,
/// sum(codims) = real_dim + 2 c1(A) + 2s - 6.
pub fn dimension_condition(s: usize, codims: &[u64], real_dim: u64, c1_of_a: i64) -> bool {
    assert_eq!(s, codims.len(), "s must equal the number of constraints");
    assert!(s >= 1, "at least one constraint");
    let lhs: i128 = codims.iter().map(|&c| c as i128).sum();
    lhs == real_dim as i128 + 2 * c1_of_a as i128 + 2 * s as i128 - 6
}

/// The upper bound lambda when every hypothesis holds: monotone, class
/// indecomposable, dimension condition satisfied, invariant nonzero.
/// Any failed hypothesis yields no bound rather than a different number.
pub fn upper_bound_from_invariant(
    lambda: BigRational,
    mono: &MonotonicityCheck,
    indec: &IndecomposabilityCheck,
    dim_ok: bool,
    invariant_value: &BigInt,
) -> Result<Option<BigRational>, CertificateError> {
    if lambda.is_negative() {
        return Err(CertificateError::NegativeLambda(rational::to_string(&lambda)));
    }
    debug_assert_eq!(lambda, mono.omega_of_a, "lambda must be the area of A");
    if mono.passes() && indec.passes() && dim_ok && !invariant_value.is_zero() {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// Both bounds for Gr(k,n) with the form normalized so a line has area one.
///
/// Lower: the circle acting by scalar multiplication on the chart fixes each
/// coordinate k-plane with every isotropy weight equal to one, and the class
/// is integral. Upper: the degree-one invariant through a point, the special
/// codimension-k cell, and the special codimension-(n-k) cell equals one, on
/// a monotone manifold (c1 = n times the generator) whose line class is
/// indecomposable by integrality. Both sides come out to one.
pub fn grassmannian_width_certificate(
    ctx: BoxContext,
) -> Result<WidthCertificate, CertificateError> {
    let dim = ctx.dim() as usize;

    // Scalar multiplication acts on the chart at the standard coordinate
    // k-plane with tangent weights all one.
    let weights = vec![1i64; dim];
    let lower = lower_bound_all_weights_one(&weights, true)?;
    let lower_reason = LowerReason {
        fixed_point: format!("coordinate k-plane <e1..e{}>", ctx.k),
        weights,
        form_is_integral: true,
    };

    let point = ctx.point_class();
    let column = ctx.column_class();
    let row = ctx.row_class();
    let invariant = gw_invariant_3pt(&point, &column, &row, 1, ctx)?;

    let real_dim = 2 * ctx.dim();
    let codims = [2 * ctx.dim(), 2 * u64::from(ctx.k), 2 * u64::from(ctx.width())];
    let dim_ok = dimension_condition(3, &codims, real_dim, i64::from(ctx.n));

    let one = BigRational::one();
    let mono = MonotonicityCheck::new(BigInt::from(ctx.n), one.clone());
    let indec = IndecomposabilityCheck {
        omega_of_a: one.clone(),
        minimal_positive_period: one.clone(),
    };
    let upper = upper_bound_from_invariant(one, &mono, &indec, dim_ok, &invariant)?;

    let certificate = WidthCertificate {
        lower,
        upper,
        lower_reason,
        upper_reason: UpperReason {
            lambda_class: point,
            mu_class: column,
            nu_class: row,
            degree: 1,
            invariant,
            dimension_ok: dim_ok,
            monotonicity: mono,
            indecomposability: indec,
        },
    };
    if let (Some(lo), Some(hi)) = (&certificate.lower, &certificate.upper) {
        assert!(lo <= hi, "certificate bounds crossed: {lo} > {hi}");
    }
    Ok(certificate)
}
