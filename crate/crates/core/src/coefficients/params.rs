//! Equation parameters, cube-root branch selection and the scaling symmetry
//! of Painlevé III.

use rug::{Complex, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{principal_cbrt, principal_sqrt, rational_cbrt, QOmega, Scalar};

/// Parameters `(α, β, δ)` of the modified Painlevé III equation. `γ` is
/// fixed at zero and not stored.
///
/// `P` is [`Rational`] for exact parameter sets and [`Complex`] for numeric
/// ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet<P> {
    pub alpha: P,
    pub beta: P,
    pub delta: P,
}

impl<P: Scalar> ParameterSet<P> {
    pub fn new(alpha: P, beta: P, delta: P) -> Result<Self> {
        if alpha.is_zero() || delta.is_zero() {
            return Err(Error::ParameterDomain("alpha and delta must be nonzero".into()));
        }
        Ok(Self { alpha, beta, delta })
    }

    /// `−δ/α`, whose cube roots are the admissible leading coefficients.
    pub fn cube_target(&self) -> P {
        self.delta.negated().over(&self.alpha)
    }

    pub fn ctx(&self) -> P::Ctx {
        self.alpha.ctx()
    }
}

impl ParameterSet<Rational> {
    /// `α = −1/32, β = −1/4, δ = −1/32`.
    pub fn special() -> Self {
        Self { alpha: Rational::from((-1, 32)), beta: Rational::from((-1, 4)), delta: Rational::from((-1, 32)) }
    }

    pub fn is_special(&self) -> bool {
        *self == Self::special()
    }

    pub fn to_numeric(&self, prec: u32) -> ParameterSet<Complex> {
        ParameterSet {
            alpha: self.alpha.to_complex(prec),
            beta: self.beta.to_complex(prec),
            delta: self.delta.to_complex(prec),
        }
    }
}

/// Which cube root of `−δ/α` is used as `a_0`.
///
/// `a_0 = ω^index · r` where `r` is `override_a0` when given and otherwise
/// the principal cube root (argument in `(−π/3, π/3]`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct BranchSelector {
    pub index: u8,
    #[serde(serialize_with = "override_string")]
    pub override_a0: Option<Rational>,
}

fn override_string<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

impl BranchSelector {
    pub fn principal(index: u8) -> Self {
        Self { index, override_a0: None }
    }

    pub fn with_override(index: u8, a0: Rational) -> Self {
        Self { index, override_a0: Some(a0) }
    }

    /// The standard branch for the special parameters: `a_0 = −1`.
    pub fn special() -> Self {
        Self::with_override(0, Rational::from(-1))
    }

    fn check_index(&self) -> Result<()> {
        if self.index > 2 {
            return Err(Error::Branch(format!("branch index {} not in {{0, 1, 2}}", self.index)));
        }
        Ok(())
    }
}

/// Selection of `a_0` in a given scalar field.
pub trait BranchRoot: Scalar {
    fn leading_coefficient(params: &ParameterSet<Self::Param>, branch: &BranchSelector, ctx: Self::Ctx)
        -> Result<Self>;
}

fn exact_base_root(params: &ParameterSet<Rational>, branch: &BranchSelector) -> Result<Rational> {
    let target = params.cube_target();
    match &branch.override_a0 {
        Some(r) => {
            if Rational::from(r * r) * r != target {
                return Err(Error::Branch(format!("override a0 = {r} does not cube to {target}")));
            }
            Ok(r.clone())
        }
        None => match rational_cbrt(&target) {
            Some(r) if r.cmp0() == std::cmp::Ordering::Greater => Ok(r),
            _ => Err(Error::Branch(format!("principal cube root of {target} is not rational; supply an override a0"))),
        },
    }
}

impl BranchRoot for Rational {
    fn leading_coefficient(params: &ParameterSet<Rational>, branch: &BranchSelector, _: ()) -> Result<Self> {
        branch.check_index()?;
        if branch.index != 0 {
            return Err(Error::Mode("branch index 1 or 2 needs the ω-extended field; use QOmega".into()));
        }
        exact_base_root(params, branch)
    }
}

impl BranchRoot for QOmega {
    fn leading_coefficient(params: &ParameterSet<Rational>, branch: &BranchSelector, _: ()) -> Result<Self> {
        branch.check_index()?;
        let r = exact_base_root(params, branch)?;
        Ok(QOmega::from_rational_value(r).times_omega_pow(branch.index as u32).unwrap())
    }
}

impl BranchRoot for Complex {
    fn leading_coefficient(params: &ParameterSet<Complex>, branch: &BranchSelector, prec: u32) -> Result<Self> {
        branch.check_index()?;
        let target = Complex::with_val(prec, params.cube_target());
        let base = match &branch.override_a0 {
            Some(r) => {
                let r = Complex::with_val(prec, r);
                let cube = r.times(&r).times(&r);
                if !cube.is_close(&target) {
                    return Err(Error::Branch(format!("override a0 does not cube to -delta/alpha at {prec} bits")));
                }
                r
            }
            None => principal_cbrt(&target),
        };
        Ok(base.times_omega_pow(branch.index as u32).unwrap())
    }
}

/// Full Painlevé III parameter tuple including `γ`, as acted on by the
/// scaling symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct FullParameters<P> {
    pub alpha: P,
    pub beta: P,
    pub gamma: P,
    pub delta: P,
}

impl<P: Scalar> FullParameters<P> {
    pub fn from_set(p: &ParameterSet<P>) -> Self {
        Self { alpha: p.alpha.clone(), beta: p.beta.clone(), gamma: P::zero(p.ctx()), delta: p.delta.clone() }
    }

    /// Drops `γ`; fails unless it is zero.
    pub fn into_set(self) -> Result<ParameterSet<P>> {
        if !self.gamma.is_zero() {
            return Err(Error::ParameterDomain("gamma must be zero".into()));
        }
        ParameterSet::new(self.alpha, self.beta, self.delta)
    }
}

/// If `w(z)` solves Painlevé III with `(α, β, γ, δ)`, then `σ1·w(σ2·z)`
/// solves it with `(α σ1⁻¹σ2, β σ1σ2, γ σ1⁻²σ2², δ σ1²σ2²)`.
pub fn transform_parameters<P: Scalar>(
    params: &FullParameters<P>,
    sigma1: &P,
    sigma2: &P,
) -> Result<FullParameters<P>> {
    if sigma1.is_zero() || sigma2.is_zero() {
        return Err(Error::ParameterDomain("sigma1 * sigma2 must be nonzero".into()));
    }
    let s12 = sigma1.times(sigma2);
    let s2_over_s1 = sigma2.over(sigma1);
    Ok(FullParameters {
        alpha: params.alpha.times(&s2_over_s1),
        beta: params.beta.times(&s12),
        gamma: params.gamma.times(&s2_over_s1).times(&s2_over_s1),
        delta: params.delta.times(&s12).times(&s12),
    })
}

/// Scaling factors `(σ1, σ2)` taking a parameter set with `αβ ≠ 0`,
/// `δ = −β²/2` to `(−1/32, −1/4, −1/32)`: `σ2² = (1/128)/(αβ)` with the
/// principal square root, `σ1 = (−1/4)/(βσ2)`.
pub fn normalize_to_special(params: &ParameterSet<Complex>) -> Result<(Complex, Complex)> {
    let prec = params.ctx();
    if classify_rational_case(params, DEFAULT_K_BOUND) != RationalCase::Theorem1Divergent {
        return Err(Error::Classification("parameters are not in the class alpha*beta != 0, delta = -beta^2/2".into()));
    }
    let ab = params.alpha.times(&params.beta);
    let s2sq = Complex::with_val(prec, Rational::from((1, 128))).over(&ab);
    let sigma2 = principal_sqrt(&s2sq);
    let sigma1 = Complex::with_val(prec, Rational::from((-1, 4))).over(&params.beta.times(&sigma2));
    Ok((sigma1, sigma2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum RationalCase {
    /// The formal series is a rational function: `β = 0` (`k = None`) or
    /// `δ = −β²/(4k)²`.
    Rational {
        k: Option<i64>,
    },
    /// `αβ ≠ 0` and `δ = −β²/2`: the series has exact Gevrey order one.
    Theorem1Divergent,
    Unclassified,
}

pub const DEFAULT_K_BOUND: i64 = 1000;

/// Classifies a parameter set; `k_bound` limits the search over `|k|`.
pub fn classify_rational_case<P: Scalar>(params: &ParameterSet<P>, k_bound: i64) -> RationalCase {
    let ctx = params.ctx();
    if params.beta.is_zero() {
        return RationalCase::Rational { k: None };
    }
    let beta2 = params.beta.times(&params.beta);
    for k in 1..=k_bound {
        let denom = P::from_i64(16 * k * k, ctx);
        let candidate = beta2.over(&denom).negated();
        if params.delta.is_close(&candidate) {
            return RationalCase::Rational { k: Some(k) };
        }
    }
    let half = beta2.over(&P::from_i64(2, ctx)).negated();
    if !params.alpha.is_zero() && params.delta.is_close(&half) {
        return RationalCase::Theorem1Divergent;
    }
    RationalCase::Unclassified
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn full(a: Rational, b: Rational, d: Rational) -> FullParameters<Rational> {
        FullParameters { alpha: a, beta: b, gamma: Rational::new(), delta: d }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(ParameterSet::new(q(0, 1), q(1, 1), q(1, 1)).is_err());
        assert!(ParameterSet::new(q(1, 1), q(1, 1), q(0, 1)).is_err());
        assert!(ParameterSet::new(q(1, 1), q(0, 1), q(1, 1)).is_ok());
    }

    #[test]
    fn classification_examples() {
        let p = ParameterSet::new(q(1, 1), q(0, 1), q(-1, 1)).unwrap();
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Rational { k: None });
        let p = ParameterSet::special();
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Theorem1Divergent);
        let p = ParameterSet::new(q(1, 1), q(-1, 4), q(-1, 256)).unwrap();
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Rational { k: Some(1) });
        let p = ParameterSet::new(q(1, 1), q(-1, 4), q(-1, 16 * 16 * 9)).unwrap();
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Rational { k: Some(3) });
        assert_eq!(classify_rational_case(&p, 2), RationalCase::Unclassified);
        let p = ParameterSet::new(q(-1, 32), q(-1, 4), q(1, 32)).unwrap();
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Unclassified);
        // numeric classification with tolerance
        let p = ParameterSet::special().to_numeric(128);
        assert_eq!(classify_rational_case(&p, 100), RationalCase::Theorem1Divergent);
    }

    #[test]
    fn exact_branch_selection() {
        let p = ParameterSet::special();
        // principal root of −1 is not rational
        assert!(Rational::leading_coefficient(&p, &BranchSelector::principal(0), ()).is_err());
        let a0 = Rational::leading_coefficient(&p, &BranchSelector::special(), ()).unwrap();
        assert_eq!(a0, q(-1, 1));
        let bad = BranchSelector::with_override(0, q(1, 1));
        assert!(matches!(Rational::leading_coefficient(&p, &bad, ()), Err(Error::Branch(_))));
        let rot = BranchSelector::with_override(1, q(-1, 1));
        assert!(Rational::leading_coefficient(&p, &rot, ()).is_err());
        let w = QOmega::leading_coefficient(&p, &rot, ()).unwrap();
        assert_eq!(w, QOmega::new(q(0, 1), q(-1, 1)));
        let p8 = ParameterSet::new(q(-1, 1), q(1, 1), q(8, 1)).unwrap();
        assert_eq!(Rational::leading_coefficient(&p8, &BranchSelector::principal(0), ()).unwrap(), q(2, 1));
        assert!(Rational::leading_coefficient(&p8, &BranchSelector::principal(3), ()).is_err());
    }

    #[test]
    fn numeric_branch_selection() {
        let p = ParameterSet::special().to_numeric(128);
        let a0 = Complex::leading_coefficient(&p, &BranchSelector::principal(0), 128).unwrap();
        let cube = a0.times(&a0).times(&a0);
        assert!(cube.is_close(&Complex::with_val(128, -1)));
        assert!(a0.real().is_sign_positive());
        let a0 = Complex::leading_coefficient(&p, &BranchSelector::special(), 128).unwrap();
        assert_eq!(a0, Complex::with_val(128, -1));
        let bad = BranchSelector::with_override(0, q(2, 1));
        assert!(Complex::leading_coefficient(&p, &bad, 128).is_err());
    }

    #[test]
    fn transform_identity_and_class_preservation() {
        let p = full(q(-1, 1), q(-1, 1), q(-1, 2));
        let id = transform_parameters(&p, &q(1, 1), &q(1, 1)).unwrap();
        assert_eq!(id, p);
        let t = transform_parameters(&p, &q(3, 7), &q(-5, 2)).unwrap();
        let half = Rational::from(&t.beta * &t.beta) / -2;
        assert_eq!(t.delta, half);
        assert!(transform_parameters(&p, &q(0, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn transforms_compose() {
        let p = full(q(2, 3), q(-1, 5), q(7, 11));
        let (s1, s2, t1, t2) = (q(3, 2), q(-1, 3), q(5, 7), q(2, 1));
        let once = transform_parameters(&p, &s1, &s2).unwrap();
        let twice = transform_parameters(&once, &t1, &t2).unwrap();
        let prod = transform_parameters(&p, &Rational::from(&s1 * &t1), &Rational::from(&s2 * &t2)).unwrap();
        assert_eq!(twice, prod);
    }

    #[test]
    fn normalization_reaches_special() {
        let prec = 256;
        let special = ParameterSet::special().to_numeric(prec);
        let (s1, s2) = normalize_to_special(&special).unwrap();
        assert!(s1.is_close(&Complex::with_val(prec, 1)));
        assert!(s2.is_close(&Complex::with_val(prec, 1)));

        let p = ParameterSet::new(q(-1, 1), q(-1, 1), q(-1, 2)).unwrap().to_numeric(prec);
        let (s1, s2) = normalize_to_special(&p).unwrap();
        let expect_s2 = principal_sqrt(&Complex::with_val(prec, q(1, 128)));
        assert!(s2.is_close(&expect_s2));
        let expect_s1 = Complex::with_val(prec, q(1, 4)).over(&expect_s2);
        assert!(s1.is_close(&expect_s1));
        let mapped = transform_parameters(&FullParameters::from_set(&p), &s1, &s2).unwrap().into_set().unwrap();
        assert!(mapped.alpha.is_close(&special.alpha));
        assert!(mapped.beta.is_close(&special.beta));
        assert!(mapped.delta.is_close(&special.delta));

        let off = ParameterSet::new(q(-1, 32), q(-1, 4), q(1, 32)).unwrap().to_numeric(prec);
        assert!(matches!(normalize_to_special(&off), Err(Error::Classification(_))));
    }

    #[test]
    fn normalization_with_complex_parameters() {
        let prec = 192;
        let alpha = Complex::with_val(prec, (0.3, -1.25));
        let beta = Complex::with_val(prec, (-2, 0.5));
        let delta = beta.times(&beta).over(&Complex::with_val(prec, 2)).negated();
        let p = ParameterSet::new(alpha, beta, delta).unwrap();
        let (s1, s2) = normalize_to_special(&p).unwrap();
        let mapped = transform_parameters(&FullParameters::from_set(&p), &s1, &s2).unwrap();
        let special = ParameterSet::special().to_numeric(prec);
        assert!(mapped.alpha.is_close(&special.alpha));
        assert!(mapped.beta.is_close(&special.beta));
        assert!(mapped.delta.is_close(&special.delta));
    }
}
