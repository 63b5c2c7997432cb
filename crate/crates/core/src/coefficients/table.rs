use rug::Rational;

use super::params::{BranchRoot, BranchSelector, ParameterSet};
use crate::error::{Error, Result};
use crate::scalar::{Mode, QOmega, Scalar};

/// Which rule produced the coefficients of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    /// General recurrence for arbitrary `(α, β, δ)`, `n ≥ 4`.
    General,
    /// Special-parameter recurrence with the constants substituted, used from
    /// `n = 6`.
    SpecialDirect,
    /// Rearranged special-parameter recurrence (`n ≥ 9`) seeded by the
    /// direct form for `6 ≤ n ≤ 8`.
    SpecialRearranged,
    /// Obtained from another table by multiplying `a_n` by `ω^{k(n+1)}`.
    Rotated { k: u8 },
    /// Obtained by the scaling symmetry from another table.
    Rescaled,
    /// Read from a coefficient file; no recurrence was run.
    Loaded,
}

impl Recurrence {
    pub fn label(self) -> String {
        match self {
            Recurrence::General => "general".into(),
            Recurrence::SpecialDirect => "special-direct".into(),
            Recurrence::SpecialRearranged => "special-rearranged".into(),
            Recurrence::Rotated { k } => format!("rotated-{k}"),
            Recurrence::Rescaled => "rescaled".into(),
            Recurrence::Loaded => "loaded".into(),
        }
    }
}

/// Emitted by numeric extension when the cancellation in one recurrence
/// step ate more than half of the working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionWarning {
    pub n: usize,
    pub lost_bits: f64,
    pub prec: u32,
}

/// Coefficients `a_0..a_N` of the formal solution `Σ a_n x^{−n}` together
/// with the running self-convolution `c_m = Σ_{j=0}^{m} a_j a_{m−j}`.
///
/// Completed tables are immutable values and can be shared across threads.
#[derive(Debug, Clone)]
pub struct CoefficientTable<S: Scalar> {
    pub(crate) params: ParameterSet<S::Param>,
    pub(crate) branch: BranchSelector,
    pub(crate) recurrence: Recurrence,
    pub(crate) ctx: S::Ctx,
    pub(crate) values: Vec<S>,
    pub(crate) conv: Vec<S>,
    pub(crate) warnings: Vec<PrecisionWarning>,
}

/// `a_0, a_1, a_2, a_3` for the selected branch.
pub fn initial_coefficients<S: BranchRoot>(
    params: &ParameterSet<S::Param>,
    branch: &BranchSelector,
    ctx: S::Ctx,
) -> Result<[S; 4]> {
    if params.alpha.is_zero() || params.delta.is_zero() {
        return Err(Error::ParameterDomain("alpha and delta must be nonzero".into()));
    }
    let a0 = S::leading_coefficient(params, branch, ctx)?;
    Ok(initial_from_leading(params, a0, ctx))
}

fn initial_from_leading<S: Scalar>(params: &ParameterSet<S::Param>, a0: S, ctx: S::Ctx) -> [S; 4] {
    let alpha = S::from_param(&params.alpha, ctx);
    let beta = S::from_param(&params.beta, ctx);
    let delta = S::from_param(&params.delta, ctx);

    // a1 = −β / (2α a0)
    let a1 = beta.negated().over(&alpha.times(&a0).times_i64(2));
    // a3 = −β/(6α²a0²) · (β²/(4δ) + 1)
    let alpha_a0 = alpha.times(&a0);
    let pre = beta.negated().over(&alpha_a0.times(&alpha_a0).times_i64(6));
    let bracket = beta.times(&beta).over(&delta.times_i64(4)).plus(&S::one(ctx));
    [a0, a1, S::zero(ctx), pre.times(&bracket)]
}

impl<S: BranchRoot> CoefficientTable<S> {
    /// A table holding `a_0..a_3`.
    pub fn new(params: ParameterSet<S::Param>, branch: BranchSelector, ctx: S::Ctx) -> Result<Self> {
        let init = initial_coefficients::<S>(&params, &branch, ctx)?;
        let mut table = Self {
            params,
            branch,
            recurrence: Recurrence::General,
            ctx,
            values: Vec::with_capacity(4),
            conv: Vec::with_capacity(4),
            warnings: Vec::new(),
        };
        for a in init {
            table.push_with_conv(a);
        }
        Ok(table)
    }

    /// Table through index `n_max` by the general recurrence.
    pub fn compute(params: ParameterSet<S::Param>, branch: BranchSelector, ctx: S::Ctx, n_max: usize) -> Result<Self> {
        let mut t = Self::new(params, branch, ctx)?;
        t.extend_to(n_max);
        if n_max < 3 {
            t.truncate(n_max);
        }
        Ok(t)
    }
}

impl<S: Scalar> CoefficientTable<S> {
    pub(crate) fn from_parts(
        params: ParameterSet<S::Param>,
        branch: BranchSelector,
        recurrence: Recurrence,
        ctx: S::Ctx,
        values: Vec<S>,
    ) -> Self {
        let conv = convolution_squares(&values, ctx);
        Self { params, branch, recurrence, ctx, values, conv, warnings: Vec::new() }
    }

    /// Largest stored index `N`.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&S> {
        self.values.get(n)
    }

    /// The running self-convolution `c_m`.
    pub fn conv_cache(&self) -> &[S] {
        &self.conv
    }

    pub fn params(&self) -> &ParameterSet<S::Param> {
        &self.params
    }

    pub fn branch(&self) -> &BranchSelector {
        &self.branch
    }

    pub fn recurrence(&self) -> Recurrence {
        self.recurrence
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn mode(&self) -> Mode {
        S::mode(self.ctx)
    }

    pub fn warnings(&self) -> &[PrecisionWarning] {
        &self.warnings
    }

    pub fn truncate(&mut self, n_max: usize) {
        self.values.truncate(n_max + 1);
        self.conv.truncate(n_max + 1);
    }

    fn push_with_conv(&mut self, a: S) {
        self.values.push(a);
        let m = self.values.len() - 1;
        let mut c = S::zero(self.ctx);
        for j in 0..=m {
            c.add_product(&self.values[j], &self.values[m - j]);
        }
        self.conv.push(c);
    }

    /// Extends through index `n_max` with the general recurrence. Existing
    /// entries are left untouched, so repeating a call is a no-op.
    pub fn extend_to(&mut self, n_max: usize) {
        if self.values.len() < 4 {
            // only tables truncated below index 3 land here
            let init = self.recompute_initial();
            while self.values.len() < 4 {
                let n = self.values.len();
                self.push_with_conv(init[n].clone());
            }
        }
        let ctx = self.ctx;
        let alpha = S::from_param(&self.params.alpha, ctx);
        let beta = S::from_param(&self.params.beta, ctx);
        let a0 = self.values[0].clone();
        let neg_alpha = alpha.negated();
        let neg_alpha_a0 = alpha.times(&a0).negated();
        let neg_three_half_beta = beta.scaled(&Rational::from((-3, 2)));
        let denom = alpha.times(&a0).times(&a0).times_i64(3);
        let two_a0 = a0.times_i64(2);

        for n in self.values.len()..=n_max {
            let a = &self.values;
            let c = &self.conv;
            let mut triple = S::zero(ctx);
            let mut double = S::zero(ctx);
            for k in 1..n {
                triple.add_product(&a[k], &c[n - k]);
                double.add_product(&a[k], &a[n - k]);
            }
            let mut weighted = S::zero(ctx);
            for k in 1..n - 1 {
                let w = 2 * (k as i64) * (k as i64) + (k as i64) * (2 - n as i64);
                if w != 0 {
                    weighted.add_product(&a[k].times_i64(w), &a[n - 2 - k]);
                }
            }
            let parts =
                [neg_alpha.times(&triple), neg_alpha_a0.times(&double), neg_three_half_beta.times(&a[n - 1]), weighted];
            let mut numer = S::zero(ctx);
            for p in &parts {
                numer = numer.plus(p);
            }
            if let Some(lost) = cancellation_bits(&parts, &numer) {
                if let Mode::Numeric { prec } = S::mode(ctx) {
                    if lost > prec as f64 / 2.0 {
                        self.warnings.push(PrecisionWarning { n, lost_bits: lost, prec });
                    }
                }
            }
            let an = numer.over(&denom);
            let cn = double.plus(&two_a0.times(&an));
            self.values.push(an);
            self.conv.push(cn);
        }
    }

    /// Functional form of [`extend_to`](Self::extend_to).
    pub fn extended(mut self, n_max: usize) -> Self {
        self.extend_to(n_max);
        self
    }

    fn recompute_initial(&self) -> [S; 4] {
        // a_0 is stored; the rest follow from it without re-selecting a branch
        initial_from_leading(&self.params, self.values[0].clone(), self.ctx)
    }
}

/// Bits lost to cancellation when summing `parts` into `total`; `None` when
/// every part vanishes.
fn cancellation_bits<S: Scalar>(parts: &[S], total: &S) -> Option<f64> {
    let biggest = parts.iter().filter_map(|p| p.ln_abs()).fold(f64::NEG_INFINITY, f64::max);
    if biggest == f64::NEG_INFINITY {
        return None;
    }
    match total.ln_abs() {
        Some(t) => Some(((biggest - t) / std::f64::consts::LN_2).max(0.0)),
        None => Some(f64::INFINITY),
    }
}

/// `c_m = Σ_{j=0}^{m} a_j a_{m−j}` for every `m`, by direct double sums.
pub(crate) fn convolution_squares<S: Scalar>(values: &[S], ctx: S::Ctx) -> Vec<S> {
    (0..values.len())
        .map(|m| {
            let mut c = S::zero(ctx);
            for j in 0..=m {
                c.add_product(&values[j], &values[m - j]);
            }
            c
        })
        .collect()
}

/// Types a table can be branch-rotated into.
pub trait Rotate: Scalar {
    type Rotated: Scalar<Param = Self::Param, Ctx = Self::Ctx>;
    fn rotate(&self, e: u32) -> Self::Rotated;
}

impl Rotate for Rational {
    type Rotated = QOmega;
    fn rotate(&self, e: u32) -> QOmega {
        QOmega::from_rational_value(self.clone()).times_omega_pow(e).unwrap()
    }
}

impl Rotate for QOmega {
    type Rotated = QOmega;
    fn rotate(&self, e: u32) -> QOmega {
        self.times_omega_pow(e).unwrap()
    }
}

impl Rotate for rug::Complex {
    type Rotated = rug::Complex;
    fn rotate(&self, e: u32) -> rug::Complex {
        self.times_omega_pow(e).unwrap()
    }
}

impl<S: Rotate> CoefficientTable<S> {
    /// Coefficients for the cube-root branch `ω^k·a_0`: `ã_n = ω^{k(n+1)} a_n`.
    /// Exact rational tables move into `Q(ω)`.
    pub fn branch_rotate(&self, k: u8) -> CoefficientTable<S::Rotated> {
        let k = k % 3;
        let values: Vec<_> =
            self.values.iter().enumerate().map(|(n, a)| a.rotate((k as u32) * ((n as u32 + 1) % 3))).collect();
        // c_m picks up ω^{k(m+2)} since every product has index sum m
        let conv: Vec<_> =
            self.conv.iter().enumerate().map(|(m, c)| c.rotate((k as u32) * ((m as u32 + 2) % 3))).collect();
        let branch =
            BranchSelector { index: (self.branch.index + k) % 3, override_a0: self.branch.override_a0.clone() };
        CoefficientTable {
            params: self.params.clone(),
            branch,
            recurrence: Recurrence::Rotated { k },
            ctx: self.ctx,
            values,
            conv,
            warnings: self.warnings.clone(),
        }
    }
}

impl CoefficientTable<Rational> {
    /// The same coefficients as complex floats at `prec` bits.
    pub fn to_numeric(&self, prec: u32) -> CoefficientTable<rug::Complex> {
        CoefficientTable {
            params: self.params.to_numeric(prec),
            branch: self.branch.clone(),
            recurrence: self.recurrence,
            ctx: prec,
            values: self.values.iter().map(|a| a.to_complex(prec)).collect(),
            conv: self.conv.iter().map(|a| a.to_complex(prec)).collect(),
            warnings: Vec::new(),
        }
    }

    /// Applies the scaling symmetry `W(z) = σ1 w(σ2 z)` with `σ2 = s³`:
    /// in the `(u, x)` variables this is `U(X) = σ1 s u(s² X)`, so
    /// `Ã_n = σ1 s^{1−2n} a_n`, with parameters `(α σ2/σ1, β σ1σ2, δ σ1²σ2²)`.
    pub fn rescaled(&self, sigma1: &Rational, s: &Rational) -> Result<Self> {
        if sigma1.is_zero() || s.is_zero() {
            return Err(Error::ParameterDomain("sigma1 and s must be nonzero".into()));
        }
        let sigma2 = Rational::from(s * s) * s;
        let full = super::params::FullParameters::from_set(&self.params);
        let params = super::params::transform_parameters(&full, sigma1, &sigma2)?.into_set()?;
        let s_inv2 = Rational::from(s * s).recip();
        let mut factor = Rational::from(sigma1 * s);
        let mut values = Vec::with_capacity(self.values.len());
        for a in &self.values {
            values.push(Rational::from(a * &factor));
            factor *= &s_inv2;
        }
        let a0 = values[0].clone();
        let branch = BranchSelector::with_override(0, a0);
        Ok(Self::from_parts(params, branch, Recurrence::Rescaled, (), values))
    }
}
