//! Residuals of the equation and the change of variables back to
//! Painlevé III.
//!
//! The formal residual multiplies the equation by `u`:
//!
//! ```text
//! R = u u'' − (u')² + u u'/x − α u³ − (3/2) β u/x − δ
//! ```
//!
//! which is a polynomial in `y = 1/x` once a truncation
//! `S_N = Σ_{n<N} a_n yⁿ` is substituted (`d/dx = −y² d/dy`). A table that
//! solves the recurrence leaves `r_m = 0` for `m < N`; the first nonzero
//! coefficient is `r_N = 3α a_0² a_N`, so [`vanishing_order`] is `N − 1`
//! whenever `a_N ≠ 0`.

use rug::{Complex, Float};
use serde::Serialize;

use crate::coefficients::{CoefficientTable, ParameterSet};
use crate::error::{Error, Result};
use crate::export::{csv_string, ExportScalar, ValueRecord};
use crate::scalar::{Mode, Scalar};
use crate::summation::{check_spec, laplace_terms, BorelTable, LaplaceSpec};

/// Truncated power series in `y = 1/x`.
pub mod series {
    use crate::error::{Error, Result};
    use crate::scalar::Scalar;

    /// `a·b` through `y^{len−1}`.
    pub fn mul<S: Scalar>(a: &[S], b: &[S], len: usize, ctx: S::Ctx) -> Vec<S> {
        let mut out = vec![S::zero(ctx); len];
        for (i, ai) in a.iter().enumerate().take(len) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(len - i) {
                out[i + j].add_product(ai, bj);
            }
        }
        out
    }

    /// `d/dx Σ c_n yⁿ = Σ −n c_n y^{n+1}`.
    pub fn x_derivative<S: Scalar>(c: &[S], ctx: S::Ctx) -> Vec<S> {
        let mut out = vec![S::zero(ctx); c.len() + 1];
        for (n, cn) in c.iter().enumerate().skip(1) {
            out[n + 1] = cn.times_i64(-(n as i64));
        }
        out
    }

    /// Multiplication by `y = 1/x`.
    pub fn shift<S: Scalar>(c: &[S], ctx: S::Ctx) -> Vec<S> {
        let mut out = Vec::with_capacity(c.len() + 1);
        out.push(S::zero(ctx));
        out.extend_from_slice(c);
        out
    }

    /// `1/a` through `y^{len−1}`; needs `a_0 ≠ 0`.
    pub fn reciprocal<S: Scalar>(a: &[S], len: usize, ctx: S::Ctx) -> Result<Vec<S>> {
        let a0 = a
            .first()
            .filter(|v| !v.is_zero())
            .ok_or_else(|| Error::Domain("series reciprocal needs a nonzero constant term".into()))?;
        let inv0 = S::one(ctx).over(a0);
        let mut out = vec![inv0.clone()];
        for m in 1..len {
            let mut acc = S::zero(ctx);
            for k in 1..=m.min(a.len() - 1) {
                acc.add_product(&a[k], &out[m - k]);
            }
            out.push(acc.times(&inv0).negated());
        }
        Ok(out)
    }

    pub fn add_scaled<S: Scalar>(acc: &mut Vec<S>, c: &[S], factor: &S, ctx: S::Ctx) {
        if acc.len() < c.len() {
            acc.resize(c.len(), S::zero(ctx));
        }
        for (a, v) in acc.iter_mut().zip(c) {
            a.add_product(v, factor);
        }
    }
}

/// Coefficients `r_0..r_M` of the residual of a truncation `S_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries<S: Scalar> {
    pub coefficients: Vec<S>,
    pub n: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRecord {
    pub m: usize,
    #[serde(flatten)]
    pub value: ValueRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualFile {
    pub mode: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub first_nonzero: Option<usize>,
    pub vanishing_order: Option<usize>,
    pub coefficients: Vec<ResidualRecord>,
}

impl<S: Scalar> ResidualSeries<S> {
    /// Lowest `m` with `r_m ≠ 0`.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coefficients.iter().position(|r| !r.is_zero())
    }

    pub fn is_identically_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }
}

impl<S: ExportScalar> ResidualSeries<S> {
    pub fn to_csv(&self) -> String {
        let mut header = vec!["m"];
        header.extend_from_slice(S::csv_header());
        let rows: Vec<Vec<String>> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(m, r)| {
                let mut row = vec![m.to_string()];
                row.extend(r.csv_fields());
                row
            })
            .collect();
        csv_string(&header, &rows)
    }

    pub fn to_file(&self) -> ResidualFile {
        ResidualFile {
            mode: self.mode.label().to_string(),
            n: self.n,
            first_nonzero: self.first_nonzero(),
            vanishing_order: vanishing_order(self.n),
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(m, r)| ResidualRecord { m, value: r.record() })
                .collect(),
        }
    }
}

/// Last order through which the residual of `S_N` vanishes for a table with
/// `a_N ≠ 0`: `N − 1`. At `N = 2` the forced `a_2 = 0` makes `S_2 = S_3`,
/// so the residual vanishes through order 2. `None` for `N = 0`.
pub fn vanishing_order(n: usize) -> Option<usize> {
    match n {
        0 => None,
        2 => Some(2),
        n => Some(n - 1),
    }
}

/// Residual coefficients of `S_N = Σ_{n<N} a_n x^{−n}` through order
/// `3N + 3`.
pub fn formal_residual<S: Scalar>(table: &CoefficientTable<S>, n: usize) -> Result<ResidualSeries<S>> {
    if n == 0 || n > table.len() {
        return Err(Error::Range(format!("N must lie in [1, {}], got {n}", table.len())));
    }
    let ctx = table.ctx();
    let u: Vec<S> = table.values()[..n].to_vec();
    if u[0].is_zero() {
        return Err(Error::Domain("a_0 = 0".into()));
    }
    let len = 3 * n + 4;
    let du = series::x_derivative(&u, ctx);
    let d2u = series::x_derivative(&du, ctx);
    let params = table.params();
    let alpha = S::from_param(&params.alpha, ctx);
    let beta = S::from_param(&params.beta, ctx);
    let delta = S::from_param(&params.delta, ctx);

    let one = S::one(ctx);
    let u_d2u = series::mul(&u, &d2u, len, ctx);
    let du_sq = series::mul(&du, &du, len, ctx);
    let u_du_y = series::shift(&series::mul(&u, &du, len, ctx), ctx);
    let u_sq = series::mul(&u, &u, len, ctx);
    let u_cube = series::mul(&u_sq, &u, len, ctx);
    let u_y = series::shift(&u, ctx);

    let mut r = vec![S::zero(ctx); len];
    series::add_scaled(&mut r, &u_d2u, &one, ctx);
    series::add_scaled(&mut r, &du_sq, &one.negated(), ctx);
    series::add_scaled(&mut r, &u_du_y, &one, ctx);
    series::add_scaled(&mut r, &u_cube, &alpha.negated(), ctx);
    series::add_scaled(&mut r, &u_y, &beta.scaled(&rug::Rational::from((-3, 2))), ctx);
    r[0] = r[0].minus(&delta);
    r.truncate(len);
    Ok(ResidualSeries { coefficients: r, n, mode: table.mode() })
}

/// `g`, `g'`, `g''` at `x` for the Laplace-resummed function.
///
/// With `F_n(x) = x ∫_0^{T e^{id}} uⁿ e^{−ux} du`, differentiation under
/// the integral gives `F_n' = F_n/x − F_{n+1}` and
/// `F_n'' = F_{n+2} − 2F_{n+1}/x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceJet {
    pub u: Complex,
    pub du: Complex,
    pub d2u: Complex,
}

pub fn laplace_jet<S: Scalar>(borel: &BorelTable<S>, spec: &LaplaceSpec, x: &Complex) -> Result<LaplaceJet> {
    check_spec(borel, spec)?;
    let f = laplace_terms(spec, x, spec.n_trunc + 2)?;
    let p = spec.prec + 32;
    let mut u = Complex::with_val(p, 0);
    let mut s1 = Complex::with_val(p, 0);
    let mut s2 = Complex::with_val(p, 0);
    for (n, b) in borel.values()[..=spec.n_trunc].iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let b = b.to_complex(p);
        u += Complex::with_val(p, &b * &f[n]);
        s1 += Complex::with_val(p, &b * &f[n + 1]);
        s2 += b * &f[n + 2];
    }
    let x = Complex::with_val(p, x);
    let du = Complex::with_val(p, &u / &x) - &s1;
    let d2u = s2 - s1 * 2u32 / &x;
    Ok(LaplaceJet {
        u: Complex::with_val(spec.prec, u),
        du: Complex::with_val(spec.prec, du),
        d2u: Complex::with_val(spec.prec, d2u),
    })
}

/// `u'' − (u')²/u + u'/x − αu² − (3/2)β/x − δ/u` for the resummed `u`.
pub fn numeric_residual<S: Scalar>(
    borel: &BorelTable<S>,
    spec: &LaplaceSpec,
    params: &ParameterSet<S::Param>,
    x: &Complex,
) -> Result<Complex> {
    let jet = laplace_jet(borel, spec, x)?;
    residual_at(&jet, params, x, spec.prec)
}

/// The equation's residual for given values of `u, u', u''`.
pub fn residual_at<P: Scalar>(jet: &LaplaceJet, params: &ParameterSet<P>, x: &Complex, prec: u32) -> Result<Complex> {
    let p = prec + 32;
    let tiny = Float::with_val(p, Float::i_exp(1, -(prec as i32 / 2)));
    if Float::with_val(p, jet.u.abs_ref()) < tiny {
        return Err(Error::Numeric("u vanishes at x: too close to a pole of the residual".into()));
    }
    let alpha = params.alpha.to_complex(p);
    let beta = params.beta.to_complex(p);
    let delta = params.delta.to_complex(p);
    let x = Complex::with_val(p, x);
    let u = Complex::with_val(p, &jet.u);
    let du = Complex::with_val(p, &jet.du);

    let mut r = Complex::with_val(p, &jet.d2u);
    r -= Complex::with_val(p, du.square_ref()) / &u;
    r += Complex::with_val(p, &du / &x);
    r -= alpha * Complex::with_val(p, u.square_ref());
    r -= beta * 3u32 / 2u32 / &x;
    r -= delta / &u;
    Ok(Complex::with_val(prec, r))
}

fn principal_power(z: &Complex, num: i32, den: u32) -> Complex {
    let p = z.prec().0;
    let l = Complex::with_val(p, z.ln_ref());
    (l * num / den).exp()
}

/// `z = (2x/3)^{3/2}`, `w = z^{1/3} u` with principal powers.
pub fn to_original_variables(u: &Complex, x: &Complex) -> Result<(Complex, Complex)> {
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let p = x.prec().0.max(u.prec().0);
    let base = Complex::with_val(p, x) * 2u32 / 3u32;
    let z = principal_power(&base, 3, 2);
    let w = principal_power(&z, 1, 3) * u;
    Ok((w, z))
}

/// `x = (3/2) z^{2/3}`, `u = w z^{−1/3}` with principal powers.
pub fn from_original_variables(w: &Complex, z: &Complex) -> Result<(Complex, Complex)> {
    if z.is_zero() {
        return Err(Error::Domain("z must be nonzero".into()));
    }
    let p = z.prec().0.max(w.prec().0);
    let z = Complex::with_val(p, z);
    let x = principal_power(&z, 2, 3) * 3u32 / 2u32;
    let u = principal_power(&z, -1, 3) * w;
    Ok((u, x))
}
