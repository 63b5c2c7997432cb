use rug::{Complex, Float};

use super::borel::BorelTable;
use super::laplace::{finite_laplace_eval, LaplaceSpec};
use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::export::csv_string;
use crate::scalar::{float_string, Scalar};

/// `S_N(x) = Σ_{n<N} a_n x^{−n}` by Horner's rule in `1/x`.
pub fn partial_sum<S: Scalar>(table: &CoefficientTable<S>, n: usize, x: &Complex, prec: u32) -> Result<Complex> {
    if n > table.len() {
        return Err(Error::Range(format!("N = {n} exceeds the {} stored coefficients", table.len())));
    }
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let y = Complex::with_val(prec, x).recip();
    let mut acc = Complex::with_val(prec, 0);
    for a in table.values()[..n].iter().rev() {
        acc *= &y;
        acc += a.to_complex(prec);
    }
    Ok(acc)
}

/// `S_0(x), …, S_{n_hi}(x)` by accumulation.
fn partial_sums<S: Scalar>(values: &[S], n_hi: usize, x: &Complex, prec: u32) -> Vec<Complex> {
    let y = Complex::with_val(prec, x).recip();
    let mut pow = Complex::with_val(prec, 1);
    let mut acc = Complex::with_val(prec, 0);
    let mut out = vec![acc.clone()];
    for a in &values[..n_hi] {
        acc += a.to_complex(prec) * &pow;
        pow *= &y;
        out.push(acc.clone());
    }
    out
}

/// Least term: `argmin_N |a_N| |x|^{−N}` over the table, skipping zero
/// coefficients; ties go to the smaller `N`.
pub fn optimal_truncation<S: Scalar>(table: &CoefficientTable<S>, x: &Complex) -> Result<usize> {
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let ln_x = Float::with_val(64, x.abs_ref()).ln().to_f64();
    let mut best: Option<(usize, f64)> = None;
    for (n, a) in table.values().iter().enumerate() {
        if let Some(l) = a.ln_abs() {
            let v = l - n as f64 * ln_x;
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((n, v));
            }
        }
    }
    best.map(|(n, _)| n).ok_or_else(|| Error::Domain("every coefficient vanishes".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub x: Complex,
    pub n: usize,
    pub abs_error: Float,
}

/// `E[x][N] = |g(x) − S_N(x)|`, rows ordered by `x` then `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorScan {
    pub rows: Vec<ScanRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanMinimum {
    pub x: Complex,
    pub n_star: usize,
    pub min_error: Float,
    /// The minimum is at neither end of the scanned `N` range.
    pub interior: bool,
}

impl ErrorScan {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![float_string(r.x.real()), float_string(r.x.imag()), r.n.to_string(), float_string(&r.abs_error)]
            })
            .collect();
        csv_string(&["x_re", "x_im", "N", "abs_error"], &rows)
    }

    /// Per `x`, the smallest error (first occurrence on ties).
    pub fn minima(&self) -> Vec<ScanMinimum> {
        let mut out: Vec<ScanMinimum> = Vec::new();
        let mut i = 0;
        while i < self.rows.len() {
            let x = &self.rows[i].x;
            let mut j = i;
            while j < self.rows.len() && self.rows[j].x == *x {
                j += 1;
            }
            let group = &self.rows[i..j];
            let (k, best) =
                group
                    .iter()
                    .enumerate()
                    .fold((0, &group[0]), |(bk, b), (k, r)| if r.abs_error < b.abs_error { (k, r) } else { (bk, b) });
            out.push(ScanMinimum {
                x: x.clone(),
                n_star: best.n,
                min_error: best.abs_error.clone(),
                interior: k > 0 && k + 1 < group.len(),
            });
            i = j;
        }
        out
    }
}

/// Error matrix for every `x` in `xs` (each required to lie where the
/// kernel decays) and every `N` in `ns`.
pub fn asymptotic_error_scan<S: Scalar>(
    borel: &BorelTable<S>,
    table: &CoefficientTable<S>,
    spec: &LaplaceSpec,
    xs: &[Complex],
    ns: &[usize],
) -> Result<ErrorScan> {
    let n_hi = ns.iter().copied().max().unwrap_or(0);
    if n_hi > table.len() {
        return Err(Error::Range(format!("N = {n_hi} exceeds the {} stored coefficients", table.len())));
    }
    let prec = spec.prec + 32;
    let mut rows = Vec::with_capacity(xs.len() * ns.len());
    for x in xs {
        if !spec.kernel_decays(x) {
            return Err(Error::Spec(format!(
                "x = ({}, {}) is outside the half-plane Re(e^(id) x) > 0",
                x.real().to_f64(),
                x.imag().to_f64()
            )));
        }
        let g = finite_laplace_eval(borel, spec, x)?.g;
        let sums = partial_sums(table.values(), n_hi, x, prec);
        for &n in ns {
            let diff = Complex::with_val(prec, &g - &sums[n]);
            rows.push(ScanRow {
                x: Complex::with_val(spec.prec, x),
                n,
                abs_error: Float::with_val(spec.prec, diff.abs_ref()),
            });
        }
    }
    Ok(ErrorScan { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::special_table_exact;
    use rug::Rational;

    fn c(re: f64) -> Complex {
        Complex::with_val(256, re)
    }

    #[test]
    fn partial_sums_by_hand() {
        let t = special_table_exact(10);
        assert_eq!(partial_sum(&t, 1, &c(7.0), 256).unwrap(), c(-1.0));
        assert_eq!(partial_sum(&t, 3, &c(2.0), 256).unwrap(), c(1.0));
        let expect = Rational::from(-1)
            + Rational::from((4, 10))
            + Rational::from((64, 3000))
            + Rational::from((256, 30000))
            + Rational::from((2048, 100000));
        let got = partial_sum(&t, 6, &c(10.0), 256).unwrap();
        let diff = Float::with_val(256, Complex::with_val(256, got - Complex::with_val(256, &expect)).abs_ref());
        assert!(diff < 1e-70);
        let acc = partial_sums(t.values(), 6, &c(10.0), 256);
        assert_eq!(acc.len(), 7);
        assert!(
            Float::with_val(256, Complex::with_val(256, &acc[6] - Complex::with_val(256, &expect)).abs_ref()) < 1e-70
        );
    }

    #[test]
    fn least_term_index() {
        let t = special_table_exact(200);
        // tiny |x|: the terms grow at once
        assert_eq!(optimal_truncation(&t, &c(0.1)).unwrap(), 0);
        // at x = 10 the ratio a_{N+1}/a_N first exceeds 10 just after N*
        let n = optimal_truncation(&t, &c(10.0)).unwrap();
        let a = t.values();
        let ratio = |k: usize| Rational::from(&a[k + 1] / &a[k]);
        assert!(ratio(n) >= 10 && ratio(n - 1) < 10, "N* = {n}");
        let mut last = 0;
        for r in [5.0, 10.0, 20.0, 40.0, 80.0] {
            let n = optimal_truncation(&t, &c(r)).unwrap();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn least_term_skips_zero_coefficient() {
        let t = special_table_exact(10);
        assert_ne!(optimal_truncation(&t, &c(1e6)).unwrap(), 2);
    }
}
