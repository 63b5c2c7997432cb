use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// `b_n = a_n / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelTable<S: Scalar> {
    values: Vec<S>,
    ctx: S::Ctx,
    special: bool,
}

/// True for the special parameters on any branch of `a_0 = −ω^k`, in any
/// arithmetic. Those tables satisfy `|b_n| ≤ (32/3)^{n/2−1}` for `n ≥ 4`.
pub fn is_special_table<S: Scalar>(table: &CoefficientTable<S>) -> bool {
    let p = table.params();
    let exact = |v: &S::Param, q: (i64, i64)| {
        let z = v.to_complex(64);
        z.imag().is_zero() && *z.real() == Rational::from(q)
    };
    if !(exact(&p.alpha, (-1, 32)) && exact(&p.beta, (-1, 4)) && exact(&p.delta, (-1, 32))) {
        return false;
    }
    // the leading coefficient must be a cube root of −1
    let a0 = table.values()[0].to_complex(128);
    let cube = Complex::with_val(128, &a0 * &a0) * &a0;
    let dist = Float::with_val(128, (cube + 1u32).abs_ref());
    dist < Float::with_val(128, Float::i_exp(1, -100))
}

impl<S: Scalar> BorelTable<S> {
    pub fn from_table(table: &CoefficientTable<S>) -> Self {
        let mut fact = Integer::from(1);
        let values = table
            .values()
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n > 0 {
                    fact *= n as u32;
                }
                a.scaled(&Rational::from((Integer::from(1), fact.clone())))
            })
            .collect();
        Self { values, ctx: table.ctx(), special: is_special_table(table) }
    }

    /// Arbitrary Borel coefficients, e.g. synthetic controls.
    pub fn from_values(values: Vec<S>, ctx: S::Ctx) -> Self {
        Self { values, ctx, special: false }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn mode(&self) -> Mode {
        S::mode(self.ctx)
    }

    /// Built from the special table, so the closed-form radius and the
    /// growth bound apply.
    pub fn is_special(&self) -> bool {
        self.special
    }

    /// Inverse of the transform: `b_n · n!`.
    pub fn coefficients(&self) -> Vec<S> {
        let mut fact = Integer::from(1);
        self.values
            .iter()
            .enumerate()
            .map(|(n, b)| {
                if n > 0 {
                    fact *= n as u32;
                }
                b.scaled(&Rational::from(fact.clone()))
            })
            .collect()
    }

    pub fn to_complex(&self, prec: u32) -> Vec<Complex> {
        self.values.iter().map(|b| b.to_complex(prec)).collect()
    }

    /// Radius of the disk of convergence of `Σ b_n uⁿ`: `sqrt(3/32)` for
    /// special tables, otherwise the reciprocal of the Cauchy–Hadamard
    /// estimate over the upper half of the table.
    pub fn disk_radius(&self, prec: u32) -> Result<Float> {
        if self.special {
            return Ok(Float::with_val(prec, Rational::from((3, 32))).sqrt());
        }
        let hi = self.n_max();
        let est = radius_cauchy_hadamard(self, hi.div_ceil(2).max(1), hi)?;
        Ok(Float::with_val(prec, est.inverse_radius).recip())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    /// `max |b_n|^{1/n}` over the window.
    pub inverse_radius: f64,
    pub radius: f64,
    pub window: [usize; 2],
    /// `(n, |b_n|^{1/n})` for every nonzero `b_n` in the window.
    pub sequence: Vec<(usize, f64)>,
}

/// Finite-window proxy for `limsup |b_n|^{1/n}`. Zero coefficients are
/// skipped.
pub fn radius_cauchy_hadamard<S: Scalar>(borel: &BorelTable<S>, lo: usize, hi: usize) -> Result<RadiusEstimate> {
    if lo == 0 || lo > hi || hi > borel.n_max() {
        return Err(Error::Range(format!("window [{lo}, {hi}] must satisfy 1 ≤ lo ≤ hi ≤ {}", borel.n_max())));
    }
    let sequence: Vec<(usize, f64)> =
        (lo..=hi).filter_map(|n| borel.values[n].ln_abs().map(|l| (n, (l / n as f64).exp()))).collect();
    let inverse_radius = sequence
        .iter()
        .map(|&(_, r)| r)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
        .ok_or_else(|| Error::Domain(format!("b_n = 0 throughout [{lo}, {hi}]")))?;
    Ok(RadiusEstimate { inverse_radius, radius: 1.0 / inverse_radius, window: [lo, hi], sequence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{special_table_exact, BranchSelector, ParameterSet};
    use crate::scalar::factorial;

    #[test]
    fn leading_borel_values() {
        let b = BorelTable::from_table(&special_table_exact(10));
        assert_eq!(b.values()[0], -1);
        assert_eq!(b.values()[1], 4);
        assert_eq!(b.values()[2], 0);
        assert_eq!(b.values()[3], Rational::from((32, 9)));
        assert!(b.is_special());
    }

    #[test]
    fn round_trip_is_exact() {
        let t = special_table_exact(150);
        assert_eq!(BorelTable::from_table(&t).coefficients(), t.values());
    }

    #[test]
    fn special_detection() {
        let t = special_table_exact(10);
        assert!(is_special_table(&t.branch_rotate(1)));
        assert!(is_special_table(&t.to_numeric(128)));
        let p = ParameterSet::new(Rational::from(1), Rational::from(-4), Rational::from(-1)).unwrap();
        let g = CoefficientTable::<Rational>::compute(p, BranchSelector::principal(0), (), 10).unwrap();
        assert!(!is_special_table(&g));
    }

    #[test]
    fn factorial_control_has_unit_radius() {
        let b = BorelTable::from_values(
            (0..50).map(|n| Rational::from(factorial(n)) / Rational::from(factorial(n))).collect(),
            (),
        );
        let r = radius_cauchy_hadamard(&b, 10, 49).unwrap();
        assert_eq!(r.inverse_radius, 1.0);
        assert_eq!(r.sequence.len(), 40);
    }

    #[test]
    fn zero_window_is_a_domain_error() {
        let p = ParameterSet::new(Rational::from((-1, 32)), Rational::new(), Rational::from((-1, 32))).unwrap();
        let t = CoefficientTable::<Rational>::compute(p, BranchSelector::special(), (), 30).unwrap();
        let b = BorelTable::from_table(&t);
        assert!(matches!(radius_cauchy_hadamard(&b, 1, 30), Err(Error::Domain(_))));
    }
}
