//! Finite Laplace transform along the ray `arg u = d`.
//!
//! The single term with kernel variable `z` is
//!
//! ```text
//! (1/z) ∫_0^{T e^{id}} uⁿ e^{−u/z} du = n! zⁿ [1 − e^{−w} Σ_{m=0}^{n} w^m/m!],   w = T e^{id}/z.
//! ```
//!
//! The resummed function is `g(x) = Σ b_n F_n(x)` with `F_n` the term at
//! `z = 1/x`, so `F_n(x) ~ n! x^{−n}` and `g(x) ~ Σ a_n x^{−n}` as `x → ∞`
//! with `Re(e^{id} x) > 0`.
//!
//! For `|w| ≤ n + 1` the bracket cancels almost completely; the same
//! quantity is then summed as the tail of the exponential series,
//! `(vⁿ⁺¹/z) e^{−w} Σ_k w^k / ((n+1)(n+2)⋯(n+1+k))` with `v = T e^{id}`.

use rug::float::Special;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::Serialize;

use super::borel::{radius_cauchy_hadamard, BorelTable};
use crate::error::{Error, Result};
use crate::scalar::{float_string, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceSpec {
    /// Ray direction `d` in the `u`-plane, radians.
    pub direction: f64,
    /// Endpoint modulus `T`.
    pub endpoint: Float,
    pub n_trunc: usize,
    pub prec: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecRecord {
    pub direction: f64,
    pub endpoint: String,
    pub n_trunc: usize,
    pub prec_bits: u32,
}

impl LaplaceSpec {
    pub fn new(direction: f64, endpoint: Float, n_trunc: usize, prec: u32) -> Self {
        Self { direction, endpoint, n_trunc, prec }
    }

    /// `T` must lie strictly inside the disk of convergence.
    pub fn validate(&self, disk_radius: &Float) -> Result<()> {
        if !self.direction.is_finite() {
            return Err(Error::Spec("direction must be finite".into()));
        }
        if !self.endpoint.is_finite() || self.endpoint <= 0 {
            return Err(Error::Spec(format!("endpoint {} must be positive", self.endpoint.to_f64())));
        }
        if self.endpoint >= *disk_radius {
            return Err(Error::Spec(format!(
                "endpoint {} is not inside the Borel disk of radius {}",
                self.endpoint.to_f64(),
                disk_radius.to_f64()
            )));
        }
        if self.prec < 16 {
            return Err(Error::Spec(format!("precision {} bits is too small", self.prec)));
        }
        Ok(())
    }

    /// `T e^{id}`.
    pub fn endpoint_point(&self, prec: u32) -> Complex {
        let dir = Complex::with_val(prec, (0, self.direction)).exp();
        dir * Float::with_val(prec, &self.endpoint)
    }

    /// Whether the kernel `e^{−u x}` decays along the ray, i.e.
    /// `Re(e^{id} x) > 0`.
    pub fn kernel_decays(&self, x: &Complex) -> bool {
        let dir = Complex::with_val(64, (0, self.direction)).exp();
        Complex::with_val(64, &dir * x).real().is_sign_positive() && !Complex::with_val(64, &dir * x).real().is_zero()
    }

    /// Half-plane in `x` where [`kernel_decays`](Self::kernel_decays)
    /// holds, cut off at `inner_radius`.
    pub fn sector(&self, inner_radius: f64) -> Result<SectorSpec> {
        SectorSpec::new(-self.direction, std::f64::consts::PI, inner_radius)
    }

    pub fn record(&self) -> SpecRecord {
        SpecRecord {
            direction: self.direction,
            endpoint: float_string(&self.endpoint),
            n_trunc: self.n_trunc,
            prec_bits: self.prec,
        }
    }
}

/// `{x : |arg x − bisector| < opening/2, |x| > inner_radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorSpec {
    pub bisector: f64,
    pub opening: f64,
    pub inner_radius: f64,
}

impl SectorSpec {
    pub fn new(bisector: f64, opening: f64, inner_radius: f64) -> Result<Self> {
        if !(opening > 0.0 && opening <= std::f64::consts::PI) {
            return Err(Error::Spec(format!("sector opening {opening} must lie in (0, π]")));
        }
        if inner_radius.is_nan() || inner_radius < 0.0 || !bisector.is_finite() {
            return Err(Error::Spec("sector needs a finite bisector and nonnegative radius".into()));
        }
        Ok(Self { bisector, opening, inner_radius })
    }

    pub fn contains(&self, x: &Complex) -> bool {
        let (re, im) = (x.real().to_f64(), x.imag().to_f64());
        if re.hypot(im) <= self.inner_radius {
            return false;
        }
        let tau = std::f64::consts::TAU;
        let diff = (im.atan2(re) - self.bisector).rem_euclid(tau);
        let diff = diff.min(tau - diff);
        diff < self.opening / 2.0
    }

    /// Point at modulus `r` on the bisector.
    pub fn ray_point(&self, r: f64, prec: u32) -> Complex {
        Complex::with_val(prec, (0, self.bisector)).exp() * r
    }
}

fn log2_ratio(big: &Float, small: &Float) -> f64 {
    if small.is_zero() {
        return f64::INFINITY;
    }
    let r = Float::with_val(53, big / small);
    r.log2().to_f64().max(0.0)
}

/// Runs `f` at increasing precision until the reported cancellation is
/// covered by the guard bits, then rounds to `prec`.
fn with_guard_bits<F>(prec: u32, f: F) -> Result<Complex>
where
    F: Fn(u32) -> (Complex, f64),
{
    let mut guard = 64u32;
    for _ in 0..8 {
        let (v, lost) = f(prec + guard);
        if lost.is_finite() && lost + 16.0 < guard as f64 {
            return Ok(Complex::with_val(prec, v));
        }
        guard = if lost.is_finite() { lost as u32 + 64 } else { guard * 4 };
    }
    Err(Error::Numeric("closed form did not stabilise under added precision".into()))
}

/// Finite form `n! zⁿ [1 − e^{−w} Σ_{m≤n} w^m/m!]` and its loss in bits.
fn finite_route(n: usize, v: &Complex, z: &Complex, p: u32) -> (Complex, f64) {
    let v = Complex::with_val(p, v);
    let z = Complex::with_val(p, z);
    let w = Complex::with_val(p, &v / &z);
    let mut t = Complex::with_val(p, 1);
    let mut s = t.clone();
    let mut biggest = Float::with_val(p, 1);
    for m in 1..=n {
        t *= &w;
        t /= m as u32;
        s += &t;
        let a = Float::with_val(p, t.abs_ref());
        if a > biggest {
            biggest = a;
        }
    }
    let e = Complex::with_val(p, -&w).exp() * &s;
    let r = Complex::with_val(p, 1) - &e;
    let abs_s = Float::with_val(p, s.abs_ref());
    let abs_e = Float::with_val(p, e.abs_ref()).max(&Float::with_val(p, 1));
    let abs_r = Float::with_val(p, r.abs_ref());
    let lost = log2_ratio(&biggest, &abs_s) + log2_ratio(&abs_e, &abs_r);

    let mut fact = Float::with_val(p, 1);
    for m in 2..=n {
        fact *= m as u32;
    }
    let zn = Complex::with_val(p, (&z).pow(n as u32));
    (r * zn * fact, lost)
}

/// Tail form `(vⁿ⁺¹/z) e^{−w} Σ_k w^k/((n+1)⋯(n+1+k))`, for `|w| ≤ n+1`.
fn tail_route(n: usize, v: &Complex, z: &Complex, p: u32) -> (Complex, f64) {
    let v = Complex::with_val(p, v);
    let z = Complex::with_val(p, z);
    let w = Complex::with_val(p, &v / &z);
    let abs_w = Float::with_val(p, w.abs_ref()).to_f64();
    let mut t = Complex::with_val(p, 1) / (n as u32 + 1);
    let mut s = t.clone();
    let mut biggest = Float::with_val(p, t.abs_ref());
    let mut k = 1usize;
    loop {
        t *= &w;
        t /= (n + 1 + k) as u32;
        s += &t;
        let a = Float::with_val(p, t.abs_ref());
        if a > biggest {
            biggest = a.clone();
        }
        if k as f64 > abs_w {
            let scale = Float::with_val(p, s.abs_ref()) >> (p as i32 + 8);
            if a <= scale {
                break;
            }
        }
        k += 1;
    }
    let abs_s = Float::with_val(p, s.abs_ref());
    let lost = log2_ratio(&biggest, &abs_s);
    let vn = Complex::with_val(p, (&v).pow(n as u32 + 1));
    let e = Complex::with_val(p, -&w).exp();
    (vn / z * e * s, lost)
}

fn closed_form(n: usize, v: &Complex, z: &Complex, prec: u32) -> Result<Complex> {
    if z.is_zero() {
        return Err(Error::Domain("the Laplace kernel variable must be nonzero".into()));
    }
    let w = Complex::with_val(64, v / z);
    let abs_w = Float::with_val(64, w.abs_ref());
    if abs_w <= n as f64 + 1.0 {
        with_guard_bits(prec, |p| tail_route(n, v, z, p))
    } else {
        with_guard_bits(prec, |p| finite_route(n, v, z, p))
    }
}

/// `(1/z) ∫_0^{T e^{id}} uⁿ e^{−u/z} du` at `spec.prec` bits, `z` the
/// kernel variable.
pub fn term_laplace_closed_form(n: usize, spec: &LaplaceSpec, z: &Complex) -> Result<Complex> {
    let v = spec.endpoint_point(spec.prec + 64);
    closed_form(n, &v, z, spec.prec)
}

/// `F_0(x), …, F_{n_hi}(x)` with `F_n(x) = x ∫_0^{T e^{id}} uⁿ e^{−u x} du`,
/// at `spec.prec + 32` bits.
pub fn laplace_terms(spec: &LaplaceSpec, x: &Complex, n_hi: usize) -> Result<Vec<Complex>> {
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let p = spec.prec + 32;
    let v = spec.endpoint_point(p + 64);
    let z = Complex::with_val(p + 64, x).recip();
    (0..=n_hi).map(|n| closed_form(n, &v, &z, p)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceValue {
    pub x: Complex,
    pub g: Complex,
    /// Bound on `|Σ_{n>N_trunc} b_n F_n(x)|`.
    pub tail_bound: Float,
    /// The bound uses the proven coefficient growth (special tables); it is
    /// a windowed estimate otherwise.
    pub rigorous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceRecord {
    pub x: [String; 2],
    pub g: [String; 2],
    pub tail_bound: String,
    pub rigorous: bool,
    pub spec: SpecRecord,
}

impl LaplaceValue {
    pub fn record(&self, spec: &LaplaceSpec) -> LaplaceRecord {
        LaplaceRecord {
            x: [float_string(self.x.real()), float_string(self.x.imag())],
            g: [float_string(self.g.real()), float_string(self.g.imag())],
            tail_bound: float_string(&self.tail_bound),
            rigorous: self.rigorous,
            spec: spec.record(),
        }
    }
}

/// Validates `spec` against the Borel disk of `borel`.
pub fn check_spec<S: Scalar>(borel: &BorelTable<S>, spec: &LaplaceSpec) -> Result<Float> {
    let r_b = borel.disk_radius(spec.prec)?;
    spec.validate(&r_b)?;
    if spec.n_trunc > borel.n_max() {
        return Err(Error::Range(format!("N_trunc = {} exceeds the table size {}", spec.n_trunc, borel.n_max())));
    }
    Ok(r_b)
}

/// `g(x) = Σ_{n ≤ N_trunc} b_n F_n(x)` with a bound on the omitted tail.
pub fn finite_laplace_eval<S: Scalar>(borel: &BorelTable<S>, spec: &LaplaceSpec, x: &Complex) -> Result<LaplaceValue> {
    check_spec(borel, spec)?;
    let terms = laplace_terms(spec, x, spec.n_trunc)?;
    let p = spec.prec + 32;
    let mut g = Complex::with_val(p, 0);
    for (b, f) in borel.values().iter().zip(&terms) {
        if !b.is_zero() {
            g += b.to_complex(p) * f;
        }
    }
    let (tail_bound, rigorous) = tail_bound(borel, spec, x)?;
    Ok(LaplaceValue { x: Complex::with_val(spec.prec, x), g: Complex::with_val(spec.prec, g), tail_bound, rigorous })
}

/// `|F_n(x)| ≤ |x| · sup · T^{n+1}/(n+1)` with `sup = max(1, e^{−T Re(e^{id} x)})`
/// the largest kernel modulus on the segment; with `|b_n| ≤ C ρⁿ` for
/// `n ≥ M` the tail sums to at most `|x| sup C T (ρT)^M / ((M+1)(1−ρT))`.
fn tail_bound<S: Scalar>(borel: &BorelTable<S>, spec: &LaplaceSpec, x: &Complex) -> Result<(Float, bool)> {
    let p = 64;
    let t = Float::with_val(p, &spec.endpoint);
    let dir = Complex::with_val(p, (0, spec.direction)).exp();
    let re = Complex::with_val(p, &dir * x).real().clone();
    let sup = Float::with_val(p, -(re * &t)).exp().max(&Float::with_val(p, 1));
    let abs_x = Float::with_val(p, x.abs_ref());
    let first = spec.n_trunc + 1;

    let (c, rho, from, rigorous) = if borel.is_special() {
        // |b_n| ≤ (32/3)^{n/2−1} for n ≥ 4; indices below 4 are added exactly
        let rho = Float::with_val(p, 32) / 3u32;
        (Float::with_val(p, 3) / 32u32, rho.sqrt(), first.max(4), true)
    } else {
        let hi = borel.n_max();
        let est = radius_cauchy_hadamard(borel, hi.div_ceil(2).max(1), hi)?;
        let rho = Float::with_val(p, est.inverse_radius);
        let mut c = Float::with_val(p, 0);
        for &(n, r) in &est.sequence {
            // |b_n| / ρⁿ = (r/ρ)ⁿ
            let ratio = Float::with_val(p, r) / &rho;
            c = c.max(&ratio.pow(n as u32));
        }
        (c, rho, first, false)
    };

    let rho_t = Float::with_val(p, &rho * &t);
    if rho_t >= 1 {
        return Ok((Float::with_val(spec.prec, Special::Infinity), rigorous));
    }
    let mut bound = Float::with_val(p, 0);
    for n in first..from.min(borel.len()) {
        let b = Float::with_val(p, borel.values()[n].to_complex(p).abs_ref());
        bound += b * Float::with_val(p, (&t).pow(n as u32 + 1)) / (n as u32 + 1);
    }
    let geometric = c * &t * Float::with_val(p, (&rho_t).pow(from as u32))
        / ((from as u32 + 1) as f64 * (Float::with_val(p, 1) - &rho_t));
    bound += geometric;
    bound *= abs_x * sup;
    Ok((Float::with_val(spec.prec, bound), rigorous))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::special_table_exact;
    use rug::Rational;

    fn spec(d: f64, t: f64, n: usize) -> LaplaceSpec {
        LaplaceSpec::new(d, Float::with_val(256, t), n, 256)
    }

    fn close(a: &Complex, b: &Complex, rel: f64) -> bool {
        let diff = Float::with_val(256, Complex::with_val(256, a - b).abs_ref());
        let scale = Float::with_val(256, b.abs_ref()).max(&Float::with_val(256, 1e-300));
        diff / scale < rel
    }

    #[test]
    fn zeroth_term_is_elementary() {
        let s = spec(0.3, 0.2, 0);
        let z = Complex::with_val(256, (0.7, -0.2));
        let w = s.endpoint_point(256) / &z;
        let expect = Complex::with_val(256, 1) - (-w).exp();
        assert!(close(&term_laplace_closed_form(0, &s, &z).unwrap(), &expect, 1e-70));
    }

    #[test]
    fn first_term_by_hand() {
        // (1/z)∫_0^T u e^{−u/z} du = z (1 − e^{−w}(1 + w)), w = T/z
        let s = spec(0.0, 0.25, 1);
        let z = Complex::with_val(256, 10);
        let w = Complex::with_val(256, 0.25) / 10u32;
        let expect = Complex::with_val(256, 1) - (-w.clone()).exp() * (w + 1u32);
        let expect = expect * 10u32;
        assert!(close(&term_laplace_closed_form(1, &s, &z).unwrap(), &expect, 1e-70));
    }

    #[test]
    fn both_routes_agree_near_the_switch() {
        for n in [3usize, 10, 40] {
            let v = Complex::with_val(512, (0.2, 0.1));
            for scale in [0.9, 1.1] {
                // |w| just below and above n+1
                let w_abs = scale * (n as f64 + 1.0);
                let z = Complex::with_val(512, &v) / w_abs * Complex::with_val(512, (0.0, 0.4)).exp();
                let (a, _) = tail_route(n, &v, &z, 1024);
                let (b, _) = finite_route(n, &v, &z, 1024);
                assert!(close(&a, &b, 1e-150), "n = {n}, scale = {scale}");
            }
        }
    }

    #[test]
    fn large_n_small_w_keeps_precision() {
        // the finite form cancels ~n log2(n/|w|) bits here
        let s = spec(0.0, 0.25, 200);
        let z = Complex::with_val(256, (0.02, 0.0));
        let f = term_laplace_closed_form(200, &s, &z).unwrap();
        // e^{−w} Σ_{m>n} w^m/m! ≈ e^{−w} w^{n+1}/(n+1)! for w = 12.5 ≪ n
        assert!(f.real().is_sign_positive());
        let again = term_laplace_closed_form(200, &LaplaceSpec { prec: 512, ..s.clone() }, &z).unwrap();
        assert!(close(&f, &again, 1e-70));
    }

    #[test]
    fn zero_kernel_variable_is_rejected() {
        let s = spec(0.0, 0.25, 0);
        assert!(matches!(term_laplace_closed_form(0, &s, &Complex::new(64)), Err(Error::Domain(_))));
    }

    #[test]
    fn single_term_evaluation() {
        let b = BorelTable::from_table(&special_table_exact(10));
        let s = spec(0.0, 0.25, 0);
        let x = Complex::with_val(256, 10);
        let v = finite_laplace_eval(&b, &s, &x).unwrap();
        let expect = -(Complex::with_val(256, 1) - Complex::with_val(256, -2.5).exp());
        assert!(close(&v.g, &expect, 1e-70));
        assert!(v.rigorous);
    }

    #[test]
    fn endpoint_outside_disk_is_rejected() {
        let b = BorelTable::from_table(&special_table_exact(10));
        assert!(matches!(
            finite_laplace_eval(&b, &spec(0.0, 0.31, 5), &Complex::with_val(256, 10)),
            Err(Error::Spec(_))
        ));
        assert!(matches!(
            finite_laplace_eval(&b, &spec(0.0, 0.2, 11), &Complex::with_val(256, 10)),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn evaluation_is_linear() {
        let t = special_table_exact(60);
        let b = BorelTable::from_table(&t);
        let scaled = BorelTable::from_values(b.values().iter().map(|v| Rational::from(v * 3)).collect(), ());
        let s = spec(0.0, 0.2, 60);
        let x = Complex::with_val(256, (12, 3));
        let g1 = finite_laplace_eval(&b, &s, &x).unwrap().g;
        let g3 = finite_laplace_eval(&scaled, &LaplaceSpec { endpoint: Float::with_val(256, 0.2), ..s }, &x).unwrap().g;
        assert!(close(&(g1 * 3u32), &g3, 1e-70));
    }

    #[test]
    fn tail_bound_shrinks_with_truncation() {
        let b = BorelTable::from_table(&special_table_exact(200));
        let x = Complex::with_val(256, 10);
        let t = Float::with_val(256, 0.27);
        let lo = finite_laplace_eval(&b, &LaplaceSpec::new(0.0, t.clone(), 50, 256), &x).unwrap();
        let hi = finite_laplace_eval(&b, &LaplaceSpec::new(0.0, t, 200, 256), &x).unwrap();
        assert!(hi.tail_bound < lo.tail_bound);
        // the omitted terms really are below the bound
        let diff = Float::with_val(256, Complex::with_val(256, &hi.g - &lo.g).abs_ref());
        assert!(diff <= lo.tail_bound);
    }

    #[test]
    fn sector_membership() {
        let s = spec(0.5, 0.2, 0).sector(1.0).unwrap();
        assert!(s.contains(&s.ray_point(5.0, 64)));
        assert!(!s.contains(&s.ray_point(0.5, 64)));
        assert!(!s.contains(&(s.ray_point(5.0, 64) * Complex::with_val(64, (0, 1.6)).exp())));
        assert!(SectorSpec::new(0.0, 3.2, 1.0).is_err());
        let sp = spec(0.5, 0.2, 0);
        assert!(sp.kernel_decays(&s.ray_point(5.0, 64)));
    }
}
