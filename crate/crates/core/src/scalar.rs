//! Scalar fields the coefficient engines run over.
//!
//! Three instantiations are provided:
//!
//! * [`Rational`]: exact rationals, used whenever the parameters and `a_0`
//!   are rational.
//! * [`QOmega`]: exact elements `x + y·ω` of `Q(ω)`, `ω = exp(2πi/3)`, used
//!   to keep cube-root branch rotations exact.
//! * [`Complex`]: MPC complex floats at a fixed precision (bits).
//!
//! The engines are generic over [`Scalar`]; the precision of numeric values
//! travels in [`Scalar::Ctx`].

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

/// Arithmetic mode of a table or report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Exact over `Q(ω)`.
    ExactOmega,
    Numeric {
        prec: u32,
    },
}

impl Mode {
    pub fn is_exact(self) -> bool {
        !matches!(self, Mode::Numeric { .. })
    }

    pub fn label(self) -> &'static str {
        if self.is_exact() {
            "exact"
        } else {
            "numeric"
        }
    }
}

pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Construction context: `()` for exact fields, the precision in bits for
    /// complex floats.
    type Ctx: Copy + fmt::Debug + PartialEq + Send + Sync;
    /// The field parameters of the equation live in.
    type Param: Scalar<Ctx = Self::Ctx>;

    fn ctx(&self) -> Self::Ctx;
    fn mode(ctx: Self::Ctx) -> Mode;

    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(q: &Rational, ctx: Self::Ctx) -> Self;
    fn from_param(p: &Self::Param, ctx: Self::Ctx) -> Self;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// Division; the caller guarantees a nonzero divisor.
    fn over(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &Rational) -> Self;
    fn times_i64(&self, w: i64) -> Self;

    /// `self += a * b`.
    fn add_product(&mut self, a: &Self, b: &Self);

    /// Multiplication by `ω^e`. Returns `None` when the field cannot
    /// represent the result (rationals for `e mod 3 != 0`).
    fn times_omega_pow(&self, e: u32) -> Option<Self>;

    /// Equality test: exact in exact fields, relative tolerance tied to the
    /// working precision for complex floats.
    fn is_close(&self, other: &Self) -> bool;

    /// `ln |self|` as an `f64`, `None` for zero. Works far outside the `f64`
    /// exponent range.
    fn ln_abs(&self) -> Option<f64>;

    fn to_complex(&self, prec: u32) -> Complex;
}

impl Scalar for Rational {
    type Ctx = ();
    type Param = Rational;

    fn ctx(&self) {}

    fn mode(_: ()) -> Mode {
        Mode::Exact
    }

    fn from_i64(v: i64, _: ()) -> Self {
        Rational::from(v)
    }

    fn from_rational(q: &Rational, _: ()) -> Self {
        q.clone()
    }

    fn from_param(p: &Rational, _: ()) -> Self {
        p.clone()
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }

    fn plus(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }

    fn minus(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }

    fn times(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }

    fn over(&self, other: &Self) -> Self {
        Rational::from(self / other)
    }

    fn negated(&self) -> Self {
        Rational::from(-self)
    }

    fn scaled(&self, q: &Rational) -> Self {
        Rational::from(self * q)
    }

    fn times_i64(&self, w: i64) -> Self {
        Rational::from(self * w)
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }

    fn times_omega_pow(&self, e: u32) -> Option<Self> {
        e.is_multiple_of(3).then(|| self.clone())
    }

    fn is_close(&self, other: &Self) -> bool {
        self == other
    }

    fn ln_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        Some(ln_abs_rational(self))
    }

    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
}

fn ln_abs_rational(q: &Rational) -> f64 {
    let num = Float::with_val(64, &*q.numer().as_abs());
    let den = Float::with_val(64, q.denom());
    (num.ln() - den.ln()).to_f64()
}

/// An element `re + om·ω` of `Q(ω)` with `ω² = −1 − ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QOmega {
    pub re: Rational,
    pub om: Rational,
}

impl QOmega {
    pub fn new(re: Rational, om: Rational) -> Self {
        Self { re, om }
    }

    pub fn from_rational_value(q: Rational) -> Self {
        Self { re: q, om: Rational::new() }
    }

    pub fn omega() -> Self {
        Self { re: Rational::new(), om: Rational::from(1) }
    }

    /// `ω^e`.
    pub fn omega_pow(e: u32) -> Self {
        match e % 3 {
            0 => Self::from_rational_value(Rational::from(1)),
            1 => Self::omega(),
            _ => Self { re: Rational::from(-1), om: Rational::from(-1) },
        }
    }

    /// Field norm `|x + yω|² = x² − xy + y²`, which is the squared modulus.
    pub fn norm(&self) -> Rational {
        let xx = Rational::from(&self.re * &self.re);
        let xy = Rational::from(&self.re * &self.om);
        let yy = Rational::from(&self.om * &self.om);
        xx - xy + yy
    }

    /// Complex conjugate `x + yω̄ = (x − y) − yω`.
    pub fn conj(&self) -> Self {
        Self { re: Rational::from(&self.re - &self.om), om: Rational::from(-&self.om) }
    }

    /// The rational value when the `ω` part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.om.cmp0() == Ordering::Equal).then_some(&self.re)
    }
}

impl Scalar for QOmega {
    type Ctx = ();
    type Param = Rational;

    fn ctx(&self) {}

    fn mode(_: ()) -> Mode {
        Mode::ExactOmega
    }

    fn from_i64(v: i64, _: ()) -> Self {
        Self::from_rational_value(Rational::from(v))
    }

    fn from_rational(q: &Rational, _: ()) -> Self {
        Self::from_rational_value(q.clone())
    }

    fn from_param(p: &Rational, _: ()) -> Self {
        Self::from_rational_value(p.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.om.cmp0() == Ordering::Equal
    }

    fn plus(&self, other: &Self) -> Self {
        Self { re: Rational::from(&self.re + &other.re), om: Rational::from(&self.om + &other.om) }
    }

    fn minus(&self, other: &Self) -> Self {
        Self { re: Rational::from(&self.re - &other.re), om: Rational::from(&self.om - &other.om) }
    }

    fn times(&self, other: &Self) -> Self {
        // (a + bω)(c + dω) = (ac − bd) + (ad + bc − bd)ω
        let ac = Rational::from(&self.re * &other.re);
        let bd = Rational::from(&self.om * &other.om);
        let ad = Rational::from(&self.re * &other.om);
        let bc = Rational::from(&self.om * &other.re);
        Self { re: Rational::from(&ac - &bd), om: ad + bc - bd }
    }

    fn over(&self, other: &Self) -> Self {
        let n = other.norm();
        let p = self.times(&other.conj());
        Self { re: p.re / &n, om: p.om / &n }
    }

    fn negated(&self) -> Self {
        Self { re: Rational::from(-&self.re), om: Rational::from(-&self.om) }
    }

    fn scaled(&self, q: &Rational) -> Self {
        Self { re: Rational::from(&self.re * q), om: Rational::from(&self.om * q) }
    }

    fn times_i64(&self, w: i64) -> Self {
        Self { re: Rational::from(&self.re * w), om: Rational::from(&self.om * w) }
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        let p = a.times(b);
        self.re += p.re;
        self.om += p.om;
    }

    fn times_omega_pow(&self, e: u32) -> Option<Self> {
        Some(match e % 3 {
            0 => self.clone(),
            // (x + yω)ω = −y + (x − y)ω
            1 => Self { re: Rational::from(-&self.om), om: Rational::from(&self.re - &self.om) },
            // (x + yω)ω² = (y − x) − xω
            _ => Self { re: Rational::from(&self.om - &self.re), om: Rational::from(-&self.re) },
        })
    }

    fn is_close(&self, other: &Self) -> bool {
        self == other
    }

    fn ln_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        Some(0.5 * ln_abs_rational(&self.norm()))
    }

    fn to_complex(&self, prec: u32) -> Complex {
        let omega = omega_complex(prec);
        let mut z = Complex::with_val(prec, &self.om) * omega;
        z += &self.re;
        z
    }
}

impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})ω", self.re, self.om)
    }
}

impl Scalar for Complex {
    type Ctx = u32;
    type Param = Complex;

    fn ctx(&self) -> u32 {
        self.prec().0
    }

    fn mode(prec: u32) -> Mode {
        Mode::Numeric { prec }
    }

    fn from_i64(v: i64, prec: u32) -> Self {
        Complex::with_val(prec, v)
    }

    fn from_rational(q: &Rational, prec: u32) -> Self {
        Complex::with_val(prec, q)
    }

    fn from_param(p: &Complex, prec: u32) -> Self {
        Complex::with_val(prec, p)
    }

    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }

    fn plus(&self, other: &Self) -> Self {
        Complex::with_val(self.ctx(), self + other)
    }

    fn minus(&self, other: &Self) -> Self {
        Complex::with_val(self.ctx(), self - other)
    }

    fn times(&self, other: &Self) -> Self {
        Complex::with_val(self.ctx(), self * other)
    }

    fn over(&self, other: &Self) -> Self {
        Complex::with_val(self.ctx(), self / other)
    }

    fn negated(&self) -> Self {
        Complex::with_val(self.ctx(), -self)
    }

    fn scaled(&self, q: &Rational) -> Self {
        let prec = self.ctx();
        Complex::with_val(prec, self * Complex::with_val(prec, q))
    }

    fn times_i64(&self, w: i64) -> Self {
        Complex::with_val(self.ctx(), self * w)
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn times_omega_pow(&self, e: u32) -> Option<Self> {
        let prec = self.ctx();
        Some(match e % 3 {
            0 => self.clone(),
            k => {
                let w = omega_complex(prec);
                let w = if k == 1 { w } else { Complex::with_val(prec, &w * &w) };
                Complex::with_val(prec, self * w)
            }
        })
    }

    fn is_close(&self, other: &Self) -> bool {
        let prec = self.ctx().min(other.ctx());
        let diff = Float::with_val(prec, Complex::with_val(prec, self - other).abs_ref());
        let scale = Float::with_val(prec, other.abs_ref()).max(&Float::with_val(prec, 1));
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));
        diff <= scale * tol
    }

    fn ln_abs(&self) -> Option<f64> {
        if Scalar::is_zero(self) {
            return None;
        }
        let a = Float::with_val(self.ctx(), self.abs_ref());
        Some(a.ln().to_f64())
    }

    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
}

/// `ω = exp(2πi/3) = −1/2 + i·√3/2`.
pub fn omega_complex(prec: u32) -> Complex {
    let s3 = Float::with_val(prec, 3).sqrt() / 2u32;
    Complex::with_val(prec, (Float::with_val(prec, -0.5), s3))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Principal cube root `exp(ln(q)/3)`, argument in `(−π/3, π/3]`.
pub fn principal_cbrt(q: &Complex) -> Complex {
    let prec = q.prec().0;
    if Scalar::is_zero(q) {
        return Complex::with_val(prec, 0);
    }
    // a real positive input keeps an exactly real root
    if q.imag().is_zero() && q.real().is_sign_positive() {
        return Complex::with_val(prec, (Float::with_val(prec, q.real()).cbrt(), 0));
    }
    let l = Complex::with_val(prec, q.ln_ref());
    (l / 3u32).exp()
}

/// Principal square root.
pub fn principal_sqrt(q: &Complex) -> Complex {
    Complex::with_val(q.prec().0, q.sqrt_ref())
}

/// Exact rational cube root when it exists (real root).
pub fn rational_cbrt(q: &Rational) -> Option<Rational> {
    let (num, den) = (q.numer(), q.denom());
    let rn = Integer::from(num.root_ref(3));
    let rd = Integer::from(den.root_ref(3));
    let cube = |r: &Integer| Integer::from(r * r) * r;
    let ok = cube(&rn) == *num && cube(&rd) == *den;
    ok.then(|| Rational::from((rn, rd)))
}

/// `q^e` for integer `e ≥ 0`.
pub fn rational_pow(q: &Rational, e: u32) -> Rational {
    Rational::from(q.pow(e))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Parses `p/q`, an integer, or a decimal literal such as `-0.25` or `1e-3`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(p) = Rational::parse(t) {
        return Ok(Rational::from(p));
    }
    // decimal: exact conversion through the decimal digits
    let (mantissa, exp10) = split_decimal(t).ok_or_else(|| Error::Parse(format!("not a number: {t:?}")))?;
    let m = Integer::parse(&mantissa).map(Integer::from).map_err(|e| Error::Parse(format!("{t:?}: {e}")))?;
    let scale = Integer::from(Integer::u_pow_u(10, exp10.unsigned_abs()));
    Ok(if exp10 >= 0 { Rational::from(m * scale) } else { Rational::from((m, scale)) })
}

fn split_decimal(t: &str) -> Option<(String, i32)> {
    let (body, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (int, frac) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mantissa = format!("{int}{frac}");
    Some((mantissa, exp - frac.len() as i32))
}

/// Parses a complex literal `re,im` or a real literal.
pub fn parse_complex(s: &str, prec: u32) -> Result<Complex> {
    let t = s.trim();
    let (re, im) = match t.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "0"),
    };
    let parse = |v: &str| -> Result<Float> {
        if let Ok(q) = parse_rational(v) {
            return Ok(Float::with_val(prec, &q));
        }
        Float::parse(v).map(|p| Float::with_val(prec, p)).map_err(|e| Error::Parse(format!("{v:?}: {e}")))
    };
    Ok(Complex::with_val(prec, (parse(re)?, parse(im)?)))
}

/// Decimal rendering with enough digits to round-trip at the value's
/// precision.
pub fn float_string(f: &Float) -> String {
    f.to_string_radix(10, None)
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    Float::parse(s.trim()).map(|p| Float::with_val(prec, p)).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}
