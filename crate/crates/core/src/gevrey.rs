//! Growth of the coefficients.
//!
//! For the special table the inequalities
//!
//! ```text
//! (A) a_n ≤ n! (32/3)^{n/2−1}                      n ≥ 4
//! (B) a_n ≥ (32/3)(n−3)(n−2) a_{n−2}               n ≥ 5
//! (C) a_n ≥ Σ_{k=3}^{n−2} a_k a_{n−k+1}            n ≥ 5
//! (D) a_n > 0                                      n ≥ 3
//!     4 (32/3)^{n/2−1} (n−2)! ≤ a_n                n ≥ 5
//!     Σ_{k=3}^{n−5} (2k² + k(2−n)) a_k a_{n−2−k} ≥ 0   n ≥ 20
//! ```
//!
//! are checked in exact arithmetic on a finite range. Odd `n` makes
//! `(32/3)^{n/2−1}` irrational; those comparisons square both sides, and the
//! margin is then `rhs² − a_n|a_n|` (upper) or `a_n|a_n| − rhs²` (lower),
//! which keeps the sign of the unsquared slack.
//!
//! [`estimate_growth`] fits `ln|a_n| ≈ (1/k) ln n! + n ln M + c` for any
//! table.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::coefficients::{classify_rational_case, CoefficientTable, RationalCase, DEFAULT_K_BOUND};
use crate::error::{Error, Result};
use crate::export::csv_string;
use crate::scalar::{QOmega, Scalar};

/// Identifier of a checked inequality, as written in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inequality {
    A,
    B,
    C,
    D,
    Lemma1,
    Lemma3,
    #[serde(rename = "Corollary1_lower")]
    Corollary1Lower,
    #[serde(rename = "Corollary1_upper")]
    Corollary1Upper,
}

impl Inequality {
    pub fn label(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::Lemma1 => "Lemma1",
            Self::Lemma3 => "Lemma3",
            Self::Corollary1Lower => "Corollary1_lower",
            Self::Corollary1Upper => "Corollary1_upper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub n: usize,
    pub pass: bool,
    pub margin: Rational,
    /// The margin compares squares.
    pub squared: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub inequality: Inequality,
    pub range: (usize, usize),
    pub entries: Vec<BoundEntry>,
}

/// JSON form of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub inequality: Inequality,
    pub range: [usize; 2],
    pub pass: bool,
    pub first_fail: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_fail_margin: Option<String>,
    pub margins_file: Option<String>,
}

impl BoundsReport {
    fn from_entries(inequality: Inequality, range: (usize, usize), entries: Vec<BoundEntry>) -> Self {
        Self { inequality, range, entries }
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn first_fail(&self) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| !e.pass)
    }

    pub fn summary(&self, margins_file: Option<String>) -> ReportSummary {
        let fail = self.first_fail();
        ReportSummary {
            inequality: self.inequality,
            range: [self.range.0, self.range.1],
            pass: fail.is_none(),
            first_fail: fail.map(|e| e.n),
            first_fail_margin: fail.map(|e| e.margin.to_string()),
            margins_file,
        }
    }

    /// `n, margin_num, margin_den, squared` rows.
    pub fn margins_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|e| {
                vec![e.n.to_string(), e.margin.numer().to_string(), e.margin.denom().to_string(), e.squared.to_string()]
            })
            .collect();
        csv_string(&["n", "margin_num", "margin_den", "squared"], &rows)
    }
}

/// `(32/3)^j` and `n!` up to the needed index.
struct Scales {
    pow: Vec<Rational>,
    fact: Vec<Integer>,
}

impl Scales {
    fn new(n_max: usize) -> Self {
        let ratio = Rational::from((32, 3));
        let mut pow = vec![Rational::from(1)];
        let mut fact = vec![Integer::from(1)];
        for j in 1..=n_max {
            pow.push(Rational::from(&pow[j - 1] * &ratio));
            fact.push(Integer::from(&fact[j - 1] * j as u32));
        }
        Self { pow, fact }
    }

    /// `c · (32/3)^{n/2−1} · f` as a plain value (even `n`) or its square
    /// (odd `n`).
    fn half_power(&self, n: usize, c: u32, f: &Integer) -> Bound {
        if n.is_multiple_of(2) {
            Bound::Plain(Rational::from(&self.pow[n / 2 - 1] * f) * c)
        } else {
            let f2 = Integer::from(f * f);
            Bound::Squared(Rational::from(&self.pow[n - 2] * f2) * (c * c))
        }
    }
}

enum Bound {
    Plain(Rational),
    Squared(Rational),
}

fn signed_square(a: &Rational) -> Rational {
    let sq = Rational::from(a * a);
    if *a < 0 {
        -sq
    } else {
        sq
    }
}

fn entry(n: usize, margin: Rational, squared: bool) -> BoundEntry {
    BoundEntry { n, pass: margin >= 0, margin, squared }
}

fn upper_entry(n: usize, a: &Rational, b: Bound) -> BoundEntry {
    match b {
        Bound::Plain(r) => entry(n, r - a, false),
        Bound::Squared(r2) => entry(n, r2 - signed_square(a), true),
    }
}

fn lower_entry(n: usize, a: &Rational, b: Bound) -> BoundEntry {
    match b {
        Bound::Plain(r) => entry(n, Rational::from(a - &r), false),
        Bound::Squared(r2) => entry(n, signed_square(a) - r2, true),
    }
}

fn par_entries<F>(lo: usize, hi: usize, f: F) -> Vec<BoundEntry>
where
    F: Fn(usize) -> BoundEntry + Sync + Send,
{
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).into_par_iter().map(f).collect()
}

fn require_special_params(table: &CoefficientTable<Rational>) -> Result<()> {
    if !table.params().is_special() || table.values()[0] != -1 {
        return Err(Error::Classification("the bounds are stated for α = δ = −1/32, β = −1/4 with a_0 = −1".into()));
    }
    Ok(())
}

fn require_special(table: &CoefficientTable<Rational>, n_max: usize, lo: usize) -> Result<()> {
    require_special_params(table)?;
    if n_max < lo {
        return Err(Error::Range(format!("n_max = {n_max} is below the first checked index {lo}")));
    }
    if n_max > table.n_max() {
        return Err(Error::Range(format!("table stops at {}, need {n_max}", table.n_max())));
    }
    Ok(())
}

/// Reports for (A), (B), (C), (D) in that order.
pub fn check_assertion1(table: &CoefficientTable<Rational>, n_max: usize) -> Result<Vec<BoundsReport>> {
    require_special(table, n_max, 5)?;
    let a = table.values();
    let s = Scales::new(n_max);

    let upper = par_entries(4, n_max, |n| upper_entry(n, &a[n], s.half_power(n, 1, &s.fact[n])));
    let step = par_entries(5, n_max, |n| {
        let rhs = Rational::from(&a[n - 2] * (32 * (n as u64 - 3) * (n as u64 - 2))) / 3u32;
        entry(n, Rational::from(&a[n] - &rhs), false)
    });
    let conv = par_entries(5, n_max, |n| {
        let mut sum = Rational::new();
        for k in 3..=n - 2 {
            sum += Rational::from(&a[k] * &a[n - k + 1]);
        }
        entry(n, Rational::from(&a[n] - &sum), false)
    });
    let positive = par_entries(3, n_max, |n| BoundEntry { n, pass: a[n] > 0, margin: a[n].clone(), squared: false });

    Ok(vec![
        BoundsReport::from_entries(Inequality::A, (4, n_max), upper),
        BoundsReport::from_entries(Inequality::B, (5, n_max), step),
        BoundsReport::from_entries(Inequality::C, (5, n_max), conv),
        BoundsReport::from_entries(Inequality::D, (3, n_max), positive),
    ])
}

fn lower_report(a: &[Rational], s: &Scales, id: Inequality, n_max: usize) -> BoundsReport {
    let entries = par_entries(5, n_max, |n| lower_entry(n, &a[n], s.half_power(n, 4, &s.fact[n - 2])));
    BoundsReport::from_entries(id, (5, n_max), entries)
}

/// Lower and upper two-sided bound, in that order, for `5 ≤ n ≤ n_max`.
pub fn check_corollary1(table: &CoefficientTable<Rational>, n_max: usize) -> Result<Vec<BoundsReport>> {
    require_special(table, n_max, 5)?;
    let a = table.values();
    let s = Scales::new(n_max);
    let upper = par_entries(5, n_max, |n| upper_entry(n, &a[n], s.half_power(n, 1, &s.fact[n])));
    Ok(vec![
        lower_report(a, &s, Inequality::Corollary1Lower, n_max),
        BoundsReport::from_entries(Inequality::Corollary1Upper, (5, n_max), upper),
    ])
}

/// `a_n ≥ 4 (32/3)^{n/2−1} (n−2)!` for `5 ≤ n ≤ n_max`.
pub fn check_lemma3(table: &CoefficientTable<Rational>, n_max: usize) -> Result<BoundsReport> {
    require_special(table, n_max, 5)?;
    Ok(lower_report(table.values(), &Scales::new(n_max), Inequality::Lemma3, n_max))
}

pub const LEMMA1_START: usize = 20;

fn lemma1_indices(table: &CoefficientTable<Rational>, n: usize) -> Result<()> {
    if n < LEMMA1_START {
        return Err(Error::Range(format!("the weighted sum is only claimed for n ≥ {LEMMA1_START}, got {n}")));
    }
    if n - 5 > table.n_max() {
        return Err(Error::Range(format!("table stops at {}, need {}", table.n_max(), n - 5)));
    }
    Ok(())
}

/// `Σ_{k=3}^{n−5} (2k² + k(2−n)) a_k a_{n−2−k}`.
pub fn check_lemma1(table: &CoefficientTable<Rational>, n: usize) -> Result<Rational> {
    lemma1_indices(table, n)?;
    let a = table.values();
    let n = n as i64;
    let mut sum = Rational::new();
    for k in 3..=n - 5 {
        let w = 2 * k * k + k * (2 - n);
        if w != 0 {
            sum += Rational::from(&a[k as usize] * &a[(n - 2 - k) as usize]) * w;
        }
    }
    Ok(sum)
}

/// The same sum with the terms `k` and `n−2−k` combined:
/// `Σ_{3≤k<(n−2)/2} (2k−(n−2))² a_k a_{n−2−k}`.
pub fn lemma1_paired(table: &CoefficientTable<Rational>, n: usize) -> Result<Rational> {
    lemma1_indices(table, n)?;
    let a = table.values();
    let m = n - 2;
    let mut sum = Rational::new();
    let mut k = 3;
    while 2 * k < m {
        let w = (2 * k as i64 - m as i64).pow(2);
        sum += Rational::from(&a[k] * &a[m - k]) * w;
        k += 1;
    }
    Ok(sum)
}

/// The unpaired term for even `n`: weight at `k = (n−2)/2` times
/// `a_k²`. `None` for odd `n`.
pub fn lemma1_middle_term(table: &CoefficientTable<Rational>, n: usize) -> Result<Option<Rational>> {
    lemma1_indices(table, n)?;
    if n % 2 == 1 {
        return Ok(None);
    }
    let k = ((n - 2) / 2) as i64;
    let w = 2 * k * k + k * (2 - n as i64);
    let a = &table.values()[k as usize];
    Ok(Some(Rational::from(a * a) * w))
}

/// Report of the weighted sum for `20 ≤ n ≤ n_max`; an entry passes when
/// the sum is nonnegative and equals its paired form (plus the middle
/// term for even `n`).
pub fn lemma1_report(table: &CoefficientTable<Rational>, n_max: usize) -> Result<BoundsReport> {
    require_special_params(table)?;
    lemma1_indices(table, n_max)?;
    let entries = par_entries(LEMMA1_START, n_max, |n| {
        let sum = check_lemma1(table, n).expect("indices checked");
        let mut paired = lemma1_paired(table, n).expect("indices checked");
        if let Some(mid) = lemma1_middle_term(table, n).expect("indices checked") {
            paired += mid;
        }
        BoundEntry { n, pass: sum >= 0 && sum == paired, margin: sum, squared: false }
    });
    Ok(BoundsReport::from_entries(Inequality::Lemma1, (LEMMA1_START, n_max), entries))
}

/// Every check on `[.., n_max]`: (A)–(D), the two-sided bound, the
/// standalone lower bound, and the weighted sum when `n_max ≥ 20`.
pub fn verify_all(table: &CoefficientTable<Rational>, n_max: usize) -> Result<Vec<BoundsReport>> {
    let mut reports = check_assertion1(table, n_max)?;
    reports.extend(check_corollary1(table, n_max)?);
    reports.push(check_lemma3(table, n_max)?);
    if n_max >= LEMMA1_START {
        reports.push(lemma1_report(table, n_max)?);
    }
    Ok(reports)
}

/// Least-squares growth fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate {
    /// `k̂`; infinite when the `ln n!` coefficient is not positive.
    pub order: f64,
    /// `1/k̂`, the fitted coefficient of `ln n!`.
    pub inverse_order: f64,
    #[serde(rename = "type")]
    pub type_estimate: f64,
    pub window: [usize; 2],
    /// Root mean square of the fit residuals.
    pub residual: f64,
}

fn ln_factorial(n: usize) -> f64 {
    Float::with_val(64, n + 1).ln_gamma().to_f64()
}

pub fn estimate_growth<S: Scalar>(table: &CoefficientTable<S>, window: (usize, usize)) -> Result<GrowthEstimate> {
    estimate_growth_values(table.values(), window)
}

/// [`estimate_growth`] on a bare sequence.
pub fn estimate_growth_values<S: Scalar>(values: &[S], window: (usize, usize)) -> Result<GrowthEstimate> {
    let (lo, hi) = window;
    if hi >= values.len() || lo > hi || hi - lo < 3 {
        return Err(Error::Range(format!("window [{lo}, {hi}] needs at least 4 indices inside 0..{}", values.len())));
    }
    let rows = hi - lo + 1;
    let mut x = DMatrix::<f64>::zeros(rows, 3);
    let mut y = DVector::<f64>::zeros(rows);
    for (i, n) in (lo..=hi).enumerate() {
        let l = values[n].ln_abs().ok_or_else(|| Error::Domain(format!("a_{n} = 0 inside the fit window")))?;
        x[(i, 0)] = ln_factorial(n);
        x[(i, 1)] = n as f64;
        x[(i, 2)] = 1.0;
        y[i] = l;
    }
    let svd = x.clone().svd(true, true);
    let coef = svd.solve(&y, 1e-12).map_err(|e| Error::Numeric(e.to_string()))?;
    let r = &x * &coef - &y;
    let residual = (r.norm_squared() / rows as f64).sqrt();
    let inv = coef[0];
    Ok(GrowthEstimate {
        order: if inv > 0.0 { 1.0 / inv } else { f64::INFINITY },
        inverse_order: inv,
        type_estimate: coef[1].exp(),
        window: [lo, hi],
        residual,
    })
}

/// Exact scalars with a rational squared modulus.
pub trait ExactModulus: Scalar {
    fn modulus_squared(&self) -> Rational;
}

impl ExactModulus for Rational {
    fn modulus_squared(&self) -> Rational {
        Rational::from(self * self)
    }
}

impl ExactModulus for QOmega {
    fn modulus_squared(&self) -> Rational {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCertificate {
    /// `|a_n|² ≥ 16 (32/3)^{n−2} ((n−2)!)²` on the range, every entry squared.
    pub lower_bound: BoundsReport,
    /// `|a_N|^{1/N} / N` at the end of the range.
    pub root_over_n: f64,
    /// The same quantity for the lower bound; positive and tending to
    /// `sqrt(32/3)/e`, so `|a_n|^{1/n}/n^{1−ε}` is unbounded.
    pub bound_root_over_n: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub range: [usize; 2],
    pub lower_bound: ReportSummary,
    pub root_over_n: f64,
    pub bound_root_over_n: f64,
    pub notes: Vec<String>,
}

impl DivergenceCertificate {
    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            range: [self.lower_bound.range.0, self.lower_bound.range.1],
            lower_bound: self.lower_bound.summary(None),
            root_over_n: self.root_over_n,
            bound_root_over_n: self.bound_root_over_n,
            notes: self.notes.clone(),
        }
    }
}

/// Exact certificate that the special series (any branch) grows like
/// `n!` on `[5, n_max]`, hence diverges with Gevrey order exactly one.
pub fn certify_divergence<S: ExactModulus>(table: &CoefficientTable<S>, n_max: usize) -> Result<DivergenceCertificate> {
    let params = table.params();
    match classify_rational_case(params, DEFAULT_K_BOUND) {
        RationalCase::Theorem1Divergent => {}
        other => {
            return Err(Error::Classification(format!(
                "no divergence certificate for parameters classified as {other:?}"
            )))
        }
    }
    let special = crate::coefficients::ParameterSet::<Rational>::special();
    let same = |p: &S::Param, q: &Rational| *p == S::Param::from_rational(q, params.ctx());
    if !(same(&params.alpha, &special.alpha)
        && same(&params.beta, &special.beta)
        && same(&params.delta, &special.delta))
    {
        return Err(Error::Classification(
            "certificate is computed on the normalized parameters; rescale the table first".into(),
        ));
    }
    let a = table.values();
    if a[0].modulus_squared() != 1 {
        return Err(Error::Branch("leading coefficient must have modulus 1".into()));
    }
    if n_max < 5 || n_max > table.n_max() {
        return Err(Error::Range(format!("n_max must lie in [5, {}]", table.n_max())));
    }

    let s = Scales::new(n_max);
    let entries = par_entries(5, n_max, |n| {
        let f = &s.fact[n - 2];
        let rhs = Rational::from(&s.pow[n - 2] * Integer::from(f * f)) * 16u32;
        entry(n, a[n].modulus_squared() - rhs, true)
    });
    let lower_bound = BoundsReport::from_entries(Inequality::Corollary1Lower, (5, n_max), entries);
    if let Some(e) = lower_bound.first_fail() {
        return Err(Error::Verification(format!("lower bound fails at n = {} (margin {})", e.n, e.margin)));
    }

    let nf = n_max as f64;
    let ln_mod = a[n_max].modulus_squared().ln_abs().expect("nonzero by the bound") / 2.0;
    let ln_bound = 4f64.ln() + (nf / 2.0 - 1.0) * (32f64 / 3.0).ln() + ln_factorial(n_max - 2);
    Ok(DivergenceCertificate {
        lower_bound,
        root_over_n: (ln_mod / nf - nf.ln()).exp(),
        bound_root_over_n: (ln_bound / nf - nf.ln()).exp(),
        notes: vec![
            "finite-range exact check; the bound for all n is the cited induction".into(),
            "other cube-root branches multiply a_n by a cube root of unity, so |a_n| and the bound are unchanged"
                .into(),
            "every parameter set with αβ ≠ 0, δ = −β²/2 rescales to this one".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{special_table_exact, BranchSelector, ParameterSet};
    use crate::scalar::factorial;
    use std::sync::OnceLock;

    fn table() -> &'static CoefficientTable<Rational> {
        static T: OnceLock<CoefficientTable<Rational>> = OnceLock::new();
        T.get_or_init(|| special_table_exact(120))
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn base_cases_pass() {
        let r = check_assertion1(table(), 8).unwrap();
        assert_eq!(
            r.iter().map(|r| r.inequality).collect::<Vec<_>>(),
            [Inequality::A, Inequality::B, Inequality::C, Inequality::D]
        );
        assert!(r.iter().all(BoundsReport::pass));
        assert_eq!(r[0].range, (4, 8));
        assert_eq!(r[3].entries.len(), 6);
    }

    #[test]
    fn step_margin_at_five() {
        // 2048 − (32/3)·2·3·(64/3) = 2048 − 4096/3
        let r = check_assertion1(table(), 8).unwrap();
        assert_eq!(r[1].entries[0].n, 5);
        assert_eq!(r[1].entries[0].margin, q(2048, 3));
    }

    #[test]
    fn lower_bound_squared_margins_at_five() {
        let r = check_corollary1(table(), 6).unwrap();
        let lo = &r[0].entries[0];
        assert!(lo.squared);
        let p3 = Rational::from((32768, 27));
        assert_eq!(lo.margin, Rational::from(2048 * 2048) - p3.clone() * 16 * 36);
        assert_eq!(r[1].entries[0].margin, p3 * 120 * 120 - Rational::from(2048 * 2048));
        // n = 6 is even: plain difference
        let a6 = q(163840, 9);
        assert!(!r[0].entries[1].squared);
        assert_eq!(r[0].entries[1].margin, a6.clone() - q(1024, 9) * 4 * 24);
        assert_eq!(r[1].entries[1].margin, q(1024, 9) * 720 - a6);
    }

    #[test]
    fn moderate_range_passes() {
        let t = table();
        assert!(verify_all(t, 120).unwrap().iter().all(BoundsReport::pass));
    }

    #[test]
    fn weighted_sum_forms_agree() {
        for n in 20..=100 {
            let s = check_lemma1(table(), n).unwrap();
            let mut p = lemma1_paired(table(), n).unwrap();
            let mid = lemma1_middle_term(table(), n).unwrap();
            assert_eq!(mid.is_some(), n % 2 == 0);
            if let Some(m) = mid {
                assert_eq!(m, 0);
                p += m;
            }
            assert!(s >= 0);
            assert_eq!(s, p, "n = {n}");
        }
        assert!(matches!(check_lemma1(table(), 19), Err(Error::Range(_))));
    }

    #[test]
    fn tampered_value_is_caught() {
        let mut values = table().values().to_vec();
        values[40] = -values[40].clone();
        let t = CoefficientTable::from_parts(
            ParameterSet::special(),
            BranchSelector::special(),
            crate::coefficients::Recurrence::Loaded,
            (),
            values,
        );
        let r = check_assertion1(&t, 60).unwrap();
        assert_eq!(r[3].first_fail().unwrap().n, 40);
        assert_eq!(r[0].first_fail(), None);
        let low = check_corollary1(&t, 60).unwrap();
        assert_eq!(low[0].first_fail().unwrap().n, 40);
        assert!(!low[0].first_fail().unwrap().squared);
        assert!(certify_divergence(&t, 60).is_ok(), "moduli are unchanged by a sign flip");
    }

    #[test]
    fn report_json_and_csv() {
        let r = &check_assertion1(table(), 8).unwrap()[0];
        let v = serde_json::to_value(r.summary(None)).unwrap();
        assert_eq!(v["inequality"], "A");
        assert_eq!(v["range"], serde_json::json!([4, 8]));
        assert_eq!(v["pass"], true);
        assert!(v["first_fail"].is_null());
        let csv = r.margins_csv();
        assert!(csv.starts_with("n,margin_num,margin_den,squared\n4,"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn non_special_tables_are_refused() {
        let p = ParameterSet::new(q(1, 1), q(-4, 1), q(-1, 1)).unwrap();
        let t = CoefficientTable::<Rational>::compute(p, BranchSelector::principal(0), (), 30).unwrap();
        assert!(matches!(check_assertion1(&t, 20), Err(Error::Classification(_))));
        assert!(matches!(check_assertion1(table(), 121), Err(Error::Range(_))));
    }

    #[test]
    fn certificate_on_all_branches() {
        let c = certify_divergence(table(), 120).unwrap();
        assert!(c.lower_bound.pass());
        assert!(c.root_over_n >= c.bound_root_over_n && c.bound_root_over_n > 0.0);
        for k in 1..3 {
            let r = certify_divergence(&table().branch_rotate(k), 120).unwrap();
            assert_eq!(r.lower_bound, c.lower_bound);
        }
    }

    #[test]
    fn degenerate_beta_gets_no_certificate() {
        let p = ParameterSet::new(q(-1, 32), q(0, 1), q(-1, 32)).unwrap();
        let t = CoefficientTable::<Rational>::compute(p, BranchSelector::special(), (), 30).unwrap();
        assert!(matches!(certify_divergence(&t, 30), Err(Error::Classification(_))));
    }

    #[test]
    fn growth_fit_controls() {
        let geometric: Vec<Rational> = (0..200).map(|n| Rational::from(Integer::from(1) << n as u32)).collect();
        let g = estimate_growth_values(&geometric, (100, 199)).unwrap();
        assert!(g.inverse_order.abs() < 1e-9);
        assert!((g.type_estimate - 2.0).abs() < 1e-9);
        assert!(g.residual < 1e-9);

        let fact: Vec<Rational> = (0..200).map(|n| Rational::from(factorial(n) * 3u32)).collect();
        let g = estimate_growth_values(&fact, (50, 199)).unwrap();
        assert!((g.order - 1.0).abs() < 1e-9 && (g.type_estimate - 1.0).abs() < 1e-9);

        assert!(matches!(estimate_growth_values(table().values(), (0, 10)), Err(Error::Domain(_))));
    }

    #[test]
    fn growth_fit_is_branch_invariant() {
        let a = estimate_growth(table(), (60, 120)).unwrap();
        let b = estimate_growth(&table().branch_rotate(2), (60, 120)).unwrap();
        assert!((a.order - b.order).abs() < 1e-9 && (a.type_estimate - b.type_estimate).abs() < 1e-9);
    }
}
