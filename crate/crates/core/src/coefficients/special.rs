//! Exact engines for the special parameters `α = −1/32, β = −1/4,
//! δ = −1/32` with `a_0 = −1`.
//!
//! Two independent recurrences are implemented. [`special_table_direct`]
//! is the general recurrence with the constants substituted, run from
//! `n = 6`. [`special_table_exact`] switches at `n = 9` to the rearranged
//! form in which the known leading coefficients have been split off the
//! convolutions:
//!
//! ```text
//! a_n = 4a_{n−1} − 16a_{n−2} − ⅓ Σ_{k=3}^{n−6} a_k d_{n−k} + d_n − 4d_{n−1}
//!       − 32/3 Σ_{k=3}^{n−5} (2k² + k(2−n)) a_k a_{n−2−k}
//!       − 128/3 (n−4)² a_{n−3} + 32/3 (n−2)² a_{n−2}
//! ```
//!
//! with `d_m = Σ_{j=3}^{m−3} a_j a_{m−j}`.

use rug::Rational;

use super::params::{BranchSelector, ParameterSet};
use super::table::{CoefficientTable, Recurrence};

/// `a_0..a_5` for the special parameters.
pub fn special_leading() -> [Rational; 6] {
    [
        Rational::from(-1),
        Rational::from(4),
        Rational::new(),
        Rational::from((64, 3)),
        Rational::from((256, 3)),
        Rational::from(2048),
    ]
}

fn weight(k: usize, n: usize) -> i64 {
    let k = k as i64;
    2 * k * k + k * (2 - n as i64)
}

/// `Σ_{k=lo}^{hi} (2k² + k(2−n)) a_k a_{n−2−k}`.
fn weighted_sum(a: &[Rational], n: usize, lo: usize, hi: usize) -> Rational {
    let mut acc = Rational::new();
    for k in lo..=hi {
        let w = weight(k, n);
        if w != 0 {
            acc += Rational::from(&a[k] * &a[n - 2 - k]) * w;
        }
    }
    acc
}

fn direct_step(a: &[Rational], c: &[Rational], n: usize) -> (Rational, Rational) {
    let mut triple = Rational::new();
    let mut double = Rational::new();
    for k in 1..n {
        triple += Rational::from(&a[k] * &c[n - k]);
        double += Rational::from(&a[k] * &a[n - k]);
    }
    let weighted = weighted_sum(a, n, 1, n - 2);
    // a_n = −⅓·triple + ⅓·double − 4a_{n−1} − 32/3·weighted
    let mut an = (double.clone() - triple - weighted * 32u32) / 3u32;
    an -= Rational::from(&a[n - 1] * 4u32);
    // c_n = double + 2 a_0 a_n with a_0 = −1
    let cn = double - Rational::from(&an * 2u32);
    (an, cn)
}

fn leading_tables(n_max: usize) -> (Vec<Rational>, Vec<Rational>) {
    let a: Vec<Rational> = special_leading().into_iter().take(n_max + 1).collect();
    let c = super::table::convolution_squares(&a, ());
    (a, c)
}

/// Exact special table by the direct (`n ≥ 6`) recurrence alone.
pub fn special_table_direct(n_max: usize) -> CoefficientTable<Rational> {
    let (mut a, mut c) = leading_tables(n_max);
    for n in 6..=n_max {
        let (an, cn) = direct_step(&a, &c, n);
        a.push(an);
        c.push(cn);
    }
    CoefficientTable {
        params: ParameterSet::special(),
        branch: BranchSelector::special(),
        recurrence: Recurrence::SpecialDirect,
        ctx: (),
        values: a,
        conv: c,
        warnings: Vec::new(),
    }
}

/// `d_m = Σ_{j=3}^{m−3} a_j a_{m−j}`; zero for `m < 6`.
fn trimmed_square(a: &[Rational], m: usize) -> Rational {
    let mut acc = Rational::new();
    if m >= 6 {
        for j in 3..=m - 3 {
            acc += Rational::from(&a[j] * &a[m - j]);
        }
    }
    acc
}

/// Exact special table: listed values through `a_5`, the direct recurrence
/// for `6 ≤ n ≤ 8`, the rearranged recurrence from `n = 9`.
pub fn special_table_exact(n_max: usize) -> CoefficientTable<Rational> {
    let seed = special_table_direct(n_max.min(8));
    if n_max <= 8 {
        return CoefficientTable { recurrence: Recurrence::SpecialRearranged, ..seed };
    }
    let mut a = seed.values;
    let mut c = seed.conv;
    let mut d: Vec<Rational> = (0..=8).map(|m| trimmed_square(&a, m)).collect();

    for n in 9..=n_max {
        let nn = n as i64;
        let dn = trimmed_square(&a, n);

        let mut nested = Rational::new();
        for k in 3..=n - 6 {
            nested += Rational::from(&a[k] * &d[n - k]);
        }
        let weighted = weighted_sum(&a, n, 3, n - 5);

        // terms over 3 collected first: −nested − 32·weighted − 128(n−4)²a_{n−3} + 32(n−2)²a_{n−2}
        let mut thirds = -nested - weighted * 32u32;
        thirds -= Rational::from(&a[n - 3] * (128 * (nn - 4) * (nn - 4)));
        thirds += Rational::from(&a[n - 2] * (32 * (nn - 2) * (nn - 2)));
        let mut an = thirds / 3u32;
        an += Rational::from(&a[n - 1] * 4u32);
        an -= Rational::from(&a[n - 2] * 16u32);
        an += &dn;
        an -= Rational::from(&d[n - 1] * 4u32);

        // full convolution from the trimmed one: boundary terms j ∈ {0,1,2}
        // and their mirrors
        let mut cn = dn.clone();
        let mut edge = Rational::from(&a[0] * &an);
        edge += Rational::from(&a[1] * &a[n - 1]);
        edge += Rational::from(&a[2] * &a[n - 2]);
        cn += edge * 2u32;

        a.push(an);
        c.push(cn);
        d.push(dn);
    }
    CoefficientTable {
        params: ParameterSet::special(),
        branch: BranchSelector::special(),
        recurrence: Recurrence::SpecialRearranged,
        ctx: (),
        values: a,
        conv: c,
        warnings: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn listed_values() {
        let t = special_table_exact(5);
        assert_eq!(t.values(), &[q(-1, 1), q(4, 1), q(0, 1), q(64, 3), q(256, 3), q(2048, 1)]);
        assert_eq!(special_table_exact(0).values(), &[q(-1, 1)]);
    }

    #[test]
    fn next_values_frozen() {
        // a_6 = 163840/9, a_7 = 4997120/9 from an independent fraction
        // computation of the general recurrence
        let t = special_table_exact(7);
        assert_eq!(t.values()[6], q(163840, 9));
        assert_eq!(t.values()[7], q(4997120, 9));
    }

    #[test]
    fn engines_agree_on_moderate_range() {
        let a = special_table_exact(120);
        let b = special_table_direct(120);
        assert_eq!(a.values(), b.values());
        assert_eq!(a.conv_cache(), b.conv_cache());
    }

    #[test]
    fn general_engine_agrees() {
        let g =
            CoefficientTable::<Rational>::compute(ParameterSet::special(), BranchSelector::special(), (), 60).unwrap();
        assert_eq!(g.values(), special_table_exact(60).values());
    }

    #[test]
    fn extending_special_table_continues_generally() {
        let t = special_table_exact(40).extended(70);
        assert_eq!(t.values(), special_table_exact(70).values());
    }
}
