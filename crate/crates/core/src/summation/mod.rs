//! Borel–Laplace resummation of the divergent series.
//!
//! `b_n = a_n/n!` has a finite radius of convergence `r_B` in the Borel
//! plane (`sqrt(3/32)` for the special parameters). Integrating
//! `Σ b_n uⁿ` term by term against `e^{−u x}` up to `T e^{id}` with
//! `T < r_B` gives a function analytic for large `|x|` whose asymptotic
//! expansion in the half-plane `Re(e^{id} x) > 0` is the original series.
//!
//! The finite endpoint keeps the integration inside the disk where the
//! term-wise interchange is justified. The price is an error of order
//! `e^{−T|x|}` against any solution, which is still beyond all orders of
//! `1/x`.

mod borel;
mod laplace;
mod scan;

pub use borel::{is_special_table, radius_cauchy_hadamard, BorelTable, RadiusEstimate};
pub use laplace::{
    check_spec, finite_laplace_eval, laplace_terms, term_laplace_closed_form, LaplaceRecord, LaplaceSpec, LaplaceValue,
    SectorSpec, SpecRecord,
};
pub use scan::{asymptotic_error_scan, optimal_truncation, partial_sum, ErrorScan, ScanMinimum, ScanRow};

/// Alias matching the transform's usual name.
pub fn borel_transform<S: crate::scalar::Scalar>(table: &crate::coefficients::CoefficientTable<S>) -> BorelTable<S> {
    BorelTable::from_table(table)
}
