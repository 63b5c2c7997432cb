//! Coefficients of the formal solution `u(x) = Σ a_n x^{−n}` of
//!
//! ```text
//! u'' = (u')²/u − u'/x + αu² + (3/2)β/x + δ/u
//! ```
//!
//! at infinity. `a_0³ = −δ/α`, `a_1 = −β/(2αa_0)`, `a_2 = 0`,
//! `a_3 = −β/(6α²a_0²)(β²/(4δ) + 1)`, and for `n ≥ 4`
//!
//! ```text
//! 3αa_0² a_n = −α Σ_{k=1}^{n−1} a_k c_{n−k} − αa_0 Σ_{k=1}^{n−1} a_k a_{n−k}
//!              − (3/2)β a_{n−1} + Σ_{k=1}^{n−2} (2k² + k(2−n)) a_k a_{n−2−k}
//! ```
//!
//! where `c_m = Σ_{j=0}^{m} a_j a_{m−j}` is kept as a running cache so a
//! table of length `N` costs `O(N²)` multiplications.

mod file;
mod params;
mod special;
mod table;

pub use file::{values_csv, CoeffRecord, CoefficientFile, ExportParams, ParamsRecord};
pub use params::{
    classify_rational_case, normalize_to_special, transform_parameters, BranchRoot, BranchSelector, FullParameters,
    ParameterSet, RationalCase, DEFAULT_K_BOUND,
};
pub use special::{special_leading, special_table_direct, special_table_exact};
pub use table::{initial_coefficients, CoefficientTable, PrecisionWarning, Recurrence, Rotate};
