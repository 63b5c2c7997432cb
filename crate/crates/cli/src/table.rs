use pgevrey::coefficients::{special_table_exact, BranchSelector, CoefficientTable, ParameterSet};
use pgevrey::rug::{Complex, Rational};
use pgevrey::scalar::{parse_rational, rational_cbrt, QOmega};

use crate::args::Common;
use crate::Failure;

/// A coefficient table in whichever arithmetic the inputs allow.
pub enum AnyTable {
    Exact(CoefficientTable<Rational>),
    Omega(CoefficientTable<QOmega>),
    Numeric(CoefficientTable<Complex>),
}

/// Runs `$body` with `$t` bound to the concrete table.
macro_rules! with_table {
    ($table:expr, $t:ident => $body:expr) => {
        match $table {
            $crate::table::AnyTable::Exact($t) => $body,
            $crate::table::AnyTable::Omega($t) => $body,
            $crate::table::AnyTable::Numeric($t) => $body,
        }
    };
}
pub(crate) use with_table;

pub fn exact_params(c: &Common) -> Result<Option<ParameterSet<Rational>>, Failure> {
    if c.special {
        return Ok(Some(ParameterSet::special()));
    }
    match (&c.alpha, &c.beta, &c.delta) {
        (Some(a), Some(b), Some(d)) => {
            Ok(Some(ParameterSet::new(parse_rational(a)?, parse_rational(b)?, parse_rational(d)?)?))
        }
        (None, None, None) => Ok(None),
        _ => Err(Failure::usage("--alpha, --beta and --delta must be given together")),
    }
}

pub fn build(c: &Common, n_max: usize) -> Result<AnyTable, Failure> {
    let params = exact_params(c)?.ok_or_else(|| Failure::usage("give --special or all of --alpha, --beta, --delta"))?;
    let override_a0 = c.a0.as_deref().map(parse_rational).transpose()?;

    if c.special {
        if override_a0.is_some() {
            return Err(Failure::usage("--special fixes a_0 = -1; --a0 does not apply"));
        }
        if c.numeric {
            return Err(Failure::usage("--special is computed exactly; drop --numeric"));
        }
        let t = special_table_exact(n_max);
        return Ok(match c.branch {
            0 => AnyTable::Exact(t),
            k => AnyTable::Omega(t.branch_rotate(k)),
        });
    }

    let target = params.cube_target();
    let rational_root = target > 0 && rational_cbrt(&target).is_some();
    let branch = BranchSelector { index: c.branch, override_a0 };
    if !c.numeric && (branch.override_a0.is_some() || rational_root) {
        return Ok(if c.branch == 0 {
            AnyTable::Exact(CoefficientTable::compute(params, branch, (), n_max)?)
        } else {
            AnyTable::Omega(CoefficientTable::compute(params, branch, (), n_max)?)
        });
    }
    if !c.numeric {
        eprintln!(
            "note: the principal cube root of -delta/alpha = {target} is not rational; using {}-bit complex arithmetic",
            c.prec_bits
        );
    }
    let t = CoefficientTable::<Complex>::compute(params.to_numeric(c.prec_bits), branch, c.prec_bits, n_max)?;
    for w in t.warnings().iter().take(5) {
        eprintln!("warning: about {:.0} of {} bits lost to cancellation at n = {}", w.lost_bits, w.prec, w.n);
    }
    if t.warnings().len() > 5 {
        eprintln!("warning: {} more precision warnings", t.warnings().len() - 5);
    }
    Ok(AnyTable::Numeric(t))
}
