//! Coefficient export: JSON document and its CSV mirror.

use rug::{Complex, Rational};
use serde::{Deserialize, Serialize};

use super::params::{BranchSelector, ParameterSet};
use super::table::{CoefficientTable, Recurrence};
use crate::error::{Error, Result};
use crate::export::{csv_string, ComplexRecord, ExportScalar, ValueRecord};
use crate::scalar::{parse_rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamsRecord {
    Exact { alpha: String, beta: String, delta: String },
    Numeric { alpha: ComplexRecord, beta: ComplexRecord, delta: ComplexRecord },
}

/// Parameter sets that have a file representation.
pub trait ExportParams: Scalar {
    fn params_record(p: &ParameterSet<Self>) -> ParamsRecord;
}

impl ExportParams for Rational {
    fn params_record(p: &ParameterSet<Rational>) -> ParamsRecord {
        ParamsRecord::Exact { alpha: p.alpha.to_string(), beta: p.beta.to_string(), delta: p.delta.to_string() }
    }
}

impl ExportParams for Complex {
    fn params_record(p: &ParameterSet<Complex>) -> ParamsRecord {
        ParamsRecord::Numeric {
            alpha: ComplexRecord::from_complex(&p.alpha),
            beta: ComplexRecord::from_complex(&p.beta),
            delta: ComplexRecord::from_complex(&p.delta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub n: usize,
    #[serde(flatten)]
    pub value: ValueRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub mode: String,
    pub params: ParamsRecord,
    pub branch: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0_override: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<String>,
    pub coeffs: Vec<CoeffRecord>,
}

impl CoefficientFile {
    pub fn from_table<S>(table: &CoefficientTable<S>) -> Self
    where
        S: ExportScalar,
        S::Param: ExportParams,
    {
        Self::from_values(table, table.values())
    }

    /// Same header as `table`, different values (used for Borel tables).
    pub fn from_values<S>(table: &CoefficientTable<S>, values: &[S]) -> Self
    where
        S: ExportScalar,
        S::Param: ExportParams,
    {
        Self {
            mode: table.mode().label().to_string(),
            params: S::Param::params_record(table.params()),
            branch: table.branch().index,
            a0_override: table.branch().override_a0.as_ref().map(|r| r.to_string()),
            recurrence: Some(table.recurrence().label()),
            coeffs: values.iter().enumerate().map(|(n, v)| CoeffRecord { n, value: v.record() }).collect(),
        }
    }

    /// Reads back an exact rational table. Coefficients must be listed for
    /// `n = 0, 1, 2, ...` without gaps.
    pub fn to_exact_table(&self) -> Result<CoefficientTable<Rational>> {
        if self.mode != "exact" {
            return Err(Error::Mode(format!("coefficient file is in {} mode", self.mode)));
        }
        let params = match &self.params {
            ParamsRecord::Exact { alpha, beta, delta } => {
                ParameterSet::new(parse_rational(alpha)?, parse_rational(beta)?, parse_rational(delta)?)?
            }
            ParamsRecord::Numeric { .. } => return Err(Error::Mode("exact file with numeric parameters".into())),
        };
        let override_a0 = self.a0_override.as_deref().map(parse_rational).transpose()?;
        let branch = BranchSelector { index: self.branch, override_a0 };
        let mut values = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.n != i {
                return Err(Error::Parse(format!("coefficient index {} out of order at {}", c.n, i)));
            }
            values.push(Rational::from_record(&c.value, ())?);
        }
        if values.is_empty() {
            return Err(Error::Parse("no coefficients".into()));
        }
        Ok(CoefficientTable::from_parts(params, branch, Recurrence::Loaded, (), values))
    }
}

/// CSV mirror: `n` followed by the scalar's columns.
pub fn values_csv<S: ExportScalar>(values: &[S]) -> String {
    let mut header = vec!["n"];
    header.extend_from_slice(S::csv_header());
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let mut r = vec![n.to_string()];
            r.extend(v.csv_fields());
            r
        })
        .collect();
    csv_string(&header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::special::special_table_exact;
    use crate::export::json_string;

    #[test]
    fn exact_json_round_trip() {
        let t = special_table_exact(30);
        let f = CoefficientFile::from_table(&t);
        let s = json_string(&f);
        let back: CoefficientFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let t2 = back.to_exact_table().unwrap();
        assert_eq!(t2.values(), t.values());
        assert_eq!(t2.conv_cache(), t.conv_cache());
        assert!(t2.params().is_special());
        assert_eq!(t2.recurrence(), Recurrence::Loaded);
    }

    #[test]
    fn exact_schema_fields() {
        let f = CoefficientFile::from_table(&special_table_exact(3));
        let v: serde_json::Value = serde_json::from_str(&json_string(&f)).unwrap();
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["branch"], 0);
        assert_eq!(v["params"]["alpha"], "-1/32");
        assert_eq!(v["coeffs"][3]["n"], 3);
        assert_eq!(v["coeffs"][3]["num"], "64");
        assert_eq!(v["coeffs"][3]["den"], "3");
    }

    #[test]
    fn numeric_schema_fields() {
        let t = special_table_exact(3).to_numeric(128);
        let f = CoefficientFile::from_table(&t);
        let v: serde_json::Value = serde_json::from_str(&json_string(&f)).unwrap();
        assert_eq!(v["mode"], "numeric");
        assert_eq!(v["coeffs"][1]["prec_bits"], 128);
        assert!(v["coeffs"][1]["re"].as_str().unwrap().starts_with("4"));
        assert!(f.to_exact_table().is_err());
    }

    #[test]
    fn csv_mirror() {
        let s = values_csv(special_table_exact(5).values());
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "n,num,den");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[4], "3,64,3");
        assert_eq!(lines[6], "5,2048,1");
    }

    #[test]
    fn gaps_are_rejected() {
        let mut f = CoefficientFile::from_table(&special_table_exact(5));
        f.coeffs.remove(2);
        assert!(matches!(f.to_exact_table(), Err(Error::Parse(_))));
    }
}
