//! Shared helpers for the JSON and CSV outputs.

use rug::{Complex, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{float_string, parse_float, parse_rational, QOmega, Scalar};

/// Output format of every export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Renders rows as CSV with a header line.
pub fn csv_string<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r.as_ref()).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// A complex number as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: String,
    pub im: String,
}

impl ComplexRecord {
    pub fn from_complex(z: &Complex) -> Self {
        Self { re: float_string(z.real()), im: float_string(z.imag()) }
    }

    pub fn to_complex(&self, prec: u32) -> Result<Complex> {
        Ok(Complex::with_val(prec, (parse_float(&self.re, prec)?, parse_float(&self.im, prec)?)))
    }
}

/// One scalar in the coefficient/residual schemas. Variant order matters
/// for untagged decoding: the ω form carries a superset of the exact fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRecord {
    Omega { num: String, den: String, omega_num: String, omega_den: String },
    Exact { num: String, den: String },
    Numeric { re: String, im: String, prec_bits: u32 },
}

/// Scalars that have a file representation.
pub trait ExportScalar: Scalar {
    fn record(&self) -> ValueRecord;
    fn from_record(r: &ValueRecord, ctx: Self::Ctx) -> Result<Self>;
    fn csv_header() -> &'static [&'static str];
    fn csv_fields(&self) -> Vec<String>;
}

fn num_den(q: &Rational) -> (String, String) {
    (q.numer().to_string(), q.denom().to_string())
}

fn rational_from(num: &str, den: &str) -> Result<Rational> {
    let q = parse_rational(&format!("{}/{}", num.trim(), den.trim()))?;
    Ok(q)
}

impl ExportScalar for Rational {
    fn record(&self) -> ValueRecord {
        let (num, den) = num_den(self);
        ValueRecord::Exact { num, den }
    }

    fn from_record(r: &ValueRecord, _: ()) -> Result<Self> {
        match r {
            ValueRecord::Exact { num, den } => rational_from(num, den),
            ValueRecord::Omega { num, den, omega_num, .. } if omega_num.trim() == "0" => rational_from(num, den),
            _ => Err(Error::Mode("expected an exact rational value".into())),
        }
    }

    fn csv_header() -> &'static [&'static str] {
        &["num", "den"]
    }

    fn csv_fields(&self) -> Vec<String> {
        let (n, d) = num_den(self);
        vec![n, d]
    }
}

impl ExportScalar for QOmega {
    fn record(&self) -> ValueRecord {
        let (num, den) = num_den(&self.re);
        let (omega_num, omega_den) = num_den(&self.om);
        ValueRecord::Omega { num, den, omega_num, omega_den }
    }

    fn from_record(r: &ValueRecord, _: ()) -> Result<Self> {
        match r {
            ValueRecord::Omega { num, den, omega_num, omega_den } => {
                Ok(QOmega::new(rational_from(num, den)?, rational_from(omega_num, omega_den)?))
            }
            ValueRecord::Exact { num, den } => Ok(QOmega::from_rational_value(rational_from(num, den)?)),
            _ => Err(Error::Mode("expected an exact value".into())),
        }
    }

    fn csv_header() -> &'static [&'static str] {
        &["num", "den", "omega_num", "omega_den"]
    }

    fn csv_fields(&self) -> Vec<String> {
        let (n, d) = num_den(&self.re);
        let (on, od) = num_den(&self.om);
        vec![n, d, on, od]
    }
}

impl ExportScalar for Complex {
    fn record(&self) -> ValueRecord {
        ValueRecord::Numeric { re: float_string(self.real()), im: float_string(self.imag()), prec_bits: self.prec().0 }
    }

    fn from_record(r: &ValueRecord, prec: u32) -> Result<Self> {
        match r {
            ValueRecord::Numeric { re, im, .. } => {
                Ok(Complex::with_val(prec, (parse_float(re, prec)?, parse_float(im, prec)?)))
            }
            ValueRecord::Exact { num, den } => Ok(rational_from(num, den)?.to_complex(prec)),
            ValueRecord::Omega { .. } => Ok(QOmega::from_record(r, ())?.to_complex(prec)),
        }
    }

    fn csv_header() -> &'static [&'static str] {
        &["re", "im"]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![float_string(self.real()), float_string(self.imag())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn exact_records_round_trip(n in any::<i64>(), d in 1i64..i64::MAX, m in any::<i64>()) {
            let q = Rational::from((n, d));
            prop_assert_eq!(Rational::from_record(&q.record(), ()).unwrap(), q.clone());
            let w = QOmega::new(q.clone(), Rational::from((m, d)));
            prop_assert_eq!(QOmega::from_record(&w.record(), ()).unwrap(), w);
        }

        #[test]
        fn numeric_records_round_trip(re in -1e300f64..1e300, im in -1e-300f64..1e-300) {
            let z = Complex::with_val(256, (re, im)) / 3u32;
            let back = Complex::from_record(&z.record(), 256).unwrap();
            prop_assert_eq!(back, z);
        }
    }

    #[test]
    fn untagged_decoding_picks_the_right_variant() {
        let j = r#"{"num":"1","den":"3","omega_num":"2","omega_den":"5"}"#;
        assert!(matches!(serde_json::from_str::<ValueRecord>(j).unwrap(), ValueRecord::Omega { .. }));
        let j = r#"{"num":"1","den":"3"}"#;
        assert!(matches!(serde_json::from_str::<ValueRecord>(j).unwrap(), ValueRecord::Exact { .. }));
        let j = r#"{"re":"1.5","im":"0","prec_bits":64}"#;
        assert!(matches!(serde_json::from_str::<ValueRecord>(j).unwrap(), ValueRecord::Numeric { .. }));
    }

    #[test]
    fn csv_rows() {
        let s = csv_string(&["n", "v"], &[vec!["0".to_string(), "-1".to_string()]]);
        assert_eq!(s, "n,v\n0,-1\n");
    }
}
