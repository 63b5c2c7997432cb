use std::fs;
use std::path::Path;

use pgevrey::coefficients::{values_csv, CoefficientFile, CoefficientTable, ExportParams};
use pgevrey::export::{csv_string, json_string, ExportScalar};
use pgevrey::gevrey::{certify_divergence, verify_all, CertificateSummary, ReportSummary};
use pgevrey::ode::{formal_residual, numeric_residual, ResidualFile};
use pgevrey::rug::{Complex, Float};
use pgevrey::scalar::{float_string, Scalar};
use pgevrey::summation::{
    asymptotic_error_scan, check_spec, finite_laplace_eval, radius_cauchy_hadamard, BorelTable, LaplaceSpec,
    RadiusEstimate, SpecRecord,
};
use serde::Serialize;

use crate::args::{
    parse_endpoint, parse_moduli, parse_n_list, parse_point, BorelArgs, CoeffsArgs, FormatArg, LaplaceArgs, RayArgs,
    ResidualArgs, ScanArgs, VerifyArgs,
};
use crate::table::{self, with_table, AnyTable};
use crate::Failure;

/// Text to write plus the exit status to report afterwards.
pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, status: 0 }
    }
}

fn render<T: Serialize>(format: FormatArg, value: &T, csv: impl FnOnce() -> String) -> String {
    match format {
        FormatArg::Json => json_string(value),
        FormatArg::Csv => csv(),
    }
}

fn pair(z: &Complex) -> [String; 2] {
    [float_string(z.real()), float_string(z.imag())]
}

pub fn coeffs(a: &CoeffsArgs) -> Result<Output, Failure> {
    let c = &a.common;
    let t = table::build(c, c.n.unwrap_or(20))?;
    Ok(Output::ok(with_table!(&t, t => coeff_text(t, t.values(), c.format, None))))
}

fn coeff_text<S>(t: &CoefficientTable<S>, values: &[S], format: FormatArg, radius: Option<BorelExtra>) -> String
where
    S: ExportScalar,
    S::Param: ExportParams,
{
    let file = CoefficientFile::from_values(t, values);
    match (format, radius) {
        (FormatArg::Csv, _) => values_csv(values),
        (FormatArg::Json, None) => json_string(&file),
        (FormatArg::Json, Some(extra)) => json_string(&BorelFile { kind: "borel", file, radius: extra.0 }),
    }
}

struct BorelExtra(Option<RadiusEstimate>);

#[derive(Serialize)]
struct BorelFile {
    kind: &'static str,
    #[serde(flatten)]
    file: CoefficientFile,
    radius: Option<RadiusEstimate>,
}

pub fn borel(a: &BorelArgs) -> Result<Output, Failure> {
    let c = &a.common;
    let t = table::build(c, c.n.unwrap_or(100))?;
    let text = with_table!(&t, t => {
        let b = BorelTable::from_table(t);
        let n = b.n_max();
        // Not available for tiny tables or all-zero windows.
        let radius = radius_cauchy_hadamard(&b, n.div_ceil(2).max(1), n).ok();
        coeff_text(t, b.values(), c.format, Some(BorelExtra(radius)))
    });
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct VerifyFile {
    n_max: usize,
    pass: bool,
    reports: Vec<ReportSummary>,
    divergence: Option<CertificateSummary>,
}

pub fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let c = &a.common;
    if c.branch != 0 {
        return Err(Failure::usage("verify works on the principal exact table; drop --branch"));
    }
    let (t, n) = match &a.input {
        Some(path) => {
            let raw =
                fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let file: CoefficientFile = serde_json::from_str(&raw)
                .map_err(|e| Failure::usage(format!("{} is not a coefficient file: {e}", path.display())))?;
            let t = file.to_exact_table()?;
            let n = c.n.unwrap_or(t.n_max());
            (t, n)
        }
        None => {
            let n = c.n.unwrap_or(1000);
            match table::build(c, n)? {
                AnyTable::Exact(t) => (t, n),
                _ => return Err(Failure::usage("verify needs exact rational coefficients")),
            }
        }
    };

    let reports = verify_all(&t, n)?;
    let pass = reports.iter().all(|r| r.pass());
    let divergence = if pass { Some(certify_divergence(&t, n)?.summary()) } else { None };

    let mut summaries = Vec::with_capacity(reports.len());
    for r in &reports {
        let file = match &a.margins_dir {
            Some(dir) => Some(write_margins(dir, r.inequality.label(), &r.margins_csv())?),
            None => None,
        };
        summaries.push(r.summary(file));
    }

    let out = VerifyFile { n_max: n, pass, reports: summaries, divergence };
    let text = render(c.format, &out, || {
        let rows: Vec<Vec<String>> = out
            .reports
            .iter()
            .map(|s| {
                vec![
                    s.inequality.label().to_string(),
                    s.range[0].to_string(),
                    s.range[1].to_string(),
                    s.pass.to_string(),
                    s.first_fail.map(|n| n.to_string()).unwrap_or_default(),
                ]
            })
            .collect();
        csv_string(&["inequality", "n_min", "n_max", "pass", "first_fail"], &rows)
    });

    let first = reports.iter().filter_map(|r| r.first_fail().map(|e| (r, e))).min_by_key(|(_, e)| e.n);
    if let Some((bad, e)) = first {
        eprintln!("verification failed: {} first fails at n = {} (margin {})", bad.inequality.label(), e.n, e.margin);
        return Ok(Output { text, status: 1 });
    }
    Ok(Output::ok(text))
}

fn write_margins(dir: &Path, label: &str, csv: &str) -> Result<String, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let path = dir.join(format!("margins_{label}.csv"));
    fs::write(&path, csv).map_err(|e| Failure::io(&path, e))?;
    Ok(path.display().to_string())
}

/// Borel table of `t` and the validated spec from `-d`, `-T`, `--N-trunc`.
fn ray_spec<S: Scalar>(b: &BorelTable<S>, ray: &RayArgs, n_trunc: usize, prec: u32) -> Result<LaplaceSpec, Failure> {
    let r_b = b.disk_radius(prec)?;
    let endpoint = parse_endpoint(&ray.endpoint, &r_b, prec)?;
    let spec = LaplaceSpec::new(ray.direction, endpoint, n_trunc, prec);
    check_spec(b, &spec)?;
    Ok(spec)
}

pub fn laplace(a: &LaplaceArgs) -> Result<Output, Failure> {
    let c = &a.common;
    let n_trunc = a.ray.n_trunc.unwrap_or(200);
    let x = parse_point(&a.x, c.prec_bits)?;
    let t = table::build(c, c.n.unwrap_or(0).max(n_trunc))?;
    let (value, spec) = with_table!(&t, t => {
        let b = BorelTable::from_table(t);
        let spec = ray_spec(&b, &a.ray, n_trunc, c.prec_bits)?;
        if !spec.kernel_decays(&x) {
            eprintln!("note: Re(e^(id) x) <= 0, so g is not asymptotic to the series at this x");
        }
        (finite_laplace_eval(&b, &spec, &x)?, spec)
    });
    let record = value.record(&spec);
    let text = render(c.format, &record, || {
        let row = vec![
            record.x[0].clone(),
            record.x[1].clone(),
            record.g[0].clone(),
            record.g[1].clone(),
            record.tail_bound.clone(),
        ];
        csv_string(&["x_re", "x_im", "g_re", "g_im", "tail_bound"], &[row])
    });
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct NumericResidual {
    x: [String; 2],
    residual: [String; 2],
    abs: String,
    spec: SpecRecord,
}

#[derive(Serialize)]
struct ResidualOut {
    #[serde(flatten)]
    formal: ResidualFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericResidual>,
}

pub fn residual(a: &ResidualArgs) -> Result<Output, Failure> {
    let c = &a.common;
    let n = c.n.unwrap_or(10);
    let x = a.x.as_deref().map(|s| parse_point(s, c.prec_bits)).transpose()?;
    let n_trunc = a.ray.n_trunc.unwrap_or(200);
    let size = if x.is_some() { n.max(n_trunc) } else { n };
    let t = table::build(c, size)?;
    let text = with_table!(&t, t => {
        let formal = formal_residual(t, n)?;
        let numeric = match &x {
            Some(x) => {
                let b = BorelTable::from_table(t);
                let spec = ray_spec(&b, &a.ray, n_trunc, c.prec_bits)?;
                let r = numeric_residual(&b, &spec, t.params(), x)?;
                Some(NumericResidual {
                    x: pair(x),
                    residual: pair(&r),
                    abs: float_string(&Float::with_val(c.prec_bits, r.abs_ref())),
                    spec: spec.record(),
                })
            }
            None => None,
        };
        match c.format {
            FormatArg::Csv => formal.to_csv(),
            FormatArg::Json => json_string(&ResidualOut { formal: formal.to_file(), numeric }),
        }
    });
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct ScanRowOut {
    x: [String; 2],
    #[serde(rename = "N")]
    n: usize,
    abs_error: String,
}

#[derive(Serialize)]
struct ScanMinOut {
    x: [String; 2],
    n_star: usize,
    min_error: String,
    interior: bool,
}

#[derive(Serialize)]
struct ScanOut {
    spec: SpecRecord,
    rows: Vec<ScanRowOut>,
    minima: Vec<ScanMinOut>,
}

pub fn scan(a: &ScanArgs) -> Result<Output, Failure> {
    let c = &a.common;
    let n_trunc = a.ray.n_trunc.unwrap_or(400);
    let ns = parse_n_list(&a.n_list)?;
    let moduli = parse_moduli(&a.x)?;
    let n_hi = ns.iter().copied().max().unwrap_or(0);
    let t = table::build(c, c.n.unwrap_or(0).max(n_trunc).max(n_hi))?;
    let arg = Float::with_val(c.prec_bits, -a.ray.direction);
    let unit = Complex::with_val(c.prec_bits, (Float::with_val(c.prec_bits, 0), arg)).exp();
    let xs: Vec<Complex> = moduli
        .iter()
        .map(|&r| {
            let mut x = Complex::with_val(c.prec_bits, &unit * r);
            if x.imag().is_zero() {
                x.mut_imag().abs_mut();
            }
            x
        })
        .collect();

    let (scan, spec) = with_table!(&t, t => {
        let b = BorelTable::from_table(t);
        let spec = ray_spec(&b, &a.ray, n_trunc, c.prec_bits)?;
        (asymptotic_error_scan(&b, t, &spec, &xs, &ns)?, spec)
    });
    let text = match c.format {
        FormatArg::Csv => scan.to_csv(),
        FormatArg::Json => json_string(&ScanOut {
            spec: spec.record(),
            rows: scan
                .rows
                .iter()
                .map(|r| ScanRowOut { x: pair(&r.x), n: r.n, abs_error: float_string(&r.abs_error) })
                .collect(),
            minima: scan
                .minima()
                .iter()
                .map(|m| ScanMinOut {
                    x: pair(&m.x),
                    n_star: m.n_star,
                    min_error: float_string(&m.min_error),
                    interior: m.interior,
                })
                .collect(),
        }),
    };
    Ok(Output::ok(text))
}
