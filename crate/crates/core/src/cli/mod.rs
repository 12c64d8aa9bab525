//! Command-line front end: `kernel`, `apply` and `verify`.

pub mod fields;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{closed_form_1d, closed_form_2d, closed_form_4d, full_kernel_series, AngleArg, ComplexTime, KernelQuery};
use crate::par::{map_slice, Execution};
use crate::spectral::{apply_exp_g0_all, apply_exp_g0_grid_2d, apply_scaling_direct, apply_scaling_grid_2d, G0Exponent};
use crate::verify;
use fields::{fmt_f64, parse_f64, FieldData, FieldFile, GridSpec};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "conformal-heat", version, about = "Heat-type semigroups, scaling and theta kernels on log-radial grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the heat kernel K(z; x, x') at (r, r', t) points.
    Kernel(KernelArgs),
    /// Apply exp of a bounded element to a sampled field.
    Apply(ApplyArgs),
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Series truncation tolerance.
    #[arg(long, env = "CONFORMAL_HEAT_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Complex time as re,im.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    /// CSV with columns r,r_prime,t.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// A point r,r_prime,t (repeatable; appended after --in rows).
    #[arg(long = "point", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Use the theta-function closed form (dimensions 1, 2, 4).
    #[arg(long)]
    pub closed_form: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Overrides or fills the dimension of the input header.
    #[arg(long)]
    pub dim: Option<usize>,
    /// smin,smax,n[,nphi]; fills or must agree with the input header.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// z1re,z1im,z2re,z2im,z3re,z3im.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["z", "t"])]
    pub exponent: Option<String>,
    /// Heat exponent shorthand for (0, 0, z).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, conflicts_with = "t")]
    pub z: Option<Complex64>,
    /// Dilation parameter; must be a multiple of ds/2.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name (repeatable); all suites when absent.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let nums = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>();
    match (parts.len(), nums) {
        (2, Ok(v)) => Ok(Complex64::new(v[0], v[1])),
        (1, Ok(v)) => Ok(Complex64::new(v[0], 0.0)),
        _ => Err(format!("expected re,im, got {text:?}")),
    }
}

pub fn parse_exponent(text: &str) -> Result<G0Exponent> {
    let v = text.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
    if v.len() != 6 {
        return Err(Error::Parse(format!("exponent needs six numbers z1re,z1im,z2re,z2im,z3re,z3im, got {}", v.len())));
    }
    Ok(G0Exponent::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]), Complex64::new(v[4], v[5])))
}

/// Process exit status of a completed command.
pub struct Outcome {
    pub code: i32,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match run(cli) {
        Ok(outcome) => outcome.code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Kernel(args) => {
            let text = cmd_kernel(&args)?;
            emit(&args.common.out, &text)?;
            Ok(Outcome { code: 0 })
        }
        Command::Apply(args) => {
            let text = cmd_apply(&args)?;
            emit(&args.common.out, &text)?;
            Ok(Outcome { code: 0 })
        }
        Command::Verify(args) => {
            let report = verify::run(&args.suites)?;
            let text = match args.common.format {
                Format::Json => serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))? + "\n",
                Format::Csv => verify_csv(&report),
            };
            emit(&args.common.out, &text)?;
            Ok(Outcome { code: if report.passed { 0 } else { 1 } })
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

#[derive(Debug, Clone, Copy)]
pub struct KernelPoint {
    pub r: f64,
    pub r_prime: f64,
    pub t: f64,
}

fn parse_point(text: &str) -> Result<KernelPoint> {
    let v = text.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
    match v[..] {
        [r, r_prime, t] => Ok(KernelPoint { r, r_prime, t }),
        _ => Err(Error::Parse(format!("point must be r,r_prime,t, got {text:?}"))),
    }
}

fn parse_points_csv(text: &str) -> Result<Vec<KernelPoint>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(fields::csv_error)?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    if header.iter().collect::<Vec<_>>() != ["r", "r_prime", "t"] {
        return Err(Error::Parse(format!("expected header r,r_prime,t, got {:?}", header.iter().collect::<Vec<_>>().join(","))));
    }
    reader
        .deserialize::<(f64, f64, f64)>()
        .map(|row| row.map(|(r, r_prime, t)| KernelPoint { r, r_prime, t }).map_err(fields::csv_error))
        .collect()
}

/// Evaluates one kernel value; dimension 1 reads `t` as the sign of `x x'`.
pub fn kernel_value(dim: usize, z: &ComplexTime, p: KernelPoint, tol: f64, closed_form: bool) -> Result<Complex64> {
    if !closed_form {
        return full_kernel_series(&KernelQuery::new(dim, *z, p.r, p.r_prime, p.t, tol));
    }
    match dim {
        1 => closed_form_1d(p.r, p.t.signum() * p.r_prime, z),
        2 => closed_form_2d(p.r, p.r_prime, AngleArg::Cosine(p.t), z),
        4 => closed_form_4d(p.r, p.r_prime, p.t, z),
        _ => Err(Error::InvalidArgument(format!("closed forms exist for dimensions 1, 2 and 4, not {dim}"))),
    }
}

pub fn cmd_kernel(args: &KernelArgs) -> Result<String> {
    let z = ComplexTime::new(args.z);
    z.require_kernel_regime("kernel evaluation")?;
    let mut points = match &args.input {
        Some(path) => parse_points_csv(&read(path)?)?,
        None => Vec::new(),
    };
    for p in &args.points {
        points.push(parse_point(p)?);
    }
    let tol = args.common.tol;
    let values = map_slice(Execution::default(), &points, |&p| kernel_value(args.dim, &z, p, tol, args.closed_form))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let method = if args.closed_form { "closed-form" } else { "series" };
    Ok(match args.common.format {
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# dim={}", args.dim);
            let _ = writeln!(out, "# z={},{}", fmt_f64(args.z.re), fmt_f64(args.z.im));
            let _ = writeln!(out, "# method={method}");
            let _ = writeln!(out, "# tol={}", fmt_f64(tol));
            let _ = writeln!(out, "r,r_prime,t,re_k,im_k");
            for (p, k) in points.iter().zip(&values) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f64(p.r),
                    fmt_f64(p.r_prime),
                    fmt_f64(p.t),
                    fmt_f64(k.re),
                    fmt_f64(k.im)
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .zip(&values)
                .map(|(p, k)| serde_json::json!([fmt_f64(p.r), fmt_f64(p.r_prime), fmt_f64(p.t), fmt_f64(k.re), fmt_f64(k.im)]))
                .collect();
            let doc = serde_json::json!({
                "config": {
                    "dim": args.dim,
                    "z": [fmt_f64(args.z.re), fmt_f64(args.z.im)],
                    "method": method,
                    "tol": fmt_f64(tol),
                },
                "columns": ["r", "r_prime", "t", "re_k", "im_k"],
                "rows": rows,
            });
            serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))? + "\n"
        }
    })
}

enum Operation {
    Exponent(G0Exponent),
    Scaling(f64),
}

pub fn cmd_apply(args: &ApplyArgs) -> Result<String> {
    let operation = match (&args.exponent, args.z, args.t) {
        (Some(e), None, None) => Operation::Exponent(parse_exponent(e)?),
        (None, Some(z), None) => Operation::Exponent(G0Exponent::heat(z)),
        (None, None, Some(t)) => Operation::Scaling(t),
        _ => return Err(Error::InvalidArgument("exactly one of --exponent, --z, --t is required".into())),
    };
    let grid = args.grid.as_deref().map(GridSpec::parse).transpose()?;
    let input = fields::parse_field(&read(&args.input)?, args.dim, grid)?;
    let (data, echo) = match operation {
        Operation::Exponent(e) => {
            let data = match &input.data {
                FieldData::Factored { components } => FieldData::Factored { components: apply_exp_g0_all(&e, components)? },
                FieldData::Planar { field } => FieldData::Planar { field: apply_exp_g0_grid_2d(&e, field)? },
            };
            let c = [e.z1, e.z2, e.z3].iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect::<Vec<_>>().join(",");
            (data, ("exponent", c))
        }
        Operation::Scaling(t) => {
            let data = match &input.data {
                FieldData::Factored { components } => FieldData::Factored {
                    components: components.iter().map(|f| apply_scaling_direct(t, f)).collect::<Result<_>>()?,
                },
                FieldData::Planar { field } => FieldData::Planar { field: apply_scaling_grid_2d(t, field)? },
            };
            (data, ("t", fmt_f64(t)))
        }
    };
    let output: FieldFile = input.with_data(data);
    Ok(match args.common.format {
        Format::Csv => output.to_csv(&[echo]),
        Format::Json => {
            serde_json::to_string_pretty(&output.to_json(&[echo])).map_err(|e| Error::Parse(e.to_string()))? + "\n"
        }
    })
}

fn verify_csv(report: &verify::Report) -> String {
    let mut out = String::from("suite,check,defect,tolerance,passed\n");
    for suite in &report.suites {
        for c in &suite.checks {
            let _ = writeln!(
                out,
                "{},\"{}\",{},{},{}",
                suite.name,
                c.name.replace('"', "'"),
                fmt_f64(c.defect),
                fmt_f64(c.tolerance),
                c.passed
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_and_exponent_parsing() {
        assert_eq!(parse_complex("0.3,-0.4").unwrap(), Complex64::new(0.3, -0.4));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("a,b").is_err());
        let e = parse_exponent("0,1,0,0,0.5,0").unwrap();
        assert_eq!(e.z1, Complex64::new(0.0, 1.0));
        assert_eq!(e.z3, Complex64::new(0.5, 0.0));
        assert!(matches!(parse_exponent("1,2,3"), Err(Error::Parse(_))));
    }

    #[test]
    fn points_csv() {
        let pts = parse_points_csv("# c\nr,r_prime,t\n1,2,0.5\n").unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].t, 0.5);
        assert!(parse_points_csv("").unwrap().is_empty());
        assert!(parse_points_csv("a,b,c\n").is_err());
    }

    #[test]
    fn closed_form_only_in_special_dimensions() {
        let z = ComplexTime::real(0.5);
        let p = KernelPoint { r: 1.0, r_prime: 1.0, t: 1.0 };
        assert!(matches!(kernel_value(3, &z, p, 1e-10, true), Err(Error::InvalidArgument(_))));
        assert_eq!(kernel_value(1, &z, KernelPoint { t: -1.0, ..p }, 1e-10, true).unwrap(), Complex64::new(0.0, 0.0));
    }
}
