//! The `cubecycles` command line: JSON in, JSON out.
//!
//! Exit codes are 0 on success, 1 on a domain error (with
//! `{"error": {"kind", "message"}}` on stdout) and 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::q_int;
use crate::chow::{degree_report, pencil_report, CurveDegrees, QUADRIC_SECTION_INTERSECTION};
use crate::descent::{
    find_certificate, prove_bound_suite, verify_certificate, Certificate, DelPezzo, SearchOptions,
    SuiteKind,
};
use crate::geometry::{
    delta_point, psi_minus_one, tangent_residual_split, third_point, CubicForm, Line, PlanePencil,
    ProjPoint,
};
use crate::points::{degree3_from_line, enumerate_rational, saturate, PointRecord, DEFAULT_CAP};

#[derive(Parser, Debug)]
#[command(name = "cubecycles", version, about = "Exact constructions on cubic surfaces and 0-cycle degree descent")]
pub struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Residual points, the tangent process and length-3 schemes.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Intersection numbers on a triple product of curves.
    #[command(subcommand)]
    Chow(ChowCmd),
    /// Degree descent certificates.
    #[command(subcommand)]
    Descent(DescentCmd),
    /// Rational point search.
    #[command(subcommand)]
    Points(PointsCmd),
}

#[derive(Args, Debug)]
pub struct SurfaceArg {
    /// Surface JSON file.
    #[arg(long)]
    pub surface: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum GeomCmd {
    /// Third intersection point of the line through two surface points.
    ThirdPoint {
        #[command(flatten)]
        s: SurfaceArg,
        /// First point, `a,b,c,d` or a JSON point.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Residual point of the tangent line in the pencil plane through `x`.
    TangentResidual {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        x: String,
        /// Pencil axis as two points, `a,b,c,d;e,f,g,h` or a JSON line.
        #[arg(long)]
        axis: String,
    },
    /// Degree-3 point from a line and a pencil of planes.
    Psi {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        axis: String,
        #[arg(long)]
        line: String,
    },
    /// Length-3 scheme cut out by a line.
    Delta {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        line: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChowCmd {
    /// Degrees of the two loci for curves that are intersections of quadrics.
    Report,
    /// Rank checks of the pencil condition for three lines in standard position.
    Pencil {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct SurfaceKind {
    /// Degree of the del Pezzo surface.
    #[arg(long = "dS", value_parser = clap::value_parser!(u8).range(1..=3))]
    pub d_s: u8,
    /// Use a degree-4 basis cycle (cubic surfaces only).
    #[arg(long)]
    pub with_x4: bool,
    /// Target statement: bound, coray, refined or even.
    #[arg(long, default_value = "bound")]
    pub suite: String,
}

#[derive(Subcommand, Debug)]
pub enum DescentCmd {
    /// Search a certificate for one start degree.
    Certify {
        #[command(flatten)]
        kind: SurfaceKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
    },
    /// Replay a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Certificates for every start degree up to the ceiling.
    Suite {
        #[command(flatten)]
        kind: SurfaceKind,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        ceiling: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PointsCmd {
    /// Rational points up to a height bound.
    Enum {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        height: u32,
    },
    /// Close a point set under secant and tangent residuals.
    Saturate {
        #[command(flatten)]
        s: SurfaceArg,
        /// JSON list of point records; defaults to the points up to `--height`.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        height: u32,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Residual intersection of a line with the surface as a point record.
    Line {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long)]
        line: String,
    },
}

/// A domain failure: a stable kind plus a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    fn new(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind, "message": self.message}})
    }
}

macro_rules! from_kinded {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.kind(), e.to_string())
            }
        }
    )*};
}
from_kinded!(crate::geometry::GeometryError, crate::descent::DescentError);

impl From<crate::chow::ChowError> for Failure {
    fn from(e: crate::chow::ChowError) -> Self {
        Failure::new("ChowError", e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("IoError", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new("InvalidInput", format!("{}: {e}", path.display())))
}

fn load_surface(s: &SurfaceArg) -> Result<CubicForm, Failure> {
    Ok(CubicForm::from_json(&read_json(&s.surface)?)?)
}

fn parse_point(text: &str) -> Result<ProjPoint, Failure> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Failure::new("InvalidInput", e.to_string()))?;
        Ok(ProjPoint::from_json(&v)?)
    } else {
        Ok(ProjPoint::parse_rational_list(t)?)
    }
}

fn parse_line(text: &str) -> Result<Line, Failure> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Failure::new("InvalidInput", e.to_string()))?;
        return Ok(Line::from_json(&v)?);
    }
    let (a, b) = t
        .split_once(';')
        .ok_or_else(|| Failure::new("InvalidInput", format!("a line needs two points separated by ';': {t:?}")))?;
    Ok(Line::new(parse_point(a)?, parse_point(b)?)?)
}

fn suite_kind(k: &SurfaceKind) -> Result<SuiteKind, Failure> {
    SuiteKind::parse(&k.suite, k.d_s, k.with_x4).ok_or_else(|| {
        Failure::new(
            "UnsupportedSuite",
            format!("no suite {:?} for dS = {}{}", k.suite, k.d_s, if k.with_x4 { " with x4" } else { "" }),
        )
    })
}

fn pencil_samples(n: u32, seed: u64) -> Vec<[crate::algebra::Rational; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let (a, b): (i64, i64) = (rng.gen_range(-30..=30), rng.gen_range(-30..=30));
            if a != 0 || b != 0 {
                break [q_int(a), q_int(b)];
            }
        })
        .collect()
}

fn records_json(records: &[PointRecord]) -> Value {
    Value::Array(records.iter().map(PointRecord::to_json).collect())
}

fn execute(cmd: &Command) -> Result<Value, Failure> {
    match cmd {
        Command::Geom(g) => match g {
            GeomCmd::ThirdPoint { s, x, y } => {
                let s = load_surface(s)?;
                Ok(third_point(&s, &parse_point(x)?, &parse_point(y)?)?.to_json())
            }
            GeomCmd::TangentResidual { s, x, axis } => {
                let s = load_surface(s)?;
                let w = PlanePencil::new(parse_line(axis)?);
                Ok(tangent_residual_split(&s, &w, &parse_point(x)?)?.to_json())
            }
            GeomCmd::Psi { s, axis, line } => {
                let s = load_surface(s)?;
                let w = PlanePencil::new(parse_line(axis)?);
                Ok(psi_minus_one(&s, &w, &parse_line(line)?)?.to_json()?)
            }
            GeomCmd::Delta { s, line } => {
                let s = load_surface(s)?;
                Ok(delta_point(&s, &parse_line(line)?)?.to_json()?)
            }
        },
        Command::Chow(c) => match c {
            ChowCmd::Report => Ok(degree_report(&CurveDegrees::quadric_sections(), QUADRIC_SECTION_INTERSECTION)?),
            ChowCmd::Pencil { samples, seed } => Ok(pencil_report(&pencil_samples(*samples, *seed))),
        },
        Command::Descent(d) => match d {
            DescentCmd::Certify { kind, degree } => {
                let k = suite_kind(kind)?;
                let cert = find_certificate(&k.surface(), *degree, &k.goal(), &SearchOptions::default())?;
                Ok(serde_json::to_value(&cert).expect("certificate serializes"))
            }
            DescentCmd::Verify { cert } => {
                let cert: Certificate = serde_json::from_value(read_json(cert)?)
                    .map_err(|e| Failure::new("InvalidCertificate", e.to_string()))?;
                let v = verify_certificate(&cert);
                if v.valid {
                    Ok(serde_json::to_value(&v).expect("verification serializes"))
                } else {
                    let step = v.failed_step.map_or(String::new(), |s| format!("step {s}: "));
                    Err(Failure::new("InvalidCertificate", format!("{step}{}", v.reason.unwrap_or_default())))
                }
            }
            DescentCmd::Suite { kind, ceiling } => {
                let k = suite_kind(kind)?;
                DelPezzo::new(kind.d_s, kind.with_x4)?;
                let report = prove_bound_suite(k, *ceiling, &SearchOptions::default());
                Ok(serde_json::to_value(&report).expect("report serializes"))
            }
        },
        Command::Points(p) => match p {
            PointsCmd::Enum { s, height } => {
                let s = load_surface(s)?;
                Ok(records_json(&enumerate_rational(&s, *height)))
            }
            PointsCmd::Saturate { s, seeds, height, rounds, cap } => {
                let s = load_surface(s)?;
                let seeds = match seeds {
                    Some(path) => read_json(path)?
                        .as_array()
                        .ok_or_else(|| Failure::new("InvalidInput", "seeds must be a JSON list"))?
                        .iter()
                        .map(PointRecord::from_json)
                        .collect::<Result<Vec<_>, _>>()?,
                    None => enumerate_rational(&s, *height),
                };
                Ok(records_json(&saturate(&s, &seeds, *rounds, *cap)?))
            }
            PointsCmd::Line { s, line } => {
                let s = load_surface(s)?;
                Ok(degree3_from_line(&s, &parse_line(line)?)?.to_json())
            }
        },
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders") + "\n"
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, body) = match execute(&cli.command) {
        Ok(v) => (0, render(&v)),
        Err(f) => (1, render(&f.to_json())),
    };
    if let (0, Some(path)) = (code, &cli.out) {
        if let Err(e) = fs::write(path, &body) {
            let f = Failure::new("IoError", format!("{}: {e}", path.display()));
            return Outcome { code: 1, stdout: render(&f.to_json()), stderr: String::new() };
        }
        return Outcome { code, stdout: String::new(), stderr: String::new() };
    }
    Outcome { code, stdout: body, stderr: String::new() }
}
