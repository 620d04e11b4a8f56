//! `dircurv` command line: load a body description, validate a boundary
//! point and print a JSON report.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure. Errors are
//! printed to stdout as `{"code", "message", "location"}`.

pub mod error;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use dircurv::curvature::{self, kappa_directional};
use dircurv::goldman::{self, plane_system};
use dircurv::linalg::norm;
use dircurv::oracle;
use dircurv::{tangent_frame, BodySpec, BoundaryPoint, ImplicitBody};

pub use error::{CliError, EXIT_INPUT, EXIT_NUMERICAL};
use report::{
    nums, BodyEcho, CurvatureRow, Envelope, ExtremaResult, GaugeResult, GoldmanResult, Num,
    OracleRow, Results,
};

#[derive(Debug, Parser)]
#[command(
    name = "dircurv",
    version,
    about = "Directional curvature of implicit convex bodies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// γ̂, κ̂ and R̂ per direction (every u^j when no --dir is given)
    Report(WithDirs),
    /// Minimum and maximum curvature over tangent directions
    Extrema(Common),
    /// Implicit-curve curvature of the section in direction u^j
    Goldman(GoldmanArgs),
    /// Brute-force estimates of γ̂ and the containment radius
    Verify(VerifyArgs),
    /// Minkowski functional of a point
    Gauge(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Body description (JSON)
    #[arg(long)]
    pub body: PathBuf,
    /// Comma-separated coordinates
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Also print an aligned text table on stderr
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct WithDirs {
    #[command(flatten)]
    pub common: Common,
    /// Tangent direction, comma-separated; repeatable
    #[arg(long = "dir", allow_hyphen_values = true)]
    pub dirs: Vec<String>,
}

#[derive(Debug, Args)]
pub struct GoldmanArgs {
    #[command(flatten)]
    pub common: Common,
    /// 1-based coordinate index j of u^j (not the pivot)
    #[arg(long)]
    pub j: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub dirs: WithDirs,
    /// Neighbourhood radius for the containment check (default min(δ/4, 0.05))
    #[arg(long)]
    pub eps: Option<f64>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let err = CliError::input("Usage", e.kind().to_string());
            return failure(&err, e.render().to_string());
        }
    };
    let (pretty, result) = match &cli.command {
        Command::Report(a) => (a.common.pretty, report_cmd(a)),
        Command::Extrema(a) => (a.pretty, extrema_cmd(a)),
        Command::Goldman(a) => (a.common.pretty, goldman_cmd(a)),
        Command::Verify(a) => (a.dirs.common.pretty, verify_cmd(a)),
        Command::Gauge(a) => (a.pretty, gauge_cmd(a)),
    };
    match result {
        Ok(env) => Outcome {
            code: 0,
            stdout: env.to_json() + "\n",
            stderr: if pretty { env.table() } else { String::new() },
        },
        Err(e) => failure(&e, String::new()),
    }
}

fn failure(e: &CliError, stderr: String) -> Outcome {
    Outcome {
        code: e.exit,
        stdout: serde_json::to_string(e).expect("error serializes") + "\n",
        stderr,
    }
}

/// Parses `"a,b,c"` into finite floats.
pub fn parse_csv(text: &str, location: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            let t = part.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(
                    CliError::input("InvalidNumber", format!("`{t}` is not a finite number"))
                        .at(location),
                ),
            }
        })
        .collect()
}

struct Loaded {
    spec: BodySpec,
    body: ImplicitBody,
    point: Vec<f64>,
}

fn load(common: &Common) -> Result<Loaded, CliError> {
    let text = read(&common.body)?;
    let spec = BodySpec::from_json(&text).map_err(|e| CliError::from(e).at("--body"))?;
    let body = spec.build()?;
    let point = parse_csv(&common.point, "--point")?;
    if point.len() != spec.n {
        return Err(CliError::input(
            "DimensionMismatch",
            format!(
                "point has {} coordinates, body dimension is {}",
                point.len(),
                spec.n
            ),
        )
        .at("--point"));
    }
    Ok(Loaded { spec, body, point })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        CliError::input("FileRead", format!("cannot read {}: {e}", path.display())).at("--body")
    })
}

fn body_echo(spec: &BodySpec) -> BodyEcho {
    let digest = Sha256::digest(spec.canonical_json().as_bytes());
    BodyEcho {
        sha256: hex::encode(digest),
        n: spec.n,
        f: spec.f.clone(),
        delta: Num(spec.delta),
    }
}

fn envelope(command: &'static str, l: &Loaded, p: Option<&BoundaryPoint>) -> Envelope {
    Envelope {
        command,
        body: body_echo(&l.spec),
        point: nums(&l.point),
        pivot: p.map(|p| p.pivot() + 1),
        dual: p.map(|p| nums(p.dual())),
        directions: Vec::new(),
        results: Results::default(),
        warnings: Vec::new(),
    }
}

fn validate(l: &Loaded) -> Result<BoundaryPoint, CliError> {
    l.body
        .validate_point(&l.point)
        .map_err(|e| CliError::from(e).at("--point"))
}

/// A direction with its 1-based frame index, if it is some `u^j`.
type Direction = (Option<usize>, Vec<f64>);

/// User directions, or the frame `u^j` with their 1-based indices.
fn directions(
    p: &BoundaryPoint,
    dirs: &[String],
) -> Result<Vec<Direction>, CliError> {
    if dirs.is_empty() {
        let frame = tangent_frame(p);
        return Ok(frame
            .indices
            .iter()
            .zip(frame.basis)
            .map(|(j, u)| (Some(j + 1), u))
            .collect());
    }
    dirs.iter()
        .enumerate()
        .map(|(k, text)| {
            let location = format!("--dir[{}]", k + 1);
            let u = parse_csv(text, &location)?;
            if u.len() != p.dim() {
                return Err(CliError::input(
                    "DimensionMismatch",
                    format!(
                        "direction has {} coordinates, body dimension is {}",
                        u.len(),
                        p.dim()
                    ),
                )
                .at(location));
            }
            Ok((None, u))
        })
        .collect()
}

fn dir_label(j: Option<usize>, k: usize) -> String {
    match j {
        Some(j) => format!("u^{j}"),
        None => format!("--dir[{}]", k + 1),
    }
}

fn report_cmd(a: &WithDirs) -> Result<Envelope, CliError> {
    let l = load(&a.common)?;
    let p = validate(&l)?;
    let mut env = envelope("report", &l, Some(&p));
    let mut rows = Vec::new();
    for (k, (j, u)) in directions(&p, &a.dirs)?.into_iter().enumerate() {
        let c = kappa_directional(&p, &u).map_err(|e| CliError::from(e).at(dir_label(j, k)))?;
        if c.convexity_warning {
            env.warn(
                "ConvexityWarning",
                format!(
                    "negative curvature {:e} in direction {}",
                    c.kappa_hat,
                    dir_label(j, k)
                ),
            );
        }
        env.directions.push(nums(&u));
        rows.push(CurvatureRow {
            j,
            direction: nums(&u),
            gamma_hat: Num(c.gamma_hat),
            kappa_hat: Num(c.kappa_hat),
            radius_hat: Num(c.radius_hat),
        });
    }
    env.results.curvatures = Some(rows);
    Ok(env)
}

fn extrema_cmd(a: &Common) -> Result<Envelope, CliError> {
    let l = load(a)?;
    let p = validate(&l)?;
    let mut env = envelope("extrema", &l, Some(&p));
    let ex = curvature::extrema(&p, &tangent_frame(&p))?;
    let radius = |k: f64| -> Num {
        if k < -curvature::CONVEXITY_TOLERANCE {
            Num(1.0 / (2.0 * k))
        } else {
            Num(curvature::curvature_radius(k.max(0.0)).expect("non-negative"))
        }
    };
    if ex.kappa_min < -curvature::CONVEXITY_TOLERANCE {
        env.warn(
            "ConvexityWarning",
            format!("minimum curvature {:e} is negative", ex.kappa_min),
        );
    }
    env.results.extrema = Some(ExtremaResult {
        kappa_min: Num(ex.kappa_min),
        kappa_max: Num(ex.kappa_max),
        dir_min: nums(&ex.dir_min),
        dir_max: nums(&ex.dir_max),
        radius_min: radius(ex.kappa_max),
        radius_max: radius(ex.kappa_min),
    });
    Ok(env)
}

fn goldman_cmd(a: &GoldmanArgs) -> Result<Envelope, CliError> {
    let l = load(&a.common)?;
    let p = validate(&l)?;
    let mut env = envelope("goldman", &l, Some(&p));
    if a.j == 0 || a.j > p.dim() {
        return Err(CliError::input(
            "InvalidIndex",
            format!("--j must lie in 1..={}, got {}", p.dim(), a.j),
        )
        .at("--j"));
    }
    if a.j == p.pivot() + 1 {
        return Err(CliError::input(
            "InvalidIndex",
            format!("--j {} is the pivot coordinate; u^j needs j ≠ {}", a.j, a.j),
        )
        .at("--j"));
    }
    let j = a.j - 1;
    let sys = plane_system(&p, j)?;
    let tangent = goldman::goldman_tangent(&p, &sys)?;
    let general = goldman::goldman_curvature_general(&l.body, &p, &sys)?;
    let closed = goldman::goldman_curvature_closed(&p, j)?;
    let u = p.tangent_vector(j).expect("index checked by plane_system");
    let kappa = kappa_directional(&p, &u)?;
    if kappa.convexity_warning {
        env.warn(
            "ConvexityWarning",
            format!(
                "negative curvature {:e} in direction u^{}",
                kappa.kappa_hat, a.j
            ),
        );
    }
    let ratio = if kappa.kappa_hat == 0.0 {
        env.warn(
            "ZeroCurvature",
            format!("κ̂ = 0 in direction u^{}; ratio k_G/(2κ̂) is undefined", a.j),
        );
        None
    } else {
        Some(Num(closed / (2.0 * kappa.kappa_hat)))
    };
    let diff = if general == closed {
        0.0
    } else {
        (general - closed).abs() / general.abs().max(closed.abs())
    };
    env.directions.push(nums(&u));
    env.results.goldman = Some(GoldmanResult {
        j: a.j,
        tangent: nums(&tangent),
        k_general: Num(general),
        k_closed: Num(closed),
        kappa_hat: Num(kappa.kappa_hat),
        ratio,
        general_closed_rel_diff: Num(diff),
    });
    Ok(env)
}

fn verify_cmd(a: &VerifyArgs) -> Result<Envelope, CliError> {
    let l = load(&a.dirs.common)?;
    let p = validate(&l)?;
    let mut env = envelope("verify", &l, Some(&p));
    let eps = a.eps.unwrap_or((l.body.delta() / 4.0).min(0.05));
    let dual_norm = norm(p.dual());
    let mut rows = Vec::new();
    for (k, (j, u)) in directions(&p, &a.dirs.dirs)?.into_iter().enumerate() {
        let at = dir_label(j, k);
        let c = kappa_directional(&p, &u).map_err(|e| CliError::from(e).at(at.clone()))?;
        if c.convexity_warning {
            env.warn(
                "ConvexityWarning",
                format!("negative curvature {:e} in direction {at}", c.kappa_hat),
            );
        }
        let est = oracle::gamma_estimate(&l.body, &p, &u)
            .map_err(|e| CliError::from(e).at(at.clone()))?;
        if est.extra_crossings {
            env.warn(
                "ExtraCrossings",
                format!("section circle met the boundary more than twice in direction {at}"),
            );
        }
        if est.last_step_change() > 0.05 {
            env.warn(
                "SlowConvergence",
                format!(
                    "last two quotients differ by {:.2}% in direction {at}",
                    100.0 * est.last_step_change()
                ),
            );
        }
        let contained = oracle::radius_containment(&l.body, &p, &u, eps)
            .map_err(|e| CliError::from(e).at("--eps"))?;
        let target = c.radius_hat / dual_norm;
        let radius_residual = if contained == target {
            0.0
        } else if target.is_finite() && contained.is_finite() {
            (contained - target).abs() / target.abs()
        } else {
            f64::INFINITY
        };
        env.directions.push(nums(&u));
        rows.push(OracleRow {
            j,
            direction: nums(&u),
            gamma_hat: Num(c.gamma_hat),
            gamma_estimate: Num(est.value),
            gamma_residual: Num((est.value - c.gamma_hat).abs()),
            sequence: est
                .sequence
                .iter()
                .map(|(r, q)| [Num(*r), Num(*q)])
                .collect(),
            eps: Num(eps),
            radius_target: Num(target),
            radius_containment: Num(contained),
            radius_residual: Num(radius_residual),
        });
    }
    env.warn(
        "NarrowedLimit",
        "estimates keep the base point fixed at the given point instead of letting it vary in the limit",
    );
    env.warn(
        "SingleEps",
        format!("containment radius evaluated at the single neighbourhood size eps = {eps}"),
    );
    env.results.oracle = Some(rows);
    Ok(env)
}

fn gauge_cmd(a: &Common) -> Result<Envelope, CliError> {
    let l = load(a)?;
    let mut env = envelope("gauge", &l, None);
    let value = l
        .body
        .minkowski_gauge(&l.point)
        .map_err(|e| CliError::from(e).at("--point"))?;
    env.results.gauge = Some(GaugeResult { value: Num(value) });
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parsing() {
        assert_eq!(
            parse_csv("1, -2.5,3e-1", "--point").unwrap(),
            vec![1.0, -2.5, 0.3]
        );
        let e = parse_csv("1,x", "--point").unwrap_err();
        assert_eq!(e.code, "InvalidNumber");
        assert_eq!(e.location.as_deref(), Some("--point"));
        assert_eq!(parse_csv("1,inf", "--dir[1]").unwrap_err().exit, EXIT_INPUT);
        assert!(parse_csv("", "--point").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let out = run(["dircurv", "report"]);
        assert_eq!(out.code, EXIT_INPUT);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["code"], "Usage");
    }

    #[test]
    fn help_succeeds() {
        let out = run(["dircurv", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("goldman"));
    }
}
