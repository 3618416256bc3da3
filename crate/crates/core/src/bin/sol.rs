//! Command-line front end: invariant tables, trajectories, partner
//! reports, distances, sphere sweeps, ground-plane asymptotics, and NIL
//! geodesics, exported as deterministic CSV or JSON.
//!
//! Exit codes: 0 success, 2 argument error, 3 solver or I/O failure.
//! Diagnostics go to stderr; data go to stdout or `--out`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use sol_geodesics::distance::{cut_length, distance, ground_asymptotic};
use sol_geodesics::emit::{table_csv, table_json, trajectory_csv, trajectory_json, OutputFormat};
use sol_geodesics::flow::{sample_path, GeodesicPath, GeodesicSpec};
use sol_geodesics::geometry::{Point, TangentVec};
use sol_geodesics::invariants::{invariant_derivatives, invariant_set};
use sol_geodesics::nil::{nil_eval, nil_from_initial, nil_speed_sq};
use sol_geodesics::rendezvous::rendezvous_check;
use sol_geodesics::Error;

#[derive(Parser)]
#[command(name = "sol", version, about = "Geodesics, invariants, and distances in SOL geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Modulus k in [0, 1); builds the geodesic starting at a critical
    /// point of its cylinder. Alternative to --point/--velocity.
    #[arg(long, value_name = "K")]
    k: Option<f64>,
    /// Average height h (with --k).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    h: f64,
    /// Cylinder offset c (with --k).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
    /// Sign of the constant a (with --k): + or -.
    #[arg(long, default_value = "+")]
    sign_a: String,
    /// Sign of the constant b (with --k): + or -.
    #[arg(long, default_value = "+")]
    sign_b: String,
    /// Initial point "x,y,z". Alternative to --k.
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    point: Option<String>,
    /// Initial velocity "dx,dy,dz"; must be unit speed.
    #[arg(long, value_name = "DX,DY,DZ", allow_hyphen_values = true)]
    velocity: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants A, T, M, H at one modulus or over a grid.
    Invariants {
        /// Single modulus value.
        #[arg(long, value_name = "K")]
        k: Option<f64>,
        /// Grid start (inclusive).
        #[arg(long)]
        k_min: Option<f64>,
        /// Grid end (inclusive).
        #[arg(long)]
        k_max: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Also emit the derivatives T', M', H'.
        #[arg(long)]
        derivatives: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampled trajectory of one geodesic.
    Geodesic {
        #[command(flatten)]
        spec: SpecArgs,
        /// Integrate this many periods (generic geodesics only).
        #[arg(long)]
        periods: Option<f64>,
        /// Start time (default 0).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        /// End time; alternative to --periods.
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        /// Sampling step.
        #[arg(long)]
        dt: f64,
        /// Integration tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rendez-vous report for a geodesic and its partner at t1.
    Partner {
        #[command(flatten)]
        spec: SpecArgs,
        /// Pairing time.
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-point distance.
    Distance {
        /// Start point "x,y,z".
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        from: String,
        /// End point "x,y,z".
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Geodesic sphere sweep: endpoints of radius-R arcs over a
    /// direction grid, clipped at each direction's cut length.
    Sphere {
        #[arg(long)]
        radius: f64,
        /// Number of directions on the sphere.
        #[arg(long, default_value_t = 256)]
        n_dirs: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ground-plane asymptotics: T(k) against 4 log λ.
    Asymptotic {
        /// Direction angle θ in (0, π/2).
        #[arg(long)]
        theta: f64,
        /// Comma-separated λ values.
        #[arg(long, value_name = "L1,L2,...")]
        lambdas: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// NIL geodesic evaluation.
    Nil {
        /// Initial point "x,y,z".
        #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
        point: String,
        /// Initial velocity "dx,dy,dz"; unit speed in the NIL metric.
        #[arg(long, value_name = "DX,DY,DZ", allow_hyphen_values = true)]
        velocity: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        dt: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Domain(format!("expected \"x,y,z\", got '{s}'")));
    }
    let mut out = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("not a number: '{p}'")))?;
    }
    Ok(out)
}

fn parse_sign(s: &str) -> Result<f64, Error> {
    match s {
        "+" | "plus" | "1" => Ok(1.0),
        "-" | "minus" | "-1" => Ok(-1.0),
        other => Err(Error::Domain(format!("sign must be + or -, got '{other}'"))),
    }
}

fn build_spec(args: &SpecArgs) -> Result<GeodesicSpec, Error> {
    match (args.k, &args.point, &args.velocity) {
        (Some(k), None, None) => GeodesicSpec::from_modulus(
            k,
            args.h,
            args.c,
            parse_sign(&args.sign_a)?,
            parse_sign(&args.sign_b)?,
        ),
        (None, Some(p), Some(v)) => {
            let p = parse_triple(p)?;
            let v = parse_triple(v)?;
            GeodesicSpec::from_initial(TangentVec::new(
                Point::new(p[0], p[1], p[2]),
                v[0],
                v[1],
                v[2],
            ))
        }
        _ => Err(Error::Domain(
            "specify either --k (with optional --h/--c/--sign-a/--sign-b) or both --point and --velocity".into(),
        )),
    }
}

fn sample_times(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>, Error> {
    if !(dt > 0.0) || !(t1 > t0) {
        return Err(Error::Domain(format!("need t1 > t0 and dt > 0, got [{t0}, {t1}], dt = {dt}")));
    }
    if (t1 - t0) / dt > 10_000_000.0 {
        return Err(Error::Domain(format!(
            "step dt = {dt} over [{t0}, {t1}] would emit more than 10^7 samples"
        )));
    }
    let mut times = Vec::new();
    let n = ((t1 - t0) / dt).floor() as usize;
    for i in 0..=n {
        times.push(t0 + i as f64 * dt);
    }
    if t1 - times[times.len() - 1] > 1e-9 * dt {
        times.push(t1);
    }
    Ok(times)
}

fn write_sink(data: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, data).map_err(Error::from),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(data.as_bytes()).map_err(Error::from)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Invariants { k, k_min, k_max, steps, derivatives, output } => {
            let format: OutputFormat = output.format.parse()?;
            let ks: Vec<f64> = match (k, k_min, k_max) {
                (Some(k), None, None) => vec![k],
                (None, Some(lo), Some(hi)) => {
                    if steps < 2 {
                        return Err(Error::Domain("grid needs at least 2 steps".into()));
                    }
                    (0..steps)
                        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                        .collect()
                }
                _ => return Err(Error::Domain("specify --k or both --k-min and --k-max".into())),
            };
            let mut rows = Vec::new();
            for k in ks {
                let inv = invariant_set(k)?;
                let mut row = vec![
                    inv.k,
                    inv.amplitude,
                    inv.period,
                    inv.axis_drift,
                    inv.horizontal_drift,
                ];
                if derivatives {
                    let (dt, dm, dh) = invariant_derivatives(k)?;
                    row.extend([dt, dm, dh]);
                }
                rows.push(row);
            }
            let cols: Vec<&str> = if derivatives {
                vec!["k", "A", "T", "M", "H", "dT", "dM", "dH"]
            } else {
                vec!["k", "A", "T", "M", "H"]
            };
            let data = match format {
                OutputFormat::Csv => table_csv(&cols.join(","), &rows),
                OutputFormat::Json => table_json(&cols, &rows)? + "\n",
            };
            write_sink(&data, &output.out)
        }

        Command::Geodesic { spec, periods, t0, t1, dt, tol, output } => {
            let format: OutputFormat = output.format.parse()?;
            let spec = build_spec(&spec)?;
            let t_end = match (periods, t1) {
                (Some(n), None) => {
                    let period = spec.period().ok_or(Error::WrongClass { class: spec.class })?;
                    t0 + n * period
                }
                (None, Some(t1)) => t1,
                _ => return Err(Error::Domain("specify exactly one of --periods or --t1".into())),
            };
            let times = sample_times(t0, t_end, dt)?;
            let path = GeodesicPath::build(&spec, t0.min(0.0), t_end.max(0.0), tol)?;
            let traj = sample_path(&path, &times, tol);
            let data = match format {
                OutputFormat::Csv => trajectory_csv(&traj),
                OutputFormat::Json => trajectory_json(&traj)? + "\n",
            };
            write_sink(&data, &output.out)
        }

        Command::Partner { spec, t1, tol, output } => {
            let format: OutputFormat = output.format.parse()?;
            let spec = build_spec(&spec)?;
            let report = rendezvous_check(&spec, t1, tol)?;
            let period = spec.period().ok_or(Error::WrongClass { class: spec.class })?;
            let data = match format {
                OutputFormat::Csv => table_csv(
                    "t1,period,meet_error,distinct",
                    &[vec![t1, period, report.meet_error, f64::from(u8::from(report.distinct))]],
                ),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "t1": t1,
                        "period": period,
                        "meet_error": report.meet_error,
                        "distinct": report.distinct,
                    }))
                    .map_err(|e| Error::Io(e.to_string()))?
                        + "\n"
                }
            };
            write_sink(&data, &output.out)
        }

        Command::Distance { from, to, tol, output } => {
            let format: OutputFormat = output.format.parse()?;
            let f = parse_triple(&from)?;
            let t = parse_triple(&to)?;
            let result = distance(
                &Point::new(f[0], f[1], f[2]),
                &Point::new(t[0], t[1], t[2]),
                tol,
            )?;
            let method = match result.method {
                sol_geodesics::DistanceMethod::Vertical => "vertical",
                sol_geodesics::DistanceMethod::HyperbolicClosedForm => "hyperbolic-closed-form",
                sol_geodesics::DistanceMethod::Shooting => "shooting",
            };
            let data = match format {
                OutputFormat::Csv => format!(
                    "distance,method,residual\n{},{},{}\n",
                    result.value, method, result.residual
                ),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "distance": result.value,
                        "method": method,
                        "residual": result.residual,
                        "witness": {
                            "a": result.witness.constants.a,
                            "b": result.witness.constants.b,
                            "c": result.witness.constants.c,
                            "k": result.witness.k,
                            "class": result.witness.class.to_string(),
                            "time": result.witness_time,
                        },
                    }))
                    .map_err(|e| Error::Io(e.to_string()))?
                        + "\n"
                }
            };
            write_sink(&data, &output.out)
        }

        Command::Sphere { radius, n_dirs, tol, output } => {
            let format: OutputFormat = output.format.parse()?;
            if !(radius > 0.0) {
                return Err(Error::Domain(format!("radius must be positive, got {radius}")));
            }
            if n_dirs < 4 {
                return Err(Error::Domain("need at least 4 directions".into()));
            }
            let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            let mut rows = Vec::with_capacity(n_dirs);
            for i in 0..n_dirs {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / n_dirs as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden_angle * i as f64;
                let dir = [r * phi.cos(), r * phi.sin(), z];
                let spec = GeodesicSpec::from_initial(TangentVec::new(
                    Point::ORIGIN,
                    dir[0],
                    dir[1],
                    dir[2],
                ))?;
                let cut = cut_length(spec.class, Some(spec.k))?;
                let t = radius.min(cut);
                let path = GeodesicPath::build(&spec, 0.0, t, tol)?;
                let p = path.point(t);
                rows.push(vec![dir[0], dir[1], dir[2], t, p.x, p.y, p.z]);
            }
            let cols = ["a", "b", "c", "t", "x", "y", "z"];
            let data = match format {
                OutputFormat::Csv => table_csv(&cols.join(","), &rows),
                OutputFormat::Json => table_json(&cols, &rows)? + "\n",
            };
            write_sink(&data, &output.out)
        }

        Command::Asymptotic { theta, lambdas, output } => {
            let format: OutputFormat = output.format.parse()?;
            let mut rows = Vec::new();
            for part in lambdas.split(',') {
                let lambda: f64 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("not a number: '{part}'")))?;
                let ga = ground_asymptotic(theta, lambda)?;
                let four_log = 4.0 * lambda.ln();
                rows.push(vec![lambda, ga.k, ga.a, ga.b, ga.c, ga.period, four_log,
                    ga.period - four_log]);
            }
            let cols = ["lambda", "k", "a", "b", "c", "T", "four_log_lambda", "gap"];
            let data = match format {
                OutputFormat::Csv => table_csv(&cols.join(","), &rows),
                OutputFormat::Json => table_json(&cols, &rows)? + "\n",
            };
            write_sink(&data, &output.out)
        }

        Command::Nil { point, velocity, t0, t1, dt, output } => {
            let format: OutputFormat = output.format.parse()?;
            let p = parse_triple(&point)?;
            let v = parse_triple(&velocity)?;
            let base = Point::new(p[0], p[1], p[2]);
            let geo = nil_from_initial(&base, v[0], v[1], v[2])?;
            let times = sample_times(t0, t1, dt)?;
            let mut rows = Vec::with_capacity(times.len());
            for t in times {
                let (pt, vel) = nil_eval(&geo, t);
                let res = nil_speed_sq(&pt, vel[0], vel[1], vel[2]) - 1.0;
                rows.push(vec![t, pt.x, pt.y, pt.z, res]);
            }
            let cols = ["t", "x", "y", "z", "res_speed"];
            let data = match format {
                OutputFormat::Csv => table_csv(&cols.join(","), &rows),
                OutputFormat::Json => table_json(&cols, &rows)? + "\n",
            };
            write_sink(&data, &output.out)
        }
    }
}

/// Argument and precondition problems exit 2; solver, integration, and
/// I/O failures exit 3.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Admissibility { .. }
        | Error::AltitudeMismatch { .. }
        | Error::NonUnitSpeed { .. }
        | Error::WrongClass { .. }
        | Error::BelowRange { .. }
        | Error::BelowLambdaStar { .. }
        | Error::NotCritical { .. } => 2,
        Error::IntegrationFailure { .. }
        | Error::SolverFailure { .. }
        | Error::SearchFailure(_)
        | Error::OffCylinder { .. }
        | Error::Io(_) => 3,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
