//! `polyslip`: command-line access to the strain-set kernels.
//!
//! Every subcommand prints one JSON object (or a CSV table with `--csv`) to
//! stdout. Exit codes: 0 success, 1 domain error, 2 usage, parse or I/O error.

mod output;
mod parse;
mod plot;

use std::f64::consts::PI;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use polyslip::polycrystal::TraceBound;
use polyslip::shear_square::{mesh_json, render_svg};
use polyslip::{
    analyze_boundary, build, conclusion, equal_perp_full, estimate_trivial_probability,
    find_connection, in_n, is_trivial, laminate_split, normalize, nu_compatible, outer_bound_perp,
    reduce, taylor_m_member, taylor_member_raw, verify, Mat2, McConfig, Polycrystal, Vec2,
    DEFAULT_TOL,
};

use output::{emit, Format, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] polyslip::Error),
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    fn stdout(e: io::Error) -> Self {
        Self::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }
    }

    fn csv(e: csv::Error) -> Self {
        Self::Input(format!("csv output: {e}"))
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Domain(_) => 1,
            Self::Input(_) | Self::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "polyslip",
    version,
    about = "Strain bounds for planar single-slip polycrystals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Numerical tolerance for membership tests.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Read and print angles in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,
    /// Print JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a texture angle set and decide whether its Taylor bound is SO(2).
    Taylor {
        /// Comma-separated texture angles.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        angles: Vec<f64>,
    },
    /// Test a matrix against the Taylor bound of an angle set.
    Member {
        /// Row-major entries a11,a12,a21,a22.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        matrix: Vec<f64>,
        /// Comma-separated texture angles.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        angles: Vec<f64>,
    },
    /// Decide ν-compatibility of F with N_s and construct a rank-one connection.
    Compat {
        /// Row-major entries a11,a12,a21,a22.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        matrix: Vec<f64>,
        /// Angle of the slip direction s.
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Angle of the interface normal ν.
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
    },
    /// Split F into a laminate of two matrices in N_s ∪ N_s'.
    Laminate {
        /// Row-major entries a11,a12,a21,a22.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        matrix: Vec<f64>,
        /// Angle of the first slip direction.
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Angle of the second slip direction.
        #[arg(long = "s-prime", allow_hyphen_values = true)]
        s_prime: f64,
    },
    /// Boundary analysis and outer bounds of a polycrystal read from JSON.
    Outer {
        /// Polycrystal description (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Optional matrix to test against both outer bounds.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Option<Vec<f64>>,
        /// Boundary samples for the trace bound.
        #[arg(long, default_value_t = 720)]
        samples: usize,
    },
    /// Monte Carlo estimate of the probability of a trivial Taylor bound.
    Mc {
        /// Number of random angles added to the fixed angle 0.
        #[arg(long)]
        k: u32,
        /// Number of samples.
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        /// RNG seed; equal seeds give identical estimates.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the sheared-square map for an exact shear value (e.g. 1/2 or 0.25).
    Shear {
        /// Shear value as p/q, an integer or a decimal.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// Run and report the verification checks.
        #[arg(long)]
        verify: bool,
        /// Write the reference and deformed configurations as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the mesh (vertices, cells, gradients) as JSON.
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Rasterize the regions Λ_θ; CSV output lists their boundary curves.
    LambdaPlot {
        /// Comma-separated angles in (0, π).
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        thetas: Vec<f64>,
        /// Raster resolution per axis.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Write the plot as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

struct Units {
    degrees: bool,
}

impl Units {
    fn read(&self, a: f64) -> f64 {
        if self.degrees {
            a.to_radians()
        } else {
            a
        }
    }

    fn read_all(&self, a: &[f64]) -> Vec<f64> {
        a.iter().map(|&x| self.read(x)).collect()
    }

    fn show(&self, a: f64) -> f64 {
        if self.degrees {
            a.to_degrees()
        } else {
            a
        }
    }

    fn show_all(&self, a: &[f64]) -> Vec<f64> {
        a.iter().map(|&x| self.show(x)).collect()
    }

    fn name(&self) -> &'static str {
        if self.degrees {
            "degrees"
        } else {
            "radians"
        }
    }
}

fn rows(m: &Mat2) -> Value {
    json!([[m.a11, m.a12], [m.a21, m.a22]])
}

fn xy(v: &Vec2) -> Value {
    json!([v.x, v.y])
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check_finite(values: &[f64], what: &str) -> Result<(), CliError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Input(format!("{what} must be finite")))
    }
}

fn run_taylor(angles: &[f64], u: &Units) -> Result<Report, CliError> {
    check_finite(angles, "angles")?;
    let set = normalize(&u.read_all(angles))?;
    let bound = reduce(&set);
    Ok(Report::new(json!({
        "command": "taylor",
        "angle_unit": u.name(),
        "trivial": is_trivial(&set),
        "kind": bound.kind,
        "reduced": u.show_all(&bound.reduced_raw()),
        "normalized": u.show_all(set.thetas()),
        "shift": u.show(set.shift()),
    })))
}

fn run_member(matrix: &[f64], angles: &[f64], u: &Units, tol: f64) -> Result<Report, CliError> {
    check_finite(matrix, "matrix")?;
    check_finite(angles, "angles")?;
    let f = parse::matrix(matrix)?;
    let raw = u.read_all(angles);
    let member = taylor_member_raw(&f, &raw, tol)?;
    let set = normalize(&raw)?;
    let rotated = f * Mat2::rotation(set.shift());
    let m_member = taylor_m_member(&rotated, &set, tol)?;
    let stretches: Vec<Value> = set
        .raw_angles()
        .iter()
        .map(|&t| {
            let s = Vec2::from_angle(t);
            json!({
                "theta": u.show(t),
                "stretch": f.mul_vec(&s).norm(),
                "in_n": in_n(&f, s, tol),
            })
        })
        .collect();
    Ok(Report::new(json!({
        "command": "member",
        "angle_unit": u.name(),
        "det": f.det(),
        "member": member,
        "m_member": m_member,
        "slips": stretches,
    })))
}

fn run_compat(matrix: &[f64], s: f64, nu: f64, u: &Units, tol: f64) -> Result<Report, CliError> {
    check_finite(matrix, "matrix")?;
    check_finite(&[s, nu], "angles")?;
    let f = parse::matrix(matrix)?;
    let (s, nu) = (Vec2::from_angle(u.read(s)), Vec2::from_angle(u.read(nu)));
    let compatible = nu_compatible(&f, s, nu, tol)?;
    let connection = find_connection(&f, s, nu, tol)?.map(|c| {
        json!({
            "a": xy(&c.a),
            "nu": xy(&c.nu),
            "target": rows(&c.target),
        })
    });
    Ok(Report::new(json!({
        "command": "compat",
        "compatible": compatible,
        "s": xy(&s),
        "nu": xy(&nu),
        "connection": connection,
    })))
}

fn run_laminate(
    matrix: &[f64],
    s: f64,
    s_prime: f64,
    u: &Units,
    tol: f64,
) -> Result<Report, CliError> {
    check_finite(matrix, "matrix")?;
    check_finite(&[s, s_prime], "angles")?;
    let f = parse::matrix(matrix)?;
    let (s, s2) = (
        Vec2::from_angle(u.read(s)),
        Vec2::from_angle(u.read(s_prime)),
    );
    let split = laminate_split(&f, s, s2, tol)?;
    Ok(Report::new(json!({
        "command": "laminate",
        "lambda": split.lambda,
        "f_plus": rows(&split.f_plus),
        "f_minus": rows(&split.f_minus),
        "normal": xy(&split.normal),
        "t_plus": split.t_plus,
        "t_minus": split.t_minus,
        "trivial": split.is_trivial(),
    })))
}

fn read_polycrystal(path: &Path) -> Result<Polycrystal, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    // syntax problems are parse errors; geometric ones are domain errors
    serde_json::from_str::<Value>(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Polycrystal::from_json(&text)?)
}

fn run_outer(
    input: &Path,
    matrix: Option<&[f64]>,
    samples: usize,
    tol: f64,
) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }
    let pc = read_polycrystal(input)?;
    let analysis = analyze_boundary(&pc, polyslip::polycrystal::DEFAULT_ANGULAR_TOL);
    let perp = outer_bound_perp(&pc);
    let membership = match matrix {
        Some(m) => {
            check_finite(m, "matrix")?;
            let f = parse::matrix(m)?;
            let full = TraceBound::new(&pc, samples).contains(&f, tol)?;
            json!({
                "taylor": taylor_member_raw(&f, &pc.thetas(), tol)?,
                "full": full,
                "perp": perp.contains(&f, tol),
            })
        }
        None => Value::Null,
    };
    Ok(Report::new(json!({
        "command": "outer",
        "boundary_grains": analysis.boundary_grains,
        "dual_points": analysis.dual_points.iter().map(xy).collect::<Vec<_>>(),
        "corners": analysis.corners.iter().map(xy).collect::<Vec<_>>(),
        "perp_points": analysis.perp_points.iter().map(|p| json!({
            "point": xy(&p.point),
            "grain": p.grain,
        })).collect::<Vec<_>>(),
        "j": analysis.j,
        "j_prime": analysis.j_prime,
        "perp_bound": {
            "slip_directions": perp.slip_directions.iter().map(xy).collect::<Vec<_>>(),
            "trivial": perp.trivial_flag,
        },
        "equal_perp_full": equal_perp_full(&pc),
        "membership": membership,
    })))
}

fn run_mc(k: u32, n: u64, seed: u64) -> Result<Report, CliError> {
    let res = estimate_trivial_probability(&McConfig {
        k,
        n_samples: n,
        seed,
    })?;
    Ok(Report::new(json!({
        "command": "mc",
        "k": res.k,
        "n": res.n,
        "seed": res.seed,
        "estimate": res.estimate,
        "stderr": res.std_error,
        "analytic": res.analytic,
    })))
}

fn exact_rows(m: &Mat2<BigRational>) -> Value {
    json!([
        [m.a11.to_string(), m.a12.to_string()],
        [m.a21.to_string(), m.a22.to_string()]
    ])
}

fn run_shear(
    gamma: &str,
    check: bool,
    svg: Option<&Path>,
    mesh: Option<&Path>,
) -> Result<(Report, bool), CliError> {
    let g = parse::rational(gamma)?;
    let b = build(g.clone())?;
    let concl = conclusion(g.clone())?;
    let mut out = json!({
        "command": "shear",
        "gamma": g.to_string(),
        "F": rows(&b.f_gamma.to_f64()),
        "F_exact": exact_rows(&b.f_gamma),
        "conclusion": concl,
    });
    let mut ok = true;
    if check {
        let r = verify(&b);
        ok = r.all_pass();
        out["checks"] = json!({
            "continuity": r.continuity,
            "det_one": r.det_one,
            "membership": r.membership,
            "boundary_trace": r.boundary_trace,
            "rank_one_jumps": r.rank_one_jumps,
            "average_gradient": r.average_gradient,
        });
        out["interfaces"] = json!(r.interfaces);
    }
    if let Some(path) = svg {
        write_file(path, &render_svg(&b))?;
    }
    if let Some(path) = mesh {
        let text = serde_json::to_string_pretty(&mesh_json(&b)).expect("mesh serializes");
        write_file(path, &text)?;
    }
    Ok((Report::new(out), ok))
}

fn run_lambda_plot(
    thetas: &[f64],
    grid: usize,
    svg: Option<&Path>,
    u: &Units,
    tol: f64,
) -> Result<Report, CliError> {
    check_finite(thetas, "thetas")?;
    if grid == 0 {
        return Err(CliError::Input("--grid must be at least 1".into()));
    }
    let radians = u.read_all(thetas);
    if let Some(t) = radians.iter().find(|t| !(**t > 0.0 && **t < PI)) {
        return Err(
            polyslip::Error::Domain(format!("theta {} outside (0, pi)", u.show(*t))).into(),
        );
    }
    let plot = plot::lambda_plot(&radians, grid, tol)?;
    if let Some(path) = svg {
        write_file(path, &plot.svg())?;
    }
    let mut json = plot.json();
    json["command"] = json!("lambda-plot");
    json["angle_unit"] = json!(u.name());
    if let Some(regions) = json["regions"].as_array_mut() {
        for (r, t) in regions.iter_mut().zip(&radians) {
            r["theta"] = json!(u.show(*t));
        }
    }
    let rows = plot
        .csv_rows()
        .into_iter()
        .zip(plot.row_thetas())
        .map(|(mut row, t)| {
            row[0] = u.show(t).to_string();
            row
        })
        .collect();
    Ok(Report {
        json,
        table: Some((vec!["theta", "beta", "gamma_minus", "gamma_plus"], rows)),
    })
}

fn run(cli: &Cli) -> Result<(Report, bool), CliError> {
    let c = &cli.common;
    if !(c.tol >= 0.0 && c.tol.is_finite()) {
        return Err(CliError::Input(format!(
            "--tol must be finite and >= 0, got {}",
            c.tol
        )));
    }
    let u = Units { degrees: c.degrees };
    let tol = c.tol;
    let done = |r: Report| (r, true);
    Ok(match &cli.command {
        Command::Taylor { angles } => done(run_taylor(angles, &u)?),
        Command::Member { matrix, angles } => done(run_member(matrix, angles, &u, tol)?),
        Command::Compat { matrix, s, nu } => done(run_compat(matrix, *s, *nu, &u, tol)?),
        Command::Laminate { matrix, s, s_prime } => {
            done(run_laminate(matrix, *s, *s_prime, &u, tol)?)
        }
        Command::Outer {
            input,
            matrix,
            samples,
        } => done(run_outer(input, matrix.as_deref(), *samples, tol)?),
        Command::Mc { k, n, seed } => done(run_mc(*k, *n, *seed)?),
        Command::Shear {
            gamma,
            verify,
            svg,
            mesh,
        } => run_shear(gamma, *verify, svg.as_deref(), mesh.as_deref())?,
        Command::LambdaPlot { thetas, grid, svg } => {
            done(run_lambda_plot(thetas, *grid, svg.as_deref(), &u, tol)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.common.csv {
        Format::Csv
    } else {
        Format::Json
    };
    let result = run(&cli).and_then(|(report, ok)| {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        emit(&report, format, &mut lock)?;
        lock.flush().map_err(CliError::stdout)?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
