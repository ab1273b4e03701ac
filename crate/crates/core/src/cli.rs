//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 on success, 1 when a verification or comparison
//! fails, 2 on usage or input errors.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::blockdiag::decompose;
use crate::circuit::{emit_qasm, Layout, RegisterKind};
use crate::encoder::{encode_ndim, BlockEncoding, Form, Manifest, Scheme};
use crate::fdm::{build_matrix_ndim, BoundaryCondition, Grid, RobinParams, Variant};
use crate::qasm::parse_qasm;
use crate::resources::{complexity_table, cost_table, count_resources, reference_counts, ComplexityInputs, Table};
use crate::sim::{verify, write_csv_summary, VerificationReport};
use crate::solver::{cg_solve, convergence_study, write_solution_csv};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qbe", version, about = "Block-encoding circuits for finite-difference Poisson matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble the stencil matrix; print it or export Matrix Market.
    Matrix {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the block-diagonal decomposition as JSON.
    Decompose {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthesize a circuit; write OpenQASM and a JSON manifest.
    Encode {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        synth: SynthArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate a circuit and compare the encoded block with the matrix.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        synth: SynthArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Re-verify an exported circuit through its manifest instead.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gate counts of the simplified circuits against the published table.
    Resources {
        /// One variant; all four when omitted.
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value = "simplified")]
        form: Form,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the implementation-cost and end-to-end complexity formulas.
    Costs {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
        /// Points per dimension.
        #[arg(long, default_value_t = 1048576.0)]
        points: f64,
        #[arg(long, default_value_t = 3.0)]
        dims: f64,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classical CG solve of a manufactured problem and a refinement study.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        /// Write the finest solution as CSV.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify every variant, form and size up to N = 32, plus d = 2.
    All {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct ProblemArgs {
    #[arg(long, default_value = "periodic")]
    variant: Variant,
    /// Qubits per dimension; N = 2^n.
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Robin data as a,b,c,d,A,B.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    robin: Option<Vec<f64>>,
    /// Robin diagonal entries as C,D.
    #[arg(long = "robin-cd", value_delimiter = ',', allow_hyphen_values = true)]
    robin_cd: Option<Vec<f64>>,
    /// Left boundary value for Dirichlet and Neumann.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    left: f64,
    /// Right boundary value for Dirichlet and Neumann.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    right: f64,
}

impl ProblemArgs {
    fn resolve(&self) -> Result<(BoundaryCondition, Grid)> {
        let probe = BoundaryCondition::homogeneous(self.variant);
        let grid = Grid::new(self.n, self.d, &probe)?;
        let bc = match self.variant {
            Variant::Periodic => probe,
            Variant::Dirichlet => BoundaryCondition::Dirichlet { left: self.left, right: self.right },
            Variant::Neumann => BoundaryCondition::Neumann { left: self.left, right: self.right },
            Variant::Robin => match (&self.robin, &self.robin_cd) {
                (Some(_), Some(_)) => return Err(Error::DomainError("give either --robin or --robin-cd".into())),
                (Some(v), None) => match v[..] {
                    [a, b, c, d, left_value, right_value] => {
                        BoundaryCondition::Robin(RobinParams { a, b, c, d, left_value, right_value })
                    }
                    _ => return Err(Error::DomainError("--robin takes six values a,b,c,d,A,B".into())),
                },
                (None, Some(v)) => match v[..] {
                    [c, d] => BoundaryCondition::robin_from_diagonals(c, d, grid.h),
                    _ => return Err(Error::DomainError("--robin-cd takes two values C,D".into())),
                },
                (None, None) => probe,
            },
        };
        bc.robin_diagonals(&grid)?;
        Ok((bc, grid))
    }
}

#[derive(Args, Debug, Clone)]
struct SynthArgs {
    #[arg(long, default_value = "lcu")]
    form: Form,
    #[arg(long, default_value = "shared")]
    scheme: Scheme,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

fn write_out(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render(table: &Table, format: Format) -> Result<String> {
    Ok(match format {
        Format::Table => table.render(),
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => serde_json::to_string_pretty(&table.to_json())? + "\n",
    })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::MaxIterExceeded { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Matrix { problem, output } => cmd_matrix(&problem, &output),
        Command::Decompose { problem, output } => {
            let (bc, grid) = problem.resolve()?;
            let dec = decompose(&bc, &Grid { dims: 1, ..grid })?;
            write_out(&(serde_json::to_string_pretty(&dec)? + "\n"), output.as_deref())?;
            Ok(0)
        }
        Command::Encode { problem, synth, output } => cmd_encode(&problem, &synth, output.as_deref()),
        Command::Verify { problem, synth, tol, manifest, output } => {
            let report = match manifest {
                Some(path) => verify_manifest(&path, tol)?,
                None => {
                    let (bc, grid) = problem.resolve()?;
                    let be = encode_ndim(&bc, &grid, synth.scheme, synth.form)?;
                    verify(&be, &build_matrix_ndim(&bc, &grid)?, tol)?
                }
            };
            emit_reports(std::slice::from_ref(&report), &output)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Resources { variant, n, form, output } => cmd_resources(variant, n, form, &output),
        Command::Costs { n, kappa, points, dims, epsilon, alpha, delta, output } => {
            let mut text = String::new();
            let costs = cost_table(n);
            let direct = complexity_rows(ComplexityInputs::Direct { kappa, points, d: dims, epsilon })?;
            let disc = complexity_rows(ComplexityInputs::Discretization { d: dims, alpha, delta, epsilon })?;
            if output.format == Format::Json {
                let v = serde_json::json!({
                    "implementation_costs": costs.to_json(),
                    "complexity_direct": direct.to_json(),
                    "complexity_discretization": disc.to_json(),
                });
                text = serde_json::to_string_pretty(&v)? + "\n";
            } else {
                for (title, t) in [
                    (format!("implementation costs at n = {n} (log base 2)"), &costs),
                    (format!("complexity at kappa = {kappa}, N = {points}, d = {dims}, epsilon = {epsilon}"), &direct),
                    (format!("complexity at d = {dims}, alpha = {alpha}, delta = {delta}, epsilon = {epsilon}"), &disc),
                ] {
                    if output.format == Format::Table {
                        text.push_str(&format!("# {title}\n"));
                    }
                    text.push_str(&render(t, output.format)?);
                    text.push('\n');
                }
            }
            write_out(&text, output.output.as_deref())?;
            Ok(0)
        }
        Command::Solve { problem, n_min, n_max, solution, output } => cmd_solve(&problem, n_min, n_max, solution, &output),
        Command::All { tol, output } => cmd_all(tol, output.as_deref()),
    }
}

fn cmd_matrix(problem: &ProblemArgs, output: &OutputArgs) -> Result<i32> {
    let (bc, grid) = problem.resolve()?;
    let m = build_matrix_ndim(&bc, &grid)?;
    let is_mtx = output.output.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "mtx"));
    if is_mtx {
        let file = fs::File::create(output.output.as_ref().expect("checked"))?;
        m.write_matrix_market(std::io::BufWriter::new(file))?;
        return Ok(0);
    }
    let text = match output.format {
        Format::Table => format!("{} stencil, N = {}, d = {}, h = {}\n{}", bc.variant(), grid.points(), grid.dims, grid.h, m.entries),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "variant": bc.variant(),
            "N": grid.points(),
            "d": grid.dims,
            "h": grid.h,
            "entries": m.entries.to_rows(),
        }))? + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                for row in m.entries.to_rows() {
                    w.write_record(row.iter().map(f64::to_string))?;
                }
                w.flush()?;
            }
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    write_out(&text, output.output.as_deref())?;
    Ok(0)
}

/// Manifest with the boundary data needed to rebuild the target matrix.
#[derive(serde::Serialize, serde::Deserialize)]
struct ManifestFile {
    #[serde(flatten)]
    manifest: Manifest,
    boundary: BoundaryCondition,
}

fn cmd_encode(problem: &ProblemArgs, synth: &SynthArgs, output: Option<&Path>) -> Result<i32> {
    let (bc, grid) = problem.resolve()?;
    let be = encode_ndim(&bc, &grid, synth.scheme, synth.form)?;
    let qasm = emit_qasm(&be.circuit);
    match output {
        None => print!("{qasm}"),
        Some(path) => {
            fs::write(path, &qasm)?;
            let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let file = ManifestFile { manifest: be.manifest(name), boundary: bc };
            fs::write(path.with_extension("json"), serde_json::to_string_pretty(&file)? + "\n")?;
        }
    }
    Ok(0)
}

fn verify_manifest(path: &Path, tol: f64) -> Result<VerificationReport> {
    let file: ManifestFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let m = &file.manifest;
    let qasm_path = path.parent().unwrap_or(Path::new(".")).join(&m.qasm_file);
    let parsed = parse_qasm(&fs::read_to_string(qasm_path)?)?;
    let grid = Grid::from_points(m.size, m.d, &file.boundary)?;
    let layout = Layout::new().with(RegisterKind::Inner, m.m).with(RegisterKind::System, m.d * grid.n as usize);
    let be = BlockEncoding {
        circuit: parsed.into_circuit(layout)?,
        ancillas: m.m,
        eta: m.eta,
        target_size: grid.size(),
        variant: m.variant,
        form: m.form,
        dims: m.d,
        scheme: m.scheme,
    };
    verify(&be, &build_matrix_ndim(&file.boundary, &grid)?, tol)
}

fn emit_reports(reports: &[VerificationReport], output: &OutputArgs) -> Result<()> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(reports)? + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv_summary(reports, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Table => {
            let mut t = Table::new(["variant", "N", "d", "form", "eta_fit", "eta", "max_abs_error", "unitarity", "passed"]);
            for r in reports {
                t.push([
                    r.variant.to_string(),
                    r.size.to_string(),
                    r.d.to_string(),
                    r.form.to_string(),
                    format!("{:.12}", r.eta_fit),
                    r.eta_declared.to_string(),
                    format!("{:.3e}", r.max_abs_error),
                    r.unitarity_error.map_or("skipped".to_string(), |u| format!("{u:.3e}")),
                    r.passed.to_string(),
                ]);
            }
            t.render()
        }
    };
    write_out(&text, output.output.as_deref())
}

fn cmd_resources(variant: Option<Variant>, n: u32, form: Form, output: &OutputArgs) -> Result<i32> {
    let variants = variant.map_or(Variant::ALL.to_vec(), |v| vec![v]);
    let mut headers = vec!["variant".to_string()];
    headers.extend(crate::resources::ResourceReport::FIELDS.iter().map(|s| s.to_string()));
    headers.push("matches".into());
    let mut table = Table::new(headers);
    let mut all_match = true;
    for v in variants {
        let bc = BoundaryCondition::homogeneous(v);
        let grid = Grid::new(n, 1, &bc)?;
        let counts = count_resources(&crate::encoder::encode(&bc, &grid, form)?);
        let mismatches = counts.mismatches(&reference_counts(v));
        let matches = form == Form::Simplified && mismatches.is_empty();
        all_match &= matches;
        let mut row = vec![v.to_string()];
        row.extend(counts.values().iter().map(usize::to_string));
        row.push(if matches {
            "yes".to_string()
        } else if form != Form::Simplified {
            "n/a".to_string()
        } else {
            mismatches.iter().map(|(f, got, want)| format!("{f}: {got} vs {want}")).collect::<Vec<_>>().join("; ")
        });
        table.push(row);
    }
    write_out(&render(&table, output.format)?, output.output.as_deref())?;
    Ok(if form != Form::Simplified || all_match { 0 } else { 1 })
}

fn complexity_rows(inputs: ComplexityInputs) -> Result<Table> {
    let mut t = Table::new(["method", "leading order", "estimate"]);
    for r in complexity_table(inputs)? {
        t.push([r.method, r.formula, format!("{:.4e}", r.estimate)]);
    }
    Ok(t)
}

/// `(f, u)` with `−u'' = f`.
type Manufactured = (fn(f64) -> f64, fn(f64) -> f64);

/// Manufactured solution for each variant.
fn manufactured(variant: Variant) -> Manufactured {
    match variant {
        Variant::Periodic => (|x| 4.0 * PI * PI * (2.0 * PI * x).sin(), |x| (2.0 * PI * x).sin()),
        Variant::Dirichlet => (|x| PI * PI * (PI * x).sin(), |x| (PI * x).sin()),
        // u' vanishes at both ends.
        Variant::Neumann | Variant::Robin => (|x| PI * PI * (PI * x).cos(), |x| (PI * x).cos()),
    }
}

fn cmd_solve(problem: &ProblemArgs, n_min: u32, n_max: u32, solution: Option<PathBuf>, output: &OutputArgs) -> Result<i32> {
    if n_min > n_max {
        return Err(Error::DomainError(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let variant = problem.variant;
    let (f, u) = manufactured(variant);
    let bc_for = |g: &Grid| match variant {
        Variant::Dirichlet => BoundaryCondition::Dirichlet { left: u(0.0), right: u((g.points() + 1) as f64 * g.h) },
        other => BoundaryCondition::homogeneous(other),
    };
    let rows = convergence_study(variant, bc_for, f, u, n_min..=n_max)?;
    let mut t = Table::new(["N", "h", "max_error", "ratio", "iterations"]);
    for r in &rows {
        t.push([
            r.points.to_string(),
            format!("{:.6e}", r.h),
            format!("{:.6e}", r.max_error),
            r.ratio.map_or("-".to_string(), |x| format!("{x:.4}")),
            r.iterations.to_string(),
        ]);
    }
    write_out(&render(&t, output.format)?, output.output.as_deref())?;
    if let Some(path) = solution {
        let grid = Grid::new(n_max, 1, &BoundaryCondition::homogeneous(variant))?;
        let bc = bc_for(&grid);
        let nodes = grid.nodes(variant);
        let samples: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let m = crate::fdm::build_matrix(&bc, &grid)?;
        let rhs = crate::fdm::build_rhs(&bc, &grid, &samples)?;
        let result = cg_solve(&m, &rhs, 1e-12, 20 * grid.points())?;
        write_solution_csv(&nodes, &result.solution, fs::File::create(path)?)?;
    }
    Ok(0)
}

fn cmd_all(tol: f64, output: Option<&Path>) -> Result<i32> {
    let mut jobs = Vec::new();
    for variant in Variant::ALL {
        for form in Form::ALL {
            for n in 2..=5 {
                jobs.push((variant, form, n, 1, Scheme::Shared));
            }
            for scheme in Scheme::ALL {
                jobs.push((variant, form, 2, 2, scheme));
            }
        }
    }
    let mut results = jobs
        .par_iter()
        .map(|&(variant, form, n, d, scheme)| {
            let bc = BoundaryCondition::homogeneous(variant);
            let grid = Grid::new(n, d, &bc)?;
            let be = encode_ndim(&bc, &grid, scheme, form)?;
            let report = verify(&be, &build_matrix_ndim(&bc, &grid)?, tol)?;
            Ok((scheme, report))
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|(sa, a), (sb, b)| {
        (a.variant, a.d, a.size, a.form, *sa).cmp(&(b.variant, b.d, b.size, b.form, *sb))
    });
    let reports: Vec<VerificationReport> = results.into_iter().map(|(_, r)| r).collect();
    let mut buf = Vec::new();
    write_csv_summary(&reports, &mut buf)?;
    write_out(&String::from_utf8(buf).expect("csv is utf-8"), output)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        eprintln!("{failed} of {} verifications failed", reports.len());
        return Ok(1);
    }
    Ok(0)
}
