//! `unidisc`: discrimination and covariant estimation of unitary
//! transformations from matrix files.
//!
//! Subcommands: `pair` (two-unitary discrimination), `uir` (covariant
//! estimation over a finite projective representation), `probe` (Schmidt
//! analysis of a probe operator). Reports go to stdout (or `--out PATH`),
//! diagnostics to stderr. Exit codes: 0 success, 2 parse error, 3 domain
//! precondition error, 4 internal inconsistency.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unidisc::linalg::{self, CMatrix};
use unidisc::probe::{make_probe, maximally_entangled, schmidt, ProbeState};
use unidisc::{covariant, pair};
use unidisc_cli::io::{self, CliError};
use unidisc_cli::report::{complex_pair, fmt_sig12, Json};

#[derive(Parser)]
#[command(
    name = "unidisc",
    version,
    about = "Discriminate unitary transformations and analyze covariant estimation"
)]
struct Cli {
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Algebraic comparison tolerance (echoed in reports).
    #[arg(long, global = true, default_value_t = 1e-12, value_name = "TOL")]
    tol_alg: f64,

    /// Rank / coefficient cutoff threshold.
    #[arg(long, global = true, default_value_t = 1e-10, value_name = "TOL")]
    tol_rank: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal discrimination of two unitaries.
    Pair {
        /// First unitary (matrix file).
        u1: PathBuf,
        /// Second unitary (matrix file).
        u2: PathBuf,
        /// Copy counts 1..=N for the N-copy sweep.
        #[arg(long, default_value_t = 8, value_name = "N")]
        n_max: u32,
        /// Also run the grid-search oracle with at least this many probes.
        #[arg(long, default_value_t = 0, value_name = "K")]
        grid: usize,
    },
    /// Covariant estimation of an unknown group element.
    Uir {
        /// Use the built-in Weyl-Heisenberg representation of dimension D.
        #[arg(long, value_name = "D", conflicts_with = "files")]
        weyl: Option<usize>,
        /// Representation elements, one matrix file each.
        #[arg(value_name = "FILE")]
        files: Vec<PathBuf>,
        /// Use the maximally entangled probe.
        #[arg(long, conflicts_with = "probe")]
        maxent: bool,
        /// Probe operator (matrix file, normalized on load).
        #[arg(long, value_name = "FILE")]
        probe: Option<PathBuf>,
    },
    /// Schmidt analysis of a probe operator.
    Probe {
        /// Probe operator (matrix file).
        e: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rendered) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let doc = match &cli.command {
        Command::Pair { u1, u2, n_max, grid } => cmd_pair(cli, u1, u2, *n_max, *grid)?,
        Command::Uir {
            weyl,
            files,
            maxent,
            probe,
        } => cmd_uir(cli, *weyl, files, *maxent, probe.as_deref())?,
        Command::Probe { e } => cmd_probe(cli, e)?,
    };
    Ok(doc.render())
}

fn header(cli: &Cli, command: &str, inputs: Vec<(&Path, String)>) -> Vec<(&'static str, Json)> {
    vec![
        ("tool", Json::Str("unidisc".into())),
        ("version", Json::Str(env!("CARGO_PKG_VERSION").into())),
        ("command", Json::Str(command.into())),
        (
            "inputs",
            Json::Arr(
                inputs
                    .into_iter()
                    .map(|(path, digest)| {
                        Json::Obj(vec![
                            ("path", Json::Str(path.display().to_string())),
                            ("sha256", Json::Str(digest)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "tolerances",
            Json::Obj(vec![
                ("tol_alg", Json::Num(cli.tol_alg)),
                ("tol_rank", Json::Num(cli.tol_rank)),
            ]),
        ),
    ]
}

fn load_unitary(path: &Path) -> Result<CMatrix, CliError> {
    let m = io::read_matrix(path)?;
    let deviation = linalg::unitarity_deviation(&m);
    if deviation > unidisc::tol::DECOMP {
        let cause = unidisc::Error::NotUnitary {
            deviation,
            tol: unidisc::tol::DECOMP,
        };
        return Err(CliError::Domain(format!("{}: {cause}", path.display())));
    }
    Ok(m)
}

fn cmd_pair(
    cli: &Cli,
    u1_path: &Path,
    u2_path: &Path,
    n_max: u32,
    grid: usize,
) -> Result<Json, CliError> {
    let u1 = load_unitary(u1_path)?;
    let u2 = load_unitary(u2_path)?;

    let report = pair::optimal_probe(&u1, &u2)?;
    let sweep = pair::n_copies_analysis(&u1, &u2, n_max)?;

    let mut csv = String::from("N,delta_N,r_N,p_error_N\n");
    for row in &sweep.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            fmt_sig12(row.delta),
            fmt_sig12(row.r),
            fmt_sig12(row.p_error)
        ));
    }

    let grid_field = if grid > 0 {
        let minimum = pair::grid_min_error(&u1, &u2, grid)?;
        if report.p_error > minimum + 1e-4 {
            return Err(CliError::Inconsistent(format!(
                "reported optimum {} exceeds the grid-search minimum {}",
                fmt_sig12(report.p_error),
                fmt_sig12(minimum)
            )));
        }
        Json::Obj(vec![
            ("samples", Json::Int(grid as i64)),
            ("p_error_min", Json::Num(minimum)),
        ])
    } else {
        Json::Null
    };

    let mut fields = header(
        cli,
        "pair",
        vec![
            (u1_path, io::file_digest(u1_path)?),
            (u2_path, io::file_digest(u2_path)?),
        ],
    );
    fields.extend([
        ("dim", Json::Int(report.dim as i64)),
        ("delta", Json::Num(report.delta)),
        ("r", Json::Num(report.r)),
        ("p_error", Json::Num(report.p_error)),
        (
            "n_bar",
            report
                .n_bar
                .map(|n| Json::Int(n as i64))
                .unwrap_or(Json::Null),
        ),
        ("exact", Json::Bool(report.exact)),
        (
            "phases",
            Json::Arr(
                report
                    .phases
                    .phases
                    .iter()
                    .zip(report.phases.multiplicities.iter())
                    .map(|(&p, &m)| {
                        Json::Obj(vec![
                            ("phase", Json::Num(p)),
                            ("multiplicity", Json::Int(m as i64)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "weights",
            Json::Arr(report.probe.weights.iter().map(|&w| Json::Num(w)).collect()),
        ),
        (
            "psi",
            Json::Arr(
                report
                    .probe
                    .psi
                    .iter()
                    .map(|z| complex_pair(z.re, z.im))
                    .collect(),
            ),
        ),
        ("sweep_csv", Json::Str(csv)),
        ("grid", grid_field),
    ]);
    Ok(Json::Obj(fields))
}

fn cmd_uir(
    cli: &Cli,
    weyl: Option<usize>,
    files: &[PathBuf],
    maxent: bool,
    probe_path: Option<&Path>,
) -> Result<Json, CliError> {
    let (rep, rep_source, rep_inputs) = match (weyl, files.is_empty()) {
        (Some(d), _) => (covariant::weyl_heisenberg(d)?, format!("weyl:{d}"), vec![]),
        (None, false) => {
            let mut elements = Vec::with_capacity(files.len());
            let mut inputs = Vec::with_capacity(files.len());
            for path in files {
                elements.push(load_unitary(path)?);
                inputs.push((path.as_path(), io::file_digest(path)?));
            }
            (covariant::validate_rep(&elements)?, "files".into(), inputs)
        }
        (None, true) => {
            return Err(CliError::Parse(
                "uir needs a representation: --weyl D or element files".into(),
            ))
        }
    };

    let (probe, probe_source, probe_input) = match (maxent, probe_path) {
        (true, None) => (maximally_entangled(rep.dim()), "maxent".to_string(), None),
        (false, Some(path)) => {
            let e = io::read_matrix(path)?;
            let probe = make_probe(&e)?;
            let digest = io::file_digest(path)?;
            (probe, path.display().to_string(), Some((path, digest)))
        }
        _ => {
            return Err(CliError::Parse(
                "uir needs a probe: --maxent or --probe FILE".into(),
            ))
        }
    };

    // The saturating seed exists only for maximally entangled probes; its
    // absence is reported as null, not an error.
    let seed = covariant::saturating_seed(&probe).ok();
    let summary = covariant::analyze(&rep, &probe, seed.as_ref())?;

    if (summary.chi.direct_bits - summary.chi.closed_bits).abs() > 1e-8 {
        return Err(CliError::Inconsistent(format!(
            "Holevo information mismatch: direct {} vs closed {}",
            fmt_sig12(summary.chi.direct_bits),
            fmt_sig12(summary.chi.closed_bits)
        )));
    }
    if let Some(ds) = summary.overlap.double_sum {
        if (ds - summary.overlap.closed).abs() > 1e-10 {
            return Err(CliError::Inconsistent(format!(
                "average overlap mismatch: double sum {} vs closed {}",
                fmt_sig12(ds),
                fmt_sig12(summary.overlap.closed)
            )));
        }
    }

    let schmidt_data = schmidt(&probe);
    let mut inputs = rep_inputs;
    if let Some((path, digest)) = probe_input {
        inputs.push((path, digest));
    }
    let mut fields = header(cli, "uir", inputs);
    fields.extend([
        (
            "rep",
            Json::Obj(vec![
                ("source", Json::Str(rep_source)),
                ("group_order", Json::Int(summary.group_order as i64)),
                ("dim", Json::Int(summary.dim as i64)),
                ("match_residual", Json::Num(rep.match_residual())),
                ("assoc_residual", Json::Num(rep.assoc_residual())),
                ("identity_residual", Json::Num(rep.identity_residual())),
            ]),
        ),
        (
            "probe",
            Json::Obj(vec![
                ("source", Json::Str(probe_source)),
                (
                    "schmidt_rank",
                    Json::Int(rank_at(&schmidt_data.coefficients, cli.tol_rank) as i64),
                ),
                ("entropy_bits", Json::Num(schmidt_data.entropy_bits)),
                ("maximally_entangled", Json::Bool(seed.is_some())),
            ]),
        ),
        ("dim_out", Json::Int(summary.dim_out as i64)),
        ("chi_direct_bits", Json::Num(summary.chi.direct_bits)),
        ("chi_closed_bits", Json::Num(summary.chi.closed_bits)),
        ("omega", Json::Num(summary.overlap.closed)),
        (
            "omega_double_sum",
            summary
                .overlap
                .double_sum
                .map(Json::Num)
                .unwrap_or(Json::Null),
        ),
        (
            "likelihood",
            summary.likelihood.map(Json::Num).unwrap_or(Json::Null),
        ),
        (
            "povm_residual",
            summary.povm_residual.map(Json::Num).unwrap_or(Json::Null),
        ),
    ]);
    Ok(Json::Obj(fields))
}

fn rank_at(coefficients: &[f64], cutoff: f64) -> usize {
    coefficients.iter().filter(|&&c| c > cutoff).count()
}

fn cmd_probe(cli: &Cli, e_path: &Path) -> Result<Json, CliError> {
    let raw = io::read_matrix(e_path)?;
    let input_norm = raw.norm();
    let probe: ProbeState = make_probe(&raw)?;
    let data = schmidt(&probe);
    let maxent = covariant::saturating_seed(&probe).is_ok();

    let mut fields = header(cli, "probe", vec![(e_path, io::file_digest(e_path)?)]);
    fields.extend([
        ("dim", Json::Int(probe.dim() as i64)),
        ("input_norm", Json::Num(input_norm)),
        (
            "schmidt_coefficients",
            Json::Arr(data.coefficients.iter().map(|&x| Json::Num(x)).collect()),
        ),
        (
            "schmidt_rank",
            Json::Int(rank_at(&data.coefficients, cli.tol_rank) as i64),
        ),
        ("entropy_bits", Json::Num(data.entropy_bits)),
        (
            "spectrum",
            Json::Arr(data.spectrum().iter().map(|&x| Json::Num(x)).collect()),
        ),
        ("maximally_entangled", Json::Bool(maxent)),
    ]);
    Ok(Json::Obj(fields))
}
