//! The `symcert` command line. [`run`] is the whole program minus process
//! exit, so tests can drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use symcert_core::action::{is_disentangled_action, search_product_structure};
use symcert_core::certify::{certify, CertificationReport, CertifyOptions, Tolerances};
use symcert_core::group::find_direct_decompositions;
use symcert_core::rep::{is_disentangled_representation, DEFAULT_TOL_LIN, DEFAULT_TOL_REP};
use symcert_core::world::{canonical_table, GridWorldSpec};

use crate::dataset::{export_dataset, load_world, MANIFEST};
use crate::demo::{self, DemoRun};
use crate::error::{format_error, Error, Result};
use crate::formats::{
    load_action, load_decomposition, load_group, load_representation, read_table, write_json,
    DecompositionFile,
};
use crate::report::ReportFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ENTANGLED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "symcert",
    version,
    about = "Certify disentangled representations of symmetric worlds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grid-world dataset generation.
    #[command(subcommand)]
    World(WorldCommand),
    #[command(subcommand)]
    Group(GroupCommand),
    #[command(subcommand)]
    Action(ActionCommand),
    #[command(subcommand)]
    Rep(RepCommand),
    /// Certify a representation table against an exported world.
    Certify(CertifyArgs),
    /// Rebuild and certify one of the worked examples.
    Demo(DemoArgs),
}

#[derive(Subcommand, Debug)]
enum WorldCommand {
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = symcert_core::world::DEFAULT_CELL_PIXELS)]
        cell_pixels: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    Validate {
        file: PathBuf,
    },
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_factors: usize,
        /// Write the decompositions found as a JSON list.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ActionCommand {
    Check {
        file: PathBuf,
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum RepCommand {
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL_REP)]
        tol_rep: f64,
    },
    Certify {
        file: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL_REP)]
        tol_rep: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_LIN)]
        tol_lin: f64,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    world: PathBuf,
    #[arg(long)]
    rep: PathBuf,
    #[arg(long)]
    decomposition: PathBuf,
    /// Defaults to the imported-table tolerance.
    #[arg(long)]
    tol_eq: Option<f64>,
    #[arg(long)]
    tol_nl: Option<f64>,
    /// Write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoName {
    Grid,
    LinearGrid,
    Mixing,
    So3,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(value_enum)]
    name: DemoName,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Also export the world and write tables and reports here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), num)
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format_error(Path::new(name), "tolerance must be positive"))
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::World(WorldCommand::Gen {
            n,
            out: dir,
            cell_pixels,
        }) => {
            let spec = GridWorldSpec::with_cell_pixels(n, cell_pixels)?;
            let manifest = export_dataset(&spec, &dir)?;
            writeln!(
                out,
                "wrote {} files to {}",
                manifest.files.len(),
                dir.display()
            )
            .map_err(io)?;
            writeln!(out, "manifest: {}", dir.join(MANIFEST).display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Group(GroupCommand::Validate { file }) => {
            let g = load_group(&file)?;
            writeln!(out, "valid group of order {}", g.order()).map_err(io)?;
            writeln!(out, "identity: {}", g.label(g.identity())).map_err(io)?;
            writeln!(out, "abelian: {}", g.is_abelian()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Group(GroupCommand::Decompose {
            file,
            max_factors,
            json,
        }) => {
            let g = load_group(&file)?;
            let found = find_direct_decompositions(&g, max_factors)?;
            writeln!(out, "{} direct-product decompositions found", found.len()).map_err(io)?;
            if found.is_empty() {
                writeln!(out, "indecomposable").map_err(io)?;
            }
            for d in &found {
                let orders: Vec<String> = d.factor_orders().iter().map(|o| o.to_string()).collect();
                writeln!(out, "factors of orders {{{}}}", orders.join(", ")).map_err(io)?;
            }
            if let Some(path) = json {
                let files: Vec<DecompositionFile> = found
                    .iter()
                    .map(|d| DecompositionFile::from_decomposition(d, None))
                    .collect();
                write_json(&path, &files)?;
            }
            Ok(EXIT_OK)
        }
        Command::Action(ActionCommand::Check {
            file,
            decomposition,
        }) => {
            let a = load_action(&file)?;
            writeln!(
                out,
                "valid action of a group of order {} on {} points",
                a.group().order(),
                a.set_size()
            )
            .map_err(io)?;
            writeln!(
                out,
                "free: {}, transitive: {}",
                a.is_free(),
                a.is_transitive()
            )
            .map_err(io)?;
            let Some(path) = decomposition else {
                return Ok(EXIT_OK);
            };
            let d = load_decomposition(&path, a.group())?;
            match search_product_structure(&a, &d)? {
                Some(structure) => {
                    let verdict = is_disentangled_action(&a, &d, &structure)?;
                    writeln!(out, "product structure {:?}", structure.factor_sizes())
                        .map_err(io)?;
                    writeln!(out, "disentangled: {}", verdict.disentangled).map_err(io)?;
                    Ok(if verdict.disentangled {
                        EXIT_OK
                    } else {
                        EXIT_ENTANGLED
                    })
                }
                None => {
                    writeln!(out, "no disentangling product structure").map_err(io)?;
                    Ok(EXIT_ENTANGLED)
                }
            }
        }
        Command::Rep(RepCommand::Validate { file, tol_rep }) => {
            let rep = load_representation(&file, positive("--tol-rep", tol_rep)?)?;
            writeln!(out, "valid representation of dimension {}", rep.dim()).map_err(io)?;
            writeln!(
                out,
                "homomorphism residual: {}",
                num(rep.homomorphism_residual())
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Rep(RepCommand::Certify {
            file,
            decomposition,
            tol_rep,
            tol_lin,
        }) => {
            let rep = load_representation(&file, positive("--tol-rep", tol_rep)?)?;
            let d = load_decomposition(&decomposition, rep.group())?;
            let v = is_disentangled_representation(&rep, &d, positive("--tol-lin", tol_lin)?)?;
            writeln!(out, "disentangled: {}", v.disentangled).map_err(io)?;
            writeln!(out, "trivial block dim: {}", v.decomposition.trivial_dim()).map_err(io)?;
            writeln!(
                out,
                "factor block dims: {:?}",
                v.decomposition.factor_dims(d.arity())
            )
            .map_err(io)?;
            writeln!(out, "dimension deficit: {}", v.dimension_deficit()).map_err(io)?;
            Ok(if v.disentangled {
                EXIT_OK
            } else {
                EXIT_ENTANGLED
            })
        }
        Command::Certify(args) => cmd_certify(args, out),
        Command::Demo(args) => cmd_demo(args, out),
    }
}

fn cmd_certify(args: CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut tol = Tolerances::imported();
    if let Some(x) = args.tol_eq {
        tol.tol_eq = positive("--tol-eq", x)?;
    }
    if let Some(x) = args.tol_nl {
        tol.tol_nl = positive("--tol-nl", x)?;
    }
    let world = load_world(&args.world)?;
    let f = read_table(&args.rep)?;
    let d = world.decomposition(&args.decomposition)?;
    let reference = world.grid.as_ref().map(|g| canonical_table(&g.spec));
    let options = CertifyOptions {
        tolerances: tol,
        reference: reference.as_ref(),
        ..Default::default()
    };
    let report = certify(&f, &world.action, &d, &options)?;
    print_report(&report, d.arity(), out)?;
    if let Some(path) = args.report {
        write_json(&path, &ReportFile::from(&report))?;
    }
    Ok(if report.verdict_disentangled {
        EXIT_OK
    } else {
        EXIT_ENTANGLED
    })
}

fn print_report(r: &CertificationReport, arity: usize, out: &mut dyn Write) -> Result<()> {
    let mut lines = vec![
        format!("well defined: {}", r.well_defined),
        format!("collision classes: {}", r.collisions.len()),
        format!(
            "induced equivariance residual: {}",
            opt_num(r.equivariance_residual)
        ),
    ];
    match r.linear_fit() {
        Some(fit) => {
            lines.push(format!(
                "linear action: {:?}, data rank {}",
                fit.source, fit.data_rank
            ));
            lines.push(format!(
                "linear equivariance residual: {}",
                num(fit.equivariance.relative)
            ));
            lines.push(format!(
                "linear homomorphism residual: {}",
                num(fit.homomorphism_residual)
            ));
        }
        None => lines.push("linear action: none".to_string()),
    }
    if let Some(s) = r.subspaces() {
        lines.push(format!("trivial block dim: {}", s.trivial_dim()));
        lines.push(format!("factor block dims: {:?}", s.factor_dims(arity)));
    }
    lines.push(format!(
        "coordinate leak: {}",
        num(r.coordinates.worst_leak)
    ));
    lines.push(format!("verdict disentangled: {}", r.verdict_disentangled));
    lines.push(format!(
        "verdict linear disentangled: {}",
        r.verdict_linear_disentangled
    ));
    let modularity: Vec<String> = r.metrics.modularity.iter().map(|m| opt_num(*m)).collect();
    lines.push(format!("modularity: [{}]", modularity.join(", ")));
    lines.push(format!("compactness: {:?}", r.metrics.compactness));
    lines.push(format!("explicitness: {}", opt_num(r.metrics.explicitness)));
    for line in lines {
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(())
}

fn print_run(run: &DemoRun, arity: usize, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "== {} ({} ms)", run.name, run.elapsed.as_millis()).map_err(io)?;
    print_report(&run.report, arity, out)
}

fn cmd_demo(args: DemoArgs, out: &mut dyn Write) -> Result<i32> {
    let dir = args.out.as_deref();
    match args.name {
        DemoName::LinearGrid => print_run(&demo::linear_grid(args.n, dir)?, 3, out)?,
        DemoName::Grid => print_run(&demo::grid(args.n, dir)?, 3, out)?,
        DemoName::Mixing => {
            let [fine, coarse] = demo::mixing(args.n, dir)?;
            print_run(&fine, 3, out)?;
            print_run(&coarse, 2, out)?;
        }
        DemoName::So3 => {
            for s in demo::so3()? {
                writeln!(
                    out,
                    "{} (order {}): {} direct-product decompositions found {:?}",
                    s.name,
                    s.order,
                    s.decompositions.len(),
                    s.decompositions
                )
                .map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}
