//! `koszulkit`: exact computations with curved dg algebras from JSON files.

mod commands;
mod input;
mod report;

use std::sync::Mutex;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use koszulkit::mc::{EnumerationOptions, DEFAULT_MAX_COORDINATES};
use koszulkit::parallel::with_threads;
use koszulkit::{Execution, Field};

use commands::Context;
use report::{Defaults, Envelope, ErrorPayload, Failure, Report, EXIT_MATH, EXIT_OK};

const DEFAULT_FIELD: &str = "F3";
const DEFAULT_WINDOW: usize = 4;
const DEFAULT_BOUND: usize = 2;

#[derive(Parser)]
#[command(name = "koszulkit", version, about = "Curved dg algebras, bar and cobar constructions, twisted modules")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Ground field, `F<p>` or `Q`; overrides the field named in input files.
    #[arg(long, global = true, conflicts_with = "p")]
    field: Option<String>,
    /// Shorthand for `--field F<p>`.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Word-length window for bar and cobar computations.
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Largest test-module dimension for the weak-equivalence oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Worker threads for enumerations; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest number of free coordinates an enumeration may search.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COORDINATES)]
    max_coordinates: usize,
    /// Print the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an algebra file.
    Check { algebra: PathBuf },
    /// List or verify Maurer–Cartan elements.
    Mc {
        algebra: PathBuf,
        #[command(subcommand)]
        action: McAction,
    },
    /// Twist an algebra by a degree-1 element.
    Twist { algebra: PathBuf, element: String },
    /// The cobar construction with its differential and d² certificate.
    Cobar {
        algebra: PathBuf,
        #[arg(long)]
        retraction: Option<String>,
    },
    /// The extended bar construction relative to a retraction.
    Bar {
        algebra: PathBuf,
        #[arg(long)]
        retraction: Option<String>,
    },
    /// Points of the extended bar construction of A with values in C.
    BarPoints {
        a: PathBuf,
        c: PathBuf,
        /// Count dg maps of the augmented constructions instead of MC(A⊗C).
        #[arg(long)]
        augmented: bool,
    },
    /// Augmented dg maps from the cobar construction of C to A.
    CobarMaps { c: PathBuf, a: PathBuf },
    /// Compare the bar differentials of two retractions.
    RetractionIso {
        algebra: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Exactness of the resolution of k by the tensor algebra on V, per word length.
    Resolution {
        /// Degrees of a basis of V, comma separated; empty for V = 0.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        degrees: Vec<i32>,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
    },
    /// Cohomology of Hom from a twisted module to a module.
    Hom { algebra: PathBuf, twisted: PathBuf, module: PathBuf },
    /// Search for a test module refuting that a map is a weak equivalence.
    Weq { algebra: PathBuf, source: PathBuf, target: PathBuf, map: PathBuf },
    /// Whether a map induces an isomorphism on cohomology.
    QuasiIso { algebra: PathBuf, source: PathBuf, target: PathBuf, map: PathBuf },
    /// The path object I⊗M with its maps, checked.
    PathObject { algebra: PathBuf, module: PathBuf },
    /// F_x M over B for x in MC(A⊗B) and a right A-module M.
    FunctorF { a: PathBuf, b: PathBuf, x: String, module: PathBuf },
    /// G_x N over A for x in MC(A⊗B) and a right B-module N.
    FunctorG { a: PathBuf, b: PathBuf, x: String, module: PathBuf },
    /// Compare Hom_A(G_x N, M) with Hom_B(F_x M, N).
    Adjoint { a: PathBuf, b: PathBuf, x: String, m: PathBuf, n: PathBuf },
    /// Scripted scenarios: kx2, adjunction, representability.
    Gallery { name: String },
}

#[derive(Subcommand)]
enum McAction {
    /// Enumerate all Maurer–Cartan elements over a finite field.
    List,
    /// Check one element, printing the residual h + dx + x².
    Verify { element: String },
}

fn run(ctx: &Context, command: &Command) -> Result<Report, Failure> {
    use Command::*;
    match command {
        Check { algebra } => commands::check(ctx, algebra),
        Mc { algebra, action: McAction::List } => commands::mc_list(ctx, algebra),
        Mc { algebra, action: McAction::Verify { element } } => commands::mc_verify(ctx, algebra, element),
        Twist { algebra, element } => commands::twist(ctx, algebra, element),
        Cobar { algebra, retraction } => commands::cobar_cmd(ctx, algebra, retraction.as_deref()),
        Bar { algebra, retraction } => commands::bar_cmd(ctx, algebra, retraction.as_deref()),
        BarPoints { a, c, augmented } => commands::bar_points_cmd(ctx, a, c, *augmented),
        CobarMaps { c, a } => commands::cobar_maps_cmd(ctx, c, a),
        RetractionIso { algebra, from, to } => commands::retraction_iso(ctx, algebra, from, to),
        Resolution { degrees, max_length } => commands::resolution(ctx, degrees, *max_length),
        Hom { algebra, twisted, module } => commands::hom(ctx, algebra, twisted, module),
        Weq { algebra, source, target, map } => commands::weq(ctx, algebra, source, target, map),
        QuasiIso { algebra, source, target, map } => commands::quasi_iso(ctx, algebra, source, target, map),
        PathObject { algebra, module } => commands::path_object_cmd(ctx, algebra, module),
        FunctorF { a, b, x, module } => commands::functor(ctx, a, b, x, module, false),
        FunctorG { a, b, x, module } => commands::functor(ctx, a, b, x, module, true),
        Adjoint { a, b, x, m, n } => commands::adjoint(ctx, a, b, x, m, n),
        Gallery { name } => commands::gallery_cmd(ctx, name),
    }
}

fn field_flag(g: &Global) -> Result<Option<Field>, Failure> {
    match (&g.field, g.p) {
        (Some(s), _) => Ok(Some(Field::from_name(s)?)),
        (None, Some(p)) => Ok(Some(Field::prime(p)?)),
        (None, None) => Ok(None),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let g = &cli.global;
    let default_field = Field::from_name(DEFAULT_FIELD).expect("valid default");
    let field = field_flag(g);
    let mut used = None;
    let defaults = Defaults { field: DEFAULT_FIELD.into(), window: DEFAULT_WINDOW, bound: DEFAULT_BOUND };

    let outcome = field.and_then(|field| {
        let execution = if g.jobs == Some(1) { Execution::Sequential } else { Execution::Parallel };
        let ctx = Context {
            field,
            default_field,
            window: g.window,
            bound: g.bound,
            opts: EnumerationOptions { max_coordinates: g.max_coordinates, execution },
            used_field: Mutex::new(None),
        };
        let report = with_threads(g.jobs, || run(&ctx, &cli.command));
        used = ctx.used_field.lock().expect("not poisoned").or(field);
        report
    });
    let field_name = used.map(|f| f.name());

    match outcome {
        Ok(report) => {
            if g.text {
                emit(&format!("{}\nstatus: {}", report.text, if report.ok { "ok" } else { "FAILED" }));
            } else {
                let envelope = Envelope {
                    tool: "koszulkit",
                    version: env!("CARGO_PKG_VERSION"),
                    command: &argv,
                    field: field_name,
                    defaults,
                    ok: report.ok,
                    scope: Some(&report.scope),
                    result: Some(&report.result),
                    error: None,
                };
                emit(&serde_json::to_string_pretty(&envelope).expect("serializable"));
            }
            ExitCode::from(if report.ok { EXIT_OK } else { EXIT_MATH })
        }
        Err(failure) => {
            if g.text {
                eprintln!("error: {}", failure.message());
                if let Failure::Math { certificate: Some(c), .. } = &failure {
                    for v in &c.violations {
                        eprintln!("  {} fails at ({})", v.identity, v.witness.join(", "));
                    }
                }
            } else {
                let envelope = Envelope {
                    tool: "koszulkit",
                    version: env!("CARGO_PKG_VERSION"),
                    command: &argv,
                    field: field_name,
                    defaults,
                    ok: false,
                    scope: None,
                    result: None,
                    error: Some(ErrorPayload::of(&failure)),
                };
                emit(&serde_json::to_string_pretty(&envelope).expect("serializable"));
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
