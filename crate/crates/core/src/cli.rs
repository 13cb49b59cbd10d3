//! Command-line front end. [`run`] returns the process exit status:
//! 0 on success, 1 when an algebra is invalid or a verification check fails,
//! 2 on usage, I/O and parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cohomology::{poisson_cohomology_table, render_dims_table, verify_theorem, VerifyConfig};
use crate::enveloping::DufloMap;
use crate::error::{Error, Result};
use crate::kgraphs::{self, bernoulli_weight, weight_mc, KGraph};
use crate::lie::{catalog, LieAlgebra, CATALOG};
use crate::poly::Polynomial;
use crate::scalar;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "duflo", version, about = "Exact checks of the Duflo isomorphism on cohomology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Catalog algebra.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub algebra: Option<String>,

    /// JSON algebra description.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check antisymmetry and the Jacobi identity.
    Validate {
        #[command(flatten)]
        source: AlgebraSource,
    },
    /// Dimensions of Poisson cohomology slices (p, d).
    PoissonCohomology {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
    },
    /// Compare Poisson and Chevalley-Eilenberg cohomology through the Duflo map.
    Verify {
        #[command(flatten)]
        source: AlgebraSource,
        /// Defaults to the dimension.
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        /// Filtration bound for coboundary searches; defaults to d_max + 2.
        #[arg(long)]
        search_bound: Option<usize>,
    },
    /// Weight of a graph: Monte-Carlo estimate or the closed Bernoulli form.
    Weight {
        /// Edge list such as "1->2, 2->G1", or wedge, snail:P, wheel:P, bernoulli:P.
        #[arg(required_unless_present = "bernoulli")]
        graph: Option<String>,
        /// Number of aerial vertices (default: largest index used).
        #[arg(long)]
        aerial: Option<usize>,
        /// Number of ground vertices (default: largest index used).
        #[arg(long)]
        ground: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exact endpoint weights of the deployed Bernoulli graph with this p.
        #[arg(long, conflicts_with = "graph")]
        bernoulli: Option<usize>,
    },
    /// Star product f * g transported from U(g) by the Duflo map.
    Star {
        #[command(flatten)]
        source: AlgebraSource,
        f: String,
        g: String,
        /// Truncation degree of the Duflo operator (default deg f + deg g).
        #[arg(long)]
        order: Option<usize>,
    },
}

struct Output {
    text: String,
    code: i32,
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let result = execute(&cli);
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).map_err(Error::from),
                None => stdout.write_all(out.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn load(source: &AlgebraSource) -> Result<LieAlgebra> {
    match (&source.algebra, &source.file) {
        (Some(name), _) => catalog(name).map_err(|_| {
            Error::Lookup(format!("unknown algebra '{name}' (catalog: {})", CATALOG.join(", ")))
        }),
        (None, Some(path)) => LieAlgebra::from_json_file(path),
        (None, None) => Err(Error::Parameter("pass --algebra or --file".into())),
    }
}

/// Loads and validates; `Err(Output)` carries the exit-1 listing.
fn load_valid(source: &AlgebraSource, format: Format) -> Result<std::result::Result<LieAlgebra, Output>> {
    let alg = load(source)?;
    let report = alg.validate();
    if report.is_ok() {
        Ok(Ok(alg))
    } else {
        Ok(Err(Output {
            text: render_validation(&alg, &report, format),
            code: EXIT_FAILURE,
        }))
    }
}

fn render_validation(alg: &LieAlgebra, report: &crate::lie::ValidationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let v = json!({
                "algebra": alg.name(),
                "dim": alg.dim(),
                "ok": report.is_ok(),
                "violations": report.violations,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            if report.is_ok() {
                let _ = writeln!(s, "{} (dim {}): valid Lie algebra", alg.name(), alg.dim());
            } else {
                let _ = writeln!(
                    s,
                    "{} (dim {}): {} violated identities",
                    alg.name(),
                    alg.dim(),
                    report.violations.len()
                );
                for v in &report.violations {
                    let _ = writeln!(s, "  {v}");
                }
            }
            s
        }
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::Parameter(format!("{name} must be positive")))
    } else {
        Ok(v)
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { source } => {
            let alg = load(source)?;
            let report = alg.validate();
            Ok(Output {
                text: render_validation(&alg, &report, format),
                code: if report.is_ok() { EXIT_OK } else { EXIT_FAILURE },
            })
        }
        Command::PoissonCohomology { source, p_max, d_max } => {
            let alg = match load_valid(source, format)? {
                Ok(a) => a,
                Err(out) => return Ok(out),
            };
            let p_max = p_max.unwrap_or(alg.dim());
            let dims = poisson_cohomology_table(&alg, p_max, *d_max)?;
            let text = match format {
                Format::Json => {
                    let v = json!({
                        "algebra": alg.name(),
                        "dim": alg.dim(),
                        "p_max": p_max.min(alg.dim()),
                        "d_max": d_max,
                        "slices": dims,
                    });
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Text => format!(
                    "Poisson cohomology of {} (dim {}), dimension of H^p in polynomial degree d\n{}",
                    alg.name(),
                    alg.dim(),
                    render_dims_table(&dims)
                ),
            };
            Ok(Output { text, code: EXIT_OK })
        }
        Command::Verify {
            source,
            p_max,
            d_max,
            search_bound,
        } => {
            let alg = match load_valid(source, format)? {
                Ok(a) => a,
                Err(out) => return Ok(out),
            };
            let config = VerifyConfig {
                p_max: positive("--p-max", p_max.unwrap_or(alg.dim()))?,
                d_max: positive("--d-max", *d_max)?,
                search_bound: positive("--search-bound", search_bound.unwrap_or(d_max + 2))?,
            };
            let report = verify_theorem(&alg, config)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.render_text(),
            };
            Ok(Output {
                text,
                code: if report.ok() { EXIT_OK } else { EXIT_FAILURE },
            })
        }
        Command::Weight {
            graph,
            aerial,
            ground,
            samples,
            seed,
            bernoulli,
        } => {
            if let Some(p) = bernoulli {
                return Ok(Output {
                    text: render_bernoulli(*p, format),
                    code: EXIT_OK,
                });
            }
            let text = graph.as_deref().unwrap_or_default();
            let g = graph_from_text(text, *aerial, *ground)?;
            if *samples == 0 {
                return Err(Error::Parameter("--samples must be positive".into()));
            }
            let est = weight_mc(&g, *samples, *seed)?;
            let out = match format {
                Format::Json => {
                    let v = json!({
                        "graph": g.render(),
                        "aerial": g.aerial(),
                        "ground": g.ground(),
                        "edges": g.edges().len(),
                        "sampled": g.has_weight_dimension(),
                        "estimate": est,
                    });
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Text => {
                    let mut s = format!(
                        "graph: {} ({} aerial, {} ground, {} edges)\n",
                        g.render(),
                        g.aerial(),
                        g.ground(),
                        g.edges().len()
                    );
                    if !g.has_weight_dimension() {
                        let _ = writeln!(s, "edge count differs from 2n+m-2: weight is exactly 0");
                    }
                    let _ = writeln!(
                        s,
                        "weight: {:.6} +/- {:.6}\nsamples: {}\nseed: {}",
                        est.mean, est.stderr, est.samples, est.seed
                    );
                    s
                }
            };
            Ok(Output { text: out, code: EXIT_OK })
        }
        Command::Star { source, f, g, order } => {
            let alg = match load_valid(source, format)? {
                Ok(a) => a,
                Err(out) => return Ok(out),
            };
            let labels = alg.labels().to_vec();
            let pf = Polynomial::parse(f, &labels)?;
            let pg = Polynomial::parse(g, &labels)?;
            let n = order.unwrap_or(pf.degree_or_zero() + pg.degree_or_zero());
            let duflo = DufloMap::new(&alg, n);
            let prod = duflo.star(&pf, &pg)?;
            let text = match format {
                Format::Json => {
                    let v = json!({
                        "algebra": alg.name(),
                        "f": pf.render(&labels),
                        "g": pg.render(&labels),
                        "truncation": n,
                        "star": prod.render(&labels),
                    });
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Text => format!(
                    "({}) * ({}) = {}\n",
                    pf.render(&labels),
                    pg.render(&labels),
                    prod.render(&labels)
                ),
            };
            Ok(Output { text, code: EXIT_OK })
        }
    }
}

fn graph_from_text(text: &str, aerial: Option<usize>, ground: Option<usize>) -> Result<KGraph> {
    let named = |p: &str| -> Result<usize> {
        p.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad graph size '{p}'")))
    };
    let t = text.trim();
    let g = if t == "wedge" {
        kgraphs::wedge_graph()
    } else if let Some(p) = t.strip_prefix("snail:") {
        kgraphs::snail_graph(named(p)?)
    } else if let Some(p) = t.strip_prefix("bernoulli:") {
        kgraphs::bernoulli_graph(named(p)?)
    } else if let Some(p) = t.strip_prefix("wheel:") {
        let p = named(p)?;
        if p < 2 {
            return Err(Error::Parameter("a wheel needs at least two spokes".into()));
        }
        kgraphs::wheel_graph(p)
    } else {
        let inferred = KGraph::parse(t)?;
        if aerial.is_none() && ground.is_none() {
            return Ok(inferred);
        }
        return KGraph::parse_with(
            t,
            aerial.unwrap_or(inferred.aerial()),
            ground.unwrap_or(inferred.ground()),
        );
    };
    Ok(g)
}

fn render_bernoulli(p: usize, format: Format) -> String {
    let w = bernoulli_weight(p);
    match format {
        Format::Json => {
            let v = json!({
                "p": p,
                "at_zero": scalar::render(&w.at_zero),
                "at_pi": scalar::render(&w.at_pi),
                "difference": scalar::render(&w.difference),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Text => format!(
            "deployed Bernoulli graph, p = {p}\nat theta = 0:  {}\nat theta = pi: {}\ndifference:    {}\n",
            scalar::render(&w.at_zero),
            scalar::render(&w.at_pi),
            scalar::render(&w.difference)
        ),
    }
}
