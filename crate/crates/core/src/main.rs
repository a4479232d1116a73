use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kneser_sphere::equivariant::build_m;
use kneser_sphere::export::{export, ExportObject, Format};
use kneser_sphere::morse::{collapse_to_critical, FiberSelection, MorseData};
use kneser_sphere::pipeline::{parse_stages, realize_ring, run_verify, VerifyOptions};
use kneser_sphere::ring::build_ring_complex;
use kneser_sphere::simplicial::neighborhood_complex;
use kneser_sphere::{build_graph, Result};

#[derive(Parser)]
#[command(
    name = "kneser-sphere",
    version,
    about = "Collapse neighborhood complexes of stable Kneser graphs onto polytopal spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build SG(n,k) and print its vertex and edge counts.
    BuildGraph {
        n: usize,
        #[arg(short, default_value_t = 2)]
        k: usize,
    },
    /// Run the Morse matching on N(SG(n,2)) and collapse to the critical complex.
    Collapse { n: usize },
    /// Run the verification pipeline for every n in the range.
    Verify {
        n_min: usize,
        n_max: usize,
        #[arg(long, default_value = "all")]
        stages: String,
        /// Write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall-clock seconds per stage.
        #[arg(long)]
        timings: bool,
    },
    /// Export a graph, complex or realization.
    Export {
        n: usize,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(short)]
        o: PathBuf,
    },
    /// Realize the ring sphere as a convex polytope and write it as OFF.
    Realize {
        n: usize,
        #[arg(short)]
        o: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Graph,
    Ncomplex,
    Sphere,
    #[value(name = "M")]
    M,
    Polytope,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Off,
    Dot,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Off => Format::Off,
            FormatArg::Dot => Format::Dot,
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| kneser_sphere::Error::Export(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::BuildGraph { n, k } => {
            let g = build_graph(n, k)?;
            println!("SG({n},{k}): {} vertices, {} edges", g.vertex_count(), g.edge_count());
            if k == 2 {
                println!("tight: {}, loose: {}", g.tight_vertices().count(), g.loose_vertices().count());
            }
            Ok(true)
        }
        Command::Collapse { n } => {
            let data = MorseData::build(n)?;
            let m = data.matching(FiberSelection::All)?;
            let (critical, report) = collapse_to_critical(data.complex(), data.poset(), &m)?;
            println!("N(SG({n},2)) f-vector: {:?}", report.input_f_vector);
            println!("matched pairs: {}, acyclic: {}", report.matched_pairs, report.certificate.acyclic);
            println!("critical f-vector: {:?}", critical.f_vector());
            Ok(report.certificate.acyclic)
        }
        Command::Verify { n_min, n_max, stages, json, timings } => {
            let stages = parse_stages(&stages)?;
            let reports = run_verify(n_min, n_max, &stages, &VerifyOptions { timings })?;
            for r in &reports {
                for s in &r.stages {
                    let status = if s.skipped {
                        "skip"
                    } else if s.passed {
                        "pass"
                    } else {
                        "FAIL"
                    };
                    println!("n={} {:<12} {status}", r.n, s.stage.name());
                    for f in &s.failures {
                        println!("    {f}");
                    }
                }
            }
            if let Some(path) = json {
                let mut text = serde_json::to_string_pretty(&reports).expect("reports serialize");
                text.push('\n');
                write(&path, &text)?;
            }
            Ok(reports.iter().all(|r| r.passed))
        }
        Command::Export { n, what, format, o } => {
            let format = Format::from(format);
            let text = match what {
                What::Graph => export(&ExportObject::Graph(&build_graph(n, 2)?), format)?,
                What::Ncomplex => export(&ExportObject::Complex(&neighborhood_complex(&build_graph(n, 2)?)), format)?,
                What::Sphere => export(&ExportObject::Complex(&build_ring_complex(n)?.0), format)?,
                What::M => export(&ExportObject::Complex(&build_m(n)?.0), format)?,
                What::Polytope => export(&ExportObject::Polytope(&realize_ring(n)?), format)?,
            };
            write(&o, &text)?;
            Ok(true)
        }
        Command::Realize { n, o } => {
            let p = realize_ring(n)?;
            write(&o, &p.to_off())?;
            println!("{} vertices, {} facets, convexity margin {:.3e}", p.vertex_count(), p.facets.len(), p.margin);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
