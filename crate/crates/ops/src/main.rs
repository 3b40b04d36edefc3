use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use nabla_core::fincat::validate_category;
use nabla_core::multicat::FinMulticategory;
use nabla_core::operators::{wreath_family, OperatorBase};
use nabla_core::{GroupOperad, Report, Symmetric, Trivial};
use nabla_ops::defs::parse_multicat_upto;
use nabla_ops::{export_dot, jobs_from_env, run_suite, OperadName, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "nabla-ops", version, about = "Exhaustive checks over truncated interval categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and print one CHECK line per check.
    Verify {
        /// crossed, rst, closure, quotal, homs, double, compare, operator, roundtrip, segal or agreement
        suite: Suite,
        #[arg(long, default_value = "symmetric")]
        operad: OperadName,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        multicat: Option<PathBuf>,
        #[arg(long)]
        monoid: Option<PathBuf>,
    },
    /// Build a category and write it as a DOT digraph.
    Build {
        #[command(subcommand)]
        what: Build,
    },
}

#[derive(Subcommand)]
enum Build {
    /// A wreath category of a multicategory over the chosen base.
    Wreath {
        #[arg(long)]
        multicat: PathBuf,
        #[arg(long, default_value = "symmetric")]
        operad: OperadName,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "E")]
    E,
    #[value(name = "tildeE")]
    TildeE,
    #[value(name = "G")]
    G,
    #[value(name = "tildeG")]
    TildeG,
}

fn emit(reports: &[Report]) -> ExitCode {
    let mut out = std::io::stdout().lock();
    for r in reports {
        let _ = writeln!(out, "{r}");
    }
    let _ = out.flush();
    if reports.iter().all(Report::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn build_wreath<G: GroupOperad + 'static>(g: Arc<G>, m: Arc<FinMulticategory>, variant: Variant, n: usize, dot: &Path) -> ExitCode {
    let built = OperatorBase::new(&g, n).and_then(|base| wreath_family(&m, &base));
    let fam = match built {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let w = match variant {
        Variant::E => &fam.e,
        Variant::TildeE => &fam.tilde_e,
        Variant::G => &fam.g,
        Variant::TildeG => &fam.tilde_g,
    };
    if let Err(e) = export_dot(&w.cat, dot) {
        return usage(format!("{}: {e}", dot.display()));
    }
    let r = validate_category(&w.cat);
    let note = format!("objects={} morphisms={} dot={}", w.cat.object_count(), w.cat.morphism_count(), dot.display());
    emit(&[Report { id: format!("build-{}", w.cat.name()), level: n, ..r }.with_note(note)])
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs_from_env() {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    pool.install(|| match cli.command {
        Command::Verify { suite, operad, n_max, multicat, monoid } => {
            match run_suite(&SuiteConfig { suite, operad, n_max, multicat, monoid }) {
                Ok(reports) => emit(&reports),
                Err(e) => usage(e),
            }
        }
        Command::Build { what: Build::Wreath { multicat, operad, variant, n_max, dot } } => {
            let m = match parse_multicat_upto(&multicat, Some(n_max)) {
                Ok(d) => d.multicat,
                Err(e) => return usage(e),
            };
            match operad {
                OperadName::Symmetric => build_wreath(Arc::new(Symmetric::new(n_max)), m, variant, n_max, &dot),
                OperadName::Trivial => build_wreath(Arc::new(Trivial::new(n_max)), m, variant, n_max, &dot),
            }
        }
    })
}
