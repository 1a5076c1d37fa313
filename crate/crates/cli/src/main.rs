//! `lincolim`: batch verification of bundles of finite linear categories,
//! sites and filtered colimits.

mod bundle;
mod commands;
mod node;
mod render;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lincolim::exactalg::{Fp, Scalar};
use lincolim::{Bounds, Q};
use serde_json::Value;

use bundle::{field_of, read_document, Field};
use report::Report;

#[derive(Parser)]
#[command(name = "lincolim", version, about = "Verify linear categories, sites and filtered colimits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,

    /// Largest sieve lattice per object.
    #[arg(long, global = true)]
    max_sieves: Option<usize>,

    /// Largest candidate space for functor searches.
    #[arg(long, global = true)]
    max_functors: Option<u128>,

    /// Largest vector space that may be enumerated.
    #[arg(long, global = true)]
    max_vectors: Option<u128>,

    /// Closure rounds for diagrams of presentations.
    #[arg(long, global = true)]
    closure_depth: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check category, functor and presheaf laws.
    Validate { bundle: PathBuf },
    /// Build the colimit of a pseudofunctor.
    Colimit {
        bundle: PathBuf,
        #[arg(long)]
        pseudofunctor: Option<String>,
    },
    /// Check the topology axioms for a cover system or topology.
    CheckTopology {
        bundle: PathBuf,
        #[arg(long)]
        cover_system: Option<String>,
        #[arg(long)]
        topology: Option<String>,
    },
    /// The least topology containing a cover system.
    GenerateTopology {
        bundle: PathBuf,
        #[arg(long)]
        cover_system: Option<String>,
    },
    /// The canonical topology of a category.
    Canonical {
        bundle: PathBuf,
        #[arg(long)]
        category: Option<String>,
    },
    /// Check whether a presheaf is a sheaf.
    CheckSheaf {
        bundle: PathBuf,
        #[arg(long)]
        presheaf: Option<String>,
        #[arg(long)]
        topology: Option<String>,
    },
    /// Check whether a functor between sites is LC.
    CheckLc {
        bundle: PathBuf,
        #[arg(long)]
        functor: Option<String>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// The tensor product of two sites.
    TensorSite {
        bundle: PathBuf,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
    },
    /// Check that the tensor product of two LC functors is LC.
    CheckTensorLc {
        bundle: PathBuf,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        f_source: Option<String>,
        #[arg(long)]
        f_target: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        g_source: Option<String>,
        #[arg(long)]
        g_target: Option<String>,
    },
    /// Compare a chain of full subcategories' colimit with the category.
    UnionColimit {
        bundle: PathBuf,
        #[arg(long)]
        chain: Option<String>,
    },
    /// Rebuild a category as the colimit of its LC presentations.
    SiteColimit {
        bundle: PathBuf,
        #[arg(long)]
        ambient: Option<String>,
        /// Comma-separated presentation names; all over the ambient by default.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<String>>,
    },
    /// Check the universal property of a colimit against a target category.
    VerifyUniversal {
        bundle: PathBuf,
        #[arg(long)]
        pseudofunctor: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
}

impl Command {
    fn bundle(&self) -> &PathBuf {
        match self {
            Command::Validate { bundle }
            | Command::Colimit { bundle, .. }
            | Command::CheckTopology { bundle, .. }
            | Command::GenerateTopology { bundle, .. }
            | Command::Canonical { bundle, .. }
            | Command::CheckSheaf { bundle, .. }
            | Command::CheckLc { bundle, .. }
            | Command::TensorSite { bundle, .. }
            | Command::CheckTensorLc { bundle, .. }
            | Command::UnionColimit { bundle, .. }
            | Command::SiteColimit { bundle, .. }
            | Command::VerifyUniversal { bundle, .. } => bundle,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Colimit { .. } => "colimit",
            Command::CheckTopology { .. } => "check-topology",
            Command::GenerateTopology { .. } => "generate-topology",
            Command::Canonical { .. } => "canonical",
            Command::CheckSheaf { .. } => "check-sheaf",
            Command::CheckLc { .. } => "check-lc",
            Command::TensorSite { .. } => "tensor-site",
            Command::CheckTensorLc { .. } => "check-tensor-lc",
            Command::UnionColimit { .. } => "union-colimit",
            Command::SiteColimit { .. } => "site-colimit",
            Command::VerifyUniversal { .. } => "verify-universal",
        }
    }
}

impl Cli {
    fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_vectors: self.max_vectors.unwrap_or(d.max_vectors),
            max_sieves: self.max_sieves.unwrap_or(d.max_sieves),
            max_functors: self.max_functors.unwrap_or(d.max_functors),
            closure_depth: self.closure_depth.unwrap_or(d.closure_depth),
        }
    }
}

fn dispatch(field: Field, doc: &Value, cli: &Cli, r: &mut Report, t: &mut BTreeMap<String, f64>) -> Result<(), String> {
    fn go<K: Scalar>(doc: &Value, cli: &Cli, r: &mut Report, t: &mut BTreeMap<String, f64>) -> Result<(), String> {
        commands::execute::<K>(doc, &cli.command, &cli.bounds(), r, t)
    }
    match field {
        Field::Rational => go::<Q>(doc, cli, r, t),
        Field::Prime(2) => go::<Fp<2>>(doc, cli, r, t),
        Field::Prime(3) => go::<Fp<3>>(doc, cli, r, t),
        Field::Prime(5) => go::<Fp<5>>(doc, cli, r, t),
        Field::Prime(7) => go::<Fp<7>>(doc, cli, r, t),
        Field::Prime(11) => go::<Fp<11>>(doc, cli, r, t),
        Field::Prime(13) => go::<Fp<13>>(doc, cli, r, t),
        Field::Prime(17) => go::<Fp<17>>(doc, cli, r, t),
        Field::Prime(19) => go::<Fp<19>>(doc, cli, r, t),
        Field::Prime(23) => go::<Fp<23>>(doc, cli, r, t),
        Field::Prime(29) => go::<Fp<29>>(doc, cli, r, t),
        Field::Prime(31) => go::<Fp<31>>(doc, cli, r, t),
        Field::Prime(p) => Err(format!("no compiled field for p = {p}")),
    }
}

fn main() {
    let cli = Cli::parse();
    let mut report = Report::new(cli.command.name());
    let mut timings = BTreeMap::new();
    let outcome = read_document(cli.command.bundle())
        .and_then(|doc| field_of(&doc).map(|f| (doc, f)))
        .map_err(|e| e.to_string())
        .and_then(|(doc, field)| dispatch(field, &doc, &cli, &mut report, &mut timings));
    if let Err(e) = outcome {
        eprintln!("lincolim: {e}");
        report.fail_with(e);
    }
    if cli.timings {
        report.timings_ms = Some(timings);
    }
    let verdict = report.finish();
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    std::process::exit(verdict.exit_code());
}
