use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperpath::molgraph::Element;
use hyperpath::rewrite::RightPredicate;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hyperpath", version, about = "Reaction-network expansion and pathway search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow a reaction network from seed molecules and rewrite rules.
    Expand(ExpandArgs),
    /// Check a barrier table against a network and report derived weights.
    AnnotateCheck(AnnotateArgs),
    /// Find the k best pathways, or the LP relaxation with --relax.
    Query(QueryArgs),
    /// Write the pathway ILP in CPLEX LP format.
    ExportLp(ExportLpArgs),
    /// Render a network, optionally highlighting one ranked solution.
    ExportDot(ExportDotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Expand(_) => "expand",
            Command::AnnotateCheck(_) => "annotate-check",
            Command::Query(_) => "query",
            Command::ExportLp(_) => "export-lp",
            Command::ExportDot(_) => "export-dot",
        }
    }
}

fn parse_filter(s: &str) -> Result<RightPredicate, String> {
    s.parse()
}

/// `C=2,N=4,O=4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ElementLimits(pub BTreeMap<String, u32>);

impl ElementLimits {
    pub fn to_elements(&self) -> BTreeMap<Element, u32> {
        self.0
            .iter()
            .map(|(s, n)| (s.parse().expect("validated while parsing"), *n))
            .collect()
    }
}

fn parse_limits(s: &str) -> Result<ElementLimits, String> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (sym, n) = part
            .split_once('=')
            .ok_or_else(|| format!("expected ELEMENT=COUNT, got `{part}`"))?;
        let e: Element = sym.trim().parse().map_err(|e: hyperpath::molgraph::UnknownElement| e.to_string())?;
        let n: u32 = n.trim().parse().map_err(|_| format!("invalid count `{n}`"))?;
        out.insert(e.symbol().to_string(), n);
    }
    Ok(ElementLimits(out))
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    /// Seed molecule file (MGF); repeat for several files.
    #[arg(long = "seeds", required = true)]
    pub seeds: Vec<PathBuf>,
    /// Rule file.
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub max_iterations: usize,
    /// Per-molecule element caps, e.g. `C=2,N=4,O=4`.
    #[arg(long, value_parser = parse_limits)]
    pub max_elements: Option<ElementLimits>,
    /// Product filter: `no-rings-le=<k>` or `no-cumulated`. Repeatable.
    #[arg(long = "filter", value_parser = parse_filter)]
    #[serde(serialize_with = "display_list")]
    pub filters: Vec<RightPredicate>,
    /// Worker threads for match enumeration.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Network JSON output.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional Graphviz rendering of the network.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn display_list<S: serde::Serializer>(items: &[RightPredicate], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(items.iter().map(ToString::to_string))
}

#[derive(Debug, Args, Serialize)]
pub struct ThermoArgs {
    /// Temperature in kelvin.
    #[arg(long = "temperature-k", default_value_t = hyperpath::kinetics::DEFAULT_TEMPERATURE_K)]
    pub temperature_k: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct AnnotateArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// CSV with header `edge_id,barrier_kj_per_mol`.
    #[arg(long)]
    pub barriers: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub thermo: ThermoArgs,
    /// Report JSON output.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Barrier CSV; required unless the query maximizes outflow.
    #[arg(long)]
    pub barriers: Option<PathBuf>,
    /// Query JSON.
    #[arg(long)]
    pub query: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub thermo: ThermoArgs,
    /// Overrides the query's flow cap.
    #[arg(long)]
    pub flow_cap: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct QueryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Number of pathways to enumerate.
    #[arg(short = 'k', default_value_t = 1)]
    pub k: usize,
    /// Solve the LP relaxation instead.
    #[arg(long)]
    pub relax: bool,
    /// Branch-and-bound node budget per solve.
    #[arg(long, env = "HYPERPATH_NODE_LIMIT", default_value_t = hyperpath::solve::DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    /// Solutions JSON output.
    #[arg(long)]
    pub out: PathBuf,
    /// Directory for one DOT file per solution.
    #[arg(long)]
    pub dot_dir: Option<PathBuf>,
    /// Energy-profile CSV (cumulative barriers along each pathway).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExportLpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExportDotArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Solutions JSON written by `query`.
    #[arg(long)]
    pub solutions: Option<PathBuf>,
    /// Which ranked solution to highlight.
    #[arg(long, default_value_t = 1, requires = "solutions")]
    pub rank: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}
