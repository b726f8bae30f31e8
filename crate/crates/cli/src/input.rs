//! Where a command's graph comes from: a graph file or the built-in pair.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use spectral_twins::graph::{builtin_7_1_graph, combinatorial_laplacian, laplacian, Variant};
use spectral_twins::io::{parse_graph_file, parse_real_list, LoadedGraph};
use spectral_twins::{GeneralizedLaplacian, WeightedGraph};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    #[value(name = "7_1")]
    SevenOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LaplacianKind {
    /// Off-diagonal `-w`, diagonal = the file's potentials (zero by default).
    Generalized,
    /// Off-diagonal `-w`, diagonal = weighted degree; rows sum to zero.
    Combinatorial,
}

#[derive(Debug, Clone, Args)]
pub struct BuiltinArgs {
    /// Use a built-in graph instead of a file.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Weights `a,b,c` of the built-in pair.
    #[arg(long, value_name = "A,B,C", default_value = "1,2,3")]
    pub weights: String,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Graph file (JSON, 1-based vertex ids).
    #[arg(
        value_name = "GRAPH",
        required_unless_present = "builtin",
        conflicts_with = "builtin"
    )]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub builtin: BuiltinArgs,
    /// Which member of the built-in pair.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub variant: u8,
    #[arg(long, value_enum, default_value = "generalized")]
    pub laplacian: LaplacianKind,
}

#[derive(Debug, Clone, Args)]
pub struct PairSource {
    /// Two graph files to compare; omit them and pass `--builtin` to compare
    /// the two members of the built-in pair.
    #[arg(
        value_name = "GRAPH",
        num_args = 2,
        required_unless_present = "builtin",
        conflicts_with = "builtin"
    )]
    pub graphs: Vec<PathBuf>,
    #[command(flatten)]
    pub builtin: BuiltinArgs,
    #[arg(long, value_enum, default_value = "generalized")]
    pub laplacian: LaplacianKind,
}

/// A graph ready for analysis.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: WeightedGraph,
    pub lengths: Option<Vec<f64>>,
    /// `(a, b, c, variant)` when built in.
    pub seven_one: Option<(f64, f64, f64, Variant)>,
    pub echo: Value,
}

impl Loaded {
    pub fn laplacian(&self, kind: LaplacianKind) -> GeneralizedLaplacian {
        match kind {
            LaplacianKind::Generalized => laplacian(&self.graph),
            LaplacianKind::Combinatorial => combinatorial_laplacian(&self.graph),
        }
    }
}

pub fn parse_weights(text: &str) -> Result<(f64, f64, f64), CliError> {
    let w = parse_real_list(text).map_err(|e| CliError::Input(format!("--weights: {e}")))?;
    match w[..] {
        [a, b, c] if a > 0.0 && b > 0.0 && c > 0.0 => Ok((a, b, c)),
        [_, _, _] => Err(CliError::Input("--weights: weights must be strictly positive".into())),
        _ => Err(CliError::Input(format!(
            "--weights: expected three values, got {}",
            w.len()
        ))),
    }
}

pub fn load_file(path: &Path) -> Result<Loaded, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let LoadedGraph { graph, lengths } =
        parse_graph_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let echo = json!({
        "source": "file",
        "path": path.display().to_string(),
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
    });
    Ok(Loaded {
        graph,
        lengths,
        seven_one: None,
        echo,
    })
}

pub fn load_builtin(args: &BuiltinArgs, variant: Variant) -> Result<Loaded, CliError> {
    let (a, b, c) = parse_weights(&args.weights)?;
    let graph = builtin_7_1_graph(a, b, c, variant).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Loaded {
        graph,
        lengths: None,
        seven_one: Some((a, b, c, variant)),
        echo: json!({
            "source": "builtin",
            "builtin": "7_1",
            "variant": variant.number(),
            "weights": [a, b, c],
        }),
    })
}

impl Source {
    pub fn load(&self) -> Result<Loaded, CliError> {
        match (&self.graph, self.builtin.builtin) {
            (Some(path), _) => load_file(path),
            (None, Some(Builtin::SevenOne)) => {
                let variant = Variant::from_number(self.variant).expect("clap checks the range");
                load_builtin(&self.builtin, variant)
            }
            (None, None) => Err(CliError::Input("give a graph file or --builtin".into())),
        }
    }
}

impl PairSource {
    pub fn load(&self) -> Result<(Loaded, Loaded), CliError> {
        match (&self.graphs[..], self.builtin.builtin) {
            ([first, second], _) => Ok((load_file(first)?, load_file(second)?)),
            ([], Some(Builtin::SevenOne)) => Ok((
                load_builtin(&self.builtin, Variant::First)?,
                load_builtin(&self.builtin, Variant::Second)?,
            )),
            _ => Err(CliError::Input("give two graph files or --builtin".into())),
        }
    }
}
