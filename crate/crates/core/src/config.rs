//! JSON run configuration for the `qgwalk` binary.
//!
//! Vertices are 1-based. Arcs and edges are written as `"(i,j)"` keys.
//! Complex numbers are `[re, im]` pairs. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::coins::{grover_coins, quantum_graph_coins, szegedy_coins, Lambda, QuantumGraphParams, TransitionMatrix};
use crate::error::{Error, Result};
use crate::graph::{Arc, ArcSpace, Graph, Partition};
use crate::linalg::ComplexMatrix;
use crate::operator::{CoinSet, WalkKind};
use crate::quantum_graph::ScanOptions;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSpec,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub walk: Option<WalkSpec>,
    #[serde(default)]
    pub quantum_graph: Option<QuantumGraphSpec>,
    #[serde(default)]
    pub evolve: Option<EvolveSpec>,
    #[serde(default)]
    pub verify: Option<VerifySpec>,
    #[serde(default)]
    pub szegedy: Option<SzegedySpec>,
    #[serde(default)]
    pub scan: Option<ScanSpec>,
    #[serde(default)]
    pub eigenfunction: Option<EigenfunctionSpec>,
    #[serde(default)]
    pub partitions: Option<PartitionsSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
pub enum KindSpec {
    G,
    A,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PartitionSpec {
    /// `"flip-flop"` or `"random"`
    Named(String),
    Explicit(ExplicitPartition),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPartition {
    /// `"(i,j)" → f_π(i,j)`
    pub successors: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoinSpec {
    Grover {},
    Identity {},
    Random {},
    Szegedy { transition: TransitionSpec },
    QuantumGraph { k: f64 },
    /// Vertex label → rows of `[re, im]` entries.
    Explicit { matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TransitionSpec {
    /// `"uniform"`
    Named(String),
    PerArc(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    pub kind: KindSpec,
    pub partition: PartitionSpec,
    pub coin: CoinSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EdgeValues {
    Uniform(f64),
    /// `"(i,j)"` in either orientation; potentials flip sign for `i > j`.
    PerEdge(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LambdaValue {
    Finite(f64),
    /// `"inf"`
    Named(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LambdaValues {
    Uniform(LambdaValue),
    PerVertex(BTreeMap<String, LambdaValue>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumGraphSpec {
    pub lengths: EdgeValues,
    #[serde(default)]
    pub lambdas: Option<LambdaValues>,
    #[serde(default)]
    pub potentials: Option<EdgeValues>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default)]
    pub arc: Option<(usize, usize)>,
    #[serde(default)]
    pub vertex: Option<usize>,
    #[serde(default)]
    pub phi: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSpec {
    pub steps: usize,
    pub initial: InitialSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default = "default_dual_steps")]
    pub dual_steps: u32,
    /// Second partition for the change-of-partition identity; random when absent.
    #[serde(default)]
    pub other_partition: Option<PartitionSpec>,
}

fn default_dual_steps() -> u32 {
    5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SzegedySpec {
    pub transition: TransitionSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub k_min: f64,
    pub k_max: f64,
    #[serde(default)]
    pub points_per_unit: Option<usize>,
    #[serde(default)]
    pub refine_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenfunctionSpec {
    #[serde(default)]
    pub k: Option<f64>,
    /// A roots CSV written by `qg-scan`, read when `k` is absent.
    #[serde(default)]
    pub roots_file: Option<String>,
    #[serde(default)]
    pub root_index: usize,
    #[serde(default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionsSpec {
    #[serde(default)]
    pub cap: Option<u128>,
    /// Only count, do not list.
    #[serde(default)]
    pub count_only: bool,
}

pub fn config_error(field: &str, message: impl ToString) -> Error {
    Error::Config { field: field.to_string(), message: message.to_string() }
}

fn in_field<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => config_error(field, other),
    })
}

/// Parses `"(i,j)"`, tolerating whitespace.
pub fn parse_arc(key: &str) -> Option<Arc> {
    let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn arc_key(field: &str, key: &str) -> Result<Arc> {
    parse_arc(key).ok_or_else(|| config_error(field, format!("`{key}` is not of the form \"(i,j)\"")))
}

fn vertex_key(field: &str, key: &str, g: &Graph) -> Result<usize> {
    match key.trim().parse::<usize>() {
        Ok(v) if (1..=g.vertex_count()).contains(&v) => Ok(v),
        _ => Err(config_error(field, format!("`{key}` is not a vertex label"))),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error("<root>", e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error("--config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn build_graph(&self) -> Result<Graph> {
        in_field("graph", Graph::new(self.graph.vertices, &self.graph.edges))
    }

    pub fn rng(&self, seed_override: Option<u64>) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed_override.or(self.seed).unwrap_or(0))
    }

    pub fn walk(&self) -> Result<&WalkSpec> {
        self.walk.as_ref().ok_or_else(|| config_error("walk", "section is required"))
    }

    pub fn quantum_graph_params(&self, g: &Graph) -> Result<QuantumGraphParams> {
        let spec = self.quantum_graph.as_ref().ok_or_else(|| config_error("quantum_graph", "section is required"))?;
        spec.build(g)
    }
}

impl KindSpec {
    pub fn kind(self) -> WalkKind {
        match self {
            KindSpec::G => WalkKind::G,
            KindSpec::A => WalkKind::A,
        }
    }
}

impl PartitionSpec {
    pub fn build(&self, field: &str, space: &ArcSpace, rng: &mut ChaCha8Rng) -> Result<Partition> {
        match self {
            PartitionSpec::Named(name) if name == "flip-flop" => Ok(Partition::flip_flop(space)),
            PartitionSpec::Named(name) if name == "random" => Ok(Partition::random(space, rng)),
            PartitionSpec::Named(other) => {
                Err(config_error(field, format!("unknown partition `{other}`; use \"flip-flop\", \"random\" or a successor map")))
            }
            PartitionSpec::Explicit(e) => {
                let field = format!("{field}.successors");
                let mut map = BTreeMap::new();
                for (key, &f) in &e.successors {
                    map.insert(arc_key(&field, key)?, f);
                }
                in_field(&field, Partition::from_map(space, &map))
            }
        }
    }
}

impl TransitionSpec {
    pub fn build(&self, field: &str, space: &ArcSpace) -> Result<TransitionMatrix> {
        match self {
            TransitionSpec::Named(n) if n == "uniform" => Ok(TransitionMatrix::uniform(space)),
            TransitionSpec::Named(other) => {
                Err(config_error(field, format!("unknown transition `{other}`; use \"uniform\" or a per-arc map")))
            }
            TransitionSpec::PerArc(map) => {
                let mut probs = BTreeMap::new();
                for (key, &p) in map {
                    probs.insert(arc_key(field, key)?, p);
                }
                in_field(field, TransitionMatrix::from_map(space, &probs))
            }
        }
    }
}

impl CoinSpec {
    pub fn build(&self, space: &ArcSpace, q: Option<&QuantumGraphParams>, rng: &mut ChaCha8Rng) -> Result<CoinSet> {
        let field = "walk.coin";
        match self {
            CoinSpec::Grover {} => Ok(grover_coins(space)),
            CoinSpec::Identity {} => Ok(CoinSet::identity(space)),
            CoinSpec::Random {} => Ok(CoinSet::random(space, rng)),
            CoinSpec::Szegedy { transition } => {
                Ok(szegedy_coins(space, &transition.build("walk.coin.transition", space)?))
            }
            CoinSpec::QuantumGraph { k } => {
                let q = q.ok_or_else(|| config_error("quantum_graph", "required by the quantum-graph coin"))?;
                in_field("walk.coin.k", quantum_graph_coins(space, q, *k))
            }
            CoinSpec::Explicit { matrices } => {
                let g = space.graph();
                let mut coins: Vec<Option<ComplexMatrix>> = vec![None; g.vertex_count()];
                for (key, rows) in matrices {
                    let j = vertex_key("walk.coin.matrices", key, g)?;
                    let d = g.degree(j);
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return Err(config_error(
                            &format!("walk.coin.matrices.{j}"),
                            format!("expected a {d}x{d} matrix"),
                        ));
                    }
                    coins[j - 1] =
                        Some(ComplexMatrix::from_fn(d, d, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])));
                }
                let coins = coins
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| c.ok_or_else(|| config_error(field, format!("no matrix for vertex {}", i + 1))))
                    .collect::<Result<Vec<_>>>()?;
                in_field(field, CoinSet::new(space, coins))
            }
        }
    }
}

impl EdgeValues {
    fn build(&self, field: &str, g: &Graph, oriented: bool) -> Result<Vec<f64>> {
        match self {
            EdgeValues::Uniform(x) => Ok(vec![*x; g.edge_count()]),
            EdgeValues::PerEdge(map) => {
                let mut out = vec![None; g.edge_count()];
                for (key, &x) in map {
                    let (i, j) = arc_key(field, key)?;
                    let e = g
                        .edge_index(i, j)
                        .ok_or_else(|| config_error(field, format!("({i},{j}) is not an edge")))?;
                    if out[e].is_some() {
                        return Err(config_error(field, format!("edge ({i},{j}) given twice")));
                    }
                    out[e] = Some(if oriented && i > j { -x } else { x });
                }
                out.into_iter()
                    .zip(g.edges())
                    .map(|(x, &(i, j))| x.ok_or_else(|| config_error(field, format!("no value for edge ({i},{j})"))))
                    .collect()
            }
        }
    }
}

impl LambdaValue {
    fn build(&self, field: &str) -> Result<Lambda> {
        match self {
            LambdaValue::Finite(x) => Ok(Lambda::Finite(*x)),
            LambdaValue::Named(s) if s == "inf" => Ok(Lambda::Dirichlet),
            LambdaValue::Named(s) => Err(config_error(field, format!("`{s}` is neither a number nor \"inf\""))),
        }
    }
}

impl QuantumGraphSpec {
    pub fn build(&self, g: &Graph) -> Result<QuantumGraphParams> {
        let lengths = self.lengths.build("quantum_graph.lengths", g, false)?;
        let potentials = match &self.potentials {
            Some(p) => p.build("quantum_graph.potentials", g, true)?,
            None => vec![0.0; g.edge_count()],
        };
        let field = "quantum_graph.lambdas";
        let lambdas = match &self.lambdas {
            None => vec![Lambda::NEUMANN; g.vertex_count()],
            Some(LambdaValues::Uniform(v)) => vec![v.build(field)?; g.vertex_count()],
            Some(LambdaValues::PerVertex(map)) => {
                let mut out = vec![None; g.vertex_count()];
                for (key, v) in map {
                    out[vertex_key(field, key, g)? - 1] = Some(v.build(field)?);
                }
                out.into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| config_error(field, format!("no value for vertex {}", i + 1))))
                    .collect::<Result<_>>()?
            }
        };
        in_field("quantum_graph", QuantumGraphParams::new(g, lengths, lambdas, potentials))
    }
}

impl ScanSpec {
    pub fn options(&self) -> ScanOptions {
        let mut o = ScanOptions::new(self.k_min, self.k_max);
        if let Some(p) = self.points_per_unit {
            o.points_per_unit = p;
        }
        if let Some(t) = self.refine_tol {
            o.refine_tol = t;
        }
        o
    }
}
