//! Erdős–Rényi and Barabási–Albert generators and seeded corpora of them.
//!
//! A corpus is described by a list of [`GeneratorSpec`]s. Graph `i` of a
//! spec draws its size and parameter from a stream seeded by
//! `derive_seed(master, CORPUS_PARAMS + family, i)` and its edges from
//! `derive_seed(master, GRAPH + family, i)`, so corpora are identical no
//! matter how many worker threads build them.

use std::fmt;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::graph::Graph;
use crate::numfmt::format_real;
use crate::rng::{derive_seed, seeded, stream};

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("attachment count m={m} must satisfy 1 <= m < n={n}")]
    Attachment { m: usize, n: usize },
    #[error("invalid generator spec: {0}")]
    Spec(String),
    #[error("generator spec line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// `G(n, p)`: each of the `n(n-1)/2` pairs is an edge independently with
/// probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, SynthError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SynthError::Probability(p));
    }
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_index_edges(n, edges))
}

/// Preferential attachment grown from `K_m`.
///
/// Each new node links to `m` distinct existing nodes, each drawn with
/// probability proportional to its current degree; repeated picks are
/// rejected and redrawn. The result has exactly `C(m,2) + m(n-m)` edges.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph, SynthError> {
    if m < 1 || m >= n {
        return Err(SynthError::Attachment { m, n });
    }
    let mut rng = seeded(seed);
    let mut edges = Vec::with_capacity(m * (m - 1) / 2 + m * (n - m));
    // Every edge contributes both endpoints, so a uniform pick from `stubs`
    // is a degree-proportional pick of a node.
    let mut stubs: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m {
        for v in u + 1..m {
            edges.push((u, v));
            stubs.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for new in m..n {
        targets.clear();
        while targets.len() < m {
            // Only K_1 (m = 1) starts without stubs; node 0 is the sole choice.
            let t = if stubs.is_empty() {
                rng.random_range(0..new)
            } else {
                stubs[rng.random_range(0..stubs.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((new, t));
            stubs.extend([new, t]);
        }
    }
    Ok(Graph::from_index_edges(n, edges))
}

/// Generator family; also the category label of generated graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    ErdosRenyi,
    BarabasiAlbert,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::ErdosRenyi => "ER",
            Family::BarabasiAlbert => "BA",
        }
    }

    fn stream_offset(self) -> u64 {
        match self {
            Family::ErdosRenyi => 1,
            Family::BarabasiAlbert => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How the edge parameter of each generated graph is drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeParam {
    /// ER probability uniform in `[lo, hi]`.
    Probability { lo: f64, hi: f64 },
    /// ER probability set so the expected average degree `p(n-1)` is uniform
    /// in `[lo, hi]`.
    ExpectedDegree { lo: f64, hi: f64 },
    /// BA attachment count uniform over `lo..=hi`.
    Attachment { lo: usize, hi: usize },
}

/// One family's share of a corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub count: usize,
    /// Node counts are log-uniform over `[min, max]`.
    pub nodes: (usize, usize),
    pub param: EdgeParam,
    pub seed: u64,
}

impl GeneratorSpec {
    /// 50 BA graphs with `n` in `[100, 2000]` and `m` in `2..=10`.
    pub fn default_ba(seed: u64) -> Self {
        Self {
            family: Family::BarabasiAlbert,
            count: 50,
            nodes: (100, 2000),
            param: EdgeParam::Attachment { lo: 2, hi: 10 },
            seed,
        }
    }

    /// 75 ER graphs with `n` in `[100, 2000]` and expected degree in `[4, 50]`.
    pub fn default_er(seed: u64) -> Self {
        Self {
            family: Family::ErdosRenyi,
            count: 75,
            nodes: (100, 2000),
            param: EdgeParam::ExpectedDegree { lo: 4.0, hi: 50.0 },
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: String| Err(SynthError::Spec(msg));
        let (n_lo, n_hi) = self.nodes;
        if n_lo == 0 || n_lo > n_hi {
            return bad(format!(
                "node range [{n_lo}, {n_hi}] must be non-empty and positive"
            ));
        }
        match (self.family, self.param) {
            (Family::ErdosRenyi, EdgeParam::Probability { lo, hi }) => {
                if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                    return bad(format!("probability range [{lo}, {hi}] must lie in [0, 1]"));
                }
            }
            (Family::ErdosRenyi, EdgeParam::ExpectedDegree { lo, hi }) => {
                if !(0.0 <= lo && lo <= hi && hi.is_finite()) {
                    return bad(format!("expected degree range [{lo}, {hi}] is invalid"));
                }
            }
            (Family::BarabasiAlbert, EdgeParam::Attachment { lo, hi }) => {
                if !(1 <= lo && lo <= hi && hi < n_lo) {
                    return bad(format!(
                        "attachment range {lo}..={hi} must satisfy 1 <= m < {n_lo} (smallest n)"
                    ));
                }
            }
            (family, param) => return bad(format!("{param:?} does not apply to {family}")),
        }
        Ok(())
    }
}

/// Default corpus: 50 BA and 75 ER graphs.
pub fn default_corpus_specs(seed: u64) -> Vec<GeneratorSpec> {
    vec![
        GeneratorSpec::default_ba(seed),
        GeneratorSpec::default_er(seed),
    ]
}

/// Realized parameter of one generated graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphParam {
    Probability(f64),
    Attachment(usize),
}

impl fmt::Display for GraphParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphParam::Probability(p) => write!(f, "p={}", format_real(*p)),
            GraphParam::Attachment(m) => write!(f, "m={m}"),
        }
    }
}

/// A generated graph with its label and provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub category: String,
    pub graph: Graph,
    pub nodes: usize,
    pub param: GraphParam,
    pub seed: u64,
}

struct Job {
    name: String,
    family: Family,
    nodes: usize,
    param: GraphParam,
    seed: u64,
}

/// Generates every spec's graphs, in spec order. Names are `<family>_<k>`
/// with `k` counting per family across specs.
pub fn generate_corpus(specs: &[GeneratorSpec]) -> Result<Vec<CorpusEntry>, SynthError> {
    let mut jobs = Vec::new();
    let mut per_family = [0usize; 2];
    for spec in specs {
        spec.validate()?;
        let offset = spec.family.stream_offset();
        for i in 0..spec.count {
            let mut rng = seeded(derive_seed(
                spec.seed,
                stream::CORPUS_PARAMS + offset,
                i as u64,
            ));
            let nodes = log_uniform(&mut rng, spec.nodes);
            let param = match spec.param {
                EdgeParam::Probability { lo, hi } => {
                    GraphParam::Probability(uniform(&mut rng, lo, hi))
                }
                EdgeParam::ExpectedDegree { lo, hi } => {
                    let k = uniform(&mut rng, lo, hi);
                    let p = if nodes < 2 {
                        0.0
                    } else {
                        (k / (nodes - 1) as f64).min(1.0)
                    };
                    GraphParam::Probability(p)
                }
                EdgeParam::Attachment { lo, hi } => {
                    GraphParam::Attachment(rng.random_range(lo..=hi))
                }
            };
            let counter = &mut per_family[offset as usize - 1];
            jobs.push(Job {
                name: format!("{}_{:04}", spec.family.label().to_lowercase(), *counter),
                family: spec.family,
                nodes,
                param,
                seed: derive_seed(spec.seed, stream::GRAPH + offset, i as u64),
            });
            *counter += 1;
        }
    }

    jobs.into_par_iter()
        .map(|job| {
            let graph = match job.param {
                GraphParam::Probability(p) => erdos_renyi(job.nodes, p, job.seed)?,
                GraphParam::Attachment(m) => barabasi_albert(job.nodes, m, job.seed)?,
            };
            Ok(CorpusEntry {
                name: job.name,
                category: job.family.label().to_owned(),
                graph,
                nodes: job.nodes,
                param: job.param,
                seed: job.seed,
            })
        })
        .collect()
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn log_uniform<R: Rng>(rng: &mut R, (lo, hi): (usize, usize)) -> usize {
    if lo == hi {
        return lo;
    }
    let x = uniform(rng, (lo as f64).ln(), (hi as f64).ln()).exp();
    (x.round() as usize).clamp(lo, hi)
}

/// Parses a generator spec file.
///
/// ```text
/// # 50 BA + 75 ER
/// seed = 7
///
/// [BA]
/// count = 50
/// n_min = 100
/// n_max = 2000
/// m_min = 2
/// m_max = 10
///
/// [ER]
/// count = 75
/// n_min = 100
/// n_max = 2000
/// degree_min = 4
/// degree_max = 50
/// ```
///
/// Each `[BA]`/`[ER]` section is one spec. ER sections take either
/// `p_min`/`p_max` or `degree_min`/`degree_max`. A `seed` before the first
/// section is the default for sections without their own; `default_seed`
/// applies when neither is given. Omitted keys take the default-corpus
/// values.
pub fn parse_generator_specs(
    text: &str,
    default_seed: u64,
) -> Result<Vec<GeneratorSpec>, SynthError> {
    struct Section {
        line: usize,
        family: Family,
        keys: Vec<(String, String, usize)>,
    }
    let mut global_seed: Option<u64> = None;
    let mut sections: Vec<Section> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let family = match name.trim().to_ascii_uppercase().as_str() {
                "BA" => Family::BarabasiAlbert,
                "ER" => Family::ErdosRenyi,
                other => {
                    return Err(SynthError::Parse {
                        line,
                        message: format!("unknown section [{other}], expected [BA] or [ER]"),
                    })
                }
            };
            sections.push(Section {
                line,
                family,
                keys: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(SynthError::Parse {
                line,
                message: format!("expected key = value, found {trimmed:?}"),
            });
        };
        let (key, value) = (key.trim().to_owned(), value.trim().to_owned());
        match sections.last_mut() {
            Some(section) => section.keys.push((key, value, line)),
            None if key == "seed" => global_seed = Some(parse_value(&value, line)?),
            None => {
                return Err(SynthError::Parse {
                    line,
                    message: format!("key {key:?} outside a [BA]/[ER] section"),
                })
            }
        }
    }

    let mut specs = Vec::with_capacity(sections.len());
    for section in sections {
        let seed = global_seed.unwrap_or(default_seed);
        let mut spec = match section.family {
            Family::BarabasiAlbert => GeneratorSpec::default_ba(seed),
            Family::ErdosRenyi => GeneratorSpec::default_er(seed),
        };
        let (mut p, mut deg, mut m) = (
            (None::<f64>, None::<f64>),
            (None::<f64>, None::<f64>),
            (None::<usize>, None::<usize>),
        );
        for (key, value, line) in &section.keys {
            let line = *line;
            let allowed = matches!(
                (key.as_str(), section.family),
                ("count" | "n_min" | "n_max" | "seed", _)
                    | (
                        "p_min" | "p_max" | "degree_min" | "degree_max",
                        Family::ErdosRenyi
                    )
                    | ("m_min" | "m_max", Family::BarabasiAlbert)
            );
            if !allowed {
                return Err(SynthError::Parse {
                    line,
                    message: format!("unknown key {key:?} in [{}] section", section.family),
                });
            }
            match key.as_str() {
                "count" => spec.count = parse_value(value, line)?,
                "n_min" => spec.nodes.0 = parse_value(value, line)?,
                "n_max" => spec.nodes.1 = parse_value(value, line)?,
                "seed" => spec.seed = parse_value(value, line)?,
                "p_min" => p.0 = Some(parse_value(value, line)?),
                "p_max" => p.1 = Some(parse_value(value, line)?),
                "degree_min" => deg.0 = Some(parse_value(value, line)?),
                "degree_max" => deg.1 = Some(parse_value(value, line)?),
                "m_min" => m.0 = Some(parse_value(value, line)?),
                "m_max" => m.1 = Some(parse_value(value, line)?),
                _ => unreachable!(),
            }
        }
        let has_p = p.0.is_some() || p.1.is_some();
        let has_deg = deg.0.is_some() || deg.1.is_some();
        if has_p && has_deg {
            return Err(SynthError::Parse {
                line: section.line,
                message: "use either p_min/p_max or degree_min/degree_max, not both".into(),
            });
        }
        spec.param = match spec.param {
            EdgeParam::ExpectedDegree { .. } if has_p => {
                let (lo, hi) = match p {
                    (Some(lo), Some(hi)) => (lo, hi),
                    (Some(x), None) | (None, Some(x)) => (x, x),
                    (None, None) => unreachable!("has_p"),
                };
                EdgeParam::Probability { lo, hi }
            }
            EdgeParam::ExpectedDegree { lo, hi } => EdgeParam::ExpectedDegree {
                lo: deg.0.unwrap_or(lo),
                hi: deg.1.unwrap_or(hi),
            },
            EdgeParam::Attachment { lo, hi } => EdgeParam::Attachment {
                lo: m.0.unwrap_or(lo),
                hi: m.1.unwrap_or(hi),
            },
            other => other,
        };
        spec.validate().map_err(|e| SynthError::Parse {
            line: section.line,
            message: e.to_string(),
        })?;
        specs.push(spec);
    }
    Ok(specs)
}

fn parse_value<T: std::str::FromStr>(value: &str, line: usize) -> Result<T, SynthError> {
    value.parse().map_err(|_| SynthError::Parse {
        line,
        message: format!("invalid value {value:?}"),
    })
}

/// Writes the corpus manifest: `path,name,category,n,m,params,seed`, one row
/// per entry. `n` is the generated node count, `m` the edge count.
pub fn write_corpus_manifest<W: Write>(
    entries: &[CorpusEntry],
    paths: &[String],
    out: W,
) -> Result<(), SynthError> {
    assert_eq!(entries.len(), paths.len(), "one path per corpus entry");
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["path", "name", "category", "n", "m", "params", "seed"])?;
    for (entry, path) in entries.iter().zip(paths) {
        w.write_record([
            path.clone(),
            entry.name.clone(),
            entry.category.clone(),
            entry.nodes.to_string(),
            entry.graph.edge_count().to_string(),
            entry.param.to_string(),
            entry.seed.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
