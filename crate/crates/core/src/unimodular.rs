//! Unimodularity of design matrices: by maximal minors, by Graver bases, and
//! by the combinatorial classification with certificates.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graver::{find_non_unit_graver_vector, graver_oracle_with, OracleConfig};
use crate::lattice::{determinant, independent_rows};
use crate::matrix::{DesignMatrix, IntMatrix};
use crate::minor::{embed_as_minor, MinorEmbedding};
use crate::nuclear::{check_certificate, weighted_decompose, NuclearCertificate};
use crate::pair::HMPair;
use crate::vector::SignedVector;

/// Column limit for the determinant test.
pub const MINOR_TEST_MAX_COLUMNS: usize = 12;

/// One forbidden pair. `item` numbers the weighted list, where item 1 stands
/// for every binary complex that is not nuclear.
#[derive(Clone, Debug)]
pub struct ForbiddenPair {
    pub id: usize,
    pub item: u32,
    pub name: String,
    pub pair: HMPair,
}

fn entry(id: usize, item: u32, name: &str, ground: &str, facets: &str, weights: &[u64]) -> ForbiddenPair {
    ForbiddenPair {
        id,
        item,
        name: name.to_string(),
        pair: HMPair::parse(ground, facets, weights).expect("catalog entry"),
    }
}

/// Boundary of the `k`-simplex on `1..=k+1` plus the isolated vertex `k+2`.
fn boundary_plus_point(k: usize) -> HMPair {
    let labels: Vec<String> = (1..=k + 2).map(|i| i.to_string()).collect();
    let simplex = &labels[..=k];
    let mut facets: Vec<Vec<String>> = (0..=k)
        .map(|skip| {
            simplex
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect();
    facets.push(vec![labels[k + 1].clone()]);
    let c = SimplicialComplex::new(&labels, &facets).expect("catalog entry");
    HMPair::binary(c)
}

/// The fixed catalog followed by the boundary-plus-point family for every
/// size up to `max_vertices` (ids of earlier entries never change).
pub fn forbidden_catalog(max_vertices: usize) -> Vec<ForbiddenPair> {
    let two = |n: usize| vec![2u64; n];
    let mut c = vec![
        entry(0, 1, "octahedron boundary", "1 2 3 4 5 6", "135 136 145 146 235 236 245 246", &two(6)),
        entry(1, 1, "dual of the octahedron boundary", "1 2 3 4 5 6", "3456 1256 1234", &two(6)),
        entry(2, 1, "path on four vertices", "1 2 3 4", "12 23 34", &two(4)),
        entry(3, 1, "five-vertex complex {12,15,234,345}", "1 2 3 4 5", "12 15 234 345", &two(5)),
        entry(4, 1, "five-vertex complex {134,235,245}", "1 2 3 4 5", "134 235 245", &two(5)),
        entry(5, 1, "five-vertex complex {12,235,34,145}", "1 2 3 4 5", "12 235 34 145", &two(5)),
        entry(6, 2, "triangle with three states everywhere", "1 2 3", "12 23 13", &[3, 3, 3]),
        entry(7, 3, "Lawrence lift of two edges, one ternary vertex", "1 2 3 4 5", "125 345 1234", &[2, 2, 2, 2, 3]),
        entry(8, 4, "Lawrence lift of an edge and a point, two ternary vertices", "1 2 3 4", "124 34 123", &[2, 2, 3, 3]),
        entry(9, 5, "four-cycle with one ternary vertex", "1 2 3 4", "12 23 34 14", &[2, 2, 2, 3]),
        entry(10, 6, "Lawrence lift over a ghost, four states on the Lawrence vertex", "1 2 3 4", "12 13 234", &[4, 2, 2, 2]),
        entry(11, 7, "Lawrence lift of the four-cycle, one ternary vertex", "1 2 3 4 5", "1234 125 235 345 145", &[2, 2, 2, 2, 3]),
        entry(12, 8, "two ternary Lawrence vertices over a ghost", "1 2 3 4 5", "1234 1235 145 245", &[2, 2, 2, 3, 3]),
    ];
    for k in 1..=max_vertices.saturating_sub(2).max(1) {
        let id = c.len();
        c.push(ForbiddenPair {
            id,
            item: 1,
            name: format!("boundary of the {k}-simplex plus an isolated vertex"),
            pair: boundary_plus_point(k),
        });
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub forbidden_id: usize,
    pub item: u32,
    pub name: String,
    #[serde(flatten)]
    pub embedding: MinorEmbedding,
}

impl MinorWitness {
    /// Re-applies the reduction and compares with the catalog entry.
    pub fn validates(&self, pair: &HMPair) -> bool {
        forbidden_catalog(pair.len().max(self.forbidden_id))
            .into_iter()
            .find(|e| e.id == self.forbidden_id)
            .is_some_and(|e| self.embedding.validates(pair, &e.pair))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Unimodular { certificate: NuclearCertificate },
    NotUnimodular { witness: MinorWitness },
}

impl Verdict {
    pub fn is_unimodular(&self) -> bool {
        matches!(self, Verdict::Unimodular { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// First catalog entry that is a minor of `pair`.
pub fn find_forbidden_minor(pair: &HMPair) -> Option<MinorWitness> {
    forbidden_catalog(pair.len()).into_iter().find_map(|e| {
        embed_as_minor(pair, &e.pair).map(|embedding| MinorWitness {
            forbidden_id: e.id,
            item: e.item,
            name: e.name.clone(),
            embedding,
        })
    })
}

/// Decides unimodularity of a pair, returning either a construction that
/// satisfies the weight conditions or a forbidden minor.
pub fn classify(pair: &HMPair) -> Result<Verdict> {
    if let Some(certificate) = weighted_decompose(pair) {
        check_certificate(&certificate, pair.complex())?;
        return Ok(Verdict::Unimodular { certificate });
    }
    match find_forbidden_minor(pair) {
        Some(witness) => Ok(Verdict::NotUnimodular { witness }),
        None => Err(Error::Internal(format!(
            "{pair}: neither a construction nor a forbidden minor was found"
        ))),
    }
}

/// Definition by maximal minors: after restricting to a maximal set of
/// independent rows, all nonzero maximal minors share one absolute value.
pub fn is_unimodular_by_minors(a: &IntMatrix) -> Result<bool> {
    is_unimodular_by_minors_with(a, MINOR_TEST_MAX_COLUMNS)
}

pub fn is_unimodular_by_minors_with(a: &IntMatrix, max_columns: usize) -> Result<bool> {
    if a.ncols() > max_columns {
        return Err(Error::GuardExceeded {
            what: "minor test columns",
            limit: max_columns,
            actual: a.ncols(),
        });
    }
    let rows = independent_rows(a);
    if rows.is_empty() {
        return Err(Error::InvalidArgument("zero matrix".into()));
    }
    let b = a.select_rows(&rows);
    let r = rows.len();
    let mut value = None;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let d = determinant(&b.select_columns(&cols))?;
        let d = num_traits::Signed::abs(&d);
        if d != num_bigint::BigInt::from(0) {
            match &value {
                None => value = Some(d),
                Some(v) if *v != d => return Ok(false),
                _ => {}
            }
        }
        // next r-subset in lexicographic order
        let n = a.ncols();
        let Some(i) = (0..r).rev().find(|&i| cols[i] < n - r + i) else {
            break;
        };
        cols[i] += 1;
        for j in i + 1..r {
            cols[j] = cols[j - 1] + 1;
        }
    }
    Ok(true)
}

/// Definition by Graver bases: every Graver element has entries in
/// `{0, ±1}`.
pub fn is_unimodular_by_graver(a: &IntMatrix, cfg: &OracleConfig) -> Result<bool> {
    Ok(find_non_unit_graver_vector(a, cfg)?.is_none())
}

/// Sampling budget for [`certify_nonunimodular_by_submatrix`].
#[derive(Clone, Debug)]
pub struct SubmatrixBudget {
    pub samples: usize,
    pub columns: usize,
}

impl Default for SubmatrixBudget {
    fn default() -> Self {
        SubmatrixBudget {
            samples: 200,
            columns: 56,
        }
    }
}

/// Looks for a Graver element with an entry of absolute value at least two
/// among the Graver bases of random column subsets. A Graver element of a
/// column subset, padded with zeros, is a Graver element of the full matrix.
pub fn certify_nonunimodular_by_submatrix(
    pair: &HMPair,
    seed: u64,
    budget: &SubmatrixBudget,
) -> Result<Option<SignedVector>> {
    let a = DesignMatrix::build(pair).matrix;
    let n = a.ncols();
    let k = budget.columns.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = OracleConfig::default();
    let samples = if k == n { budget.samples.min(1) } else { budget.samples };
    for _ in 0..samples {
        let mut cols = sample(&mut rng, n, k).into_vec();
        cols.sort_unstable();
        let sub = a.select_columns(&cols);
        let g = match graver_oracle_with(&sub, &cfg) {
            Ok(g) => g,
            Err(Error::GuardExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        let found = g.iter().find(|v| !v.is_unit()).map(|v| v.remap(|i| cols[i]));
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Maximal cliques of a graph on `0..n`, as bitmasks.
fn maximal_cliques(n: usize, adj: &[u64]) -> Vec<u64> {
    fn bk(r: u64, mut p: u64, mut x: u64, adj: &[u64], out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            bk(r | (1 << v), p & adj[v], x & adj[v], adj, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    bk(0, all, 0, adj, &mut out);
    out
}

fn adjacency(labels: &[String], edges: &[(String, String)]) -> Result<Vec<u64>> {
    let idx = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::UnknownVertex(l.to_string()))
    };
    let mut adj = vec![0u64; labels.len()];
    for (a, b) in edges {
        let (i, j) = (idx(a)?, idx(b)?);
        if i == j {
            return Err(Error::InvalidArgument(format!("loop at {a}")));
        }
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Ok(adj)
}

/// The complex whose faces are the cliques of the graph.
pub fn clique_complex(labels: &[String], edges: &[(String, String)]) -> Result<SimplicialComplex> {
    let adj = adjacency(labels, edges)?;
    let facets: Vec<Vec<String>> = maximal_cliques(labels.len(), &adj)
        .into_iter()
        .map(|m| (0..labels.len()).filter(|i| m & (1 << i) != 0).map(|i| labels[i].clone()).collect())
        .collect();
    SimplicialComplex::new(labels, &facets)
}

/// Unimodularity of a graphical model straight from the graph: complete
/// graphs, two cliques glued along a common clique, and four-cycles with
/// any number of vertices joined to everything (binary on the cycle).
/// The verdict itself comes from [`classify`]; this function asserts that
/// the graph rule agrees with it.
pub fn classify_clique_complex(labels: &[String], edges: &[(String, String)], weights: &[u64]) -> Result<Verdict> {
    let predicted = clique_rule(labels, edges, weights)?;
    let pair = HMPair::new(clique_complex(labels, edges)?, weights.to_vec())?;
    let verdict = classify(&pair)?;
    if verdict.is_unimodular() != predicted {
        return Err(Error::Internal(format!(
            "graph rule says {predicted} but classification disagrees for {pair}"
        )));
    }
    Ok(verdict)
}

/// The graph rule alone.
pub fn clique_rule(labels: &[String], edges: &[(String, String)], weights: &[u64]) -> Result<bool> {
    let n = labels.len();
    if weights.len() != n {
        return Err(Error::InvalidArgument("one weight per vertex is required".into()));
    }
    let adj = adjacency(labels, edges)?;
    if maximal_cliques(n, &adj).len() <= 2 {
        return Ok(true);
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rest: Vec<usize> = (0..n).filter(|&v| adj[v] | (1 << v) != all).collect();
    if rest.len() != 4 {
        return Ok(false);
    }
    let within = |v: usize| rest.iter().filter(|&&u| adj[v] & (1 << u) != 0).count();
    let cycle = rest.iter().all(|&v| within(v) == 2);
    Ok(cycle && rest.iter().all(|&v| weights[v] == 2))
}
