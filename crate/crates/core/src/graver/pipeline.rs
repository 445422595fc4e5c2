//! Graver basis of a unimodular pair from its construction: nucleus basis,
//! then one lift per construction step.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::complex::VertexKind;
use crate::error::{Error, Result};
use crate::graver::lift::{lift_cone, lift_ghost, lift_lambda2, lift_lambda3_over_ghost};
use crate::graver::nucleus::{bipartite_cycles, parity_bonds};
use crate::graver::oracle::graver_oracle;
use crate::matrix::DesignMatrix;
use crate::nuclear::{weighted_decompose, ConstructionStep, NuclearCertificate, Nucleus};
use crate::pair::HMPair;
use crate::vector::GraverBasis;

/// Largest product of simplex weights for which the three-state Lawrence
/// base case is computed.
pub const MAX_LAMBDA3_BASE: u64 = 16;

/// An ordered vertex list; columns are mixed-radix state indices with the
/// first vertex varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub vertices: Vec<String>,
    pub weights: Vec<u64>,
}

impl Layout {
    pub fn new(vertices: Vec<String>, weights: Vec<u64>) -> Self {
        Layout { vertices, weights }
    }

    pub fn n_cols(&self) -> usize {
        self.weights.iter().product::<u64>() as usize
    }

    pub fn pushed(&self, v: &str, w: u64) -> Layout {
        let mut l = self.clone();
        l.vertices.push(v.to_string());
        l.weights.push(w);
        l
    }

    fn state(&self, mut x: usize) -> Vec<u64> {
        self.weights
            .iter()
            .map(|&w| {
                let s = x as u64 % w;
                x /= w as usize;
                s
            })
            .collect()
    }

    /// Column map into `other`, which must hold the same vertices.
    pub fn map_to(&self, other: &Layout) -> Result<Vec<usize>> {
        let pos: Vec<usize> = other
            .vertices
            .iter()
            .map(|v| {
                self.vertices
                    .iter()
                    .position(|u| u == v)
                    .ok_or_else(|| Error::Internal(format!("vertex {v} missing from layout")))
            })
            .collect::<Result<_>>()?;
        Ok((0..self.n_cols())
            .map(|x| {
                let s = self.state(x);
                pos.iter()
                    .zip(&other.weights)
                    .rev()
                    .fold(0usize, |acc, (&p, &w)| acc * w as usize + s[p] as usize)
            })
            .collect())
    }

    /// Column map into the design-matrix order of `pair`.
    pub fn map_to_pair(&self, pair: &HMPair) -> Result<Vec<usize>> {
        let pos: Vec<usize> = pair
            .ground()
            .iter()
            .map(|v| {
                self.vertices
                    .iter()
                    .position(|u| u == v)
                    .ok_or_else(|| Error::Internal(format!("vertex {v} missing from layout")))
            })
            .collect::<Result<_>>()?;
        Ok((0..self.n_cols())
            .map(|x| {
                let s = self.state(x);
                let st: Vec<u64> = pos.iter().map(|&p| s[p] + 1).collect();
                pair.column_index(&st)
            })
            .collect())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Labeled {
    pub layout: Layout,
    pub basis: GraverBasis,
}

impl Labeled {
    fn reordered(&self, target: Layout) -> Result<Labeled> {
        let map = self.layout.map_to(&target)?;
        Ok(Labeled {
            basis: self.basis.remap(target.n_cols(), |i| map[i]),
            layout: target,
        })
    }
}

/// The construction steps with cone steps moved to the end.
pub(crate) fn ordered_steps(cert: &NuclearCertificate) -> Vec<&ConstructionStep> {
    let (cones, rest): (Vec<_>, Vec<_>) = cert.steps.iter().partition(|s| s.op == VertexKind::Cone);
    rest.into_iter().chain(cones).collect()
}

pub(crate) fn nucleus_layout(cert: &NuclearCertificate, pair: &HMPair) -> Result<Layout> {
    let vertices: Vec<String> = cert.left.iter().chain(&cert.right).cloned().collect();
    let weights = vertices.iter().map(|v| pair.weight(v)).collect::<Result<_>>()?;
    Ok(Layout::new(vertices, weights))
}

/// Splits a nucleus layout into the product of the left and right weights.
pub(crate) fn sides(cert: &NuclearCertificate, layout: &Layout) -> (usize, usize) {
    let k = cert.left.len();
    let p: u64 = layout.weights[..k].iter().product();
    let q: u64 = layout.weights[k..].iter().product();
    (p as usize, q as usize)
}

fn nucleus_basis(cert: &NuclearCertificate, pair: &HMPair) -> Result<Labeled> {
    let layout = nucleus_layout(cert, pair)?;
    let basis = match cert.nucleus {
        Nucleus::Simplex { .. } => GraverBasis::new(layout.n_cols()),
        Nucleus::DisjointSimplices { .. } => {
            let (p, q) = sides(cert, &layout);
            bipartite_cycles(p, q)
        }
        Nucleus::DualDisjoint { m, n } => {
            if layout.weights.iter().any(|&w| w != 2) {
                return Err(Error::NotUnimodular);
            }
            parity_bonds(m, n)?
        }
    };
    Ok(Labeled { layout, basis })
}

fn apply_step(l: Labeled, step: &ConstructionStep, pair: &HMPair) -> Result<Labeled> {
    let q = pair.weight(&step.vertex)?;
    let layout = l.layout.pushed(&step.vertex, q);
    let basis = match step.op {
        VertexKind::Cone => lift_cone(&l.basis, q as usize),
        VertexKind::Ghost => lift_ghost(&l.basis, q as usize)?,
        VertexKind::Lawrence if q == 2 => lift_lambda2(&l.basis),
        _ => {
            return Err(Error::Internal(format!(
                "step {} with {q} states outside the three-state path",
                step.vertex
            )))
        }
    };
    Ok(Labeled { layout, basis })
}

fn lambda3_cache() -> &'static Mutex<HashMap<u64, GraverBasis>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, GraverBasis>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Graver basis of the triangle with weights `(3, 2, p)`. Its design-matrix
/// order `(l * 2 + u) * p + e` is the layout `[e, u, l]`.
fn triangle_base(p: u64) -> Result<GraverBasis> {
    if p > MAX_LAMBDA3_BASE {
        return Err(Error::GuardExceeded {
            what: "three-state Lawrence base weight product",
            limit: MAX_LAMBDA3_BASE as usize,
            actual: p as usize,
        });
    }
    if let Some(b) = lambda3_cache().lock().unwrap().get(&p) {
        return Ok(b.clone());
    }
    let pair = HMPair::parse("1 2 3", "12 13 23", &[3, 2, p])?;
    let b = graver_oracle(&DesignMatrix::build(&pair).matrix)?;
    lambda3_cache().lock().unwrap().insert(p, b.clone());
    Ok(b)
}

/// Basis after applying `inner` to the nucleus and then the three-state
/// Lawrence vertex `top`, laid out with `top` last.
pub(crate) fn lambda3_chain(
    cert: &NuclearCertificate,
    pair: &HMPair,
    inner: &[&ConstructionStep],
    top: &ConstructionStep,
) -> Result<Labeled> {
    let Some(last) = inner.last() else {
        if !matches!(cert.nucleus, Nucleus::DisjointSimplices { n: 0, .. }) || cert.right.len() != 1 {
            return Err(Error::Internal("three-state Lawrence vertex needs a Δm ⊔ Δ0 nucleus".into()));
        }
        let layout = nucleus_layout(cert, pair)?;
        if pair.weight(&cert.right[0])? != 2 {
            return Err(Error::NotUnimodular);
        }
        let (p, _) = sides(cert, &layout);
        return Ok(Labeled {
            basis: triangle_base(p as u64)?,
            layout: layout.pushed(&top.vertex, 3),
        });
    };
    match last.op {
        VertexKind::Ghost => {
            let run = inner.iter().rev().take_while(|s| s.op == VertexKind::Ghost).count();
            let below = lambda3_chain(cert, pair, &inner[..inner.len() - run], top)?;
            let mut layout = below.layout.clone();
            layout.vertices.pop();
            layout.weights.pop();
            let mut q = 1usize;
            for s in &inner[inner.len() - run..] {
                let w = pair.weight(&s.vertex)?;
                q *= w as usize;
                layout = layout.pushed(&s.vertex, w);
            }
            Ok(Labeled {
                basis: lift_lambda3_over_ghost(&below.basis, q)?,
                layout: layout.pushed(&top.vertex, 3),
            })
        }
        VertexKind::Lawrence if pair.weight(&last.vertex)? == 2 => {
            let below = lambda3_chain(cert, pair, &inner[..inner.len() - 1], top)?;
            let swapped = Labeled {
                basis: lift_lambda2(&below.basis),
                layout: below.layout.pushed(&last.vertex, 2),
            };
            let mut target = below.layout.clone();
            target.vertices.pop();
            target.weights.pop();
            swapped.reordered(target.pushed(&last.vertex, 2).pushed(&top.vertex, 3))
        }
        _ => Err(Error::Internal(format!("unexpected step {} below the three-state Lawrence vertex", last.vertex))),
    }
}

/// Position of the three-state Lawrence step in `steps`, if any.
pub(crate) fn three_state_step(steps: &[&ConstructionStep], pair: &HMPair) -> Result<Option<usize>> {
    for (i, s) in steps.iter().enumerate() {
        if s.op == VertexKind::Lawrence && pair.weight(&s.vertex)? == 3 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Graver basis of the design matrix of a unimodular pair, built from its
/// nuclear construction.
pub fn graver_for_unimodular_pair(pair: &HMPair) -> Result<GraverBasis> {
    let cert = weighted_decompose(pair).ok_or(Error::NotUnimodular)?;
    graver_from_certificate(pair, &cert)
}

pub fn graver_from_certificate(pair: &HMPair, cert: &NuclearCertificate) -> Result<GraverBasis> {
    let steps = ordered_steps(cert);
    let (mut cur, rest) = match three_state_step(&steps, pair)? {
        Some(t) => (lambda3_chain(cert, pair, &steps[..t], steps[t])?, &steps[t + 1..]),
        None => (nucleus_basis(cert, pair)?, &steps[..]),
    };
    for s in rest {
        cur = apply_step(cur, s, pair)?;
    }
    let map = cur.layout.map_to_pair(pair)?;
    Ok(cur.basis.remap(map.len(), |i| map[i]))
}
