use std::sync::Arc;

use crate::sets::Mesh;
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leja,
    FeketeExact,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Leja => "leja",
            NodeKind::FeketeExact => "fekete",
        }
    }
}

/// Interpolation nodes `z₀..zₙ` drawn from a mesh, with `log‖ωₙ‖` over that mesh.
#[derive(Clone, Debug)]
pub struct NodeSequence {
    pub nodes: Vec<Complex>,
    pub kind: NodeKind,
    pub log_nodal_supnorm: f64,
    pub mesh_indices: Vec<usize>,
    pub source: Arc<Mesh>,
}

impl NodeSequence {
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `log|ωₙ(z)| = Σ log|z − z_j|`.
    pub fn log_abs_nodal(&self, z: Complex) -> f64 {
        self.nodes.iter().map(|&w| (z - w).norm().ln()).sum()
    }

    pub fn recompute_log_nodal_supnorm(&self) -> f64 {
        self.source
            .points
            .iter()
            .map(|&x| self.log_abs_nodal(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The first `degree + 1` nodes, with the sup-norm recomputed.
    pub fn truncated(&self, degree: usize) -> Result<NodeSequence> {
        if degree > self.degree() {
            return Err(Error::MeshExhausted {
                requested: degree + 1,
                available: self.nodes.len(),
            });
        }
        let mut out = NodeSequence {
            nodes: self.nodes[..=degree].to_vec(),
            kind: self.kind,
            log_nodal_supnorm: 0.0,
            mesh_indices: self.mesh_indices[..=degree].to_vec(),
            source: self.source.clone(),
        };
        out.log_nodal_supnorm = out.recompute_log_nodal_supnorm();
        Ok(out)
    }
}

/// Greedy Leja sequence of `n + 1` mesh points, started at the point of largest modulus.
pub fn leja_points(mesh: &Mesh, n: usize) -> Result<NodeSequence> {
    let pts = &mesh.points;
    if pts.len() <= n {
        return Err(Error::MeshExhausted {
            requested: n + 1,
            available: pts.len(),
        });
    }
    // strict comparisons keep the smallest index on ties
    let mut first = 0;
    for (i, z) in pts.iter().enumerate() {
        if z.norm() > pts[first].norm() {
            first = i;
        }
    }
    let mut logprod = vec![0.0f64; pts.len()];
    let mut idx = vec![first];
    let add = |logprod: &mut Vec<f64>, k: usize| {
        let zk = pts[k];
        for (lp, &x) in logprod.iter_mut().zip(pts) {
            *lp += (x - zk).norm().ln();
        }
    };
    add(&mut logprod, first);
    for _ in 0..n {
        let mut best = usize::MAX;
        for (i, &lp) in logprod.iter().enumerate() {
            if lp > f64::NEG_INFINITY && (best == usize::MAX || lp > logprod[best]) {
                best = i;
            }
        }
        if best == usize::MAX {
            return Err(Error::MeshExhausted {
                requested: n + 1,
                available: idx.len(),
            });
        }
        idx.push(best);
        add(&mut logprod, best);
    }
    let log_nodal_supnorm = logprod.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(NodeSequence {
        nodes: idx.iter().map(|&i| pts[i]).collect(),
        kind: NodeKind::Leja,
        log_nodal_supnorm,
        mesh_indices: idx,
        source: Arc::new(mesh.clone()),
    })
}

const FEKETE_LIMIT: u64 = 10_000_000;

fn binomial(n: usize, k: usize) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// Exhaustive maximizer of `∏_{i<j}|z_i − z_j|` over `(n+1)`-subsets of the mesh.
pub fn fekete_points_exact(mesh: &Mesh, n: usize) -> Result<NodeSequence> {
    let m = mesh.len();
    if m <= n {
        return Err(Error::MeshExhausted {
            requested: n + 1,
            available: m,
        });
    }
    if n > 6 || binomial(m, n + 1) > FEKETE_LIMIT {
        return Err(Error::SearchTooLarge {
            points: m,
            subset: n + 1,
            limit: FEKETE_LIMIT,
        });
    }
    let pts = &mesh.points;
    let logd: Vec<Vec<f64>> = pts
        .iter()
        .map(|&a| pts.iter().map(|&b| (a - b).norm().ln()).collect())
        .collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut cur = Vec::with_capacity(n + 1);
    search(&logd, n + 1, 0, 0.0, &mut cur, &mut best);
    let idx = best.1;
    let mut out = NodeSequence {
        nodes: idx.iter().map(|&i| pts[i]).collect(),
        kind: NodeKind::FeketeExact,
        log_nodal_supnorm: 0.0,
        mesh_indices: idx,
        source: Arc::new(mesh.clone()),
    };
    out.log_nodal_supnorm = out.recompute_log_nodal_supnorm();
    Ok(out)
}

fn search(
    logd: &[Vec<f64>],
    k: usize,
    start: usize,
    acc: f64,
    cur: &mut Vec<usize>,
    best: &mut (f64, Vec<usize>),
) {
    if cur.len() == k {
        if acc > best.0 {
            *best = (acc, cur.clone());
        }
        return;
    }
    let need = k - cur.len();
    for i in start..=logd.len() - need {
        let add: f64 = cur.iter().map(|&j| logd[i][j]).sum();
        cur.push(i);
        search(logd, k, i + 1, acc + add, cur, best);
        cur.pop();
    }
}

/// `Σ_{i<j} log|z_i − z_j|`.
pub fn log_vandermonde(nodes: &[Complex]) -> f64 {
    let mut s = 0.0;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            s += (nodes[i] - nodes[j]).norm().ln();
        }
    }
    s
}
