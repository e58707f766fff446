use std::sync::Arc;

use nalgebra::DMatrix;

use super::nodes::{leja_points, NodeSequence};
use crate::sets::Mesh;
use crate::{Complex, Error, Result};

/// Newton basis `b₀ = 1`, `b_k = b_{k−1}·(x − z_{k−1})/s_k`, each scaled to unit max on a mesh.
#[derive(Clone, Debug)]
pub struct NewtonBasis {
    /// `z₀..z_d`; the last node is not a basis centre but completes the interpolation set.
    pub nodes: Vec<Complex>,
    /// `s₁..s_d`.
    pub scales: Vec<f64>,
}

impl NewtonBasis {
    /// Build on `nodes` (degree `nodes.len() − 1`) with scales taken over `mesh`.
    /// Also returns the basis columns evaluated on the mesh.
    pub fn build(nodes: &[Complex], mesh: &[Complex]) -> Result<(Self, DMatrix<Complex>)> {
        let d = nodes.len() - 1;
        let m = mesh.len();
        let mut cols = DMatrix::from_element(m, d + 1, Complex::new(1.0, 0.0));
        let mut scales = Vec::with_capacity(d);
        for k in 1..=d {
            let zk = nodes[k - 1];
            let mut s: f64 = 0.0;
            for i in 0..m {
                let v = cols[(i, k - 1)] * (mesh[i] - zk);
                cols[(i, k)] = v;
                s = s.max(v.norm());
            }
            if !(s.is_finite() && s > 1e-280) {
                return Err(Error::IllConditioned {
                    requested: d,
                    achieved: k - 1,
                });
            }
            for i in 0..m {
                cols[(i, k)] /= s;
            }
            scales.push(s);
        }
        Ok((
            Self {
                nodes: nodes.to_vec(),
                scales,
            },
            cols,
        ))
    }

    pub fn degree(&self) -> usize {
        self.scales.len()
    }

    /// `b₀(z)..b_d(z)`.
    pub fn eval_all(&self, z: Complex) -> Vec<Complex> {
        let mut out = Vec::with_capacity(self.degree() + 1);
        let mut b = Complex::new(1.0, 0.0);
        out.push(b);
        for (k, &s) in self.scales.iter().enumerate() {
            b = b * (z - self.nodes[k]) / s;
            out.push(b);
        }
        out
    }

    /// Horner-on-Newton evaluation of `Σ c_k b_k(z)`.
    pub fn eval(&self, coeffs: &[Complex], z: Complex) -> Complex {
        let Some((&last, rest)) = coeffs.split_last() else {
            return Complex::new(0.0, 0.0);
        };
        let mut p = last;
        for k in (0..rest.len()).rev() {
            p = rest[k] + p * (z - self.nodes[k]) / self.scales[k];
        }
        p
    }
}

/// A mesh together with a Newton basis on its Leja nodes and the basis columns on the mesh.
#[derive(Clone, Debug)]
pub struct MeshBasis {
    pub nodes: Arc<NodeSequence>,
    pub basis: Arc<NewtonBasis>,
    /// `columns[(i, k)] = b_k(x_i)`.
    pub columns: DMatrix<Complex>,
}

impl MeshBasis {
    /// Leja nodes of the mesh up to `degree`, then the basis.
    pub fn from_mesh(mesh: &Mesh, degree: usize) -> Result<Self> {
        let nodes = leja_points(mesh, degree)?;
        Self::from_nodes(Arc::new(nodes), degree)
    }

    /// Basis on the first `degree + 1` of the given nodes, scaled on their source mesh.
    pub fn from_nodes(nodes: Arc<NodeSequence>, degree: usize) -> Result<Self> {
        if degree > nodes.degree() {
            return Err(Error::MeshExhausted {
                requested: degree + 1,
                available: nodes.nodes.len(),
            });
        }
        let (basis, columns) = NewtonBasis::build(&nodes.nodes[..=degree], &nodes.source.points)?;
        Ok(Self {
            nodes,
            basis: Arc::new(basis),
            columns,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.nodes.source
    }

    pub fn points(&self) -> &[Complex] {
        &self.nodes.source.points
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::sets::{build_mesh, CompactSetSpec, MeshRole};

    #[test]
    fn columns_have_unit_max_and_vanish_at_nodes() {
        let mesh = build_mesh(&CompactSetSpec::interval(-1.0, 1.0), MeshRole::Boundary, 0.01)
            .unwrap();
        let mb = MeshBasis::from_mesh(&mesh, 40).unwrap();
        for k in 0..=40 {
            let mx = (0..mesh.len()).map(|i| mb.columns[(i, k)].norm()).fold(0.0, f64::max);
            assert!((mx - 1.0).abs() < 1e-12);
            for j in 0..k {
                assert_eq!(mb.columns[(mb.nodes.mesh_indices[j], k)].norm(), 0.0);
            }
        }
    }

    #[test]
    fn horner_matches_explicit_sum() {
        let mesh =
            build_mesh(&CompactSetSpec::unit_disk(), MeshRole::Boundary, 2.0 * PI / 64.0).unwrap();
        let mb = MeshBasis::from_mesh(&mesh, 7).unwrap();
        let c: Vec<Complex> = (0..8).map(|k| Complex::new(k as f64, 1.0 - k as f64)).collect();
        let z = Complex::new(0.3, 1.7);
        let direct: Complex = mb.basis.eval_all(z).iter().zip(&c).map(|(b, c)| b * c).sum();
        assert!((mb.basis.eval(&c, z) - direct).norm() < 1e-12 * direct.norm());
    }
}
