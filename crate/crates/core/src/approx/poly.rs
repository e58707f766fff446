use std::sync::Arc;

use crate::extremal::NewtonBasis;
use crate::{Complex, Error, Result};

/// Polynomial in a scaled Newton basis.
#[derive(Clone, Debug)]
pub struct ComplexPoly {
    pub basis: Arc<NewtonBasis>,
    pub coeffs: Vec<Complex>,
}

impl ComplexPoly {
    pub fn new(basis: Arc<NewtonBasis>, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > basis.degree() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a basis of degree {}",
                coeffs.len(),
                basis.degree()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn constant(basis: Arc<NewtonBasis>, c: Complex) -> Self {
        Self {
            basis,
            coeffs: vec![c],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.basis.eval(&self.coeffs, z)
    }

    pub fn scaled(&self, a: Complex) -> Self {
        Self {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// The interpolant of `values` at the first `values.len()` basis nodes.
    pub fn interpolate(basis: Arc<NewtonBasis>, values: &[Complex]) -> Result<Self> {
        let n = values.len();
        if n == 0 || n > basis.degree() + 1 {
            return Err(Error::InvalidArgument(format!(
                "cannot interpolate {n} values with a basis of degree {}",
                basis.degree()
            )));
        }
        // lower-triangular solve: b_k vanishes at z_j for j < k
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let b = basis.eval_all(basis.nodes[i]);
            let partial: Complex = (0..i).map(|k| coeffs[k] * b[k]).sum();
            coeffs.push((values[i] - partial) / b[i]);
        }
        Ok(Self { basis, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::MeshBasis;
    use crate::sets::{build_mesh, CompactSetSpec, MeshRole};

    #[test]
    fn interpolation_reproduces_values_at_nodes() {
        let mesh = build_mesh(&CompactSetSpec::star(3), MeshRole::Boundary, 0.02).unwrap();
        let mb = MeshBasis::from_mesh(&mesh, 30).unwrap();
        let f = |z: Complex| (z * 2.0).exp() / (z - 3.0);
        let vals: Vec<Complex> = mb.basis.nodes.iter().map(|&z| f(z)).collect();
        let p = ComplexPoly::interpolate(mb.basis.clone(), &vals).unwrap();
        for (z, v) in mb.basis.nodes.iter().zip(&vals) {
            assert!((p.eval(*z) - v).norm() <= 1e-12 * v.norm());
        }
    }
}
