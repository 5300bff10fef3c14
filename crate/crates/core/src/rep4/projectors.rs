//! Joint Casimir eigenspace projectors `P_{n,m}`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::space::{lift_generators, LiftedGenerators, TensorSpace};
use crate::error::{QcError, Result};

const CLUSTER_TOL: f64 = 1e-6;

/// Projector onto the `(n, m)` isotypic component.
#[derive(Clone, Debug)]
pub struct IrrepProjector {
    pub n: u32,
    pub m: u32,
    /// Orthonormal basis of the image, one column per dimension.
    pub basis: DMatrix<f64>,
    pub projector: DMatrix<f64>,
    /// Number of copies of `S^{n,m}`; above one the projector is isotypic.
    pub multiplicity: usize,
}

impl IrrepProjector {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Casimir eigenvalues `(n/2)(n/2+1)` and `(m/2)(m/2+1)`.
    pub fn casimirs(&self) -> (f64, f64) {
        (spin_casimir(self.n), spin_casimir(self.m))
    }

    pub fn irrep_dim(&self) -> usize {
        ((self.n + 1) * (self.m + 1)) as usize
    }

    pub fn is_isotypic(&self) -> bool {
        self.multiplicity > 1
    }
}

pub fn spin_casimir(n: u32) -> f64 {
    let s = n as f64 / 2.0;
    s * (s + 1.0)
}

#[derive(Clone, Debug)]
pub struct ProjectorTable {
    pub space: TensorSpace,
    pub generators: LiftedGenerators,
    /// Sorted by label, largest `n` first.
    pub entries: Vec<IrrepProjector>,
}

impl ProjectorTable {
    pub fn get(&self, n: u32, m: u32) -> Option<&IrrepProjector> {
        self.entries.iter().find(|e| e.n == n && e.m == m)
    }

    pub fn projector(&self, n: u32, m: u32) -> Option<&DMatrix<f64>> {
        self.get(n, m).map(|e| &e.projector)
    }

    pub fn labels(&self) -> Vec<(u32, u32)> {
        self.entries.iter().map(|e| (e.n, e.m)).collect()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Largest violation among idempotence, symmetry, mutual annihilation,
    /// completeness and equivariance.
    pub fn self_check(&self) -> ProjectorDefects {
        let dim = self.dim();
        let mut d = ProjectorDefects::default();
        let mut sum = DMatrix::zeros(dim, dim);
        for (i, e) in self.entries.iter().enumerate() {
            let p = &e.projector;
            d.idempotence = d.idempotence.max((p * p - p).norm());
            d.symmetry = d.symmetry.max((p.transpose() - p).norm());
            for other in &self.entries[i + 1..] {
                d.orthogonality = d.orthogonality.max((p * &other.projector).norm());
            }
            for g in self.generators.all() {
                d.equivariance = d.equivariance.max((p * g - g * p).norm());
            }
            sum += p;
        }
        d.completeness = (sum - DMatrix::<f64>::identity(dim, dim)).norm();
        d
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ProjectorDefects {
    pub idempotence: f64,
    pub symmetry: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub equivariance: f64,
}

impl ProjectorDefects {
    pub fn max(&self) -> f64 {
        [
            self.idempotence,
            self.symmetry,
            self.orthogonality,
            self.completeness,
            self.equivariance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Groups sorted eigenpairs into clusters of nearly equal eigenvalue.
fn clusters(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Vec<(f64, DMatrix<f64>)> {
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match groups.last_mut() {
            Some(g) if (eig.eigenvalues[idx] - eig.eigenvalues[*g.last().unwrap()]).abs() < CLUSTER_TOL => {
                g.push(idx)
            }
            _ => groups.push(vec![idx]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
            let cols: Vec<_> = g.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
            (mean, DMatrix::from_columns(&cols))
        })
        .collect()
}

/// Recovers `n = 2s` from a Casimir eigenvalue `s(s+1)`.
fn label_from_casimir(lambda: f64) -> Result<u32> {
    let two_s = (1.0 + 4.0 * lambda).max(0.0).sqrt() - 1.0;
    let n = two_s.round();
    if (spin_casimir(n as u32) - lambda).abs() > CLUSTER_TOL || n < 0.0 {
        return Err(QcError::UnresolvedSpectrum(format!(
            "Casimir eigenvalue {lambda} is not of the form s(s+1)"
        )));
    }
    Ok(n as u32)
}

pub fn build_projectors(space: &TensorSpace) -> Result<ProjectorTable> {
    let generators = lift_generators(space);
    let c_plus = generators.casimir_plus();
    let c_minus = generators.casimir_minus();
    let mut entries = Vec::new();
    for (lp, v) in clusters(&SymmetricEigen::new(c_plus)) {
        let n = label_from_casimir(lp)?;
        let restricted = v.transpose() * &c_minus * &v;
        let restricted = (&restricted + restricted.transpose()) * 0.5;
        for (lm, u) in clusters(&SymmetricEigen::new(restricted)) {
            let m = label_from_casimir(lm)?;
            let basis = &v * u;
            let irrep = ((n + 1) * (m + 1)) as usize;
            if basis.ncols() % irrep != 0 {
                return Err(QcError::UnresolvedSpectrum(format!(
                    "eigenspace ({n},{m}) of rank {} is not a multiple of {irrep}",
                    basis.ncols()
                )));
            }
            let projector = &basis * basis.transpose();
            let projector = (&projector + projector.transpose()) * 0.5;
            entries.push(IrrepProjector {
                n,
                m,
                multiplicity: basis.ncols() / irrep,
                basis,
                projector,
            });
        }
    }
    entries.sort_by(|a, b| (b.n, b.m).cmp(&(a.n, a.m)));
    Ok(ProjectorTable {
        space: space.clone(),
        generators,
        entries,
    })
}
