//! Compatible metric and quaternionic structure from a definite triple of two-forms.

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};

use crate::error::{QcError, Result};

/// Coefficient of `e1234` in `A ^ B` for antisymmetric `A`, `B`.
pub fn wedge(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    a[(0, 1)] * b[(2, 3)] - a[(0, 2)] * b[(1, 3)] + a[(0, 3)] * b[(1, 2)] + a[(1, 2)] * b[(0, 3)]
        - a[(1, 3)] * b[(0, 2)]
        + a[(2, 3)] * b[(0, 1)]
}

/// `G_ij = (w_i ^ w_j) / (2 vol)` for the reference volume of the coordinates.
pub fn gram(w: &[Matrix4<f64>; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| wedge(&w[i], &w[j]) / 2.0)
}

pub fn sorted_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let mut ev: Vec<f64> = SymmetricEigen::new(*m).eigenvalues.iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2]]
}

/// Everything extracted from `(w_1, w_2, w_3)` in a fixed basis of `H`.
#[derive(Clone, Debug)]
pub struct CompatiblePack {
    pub gram: Matrix3<f64>,
    pub gram_eigenvalues: [f64; 3],
    /// `N` with `w~_i = sum_j N_ij w_j` orthonormal; `det(G)^(1/6) G^(-1/2)`.
    pub normalizer: Matrix3<f64>,
    pub w: [Matrix4<f64>; 3],
    pub metric: Matrix4<f64>,
    /// `I_i` with `w~_i(X, Y) = g(I_i X, Y)`, i.e. `w~_i = -g I_i` as matrices.
    /// Positively ordered triples satisfy `I_1 I_2 = -I_3`, the relation of right
    /// quaternion multiplication on the canonical sphere.
    pub complex: [Matrix4<f64>; 3],
    /// False when the triple is ordered against the canonical orientation,
    /// which shows up as a negative definite candidate metric.
    pub orientation_ok: bool,
}

impl CompatiblePack {
    /// Largest defect in `I_i^2 = -1`, `I_1 I_2 = -I_3`, `w~_i ^ w~_j = 2 delta_ij vol_g`.
    pub fn defects(&self) -> f64 {
        let id = Matrix4::<f64>::identity();
        let i = &self.complex;
        let mut d: f64 = 0.0;
        for k in 0..3 {
            d = d.max((i[k] * i[k] + id).norm());
        }
        d = d.max((i[0] * i[1] + i[2]).norm());
        let vol = self.metric.determinant().abs().sqrt();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 2.0 * vol } else { 0.0 };
                d = d.max((wedge(&self.w[a], &self.w[b]) - want).abs());
            }
        }
        d
    }
}

fn sym_inv_sqrt(g: &Matrix3<f64>) -> Matrix3<f64> {
    let eig = SymmetricEigen::new(*g);
    let d = Matrix3::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Unique `g` making the `w_i` self-dual and orthogonal with `w_i ^ w_i = 2 vol_g`,
/// after the triple is mixed into an orthonormal one by the normalizer.
/// The input must be positive definite for the coordinate orientation.
pub fn metric_from_triple(w: &[Matrix4<f64>; 3]) -> Result<CompatiblePack> {
    let g = gram(w);
    let ev = sorted_eigenvalues(&g);
    let scale = ev[2].abs().max(ev[0].abs());
    if !(ev[0] > 1e-10 * scale) || !(scale > 0.0) {
        return Err(QcError::IndefiniteGram(ev));
    }
    let normalizer = sym_inv_sqrt(&g) * g.determinant().powf(1.0 / 6.0);
    let wt: [Matrix4<f64>; 3] = std::array::from_fn(|i| (0..3).map(|j| w[j] * normalizer[(i, j)]).sum());
    let inv = |m: &Matrix4<f64>| m.try_inverse().ok_or(QcError::IndefiniteGram(ev));
    let complex = [inv(&wt[1])? * wt[2], inv(&wt[2])? * wt[0], inv(&wt[0])? * wt[1]];
    let mean = (0..3).map(|i| wt[i] * complex[i]).sum::<Matrix4<f64>>() / 3.0;
    let metric = (mean + mean.transpose()) * 0.5;
    let orientation_ok = metric.cholesky().is_some();
    Ok(CompatiblePack {
        gram: g,
        gram_eigenvalues: ev,
        normalizer,
        w: wt,
        metric,
        complex,
        orientation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep4::quaternionic_triple;
    use nalgebra::Rotation3;

    /// `w_i = -g I_i` for `g = 1` and `I_i = -L_{q_i}`.
    fn standard() -> [Matrix4<f64>; 3] {
        quaternionic_triple()
    }

    #[test]
    fn standard_triple_is_a_fixed_point() {
        let pack = metric_from_triple(&standard()).unwrap();
        assert!((pack.metric - Matrix4::identity()).norm() < 1e-14);
        for (a, b) in pack.complex.iter().zip(quaternionic_triple()) {
            assert!((a + b).norm() < 1e-14);
        }
        assert!(pack.orientation_ok);
        assert!(pack.defects() < 1e-14);
        assert!((pack.gram - Matrix3::identity()).norm() < 1e-14);
    }

    #[test]
    fn rotation_and_scaling() {
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 0.7).into_inner();
        let s = standard();
        let mixed: [Matrix4<f64>; 3] = std::array::from_fn(|i| (0..3).map(|j| s[j] * rot[(i, j)]).sum());
        let pack = metric_from_triple(&mixed).unwrap();
        assert!((pack.metric - Matrix4::identity()).norm() < 1e-12);
        let base = quaternionic_triple();
        for i in 0..3 {
            let want: Matrix4<f64> = (0..3).map(|j| base[j] * -rot[(i, j)]).sum();
            assert!((pack.complex[i] - want).norm() < 1e-12);
        }
        let lambda = 2.5;
        let scaled = metric_from_triple(&mixed.map(|m| m * lambda)).unwrap();
        assert!((scaled.metric - Matrix4::identity() * lambda).norm() < 1e-12);
        for i in 0..3 {
            assert!((scaled.complex[i] - pack.complex[i]).norm() < 1e-12);
        }
        assert!(scaled.defects() < 1e-12);
    }

    #[test]
    fn general_linear_change_of_basis() {
        // A non-orthonormal basis of H: the pulled-back triple still yields a
        // quaternionic structure compatible with the pulled-back metric.
        let b = Matrix4::new(1.0, 0.2, 0.0, 0.1, 0.0, 1.3, -0.2, 0.0, 0.3, 0.0, 0.9, 0.2, 0.0, 0.1, 0.0, 1.1);
        let w = standard().map(|m| b.transpose() * m * b);
        let pack = metric_from_triple(&w).unwrap();
        assert!(pack.orientation_ok);
        assert!(pack.defects() < 1e-12, "{}", pack.defects());
        let vol = (b.transpose() * b).determinant().sqrt();
        assert!((pack.metric - b.transpose() * b).norm() < 1e-12 * vol.max(1.0));
    }

    #[test]
    fn reversed_and_degenerate_triples() {
        let mut s = standard();
        s[2] = -s[2];
        let pack = metric_from_triple(&s).unwrap();
        assert!(!pack.orientation_ok);
        let anti = standard().map(|m| {
            let f = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
            f * m * f
        });
        assert!(matches!(metric_from_triple(&anti), Err(QcError::IndefiniteGram(_))));
        let mut mixed = standard();
        mixed[2] = anti[0];
        assert!(matches!(metric_from_triple(&mixed), Err(QcError::IndefiniteGram(_))));
    }
}
