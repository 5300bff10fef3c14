//! Hand parameterizations of `S^{5,1}`, `S^{3,1}`, `S^{1,1}` inside
//! `R^4 (x) Sym^2(L2+)`, independent of the Casimir construction.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};

use super::space::{quaternionic_triple, sym_embedding};
use crate::linalg;

/// Dimension of `R^4 (x) Sym^2(L2+)`.
pub const TORSION_DIM: usize = 24;

/// Symmetric family `a_ij = a_ji` in `R^4`, read as `sum a_ij (x) I_i (x) I_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymFamily {
    pub a: [[Vector4<f64>; 3]; 3],
}

impl SymFamily {
    pub fn zero() -> Self {
        SymFamily {
            a: [[Vector4::zeros(); 3]; 3],
        }
    }

    /// Symmetrizes an arbitrary family.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Vector4<f64>) -> Self {
        let raw: [[Vector4<f64>; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)));
        SymFamily {
            a: std::array::from_fn(|i| std::array::from_fn(|j| (raw[i][j] + raw[j][i]) * 0.5)),
        }
    }

    /// Coordinates in the orthonormal basis of the torsion space; the vector
    /// slot is the slow index.
    pub fn to_coords(&self) -> DVector<f64> {
        let e = sym_embedding(2, 3);
        let mut out = DVector::zeros(TORSION_DIM);
        for b in 0..4 {
            for s in 0..6 {
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        acc += e[(i * 3 + j, s)] * self.a[i][j][b];
                    }
                }
                out[b * 6 + s] = acc;
            }
        }
        out
    }

    pub fn from_coords(t: &DVector<f64>) -> Self {
        assert_eq!(t.len(), TORSION_DIM);
        let e = sym_embedding(2, 3);
        SymFamily {
            a: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    Vector4::from_fn(|b, _| (0..6).map(|s| e[(i * 3 + j, s)] * t[b * 6 + s]).sum())
                })
            }),
        }
    }

    /// `(sum_i I_i a_ij)_j`, which vanishes exactly on `S^{5,1}`.
    pub fn contraction(&self, triple: &[Matrix4<f64>; 3]) -> [Vector4<f64>; 3] {
        std::array::from_fn(|j| (0..3).map(|i| triple[i] * self.a[i][j]).sum())
    }
}

/// `sum_j |sum_i I_i a_ij|`.
pub fn explicit_s51_membership(t: &SymFamily) -> f64 {
    t.contraction(&quaternionic_triple()).iter().map(|v| v.norm()).sum()
}

/// `a_ij = delta_ij r`.
pub fn s11_element(r: &Vector4<f64>) -> SymFamily {
    SymFamily::from_fn(|i, j| if i == j { *r } else { Vector4::zeros() })
}

/// `a_ij = I_i r_j + I_j r_i`; lies in `S^{3,1}` when `sum_i I_i r_i = 0`.
pub fn s31_element(r: &[Vector4<f64>; 3]) -> SymFamily {
    let triple = quaternionic_triple();
    SymFamily::from_fn(|i, j| triple[i] * r[j] + triple[j] * r[i])
}

/// Orthogonal projection of `(r_1, r_2, r_3)` onto `sum_i I_i r_i = 0`.
pub fn constrain_s31_params(r: &[Vector4<f64>; 3]) -> [Vector4<f64>; 3] {
    let triple = quaternionic_triple();
    // The constraint map c(r) = sum I_i r_i has c c^T = 3 Id.
    let defect: Vector4<f64> = (0..3).map(|i| triple[i] * r[i]).sum::<Vector4<f64>>() / 3.0;
    std::array::from_fn(|i| r[i] - triple[i].transpose() * defect)
}

/// Matrix of `t -> (sum_i I_i a_ij)_j`, 12 x 24.
fn contraction_matrix() -> DMatrix<f64> {
    let triple = quaternionic_triple();
    let mut m = DMatrix::zeros(12, TORSION_DIM);
    for col in 0..TORSION_DIM {
        let mut t = DVector::zeros(TORSION_DIM);
        t[col] = 1.0;
        let c = SymFamily::from_coords(&t).contraction(&triple);
        for j in 0..3 {
            for b in 0..4 {
                m[(j * 4 + b, col)] = c[j][b];
            }
        }
    }
    m
}

/// Orthonormal basis (columns) of the explicitly parameterized subspace with
/// label `n` in `{5, 3, 1}`.
pub fn explicit_basis(n: u32) -> DMatrix<f64> {
    match n {
        5 => linalg::null_space(&contraction_matrix(), linalg::DEFAULT_RANK_TOL),
        1 => {
            let cols: Vec<_> = (0..4)
                .map(|b| s11_element(&Vector4::from_fn(|k, _| (k == b) as u8 as f64)).to_coords())
                .collect();
            linalg::column_space(&DMatrix::from_columns(&cols), linalg::DEFAULT_RANK_TOL)
        }
        3 => {
            let mut cols = Vec::with_capacity(12);
            for slot in 0..3 {
                for b in 0..4 {
                    let mut r = [Vector4::zeros(); 3];
                    r[slot][b] = 1.0;
                    cols.push(s31_element(&constrain_s31_params(&r)).to_coords());
                }
            }
            linalg::column_space(&DMatrix::from_columns(&cols), linalg::DEFAULT_RANK_TOL)
        }
        _ => panic!("no explicit parameterization for label {n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep4::{build_projectors, TensorSpace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_family(rng: &mut ChaCha8Rng) -> SymFamily {
        SymFamily::from_fn(|_, _| Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn coordinates_round_trip_and_are_isometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_family(&mut rng);
        let back = SymFamily::from_coords(&f.to_coords());
        let frob: f64 = f.a.iter().flatten().map(|v| v.norm_squared()).sum();
        assert!((f.to_coords().norm_squared() - frob).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                assert!((back.a[i][j] - f.a[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn explicit_dimensions_and_orthogonality() {
        let b5 = explicit_basis(5);
        let b3 = explicit_basis(3);
        let b1 = explicit_basis(1);
        assert_eq!((b5.ncols(), b3.ncols(), b1.ncols()), (12, 8, 4));
        assert!((b5.transpose() * &b3).norm() < 1e-12);
        assert!((b5.transpose() * &b1).norm() < 1e-12);
        assert!((b3.transpose() * &b1).norm() < 1e-12);
    }

    #[test]
    fn explicit_matches_casimir_projectors() {
        let table = build_projectors(&TensorSpace::torsion()).unwrap();
        for n in [5, 3, 1] {
            let d = linalg::subspace_distance(&explicit_basis(n), &table.get(n, 1).unwrap().basis, linalg::DEFAULT_RANK_TOL);
            assert!(d < 1e-9, "label {n}: {d}");
        }
    }

    #[test]
    fn s31_pattern_has_positive_residual_and_no_s51_part() {
        let table = build_projectors(&TensorSpace::torsion()).unwrap();
        let p51 = table.projector(5, 1).unwrap();
        let r = constrain_s31_params(&[Vector4::new(1.0, 0.2, 0.0, -0.5), Vector4::new(0.0, 1.0, 0.3, 0.0), Vector4::new(0.4, 0.0, 0.0, 1.0)]);
        let t = s31_element(&r);
        assert!(explicit_s51_membership(&t) > 1e-3);
        assert!((p51 * t.to_coords()).norm() < 1e-12);
        assert_eq!(explicit_s51_membership(&SymFamily::zero()), 0.0);
        let t = s11_element(&Vector4::new(0.3, -1.0, 2.0, 0.5));
        let p11 = table.projector(1, 1).unwrap();
        assert!((p11 * t.to_coords() - t.to_coords()).norm() < 1e-12);
    }

    #[test]
    fn membership_tests_agree_on_random_samples() {
        let table = build_projectors(&TensorSpace::torsion()).unwrap();
        let p51 = table.projector(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..100 {
            let mut coords = random_family(&mut rng).to_coords();
            if k % 2 == 0 {
                coords = p51 * coords;
            }
            let explicit = explicit_s51_membership(&SymFamily::from_coords(&coords));
            let projected = (&coords - p51 * &coords).norm();
            assert_eq!(explicit < 1e-10, projected < 1e-10, "{explicit} vs {projected}");
            // Norm equivalence on the complement of S^{5,1}.
            assert!(explicit <= 10.0 * projected + 1e-12);
            assert!(projected <= 10.0 * explicit + 1e-12);
        }
    }
}
