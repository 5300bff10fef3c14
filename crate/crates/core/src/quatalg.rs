//! Quaternions and the identification `R^8 = H^2` with `H` acting on the right.
//!
//! Coordinates of `R^8` are `(1, i, j, k)` of the first quaternionic factor
//! followed by `(1, i, j, k)` of the second.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, SMatrix, SVector};

/// A point or tangent vector of `R^8 = H^2`.
pub type AmbientVector = SVector<f64, 8>;
/// A real 8x8 matrix acting on [`AmbientVector`]s.
pub type AmbientMatrix = SMatrix<f64, 8, 8>;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// The imaginary unit `i`, `j` or `k` for `index` 0, 1 or 2.
    pub fn imaginary_unit(index: usize) -> Self {
        match index {
            0 => Self::I,
            1 => Self::J,
            2 => Self::K,
            _ => panic!("imaginary unit index {index} out of range"),
        }
    }

    /// Basis element `1, i, j, k` for `index` 0..4.
    pub fn basis(index: usize) -> Self {
        match index {
            0 => Self::ONE,
            i => Self::imaginary_unit(i - 1),
        }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Imaginary components `(x, y, z)`.
    pub fn imag(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Matrix of `v -> self * v` on `R^4 = H`.
    pub fn left_matrix(self) -> Matrix4<f64> {
        let Quaternion { w, x, y, z } = self;
        Matrix4::new(
            w, -x, -y, -z, //
            x, w, -z, y, //
            y, z, w, -x, //
            z, -y, x, w,
        )
    }

    /// Matrix of `v -> v * self` on `R^4 = H`.
    pub fn right_matrix(self) -> Matrix4<f64> {
        let Quaternion { w, x, y, z } = self;
        Matrix4::new(
            w, -x, -y, -z, //
            x, w, z, -y, //
            y, -z, w, x, //
            z, y, -x, w,
        )
    }
}

/// Hamilton product.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Splits an ambient vector into its two quaternionic coordinates.
pub fn to_quaternions(v: &AmbientVector) -> [Quaternion; 2] {
    [
        Quaternion::new(v[0], v[1], v[2], v[3]),
        Quaternion::new(v[4], v[5], v[6], v[7]),
    ]
}

pub fn from_quaternions(q: [Quaternion; 2]) -> AmbientVector {
    AmbientVector::from_column_slice(&[
        q[0].w, q[0].x, q[0].y, q[0].z, q[1].w, q[1].x, q[1].y, q[1].z,
    ])
}

/// `v * q` for `v` in `H^2`.
pub fn right_mul(v: &AmbientVector, q: Quaternion) -> AmbientVector {
    let [a, b] = to_quaternions(v);
    from_quaternions([a * q, b * q])
}

/// Matrix `M` with `M v = v * q`; two identical 4x4 blocks on the diagonal.
///
/// Right multiplication reverses products: `M(p) M(q) = M(q p)`.
pub fn right_mul_matrix(q: Quaternion) -> AmbientMatrix {
    let block = q.right_matrix();
    let mut m = AmbientMatrix::zeros();
    m.fixed_view_mut::<4, 4>(0, 0).copy_from(&block);
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(&block);
    m
}

/// Quaternionic hermitian product `x* v = conj(x_1) v_1 + conj(x_2) v_2`.
pub fn hermitian(x: &AmbientVector, v: &AmbientVector) -> Quaternion {
    let [x1, x2] = to_quaternions(x);
    let [v1, v2] = to_quaternions(v);
    x1.conj() * v1 + x2.conj() * v2
}

/// Euclidean inner product on `R^8`.
pub fn ambient_inner(u: &AmbientVector, v: &AmbientVector) -> f64 {
    u.dot(v)
}

/// A 2x2 quaternionic matrix acting on `H^2` from the left.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct QuatMatrix2 {
    pub entries: [[Quaternion; 2]; 2],
}

impl QuatMatrix2 {
    pub fn apply(&self, v: &AmbientVector) -> AmbientVector {
        let [v1, v2] = to_quaternions(v);
        let e = &self.entries;
        from_quaternions([e[0][0] * v1 + e[0][1] * v2, e[1][0] * v1 + e[1][1] * v2])
    }

    /// Real 8x8 matrix of [`QuatMatrix2::apply`]; commutes with every `right_mul_matrix`.
    pub fn real_matrix(&self) -> AmbientMatrix {
        let mut m = AmbientMatrix::zeros();
        for r in 0..2 {
            for c in 0..2 {
                let block = self.entries[r][c].left_matrix();
                m.fixed_view_mut::<4, 4>(4 * r, 4 * c).copy_from(&block);
            }
        }
        m
    }

    /// Element of `sp(2)` (quaternionic skew-hermitian) from 10 real parameters:
    /// imaginary parts of the two diagonal entries, then the off-diagonal entry
    /// `D_12`; `D_21 = -conj(D_12)`.
    pub fn skew_hermitian(params: &[f64; 10]) -> Self {
        let d11 = Quaternion::new(0.0, params[0], params[1], params[2]);
        let d22 = Quaternion::new(0.0, params[3], params[4], params[5]);
        let d12 = Quaternion::new(params[6], params[7], params[8], params[9]);
        QuatMatrix2 {
            entries: [[d11, d12], [-d12.conj(), d22]],
        }
    }

    /// Frobenius norm over all 16 real components.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|q| q.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        let e = &self.entries;
        (0..2).all(|r| (0..2).all(|c| (e[r][c] + e[c][r].conj()).norm() <= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-2.0f64..2.0).prop_map(Quaternion::from_array)
    }

    fn ambient() -> impl Strategy<Value = AmbientVector> {
        prop::array::uniform8(-2.0f64..2.0).prop_map(|a| AmbientVector::from_column_slice(&a))
    }

    fn approx_q(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn defining_relations() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        for u in [Q::I, Q::J, Q::K] {
            assert_eq!(u * u, -Q::ONE);
        }
        let q = Q::new(0.3, -1.2, 2.0, 0.7);
        assert_eq!(Q::ONE * q, q);
    }

    #[test]
    fn bilinear_expansion() {
        use Quaternion as Q;
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let lhs = (Q::ONE + Q::I) * (Q::ONE + Q::J);
        let oracle = Q::ONE * Q::ONE + Q::ONE * Q::J + Q::I * Q::ONE + Q::I * Q::J;
        assert_eq!(lhs, oracle);
        assert_eq!(lhs, Q::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn right_matrix_examples() {
        assert_eq!(right_mul_matrix(Quaternion::ONE), AmbientMatrix::identity());
        let mi = right_mul_matrix(Quaternion::I);
        assert_eq!(mi * mi, -AmbientMatrix::identity());
        let mj = right_mul_matrix(Quaternion::J);
        let mk = right_mul_matrix(Quaternion::K);
        // Checked on the basis: v i j = v (ij) = v k.
        for b in 0..8 {
            let e = AmbientVector::from_fn(|r, _| if r == b { 1.0 } else { 0.0 });
            let lhs = right_mul(&right_mul(&e, Quaternion::I), Quaternion::J);
            assert_eq!(lhs, right_mul(&e, Quaternion::K));
            assert_eq!(mj * (mi * e), mk * e);
        }
        for m in [mi, mj, mk] {
            assert_eq!(m.transpose(), -m);
        }
        assert_eq!(mi * mj + mj * mi, AmbientMatrix::zeros());
        assert_eq!(mj * mk + mk * mj, AmbientMatrix::zeros());
        assert_eq!(mk * mi + mi * mk, AmbientMatrix::zeros());
    }

    #[test]
    fn inner_product_basics() {
        let e0 = AmbientVector::from_fn(|r, _| if r == 0 { 1.0 } else { 0.0 });
        let e1 = AmbientVector::from_fn(|r, _| if r == 1 { 1.0 } else { 0.0 });
        assert_eq!(ambient_inner(&e0, &e0), 1.0);
        assert_eq!(ambient_inner(&e0, &e1), 0.0);
    }

    #[test]
    fn skew_hermitian_parameterization() {
        let d = QuatMatrix2::skew_hermitian(&[0.1, 0.2, 0.3, -0.4, 0.5, 0.6, 0.7, 0.8, -0.9, 1.0]);
        assert!(d.is_skew_hermitian(0.0));
        let x = AmbientVector::from_column_slice(&[0.3, -0.1, 0.5, 0.2, 0.7, 0.1, -0.4, 0.6]);
        // x* D x is purely imaginary for skew-hermitian D.
        assert!(hermitian(&x, &d.apply(&x)).w.abs() < 1e-15);
        assert!((d.real_matrix() * x - d.apply(&x)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn product_is_associative(p in quat(), q in quat(), r in quat()) {
            prop_assert!(approx_q((p * q) * r, p * (q * r), 1e-12));
        }

        #[test]
        fn norm_is_multiplicative(p in quat(), q in quat()) {
            prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-12);
        }

        #[test]
        fn unit_right_multiplication_is_orthogonal(q in quat(), u in ambient(), v in ambient()) {
            prop_assume!(q.norm() > 1e-3);
            let q = q.scale(1.0 / q.norm());
            let m = right_mul_matrix(q);
            prop_assert!((m.transpose() * m - AmbientMatrix::identity()).norm() < 1e-12);
            let lhs = ambient_inner(&right_mul(&v, q), &right_mul(&u, q));
            prop_assert!((lhs - ambient_inner(&v, &u)).abs() < 1e-12);
        }

        #[test]
        fn right_action_reverses_order(p in quat(), q in quat(), v in ambient()) {
            let lhs = right_mul_matrix(p) * right_mul_matrix(q);
            prop_assert!((lhs - right_mul_matrix(q * p)).norm() < 1e-12);
            prop_assert!((right_mul_matrix(q) * v - right_mul(&v, q)).norm() < 1e-12);
        }

        #[test]
        fn left_and_right_commute(p in quat(), q in quat()) {
            let c = p.left_matrix() * q.right_matrix() - q.right_matrix() * p.left_matrix();
            prop_assert!(c.norm() < 1e-12);
        }
    }
}
