//! Tensor spaces over `R^4` and the lifted `so(4) = su(2)+ (+) su(2)-` action.

use std::fmt;

use nalgebra::{DMatrix, Matrix4};

use crate::quatalg::Quaternion;

/// One tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `R^4 = H`, the representation `S^{1,1}`.
    Vector,
    /// Self-dual two-forms `S^{2,0}`.
    SelfDual,
    /// Anti-self-dual two-forms `S^{0,2}`.
    AntiSelfDual,
    /// `Sym^2` of the self-dual two-forms.
    Sym2SelfDual,
    /// `Sym^3` of the self-dual two-forms.
    Sym3SelfDual,
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Vector => 4,
            Factor::SelfDual | Factor::AntiSelfDual => 3,
            Factor::Sym2SelfDual => 6,
            Factor::Sym3SelfDual => 10,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Factor::Vector => "R4",
            Factor::SelfDual => "L2+",
            Factor::AntiSelfDual => "L2-",
            Factor::Sym2SelfDual => "S2L2+",
            Factor::Sym3SelfDual => "S3L2+",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Factor> {
        [
            Factor::Vector,
            Factor::SelfDual,
            Factor::AntiSelfDual,
            Factor::Sym2SelfDual,
            Factor::Sym3SelfDual,
        ]
        .into_iter()
        .find(|f| f.tag() == tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorSpace {
    factors: Vec<Factor>,
}

impl TensorSpace {
    pub fn new(factors: Vec<Factor>) -> Self {
        TensorSpace { factors }
    }

    /// `R^4 (x) Sym^2(L2+)`, home of the vertical torsion.
    pub fn torsion() -> Self {
        Self::new(vec![Factor::Vector, Factor::Sym2SelfDual])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    /// Stable key such as `R4*S2L2+`.
    pub fn signature(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.tag())
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn from_signature(sig: &str) -> Option<Self> {
        if sig.is_empty() {
            return None;
        }
        sig.split('*')
            .map(Factor::from_tag)
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signature())
    }
}

/// Generators `L_1..L_3` of the self-dual factor and `R_1..R_3` of the
/// anti-self-dual factor, normalized so `[X_1, X_2] = X_3` and the Casimir
/// `-sum X_a^2` equals `s(s+1)` on spin `s`.
#[derive(Clone, Debug)]
pub struct So4Generators {
    pub left: [Matrix4<f64>; 3],
    pub right: [Matrix4<f64>; 3],
}

/// Left quaternion multiplication generates `su(2)+`, right multiplication `su(2)-`.
pub fn so4_generators() -> So4Generators {
    let left = std::array::from_fn(|a| Quaternion::imaginary_unit(a).left_matrix() * 0.5);
    let right = std::array::from_fn(|a| Quaternion::imaginary_unit(a).right_matrix() * -0.5);
    So4Generators { left, right }
}

/// The standard quaternionic triple on `R^4`: `I_a = 2 L_a`, left multiplication by `i, j, k`.
pub fn quaternionic_triple() -> [Matrix4<f64>; 3] {
    std::array::from_fn(|a| Quaternion::imaginary_unit(a).left_matrix())
}

/// Adjoint action on a three-dimensional factor: `(M_a)_{cb} = eps_{abc}`.
pub fn adjoint_generators() -> [DMatrix<f64>; 3] {
    std::array::from_fn(|a| DMatrix::from_fn(3, 3, |c, b| levi_civita(a, b, c)))
}

pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Orthonormal basis (columns) of `Sym^k(R^d)` inside `(R^d)^{(x)k}`, one
/// column per sorted multi-index in lexicographic order.
pub fn sym_embedding(k: usize, d: usize) -> DMatrix<f64> {
    let multis = sorted_multi_indices(k, d);
    let total = d.pow(k as u32);
    let mut e = DMatrix::zeros(total, multis.len());
    for (col, multi) in multis.iter().enumerate() {
        for flat in 0..total {
            let mut digits = flat_to_digits(flat, k, d);
            digits.sort_unstable();
            if &digits == multi {
                e[(flat, col)] = 1.0;
            }
        }
        let n = e.column(col).norm();
        e.column_mut(col).unscale_mut(n);
    }
    e
}

pub(crate) fn sorted_multi_indices(k: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(k, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Row-major digits: the first tensor slot is the slowest index.
fn flat_to_digits(mut flat: usize, k: usize, d: usize) -> Vec<usize> {
    let mut digits = vec![0; k];
    for slot in (0..k).rev() {
        digits[slot] = flat % d;
        flat /= d;
    }
    digits
}

/// Leibniz extension of per-slot operators `ops[s]` to the tensor product.
pub fn leibniz(ops: &[DMatrix<f64>]) -> DMatrix<f64> {
    let dims: Vec<usize> = ops.iter().map(|m| m.nrows()).collect();
    let total: usize = dims.iter().product();
    let mut out = DMatrix::zeros(total, total);
    for (slot, op) in ops.iter().enumerate() {
        let before: usize = dims[..slot].iter().product();
        let after: usize = dims[slot + 1..].iter().product();
        let term = DMatrix::<f64>::identity(before, before)
            .kronecker(op)
            .kronecker(&DMatrix::<f64>::identity(after, after));
        out += term;
    }
    out
}

/// Per-factor generators `(plus, minus)`.
fn factor_generators(f: Factor) -> ([DMatrix<f64>; 3], [DMatrix<f64>; 3]) {
    let zero = |n: usize| -> [DMatrix<f64>; 3] { std::array::from_fn(|_| DMatrix::zeros(n, n)) };
    match f {
        Factor::Vector => {
            let g = so4_generators();
            let conv = |m: &Matrix4<f64>| DMatrix::from_fn(4, 4, |r, c| m[(r, c)]);
            (
                std::array::from_fn(|a| conv(&g.left[a])),
                std::array::from_fn(|a| conv(&g.right[a])),
            )
        }
        Factor::SelfDual => (adjoint_generators(), zero(3)),
        Factor::AntiSelfDual => (zero(3), adjoint_generators()),
        Factor::Sym2SelfDual | Factor::Sym3SelfDual => {
            let k = if f == Factor::Sym2SelfDual { 2 } else { 3 };
            let e = sym_embedding(k, 3);
            let adj = adjoint_generators();
            let plus = std::array::from_fn(|a| {
                let full = leibniz(&vec![adj[a].clone(); k]);
                e.transpose() * full * &e
            });
            (plus, zero(e.ncols()))
        }
    }
}

/// Generators of both `su(2)` factors acting on a tensor space.
#[derive(Clone, Debug)]
pub struct LiftedGenerators {
    pub plus: [DMatrix<f64>; 3],
    pub minus: [DMatrix<f64>; 3],
}

impl LiftedGenerators {
    pub fn casimir_plus(&self) -> DMatrix<f64> {
        casimir(&self.plus)
    }

    pub fn casimir_minus(&self) -> DMatrix<f64> {
        casimir(&self.minus)
    }

    pub fn all(&self) -> impl Iterator<Item = &DMatrix<f64>> {
        self.plus.iter().chain(self.minus.iter())
    }

    /// Group element `exp(sum_a x_a L_a + y_a R_a)`.
    pub fn exponentiate(&self, plus: [f64; 3], minus: [f64; 3]) -> DMatrix<f64> {
        let n = self.plus[0].nrows();
        let mut alg = DMatrix::zeros(n, n);
        for a in 0..3 {
            alg += &self.plus[a] * plus[a] + &self.minus[a] * minus[a];
        }
        crate::linalg::expm(&alg)
    }
}

fn casimir(gens: &[DMatrix<f64>; 3]) -> DMatrix<f64> {
    let n = gens[0].nrows();
    let mut c = DMatrix::zeros(n, n);
    for g in gens {
        c -= g * g;
    }
    c
}

/// Leibniz extension of every generator to `space`; symmetric-power factors
/// carry the restriction of the tensor-power action.
pub fn lift_generators(space: &TensorSpace) -> LiftedGenerators {
    let per_factor: Vec<_> = space.factors().iter().map(|&f| factor_generators(f)).collect();
    let lift = |pick: &dyn Fn(&([DMatrix<f64>; 3], [DMatrix<f64>; 3])) -> DMatrix<f64>| {
        let ops: Vec<DMatrix<f64>> = per_factor.iter().map(pick).collect();
        leibniz(&ops)
    };
    LiftedGenerators {
        plus: std::array::from_fn(|a| lift(&|fg| fg.0[a].clone())),
        minus: std::array::from_fn(|a| lift(&|fg| fg.1[a].clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn comm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        a * b - b * a
    }

    #[test]
    fn su2_relations_on_r4() {
        let g = lift_generators(&TensorSpace::new(vec![Factor::Vector]));
        for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            assert!((comm(&g.plus[x], &g.plus[y]) - &g.plus[z]).norm() < 1e-15);
            assert!((comm(&g.minus[x], &g.minus[y]) - &g.minus[z]).norm() < 1e-15);
        }
        for a in 0..3 {
            for b in 0..3 {
                assert!(comm(&g.plus[a], &g.minus[b]).norm() < 1e-15);
            }
        }
        // Spin-1/2 Casimir: (1/2)(3/2) on both factors.
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((g.casimir_plus() - &id * 0.75).norm() < 1e-15);
        assert!((g.casimir_minus() - &id * 0.75).norm() < 1e-15);
    }

    #[test]
    fn single_vector_factor_returns_base_generators() {
        let g = lift_generators(&TensorSpace::new(vec![Factor::Vector]));
        let base = so4_generators();
        for a in 0..3 {
            assert!((&g.plus[a] - DMatrix::from_fn(4, 4, |r, c| base.left[a][(r, c)])).norm() == 0.0);
        }
    }

    #[test]
    fn self_dual_factor_is_minus_trivial() {
        let g = lift_generators(&TensorSpace::new(vec![Factor::SelfDual]));
        assert!(g.minus.iter().all(|m| m.norm() == 0.0));
        let c = g.casimir_plus();
        assert!((c - DMatrix::<f64>::identity(3, 3) * 2.0).norm() < 1e-14);
    }

    #[test]
    fn adjoint_matches_commutator_with_quaternionic_triple() {
        // [L_a, I_b] = sum_c (M_a)_{cb} I_c with I_b = left multiplication.
        let base = so4_generators();
        let triple = quaternionic_triple();
        let adj = adjoint_generators();
        for a in 0..3 {
            for b in 0..3 {
                let lhs = base.left[a] * triple[b] - triple[b] * base.left[a];
                let mut rhs = Matrix4::zeros();
                for c in 0..3 {
                    rhs += triple[c] * adj[a][(c, b)];
                }
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sym2_casimir_has_spins_zero_and_two() {
        let g = lift_generators(&TensorSpace::new(vec![Factor::Sym2SelfDual]));
        let mut ev: Vec<f64> = SymmetricEigen::new(g.casimir_plus()).eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [0.0, 6.0, 6.0, 6.0, 6.0, 6.0];
        for (e, w) in ev.iter().zip(want) {
            assert!((e - w).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn sym_embedding_is_isometric() {
        for (k, d, n) in [(2, 3, 6), (3, 3, 10), (2, 4, 10)] {
            let e = sym_embedding(k, d);
            assert_eq!(e.ncols(), n);
            assert!((e.transpose() * &e - DMatrix::<f64>::identity(n, n)).norm() < 1e-14);
        }
    }

    #[test]
    fn signatures_round_trip() {
        let s = TensorSpace::new(vec![Factor::Vector, Factor::Sym2SelfDual, Factor::AntiSelfDual]);
        assert_eq!(TensorSpace::from_signature(&s.signature()), Some(s));
        assert_eq!(TensorSpace::from_signature("R4*bogus"), None);
        assert_eq!(TensorSpace::from_signature(""), None);
    }
}
