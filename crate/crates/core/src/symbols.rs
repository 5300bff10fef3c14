//! Principal symbols of the `Sp(1)`-invariant deformation complex on the base,
//! `S^{2,0} -> S^{3,1} -> S^{5,1} -> S^{6,0}`, as matrices between orthonormal
//! bases of the irreducible pieces.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{column_space, null_space, rank, subspace_distance, DEFAULT_RANK_TOL};
use crate::rep4::{
    build_projectors, quaternionic_triple, sym3_projectors, sym_embedding, torsion_projectors, Factor,
    ProjectorTable, SymFamily, TensorSpace,
};

/// Irreducible label `(n, m)` of `S^{n,m}`.
pub type Label = (u32, u32);

#[derive(Clone, Debug)]
pub struct SymbolMap {
    pub xi: Vector4<f64>,
    pub source: Label,
    pub target: Label,
    /// Homogeneity in `xi`.
    pub degree: u32,
    pub matrix: DMatrix<f64>,
}

impl SymbolMap {
    pub fn rank(&self) -> usize {
        rank(&self.matrix, DEFAULT_RANK_TOL)
    }

    pub fn kernel(&self) -> DMatrix<f64> {
        null_space(&self.matrix, DEFAULT_RANK_TOL)
    }

    pub fn image(&self) -> DMatrix<f64> {
        column_space(&self.matrix, DEFAULT_RANK_TOL)
    }
}

fn table(cell: &'static OnceLock<ProjectorTable>, factors: &[Factor]) -> &'static ProjectorTable {
    cell.get_or_init(|| build_projectors(&TensorSpace::new(factors.to_vec())).expect("tensor space decomposes"))
}

/// `R^4 (x) L2+`, holding `S^{3,1} + S^{1,1}`.
pub fn vector_self_dual_projectors() -> &'static ProjectorTable {
    static T: OnceLock<ProjectorTable> = OnceLock::new();
    table(&T, &[Factor::Vector, Factor::SelfDual])
}

/// `Sym^2(L2+) = S^{4,0} + S^{0,0}`.
pub fn sym2_projectors() -> &'static ProjectorTable {
    static T: OnceLock<ProjectorTable> = OnceLock::new();
    table(&T, &[Factor::Sym2SelfDual])
}

/// `R^4 (x) R^4 (x) R^4 (x) L2+`, target of the unreduced second-order symbol.
pub fn second_order_projectors() -> &'static ProjectorTable {
    static T: OnceLock<ProjectorTable> = OnceLock::new();
    table(&T, &[Factor::Vector, Factor::Vector, Factor::Vector, Factor::SelfDual])
}

fn basis(t: &ProjectorTable, n: u32, m: u32) -> &DMatrix<f64> {
    &t.get(n, m).expect("label present").basis
}

fn dvec(xi: &Vector4<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(4, 1, xi.as_slice())
}

/// `s -> P31(xi (x) s)` on `S^{2,0} = L2+`.
pub fn symbol_d(xi: &Vector4<f64>) -> SymbolMap {
    let embed = dvec(xi).kronecker(&DMatrix::identity(3, 3));
    SymbolMap {
        xi: *xi,
        source: (2, 0),
        target: (3, 1),
        degree: 1,
        matrix: basis(vector_self_dual_projectors(), 3, 1).transpose() * embed,
    }
}

/// First factor of the second-order symbol: `u -> P40 sym(C)` with
/// `C_{k,i} = (I_k xi) . u_{., i} / 2`, from `S^{3,1}` to `S^{4,0}`.
pub fn symbol_contraction(xi: &Vector4<f64>) -> DMatrix<f64> {
    let triple = quaternionic_triple();
    let mut c = DMatrix::zeros(9, 12);
    for k in 0..3 {
        let ik = triple[k] * xi;
        for i in 0..3 {
            for a in 0..4 {
                c[(k * 3 + i, a * 3 + i)] = 0.5 * ik[a];
            }
        }
    }
    let sym2 = sym_embedding(2, 3).transpose() * c;
    basis(sym2_projectors(), 4, 0).transpose() * sym2 * basis(vector_self_dual_projectors(), 3, 1)
}

/// `m -> P51(xi (x) m)` from `S^{4,0}` to `S^{5,1}`.
pub fn symbol_lift(xi: &Vector4<f64>) -> DMatrix<f64> {
    let embed = dvec(xi).kronecker(&DMatrix::identity(6, 6));
    basis(torsion_projectors(), 5, 1).transpose() * embed * basis(sym2_projectors(), 4, 0)
}

/// Symbol of `A = p^{5,1} nabla^2` on `S^{3,1}`, the composite of
/// [`symbol_contraction`] and [`symbol_lift`].
pub fn symbol_a(xi: &Vector4<f64>) -> SymbolMap {
    SymbolMap {
        xi: *xi,
        source: (3, 1),
        target: (5, 1),
        degree: 2,
        matrix: symbol_lift(xi) * symbol_contraction(xi),
    }
}

/// `u -> P51((xi (x) xi) (x) u)` into the `S^{5,1}` isotypic part of
/// `R^4 (x) R^4 (x) R^4 (x) L2+`.
pub fn symbol_a_unreduced(xi: &Vector4<f64>) -> SymbolMap {
    let xx = dvec(xi).kronecker(&dvec(xi));
    let embed = xx.kronecker(&DMatrix::identity(12, 12));
    let matrix = basis(second_order_projectors(), 5, 1).transpose()
        * embed
        * basis(vector_self_dual_projectors(), 3, 1);
    SymbolMap {
        xi: *xi,
        source: (3, 1),
        target: (5, 1),
        degree: 2,
        matrix,
    }
}

/// `v -> P60 sym(C)` with `C_{k,ij} = (I_k xi) . v_{., ij} / 2`, from `S^{5,1}` to `S^{6,0}`.
pub fn symbol_b(xi: &Vector4<f64>) -> SymbolMap {
    let triple = quaternionic_triple();
    let q51 = basis(torsion_projectors(), 5, 1);
    let mut c = DMatrix::zeros(27, q51.ncols());
    for col in 0..q51.ncols() {
        let v = SymFamily::from_coords(&DVector::from_column_slice(q51.column(col).as_slice()));
        for k in 0..3 {
            let ik = triple[k] * xi;
            for i in 0..3 {
                for j in 0..3 {
                    c[(k * 9 + i * 3 + j, col)] = 0.5 * ik.dot(&v.a[i][j]);
                }
            }
        }
    }
    let sym3 = sym_embedding(3, 3).transpose() * c;
    SymbolMap {
        xi: *xi,
        source: (5, 1),
        target: (6, 0),
        degree: 1,
        matrix: basis(sym3_projectors(), 6, 0).transpose() * sym3,
    }
}

/// Unit covectors from a fixed seed.
pub fn covector_design(count: usize, seed: u64) -> Vec<Vector4<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
            v.normalize()
        })
        .collect()
}

/// Ranks and exactness defects of the symbol sequence at one covector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub xi: [f64; 4],
    pub ranks: [usize; 3],
    /// Distance between `ker sigma(A)` and `im sigma(D)`.
    pub kernel_a: f64,
    /// Distance between `ker sigma(B)` and `im sigma(A)`.
    pub kernel_b: f64,
    /// Distance between the kernels of the reduced and unreduced `sigma(A)`.
    pub unreduced_a: f64,
}

impl ExactnessReport {
    pub fn max_distance(&self) -> f64 {
        self.kernel_a.max(self.kernel_b).max(self.unreduced_a)
    }
}

pub fn exactness(xi: &Vector4<f64>) -> ExactnessReport {
    let d = symbol_d(xi);
    let a = symbol_a(xi);
    let b = symbol_b(xi);
    let au = symbol_a_unreduced(xi);
    ExactnessReport {
        xi: [xi[0], xi[1], xi[2], xi[3]],
        ranks: [d.rank(), a.rank(), b.rank()],
        kernel_a: subspace_distance(&a.kernel(), &d.image(), DEFAULT_RANK_TOL),
        kernel_b: subspace_distance(&b.kernel(), &a.image(), DEFAULT_RANK_TOL),
        unreduced_a: subspace_distance(&a.kernel(), &au.kernel(), DEFAULT_RANK_TOL),
    }
}

/// Homology dimensions and index of the deformation complex, quoted rather than computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionLedger {
    #[serde(rename = "H0")]
    pub h0: u32,
    #[serde(rename = "H1")]
    pub h1: u32,
    #[serde(rename = "H2")]
    pub h2: u32,
    #[serde(rename = "H3")]
    pub h3: u32,
    pub index: u32,
    /// Always false: the index computation is not carried out here.
    pub recompute: bool,
}

pub fn dimension_ledger() -> DimensionLedger {
    DimensionLedger {
        h0: 10,
        h1: 35,
        h2: 0,
        h3: 0,
        index: 35,
        recompute: false,
    }
}
