//! The adapted connection: Koszul partial connection on `H`, its vertical
//! extension, the derivation law of the quaternionic structure and the Bianchi
//! operator applied to the vertical torsion.

use nalgebra::{DVector, Matrix3, Matrix4, Vector4};

use crate::error::{QcError, Result};
use crate::geometry::{directional, lie_bracket, FD_STEP};
use crate::qcstruct::{
    adapted_complement, adapted_complement_extended, frame_complex, local_structure, ComplementKind, ContactTriple,
    FramePack, PipelineOptions,
};
use crate::quatalg::{AmbientMatrix, AmbientVector};
use crate::rep4::{sym3_projectors, sym_embedding};

pub type VectorField<'a> = dyn Fn(&AmbientVector) -> AmbientVector + 'a;

/// Options pinned to the base point so every stencil evaluation uses the same frame seed.
fn pinned(pack: &FramePack, opts: &PipelineOptions) -> PipelineOptions {
    PipelineOptions {
        seed_axis: Some(pack.seed),
        ..*opts
    }
}

/// Horizontal frame field `q -> h(q)`, extended along level sets.
pub fn frame_field(ct: &ContactTriple, q: &AmbientVector, seed: usize, opts: &PipelineOptions) -> [AmbientVector; 4] {
    local_structure(ct, q, opts.path)
        .map(|l| l.frame(seed))
        .unwrap_or([AmbientVector::from_element(f64::NAN); 4])
}

/// Metric on `H_q` extended by zero, as an ambient bilinear form.
pub fn metric_field(ct: &ContactTriple, q: &AmbientVector, opts: &PipelineOptions) -> AmbientMatrix {
    local_structure(ct, q, opts.path)
        .map(|l| l.ambient_metric())
        .unwrap_or(AmbientMatrix::from_element(f64::NAN))
}

/// `2 g(nabla_X Y, Z)` by the six-term Koszul formula, with brackets projected
/// to `H` along the complement of `pack`.
pub fn koszul(
    ct: &ContactTriple,
    pack: &FramePack,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    opts: &PipelineOptions,
) -> f64 {
    let p = pack.point();
    let g = pack.local.ambient_metric();
    let proj = pack.local.tangent_projector();
    let deriv = |along: &VectorField, u: &VectorField, v: &VectorField| {
        let f = |q: &AmbientVector| {
            let m = metric_field(ct, q, opts);
            (u(q).transpose() * m * v(q))[(0, 0)]
        };
        directional(&f, p, &along(p), FD_STEP)
    };
    let gp = |u: &AmbientVector, v: &AmbientVector| (u.transpose() * g * v)[(0, 0)];
    let bracket_h = |u: &VectorField, v: &VectorField| pack.horizontal_part(&lie_bracket(u, v, p, &proj, FD_STEP));
    deriv(x, y, z) + deriv(y, z, x) - deriv(z, x, y) + gp(&bracket_h(x, y), &z(p))
        - gp(&bracket_h(x, z), &y(p))
        - gp(&bracket_h(y, z), &x(p))
}

/// Connection one-forms of the adapted frame at a point.
#[derive(Clone, Debug)]
pub struct ConnectionCoefficients {
    pub pack: FramePack,
    /// `omega[a][(c, b)] = g(nabla_{h_a} h_b, h_c)`.
    pub omega: [Matrix4<f64>; 4],
    /// `[h_a, h_b]` at the point.
    pub brackets: [[AmbientVector; 4]; 4],
    /// `D_{h_a} h_b`, ambient directional derivatives of the frame field.
    pub frame_derivatives: [[AmbientVector; 4]; 4],
}

impl ConnectionCoefficients {
    /// `g(nabla_X Y, h_c)` for `X = sum x_a h_a`, `Y = sum y_b h_b` with
    /// `X(y_b) = dy[b]`.
    pub fn covariant(&self, x: &Vector4<f64>, y: &Vector4<f64>, dy: &Vector4<f64>) -> Vector4<f64> {
        let mut out = *dy;
        for a in 0..4 {
            out += self.omega[a] * y * x[a];
        }
        out
    }

    /// `gamma[i][j][a] = <I_i, [omega(h_a), I_j]> / 4`, so `nabla I_j = sum_i gamma_ij I_i`.
    pub fn gamma(&self) -> [[Vector4<f64>; 3]; 3] {
        let triple = frame_complex();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                Vector4::from_fn(|a, _| {
                    let w = self.omega[a];
                    let d = w * triple[j] - triple[j] * w;
                    triple[i].component_mul(&d).sum() / 4.0
                })
            })
        })
    }
}

/// Koszul coefficients of the adapted frame, brackets by central differences.
pub fn connection_coefficients(
    ct: &ContactTriple,
    p: &AmbientVector,
    opts: &PipelineOptions,
) -> Result<ConnectionCoefficients> {
    let pack = adapted_complement(ct, p, opts)?;
    connection_for(ct, pack, opts)
}

pub fn connection_for(ct: &ContactTriple, pack: FramePack, opts: &PipelineOptions) -> Result<ConnectionCoefficients> {
    if pack.complement != ComplementKind::Adapted {
        return Err(QcError::NotAdapted);
    }
    let o = pinned(&pack, opts);
    let p = *pack.point();
    let proj = pack.local.tangent_projector();
    let mut dh = [[AmbientVector::zeros(); 4]; 4];
    for a in 0..4 {
        let len = pack.h[a].norm();
        let d = pack.h[a] / len;
        let plus = frame_field(ct, &(p + d * FD_STEP), pack.seed, &o);
        let minus = frame_field(ct, &(p - d * FD_STEP), pack.seed, &o);
        for b in 0..4 {
            dh[a][b] = (plus[b] - minus[b]) * (len / (2.0 * FD_STEP));
        }
    }
    if dh.iter().flatten().any(|v| !v.iter().all(|x| x.is_finite())) {
        return Err(QcError::SingularPoint);
    }
    let brackets: [[AmbientVector; 4]; 4] =
        std::array::from_fn(|a| std::array::from_fn(|b| proj * (dh[a][b] - dh[b][a])));
    let coords: [[Vector4<f64>; 4]; 4] =
        std::array::from_fn(|a| std::array::from_fn(|b| pack.frame_coords(&brackets[a][b])));
    let bb = |a: usize, b: usize, c: usize| coords[a][b][c];
    let omega = std::array::from_fn(|a| Matrix4::from_fn(|c, b| 0.5 * (bb(a, b, c) - bb(a, c, b) - bb(b, c, a))));
    Ok(ConnectionCoefficients {
        pack,
        omega,
        brackets,
        frame_derivatives: dh,
    })
}

/// Comparison of `gamma_ij` with `-(alpha_ij - alpha_ji) / 2` over the frame directions.
#[derive(Clone, Debug)]
pub struct GammaReport {
    pub gamma: [[Vector4<f64>; 3]; 3],
    pub expected: [[Vector4<f64>; 3]; 3],
    pub max_deviation: f64,
    pub frobenius_deviation: f64,
}

pub fn gamma_check(conn: &ConnectionCoefficients) -> Result<GammaReport> {
    if conn.pack.complement != ComplementKind::Adapted {
        return Err(QcError::NotAdapted);
    }
    let gamma = conn.gamma();
    let alpha = &conn.pack.alpha;
    let expected = std::array::from_fn(|i| std::array::from_fn(|j| (alpha[i][j] - alpha[j][i]) * -0.5));
    let mut max: f64 = 0.0;
    let mut fro = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let d = gamma[i][j] - expected[i][j];
            max = max.max(d.amax());
            fro += d.norm_squared();
        }
    }
    Ok(GammaReport {
        gamma,
        expected,
        max_deviation: max,
        frobenius_deviation: fro.sqrt(),
    })
}

/// Derivatives in the complement directions.
#[derive(Clone, Debug)]
pub struct VerticalConnection {
    /// `nabla[i][(c, b)] = g(nabla_{R_i} h_b, h_c)` after the correction.
    pub nabla: [Matrix4<f64>; 3],
    /// Projected derivative before the correction, metric-skew part only.
    pub initial: [Matrix4<f64>; 3],
    /// `T^H_{R_i}` in frame coordinates, `(T_{R_i, h_b})_H = sum_c t[(c, b)] h_c`.
    pub torsion: [Matrix4<f64>; 3],
    /// `[R_i, h_b]` at the point.
    pub brackets: [[AmbientVector; 4]; 3],
}

impl VerticalConnection {
    /// Largest `so(H)` component left in `T^H_{R_i}`.
    pub fn skew_torsion_defect(&self) -> f64 {
        self.torsion
            .iter()
            .map(|t| ((t - t.transpose()) * 0.5).amax())
            .fold(0.0, f64::max)
    }
}

fn skew(m: &Matrix4<f64>) -> Matrix4<f64> {
    (m - m.transpose()) * 0.5
}

/// Adapted complement fields `R_i` sampled around `p` along each frame direction.
fn reeb_derivatives(
    ct: &ContactTriple,
    pack: &FramePack,
    opts: &PipelineOptions,
) -> Result<[[AmbientVector; 3]; 4]> {
    let o = pinned(pack, opts);
    let p = *pack.point();
    let mut out = [[AmbientVector::zeros(); 3]; 4];
    for a in 0..4 {
        let len = pack.h[a].norm();
        let d = pack.h[a] / len;
        let plus = adapted_complement_extended(ct, &(p + d * FD_STEP), &o)?;
        let minus = adapted_complement_extended(ct, &(p - d * FD_STEP), &o)?;
        for i in 0..3 {
            out[a][i] = (plus.reeb[i] - minus.reeb[i]) * (len / (2.0 * FD_STEP));
        }
    }
    Ok(out)
}

/// `nabla_{R_i} h_b` from the projected derivative corrected by the unique
/// `a_R` in `so(H)` that removes the `so(H)` part of `T_{R, .}`.
pub fn vertical_extension(conn: &ConnectionCoefficients, ct: &ContactTriple, opts: &PipelineOptions) -> Result<VerticalConnection> {
    let pack = &conn.pack;
    let o = pinned(pack, opts);
    let p = *pack.point();
    let proj = pack.local.tangent_projector();
    let dr = reeb_derivatives(ct, pack, &o)?;
    let mut nabla = [Matrix4::zeros(); 3];
    let mut initial = [Matrix4::zeros(); 3];
    let mut torsion = [Matrix4::zeros(); 3];
    let mut brackets = [[AmbientVector::zeros(); 4]; 3];
    for i in 0..3 {
        let r = pack.reeb[i];
        let len = r.norm();
        let d = r / len;
        let plus = frame_field(ct, &(p + d * FD_STEP), pack.seed, &o);
        let minus = frame_field(ct, &(p - d * FD_STEP), pack.seed, &o);
        let mut m = Matrix4::zeros();
        let mut br = Matrix4::zeros();
        for b in 0..4 {
            let dh = (plus[b] - minus[b]) * (len / (2.0 * FD_STEP));
            m.set_column(b, &pack.frame_coords(&(proj * dh)));
            brackets[i][b] = proj * (dh - dr[b][i]);
            br.set_column(b, &pack.frame_coords(&brackets[i][b]));
        }
        let start = skew(&m);
        let tau = start - br;
        let corrected = start - skew(&tau);
        initial[i] = start;
        nabla[i] = corrected;
        torsion[i] = corrected - br;
    }
    Ok(VerticalConnection {
        nabla,
        initial,
        torsion,
        brackets,
    })
}

/// Check of `nabla_X R_i = -1/2 sum_j (alpha_ji(X) - alpha_ij(X)) R_j`, with
/// `nabla_X R_i` the metric part of `[X, R_i]_W` obtained from brackets.
#[derive(Clone, Debug)]
pub struct ReebDerivativeReport {
    /// `bracket[a][(j, i)] = eta~_j([h_a, R_i])`.
    pub bracket: [Matrix3<f64>; 4],
    pub max_deviation: f64,
    /// `max |eta~_j([h_a, R_i]) - alpha_ij(h_a)|`.
    pub bracket_deviation: f64,
}

pub fn reeb_derivative_check(ct: &ContactTriple, pack: &FramePack, opts: &PipelineOptions) -> Result<ReebDerivativeReport> {
    if pack.complement != ComplementKind::Adapted {
        return Err(QcError::NotAdapted);
    }
    let o = pinned(pack, opts);
    let p = *pack.point();
    let proj = pack.local.tangent_projector();
    let dr = reeb_derivatives(ct, pack, &o)?;
    let mut bracket = [Matrix3::zeros(); 4];
    let mut max: f64 = 0.0;
    let mut raw: f64 = 0.0;
    for i in 0..3 {
        let r = pack.reeb[i];
        let len = r.norm();
        let d = r / len;
        let plus = frame_field(ct, &(p + d * FD_STEP), pack.seed, &o);
        let minus = frame_field(ct, &(p - d * FD_STEP), pack.seed, &o);
        for a in 0..4 {
            let dh = (plus[a] - minus[a]) * (len / (2.0 * FD_STEP));
            let br = proj * (dr[a][i] - dh);
            let e = pack.eta(&br);
            for j in 0..3 {
                bracket[a][(j, i)] = e[j];
            }
        }
    }
    for a in 0..4 {
        let gamma = (bracket[a] - bracket[a].transpose()) * 0.5;
        for i in 0..3 {
            for j in 0..3 {
                let want = 0.5 * (pack.alpha[i][j][a] - pack.alpha[j][i][a]);
                max = max.max((gamma[(j, i)] - want).abs());
                raw = raw.max((bracket[a][(j, i)] - pack.alpha[i][j][a]).abs());
            }
        }
    }
    Ok(ReebDerivativeReport {
        bracket,
        max_deviation: max,
        bracket_deviation: raw,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BianchiReport {
    /// Norm of the `S^{6,0}` part of the symmetrized self-dual part of `d^nabla a`.
    pub residual: f64,
    /// The `S^{2,0}` part, which the identity leaves free.
    pub s20_part: f64,
    /// Norm of the torsion `t_ij = alpha_ij + alpha_ji` at the point.
    pub torsion_norm: f64,
    pub step: f64,
}

type Sigma = [[[f64; 3]; 3]; 4];

fn sigma_of(pack: &FramePack) -> Sigma {
    let t = pack.torsion();
    let s51 = crate::rep4::SymFamily::from_coords(&t.s51());
    std::array::from_fn(|b| std::array::from_fn(|k| std::array::from_fn(|l| 0.5 * s51.a[k][l][b])))
}

/// `B_H(T^W)`: the `S^{6,0}` part of `d^nabla a` for `a_ij = (alpha_ij + alpha_ji) / 2`,
/// differentiated on a central stencil of the given step.
pub fn bianchi_residual(ct: &ContactTriple, p: &AmbientVector, step: f64, opts: &PipelineOptions) -> Result<BianchiReport> {
    let conn = connection_coefficients(ct, p, opts)?;
    bianchi_with(ct, &conn, step, opts)
}

pub fn bianchi_with(ct: &ContactTriple, conn: &ConnectionCoefficients, step: f64, opts: &PipelineOptions) -> Result<BianchiReport> {
    let pack = &conn.pack;
    let o = pinned(pack, opts);
    let p = *pack.point();
    let sigma = sigma_of(pack);
    // Connection on the complement: nabla R_i = sum_j Gamma_ji R_j.
    let gamma_w: [Matrix3<f64>; 4] = std::array::from_fn(|a| {
        Matrix3::from_fn(|j, i| 0.5 * (pack.alpha[i][j][a] - pack.alpha[j][i][a]))
    });
    let mut nabla_sigma = [[[[0.0; 3]; 3]; 4]; 4];
    for a in 0..4 {
        let len = pack.h[a].norm();
        let d = pack.h[a] / len;
        let plus = sigma_of(&adapted_complement_extended(ct, &(p + d * step), &o)?);
        let minus = sigma_of(&adapted_complement_extended(ct, &(p - d * step), &o)?);
        for b in 0..4 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = (plus[b][k][l] - minus[b][k][l]) * (len / (2.0 * step));
                    for c in 0..4 {
                        v -= sigma[c][k][l] * conn.omega[a][(c, b)];
                    }
                    for j in 0..3 {
                        v -= gamma_w[a][(j, k)] * sigma[b][j][l];
                        v -= gamma_w[a][(j, l)] * sigma[b][k][j];
                    }
                    nabla_sigma[a][b][k][l] = v;
                }
            }
        }
    }
    let triple = frame_complex();
    let mut c = DVector::zeros(27);
    for m in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                let mut acc = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        let dab = nabla_sigma[a][b][k][l] - nabla_sigma[b][a][k][l];
                        acc += dab * triple[m][(b, a)];
                    }
                }
                c[m * 9 + k * 3 + l] = acc / 4.0;
            }
        }
    }
    let sym = sym_embedding(3, 3).transpose() * c;
    let table = sym3_projectors();
    Ok(BianchiReport {
        residual: (table.projector(6, 0).unwrap() * &sym).norm(),
        s20_part: (table.projector(2, 0).unwrap() * &sym).norm(),
        torsion_norm: pack.torsion().s51().norm(),
        step,
    })
}

/// Bianchi residual at steps `h` and `2h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RichardsonReport {
    pub fine: BianchiReport,
    pub coarse: BianchiReport,
}

impl RichardsonReport {
    pub fn ratio(&self) -> f64 {
        self.coarse.residual / self.fine.residual
    }

    /// Doubling the step scales the residual by a factor within `4 (1 +- slack)`,
    /// or the coarse residual is below `floor` altogether.
    pub fn second_order(&self, slack: f64, floor: f64) -> bool {
        self.coarse.residual <= floor || (self.ratio() - 4.0).abs() <= 4.0 * slack
    }
}

pub fn bianchi_richardson(ct: &ContactTriple, p: &AmbientVector, step: f64, opts: &PipelineOptions) -> Result<RichardsonReport> {
    let conn = connection_coefficients(ct, p, opts)?;
    Ok(RichardsonReport {
        fine: bianchi_with(ct, &conn, step, opts)?,
        coarse: bianchi_with(ct, &conn, 2.0 * step, opts)?,
    })
}

/// Horizontal field `sum_a x_a(q) h_a(q)` with affine coefficients `x_a(q) = c_a + l_a . q`
/// in the frame field.
#[derive(Clone, Debug)]
pub struct AffineField {
    pub c: Vector4<f64>,
    pub l: [AmbientVector; 4],
}

impl AffineField {
    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        AffineField {
            c: Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0)),
            l: std::array::from_fn(|_| AmbientVector::from_fn(|_, _| rng.random_range(-1.0..1.0))),
        }
    }

    pub fn coeffs(&self, q: &AmbientVector) -> Vector4<f64> {
        Vector4::from_fn(|a, _| self.c[a] + self.l[a].dot(q))
    }

    /// Derivative of the coefficients along `v`.
    pub fn derivative(&self, v: &AmbientVector) -> Vector4<f64> {
        Vector4::from_fn(|a, _| self.l[a].dot(v))
    }

    pub fn eval(&self, ct: &ContactTriple, seed: usize, opts: &PipelineOptions, q: &AmbientVector) -> AmbientVector {
        let h = frame_field(ct, q, seed, opts);
        let x = self.coeffs(q);
        (0..4).map(|a| h[a] * x[a]).sum()
    }
}

/// Defects of the partial connection on three horizontal fields `X, Y, Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KoszulDefects {
    /// `|X g(Y, Z) - g(nabla_X Y, Z) - g(Y, nabla_X Z)|` with both covariant terms
    /// from the six-term formula.
    pub metric: f64,
    /// `|nabla_X Y - nabla_Y X - [X, Y]_H|` with the frame coefficients.
    pub torsion: f64,
    /// Mismatch between the six-term formula and the frame coefficients.
    pub formula: f64,
}

impl KoszulDefects {
    pub fn max(&self) -> f64 {
        self.metric.max(self.torsion).max(self.formula)
    }
}

pub fn koszul_defects(
    ct: &ContactTriple,
    conn: &ConnectionCoefficients,
    fields: &[AffineField; 3],
    opts: &PipelineOptions,
) -> KoszulDefects {
    let pack = &conn.pack;
    let o = pinned(pack, opts);
    let p = *pack.point();
    let [x, y, z] = fields;
    let fx = |q: &AmbientVector| x.eval(ct, pack.seed, &o, q);
    let fy = |q: &AmbientVector| y.eval(ct, pack.seed, &o, q);
    let fz = |q: &AmbientVector| z.eval(ct, pack.seed, &o, q);
    let (xp, yp) = (fx(&p), fy(&p));
    let nabla_xy = conn.covariant(&x.coeffs(&p), &y.coeffs(&p), &y.derivative(&xp));
    let nabla_yx = conn.covariant(&y.coeffs(&p), &x.coeffs(&p), &x.derivative(&yp));
    let proj = pack.local.tangent_projector();
    let bracket = pack.frame_coords(&pack.horizontal_part(&lie_bracket(fx, fy, &p, &proj, FD_STEP)));
    let k_xyz = koszul(ct, pack, &fx, &fy, &fz, &o);
    let k_xzy = koszul(ct, pack, &fx, &fz, &fy, &o);
    let gyz = |q: &AmbientVector| y.coeffs(q).dot(&z.coeffs(q));
    let lhs = directional(gyz, &p, &xp, FD_STEP);
    KoszulDefects {
        metric: (lhs - (k_xyz + k_xzy) / 2.0).abs(),
        torsion: (nabla_xy - nabla_yx - bracket).amax(),
        formula: (k_xyz / 2.0 - nabla_xy.dot(&z.coeffs(&p))).abs(),
    }
}
