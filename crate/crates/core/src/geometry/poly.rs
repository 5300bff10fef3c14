//! Real polynomials in the eight ambient coordinates.

use std::collections::BTreeMap;

use rand::Rng;

use crate::quatalg::{AmbientMatrix, AmbientVector};

pub type Exponent = [u8; 8];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Exponent, f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0; 8], c)
    }

    /// The coordinate function `x_k`.
    pub fn coordinate(k: usize) -> Self {
        let mut e = [0; 8];
        e[k] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn monomial(exponent: Exponent, coeff: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coeff);
        p
    }

    pub fn add_term(&mut self, exponent: Exponent, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert(0.0);
        *slot += coeff;
        if *slot == 0.0 {
            self.terms.remove(&exponent);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&d| d as u32).sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Random polynomial with every monomial of degree at most `degree`
    /// weighted by a uniform coefficient in `[-1, 1]`.
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        let mut p = Self::zero();
        for e in exponents_up_to(degree) {
            p.add_term(e, rng.random_range(-1.0..1.0));
        }
        p
    }

    pub fn eval(&self, x: &AmbientVector) -> f64 {
        self.terms.iter().map(|(e, c)| c * monomial_value(e, x)).sum()
    }

    pub fn derivative(&self, k: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut d = *e;
                d[k] -= 1;
                out.add_term(d, c * e[k] as f64);
            }
        }
        out
    }

    pub fn gradient(&self, x: &AmbientVector) -> AmbientVector {
        let mut g = AmbientVector::zeros();
        for (e, c) in &self.terms {
            for k in 0..8 {
                if e[k] > 0 {
                    let mut d = *e;
                    d[k] -= 1;
                    g[k] += c * e[k] as f64 * monomial_value(&d, x);
                }
            }
        }
        g
    }

    pub fn scale(&self, s: f64) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = std::array::from_fn(|k| ea[k] + eb[k]);
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

fn monomial_value(e: &Exponent, x: &AmbientVector) -> f64 {
    let mut v = 1.0;
    for k in 0..8 {
        for _ in 0..e[k] {
            v *= x[k];
        }
    }
    v
}

/// All exponents of total degree at most `degree`, in a fixed order.
pub fn exponents_up_to(degree: u32) -> Vec<Exponent> {
    fn rec(slot: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if slot == 8 {
            out.push(*cur);
            return;
        }
        for d in 0..=left {
            cur[slot] = d as u8;
            rec(slot + 1, left - d, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    rec(0, degree, &mut [0; 8], &mut out);
    out
}

/// Ambient vector field (or one-form coefficients) with polynomial components.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyVector {
    pub components: [Poly; 8],
}

impl PolyVector {
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        PolyVector {
            components: std::array::from_fn(|_| Poly::random(rng, degree)),
        }
    }

    /// The linear field `x -> M x`.
    pub fn linear(m: &AmbientMatrix) -> Self {
        PolyVector {
            components: std::array::from_fn(|a| {
                let mut p = Poly::zero();
                for b in 0..8 {
                    let mut e = [0; 8];
                    e[b] = 1;
                    p.add_term(e, m[(a, b)]);
                }
                p
            }),
        }
    }

    pub fn eval(&self, x: &AmbientVector) -> AmbientVector {
        AmbientVector::from_fn(|a, _| self.components[a].eval(x))
    }

    /// `J_ab = d component_a / d x_b`.
    pub fn jacobian(&self, x: &AmbientVector) -> AmbientMatrix {
        let mut j = AmbientMatrix::zeros();
        for a in 0..8 {
            j.set_row(a, &self.components[a].gradient(x).transpose());
        }
        j
    }

    pub fn scale(&self, s: f64) -> Self {
        PolyVector {
            components: std::array::from_fn(|a| self.components[a].scale(s)),
        }
    }

    pub fn add(&self, other: &PolyVector) -> Self {
        PolyVector {
            components: std::array::from_fn(|a| self.components[a].add(&other.components[a])),
        }
    }

    /// `x -> M v(x)` for a constant matrix.
    pub fn left_mul(&self, m: &AmbientMatrix) -> Self {
        PolyVector {
            components: std::array::from_fn(|a| {
                (0..8).fold(Poly::zero(), |acc, b| acc.add(&self.components[b].scale(m[(a, b)])))
            }),
        }
    }

    /// Inner product with another polynomial field, as a polynomial.
    pub fn dot(&self, other: &PolyVector) -> Poly {
        (0..8).fold(Poly::zero(), |acc, a| acc.add(&self.components[a].mul(&other.components[a])))
    }

    /// Gradient of a polynomial as a polynomial field.
    pub fn gradient_of(p: &Poly) -> Self {
        PolyVector {
            components: std::array::from_fn(|k| p.derivative(k)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_matches_symbolic_derivative_and_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Poly::random(&mut rng, 3);
        let x = AmbientVector::from_fn(|k, _| 0.1 * k as f64 - 0.3);
        let g = p.gradient(&x);
        let h = 1e-6;
        for k in 0..8 {
            assert!((p.derivative(k).eval(&x) - g[k]).abs() < 1e-12);
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            assert!(((p.eval(&xp) - p.eval(&xm)) / (2.0 * h) - g[k]).abs() < 1e-7);
        }
    }

    #[test]
    fn exponent_count_is_binomial() {
        assert_eq!(exponents_up_to(0).len(), 1);
        assert_eq!(exponents_up_to(1).len(), 9);
        assert_eq!(exponents_up_to(2).len(), 45);
    }

    #[test]
    fn products_evaluate_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = Poly::random(&mut rng, 2);
        let b = Poly::random(&mut rng, 1);
        let x = AmbientVector::from_fn(|k, _| (k as f64).sin());
        assert!((a.mul(&b).eval(&x) - a.eval(&x) * b.eval(&x)).abs() < 1e-12);
        assert!((a.add(&b).eval(&x) - a.eval(&x) - b.eval(&x)).abs() < 1e-12);
        assert_eq!(a.mul(&b).degree(), 3);
    }
}
