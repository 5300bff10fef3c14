use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::surface::LevelSurface;
use crate::error::{QcError, Result};
use crate::quatalg::AmbientVector;

/// Deterministic points on the surface: Gaussian directions pushed to the unit
/// sphere and retracted. Failed retractions are redrawn, up to ten draws per point.
pub fn sample_points(surface: &LevelSurface, count: usize, seed: u64) -> Result<Vec<AmbientVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = count.max(1) * 10;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts == budget {
            return Err(QcError::SamplingExhausted { attempts });
        }
        attempts += 1;
        let g = AmbientVector::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let n = g.norm();
        if n < 1e-8 {
            continue;
        }
        if let Ok(p) = surface.retract(&(g / n)) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatalg::QuatMatrix2;

    #[test]
    fn sphere_samples_are_unit_and_reproducible() {
        let a = sample_points(&LevelSurface::Sphere, 32, 7).unwrap();
        assert!(a.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        assert_eq!(a, sample_points(&LevelSurface::Sphere, 32, 7).unwrap());
        assert_ne!(a, sample_points(&LevelSurface::Sphere, 32, 8).unwrap());
    }

    #[test]
    fn squashed_samples_satisfy_the_equation() {
        let d = QuatMatrix2::skew_hermitian(&[0.02, 0.01, -0.03, 0.0, 0.04, 0.01, -0.02, 0.03, 0.0, 0.01]);
        let s = LevelSurface::squashed(d);
        for p in sample_points(&s, 100, 1).unwrap() {
            assert!((s.value(&p) - 1.0).abs() < 1e-10);
            let proj = s.tangent_projector(&p).unwrap();
            let sv = proj.svd(false, false).singular_values;
            assert_eq!(sv.iter().filter(|&&x| x > 1e-8).count(), 7);
        }
    }
}
