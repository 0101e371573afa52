use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::Cone;

/// Angular distance kept from `∂E` by every sampled direction.
pub const BOUNDARY_ANGLE: f64 = 1e-3;

pub const RADIUS_RANGE: (f64, f64) = (1e-2, 1e2);

const MAX_ATTEMPTS: usize = 100_000;

/// Draws directions uniformly on `S^{n−1} ∩ E` (away from the boundary) and
/// radii log-uniformly.
pub struct ConeSampler<'a> {
    cone: &'a Cone,
    rng: ChaCha8Rng,
    min_clearance: f64,
}

impl<'a> ConeSampler<'a> {
    pub fn new(cone: &'a Cone, seed: u64) -> Self {
        Self {
            cone,
            rng: ChaCha8Rng::seed_from_u64(seed),
            min_clearance: BOUNDARY_ANGLE.sin(),
        }
    }

    pub fn direction(&mut self) -> Result<Vec<f64>> {
        let n = self.cone.dim();
        for _ in 0..MAX_ATTEMPTS {
            let g: Vec<f64> = (0..n).map(|_| self.rng.sample(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            let unit: Vec<f64> = g.iter().map(|v| v / norm).collect();
            if let Some(dir) = self.cone.fold(&unit) {
                if self.cone.boundary_clearance(&dir) >= self.min_clearance {
                    return Ok(dir);
                }
            }
        }
        Err(Error::Config(
            "could not sample a direction inside the cone; is it too narrow?".into(),
        ))
    }

    pub fn radius(&mut self) -> f64 {
        let (lo, hi) = RADIUS_RANGE;
        let u: f64 = self.rng.random();
        (lo.ln() + u * (hi.ln() - lo.ln())).exp()
    }

    pub fn point(&mut self) -> Result<Vec<f64>> {
        let dir = self.direction()?;
        let r = self.radius();
        Ok(dir.into_iter().map(|v| v * r).collect())
    }

    pub fn pairs(&mut self, count: usize) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        (0..count)
            .map(|_| Ok((self.point()?, self.point()?)))
            .collect()
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside() {
        let cone = Cone::halfspaces(2, vec![vec![1.0, 0.0], vec![-1.0, 1.0]]).unwrap();
        let a = ConeSampler::new(&cone, 7).pairs(200).unwrap();
        let b = ConeSampler::new(&cone, 7).pairs(200).unwrap();
        assert_eq!(a, b);
        for (x, y) in &a {
            assert!(cone.contains(x) && cone.contains(y));
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((RADIUS_RANGE.0..=RADIUS_RANGE.1).contains(&r));
            assert!(cone.boundary_clearance(x) >= BOUNDARY_ANGLE.sin() * 0.999);
        }
    }
}
