use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an open convex cone is described.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeRepr {
    /// `mask[i]` means `x_i > 0` is imposed. All-false is the whole space.
    OrthantMask(Vec<bool>),
    /// Unit inward normals; the cone is `{x : ν·x > 0 for every ν}`.
    Halfspaces(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    n: usize,
    repr: ConeRepr,
}

impl Cone {
    pub fn orthant_mask(mask: Vec<bool>) -> Result<Self> {
        if mask.len() < 2 {
            return Err(Error::Config(format!(
                "cone dimension must be at least 2 (got {})",
                mask.len()
            )));
        }
        Ok(Self {
            n: mask.len(),
            repr: ConeRepr::OrthantMask(mask),
        })
    }

    pub fn whole_space(n: usize) -> Result<Self> {
        Self::orthant_mask(vec![false; n])
    }

    pub fn positive_orthant(n: usize) -> Result<Self> {
        Self::orthant_mask(vec![true; n])
    }

    /// Build from inward normals; they are normalized here.
    pub fn halfspaces(n: usize, normals: Vec<Vec<f64>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!(
                "cone dimension must be at least 2 (got {n})"
            )));
        }
        let mut unit = Vec::with_capacity(normals.len());
        for normal in normals {
            if normal.len() != n {
                return Err(Error::Config(format!(
                    "halfspace normal has length {} but n = {n}",
                    normal.len()
                )));
            }
            let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::Config("halfspace normal must be non-zero".into()));
            }
            unit.push(normal.iter().map(|v| v / norm).collect());
        }
        let cone = Self {
            n,
            repr: ConeRepr::Halfspaces(unit),
        };
        if n == 2 && cone.arc_2d().is_none() {
            return Err(Error::Config("halfspaces describe an empty cone".into()));
        }
        Ok(cone)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &ConeRepr {
        &self.repr
    }

    pub fn is_whole_space(&self) -> bool {
        match &self.repr {
            ConeRepr::OrthantMask(mask) => mask.iter().all(|m| !m),
            ConeRepr::Halfspaces(normals) => normals.is_empty(),
        }
    }

    /// Inward unit normals of the bounding hyperplanes.
    pub fn inward_normals(&self) -> Vec<Vec<f64>> {
        match &self.repr {
            ConeRepr::OrthantMask(mask) => mask
                .iter()
                .enumerate()
                .filter(|(_, m)| **m)
                .map(|(i, _)| {
                    let mut e = vec![0.0; self.n];
                    e[i] = 1.0;
                    e
                })
                .collect(),
            ConeRepr::Halfspaces(normals) => normals.clone(),
        }
    }

    /// Membership in the open cone.
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.n);
        if x.iter().all(|v| *v == 0.0) {
            return false;
        }
        match &self.repr {
            ConeRepr::OrthantMask(mask) => mask.iter().zip(x).all(|(m, v)| !m || *v > 0.0),
            ConeRepr::Halfspaces(normals) => normals.iter().all(|nu| dot(nu, x) > 0.0),
        }
    }

    /// Sine of the angle between `x` and the nearest bounding hyperplane;
    /// `+∞` for the whole space and negative outside the cone.
    pub fn boundary_clearance(&self, x: &[f64]) -> f64 {
        let norm = dot(x, x).sqrt();
        self.inward_normals()
            .iter()
            .map(|nu| dot(nu, x) / norm)
            .fold(f64::INFINITY, f64::min)
    }

    /// Map a symmetric sample of the sphere into the cone. Orthant masks fold
    /// coordinates with `abs`, which preserves uniformity; halfspace cones
    /// reject.
    pub fn fold(&self, x: &[f64]) -> Option<Vec<f64>> {
        match &self.repr {
            ConeRepr::OrthantMask(mask) => {
                let folded: Vec<f64> = mask
                    .iter()
                    .zip(x)
                    .map(|(m, v)| if *m { v.abs() } else { *v })
                    .collect();
                self.contains(&folded).then_some(folded)
            }
            ConeRepr::Halfspaces(_) => self.contains(x).then(|| x.to_vec()),
        }
    }

    /// Number of sign constraints removed by [`Cone::fold`] (orthant masks only).
    pub(crate) fn folded_coordinates(&self) -> Option<usize> {
        match &self.repr {
            ConeRepr::OrthantMask(mask) => Some(mask.iter().filter(|m| **m).count()),
            ConeRepr::Halfspaces(_) => None,
        }
    }

    /// `x₀ ∈ −Ē ∩ Ē`, the lineality space of the closed cone.
    pub fn is_translation_admissible(&self, x0: &[f64]) -> bool {
        if x0.len() != self.n {
            return false;
        }
        let scale = dot(x0, x0).sqrt().max(1.0);
        self.inward_normals()
            .iter()
            .all(|nu| dot(nu, x0).abs() <= 1e-12 * scale)
    }

    /// Angular interval `(a, b)` of the 2-D cone, with `b − a ≤ 2π`.
    pub(crate) fn arc_2d(&self) -> Option<(f64, f64)> {
        if self.n != 2 {
            return None;
        }
        match &self.repr {
            ConeRepr::OrthantMask(mask) => Some(match (mask[0], mask[1]) {
                (false, false) => (0.0, 2.0 * PI),
                (true, false) => (-0.5 * PI, 0.5 * PI),
                (false, true) => (0.0, PI),
                (true, true) => (0.0, 0.5 * PI),
            }),
            ConeRepr::Halfspaces(normals) => {
                let Some(first) = normals.first() else {
                    return Some((0.0, 2.0 * PI));
                };
                let center = first[1].atan2(first[0]);
                // Work relative to the first normal's direction.
                let (mut lo, mut hi) = (-0.5 * PI, 0.5 * PI);
                for nu in &normals[1..] {
                    let mut d = nu[1].atan2(nu[0]) - center;
                    while d > PI {
                        d -= 2.0 * PI;
                    }
                    while d <= -PI {
                        d += 2.0 * PI;
                    }
                    lo = lo.max(d - 0.5 * PI);
                    hi = hi.min(d + 0.5 * PI);
                }
                (hi - lo > 1e-14).then_some((center + lo, center + hi))
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wedge() -> Cone {
        // {x₁ > 0, x₂ > x₁}
        Cone::halfspaces(2, vec![vec![1.0, 0.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn masks() {
        let quadrant = Cone::positive_orthant(2).unwrap();
        assert!(quadrant.contains(&[1.0, 2.0]));
        assert!(!quadrant.contains(&[1.0, 0.0]));
        assert!(!quadrant.contains(&[-1.0, 2.0]));
        let plane = Cone::whole_space(2).unwrap();
        assert!(plane.is_whole_space());
        assert!(plane.contains(&[-1.0, -3.0]));
        assert!(!plane.contains(&[0.0, 0.0]));
    }

    #[test]
    fn wedge_arc() {
        let (a, b) = wedge().arc_2d().unwrap();
        assert!((a - PI / 4.0).abs() < 1e-14, "{a}");
        assert!((b - PI / 2.0).abs() < 1e-14, "{b}");
    }

    #[test]
    fn empty_halfspaces_rejected() {
        assert!(Cone::halfspaces(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn lineality() {
        let half_plane = Cone::orthant_mask(vec![true, false]).unwrap();
        assert!(half_plane.is_translation_admissible(&[0.0, 3.0]));
        assert!(!half_plane.is_translation_admissible(&[0.5, 3.0]));
        assert!(Cone::whole_space(3)
            .unwrap()
            .is_translation_admissible(&[1.0, -2.0, 3.0]));
    }

    fn cones() -> Vec<Cone> {
        vec![
            Cone::positive_orthant(2).unwrap(),
            Cone::orthant_mask(vec![true, false, true]).unwrap(),
            wedge(),
            Cone::halfspaces(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn scale_invariant(x in prop::collection::vec(-5.0f64..5.0, 3), t in 1e-3f64..1e3) {
            for cone in cones() {
                let x = &x[..cone.dim()];
                if cone.contains(x) {
                    let scaled: Vec<f64> = x.iter().map(|v| t * v).collect();
                    prop_assert!(cone.contains(&scaled));
                }
            }
        }

        #[test]
        fn convex(
            x in prop::collection::vec(-5.0f64..5.0, 3),
            y in prop::collection::vec(-5.0f64..5.0, 3),
        ) {
            for cone in cones() {
                let n = cone.dim();
                if cone.contains(&x[..n]) && cone.contains(&y[..n]) {
                    let mid: Vec<f64> = (0..n).map(|i| 0.5 * (x[i] + y[i])).collect();
                    prop_assert!(cone.contains(&mid));
                }
            }
        }
    }
}
