use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

use super::cone::{Cone, ConeRepr};

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    /// `c · x₁^{a₁} ⋯ xₙ^{aₙ}` with `aᵢ ≥ 0`.
    Monomial { exponents: Vec<f64>, coefficient: f64 },
    /// User-supplied value and gradient; homogeneity is the caller's promise.
    Callback {
        name: String,
        value: ValueFn,
        gradient: GradientFn,
    },
    /// `∏ wᵢ^{eᵢ}`.
    Product(Vec<(Weight, f64)>),
}

/// A positive weight on a cone, homogeneous of degree `τ`.
#[derive(Clone)]
pub struct Weight {
    n: usize,
    degree: f64,
    kind: WeightKind,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Weight {
    pub fn monomial(exponents: Vec<f64>) -> Result<Self> {
        Self::scaled_monomial(exponents, 1.0)
    }

    pub fn scaled_monomial(exponents: Vec<f64>, coefficient: f64) -> Result<Self> {
        if exponents.len() < 2 {
            return Err(Error::Config("weight dimension must be at least 2".into()));
        }
        if let Some(a) = exponents.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::Config(format!(
                "monomial exponents must be finite and non-negative (got {a}); \
                 use a callback weight for negative degrees"
            )));
        }
        if !(coefficient.is_finite() && coefficient > 0.0) {
            return Err(Error::Config(format!(
                "weight coefficient must be positive (got {coefficient})"
            )));
        }
        Ok(Self {
            n: exponents.len(),
            degree: exponents.iter().sum(),
            kind: WeightKind::Monomial {
                exponents,
                coefficient,
            },
        })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::scaled_monomial(vec![0.0; n], c)
    }

    pub fn callback(
        name: impl Into<String>,
        n: usize,
        degree: f64,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(degree.is_finite() && degree > -(n as f64)) {
            return Err(Error::Config(format!(
                "weight degree must exceed −n = −{n} (got {degree})"
            )));
        }
        Ok(Self {
            n,
            degree,
            kind: WeightKind::Callback {
                name: name.into(),
                value: Arc::new(value),
                gradient: Arc::new(gradient),
            },
        })
    }

    /// `∏ factorᵢ^{powerᵢ}`; the degree is `Σ powerᵢ τᵢ`.
    pub fn product(factors: Vec<(Weight, f64)>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::Config("empty weight product".into()));
        };
        let n = first.0.n;
        if factors.iter().any(|(w, _)| w.n != n) {
            return Err(Error::Config("weight product mixes dimensions".into()));
        }
        // Collapse monomials so exponents stay analytic.
        if factors
            .iter()
            .all(|(w, _)| matches!(w.kind, WeightKind::Monomial { .. }))
        {
            let mut exponents = vec![0.0; n];
            let mut log_coef = 0.0;
            for (w, e) in &factors {
                if let WeightKind::Monomial {
                    exponents: a,
                    coefficient,
                } = &w.kind
                {
                    for (acc, ai) in exponents.iter_mut().zip(a) {
                        *acc += e * ai;
                    }
                    log_coef += e * coefficient.ln();
                }
            }
            if exponents.iter().all(|a| *a >= 0.0) {
                return Self::scaled_monomial(exponents, log_coef.exp());
            }
        }
        let degree = factors.iter().map(|(w, e)| e * w.degree).sum();
        Ok(Self {
            n,
            degree,
            kind: WeightKind::Product(factors),
        })
    }

    /// `c · self`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::product(vec![(self.clone(), 1.0), (Self::constant(self.n, c)?, 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn is_constant(&self) -> bool {
        matches!(&self.kind, WeightKind::Monomial { exponents, .. } if exponents.iter().all(|a| *a == 0.0))
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::Monomial {
                exponents,
                coefficient,
            } => format!("monomial(c={coefficient}, a={exponents:?})"),
            WeightKind::Callback { name, .. } => format!("callback({name}, τ={})", self.degree),
            WeightKind::Product(factors) => {
                let parts: Vec<String> = factors
                    .iter()
                    .map(|(w, e)| format!("{}^{e}", w.describe()))
                    .collect();
                parts.join("·")
            }
        }
    }

    /// Raw value; may be non-finite off the cone.
    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.kind {
            WeightKind::Monomial {
                exponents,
                coefficient,
            } => {
                let mut v = *coefficient;
                for (xi, a) in x.iter().zip(exponents) {
                    if *a != 0.0 {
                        v *= xi.powf(*a);
                    }
                }
                v
            }
            WeightKind::Callback { value, .. } => value(x),
            WeightKind::Product(factors) => factors
                .iter()
                .map(|(w, e)| w.value(x).powf(*e))
                .product(),
        }
    }

    /// Value with a positivity/finiteness check.
    pub fn try_value(&self, x: &[f64]) -> Result<f64> {
        let v = self.value(x);
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                point: x.to_vec(),
                detail: format!("{} evaluated to {v}", self.describe()),
            })
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            WeightKind::Monomial { exponents, .. } => {
                let v = self.value(x);
                exponents
                    .iter()
                    .zip(x)
                    .map(|(a, xi)| if *a == 0.0 { 0.0 } else { a * v / xi })
                    .collect()
            }
            WeightKind::Callback { gradient, .. } => gradient(x),
            WeightKind::Product(_) => {
                let v = self.value(x);
                self.log_gradient(x).into_iter().map(|g| g * v).collect()
            }
        }
    }

    /// `∇ω/ω`, which stays well-scaled where `ω` itself under- or overflows.
    pub fn log_gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            WeightKind::Monomial { exponents, .. } => exponents
                .iter()
                .zip(x)
                .map(|(a, xi)| if *a == 0.0 { 0.0 } else { a / xi })
                .collect(),
            WeightKind::Callback { .. } => {
                let v = self.value(x);
                self.gradient(x).into_iter().map(|g| g / v).collect()
            }
            WeightKind::Product(factors) => {
                let mut acc = vec![0.0; self.n];
                for (w, e) in factors {
                    for (a, g) in acc.iter_mut().zip(w.log_gradient(x)) {
                        *a += e * g;
                    }
                }
                acc
            }
        }
    }

    /// `ln ω(x)`.
    pub fn log_value(&self, x: &[f64]) -> f64 {
        match &self.kind {
            WeightKind::Monomial {
                exponents,
                coefficient,
            } => {
                let mut v = coefficient.ln();
                for (xi, a) in x.iter().zip(exponents) {
                    if *a != 0.0 {
                        v += a * xi.ln();
                    }
                }
                v
            }
            WeightKind::Callback { value, .. } => value(x).ln(),
            WeightKind::Product(factors) => factors.iter().map(|(w, e)| e * w.log_value(x)).sum(),
        }
    }

    /// Check that the weight is meaningful on `cone`: matching dimension, and
    /// monomial exponents vanish on coordinates the cone leaves free.
    pub fn validate_for(&self, cone: &Cone) -> Result<()> {
        if self.n != cone.dim() {
            return Err(Error::Config(format!(
                "weight dimension {} does not match cone dimension {}",
                self.n,
                cone.dim()
            )));
        }
        match &self.kind {
            WeightKind::Monomial { exponents, .. } => {
                let free: Vec<usize> = match cone.repr() {
                    ConeRepr::OrthantMask(mask) => (0..self.n).filter(|i| !mask[*i]).collect(),
                    ConeRepr::Halfspaces(_) => {
                        // xᵢ must stay positive on the cone for xᵢ^{aᵢ} to make sense.
                        (0..self.n)
                            .filter(|i| !halfspaces_force_positive(cone, *i))
                            .collect()
                    }
                };
                if let Some(i) = free.iter().find(|i| exponents[**i] != 0.0) {
                    return Err(Error::Config(format!(
                        "monomial exponent a{} = {} is non-zero on a coordinate the cone does not keep positive",
                        i + 1,
                        exponents[*i]
                    )));
                }
                Ok(())
            }
            WeightKind::Callback { .. } => Ok(()),
            WeightKind::Product(factors) => {
                for (w, _) in factors {
                    w.validate_for(cone)?;
                }
                Ok(())
            }
        }
    }

    /// Exact `∫_{S^{n−1}∩E} ω` for monomials on orthant cones.
    pub fn omega_se_exact(&self, cone: &Cone) -> Option<f64> {
        let WeightKind::Monomial {
            exponents,
            coefficient,
        } = &self.kind
        else {
            return None;
        };
        let masked = cone.folded_coordinates()?;
        let mut log = coefficient.ln() + (1.0 - masked as f64) * std::f64::consts::LN_2;
        for a in exponents {
            log += log_gamma(0.5 * (a + 1.0)).ok()?;
        }
        log -= log_gamma(0.5 * (self.degree + self.n as f64)).ok()?;
        Some(log.exp())
    }
}

fn halfspaces_force_positive(cone: &Cone, i: usize) -> bool {
    // A normal equal to eᵢ is the only certificate we look for.
    cone.inward_normals()
        .iter()
        .any(|nu| (nu[i] - 1.0).abs() < 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn non_monomial() -> Weight {
        // e^{x₁/x₂}·x₂, degree 1
        Weight::callback(
            "exp_ratio",
            2,
            1.0,
            |x| (x[0] / x[1]).exp() * x[1],
            |x| {
                let e = (x[0] / x[1]).exp();
                vec![e, e * (1.0 - x[0] / x[1])]
            },
        )
        .unwrap()
    }

    fn weights() -> Vec<Weight> {
        vec![
            Weight::monomial(vec![1.0, 1.0]).unwrap(),
            Weight::monomial(vec![0.5, 2.0]).unwrap(),
            Weight::scaled_monomial(vec![3.0, 0.0], 2.5).unwrap(),
            non_monomial(),
            Weight::product(vec![(non_monomial(), 0.5), (Weight::monomial(vec![1.0, 0.0]).unwrap(), 1.5)])
                .unwrap(),
        ]
    }

    #[test]
    fn product_of_monomials_collapses() {
        let w = Weight::product(vec![
            (Weight::monomial(vec![2.0, 0.0]).unwrap(), 0.5),
            (Weight::scaled_monomial(vec![0.0, 4.0], 9.0).unwrap(), 0.5),
        ])
        .unwrap();
        match w.kind() {
            WeightKind::Monomial {
                exponents,
                coefficient,
            } => {
                assert_eq!(exponents, &vec![1.0, 2.0]);
                assert!((coefficient - 3.0).abs() < 1e-14);
            }
            _ => panic!("expected monomial"),
        }
    }

    #[test]
    fn rejects_negative_exponent() {
        assert!(Weight::monomial(vec![-1.0, 0.0]).is_err());
    }

    #[test]
    fn validate_on_half_plane() {
        let half = Cone::orthant_mask(vec![true, false]).unwrap();
        assert!(Weight::monomial(vec![0.5, 0.0]).unwrap().validate_for(&half).is_ok());
        assert!(Weight::monomial(vec![0.5, 1.0]).unwrap().validate_for(&half).is_err());
    }

    #[test]
    fn exact_sphere_integrals() {
        let quadrant = Cone::positive_orthant(2).unwrap();
        let plane = Cone::whole_space(2).unwrap();
        let x1x2 = Weight::monomial(vec![1.0, 1.0]).unwrap();
        let x1 = Weight::monomial(vec![1.0, 0.0]).unwrap();
        let one = Weight::constant(2, 1.0).unwrap();
        assert!((x1x2.omega_se_exact(&quadrant).unwrap() - 0.5).abs() < 1e-14);
        assert!((x1.omega_se_exact(&quadrant).unwrap() - 1.0).abs() < 1e-14);
        assert!((one.omega_se_exact(&plane).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-13);
        let octant = Cone::positive_orthant(3).unwrap();
        let one3 = Weight::constant(3, 1.0).unwrap();
        assert!((one3.omega_se_exact(&octant).unwrap() - 0.5 * std::f64::consts::PI).abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn homogeneity_and_euler(x1 in 0.05f64..3.0, x2 in 0.05f64..3.0, t in 0.1f64..10.0) {
            let x = [x1, x2];
            let tx = [t * x1, t * x2];
            for w in weights() {
                let v = w.value(&x);
                prop_assert!(v > 0.0);
                let scaled = w.value(&tx);
                prop_assert!((scaled - t.powf(w.degree()) * v).abs() <= 1e-10 * scaled);
                let euler: f64 = w.gradient(&x).iter().zip(&x).map(|(g, xi)| g * xi).sum();
                prop_assert!((euler - w.degree() * v).abs() <= 1e-10 * v.max(1e-300) * (1.0 + w.degree().abs()));
            }
        }
    }
}
