//! Closed-form integrals of radial profiles against homogeneous weights.
//!
//! All three reduce, after polar coordinates and `t = c r^{p′}/λ`, to a Beta
//! or Gamma value times `ω_SE = ∫_{S^{n−1}∩E} ω`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::params::Params;
use crate::specfun::{log_beta, log_gamma};

use super::cone::Cone;
use super::quadrature::{
    cone_integral, pairwise_sum, sphere_cone_quadrature, FnIntegrand, QuadratureGrid,
};
use super::weight::Weight;

/// Resolution used when `ω_SE` has no closed form.
pub const REFERENCE_RESOLUTION: usize = 256;

/// Quadrature estimate of `∫_{S^{n−1}∩E} ω`.
pub fn omega_se(weight: &Weight, cone: &Cone, grid: &QuadratureGrid) -> Result<f64> {
    weight.validate_for(cone)?;
    let terms: Vec<f64> = grid
        .nodes()
        .zip(&grid.weights)
        .map(|(x, w)| Ok(w * weight.try_value(x)?))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// `∫_{B∩E} ω = ω_SE / (n+τ)`.
pub fn ball_cone_weight_mass(weight: &Weight, cone: &Cone, grid: &QuadratureGrid) -> Result<f64> {
    let dim = cone.dim() as f64 + weight.degree();
    if dim <= 0.0 {
        return Err(domain("ball_cone_weight_mass", format!("n+τ = {dim} must be positive")));
    }
    Ok(omega_se(weight, cone, grid)? / dim)
}

/// Direct quadrature of `∫_{B∩E} ω`, independent of the `ω_SE` shortcut.
pub fn ball_mass_by_quadrature(weight: &Weight, cone: &Cone, grid: &QuadratureGrid) -> Result<f64> {
    let indicator = FnIntegrand::new(|_, _| 1.0).within(1.0);
    Ok(cone_integral(&indicator, weight, cone, grid)?.value)
}

/// `ω_SE` from the exact monomial formula when available, otherwise from a
/// fine sphere grid.
pub fn omega_se_reference(weight: &Weight, cone: &Cone) -> Result<f64> {
    if let Some(exact) = weight.omega_se_exact(cone) {
        return Ok(exact);
    }
    let grid = sphere_cone_quadrature(cone, REFERENCE_RESOLUTION)?;
    omega_se(weight, cone, &grid)
}

fn effective_dim(params: &Params, weight: &Weight) -> f64 {
    params.n as f64 + weight.degree()
}

/// `∫_E (λ + c|y|^{p′})^{−q} |y|^s ω dy`.
pub fn beta_radial_integral(
    lambda: f64,
    c: f64,
    q: f64,
    s: f64,
    params: &Params,
    weight: &Weight,
    cone: &Cone,
) -> Result<f64> {
    if !(lambda > 0.0 && c > 0.0) {
        return Err(domain("beta_radial_integral", format!("λ = {lambda} and c = {c} must be positive")));
    }
    let b = (s + effective_dim(params, weight)) / params.p_conj;
    if b <= 0.0 {
        return Err(domain("beta_radial_integral", format!("(s+n+τ)/p′ = {b} must be positive")));
    }
    if q <= b {
        return Err(domain(
            "beta_radial_integral",
            format!("q = {q} must exceed (s+n+τ)/p′ = {b}; the integral diverges"),
        ));
    }
    let log = -q * lambda.ln() + b * (lambda / c).ln() - params.p_conj.ln() + log_beta(q - b, b)?;
    Ok(log.exp() * omega_se_reference(weight, cone)?)
}

/// `∫_E e^{−λ|x|^{p′}} |x|^s ω dx`.
pub fn gaussian_radial_integral(
    lambda: f64,
    s: f64,
    params: &Params,
    weight: &Weight,
    cone: &Cone,
) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(domain("gaussian_radial_integral", format!("λ = {lambda} must be positive")));
    }
    let total = s + effective_dim(params, weight);
    if total <= 0.0 {
        return Err(domain("gaussian_radial_integral", format!("s+n+τ = {total} must be positive")));
    }
    let b = total / params.p_conj;
    let log = -b * lambda.ln() + log_gamma(b)? - params.p_conj.ln();
    Ok(log.exp() * omega_se_reference(weight, cone)?)
}

/// `∫_E (λ − (1−α)|y|^{p′})₊^q |y|^s ω dy` for `α < 1`.
pub fn compact_radial_integral(
    lambda: f64,
    alpha: f64,
    q: f64,
    s: f64,
    params: &Params,
    weight: &Weight,
    cone: &Cone,
) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(domain("compact_radial_integral", format!("λ = {lambda} must be positive")));
    }
    if alpha >= 1.0 {
        return Err(domain("compact_radial_integral", format!("α = {alpha} must be below 1")));
    }
    if q <= -1.0 {
        return Err(domain("compact_radial_integral", format!("q = {q} must exceed −1")));
    }
    let total = s + effective_dim(params, weight);
    if total <= 0.0 {
        return Err(domain("compact_radial_integral", format!("s+n+τ = {total} must be positive")));
    }
    let b = total / params.p_conj;
    let log = q * lambda.ln() + b * (lambda / (1.0 - alpha)).ln() - params.p_conj.ln()
        + log_beta(q + 1.0, b)?;
    Ok(log.exp() * omega_se_reference(weight, cone)?)
}

/// One of the closed-form radial integrals, by its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RadialForm {
    Beta { lambda: f64, c: f64, q: f64, s: f64 },
    Gaussian { lambda: f64, s: f64 },
    Compact { lambda: f64, alpha: f64, q: f64, s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub form: RadialForm,
    pub closed_form: f64,
    pub quadrature: f64,
    pub relative_error: f64,
    pub converged: bool,
}

/// Closed form against direct cone quadrature of the same integrand.
pub fn cross_check(
    form: RadialForm,
    params: &Params,
    weight: &Weight,
    cone: &Cone,
    grid: &QuadratureGrid,
) -> Result<CrossCheck> {
    let pc = params.p_conj;
    let (closed_form, est) = match form {
        RadialForm::Beta { lambda, c, q, s } => (
            beta_radial_integral(lambda, c, q, s, params, weight, cone)?,
            cone_integral(
                &FnIntegrand::new(|r, _| (lambda + c * r.powf(pc)).powf(-q) * r.powf(s)).radial(),
                weight,
                cone,
                grid,
            )?,
        ),
        RadialForm::Gaussian { lambda, s } => (
            gaussian_radial_integral(lambda, s, params, weight, cone)?,
            cone_integral(
                &FnIntegrand::new(|r, _| (-lambda * r.powf(pc)).exp() * r.powf(s)).radial(),
                weight,
                cone,
                grid,
            )?,
        ),
        RadialForm::Compact { lambda, alpha, q, s } => {
            let closed = compact_radial_integral(lambda, alpha, q, s, params, weight, cone)?;
            let edge = (lambda / (1.0 - alpha)).powf(1.0 / pc);
            let f = |r: f64, _: &[f64]| (lambda - (1.0 - alpha) * r.powf(pc)).max(0.0).powf(q) * r.powf(s);
            (closed, cone_integral(&FnIntegrand::new(f).within(edge).radial(), weight, cone, grid)?)
        }
    };
    Ok(CrossCheck {
        form,
        closed_form,
        quadrature: est.value,
        relative_error: (est.value - closed_form).abs() / closed_form.abs(),
        converged: est.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;
    use std::f64::consts::PI;

    fn plane() -> (Params, Weight, Cone) {
        (
            derive_params(2, 2.0, 1.0).unwrap(),
            Weight::constant(2, 1.0).unwrap(),
            Cone::whole_space(2).unwrap(),
        )
    }

    #[test]
    fn beta_examples() {
        let (params, w, cone) = plane();
        let base = beta_radial_integral(1.0, 1.0, 4.0, 0.0, &params, &w, &cone).unwrap();
        assert!((base - PI / 3.0).abs() < 1e-13);
        let scaled = beta_radial_integral(2.0, 1.0, 4.0, 0.0, &params, &w, &cone).unwrap();
        assert!((scaled / base - 0.125).abs() < 1e-14);
        let moment = beta_radial_integral(1.0, 1.0, 4.0, 2.0, &params, &w, &cone).unwrap();
        assert!((moment - PI / 6.0).abs() < 1e-13);
        assert!(beta_radial_integral(1.0, 1.0, 1.0, 0.0, &params, &w, &cone).is_err());
    }

    #[test]
    fn gaussian_examples() {
        let (params, w, cone) = plane();
        let g = |l, s| gaussian_radial_integral(l, s, &params, &w, &cone).unwrap();
        assert!((g(1.0, 0.0) - PI).abs() < 1e-13);
        assert!((g(2.0, 0.0) - PI / 2.0).abs() < 1e-13);
        assert!((g(1.0, 2.0) - PI).abs() < 1e-13);
        assert!(gaussian_radial_integral(1.0, -3.0, &params, &w, &cone).is_err());
    }

    #[test]
    fn compact_examples() {
        let (params, w, cone) = plane();
        let c = |l, q| compact_radial_integral(l, 0.0, q, 0.0, &params, &w, &cone).unwrap();
        assert!((c(1.0, 1.0) - PI / 2.0).abs() < 1e-13);
        assert!((c(1.0, 0.0) - PI).abs() < 1e-13);
        assert!((c(4.0, 1.0) - 8.0 * PI).abs() < 1e-12);
        assert!(compact_radial_integral(1.0, 1.5, 1.0, 0.0, &params, &w, &cone).is_err());
        assert!(compact_radial_integral(1.0, 0.0, -1.0, 0.0, &params, &w, &cone).is_err());
    }

    #[test]
    fn ball_masses() {
        let quadrant = Cone::positive_orthant(2).unwrap();
        let grid = sphere_cone_quadrature(&quadrant, 64).unwrap();
        let x1x2 = Weight::monomial(vec![1.0, 1.0]).unwrap();
        let x1 = Weight::monomial(vec![1.0, 0.0]).unwrap();
        assert!((omega_se(&x1x2, &quadrant, &grid).unwrap() - 0.5).abs() < 1e-12);
        assert!((omega_se(&x1, &quadrant, &grid).unwrap() - 1.0).abs() < 1e-12);
        assert!((ball_cone_weight_mass(&x1x2, &quadrant, &grid).unwrap() - 0.125).abs() < 1e-12);
        assert!((ball_cone_weight_mass(&x1, &quadrant, &grid).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let (_, one, plane) = plane();
        let pgrid = sphere_cone_quadrature(&plane, 64).unwrap();
        assert!((ball_cone_weight_mass(&one, &plane, &pgrid).unwrap() - PI).abs() < 1e-12);
    }
}
