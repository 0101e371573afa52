//! Scaling exponents, the generic and sharp Gagliardo–Nirenberg constants,
//! their limits, and the closed-form μ and λ optima.
//!
//! Everything is assembled in log space and exponentiated once. Products of
//! the form `0^0` are taken to be 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};
use crate::params::{Mode, Params};
use crate::specfun::{log_beta, log_gamma};

/// `x·ln y` with `0·ln 0 = 0`.
fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `L = −(n+τ₁)γ + n + τ₃` and `M = p + (n+τ₁)/α − (n+τ₂)`.
pub fn compute_lm(params: &Params, tau1: f64, tau2: f64, tau3: f64) -> Result<(f64, f64)> {
    let n = params.n as f64;
    if let Some(t) = [tau1, tau2, tau3].into_iter().find(|t| !(*t > -n)) {
        return Err(hypothesis(format!("τᵢ > −n (got τ = {t}, n = {n})")));
    }
    let l = -(n + tau1) * params.gamma + n + tau3;
    let m = params.p + (n + tau1) / params.alpha - (n + tau2);
    Ok((l, m))
}

/// θ₁ = L/(αγM+L) for γ < 1, θ₂ = −L/(αγM) for γ > 1.
pub fn theta(params: &Params, l: f64, m: f64) -> Result<f64> {
    let ag = params.alpha * params.gamma;
    match params.mode {
        Mode::GammaLt1 => {
            if !(l > 0.0 && m >= 0.0) {
                return Err(hypothesis(format!("L > 0 and M ≥ 0 (got L = {l}, M = {m})")));
            }
            if m == 0.0 {
                return Ok(1.0);
            }
            let denom = ag * m + l;
            if denom <= 0.0 {
                return Err(Error::InternalConsistency(format!("αγM + L = {denom}")));
            }
            Ok(l / denom)
        }
        Mode::GammaGt1 => {
            if !(l < 0.0 && m > 0.0) {
                return Err(hypothesis(format!("L < 0 and M > 0 (got L = {l}, M = {m})")));
            }
            let t = -l / (ag * m);
            if t >= 1.0 {
                return Err(hypothesis(format!("θ₂ = −L/(αγM) < 1 (got {t})")));
            }
            Ok(t)
        }
        Mode::LogSobolevLimit => Err(hypothesis("γ ≠ 1: θ is undefined in the log-Sobolev limit")),
    }
}

/// The algebraic factor `C_{K,L,M,C₀}` (γ < 1) or its dual (γ > 1).
pub fn c_klmc0(params: &Params, k: f64, l: f64, m: f64, c0: f64) -> Result<f64> {
    let (p, gamma, alpha) = (params.p, params.gamma, params.alpha);
    let n = params.n as f64;
    if !(c0 > 0.0) {
        return Err(hypothesis(format!("C₀ > 0 (got {c0})")));
    }
    let e = m / p + l;
    let log = match params.mode {
        Mode::GammaLt1 => {
            let k2 = 1.0 / (1.0 - gamma) + k;
            if k2 < 0.0 {
                return Err(hypothesis(format!("1/(1−γ) + K ≥ 0 (got {k2})")));
            }
            if !(l > 0.0 && m >= 0.0) {
                return Err(hypothesis(format!("L > 0 and M ≥ 0 (got L = {l}, M = {m})")));
            }
            if k2 == 0.0 && m != 0.0 {
                return Err(hypothesis(format!("1/(1−γ) + K = 0 forces M = 0 (got M = {m})")));
            }
            xlogy(m / p, k2) + (l - (1.0 - gamma) * n * e) * c0.ln() + l * (gamma * alpha).ln()
                + e * (1.0 - gamma).ln()
                + e * (m + p * l).ln()
                - xlogy(m / p, m)
                - l * l.ln()
        }
        Mode::GammaGt1 => {
            let k2 = 1.0 / (gamma - 1.0) - k;
            if k2 <= 0.0 {
                return Err(hypothesis(format!("1 + K(1−γ) > 0 (got 1/(γ−1) − K = {k2})")));
            }
            if !(l < 0.0 && m > 0.0) {
                return Err(hypothesis(format!("L < 0 and M > 0 (got L = {l}, M = {m})")));
            }
            if m + p * l <= 0.0 {
                return Err(hypothesis(format!("M + pL > 0 (got {})", m + p * l)));
            }
            -(m / p) * k2.ln() + (-l + (1.0 - gamma) * n * e) * c0.ln() - l * (gamma * alpha).ln()
                - e * (gamma - 1.0).ln()
                + (m / p) * m.ln()
                + l * (-l).ln()
                - e * (m + p * l).ln()
        }
        Mode::LogSobolevLimit => return Err(hypothesis("γ ≠ 1 for C_{K,L,M,C₀}")),
    };
    Ok(log.exp())
}

fn check_sharp_range(n: usize, p: f64, tau: f64, ball_mass: f64) -> Result<f64> {
    check_limit_range(n, p, tau, ball_mass, false)
}

/// The limit constants stay finite at `p = n+τ`, so they accept the closed
/// upper end.
fn check_limit_range(n: usize, p: f64, tau: f64, ball_mass: f64, closed: bool) -> Result<f64> {
    let dim = n as f64 + tau;
    if tau < 0.0 {
        return Err(hypothesis(format!("τ ≥ 0 (got {tau})")));
    }
    let below = if closed { p <= dim } else { p < dim };
    if !(p > 1.0 && below) {
        let rel = if closed { "≤" } else { "<" };
        return Err(hypothesis(format!("1 < p {rel} n+τ = {dim} (got p = {p})")));
    }
    if !(ball_mass > 0.0 && ball_mass.is_finite()) {
        return Err(hypothesis(format!("∫_(B∩E) ω > 0 (got {ball_mass})")));
    }
    Ok(dim)
}

/// The sharp equal-weight constant C̃₁ (γ < 1) or C̃₂ (γ > 1).
pub fn sharp_gn_constant(params: &Params, tau: f64, ball_mass: f64) -> Result<f64> {
    let (p, gamma, alpha, pc) = (params.p, params.gamma, params.alpha, params.p_conj);
    let dim = check_sharp_range(params.n, p, tau, ball_mass)?;
    if gamma < 1.0 - 1.0 / dim {
        return Err(hypothesis(format!(
            "γ ≥ 1 − 1/(n+τ) = {} (got γ = {gamma})",
            1.0 - 1.0 / dim
        )));
    }
    let b = dim / pc;
    let log = match params.mode {
        Mode::GammaLt1 => {
            let th = dim * (1.0 - gamma) / (alpha * gamma * (p - dim) + dim);
            let a = (alpha * (p - 1.0) + 1.0) / (alpha - 1.0);
            th * ((alpha - 1.0) / pc).ln()
                + (th / p + th / dim) * (pc / dim).ln()
                + (a - b).ln() / (alpha * p)
                + (th / p - 1.0 / (alpha * p)) * a.ln()
                - th / dim * (ball_mass.ln() + log_beta(a - b, b)?)
        }
        Mode::GammaGt1 => {
            let th = dim * (gamma - 1.0) / (alpha * gamma * (p - dim) + gamma * dim);
            let s = alpha * (p - 1.0) + 1.0;
            let a = s / (1.0 - alpha);
            th * ((1.0 - alpha) / pc).ln()
                + (th / p + th / dim) * (pc / dim).ln()
                + (th / p - 1.0 / s) * (a + b).ln()
                + a.ln() / s
                - th / dim * (ball_mass.ln() + log_beta(a, b)?)
        }
        Mode::LogSobolevLimit => {
            return Err(hypothesis("γ ≠ 1 (use log_sobolev_constant for the limit)"))
        }
    };
    Ok(log.exp())
}

/// Closed-form integrals of the equal-weight profile
/// `G(x) = (1 + c|x|^{p′})^{−αp/(α−1)}` (γ < 1) or `(1 − c|x|^{p′})₊^{αp/(1−α)}`
/// (γ > 1) against a weight of degree τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileIntegrals {
    /// `∫ G ω`
    pub mass: f64,
    /// `∫ G |y|^{p′} ω`
    pub moment: f64,
    /// `∫ G^γ ω`
    pub gamma_power: f64,
}

pub fn profile_integrals(params: &Params, tau: f64, omega_se: f64, c: f64) -> Result<ProfileIntegrals> {
    let (p, gamma, alpha, pc) = (params.p, params.gamma, params.alpha, params.p_conj);
    let dim = params.n as f64 + tau;
    if !(c > 0.0 && omega_se > 0.0) {
        return Err(hypothesis(format!("c > 0 and ω_SE > 0 (got c = {c}, ω_SE = {omega_se})")));
    }
    let b0 = dim / pc;
    let b1 = (dim + pc) / pc;
    let pre = |b: f64| -b * c.ln() - pc.ln() + omega_se.ln();
    let (mass, moment, gamma_power) = match params.mode {
        Mode::GammaLt1 => {
            let q = alpha * p / (alpha - 1.0);
            (
                pre(b0) + log_beta(q - b0, b0)?,
                pre(b1) + log_beta(q - b1, b1)?,
                pre(b0) + log_beta(q * gamma - b0, b0)?,
            )
        }
        Mode::GammaGt1 => {
            let q = alpha * p / (1.0 - alpha);
            (
                pre(b0) + log_beta(q + 1.0, b0)?,
                pre(b1) + log_beta(q + 1.0, b1)?,
                pre(b0) + log_beta(q * gamma + 1.0, b0)?,
            )
        }
        Mode::LogSobolevLimit => return Err(hypothesis("γ ≠ 1 for the power profiles")),
    };
    Ok(ProfileIntegrals {
        mass: mass.exp(),
        moment: moment.exp(),
        gamma_power: gamma_power.exp(),
    })
}

/// The μ minimizing `K₁⁻¹K₃^{L/(L+M)}` (γ < 1) or `K̃₁K̃₃^{−L/(L+M)}` (γ > 1).
pub fn mu_optimal(
    params: &Params,
    c0: f64,
    l: f64,
    m: f64,
    int_g_gamma: f64,
    int_g_moment: f64,
) -> Result<f64> {
    let (p, gamma, alpha, pc) = (params.p, params.gamma, params.alpha, params.p_conj);
    let n = params.n as f64;
    let ratio = l / (m + p * l);
    let sign_ok = match params.mode {
        Mode::GammaGt1 => ratio < 0.0,
        _ => ratio > 0.0,
    };
    if !sign_ok || !ratio.is_finite() {
        let want = if params.mode == Mode::GammaGt1 { "< 0" } else { "> 0" };
        return Err(hypothesis(format!("L/(M+pL) {want} (got {ratio})")));
    }
    if !(int_g_gamma > 0.0 && int_g_moment > 0.0 && c0 > 0.0) {
        return Err(hypothesis("C₀ and the G integrals must be positive"));
    }
    let scale = match params.mode {
        Mode::GammaLt1 => (1.0 - gamma) * gamma * alpha,
        Mode::GammaGt1 => -(gamma - 1.0) * gamma * alpha,
        Mode::LogSobolevLimit => return Err(hypothesis("γ ≠ 1 for μ")),
    };
    let base = c0.powf(-1.0 + (1.0 - gamma) * n) / scale * ratio * int_g_gamma / int_g_moment;
    if !(base > 0.0) {
        return Err(hypothesis(format!(
            "the μ formula needs a positive base (got {base}); check the signs of L and M"
        )));
    }
    Ok(base.powf(1.0 / pc))
}

/// `K₁, K₂, K₃` (γ < 1) or `K̃₁, K̃₂, K̃₃` (γ > 1) for a normalized G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KTerms {
    pub mu: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

pub fn k_terms(
    params: &Params,
    c0: f64,
    k: f64,
    mu: f64,
    int_g_gamma: f64,
    int_g_moment: f64,
) -> Result<KTerms> {
    let (p, gamma) = (params.p, params.gamma);
    let n = params.n as f64;
    let denom = p * (gamma - 1.0) + 1.0;
    let transport = c0 * gamma * (p - 1.0) * mu.powf(params.p_conj) / denom * int_g_moment;
    let k3 = c0 * gamma / (mu.powf(p) * denom);
    let (k1, k2) = match params.mode {
        Mode::GammaLt1 => (
            c0.powf((1.0 - gamma) * n) / (1.0 - gamma) * int_g_gamma - transport,
            1.0 / (1.0 - gamma) + k,
        ),
        Mode::GammaGt1 => (
            c0.powf((1.0 - gamma) * n) / (gamma - 1.0) * int_g_gamma + transport,
            1.0 / (gamma - 1.0) - k,
        ),
        Mode::LogSobolevLimit => return Err(hypothesis("γ ≠ 1 for the K terms")),
    };
    if !(k1 > 0.0) {
        return Err(hypothesis(format!("K₁ > 0 (got {k1}); choose a smaller μ")));
    }
    Ok(KTerms { mu, k1, k2, k3 })
}

/// The constant produced by the λ-optimization for fixed K terms.
pub fn gn_constant_from_k_terms(params: &Params, kt: &KTerms, l: f64, m: f64) -> Result<f64> {
    let (p, ag) = (params.p, params.alpha * params.gamma);
    match params.mode {
        Mode::GammaLt1 => {
            if kt.k2 < 0.0 {
                return Err(hypothesis(format!("K₂ ≥ 0 (got {})", kt.k2)));
            }
            if kt.k2 == 0.0 || m == 0.0 {
                if kt.k2 == 0.0 && m != 0.0 {
                    return Err(hypothesis("K₂ = 0 forces M = 0"));
                }
                // Sobolev form
                return Ok((kt.k3 / kt.k1).powf(1.0 / p));
            }
            let s = l + m;
            let bracket = (m / l).powf(l / s) + (l / m).powf(m / s);
            let inner = kt.k2.ln() * m / s + kt.k3.ln() * l / s - kt.k1.ln() + bracket.ln();
            Ok((inner / (p * (ag * m / s + l / s))).exp())
        }
        Mode::GammaGt1 => {
            let s = m + l;
            if !(kt.k2 > 0.0 && s > 0.0 && l < 0.0) {
                return Err(hypothesis("K̃₂ > 0 and 0 < −L < M"));
            }
            let inner = kt.k1.ln() - m / s * kt.k2.ln() - l / s * kt.k3.ln()
                + l / s * (-l / m).ln()
                + (m / s).ln();
            Ok((inner * s / (p * ag * m)).exp())
        }
        Mode::LogSobolevLimit => Err(hypothesis("γ ≠ 1")),
    }
}

/// `φ(λ) = K₂λ^{−L}A + K₃λ^{M}B`.
pub fn lambda_objective(k2: f64, k3: f64, l: f64, m: f64, a: f64, b: f64, lambda: f64) -> f64 {
    k2 * lambda.powf(-l) * a + k3 * lambda.powf(m) * b
}

/// Minimizer of [`lambda_objective`].
pub fn lambda_optimal_coefficients(k2: f64, k3: f64, l: f64, m: f64, a: f64, b: f64) -> Result<f64> {
    if !(k2 > 0.0 && k3 > 0.0) {
        return Err(hypothesis(format!("K₂, K₃ > 0 (got {k2}, {k3})")));
    }
    if !(l > 0.0 && m > 0.0) {
        return Err(hypothesis(format!("L, M > 0 (got {l}, {m})")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(hypothesis("norm ratios must be positive"));
    }
    Ok(((k2 / k3) * (l / m) * (a / b)).powf(1.0 / (l + m)))
}

/// The λ balancing the two terms, from the three norms of u:
/// `‖∇u‖_{ω₂,p}`, `‖u‖_{ω₃,αpγ}` and `‖u‖_{ω₁,αp}`.
#[allow(clippy::too_many_arguments)]
pub fn lambda_optimal(
    params: &Params,
    k2: f64,
    k3: f64,
    l: f64,
    m: f64,
    norm_grad: f64,
    norm_gamma: f64,
    norm_base: f64,
) -> Result<f64> {
    let apg = params.alpha * params.p * params.gamma;
    let p = params.p;
    let a = (apg * (norm_gamma.ln() - norm_base.ln())).exp();
    let b = (p * (norm_grad.ln() - norm_base.ln())).exp();
    lambda_optimal_coefficients(k2, k3, l, m, a, b)
}

/// 𝓛_{ω,p} = (p/(n+τ))((p−1)/e)^{p−1}(Γ((n+τ)/p′+1)∫_{B∩E}ω)^{−p/(n+τ)}.
pub fn log_sobolev_constant(n: usize, p: f64, tau: f64, ball_mass: f64) -> Result<f64> {
    let dim = check_limit_range(n, p, tau, ball_mass, true)?;
    let pc = p / (p - 1.0);
    let log = (p / dim).ln() + (p - 1.0) * ((p - 1.0).ln() - 1.0)
        - p / dim * (log_gamma(dim / pc + 1.0)? + ball_mass.ln());
    Ok(log.exp())
}

/// 𝖢_∞ = (∫_{B∩E}ω)^{−1/(n+τ)}(n+τ)^{−1/p}(p′+n+τ)^{−1/p′}.
pub fn faber_krahn_constant(n: usize, p: f64, tau: f64, ball_mass: f64) -> Result<f64> {
    let dim = check_limit_range(n, p, tau, ball_mass, true)?;
    let pc = p / (p - 1.0);
    let log = -ball_mass.ln() / dim - dim.ln() / p - (pc + dim).ln() / pc;
    Ok(log.exp())
}

/// C̃_∞ = (∫_{B∩E}ω)^{−1/(n+τ)}/(n+τ).
pub fn isoperimetric_constant(n: usize, tau: f64, ball_mass: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(hypothesis(format!("τ ≥ 0 (got {tau})")));
    }
    if !(ball_mass > 0.0 && ball_mass.is_finite()) {
        return Err(hypothesis(format!("∫_(B∩E) ω > 0 (got {ball_mass})")));
    }
    let dim = n as f64 + tau;
    Ok((-ball_mass.ln() / dim - dim.ln()).exp())
}

/// Every constant derivable from `(n, p, γ)`, the degrees, `(C₀, K)` and the
/// ball mass, with a formula string per field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsBundle {
    pub params: Params,
    pub tau: [f64; 3],
    pub l: f64,
    pub m: f64,
    pub theta: Option<f64>,
    pub k: f64,
    pub c0: f64,
    pub c_klmc0: Option<f64>,
    /// Which branch of the λ-optimization applies.
    pub case: String,
    pub sharp_constant: Option<f64>,
    /// Constant used by the ratio evaluators; the sharp one for equal weights.
    pub gn_constant: Option<f64>,
    pub mu_opt: Option<f64>,
    pub k_terms: Option<KTerms>,
    pub ball_mass: Option<f64>,
    pub log_sobolev: Option<f64>,
    pub faber_krahn: Option<f64>,
    pub isoperimetric: Option<f64>,
    pub provenance: BTreeMap<String, String>,
}

impl ConstantsBundle {
    /// Bundle for three weights with degrees `tau`. The GN constant is only
    /// filled in for equal degrees with the equal-weight `(C₀, K)`; other
    /// cases need a family search over G, see `functionals`.
    pub fn new(params: &Params, tau: [f64; 3], k: f64, c0: f64, ball_mass: Option<f64>) -> Result<Self> {
        let (l, m) = compute_lm(params, tau[0], tau[1], tau[2])?;
        let n = params.n as f64;
        let mut provenance = BTreeMap::new();
        let mut note = |key: &str, text: &str| {
            provenance.insert(key.to_string(), text.to_string());
        };
        note("l", "L = −(n+τ₁)γ + n + τ₃");
        note("m", "M = p + (n+τ₁)/α − (n+τ₂)");
        note("alpha", "α = 1/(p(γ−1)+1)");
        note("p_conj", "p′ = p/(p−1)");

        let equal = tau[0] == tau[1] && tau[1] == tau[2];
        let canonical = equal && (k - (-n - tau[0])).abs() <= 1e-12 * (1.0 + k.abs()) && c0 == 1.0;
        let mut bundle = ConstantsBundle {
            params: *params,
            tau,
            l,
            m,
            theta: None,
            k,
            c0,
            c_klmc0: None,
            case: String::new(),
            sharp_constant: None,
            gn_constant: None,
            mu_opt: None,
            k_terms: None,
            ball_mass,
            log_sobolev: None,
            faber_krahn: None,
            isoperimetric: None,
            provenance: BTreeMap::new(),
        };

        match params.mode {
            Mode::LogSobolevLimit => {
                bundle.case = "log-Sobolev limit".into();
            }
            Mode::GammaLt1 | Mode::GammaGt1 => {
                let th = theta(params, l, m)?;
                bundle.theta = Some(th);
                bundle.c_klmc0 = Some(c_klmc0(params, k, l, m, c0)?);
                if params.mode == Mode::GammaLt1 {
                    note("theta", "θ₁ = L/(αγM+L)");
                    note(
                        "c_klmc0",
                        "(1/(1−γ)+K)^(M/p) C₀^(L−(1−γ)n(M/p+L)) (γα)^L (1−γ)^(M/p+L) (M+pL)^(M/p+L) / (M^(M/p) L^L)",
                    );
                    let k2 = 1.0 / (1.0 - params.gamma) + k;
                    bundle.case = if k2 == 0.0 {
                        "K₂ = 0: Sobolev form, θ₁ = 1".into()
                    } else if m == 0.0 {
                        "K₂ > 0, M = 0: Sobolev form, θ₁ = 1".into()
                    } else {
                        "K₂ > 0, M > 0: interior optimum in λ".into()
                    };
                } else {
                    note("theta", "θ₂ = −L/(αγM)");
                    note(
                        "c_klmc0",
                        "(1/(γ−1)−K)^(−M/p) C₀^(−L+(1−γ)n(M/p+L)) (γα)^(−L) (γ−1)^(−M/p−L) M^(M/p) (−L)^L / (M+pL)^(M/p+L)",
                    );
                    bundle.case = "γ > 1: interior maximum in λ".into();
                }
            }
        }

        if let Some(ball) = ball_mass {
            let t = tau[0];
            let sharp_range = equal && t >= 0.0 && params.p <= n + t;
            if sharp_range {
                match params.mode {
                    Mode::LogSobolevLimit => {
                        bundle.log_sobolev = Some(log_sobolev_constant(params.n, params.p, t, ball)?);
                        note(
                            "log_sobolev",
                            "𝓛 = (p/(n+τ))((p−1)/e)^(p−1) (Γ((n+τ)/p′+1)∫_(B∩E)ω)^(−p/(n+τ))",
                        );
                    }
                    _ if canonical && params.p < n + t && params.gamma >= 1.0 - 1.0 / (n + t) => {
                        let sharp = sharp_gn_constant(params, t, ball)?;
                        bundle.sharp_constant = Some(sharp);
                        bundle.gn_constant = Some(sharp);
                        note("sharp_constant", "closed-form equal-weight constant (Beta-function form)");
                        let c = (params.alpha - 1.0).abs();
                        let g = profile_integrals(params, t, (n + t) * ball, c)?;
                        let mu = mu_optimal(params, c0, l, m, g.gamma_power, g.moment)?;
                        bundle.mu_opt = Some(mu);
                        note(
                            "mu_opt",
                            "μ^(p′) = C₀^(−1+(1−γ)n) L ∫G^γ / (±(1−γ)γα (M+pL) ∫G|y|^(p′)), G = (1 ± |α−1||y|^(p′))^(αp/(1−α))",
                        );
                        // K terms for the same profile after normalizing ∫Gω = 1
                        let ig = g.gamma_power / g.mass.powf(params.gamma);
                        let im = g.moment / g.mass;
                        let mu_n = mu_optimal(params, c0, l, m, ig, im)?;
                        bundle.k_terms = Some(k_terms(params, c0, k, mu_n, ig, im)?);
                        note("k_terms", "K₁, K₂, K₃ at the optimal μ for the normalized profile");
                    }
                    _ => {}
                }
                if t >= 0.0 {
                    bundle.faber_krahn = Some(faber_krahn_constant(params.n, params.p, t, ball)?);
                    note("faber_krahn", "𝖢_∞ = (∫_(B∩E)ω)^(−1/(n+τ)) (n+τ)^(−1/p) (p′+n+τ)^(−1/p′)");
                }
            }
            if equal && t >= 0.0 {
                bundle.isoperimetric = Some(isoperimetric_constant(params.n, t, ball)?);
                note("isoperimetric", "C̃_∞ = (∫_(B∩E)ω)^(−1/(n+τ)) / (n+τ)");
            }
        }
        bundle.provenance = provenance;
        Ok(bundle)
    }

    /// Equal weights of degree τ with `(C₀, K) = (1, −n−τ)`.
    pub fn equal_weight(params: &Params, tau: f64, ball_mass: f64) -> Result<Self> {
        Self::new(params, [tau; 3], -(params.n as f64) - tau, 1.0, Some(ball_mass))
    }
}
