//! Sampling certificates for condition (C), p-concavity of weights, and the
//! explicit monomial constants.
//!
//! Sampling can only ever refute: a passing report means no violation was
//! found among the drawn pairs, and it cannot tell "for a.e. x" from "for
//! every x".

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{hypothesis, Error, Result};
use crate::geometry::{sphere_cone_quadrature, Cone, Weight};
use crate::params::Params;
use crate::sampling::{ConeSampler, BOUNDARY_ANGLE};

/// Relative tolerance used by every sampled verdict.
pub const SLACK_TOLERANCE: f64 = 1e-9;

const SEGMENT_POINTS: [f64; 3] = [0.25, 0.5, 0.75];

pub const SAMPLING_CAVEAT: &str =
    "sampled verdict: a pass means no violating pair was found; it cannot distinguish \
     an a.e. inequality from an everywhere inequality";

/// Exponent of a p-mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PMeanExponent {
    Finite(f64),
    NegInf,
    PosInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PMeanSpec {
    pub exponent: PMeanExponent,
    pub s: f64,
}

impl PMeanSpec {
    pub fn new(exponent: PMeanExponent, s: f64) -> Self {
        Self { exponent, s }
    }

    pub fn finite(exponent: f64, s: f64) -> Self {
        Self::new(PMeanExponent::Finite(exponent), s)
    }
}

/// `M_s^p̄(a, b)` with the usual conventions; every case vanishes when `ab = 0`.
pub fn p_mean(a: f64, b: f64, spec: PMeanSpec) -> f64 {
    if a * b == 0.0 {
        return 0.0;
    }
    let s = spec.s;
    match spec.exponent {
        PMeanExponent::NegInf => a.min(b),
        PMeanExponent::PosInf => a.max(b),
        PMeanExponent::Finite(q) if q == 0.0 => a.powf(1.0 - s) * b.powf(s),
        PMeanExponent::Finite(q) => log_p_mean(a.ln(), b.ln(), q, s).exp(),
    }
}

/// `ln M_s^q` from logarithms, stable for arguments spanning many decades.
fn log_p_mean(la: f64, lb: f64, q: f64, s: f64) -> f64 {
    if q == 0.0 {
        return (1.0 - s) * la + s * lb;
    }
    let (ta, tb) = (q * la, q * lb);
    let m = ta.max(tb);
    let mut acc = 0.0;
    if s < 1.0 {
        acc += (1.0 - s) * (ta - m).exp();
    }
    if s > 0.0 {
        acc += s * (tb - m).exp();
    }
    (m + acc.ln()) / q
}

/// `(1/(1−γ) − n)C + tr A − (1/(1−γ)) C^{1−n(1−γ)} (det A)^{1−γ}`, which is
/// non-negative and vanishes exactly at `A = C·Iₙ`.
pub fn check_tr_det(gamma: f64, c: f64, a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if n < 2 || a.ncols() != n {
        return Err(Error::Config(format!(
            "matrix must be square with n ≥ 2 (got {}×{})",
            a.nrows(),
            a.ncols()
        )));
    }
    let nf = n as f64;
    if gamma == 1.0 || gamma < 1.0 - 1.0 / nf {
        return Err(hypothesis(format!(
            "γ ≥ 1 − 1/n and γ ≠ 1 (got γ = {gamma}, n = {n})"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(hypothesis(format!("C > 0 (got {c})")));
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::NotSpd);
            }
        }
    }
    let chol = a.clone().cholesky().ok_or(Error::NotSpd)?;
    let l = chol.l();
    let mut log_det = 0.0;
    for i in 0..n {
        let pivot = l[(i, i)] * l[(i, i)];
        if !(pivot > 1e-12 * scale) {
            return Err(Error::NotSpd);
        }
        log_det += pivot.ln();
    }
    let k = 1.0 / (1.0 - gamma);
    let lhs = k * ((1.0 - nf * (1.0 - gamma)) * c.ln() + (1.0 - gamma) * log_det).exp();
    Ok((k - nf) * c + a.trace() - lhs)
}

/// Explicit constants for a monomial triplet `ω₁ = x^τ`, `ω₂ = x^α`, `ω₃ = x^δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialConstants {
    pub c0: f64,
    pub k: f64,
    pub deltas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `C₀` is admissible, not claimed to be the least admissible value.
    pub c0_is_admissible_not_optimal: bool,
}

pub fn monomial_condition_constants(
    params: &Params,
    taus: &[f64],
    alphas: &[f64],
) -> Result<MonomialConstants> {
    let n = params.n;
    let (p, gamma) = (params.p, params.gamma);
    if gamma >= 1.0 {
        return Err(hypothesis(format!("γ < 1 for the monomial construction (got γ = {gamma})")));
    }
    if taus.len() != n || alphas.len() != n {
        return Err(Error::Config(format!(
            "need {n} exponents per weight (got {} and {})",
            taus.len(),
            alphas.len()
        )));
    }
    if let Some(v) = taus.iter().chain(alphas).find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(hypothesis(format!("τᵢ, αᵢ ≥ 0 (got {v})")));
    }
    let inv_pc = params.inv_p_conj();
    let budget = 1.0 - n as f64 * (1.0 - gamma);
    let betas: Vec<f64> = taus
        .iter()
        .zip(alphas)
        .map(|(t, a)| a / p + t * (inv_pc - gamma))
        .collect();
    if let Some((i, b)) = betas.iter().enumerate().find(|(_, b)| **b < -1e-15) {
        return Err(hypothesis(format!(
            "βᵢ = αᵢ/p + τᵢ(1/p′−γ) ≥ 0 fails for i = {}: β = {b}",
            i + 1
        )));
    }
    let tau: f64 = taus.iter().sum();
    let alpha: f64 = alphas.iter().sum();
    let total = alpha / p + tau * (inv_pc - gamma);
    if total > budget + 1e-15 {
        return Err(hypothesis(format!(
            "α/p + τ(1/p′−γ) ≤ 1 − n(1−γ) fails: {total} > {budget}"
        )));
    }
    let deltas: Vec<f64> = taus
        .iter()
        .zip(alphas)
        .map(|(t, a)| t * inv_pc + a / p)
        .collect();
    let mut log_c0 = 0.0;
    for (b, d) in betas.iter().zip(&deltas) {
        // 0⁰ = 1
        if *b > 0.0 {
            log_c0 += b / budget * (b / ((1.0 - gamma) * d)).ln();
        }
    }
    let c0 = log_c0.exp();
    let k = -1.0 / (1.0 - gamma)
        + c0 * (-(n as f64) - tau + (1.0 + (tau - alpha) / p) / (1.0 - gamma));
    Ok(MonomialConstants {
        c0,
        k,
        deltas,
        betas: betas.into_iter().map(|b| b.max(0.0)).collect(),
        c0_is_admissible_not_optimal: true,
    })
}

/// The triplet `(x^τ, x^α, x^δ)` and the cone `{xᵢ > 0 whenever δᵢ > 0}`.
pub fn monomial_triplet(
    constants: &MonomialConstants,
    taus: &[f64],
    alphas: &[f64],
) -> Result<(Weight, Weight, Weight, Cone)> {
    let cone = Cone::orthant_mask(constants.deltas.iter().map(|d| *d > 0.0).collect())?;
    Ok((
        Weight::monomial(taus.to_vec())?,
        Weight::monomial(alphas.to_vec())?,
        Weight::monomial(constants.deltas.clone())?,
        cone,
    ))
}

/// One sampled inequality: the worst normalized slack and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCheck {
    pub name: String,
    pub samples: usize,
    /// Minimum of `slack / (1 + |lhs|)` (log-ratio for segment tests).
    pub min_normalized_slack: f64,
    pub min_slack: f64,
    pub argmin_x: Vec<f64>,
    pub argmin_y: Vec<f64>,
    /// Interpolation parameter at the argmin, for segment tests.
    pub argmin_s: Option<f64>,
    pub pass: bool,
}

struct Sample {
    normalized: f64,
    raw: f64,
    s: Option<f64>,
}

fn summarize(
    name: &str,
    pairs: &[(Vec<f64>, Vec<f64>)],
    evaluated: Vec<Result<Sample>>,
    tolerance: f64,
) -> Result<SampledCheck> {
    let mut best: Option<(usize, Sample)> = None;
    for (i, sample) in evaluated.into_iter().enumerate() {
        let sample = sample?;
        if !sample.normalized.is_finite() {
            return Err(Error::Evaluation {
                point: pairs[i].0.iter().chain(&pairs[i].1).copied().collect(),
                detail: format!("{name}: slack evaluated to {}", sample.normalized),
            });
        }
        if best.as_ref().is_none_or(|(_, b)| sample.normalized < b.normalized) {
            best = Some((i, sample));
        }
    }
    let (i, worst) = best.ok_or_else(|| Error::Config("at least one sample is required".into()))?;
    Ok(SampledCheck {
        name: name.to_string(),
        samples: pairs.len(),
        min_normalized_slack: worst.normalized,
        min_slack: worst.raw,
        argmin_x: pairs[i].0.clone(),
        argmin_y: pairs[i].1.clone(),
        argmin_s: worst.s,
        pass: worst.normalized >= -tolerance,
    })
}

/// The joint condition's data for one `(x, y)` pair.
struct ConditionTerms {
    lhs: f64,
    /// `ω₃/(ω₁^{1/p′}ω₂^{1/p})(x)`, the factor multiplying `1/(1−γ)+K`.
    k_factor: f64,
    gradient_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCReport {
    pub c0: f64,
    pub k: f64,
    pub samples: usize,
    pub seed: u64,
    /// Raw `RHS − LHS` at the worst pair.
    pub min_slack: f64,
    pub min_normalized_slack: f64,
    pub lhs_at_argmin: f64,
    pub argmin_x: Vec<f64>,
    pub argmin_y: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Smallest K for which every drawn pair passes (plumbing; no optimality claim).
    pub k_threshold: f64,
    pub omega3_absent: bool,
    pub caveat: String,
}

/// Sample `RHS − LHS` of condition (C) at `samples` random pairs.
#[allow(clippy::too_many_arguments)]
pub fn check_condition_c(
    w1: &Weight,
    w2: &Weight,
    w3: Option<&Weight>,
    c0: f64,
    k: f64,
    params: &Params,
    cone: &Cone,
    samples: usize,
    seed: u64,
) -> Result<ConditionCReport> {
    let gamma = params.gamma;
    if gamma == 1.0 {
        return Err(hypothesis("γ ≠ 1 for condition (C)"));
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(hypothesis(format!("C₀ > 0 (got {c0})")));
    }
    if !k.is_finite() {
        return Err(hypothesis(format!("K must be finite (got {k})")));
    }
    if samples == 0 {
        return Err(Error::Config("samples must be positive".into()));
    }
    let k2 = 1.0 / (1.0 - gamma) + k;
    if w3.is_none() && !(gamma < 1.0 && k2.abs() <= 1e-12 * (1.0 + k.abs())) {
        return Err(Error::Config(
            "ω₃ may be omitted only for γ < 1 with K = −1/(1−γ)".into(),
        ));
    }
    for w in [Some(w1), Some(w2), w3].into_iter().flatten() {
        w.validate_for(cone)?;
    }
    let n = params.n as f64;
    let (p, inv_pc) = (params.p, params.inv_p_conj());
    let power = 1.0 / (1.0 - n * (1.0 - gamma));
    let lead = 1.0 / (1.0 - gamma) - n;

    let terms = |x: &[f64], y: &[f64]| -> Result<ConditionTerms> {
        let lx1 = w1.try_value(x)?.ln();
        let lx2 = w2.try_value(x)?.ln();
        let ly1 = w1.try_value(y)?.ln();
        let ly2 = w2.try_value(y)?.ln();
        let ratio = (power * ((ly2 - lx2) / p + (inv_pc - gamma) * (ly1 - lx1))).exp();
        let k_factor = match w3 {
            Some(w3) => (w3.try_value(x)?.ln() - lx1 * inv_pc - lx2 / p).exp(),
            None => 0.0,
        };
        let g1 = w1.log_gradient(x);
        let g2 = w2.log_gradient(x);
        let gradient_term: f64 = (0..x.len())
            .map(|i| (g2[i] / p + g1[i] * inv_pc) * y[i])
            .sum();
        Ok(ConditionTerms {
            lhs: lead * ratio,
            k_factor,
            gradient_term,
        })
    };

    let pairs = ConeSampler::new(cone, seed).pairs(samples)?;
    let evaluated: Vec<Result<ConditionTerms>> =
        pairs.par_iter().map(|(x, y)| terms(x, y)).collect();

    let mut worst: Option<(usize, f64, f64, f64)> = None;
    let mut k_threshold = f64::NEG_INFINITY;
    for (i, t) in evaluated.into_iter().enumerate() {
        let t = t?;
        let raw = k2 * t.k_factor + c0 * t.gradient_term - t.lhs;
        let normalized = raw / (1.0 + t.lhs.abs());
        if !normalized.is_finite() {
            return Err(Error::Evaluation {
                point: pairs[i].0.iter().chain(&pairs[i].1).copied().collect(),
                detail: format!("condition (C) slack evaluated to {raw}"),
            });
        }
        if t.k_factor > 0.0 {
            k_threshold = k_threshold.max(k - raw / t.k_factor);
        }
        if worst.is_none_or(|(_, w, _, _)| normalized < w) {
            worst = Some((i, normalized, raw, t.lhs));
        }
    }
    let (i, normalized, raw, lhs) = worst.expect("samples > 0");
    Ok(ConditionCReport {
        c0,
        k,
        samples,
        seed,
        min_slack: raw,
        min_normalized_slack: normalized,
        lhs_at_argmin: lhs,
        argmin_x: pairs[i].0.clone(),
        argmin_y: pairs[i].1.clone(),
        tolerance: SLACK_TOLERANCE,
        pass: normalized >= -SLACK_TOLERANCE,
        k_threshold,
        omega3_absent: w3.is_none(),
        caveat: SAMPLING_CAVEAT.to_string(),
    })
}

/// Exact slack of condition (C) at one pair, for tests and diagnostics.
#[allow(clippy::too_many_arguments)]
pub fn condition_c_slack(
    w1: &Weight,
    w2: &Weight,
    w3: &Weight,
    c0: f64,
    k: f64,
    params: &Params,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let (p, inv_pc, gamma) = (params.p, params.inv_p_conj(), params.gamma);
    let n = params.n as f64;
    let power = 1.0 / (1.0 - n * (1.0 - gamma));
    let ratio = ((w2.value(y) / w2.value(x)).powf(1.0 / p)
        * (w1.value(y) / w1.value(x)).powf(inv_pc - gamma))
    .powf(power);
    let lhs = (1.0 / (1.0 - gamma) - n) * ratio;
    let k_term = (1.0 / (1.0 - gamma) + k) * w3.value(x)
        / (w1.value(x).powf(inv_pc) * w2.value(x).powf(1.0 / p));
    let (g1, g2) = (w1.gradient(x), w2.gradient(x));
    let (v1, v2) = (w1.value(x), w2.value(x));
    let grad: f64 = (0..x.len())
        .map(|i| (g2[i] / (p * v2) + g1[i] * inv_pc / v1) * y[i])
        .sum();
    k_term + c0 * grad - lhs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

/// Necessary degree relations implied by condition (C).
pub fn check_homogeneity_constraints(
    params: &Params,
    tau1: f64,
    tau2: f64,
    tau3: f64,
) -> Result<Vec<ConstraintCheck>> {
    let (p, gamma, n) = (params.p, params.gamma, params.n as f64);
    if gamma == 1.0 {
        return Err(hypothesis("γ ≠ 1 for the homogeneity constraints"));
    }
    let inv_pc = params.inv_p_conj();
    let mixed = tau2 / p + tau1 * (inv_pc - gamma);
    let tol = 1e-12;
    let mut out = Vec::new();
    if gamma < 1.0 {
        let upper = 1.0 - n * (1.0 - gamma);
        out.push(ConstraintCheck {
            name: "τ₂/p + τ₁(1/p′−γ) ≥ 0".into(),
            value: mixed,
            bound: "0".into(),
            pass: mixed >= -tol,
        });
        out.push(ConstraintCheck {
            name: "τ₂/p + τ₁(1/p′−γ) ≤ 1 − n(1−γ)".into(),
            value: mixed,
            bound: format!("{upper}"),
            pass: mixed <= upper + tol,
        });
    } else {
        out.push(ConstraintCheck {
            name: "τ₂/p + τ₁(1/p′−γ) ≤ 0".into(),
            value: mixed,
            bound: "0".into(),
            pass: mixed <= tol,
        });
        let identity = tau2 / p + tau1 * inv_pc;
        out.push(ConstraintCheck {
            name: "τ₃ = τ₂/p + τ₁/p′".into(),
            value: tau3,
            bound: format!("{identity}"),
            pass: (tau3 - identity).abs() <= tol * (1.0 + identity.abs()),
        });
    }
    let combined = tau2 / p + tau1 * inv_pc;
    out.push(ConstraintCheck {
        name: "τ₂/p + τ₁/p′ ≥ 0".into(),
        value: combined,
        bound: "0".into(),
        pass: combined >= -tol,
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityReport {
    /// Concavity exponent tested; `None` stands for the logarithmic case.
    pub exponent: Option<f64>,
    pub differential: SampledCheck,
    pub segment: SampledCheck,
    /// The `1/τ`-concavity cross-check of the log-concave case.
    pub power: Option<SampledCheck>,
    pub pass: bool,
    pub caveat: String,
}

fn segment_check(
    name: &str,
    weight: &Weight,
    exponent: Option<f64>,
    pairs: &[(Vec<f64>, Vec<f64>)],
) -> Result<SampledCheck> {
    let eval = |x: &[f64], y: &[f64]| -> Result<Sample> {
        let (lx, ly) = (weight.try_value(x)?.ln(), weight.try_value(y)?.ln());
        let mut worst = Sample {
            normalized: f64::INFINITY,
            raw: f64::INFINITY,
            s: None,
        };
        for s in SEGMENT_POINTS {
            let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| (1.0 - s) * a + s * b).collect();
            let lz = weight.try_value(&z)?.ln();
            let lm = log_p_mean(lx, ly, exponent.unwrap_or(0.0), s);
            // ψ(z) ≥ M ⇔ ln ψ(z) − ln M ≥ 0
            let gap = lz - lm;
            if gap < worst.normalized {
                worst = Sample {
                    normalized: gap,
                    raw: lz.exp() - lm.exp(),
                    s: Some(s),
                };
            }
        }
        Ok(worst)
    };
    let evaluated = pairs.par_iter().map(|(x, y)| eval(x, y)).collect();
    summarize(name, pairs, evaluated, SLACK_TOLERANCE)
}

fn agree(report: &ConcavityReport) -> Result<()> {
    let mut verdicts = vec![
        (&report.differential.name, report.differential.pass),
        (&report.segment.name, report.segment.pass),
    ];
    if let Some(power) = &report.power {
        verdicts.push((&power.name, power.pass));
    }
    if verdicts.iter().any(|(_, v)| *v != verdicts[0].1) {
        let detail: Vec<String> = verdicts
            .iter()
            .map(|(name, v)| format!("{name}: {}", if *v { "pass" } else { "fail" }))
            .collect();
        return Err(Error::InternalConsistency(format!(
            "equivalent concavity tests disagree ({})",
            detail.join(", ")
        )));
    }
    Ok(())
}

/// `ω` is `(1−γ)/(1−n(1−γ))`-concave, tested both in differential form and
/// along segments; the two verdicts must agree.
pub fn check_p_concavity(
    weight: &Weight,
    gamma: f64,
    cone: &Cone,
    samples: usize,
    seed: u64,
) -> Result<ConcavityReport> {
    let n = cone.dim() as f64;
    let tau = weight.degree();
    if gamma == 1.0 {
        return Err(hypothesis("γ ≠ 1 (use check_log_concavity for the limit)"));
    }
    if tau < 0.0 {
        return Err(hypothesis(format!("τ ≥ 0 (got τ = {tau})")));
    }
    if gamma < 1.0 - 1.0 / (n + tau) {
        return Err(hypothesis(format!(
            "γ ≥ 1 − 1/(n+τ) = {} (got γ = {gamma})",
            1.0 - 1.0 / (n + tau)
        )));
    }
    weight.validate_for(cone)?;
    let exponent = (1.0 - gamma) / (1.0 - n * (1.0 - gamma));
    let lead = 1.0 / (1.0 - gamma) - n;
    let constant = 1.0 / (1.0 - gamma) - (n + tau);
    let pairs = ConeSampler::new(cone, seed).pairs(samples)?;

    let eval = |x: &[f64], y: &[f64]| -> Result<Sample> {
        let lr = weight.try_value(y)?.ln() - weight.try_value(x)?.ln();
        let lhs = lead * (exponent * lr).exp();
        let g = weight.log_gradient(x);
        let rhs = constant + g.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        let raw = rhs - lhs;
        Ok(Sample {
            normalized: raw / (1.0 + lhs.abs()),
            raw,
            s: None,
        })
    };
    let evaluated = pairs.par_iter().map(|(x, y)| eval(x, y)).collect();
    let differential = summarize("differential", &pairs, evaluated, SLACK_TOLERANCE)?;
    let segment = segment_check("segment p-mean", weight, Some(exponent), &pairs)?;
    let report = ConcavityReport {
        exponent: Some(exponent),
        pass: differential.pass && segment.pass,
        differential,
        segment,
        power: None,
        caveat: SAMPLING_CAVEAT.to_string(),
    };
    agree(&report)?;
    Ok(report)
}

/// Log-concavity of `ω` in differential form, along segments, and (for
/// `τ > 0`) as `1/τ`-concavity; all verdicts must agree.
pub fn check_log_concavity(
    weight: &Weight,
    cone: &Cone,
    samples: usize,
    seed: u64,
) -> Result<ConcavityReport> {
    let tau = weight.degree();
    if tau < 0.0 {
        return Err(hypothesis(format!("τ ≥ 0 (got τ = {tau})")));
    }
    weight.validate_for(cone)?;
    let pairs = ConeSampler::new(cone, seed).pairs(samples)?;
    let eval = |x: &[f64], y: &[f64]| -> Result<Sample> {
        let lhs = weight.try_value(y)?.ln() - weight.try_value(x)?.ln();
        let g = weight.log_gradient(x);
        let rhs = -tau + g.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        let raw = rhs - lhs;
        Ok(Sample {
            normalized: raw / (1.0 + lhs.abs()),
            raw,
            s: None,
        })
    };
    let evaluated = pairs.par_iter().map(|(x, y)| eval(x, y)).collect();
    let differential = summarize("differential", &pairs, evaluated, SLACK_TOLERANCE)?;
    let segment = segment_check("segment log-concavity", weight, None, &pairs)?;
    let power = if tau > 0.0 {
        Some(segment_check("1/τ-concavity", weight, Some(1.0 / tau), &pairs)?)
    } else {
        None
    };
    let report = ConcavityReport {
        exponent: None,
        pass: differential.pass && segment.pass && power.as_ref().is_none_or(|c| c.pass),
        differential,
        segment,
        power,
        caveat: SAMPLING_CAVEAT.to_string(),
    };
    agree(&report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfimumReport {
    /// `inf ω₁(x)/ω₃(x) · (…)^{1/(1−n(1−γ))}` over grid pairs.
    pub first_infimum: f64,
    /// `inf ∇(ω₂^{1/p}ω₁^{1/p′})(x)·y / ω₃(x)` over grid pairs.
    pub second_infimum: f64,
    pub grid_points: usize,
    pub threshold: f64,
    pub pass: bool,
    pub caveat: String,
}

/// Grid estimates of the two infima in the γ > 1 sufficient condition.
pub fn check_gamma_gt1_inf_conditions(
    w1: &Weight,
    w2: &Weight,
    w3: &Weight,
    params: &Params,
    cone: &Cone,
    grid_resolution: usize,
) -> Result<InfimumReport> {
    let (p, gamma, n) = (params.p, params.gamma, params.n as f64);
    let inv_pc = params.inv_p_conj();
    let (t1, t2, t3) = (w1.degree(), w2.degree(), w3.degree());
    if gamma <= 1.0 {
        return Err(hypothesis(format!("γ > 1 (got γ = {gamma})")));
    }
    if t1 > 0.0 && gamma <= t3 / t1 {
        return Err(hypothesis(format!("γ > τ₃/τ₁ = {} (got γ = {gamma})", t3 / t1)));
    }
    if t1 <= 0.0 && t3 > 0.0 {
        return Err(hypothesis("γ > τ₃/τ₁ needs τ₁ > 0 when τ₃ > 0"));
    }
    let identity = t2 / p + t1 * inv_pc;
    if (t3 - identity).abs() > 1e-12 * (1.0 + identity.abs()) {
        return Err(hypothesis(format!("τ₃ = τ₂/p + τ₁/p′ (got {t3} vs {identity})")));
    }
    for w in [w1, w2, w3] {
        w.validate_for(cone)?;
    }
    let clearance = BOUNDARY_ANGLE.sin();
    let grid = sphere_cone_quadrature(cone, grid_resolution)?;
    let nodes: Vec<&[f64]> = grid
        .nodes()
        .filter(|x| cone.boundary_clearance(x) >= clearance)
        .collect();
    if nodes.is_empty() {
        return Err(Error::Config("no grid node is clear of the cone boundary".into()));
    }
    let power = 1.0 / (1.0 - n * (1.0 - gamma));
    let by_x: Vec<Result<(f64, f64)>> = nodes
        .par_iter()
        .map(|x| {
            let (l1, l2, l3) = (
                w1.try_value(x)?.ln(),
                w2.try_value(x)?.ln(),
                w3.try_value(x)?.ln(),
            );
            let g1 = w1.log_gradient(x);
            let g2 = w2.log_gradient(x);
            // ∇(ω₂^{1/p}ω₁^{1/p′})/ω₃ = (ω₂^{1/p}ω₁^{1/p′}/ω₃)(∇ω₂/(pω₂) + ∇ω₁/(p′ω₁))
            let prefactor = (l2 / p + l1 * inv_pc - l3).exp();
            let mut first = f64::INFINITY;
            let mut second = f64::INFINITY;
            for y in &nodes {
                let ly1 = w1.try_value(y)?.ln();
                let ly2 = w2.try_value(y)?.ln();
                let log_ratio = ly2 / p + ly1 * (inv_pc - gamma)
                    - l2 * n * (1.0 - gamma) / p
                    - l1 * (1.0 - n / p) * (1.0 - gamma);
                first = first.min((l1 - l3 + power * log_ratio).exp());
                let dot: f64 = (0..y.len()).map(|i| (g2[i] / p + g1[i] * inv_pc) * y[i]).sum();
                second = second.min(prefactor * dot);
            }
            Ok((first, second))
        })
        .collect();
    let mut first = f64::INFINITY;
    let mut second = f64::INFINITY;
    for r in by_x {
        let (a, b) = r?;
        first = first.min(a);
        second = second.min(b);
    }
    let threshold = f64::MIN_POSITIVE;
    Ok(InfimumReport {
        first_infimum: first,
        second_infimum: second,
        grid_points: nodes.len(),
        threshold,
        pass: first > threshold && second > threshold,
        caveat: format!(
            "grid estimate over nodes at angular distance ≥ {BOUNDARY_ANGLE} from the boundary; \
             the infimum over the open sphere can be smaller"
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example3Report {
    pub concavity: ConditionVerdict,
    pub degree_inequality: ConditionVerdict,
    pub domination: ConditionVerdict,
    pub monotonicity: ConditionVerdict,
    /// Constants the four conditions would certify: `C₀ = 1`, `K = −n − τ₁/p − τ₂(1/p′−γ)`.
    pub implied_c0: f64,
    pub implied_k: f64,
    pub all_pass: bool,
}

/// Sampled check of the four sufficient conditions for condition (C) with
/// `C₀ = 1`.
pub fn check_example3_sufficient(
    w1: &Weight,
    w2: &Weight,
    w3: &Weight,
    params: &Params,
    cone: &Cone,
    samples: usize,
    seed: u64,
) -> Result<Example3Report> {
    let (p, gamma, n) = (params.p, params.gamma, params.n as f64);
    let inv_pc = params.inv_p_conj();
    if gamma == 1.0 || gamma < 1.0 - 1.0 / n {
        return Err(hypothesis(format!("γ ≥ 1 − 1/n and γ ≠ 1 (got γ = {gamma})")));
    }
    for w in [w1, w2, w3] {
        w.validate_for(cone)?;
    }
    let (t1, t2) = (w1.degree(), w2.degree());

    // (i)
    let psi = Weight::product(vec![(w2.clone(), 1.0 / p), (w1.clone(), inv_pc - gamma)])?;
    let concavity = match check_p_concavity(&psi, gamma, cone, samples, seed) {
        Ok(r) => ConditionVerdict {
            verdict: Verdict::from_bool(r.pass),
            detail: format!(
                "ω₂^(1/p)ω₁^(1/p′−γ) at exponent {:.6}: min differential slack {:.3e}, min segment gap {:.3e}",
                r.exponent.unwrap_or(f64::NAN),
                r.differential.min_normalized_slack,
                r.segment.min_normalized_slack
            ),
        },
        Err(Error::Hypothesis(why)) => {
            let exponent = (1.0 - gamma) / (1.0 - n * (1.0 - gamma));
            let pairs = ConeSampler::new(cone, seed).pairs(samples)?;
            let seg = segment_check("segment p-mean", &psi, Some(exponent), &pairs)?;
            ConditionVerdict {
                verdict: Verdict::from_bool(seg.pass),
                detail: format!(
                    "segment test only ({why}); min gap {:.3e}",
                    seg.min_normalized_slack
                ),
            }
        }
        Err(e) => return Err(e),
    };

    // (ii), as stated for γ > 1
    let degree_inequality = if gamma > 1.0 {
        let value = (1.0 - gamma) * (n + t1 / p + t2 * (inv_pc - gamma));
        ConditionVerdict {
            verdict: Verdict::from_bool(1.0 > value),
            detail: format!("1 > (1−γ)(n + τ₁/p + τ₂(1/p′−γ)) = {value}"),
        }
    } else {
        ConditionVerdict {
            verdict: Verdict::NotApplicable,
            detail: "only required for γ > 1".into(),
        }
    };

    let pairs = ConeSampler::new(cone, seed.wrapping_add(1)).pairs(samples)?;

    // (iii) ω₃ ≥ ω₂^{1/p}ω₁^{1/p′}, in log form
    let dom: Vec<Result<Sample>> = pairs
        .par_iter()
        .map(|(x, _)| {
            let gap = w3.try_value(x)?.ln() - w2.try_value(x)?.ln() / p - w1.try_value(x)?.ln() * inv_pc;
            Ok(Sample {
                normalized: gap,
                raw: gap,
                s: None,
            })
        })
        .collect();
    let dom = summarize("ω₃ ≥ ω₂^(1/p)ω₁^(1/p′)", &pairs, dom, SLACK_TOLERANCE)?;
    let domination = ConditionVerdict {
        verdict: Verdict::from_bool(dom.pass),
        detail: format!("min log(ω₃/(ω₂^(1/p)ω₁^(1/p′))) = {:.3e} at {:?}", dom.min_slack, dom.argmin_x),
    };

    // (iv) ∇ω₁(x)·y ≥ 0, scaled by |y|/ω₁(x)
    let mono: Vec<Result<Sample>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let g = w1.log_gradient(x);
            let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let d: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / ny;
            Ok(Sample {
                normalized: d,
                raw: d,
                s: None,
            })
        })
        .collect();
    let mono = summarize("∇ω₁(x)·y ≥ 0", &pairs, mono, SLACK_TOLERANCE)?;
    let monotonicity = ConditionVerdict {
        verdict: Verdict::from_bool(mono.pass),
        detail: format!(
            "min ∇ω₁(x)·y/(ω₁(x)|y|) = {:.3e} at x = {:?}, y = {:?}",
            mono.min_slack, mono.argmin_x, mono.argmin_y
        ),
    };

    let all_pass = [&concavity, &degree_inequality, &domination, &monotonicity]
        .iter()
        .all(|c| c.verdict != Verdict::Fail);
    Ok(Example3Report {
        concavity,
        degree_inequality,
        domination,
        monotonicity,
        implied_c0: 1.0,
        implied_k: -n - t1 / p - t2 * (inv_pc - gamma),
        all_pass,
    })
}
