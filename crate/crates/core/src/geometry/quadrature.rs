use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

use super::cone::{Cone, ConeRepr};
use super::weight::Weight;

/// Gauss–Legendre order used on every radial panel.
pub const PANEL_ORDER: usize = 64;

/// Default relative tolerance for radial refinement.
pub const DEFAULT_RADIAL_TOL: f64 = 1e-11;

const MAX_RADIAL_DEPTH: u32 = 18;

/// Gauss–Legendre nodes and weights on `(0, 1)`.
pub fn gauss_legendre_unit(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_order.
        let mut x = ((i as f64 + 0.75) / (order as f64 + 0.5) * PI).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] to [0, 1].
        nodes[i] = 0.5 * (1.0 - x);
        nodes[order - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[order - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=order {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_unit(PANEL_ORDER))
}

/// Order-independent pairwise (tree) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereRule {
    /// Periodized midpoint rule per angle (n = 2, 3).
    Tensor,
    /// Halton points with equal weights.
    QuasiRandom,
}

/// Spherical nodes in `S^{n−1} ∩ E` plus the radial rule settings.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureGrid {
    pub n: usize,
    pub resolution: usize,
    pub rule: SphereRule,
    /// Row-major `len × n` unit vectors.
    nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Relative accuracy the spherical rule is expected to reach on smooth weights.
    pub sphere_tolerance: f64,
    pub radial_tolerance: f64,
    pub radial_order: usize,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.n)
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn with_radial_tolerance(mut self, tol: f64) -> Self {
        self.radial_tolerance = tol;
        self
    }
}

/// Sphere grid with the default rule for the dimension: tensor for n ≤ 3,
/// quasi-random above.
pub fn sphere_cone_quadrature(cone: &Cone, resolution: usize) -> Result<QuadratureGrid> {
    let rule = if cone.dim() <= 3 {
        SphereRule::Tensor
    } else {
        SphereRule::QuasiRandom
    };
    sphere_cone_quadrature_with(cone, resolution, rule)
}

pub fn sphere_cone_quadrature_with(
    cone: &Cone,
    resolution: usize,
    rule: SphereRule,
) -> Result<QuadratureGrid> {
    if resolution < 4 {
        return Err(Error::Config(format!(
            "quadrature resolution must be at least 4 (got {resolution})"
        )));
    }
    let n = cone.dim();
    let (nodes, weights, sphere_tolerance) = match (rule, n) {
        (SphereRule::Tensor, 2) => {
            let (a, b) = cone.arc_2d().expect("2-D cones have an arc");
            let (ts, ws) = angular_rule(a, b, resolution, b - a >= 2.0 * PI - 1e-12);
            let nodes = ts.iter().flat_map(|t| [t.cos(), t.sin()]).collect();
            (nodes, ws, 1e-12)
        }
        (SphereRule::Tensor, 3) => tensor_3d(cone, resolution),
        (SphereRule::Tensor, _) => {
            return Err(Error::UnsupportedDimension {
                n,
                what: "tensor sphere quadrature",
            })
        }
        (SphereRule::QuasiRandom, _) => halton_sphere(cone, resolution),
    };
    if weights.is_empty() {
        return Err(Error::Config(
            "no quadrature node falls inside the cone; increase the resolution".into(),
        ));
    }
    Ok(QuadratureGrid {
        n,
        resolution,
        rule,
        nodes,
        weights,
        sphere_tolerance,
        radial_tolerance: DEFAULT_RADIAL_TOL,
        radial_order: PANEL_ORDER,
    })
}

/// Midpoint rule in `t ∈ (0,1)` composed with a sin⁴ periodizing map, so the
/// transformed integrand vanishes to high order at both ends. Full circles
/// use the plain periodic midpoint rule.
fn angular_rule(a: f64, b: f64, m: usize, periodic: bool) -> (Vec<f64>, Vec<f64>) {
    let len = b - a;
    let h = 1.0 / m as f64;
    (0..m)
        .map(|j| {
            let t = (j as f64 + 0.5) * h;
            if periodic {
                (a + len * t, len * h)
            } else {
                let psi = t - (2.0 / (3.0 * PI)) * (2.0 * PI * t).sin()
                    + (1.0 / (12.0 * PI)) * (4.0 * PI * t).sin();
                let dpsi = (8.0 / 3.0) * (PI * t).sin().powi(4);
                (a + len * psi, len * dpsi * h)
            }
        })
        .unzip()
}

fn tensor_3d(cone: &Cone, res: usize) -> (Vec<f64>, Vec<f64>, f64) {
    // x = (sinθ cosφ, sinθ sinφ, cosθ)
    let (theta_hi, phi, reject) = match cone.repr() {
        ConeRepr::OrthantMask(mask) => {
            let theta_hi = if mask[2] { 0.5 * PI } else { PI };
            let phi = match (mask[0], mask[1]) {
                (false, false) => (0.0, 2.0 * PI),
                (true, false) => (-0.5 * PI, 0.5 * PI),
                (false, true) => (0.0, PI),
                (true, true) => (0.0, 0.5 * PI),
            };
            (theta_hi, phi, false)
        }
        ConeRepr::Halfspaces(normals) => (PI, (0.0, 2.0 * PI), !normals.is_empty()),
    };
    let (thetas, wt) = angular_rule(0.0, theta_hi, res, false);
    let phi_full = phi.1 - phi.0 >= 2.0 * PI - 1e-12;
    let phi_res = if phi_full { 2 * res } else { res };
    let (phis, wp) = angular_rule(phi.0, phi.1, phi_res, phi_full);
    let mut nodes = Vec::with_capacity(3 * res * phi_res);
    let mut weights = Vec::with_capacity(res * phi_res);
    for (th, w1) in thetas.iter().zip(&wt) {
        let (s, c) = th.sin_cos();
        for (ph, w2) in phis.iter().zip(&wp) {
            let x = [s * ph.cos(), s * ph.sin(), c];
            if reject && !cone.contains(&x) {
                continue;
            }
            nodes.extend_from_slice(&x);
            weights.push(w1 * w2 * s);
        }
    }
    // Rejection leaves an O(1/res) boundary error.
    let tol = if reject { 2.0 / res as f64 } else { 1e-10 };
    (nodes, weights, tol)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut result = 0.0;
    let mut f = inv;
    while i > 0 {
        result += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    result
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn halton_sphere(cone: &Cone, res: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let n = cone.dim();
    assert!(n <= PRIMES.len(), "Halton sphere rule supports n ≤ 16");
    let target = (4 * res * res).max(4096);
    let log_area = std::f64::consts::LN_2 + 0.5 * n as f64 * PI.ln()
        - log_gamma(0.5 * n as f64).expect("n/2 is positive");
    let full_area = log_area.exp();
    let mut nodes = Vec::with_capacity(n * target);
    let mut in_ball = 0usize;
    let mut i = 1u64;
    let mut x = vec![0.0; n];
    while in_ball < target {
        for (d, xd) in x.iter_mut().enumerate() {
            *xd = 2.0 * radical_inverse(i, PRIMES[d]) - 1.0;
        }
        i += 1;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if !(1e-6..=1.0).contains(&r2) {
            continue;
        }
        in_ball += 1;
        let r = r2.sqrt();
        let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
        if let Some(folded) = cone.fold(&unit) {
            nodes.extend_from_slice(&folded);
        }
    }
    let accepted = nodes.len() / n;
    let area = match cone.folded_coordinates() {
        Some(m) => full_area / 2f64.powi(m as i32),
        None => full_area * accepted as f64 / in_ball as f64,
    };
    let w = area / accepted.max(1) as f64;
    (nodes, vec![w; accepted], 1e-3)
}

/// An integrand on the cone, evaluated along rays `r·dir`.
pub trait ConeIntegrand: Sync {
    /// `f(r·dir)` for a unit `dir` inside the cone.
    fn value(&self, r: f64, dir: &[f64]) -> f64;

    /// Radial support `[a, b]` along `dir` (`b = None` for unbounded);
    /// `None` when the ray misses the support.
    fn ray_support(&self, _dir: &[f64]) -> Option<(f64, Option<f64>)> {
        Some((0.0, None))
    }

    /// Points on the ray where the integrand has a kink.
    fn breakpoints(&self, _dir: &[f64]) -> Vec<f64> {
        Vec::new()
    }

    /// True when `value` ignores `dir`.
    fn is_radial(&self) -> bool {
        false
    }
}

/// A result of the radial-spherical rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// False when some radial panel hit the depth cap before two refinements agreed.
    pub converged: bool,
    /// Largest disagreement between successive refinements, relative to the total.
    pub refinement_gap: f64,
}

/// Adaptive composite Gauss–Legendre on `[a, b]` (or `[a, ∞)` via `r = a + t/(1−t)`).
pub fn radial_integral(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: Option<f64>,
    breakpoints: &[f64],
    tol: f64,
) -> Result<IntegralEstimate> {
    let (nodes, weights) = panel_rule();
    // Work in t-space for unbounded supports.
    let to_t = |r: f64| match b {
        Some(_) => r,
        None => {
            let s = r - a;
            s / (1.0 + s)
        }
    };
    let integrand = |t: f64| -> f64 {
        match b {
            Some(_) => g(t),
            None => {
                let one_minus = 1.0 - t;
                let r = a + t / one_minus;
                let v = g(r);
                if v == 0.0 {
                    0.0
                } else {
                    v / (one_minus * one_minus)
                }
            }
        }
    };
    let (lo, hi) = match b {
        Some(b) => (a, b),
        None => (0.0, 1.0),
    };
    if hi <= lo {
        return Ok(IntegralEstimate {
            value: 0.0,
            converged: true,
            refinement_gap: 0.0,
        });
    }
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .filter(|r| **r > a && b.is_none_or(|b| **r < b))
        .map(|r| to_t(*r))
        .filter(|t| *t > lo && *t < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);

    let panel = |x0: f64, x1: f64| -> f64 {
        let h = x1 - x0;
        let mut acc = 0.0;
        for (t, w) in nodes.iter().zip(weights) {
            acc += w * integrand(x0 + h * t);
        }
        acc * h
    };

    let coarse: Vec<f64> = cuts.windows(2).map(|c| panel(c[0], c[1])).collect();
    let scale = coarse.iter().map(|v| v.abs()).sum::<f64>();
    if !scale.is_finite() {
        return Err(Error::Divergent(format!(
            "radial panel sum is {scale} on [{a}, {}]",
            b.map_or("∞".to_string(), |b| b.to_string())
        )));
    }
    if scale == 0.0 {
        return Ok(IntegralEstimate {
            value: 0.0,
            converged: true,
            refinement_gap: 0.0,
        });
    }
    let abs_tol = tol * scale;
    let mut state = Adaptive {
        converged: true,
        gap: 0.0,
    };
    let mut parts = Vec::with_capacity(coarse.len());
    for (c, whole) in cuts.windows(2).zip(coarse) {
        let len_frac = (c[1] - c[0]) / (hi - lo);
        parts.push(refine(&panel, c[0], c[1], whole, abs_tol * len_frac.max(1e-3), 0, &mut state));
    }
    let value = pairwise_sum(&parts);
    if !value.is_finite() {
        return Err(Error::Divergent(format!("radial integral evaluated to {value}")));
    }
    Ok(IntegralEstimate {
        value,
        converged: state.converged,
        refinement_gap: state.gap / scale,
    })
}

struct Adaptive {
    converged: bool,
    gap: f64,
}

fn refine(
    panel: &impl Fn(f64, f64) -> f64,
    x0: f64,
    x1: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
    state: &mut Adaptive,
) -> f64 {
    let mid = 0.5 * (x0 + x1);
    let left = panel(x0, mid);
    let right = panel(mid, x1);
    let halves = left + right;
    let gap = (halves - whole).abs();
    if gap <= abs_tol || !gap.is_finite() {
        return halves;
    }
    if depth >= MAX_RADIAL_DEPTH {
        state.converged = false;
        state.gap = state.gap.max(gap);
        return halves;
    }
    refine(panel, x0, mid, left, 0.5 * abs_tol, depth + 1, state)
        + refine(panel, mid, x1, right, 0.5 * abs_tol, depth + 1, state)
}

/// `∫_E f ω` by spherical nodes times an adaptive radial rule, using
/// `ω(r·θ) = r^τ ω(θ)`.
pub fn cone_integral(
    integrand: &dyn ConeIntegrand,
    weight: &Weight,
    cone: &Cone,
    grid: &QuadratureGrid,
) -> Result<IntegralEstimate> {
    if grid.n != cone.dim() || weight.dim() != cone.dim() {
        return Err(Error::Config(
            "integrand, weight, cone and grid dimensions differ".into(),
        ));
    }
    let jac = cone.dim() as f64 - 1.0 + weight.degree();
    let tol = grid.radial_tolerance;
    let ray = |dir: &[f64]| -> Result<IntegralEstimate> {
        let Some((a, b)) = integrand.ray_support(dir) else {
            return Ok(IntegralEstimate {
                value: 0.0,
                converged: true,
                refinement_gap: 0.0,
            });
        };
        let g = |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let f = integrand.value(r, dir);
            if f == 0.0 {
                0.0
            } else {
                f * r.powf(jac)
            }
        };
        radial_integral(g, a.max(0.0), b, &integrand.breakpoints(dir), tol)
    };

    let angular = |i: usize| -> Result<f64> {
        let dir = grid.node(i);
        Ok(grid.weights[i] * weight.try_value(dir)?)
    };

    if integrand.is_radial() {
        let sphere: Vec<f64> = (0..grid.len()).map(angular).collect::<Result<_>>()?;
        let radial = ray(grid.node(0))?;
        return Ok(IntegralEstimate {
            value: pairwise_sum(&sphere) * radial.value,
            ..radial
        });
    }

    let per_node: Vec<(f64, IntegralEstimate)> = (0..grid.len())
        .into_par_iter()
        .map(|i| Ok((angular(i)?, ray(grid.node(i))?)))
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = per_node.iter().map(|(w, est)| w * est.value).collect();
    let value = pairwise_sum(&terms);
    let scale = per_node
        .iter()
        .map(|(w, est)| (w * est.value).abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let refinement_gap = per_node
        .iter()
        .map(|(w, est)| w * est.refinement_gap * est.value.abs())
        .sum::<f64>()
        / scale;
    if !value.is_finite() {
        return Err(Error::Divergent(format!("cone integral evaluated to {value}")));
    }
    Ok(IntegralEstimate {
        value,
        converged: per_node.iter().all(|(_, est)| est.converged),
        refinement_gap,
    })
}

/// Closure adaptor for [`ConeIntegrand`].
pub struct FnIntegrand<F> {
    f: F,
    support: Option<f64>,
    breakpoints: Vec<f64>,
    radial: bool,
}

impl<F: Fn(f64, &[f64]) -> f64 + Sync> FnIntegrand<F> {
    /// Unbounded support, direction-dependent.
    pub fn new(f: F) -> Self {
        Self {
            f,
            support: None,
            breakpoints: Vec::new(),
            radial: false,
        }
    }

    /// Support `|x| ≤ radius`.
    pub fn within(mut self, radius: f64) -> Self {
        self.support = Some(radius);
        self
    }

    pub fn radial(mut self) -> Self {
        self.radial = true;
        self
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }
}

impl<F: Fn(f64, &[f64]) -> f64 + Sync> ConeIntegrand for FnIntegrand<F> {
    fn value(&self, r: f64, dir: &[f64]) -> f64 {
        (self.f)(r, dir)
    }

    fn ray_support(&self, _dir: &[f64]) -> Option<(f64, Option<f64>)> {
        Some((0.0, self.support))
    }

    fn breakpoints(&self, _dir: &[f64]) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn is_radial(&self) -> bool {
        self.radial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        let (x, w) = gauss_legendre_unit(PANEL_ORDER);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for k in [1, 7, 50, 127] {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sphere_totals() {
        let plane = sphere_cone_quadrature(&Cone::whole_space(2).unwrap(), 64).unwrap();
        assert!((plane.total_weight() - 2.0 * PI).abs() < 1e-13);
        let quadrant = sphere_cone_quadrature(&Cone::positive_orthant(2).unwrap(), 64).unwrap();
        assert!((quadrant.total_weight() - 0.5 * PI).abs() < 1e-14);
        let octant = sphere_cone_quadrature(&Cone::positive_orthant(3).unwrap(), 64).unwrap();
        assert!((octant.total_weight() - 0.5 * PI).abs() < 1e-10 * 0.5 * PI);
        let space = sphere_cone_quadrature(&Cone::whole_space(3).unwrap(), 64).unwrap();
        assert!((space.total_weight() - 4.0 * PI).abs() < 1e-10 * 4.0 * PI);
    }

    #[test]
    fn wedge_total_is_exact() {
        let wedge = Cone::halfspaces(2, vec![vec![1.0, 0.0], vec![-1.0, 1.0]]).unwrap();
        let grid = sphere_cone_quadrature(&wedge, 16).unwrap();
        assert!((grid.total_weight() - 0.25 * PI).abs() < 1e-14);
        assert!(grid.nodes().all(|x| wedge.contains(x)));
    }

    #[test]
    fn tensor_rejected_in_high_dimension() {
        let cone = Cone::positive_orthant(4).unwrap();
        let err = sphere_cone_quadrature_with(&cone, 16, SphereRule::Tensor).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDimension { n: 4, .. }));
    }

    #[test]
    fn halton_area_in_four_dimensions() {
        let cone = Cone::positive_orthant(4).unwrap();
        let grid = sphere_cone_quadrature(&cone, 64).unwrap();
        // |S³| = 2π², one sixteenth of it.
        assert!((grid.total_weight() - 2.0 * PI * PI / 16.0).abs() < 1e-12);
        assert!(grid.nodes().all(|x| cone.contains(x)));
        // Non-constant integrand against the exact monomial formula.
        let w = Weight::monomial(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let exact = w.omega_se_exact(&cone).unwrap();
        let est: f64 = grid.nodes().zip(&grid.weights).map(|(x, wt)| wt * x[0]).sum();
        assert!((est - exact).abs() < 1e-3 * exact, "{est} vs {exact}");
    }

    #[test]
    fn nodes_strictly_inside() {
        for cone in [
            Cone::positive_orthant(2).unwrap(),
            Cone::positive_orthant(3).unwrap(),
            Cone::orthant_mask(vec![true, false, false]).unwrap(),
            Cone::halfspaces(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap(),
        ] {
            let grid = sphere_cone_quadrature(&cone, 32).unwrap();
            assert!(grid.nodes().all(|x| cone.contains(x)));
            assert!(grid.weights.iter().all(|w| *w > 0.0));
        }
    }

    #[test]
    fn radial_rule_basics() {
        let est = radial_integral(|r| (-r).exp(), 0.0, None, &[], 1e-12).unwrap();
        assert!((est.value - 1.0).abs() < 1e-13);
        assert!(est.converged);
        let est = radial_integral(|r| (1.0 - r).abs(), 0.0, Some(2.0), &[1.0], 1e-12).unwrap();
        assert!((est.value - 1.0).abs() < 1e-14);
        // Slow algebraic tail.
        let est = radial_integral(|r| (1.0 + r).powf(-2.5), 0.0, None, &[], 1e-12).unwrap();
        assert!((est.value - 1.0 / 1.5).abs() < 1e-11, "{}", est.value);
    }

    #[test]
    fn non_convergence_is_flagged() {
        // ∫₀^∞ dr / (1+r) diverges logarithmically.
        match radial_integral(|r| 1.0 / (1.0 + r), 0.0, None, &[], 1e-12) {
            Ok(est) => assert!(!est.converged),
            Err(Error::Divergent(_)) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn disc_and_gaussian_in_the_plane() {
        let cone = Cone::whole_space(2).unwrap();
        let grid = sphere_cone_quadrature(&cone, 64).unwrap();
        let one = Weight::constant(2, 1.0).unwrap();
        let disc = FnIntegrand::new(|_, _| 1.0).within(1.0).radial();
        let v = cone_integral(&disc, &one, &cone, &grid).unwrap();
        assert!((v.value - PI).abs() < 1e-12);
        let gauss = FnIntegrand::new(|r: f64, _: &[f64]| (-r * r).exp());
        let v = cone_integral(&gauss, &one, &cone, &grid).unwrap();
        assert!((v.value - PI).abs() < 1e-11, "{}", v.value);
    }

    proptest! {
        #[test]
        fn pairwise_matches_naive(values in prop::collection::vec(-1e3f64..1e3, 0..200)) {
            let naive: f64 = values.iter().sum();
            let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!((pairwise_sum(&values) - naive).abs() <= 1e-12 * scale);
        }
    }
}
