use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use wgn_core::conditions::monomial_condition_constants;
use wgn_core::constants::{sharp_gn_constant, ConstantsBundle};
use wgn_core::functionals::{
    bundle_with_family_constant, faber_krahn_ratio, gn_ratio, isoperimetric_ratio, isoperimetric_ratio_box,
    log_sobolev_deficit, sample_test_functions, FamilyConstant, RatioReport, TestFunction,
};
use wgn_core::geometry::{
    cross_check, omega_se_reference, sphere_cone_quadrature, Cone, ConeRepr, CrossCheck, QuadratureGrid,
    RadialForm, Weight,
};
use wgn_core::sampling::ConeSampler;
use wgn_core::{derive_params, Mode, Params};

use crate::config::{RunConfig, Suite, Tolerances};
use crate::report::{Row, SCHEMA_VERSION};

/// Nelder–Mead budget for the profile search behind unequal-weight constants.
const FAMILY_BUDGET: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The evaluation itself failed (divergent quadrature, domain error).
    Error,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub count: usize,
    /// Worst value of the checked quantity over the cell.
    pub worst: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl Check {
    fn new(name: String, tolerance: f64) -> Self {
        Self {
            name,
            status: Status::Pass,
            count: 0,
            worst: None,
            tolerance,
            detail: None,
            rows: Vec::new(),
        }
    }

    fn error(mut self, e: impl std::fmt::Display) -> Self {
        self.status = Status::Error;
        self.detail = Some(e.to_string());
        self
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Skipped)
    }
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    GnEquality(f64),
    /// Unequal weights: no extremal is known for the searched constant.
    GnEqualitySkipped,
    GnDirection,
    GnRescaling,
    GnDuality,
    LsEquality(f64),
    LsDirection,
    FkEquality(f64),
    FkDirection,
    IsoEquality(f64),
    IsoDirection,
}

pub struct Context<'a> {
    pub config: &'a RunConfig,
    pub cone: Cone,
    pub grid: QuadratureGrid,
    pub w1: Weight,
    pub w2: Weight,
    pub w3: Option<Weight>,
    pub ball: f64,
    hash: String,
}

impl<'a> Context<'a> {
    pub fn new(config: &'a RunConfig) -> Result<Self> {
        let cone = config.cone()?;
        let grid = sphere_cone_quadrature(&cone, config.resolution)?;
        let (w1, w2, w3) = config.triplet()?;
        for w in [Some(&w1), Some(&w2), w3.as_ref()].into_iter().flatten() {
            w.validate_for(&cone)?;
        }
        let dim = config.n as f64 + w1.degree();
        let ball = omega_se_reference(&w1, &cone)? / dim;
        Ok(Self {
            config,
            cone,
            grid,
            w1,
            w2,
            w3,
            ball,
            hash: config.hash(),
        })
    }

    fn tol(&self) -> &Tolerances {
        &self.config.tolerances
    }

    fn row(&self, u: &TestFunction, lhs: Option<f64>, rhs: Option<f64>, ratio: Option<f64>, deficit: Option<f64>) -> Row {
        let value = serde_json::to_value(&u.family).expect("family serializes");
        self.row_named(
            value["family"].as_str().unwrap_or("unknown").to_string(),
            value.to_string(),
            lhs,
            rhs,
            ratio,
            deficit,
        )
    }

    fn row_named(
        &self,
        family: String,
        parameters: String,
        lhs: Option<f64>,
        rhs: Option<f64>,
        ratio: Option<f64>,
        deficit: Option<f64>,
    ) -> Row {
        Row {
            schema_version: SCHEMA_VERSION,
            config_hash: self.hash.clone(),
            family,
            parameters,
            lhs,
            rhs,
            ratio,
            deficit,
            resolution: self.config.resolution,
            note: None,
        }
    }

    fn ratio_row(&self, u: &TestFunction, r: &RatioReport) -> Row {
        self.row(u, Some(r.lhs), Some(r.rhs), Some(r.ratio), Some(1.0 - r.ratio))
    }

    /// `(C₀, K)`: from the config, the equal-weight pair, or the monomial
    /// construction.
    pub fn condition_constants(&self, params: &Params) -> Result<(f64, f64)> {
        if let Some(c) = &self.config.condition {
            return Ok((c.c0, c.k));
        }
        if self.config.equal_weights() {
            return Ok((1.0, -(params.n as f64) - self.w1.degree()));
        }
        let exps = self.config.monomial_exponents();
        if params.mode != Mode::GammaLt1 {
            bail!("condition: give (c0, k) explicitly for unequal weights with γ > 1");
        }
        let c = monomial_condition_constants(params, &exps[0], &exps[1])?;
        Ok((c.c0, c.k))
    }

    /// Bundle with a usable GN constant: sharp for equal weights, otherwise
    /// from the profile search.
    pub fn gn_bundle(&self, params: &Params) -> Result<(ConstantsBundle, Option<FamilyConstant>)> {
        if params.mode == Mode::LogSobolevLimit {
            bail!("the GN suite needs γ ≠ 1");
        }
        if self.config.equal_weights() {
            let b = ConstantsBundle::equal_weight(params, self.w1.degree(), self.ball)?;
            if b.gn_constant.is_some() {
                return Ok((b, None));
            }
        }
        let Some(w3) = &self.w3 else {
            bail!("the GN suite needs three weights (or one shared weight)");
        };
        let (c0, k) = self.condition_constants(params)?;
        let (b, fam) = bundle_with_family_constant(
            &self.w1,
            &self.w2,
            w3,
            params,
            k,
            c0,
            &self.cone,
            &self.grid,
            FAMILY_BUDGET,
        )?;
        Ok((b, Some(fam)))
    }

    fn extremal(&self, params: &Params, lambda: f64) -> wgn_core::Result<TestFunction> {
        let x0 = vec![0.0; params.n];
        match params.mode {
            Mode::GammaGt1 => TestFunction::compact_extremal(params, 1.0, lambda, x0),
            _ => TestFunction::power_extremal(params, 1.0, lambda, x0),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gn_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_constant: Option<FamilyConstant>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

pub fn verify(ctx: &Context) -> Result<(SuiteReport, Vec<Row>)> {
    let config = ctx.config;
    let params = config.params()?;
    let lambdas = &config.lambdas;
    let gn = matches!(config.suite, Suite::Gn) || (config.suite == Suite::All && params.mode != Mode::LogSobolevLimit);
    let mut cells = Vec::new();
    let mut gn_state = None;
    if gn {
        let (bundle, fam) = ctx.gn_bundle(&params)?;
        let sharp = bundle.sharp_constant.is_some();
        if sharp {
            cells.extend(lambdas.iter().map(|l| Cell::GnEquality(*l)));
        } else {
            cells.push(Cell::GnEqualitySkipped);
        }
        cells.extend([Cell::GnDirection, Cell::GnRescaling]);
        if sharp {
            cells.push(Cell::GnDuality);
        }
        gn_state = Some((bundle, fam));
    }
    let ls_params = derive_params(config.n, config.p, 1.0)?;
    if matches!(config.suite, Suite::LogSobolev | Suite::All) {
        cells.extend(lambdas.iter().map(|l| Cell::LsEquality(*l)));
        cells.push(Cell::LsDirection);
    }
    if matches!(config.suite, Suite::FaberKrahn | Suite::All) {
        cells.extend(lambdas.iter().map(|l| Cell::FkEquality(*l)));
        cells.push(Cell::FkDirection);
    }
    if matches!(config.suite, Suite::Isoperimetric | Suite::All) {
        cells.extend(lambdas.iter().map(|l| Cell::IsoEquality(*l)));
        cells.push(Cell::IsoDirection);
    }

    let bundle = gn_state.as_ref().map(|(b, _)| b);
    let checks: Vec<Check> = cells
        .par_iter()
        .map(|cell| run_cell(ctx, *cell, &params, &ls_params, bundle))
        .collect();
    let rows = checks.iter().flat_map(|c| c.rows.iter().cloned()).collect();
    let passed = checks.iter().filter(|c| c.status == Status::Pass).count();
    let failed = checks.iter().filter(|c| !c.ok()).count();
    let (gn_constant, family_constant) = match gn_state {
        Some((b, fam)) => (b.gn_constant, fam),
        None => (None, None),
    };
    Ok((
        SuiteReport {
            suite: config.suite,
            gn_constant,
            family_constant,
            checks,
            passed,
            failed,
        },
        rows,
    ))
}

fn run_cell(ctx: &Context, cell: Cell, params: &Params, ls: &Params, bundle: Option<&ConstantsBundle>) -> Check {
    let tol = ctx.tol();
    let (cone, grid) = (&ctx.cone, &ctx.grid);
    let w3 = ctx.w3.as_ref().unwrap_or(&ctx.w1);
    let gn = |u: &TestFunction| {
        gn_ratio(u, &ctx.w1, &ctx.w2, w3, bundle.expect("GN cells carry a bundle"), params, cone, grid)
    };
    match cell {
        Cell::GnEquality(lambda) => {
            let mut check = Check::new(format!("gn_equality[lambda={lambda}]"), tol.equality);
            match ctx.extremal(params, lambda).and_then(|u| Ok((gn(&u)?, u))) {
                Ok((r, u)) => {
                    check.count = 1;
                    check.worst = Some((r.ratio - 1.0).abs());
                    if (r.ratio - 1.0).abs() > tol.equality {
                        check.status = Status::Fail;
                    }
                    check.rows.push(ctx.ratio_row(&u, &r));
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::GnEqualitySkipped => {
            let mut check = Check::new("gn_equality".into(), tol.equality);
            check.status = Status::Skipped;
            check.detail = Some("constant comes from a restricted profile search; no equality case to test".into());
            check
        }
        Cell::GnDirection => {
            let check = Check::new("gn_direction".into(), tol.direction);
            let base = match ctx.extremal(params, 1.0) {
                Ok(b) => b,
                Err(e) => return check.error(e),
            };
            let bound = Bound::Upper(1.0 + tol.direction);
            direction(ctx, check, &base, params, |u| gn(u).map(|r| (r.ratio, ctx.ratio_row(u, &r))), bound)
        }
        Cell::GnRescaling => {
            let mut check = Check::new("gn_rescaling[lambda=0.1,10]".into(), tol.rescaling);
            let result = (|| -> wgn_core::Result<f64> {
                let bump = TestFunction::bump(params, 1.0, vec![0.0; params.n], 1.0, 2.0)?;
                let u = TestFunction::perturbed(ctx.extremal(params, 1.0)?, 0.2, bump)?;
                let r0 = gn(&u)?.ratio;
                let mut worst = 0.0f64;
                for lambda in [0.1, 10.0] {
                    let r = gn(&u.rescale(lambda, ctx.w1.degree())?)?.ratio;
                    worst = worst.max((r - r0).abs() / r0);
                }
                Ok(worst)
            })();
            match result {
                Ok(worst) => {
                    check.count = 2;
                    check.worst = Some(worst);
                    if worst > tol.rescaling {
                        check.status = Status::Fail;
                    }
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::GnDuality => {
            let mut check = Check::new("gn_duality".into(), tol.duality);
            let result = (|| -> wgn_core::Result<f64> {
                let r = gn(&ctx.extremal(params, 1.0)?)?;
                let sharp = sharp_gn_constant(params, ctx.w1.degree(), ctx.ball)?;
                Ok((r.constant * r.ratio - sharp).abs() / sharp)
            })();
            match result {
                Ok(gap) => {
                    check.count = 1;
                    check.worst = Some(gap);
                    if gap > tol.duality {
                        check.status = Status::Fail;
                    }
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::LsEquality(lambda) => {
            let mut check = Check::new(format!("log_sobolev_equality[lambda={lambda}]"), tol.log_sobolev);
            let result = TestFunction::gaussian_normalized(ls, lambda, vec![0.0; ls.n], ctx.w1.degree(), ctx.ball)
                .and_then(|u| Ok((log_sobolev_deficit(&u, &ctx.w1, ls, cone, grid)?, u)));
            match result {
                Ok((d, u)) => {
                    check.count = 1;
                    check.worst = Some(d.abs());
                    if d.abs() > tol.log_sobolev {
                        check.status = Status::Fail;
                    }
                    check.rows.push(ctx.row(&u, None, None, None, Some(d)));
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::LsDirection => {
            let check = Check::new("log_sobolev_direction".into(), 1e-8);
            let base = match TestFunction::gaussian(ls, 1.0, 1.0, vec![0.0; ls.n]) {
                Ok(b) => b,
                Err(e) => return check.error(e),
            };
            direction(
                ctx,
                check,
                &base,
                ls,
                |u| log_sobolev_deficit(u, &ctx.w1, ls, cone, grid).map(|d| (d, ctx.row(u, None, None, None, Some(d)))),
                Bound::Lower(-1e-8),
            )
        }
        Cell::FkEquality(lambda) => {
            let mut check = Check::new(format!("faber_krahn_equality[lambda={lambda}]"), tol.faber_krahn);
            let result = TestFunction::truncated_power(ls, lambda, ls.p_conj)
                .and_then(|u| Ok((faber_krahn_ratio(&u, &ctx.w1, ls, cone, grid)?, u)));
            match result {
                Ok((r, u)) => {
                    check.count = 1;
                    check.worst = Some((r.ratio - 1.0).abs());
                    if (r.ratio - 1.0).abs() > tol.faber_krahn {
                        check.status = Status::Fail;
                    }
                    check.rows.push(ctx.ratio_row(&u, &r));
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::FkDirection => {
            let check = Check::new("faber_krahn_direction".into(), tol.direction);
            let base = match TestFunction::truncated_power(ls, 1.0, ls.p_conj) {
                Ok(b) => b,
                Err(e) => return check.error(e),
            };
            direction(
                ctx,
                check,
                &base,
                ls,
                |u| faber_krahn_ratio(u, &ctx.w1, ls, cone, grid).map(|r| (r.ratio, ctx.ratio_row(u, &r))),
                Bound::Upper(1.0 + tol.direction),
            )
        }
        Cell::IsoEquality(radius) => {
            let mut check = Check::new(format!("isoperimetric_equality[radius={radius}]"), tol.isoperimetric);
            match isoperimetric_ratio(&vec![0.0; ls.n], radius, &ctx.w1, cone, grid) {
                Ok(r) => {
                    check.count = 1;
                    check.worst = Some((r.ratio - 1.0).abs());
                    if (r.ratio - 1.0).abs() > tol.isoperimetric {
                        check.status = Status::Fail;
                    }
                    check.rows.push(ctx.row_named(
                        "ball".into(),
                        format!("{{\"center\":\"origin\",\"radius\":{radius}}}"),
                        Some(r.lhs),
                        Some(r.rhs),
                        Some(r.ratio),
                        Some(1.0 - r.ratio),
                    ));
                    check
                }
                Err(e) => check.error(e),
            }
        }
        Cell::IsoDirection => iso_direction(ctx, Check::new("isoperimetric_direction".into(), tol.isoperimetric)),
    }
}

#[derive(Debug, Clone, Copy)]
enum Bound {
    /// Every value must be at most this.
    Upper(f64),
    /// Every value must be at least this.
    Lower(f64),
}

impl Bound {
    fn holds(self, v: f64) -> bool {
        match self {
            Bound::Upper(b) => v <= b,
            Bound::Lower(b) => v >= b,
        }
    }

    fn worse(self, a: f64, b: f64) -> f64 {
        match self {
            Bound::Upper(_) => a.max(b),
            Bound::Lower(_) => a.min(b),
        }
    }
}

/// Evaluate `eval` on the seeded random functions around `base`.
fn direction<F>(ctx: &Context, mut check: Check, base: &TestFunction, params: &Params, eval: F, bound: Bound) -> Check
where
    F: Fn(&TestFunction) -> wgn_core::Result<(f64, Row)> + Sync,
{
    let functions = match sample_test_functions(base, params, &ctx.cone, ctx.config.random_functions, ctx.config.seed) {
        Ok(f) => f,
        Err(e) => return check.error(e),
    };
    let results: Vec<_> = functions.par_iter().map(&eval).collect();
    summarize(&mut check, results, bound);
    check
}

fn summarize(check: &mut Check, results: Vec<wgn_core::Result<(f64, Row)>>, bound: Bound) {
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((v, row)) => {
                check.count += 1;
                check.worst = Some(check.worst.map_or(v, |w| bound.worse(w, v)));
                if !bound.holds(v) {
                    check.status = Status::Fail;
                }
                check.rows.push(row);
            }
            Err(e) => errors.push(format!("function {i}: {e}")),
        }
    }
    if !errors.is_empty() {
        if check.status == Status::Pass {
            check.status = Status::Error;
        }
        check.detail = Some(errors.join("; "));
    }
}

fn iso_direction(ctx: &Context, mut check: Check) -> Check {
    let n = ctx.config.n;
    let mut sampler = ConeSampler::new(&ctx.cone, ctx.config.seed);
    let mut balls = Vec::new();
    for _ in 0..ctx.config.random_functions {
        let dir = match sampler.direction() {
            Ok(d) => d,
            Err(e) => return check.error(e),
        };
        let dist = 2.0 * sampler.unit();
        let radius = 0.2 + 1.8 * sampler.unit();
        balls.push((dir.iter().map(|d| d * dist).collect::<Vec<f64>>(), radius));
    }
    let mut results: Vec<wgn_core::Result<(f64, Row)>> = balls
        .par_iter()
        .map(|(c, r)| {
            let rep = isoperimetric_ratio(c, *r, &ctx.w1, &ctx.cone, &ctx.grid)?;
            let row = ctx.row_named(
                "ball".into(),
                format!("{{\"center\":{c:?},\"radius\":{r}}}"),
                Some(rep.lhs),
                Some(rep.rhs),
                Some(rep.ratio),
                Some(1.0 - rep.ratio),
            );
            Ok((rep.ratio, row))
        })
        .collect();
    if let ConeRepr::OrthantMask(mask) = ctx.cone.repr() {
        for k in 1..=4 {
            let hi: Vec<f64> = (0..n).map(|i| 0.5 * (k + i) as f64).collect();
            let lo: Vec<f64> = mask.iter().map(|m| if *m { 0.0 } else { -0.5 }).collect();
            let rep = isoperimetric_ratio_box(&lo, &hi, &ctx.w1, &ctx.cone, &ctx.grid).map(|rep| {
                let row = ctx.row_named(
                    "box".into(),
                    format!("{{\"lo\":{lo:?},\"hi\":{hi:?}}}"),
                    Some(rep.lhs),
                    Some(rep.rhs),
                    Some(rep.ratio),
                    Some(1.0 - rep.ratio),
                );
                (rep.ratio, row)
            });
            results.push(rep);
        }
    }
    summarize(&mut check, results, Bound::Upper(1.0 + ctx.tol().isoperimetric));
    check
}

/// GN ratio at the extremal family over a γ × λ grid. Cells outside the
/// admissible γ range become rows with a note; the flag is false when a cell
/// failed to evaluate.
pub fn sweep(ctx: &Context) -> Result<(Vec<Row>, bool)> {
    let spec = &ctx.config.sweep;
    let setups: Vec<Result<(Params, ConstantsBundle)>> = spec
        .gammas
        .iter()
        .map(|gamma| {
            let params = ctx.config.params_at(*gamma)?;
            let (bundle, _) = ctx.gn_bundle(&params)?;
            Ok((params, bundle))
        })
        .collect();
    let cells: Vec<(usize, f64)> = (0..setups.len())
        .flat_map(|i| spec.lambdas.iter().map(move |l| (i, *l)))
        .collect();
    let w3 = ctx.w3.as_ref().unwrap_or(&ctx.w1);
    let rows: Vec<(Row, bool)> = cells
        .par_iter()
        .map(|(i, lambda)| {
            let gamma = spec.gammas[*i];
            let parameters = format!("{{\"gamma\":{gamma},\"lambda\":{lambda}}}");
            let blank = |note: String| {
                let mut row = ctx.row_named("extremal".into(), parameters.clone(), None, None, None, None);
                row.note = Some(note);
                row
            };
            let (params, bundle) = match &setups[*i] {
                Ok(s) => s,
                Err(e) => return (blank(format!("skipped: {e:#}")), true),
            };
            let result = ctx
                .extremal(params, *lambda)
                .and_then(|u| Ok((gn_ratio(&u, &ctx.w1, &ctx.w2, w3, bundle, params, &ctx.cone, &ctx.grid)?, u)));
            match result {
                Ok((r, u)) => {
                    let mut row = ctx.ratio_row(&u, &r);
                    row.parameters = parameters;
                    (row, true)
                }
                Err(e) => (blank(format!("error: {e}")), false),
            }
        })
        .collect();
    let ok = rows.iter().all(|(_, ok)| *ok);
    Ok((rows.into_iter().map(|(r, _)| r).collect(), ok))
}

#[derive(Debug, Serialize)]
pub struct IntegralsReport {
    pub checks: Vec<CrossCheck>,
    pub worst_relative_error: f64,
    pub tolerance: f64,
}

/// Closed-form radial integrals against cone quadrature for each configured
/// weight.
pub fn integrals(ctx: &Context) -> Result<IntegralsReport> {
    let params = ctx.config.params()?;
    let alpha = if params.alpha < 1.0 { params.alpha } else { 0.5 };
    let weights = ctx.config.weights()?;
    let mut forms = Vec::new();
    for lambda in &ctx.config.lambdas {
        for (q, s) in [(4.0, 0.0), (5.0, 1.0), (6.0, 2.0)] {
            let lambda = *lambda;
            forms.push(RadialForm::Beta { lambda, c: 1.5, q, s });
            forms.push(RadialForm::Gaussian { lambda, s });
            forms.push(RadialForm::Compact { lambda, alpha, q: q - 3.0, s });
        }
    }
    let cells: Vec<(&Weight, RadialForm)> = weights
        .iter()
        .flat_map(|w| forms.iter().map(move |f| (w, *f)))
        .collect();
    let checks = cells
        .par_iter()
        .map(|(w, f)| cross_check(*f, &params, w, &ctx.cone, &ctx.grid))
        .collect::<wgn_core::Result<Vec<_>>>()?;
    let worst = checks.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    Ok(IntegralsReport {
        checks,
        worst_relative_error: worst,
        tolerance: ctx.tol().integrals,
    })
}
