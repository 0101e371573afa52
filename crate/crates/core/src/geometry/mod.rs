//! Cones, homogeneous weights and spherical-radial quadrature.

mod cone;
mod quadrature;
mod radial;
mod weight;

pub use cone::{Cone, ConeRepr};
pub use quadrature::{
    cone_integral, gauss_legendre_unit, pairwise_sum, radial_integral, sphere_cone_quadrature,
    sphere_cone_quadrature_with, ConeIntegrand, FnIntegrand, IntegralEstimate, QuadratureGrid,
    SphereRule, DEFAULT_RADIAL_TOL, PANEL_ORDER,
};
pub use radial::{
    ball_cone_weight_mass, ball_mass_by_quadrature, beta_radial_integral, compact_radial_integral,
    cross_check, gaussian_radial_integral, omega_se, omega_se_reference, CrossCheck, RadialForm, REFERENCE_RESOLUTION,
};
pub use weight::{GradientFn, ValueFn, Weight, WeightKind};
