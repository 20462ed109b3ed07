//! Closed-form kernels and deterministic oracles.

mod elastic;
mod interface;
mod local_time;
mod quadrature;
mod snob;
mod thin_layer;

pub use elastic::{g_elastic, g_reflected, psi_ebm, resolvent_elastic, resolvent_reflected};
pub use interface::{interface_residuals, InterfaceResiduals};
pub use local_time::{joint_density_refbm_localtime, no_contact_density, no_contact_mass, semigroup_snob};
pub use quadrature::{integrate, QuadratureSpec, QuadratureValue};
pub use snob::{g_snob, resolvent_snob, KernelFn, KernelKind};
pub use thin_layer::{
    g_thinlayer, g_thinlayer_profile, layer_edge, psi_coefficients, psi_thinlayer, psi_thinlayer_unstretched,
    skewness, stretch, thinlayer_coefficients, unstretch, PsiCoefficients, ThinLayerCoefficients,
};
