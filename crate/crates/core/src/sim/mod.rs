//! Path generation.

mod lifetime;
mod step;
mod thin_layer;

pub use lifetime::{ebm_lifetime_exact, ebm_lifetime_stepped, event_flip_count, FlipConstruction};
pub(crate) use step::advance;
pub use step::{
    reflected_with_local_time, snob_path, snob_path_with_reports, snob_step, StepConfig, StepReport, DEFAULT_CUTOFF,
};
pub use thin_layer::{thinlayer_path, Rebirth, ThinLayerPath, ThinLayerWalk};
