//! Thinned Lévy processes and finite proxies of the limiting metric spaces.

mod ginf;
mod icrt;
mod levy;
mod params;

pub use ginf::{approx_g_infinity, calibrate_p, GInfinity};
pub use icrt::{sample_icrt, IcrtTree};
pub use levy::{
    excursions, excursions_and_marks, rescaled_excursion_law, simulate_thinned_levy, Excursion, ExcursionSet,
    Jump, LevyPath, ThetaSeq,
};
pub use params::{component_size_limit, limit_component_parameters, LimitComponent, SizeLimitDraw};
