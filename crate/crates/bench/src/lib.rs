//! Shared fixtures for the benchmarks.

use epd_core::field::parse_phantom;
use epd_core::transform::generate_dataset;
use epd_core::{
    AnnulusGeometry, ModeIndex, RadialProfile, RunConfig, ScalarField, SphericalMeanDataset,
};

pub const PHANTOM: &str = "mode-bump(m=0, center=2.0, width=0.5); \
    mode-bump(m=1, l=1, center=1.6, width=0.5); \
    mode-bump(m=2, l=2, center=2.2, width=0.5, amplitude=0.8)";

/// Reduced configuration on `Ann(1, 3)` with both prior shells.
pub fn config() -> RunConfig {
    let g = AnnulusGeometry::new(1.0, 3.0, 0.6, Some(3.4)).expect("valid geometry");
    let mut c = RunConfig::with_defaults(2, g);
    c.m_max = 4;
    c.angular_points = 16;
    c.quad_order = 128;
    c.s_points = 101;
    c
}

pub fn phantom() -> ScalarField {
    parse_phantom(2, PHANTOM).expect("valid phantom")
}

pub fn dataset(c: &RunConfig) -> SphericalMeanDataset {
    let sampling = c.sampling().expect("valid sampling");
    generate_dataset(&phantom(), &c.geometry, &sampling, c.quad_order)
        .expect("forward run")
        .dataset
}

/// Shell profile of degree `m` on `[0, 4]` with `nodes` nodes.
pub fn shell(m: usize, nodes: usize) -> RadialProfile {
    let mode = ModeIndex::new(2, m, 1).expect("valid mode");
    RadialProfile::sample(mode, 0.0, 4.0, nodes, |r| {
        epd_core::field::shell_profile(r, 1.5, 0.6, 1.0)
    })
    .expect("valid grid")
}

/// Smooth profile of degree `m` on `[1, 3]` with `nodes` nodes.
pub fn smooth(m: usize, nodes: usize) -> RadialProfile {
    let mode = ModeIndex::new(2, m, 1).expect("valid mode");
    RadialProfile::sample(mode, 1.0, 3.0, nodes, |r| (-(r - 2.0) * (r - 2.0)).exp())
        .expect("valid grid")
}
