//! The radial operators `B_{r,m}` and `Q_m`, the intertwining identity
//! `Q_m B_{r,m} = B_{r,0} Q_m`, the 1+1-dimensional mode solver, the central
//! trace identity, and the domain-of-dependence energy diagnostic.

mod energy;
mod jet;
mod ops;
mod solver;

pub use energy::{energy_bounds, energy_profile, shell_ball_measure, EnergyBall, EnergySample};
pub use jet::BoundaryJet;
pub use ops::{
    apply_b, apply_q, apply_q_factors, apply_q_power, intertwine_power_residual,
    intertwine_residual, intertwine_residual_with, intertwine_trim, FactorOrder, PowerImage,
    QFactors,
};
pub use solver::{epd_reverse, epd_solve, epd_time_step, trace_symmetry_check, EpdGrid};
