//! Brute-force oracles: Simpson quadrature on uniform grids, the
//! two-electron product-grid marginal and kernel, the DFT momentum kick, and
//! free Gaussian spreading.

mod grid;
mod joint;
mod kick;
mod quadrature;
mod spread;

pub use grid::{
    Distribution1D, MomentumGrid, SampledWavefunction, DEFAULT_HALF_WIDTH, DEFAULT_JOINT_POINTS,
    DEFAULT_POINTS,
};
pub use joint::{joint_marginal_oracle, kernel_purity, TAIL_LIMIT};
pub use kick::{momentum_kick_oracle, KickReport, MAX_PHASE_STEP};
pub use quadrature::{quadrature, Moment};
pub use spread::free_spread_width;
