//! Post-selected two-electron Mach-Zehnder interference.
//!
//! Two electrons cross a Mach-Zehnder interferometer side by side. When they
//! share an arm they repel, which displaces their transverse momentum
//! packets by ∓δ and adds a phase α. Post-selecting e₁ at D₁ and e₂ at C₂
//! leaves a superposition of the kicked and unkicked branches whose
//! interference can push e₁'s mean momentum *towards* e₂.
//!
//! * [`model`]: packets, parameters and port labels (natural units, ħ = 1)
//! * [`analytic`]: closed forms for densities, means, exit-port amplitudes
//! * [`numeric`]: grid oracles that check the closed forms independently
//! * [`experiment`]: SI design calculator for a free-electron setup
//! * [`cli`]: config parsing, table output and the `qif-mzi` front end

pub mod analytic;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod model;
pub mod numeric;

pub use error::{Error, Result};
pub use model::{
    packet_eval, shift_packet, ComplexAmplitude, Electron, GaussianPacket, InterferometerParams,
    PortMap, PortPair, DARK_PORT_EPS,
};
