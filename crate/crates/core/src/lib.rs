//! Semi-classical force model of an electron passing a long solenoid.
//!
//! - [`constants`], [`units`], [`beam`], [`solenoid`]: physical inputs.
//! - [`kinematics`]: the closed-form force law, velocity profile, displacement
//!   and phase expansions, and time delays.
//! - [`integrator`]: adaptive integration of the same equation of motion,
//!   used as an independent check on the expansions.
//! - [`catalog`]: historical and proposed interferometry experiments,
//!   coherence lengths and the feasibility classification.

pub mod beam;
pub mod catalog;
pub mod constants;
pub mod error;
pub mod integrator;
pub mod kinematics;
pub mod solenoid;
pub mod units;

pub use beam::ElectronBeam;
pub use error::{Error, Result};
pub use integrator::{IntegratorConfig, TailCorrection, TrajectoryResult};
pub use kinematics::{PassageGeometry, PerturbationStrength, PhaseDecomposition, Side};
pub use solenoid::{MagneticFlux, Solenoid};
