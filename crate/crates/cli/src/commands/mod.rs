pub mod constants;
pub mod mu_curve;
pub mod phase_diagram;
pub mod t0;
pub mod verify;
