//! Conformal widths, canonical laminations, elephant-eye Hubbard trees and
//! chord-model pullbacks.

pub mod hypdisk;
pub mod widths;
pub mod lamination;
pub mod fuchsian;
pub mod elephant;
pub mod pullback;
pub mod tolerances;
pub mod cli;
