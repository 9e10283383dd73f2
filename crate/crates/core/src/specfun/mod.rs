//! Special functions behind the explicit Fourier multipliers.
//!
//! * [`kummer_phi`] and [`kummer_psi`]: the two standard solutions of Kummer's
//!   equation `z w'' + (c − z) w' − b w = 0` (Kummer's `M` and Tricomi's `U`).
//! * [`bessel_j0y0`]: `J0`, `Y0` and their derivatives on the positive axis.

mod bessel;
mod gamma;
mod kummer;

pub use bessel::{bessel_j0y0, BesselJY, BESSEL_SWITCH};
pub use gamma::{gamma, recip_gamma};
pub use kummer::{
    kummer_phi, kummer_phi_deriv, kummer_phi_pair, kummer_phi_pairs_on_ray, kummer_phi_with, kummer_psi,
    kummer_psi_pair, kummer_psi_pairs_on_ray, kummer_psi_with, KummerOptions,
};
