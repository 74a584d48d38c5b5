//! Integral operators on the unit disc: the Cauchy–Green transform, the
//! Schwarz integral and discrete `∂/∂ζ̄`.

pub mod cauchy;
pub mod dbar;
pub mod grid;
pub mod io;
pub mod quadrature;
pub mod schwarz;

pub use cauchy::{cauchy_green, cauchy_green_data, cauchy_green_direct, cauchy_green_on_grid, CauchyGreenData};
pub use dbar::{d_zeta, dbar, dbar_fd, dbar_spectral, d_zeta_spectral, DbarScheme};
pub use grid::{cutoff_value, BoundaryFunction, DiscGrid, GridFunction};
pub use schwarz::{schwarz, SchwarzSeries};
