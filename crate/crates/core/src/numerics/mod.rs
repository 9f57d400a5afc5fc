//! Special functions, quadrature and root finding shared by the channel,
//! power-allocation and capacity modules.

mod bessel;
mod quadrature;
mod root;

pub use bessel::bessel_i0_scaled;
pub(crate) use bessel::i0e_unchecked;
pub(crate) use quadrature::try_integrate_double;
pub use quadrature::{
    graded_cuts, integrate_double, integrate_interval, integrate_semi_infinite,
    integrate_semi_infinite_with_breakpoints, DoubleLayout, Estimate, QuadratureSpec, Ridge, Truncation,
};
pub(crate) use root::try_solve_monotone_root;
pub use root::{solve_monotone_root, RootSpec};
