//! Occupation-time moments: closed forms and recursions for the built-in
//! diffusions, the sticky Laplace-domain quantities, and the generic
//! Laplace-domain recursion driven by quadrature of Green-kernel integrals.

mod closed;
mod generic;
mod sticky;
mod table;

pub use closed::{
    bessel_moments_closed, bessel_moments_recursive, bm_moments, oscillating_moments, skew_bm_moments,
    spider_beta, spider_moments,
};
pub use generic::{dk_coefficients, generic_laplace_moments, generic_laplace_moments_with, DkCoefficients, GenericMoments};
pub(crate) use sticky::u_b;
pub use sticky::{sticky_bhat, sticky_dk, sticky_h, sticky_t, sticky_u_table, StickyFunctional};
pub use table::{format_f64, MomentDomain, MomentTable, MomentValues, Method, Param};

/// Largest moment order served by the exact tables.
pub const MOMENT_ORDER_CAP: usize = 60;

pub(crate) fn check_order(n: usize) -> crate::Result<()> {
    if n == 0 || n > MOMENT_ORDER_CAP {
        Err(crate::Error::OrderCap { requested: n, cap: MOMENT_ORDER_CAP })
    } else {
        Ok(())
    }
}
