use super::check_order;
use super::sticky::laplace_recursion;
use super::table::{Method, MomentDomain, MomentTable, MomentValues, Param};
use crate::diffusion_models::{green_integral, Diffusion, HalfLine};
use crate::error::{check_positive, Error, Result};
use crate::quadrature::QuadConfig;
use crate::special_fn::factorial;

/// `D_k(λ) = (-λ)^k / (k-1)! ∫_{I+} G_λ(0,y) f̂^{(k-1)}(y; λ) m(dy)`, `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DkCoefficients {
    pub lambda: f64,
    pub values: Vec<f64>,
    /// True for self-similar diffusions, whose `D_k` do not depend on λ.
    pub lambda_independent: bool,
}

/// Output of the generic Laplace-domain recursion.
#[derive(Debug, Clone)]
pub struct GenericMoments {
    /// `U_n(λ)`; equal to `E_0(A_1^n)` for self-similar diffusions.
    pub table: MomentTable,
    /// `Â_0(λ; n) = n! U_n(λ) / λ^{n+1}`.
    pub ahat: Vec<f64>,
    pub dk: DkCoefficients,
}

pub fn dk_coefficients<D: Diffusion + ?Sized>(
    d: &D,
    lambda: f64,
    k_max: usize,
    include_atom: bool,
    cfg: &QuadConfig,
) -> Result<DkCoefficients> {
    check_positive("lambda", lambda)?;
    if k_max > 0 && k_max - 1 > d.hitting_order_max() {
        return Err(Error::DerivativeOrder { k: k_max - 1, max: d.hitting_order_max() });
    }
    let values = (1..=k_max)
        .map(|k| {
            let h = |y: f64| d.hitting_transform_deriv(y.abs(), lambda, k - 1).unwrap_or(f64::NAN);
            let integral = green_integral(d, lambda, h, HalfLine::Positive, include_atom, cfg)?;
            Ok((-lambda).powi(k as i32) / factorial::<f64>(k - 1) * integral)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DkCoefficients { lambda, values, lambda_independent: d.is_self_similar() })
}

/// Laplace-domain moment recursion for the occupation time of `[0, ∞)`.
pub fn generic_laplace_moments<D: Diffusion + ?Sized>(d: &D, lambda: f64, n_max: usize) -> Result<GenericMoments> {
    generic_laplace_moments_with(d, lambda, n_max, true, &QuadConfig::default())
}

/// As [`generic_laplace_moments`]; `include_atom = false` drops a speed-measure
/// atom at 0 from every integral, which yields the occupation time of `(0, ∞)`.
pub fn generic_laplace_moments_with<D: Diffusion + ?Sized>(
    d: &D,
    lambda: f64,
    n_max: usize,
    include_atom: bool,
    cfg: &QuadConfig,
) -> Result<GenericMoments> {
    check_positive("lambda", lambda)?;
    check_order(n_max)?;
    let mass = green_integral(d, lambda, |_| 1.0, HalfLine::Positive, include_atom, cfg)?;
    let u1 = lambda * mass;
    let dk = dk_coefficients(d, lambda, n_max - 1, include_atom, cfg)?;
    let u = laplace_recursion(u1, &dk.values, n_max);
    let ahat = u
        .iter()
        .enumerate()
        .map(|(i, &un)| factorial::<f64>(i + 1) * un / lambda.powi(i as i32 + 2))
        .collect();
    let params = d.params().into_iter().map(|(k, v)| (k, Param::Real(v))).collect();
    let mut table = MomentTable::new(d.name(), params, MomentValues::Float(u), Method::Quadrature);
    table.lambda = Some(lambda);
    table.domain = if d.is_self_similar() { MomentDomain::Time } else { MomentDomain::Laplace };
    Ok(GenericMoments { table, ahat, dk })
}
