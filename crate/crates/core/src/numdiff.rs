//! Fourth-order central finite-difference stencils.

/// `d^k f / dx^k` at `x` with step `h`, `k <= 4`, truncation error `O(h^4)`.
pub(crate) fn central_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64, k: usize) -> f64 {
    let at = |i: f64| f(x + i * h);
    match k {
        0 => at(0.0),
        1 => (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h),
        2 => (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h),
        3 => (-at(3.0) + 8.0 * at(2.0) - 13.0 * at(1.0) + 13.0 * at(-1.0) - 8.0 * at(-2.0) + at(-3.0)) / (8.0 * h.powi(3)),
        4 => {
            (-at(3.0) + 12.0 * at(2.0) - 39.0 * at(1.0) + 56.0 * at(0.0) - 39.0 * at(-1.0) + 12.0 * at(-2.0) - at(-3.0))
                / (6.0 * h.powi(4))
        }
        _ => panic!("central_derivative supports k <= 4"),
    }
}
