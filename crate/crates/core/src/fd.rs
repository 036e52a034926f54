//! Central finite-difference stencils.

/// 5-point first derivative, error O(h⁴).
pub fn d1_5pt(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// 5-point second derivative, error O(h⁴).
pub fn d2_5pt(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// 7-point first derivative on uniform samples centred at `i`, error O(h⁶).
pub fn d1_7pt(y: &[f64], i: usize, h: f64) -> f64 {
    (-y[i - 3] + 9.0 * y[i - 2] - 45.0 * y[i - 1] + 45.0 * y[i + 1] - 9.0 * y[i + 2] + y[i + 3])
        / (60.0 * h)
}

/// 7-point third derivative on uniform samples centred at `i`, error O(h⁴).
pub fn d3_7pt(y: &[f64], i: usize, h: f64) -> f64 {
    (0.125 * y[i - 3] - y[i - 2] + 1.625 * y[i - 1] - 1.625 * y[i + 1] + y[i + 2]
        - 0.125 * y[i + 3])
        / (h * h * h)
}

/// First derivative at the midpoint between `y[i]` and `y[i+1]` from the
/// staggered 4-point stencil, error O(h⁴).
pub fn d1_staggered(y: &[f64], i: usize, h: f64) -> f64 {
    (y[i - 1] - 27.0 * y[i] + 27.0 * y[i + 1] - y[i + 2]) / (24.0 * h)
}
