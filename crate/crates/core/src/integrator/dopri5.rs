//! Dormand–Prince 5(4) step with an embedded error estimate.
//!
//! The fifth-order solution is propagated (local extrapolation); the
//! difference to the fourth-order solution is the error estimate. The last
//! stage is evaluated at the new point, so it doubles as the first stage of
//! the next step.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Step<const N: usize> {
    pub y: [f64; N],
    pub error: [f64; N],
    /// Derivative at the new point.
    pub dydx: [f64; N],
}

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (coef, k) in terms {
            acc += coef * k[i];
        }
        *o += h * acc;
    }
    out
}

/// One trial step of size `h` from `(x, y)` with `k1 = f(x, y)`.
pub(crate) fn step<const N: usize, E>(
    f: &mut impl FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
    x: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<Step<N>, E> {
    let k2 = f(x + C2 * h, &combine(y, h, &[(A21, k1)]))?;
    let k3 = f(x + C3 * h, &combine(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(
        x + C4 * h,
        &combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
    )?;
    let k5 = f(
        x + C5 * h,
        &combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        x + h,
        &combine(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y_new = combine(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(x + h, &y_new)?;
    let error = combine(
        &[0.0; N],
        h,
        &[
            (E1, k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
    );
    Ok(Step {
        y: y_new,
        error,
        dydx: k7,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn oscillator(_x: f64, y: &[f64; 2]) -> Result<[f64; 2], Infallible> {
        Ok([y[1], -y[0]])
    }

    fn integrate(n: usize) -> f64 {
        let mut f = oscillator;
        let h = 1.0 / n as f64;
        let mut y = [0.0, 1.0];
        let mut x = 0.0;
        for _ in 0..n {
            let k1 = f(x, &y).unwrap();
            y = step(&mut f, x, &y, &k1, h).unwrap().y;
            x += h;
        }
        (y[0] - 1f64.sin()).abs()
    }

    #[test]
    fn fifth_order_convergence() {
        let (e1, e2) = (integrate(10), integrate(20));
        let order = (e1 / e2).log2();
        assert!((order - 5.0).abs() < 0.3, "observed order {order}");
    }

    #[test]
    fn error_estimate_is_fourth_order_difference() {
        let mut f = oscillator;
        let y = [0.0, 1.0];
        let k1 = f(0.0, &y).unwrap();
        let big = step(&mut f, 0.0, &y, &k1, 0.2).unwrap().error[0].abs();
        let small = step(&mut f, 0.0, &y, &k1, 0.1).unwrap().error[0].abs();
        // local error of the embedded pair scales as h⁵
        let order = (big / small).log2();
        assert!((order - 5.0).abs() < 0.5, "{order}");
    }

    #[test]
    fn exact_for_constant_derivative() {
        let mut f = |_x: f64, _y: &[f64; 1]| -> Result<[f64; 1], Infallible> { Ok([3.0]) };
        let s = step(&mut f, 0.0, &[1.0], &[3.0], 0.5).unwrap();
        assert!((s.y[0] - 2.5).abs() < 1e-15);
        assert!(s.error[0].abs() < 1e-15);
    }
}
