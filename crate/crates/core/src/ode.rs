//! Fixed-step classical Runge–Kutta integration for scalar ODEs.

/// Integrates `dy/dt = f(t, y)` from `(t0, y0)` over `steps` equal steps of
/// size `h`, returning the `steps + 1` samples including the initial point.
pub fn rk4<F: Fn(f64, f64) -> f64>(f: F, t0: f64, y0: f64, h: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    out.push((t0, y0));
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // t from the index, not accumulated, so the last sample lands on t_end
        out.push((t0 + (i + 1) as f64 * h, y));
    }
    out
}
