/// One classical fourth-order Runge–Kutta step of `dy/dt = f(t, y)`.
pub fn rk4_step<const N: usize, F>(f: F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let shift = |base: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += s * ki;
        }
        out
    };
    let half = 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(t + half, &shift(y, &k1, half));
    let k3 = f(t + half, &shift(y, &k2, half));
    let k4 = f(t + h, &shift(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}
