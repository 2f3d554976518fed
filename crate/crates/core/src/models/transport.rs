/// Periodic wrapping of a coordinate into `[origin, origin + length)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Periodicity {
    pub origin: f64,
    pub length: f64,
}

impl Periodicity {
    pub fn wrap(&self, x: f64) -> f64 {
        self.origin + (x - self.origin).rem_euclid(self.length)
    }
}

/// Exact solution of `u_t + a u_x = 0` by characteristics.
pub fn exact_transport<F: Fn(f64) -> f64>(u0: F, a: f64, x: f64, t: f64, periodic: Option<Periodicity>) -> f64 {
    let foot = x - a * t;
    match periodic {
        Some(per) => u0(per.wrap(foot)),
        None => u0(foot),
    }
}

/// Exact solution of `u_t + a u_x + b u_y = 0` by characteristics.
pub fn exact_transport_2d<F: Fn(f64, f64) -> f64>(
    u0: F,
    (a, b): (f64, f64),
    (x, y): (f64, f64),
    t: f64,
    periodic: Option<(Periodicity, Periodicity)>,
) -> f64 {
    let (fx, fy) = (x - a * t, y - b * t);
    match periodic {
        Some((px, py)) => u0(px.wrap(fx), py.wrap(fy)),
        None => u0(fx, fy),
    }
}
