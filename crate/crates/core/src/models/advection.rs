use super::{Axis, ConservationLaw};

/// `u_t + a u_x + b u_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAdvection {
    pub a: f64,
    pub b: f64,
    two_d: bool,
}

impl LinearAdvection {
    pub fn new(a: f64) -> Self {
        Self { a, b: 0.0, two_d: false }
    }

    pub fn new_2d(a: f64, b: f64) -> Self {
        Self { a, b, two_d: true }
    }

    fn speed(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.a,
            Axis::Y => self.b,
        }
    }
}

impl ConservationLaw for LinearAdvection {
    fn components(&self) -> usize {
        1
    }

    fn name(&self) -> &str {
        if self.two_d {
            "advection2d"
        } else {
            "advection"
        }
    }

    fn is_2d(&self) -> bool {
        self.two_d
    }

    #[inline]
    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]) {
        out[0] = self.speed(axis) * u[0];
    }

    #[inline]
    fn speed_range(&self, axis: Axis, _u: &[f64]) -> (f64, f64) {
        let s = self.speed(axis);
        (s, s)
    }
}
