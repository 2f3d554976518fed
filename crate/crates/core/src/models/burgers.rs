use super::{Axis, ConservationLaw};

/// Inviscid Burgers equation `u_t + (u^2/2)_x = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Burgers;

impl ConservationLaw for Burgers {
    fn components(&self) -> usize {
        1
    }

    fn name(&self) -> &str {
        "burgers"
    }

    #[inline]
    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]) {
        out[0] = match axis {
            Axis::X => 0.5 * u[0] * u[0],
            Axis::Y => 0.0,
        };
    }

    #[inline]
    fn speed_range(&self, axis: Axis, u: &[f64]) -> (f64, f64) {
        match axis {
            Axis::X => (u[0], u[0]),
            Axis::Y => (0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_examples() {
        let mut f = [0.0];
        for (u, want) in [(2.0, 2.0), (-1.0, 0.5), (0.0, 0.0)] {
            Burgers.flux_x(&[u], &mut f);
            assert_eq!(f[0], want);
        }
        assert_eq!(Burgers.max_speed(Axis::X, &[0.0]), 0.0);
        assert_eq!(Burgers.max_speed(Axis::X, &[-3.0]), 3.0);
    }
}
