use super::{Axis, ConservationLaw};
use crate::{Error, Result};

/// Heat-capacity ratio of the ideal gas used by every preset.
pub const DEFAULT_GAMMA: f64 = 1.4;

/// Primitive state of an ideal gas: density, velocities `(v, w)`, pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub rho: f64,
    pub v: f64,
    pub w: f64,
    pub p: f64,
}

impl EulerState {
    pub fn new(rho: f64, v: f64, p: f64) -> Self {
        Self { rho, v, w: 0.0, p }
    }

    pub fn new_2d(rho: f64, v: f64, w: f64, p: f64) -> Self {
        Self { rho, v, w, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }

    /// Total energy per unit volume `E = rho (e + (v^2 + w^2)/2)`.
    pub fn total_energy(&self, gamma: f64) -> f64 {
        self.p / (gamma - 1.0) + 0.5 * self.rho * (self.v * self.v + self.w * self.w)
    }

    /// Internal energy per unit mass.
    pub fn internal_energy(&self, gamma: f64) -> f64 {
        self.p / ((gamma - 1.0) * self.rho)
    }

    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.p > 0.0 && self.v.is_finite() && self.w.is_finite()
    }

    pub fn to_conserved_1d(&self, gamma: f64) -> [f64; 3] {
        [self.rho, self.rho * self.v, self.total_energy(gamma)]
    }

    pub fn to_conserved_2d(&self, gamma: f64) -> [f64; 4] {
        [self.rho, self.rho * self.v, self.rho * self.w, self.total_energy(gamma)]
    }

    pub fn from_conserved_1d(u: &[f64], gamma: f64) -> Self {
        let rho = u[0];
        let v = u[1] / rho;
        let p = (gamma - 1.0) * (u[2] - 0.5 * (u[1] * u[1]) / rho);
        Self { rho, v, w: 0.0, p }
    }

    pub fn from_conserved_2d(u: &[f64], gamma: f64) -> Self {
        let rho = u[0];
        let p = (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / rho);
        Self { rho, v: u[1] / rho, w: u[2] / rho, p }
    }

    pub fn check(&self, location: &str) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleState {
                location: location.to_string(),
                reason: format!("density {} and pressure {} must be positive", self.rho, self.p),
            })
        }
    }
}

/// 1D Euler equations in conserved variables `(rho, rho v, E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler1d {
    pub gamma: f64,
}

impl Default for Euler1d {
    fn default() -> Self {
        Self { gamma: DEFAULT_GAMMA }
    }
}

impl Euler1d {
    pub fn new(gamma: f64) -> Self {
        Self { gamma }
    }

    #[inline]
    fn pressure(&self, u: &[f64]) -> f64 {
        (self.gamma - 1.0) * (u[2] - 0.5 * (u[1] * u[1]) / u[0])
    }
}

impl ConservationLaw for Euler1d {
    fn components(&self) -> usize {
        3
    }

    fn name(&self) -> &str {
        "euler1d"
    }

    #[inline]
    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]) {
        if axis == Axis::Y {
            out[..3].iter_mut().for_each(|f| *f = 0.0);
            return;
        }
        let p = self.pressure(u);
        let v = u[1] / u[0];
        out[0] = u[1];
        out[1] = u[1] * v + p;
        out[2] = v * (u[2] + p);
    }

    #[inline]
    fn speed_range(&self, axis: Axis, u: &[f64]) -> (f64, f64) {
        if axis == Axis::Y {
            return (0.0, 0.0);
        }
        let p = self.pressure(u);
        let v = u[1] / u[0];
        let c = (self.gamma * p / u[0]).sqrt();
        (v - c, v + c)
    }

    #[inline]
    fn max_speed(&self, axis: Axis, u: &[f64]) -> f64 {
        if axis == Axis::Y {
            return 0.0;
        }
        let p = self.pressure(u);
        let v = u[1] / u[0];
        v.abs() + (self.gamma * p / u[0]).sqrt()
    }

    #[inline]
    fn admissible(&self, u: &[f64]) -> bool {
        u[0] > 0.0 && self.pressure(u) > 0.0 && u[1].is_finite() && u[2].is_finite()
    }

    fn check_state(&self, u: &[f64], location: &str) -> Result<()> {
        if self.admissible(u) {
            return Ok(());
        }
        EulerState::from_conserved_1d(u, self.gamma).check(location).and(Err(Error::InadmissibleState {
            location: location.to_string(),
            reason: format!("non-finite state {u:?}"),
        }))
    }
}

/// 2D Euler equations in conserved variables `(rho, rho v, rho w, E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler2d {
    pub gamma: f64,
}

impl Default for Euler2d {
    fn default() -> Self {
        Self { gamma: DEFAULT_GAMMA }
    }
}

impl Euler2d {
    pub fn new(gamma: f64) -> Self {
        Self { gamma }
    }

    #[inline]
    fn pressure(&self, u: &[f64]) -> f64 {
        (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }
}

impl ConservationLaw for Euler2d {
    fn components(&self) -> usize {
        4
    }

    fn name(&self) -> &str {
        "euler2d"
    }

    fn is_2d(&self) -> bool {
        true
    }

    // The y flux is the x flux with the two momentum components swapped;
    // keeping the arithmetic mirrored makes the scheme exactly transpose-equivariant.
    #[inline]
    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]) {
        let p = self.pressure(u);
        match axis {
            Axis::X => {
                let v = u[1] / u[0];
                let w = u[2] / u[0];
                out[0] = u[1];
                out[1] = u[1] * v + p;
                out[2] = u[1] * w;
                out[3] = v * (u[3] + p);
            }
            Axis::Y => {
                let v = u[1] / u[0];
                let w = u[2] / u[0];
                out[0] = u[2];
                out[1] = u[2] * v;
                out[2] = u[2] * w + p;
                out[3] = w * (u[3] + p);
            }
        }
    }

    #[inline]
    fn speed_range(&self, axis: Axis, u: &[f64]) -> (f64, f64) {
        let c = (self.gamma * self.pressure(u) / u[0]).sqrt();
        let s = match axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        };
        (s - c, s + c)
    }

    #[inline]
    fn max_speed(&self, axis: Axis, u: &[f64]) -> f64 {
        let c = (self.gamma * self.pressure(u) / u[0]).sqrt();
        let s = match axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        };
        s.abs() + c
    }

    #[inline]
    fn admissible(&self, u: &[f64]) -> bool {
        u[0] > 0.0 && self.pressure(u) > 0.0 && u[1].is_finite() && u[2].is_finite() && u[3].is_finite()
    }
}
