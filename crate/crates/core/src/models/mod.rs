//! Conservation-law systems `u_t + f(u)_x (+ g(u)_y) = 0` and reference solutions.

mod advection;
mod burgers;
mod euler;
mod riemann;
mod transport;

pub use advection::LinearAdvection;
pub use burgers::Burgers;
pub use euler::{Euler1d, Euler2d, EulerState, DEFAULT_GAMMA};
pub use riemann::{exact_riemann_euler, RiemannSolution, Wave};
pub use transport::{exact_transport, exact_transport_2d, Periodicity};

use crate::{Error, Result};

/// Axis along which a flux or wave speed is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// An `m`-component system of conservation laws.
///
/// States and fluxes are plain slices of length [`components`](Self::components).
/// Flux evaluation never fails; callers that feed predicted states check
/// [`admissible`](Self::admissible) first.
pub trait ConservationLaw: Send + Sync {
    fn components(&self) -> usize;

    fn name(&self) -> &str;

    /// Whether the model defines a `y` flux.
    fn is_2d(&self) -> bool {
        false
    }

    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]);

    /// Smallest and largest eigenvalue of the flux Jacobian along `axis`.
    fn speed_range(&self, axis: Axis, u: &[f64]) -> (f64, f64);

    /// Spectral-radius bound of the flux Jacobian along `axis`.
    fn max_speed(&self, axis: Axis, u: &[f64]) -> f64 {
        let (lo, hi) = self.speed_range(axis, u);
        lo.abs().max(hi.abs())
    }

    fn admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite())
    }

    /// Admissibility check that reports `location` on failure.
    fn check_state(&self, u: &[f64], location: &str) -> Result<()> {
        if self.admissible(u) {
            Ok(())
        } else {
            Err(Error::InadmissibleState {
                location: location.to_string(),
                reason: format!("state {u:?} is not admissible for {}", self.name()),
            })
        }
    }

    fn flux_x(&self, u: &[f64], out: &mut [f64]) {
        self.flux(Axis::X, u, out)
    }

    fn flux_y(&self, u: &[f64], out: &mut [f64]) {
        self.flux(Axis::Y, u, out)
    }
}

/// Runtime-selected model, used by the configuration layer and CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Advection(LinearAdvection),
    Burgers(Burgers),
    Euler1d(Euler1d),
    Euler2d(Euler2d),
}

impl Model {
    fn inner(&self) -> &dyn ConservationLaw {
        match self {
            Model::Advection(m) => m,
            Model::Burgers(m) => m,
            Model::Euler1d(m) => m,
            Model::Euler2d(m) => m,
        }
    }
}

impl ConservationLaw for Model {
    fn components(&self) -> usize {
        self.inner().components()
    }
    fn name(&self) -> &str {
        self.inner().name()
    }
    fn is_2d(&self) -> bool {
        self.inner().is_2d()
    }
    #[inline]
    fn flux(&self, axis: Axis, u: &[f64], out: &mut [f64]) {
        match self {
            Model::Advection(m) => m.flux(axis, u, out),
            Model::Burgers(m) => m.flux(axis, u, out),
            Model::Euler1d(m) => m.flux(axis, u, out),
            Model::Euler2d(m) => m.flux(axis, u, out),
        }
    }
    #[inline]
    fn speed_range(&self, axis: Axis, u: &[f64]) -> (f64, f64) {
        match self {
            Model::Advection(m) => m.speed_range(axis, u),
            Model::Burgers(m) => m.speed_range(axis, u),
            Model::Euler1d(m) => m.speed_range(axis, u),
            Model::Euler2d(m) => m.speed_range(axis, u),
        }
    }
    #[inline]
    fn max_speed(&self, axis: Axis, u: &[f64]) -> f64 {
        match self {
            Model::Advection(m) => m.max_speed(axis, u),
            Model::Burgers(m) => m.max_speed(axis, u),
            Model::Euler1d(m) => m.max_speed(axis, u),
            Model::Euler2d(m) => m.max_speed(axis, u),
        }
    }
    #[inline]
    fn admissible(&self, u: &[f64]) -> bool {
        match self {
            Model::Advection(m) => m.admissible(u),
            Model::Burgers(m) => m.admissible(u),
            Model::Euler1d(m) => m.admissible(u),
            Model::Euler2d(m) => m.admissible(u),
        }
    }
}

impl From<LinearAdvection> for Model {
    fn from(m: LinearAdvection) -> Self {
        Model::Advection(m)
    }
}
impl From<Burgers> for Model {
    fn from(m: Burgers) -> Self {
        Model::Burgers(m)
    }
}
impl From<Euler1d> for Model {
    fn from(m: Euler1d) -> Self {
        Model::Euler1d(m)
    }
}
impl From<Euler2d> for Model {
    fn from(m: Euler2d) -> Self {
        Model::Euler2d(m)
    }
}
