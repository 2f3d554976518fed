use std::f64::consts::PI;

use crate::acat1d::Boundary;
use crate::models::{Burgers, Euler1d, Euler2d, EulerState, LinearAdvection, Model};
use crate::{Error, Result};

/// Named test problems with their default mesh, CFL number and final time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    TransportSine,
    TransportSine2,
    TransportSquare,
    BurgersSine,
    Sod,
    Einfeldt123,
    BlastRight,
    Transport2dStep,
    Euler2dCfg4,
    Euler2dCfg6,
    Euler2dCfg8,
}

/// Primitive `(p, rho, v, w)` in quadrants 1 (upper right) to 4 (lower right).
type Quadrants = [[f64; 4]; 4];

const CFG4: Quadrants =
    [[1.1, 1.1, 0.0, 0.0], [0.35, 0.5065, 0.8939, 0.0], [1.1, 1.1, 0.8939, 0.8939], [0.35, 0.5065, 0.0, 0.8939]];
const CFG6: Quadrants =
    [[1.0, 1.0, 0.75, -0.5], [1.0, 2.0, 0.75, 0.5], [1.0, 1.0, -0.75, 0.5], [1.0, 3.0, -0.75, -0.5]];
const CFG8: Quadrants =
    [[0.4, 0.5197, 0.1, 0.1], [1.0, 1.0, -0.6259, 0.1], [1.0, 0.8, 0.1, 0.1], [1.0, 1.0, 0.1, -0.6259]];

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::TransportSine,
        Preset::TransportSine2,
        Preset::TransportSquare,
        Preset::BurgersSine,
        Preset::Sod,
        Preset::Einfeldt123,
        Preset::BlastRight,
        Preset::Transport2dStep,
        Preset::Euler2dCfg4,
        Preset::Euler2dCfg6,
        Preset::Euler2dCfg8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::TransportSine => "transport_sine",
            Preset::TransportSine2 => "transport_sine2",
            Preset::TransportSquare => "transport_square",
            Preset::BurgersSine => "burgers_sine",
            Preset::Sod => "sod",
            Preset::Einfeldt123 => "einfeldt123",
            Preset::BlastRight => "blast_right",
            Preset::Transport2dStep => "transport2d_step",
            Preset::Euler2dCfg4 => "euler2d_cfg4",
            Preset::Euler2dCfg6 => "euler2d_cfg6",
            Preset::Euler2dCfg8 => "euler2d_cfg8",
        }
    }

    pub fn is_2d(self) -> bool {
        matches!(self, Preset::Transport2dStep | Preset::Euler2dCfg4 | Preset::Euler2dCfg6 | Preset::Euler2dCfg8)
    }

    pub fn is_euler(self) -> bool {
        matches!(
            self,
            Preset::Sod
                | Preset::Einfeldt123
                | Preset::BlastRight
                | Preset::Euler2dCfg4
                | Preset::Euler2dCfg6
                | Preset::Euler2dCfg8
        )
    }

    /// Spatial interval (per axis in 2D).
    pub fn domain(self) -> (f64, f64) {
        match self {
            Preset::TransportSine
            | Preset::TransportSine2
            | Preset::TransportSquare
            | Preset::BurgersSine
            | Preset::Transport2dStep => (0.0, 2.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn default_cells(self) -> usize {
        match self {
            Preset::Sod | Preset::Einfeldt123 => 200,
            Preset::BlastRight => 450,
            p if p.is_2d() => 100,
            _ => 160,
        }
    }

    pub fn default_cfl(self) -> f64 {
        match self {
            Preset::Sod | Preset::Einfeldt123 | Preset::BlastRight => 0.8,
            Preset::Transport2dStep => 0.5,
            Preset::Euler2dCfg4 | Preset::Euler2dCfg6 | Preset::Euler2dCfg8 => 0.475,
            _ => 0.9,
        }
    }

    pub fn default_t_final(self) -> f64 {
        match self {
            Preset::TransportSine | Preset::TransportSine2 => 4.0,
            Preset::TransportSquare => 2.0,
            Preset::BurgersSine | Preset::Transport2dStep => 1.0,
            Preset::Sod | Preset::Euler2dCfg4 | Preset::Euler2dCfg8 => 0.25,
            Preset::Einfeldt123 => 0.15,
            Preset::BlastRight => 0.012,
            Preset::Euler2dCfg6 => 0.3,
        }
    }

    pub fn default_bc(self) -> Boundary {
        match self {
            Preset::TransportSine | Preset::TransportSine2 | Preset::TransportSquare | Preset::BurgersSine => {
                Boundary::Periodic
            }
            _ => Boundary::Outflow,
        }
    }

    pub fn components(self) -> usize {
        match self {
            p if p.is_euler() && p.is_2d() => 4,
            p if p.is_euler() => 3,
            _ => 1,
        }
    }

    /// Column names of the stored (conserved) components.
    pub fn component_names(self) -> &'static [&'static str] {
        match self.components() {
            4 => &["rho", "rho_v", "rho_w", "E"],
            3 => &["rho", "rho_v", "E"],
            _ => &["u"],
        }
    }

    pub fn model(self, gamma: f64) -> Model {
        match self {
            Preset::TransportSine | Preset::TransportSine2 | Preset::TransportSquare => {
                LinearAdvection::new(1.0).into()
            }
            Preset::Transport2dStep => LinearAdvection::new_2d(1.0, 1.0).into(),
            Preset::BurgersSine => Burgers.into(),
            Preset::Sod | Preset::Einfeldt123 | Preset::BlastRight => Euler1d::new(gamma).into(),
            Preset::Euler2dCfg4 | Preset::Euler2dCfg6 | Preset::Euler2dCfg8 => Euler2d::new(gamma).into(),
        }
    }

    /// Left and right primitive states of the 1D Riemann presets.
    pub fn riemann_states(self) -> Option<(EulerState, EulerState)> {
        match self {
            Preset::Sod => Some((EulerState::new(1.0, 0.0, 1.0), EulerState::new(0.125, 0.0, 0.1))),
            Preset::Einfeldt123 => Some((EulerState::new(1.0, -2.0, 0.4), EulerState::new(1.0, 2.0, 0.4))),
            Preset::BlastRight => Some((EulerState::new(1.0, 0.0, 1000.0), EulerState::new(1.0, 0.0, 0.01))),
            _ => None,
        }
    }

    /// Scalar initial profile of the transport and Burgers presets.
    pub fn scalar_ic(self, x: f64) -> Option<f64> {
        match self {
            Preset::TransportSine | Preset::BurgersSine => Some(0.5 * (PI * x).sin()),
            Preset::TransportSine2 => Some(0.5 * (2.0 * PI * x).sin()),
            Preset::TransportSquare => Some(square_wave(x)),
            _ => None,
        }
    }

    /// Primitive quadrant states of the 2D Riemann presets.
    pub fn quadrant_state(self, x: f64, y: f64) -> Option<EulerState> {
        let table = match self {
            Preset::Euler2dCfg4 => &CFG4,
            Preset::Euler2dCfg6 => &CFG6,
            Preset::Euler2dCfg8 => &CFG8,
            _ => return None,
        };
        let q = match (x > 0.5, y > 0.5) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        let [p, rho, v, w] = table[q];
        Some(EulerState::new_2d(rho, v, w, p))
    }
}

/// `1` on `[1/2, 1]`, `-1` on `(1, 3/2]`, `0` elsewhere in `[0, 2]`.
pub fn square_wave(x: f64) -> f64 {
    if (0.5..=1.0).contains(&x) {
        1.0
    } else if x > 1.0 && x <= 1.5 {
        -1.0
    } else {
        0.0
    }
}

/// Step `1` for `x + y <= 1/4`.
pub fn corner_step(x: f64, y: f64) -> f64 {
    if x + y <= 0.25 {
        1.0
    } else {
        0.0
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::InvalidArgument(format!("unknown preset '{s}' (expected one of {})", names.join(", ")))
        })
    }
}
