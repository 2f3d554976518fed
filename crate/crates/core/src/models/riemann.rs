//! Exact solution of the 1D Euler Riemann problem for an ideal gas.
//!
//! Newton iteration on the pressure function across the two nonlinear waves,
//! then self-similar sampling in `xi = x / t`. Vacuum-generating data are
//! handled by the two-rarefaction-into-vacuum structure.

use super::EulerState;
use crate::{Error, Result};

const MAX_NEWTON: usize = 100;
const PRESSURE_TOL: f64 = 1e-12;

/// One of the two nonlinear waves of the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

/// Star-region solution of a Riemann problem, ready for sampling.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution {
    pub left: EulerState,
    pub right: EulerState,
    pub gamma: f64,
    /// Pressure and velocity in the star region (unused when `vacuum`).
    pub p_star: f64,
    pub u_star: f64,
    pub vacuum: bool,
    pub iterations: usize,
}

impl RiemannSolution {
    pub fn solve(left: EulerState, right: EulerState, gamma: f64) -> Result<Self> {
        left.check("riemann left state")?;
        right.check("riemann right state")?;
        let cl = left.sound_speed(gamma);
        let cr = right.sound_speed(gamma);
        let du = right.v - left.v;
        let mut sol = Self { left, right, gamma, p_star: 0.0, u_star: 0.0, vacuum: false, iterations: 0 };
        if 2.0 * (cl + cr) / (gamma - 1.0) <= du {
            sol.vacuum = true;
            return Ok(sol);
        }

        let mut p = sol.initial_guess(cl, cr);
        for it in 1..=MAX_NEWTON {
            let (fl, dfl) = side_function(p, &left, cl, gamma);
            let (fr, dfr) = side_function(p, &right, cr, gamma);
            let mut next = p - (fl + fr + du) / (dfl + dfr);
            if next <= 0.0 {
                next = 1e-3 * p;
            }
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < PRESSURE_TOL {
                let (fl, _) = side_function(p, &left, cl, gamma);
                let (fr, _) = side_function(p, &right, cr, gamma);
                sol.p_star = p;
                sol.u_star = 0.5 * (left.v + right.v) + 0.5 * (fr - fl);
                sol.iterations = it;
                return Ok(sol);
            }
        }
        Err(Error::NumericalFailure(format!(
            "exact Riemann solver: Newton iteration did not converge in {MAX_NEWTON} steps"
        )))
    }

    /// Adaptive guess: PVRS when the pressure ratio is mild, else two-rarefaction
    /// or two-shock approximations.
    fn initial_guess(&self, cl: f64, cr: f64) -> f64 {
        let (l, r, g) = (&self.left, &self.right, self.gamma);
        let cup = 0.25 * (l.rho + r.rho) * (cl + cr);
        let ppv = (0.5 * (l.p + r.p) + 0.5 * (l.v - r.v) * cup).max(0.0);
        let pmin = l.p.min(r.p);
        let pmax = l.p.max(r.p);
        if pmax / pmin <= 2.0 && (pmin..=pmax).contains(&ppv) {
            return ppv;
        }
        if ppv < pmin {
            let z = (g - 1.0) / (2.0 * g);
            let num = cl + cr - 0.5 * (g - 1.0) * (r.v - l.v);
            let den = cl / l.p.powf(z) + cr / r.p.powf(z);
            return (num / den).powf(1.0 / z);
        }
        let ge = |s: &EulerState| ((2.0 / ((g + 1.0) * s.rho)) / ((g - 1.0) / (g + 1.0) * s.p + ppv)).sqrt();
        let (gl, gr) = (ge(l), ge(r));
        ((gl * l.p + gr * r.p - (r.v - l.v)) / (gl + gr)).max(1e-8 * pmin)
    }

    /// Residual `f_L(p) + f_R(p) + (v_R - v_L)` of the pressure equation.
    pub fn pressure_residual(&self, p: f64) -> f64 {
        let cl = self.left.sound_speed(self.gamma);
        let cr = self.right.sound_speed(self.gamma);
        side_function(p, &self.left, cl, self.gamma).0
            + side_function(p, &self.right, cr, self.gamma).0
            + (self.right.v - self.left.v)
    }

    pub fn left_wave(&self) -> Wave {
        let (s, g) = (&self.left, self.gamma);
        let c = s.sound_speed(g);
        if self.vacuum {
            return Wave::Rarefaction { head: s.v - c, tail: s.v + 2.0 * c / (g - 1.0) };
        }
        if self.p_star > s.p {
            let speed = s.v - c * ((g + 1.0) / (2.0 * g) * self.p_star / s.p + (g - 1.0) / (2.0 * g)).sqrt();
            Wave::Shock { speed }
        } else {
            let c_star = c * (self.p_star / s.p).powf((g - 1.0) / (2.0 * g));
            Wave::Rarefaction { head: s.v - c, tail: self.u_star - c_star }
        }
    }

    pub fn right_wave(&self) -> Wave {
        let (s, g) = (&self.right, self.gamma);
        let c = s.sound_speed(g);
        if self.vacuum {
            return Wave::Rarefaction { head: s.v + c, tail: s.v - 2.0 * c / (g - 1.0) };
        }
        if self.p_star > s.p {
            let speed = s.v + c * ((g + 1.0) / (2.0 * g) * self.p_star / s.p + (g - 1.0) / (2.0 * g)).sqrt();
            Wave::Shock { speed }
        } else {
            let c_star = c * (self.p_star / s.p).powf((g - 1.0) / (2.0 * g));
            Wave::Rarefaction { head: s.v + c, tail: self.u_star + c_star }
        }
    }

    /// Density on each side of the contact.
    pub fn star_densities(&self) -> (f64, f64) {
        (self.star_density(&self.left), self.star_density(&self.right))
    }

    fn star_density(&self, s: &EulerState) -> f64 {
        let g = self.gamma;
        let ratio = self.p_star / s.p;
        if ratio > 1.0 {
            let g6 = (g - 1.0) / (g + 1.0);
            s.rho * (ratio + g6) / (g6 * ratio + 1.0)
        } else {
            s.rho * ratio.powf(1.0 / g)
        }
    }

    /// State at `xi = x / t`.
    pub fn sample(&self, xi: f64) -> EulerState {
        if self.vacuum {
            return self.sample_vacuum(xi);
        }
        let g = self.gamma;
        if xi <= self.u_star {
            let s = self.left;
            match self.left_wave() {
                Wave::Shock { speed } => {
                    if xi <= speed {
                        s
                    } else {
                        EulerState::new_2d(self.star_density(&s), self.u_star, s.w, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi <= head {
                        s
                    } else if xi >= tail {
                        EulerState::new_2d(self.star_density(&s), self.u_star, s.w, self.p_star)
                    } else {
                        left_fan(&s, g, xi)
                    }
                }
            }
        } else {
            let s = self.right;
            match self.right_wave() {
                Wave::Shock { speed } => {
                    if xi >= speed {
                        s
                    } else {
                        EulerState::new_2d(self.star_density(&s), self.u_star, s.w, self.p_star)
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi >= head {
                        s
                    } else if xi <= tail {
                        EulerState::new_2d(self.star_density(&s), self.u_star, s.w, self.p_star)
                    } else {
                        right_fan(&s, g, xi)
                    }
                }
            }
        }
    }

    fn sample_vacuum(&self, xi: f64) -> EulerState {
        let g = self.gamma;
        let (l, r) = (&self.left, &self.right);
        let (cl, cr) = (l.sound_speed(g), r.sound_speed(g));
        let front_l = l.v + 2.0 * cl / (g - 1.0);
        let front_r = r.v - 2.0 * cr / (g - 1.0);
        if xi <= l.v - cl {
            *l
        } else if xi < front_l {
            left_fan(l, g, xi)
        } else if xi >= r.v + cr {
            *r
        } else if xi > front_r {
            right_fan(r, g, xi)
        } else {
            EulerState::new_2d(0.0, xi, 0.0, 0.0)
        }
    }
}

/// Toro's `f_K(p)` and its derivative.
fn side_function(p: f64, s: &EulerState, c: f64, g: f64) -> (f64, f64) {
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        let q = (a / (b + p)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p)))
    } else {
        let ratio = p / s.p;
        let f = 2.0 * c / (g - 1.0) * (ratio.powf((g - 1.0) / (2.0 * g)) - 1.0);
        let df = 1.0 / (s.rho * c) * ratio.powf(-(g + 1.0) / (2.0 * g));
        (f, df)
    }
}

fn left_fan(s: &EulerState, g: f64, xi: f64) -> EulerState {
    let cl = s.sound_speed(g);
    let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (s.v - xi));
    let v = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * s.v + xi);
    let ratio = c / cl;
    EulerState::new_2d(s.rho * ratio.powf(2.0 / (g - 1.0)), v, s.w, s.p * ratio.powf(2.0 * g / (g - 1.0)))
}

fn right_fan(s: &EulerState, g: f64, xi: f64) -> EulerState {
    let cr = s.sound_speed(g);
    let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (s.v - xi));
    let v = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * s.v + xi);
    let ratio = c / cr;
    EulerState::new_2d(s.rho * ratio.powf(2.0 / (g - 1.0)), v, s.w, s.p * ratio.powf(2.0 * g / (g - 1.0)))
}

/// Samples the exact Riemann solution at `xi = x / t`.
pub fn exact_riemann_euler(left: EulerState, right: EulerState, gamma: f64, x_over_t: f64) -> Result<EulerState> {
    Ok(RiemannSolution::solve(left, right, gamma)?.sample(x_over_t))
}
