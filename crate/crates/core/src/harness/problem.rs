use super::config::RunConfig;
use super::preset::{corner_step, Preset};
use crate::acat1d::{self, Boundary, Diagnostics, Grid1D, InterfaceRecord, LowOrderKind, RunOptions, SchemeSpec};
use crate::acat2d::{self, Grid2D};
use crate::models::{exact_riemann_euler, exact_transport, exact_transport_2d, EulerState, Periodicity};
use crate::{Error, Result};

/// Final state of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    OneD(Grid1D),
    TwoD(Grid2D),
}

impl Solution {
    pub fn t(&self) -> f64 {
        match self {
            Solution::OneD(g) => g.t,
            Solution::TwoD(g) => g.t,
        }
    }

    /// Component `c` of every interior cell (row by row in 2D).
    pub fn component(&self, c: usize) -> Vec<f64> {
        match self {
            Solution::OneD(g) => g.component(c),
            Solution::TwoD(g) => g.component(c),
        }
    }

    /// `dx` in 1D, `dx dy` in 2D.
    pub fn cell_volume(&self) -> f64 {
        match self {
            Solution::OneD(g) => g.dx(),
            Solution::TwoD(g) => g.dx() * g.dy(),
        }
    }

    pub fn as_1d(&self) -> Option<&Grid1D> {
        match self {
            Solution::OneD(g) => Some(g),
            Solution::TwoD(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Grid2D> {
        match self {
            Solution::TwoD(g) => Some(g),
            Solution::OneD(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub solution: Solution,
    pub diagnostics: Diagnostics,
    /// Interface records of the last step (`x` faces in 2D); empty unless `dump_psi`.
    pub records: Vec<InterfaceRecord>,
    /// `y`-face records of the last step in 2D.
    pub records_y: Vec<InterfaceRecord>,
}

fn riemann_1d(x: f64, left: &EulerState, right: &EulerState, gamma: f64, u: &mut [f64]) {
    let s = if x < 0.5 { left } else { right };
    u.copy_from_slice(&s.to_conserved_1d(gamma));
}

/// Initial 1D grid of a preset with ghosts sized for `cfg.scheme`.
pub fn initial_grid_1d(cfg: &RunConfig) -> Result<Grid1D> {
    let p = cfg.preset;
    if p.is_2d() {
        return Err(Error::InvalidArgument(format!("{p} is a 2D preset")));
    }
    let (m, halo, bc) = (p.components(), cfg.scheme.halo(), cfg.boundary());
    if let Some((l, r)) = p.riemann_states() {
        let gamma = cfg.gamma;
        Grid1D::from_fn(cfg.cells, p.domain(), m, halo, bc, |x, u| riemann_1d(x, &l, &r, gamma, u))
    } else {
        Grid1D::from_fn(cfg.cells, p.domain(), m, halo, bc, |x, u| u[0] = p.scalar_ic(x).unwrap_or(0.0))
    }
}

/// Initial 2D grid of a preset with ghosts sized for `cfg.scheme`.
pub fn initial_grid_2d(cfg: &RunConfig) -> Result<Grid2D> {
    let p = cfg.preset;
    if !p.is_2d() {
        return Err(Error::InvalidArgument(format!("{p} is a 1D preset")));
    }
    let (m, halo, bc) = (p.components(), cfg.scheme.halo(), cfg.boundary());
    let (d, gamma) = (p.domain(), cfg.gamma);
    Grid2D::from_fn((cfg.cells, cfg.cells), d, d, m, halo, (bc, bc), |x, y, u| match p.quadrant_state(x, y) {
        Some(s) => u.copy_from_slice(&s.to_conserved_2d(gamma)),
        None => u[0] = corner_step(x, y),
    })
}

/// Runs a configuration to its final time.
pub fn run_config(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let model = cfg.preset.model(cfg.gamma);
    let opts = RunOptions::new(cfg.cfl, cfg.t_final).with_exec(cfg.exec);
    let (t_final, dump) = (cfg.t_final, cfg.dump_psi);
    let mut records = Vec::new();
    let mut records_y = Vec::new();
    let (solution, diagnostics) = if cfg.preset.is_2d() {
        let mut grid = initial_grid_2d(cfg)?;
        let diag = acat2d::run_2d_with(&mut grid, &model, &cfg.scheme, &opts, |st, g, _| {
            if dump && g.t >= t_final {
                records = st.records_x().to_vec();
                records_y = st.records_y().to_vec();
            }
        })?;
        (Solution::TwoD(grid), diag)
    } else {
        let mut grid = initial_grid_1d(cfg)?;
        let diag = acat1d::run_with(&mut grid, &model, &cfg.scheme, &opts, |st, g, _| {
            if dump && g.t >= t_final {
                records = st.records().to_vec();
            }
        })?;
        (Solution::OneD(grid), diag)
    };
    Ok(RunOutcome { config: cfg.clone(), solution, diagnostics, records, records_y })
}

/// Linear interpolation of component `c` at `x`, honouring the grid's boundary.
pub fn sample_linear(grid: &Grid1D, c: usize, x: f64) -> f64 {
    let n = grid.n() as i64;
    let s = (x - grid.x0()) / grid.dx() - 0.5;
    let i = s.floor();
    let frac = s - i;
    let at = |k: i64| {
        let k = match grid.bc() {
            Boundary::Periodic => k.rem_euclid(n),
            Boundary::Outflow => k.clamp(0, n - 1),
        };
        grid.cell(k as usize)[c]
    };
    let i = i as i64;
    (1.0 - frac) * at(i) + frac * at(i + 1)
}

fn self_reference(cfg: &RunConfig, scheme: SchemeSpec, cells: usize, xs: &[f64]) -> Result<Vec<f64>> {
    let mut fine = cfg.clone().with_scheme(scheme).with_cells(cells);
    fine.dump_psi = false;
    let out = run_config(&fine)?;
    let g = out.solution.as_1d().expect("1D reference run");
    Ok(xs.iter().map(|&x| sample_linear(g, 0, x)).collect())
}

/// Cells of the Lax-Friedrichs reference for Burgers.
pub const BURGERS_REFERENCE_CELLS: usize = 1400;
/// Refinement factor of the low-order blast-wave self-reference.
pub const BLAST_REFERENCE_FACTOR: usize = 4;

/// Reference values of component 0 (density for Euler) at the cell centres of
/// `solution`, or `None` when the preset has no reference.
pub fn reference_values(cfg: &RunConfig, solution: &Solution) -> Result<Option<Vec<f64>>> {
    let p = cfg.preset;
    let t = solution.t();
    let periodic = cfg.boundary() == Boundary::Periodic;
    let (x0, x1) = p.domain();
    let wrap = periodic.then_some(Periodicity { origin: x0, length: x1 - x0 });
    match solution {
        Solution::OneD(g) => {
            let xs: Vec<f64> = (0..g.n()).map(|i| g.x(i)).collect();
            let values = match p {
                Preset::TransportSine | Preset::TransportSine2 | Preset::TransportSquare => {
                    xs.iter().map(|&x| exact_transport(|s| p.scalar_ic(s).unwrap_or(0.0), 1.0, x, t, wrap)).collect()
                }
                Preset::BurgersSine => self_reference(
                    cfg,
                    SchemeSpec::first_order(LowOrderKind::LaxFriedrichs),
                    BURGERS_REFERENCE_CELLS,
                    &xs,
                )?,
                Preset::BlastRight => self_reference(
                    cfg,
                    SchemeSpec::first_order(LowOrderKind::Rusanov),
                    BLAST_REFERENCE_FACTOR * g.n(),
                    &xs,
                )?,
                Preset::Sod | Preset::Einfeldt123 => {
                    let (l, r) = p.riemann_states().expect("Riemann preset");
                    let mut v = Vec::with_capacity(xs.len());
                    for &x in &xs {
                        let rho = if t > 0.0 {
                            exact_riemann_euler(l, r, cfg.gamma, (x - 0.5) / t)?.rho
                        } else if x < 0.5 {
                            l.rho
                        } else {
                            r.rho
                        };
                        v.push(rho);
                    }
                    v
                }
                _ => return Ok(None),
            };
            Ok(Some(values))
        }
        Solution::TwoD(g) => {
            if p != Preset::Transport2dStep {
                return Ok(None);
            }
            let wrap2 = wrap.map(|w| (w, w));
            let mut v = Vec::with_capacity(g.nx() * g.ny());
            for j in 0..g.ny() {
                for i in 0..g.nx() {
                    v.push(exact_transport_2d(corner_step, (1.0, 1.0), (g.x(i), g.y(j)), t, wrap2));
                }
            }
            Ok(Some(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::preset;

    #[test]
    fn initial_data() {
        let cfg = preset("sod").unwrap().with_cells(10);
        let g = initial_grid_1d(&cfg).unwrap();
        assert_eq!(&g.cell(0)[..2], &[1.0, 0.0]);
        assert!((g.cell(0)[2] - 2.5).abs() < 1e-15);
        assert_eq!(g.cell(9)[0], 0.125);
        assert_eq!(g.halo(), 2);
        assert!(initial_grid_2d(&cfg).is_err());
        let cfg = preset("euler2d_cfg4").unwrap().with_cells(4);
        let g = initial_grid_2d(&cfg).unwrap();
        assert_eq!(g.cell(3, 3)[0], 1.1);
        assert_eq!(g.cell(0, 3)[0], 0.5065);
    }

    #[test]
    fn linear_sampling() {
        let g = Grid1D::from_fn(8, (0.0, 2.0), 1, 1, Boundary::Periodic, |x, u| u[0] = x).unwrap();
        assert!((sample_linear(&g, 0, 0.6) - 0.6).abs() < 1e-14);
        // between the last and first cell the periodic image is used
        assert!((sample_linear(&g, 0, 0.0) - 1.0).abs() < 1e-14);
        let o = Grid1D::from_fn(8, (0.0, 2.0), 1, 1, Boundary::Outflow, |x, u| u[0] = x).unwrap();
        assert_eq!(sample_linear(&o, 0, 1.99), 1.875);
    }

    #[test]
    fn transport_reference_is_the_initial_profile_after_full_periods() {
        let cfg = preset("transport_sine").unwrap().with_cells(20);
        let mut g = initial_grid_1d(&cfg).unwrap();
        g.t = 4.0;
        let r = reference_values(&cfg, &Solution::OneD(g.clone())).unwrap().unwrap();
        for (a, b) in r.iter().zip(g.component(0)) {
            assert!((a - b).abs() < 1e-12);
        }
        let cfg = preset("euler2d_cfg8").unwrap().with_cells(4);
        let g = initial_grid_2d(&cfg).unwrap();
        assert!(reference_values(&cfg, &Solution::TwoD(g)).unwrap().is_none());
    }
}
