use std::time::Instant;

use super::flux::{cat_flux_2d_into, BlockScratch};
use super::grid::Grid2D;
use crate::acat1d::{
    assemble_flux, Diagnostics, FluxScratch, InterfaceRecord, RunOptions, SchemeKind, SchemeSpec, StepRecord,
    MAX_COMPONENTS,
};
use crate::diffops::StencilTable;
use crate::exec::{map_max, try_for_each_chunk};
use crate::models::{Axis, ConservationLaw};
use crate::{Error, Execution, Result};

struct Worker {
    flux: FluxScratch,
    block_scratch: BlockScratch,
    block: Vec<f64>,
    line: Vec<f64>,
}

/// Reusable 2D time stepper; keeps the `x` and `y` interface records of the
/// last step.
#[derive(Debug, Clone)]
pub struct Stepper2D<'a, L: ConservationLaw + ?Sized> {
    spec: SchemeSpec,
    model: &'a L,
    exec: Execution,
    table: &'static StencilTable,
    /// `ny` rows of `nx + 1` faces; face `q` lies left of cell `q`.
    rec_x: Vec<InterfaceRecord>,
    /// `ny + 1` rows of `nx` faces; row `q` lies below cell row `q`.
    rec_y: Vec<InterfaceRecord>,
    step: usize,
}

impl<'a, L: ConservationLaw + ?Sized> Stepper2D<'a, L> {
    pub fn new(model: &'a L, spec: SchemeSpec, exec: Execution) -> Result<Self> {
        spec.validate()?;
        if spec.kind == SchemeKind::Lat {
            return Err(Error::InvalidArgument("LAT is only available in 1D".into()));
        }
        let m = model.components();
        if m > MAX_COMPONENTS {
            return Err(Error::InvalidArgument(format!("at most {MAX_COMPONENTS} components supported, got {m}")));
        }
        let table = StencilTable::for_max_p(spec.max_p)?;
        Ok(Self { spec, model, exec, table, rec_x: Vec::new(), rec_y: Vec::new(), step: 0 })
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    /// `x`-face records of the last step, `(nx + 1)` per row.
    pub fn records_x(&self) -> &[InterfaceRecord] {
        &self.rec_x
    }

    /// `y`-face records of the last step, `nx` per face row.
    pub fn records_y(&self) -> &[InterfaceRecord] {
        &self.rec_y
    }

    /// `(CFL / 2) min(dx / s_x, dy / s_y)`.
    pub fn stable_dt(&self, grid: &Grid2D, cfl: f64) -> Result<f64> {
        let (nx, m) = (grid.nx(), grid.components());
        let speed = |axis: Axis| {
            map_max(self.exec, grid.nx() * grid.ny(), |k| {
                let u = &grid.row(k / nx)[(k % nx) * m..(k % nx + 1) * m];
                self.model.max_speed(axis, u)
            })
        };
        let (sx, sy) = (speed(Axis::X), speed(Axis::Y));
        if !(sx.is_finite() && sy.is_finite()) {
            return Err(Error::NumericalFailure(format!("non-finite wave speed at t={}", grid.t)));
        }
        let tx = if sx > 0.0 { grid.dx() / sx } else { f64::INFINITY };
        let ty = if sy > 0.0 { grid.dy() / sy } else { f64::INFINITY };
        Ok((0.5 * cfl) * tx.min(ty))
    }

    fn check_grid(&self, grid: &Grid2D) -> Result<()> {
        if grid.components() != self.model.components() {
            return Err(Error::InvalidArgument(format!(
                "grid has {} components, model {} has {}",
                grid.components(),
                self.model.name(),
                self.model.components()
            )));
        }
        if grid.halo() < self.spec.halo() {
            return Err(Error::InvalidArgument(format!(
                "{} needs {} ghost layers, grid has {}",
                self.spec.label(),
                self.spec.halo(),
                grid.halo()
            )));
        }
        Ok(())
    }

    fn sweep(&mut self, grid: &Grid2D, dt: f64, axis: Axis) -> Result<()> {
        let (nx, ny, m, h) = (grid.nx(), grid.ny(), grid.components(), grid.halo());
        let (spec, model, table) = (&self.spec, self.model, self.table);
        let w = spec.halo();
        let dxy = (grid.dx(), grid.dy());
        let ds = if axis == Axis::X { grid.dx() } else { grid.dy() };
        // faces per line along `axis` and the number of such lines
        let (per_line, recs) = match axis {
            Axis::X => (nx + 1, &mut self.rec_x),
            Axis::Y => (nx, &mut self.rec_y),
        };
        let total = match axis {
            Axis::X => (nx + 1) * ny,
            Axis::Y => nx * (ny + 1),
        };
        recs.resize(total, InterfaceRecord::default());
        let raw = grid.raw();
        let chunk = per_line;
        try_for_each_chunk(
            self.exec,
            recs,
            chunk,
            || Worker {
                flux: FluxScratch::new(spec.max_p, m),
                block_scratch: BlockScratch::new(spec.max_p, m),
                block: Vec::with_capacity(4 * spec.max_p * spec.max_p * m),
                line: Vec::with_capacity(2 * w * m),
            },
            |worker, line_idx, recs| {
                let Worker { flux, block_scratch, block, line } = worker;
                for (k, rec) in recs.iter_mut().enumerate() {
                    // stored (ghost-inclusive) coordinates of the cell left of / below the face
                    let (a0, b0) = match axis {
                        Axis::X => (h + k - 1, h + line_idx),
                        Axis::Y => (h + k, h + line_idx - 1),
                    };
                    line.clear();
                    for s in 0..2 * w {
                        let (a, b) = match axis {
                            Axis::X => (a0 + 1 + s - w, b0),
                            Axis::Y => (a0, b0 + 1 + s - w),
                        };
                        let o = grid.offset(a, b);
                        line.extend_from_slice(&raw[o..o + m]);
                    }
                    let high = |p: usize, _: &mut _, out: &mut [f64]| {
                        block.clear();
                        for bb in 0..2 * p {
                            let o = grid.offset(a0 + 1 - p, b0 + 1 + bb - p);
                            block.extend_from_slice(&raw[o..o + 2 * p * m]);
                        }
                        cat_flux_2d_into(table, p, axis, block, model, dxy, dt, block_scratch, out)
                    };
                    let face = line_idx * per_line + k;
                    let (path, report) =
                        assemble_flux(table, spec, model, axis, line, ds, dt, flux, high, &mut rec.flux[..m])
                            .map_err(|level| Error::StepFailure { interface: face, level })?;
                    if !rec.flux[..m].iter().all(|v| v.is_finite()) {
                        return Err(Error::StepFailure { interface: face, level: path.code() });
                    }
                    rec.path = path;
                    rec.report = report;
                }
                Ok(())
            },
        )
    }

    /// Evaluates every `x` and `y` face flux for the step `dt`.
    pub fn compute_fluxes(&mut self, grid: &Grid2D, dt: f64) -> Result<()> {
        self.check_grid(grid)?;
        self.sweep(grid, dt, Axis::X)?;
        self.sweep(grid, dt, Axis::Y)
    }

    /// Advances `grid` by exactly `dt` and refills its ghosts.
    pub fn step_dt(&mut self, grid: &mut Grid2D, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        self.compute_fluxes(grid, dt)?;
        let (nx, ny, m) = (grid.nx(), grid.ny(), grid.components());
        let (lx, ly) = (dt / grid.dx(), dt / grid.dy());
        for j in 0..ny {
            let row = grid.row_mut(j);
            for i in 0..nx {
                let (fl, fr) = (&self.rec_x[j * (nx + 1) + i].flux, &self.rec_x[j * (nx + 1) + i + 1].flux);
                let (gl, gr) = (&self.rec_y[j * nx + i].flux, &self.rec_y[(j + 1) * nx + i].flux);
                let u = &mut row[i * m..(i + 1) * m];
                for c in 0..m {
                    u[c] += lx * (fl[c] - fr[c]) + ly * (gl[c] - gr[c]);
                }
            }
        }
        grid.fill_ghosts();
        grid.t += dt;
        self.step += 1;
        grid.check_states(self.model)
    }

    /// One CFL-limited step, clamped to land on `t_final`.
    pub fn step(&mut self, grid: &mut Grid2D, cfl: f64, t_final: f64) -> Result<StepRecord> {
        let remaining = t_final - grid.t;
        if remaining <= 0.0 {
            return Err(Error::InvalidArgument(format!("t={} already reached t_final={t_final}", grid.t)));
        }
        let mut dt = self.stable_dt(grid, cfl)?;
        let last = dt >= remaining;
        if last {
            dt = remaining;
        }
        self.step_dt(grid, dt)?;
        if last {
            grid.t = t_final;
        }
        Ok(self.summary(grid, dt))
    }

    fn summary(&self, grid: &Grid2D, dt: f64) -> StepRecord {
        let m = grid.components();
        let mut min = vec![f64::INFINITY; m];
        let mut max = vec![f64::NEG_INFINITY; m];
        for j in 0..grid.ny() {
            for u in grid.row(j).chunks(m) {
                for c in 0..m {
                    min[c] = min[c].min(u[c]);
                    max[c] = max[c].max(u[c]);
                }
            }
        }
        let mut histogram = vec![0; self.spec.max_p + 1];
        for r in self.rec_x.iter().chain(&self.rec_y) {
            histogram[r.path.code().min(self.spec.max_p)] += 1;
        }
        StepRecord { step: self.step, t: grid.t, dt, min, max, histogram }
    }
}

/// Marches `grid` to `opts.t_final`, calling `observer` after every step.
pub fn run_2d_with<L, O>(
    grid: &mut Grid2D,
    model: &L,
    spec: &SchemeSpec,
    opts: &RunOptions,
    mut observer: O,
) -> Result<Diagnostics>
where
    L: ConservationLaw + ?Sized,
    O: FnMut(&Stepper2D<'_, L>, &Grid2D, &StepRecord),
{
    opts.validate()?;
    let start = Instant::now();
    if grid.halo() < spec.halo() {
        *grid = grid.with_halo(spec.halo())?;
    }
    grid.fill_ghosts();
    grid.check_states(model)?;
    let mut stepper = Stepper2D::new(model, *spec, opts.exec)?;
    let initial_integral = grid.integral();
    let mut steps = Vec::new();
    let mut histogram = vec![0; spec.max_p + 1];
    let mut first_dt = None;
    while grid.t < opts.t_final {
        if steps.len() >= opts.max_steps {
            return Err(Error::NumericalFailure(format!("step limit {} reached at t={}", opts.max_steps, grid.t)));
        }
        let dt = stepper.stable_dt(grid, opts.cfl)?;
        let dt0 = *first_dt.get_or_insert(dt);
        if dt < opts.min_dt_ratio * dt0 {
            return Err(Error::NumericalFailure(format!(
                "time step collapsed to {dt:e} (first step {dt0:e}) at t={}",
                grid.t
            )));
        }
        let rec = stepper.step(grid, opts.cfl, opts.t_final)?;
        for (h, v) in histogram.iter_mut().zip(&rec.histogram) {
            *h += v;
        }
        observer(&stepper, grid, &rec);
        steps.push(rec);
    }
    Ok(Diagnostics {
        scheme: spec.label(),
        steps,
        histogram,
        wall_time: start.elapsed(),
        initial_integral,
        final_integral: grid.integral(),
    })
}

/// Marches `grid` to `opts.t_final`; see [`run_2d_with`].
pub fn run_2d<L: ConservationLaw + ?Sized>(
    grid: &mut Grid2D,
    model: &L,
    spec: &SchemeSpec,
    opts: &RunOptions,
) -> Result<Diagnostics> {
    run_2d_with(grid, model, spec, opts, |_, _, _| {})
}
