use std::time::{Duration, Instant};

use super::flux::{acat_flux_into, FluxPath, FluxScratch};
use super::grid::Grid1D;
use super::scheme::{SchemeKind, SchemeSpec};
use crate::catcore::lat_fluxes;
use crate::diffops::StencilTable;
use crate::exec::{map_max, try_for_each_chunk};
use crate::models::{Axis, ConservationLaw};
use crate::smooth::SmoothnessReport;
use crate::{Error, Execution, Result};

/// Largest number of components handled by the steppers.
pub(crate) const MAX_COMPONENTS: usize = 4;
const CHUNK: usize = 16;

/// Flux, ladder rung and indicator report of one interface.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceRecord {
    pub flux: [f64; MAX_COMPONENTS],
    pub path: FluxPath,
    pub report: SmoothnessReport,
}

impl Default for InterfaceRecord {
    fn default() -> Self {
        Self { flux: [0.0; MAX_COMPONENTS], path: FluxPath::LowOrder, report: SmoothnessReport::none() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub cfl: f64,
    pub t_final: f64,
    pub exec: Execution,
    /// Abort with an error after this many steps.
    pub max_steps: usize,
    /// Abort when the stable step falls below this fraction of the first one.
    pub min_dt_ratio: f64,
}

impl RunOptions {
    pub fn new(cfl: f64, t_final: f64) -> Self {
        Self { cfl, t_final, exec: Execution::default(), max_steps: 10_000_000, min_dt_ratio: 1e-4 }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_final must be finite and >= 0, got {}", self.t_final)));
        }
        Ok(())
    }
}

/// Summary of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    /// Time after the step.
    pub t: f64,
    pub dt: f64,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    /// Interfaces per ladder code (`FluxPath::code`), index `0..=P`.
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub scheme: String,
    pub steps: Vec<StepRecord>,
    /// Sum of the per-step histograms.
    pub histogram: Vec<usize>,
    pub wall_time: Duration,
    pub initial_integral: Vec<f64>,
    pub final_integral: Vec<f64>,
}

impl Diagnostics {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Largest `|final - initial|` of `sum u dx` over components.
    pub fn conservation_drift(&self) -> f64 {
        self.initial_integral.iter().zip(&self.final_integral).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Reusable 1D time stepper. Keeps the interface records of the last step.
#[derive(Debug, Clone)]
pub struct Stepper<'a, L: ConservationLaw + ?Sized> {
    spec: SchemeSpec,
    model: &'a L,
    exec: Execution,
    table: &'static StencilTable,
    records: Vec<InterfaceRecord>,
    step: usize,
}

impl<'a, L: ConservationLaw + ?Sized> Stepper<'a, L> {
    pub fn new(model: &'a L, spec: SchemeSpec, exec: Execution) -> Result<Self> {
        spec.validate()?;
        let m = model.components();
        if m > MAX_COMPONENTS {
            return Err(Error::InvalidArgument(format!("at most {MAX_COMPONENTS} components supported, got {m}")));
        }
        let width = if spec.kind == SchemeKind::Lat { spec.lat_widths()?.time().max(spec.max_p) } else { spec.max_p };
        let table = StencilTable::for_max_p(width.max(1))?;
        Ok(Self { spec, model, exec, table, records: Vec::new(), step: 0 })
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    /// Records of the last step, interface `q` sitting between cells `q-1` and `q`.
    pub fn records(&self) -> &[InterfaceRecord] {
        &self.records
    }

    fn check_grid(&self, grid: &Grid1D) -> Result<()> {
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
                "{} needs {} ghost cells, grid has {}",
                self.spec.label(),
                self.spec.halo(),
                grid.halo()
            )));
        }
        Ok(())
    }

    /// Stable time step `cfl dx / max |lambda|`.
    pub fn stable_dt(&self, grid: &Grid1D, cfl: f64) -> Result<f64> {
        let m = grid.components();
        let u = grid.interior();
        let smax = map_max(self.exec, grid.n(), |i| self.model.max_speed(Axis::X, &u[i * m..(i + 1) * m]));
        if !smax.is_finite() {
            return Err(Error::NumericalFailure(format!("non-finite wave speed at t={}", grid.t)));
        }
        Ok(if smax > 0.0 { cfl * (grid.dx() / smax) } else { f64::INFINITY })
    }

    /// Evaluates all `n + 1` interface fluxes of `grid` for the step `dt`.
    pub fn compute_fluxes(&mut self, grid: &Grid1D, dt: f64) -> Result<()> {
        self.check_grid(grid)?;
        let (n, m, dx) = (grid.n(), grid.components(), grid.dx());
        self.records.resize(n + 1, InterfaceRecord::default());
        if self.spec.kind == SchemeKind::Lat {
            let widths = self.spec.lat_widths()?;
            let f = lat_fluxes(grid.raw(), grid.halo(), self.model, &widths, dx, dt)?;
            for (rec, fq) in self.records.iter_mut().zip(f.chunks(m)) {
                rec.flux[..m].copy_from_slice(fq);
                rec.path = FluxPath::Cat(self.spec.max_p);
                rec.report = SmoothnessReport::none();
            }
            return Ok(());
        }
        let (spec, model, table) = (&self.spec, self.model, self.table);
        let w = spec.halo();
        let raw = grid.raw();
        let shift = grid.halo() - w;
        try_for_each_chunk(
            self.exec,
            &mut self.records,
            CHUNK,
            || FluxScratch::new(spec.max_p, m),
            |scratch, idx, recs| {
                for (k, rec) in recs.iter_mut().enumerate() {
                    let q = idx * CHUNK + k;
                    let window = &raw[(shift + q) * m..(shift + q + 2 * w) * m];
                    let (path, report) =
                        acat_flux_into(table, spec, window, model, dx, dt, scratch, &mut rec.flux[..m])
                            .map_err(|level| Error::StepFailure { interface: q, level })?;
                    if !rec.flux[..m].iter().all(|v| v.is_finite()) {
                        return Err(Error::StepFailure { interface: q, level: path.code() });
                    }
                    rec.path = path;
                    rec.report = report;
                }
                Ok(())
            },
        )
    }

    /// Advances `grid` by exactly `dt` and refills its ghosts.
    pub fn step_dt(&mut self, grid: &mut Grid1D, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        self.compute_fluxes(grid, dt)?;
        let m = grid.components();
        let lambda = dt / grid.dx();
        for (i, u) in grid.interior_mut().chunks_mut(m).enumerate() {
            let (fl, fr) = (&self.records[i].flux, &self.records[i + 1].flux);
            for c in 0..m {
                u[c] += lambda * (fl[c] - fr[c]);
            }
        }
        grid.fill_ghosts();
        grid.t += dt;
        self.step += 1;
        grid.check_states(self.model)
    }

    /// One CFL-limited step, clamped to land on `t_final`.
    pub fn step(&mut self, grid: &mut Grid1D, cfl: f64, t_final: f64) -> Result<StepRecord> {
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

    fn summary(&self, grid: &Grid1D, dt: f64) -> StepRecord {
        let m = grid.components();
        let mut min = vec![f64::INFINITY; m];
        let mut max = vec![f64::NEG_INFINITY; m];
        for u in grid.interior().chunks(m) {
            for c in 0..m {
                min[c] = min[c].min(u[c]);
                max[c] = max[c].max(u[c]);
            }
        }
        let mut histogram = vec![0; self.spec.max_p + 1];
        for r in &self.records {
            histogram[r.path.code().min(self.spec.max_p)] += 1;
        }
        StepRecord { step: self.step, t: grid.t, dt, min, max, histogram }
    }
}

/// Marches `grid` to `opts.t_final`, calling `observer` after every step.
pub fn run_with<L, O>(
    grid: &mut Grid1D,
    model: &L,
    spec: &SchemeSpec,
    opts: &RunOptions,
    mut observer: O,
) -> Result<Diagnostics>
where
    L: ConservationLaw + ?Sized,
    O: FnMut(&Stepper<'_, L>, &Grid1D, &StepRecord),
{
    opts.validate()?;
    let start = Instant::now();
    if grid.halo() < spec.halo() {
        *grid = grid.with_halo(spec.halo())?;
    }
    grid.fill_ghosts();
    grid.check_states(model)?;
    let mut stepper = Stepper::new(model, *spec, opts.exec)?;
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

/// Marches `grid` to `opts.t_final`; see [`run_with`].
pub fn run<L: ConservationLaw + ?Sized>(
    grid: &mut Grid1D,
    model: &L,
    spec: &SchemeSpec,
    opts: &RunOptions,
) -> Result<Diagnostics> {
    run_with(grid, model, spec, opts, |_, _, _| {})
}
