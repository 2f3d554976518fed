use super::scheme::{LowOrderKind, SchemeKind, SchemeSpec};
use crate::catcore::{cat_flux_into, TaylorScratch};
use crate::diffops::StencilTable;
use crate::models::{Axis, ConservationLaw};
use crate::smooth::{
    limiter_psi1_min, limiter_psi1_upwind, select_stencil_with, IndicatorConfig, Psi1Rule, SmoothnessReport,
};
use crate::{Error, Result};

/// Which rung of the flux ladder produced an interface flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxPath {
    #[default]
    LowOrder,
    /// The blend `psi^1 F^1 + (1 - psi^1) F^lo`.
    FlCat2,
    /// CAT with the given half-width.
    Cat(usize),
}

impl FluxPath {
    /// Half-width code: 0 low order, 1 FL-CAT2 or CAT2, `p` for CAT2p.
    pub fn code(self) -> usize {
        match self {
            FluxPath::LowOrder => 0,
            FluxPath::FlCat2 => 1,
            FluxPath::Cat(p) => p,
        }
    }
}

/// Buffers reused across interfaces by one worker.
#[derive(Debug, Clone)]
pub(crate) struct FluxScratch {
    pub taylor: TaylorScratch,
    fl: Vec<f64>,
    fr: Vec<f64>,
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl FluxScratch {
    pub fn new(max_p: usize, m: usize) -> Self {
        let z = vec![0.0; m];
        Self { taylor: TaylorScratch::new(max_p.max(1), m), fl: z.clone(), fr: z.clone(), hi: z.clone(), lo: z }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn low_order_flux_into<L: ConservationLaw + ?Sized>(
    kind: LowOrderKind,
    axis: Axis,
    ul: &[f64],
    ur: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    fl: &mut [f64],
    fr: &mut [f64],
    out: &mut [f64],
) {
    if ul == ur {
        model.flux(axis, ul, out);
        return;
    }
    model.flux(axis, ul, fl);
    model.flux(axis, ur, fr);
    let m = out.len();
    match kind {
        LowOrderKind::Rusanov | LowOrderKind::LaxFriedrichs => {
            let s = if kind == LowOrderKind::Rusanov {
                model.max_speed(axis, ul).max(model.max_speed(axis, ur))
            } else {
                dx / dt
            };
            for c in 0..m {
                out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * s * (ur[c] - ul[c]);
            }
        }
        LowOrderKind::Hll => {
            let (al, bl) = model.speed_range(axis, ul);
            let (ar, br) = model.speed_range(axis, ur);
            let (sl, sr) = (al.min(ar), bl.max(br));
            if sl >= 0.0 {
                out.copy_from_slice(fl);
            } else if sr <= 0.0 {
                out.copy_from_slice(fr);
            } else {
                let inv = 1.0 / (sr - sl);
                for c in 0..m {
                    out[c] = (sr * fl[c] - sl * fr[c] + sl * sr * (ur[c] - ul[c])) * inv;
                }
            }
        }
    }
}

/// Robust first-order flux between `ul` and `ur`; exactly `f(u)` when they agree.
pub fn low_order_flux<L: ConservationLaw + ?Sized>(
    kind: LowOrderKind,
    ul: &[f64],
    ur: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let m = model.components();
    if ul.len() != m || ur.len() != m {
        return Err(Error::InvalidArgument(format!("states must have {m} components")));
    }
    model.check_state(ul, "left state")?;
    model.check_state(ur, "right state")?;
    if kind == LowOrderKind::LaxFriedrichs && !(dx > 0.0 && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dx={dx} and dt={dt} must be positive")));
    }
    let (mut fl, mut fr, mut out) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    low_order_flux_into(kind, Axis::X, ul, ur, model, dx, dt, &mut fl, &mut fr, &mut out);
    finite(&out, 0)?;
    Ok(out)
}

fn finite(v: &[f64], interface: usize) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::StepFailure { interface, level: 0 })
    }
}

/// `psi^1` from the four states `u_{i-1..=i+2}` along `axis`.
fn psi1_at<L: ConservationLaw + ?Sized>(states: &[f64], m: usize, model: &L, axis: Axis, cfg: &IndicatorConfig) -> f64 {
    if m > 1 || cfg.psi1_rule == Psi1Rule::Symmetric {
        return limiter_psi1_min(states, m, cfg);
    }
    let (ul, ur) = (states[1], states[2]);
    let a = if ul != ur {
        let (mut fl, mut fr) = ([0.0], [0.0]);
        model.flux(axis, &[ul], &mut fl);
        model.flux(axis, &[ur], &mut fr);
        (fr[0] - fl[0]) / (ur - ul)
    } else {
        model.speed_range(axis, &[ul]).0
    };
    limiter_psi1_upwind(states, a, cfg)
}

fn blend(psi: f64, hi: &[f64], lo: &[f64], out: &mut [f64]) {
    if psi >= 1.0 {
        out.copy_from_slice(hi);
    } else {
        for c in 0..out.len() {
            out[c] = psi * hi[c] + (1.0 - psi) * lo[c];
        }
    }
}

/// Flux at the interface in the middle of `line`, following the ladder
/// `CAT2p_s -> FL-CAT2 -> low order` selected by `spec`.
///
/// `line` holds `2w` cell-major states along `axis` (`w >= spec.halo()` for
/// the indicator-driven kinds). `high(p, scratch, out)` evaluates the CAT
/// flux of half-width `p` at the same interface, which lets 1D and 2D
/// share the selection logic. `Lat` is not handled here.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_flux<L, H>(
    table: &StencilTable,
    spec: &SchemeSpec,
    model: &L,
    axis: Axis,
    line: &[f64],
    dx: f64,
    dt: f64,
    scratch: &mut FluxScratch,
    mut high: H,
    out: &mut [f64],
) -> std::result::Result<(FluxPath, SmoothnessReport), usize>
where
    L: ConservationLaw + ?Sized,
    H: FnMut(usize, &mut TaylorScratch, &mut [f64]) -> std::result::Result<(), usize>,
{
    let m = model.components();
    let w = line.len() / (2 * m);
    let FluxScratch { taylor, fl, fr, hi, lo, .. } = scratch;
    let ul = &line[(w - 1) * m..w * m];
    let ur = &line[w * m..(w + 1) * m];
    let cfg = &spec.indicator;

    let (psi1, report) = match spec.kind {
        SchemeKind::FirstOrder | SchemeKind::Lat => {
            low_order_flux_into(spec.low_order, axis, ul, ur, model, dx, dt, fl, fr, out);
            return Ok((FluxPath::LowOrder, SmoothnessReport::none()));
        }
        SchemeKind::CatFixed => {
            high(spec.max_p, taylor, out)?;
            return Ok((FluxPath::Cat(spec.max_p), SmoothnessReport::none()));
        }
        SchemeKind::FlCat2 => {
            let psi = psi1_at(&line[(w - 2) * m..(w + 2) * m], m, model, axis, cfg);
            (psi, SmoothnessReport::from_psi1(psi))
        }
        SchemeKind::Acat => {
            let p = spec.max_p;
            let mut report = select_stencil_with(table, p, &line[(w - p) * m..(w + p) * m], m, cfg);
            if m == 1 && cfg.psi1_rule == Psi1Rule::Upwind {
                report.set_psi1(psi1_at(&line[(w - 2) * m..(w + 2) * m], m, model, axis, cfg));
            }
            if report.selected_p >= 2 && high(report.selected_p, taylor, out).is_ok() {
                return Ok((FluxPath::Cat(report.selected_p), report));
            }
            (report.psi1(), report)
        }
    };

    low_order_flux_into(spec.low_order, axis, ul, ur, model, dx, dt, fl, fr, lo);
    if psi1 > 0.0 && high(1, taylor, hi).is_ok() {
        blend(psi1, hi, lo, out);
        Ok((FluxPath::FlCat2, report))
    } else {
        out.copy_from_slice(lo);
        Ok((FluxPath::LowOrder, report))
    }
}

/// FL-CAT2 flux from the four states `u_{i-1..=i+2}`; see [`flcat2_flux`].
#[allow(clippy::too_many_arguments)]
pub(crate) fn flcat2_flux_into<L: ConservationLaw + ?Sized>(
    table: &StencilTable,
    spec: &SchemeSpec,
    states: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    scratch: &mut FluxScratch,
    out: &mut [f64],
) -> (FluxPath, SmoothnessReport) {
    let m = model.components();
    let spec = SchemeSpec { kind: SchemeKind::FlCat2, max_p: 1, ..*spec };
    let inner = &states[m..3 * m];
    assemble_flux(
        table,
        &spec,
        model,
        Axis::X,
        states,
        dx,
        dt,
        scratch,
        |p, ts, o| cat_flux_into(table, p, inner, model, dx, dt, ts, o),
        out,
    )
    .expect("FL-CAT2 always has the low-order fallback")
}

/// Adaptive flux from a window of `2w` states, `w >= spec.halo()`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn acat_flux_into<L: ConservationLaw + ?Sized>(
    table: &StencilTable,
    spec: &SchemeSpec,
    window: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    scratch: &mut FluxScratch,
    out: &mut [f64],
) -> std::result::Result<(FluxPath, SmoothnessReport), usize> {
    let m = model.components();
    let w = window.len() / (2 * m);
    assemble_flux(
        table,
        spec,
        model,
        Axis::X,
        window,
        dx,
        dt,
        scratch,
        |p, ts, o| cat_flux_into(table, p, &window[(w - p) * m..(w + p) * m], model, dx, dt, ts, o),
        out,
    )
}

fn check_inputs<L: ConservationLaw + ?Sized>(states: &[f64], count: usize, model: &L, dx: f64, dt: f64) -> Result<()> {
    let m = model.components();
    if states.len() != count * m {
        return Err(Error::InvalidArgument(format!(
            "expected {count} states of {m} components, got {} values",
            states.len()
        )));
    }
    if !(dx > 0.0 && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dx={dx} and dt={dt} must be positive")));
    }
    for (j, u) in states.chunks(m).enumerate() {
        model.check_state(u, &format!("stencil state {j}"))?;
    }
    Ok(())
}

/// `psi^1 F^1 + (1 - psi^1) F^lo` at the interface between the middle two of
/// the four states `u_{i-1..=i+2}`, with `psi^1` per the configured rule.
pub fn flcat2_flux<L: ConservationLaw + ?Sized>(
    states: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    spec: &SchemeSpec,
) -> Result<Vec<f64>> {
    check_inputs(states, 4, model, dx, dt)?;
    spec.indicator.validate()?;
    let m = model.components();
    let table = StencilTable::for_max_p(1)?;
    let mut scratch = FluxScratch::new(1, m);
    let mut out = vec![0.0; m];
    flcat2_flux_into(table, spec, states, model, dx, dt, &mut scratch, &mut out);
    finite(&out, 0)?;
    Ok(out)
}

/// ACAT2P flux from the `2P` states centred at the interface (`P = spec.max_p`),
/// with the indicator report that drove the choice.
pub fn acat_flux<L: ConservationLaw + ?Sized>(
    window: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    spec: &SchemeSpec,
) -> Result<(Vec<f64>, SmoothnessReport)> {
    spec.validate()?;
    if spec.kind != SchemeKind::Acat {
        return Err(Error::InvalidArgument(format!("acat_flux needs an acat scheme, got {}", spec.label())));
    }
    check_inputs(window, 2 * spec.max_p, model, dx, dt)?;
    let m = model.components();
    let table = StencilTable::for_max_p(spec.max_p)?;
    let mut scratch = FluxScratch::new(spec.max_p, m);
    let mut out = vec![0.0; m];
    let (_, report) = acat_flux_into(table, spec, window, model, dx, dt, &mut scratch, &mut out)
        .map_err(|level| Error::StepFailure { interface: 0, level })?;
    finite(&out, 0)?;
    Ok((out, report))
}
