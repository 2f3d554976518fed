//! Compact approximate Taylor (CAT2p) interface fluxes.
//!
//! The flux at `x_{i+1/2}` is built from the `2p` states `u_{i-p+1..=i+p}` only.
//! Local time derivatives of the flux are obtained recursively: a first
//! derivative in space gives the next time derivative of `u` at every stencil
//! node, truncated Taylor expansions predict `u` at the `2p` time levels
//! `t_n + r dt`, and an interpolatory formula in time differentiates the
//! predicted fluxes.
//!
//! Internally every level-`k` quantity is carried pre-multiplied by `dt^k`, which
//! removes all powers of `dt` from the recursion. Weighted sums are taken
//! relative to a reference node so constant data yield exactly zero
//! derivatives and exactly `f(u)` as flux.

mod lat;

pub use lat::{lat_fluxes, lat_step, LatWidths};

use crate::diffops::StencilTable;
use crate::models::{Axis, ConservationLaw};
use crate::{Error, Result, MAX_P};

/// `1 / k!` for `k = 0..=2 MAX_P`.
pub(crate) fn inv_factorials() -> [f64; 2 * MAX_P + 1] {
    let mut out = [1.0; 2 * MAX_P + 1];
    let mut f = 1.0;
    for (k, v) in out.iter_mut().enumerate().skip(1) {
        f *= k as f64;
        *v = 1.0 / f;
    }
    out
}

/// Weighted sum `sum_s w[s] * (v[s] - v[reference])`; weights sum to zero.
#[inline]
pub(crate) fn derivative_sum(w: &[f64], v: impl Fn(usize) -> f64, reference: usize) -> f64 {
    let base = v(reference);
    let mut s = 0.0;
    for (idx, c) in w.iter().enumerate() {
        s += c * (v(idx) - base);
    }
    s
}

/// Interpolation `v[ref] + sum_s w[s] (v[s] - v[ref])`; weights sum to one.
#[inline]
pub(crate) fn interpolation_sum(w: &[f64], v: impl Fn(usize) -> f64, reference: usize) -> f64 {
    let base = v(reference);
    base + derivative_sum(w, v, reference)
}

/// Per-interface workspace of the CAT recursion.
///
/// Sized for half-widths up to `max_p`; a single scratch serves every `p` in
/// an adaptive step. Contents never leak between calls: every entry read in
/// a call is written earlier in the same call.
#[derive(Debug, Clone)]
pub struct TaylorScratch {
    max_p: usize,
    m: usize,
    /// `dt^l u^(l)` at every node, `l = 1..2p`.
    scaled_u: Vec<f64>,
    /// `dt^k f^(k)` at every node, `k = 0..2p`.
    scaled_f: Vec<f64>,
    /// Fluxes of the predicted states at every (time node, space node).
    node_flux: Vec<f64>,
    state: Vec<f64>,
    /// Taylor weights `r^l / l!` per time node and level.
    taylor: Vec<f64>,
    inv_fact: [f64; 2 * MAX_P + 1],
}

impl TaylorScratch {
    pub fn new(max_p: usize, m: usize) -> Self {
        let n = 2 * max_p;
        let inv_fact = inv_factorials();
        Self {
            max_p,
            m,
            scaled_u: vec![0.0; n * n * m],
            scaled_f: vec![0.0; n * n * m],
            node_flux: vec![0.0; n * n * m],
            state: vec![0.0; m],
            taylor: vec![0.0; n * n],
            inv_fact,
        }
    }

    pub fn max_p(&self) -> usize {
        self.max_p
    }

    pub fn components(&self) -> usize {
        self.m
    }

    fn prepare_taylor(&mut self, p: usize) {
        let n = 2 * p;
        for r in 0..n {
            let offset = r as f64 - (p as f64 - 1.0);
            let mut pw = 1.0;
            for l in 0..n {
                self.taylor[r * n + l] = pw * self.inv_fact[l];
                pw *= offset;
            }
        }
    }
}

/// CAT2p flux at the interface between the two central states of `stencil`.
///
/// `stencil` holds `2p` states of `m` components each, cell-major. On failure
/// returns the Taylor level at which a predicted state was inadmissible or a
/// non-finite value appeared.
pub fn cat_flux_into<L: ConservationLaw + ?Sized>(
    table: &StencilTable,
    p: usize,
    stencil: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
    scratch: &mut TaylorScratch,
    out: &mut [f64],
) -> std::result::Result<(), usize> {
    let m = model.components();
    let n = 2 * p;
    debug_assert!(p >= 1 && p <= scratch.max_p && scratch.m == m);
    debug_assert_eq!(stencil.len(), n * m);
    let lambda = dt / dx;
    let center = p - 1;
    scratch.prepare_taylor(p);
    let TaylorScratch { scaled_u, scaled_f, node_flux, state, taylor, inv_fact, .. } = scratch;

    for j in 0..n {
        model.flux(Axis::X, &stencil[j * m..(j + 1) * m], &mut scaled_f[j * m..(j + 1) * m]);
    }

    for k in 2..=n {
        // dt^{k-1} u^(k-1) = -(dt/dx) A^{1,j}(dt^{k-2} f^(k-2))
        let prev = (k - 2) * n * m;
        let lvl = (k - 2) * n * m;
        for j in 0..n {
            let w = table.first_derivative_at_node(p, j);
            for c in 0..m {
                let d = derivative_sum(w, |s| scaled_f[prev + s * m + c], center);
                scaled_u[lvl + j * m + c] = -lambda * d;
            }
        }
        // predicted fluxes at time nodes r != 0; r = 0 reuses f(u^n)
        for r in 0..n {
            for j in 0..n {
                let dst = (r * n + j) * m;
                if r == center {
                    node_flux[dst..dst + m].copy_from_slice(&scaled_f[j * m..(j + 1) * m]);
                    continue;
                }
                for c in 0..m {
                    let mut v = stencil[j * m + c];
                    for l in 1..k {
                        v += taylor[r * n + l] * scaled_u[(l - 1) * n * m + j * m + c];
                    }
                    state[c] = v;
                }
                if !model.admissible(state) {
                    return Err(k);
                }
                model.flux(Axis::X, state, &mut node_flux[dst..dst + m]);
            }
        }
        // dt^{k-1} f^(k-1) = A^{k-1,0} in time
        let w = table.derivative_at_zero(p, k - 1);
        let cur = (k - 1) * n * m;
        for j in 0..n {
            for c in 0..m {
                let v = derivative_sum(w, |r| node_flux[(r * n + j) * m + c], center);
                if !v.is_finite() {
                    return Err(k);
                }
                scaled_f[cur + j * m + c] = v;
            }
        }
    }

    let mid = table.midpoint(p);
    for c in 0..m {
        let mut acc = interpolation_sum(mid, |s| scaled_f[s * m + c], center);
        for k in 2..=n {
            let base = (k - 1) * n * m;
            acc += inv_fact[k] * interpolation_sum(mid, |s| scaled_f[base + s * m + c], center);
        }
        if !acc.is_finite() {
            return Err(n);
        }
        out[c] = acc;
    }
    Ok(())
}

/// Allocating convenience wrapper around [`cat_flux_into`].
pub fn cat_flux<L: ConservationLaw + ?Sized>(
    p: usize,
    stencil: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let m = model.components();
    if stencil.len() != 2 * p * m {
        return Err(Error::InvalidArgument(format!(
            "CAT{} flux needs {} states of {m} components, got {} values",
            2 * p,
            2 * p,
            stencil.len()
        )));
    }
    if !(dx > 0.0 && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dx={dx} and dt={dt} must be positive")));
    }
    let table = StencilTable::for_max_p(p)?;
    let mut scratch = TaylorScratch::new(p, m);
    let mut out = vec![0.0; m];
    cat_flux_into(table, p, stencil, model, dx, dt, &mut scratch, &mut out)
        .map_err(|level| Error::StepFailure { interface: 0, level })?;
    Ok(out)
}

/// CAT2 flux in closed form: the average of the fluxes at `t_n` and of the
/// fluxes of the two states advanced by one forward-Euler step of the
/// two-point divergence.
pub fn cat2_flux_closed_form<L: ConservationLaw + ?Sized>(
    left: &[f64],
    right: &[f64],
    model: &L,
    dx: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let m = model.components();
    let (mut fl, mut fr) = (vec![0.0; m], vec![0.0; m]);
    model.flux_x(left, &mut fl);
    model.flux_x(right, &mut fr);
    let lambda = dt / dx;
    let mut out = vec![0.0; m];
    let mut tmp = vec![0.0; m];
    let mut state = vec![0.0; m];
    for base in [left, right] {
        for c in 0..m {
            state[c] = base[c] - lambda * (fr[c] - fl[c]);
        }
        if !model.admissible(&state) {
            return Err(Error::StepFailure { interface: 0, level: 2 });
        }
        model.flux_x(&state, &mut tmp);
        for c in 0..m {
            out[c] += tmp[c];
        }
    }
    for c in 0..m {
        out[c] = 0.25 * (out[c] + fr[c] + fl[c]);
    }
    Ok(out)
}
