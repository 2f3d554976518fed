//! Local approximate Taylor (LAT) schemes in conservative form.
//!
//! Unlike CAT, the time derivatives are approximated once per cell on the
//! whole grid: `u^(k) = -D^1(f^(k-1))` with a centered first derivative and
//! `f^(k)` from centered `k`-th time derivatives of fluxes of Taylor-predicted
//! states. The update is written with interface fluxes
//! `F = sum_k dt^(k-1)/k! A^{0,1/2}(f^(k-1))`, which makes it conservative.

use super::{derivative_sum, interpolation_sum, inv_factorials};
use crate::diffops::StencilTable;
use crate::models::{Axis, ConservationLaw};
use crate::{Error, Result, MAX_P};

/// Spatial half-width per Taylor level and the temporal half-width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatWidths {
    space: Vec<usize>,
    time: usize,
}

fn default_time_width(order: usize) -> usize {
    (order.saturating_sub(1)).div_ceil(2).max(1)
}

impl LatWidths {
    /// Explicit widths; `space[k-1]` is used for level `k = 1..=order`.
    pub fn new(space: Vec<usize>, time: usize) -> Result<Self> {
        if space.is_empty() {
            return Err(Error::InvalidArgument("LAT needs at least one level".into()));
        }
        if space.iter().chain([&time]).any(|&p| p == 0 || p > MAX_P) {
            return Err(Error::InvalidArgument(format!("LAT half-widths must lie in 1..={MAX_P}")));
        }
        if space.len() - 1 > 2 * time {
            return Err(Error::InvalidArgument(format!(
                "time half-width {time} cannot differentiate to order {}",
                space.len() - 1
            )));
        }
        Ok(Self { space, time })
    }

    /// The same half-width `p` at every level.
    pub fn uniform(p: usize, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("LAT order must be positive".into()));
        }
        Self::new(vec![p; order], default_time_width(order))
    }

    /// Smallest widths keeping order `order`: `p_k = ceil((order + 1 - k) / 2)`.
    pub fn for_order(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("LAT order must be positive".into()));
        }
        let space = (1..=order).map(|k| (order + 1 - k).div_ceil(2)).collect();
        Self::new(space, default_time_width(order))
    }

    pub fn order(&self) -> usize {
        self.space.len()
    }

    /// Half-width at level `k` (1-based).
    pub fn space(&self, k: usize) -> usize {
        self.space[k - 1]
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Ghost cells needed on each side.
    pub fn halo(&self) -> usize {
        self.space.iter().sum()
    }

    fn max_width(&self) -> usize {
        self.space.iter().copied().max().unwrap_or(1).max(self.time)
    }
}

/// Interface fluxes `F_{i+1/2}` for `i = halo-1 ..= len-halo-1`, i.e. both
/// faces of every interior cell of a row laid out cell-major with `halo`
/// ghost cells on each side.
pub fn lat_fluxes<L: ConservationLaw + ?Sized>(
    row: &[f64],
    halo: usize,
    model: &L,
    widths: &LatWidths,
    dx: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let m = model.components();
    if row.len() % m != 0 {
        return Err(Error::InvalidArgument("row length is not a multiple of the component count".into()));
    }
    let cells = row.len() / m;
    if halo < widths.halo() || cells < 2 * halo + 1 {
        return Err(Error::InvalidArgument(format!(
            "LAT needs {} ghost cells and a non-empty interior, got halo {halo} with {cells} cells",
            widths.halo()
        )));
    }
    let table = StencilTable::for_max_p(widths.max_width())?;
    let inv_fact = inv_factorials();
    let interior = cells - 2 * halo;
    let lambda = dt / dx;
    let pt = widths.time();

    let mut f0 = vec![0.0; row.len()];
    for i in 0..cells {
        model.flux(Axis::X, &row[i * m..(i + 1) * m], &mut f0[i * m..(i + 1) * m]);
    }
    // g = dt^(k-1) f^(k-1); scaled_u[l-1] = dt^l u^(l)
    let mut g = f0.clone();
    let mut next = vec![0.0; row.len()];
    let mut scaled_u: Vec<Vec<f64>> = Vec::with_capacity(widths.order());
    let mut flux = vec![0.0; (interior + 1) * m];
    let mut state = vec![0.0; m];
    let mut fr = vec![0.0; m];
    let mut acc = vec![0.0; m];
    let mut valid = 0usize;

    for k in 1..=widths.order() {
        let pk = widths.space(k);
        let mid = table.midpoint(pk);
        for q in 0..=interior {
            let i = halo - 1 + q;
            let first = i + 1 - pk;
            for c in 0..m {
                let a = interpolation_sum(mid, |s| g[(first + s) * m + c], pk - 1);
                flux[q * m + c] += inv_fact[k] * a;
            }
        }
        if k == widths.order() {
            break;
        }

        let d1 = table.centered(pk, 1);
        valid += pk;
        let mut uk = vec![0.0; row.len()];
        for i in valid..cells - valid {
            for c in 0..m {
                uk[i * m + c] = -lambda * derivative_sum(d1, |s| g[(i + s - pk) * m + c], pk);
            }
        }
        scaled_u.push(uk);

        let dk = table.centered(pt, k);
        for i in valid..cells - valid {
            acc.fill(0.0);
            for (ri, w) in dk.iter().enumerate() {
                if ri == pt {
                    continue;
                }
                let r = ri as f64 - pt as f64;
                for c in 0..m {
                    let mut v = row[i * m + c];
                    let mut pw = 1.0;
                    for (l, ul) in scaled_u.iter().enumerate() {
                        pw *= r;
                        v += pw * inv_fact[l + 1] * ul[i * m + c];
                    }
                    state[c] = v;
                }
                if !model.admissible(&state) {
                    return Err(Error::StepFailure { interface: i.saturating_sub(halo), level: k + 1 });
                }
                model.flux(Axis::X, &state, &mut fr);
                for c in 0..m {
                    acc[c] += w * (fr[c] - f0[i * m + c]);
                }
            }
            for c in 0..m {
                let v = acc[c];
                if !v.is_finite() {
                    return Err(Error::StepFailure { interface: i.saturating_sub(halo), level: k + 1 });
                }
                next[i * m + c] = v;
            }
        }
        std::mem::swap(&mut g, &mut next);
    }
    Ok(flux)
}

/// One conservative LAT step on the interior of `row`; ghosts are left alone.
pub fn lat_step<L: ConservationLaw + ?Sized>(
    row: &mut [f64],
    halo: usize,
    model: &L,
    widths: &LatWidths,
    dx: f64,
    dt: f64,
) -> Result<()> {
    let m = model.components();
    let flux = lat_fluxes(row, halo, model, widths, dx, dt)?;
    let lambda = dt / dx;
    let interior = row.len() / m - 2 * halo;
    for q in 0..interior {
        let i = halo + q;
        for c in 0..m {
            row[i * m + c] += lambda * (flux[q * m + c] - flux[(q + 1) * m + c]);
        }
    }
    Ok(())
}
