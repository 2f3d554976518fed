//! Flux limiter `psi^1` and high-order smoothness indicators `psi^p`.
//!
//! For a stencil `f_{i-p+1..=i+p}` around `x_{i+1/2}` the indicator is
//! `psi^p = I / (I + tau)` where `I` is the harmonic combination of the
//! squared differences left and right of the central interval and
//! `tau = (Delta^{2p-1} f)^2` uses the undivided difference. It is close to 1
//! on smooth data and close to 0 across a jump.

use crate::diffops::{dot, StencilTable};
use crate::{Error, Result, MAX_P};

/// Classic limiter functions, clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Limiter {
    #[default]
    Superbee,
    Minmod,
}

impl Limiter {
    #[inline]
    pub fn eval(self, r: f64) -> f64 {
        match self {
            Limiter::Superbee => (2.0 * r).min(1.0).max(r.min(2.0)).clamp(0.0, 1.0),
            Limiter::Minmod => r.clamp(0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Limiter::Superbee => "superbee",
            Limiter::Minmod => "minmod",
        }
    }
}

impl std::str::FromStr for Limiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superbee" => Ok(Limiter::Superbee),
            "minmod" => Ok(Limiter::Minmod),
            other => Err(Error::InvalidArgument(format!("unknown limiter '{other}'"))),
        }
    }
}

/// How `psi^1` is formed for scalar laws. Systems always take the
/// componentwise minimum of the symmetric rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Psi1Rule {
    /// Upwind ratio picked by the sign of Roe's speed.
    #[default]
    Upwind,
    /// `min(phi(r+), phi(r-))`.
    Symmetric,
}

impl Psi1Rule {
    pub fn name(self) -> &'static str {
        match self {
            Psi1Rule::Upwind => "upwind",
            Psi1Rule::Symmetric => "symmetric",
        }
    }
}

impl std::str::FromStr for Psi1Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upwind" => Ok(Psi1Rule::Upwind),
            "symmetric" | "min" => Ok(Psi1Rule::Symmetric),
            other => Err(Error::InvalidArgument(format!("unknown psi1 rule '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorConfig {
    /// Relative size of the regularization `eps = eps_scale * max(1, max f^2)`.
    pub eps_scale: f64,
    pub limiter: Limiter,
    pub psi1_rule: Psi1Rule,
    /// Use the two-split variant for `p = 2`.
    pub use_modified_p2: bool,
    /// `psi^p >= select_threshold` marks stencil `S_p` as smooth.
    pub select_threshold: f64,
    /// Admit `S_p` only when every narrower stencil is admitted as well;
    /// when false the widest smooth stencil wins regardless of the others.
    pub nested_selection: bool,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        Self {
            eps_scale: 1e-14,
            limiter: Limiter::Superbee,
            psi1_rule: Psi1Rule::Upwind,
            use_modified_p2: true,
            select_threshold: 0.5,
            nested_selection: true,
        }
    }
}

impl IndicatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.select_threshold > 0.0 && self.select_threshold < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "select_threshold must lie in (0, 1), got {}",
                self.select_threshold
            )));
        }
        if !(self.eps_scale > 0.0 && self.eps_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps_scale must be positive, got {}", self.eps_scale)));
        }
        Ok(())
    }
}

/// Indicator values at one interface and the stencil chosen from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessReport {
    values: [f64; MAX_P],
    max_p: usize,
    /// `0` when no stencil `S_2..S_P` is smooth, otherwise the widest smooth one.
    pub selected_p: usize,
}

impl SmoothnessReport {
    /// `psi[0] = psi^1`, `psi[p-1] = psi^p`.
    pub fn psi(&self) -> &[f64] {
        &self.values[..self.max_p]
    }

    pub fn psi1(&self) -> f64 {
        self.values[0]
    }

    pub fn max_p(&self) -> usize {
        self.max_p
    }

    pub(crate) fn set_psi1(&mut self, psi1: f64) {
        self.values[0] = psi1;
    }

    /// Report of a scheme that only evaluates `psi^1`.
    pub(crate) fn from_psi1(psi1: f64) -> Self {
        let mut values = [1.0; MAX_P];
        values[0] = psi1;
        Self { values, max_p: 1, selected_p: 0 }
    }

    /// Report of a scheme that evaluates no indicator.
    pub(crate) fn none() -> Self {
        Self { values: [1.0; MAX_P], max_p: 0, selected_p: 0 }
    }
}

/// `min` over components of `psi^1` on four cell-major states.
pub(crate) fn limiter_psi1_min(states: &[f64], m: usize, cfg: &IndicatorConfig) -> f64 {
    let mut psi = 1.0f64;
    for c in 0..m {
        let u = [states[c], states[m + c], states[2 * m + c], states[3 * m + c]];
        psi = psi.min(limiter_psi1(&u, cfg));
    }
    psi
}

const FLAT: f64 = 1e-14;

/// Ratio of an upwind jump to the local jump `u_{i+1} - u_i`; a vanishing
/// local jump counts as smooth only if the upwind jump vanishes too.
#[inline]
fn slope_ratio(upwind: f64, local: f64, scale: f64) -> f64 {
    if local != 0.0 {
        upwind / local
    } else if upwind.abs() <= FLAT * scale {
        2.0
    } else {
        0.0
    }
}

#[inline]
fn scale4(u: &[f64]) -> f64 {
    u[..4].iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// `min(phi(r+), phi(r-))` from `u_{i-1..=i+2}`.
pub fn limiter_psi1(u: &[f64], cfg: &IndicatorConfig) -> f64 {
    let scale = scale4(u);
    let local = u[2] - u[1];
    let rm = slope_ratio(u[1] - u[0], local, scale);
    let rp = slope_ratio(u[3] - u[2], local, scale);
    cfg.limiter.eval(rp).min(cfg.limiter.eval(rm))
}

/// Upwind-ratio limiter driven by the sign of a wave-speed estimate `a`.
pub fn limiter_psi1_upwind(u: &[f64], a: f64, cfg: &IndicatorConfig) -> f64 {
    let scale = scale4(u);
    let local = u[2] - u[1];
    let r = if a > 0.0 { slope_ratio(u[1] - u[0], local, scale) } else { slope_ratio(u[3] - u[2], local, scale) };
    cfg.limiter.eval(r)
}

/// Roe's intermediate speed for a scalar law; `df(u)` is used when `ul == ur`.
pub fn roe_speed(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, ul: f64, ur: f64) -> f64 {
    if ul != ur {
        (f(ur) - f(ul)) / (ur - ul)
    } else {
        df(ul)
    }
}

#[inline]
fn eps_for(f: &[f64], cfg: &IndicatorConfig) -> f64 {
    cfg.eps_scale * f.iter().fold(1.0f64, |a, v| a.max(v * v))
}

#[inline]
fn squared_jumps(f: &[f64], from: usize, to: usize) -> f64 {
    (from..to).map(|j| (f[j + 1] - f[j]).powi(2)).sum()
}

#[inline]
fn harmonic(l: f64, r: f64) -> f64 {
    l * r / (l + r)
}

fn tau(table: &StencilTable, p: usize, f: &[f64]) -> f64 {
    dot(table.undivided(p), f).powi(2)
}

pub(crate) fn indicator_with(table: &StencilTable, p: usize, f: &[f64], cfg: &IndicatorConfig) -> f64 {
    let n = 2 * p;
    let eps = eps_for(f, cfg);
    let c = p - 1; // central interval is f[c]..f[c+1]
    let il = squared_jumps(f, 0, c) + eps;
    let ir = squared_jumps(f, c + 1, n - 1) + eps;
    let i = harmonic(il, ir);
    i / (i + tau(table, p, f))
}

pub(crate) fn indicator_p2_modified_with(table: &StencilTable, f: &[f64], cfg: &IndicatorConfig) -> f64 {
    let eps = eps_for(f, cfg);
    let (d0, d1, d2) = ((f[1] - f[0]).powi(2), (f[2] - f[1]).powi(2), (f[3] - f[2]).powi(2));
    let t = tau(table, 2, f);
    let i1 = harmonic(d0 + eps, d1 + d2 + eps);
    let i2 = harmonic(d0 + d1 + eps, d2 + eps);
    (i1 / (i1 + t)).max(i2 / (i2 + t))
}

fn check_len(p: usize, f: &[f64]) -> Result<()> {
    if !(2..=MAX_P).contains(&p) {
        return Err(Error::InvalidArgument(format!("indicator half-width must lie in 2..={MAX_P}, got {p}")));
    }
    if f.len() != 2 * p {
        return Err(Error::InvalidArgument(format!("indicator of width {p} needs {} values, got {}", 2 * p, f.len())));
    }
    Ok(())
}

/// `psi^p` of the `2p` values `f_{i-p+1..=i+p}`; lies in `(0, 1]`.
pub fn indicator(p: usize, f: &[f64], cfg: &IndicatorConfig) -> Result<f64> {
    check_len(p, f)?;
    Ok(indicator_with(StencilTable::for_max_p(p)?, p, f, cfg))
}

/// Modified `psi^2` with the two asymmetric lateral splits.
pub fn indicator_p2_modified(f: &[f64], cfg: &IndicatorConfig) -> Result<f64> {
    check_len(2, f)?;
    Ok(indicator_p2_modified_with(StencilTable::for_max_p(2)?, f, cfg))
}

/// Evaluates all indicators on a window of `2P` states with `m` components
/// each (cell-major) and selects the widest smooth stencil.
///
/// Every `psi^p` (and `psi^1`) is the minimum over components, so a stencil
/// is only chosen when all variables are smooth in it and in every narrower
/// stencil.
pub(crate) fn select_stencil_with(
    table: &StencilTable,
    max_p: usize,
    window: &[f64],
    m: usize,
    cfg: &IndicatorConfig,
) -> SmoothnessReport {
    let mut values = [1.0f64; MAX_P];
    let mut buf = [0.0; 2 * MAX_P];
    for c in 0..m {
        for (j, b) in buf[..2 * max_p].iter_mut().enumerate() {
            *b = window[j * m + c];
        }
        let row = &buf[..2 * max_p];
        let centre = max_p - 1;
        values[0] = values[0].min(limiter_psi1(&row[centre - 1..centre + 3], cfg));
        for p in 2..=max_p {
            let f = &row[max_p - p..max_p + p];
            let v = if p == 2 && cfg.use_modified_p2 {
                indicator_p2_modified_with(table, f, cfg)
            } else {
                indicator_with(table, p, f, cfg)
            };
            values[p - 1] = values[p - 1].min(v);
        }
    }
    let smooth = |p: usize| values[p - 1] >= cfg.select_threshold;
    let selected_p = if cfg.nested_selection {
        // S_q is contained in S_p for q < p
        (2..=max_p).take_while(|&p| smooth(p)).last().unwrap_or(0)
    } else {
        (2..=max_p).rev().find(|&p| smooth(p)).unwrap_or(0)
    };
    SmoothnessReport { values, max_p, selected_p }
}

/// Public entry point of the stencil selection; see [`select_stencil_with`].
pub fn select_stencil(max_p: usize, window: &[f64], m: usize, cfg: &IndicatorConfig) -> Result<SmoothnessReport> {
    if !(2..=MAX_P).contains(&max_p) {
        return Err(Error::InvalidArgument(format!("stencil selection needs 2 <= P <= {MAX_P}, got {max_p}")));
    }
    if m == 0 || window.len() != 2 * max_p * m {
        return Err(Error::InvalidArgument(format!(
            "window must hold {} states of {m} components, got {} values",
            2 * max_p,
            window.len()
        )));
    }
    cfg.validate()?;
    Ok(select_stencil_with(StencilTable::for_max_p(max_p)?, max_p, window, m, cfg))
}
