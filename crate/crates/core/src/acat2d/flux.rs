use crate::catcore::{derivative_sum, interpolation_sum, inv_factorials};
use crate::diffops::StencilTable;
use crate::models::{Axis, ConservationLaw};
use crate::{Error, Result, MAX_P};

/// Workspace of the 2D CAT recursion on blocks of up to `(2 max_p)^2` states.
#[derive(Debug, Clone)]
pub struct BlockScratch {
    max_p: usize,
    m: usize,
    scaled_u: Vec<f64>,
    scaled_f: Vec<f64>,
    scaled_g: Vec<f64>,
    node_f: Vec<f64>,
    node_g: Vec<f64>,
    state: Vec<f64>,
    taylor: Vec<f64>,
    inv_fact: [f64; 2 * MAX_P + 1],
}

impl BlockScratch {
    pub fn new(max_p: usize, m: usize) -> Self {
        let n = 2 * max_p;
        let big = n * n * n * m;
        Self {
            max_p,
            m,
            scaled_u: vec![0.0; big],
            scaled_f: vec![0.0; big],
            scaled_g: vec![0.0; big],
            node_f: vec![0.0; big],
            node_g: vec![0.0; big],
            state: vec![0.0; m],
            taylor: vec![0.0; n * n],
            inv_fact: inv_factorials(),
        }
    }

    pub fn max_p(&self) -> usize {
        self.max_p
    }
}

/// CAT2p flux through the face of a `(2p) x (2p)` block.
///
/// `block[(b * 2p + a) * m + c]` holds the state at `x`-offset `a - p + 1` and
/// `y`-offset `b - p + 1` from the cell `i`. For `Axis::X` the flux is
/// `F_{i + e1/2}`, for `Axis::Y` it is `G_{i + e2/2}`. Time derivatives of
/// both fluxes are carried on the whole block up to level `2p - 1`; the last
/// level is evaluated only on the central row (column) it feeds.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cat_flux_2d_into<L: ConservationLaw + ?Sized>(
    table: &StencilTable,
    p: usize,
    axis: Axis,
    block: &[f64],
    model: &L,
    (dx, dy): (f64, f64),
    dt: f64,
    scratch: &mut BlockScratch,
    out: &mut [f64],
) -> std::result::Result<(), usize> {
    let m = model.components();
    let n = 2 * p;
    let nn = n * n;
    debug_assert!(p >= 1 && p <= scratch.max_p && scratch.m == m);
    debug_assert_eq!(block.len(), nn * m);
    let (lx, ly) = (dt / dx, dt / dy);
    let center = p - 1;
    let BlockScratch { scaled_u, scaled_f, scaled_g, node_f, node_g, state, taylor, inv_fact, .. } = scratch;
    for r in 0..n {
        let offset = r as f64 - (p as f64 - 1.0);
        let mut pw = 1.0;
        for l in 0..n {
            taylor[r * n + l] = pw * inv_fact[l];
            pw *= offset;
        }
    }
    // node index of the `s`-th point on the central line
    let line_node = |s: usize| match axis {
        Axis::X => center * n + s,
        Axis::Y => s * n + center,
    };

    for node in 0..nn {
        let u = &block[node * m..(node + 1) * m];
        model.flux(Axis::X, u, &mut scaled_f[node * m..(node + 1) * m]);
        model.flux(Axis::Y, u, &mut scaled_g[node * m..(node + 1) * m]);
    }

    for k in 2..=n {
        let last = k == n;
        let count = if last { n } else { nn };
        let node_at = |q: usize| if last { line_node(q) } else { q };
        let prev = (k - 2) * nn * m;
        let lvl = (k - 2) * nn * m;
        for q in 0..count {
            let node = node_at(q);
            let (b, a) = (node / n, node % n);
            let wa = table.first_derivative_at_node(p, a);
            let wb = table.first_derivative_at_node(p, b);
            for c in 0..m {
                let ux = derivative_sum(wa, |s| scaled_f[prev + (b * n + s) * m + c], center);
                let uy = derivative_sum(wb, |s| scaled_g[prev + (s * n + a) * m + c], center);
                scaled_u[lvl + node * m + c] = -lx * ux - ly * uy;
            }
        }
        for r in 0..n {
            for q in 0..count {
                let node = node_at(q);
                let dst = (r * nn + node) * m;
                if r == center {
                    node_f[dst..dst + m].copy_from_slice(&scaled_f[node * m..(node + 1) * m]);
                    node_g[dst..dst + m].copy_from_slice(&scaled_g[node * m..(node + 1) * m]);
                    continue;
                }
                for c in 0..m {
                    let mut v = block[node * m + c];
                    for l in 1..k {
                        v += taylor[r * n + l] * scaled_u[(l - 1) * nn * m + node * m + c];
                    }
                    state[c] = v;
                }
                if !model.admissible(state) {
                    return Err(k);
                }
                if !last || axis == Axis::X {
                    model.flux(Axis::X, state, &mut node_f[dst..dst + m]);
                }
                if !last || axis == Axis::Y {
                    model.flux(Axis::Y, state, &mut node_g[dst..dst + m]);
                }
            }
        }
        let w = table.derivative_at_zero(p, k - 1);
        let cur = (k - 1) * nn * m;
        for q in 0..count {
            let node = node_at(q);
            for c in 0..m {
                let at = |r: usize| (r * nn + node) * m + c;
                if !last || axis == Axis::X {
                    let v = derivative_sum(w, |r| node_f[at(r)], center);
                    if !v.is_finite() {
                        return Err(k);
                    }
                    scaled_f[cur + node * m + c] = v;
                }
                if !last || axis == Axis::Y {
                    let v = derivative_sum(w, |r| node_g[at(r)], center);
                    if !v.is_finite() {
                        return Err(k);
                    }
                    scaled_g[cur + node * m + c] = v;
                }
            }
        }
    }

    let mid = table.midpoint(p);
    let src: &[f64] = if axis == Axis::X { scaled_f } else { scaled_g };
    for c in 0..m {
        let mut acc = interpolation_sum(mid, |s| src[line_node(s) * m + c], center);
        for k in 2..=n {
            let base = (k - 1) * nn * m;
            acc += inv_fact[k] * interpolation_sum(mid, |s| src[base + line_node(s) * m + c], center);
        }
        if !acc.is_finite() {
            return Err(n);
        }
        out[c] = acc;
    }
    Ok(())
}

fn cat_flux_2d<L: ConservationLaw + ?Sized>(
    axis: Axis,
    p: usize,
    block: &[f64],
    model: &L,
    dx: f64,
    dy: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let m = model.components();
    if p == 0 || p > MAX_P {
        return Err(Error::InvalidArgument(format!("half-width must lie in 1..={MAX_P}, got {p}")));
    }
    if block.len() != 4 * p * p * m {
        return Err(Error::InvalidArgument(format!(
            "block must hold {} states of {m} components, got {} values",
            4 * p * p,
            block.len()
        )));
    }
    if !(dx > 0.0 && dy > 0.0 && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dx={dx}, dy={dy} and dt={dt} must be positive")));
    }
    for (j, u) in block.chunks(m).enumerate() {
        model.check_state(u, &format!("block state {j}"))?;
    }
    let table = StencilTable::for_max_p(p)?;
    let mut scratch = BlockScratch::new(p, m);
    let mut out = vec![0.0; m];
    cat_flux_2d_into(table, p, axis, block, model, (dx, dy), dt, &mut scratch, &mut out)
        .map_err(|level| Error::StepFailure { interface: 0, level })?;
    Ok(out)
}

/// `F^p_{i + e1/2}` from a square block of `(2p)^2` states (row-major, `x` fastest).
pub fn cat_flux_2d_x<L: ConservationLaw + ?Sized>(
    p: usize,
    block: &[f64],
    model: &L,
    dx: f64,
    dy: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    cat_flux_2d(Axis::X, p, block, model, dx, dy, dt)
}

/// `G^p_{i + e2/2}` from a square block of `(2p)^2` states (row-major, `x` fastest).
pub fn cat_flux_2d_y<L: ConservationLaw + ?Sized>(
    p: usize,
    block: &[f64],
    model: &L,
    dx: f64,
    dy: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    cat_flux_2d(Axis::Y, p, block, model, dx, dy, dt)
}

/// CAT2 fluxes `(F*, G*)` in closed form from the 2x2 block `u_i, u_{i+e1}, u_{i+e2}, u_{i+1}`.
pub fn cat2_flux_2d_closed_form<L: ConservationLaw + ?Sized>(
    block: &[f64],
    model: &L,
    dx: f64,
    dy: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = model.components();
    if block.len() != 4 * m {
        return Err(Error::InvalidArgument(format!("closed form needs 4 states, got {} values", block.len())));
    }
    let st = |k: usize| &block[k * m..(k + 1) * m];
    let (mut f, mut g) = (vec![vec![0.0; m]; 4], vec![vec![0.0; m]; 4]);
    for k in 0..4 {
        model.flux_x(st(k), &mut f[k]);
        model.flux_y(st(k), &mut g[k]);
    }
    // nodes: 0 = i, 1 = i+e1, 2 = i+e2, 3 = i+1
    let ut = |k: usize, c: usize| match k {
        0 => -(f[1][c] - f[0][c]) / dx - (g[2][c] - g[0][c]) / dy,
        1 => -(f[1][c] - f[0][c]) / dx - (g[3][c] - g[1][c]) / dy,
        _ => -(f[3][c] - f[2][c]) / dx - (g[2][c] - g[0][c]) / dy,
    };
    let advanced = |k: usize| -> Result<Vec<f64>> {
        let s: Vec<f64> = (0..m).map(|c| st(k)[c] + dt * ut(k, c)).collect();
        model.check_state(&s, "predicted state")?;
        Ok(s)
    };
    let mut tmp = vec![0.0; m];
    let (mut fs, mut gs) = (vec![0.0; m], vec![0.0; m]);
    for k in [0, 1] {
        model.flux_x(&advanced(k)?, &mut tmp);
        for c in 0..m {
            fs[c] += tmp[c];
        }
    }
    for k in [0, 2] {
        model.flux_y(&advanced(k)?, &mut tmp);
        for c in 0..m {
            gs[c] += tmp[c];
        }
    }
    for c in 0..m {
        fs[c] = 0.25 * (fs[c] + f[0][c] + f[1][c]);
        gs[c] = 0.25 * (gs[c] + g[0][c] + g[2][c]);
    }
    Ok((fs, gs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::cat_flux;
    use crate::models::{Burgers, Euler2d, EulerState, LinearAdvection};
    use proptest::prelude::*;

    fn euler_block(p: usize, seed: f64) -> Vec<f64> {
        let e = Euler2d::default();
        let n = 2 * p;
        (0..n * n)
            .flat_map(|k| {
                let (a, b) = ((k % n) as f64, (k / n) as f64);
                let s = EulerState::new_2d(
                    1.0 + 0.1 * (seed + 0.3 * a - 0.2 * b).sin(),
                    0.2 * (0.5 * a + seed).cos(),
                    -0.1 * (0.4 * b).sin(),
                    1.0 + 0.05 * (a * b + seed).cos(),
                );
                s.to_conserved_2d(e.gamma)
            })
            .collect()
    }

    #[test]
    fn constant_block_gives_physical_fluxes() {
        let e = Euler2d::default();
        let u = EulerState::new_2d(0.9, 0.3, -0.4, 1.7).to_conserved_2d(e.gamma);
        let (mut f, mut g) = ([0.0; 4], [0.0; 4]);
        e.flux_x(&u, &mut f);
        e.flux_y(&u, &mut g);
        for p in 1..=3 {
            let block: Vec<f64> = (0..4 * p * p).flat_map(|_| u).collect();
            assert_eq!(cat_flux_2d_x(p, &block, &e, 0.01, 0.02, 0.003).unwrap(), f.to_vec());
            assert_eq!(cat_flux_2d_y(p, &block, &e, 0.01, 0.02, 0.003).unwrap(), g.to_vec());
        }
    }

    #[test]
    fn p1_matches_closed_form() {
        let e = Euler2d::default();
        for seed in [0.0, 0.7, 2.1] {
            let block = euler_block(1, seed);
            let (dx, dy, dt) = (0.05, 0.04, 0.01);
            let (fc, gc) = cat2_flux_2d_closed_form(&block, &e, dx, dy, dt).unwrap();
            let f = cat_flux_2d_x(1, &block, &e, dx, dy, dt).unwrap();
            let g = cat_flux_2d_y(1, &block, &e, dx, dy, dt).unwrap();
            for c in 0..4 {
                assert!((f[c] - fc[c]).abs() < 1e-13, "{f:?} {fc:?}");
                assert!((g[c] - gc[c]).abs() < 1e-13, "{g:?} {gc:?}");
            }
        }
    }

    #[test]
    fn x_only_block_reduces_to_1d() {
        let adv = LinearAdvection::new_2d(0.7, -1.3);
        for p in 1..=3 {
            let n = 2 * p;
            let line: Vec<f64> = (0..n).map(|a| (0.9 * a as f64).sin()).collect();
            let block: Vec<f64> = (0..n * n).map(|k| line[k % n]).collect();
            let f2 = cat_flux_2d_x(p, &block, &adv, 0.1, 0.1, 0.03).unwrap();
            let f1 = cat_flux(p, &line, &LinearAdvection::new(0.7), 0.1, 0.03).unwrap();
            assert_eq!(f2, f1);
            // every y-face of the column sees the same data
            let g = cat_flux_2d_y(p, &block, &adv, 0.1, 0.1, 0.03).unwrap();
            let mut shifted = block.clone();
            shifted.rotate_left(n);
            assert_eq!(cat_flux_2d_y(p, &shifted, &adv, 0.1, 0.1, 0.03).unwrap(), g);
        }
        let n = 4;
        let line: Vec<f64> = (0..n).map(|a| 0.5 + 0.2 * a as f64).collect();
        let block: Vec<f64> = (0..n * n).map(|k| line[k % n]).collect();
        let f2 = cat_flux_2d_x(2, &block, &Burgers, 0.1, 0.1, 0.03);
        // Burgers is 1D: its y flux vanishes and the reduction still holds
        assert_eq!(f2.unwrap(), cat_flux(2, &line, &Burgers, 0.1, 0.03).unwrap());
    }

    #[test]
    fn transposed_block_swaps_fluxes() {
        let e = Euler2d::default();
        let p = 2;
        let n = 2 * p;
        let block = euler_block(p, 1.3);
        let mut tr = vec![0.0; block.len()];
        for b in 0..n {
            for a in 0..n {
                let (src, dst) = ((b * n + a) * 4, (a * n + b) * 4);
                tr[dst..dst + 4].copy_from_slice(&block[src..src + 4]);
                tr.swap(dst + 1, dst + 2);
            }
        }
        let mut f = cat_flux_2d_x(p, &block, &e, 0.02, 0.02, 0.004).unwrap();
        let g = cat_flux_2d_y(p, &tr, &e, 0.02, 0.02, 0.004).unwrap();
        f.swap(1, 2);
        assert_eq!(f, g);
    }

    #[test]
    fn argument_checks() {
        let e = Euler2d::default();
        assert!(cat_flux_2d_x(2, &euler_block(1, 0.0), &e, 0.1, 0.1, 0.1).is_err());
        assert!(cat_flux_2d_x(1, &euler_block(1, 0.0), &e, 0.0, 0.1, 0.1).is_err());
        let mut bad = euler_block(1, 0.0);
        bad[0] = -1.0;
        assert!(matches!(cat_flux_2d_x(1, &bad, &e, 0.1, 0.1, 0.1), Err(Error::InadmissibleState { .. })));
    }

    proptest! {
        #[test]
        fn linear_p1_closed_form_oracle(
            vals in prop::collection::vec(-1.0f64..1.0, 4),
            a in -2.0f64..2.0,
            b in -2.0f64..2.0,
            dt in 0.001f64..0.05,
        ) {
            let adv = LinearAdvection::new_2d(a, b);
            let (fc, gc) = cat2_flux_2d_closed_form(&vals, &adv, 0.1, 0.07, dt).unwrap();
            let f = cat_flux_2d_x(1, &vals, &adv, 0.1, 0.07, dt).unwrap();
            let g = cat_flux_2d_y(1, &vals, &adv, 0.1, 0.07, dt).unwrap();
            prop_assert!((f[0] - fc[0]).abs() < 1e-13);
            prop_assert!((g[0] - gc[0]).abs() < 1e-13);
        }
    }
}
