//! Centered and interpolatory finite-difference formulas on uniform stencils.
//!
//! Weights are generated with Fornberg's recursion in exact rational
//! arithmetic and converted to `f64` once. A [`StencilTable`] caches every
//! weight vector the Taylor recursions need for half-widths `1..=max_p`.
//!
//! Index conventions (all offsets are in units of the mesh step):
//!
//! - centered `(p, k)`: nodes `-p..=p`, `2p + 1` weights, evaluated at `0`;
//! - interpolatory `(p, k, q)`: nodes `-p+1..=p`, `2p` weights, evaluated at `q`;
//! - conservative `(p, k)`: nodes `-p+1..=p`, the `2p` weights whose difference
//!   between neighbouring stencils is the centered `(p, k + 1)` formula.
//!
//! Conservative interface fluxes need the last kind: `A_i - A_{i-1} = h D^{k+1}_i`
//! holds for Lagrange midpoint weights only when `k >= 2p - 2`, while the
//! conservative weights satisfy it for every `k`. For `p = 1` both coincide.

use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result, DEFAULT_MAX_P, MAX_P};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    Centered,
    Interpolatory,
    Conservative,
}

/// Weights of one numerical differentiation (or interpolation) formula.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffFormula {
    pub kind: FormulaKind,
    pub half_width: usize,
    pub deriv_order: usize,
    /// Evaluation offset `q`; `None` for centered formulas (evaluated at 0).
    pub eval_offset: Option<Rational>,
    pub exact: Vec<Rational>,
    pub coeffs: Vec<f64>,
    /// Power of the mesh step dividing the weighted sum.
    pub scale_power: i32,
}

impl DiffFormula {
    pub fn stencil_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Offset of the first stencil node relative to the base index.
    pub fn first_node(&self) -> i64 {
        match self.kind {
            FormulaKind::Centered => -(self.half_width as i64),
            FormulaKind::Interpolatory | FormulaKind::Conservative => 1 - self.half_width as i64,
        }
    }

    pub fn apply(&self, samples: &[f64], h: f64) -> Result<f64> {
        apply(self, samples, h)
    }
}

/// Fornberg weights for derivatives `0..=max_deriv` at `z` from `nodes`.
///
/// Returns `w[k][j]`, the weight of `nodes[j]` in the `k`-th derivative.
pub fn fornberg_weights(z: Rational, nodes: &[Rational], max_deriv: usize) -> Vec<Vec<Rational>> {
    let n = nodes.len();
    let mut c = vec![vec![Rational::zero(); n]; max_deriv + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = Rational::one();
    let mut c4 = nodes[0] - z;
    c[0][0] = Rational::one();
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = Rational::one();
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = Rational::from_integer(k as i128);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = Rational::from_integer(k as i128);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 || p > MAX_P {
        return Err(Error::InvalidArgument(format!("half-width p={p} outside 1..={MAX_P}")));
    }
    Ok(())
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn node_range(first: i64, len: usize) -> Vec<Rational> {
    (0..len as i64).map(|j| Rational::from_integer((first + j) as i128)).collect()
}

/// Centered `(2p+1)`-point formula for the `k`-th derivative at the center.
pub fn centered_coeffs(p: usize, k: usize) -> Result<DiffFormula> {
    check_p(p)?;
    if k > 2 * p {
        return Err(Error::InvalidArgument(format!("derivative order k={k} outside 0..={}", 2 * p)));
    }
    let nodes = node_range(-(p as i64), 2 * p + 1);
    let w = fornberg_weights(Rational::zero(), &nodes, k);
    let exact = w[k].clone();
    Ok(DiffFormula {
        kind: FormulaKind::Centered,
        half_width: p,
        deriv_order: k,
        eval_offset: None,
        coeffs: exact.iter().map(to_f64).collect(),
        exact,
        scale_power: k as i32,
    })
}

/// Checks `q` is a stencil node offset or the midpoint `1/2`.
fn check_offset(p: usize, q: Rational) -> Result<()> {
    let half = Rational::new(1, 2);
    let ok = q == half || (q.is_integer() && q.to_integer() >= 1 - p as i128 && q.to_integer() <= p as i128);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("offset q={q} must be 1/2 or an integer in {}..={p}", 1 - p as i64)))
    }
}

/// Interpolatory `2p`-point formula for the `k`-th derivative at offset `q`.
pub fn interpolatory_coeffs(p: usize, k: usize, q: Rational) -> Result<DiffFormula> {
    check_p(p)?;
    if k >= 2 * p {
        return Err(Error::InvalidArgument(format!("derivative order k={k} outside 0..={}", 2 * p - 1)));
    }
    check_offset(p, q)?;
    let nodes = node_range(1 - p as i64, 2 * p);
    let w = fornberg_weights(q, &nodes, k);
    let exact = w[k].clone();
    Ok(DiffFormula {
        kind: FormulaKind::Interpolatory,
        half_width: p,
        deriv_order: k,
        eval_offset: Some(q),
        coeffs: exact.iter().map(to_f64).collect(),
        exact,
        scale_power: k as i32,
    })
}

/// Midpoint weights `w` on nodes `-p+1..=p` with `w_i - w_{i-1} = delta^{k+1}`.
///
/// Evaluated at the interface `1/2`, they turn the centered `(p, k+1)` formula
/// into a difference of interface values. `k = 0` gives the flux weights of
/// conservative schemes, e.g. `[-1/12, 7/12, 7/12, -1/12]` for `p = 2`.
pub fn conservative_midpoint_coeffs(p: usize, k: usize) -> Result<DiffFormula> {
    check_p(p)?;
    if k >= 2 * p {
        return Err(Error::InvalidArgument(format!("derivative order k={k} outside 0..={}", 2 * p - 1)));
    }
    let delta = centered_coeffs(p, k + 1)?.exact;
    let mut acc = Rational::zero();
    let exact: Vec<Rational> = delta[..2 * p]
        .iter()
        .map(|d| {
            acc -= *d;
            acc
        })
        .collect();
    Ok(DiffFormula {
        kind: FormulaKind::Conservative,
        half_width: p,
        deriv_order: k,
        eval_offset: Some(Rational::new(1, 2)),
        coeffs: exact.iter().map(to_f64).collect(),
        exact,
        scale_power: k as i32,
    })
}

/// `(1/h^k) * sum_j coeff_j * sample_j`.
pub fn apply(formula: &DiffFormula, samples: &[f64], h: f64) -> Result<f64> {
    if samples.len() != formula.coeffs.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} samples, got {}",
            formula.coeffs.len(),
            samples.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("mesh step h={h} must be positive")));
    }
    let sum: f64 = formula.coeffs.iter().zip(samples).map(|(c, s)| c * s).sum();
    Ok(sum / h.powi(formula.scale_power))
}

/// Classical undivided difference of order `2p - 1` over `2p` samples, i.e.
/// `h^{2p-1}` times the `(2p-1)`-th derivative formula (no factorial).
pub fn undivided_difference(p: usize, samples: &[f64]) -> Result<f64> {
    check_p(p)?;
    if samples.len() != 2 * p {
        return Err(Error::InvalidArgument(format!("expected {} samples, got {}", 2 * p, samples.len())));
    }
    let table = StencilTable::for_max_p(p)?;
    Ok(dot(table.undivided(p), samples))
}

#[inline]
pub(crate) fn dot(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Per-half-width weights used by the Taylor recursions.
#[derive(Debug, Clone)]
struct WidthTable {
    /// `node_first[j][r]`: first derivative at node `j` (local index `0..2p`).
    node_first: Vec<Vec<f64>>,
    /// `at_zero[k][r]`: `k`-th derivative at offset 0, `k = 0..2p`.
    at_zero: Vec<Vec<f64>>,
    /// Conservative interpolation to the midpoint `1/2`.
    midpoint: Vec<f64>,
    /// Order `2p-1` difference weights (offset independent).
    undivided: Vec<f64>,
    /// `centered[k][j]`, `k = 0..=2p`.
    centered: Vec<Vec<f64>>,
}

/// Immutable cache of all weights for half-widths `1..=max_p`.
#[derive(Debug, Clone)]
pub struct StencilTable {
    max_p: usize,
    widths: Vec<WidthTable>,
}

impl StencilTable {
    pub fn new(max_p: usize) -> Result<Self> {
        check_p(max_p)?;
        let widths = (1..=max_p).map(build_width).collect::<Result<Vec<_>>>()?;
        Ok(Self { max_p, widths })
    }

    /// Shared table covering at least half-width `p`.
    pub fn for_max_p(p: usize) -> Result<&'static StencilTable> {
        static DEFAULT: OnceLock<StencilTable> = OnceLock::new();
        static EXTENDED: OnceLock<StencilTable> = OnceLock::new();
        check_p(p)?;
        if p <= DEFAULT_MAX_P {
            Ok(DEFAULT.get_or_init(|| StencilTable::new(DEFAULT_MAX_P).expect("default table")))
        } else {
            Ok(EXTENDED.get_or_init(|| StencilTable::new(MAX_P).expect("extended table")))
        }
    }

    pub fn max_p(&self) -> usize {
        self.max_p
    }

    fn width(&self, p: usize) -> &WidthTable {
        &self.widths[p - 1]
    }

    /// First-derivative weights evaluated at local node `j` (`0..2p`, i.e. offset `j - p + 1`).
    pub fn first_derivative_at_node(&self, p: usize, j: usize) -> &[f64] {
        &self.width(p).node_first[j]
    }

    /// `k`-th derivative weights at offset 0 on nodes `-p+1..=p`.
    pub fn derivative_at_zero(&self, p: usize, k: usize) -> &[f64] {
        &self.width(p).at_zero[k]
    }

    pub fn midpoint(&self, p: usize) -> &[f64] {
        &self.width(p).midpoint
    }

    pub fn undivided(&self, p: usize) -> &[f64] {
        &self.width(p).undivided
    }

    pub fn centered(&self, p: usize, k: usize) -> &[f64] {
        &self.width(p).centered[k]
    }
}

fn build_width(p: usize) -> Result<WidthTable> {
    let nodes = node_range(1 - p as i64, 2 * p);
    let top = 2 * p - 1;
    let node_first = (0..2 * p)
        .map(|j| {
            let q = nodes[j];
            fornberg_weights(q, &nodes, 1)[1].iter().map(to_f64).collect()
        })
        .collect();
    let zero = fornberg_weights(Rational::zero(), &nodes, top);
    let at_zero = zero.iter().map(|w| w.iter().map(to_f64).collect()).collect();
    let half = fornberg_weights(Rational::new(1, 2), &nodes, top);
    let midpoint = conservative_midpoint_coeffs(p, 0)?.coeffs;
    let undivided = half[top].iter().map(to_f64).collect();
    let centered = (0..=2 * p).map(|k| centered_coeffs(p, k).map(|f| f.coeffs)).collect::<Result<Vec<_>>>()?;
    Ok(WidthTable { node_first, at_zero, midpoint, undivided, centered })
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Moment-system (Vandermonde) solve over the rationals: an independent
    //! route to the same weights.
    use super::Rational;
    use num_traits::{One, Zero};

    /// Weights `c` with `sum_j c_j (x_j - z)^m / m! = [m == k]` for `m < n`.
    pub fn vandermonde_weights(z: Rational, nodes: &[Rational], k: usize) -> Vec<Rational> {
        let n = nodes.len();
        let mut a = vec![vec![Rational::zero(); n + 1]; n];
        for (m, row) in a.iter_mut().enumerate() {
            let mut fact = Rational::one();
            for i in 1..=m {
                fact *= Rational::from_integer(i as i128);
            }
            for (j, x) in nodes.iter().enumerate() {
                let mut pw = Rational::one();
                for _ in 0..m {
                    pw *= *x - z;
                }
                row[j] = pw / fact;
            }
            row[n] = if m == k { Rational::one() } else { Rational::zero() };
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular moment system");
            a.swap(col, piv);
            let inv = Rational::one() / a[col][col];
            for v in a[col].iter_mut() {
                *v *= inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for c in 0..=n {
                        let t = a[col][c];
                        a[r][c] -= f * t;
                    }
                }
            }
        }
        a.iter().map(|row| row[n]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::vandermonde_weights;
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|&n| Rational::from_integer(n)).collect()
    }

    #[test]
    fn centered_p1_matches_moment_oracle() {
        let nodes = ints(&[-1, 0, 1]);
        assert_eq!(vandermonde_weights(Rational::zero(), &nodes, 1), vec![r(-1, 2), r(0, 1), r(1, 2)]);
        assert_eq!(vandermonde_weights(Rational::zero(), &nodes, 2), ints(&[1, -2, 1]));
        assert_eq!(centered_coeffs(1, 1).unwrap().exact, vec![r(-1, 2), r(0, 1), r(1, 2)]);
        assert_eq!(centered_coeffs(1, 2).unwrap().exact, ints(&[1, -2, 1]));
        assert_eq!(centered_coeffs(1, 0).unwrap().coeffs, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn interpolatory_examples() {
        let f = interpolatory_coeffs(1, 0, r(1, 2)).unwrap();
        assert_eq!(f.coeffs, vec![0.5, 0.5]);
        let f = interpolatory_coeffs(1, 1, Rational::zero()).unwrap();
        assert_eq!(f.coeffs, vec![-1.0, 1.0]);
        let f = interpolatory_coeffs(2, 0, r(1, 2)).unwrap();
        let oracle = vandermonde_weights(r(1, 2), &ints(&[-1, 0, 1, 2]), 0);
        assert_eq!(oracle, vec![r(-1, 16), r(9, 16), r(9, 16), r(-1, 16)]);
        assert_eq!(f.exact, oracle);
    }

    #[test]
    fn fornberg_agrees_with_moment_oracle_everywhere() {
        for p in 1..=4usize {
            let cnodes = node_range(-(p as i64), 2 * p + 1);
            for k in 0..=2 * p {
                let oracle = vandermonde_weights(Rational::zero(), &cnodes, k);
                assert_eq!(centered_coeffs(p, k).unwrap().exact, oracle, "centered p={p} k={k}");
            }
            let inodes = node_range(1 - p as i64, 2 * p);
            let mut offsets: Vec<Rational> = inodes.clone();
            offsets.push(r(1, 2));
            for q in offsets {
                for k in 0..2 * p {
                    let oracle = vandermonde_weights(q, &inodes, k);
                    assert_eq!(interpolatory_coeffs(p, k, q).unwrap().exact, oracle, "p={p} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_arguments_are_rejected() {
        assert!(matches!(centered_coeffs(1, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(centered_coeffs(0, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(interpolatory_coeffs(2, 4, r(1, 2)), Err(Error::InvalidArgument(_))));
        assert!(matches!(interpolatory_coeffs(2, 1, r(1, 3)), Err(Error::InvalidArgument(_))));
        assert!(matches!(interpolatory_coeffs(2, 1, Rational::from_integer(3)), Err(Error::InvalidArgument(_))));
        let f = centered_coeffs(1, 1).unwrap();
        assert!(matches!(apply(&f, &[0.0, 1.0], 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(undivided_difference(2, &[0.0; 3]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn apply_examples() {
        let f = centered_coeffs(1, 1).unwrap();
        assert_eq!(apply(&f, &[0.0, 1.0, 2.0], 1.0).unwrap(), 1.0);
        for h in [1.0, 0.1, 0.37] {
            let f = centered_coeffs(2, 3).unwrap();
            let samples: Vec<f64> = (-2..=2).map(|j| (j as f64 * h).powi(3)).collect();
            assert!((apply(&f, &samples, h).unwrap() - 6.0).abs() < 1e-9, "h={h}");
            let g = interpolatory_coeffs(2, 0, r(1, 2)).unwrap();
            let samples: Vec<f64> = (-1..=2).map(|j| (j as f64 * h).powi(2)).collect();
            assert!((apply(&g, &samples, h).unwrap() - h * h / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn undivided_difference_examples() {
        let quad: Vec<f64> = (0..4).map(|j| 3.0 * (j as f64).powi(2) - 2.0 * j as f64 + 0.5).collect();
        assert!(undivided_difference(2, &quad).unwrap().abs() < 1e-12);
        assert!((undivided_difference(2, &[0.0, 0.0, 0.0, 1.0]).unwrap() - 1.0).abs() < 1e-14);
        let cubic: Vec<f64> = (0..4).map(|j| (j as f64).powi(3)).collect();
        assert!((undivided_difference(2, &cubic).unwrap() - 6.0).abs() < 1e-12);
        assert!((undivided_difference(2, &[0.0, 0.0, 1.0, 1.0]).unwrap() + 2.0).abs() < 1e-14);
    }

    fn interface_difference(a: &[Rational]) -> Vec<Rational> {
        let mut rel = vec![Rational::zero(); a.len() + 1];
        for (j, w) in a.iter().enumerate() {
            rel[j + 1] += *w;
            rel[j] -= *w;
        }
        rel
    }

    #[test]
    fn centered_equals_difference_of_conservative_midpoint_formulas() {
        for p in 1..=4usize {
            for k in 1..=2 * p {
                let d = centered_coeffs(p, k).unwrap();
                let a = conservative_midpoint_coeffs(p, k - 1).unwrap();
                assert_eq!(d.exact, interface_difference(&a.exact), "p={p} k={k}");
                let rel: Vec<f64> = interface_difference(&a.exact).iter().map(to_f64).collect();
                for (x, y) in d.coeffs.iter().zip(&rel) {
                    assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn lagrange_midpoint_formulas_agree_only_for_top_orders() {
        for p in 1..=4usize {
            for k in 0..2 * p {
                let lagrange = interpolatory_coeffs(p, k, r(1, 2)).unwrap().exact;
                let cons = conservative_midpoint_coeffs(p, k).unwrap().exact;
                assert_eq!(lagrange == cons, p == 1 || k + 2 >= 2 * p, "p={p} k={k}");
            }
        }
        let c = conservative_midpoint_coeffs(2, 0).unwrap();
        assert_eq!(c.exact, vec![r(-1, 12), r(7, 12), r(7, 12), r(-1, 12)]);
        assert_eq!(c.first_node(), -1);
        let s: Rational = conservative_midpoint_coeffs(3, 0).unwrap().exact.iter().copied().sum();
        assert_eq!(s, Rational::one());
        assert!(conservative_midpoint_coeffs(2, 4).is_err());
    }

    #[test]
    fn coefficient_sums_and_symmetry() {
        for p in 1..=4usize {
            for k in 0..=2 * p {
                let c = centered_coeffs(p, k).unwrap().exact;
                let s: Rational = c.iter().copied().sum();
                assert_eq!(s, if k == 0 { Rational::one() } else { Rational::zero() });
                let n = c.len();
                for j in 0..n {
                    if k % 2 == 0 {
                        assert_eq!(c[j], c[n - 1 - j]);
                    } else {
                        assert_eq!(c[j], -c[n - 1 - j]);
                    }
                }
            }
            for q in [r(1, 2), Rational::zero(), Rational::from_integer(p as i128)] {
                let s: Rational = interpolatory_coeffs(p, 0, q).unwrap().exact.iter().copied().sum();
                assert_eq!(s, Rational::one());
                for k in 1..2 * p {
                    let s: Rational = interpolatory_coeffs(p, k, q).unwrap().exact.iter().copied().sum();
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn table_supports_max_half_width() {
        let t = StencilTable::new(MAX_P).unwrap();
        assert_eq!(t.max_p(), MAX_P);
        let s: f64 = t.midpoint(MAX_P).iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(StencilTable::new(MAX_P + 1).is_err());
    }

    fn falling_monomial(x: f64, d: u32, k: u32) -> f64 {
        // d^k/dx^k x^d
        if k > d {
            return 0.0;
        }
        let c: f64 = ((d - k + 1)..=d).map(|v| v as f64).product();
        c * x.powi((d - k) as i32)
    }

    proptest! {
        #[test]
        fn centered_formulas_exact_on_polynomials(p in 1usize..=4, kk in 0usize..9, d in 0u32..9) {
            let k = kk % (2 * p + 1);
            let d = d % (2 * p as u32 + 1);
            let f = centered_coeffs(p, k).unwrap();
            let samples: Vec<f64> = (-(p as i32)..=p as i32).map(|j| (j as f64).powi(d as i32)).collect();
            let got = apply(&f, &samples, 1.0).unwrap();
            let want = falling_monomial(0.0, d, k as u32);
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
        }

        #[test]
        fn interpolatory_formulas_exact_on_polynomials(p in 1usize..=4, kk in 0usize..8, d in 0u32..8, qi in 0usize..9) {
            let k = kk % (2 * p);
            let d = d % (2 * p as u32);
            let slots = 2 * p + 1;
            let q = if qi % slots == 2 * p { r(1, 2) } else { Rational::from_integer((qi % slots) as i128 + 1 - p as i128) };
            let f = interpolatory_coeffs(p, k, q).unwrap();
            let samples: Vec<f64> = (1 - p as i32..=p as i32).map(|j| (j as f64).powi(d as i32)).collect();
            let got = apply(&f, &samples, 1.0).unwrap();
            let want = falling_monomial(to_f64(&q), d, k as u32);
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "got {} want {}", got, want);
        }
    }
}
