use crate::models::ConservationLaw;
use crate::{Error, Result};

/// Boundary treatment through ghost cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    /// Zeroth-order extrapolation of the adjacent interior cell.
    Outflow,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Outflow => "outflow",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "outflow" | "free" => Ok(Boundary::Outflow),
            other => Err(Error::InvalidArgument(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// Uniform 1D grid of point values at cell centres `x_i = x0 + (i + 1/2) dx`,
/// stored cell-major with `halo` ghost cells on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n: usize,
    m: usize,
    halo: usize,
    x0: f64,
    dx: f64,
    bc: Boundary,
    pub t: f64,
    data: Vec<f64>,
}

impl Grid1D {
    pub fn new(n: usize, (x0, x1): (f64, f64), m: usize, halo: usize, bc: Boundary) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("grid needs at least one cell and one component".into()));
        }
        if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid interval [{x0}, {x1}]")));
        }
        if bc == Boundary::Periodic && halo > n {
            return Err(Error::InvalidArgument(format!("periodic halo {halo} exceeds {n} cells")));
        }
        Ok(Self { n, m, halo, x0, dx: (x1 - x0) / n as f64, bc, t: 0.0, data: vec![0.0; (n + 2 * halo) * m] })
    }

    /// Grid with interior values `init(x, out)` and filled ghosts.
    pub fn from_fn(
        n: usize,
        interval: (f64, f64),
        m: usize,
        halo: usize,
        bc: Boundary,
        init: impl Fn(f64, &mut [f64]),
    ) -> Result<Self> {
        let mut g = Self::new(n, interval, m, halo, bc)?;
        for i in 0..n {
            let x = g.x(i);
            init(x, g.cell_mut(i));
        }
        g.fill_ghosts();
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> usize {
        self.m
    }

    pub fn halo(&self) -> usize {
        self.halo
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x0 + self.dx * self.n as f64
    }

    pub fn bc(&self) -> Boundary {
        self.bc
    }

    /// Centre of interior cell `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        let s = (self.halo + i) * self.m;
        &self.data[s..s + self.m]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        let s = (self.halo + i) * self.m;
        &mut self.data[s..s + self.m]
    }

    pub fn interior(&self) -> &[f64] {
        &self.data[self.halo * self.m..(self.halo + self.n) * self.m]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let (a, b) = (self.halo * self.m, (self.halo + self.n) * self.m);
        &mut self.data[a..b]
    }

    /// All stored values including ghosts.
    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// Component `c` of every interior cell.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.interior().chunks(self.m).map(|u| u[c]).collect()
    }

    /// Copy of this grid with a different ghost width.
    pub fn with_halo(&self, halo: usize) -> Result<Self> {
        let mut g = Self::new(self.n, (self.x0, self.x1()), self.m, halo, self.bc)?;
        g.dx = self.dx;
        g.t = self.t;
        g.interior_mut().copy_from_slice(self.interior());
        g.fill_ghosts();
        Ok(g)
    }

    pub fn fill_ghosts(&mut self) {
        let (n, h, m) = (self.n, self.halo, self.m);
        for k in 0..h {
            let (left_src, right_src) = match self.bc {
                Boundary::Periodic => (n - h + k, k),
                Boundary::Outflow => (0, n - 1),
            };
            self.data.copy_within((h + left_src) * m..(h + left_src + 1) * m, k * m);
            self.data.copy_within((h + right_src) * m..(h + right_src + 1) * m, (h + n + k) * m);
        }
    }

    /// `sum_i u_i dx` per component.
    pub fn integral(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.m];
        for u in self.interior().chunks(self.m) {
            for (a, v) in s.iter_mut().zip(u) {
                *a += v;
            }
        }
        s.iter().map(|v| v * self.dx).collect()
    }

    /// Fails with the first interior cell whose state is not admissible.
    pub fn check_states<L: ConservationLaw + ?Sized>(&self, model: &L) -> Result<()> {
        for i in 0..self.n {
            let u = self.cell(i);
            if !model.admissible(u) {
                model.check_state(u, &format!("cell {i} (x={:.6})", self.x(i)))?;
                return Err(Error::InadmissibleState {
                    location: format!("cell {i} (x={:.6})", self.x(i)),
                    reason: "state rejected by the model".into(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghosts_follow_the_boundary_condition() {
        let g = Grid1D::from_fn(5, (0.0, 1.0), 2, 3, Boundary::Periodic, |x, u| {
            u[0] = x;
            u[1] = -x;
        })
        .unwrap();
        let raw = g.raw();
        // left ghosts are cells 2, 3, 4; right ghosts are cells 0, 1, 2
        for (k, src) in [2usize, 3, 4].iter().enumerate() {
            assert_eq!(&raw[k * 2..k * 2 + 2], g.cell(*src));
        }
        for (k, src) in [0usize, 1, 2].iter().enumerate() {
            assert_eq!(&raw[(8 + k) * 2..(8 + k) * 2 + 2], g.cell(*src));
        }
        let o = Grid1D::from_fn(4, (0.0, 1.0), 1, 2, Boundary::Outflow, |x, u| u[0] = x).unwrap();
        assert_eq!(o.raw(), &[0.125, 0.125, 0.125, 0.375, 0.625, 0.875, 0.875, 0.875]);
    }

    #[test]
    fn geometry_and_errors() {
        let g = Grid1D::new(4, (0.0, 2.0), 1, 1, Boundary::Outflow).unwrap();
        assert_eq!((g.dx(), g.x(0), g.x(3), g.x1()), (0.5, 0.25, 1.75, 2.0));
        assert!(Grid1D::new(0, (0.0, 1.0), 1, 1, Boundary::Outflow).is_err());
        assert!(Grid1D::new(2, (1.0, 1.0), 1, 1, Boundary::Outflow).is_err());
        assert!(Grid1D::new(2, (0.0, 1.0), 1, 3, Boundary::Periodic).is_err());
        assert_eq!("free".parse::<Boundary>().unwrap(), Boundary::Outflow);
        assert!("reflective".parse::<Boundary>().is_err());
    }

    #[test]
    fn halo_change_keeps_interior() {
        let g = Grid1D::from_fn(6, (0.0, 1.0), 1, 1, Boundary::Periodic, |x, u| u[0] = x * x).unwrap();
        let h = g.with_halo(4).unwrap();
        assert_eq!(g.interior(), h.interior());
        assert_eq!(h.halo(), 4);
        assert_eq!(h.raw()[0], g.cell(2)[0]);
        assert!((g.integral()[0] - h.integral()[0]).abs() < 1e-15);
    }
}
