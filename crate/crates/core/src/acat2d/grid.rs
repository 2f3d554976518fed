use crate::acat1d::Boundary;
use crate::models::ConservationLaw;
use crate::{Error, Result};

/// Uniform Cartesian grid of point values at cell centres, stored row by row
/// (`x` fastest, then `y`) with `halo` ghost layers on every side.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    m: usize,
    halo: usize,
    origin: (f64, f64),
    dx: f64,
    dy: f64,
    bc: (Boundary, Boundary),
    pub t: f64,
    data: Vec<f64>,
}

impl Grid2D {
    pub fn new(
        (nx, ny): (usize, usize),
        (x0, x1): (f64, f64),
        (y0, y1): (f64, f64),
        m: usize,
        halo: usize,
        bc: (Boundary, Boundary),
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || m == 0 {
            return Err(Error::InvalidArgument("2D grid needs cells along both axes and a component".into()));
        }
        for (a, b) in [(x0, x1), (y0, y1)] {
            if !(b > a) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidArgument(format!("invalid interval [{a}, {b}]")));
            }
        }
        if (bc.0 == Boundary::Periodic && halo > nx) || (bc.1 == Boundary::Periodic && halo > ny) {
            return Err(Error::InvalidArgument(format!("periodic halo {halo} exceeds the grid size")));
        }
        let len = (nx + 2 * halo) * (ny + 2 * halo) * m;
        Ok(Self {
            nx,
            ny,
            m,
            halo,
            origin: (x0, y0),
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
            bc,
            t: 0.0,
            data: vec![0.0; len],
        })
    }

    /// Grid with interior values `init(x, y, out)` and filled ghosts.
    pub fn from_fn(
        cells: (usize, usize),
        xr: (f64, f64),
        yr: (f64, f64),
        m: usize,
        halo: usize,
        bc: (Boundary, Boundary),
        init: impl Fn(f64, f64, &mut [f64]),
    ) -> Result<Self> {
        let mut g = Self::new(cells, xr, yr, m, halo, bc)?;
        for j in 0..g.ny {
            for i in 0..g.nx {
                let (x, y) = (g.x(i), g.y(j));
                init(x, y, g.cell_mut(i, j));
            }
        }
        g.fill_ghosts();
        Ok(g)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
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

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn bc(&self) -> (Boundary, Boundary) {
        self.bc
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.origin.0, self.origin.0 + self.dx * self.nx as f64)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.origin.1, self.origin.1 + self.dy * self.ny as f64)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.origin.0 + (i as f64 + 0.5) * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.origin.1 + (j as f64 + 0.5) * self.dy
    }

    /// Stored cells per row, ghosts included.
    pub(crate) fn stride(&self) -> usize {
        self.nx + 2 * self.halo
    }

    /// Offset of stored cell `(a, b)` (ghost-inclusive indices).
    #[inline]
    pub(crate) fn offset(&self, a: usize, b: usize) -> usize {
        (b * self.stride() + a) * self.m
    }

    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let s = self.offset(i + self.halo, j + self.halo);
        &self.data[s..s + self.m]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let s = self.offset(i + self.halo, j + self.halo);
        &mut self.data[s..s + self.m]
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// Interior row `j` (all cells, cell-major).
    pub fn row(&self, j: usize) -> &[f64] {
        let s = self.offset(self.halo, j + self.halo);
        &self.data[s..s + self.nx * self.m]
    }

    pub(crate) fn row_mut(&mut self, j: usize) -> &mut [f64] {
        let s = self.offset(self.halo, j + self.halo);
        let len = self.nx * self.m;
        &mut self.data[s..s + len]
    }

    /// Component `c` of every interior cell, row by row.
    pub fn component(&self, c: usize) -> Vec<f64> {
        (0..self.ny).flat_map(|j| self.row(j).chunks(self.m).map(move |u| u[c])).collect()
    }

    /// Copy of this grid with a different ghost width.
    pub fn with_halo(&self, halo: usize) -> Result<Self> {
        let mut g = Self::new((self.nx, self.ny), self.x_range(), self.y_range(), self.m, halo, self.bc)?;
        g.dx = self.dx;
        g.dy = self.dy;
        g.t = self.t;
        for j in 0..self.ny {
            g.row_mut(j).copy_from_slice(self.row(j));
        }
        g.fill_ghosts();
        Ok(g)
    }

    /// Grid with `x` and `y` exchanged; `swap` permutes the components of each state.
    pub fn transposed(&self, swap: impl Fn(&mut [f64])) -> Result<Self> {
        let (xr, yr) = (self.x_range(), self.y_range());
        let mut g = Self::new((self.ny, self.nx), yr, xr, self.m, self.halo, (self.bc.1, self.bc.0))?;
        g.dx = self.dy;
        g.dy = self.dx;
        g.t = self.t;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let dst = g.cell_mut(j, i);
                dst.copy_from_slice(self.cell(i, j));
                swap(dst);
            }
        }
        g.fill_ghosts();
        Ok(g)
    }

    pub fn fill_ghosts(&mut self) {
        let (nx, ny, h, m) = (self.nx, self.ny, self.halo, self.m);
        let stride = self.stride();
        // x ghosts of interior rows
        for b in h..h + ny {
            let row = b * stride;
            for k in 0..h {
                let (l, r) = match self.bc.0 {
                    Boundary::Periodic => (nx - h + k, k),
                    Boundary::Outflow => (0, nx - 1),
                };
                self.data.copy_within((row + h + l) * m..(row + h + l + 1) * m, (row + k) * m);
                self.data.copy_within((row + h + r) * m..(row + h + r + 1) * m, (row + h + nx + k) * m);
            }
        }
        // whole ghost rows, corners included
        let row_len = stride * m;
        for k in 0..h {
            let (l, r) = match self.bc.1 {
                Boundary::Periodic => (ny - h + k, k),
                Boundary::Outflow => (0, ny - 1),
            };
            self.data.copy_within((h + l) * row_len..(h + l + 1) * row_len, k * row_len);
            self.data.copy_within((h + r) * row_len..(h + r + 1) * row_len, (h + ny + k) * row_len);
        }
    }

    /// `sum u dx dy` per component.
    pub fn integral(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.m];
        for j in 0..self.ny {
            for u in self.row(j).chunks(self.m) {
                for (a, v) in s.iter_mut().zip(u) {
                    *a += v;
                }
            }
        }
        s.iter().map(|v| v * self.dx * self.dy).collect()
    }

    pub fn check_states<L: ConservationLaw + ?Sized>(&self, model: &L) -> Result<()> {
        for j in 0..self.ny {
            for (i, u) in self.row(j).chunks(self.m).enumerate() {
                if !model.admissible(u) {
                    let loc = format!("cell ({i}, {j}) at ({:.6}, {:.6})", self.x(i), self.y(j));
                    model.check_state(u, &loc)?;
                    return Err(Error::InadmissibleState {
                        location: loc,
                        reason: "state rejected by the model".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Values of component `c` along the diagonal `i = j`, as `(x, y, value)`.
    pub fn diagonal(&self, c: usize) -> Result<Vec<(f64, f64, f64)>> {
        if self.nx != self.ny {
            return Err(Error::InvalidArgument(format!(
                "diagonal cut needs a square grid, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok((0..self.nx).map(|i| (self.x(i), self.y(i), self.cell(i, i)[c])).collect())
    }

    /// Largest `|u(i, j) - swap(u(j, i))|` over the interior.
    pub fn diagonal_asymmetry(&self, swap: impl Fn(&mut [f64])) -> f64 {
        let mut worst = 0.0f64;
        let mut buf = vec![0.0; self.m];
        for j in 0..self.ny.min(self.nx) {
            for i in 0..self.nx.min(self.ny) {
                buf.copy_from_slice(self.cell(j, i));
                swap(&mut buf);
                for (a, b) in self.cell(i, j).iter().zip(&buf) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        worst
    }
}
