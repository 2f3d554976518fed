use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::problem::{RunOutcome, Solution};
use crate::acat1d::{Diagnostics, Grid1D, InterfaceRecord};
use crate::acat2d::Grid2D;
use crate::models::Axis;
use crate::Result;

/// Float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_row<W: Write>(w: &mut W, fields: &[String], sep: &str) -> Result<()> {
    writeln!(w, "{}", fields.join(sep))?;
    Ok(())
}

fn header(first: &[&str], names: &[&str]) -> Vec<String> {
    first.iter().chain(names).map(|s| s.to_string()).collect()
}

fn with_values(mut row: Vec<String>, values: &[f64]) -> Vec<String> {
    row.extend(values.iter().map(|&v| fmt_f64(v)));
    row
}

/// `x, components` per interior cell.
pub fn write_solution_1d<W: Write>(w: &mut W, grid: &Grid1D, names: &[&str]) -> Result<()> {
    write_row(w, &header(&["x"], names), ",")?;
    for i in 0..grid.n() {
        write_row(w, &with_values(vec![fmt_f64(grid.x(i))], grid.cell(i)), ",")?;
    }
    Ok(())
}

/// `x, y, components` per interior cell, row by row.
pub fn write_field_2d<W: Write>(w: &mut W, grid: &Grid2D, names: &[&str]) -> Result<()> {
    write_row(w, &header(&["x", "y"], names), ",")?;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            write_row(w, &with_values(vec![fmt_f64(grid.x(i)), fmt_f64(grid.y(j))], grid.cell(i, j)), ",")?;
        }
    }
    Ok(())
}

/// Cells on the diagonal `y = x` of a square grid.
pub fn write_diagonal<W: Write>(w: &mut W, grid: &Grid2D, names: &[&str]) -> Result<()> {
    let _ = grid.diagonal(0)?;
    write_row(w, &header(&["x", "y"], names), ",")?;
    for i in 0..grid.nx() {
        write_row(w, &with_values(vec![fmt_f64(grid.x(i)), fmt_f64(grid.y(i))], grid.cell(i, i)), ",")?;
    }
    Ok(())
}

/// One row per `every`-th step (and the last): time step, component ranges and
/// the count of interfaces per flux rung (`sel_p0` low order, `sel_p1` FL-CAT2,
/// `sel_pk` CAT2k).
pub fn write_diagnostics<W: Write>(w: &mut W, diag: &Diagnostics, names: &[&str], every: usize) -> Result<()> {
    let rungs = diag.histogram.len();
    let mut head: Vec<String> = vec!["step".into(), "t".into(), "dt".into()];
    head.extend(names.iter().map(|n| format!("min_{n}")));
    head.extend(names.iter().map(|n| format!("max_{n}")));
    head.extend((0..rungs).map(|p| format!("sel_p{p}")));
    write_row(w, &head, ",")?;
    let last = diag.steps.len();
    for (k, s) in diag.steps.iter().enumerate() {
        if (k + 1) % every.max(1) != 0 && k + 1 != last {
            continue;
        }
        let mut row = vec![s.step.to_string(), fmt_f64(s.t), fmt_f64(s.dt)];
        row.extend(s.min.iter().chain(&s.max).map(|&v| fmt_f64(v)));
        row.extend(s.histogram.iter().map(|h| h.to_string()));
        write_row(w, &row, ",")?;
    }
    Ok(())
}

fn psi_header(first: &[&str], max_p: usize) -> Vec<String> {
    let mut h: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    h.extend((1..=max_p).map(|p| format!("psi{p}")));
    h.extend(["selected_p".to_string(), "rung".to_string()]);
    h
}

fn psi_fields(row: &mut Vec<String>, rec: &InterfaceRecord, max_p: usize) {
    let psi = rec.report.psi();
    row.extend((0..max_p).map(|k| fmt_f64(psi.get(k).copied().unwrap_or(f64::NAN))));
    row.push(rec.report.selected_p.to_string());
    row.push(rec.path.code().to_string());
}

/// Indicator values of the last step; columns beyond what the scheme evaluates are `NaN`.
pub fn write_psi_1d<W: Write>(w: &mut W, grid: &Grid1D, records: &[InterfaceRecord], max_p: usize) -> Result<()> {
    write_row(w, &psi_header(&["interface", "x"], max_p), ",")?;
    for (q, rec) in records.iter().enumerate() {
        let mut row = vec![q.to_string(), fmt_f64(grid.x0() + q as f64 * grid.dx())];
        psi_fields(&mut row, rec, max_p);
        write_row(w, &row, ",")?;
    }
    Ok(())
}

/// Indicator values on the `x` or `y` faces of the last step.
pub fn write_psi_2d<W: Write>(
    w: &mut W,
    grid: &Grid2D,
    records: &[InterfaceRecord],
    axis: Axis,
    max_p: usize,
) -> Result<()> {
    write_row(w, &psi_header(&["x", "y"], max_p), ",")?;
    let per_line = match axis {
        Axis::X => grid.nx() + 1,
        Axis::Y => grid.nx(),
    };
    let (x0, y0) = (grid.x_range().0, grid.y_range().0);
    for (k, rec) in records.iter().enumerate() {
        let (a, b) = (k % per_line, k / per_line);
        let (x, y) = match axis {
            Axis::X => (x0 + a as f64 * grid.dx(), grid.y(b)),
            Axis::Y => (grid.x(a), y0 + b as f64 * grid.dy()),
        };
        let mut row = vec![fmt_f64(x), fmt_f64(y)];
        psi_fields(&mut row, rec, max_p);
        write_row(w, &row, ",")?;
    }
    Ok(())
}

/// Whitespace-separated copy of the solution; 2D rows are separated by blank
/// lines as gnuplot's grid format expects.
pub fn write_gnuplot_dat<W: Write>(w: &mut W, solution: &Solution, names: &[&str]) -> Result<()> {
    match solution {
        Solution::OneD(g) => {
            writeln!(w, "# {}", header(&["x"], names).join(" "))?;
            for i in 0..g.n() {
                write_row(w, &with_values(vec![fmt_f64(g.x(i))], g.cell(i)), " ")?;
            }
        }
        Solution::TwoD(g) => {
            writeln!(w, "# {}", header(&["x", "y"], names).join(" "))?;
            for j in 0..g.ny() {
                for i in 0..g.nx() {
                    write_row(w, &with_values(vec![fmt_f64(g.x(i)), fmt_f64(g.y(j))], g.cell(i, j)), " ")?;
                }
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

/// Script stub plotting the first component of `dat`.
pub fn gnuplot_script(dat: &str, solution: &Solution, names: &[&str], title: &str) -> String {
    let first = names.first().copied().unwrap_or("u");
    match solution {
        Solution::OneD(_) => format!(
            "set title '{title}'\nset xlabel 'x'\nset ylabel '{first}'\nset grid\n\
             plot '{dat}' using 1:2 with linespoints pt 7 ps 0.5 title '{first}'\n"
        ),
        Solution::TwoD(_) => format!(
            "set title '{title}'\nset xlabel 'x'\nset ylabel 'y'\nset view map\nset size ratio -1\n\
             set contour base\nset cntrparam levels 30\nunset surface\n\
             splot '{dat}' using 1:2:3 with lines title '{first}'\n"
        ),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutputOptions {
    /// Also emit `.dat` data and a `.gp` script.
    pub gnuplot: bool,
    /// Extract the `y = x` cut of a 2D run.
    pub cut_diagonal: bool,
}

fn create(dir: &Path, name: &str, files: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path)?;
    files.push(path);
    Ok(BufWriter::new(f))
}

/// Writes every output of `outcome` into `dir` and returns the created paths.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path, opts: OutputOptions) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let cfg = &outcome.config;
    let names = cfg.preset.component_names();
    let max_p = cfg.scheme.max_p;
    let mut files = Vec::new();
    create(dir, "run.cfg", &mut files)?.write_all(cfg.to_kv_string().as_bytes())?;
    write_diagnostics(
        &mut create(dir, "diagnostics.csv", &mut files)?,
        &outcome.diagnostics,
        names,
        cfg.history_every,
    )?;
    match &outcome.solution {
        Solution::OneD(g) => {
            write_solution_1d(&mut create(dir, "solution.csv", &mut files)?, g, names)?;
            if cfg.dump_psi {
                write_psi_1d(&mut create(dir, "psi.csv", &mut files)?, g, &outcome.records, max_p)?;
            }
        }
        Solution::TwoD(g) => {
            write_field_2d(&mut create(dir, "field.csv", &mut files)?, g, names)?;
            if cfg.dump_psi {
                write_psi_2d(&mut create(dir, "psi_x.csv", &mut files)?, g, &outcome.records, Axis::X, max_p)?;
                write_psi_2d(&mut create(dir, "psi_y.csv", &mut files)?, g, &outcome.records_y, Axis::Y, max_p)?;
            }
            if opts.cut_diagonal {
                write_diagonal(&mut create(dir, "cut_diag.csv", &mut files)?, g, names)?;
            }
        }
    }
    if opts.gnuplot {
        let dat = if outcome.solution.as_1d().is_some() { "solution.dat" } else { "field.dat" };
        write_gnuplot_dat(&mut create(dir, dat, &mut files)?, &outcome.solution, names)?;
        let title = format!("{} {} t={}", cfg.preset, cfg.scheme.label(), outcome.solution.t());
        let script = gnuplot_script(dat, &outcome.solution, names, &title);
        create(dir, "plot.gp", &mut files)?.write_all(script.as_bytes())?;
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acat1d::Boundary;

    #[test]
    fn floats_carry_17_digits() {
        let s = fmt_f64(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_f64(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn solution_csv_layout() {
        let g = Grid1D::from_fn(3, (0.0, 3.0), 2, 1, Boundary::Outflow, |x, u| {
            u[0] = x;
            u[1] = 2.0;
        })
        .unwrap();
        let mut buf = Vec::new();
        write_solution_1d(&mut buf, &g, &["a", "b"]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "x,a,b");
        let cols: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols, vec![1.5, 1.5, 2.0]);
    }

    #[test]
    fn diagonal_needs_square_grid() {
        let g = Grid2D::new((3, 2), (0.0, 1.0), (0.0, 1.0), 1, 1, (Boundary::Outflow, Boundary::Outflow)).unwrap();
        assert!(write_diagonal(&mut Vec::new(), &g, &["u"]).is_err());
    }
}
