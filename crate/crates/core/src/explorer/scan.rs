use std::io::Write;

use rayon::prelude::*;

use super::{grid_point, state_from_uv, ExplorerError};
use crate::integrator::{solve, AsymptoticClass, IntegratorOptions, Side};
use crate::params::ParameterTriple;
use crate::sequences::SymbolSequence;

pub const SCAN_HEADER: &str = "u,v,n_minus,n_plus,left_class,right_class,sequence";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Window {
    pub fn square(r: f64) -> Self {
        Window {
            u_min: -r,
            u_max: r,
            v_min: -r,
            v_max: r,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanCell {
    pub u: f64,
    pub v: f64,
    pub n_minus: usize,
    pub n_plus: usize,
    pub left_class: AsymptoticClass,
    pub right_class: AsymptoticClass,
    /// `None` when the integration failed.
    pub sequence: Option<SymbolSequence>,
}

impl ScanCell {
    pub fn failed(&self) -> bool {
        self.sequence.is_none()
    }

    pub fn is_resolved(&self) -> bool {
        !self.failed()
            && self.left_class != AsymptoticClass::Unresolved
            && self.right_class != AsymptoticClass::Unresolved
    }

    pub fn is_pole_free(&self) -> bool {
        self.is_resolved() && self.n_minus == 0 && self.n_plus == 0
    }

    pub fn is_cc(&self) -> bool {
        self.is_pole_free()
            && self.left_class == AsymptoticClass::C
            && self.right_class == AsymptoticClass::C
    }
}

/// Cells in row-major order: `cells[j * nu + i]` is at (u_i, v_j).
#[derive(Clone, Debug)]
pub struct Scan {
    pub window: Window,
    pub nu: usize,
    pub nv: usize,
    pub pole_cap: usize,
    pub cells: Vec<ScanCell>,
}

pub(crate) fn scan_cell(
    p: &ParameterTriple,
    anchor: f64,
    u: f64,
    v: f64,
    opts: &IntegratorOptions,
) -> ScanCell {
    match solve(&state_from_uv(anchor, u, v), p, opts) {
        Ok(t) => ScanCell {
            u,
            v,
            n_minus: t.pole_count(Side::Left),
            n_plus: t.pole_count(Side::Right),
            left_class: t.left_class.unwrap_or(AsymptoticClass::Unresolved),
            right_class: t.right_class.unwrap_or(AsymptoticClass::Unresolved),
            sequence: Some(t.sequence()),
        },
        Err(_) => ScanCell {
            u,
            v,
            n_minus: 0,
            n_plus: 0,
            left_class: AsymptoticClass::Unresolved,
            right_class: AsymptoticClass::Unresolved,
            sequence: None,
        },
    }
}

/// Integrate from every grid point of `window` at `anchor` out to the
/// horizon in both directions. Runs on the current rayon pool; the result
/// does not depend on scheduling.
pub fn scan_grid(
    p: &ParameterTriple,
    anchor: f64,
    window: Window,
    res: (usize, usize),
    opts: &IntegratorOptions,
) -> Result<Scan, ExplorerError> {
    let (nu, nv) = res;
    if nu < 2 || nv < 2 {
        return Err(ExplorerError::InvalidGrid(format!(
            "resolution {nu}x{nv}, need at least 2 per axis"
        )));
    }
    if !(window.u_min < window.u_max && window.v_min < window.v_max) {
        return Err(ExplorerError::InvalidGrid(format!(
            "empty window {window:?}"
        )));
    }
    let cells = (0..nu * nv)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nu, idx / nu);
            let u = grid_point(window.u_min, window.u_max, i, nu);
            let v = grid_point(window.v_min, window.v_max, j, nv);
            scan_cell(p, anchor, u, v, opts)
        })
        .collect();
    Ok(Scan {
        window,
        nu,
        nv,
        pole_cap: opts.pole_cap,
        cells,
    })
}

impl Scan {
    pub fn cell(&self, i: usize, j: usize) -> &ScanCell {
        &self.cells[j * self.nu + i]
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.cells.iter().filter(|c| !c.is_resolved()).count() as f64 / self.cells.len() as f64
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SCAN_HEADER}")?;
        for c in &self.cells {
            let seq = c
                .sequence
                .as_ref()
                .map_or_else(|| "Failed".to_string(), |s| s.to_string());
            writeln!(
                w,
                "{:.16e},{:.16e},{},{},{},{},{}",
                c.u, c.v, c.n_minus, c.n_plus, c.left_class, c.right_class, seq
            )?;
        }
        Ok(())
    }

    /// Colour of one cell:
    ///
    /// | cell | RGB |
    /// |---|---|
    /// | failed or unresolved | (0, 0, 0) |
    /// | pole-free | (128, 0, 160) |
    /// | both sides at the cap (doubly infinite) | (255, 255, 255) |
    /// | left at the cap, n_plus finite (right band) | (0, 60 + 195 n_plus / cap, 0) |
    /// | right at the cap, n_minus finite (left band) | (255, 60 + 195 n_minus / cap, 0) |
    /// | both finite | (40 + 215 n_plus / cap, 40, 40 + 215 n_minus / cap) |
    pub fn pixel(&self, c: &ScanCell) -> [u8; 3] {
        let cap = self.pole_cap.max(1) as f64;
        let shade = |n: usize, base: f64| (base + (255.0 - base) * n as f64 / cap).round() as u8;
        if !c.is_resolved() {
            [0, 0, 0]
        } else if c.n_minus == 0 && c.n_plus == 0 {
            [128, 0, 160]
        } else {
            let (lcap, rcap) = (c.n_minus >= self.pole_cap, c.n_plus >= self.pole_cap);
            match (lcap, rcap) {
                (true, true) => [255, 255, 255],
                (true, false) => [0, shade(c.n_plus, 60.0), 0],
                (false, true) => [255, shade(c.n_minus, 60.0), 0],
                (false, false) => [shade(c.n_plus, 40.0), 40, shade(c.n_minus, 40.0)],
            }
        }
    }

    /// Binary PPM, one pixel per cell, largest v in the top row.
    pub fn write_ppm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.nu, self.nv)?;
        for j in (0..self.nv).rev() {
            for i in 0..self.nu {
                w.write_all(&self.pixel(self.cell(i, j)))?;
            }
        }
        Ok(())
    }
}
