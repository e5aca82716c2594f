//! Boundary of the set of initial values whose solutions run from C to C
//! without poles, traced by bisection along rays from an interior point.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;

use super::scan::scan_cell;
use super::{ExplorerError, Scan};
use crate::integrator::IntegratorOptions;
use crate::params::ParameterTriple;

const R_MAX: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct CcBoundary {
    pub centre: (f64, f64),
    /// One point per ray, counter-clockwise from the +u direction.
    pub points: Vec<(f64, f64)>,
    pub area: f64,
}

impl CcBoundary {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,v")?;
        for (u, v) in &self.points {
            writeln!(w, "{u:.16e},{v:.16e}")?;
        }
        Ok(())
    }
}

/// Shoelace area of a closed polygon.
pub fn polygon_area(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

fn is_cc(p: &ParameterTriple, anchor: f64, u: f64, v: f64, opts: &IntegratorOptions) -> bool {
    scan_cell(p, anchor, u, v, opts).is_cc()
}

/// Trace from the CC cell of `scan` nearest to the centroid of all CC cells.
pub fn trace_cc_region(
    p: &ParameterTriple,
    anchor: f64,
    scan: &Scan,
    rays: usize,
    tol: f64,
    opts: &IntegratorOptions,
) -> Result<CcBoundary, ExplorerError> {
    let cc: Vec<(f64, f64)> = scan
        .cells
        .iter()
        .filter(|c| c.is_cc())
        .map(|c| (c.u, c.v))
        .collect();
    if cc.is_empty() {
        return Err(ExplorerError::NoInteriorPoint);
    }
    let n = cc.len() as f64;
    let g = (
        cc.iter().map(|c| c.0).sum::<f64>() / n,
        cc.iter().map(|c| c.1).sum::<f64>() / n,
    );
    let d2 = |c: &(f64, f64)| (c.0 - g.0).powi(2) + (c.1 - g.1).powi(2);
    let start = cc
        .iter()
        .copied()
        .min_by(|a, b| d2(a).total_cmp(&d2(b)))
        .unwrap_or(g);
    trace_cc_region_from(p, anchor, start, rays, tol, opts)
}

/// Along each ray, expand until the first non-CC point and bisect the last
/// step down to `tol`. Each boundary point is the midpoint of the final
/// bracket, so it lies within `tol` of a classification change.
pub fn trace_cc_region_from(
    p: &ParameterTriple,
    anchor: f64,
    start: (f64, f64),
    rays: usize,
    tol: f64,
    opts: &IntegratorOptions,
) -> Result<CcBoundary, ExplorerError> {
    if rays < 3 || tol.is_nan() || tol <= 0.0 {
        return Err(ExplorerError::InvalidGrid(format!(
            "{rays} rays, tol {tol}"
        )));
    }
    if !is_cc(p, anchor, start.0, start.1, opts) {
        return Err(ExplorerError::NoInteriorPoint);
    }
    let points = (0..rays)
        .into_par_iter()
        .map(|k| {
            let th = TAU * k as f64 / rays as f64;
            let (c, s) = (th.cos(), th.sin());
            let at = |r: f64| (start.0 + r * c, start.1 + r * s);
            let inside = |r: f64| {
                let (u, v) = at(r);
                is_cc(p, anchor, u, v, opts)
            };
            let (mut lo, mut hi) = (0.0, 0.125);
            while hi < R_MAX && inside(hi) {
                lo = hi;
                hi *= 2.0;
            }
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            at(0.5 * (lo + hi))
        })
        .collect::<Vec<_>>();
    let area = polygon_area(&points);
    Ok(CcBoundary {
        centre: start,
        points,
        area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::{scan_grid, Window};

    #[test]
    fn shoelace() {
        let sq = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)];
        assert_eq!(polygon_area(&sq), 2.0);
        let hex: Vec<(f64, f64)> = (0..6)
            .map(|k| (TAU * k as f64 / 6.0).sin_cos())
            .map(|(s, c)| (c, s))
            .collect();
        assert!((polygon_area(&hex) - 1.5 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn boundary_straddles_classification_change() {
        let p = ParameterTriple::new(0.2, 0.3, 0.5).unwrap();
        let o = IntegratorOptions::default();
        let s = scan_grid(&p, 0.0, Window::square(3.0), (21, 21), &o).unwrap();
        let tol = 1e-3;
        let b = trace_cc_region(&p, 0.0, &s, 16, tol, &o).unwrap();
        assert!(b.area > 0.0);
        for &(u, v) in &b.points {
            let (du, dv) = (u - b.centre.0, v - b.centre.1);
            let r = du.hypot(dv);
            let (eu, ev) = (du / r, dv / r);
            let h = tol;
            assert!(is_cc(&p, 0.0, u - h * eu, v - h * ev, &o));
            assert!(!is_cc(&p, 0.0, u + h * eu, v + h * ev, &o));
        }
    }

    #[test]
    fn no_interior_point_outside_all_positive_case() {
        let p = ParameterTriple::new(0.5, 0.7, -0.2).unwrap();
        let o = IntegratorOptions::default();
        let s = scan_grid(&p, 0.0, Window::square(3.0), (21, 21), &o).unwrap();
        assert_eq!(
            trace_cc_region(&p, 0.0, &s, 16, 1e-3, &o),
            Err(ExplorerError::NoInteriorPoint)
        );
    }
}
