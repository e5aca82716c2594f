//! Connecting orbits between B-type ends. They sit where a boundary
//! between forward behaviours crosses a boundary between backward
//! behaviours; four points around the crossing with four distinct
//! (backward, forward) labels bracket it.

use std::fmt;

use rayon::prelude::*;

use super::{grid_point, state_from_uv, ExplorerError, Window};
use crate::integrator::{solve, AsymptoticClass, IntegratorOptions, Side, Trajectory};
use crate::params::ParameterTriple;
use crate::sequences::{table_cell, PoleType, SignChanges, TableKind};

/// What a solution meets first on one side of the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideLabel {
    Pole(PoleType),
    End(AsymptoticClass),
}

impl fmt::Display for SideLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideLabel::Pole(k) => write!(f, "{k}"),
            SideLabel::End(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corner {
    pub u: f64,
    pub v: f64,
    pub label: (SideLabel, SideLabel),
}

/// Corners in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrilateral {
    pub corners: [Corner; 4],
}

impl Quadrilateral {
    pub fn perimeter(&self) -> f64 {
        (0..4)
            .map(|i| {
                let (a, b) = (self.corners[i], self.corners[(i + 1) % 4]);
                (a.u - b.u).hypot(a.v - b.v)
            })
            .sum()
    }

    pub fn centroid(&self) -> (f64, f64) {
        let u = self.corners.iter().map(|c| c.u).sum::<f64>() / 4.0;
        let v = self.corners.iter().map(|c| c.v).sum::<f64>() / 4.0;
        (u, v)
    }

    /// Four pairwise distinct label pairs with at least two distinct labels
    /// on each side, none unresolved. A single backward label around four
    /// forward ones marks a junction of forward regions, not a crossing.
    pub fn is_bracketing(&self) -> bool {
        let unresolved = SideLabel::End(AsymptoticClass::Unresolved);
        let c = &self.corners;
        if c.iter()
            .any(|c| c.label.0 == unresolved || c.label.1 == unresolved)
        {
            return false;
        }
        let distinct = |side: fn(&Corner) -> SideLabel| {
            let mut v: Vec<SideLabel> = c.iter().map(side).collect();
            v.sort_by_key(|l| l.to_string());
            v.dedup();
            v.len()
        };
        distinct(|c| c.label.0) >= 2
            && distinct(|c| c.label.1) >= 2
            && (0..4).all(|i| (i + 1..4).all(|j| c[i].label != c[j].label))
    }

    fn at(&self, s: f64, t: f64) -> (f64, f64) {
        let c = &self.corners;
        let w = [(1.0 - s) * (1.0 - t), s * (1.0 - t), s * t, (1.0 - s) * t];
        let u = (0..4).map(|i| w[i] * c[i].u).sum();
        let v = (0..4).map(|i| w[i] * c[i].v).sum();
        (u, v)
    }
}

fn first_pole(t: &Trajectory, side: Side) -> Option<PoleType> {
    let a = t.anchor().x;
    match side {
        Side::Left => t.poles().filter(|(x, _)| *x < a).last().map(|(_, k)| k),
        Side::Right => t.poles().find(|(x, _)| *x > a).map(|(_, k)| k),
    }
}

/// (backward, forward) labels of the solution through (u, v) at `anchor`.
pub fn label_point(
    p: &ParameterTriple,
    anchor: f64,
    u: f64,
    v: f64,
    opts: &IntegratorOptions,
) -> (SideLabel, SideLabel) {
    let o = IntegratorOptions {
        pole_cap: 1,
        ..opts.clone()
    };
    match solve(&state_from_uv(anchor, u, v), p, &o) {
        Ok(t) => {
            let lab = |side, class: Option<AsymptoticClass>| match first_pole(&t, side) {
                Some(k) => SideLabel::Pole(k),
                None => SideLabel::End(class.unwrap_or(AsymptoticClass::Unresolved)),
            };
            (
                lab(Side::Left, t.left_class),
                lab(Side::Right, t.right_class),
            )
        }
        Err(_) => (
            SideLabel::End(AsymptoticClass::Unresolved),
            SideLabel::End(AsymptoticClass::Unresolved),
        ),
    }
}

fn corners_at(
    p: &ParameterTriple,
    anchor: f64,
    pts: &[(f64, f64)],
    opts: &IntegratorOptions,
) -> Vec<Corner> {
    pts.par_iter()
        .map(|&(u, v)| Corner {
            u,
            v,
            label: label_point(p, anchor, u, v, opts),
        })
        .collect()
}

/// 2x2 blocks of a coarse label grid that bracket a crossing.
pub fn btob_seeds(
    p: &ParameterTriple,
    anchor: f64,
    window: Window,
    res: usize,
    opts: &IntegratorOptions,
) -> Result<Vec<Quadrilateral>, ExplorerError> {
    if res < 2 {
        return Err(ExplorerError::InvalidGrid(format!("resolution {res}")));
    }
    let pts: Vec<(f64, f64)> = (0..res * res)
        .map(|k| {
            (
                grid_point(window.u_min, window.u_max, k % res, res),
                grid_point(window.v_min, window.v_max, k / res, res),
            )
        })
        .collect();
    let g = corners_at(p, anchor, &pts, opts);
    let mut out = Vec::new();
    for j in 0..res - 1 {
        for i in 0..res - 1 {
            let q = Quadrilateral {
                corners: [
                    g[j * res + i],
                    g[j * res + i + 1],
                    g[(j + 1) * res + i + 1],
                    g[(j + 1) * res + i],
                ],
            };
            if q.is_bracketing() {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// A refined connecting orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct BtoBOrbit {
    pub u: f64,
    pub v: f64,
    pub left: u8,
    pub right: u8,
    pub perimeter: f64,
    pub iterations: usize,
    /// Zeros of f1, f2, f3 on the verification interval.
    pub zero_counts: [usize; 3],
    /// Components changing sign according to the asymptotic table.
    pub table_changes: Option<SignChanges>,
}

impl BtoBOrbit {
    /// Odd zero counts coincide with the tabulated sign changes.
    pub fn matches_table(&self) -> bool {
        self.table_changes
            .is_some_and(|ch| (1..=3).all(|i| ch.contains(i) == (self.zero_counts[i - 1] % 2 == 1)))
    }
}

fn sub_quads(q: &Quadrilateral, m: &[Corner]) -> [Quadrilateral; 4] {
    // m = [m01, m12, m23, m30, centre]
    let c = &q.corners;
    [
        Quadrilateral {
            corners: [c[0], m[0], m[4], m[3]],
        },
        Quadrilateral {
            corners: [m[0], c[1], m[1], m[4]],
        },
        Quadrilateral {
            corners: [m[4], m[1], c[2], m[2]],
        },
        Quadrilateral {
            corners: [m[3], m[4], m[2], c[3]],
        },
    ]
}

fn fit_line(pts: &[(f64, f64)]) -> Option<((f64, f64), (f64, f64))> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mu, mv) = (
        pts.iter().map(|p| p.0).sum::<f64>() / n,
        pts.iter().map(|p| p.1).sum::<f64>() / n,
    );
    let (mut suu, mut suv, mut svv) = (0.0, 0.0, 0.0);
    for &(u, v) in pts {
        suu += (u - mu) * (u - mu);
        suv += (u - mu) * (v - mv);
        svv += (v - mv) * (v - mv);
    }
    let theta = 0.5 * (2.0 * suv).atan2(suu - svv);
    Some(((mu, mv), (theta.cos(), theta.sin())))
}

/// Relabel a 5x5 grid over `q`; take a bracketing grid cell if there is
/// one, else intersect lines fitted to the two label boundaries and place
/// a small diamond across the crossing.
fn rebracket(
    p: &ParameterTriple,
    anchor: f64,
    q: &Quadrilateral,
    opts: &IntegratorOptions,
) -> Option<Quadrilateral> {
    const N: usize = 5;
    let pts: Vec<(f64, f64)> = (0..N * N)
        .map(|k| q.at((k % N) as f64 / 4.0, (k / N) as f64 / 4.0))
        .collect();
    let g = corners_at(p, anchor, &pts, opts);
    let at = |i: usize, j: usize| g[j * N + i];
    for j in 0..N - 1 {
        for i in 0..N - 1 {
            let cand = Quadrilateral {
                corners: [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)],
            };
            if cand.is_bracketing() {
                return Some(cand);
            }
        }
    }
    let (mut back, mut fwd) = (Vec::new(), Vec::new());
    for j in 0..N {
        for i in 0..N {
            for (a, b) in [
                (at(i, j), (i + 1 < N).then(|| at(i + 1, j))),
                (at(i, j), (j + 1 < N).then(|| at(i, j + 1))),
            ] {
                let Some(b) = b else { continue };
                let mid = ((a.u + b.u) / 2.0, (a.v + b.v) / 2.0);
                if a.label.0 != b.label.0 {
                    back.push(mid);
                }
                if a.label.1 != b.label.1 {
                    fwd.push(mid);
                }
            }
        }
    }
    let ((pa, da), (pb, db)) = (fit_line(&back)?, fit_line(&fwd)?);
    let det = da.0 * (-db.1) - da.1 * (-db.0);
    if det.abs() < 1e-6 {
        return None;
    }
    let (ru, rv) = (pb.0 - pa.0, pb.1 - pa.1);
    let s = (ru * (-db.1) - rv * (-db.0)) / det;
    let x = (pa.0 + s * da.0, pa.1 + s * da.1);
    let norm = |d: (f64, f64)| {
        let l = d.0.hypot(d.1);
        (d.0 / l, d.1 / l)
    };
    let e1 = norm((da.0 + db.0, da.1 + db.1));
    let e2 = norm((da.0 - db.0, da.1 - db.1));
    let mut r = q.perimeter() / 16.0;
    for _ in 0..4 {
        let pts = [
            (x.0 + r * e1.0, x.1 + r * e1.1),
            (x.0 + r * e2.0, x.1 + r * e2.1),
            (x.0 - r * e1.0, x.1 - r * e1.1),
            (x.0 - r * e2.0, x.1 - r * e2.1),
        ];
        let c = corners_at(p, anchor, &pts, opts);
        let cand = Quadrilateral {
            corners: [c[0], c[1], c[2], c[3]],
        };
        if cand.is_bracketing() {
            return Some(cand);
        }
        r /= 2.0;
    }
    None
}

/// Shrink a bracketing quadrilateral until its perimeter is below `tol`,
/// then check that the centre connects B_i to B_j on `verify_horizon`.
pub fn find_btob(
    p: &ParameterTriple,
    anchor: f64,
    seed: Quadrilateral,
    tol: f64,
    verify_horizon: f64,
    opts: &IntegratorOptions,
) -> Result<BtoBOrbit, ExplorerError> {
    if !seed.is_bracketing() {
        return Err(ExplorerError::InvalidSeed);
    }
    let mut q = seed;
    let mut iterations = 0;
    while q.perimeter() >= tol {
        let c = &q.corners;
        let mid = |a: &Corner, b: &Corner| ((a.u + b.u) / 2.0, (a.v + b.v) / 2.0);
        let pts = [
            mid(&c[0], &c[1]),
            mid(&c[1], &c[2]),
            mid(&c[2], &c[3]),
            mid(&c[3], &c[0]),
            q.centroid(),
        ];
        let m = corners_at(p, anchor, &pts, opts);
        let next = sub_quads(&q, &m)
            .into_iter()
            .find(Quadrilateral::is_bracketing);
        let next = match next {
            Some(n) => n,
            None => {
                rebracket(p, anchor, &q, opts).ok_or(ExplorerError::BracketLost(q.perimeter()))?
            }
        };
        if next.perimeter() * 1.5 > q.perimeter() {
            return Err(ExplorerError::BracketLost(q.perimeter()));
        }
        q = next;
        iterations += 1;
    }
    let (u, v) = q.centroid();
    let o = IntegratorOptions {
        horizon: verify_horizon,
        pole_cap: 1,
        extend_factor: 1.0,
        ..opts.clone()
    };
    let t = solve(&state_from_uv(anchor, u, v), p, &o)?;
    let (l, r) = (
        t.left_class.unwrap_or(AsymptoticClass::Unresolved),
        t.right_class.unwrap_or(AsymptoticClass::Unresolved),
    );
    let (AsymptoticClass::B(left), AsymptoticClass::B(right)) = (l, r) else {
        return Err(ExplorerError::NotConnecting(l.to_string(), r.to_string()));
    };
    let inside = |x: f64| x.abs() <= verify_horizon;
    if t.poles().any(|(x, _)| inside(x)) {
        return Err(ExplorerError::NotConnecting(l.to_string(), r.to_string()));
    }
    let mut zero_counts = [0; 3];
    for (_, c, _) in t.zeros().filter(|z| inside(z.0)) {
        zero_counts[c - 1] += 1;
    }
    let table_changes = match p.sign_case() {
        Ok(case) => {
            table_cell(TableKind::Asymptotic, case, left as usize, right as usize).sign_changes()
        }
        Err(_) => None,
    };
    Ok(BtoBOrbit {
        u,
        v,
        left,
        right,
        perimeter: q.perimeter(),
        iterations,
        zero_counts,
        table_changes,
    })
}

/// Every connecting orbit reachable from a coarse label scan, without
/// duplicates.
pub fn search_btob(
    p: &ParameterTriple,
    anchor: f64,
    window: Window,
    res: usize,
    tol: f64,
    verify_horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Vec<BtoBOrbit>, ExplorerError> {
    let seeds = btob_seeds(p, anchor, window, res, opts)?;
    let found: Vec<BtoBOrbit> = seeds
        .into_iter()
        .filter_map(|q| find_btob(p, anchor, q, tol, verify_horizon, opts).ok())
        .collect();
    let mut out: Vec<BtoBOrbit> = Vec::new();
    for o in found {
        if !out.iter().any(|k| (k.u - o.u).hypot(k.v - o.v) < 1e-6) {
            out.push(o);
        }
    }
    Ok(out)
}
