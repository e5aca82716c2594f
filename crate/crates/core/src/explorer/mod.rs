//! Numerical experiments in the plane of initial values: pole-count scans,
//! the B-to-B connecting-orbit finder, the C-to-C region boundary, and the
//! residual check of the quartic first-order equation for α1 = 2.
//!
//! Points of the constraint plane at the anchor x are addressed by
//! u = f1 and v = (f2 - f3)/√3.

mod btob;
mod ccregion;
mod quartic;
mod scan;

use thiserror::Error;

pub use btob::{
    btob_seeds, find_btob, label_point, search_btob, BtoBOrbit, Corner, Quadrilateral, SideLabel,
};
pub use ccregion::{polygon_area, trace_cc_region, trace_cc_region_from, CcBoundary};
pub use quartic::{quartic_residual, quartic_residual_check, QuarticReport, QUARTIC_WORD};
pub use scan::{scan_grid, Scan, ScanCell, Window, SCAN_HEADER};

use crate::integrator::IntegratorError;
use crate::params::{ParamError, SystemState};
use crate::symmetry::SymmetryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExplorerError {
    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),
    #[error("NoInteriorPoint: no C-to-C point to start from")]
    NoInteriorPoint,
    #[error("BracketLost: no sub-quadrilateral keeps four distinct class pairs (perimeter {0:e})")]
    BracketLost(f64),
    #[error("InvalidSeed: seed corners do not realise four distinct class pairs")]
    InvalidSeed,
    #[error("NotConnecting: refined point classifies as {0} -> {1}")]
    NotConnecting(String, String),
    #[error("IntermediatePole: transform pivot vanishes near x = {0}")]
    IntermediatePole(f64),
    #[error("WrongImage: word maps alpha to {0}, expected alpha1 = 2")]
    WrongImage(String),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// The state at `anchor` with coordinates (u, v).
pub fn state_from_uv(anchor: f64, u: f64, v: f64) -> SystemState {
    let half = (anchor - u) / 2.0;
    let w = 3f64.sqrt() * v / 2.0;
    SystemState::new(anchor, [u, half + w, half - w])
}

/// (u, v) of a state.
pub fn uv_from_state(s: &SystemState) -> (f64, f64) {
    (s.f[0], (s.f[1] - s.f[2]) / 3f64.sqrt())
}

/// Point i of n equally spaced points on [lo, hi], computed so that a
/// window symmetric about 0 gives exactly symmetric points.
pub(crate) fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let c = (lo + hi) / 2.0;
    let half = (hi - lo) / 2.0;
    c + half * ((2 * i) as f64 - (n - 1) as f64) / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uv_roundtrip_and_constraint() {
        let s = state_from_uv(0.7, 1.3, -0.4);
        assert!(s.constraint_defect().abs() < 1e-15);
        let (u, v) = uv_from_state(&s);
        assert!((u - 1.3).abs() < 1e-15 && (v + 0.4).abs() < 1e-15);
    }

    #[test]
    fn symmetric_grid_is_exact() {
        for n in [2, 5, 201] {
            for i in 0..n {
                assert_eq!(
                    grid_point(-3.0, 3.0, i, n),
                    -grid_point(-3.0, 3.0, n - 1 - i, n)
                );
            }
            assert_eq!(grid_point(-3.0, 3.0, 0, n), -3.0);
            assert_eq!(grid_point(-3.0, 3.0, n - 1, n), 3.0);
        }
    }

    #[test]
    fn mirrored_states_are_negated() {
        let (a, b) = (state_from_uv(0.0, 0.3, -1.1), state_from_uv(0.0, -0.3, 1.1));
        for i in 0..3 {
            assert_eq!(a.f[i], -b.f[i]);
        }
    }
}
