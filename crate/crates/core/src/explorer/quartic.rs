//! Solutions with α1 = 2 built from the Riccati family α1 = 0, f1 = 0, and
//! the residual of the first-order quartic relation they satisfy in P_IV
//! variables (β = -8).

use serde::Serialize;

use super::ExplorerError;
use crate::integrator::{integrate, rhs_f, IntegratorOptions};
use crate::params::{ParameterTriple, SystemState};
use crate::symmetry::{act_generic, Dual, GroupWord};

/// Maps (0, a, 1 - a) to a triple with α1 = 2.
pub const QUARTIC_WORD: &str = "s s t s s t s t s s t s s t s";

/// The quartic in W = dw/dz at P_IV parameter `alpha`. Returns the value
/// and the largest magnitude among its terms.
pub fn quartic_residual(w: f64, dw: f64, z: f64, alpha: f64) -> (f64, f64) {
    let (w2, w3, w4) = (w * w, w * w * w, w * w * w * w);
    let (w5, w6, w7, w8) = (w4 * w, w4 * w2, w4 * w3, w4 * w4);
    let e = z * z - alpha;
    let c2 = -2.0 * w4 - 8.0 * z * w3 - 8.0 * e * w2;
    let c1 = -8.0 * w4 - 32.0 * z * w3 - 32.0 * e * w2 - 128.0;
    let terms = [
        dw.powi(4),
        8.0 * dw.powi(3),
        c2 * dw * dw,
        c1 * dw,
        w8,
        8.0 * z * w7,
        8.0 * (3.0 * z * z - alpha) * w6,
        32.0 * z * e * w5,
        16.0 * (e * e + 1.0) * w4,
        64.0 * z * w3,
        -256.0,
    ];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    (terms.iter().sum(), scale)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticReport {
    pub alpha_image: [f64; 3],
    pub p4_alpha: f64,
    pub beta: f64,
    /// max |g' - rhs(g)| at the image parameters.
    pub spiv_residual: f64,
    pub quartic_residual: f64,
    /// Quartic residual over the largest term, maximised over the points.
    pub quartic_relative: f64,
    pub points: usize,
}

/// Integrate the Riccati solution with f(x_lo) = (0, c, x_lo - c) over
/// `interval`, push it through `word` with derivatives, and evaluate both
/// residuals at `points` equally spaced abscissae.
pub fn quartic_residual_check(
    p0: &ParameterTriple,
    word: &GroupWord,
    c: f64,
    interval: (f64, f64),
    points: usize,
    opts: &IntegratorOptions,
) -> Result<QuarticReport, ExplorerError> {
    let (lo, hi) = interval;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || points < 2 {
        return Err(ExplorerError::InvalidGrid(format!(
            "interval [{lo}, {hi}] with {points} points"
        )));
    }
    let image = crate::symmetry::act_on_alpha(word, p0);
    if (image.a1() - 2.0).abs() > 1e-12 {
        return Err(ExplorerError::WrongImage(format!("{:?}", image.as_array())));
    }
    let t = integrate(&SystemState::new(lo, [0.0, c, lo - c]), p0, hi, opts)?;
    let a = image.as_array();
    let p4 = image.p4_parameters(1)?;
    let (mut spiv, mut abs, mut rel) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..points {
        let x = lo + (hi - lo) * k as f64 / (points - 1) as f64;
        let f = t.eval(x).ok_or(ExplorerError::IntermediatePole(x))?;
        let df = rhs_f(&SystemState::new(x, f), p0);
        let g0 = [0, 1, 2].map(|i| Dual::new(f[i], df[i]));
        let (g, _) = act_generic(word, g0, p0).map_err(|_| ExplorerError::IntermediatePole(x))?;
        let val = g.map(|d| d.v);
        let want = rhs_f(&SystemState::new(x, val), &image);
        for i in 0..3 {
            spiv = spiv.max((g[i].d - want[i]).abs());
        }
        let w = -std::f64::consts::SQRT_2 * g[0].v;
        let z = x / std::f64::consts::SQRT_2;
        let (r, scale) = quartic_residual(w, -2.0 * g[0].d, z, p4.alpha);
        abs = abs.max(r.abs());
        rel = rel.max(r.abs() / scale.max(1.0));
    }
    Ok(QuarticReport {
        alpha_image: *a,
        p4_alpha: p4.alpha,
        beta: p4.beta,
        spiv_residual: spiv,
        quartic_residual: abs,
        quartic_relative: rel,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_sends_riccati_family_to_alpha1_two() {
        let w: GroupWord = QUARTIC_WORD.parse().unwrap();
        for a2 in [0.1, 0.4, 0.75, -0.3] {
            let img = crate::symmetry::act_on_alpha(
                &w,
                &ParameterTriple::new(0.0, a2, 1.0 - a2).unwrap(),
            );
            assert!((img.a1() - 2.0).abs() < 1e-12, "{a2}: {:?}", img.as_array());
            assert!((img.p4_parameters(1).unwrap().beta + 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_other_words() {
        let p = ParameterTriple::new(0.0, 0.4, 0.6).unwrap();
        let w: GroupWord = "t".parse().unwrap();
        let r = quartic_residual_check(&p, &w, 0.5, (0.0, 1.0), 5, &IntegratorOptions::default());
        assert!(matches!(r, Err(ExplorerError::WrongImage(_))));
    }

    #[test]
    fn transformed_solution_satisfies_both_relations() {
        let p = ParameterTriple::new(0.0, 0.4, 0.6).unwrap();
        let w: GroupWord = QUARTIC_WORD.parse().unwrap();
        let r = quartic_residual_check(&p, &w, 0.5, (0.2, 1.2), 21, &IntegratorOptions::default())
            .unwrap();
        assert_eq!(r.beta, -8.0);
        assert!(r.spiv_residual < 1e-8, "{r:?}");
        assert!(r.quartic_relative < 1e-6, "{r:?}");
    }

    #[test]
    fn quartic_at_a_hand_point() {
        // w = 0, W = 0: only the constant survives
        assert_eq!(quartic_residual(0.0, 0.0, 1.3, 0.7).0, -256.0);
        // w = 0 leaves W^4 + 8 W^3 - 128 W - 256, which vanishes at W = 4
        assert_eq!(quartic_residual(0.0, 4.0, 0.0, 0.0).0, 0.0);
        assert_eq!(
            quartic_residual(0.0, 1.0, 0.0, 0.0).0,
            1.0 + 8.0 - 128.0 - 256.0
        );
    }
}
