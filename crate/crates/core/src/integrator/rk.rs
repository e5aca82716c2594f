//! Dormand–Prince 5(4) step with the standard fourth-order continuous
//! extension, for autonomous three-dimensional fields (so the stage
//! abscissae never appear).

type V = [f64; 3];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn comb(y: &V, h: f64, terms: &[(f64, &V)]) -> V {
    let mut out = *y;
    for i in 0..3 {
        let s: f64 = terms.iter().map(|(c, k)| c * k[i]).sum();
        out[i] += h * s;
    }
    out
}

pub(crate) struct Step {
    pub y: V,
    /// Field at the new point (first stage of the next step).
    pub k7: V,
    /// Scaled RMS error estimate; accept when <= 1.
    pub err: f64,
    pub cont: [V; 5],
}

pub(crate) fn step<F: Fn(&V) -> V>(f: &F, y: &V, k1: &V, h: f64, rtol: f64, atol: f64) -> Step {
    let k2 = f(&comb(y, h, &[(A21, k1)]));
    let k3 = f(&comb(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(&comb(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(&comb(
        y,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ));
    let k6 = f(&comb(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y1 = comb(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(&y1);

    let mut sq = 0.0;
    for i in 0..3 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = atol + rtol * y[i].abs().max(y1[i].abs());
        sq += (e / sc) * (e / sc);
    }
    let err = (sq / 3.0).sqrt();

    let mut cont = [[0.0; 3]; 5];
    for i in 0..3 {
        let dy = y1[i] - y[i];
        let bspl = h * k1[i] - dy;
        cont[0][i] = y[i];
        cont[1][i] = dy;
        cont[2][i] = bspl;
        cont[3][i] = dy - h * k7[i] - bspl;
        cont[4][i] =
            h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Step {
        y: y1,
        k7,
        err,
        cont,
    }
}

/// Dense output at fraction `s` of the step.
pub(crate) fn dense(cont: &[V; 5], s: f64) -> V {
    let s1 = 1.0 - s;
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] =
            cont[0][i] + s * (cont[1][i] + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])));
    }
    out
}

/// PI step-size controller (β = 0.04).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Controller {
    facold: f64,
}

impl Controller {
    const BETA: f64 = 0.04;
    const SAFE: f64 = 0.9;
    const FAC_MIN: f64 = 0.2;
    const FAC_MAX: f64 = 10.0;

    pub fn new() -> Self {
        Self { facold: 1e-4 }
    }

    /// Returns the factor by which to multiply h.
    pub fn accept(&mut self, err: f64) -> f64 {
        let expo = 0.2 - Self::BETA * 0.75;
        let fac11 = err.powf(expo);
        let fac = (fac11 / self.facold.powf(Self::BETA) / Self::SAFE)
            .clamp(1.0 / Self::FAC_MAX, 1.0 / Self::FAC_MIN);
        self.facold = err.max(1e-4);
        1.0 / fac
    }

    pub fn reject(&self, err: f64) -> f64 {
        let expo = 0.2 - Self::BETA * 0.75;
        let fac11 = err.powf(expo);
        1.0 / (fac11 / Self::SAFE).min(1.0 / Self::FAC_MIN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // y' = (y2, -y1, 0): exact rotation.
    #[test]
    fn fifth_order_on_rotation() {
        let f = |y: &V| [y[1], -y[0], 0.0];
        let errs: Vec<f64> = [0.1, 0.05]
            .iter()
            .map(|&h| {
                let mut y = [1.0, 0.0, 0.0];
                let n = (1.0 / h) as usize;
                for _ in 0..n {
                    let k1 = f(&y);
                    y = step(&f, &y, &k1, h, 1e-6, 1e-6).y;
                }
                (y[0] - 1f64.cos()).abs()
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 4.5, "observed order {order}");
    }

    #[test]
    fn dense_output_endpoints_and_accuracy() {
        let f = |y: &V| [y[1], -y[0], 0.0];
        let y = [1.0, 0.0, 0.0];
        let h = 0.2;
        let st = step(&f, &y, &f(&y), h, 1e-8, 1e-8);
        assert_eq!(dense(&st.cont, 0.0), y);
        for i in 0..3 {
            assert!((dense(&st.cont, 1.0)[i] - st.y[i]).abs() < 1e-15);
        }
        let mid = dense(&st.cont, 0.5);
        assert!((mid[0] - 0.1f64.cos()).abs() < 1e-7);
    }
}
