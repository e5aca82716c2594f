//! Coordinate charts. `F` is the plain system; `A_k` regularises a pole of
//! type A_k by z1 = 1/f_p, z2 = f_p + f_q, z3 = a_k f_p + f_p^2 f_k with
//! p = k+1, q = k+2 (cyclically).

use std::fmt;
use std::str::FromStr;

use super::IntegratorError;
use crate::params::{ParameterTriple, SystemState};
use crate::sequences::PoleType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChartKind {
    F,
    A(PoleType),
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartKind::F => f.write_str("F"),
            ChartKind::A(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for ChartKind {
    type Err = IntegratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "F" => Ok(ChartKind::F),
            "A1" => Ok(ChartKind::A(PoleType::A1)),
            "A2" => Ok(ChartKind::A(PoleType::A2)),
            "A3" => Ok(ChartKind::A(PoleType::A3)),
            other => Err(IntegratorError::Parse(format!("unknown chart {other:?}"))),
        }
    }
}

/// A point in one chart: f itself for `F`, (z1, z2, z3) otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chart {
    pub kind: ChartKind,
    pub coords: [f64; 3],
}

/// Zero-based (p, q, k) for a pole of type A_k.
pub(crate) fn slots(k: PoleType) -> (usize, usize, usize) {
    let k0 = k.index() - 1;
    ((k0 + 1) % 3, (k0 + 2) % 3, k0)
}

pub(crate) fn field(f: &[f64; 3], a: &[f64; 3]) -> [f64; 3] {
    [
        f[0] * (f[1] - f[2]) + a[0],
        f[1] * (f[2] - f[0]) + a[1],
        f[2] * (f[0] - f[1]) + a[2],
    ]
}

/// Right-hand side of the system at `s`.
pub fn rhs_f(s: &SystemState, p: &ParameterTriple) -> [f64; 3] {
    field(&s.f, p.as_array())
}

/// Vector field in chart coordinates. Both charts are autonomous.
pub fn chart_rhs(kind: ChartKind, z: &[f64; 3], p: &ParameterTriple) -> [f64; 3] {
    let a = p.as_array();
    match kind {
        ChartKind::F => field(z, a),
        ChartKind::A(k) => {
            let (ip, _, ik) = slots(k);
            let (b1, b3) = (a[ip], a[ik]);
            let [z1, z2, z3] = *z;
            [
                1.0 + z1 * (z1 * z1 * z3 - z1 * (b1 + b3) - z2),
                1.0 + b3 + z1 * (z1 * z2 * z3 - 2.0 * z3 - b3 * z2),
                z2 * z3 - b3 * (b1 + b3) + z1 * z3 * (2.0 * b1 + 3.0 * b3 - 2.0 * z1 * z3),
            ]
        }
    }
}

/// Express the state `s` in the chart `target`.
pub fn chart_transform(
    s: &SystemState,
    target: ChartKind,
    p: &ParameterTriple,
) -> Result<Chart, IntegratorError> {
    let coords = match target {
        ChartKind::F => s.f,
        ChartKind::A(k) => {
            let (ip, iq, ik) = slots(k);
            let fp = s.f[ip];
            if fp == 0.0 {
                return Err(IntegratorError::ChartSingular(k.index() as u8));
            }
            [
                1.0 / fp,
                fp + s.f[iq],
                p.as_array()[ik] * fp + fp * fp * s.f[ik],
            ]
        }
    };
    Ok(Chart {
        kind: target,
        coords,
    })
}

/// Back to f. At z1 = 0 the two singular components are infinite.
pub fn chart_inverse(c: &Chart, p: &ParameterTriple) -> [f64; 3] {
    match c.kind {
        ChartKind::F => c.coords,
        ChartKind::A(k) => {
            let (ip, iq, ik) = slots(k);
            let [z1, z2, z3] = c.coords;
            let fp = 1.0 / z1;
            let mut f = [0.0; 3];
            f[ip] = fp;
            f[iq] = -fp + z2;
            f[ik] = -p.as_array()[ik] * z1 + z3 * z1 * z1;
            f
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn third() -> ParameterTriple {
        ParameterTriple::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let d = rhs_f(&SystemState::new(1.0, [1.0 / 3.0; 3]), &third());
        for v in d {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        let p = ParameterTriple::new(0.2, -0.5, 1.3).unwrap();
        assert_eq!(
            rhs_f(&SystemState::new(0.0, [0.0; 3]), &p),
            [0.2, -0.5, 1.3]
        );
    }

    #[test]
    fn a3_example_coordinates() {
        let p = ParameterTriple::new(0.2, 0.3, 0.5).unwrap();
        let x = 1.7;
        let c = chart_transform(
            &SystemState::new(x, [10.0, -9.9, x - 0.1]),
            ChartKind::A(PoleType::A3),
            &p,
        )
        .unwrap();
        assert!((c.coords[0] - 0.1).abs() < 1e-15);
        assert!((c.coords[1] - 0.1).abs() < 1e-13);
        assert!((c.coords[2] - (10.0 * 0.5 + 100.0 * (x - 0.1))).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_all_charts() {
        let p = ParameterTriple::new(0.7, -0.2, 0.5).unwrap();
        let x = 0.4;
        let f = [2.0, -1.0, x - 1.0];
        for kind in [
            ChartKind::F,
            ChartKind::A(PoleType::A1),
            ChartKind::A(PoleType::A2),
            ChartKind::A(PoleType::A3),
        ] {
            let c = chart_transform(&SystemState::new(x, f), kind, &p).unwrap();
            let back = chart_inverse(&c, &p);
            for i in 0..3 {
                assert!((back[i] - f[i]).abs() < 1e-14, "{kind} {back:?}");
            }
        }
    }

    #[test]
    fn singular_pivot() {
        let p = third();
        let s = SystemState::new(1.0, [0.0, 0.5, 0.5]);
        assert!(matches!(
            chart_transform(&s, ChartKind::A(PoleType::A3), &p),
            Err(IntegratorError::ChartSingular(3))
        ));
    }

    // dz/dx from the chain rule applied to z(f), against the chart field.
    #[test]
    fn chain_rule_matches_chart_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a1: f64 = rng.gen_range(-3.0..3.0);
            let a2: f64 = rng.gen_range(-3.0..3.0);
            let p = ParameterTriple::from_pair(a1, a2).unwrap();
            let a = *p.as_array();
            let f = [
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            ];
            let df = field(&f, &a);
            for k in PoleType::ALL {
                let k0 = k.index() - 1;
                let (ip, iq) = ((k0 + 1) % 3, (k0 + 2) % 3);
                if f[ip].abs() < 0.1 {
                    continue;
                }
                let expect = [
                    -df[ip] / (f[ip] * f[ip]),
                    df[ip] + df[iq],
                    a[k0] * df[ip] + 2.0 * f[ip] * df[ip] * f[k0] + f[ip] * f[ip] * df[k0],
                ];
                let c = chart_transform(&SystemState::new(f.iter().sum(), f), ChartKind::A(k), &p)
                    .unwrap();
                let got = chart_rhs(ChartKind::A(k), &c.coords, &p);
                for i in 0..3 {
                    let scale = 1.0 + expect[i].abs();
                    assert!(
                        (got[i] - expect[i]).abs() / scale < 1e-12,
                        "{k} {i}: {} vs {}",
                        got[i],
                        expect[i]
                    );
                }
            }
        }
    }

    #[test]
    fn chart_kind_text() {
        for s in ["F", "A1", "A2", "A3"] {
            assert_eq!(s.parse::<ChartKind>().unwrap().to_string(), s);
        }
    }
}
