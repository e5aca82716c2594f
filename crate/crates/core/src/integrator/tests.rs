use super::*;
use proptest::prelude::*;

fn params(a1: f64, a2: f64, a3: f64) -> ParameterTriple {
    ParameterTriple::new(a1, a2, a3).unwrap()
}

// Closed form at alpha = (-2/3, 1/3, 4/3), poles at 0 and ±sqrt(3).
fn closed_form(x: f64) -> [f64; 3] {
    let x2 = x * x;
    [
        (x2 - 3.0) / (3.0 * x),
        x * (x2 + 3.0) / (3.0 * (x2 - 3.0)),
        (x2 * x2 - 6.0 * x2 - 9.0) / (3.0 * x * (x2 - 3.0)),
    ]
}

fn center_params() -> ParameterTriple {
    params(-2.0 / 3.0, 1.0 / 3.0, 4.0 / 3.0)
}

// Classical RK4 with a fixed small step, used as an independent reference.
fn rk4<F: Fn(f64, f64) -> f64>(f: F, x0: f64, y0: f64, x1: f64, n: usize) -> f64 {
    let h = (x1 - x0) / n as f64;
    let (mut x, mut y) = (x0, y0);
    for _ in 0..n {
        let k1 = f(x, y);
        let k2 = f(x + h / 2.0, y + h / 2.0 * k1);
        let k3 = f(x + h / 2.0, y + h / 2.0 * k2);
        let k4 = f(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
    }
    y
}

fn state_at(x: f64, f01: f64, f02: f64) -> SystemState {
    SystemState::new(x, [f01, f02, x - f01 - f02])
}

#[test]
fn closed_form_poles_and_accuracy() {
    let p = center_params();
    let t = integrate(
        &SystemState::new(-10.0, closed_form(-10.0)),
        &p,
        10.0,
        &IntegratorOptions::default(),
    )
    .unwrap();
    let poles: Vec<_> = t.poles().collect();
    assert_eq!(poles.len(), 3, "{poles:?}");
    let s3 = 3f64.sqrt();
    for ((x, k), (ex, ek)) in
        poles
            .iter()
            .zip([(-s3, PoleType::A1), (0.0, PoleType::A2), (s3, PoleType::A1)])
    {
        assert_eq!(*k, ek);
        assert!((x - ex).abs() < 1e-8, "pole at {x}, expected {ex}");
    }
    let mut worst: f64 = 0.0;
    for i in 0..=4000 {
        let x = -10.0 + i as f64 * 0.005;
        if [-s3, 0.0, s3].iter().any(|p| (x - p).abs() < 0.1) {
            continue;
        }
        let (got, want) = (t.eval(x).unwrap(), closed_form(x));
        for c in 0..3 {
            worst = worst.max((got[c] - want[c]).abs());
        }
    }
    assert!(worst < 1e-6, "sup error {worst}");
}

#[test]
fn linear_solution_stays_linear() {
    let p = params(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    let t = integrate(
        &SystemState::new(-10.0, [-10.0 / 3.0; 3]),
        &p,
        10.0,
        &IntegratorOptions::default(),
    )
    .unwrap();
    assert_eq!(t.poles().count(), 0);
    let zeros: Vec<_> = t.zeros().collect();
    assert_eq!(zeros.len(), 3);
    for (x, _, dir) in zeros {
        assert!(x.abs() < 1e-9);
        assert_eq!(dir, 1);
    }
    for s in t.samples() {
        for v in chart_inverse(&s.chart, &p) {
            assert!((v - s.x / 3.0).abs() < 1e-8);
        }
    }
}

#[test]
fn riccati_reduction() {
    let p = params(0.0, 0.4, 0.6);
    let c = 0.5;
    let t = integrate(
        &SystemState::new(0.0, [0.0, c, -c]),
        &p,
        3.0,
        &IntegratorOptions::default(),
    )
    .unwrap();
    for &x in &[0.5, 1.0, 2.0, 3.0] {
        let f = t.eval(x).unwrap();
        assert_eq!(f[0], 0.0);
        let want = rk4(|x, y| y * (x - y) + 0.4, 0.0, c, x, 20_000);
        assert!((f[1] - want).abs() < 1e-8, "x={x}: {} vs {want}", f[1]);
    }
}

#[test]
fn classification_examples() {
    let o = IntegratorOptions::default();
    let t = solve(
        &SystemState::new(0.0, [0.0; 3]),
        &params(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
        &o,
    )
    .unwrap();
    assert_eq!(
        (t.left_class, t.right_class),
        (Some(AsymptoticClass::C), Some(AsymptoticClass::C))
    );
    assert_eq!(t.sequence(), SymbolSequence::cc());

    let t = solve(&SystemState::new(0.0, [0.0; 3]), &params(1.0, 0.0, 0.0), &o).unwrap();
    assert_eq!(
        (t.left_class, t.right_class),
        (Some(AsymptoticClass::B(1)), Some(AsymptoticClass::B(1)))
    );

    let t = solve(&SystemState::new(0.0, [0.0; 3]), &params(0.0, 1.0, 0.0), &o).unwrap();
    assert_eq!(
        (t.left_class, t.right_class),
        (Some(AsymptoticClass::B(2)), Some(AsymptoticClass::B(2)))
    );

    let t = solve(
        &SystemState::new(0.5, closed_form(0.5)),
        &center_params(),
        &o,
    )
    .unwrap();
    assert_eq!(t.sequence().to_string(), "C A1 A2 A1 C");
    assert_eq!(
        (t.pole_count(Side::Left), t.pole_count(Side::Right)),
        (2, 1)
    );
}

#[test]
fn classify_state_thresholds() {
    assert_eq!(
        classify_state(&SystemState::new(10.0, [3.4, 3.3, 3.3])),
        Some(AsymptoticClass::C)
    );
    assert_eq!(
        classify_state(&SystemState::new(-10.0, [-0.05, -9.9, -0.05])),
        Some(AsymptoticClass::B(2))
    );
    assert_eq!(
        classify_state(&SystemState::new(10.0, [5.0, 5.0, 0.0])),
        None
    );
    assert_eq!(classify_state(&SystemState::new(0.0, [0.0; 3])), None);
}

#[test]
fn pole_cap_stops_integration() {
    let p = params(0.2, 0.3, 0.5);
    let o = IntegratorOptions {
        pole_cap: 2,
        ..Default::default()
    };
    let t = solve(&state_at(0.0, 3.0, -2.0), &p, &o).unwrap();
    for side in [Side::Left, Side::Right] {
        assert!(t.pole_count(side) <= 2);
        if t.end_status(side) == EndStatus::PoleCap {
            let class = if side == Side::Left {
                t.left_class
            } else {
                t.right_class
            };
            assert_eq!(class, Some(AsymptoticClass::Infinite));
        }
    }
}

#[test]
fn exports() {
    let p = center_params();
    let t = integrate(
        &SystemState::new(-3.0, closed_form(-3.0)),
        &p,
        3.0,
        &IntegratorOptions::default(),
    )
    .unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("x,f1,f2,f3,chart\n"));
    assert!(text.lines().any(|l| l.ends_with(",A2")));
    let json = t.events_json();
    let recs: Vec<EventRecord> = serde_json::from_value(json.clone()).unwrap();
    assert_eq!(recs.iter().filter(|r| r.kind == "pole").count(), 3);
    let first_pole = json
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["kind"] == "pole")
        .unwrap();
    assert_eq!(first_pole["type"], "A1");
    assert!(first_pole.get("direction").is_none());
}

#[test]
fn reflection_symmetry_is_exact() {
    let p = params(0.7, -0.2, 0.5);
    let o = IntegratorOptions::default();
    let x0 = 0.3;
    let f0 = [1.2, -0.4, x0 - 0.8];
    let fwd = integrate(&SystemState::new(x0, f0), &p, 6.0, &o).unwrap();
    let bwd = integrate(&SystemState::new(-x0, f0.map(|v| -v)), &p, -6.0, &o).unwrap();
    let (ef, eb) = (fwd.events(), bwd.events());
    assert_eq!(ef.len(), eb.len());
    for (a, b) in ef.iter().zip(eb.iter().rev()) {
        assert!((a.x + b.x).abs() < 1e-8);
        match (a.kind, b.kind) {
            (EventKind::Pole(k), EventKind::Pole(l)) => assert_eq!(k, l),
            (
                EventKind::Zero {
                    component: c,
                    direction: d,
                },
                EventKind::Zero {
                    component: c2,
                    direction: d2,
                },
            ) => {
                assert_eq!(c, c2);
                assert_eq!(d, d2);
            }
            _ => panic!("event kinds differ"),
        }
    }
    for i in 0..=100 {
        let x = x0 + (6.0 - x0) * i as f64 / 100.0;
        let (a, b) = (fwd.eval(x).unwrap(), bwd.eval(-x).unwrap());
        for c in 0..3 {
            let scale = 1.0 + a[c].abs();
            assert!((a[c] + b[c]).abs() / scale < 1e-8, "x={x}");
        }
    }
}

#[test]
fn tau_commutes_with_integration() {
    let p = params(0.7, -0.2, 0.5);
    let o = IntegratorOptions::default();
    let x0 = 0.0;
    let f0 = [0.9, -0.4, -0.5];
    let a1 = p.a1();
    let tau = |f: [f64; 3]| [f[0], f[1] + a1 / f[0], f[2] - a1 / f[0]];
    let q = params(-a1, p.a2() + a1, p.a3() + a1);
    let t = integrate(&SystemState::new(x0, f0), &p, 4.0, &o).unwrap();
    let u = integrate(&SystemState::new(x0, tau(f0)), &q, 4.0, &o).unwrap();
    let mut checked = 0;
    for i in 0..=400 {
        let x = 4.0 * i as f64 / 400.0;
        let near = |x: f64, tr: &Trajectory| tr.events().iter().any(|e| (e.x - x).abs() < 0.05);
        if near(x, &t) || near(x, &u) {
            continue;
        }
        let (a, b) = (tau(t.eval(x).unwrap()), u.eval(x).unwrap());
        for c in 0..3 {
            assert!(
                (a[c] - b[c]).abs() < 1e-6 * (1.0 + b[c].abs()),
                "x={x} c={c}: {} vs {}",
                a[c],
                b[c]
            );
        }
        checked += 1;
    }
    assert!(checked > 200);
}

fn check_invariants(
    t: &Trajectory,
    p: &ParameterTriple,
    o: &IntegratorOptions,
) -> Result<(), TestCaseError> {
    let a = p.as_array();
    // constraint
    for s in t.samples() {
        let f = chart_inverse(&s.chart, p);
        if s.chart.kind == ChartKind::F {
            let scale = 1.0 + s.x.abs() + f.iter().map(|v| v.abs()).sum::<f64>();
            prop_assert!(
                (f.iter().sum::<f64>() - s.x).abs() < 100.0 * (o.atol + o.rtol * scale),
                "defect at {}",
                s.x
            );
        }
    }
    // residues and zero slopes
    let (lo, hi) = t.x_range();
    for e in t.events() {
        match e.kind {
            EventKind::Pole(k) => {
                // the symmetric difference cancels the constant Laurent term
                let (ip, iq, _) = slots(k);
                let d = 1e-3;
                if e.x - d <= lo || e.x + d >= hi {
                    continue;
                }
                let (fa, fb) = (t.eval(e.x + d).unwrap(), t.eval(e.x - d).unwrap());
                let res = |i: usize| d * (fa[i] - fb[i]) / 2.0;
                prop_assert!((res(ip) - 1.0).abs() < 1e-4, "residue {}", res(ip));
                prop_assert!((res(iq) + 1.0).abs() < 1e-4, "residue {}", res(iq));
            }
            EventKind::Zero {
                component,
                direction,
            } => {
                let f = t.eval(e.x).unwrap();
                let d = chart::field(&f, a)[component - 1];
                prop_assert!(
                    (d - a[component - 1]).abs() < 1e-6,
                    "slope {d} vs {}",
                    a[component - 1]
                );
                prop_assert_eq!(direction as f64, a[component - 1].signum());
            }
        }
    }
    // at most one zero per component between poles
    let mut seen = [0usize; 3];
    for e in t.events() {
        match e.kind {
            EventKind::Pole(_) => seen = [0; 3],
            EventKind::Zero { component, .. } => {
                seen[component - 1] += 1;
                prop_assert!(
                    seen[component - 1] <= 1,
                    "two zeros of f{component} between poles"
                );
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectory_invariants(a1 in -2.0f64..2.0, a2 in -2.0f64..2.0, u in -3.0f64..3.0, v in -3.0f64..3.0) {
        prop_assume!(a1.abs() > 0.05 && a2.abs() > 0.05 && (1.0 - a1 - a2).abs() > 0.05);
        let p = ParameterTriple::from_pair(a1, a2).unwrap();
        let o = IntegratorOptions::default();
        let t = solve(&state_at(0.0, u, v), &p, &o).unwrap();
        check_invariants(&t, &p, &o)?;
    }
}
