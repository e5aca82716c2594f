//! Adaptive integration of the system through its movable poles.
//!
//! Away from poles the state is stepped in the plain chart `F`. When two
//! components of an A_k pattern both exceed the switch threshold the
//! integrator moves to chart A_k, where the pole is an ordinary zero of z1;
//! it returns to `F` once both singular components are back below the exit
//! threshold.

mod chart;
mod rk;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chart::{chart_inverse, chart_rhs, chart_transform, rhs_f, Chart, ChartKind};

use crate::params::{ParameterTriple, SystemState};
use crate::sequences::{Endpoint, PoleType, SymbolSequence};
use chart::slots;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("StepFailure: step size underflow at x = {x} (h = {h})")]
    StepFailure { x: f64, h: f64 },
    #[error("NonFiniteState: state left the representable range at x = {x}")]
    NonFiniteState { x: f64 },
    #[error("ChartSingular: pivot of chart A{0} vanishes")]
    ChartSingular(u8),
    #[error("EmptyInterval: x_from equals x_to")]
    EmptyInterval,
    #[error("Parse: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub switch_threshold: f64,
    pub exit_threshold: f64,
    /// Leave A_k unconditionally when |f_{k+1}| drops below this.
    pub safety_exit: f64,
    pub tol_event: f64,
    pub pole_cap: usize,
    pub horizon: f64,
    pub extend_factor: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Dense-output samples per step used to look for sign changes.
    pub event_samples: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            switch_threshold: 10.0,
            exit_threshold: 5.0,
            safety_exit: 1.0,
            tol_event: 1e-10,
            pole_cap: 10,
            horizon: 10.0,
            extend_factor: 3.0,
            h_init: 1e-3,
            h_max: 0.5,
            max_steps: 2_000_000,
            event_samples: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EventKind {
    Pole(PoleType),
    /// `direction` is the sign of the component just after the zero.
    Zero {
        component: usize,
        direction: i8,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub x: f64,
    pub kind: EventKind,
}

impl Event {
    pub fn is_pole(&self) -> bool {
        matches!(self.kind, EventKind::Pole(_))
    }

    pub fn record(&self) -> EventRecord {
        match self.kind {
            EventKind::Pole(k) => EventRecord {
                kind: "pole".into(),
                pole_type: Some(k.to_string()),
                component: None,
                x: self.x,
                direction: None,
            },
            EventKind::Zero {
                component,
                direction,
            } => EventRecord {
                kind: "zero".into(),
                pole_type: None,
                component: Some(component),
                x: self.x,
                direction: Some(direction),
            },
        }
    }
}

/// Flat JSON form of an [`Event`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub kind: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub pole_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AsymptoticClass {
    C,
    B(u8),
    /// The pole cap was reached on this side.
    Infinite,
    Unresolved,
}

impl AsymptoticClass {
    pub fn endpoint(self) -> Endpoint {
        match self {
            AsymptoticClass::C => Endpoint::C,
            AsymptoticClass::B(k) => Endpoint::B(k),
            _ => Endpoint::Open(Vec::new()),
        }
    }
}

impl fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticClass::C => f.write_str("C"),
            AsymptoticClass::B(k) => write!(f, "B{k}"),
            AsymptoticClass::Infinite => f.write_str("Infinite"),
            AsymptoticClass::Unresolved => f.write_str("Unresolved"),
        }
    }
}

impl FromStr for AsymptoticClass {
    type Err = IntegratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "C" => Ok(AsymptoticClass::C),
            "B1" => Ok(AsymptoticClass::B(1)),
            "B2" => Ok(AsymptoticClass::B(2)),
            "B3" => Ok(AsymptoticClass::B(3)),
            "Infinite" => Ok(AsymptoticClass::Infinite),
            "Unresolved" => Ok(AsymptoticClass::Unresolved),
            other => Err(IntegratorError::Parse(format!("unknown class {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndStatus {
    Reached,
    PoleCap,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub chart: Chart,
}

/// One accepted step with its continuous extension.
#[derive(Clone, Copy, Debug)]
struct Segment {
    x0: f64,
    h: f64,
    kind: ChartKind,
    cont: [[f64; 3]; 5],
}

impl Segment {
    fn lo(&self) -> f64 {
        self.x0.min(self.x0 + self.h)
    }

    fn hi(&self) -> f64 {
        self.x0.max(self.x0 + self.h)
    }

    fn coords(&self, s: f64) -> [f64; 3] {
        rk::dense(&self.cont, s)
    }
}

/// Result of one integration, stored in increasing x.
#[derive(Clone, Debug)]
pub struct Trajectory {
    params: ParameterTriple,
    opts: IntegratorOptions,
    anchor: SystemState,
    samples: Vec<Sample>,
    events: Vec<Event>,
    segments: Vec<Segment>,
    left_end: EndStatus,
    right_end: EndStatus,
    left_poles: usize,
    right_poles: usize,
    pub left_class: Option<AsymptoticClass>,
    pub right_class: Option<AsymptoticClass>,
}

/// Zero-based component whose zero the indicator tracks, and the indicator
/// itself, in chart coordinates.
fn indicators(kind: ChartKind, z: &[f64; 3], a: &[f64; 3]) -> [Option<f64>; 3] {
    match kind {
        ChartKind::F => [Some(z[0]), Some(z[1]), Some(z[2])],
        ChartKind::A(k) => {
            let (_, iq, ik) = slots(k);
            let mut out = [None; 3];
            out[iq] = Some(z[0] * z[1] - 1.0);
            out[ik] = Some(z[0] * z[2] - a[ik]);
            out
        }
    }
}

/// What one directional run produced.
#[derive(Debug)]
struct RunData {
    samples: Vec<Sample>,
    events: Vec<Event>,
    segments: Vec<Segment>,
    status: EndStatus,
    poles: usize,
}

/// Continues integration in one direction.
struct Run<'a> {
    p: &'a ParameterTriple,
    opts: &'a IntegratorOptions,
    x: f64,
    chart: Chart,
    k1: [f64; 3],
    h: f64,
    ctl: rk::Controller,
    poles: usize,
    steps: usize,
    samples: Vec<Sample>,
    events: Vec<Event>,
    segments: Vec<Segment>,
    status: EndStatus,
}

impl<'a> Run<'a> {
    fn new(x: f64, chart: Chart, p: &'a ParameterTriple, opts: &'a IntegratorOptions) -> Self {
        let k1 = chart_rhs(chart.kind, &chart.coords, p);
        Run {
            p,
            opts,
            x,
            chart,
            k1,
            h: opts.h_init,
            ctl: rk::Controller::new(),
            poles: 0,
            steps: 0,
            samples: Vec::new(),
            events: Vec::new(),
            segments: Vec::new(),
            status: EndStatus::Reached,
        }
    }

    fn from_state(
        s: &SystemState,
        p: &'a ParameterTriple,
        opts: &'a IntegratorOptions,
    ) -> Result<Self, IntegratorError> {
        if s.f.iter().any(|v| !v.is_finite()) || !s.x.is_finite() {
            return Err(IntegratorError::NonFiniteState { x: s.x });
        }
        let mut run = Run::new(
            s.x,
            Chart {
                kind: ChartKind::F,
                coords: s.f,
            },
            p,
            opts,
        );
        run.rechart(true)?;
        Ok(run)
    }

    fn f(&self) -> [f64; 3] {
        chart_inverse(&self.chart, self.p)
    }

    fn finish(self) -> RunData {
        RunData {
            samples: self.samples,
            events: self.events,
            segments: self.segments,
            status: self.status,
            poles: self.poles,
        }
    }

    /// Chart selection with hysteresis. Only magnitudes are compared, so the
    /// choice is invariant under f -> -f.
    fn choose(&self, f: &[f64; 3]) -> ChartKind {
        let o = self.opts;
        let k0 = (0..3).fold(0, |m, i| if f[i].abs() < f[m].abs() { i } else { m });
        let (i1, i2) = ((k0 + 1) % 3, (k0 + 2) % 3);
        let candidate = f[i1].abs() > o.switch_threshold
            && f[i2].abs() > o.switch_threshold
            && f[i1] * f[i2] < 0.0;
        let target = PoleType::new(k0 + 1).expect("index in range");
        match self.chart.kind {
            ChartKind::F => {
                if candidate {
                    ChartKind::A(target)
                } else {
                    ChartKind::F
                }
            }
            ChartKind::A(k) => {
                let (ip, iq, _) = slots(k);
                if candidate && target != k {
                    ChartKind::A(target)
                } else if (f[ip].abs() < o.exit_threshold && f[iq].abs() < o.exit_threshold)
                    || f[ip].abs() < o.safety_exit
                {
                    ChartKind::F
                } else {
                    ChartKind::A(k)
                }
            }
        }
    }

    fn rechart(&mut self, initial: bool) -> Result<(), IntegratorError> {
        let f = self.f();
        let kind = self.choose(&f);
        if kind != self.chart.kind {
            self.chart = chart_transform(&SystemState::new(self.x, f), kind, self.p)?;
            self.k1 = chart_rhs(kind, &self.chart.coords, self.p);
            if !initial {
                self.ctl = rk::Controller::new();
            }
        }
        Ok(())
    }

    fn bisect<G: Fn(f64) -> f64>(&self, seg: &Segment, g: G, mut lo: f64, mut hi: f64) -> f64 {
        let glo = g(lo);
        while seg.h.abs() * (hi - lo) > self.opts.tol_event {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid);
            if (gm < 0.0) == (glo < 0.0) && gm != 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Sign changes inside one accepted step, ordered along the direction
    /// of integration, as (fraction of step, event).
    fn detect(&self, seg: &Segment) -> Vec<(f64, Event)> {
        let n = self.opts.event_samples.max(1);
        let a = self.p.as_array();
        let pts: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let zs: Vec<[f64; 3]> = pts.iter().map(|&s| seg.coords(s)).collect();
        let mut out = Vec::new();
        let x_of = |s: f64| seg.x0 + s * seg.h;

        if let ChartKind::A(k) = seg.kind {
            for j in 0..n {
                let (u, v) = (zs[j][0], zs[j + 1][0]);
                if (u < 0.0) != (v < 0.0) && u != 0.0 {
                    let s = self.bisect(seg, |s| seg.coords(s)[0], pts[j], pts[j + 1]);
                    out.push((
                        s,
                        Event {
                            x: x_of(s),
                            kind: EventKind::Pole(k),
                        },
                    ));
                }
            }
        }
        for c in 0..3 {
            let ind = |z: &[f64; 3]| indicators(seg.kind, z, a)[c];
            if ind(&zs[0]).is_none() {
                continue;
            }
            for j in 0..n {
                let (u, v) = (ind(&zs[j]).unwrap(), ind(&zs[j + 1]).unwrap());
                if (u < 0.0) != (v < 0.0) && u != 0.0 {
                    let s = self.bisect(seg, |s| ind(&seg.coords(s)).unwrap(), pts[j], pts[j + 1]);
                    // sign of f_c on the larger-x end of the bracket
                    let far = if seg.h > 0.0 { pts[j + 1] } else { pts[j] };
                    let fc = chart_inverse(
                        &Chart {
                            kind: seg.kind,
                            coords: seg.coords(far),
                        },
                        self.p,
                    )[c];
                    let direction = if fc > 0.0 { 1 } else { -1 };
                    out.push((
                        s,
                        Event {
                            x: x_of(s),
                            kind: EventKind::Zero {
                                component: c + 1,
                                direction,
                            },
                        },
                    ));
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Step until `x_to` or the pole cap.
    fn advance(&mut self, x_to: f64) -> Result<(), IntegratorError> {
        let dir = if x_to > self.x { 1.0 } else { -1.0 };
        if x_to == self.x || self.status == EndStatus::PoleCap {
            return Ok(());
        }
        self.h = self.h.abs() * dir;
        let o = self.opts;
        loop {
            let rem = x_to - self.x;
            if rem * dir <= 0.0 {
                return Ok(());
            }
            let mut h = self.h.abs().min(o.h_max) * dir;
            let last = h.abs() >= rem.abs();
            if last {
                h = rem;
            }
            let min_h = 1e-14 * (1.0 + self.x.abs());
            if h.abs() < min_h {
                return Err(IntegratorError::StepFailure { x: self.x, h });
            }
            self.steps += 1;
            if self.steps > o.max_steps {
                return Err(IntegratorError::StepFailure { x: self.x, h });
            }
            let kind = self.chart.kind;
            let p = self.p;
            let field = |z: &[f64; 3]| chart_rhs(kind, z, p);
            let st = rk::step(&field, &self.chart.coords, &self.k1, h, o.rtol, o.atol);
            if !st.err.is_finite() || st.y.iter().any(|v| !v.is_finite()) {
                self.h = h * 0.25;
                if self.h.abs() < min_h {
                    return Err(IntegratorError::NonFiniteState { x: self.x });
                }
                continue;
            }
            if st.err > 1.0 {
                self.h = h * self.ctl.reject(st.err);
                continue;
            }

            let seg = Segment {
                x0: self.x,
                h,
                kind,
                cont: st.cont,
            };
            let x_new = if last { x_to } else { self.x + h };
            for (_, ev) in self.detect(&seg) {
                if self.status == EndStatus::PoleCap {
                    break;
                }
                if ev.is_pole() {
                    self.poles += 1;
                    if self.poles >= o.pole_cap {
                        self.status = EndStatus::PoleCap;
                    }
                }
                self.events.push(ev);
            }
            self.segments.push(seg);
            self.x = x_new;
            self.chart = Chart { kind, coords: st.y };
            self.k1 = st.k7;
            self.samples.push(Sample {
                x: self.x,
                chart: self.chart,
            });
            self.h = h * self.ctl.accept(st.err);
            if self.status == EndStatus::PoleCap {
                return Ok(());
            }
            let f = self.f();
            if kind == ChartKind::F && f.iter().any(|v| !v.is_finite() || v.abs() > 1e150) {
                return Err(IntegratorError::NonFiniteState { x: self.x });
            }
            self.rechart(false)?;
        }
    }
}

/// Classification of a single state by the endpoint thresholds.
pub fn classify_state(s: &SystemState) -> Option<AsymptoticClass> {
    let x = s.x;
    if x == 0.0 || s.f.iter().any(|v| !v.is_finite()) {
        return None;
    }
    if s.f.iter().all(|fi| (fi / x - 1.0 / 3.0).abs() < 0.1) {
        return Some(AsymptoticClass::C);
    }
    (0..3)
        .find(|&k| {
            (s.f[k] / x - 1.0).abs() < 0.1 && (0..3).filter(|&j| j != k).all(|j| s.f[j].abs() < 1.0)
        })
        .map(|k| AsymptoticClass::B(k as u8 + 1))
}

/// Integrate from `f0` (at `f0.x`) to `x_to`.
pub fn integrate(
    f0: &SystemState,
    p: &ParameterTriple,
    x_to: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegratorError> {
    if x_to == f0.x {
        return Err(IntegratorError::EmptyInterval);
    }
    let mut run = Run::from_state(f0, p, opts)?;
    run.advance(x_to)?;
    let data = run.finish();
    let (left, right) = if x_to > f0.x {
        (None, Some(data))
    } else {
        (Some(data), None)
    };
    Ok(Trajectory::assemble(f0, p, opts, left, right))
}

/// Integrate from `f0` out to both ends of the decision horizon and
/// classify both ends.
pub fn solve(
    f0: &SystemState,
    p: &ParameterTriple,
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegratorError> {
    let h = opts.horizon;
    let mut sides = [None, None];
    for (i, target) in [(0, -h), (1, h)] {
        let mut run = Run::from_state(f0, p, opts)?;
        let target = if i == 0 {
            target.min(f0.x)
        } else {
            target.max(f0.x)
        };
        run.advance(target)?;
        sides[i] = Some(run.finish());
    }
    let [left, right] = sides;
    let mut t = Trajectory::assemble(f0, p, opts, left, right);
    for side in [Side::Left, Side::Right] {
        let (class, extension) = classify_side(&t, side);
        if let Some(ext) = extension {
            t.append(side, ext);
        }
        match side {
            Side::Left => t.left_class = Some(class),
            Side::Right => t.right_class = Some(class),
        }
    }
    Ok(t)
}

/// Endpoint class on one side; continues the integration once to
/// `extend_factor` times the end abscissa when the end state is not yet
/// decisive.
pub fn classify_asymptotics(t: &Trajectory, side: Side) -> AsymptoticClass {
    classify_side(t, side).0
}

fn classify_side(t: &Trajectory, side: Side) -> (AsymptoticClass, Option<RunData>) {
    if t.end_status(side) == EndStatus::PoleCap {
        return (AsymptoticClass::Infinite, None);
    }
    let end = match side {
        Side::Left => t.samples[0],
        Side::Right => t.samples[t.samples.len() - 1],
    };
    if let Some(c) = classify_state(&SystemState::new(
        end.x,
        chart_inverse(&end.chart, &t.params),
    )) {
        return (c, None);
    }
    let target = match side {
        Side::Left => (end.x * t.opts.extend_factor).min(end.x - t.opts.horizon),
        Side::Right => (end.x * t.opts.extend_factor).max(end.x + t.opts.horizon),
    };
    let mut run = Run::new(end.x, end.chart, &t.params, &t.opts);
    run.poles = match side {
        Side::Left => t.left_poles,
        Side::Right => t.right_poles,
    };
    let class = match run.advance(target) {
        Ok(()) if run.status == EndStatus::PoleCap => AsymptoticClass::Infinite,
        Ok(()) => {
            classify_state(&SystemState::new(run.x, run.f())).unwrap_or(AsymptoticClass::Unresolved)
        }
        Err(_) => return (AsymptoticClass::Unresolved, None),
    };
    (class, Some(run.finish()))
}

impl Trajectory {
    fn assemble(
        anchor: &SystemState,
        p: &ParameterTriple,
        opts: &IntegratorOptions,
        left: Option<RunData>,
        right: Option<RunData>,
    ) -> Self {
        let mut samples = Vec::new();
        let mut events = Vec::new();
        let mut segments = Vec::new();
        let (mut left_end, mut right_end) = (EndStatus::Reached, EndStatus::Reached);
        let (mut left_poles, mut right_poles) = (0, 0);
        if let Some(run) = left {
            samples.extend(run.samples.into_iter().rev());
            events.extend(run.events.into_iter().rev());
            segments.extend(run.segments.into_iter().rev());
            left_end = run.status;
            left_poles = run.poles;
        }
        samples.push(Sample {
            x: anchor.x,
            chart: Chart {
                kind: ChartKind::F,
                coords: anchor.f,
            },
        });
        if let Some(run) = right {
            samples.extend(run.samples);
            events.extend(run.events);
            segments.extend(run.segments);
            right_end = run.status;
            right_poles = run.poles;
        }
        Trajectory {
            params: p.clone(),
            opts: opts.clone(),
            anchor: *anchor,
            samples,
            events,
            segments,
            left_end,
            right_end,
            left_poles,
            right_poles,
            left_class: None,
            right_class: None,
        }
    }

    fn append(&mut self, side: Side, ext: RunData) {
        match side {
            Side::Left => {
                let n = ext.poles;
                self.samples.splice(0..0, ext.samples.into_iter().rev());
                self.events.splice(0..0, ext.events.into_iter().rev());
                self.segments.splice(0..0, ext.segments.into_iter().rev());
                self.left_end = ext.status;
                self.left_poles = n;
            }
            Side::Right => {
                self.samples.extend(ext.samples);
                self.events.extend(ext.events);
                self.segments.extend(ext.segments);
                self.right_end = ext.status;
                self.right_poles = ext.poles;
            }
        }
    }

    pub fn params(&self) -> &ParameterTriple {
        &self.params
    }

    pub fn anchor(&self) -> &SystemState {
        &self.anchor
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn poles(&self) -> impl Iterator<Item = (f64, PoleType)> + '_ {
        self.events.iter().filter_map(|e| match e.kind {
            EventKind::Pole(k) => Some((e.x, k)),
            _ => None,
        })
    }

    pub fn zeros(&self) -> impl Iterator<Item = (f64, usize, i8)> + '_ {
        self.events.iter().filter_map(|e| match e.kind {
            EventKind::Zero {
                component,
                direction,
            } => Some((e.x, component, direction)),
            _ => None,
        })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.samples[0].x, self.samples[self.samples.len() - 1].x)
    }

    pub fn end_status(&self, side: Side) -> EndStatus {
        match side {
            Side::Left => self.left_end,
            Side::Right => self.right_end,
        }
    }

    /// Poles strictly on one side of the anchor within the decision horizon;
    /// the pole cap counts as `pole_cap` regardless of position.
    pub fn pole_count(&self, side: Side) -> usize {
        if self.end_status(side) == EndStatus::PoleCap {
            return self.opts.pole_cap;
        }
        let (a, h) = (self.anchor.x, self.opts.horizon);
        self.poles()
            .filter(|(x, _)| match side {
                Side::Left => *x < a && *x >= -h,
                Side::Right => *x > a && *x <= h,
            })
            .count()
    }

    /// f at `x` from the continuous extension.
    pub fn eval(&self, x: f64) -> Option<[f64; 3]> {
        let i = self.segments.partition_point(|s| s.hi() < x);
        let seg = self.segments.get(i).filter(|s| s.lo() <= x)?;
        let s = (x - seg.x0) / seg.h;
        Some(chart_inverse(
            &Chart {
                kind: seg.kind,
                coords: seg.coords(s),
            },
            &self.params,
        ))
    }

    /// Endpoints from the classes (open where unclassified) and the poles in
    /// increasing x.
    pub fn sequence(&self) -> SymbolSequence {
        let end = |c: Option<AsymptoticClass>| {
            c.map_or(Endpoint::Open(Vec::new()), AsymptoticClass::endpoint)
        };
        SymbolSequence::new(
            end(self.left_class),
            self.poles().map(|(_, k)| k).collect(),
            end(self.right_class),
        )
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,f1,f2,f3,chart")?;
        for s in &self.samples {
            let f = chart_inverse(&s.chart, &self.params);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{}",
                s.x, f[0], f[1], f[2], s.chart.kind
            )?;
        }
        Ok(())
    }

    pub fn events_json(&self) -> serde_json::Value {
        serde_json::to_value(self.events.iter().map(Event::record).collect::<Vec<_>>())
            .expect("plain records")
    }
}

#[cfg(test)]
mod tests;
