//! Parameter triples, sign cases, the (xi, eta) plane and the map to P_IV.
//!
//! A triple is carried either as `f64` (integration paths) or as an exact
//! [`Rational`] (symbolic paths). Conversions between the two are explicit.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

/// Floating triples must satisfy the sum constraint to this tolerance.
pub const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("ZeroParameter: alpha{0} vanishes")]
    ZeroParameter(usize),
    #[error("SumConstraint: alpha1 + alpha2 + alpha3 = {0}, expected 1")]
    SumConstraint(String),
    #[error("NonFinite: parameter {0} is not finite")]
    NonFinite(usize),
    #[error("Parse: cannot read parameters from {0:?}")]
    Parse(String),
    #[error("Component: component index {0} is outside 1..=3")]
    Component(usize),
}

/// Scalar types a parameter triple can be carried in.
pub trait ParamScalar: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn signum(&self) -> i8;
    fn is_integer(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl ParamScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn is_integer(&self) -> bool {
        (self - self.round()).abs() <= SUM_TOLERANCE * self.abs().max(1.0)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl ParamScalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// The triple (alpha1, alpha2, alpha3) with alpha1 + alpha2 + alpha3 = 1.
///
/// Index 0 holds alpha1. The constraint is checked on construction; the
/// symmetry actions preserve it and build new triples through
/// [`ParameterTriple::from_array_unchecked`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterTriple<T = f64> {
    a: [T; 3],
}

pub type ExactParams = ParameterTriple<Rational>;

impl<T: ParamScalar> ParameterTriple<T> {
    pub fn from_array_unchecked(a: [T; 3]) -> Self {
        Self { a }
    }

    pub fn as_array(&self) -> &[T; 3] {
        &self.a
    }

    pub fn into_array(self) -> [T; 3] {
        self.a
    }

    /// `alpha_i` for `i` in 1..=3.
    pub fn alpha(&self, i: usize) -> &T {
        &self.a[i - 1]
    }

    /// True iff no alpha is an integer.
    pub fn is_generic(&self) -> bool {
        self.a.iter().all(|v| !v.is_integer())
    }

    pub fn sign_case(&self) -> Result<SignCase, ParamError> {
        let mut pos = [false; 3];
        for (i, v) in self.a.iter().enumerate() {
            match v.signum() {
                0 => return Err(ParamError::ZeroParameter(i + 1)),
                s => pos[i] = s > 0,
            }
        }
        Ok(SignCase(pos))
    }

    pub fn to_f64(&self) -> ParameterTriple<f64> {
        ParameterTriple {
            a: [self.a[0].to_f64(), self.a[1].to_f64(), self.a[2].to_f64()],
        }
    }

    /// P_IV parameters obtained from component `component` (1..=3) via
    /// `w(z) = -sqrt(2) f_i(x)`, `z = x / sqrt(2)`.
    pub fn p4_parameters(&self, component: usize) -> Result<P4Params<T>, ParamError> {
        if !(1..=3).contains(&component) {
            return Err(ParamError::Component(component));
        }
        let i = component - 1;
        let next = &self.a[(i + 1) % 3];
        let prev = &self.a[(i + 2) % 3];
        let ai = &self.a[i];
        let sq = ai.mul(ai);
        Ok(P4Params {
            alpha: prev.add(&next.neg()),
            beta: sq.add(&sq).neg(),
        })
    }
}

impl ParameterTriple<f64> {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self, ParamError> {
        for (i, v) in [a1, a2, a3].iter().enumerate() {
            if !v.is_finite() {
                return Err(ParamError::NonFinite(i + 1));
            }
        }
        let sum = a1 + a2 + a3;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(ParamError::SumConstraint(format!("{sum}")));
        }
        Ok(Self { a: [a1, a2, a3] })
    }

    /// `alpha3 = 1 - alpha1 - alpha2`.
    pub fn from_pair(a1: f64, a2: f64) -> Result<Self, ParamError> {
        Self::new(a1, a2, 1.0 - a1 - a2)
    }

    pub fn a1(&self) -> f64 {
        self.a[0]
    }
    pub fn a2(&self) -> f64 {
        self.a[1]
    }
    pub fn a3(&self) -> f64 {
        self.a[2]
    }

    pub fn to_xi_eta(&self) -> XiEta {
        XiEta {
            xi: self.a[0] - 1.0 / 3.0,
            eta: (self.a[1] - self.a[2]) / 3f64.sqrt(),
        }
    }
}

impl ParameterTriple<Rational> {
    pub fn new_exact(a1: Rational, a2: Rational, a3: Rational) -> Result<Self, ParamError> {
        let sum = &a1 + &a2 + &a3;
        if !sum.is_one() {
            return Err(ParamError::SumConstraint(sum.to_string()));
        }
        Ok(Self { a: [a1, a2, a3] })
    }

    pub fn from_pair_exact(a1: Rational, a2: Rational) -> Self {
        let a3 = Rational::one() - &a1 - &a2;
        Self { a: [a1, a2, a3] }
    }

    /// Build from small integer fractions, e.g. `ratio(-2, 3)`.
    pub fn from_ratios(v: [(i64, i64); 3]) -> Result<Self, ParamError> {
        let [a, b, c] = v.map(|(n, d)| ratio(n, d));
        Self::new_exact(a, b, c)
    }
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_scalar_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(i));
    }
    // Terminating decimals are exact rationals.
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let d = num::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

fn parse_scalar_f64(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().ok()?;
        let d: f64 = d.trim().parse().ok()?;
        return Some(n / d);
    }
    s.parse().ok()
}

impl FromStr for ParameterTriple<f64> {
    type Err = ParamError;

    /// Accepts `a1,a2` (alpha3 derived) or `a1,a2,a3`; fractions such as
    /// `-2/3` are allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        let vals: Option<Vec<f64>> = parts.iter().map(|p| parse_scalar_f64(p)).collect();
        match vals.as_deref() {
            Some([a1, a2]) => Self::from_pair(*a1, *a2),
            Some([a1, a2, a3]) => Self::new(*a1, *a2, *a3),
            _ => Err(ParamError::Parse(s.to_string())),
        }
    }
}

impl FromStr for ParameterTriple<Rational> {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        let vals: Option<Vec<Rational>> = parts.iter().map(|p| parse_scalar_exact(p)).collect();
        match vals {
            Some(v) if v.len() == 2 => Ok(Self::from_pair_exact(v[0].clone(), v[1].clone())),
            Some(v) if v.len() == 3 => {
                let [a, b, c]: [Rational; 3] = v.try_into().expect("length checked");
                Self::new_exact(a, b, c)
            }
            _ => Err(ParamError::Parse(s.to_string())),
        }
    }
}

impl fmt::Display for ParameterTriple<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a[0], self.a[1], self.a[2])
    }
}

impl fmt::Display for ParameterTriple<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a[0], self.a[1], self.a[2])
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
}

impl Serialize for ParameterTriple<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParamsJson {
            alpha1: self.a[0],
            alpha2: self.a[1],
            alpha3: self.a[2],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParameterTriple<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ParamsJson::deserialize(d)?;
        Self::new(j.alpha1, j.alpha2, j.alpha3).map_err(serde::de::Error::custom)
    }
}

/// Sign pattern of a triple with no vanishing entry. Entry `i` is true when
/// alpha_{i+1} > 0. All-negative is impossible under the sum constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignCase(pub [bool; 3]);

impl SignCase {
    pub const PPP: SignCase = SignCase([true, true, true]);
    pub const PPM: SignCase = SignCase([true, true, false]);
    pub const MPP: SignCase = SignCase([false, true, true]);
    pub const PMP: SignCase = SignCase([true, false, true]);
    pub const MMP: SignCase = SignCase([false, false, true]);
    pub const PMM: SignCase = SignCase([true, false, false]);
    pub const MPM: SignCase = SignCase([false, true, false]);

    /// The seven admissible cases in table order.
    pub const ALL: [SignCase; 7] = [
        Self::PPP,
        Self::PPM,
        Self::MPP,
        Self::PMP,
        Self::MMP,
        Self::PMM,
        Self::MPM,
    ];

    pub fn is_positive(&self, component: usize) -> bool {
        self.0[component - 1]
    }

    /// Case of the sigma-image triple (alpha2, alpha3, alpha1).
    pub fn sigma(self) -> SignCase {
        let [a, b, c] = self.0;
        SignCase([b, c, a])
    }

    /// A concrete triple with this sign pattern.
    pub fn representative(self) -> ParameterTriple<f64> {
        let v = match self.0 {
            [true, true, true] => [0.2, 0.3, 0.5],
            [true, true, false] => [0.5, 0.7, -0.2],
            [false, true, true] => [-0.2, 0.5, 0.7],
            [true, false, true] => [0.7, -0.2, 0.5],
            [true, false, false] => [1.1, -0.03, -0.07],
            [false, true, false] => [-0.07, 1.1, -0.03],
            [false, false, true] => [-0.03, -0.07, 1.1],
            [false, false, false] => unreachable!("all-negative sign case"),
        };
        ParameterTriple::new(v[0], v[1], v[2]).expect("representatives sum to 1")
    }
}

impl fmt::Display for SignCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            f.write_str(if p { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignCase {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 3 {
            return Err(ParamError::Parse(s.to_string()));
        }
        let mut pos = [false; 3];
        for (i, c) in chars.iter().enumerate() {
            pos[i] = match c {
                '+' | 'p' => true,
                '-' | 'm' | '\u{2212}' => false,
                _ => return Err(ParamError::Parse(s.to_string())),
            };
        }
        if pos == [false; 3] {
            return Err(ParamError::Parse(s.to_string()));
        }
        Ok(SignCase(pos))
    }
}

/// Coordinates on the parameter plane; the lattice cell around the origin is
/// centred on (1/3, 1/3, 1/3).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiEta {
    pub xi: f64,
    pub eta: f64,
}

pub fn alpha_from_xi_eta(p: XiEta) -> ParameterTriple<f64> {
    let h = 3f64.sqrt() / 2.0;
    let third = 1.0 / 3.0;
    ParameterTriple::from_array_unchecked([
        third + p.xi,
        third - 0.5 * p.xi + h * p.eta,
        third - 0.5 * p.xi - h * p.eta,
    ])
}

/// The two parameters of P_IV; `beta <= 0` always.
#[derive(Clone, Debug, PartialEq)]
pub struct P4Params<T = f64> {
    pub alpha: T,
    pub beta: T,
}

/// A point of a P_IV solution obtained from one component of an sPIV state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct P4Point {
    pub z: f64,
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// State of the system on the plane f1 + f2 + f3 = x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub x: f64,
    pub f: [f64; 3],
}

impl SystemState {
    pub fn new(x: f64, f: [f64; 3]) -> Self {
        Self { x, f }
    }

    /// f1 + f2 + f3 - x.
    pub fn constraint_defect(&self) -> f64 {
        self.f[0] + self.f[1] + self.f[2] - self.x
    }

    /// `w = -sqrt(2) f_i`, `z = x / sqrt(2)`.
    pub fn to_p4(&self, p: &ParameterTriple<f64>, component: usize) -> Result<P4Point, ParamError> {
        let P4Params { alpha, beta } = p.p4_parameters(component)?;
        Ok(P4Point {
            z: self.x / std::f64::consts::SQRT_2,
            w: -std::f64::consts::SQRT_2 * self.f[component - 1],
            alpha,
            beta,
        })
    }
}

/// dw/dz corresponding to df_i/dx under the P_IV correspondence.
pub fn p4_slope(df: f64) -> f64 {
    -2.0 * df
}
