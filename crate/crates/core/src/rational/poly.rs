//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::params::Rational;

/// Coefficients in ascending order; no trailing zeros (the zero polynomial
/// has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(v: Rational) -> Self {
        Self::new(vec![v])
    }

    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(
            c.iter()
                .map(|&v| Rational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => Self::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for v in self.c.iter().rev() {
            acc = acc * x + v.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Sign of the value at `x` (-1, 0, 1).
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Sign as x -> +inf (`positive = true`) or x -> -inf.
    pub fn sign_at_infinity(&self, positive: bool) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let l = if self.leading().is_positive() { 1 } else { -1 };
                if positive || d % 2 == 0 {
                    l
                } else {
                    -l
                }
            }
        }
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = Rational::one() / d.leading();
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] * &lead_inv;
            if !coef.is_zero() {
                for (j, dv) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * dv;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Exact quotient; panics when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer coefficients with unit content and positive leading
    /// coefficient, together with the rational factor removed.
    pub fn primitive_integer(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::one(), Vec::new());
        }
        let lcm = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if ints.last().is_some_and(|v| v.is_negative()) {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        (Rational::new(g, lcm), prim)
    }
}

impl From<Rational> for Poly {
    fn from(v: Rational) -> Self {
        Poly::constant(v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let v = match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            c.push(v);
        }
        Poly::new(c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            c: self.c.iter().map(|v| -v).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let mag = v.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        if mag.is_integer() {
                            write!(f, "{mag}*")?;
                        } else {
                            write!(f, "({mag})*")?;
                        }
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
