//! Rational functions in one variable over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::params::Rational;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lead = d.leading();
        let inv = Rational::one() / lead;
        Self {
            num: n.scale(&inv),
            den: d.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn constant(v: Rational) -> Self {
        Self::from_poly(Poly::constant(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.num.scale(k), self.den.clone())
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    /// `None` at a root of the denominator.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Growth order at infinity: `deg num - deg den` (None for zero).
    pub fn order_at_infinity(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|d| d as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    /// Ratio of leading coefficients (the coefficient of `x^order` at infinity).
    pub fn leading_coefficient(&self) -> Rational {
        self.num.leading() / self.den.leading()
    }

    /// JSON-friendly coefficient arrays (ascending powers, exact strings).
    pub fn to_coeff_strings(&self) -> RatFuncCoeffs {
        RatFuncCoeffs {
            num: self.num.coeffs().iter().map(|c| c.to_string()).collect(),
            den: self.den.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_coeff_strings(c: &RatFuncCoeffs) -> Option<Self> {
        let parse = |v: &[String]| -> Option<Poly> {
            v.iter()
                .map(|s| s.parse::<Rational>().ok())
                .collect::<Option<Vec<_>>>()
                .map(Poly::new)
        };
        let den = parse(&c.den)?;
        if den.is_zero() {
            return None;
        }
        Some(Self::new(parse(&c.num)?, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncCoeffs {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by the zero rational function");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Print k * (N)/(D) with N, D primitive integer polynomials.
        let (kn, n_ints) = self.num.primitive_integer();
        let (kd, d_ints) = self.den.primitive_integer();
        let k = kn / kd;
        if !k.is_one() {
            write!(f, "{k}*")?;
        }
        let n = Poly::new(n_ints.into_iter().map(Rational::from_integer).collect());
        if self.den.is_constant() {
            return write!(f, "({n})");
        }
        let d = Poly::new(d_ints.into_iter().map(Rational::from_integer).collect());
        write!(f, "({n})/({d})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ratio;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d))
    }

    #[test]
    fn reduced_on_construction() {
        let r = rf(&[-1, 0, 1], &[2, 2]); // (x^2-1)/(2x+2)
        assert_eq!(r.num(), &Poly::new(vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(r.den(), &Poly::one());
    }

    #[test]
    fn derivative_of_inverse() {
        let r = RatFunc::x().inv();
        assert_eq!(r.derivative(), rf(&[-1], &[0, 0, 1]));
    }

    #[test]
    fn display_integer_normalized() {
        let r = rf(&[-3, 0, 1], &[0, 3]);
        assert_eq!(r.to_string(), "1/3*(x^2 - 3)/(x)");
        assert_eq!(RatFunc::x().scale(&ratio(1, 3)).to_string(), "1/3*(x)");
    }

    #[test]
    fn coeff_roundtrip() {
        let r = rf(&[1, 2, 3], &[5, 0, 7]);
        let c = r.to_coeff_strings();
        assert_eq!(RatFunc::from_coeff_strings(&c).unwrap(), r);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-4i64..5, 1..4).prop_map(|v| Poly::from_i64(&v))
    }

    fn ratfunc() -> impl Strategy<Value = RatFunc> {
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                Some(RatFunc::new(n, d))
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &a), &RatFunc::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv(), RatFunc::one());
                prop_assert_eq!(&(&b / &a) * &a, b.clone());
            }
        }

        #[test]
        fn leibniz_rule(a in ratfunc(), b in ratfunc()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
