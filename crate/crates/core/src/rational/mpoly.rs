//! Sparse polynomials in the three indeterminates f1, f2, f3 over the
//! rationals, with exact division and a small fraction type used when
//! pushing indeterminate components through a group word.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::params::Rational;

pub type Exponent = [u32; 3];

/// Keys are ordered lexicographically (f1 > f2 > f3), so the last entry is
/// the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exponent, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate f_i (1-based).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i - 1] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0, 0])
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn leading(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Exponent {
        let mut m = [u32::MAX; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.is_zero() {
            [0; 3]
        } else {
            m
        }
    }

    pub fn div_monomial(&self, m: &Exponent) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] - m[0], e[1] - m[1], e[2] - m[2]], c.clone()))
                .collect(),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading().map(|(e, c)| (*e, c.clone()))?;
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((re, rc)) = r.leading().map(|(e, c)| (*e, c.clone())) {
            if (0..3).any(|i| re[i] < de[i]) {
                return None;
            }
            let te = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            let t = MPoly::monomial(te, rc / &dc);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Scales to integer coefficients with unit content and a positive
    /// leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        self.scale(&Rational::new(lcm, g))
    }

    pub fn eval_f64(&self, f: [f64; 3]) -> f64 {
        use num::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64().unwrap_or(f64::NAN)
                    * f[0].powi(e[0] as i32)
                    * f[1].powi(e[1] as i32)
                    * f[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Substitutes rational functions of x for the three indeterminates.
    pub fn substitute(&self, f: &[RatFunc; 3]) -> RatFunc {
        let mut powers: [Vec<RatFunc>; 3] = Default::default();
        for (i, p) in powers.iter_mut().enumerate() {
            p.push(RatFunc::one());
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            for k in 1..=maxe as usize {
                let next = &p[k - 1] * &f[i];
                p.push(next);
            }
        }
        // Accumulate over a common denominator to avoid repeated gcds.
        let mut acc = RatFunc::zero();
        for (e, c) in &self.terms {
            let t = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize];
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// Substitutes univariate polynomials; exact and cheaper than the
    /// rational-function path.
    pub fn substitute_poly(&self, f: &[Poly; 3]) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let t = &(&f[0].pow(e[0]) * &f[1].pow(e[1])) * &f[2].pow(e[2]);
            acc = &acc + &t.scale(c);
        }
        acc
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        // Highest total degree first, then lex.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (e, c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() || *e == [0, 0, 0] {
                factors.push(mag.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("f{}", i + 1)),
                    _ => factors.push(format!("f{}^{}", i + 1, k)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Fraction of trivariate polynomials. No gcd is taken; common factors are
/// cancelled against a [`FactorBase`] instead.
#[derive(Clone, Debug)]
pub struct MFrac {
    pub num: MPoly,
    pub den: MPoly,
}

impl MFrac {
    pub fn from_poly(p: MPoly) -> Self {
        Self {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Removes common monomial factors and every common factor known to
    /// `base`.
    pub fn reduce(&mut self, base: &FactorBase) {
        let mn = self.num.monomial_content();
        let md = self.den.monomial_content();
        let m = [mn[0].min(md[0]), mn[1].min(md[1]), mn[2].min(md[2])];
        if m != [0; 3] {
            self.num = self.num.div_monomial(&m);
            self.den = self.den.div_monomial(&m);
        }
        for f in &base.factors {
            while let (Some(n), Some(d)) = (self.num.div_exact(f), self.den.div_exact(f)) {
                self.num = n;
                self.den = d;
            }
        }
        // Keep the denominator's leading coefficient at one.
        if let Some((_, c)) = self.den.leading() {
            let inv = Rational::one() / c;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }
}

impl Add for &MFrac {
    type Output = MFrac;
    fn add(self, o: &MFrac) -> MFrac {
        if self.den == o.den {
            return MFrac {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        MFrac {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }
}

impl Sub for &MFrac {
    type Output = MFrac;
    fn sub(self, o: &MFrac) -> MFrac {
        self + &(-o)
    }
}

impl Neg for &MFrac {
    type Output = MFrac;
    fn neg(self) -> MFrac {
        MFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &MFrac {
    type Output = MFrac;
    fn mul(self, o: &MFrac) -> MFrac {
        MFrac {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }
}

impl Div for &MFrac {
    type Output = MFrac;
    fn div(self, o: &MFrac) -> MFrac {
        MFrac {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        }
    }
}

/// Irreducible-looking factors met along a computation (pivot numerators
/// and denominators). Trial division against them is how spurious factors
/// are cleared without multivariate factorization.
#[derive(Clone, Debug, Default)]
pub struct FactorBase {
    factors: Vec<MPoly>,
}

impl FactorBase {
    pub fn factors(&self) -> &[MPoly] {
        &self.factors
    }

    /// Strips known factors and monomials from `p`; what is left, if not
    /// constant, becomes a new factor.
    pub fn absorb(&mut self, p: &MPoly) {
        let leftover = self.strip(p);
        if !leftover.is_constant() {
            self.factors.push(leftover.primitive());
        }
    }

    /// Divides out every known factor (with multiplicity) and the monomial
    /// content.
    pub fn strip(&self, p: &MPoly) -> MPoly {
        if p.is_zero() {
            return MPoly::zero();
        }
        let mut r = p.div_monomial(&p.monomial_content());
        for f in &self.factors {
            while let Some(q) = r.div_exact(f) {
                r = q;
            }
        }
        r
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, o: MPoly) -> MPoly {
        &self + &o
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, o: MPoly) -> MPoly {
        &self - &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ratio;

    fn f(i: usize) -> MPoly {
        MPoly::var(i)
    }

    #[test]
    fn exact_division() {
        let a = &f(1) * &f(2) - MPoly::constant(ratio(2, 1)); // f1 f2 - 2
        let b = &f(3) + &f(1);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&(&f(3) - &f(2))).is_none());
    }

    #[test]
    fn primitive_normalizes() {
        let p = f(1).scale(&ratio(-2, 3)) + MPoly::constant(ratio(4, 3));
        assert_eq!(p.primitive().to_string(), "f1 - 2");
    }

    #[test]
    fn factor_base_strips() {
        let a = &f(1) * &f(3) - MPoly::constant(ratio(3, 1));
        let mut base = FactorBase::default();
        base.absorb(&(&a * &f(2)));
        assert_eq!(base.factors().len(), 1);
        let p = &(&a * &a) * &(&f(2) + &f(3));
        assert_eq!(base.strip(&p), &f(2) + &f(3));
    }

    #[test]
    fn substitution_matches_eval() {
        let p = &(&f(1) * &f(2)) - &f(3);
        let x = RatFunc::x();
        let r = p.substitute(&[x.clone(), x.clone(), RatFunc::one()]);
        assert_eq!(r, RatFunc::from_poly(Poly::from_i64(&[-1, 0, 1])));
    }
}
