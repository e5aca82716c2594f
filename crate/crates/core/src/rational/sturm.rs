//! Real-root isolation by Sturm sequences and bisection.

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::params::Rational;

/// A real root certified to lie in `[lo, hi]` (a degenerate interval when
/// the root was hit exactly).
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealRoot {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if p.is_constant() {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[Poly], x: &Rational) -> usize {
    variations(seq.iter().map(|q| q.sign_at(x)))
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(seq: &[Poly], a: &Rational, b: &Rational) -> usize {
    variations_at(seq, a).saturating_sub(variations_at(seq, b))
}

/// Cauchy bound: every root satisfies |x| < bound.
pub fn root_bound(p: &Poly) -> Rational {
    let lead = p.leading().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .fold(Rational::zero(), |m, c| if c > m { c } else { m });
    Rational::one() + max / lead
}

/// Isolates every distinct real root of `p` and refines each to an interval
/// of width at most `width`. Roots are returned in increasing order.
pub fn isolate_real_roots(p: &Poly, width: f64) -> Vec<RealRoot> {
    if p.is_constant() {
        return Vec::new();
    }
    let sf = p.square_free();
    let seq = sturm_sequence(&sf);
    let b = root_bound(&sf);
    let w = Rational::from_float(width)
        .unwrap_or_else(|| Rational::new(BigInt::one(), BigInt::from(10).pow(12)));
    let two = Rational::from_integer(BigInt::from(2));

    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&sf, lo, hi, &w));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Bisects an interval `(lo, hi]` holding exactly one simple root of the
/// square-free `p`.
fn refine(p: &Poly, mut lo: Rational, mut hi: Rational, width: &Rational) -> RealRoot {
    let two = Rational::from_integer(BigInt::from(2));
    if p.sign_at(&hi) == 0 {
        return RealRoot { lo: hi.clone(), hi };
    }
    let s_hi = p.sign_at(&hi);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            return RealRoot {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RealRoot { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_x3_minus_3x() {
        let p = Poly::from_i64(&[0, -3, 0, 1]);
        let r = isolate_real_roots(&p, 1e-12);
        assert_eq!(r.len(), 3);
        let s3 = 3f64.sqrt();
        for (root, expect) in r.iter().zip([-s3, 0.0, s3]) {
            assert!((root.approx() - expect).abs() < 1e-12);
            assert!(root.width() <= Rational::from_float(1e-12).unwrap());
        }
    }

    #[test]
    fn repeated_and_complex_roots() {
        // (x - 1)^2 (x^2 + 1): one distinct real root.
        let p = Poly::from_i64(&[-1, 1]).pow(2) * Poly::from_i64(&[1, 0, 1]);
        let r = isolate_real_roots(&p, 1e-12);
        assert_eq!(r.len(), 1);
        assert!((r[0].approx() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counts_match_sign_changes() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        let seq = sturm_sequence(&p);
        let z = Rational::zero();
        let two = Rational::from_integer(BigInt::from(2));
        assert_eq!(count_roots(&seq, &z, &two), 1);
        assert_eq!(count_roots(&seq, &-two.clone(), &two), 2);
    }
}
