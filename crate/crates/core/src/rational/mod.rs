//! Exact rational solutions: construction, verification, real singularity
//! structure and the polynomial relations their components satisfy.

pub mod mpoly;
pub mod poly;
pub mod ratfunc;
pub mod sturm;

use std::fmt;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mpoly::{FactorBase, MFrac, MPoly};
pub use poly::Poly;
pub use ratfunc::{RatFunc, RatFuncCoeffs};
pub use sturm::{isolate_real_roots, RealRoot};

use crate::params::{ratio, ExactParams, ParamError, Rational};
use crate::sequences::{Endpoint, PoleType, SymbolSequence};
use crate::symmetry::{act_on_rational, Generator, GroupWord, SymmetryError};

/// Width of certified pole intervals.
pub const ROOT_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RationalError {
    #[error("NonSimplePole: pole of order > 1 near x = {0}")]
    NonSimplePole(f64),
    #[error("UnexpectedPolePattern: residues near x = {0} match no pole type")]
    UnexpectedPolePattern(f64),
    #[error("UnclassifiedEndpoint: leading behaviour at infinity is neither C nor B")]
    UnclassifiedEndpoint,
    #[error("InverseUndefined: the inverse word meets an identically zero pivot at generator {0}")]
    InverseUndefined(usize),
    #[error("NotFundamental: the inverse word does not lead back to a fundamental solution")]
    NotFundamental,
    #[error("Parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Three rational functions of x with their parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTriple {
    pub f: [RatFunc; 3],
    pub params: ExactParams,
}

impl RationalTriple {
    /// f = (x/3, x/3, x/3) at (1/3, 1/3, 1/3).
    pub fn fundamental_center() -> Self {
        let x3 = RatFunc::x().scale(&ratio(1, 3));
        Self {
            f: [x3.clone(), x3.clone(), x3],
            params: ExactParams::from_ratios([(1, 3), (1, 3), (1, 3)]).expect("valid"),
        }
    }

    /// f = (x, 0, 0) at (1, 0, 0).
    pub fn fundamental_vertex() -> Self {
        Self {
            f: [RatFunc::x(), RatFunc::zero(), RatFunc::zero()],
            params: ExactParams::from_ratios([(1, 1), (0, 1), (0, 1)]).expect("valid"),
        }
    }

    /// Whether f1 + f2 + f3 = x identically.
    pub fn constraint_holds(&self) -> bool {
        &(&self.f[0] + &self.f[1]) + &self.f[2] == RatFunc::x()
    }

    pub fn eval_f64(&self, x: f64) -> [f64; 3] {
        std::array::from_fn(|i| self.f[i].eval_f64(x))
    }

    pub fn to_json(&self) -> RationalTripleJson {
        RationalTripleJson {
            alpha: std::array::from_fn(|i| self.params.as_array()[i].to_string()),
            f: std::array::from_fn(|i| self.f[i].to_coeff_strings()),
        }
    }

    pub fn from_json(j: &RationalTripleJson) -> Result<Self, RationalError> {
        let bad = |what: &str| RationalError::Parse(format!("bad {what} in rational triple"));
        let a: Vec<Rational> = j
            .alpha
            .iter()
            .map(|s| s.parse::<Rational>().map_err(|_| bad("parameter")))
            .collect::<Result<_, _>>()?;
        let params = ExactParams::new_exact(a[0].clone(), a[1].clone(), a[2].clone())?;
        let f: Vec<RatFunc> =
            j.f.iter()
                .map(|c| RatFunc::from_coeff_strings(c).ok_or_else(|| bad("component")))
                .collect::<Result<_, _>>()?;
        Ok(Self {
            f: [f[0].clone(), f[1].clone(), f[2].clone()],
            params,
        })
    }
}

impl fmt::Display for RationalTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha = {}", self.params)?;
        for (i, c) in self.f.iter().enumerate() {
            writeln!(f, "f{} = {}", i + 1, c)?;
        }
        Ok(())
    }
}

/// Serialized form: exact parameters and ascending coefficient arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalTripleJson {
    pub alpha: [String; 3],
    pub f: [RatFuncCoeffs; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpivResidual {
    Zero,
    Residual { component: usize, residual: RatFunc },
}

/// f_i' - f_i (f_{i+1} - f_{i+2}) - alpha_i for each component, exactly.
pub fn spiv_residuals(r: &RationalTriple) -> [RatFunc; 3] {
    std::array::from_fn(|i| {
        let (a, b, c) = (&r.f[i], &r.f[(i + 1) % 3], &r.f[(i + 2) % 3]);
        let alpha = RatFunc::constant(r.params.as_array()[i].clone());
        &(&a.derivative() - &(a * &(b - c))) - &alpha
    })
}

pub fn verify_spiv(r: &RationalTriple) -> SpivResidual {
    for (i, res) in spiv_residuals(r).into_iter().enumerate() {
        if !res.is_zero() {
            return SpivResidual::Residual {
                component: i + 1,
                residual: res,
            };
        }
    }
    SpivResidual::Zero
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// The solution with f1 = 0 at (0, alpha2, 1 - alpha2), built from the
/// polynomial solution of the linearized Riccati equation.
pub fn hermite_family(alpha2: i64) -> RationalTriple {
    let params =
        ExactParams::new_exact(Rational::zero(), int(alpha2), int(1 - alpha2)).expect("sum is one");
    let x = RatFunc::x();
    let (f2, f3) = if alpha2 >= 1 {
        // u'' + x u' + (1 - n) u = 0, monic of degree n - 1.
        let n = alpha2;
        let deg = (n - 1) as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = Rational::one();
        for j in (0..deg.saturating_sub(1)).rev() {
            // (j + 2)(j + 1) c_{j+2} + (j + 1 - n) c_j = 0
            let jj = j as i64;
            c[j] = -int((jj + 2) * (jj + 1)) * &c[j + 2] / int(jj + 1 - n);
        }
        let u = Poly::new(c);
        let lu = RatFunc::new(u.derivative(), u);
        (&x + &lu, -lu)
    } else {
        // v'' - x v' + m v = 0, monic of degree m.
        let m = -alpha2;
        let deg = m as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = Rational::one();
        for j in (0..deg.saturating_sub(1)).rev() {
            // (j + 2)(j + 1) c_{j+2} + (m - j) c_j = 0
            let jj = j as i64;
            c[j] = int((jj + 2) * (jj + 1)) * &c[j + 2] / int(jj - m);
        }
        let v = Poly::new(c);
        let lv = RatFunc::new(v.derivative(), v);
        (lv.clone(), &x - &lv)
    };
    RationalTriple {
        f: [RatFunc::zero(), f2, f3],
        params,
    }
}

/// A real pole with its certified location.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPole {
    pub kind: PoleType,
    pub location: RealRoot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityProfile {
    pub sequence: SymbolSequence,
    pub poles: Vec<RealPole>,
}

/// Whether `q` vanishes at the root of the square-free `p` isolated in
/// `root` (exact: counts roots of `gcd(p, q)` in the interval).
fn vanishes_at(q: &Poly, p: &Poly, root: &RealRoot) -> bool {
    if q.is_zero() {
        return true;
    }
    let g = p.gcd(q);
    if g.is_constant() {
        return false;
    }
    if root.lo == root.hi {
        return g.eval(&root.lo).is_zero();
    }
    let seq = sturm::sturm_sequence(&g);
    // The interval is half-open (lo, hi]; widen the left end by nothing
    // since lo is never a root of p.
    sturm::count_roots(&seq, &root.lo, &root.hi) > 0
}

fn endpoint_class(f: &[RatFunc; 3]) -> Result<Endpoint, RationalError> {
    let third = ratio(1, 3);
    let is_c = f
        .iter()
        .all(|c| c.order_at_infinity() == Some(1) && c.leading_coefficient() == third);
    if is_c {
        return Ok(Endpoint::C);
    }
    for k in 0..3 {
        let dominant = f[k].order_at_infinity() == Some(1) && f[k].leading_coefficient().is_one();
        let others_decay = (1..3).all(|d| {
            let g = &f[(k + d) % 3];
            g.is_zero() || g.order_at_infinity().is_some_and(|o| o < 0)
        });
        if dominant && others_decay {
            return Ok(Endpoint::B(k as u8 + 1));
        }
    }
    Err(RationalError::UnclassifiedEndpoint)
}

/// Real poles in increasing order, each classified by the component that
/// vanishes there and the residues of the other two; endpoints from the
/// leading behaviour at infinity.
pub fn singularity_profile(r: &RationalTriple) -> Result<SingularityProfile, RationalError> {
    let end = endpoint_class(&r.f)?;
    let mut all = Poly::one();
    for c in &r.f {
        all = &all * c.den();
    }
    let p = all.square_free();
    let roots = isolate_real_roots(&p, ROOT_WIDTH);
    let mut poles = Vec::with_capacity(roots.len());
    for root in roots {
        let at = root.approx();
        let mut singular = [false; 3];
        for (i, c) in r.f.iter().enumerate() {
            singular[i] = vanishes_at(c.den(), &p, &root);
            if singular[i] {
                let d = c.den();
                if vanishes_at(&d.derivative(), &p, &root) {
                    return Err(RationalError::NonSimplePole(at));
                }
            }
        }
        // Residue num/den' equals +1 or -1 exactly when num -/+ den' vanishes.
        let residue_is = |i: usize, s: i64| -> bool {
            let c = &r.f[i];
            let q = c.num() - &c.den().derivative().scale(&int(s));
            vanishes_at(&q, &p, &root)
        };
        let kind = (0..3).find(|&k| {
            let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
            !singular[k]
                && singular[k1]
                && singular[k2]
                && vanishes_at(r.f[k].num(), &p, &root)
                && residue_is(k1, 1)
                && residue_is(k2, -1)
        });
        match kind {
            Some(k) => poles.push(RealPole {
                kind: PoleType::new(k + 1).expect("1..=3"),
                location: root,
            }),
            None => return Err(RationalError::UnexpectedPolePattern(at)),
        }
    }
    let sequence = SymbolSequence::new(end.clone(), poles.iter().map(|p| p.kind).collect(), end);
    Ok(SingularityProfile { sequence, poles })
}

/// Polynomial relations in (f1, f2, f3) satisfied by a solution obtained
/// from a fundamental one by `w`.
///
/// The inverse word is applied to indeterminates; the resulting fractions
/// are compared as the fundamental solution dictates (all equal, or the
/// components that vanish there equal to zero). Denominators are cleared
/// and factors coming from the pivots are divided out.
pub fn extract_identities(w: &GroupWord, r: &RationalTriple) -> Result<Vec<MPoly>, RationalError> {
    let inv = w.inverse();
    let base_sol = act_on_rational(&inv, r).map_err(|e| match e {
        SymmetryError::IdenticallyZeroPivot { step } => RationalError::InverseUndefined(step),
        other => other.into(),
    })?;

    let mut state: [MFrac; 3] = std::array::from_fn(|i| MFrac::from_poly(MPoly::var(i + 1)));
    let mut alpha = r.params.as_array().clone();
    let mut base = FactorBase::default();
    for (step, g) in inv.acting_order().enumerate() {
        match g {
            Generator::Sigma => {
                state.rotate_left(1);
                alpha.rotate_left(1);
            }
            Generator::Tau => {
                let pivot = state[0].clone();
                if pivot.is_zero() {
                    return Err(RationalError::InverseUndefined(step + 1));
                }
                base.absorb(&pivot.num);
                base.absorb(&pivot.den);
                let a1 = alpha[0].clone();
                let q = MFrac {
                    num: pivot.den.scale(&a1),
                    den: pivot.num.clone(),
                };
                state[1] = &state[1] + &q;
                state[2] = &state[2] - &q;
                for s in state.iter_mut() {
                    s.reduce(&base);
                }
                alpha = [-&alpha[0], &alpha[1] + &alpha[0], &alpha[2] + &alpha[0]];
            }
        }
    }

    let mut raw = Vec::new();
    let f = &base_sol.f;
    if f[0] == f[1] && f[1] == f[2] {
        raw.push(&state[0] - &state[1]);
        raw.push(&state[1] - &state[2]);
    } else {
        for (i, c) in f.iter().enumerate() {
            if c.is_zero() {
                raw.push(state[i].clone());
            }
        }
        if raw.is_empty() {
            return Err(RationalError::NotFundamental);
        }
    }

    let mut out: Vec<MPoly> = Vec::new();
    for mut rel in raw {
        rel.reduce(&base);
        let stripped = base.strip(&rel.num).primitive();
        let full = rel.num.primitive();
        let chosen = if stripped.substitute(&r.f).is_zero() {
            stripped
        } else {
            full
        };
        if !chosen.is_zero() && !out.contains(&chosen) {
            out.push(chosen);
        }
    }
    Ok(out)
}

/// Whether `rel` vanishes identically on `r`.
pub fn relation_vanishes(rel: &MPoly, r: &RationalTriple) -> bool {
    rel.substitute(&r.f).is_zero()
}

/// Decimal approximations of isolated pole locations.
pub fn pole_locations(profile: &SingularityProfile) -> Vec<f64> {
    profile.poles.iter().map(|p| p.location.approx()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d))
    }

    /// The printed solution at (-2/3, 1/3, 4/3).
    fn printed_center_solution() -> RationalTriple {
        RationalTriple {
            f: [
                rf(&[-3, 0, 1], &[0, 3]),
                rf(&[0, 3, 0, 1], &[-9, 0, 3]),
                rf(&[-9, 0, -6, 0, 1], &[0, -9, 0, 3]),
            ],
            params: ExactParams::from_ratios([(-2, 3), (1, 3), (4, 3)]).unwrap(),
        }
    }

    /// The printed solution at (2, 2, -3).
    fn printed_vertex_solution() -> RationalTriple {
        let x2m3 = Poly::from_i64(&[-3, 0, 1]);
        let x2p1 = Poly::from_i64(&[1, 0, 1]);
        let x2m1 = Poly::from_i64(&[-1, 0, 1]);
        let x2p3 = Poly::from_i64(&[3, 0, 1]);
        let x4p3 = Poly::from_i64(&[3, 0, 0, 0, 1]);
        let two_x = Poly::from_i64(&[0, 2]);
        let x = Poly::x();
        let f1 = RatFunc::new(&(&two_x * &x2m3) * &x2p1, &x2m1 * &x4p3);
        let f2 = RatFunc::new(-(&(&two_x * &x2m1) * &x2p3), &x2p1 * &x4p3);
        let f3 = RatFunc::new(&x * &x4p3, &x2m1 * &x2p1);
        RationalTriple {
            f: [f1, f2, f3],
            params: ExactParams::from_ratios([(2, 1), (2, 1), (-3, 1)]).unwrap(),
        }
    }

    fn mp(terms: &[(i64, [u32; 3])]) -> MPoly {
        terms.iter().fold(MPoly::zero(), |acc, (c, e)| {
            acc + MPoly::monomial(*e, int(*c))
        })
    }

    fn same_up_to_scale(a: &MPoly, b: &MPoly) -> bool {
        a.primitive() == b.primitive() || a.primitive() == (-b).primitive()
    }

    #[test]
    fn fundamentals_verify() {
        assert_eq!(
            verify_spiv(&RationalTriple::fundamental_center()),
            SpivResidual::Zero
        );
        assert_eq!(
            verify_spiv(&RationalTriple::fundamental_vertex()),
            SpivResidual::Zero
        );
        assert!(RationalTriple::fundamental_center().constraint_holds());
    }

    #[test]
    fn printed_solutions_verify() {
        for r in [printed_center_solution(), printed_vertex_solution()] {
            assert_eq!(verify_spiv(&r), SpivResidual::Zero);
            assert!(r.constraint_holds());
        }
    }

    #[test]
    fn wrong_parameters_leave_residual() {
        let mut r = RationalTriple::fundamental_center();
        r.params = ExactParams::from_ratios([(1, 2), (1, 4), (1, 4)]).unwrap();
        assert!(matches!(
            verify_spiv(&r),
            SpivResidual::Residual { component: 1, .. }
        ));
    }

    #[test]
    fn word_reproduces_center_solution() {
        let w: GroupWord = "t s s t".parse().unwrap();
        let r = act_on_rational(&w, &RationalTriple::fundamental_center()).unwrap();
        assert_eq!(r, printed_center_solution());
    }

    #[test]
    fn word_reproduces_vertex_solution() {
        let w: GroupWord = "s t s s t s s t s t s t".parse().unwrap();
        let r = act_on_rational(&w, &RationalTriple::fundamental_vertex()).unwrap();
        assert_eq!(r, printed_vertex_solution());
    }

    #[test]
    fn hermite_small_cases() {
        let h1 = hermite_family(1);
        assert_eq!(h1.f, [RatFunc::zero(), RatFunc::x(), RatFunc::zero()]);
        let h2 = hermite_family(2);
        let inv_x = RatFunc::x().inv();
        assert_eq!(h2.f[1], &RatFunc::x() + &inv_x);
        assert_eq!(h2.f[2], -inv_x);
        let hm2 = hermite_family(-2);
        assert_eq!(hm2.f[1], rf(&[0, 2], &[-1, 0, 1]));
        for a in -6..=7 {
            let h = hermite_family(a);
            assert_eq!(verify_spiv(&h), SpivResidual::Zero, "alpha2 = {a}");
            assert!(h.constraint_holds());
        }
    }

    #[test]
    fn profile_of_center_solution() {
        let p = singularity_profile(&printed_center_solution()).unwrap();
        assert_eq!(p.sequence.to_string(), "C A1 A2 A1 C");
        let s3 = 3f64.sqrt();
        for (x, e) in pole_locations(&p).iter().zip([-s3, 0.0, s3]) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(
            singularity_profile(&RationalTriple::fundamental_center())
                .unwrap()
                .sequence
                .to_string(),
            "C C"
        );
    }

    #[test]
    fn profile_of_vertex_solution() {
        let p = singularity_profile(&printed_vertex_solution()).unwrap();
        assert_eq!(p.sequence.to_string(), "B3 A2 A2 B3");
    }

    #[test]
    fn profile_rejects_double_pole() {
        let bad = RationalTriple {
            f: [
                rf(&[1], &[0, 0, 1]),
                rf(&[0, 1], &[1]),
                rf(&[-1], &[0, 0, 1]),
            ],
            params: ExactParams::from_ratios([(1, 3), (1, 3), (1, 3)]).unwrap(),
        };
        assert!(matches!(
            singularity_profile(&bad),
            Err(RationalError::NonSimplePole(_))
        ));
    }

    #[test]
    fn identities_for_center_solution() {
        let w: GroupWord = "t s s t".parse().unwrap();
        let r = printed_center_solution();
        let rels = extract_identities(&w, &r).unwrap();
        let p1 = mp(&[
            (9, [2, 2, 0]),
            (-9, [2, 1, 1]),
            (3, [2, 0, 0]),
            (-18, [1, 1, 0]),
            (6, [1, 0, 1]),
            (8, [0, 0, 0]),
        ]);
        let p2 = mp(&[
            (-9, [3, 1, 0]),
            (9, [2, 1, 1]),
            (6, [1, 1, 0]),
            (-6, [1, 0, 1]),
            (-4, [0, 0, 0]),
        ]);
        assert_eq!(rels.len(), 2);
        assert!(rels.iter().all(|q| relation_vanishes(q, &r)));
        assert!(relation_vanishes(&p1, &r) && relation_vanishes(&p2, &r));
        assert!(rels.iter().any(|q| same_up_to_scale(q, &p1)), "{}", rels[0]);
        assert!(rels.iter().any(|q| same_up_to_scale(q, &p2)), "{}", rels[1]);
    }

    #[test]
    fn identities_for_vertex_solution() {
        let w: GroupWord = "s t s s t s s t s t s t".parse().unwrap();
        let r = printed_vertex_solution();
        let rels = extract_identities(&w, &r).unwrap();
        let p1 = mp(&[
            (1, [2, 1, 2]),
            (1, [2, 0, 1]),
            (-5, [1, 1, 1]),
            (-1, [1, 0, 2]),
            (-3, [1, 0, 0]),
            (6, [0, 1, 0]),
            (2, [0, 0, 1]),
        ]);
        let p2 = mp(&[
            (1, [1, 2, 2]),
            (5, [1, 1, 1]),
            (-1, [0, 2, 1]),
            (1, [0, 1, 2]),
            (6, [1, 0, 0]),
            (-3, [0, 1, 0]),
            (2, [0, 0, 1]),
        ]);
        assert!(relation_vanishes(&p1, &r) && relation_vanishes(&p2, &r));
        assert_eq!(rels.len(), 2);
        assert!(rels.iter().all(|q| relation_vanishes(q, &r)));
        assert!(rels.iter().any(|q| same_up_to_scale(q, &p1)), "{}", rels[0]);
        assert!(rels.iter().any(|q| same_up_to_scale(q, &p2)), "{}", rels[1]);
    }

    #[test]
    fn identities_for_identity_word() {
        let r = RationalTriple::fundamental_center();
        let rels = extract_identities(&GroupWord::identity(), &r).unwrap();
        let f = |i| MPoly::var(i);
        assert_eq!(
            rels,
            vec![(f(1) - f(2)).primitive(), (f(2) - f(3)).primitive()]
        );
    }

    #[test]
    fn json_roundtrip() {
        let r = printed_vertex_solution();
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back: RationalTripleJson = serde_json::from_str(&j).unwrap();
        assert_eq!(RationalTriple::from_json(&back).unwrap(), r);
    }
}
