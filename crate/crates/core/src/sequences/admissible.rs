//! The group action on sequences and the admissibility search built on it.

use super::tables::{transition_rule, Transition};
use super::{
    sigma_sequence, tau_endpoint, Endpoint, PoleType, SequenceError, Symbol, SymbolSequence,
};
use crate::params::{ParamScalar, ParameterTriple, SignCase};
use crate::symmetry::{act_on_alpha, reduce_to_positive, Generator, GroupWord};

/// τ on a list of symbols whose ends may be open. Gaps touching an open
/// end contribute nothing (their zeros are unknown); every other gap must
/// be tabulated.
fn tau_symbols(syms: &[Symbol], case: SignCase) -> Result<Vec<Symbol>, SequenceError> {
    let mut out = Vec::with_capacity(syms.len() + 2);
    out.push(tau_symbol(syms[0]));
    for (gap, w) in syms.windows(2).enumerate() {
        if w[0] != Symbol::Open && w[1] != Symbol::Open {
            match transition_rule(case, &w[0], &w[1]) {
                Ok(Transition::Allowed(ch)) => {
                    if ch.contains(1) {
                        out.push(Symbol::A(PoleType::A1));
                    }
                }
                Ok(Transition::Forbidden) => return Err(SequenceError::Violation(gap)),
                Err(SequenceError::UntabulatedPair(..)) => {
                    return Err(SequenceError::MissingZeroData(gap))
                }
                Err(e) => return Err(e),
            }
        }
        let last = gap + 2 == syms.len();
        match w[1] {
            Symbol::A(PoleType::A1) if !last => {}
            s => out.push(tau_symbol(s)),
        }
    }
    Ok(out)
}

fn tau_symbol(s: Symbol) -> Symbol {
    match s {
        Symbol::B(2) => Symbol::B(3),
        Symbol::B(3) => Symbol::B(2),
        other => other,
    }
}

fn sigma_symbols(syms: &[Symbol]) -> Vec<Symbol> {
    syms.iter()
        .map(|s| match s {
            Symbol::A(k) => Symbol::A(k.sigma()),
            Symbol::B(k) => Symbol::B(if *k == 1 { 3 } else { k - 1 }),
            other => *other,
        })
        .collect()
}

/// First forbidden adjacent pair, skipping pairs the tables do not cover.
fn first_violation(syms: &[Symbol], case: SignCase) -> Option<usize> {
    syms.windows(2).position(|w| {
        matches!(
            transition_rule(case, &w[0], &w[1]),
            Ok(Transition::Forbidden)
        )
    })
}

fn apply_word_symbols<T: ParamScalar>(
    w: &GroupWord,
    syms: &[Symbol],
    p: &ParameterTriple<T>,
) -> Result<(Vec<Symbol>, ParameterTriple<T>), SequenceError> {
    let mut cur = syms.to_vec();
    let mut params = p.clone();
    for g in w.acting_order() {
        match g {
            Generator::Sigma => cur = sigma_symbols(&cur),
            Generator::Tau => cur = tau_symbols(&cur, params.sign_case()?)?,
        }
        let one = match g {
            Generator::Sigma => GroupWord::sigma(),
            Generator::Tau => GroupWord::tau(),
        };
        params = act_on_alpha(&one, &params);
    }
    Ok((cur, params))
}

/// One generator on a sequence. τ needs every gap tabulated; σ always
/// succeeds.
pub fn transform_sequence<T: ParamScalar>(
    s: &SymbolSequence,
    p: &ParameterTriple<T>,
    g: Generator,
) -> Result<(SymbolSequence, ParameterTriple<T>), SequenceError> {
    match g {
        Generator::Sigma => Ok((sigma_sequence(s), act_on_alpha(&GroupWord::sigma(), p))),
        Generator::Tau => {
            let case = p.sign_case()?;
            let syms = s.symbols();
            if let Some(gap) = syms
                .windows(2)
                .position(|w| w[0] == Symbol::Open || w[1] == Symbol::Open)
            {
                return Err(SequenceError::MissingZeroData(gap));
            }
            let out = tau_symbols(&syms, case)?;
            let interior = out[1..out.len() - 1]
                .iter()
                .map(|s| match s {
                    Symbol::A(k) => *k,
                    _ => unreachable!("interior symbols are poles"),
                })
                .collect();
            let seq = SymbolSequence::new(tau_endpoint(&s.left), interior, tau_endpoint(&s.right));
            Ok((seq, act_on_alpha(&GroupWord::tau(), p)))
        }
    }
}

/// A whole word on a sequence, generator by generator.
pub fn transform_word<T: ParamScalar>(
    s: &SymbolSequence,
    p: &ParameterTriple<T>,
    w: &GroupWord,
) -> Result<(SymbolSequence, ParameterTriple<T>), SequenceError> {
    let mut cur = (s.clone(), p.clone());
    for g in w.acting_order() {
        cur = transform_sequence(&cur.0, &cur.1, g)?;
    }
    Ok(cur)
}

/// Words of length 1..=depth over σ and the three wall reflections.
fn test_words(depth: usize) -> Vec<GroupWord> {
    let alphabet = [
        GroupWord::sigma(),
        GroupWord::reflection(1),
        GroupWord::reflection(2),
        GroupWord::reflection(3),
    ];
    let mut out = Vec::new();
    let mut layer = vec![GroupWord::identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for a in &alphabet {
                next.push(a.compose(w));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn admissible_symbols<T: ParamScalar>(
    syms: &[Symbol],
    p: &ParameterTriple<T>,
    words: &[GroupWord],
) -> Result<bool, SequenceError> {
    if first_violation(syms, p.sign_case()?).is_some() {
        return Ok(false);
    }
    for w in words {
        match apply_word_symbols(w, syms, p) {
            Ok((img, q)) => {
                if first_violation(&img, q.sign_case()?).is_some() {
                    return Ok(false);
                }
            }
            Err(SequenceError::Violation(_)) => return Ok(false),
            Err(SequenceError::MissingZeroData(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Whether `s` obeys the adjacency rules at `p` and keeps obeying them
/// after every word of length at most `depth` over σ and the reflections.
/// Open ends are allowed; gaps touching them are left unconstrained.
pub fn is_admissible<T: ParamScalar>(
    s: &SymbolSequence,
    p: &ParameterTriple<T>,
    depth: usize,
) -> Result<bool, SequenceError> {
    admissible_symbols(&s.symbols(), p, &test_words(depth))
}

/// All admissible `C ... C` sequences with at most `max_interior` poles,
/// at the representative parameters of `case`.
pub fn enumerate_finite(case: SignCase, max_interior: usize, depth: usize) -> Vec<SymbolSequence> {
    enumerate_finite_at(&case.representative(), max_interior, depth)
        .expect("representative parameters are generic")
}

pub fn enumerate_finite_at<T: ParamScalar>(
    p: &ParameterTriple<T>,
    max_interior: usize,
    depth: usize,
) -> Result<Vec<SymbolSequence>, SequenceError> {
    let case = p.sign_case()?;
    let words = test_words(depth);
    let mut found = Vec::new();
    let mut stack: Vec<Vec<PoleType>> = vec![Vec::new()];
    while let Some(interior) = stack.pop() {
        let seq = SymbolSequence::new(Endpoint::C, interior.clone(), Endpoint::C);
        let syms = seq.symbols();
        if admissible_symbols(&syms, p, &words)? {
            found.push(seq);
        }
        if interior.len() < max_interior {
            for k in PoleType::ALL.iter().rev() {
                let mut next = interior.clone();
                next.push(*k);
                // Prune on the open-ended prefix: the rules are local.
                let mut open = vec![Symbol::C];
                open.extend(next.iter().map(|&k| Symbol::A(k)));
                open.push(Symbol::Open);
                if first_violation(&open, case).is_none() {
                    stack.push(next);
                }
            }
        }
    }
    found.sort_by(|a, b| {
        a.interior
            .len()
            .cmp(&b.interior.len())
            .then_with(|| a.interior.cmp(&b.interior))
    });
    Ok(found)
}

fn declared_period(interior: &[PoleType]) -> Vec<PoleType> {
    for len in 1..=3 {
        if interior.len() >= 2 * len
            && interior
                .iter()
                .rev()
                .skip(len)
                .zip(interior.iter().rev())
                .take(len)
                .all(|(a, b)| a == b)
        {
            return interior[interior.len() - len..].to_vec();
        }
    }
    Vec::new()
}

/// Extends `prefix` (left end C or B, right end open) one symbol at a time
/// while exactly one continuation is admissible, up to `count` new symbols.
pub fn forced_successors<T: ParamScalar>(
    prefix: &SymbolSequence,
    p: &ParameterTriple<T>,
    count: usize,
    depth: usize,
) -> Result<SymbolSequence, SequenceError> {
    let words = test_words(depth);
    let mut interior = prefix.interior.clone();
    for _ in 0..count {
        let mut options = Vec::new();
        for cand in [
            Symbol::A(PoleType::A1),
            Symbol::A(PoleType::A2),
            Symbol::A(PoleType::A3),
            Symbol::C,
        ] {
            let mut syms = vec![prefix.left.symbol()];
            syms.extend(interior.iter().map(|&k| Symbol::A(k)));
            syms.push(cand);
            if cand != Symbol::C {
                syms.push(Symbol::Open);
            }
            if admissible_symbols(&syms, p, &words)? {
                options.push(cand);
            }
        }
        match options.as_slice() {
            [Symbol::A(k)] => interior.push(*k),
            [Symbol::C] => {
                return Ok(SymbolSequence::new(
                    prefix.left.clone(),
                    interior,
                    Endpoint::C,
                ))
            }
            _ => {
                return Err(SequenceError::Parse(format!(
                    "continuation not forced after {} poles",
                    interior.len()
                )))
            }
        }
    }
    let period = declared_period(&interior);
    Ok(SymbolSequence::new(
        prefix.left.clone(),
        interior,
        Endpoint::Open(period),
    ))
}

/// Mirror of [`forced_successors`]: grows an open-left sequence ending in
/// C or B to the left.
pub fn forced_predecessors<T: ParamScalar>(
    suffix: &SymbolSequence,
    p: &ParameterTriple<T>,
    count: usize,
    depth: usize,
) -> Result<SymbolSequence, SequenceError> {
    let words = test_words(depth);
    let mut interior = suffix.interior.clone();
    for _ in 0..count {
        let mut options = Vec::new();
        for cand in [
            Symbol::A(PoleType::A1),
            Symbol::A(PoleType::A2),
            Symbol::A(PoleType::A3),
            Symbol::C,
        ] {
            let mut syms = Vec::new();
            if cand != Symbol::C {
                syms.push(Symbol::Open);
            }
            syms.push(cand);
            syms.extend(interior.iter().map(|&k| Symbol::A(k)));
            syms.push(suffix.right.symbol());
            if admissible_symbols(&syms, p, &words)? {
                options.push(cand);
            }
        }
        match options.as_slice() {
            [Symbol::A(k)] => interior.insert(0, *k),
            [Symbol::C] => {
                return Ok(SymbolSequence::new(
                    Endpoint::C,
                    interior,
                    suffix.right.clone(),
                ))
            }
            _ => {
                return Err(SequenceError::Parse(format!(
                    "predecessor not forced before {} poles",
                    interior.len()
                )))
            }
        }
    }
    let rev: Vec<PoleType> = interior.iter().rev().copied().collect();
    let mut period = declared_period(&rev);
    period.reverse();
    Ok(SymbolSequence::new(
        Endpoint::Open(period),
        interior,
        suffix.right.clone(),
    ))
}

/// The finite sequence forced at generic `p`: reduce to the positive
/// alcove, where it is CC, and carry CC back through the inverse word.
pub fn unique_finite_sequence<T: ParamScalar + PartialOrd>(
    p: &ParameterTriple<T>,
) -> Result<SymbolSequence, SequenceError> {
    if !p.is_generic() {
        return Err(SequenceError::NonGenericParameters);
    }
    let (w, image) = reduce_to_positive(p)?;
    let (s, q) = transform_word(&SymbolSequence::cc(), &image, &w.inverse())?;
    debug_assert!(q.sign_case() == p.sign_case());
    Ok(s)
}
