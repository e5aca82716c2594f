//! Singularity sequences: the ordered record of a real solution's endpoint
//! behaviour and pole types, with the adjacency rules and the group action
//! on them.

mod admissible;
mod tables;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use admissible::{
    enumerate_finite, enumerate_finite_at, forced_predecessors, forced_successors, is_admissible,
    transform_sequence, transform_word, unique_finite_sequence,
};
pub use tables::{sigma_orbit_violations, table_cell, transition_rule, TableKind, Transition};

use crate::params::{ParamError, ParamScalar, ParameterTriple};
use crate::symmetry::SymmetryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    #[error("UntabulatedPair: no rule for {0} followed by {1}")]
    UntabulatedPair(String, String),
    #[error("MissingZeroData: sign changes unknown in gap {0}")]
    MissingZeroData(usize),
    #[error("Violation: transformed sequence breaks the adjacency rules at pair {0}")]
    Violation(usize),
    #[error("NonGenericParameters: some alpha_i is an integer")]
    NonGenericParameters,
    #[error("Parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Pole type A_k, k in 1..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoleType(u8);

impl PoleType {
    pub const A1: PoleType = PoleType(1);
    pub const A2: PoleType = PoleType(2);
    pub const A3: PoleType = PoleType(3);
    pub const ALL: [PoleType; 3] = [Self::A1, Self::A2, Self::A3];

    pub fn new(k: usize) -> Option<Self> {
        (1..=3).contains(&k).then_some(PoleType(k as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Relabelling under σ: A_k becomes A_{k-1 mod 3}.
    pub fn sigma(self) -> Self {
        PoleType(if self.0 == 1 { 3 } else { self.0 - 1 })
    }
}

impl fmt::Display for PoleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

/// Behaviour at one end of the real line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    C,
    B(u8),
    /// Infinitely many poles; the vector is the declared repeating tail
    /// (empty when only a finite observation is available).
    Open(Vec<PoleType>),
}

impl Endpoint {
    pub fn symbol(&self) -> Symbol {
        match self {
            Endpoint::C => Symbol::C,
            Endpoint::B(k) => Symbol::B(*k),
            Endpoint::Open(_) => Symbol::Open,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Endpoint::Open(_))
    }

    fn sigma(&self) -> Endpoint {
        match self {
            Endpoint::C => Endpoint::C,
            Endpoint::B(k) => Endpoint::B(if *k == 1 { 3 } else { k - 1 }),
            Endpoint::Open(p) => Endpoint::Open(p.iter().map(|k| k.sigma()).collect()),
        }
    }

    /// τ fixes C and B1 and swaps B2 with B3.
    fn tau(&self) -> Endpoint {
        match self {
            Endpoint::B(2) => Endpoint::B(3),
            Endpoint::B(3) => Endpoint::B(2),
            other => other.clone(),
        }
    }
}

/// Any entry of a sequence, as used for table lookups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    C,
    A(PoleType),
    B(u8),
    Open,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::C => f.write_str("C"),
            Symbol::A(k) => write!(f, "{k}"),
            Symbol::B(k) => write!(f, "B{k}"),
            Symbol::Open => f.write_str("..."),
        }
    }
}

/// Set of components (1..=3) that change sign across a gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignChanges(u8);

impl SignChanges {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn from_slice(v: &[usize]) -> Self {
        v.iter().fold(Self::empty(), |s, &i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        assert!((1..=3).contains(&i));
        Self(self.0 | (1 << (i - 1)))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=3).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn components(self) -> impl Iterator<Item = usize> {
        (1..=3).filter(move |&i| self.contains(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for SignChanges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.components().map(|i| i.to_string()).collect();
        f.write_str(&v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    pub left: Endpoint,
    pub interior: Vec<PoleType>,
    pub right: Endpoint,
    /// Optional marked centre `[start, end)` into `interior`, used for
    /// doubly infinite forms.
    pub center: Option<(usize, usize)>,
}

impl SymbolSequence {
    pub fn new(left: Endpoint, interior: Vec<PoleType>, right: Endpoint) -> Self {
        Self {
            left,
            interior,
            right,
            center: None,
        }
    }

    pub fn cc() -> Self {
        Self::new(Endpoint::C, Vec::new(), Endpoint::C)
    }

    pub fn is_finite(&self) -> bool {
        self.left.is_finite() && self.right.is_finite()
    }

    /// Endpoints and poles in order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = Vec::with_capacity(self.interior.len() + 2);
        v.push(self.left.symbol());
        v.extend(self.interior.iter().map(|&k| Symbol::A(k)));
        v.push(self.right.symbol());
        v
    }

    /// Sign-change sets of each gap, read off the tables; `None` for gaps
    /// the tables say nothing about.
    pub fn zero_markers<T: ParamScalar>(
        &self,
        p: &ParameterTriple<T>,
    ) -> Result<Vec<Option<SignChanges>>, SequenceError> {
        let case = p.sign_case()?;
        let s = self.symbols();
        Ok(s.windows(2)
            .map(|w| {
                transition_rule(case, &w[0], &w[1])
                    .ok()
                    .and_then(|t| t.sign_changes())
            })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    Valid,
    /// Index of the first offending pair (pair `i` joins symbols `i` and
    /// `i + 1`, counting the left endpoint as symbol 0).
    Violation {
        position: usize,
    },
}

/// Checks every adjacent pair against the table for the sign case of `p`.
/// Pairs the tables do not cover (pole next to a B end, or an open end) are
/// skipped.
pub fn validate_sequence<T: ParamScalar>(
    s: &SymbolSequence,
    p: &ParameterTriple<T>,
) -> Result<Validation, SequenceError> {
    let case = p.sign_case()?;
    let syms = s.symbols();
    for (i, w) in syms.windows(2).enumerate() {
        match transition_rule(case, &w[0], &w[1]) {
            Ok(Transition::Forbidden) => return Ok(Validation::Violation { position: i }),
            Ok(Transition::Allowed(_)) | Err(SequenceError::UntabulatedPair(..)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Validation::Valid)
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match &self.left {
            Endpoint::Open(_) => parts.push("...".into()),
            e => parts.push(e.symbol().to_string()),
        }
        for (i, k) in self.interior.iter().enumerate() {
            if let Some((a, b)) = self.center {
                if i == a {
                    parts.push("|".into());
                }
                if i == b && b != a {
                    parts.push("|".into());
                }
            }
            parts.push(k.to_string());
        }
        if let Some((a, b)) = self.center {
            if b == self.interior.len() {
                if a == b {
                    parts.push("|".into());
                }
                parts.push("|".into());
            }
        }
        match &self.right {
            Endpoint::Open(_) => parts.push("...".into()),
            e => parts.push(e.symbol().to_string()),
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for SymbolSequence {
    type Err = SequenceError;

    /// Tokens are `C`, `B1..B3`, `A1..A3`, `...` and `|`, separated by
    /// whitespace or written together (`CA1A2A1C`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SequenceError::Parse(format!("cannot read symbol sequence from {s:?}"));
        let mut tokens = Vec::new();
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                'C' => {
                    tokens.push("C".to_string());
                    i += 1;
                }
                '|' => {
                    tokens.push("|".to_string());
                    i += 1;
                }
                '.' | '…' => {
                    while i < chars.len() && (chars[i] == '.' || chars[i] == '…') {
                        i += 1;
                    }
                    tokens.push("...".to_string());
                }
                c @ ('A' | 'B') => {
                    let d = chars.get(i + 1).ok_or_else(err)?;
                    if !('1'..='3').contains(d) {
                        return Err(err());
                    }
                    tokens.push(format!("{c}{d}"));
                    i += 2;
                }
                _ => return Err(err()),
            }
        }
        if tokens.len() < 2 {
            return Err(err());
        }
        let end = |t: &str| -> Option<Endpoint> {
            match t {
                "C" => Some(Endpoint::C),
                "..." => Some(Endpoint::Open(Vec::new())),
                t if t.starts_with('B') => Some(Endpoint::B(t[1..].parse().ok()?)),
                _ => None,
            }
        };
        let left = end(&tokens[0]).ok_or_else(err)?;
        let right = end(&tokens[tokens.len() - 1]).ok_or_else(err)?;
        let mut interior = Vec::new();
        let mut marks = Vec::new();
        for t in &tokens[1..tokens.len() - 1] {
            if t == "|" {
                marks.push(interior.len());
            } else if let Some(k) = t.strip_prefix('A') {
                interior.push(PoleType::new(k.parse().map_err(|_| err())?).ok_or_else(err)?);
            } else {
                return Err(err());
            }
        }
        let center = match marks.as_slice() {
            [] => None,
            [a, b] => Some((*a, *b)),
            _ => return Err(err()),
        };
        Ok(SymbolSequence {
            left,
            interior,
            right,
            center,
        })
    }
}

pub(crate) fn sigma_sequence(s: &SymbolSequence) -> SymbolSequence {
    SymbolSequence {
        left: s.left.sigma(),
        interior: s.interior.iter().map(|k| k.sigma()).collect(),
        right: s.right.sigma(),
        center: s.center,
    }
}

pub(crate) fn tau_endpoint(e: &Endpoint) -> Endpoint {
    e.tau()
}
