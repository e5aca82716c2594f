//! Allowed transitions between consecutive symbols, per sign case.
//!
//! Rows are the symbol a stretch of the solution starts from (the pole just
//! passed, or C/B at minus infinity); columns are the symbol it ends at.
//! A cell lists the components that change sign in between; `X` marks an
//! excluded transition and an empty string an allowed one with no sign
//! changes.
//!
//! Six cells of the pole table in the `--+`, `+--` and `-+-` blocks
//! (A1/A3, A1/A2 and A2/A3 in both directions) carry the extra component
//! forced by the residue signs at the two poles; see the oracle test below.

use super::{SequenceError, SignChanges, Symbol};
use crate::params::SignCase;

type Block = [[&'static str; 4]; 4];

/// C and A1..A3, blocks in the order of [`SignCase::ALL`].
const POLE_TABLE: [Block; 7] = [
    // + + +
    [
        ["1,2,3", "1,3", "1,2", "2,3"],
        ["1,3", "X", "1", "3"],
        ["1,2", "1", "X", "2"],
        ["2,3", "3", "2", "X"],
    ],
    // + + -
    [
        ["X", "X", "1,2", "2"],
        ["X", "X", "1", ""],
        ["1,2", "1", "1,2,3", "2,3"],
        ["2", "", "2,3", "X"],
    ],
    // - + +
    [
        ["X", "3", "X", "2,3"],
        ["3", "X", "", "1,3"],
        ["X", "", "X", "2"],
        ["2,3", "1,3", "2", "1,2,3"],
    ],
    // + - +
    [
        ["X", "1,3", "1", "X"],
        ["1,3", "1,2,3", "1,2", "3"],
        ["1", "1,2", "X", ""],
        ["X", "3", "", "X"],
    ],
    // - - +
    [
        ["X", "3", "X", "X"],
        ["3", "1,2,3", "2", "1,3"],
        ["X", "2", "X", ""],
        ["X", "1,3", "", "X"],
    ],
    // + - -
    [
        ["X", "X", "1", "X"],
        ["X", "X", "1,2", ""],
        ["1", "1,2", "1,2,3", "3"],
        ["X", "", "3", "X"],
    ],
    // - + -
    [
        ["X", "X", "X", "2"],
        ["X", "X", "", "1"],
        ["X", "", "X", "2,3"],
        ["2", "1", "2,3", "1,2,3"],
    ],
];

/// C and B1..B3, blocks in the order of [`SignCase::ALL`].
const ASYMPTOTIC_TABLE: [Block; 7] = [
    // + + +
    [
        ["1,2,3", "1,2", "2,3", "1,3"],
        ["1,2", "X", "2", "1"],
        ["2,3", "2", "X", "3"],
        ["1,3", "1", "3", "X"],
    ],
    // + + -
    [
        ["X", "X", "2", "X"],
        ["X", "X", "2", "X"],
        ["2", "2", "X", ""],
        ["X", "X", "", "X"],
    ],
    // - + +
    [
        ["X", "X", "X", "3"],
        ["X", "X", "X", ""],
        ["X", "X", "X", "3"],
        ["3", "", "3", "X"],
    ],
    // + - +
    [
        ["X", "1", "X", "X"],
        ["1", "X", "", "1"],
        ["X", "", "X", "X"],
        ["X", "1", "X", "X"],
    ],
    // - - +
    [
        ["X", "X", "X", "X"],
        ["X", "X", "X", ""],
        ["X", "X", "X", "X"],
        ["X", "", "X", "X"],
    ],
    // + - -
    [
        ["X", "X", "X", "X"],
        ["X", "X", "", "X"],
        ["X", "", "X", "X"],
        ["X", "X", "X", "X"],
    ],
    // - + -
    [
        ["X", "X", "X", "X"],
        ["X", "X", "X", "X"],
        ["X", "X", "X", ""],
        ["X", "X", "", "X"],
    ],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transition {
    Forbidden,
    Allowed(SignChanges),
}

impl Transition {
    pub fn is_allowed(self) -> bool {
        matches!(self, Transition::Allowed(_))
    }

    pub fn sign_changes(self) -> Option<SignChanges> {
        match self {
            Transition::Allowed(s) => Some(s),
            Transition::Forbidden => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Poles,
    Asymptotic,
}

fn parse_cell(cell: &str) -> Transition {
    if cell == "X" {
        return Transition::Forbidden;
    }
    let mut s = SignChanges::empty();
    for part in cell.split(',').filter(|p| !p.is_empty()) {
        s = s.with(part.parse().expect("table component index"));
    }
    Transition::Allowed(s)
}

fn case_index(case: SignCase) -> usize {
    SignCase::ALL
        .iter()
        .position(|c| *c == case)
        .expect("sign case is one of the seven")
}

/// Raw lookup by slot: slot 0 is C, slots 1..=3 are A_k or B_k.
pub fn table_cell(kind: TableKind, case: SignCase, from: usize, to: usize) -> Transition {
    let table = match kind {
        TableKind::Poles => &POLE_TABLE,
        TableKind::Asymptotic => &ASYMPTOTIC_TABLE,
    };
    parse_cell(table[case_index(case)][from][to])
}

fn slot(s: &Symbol) -> Option<(Option<TableKind>, usize)> {
    match s {
        Symbol::C => Some((None, 0)),
        Symbol::A(k) => Some((Some(TableKind::Poles), k.index())),
        Symbol::B(k) => Some((Some(TableKind::Asymptotic), *k as usize)),
        Symbol::Open => None,
    }
}

pub fn transition_rule(
    case: SignCase,
    from: &Symbol,
    to: &Symbol,
) -> Result<Transition, SequenceError> {
    let untabulated = || SequenceError::UntabulatedPair(from.to_string(), to.to_string());
    let (kf, i) = slot(from).ok_or_else(untabulated)?;
    let (kt, j) = slot(to).ok_or_else(untabulated)?;
    let kind = match (kf, kt) {
        (None, None) => TableKind::Poles,
        (Some(k), None) | (None, Some(k)) => k,
        (Some(a), Some(b)) if a == b => a,
        _ => return Err(untabulated()),
    };
    Ok(table_cell(kind, case, i, j))
}

fn sigma_slot(slot: usize) -> usize {
    match slot {
        0 => 0,
        1 => 3,
        k => k - 1,
    }
}

/// Cells whose σ-image disagrees with the table: relabelling the case,
/// both slots and the sign-change components by σ must map every block of
/// either table onto another block of the same table.
pub fn sigma_orbit_violations() -> Vec<String> {
    let mut bad = Vec::new();
    for kind in [TableKind::Poles, TableKind::Asymptotic] {
        for case in SignCase::ALL {
            for i in 0..4 {
                for j in 0..4 {
                    let mapped = match table_cell(kind, case, i, j) {
                        Transition::Forbidden => Transition::Forbidden,
                        Transition::Allowed(ch) => Transition::Allowed(
                            ch.components()
                                .fold(SignChanges::empty(), |acc, c| acc.with(sigma_slot(c))),
                        ),
                    };
                    if table_cell(kind, case.sigma(), sigma_slot(i), sigma_slot(j)) != mapped {
                        bad.push(format!("{kind:?} {case} {i}->{j}"));
                    }
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::PoleType;

    #[test]
    fn spot_checks() {
        let a = |k| Symbol::A(PoleType::new(k).unwrap());
        assert_eq!(
            transition_rule(SignCase::PPP, &a(1), &a(1)).unwrap(),
            Transition::Forbidden
        );
        assert_eq!(
            transition_rule(SignCase::PPP, &Symbol::C, &Symbol::C).unwrap(),
            Transition::Allowed(SignChanges::from_slice(&[1, 2, 3]))
        );
        assert_eq!(
            transition_rule(SignCase::PPM, &a(2), &a(2)).unwrap(),
            Transition::Allowed(SignChanges::from_slice(&[1, 2, 3]))
        );
        assert!(matches!(
            transition_rule(SignCase::PPP, &a(1), &Symbol::B(2)),
            Err(SequenceError::UntabulatedPair(..))
        ));
    }

    #[test]
    fn c_to_c_agrees_between_tables() {
        for case in SignCase::ALL {
            assert_eq!(
                table_cell(TableKind::Poles, case, 0, 0),
                table_cell(TableKind::Asymptotic, case, 0, 0),
                "{case}"
            );
        }
    }

    fn sign(b: bool) -> i8 {
        if b {
            1
        } else {
            -1
        }
    }

    // Component signs just after (start) or just before (end) each slot,
    // read off the local expansions: f_{k+1} ~ 1/(x-x0), f_{k+2} ~ -1/(x-x0),
    // f_k ~ -a_k (x-x0) at an A_k pole; f_k ~ x, f_{k+1} ~ a/x, f_{k+2} ~ -a/x
    // at B_k; all of f ~ x/3 at C.
    fn slot_signs(kind: TableKind, case: SignCase, slot: usize, start: bool) -> [i8; 3] {
        let a = case.0.map(sign);
        let side: i8 = if start { -1 } else { 1 };
        if slot == 0 {
            return [side; 3];
        }
        let k = slot - 1;
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        let mut s = [0i8; 3];
        match kind {
            TableKind::Poles => {
                // x - x0 > 0 after the pole, < 0 before it.
                let d = -side;
                s[k1] = d;
                s[k2] = -d;
                s[k] = -a[k] * d;
            }
            TableKind::Asymptotic => {
                s[k] = side;
                s[k1] = side * a[k1];
                s[k2] = -side * a[k2];
            }
        }
        s
    }

    fn oracle(kind: TableKind, case: SignCase, from: usize, to: usize) -> Transition {
        let a = case.0.map(sign);
        let (s, e) = (
            slot_signs(kind, case, from, true),
            slot_signs(kind, case, to, false),
        );
        let mut ch = SignChanges::empty();
        for i in 0..3 {
            if s[i] != e[i] {
                // every zero of f_i crosses in the direction of a_i
                if e[i] != a[i] {
                    return Transition::Forbidden;
                }
                ch = ch.with(i + 1);
            }
        }
        Transition::Allowed(ch)
    }

    #[test]
    fn tables_match_sign_bookkeeping() {
        for kind in [TableKind::Poles, TableKind::Asymptotic] {
            for case in SignCase::ALL {
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(
                            table_cell(kind, case, i, j),
                            oracle(kind, case, i, j),
                            "{kind:?} {case} {i}->{j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_orbit_consistency() {
        assert_eq!(sigma_orbit_violations(), Vec::<String>::new());
    }
}
