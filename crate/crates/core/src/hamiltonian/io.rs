//! Plain-text Pauli-sum format.
//!
//! ```text
//! # comment
//! qubits: 4
//! -0.8105
//! 0.1721 Z0
//! 0.0452 X0 X1 Y2 Y3
//! ```
//!
//! Each term line is a real coefficient followed by letter+index tokens; a
//! qubit that does not appear is identity. The `qubits:` header is optional
//! on input (the count is then inferred) and always written on output.

use std::fmt::Write as _;
use std::path::Path;

use super::QubitHamiltonian;
use crate::error::{Error, Result};
use crate::simulator::{Observable, PauliLetter, PauliString, PauliTerm};

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<QubitHamiltonian> {
    parse_hamiltonian(&std::fs::read_to_string(path)?)
}

pub fn parse_hamiltonian(text: &str) -> Result<QubitHamiltonian> {
    let mut declared: Option<(usize, usize)> = None;
    let mut terms: Vec<(usize, PauliTerm)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("qubits:") {
            if declared.is_some() {
                return Err(err("duplicate `qubits:` header".into()));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad qubit count `{}`", rest.trim())))?;
            if n > 64 {
                return Err(err(format!("qubit count {n} exceeds 64")));
            }
            declared = Some((n, lineno));
            continue;
        }

        let mut toks = line.split_whitespace();
        let coeff_tok = toks.next().unwrap_or_default().replace('\u{2212}', "-");
        let coeff: f64 = coeff_tok
            .parse()
            .map_err(|_| err(format!("bad coefficient `{coeff_tok}`")))?;
        if !coeff.is_finite() {
            return Err(err(format!("non-finite coefficient `{coeff_tok}`")));
        }
        let mut string = PauliString::IDENTITY;
        let mut seen = 0u64;
        for tok in toks {
            let mut chars = tok.chars();
            let letter = match chars.next() {
                Some('I') => PauliLetter::I,
                Some('X') => PauliLetter::X,
                Some('Y') => PauliLetter::Y,
                Some('Z') => PauliLetter::Z,
                _ => return Err(err(format!("bad Pauli token `{tok}`"))),
            };
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| err(format!("bad Pauli token `{tok}`")))?;
            if q >= 64 {
                return Err(err(format!("qubit index {q} exceeds 63")));
            }
            if seen >> q & 1 == 1 {
                return Err(err(format!("qubit {q} repeated")));
            }
            seen |= 1 << q;
            string.set(q, letter);
        }
        terms.push((lineno, PauliTerm { coeff, string }));
    }

    if terms.is_empty() {
        return Err(Error::NoTerms);
    }
    let needed = terms.iter().map(|(_, t)| t.string.min_qubits()).max().unwrap_or(0);
    let n_qubits = match declared {
        Some((n, _)) => {
            if let Some((line, t)) = terms.iter().find(|(_, t)| t.string.min_qubits() > n) {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("term `{}` exceeds declared qubit count {n}", t.string),
                });
            }
            n
        }
        None => needed.max(1),
    };
    let obs = Observable::new(n_qubits, terms.into_iter().map(|(_, t)| t).collect())?;
    Ok(QubitHamiltonian::new(obs))
}

/// Serializes with shortest round-trip float formatting.
pub fn write_hamiltonian(h: &QubitHamiltonian) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits: {}", h.n_qubits());
    for t in h.observable().terms() {
        if t.string.is_identity() {
            let _ = writeln!(out, "{:e}", t.coeff);
        } else {
            let _ = writeln!(out, "{:e} {}", t.coeff, t.string);
        }
    }
    out
}

pub fn save_hamiltonian(h: &QubitHamiltonian, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_hamiltonian(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Geometry, HamiltonianBuilder};
    use proptest::prelude::*;

    #[test]
    fn single_term() {
        let h = parse_hamiltonian("\u{2212}1.0 Z0\n").unwrap();
        assert_eq!(h.n_qubits(), 1);
        assert_eq!(h.observable().terms().len(), 1);
        assert_eq!(h.observable().terms()[0].coeff, -1.0);
    }

    #[test]
    fn empty_file_has_no_terms() {
        let e = parse_hamiltonian("").unwrap_err();
        assert_eq!(e.to_string(), "no terms");
        assert!(matches!(parse_hamiltonian("# only comments\nqubits: 2\n"), Err(Error::NoTerms)));
    }

    #[test]
    fn bad_token_names_line() {
        let e = parse_hamiltonian("qubits: 4\n0.5 Z0\n0.1 X1 W3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("W3"));
    }

    #[test]
    fn inconsistent_qubit_count() {
        let e = parse_hamiltonian("qubits: 2\n0.5 Z3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn h3_round_trip() {
        let h = HamiltonianBuilder::default().build(&Geometry::h3(0.94, 0.94).unwrap()).unwrap();
        let back = parse_hamiltonian(&write_hamiltonian(&h)).unwrap();
        assert_eq!(back, h);
    }

    fn arb_term(n: usize) -> impl Strategy<Value = PauliTerm> {
        (-10.0f64..10.0, proptest::collection::vec(0u8..4, n)).prop_map(|(c, letters)| PauliTerm {
            coeff: c,
            string: PauliString::from_pairs(letters.into_iter().enumerate().map(|(q, l)| {
                (q, [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z][l as usize])
            })),
        })
    }

    proptest! {
        #[test]
        fn save_load_identity(terms in proptest::collection::vec(arb_term(5), 1..12)) {
            let h = QubitHamiltonian::new(Observable::new(5, terms).unwrap());
            let back = parse_hamiltonian(&write_hamiltonian(&h)).unwrap();
            prop_assert_eq!(back, h);
        }
    }
}
