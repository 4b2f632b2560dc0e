//! Plain-text Pauli Hamiltonian files.
//!
//! ```text
//! # comment
//! qubits 4
//! 1.5 Z0
//! -0.5 X0 X1
//! ```
//!
//! The `qubits` header is optional; without it the register is sized to one
//! past the largest index seen. Duplicate words are summed.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::pauli::{parse_tokens, PauliWord};

fn parse_coefficient(token: &str) -> Option<f64> {
    let normalized = token.replace('\u{2212}', "-");
    let value: f64 = normalized.parse().ok()?;
    value.is_finite().then_some(value)
}

pub fn parse_hamiltonian(text: &str) -> Result<WeightedPauliSum> {
    let mut header: Option<usize> = None;
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.splitn(2, char::is_whitespace);
        let head = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("").trim();
        if head == "qubits" {
            if header.is_some() || !raw.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "`qubits` header must appear once, before any term".into(),
                });
            }
            let n: usize = rest.parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("invalid qubit count `{rest}`"),
            })?;
            header = Some(n);
            continue;
        }
        let coeff = parse_coefficient(head).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("coefficient `{head}` is not a real decimal number"),
        })?;
        if rest.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "missing Pauli text after coefficient".into(),
            });
        }
        let tokens = parse_tokens(rest).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        raw.push((line_no, coeff, tokens));
    }
    if raw.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    let needed = raw
        .iter()
        .flat_map(|(_, _, t)| t.iter().map(|(q, _)| q + 1))
        .max()
        .unwrap_or(1);
    let n = match header {
        Some(n) => n,
        None => needed,
    };
    let mut terms = Vec::with_capacity(raw.len());
    for (line_no, coeff, tokens) in raw {
        let word = PauliWord::from_paulis(n, tokens).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        terms.push((coeff, word));
    }
    WeightedPauliSum::new(n, terms)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<WeightedPauliSum> {
    let text = std::fs::read_to_string(path)?;
    parse_hamiltonian(&text)
}

/// Serializes with a `qubits` header and terms by descending magnitude.
/// Coefficients use the shortest round-trip decimal form.
pub fn format_hamiltonian(h: &WeightedPauliSum) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", h.n_qubits()).unwrap();
    for (c, word) in h.sorted_by_magnitude() {
        writeln!(out, "{c:?} {}", word.to_text()).unwrap();
    }
    out
}

pub fn save_hamiltonian(path: impl AsRef<Path>, h: &WeightedPauliSum) -> Result<()> {
    std::fs::write(path, format_hamiltonian(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_terms_size_from_max_index() {
        let h = parse_hamiltonian("1.5 Z0\n-0.5 X0 X1\n").unwrap();
        assert_eq!(h.n_qubits(), 2);
        assert_eq!(h.len(), 2);
        let h = parse_hamiltonian("1.5 Z0\n\u{2212}0.5 X0 X1\n").unwrap();
        assert_eq!(h.terms()[1].0, -0.5);
    }

    #[test]
    fn duplicates_are_summed() {
        let h = parse_hamiltonian("0.5 Z0\n0.5 Z0 # again\n\n").unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.terms()[0].0, 1.0);
    }

    #[test]
    fn header_overrides_size() {
        let h = parse_hamiltonian("# molecule\nqubits 6\n1 Z0\n2 I\n").unwrap();
        assert_eq!(h.n_qubits(), 6);
        assert!(matches!(parse_hamiltonian("qubits 2\n1 Z5\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_hamiltonian("1 Z0\n1+2j X0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hamiltonian("1 Z0\n0.5i X0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hamiltonian("1 Q0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hamiltonian("1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hamiltonian("nan Z0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hamiltonian("# nothing\n\n"), Err(Error::EmptyHamiltonian)));
        assert!(matches!(parse_hamiltonian(""), Err(Error::EmptyHamiltonian)));
    }

    #[test]
    fn writer_orders_by_magnitude() {
        let h = parse_hamiltonian("0.1 Z0\n-3 X1\n1 Y0 Y1\n").unwrap();
        let text = format_hamiltonian(&h);
        assert_eq!(text, "qubits 2\n-3.0 X1\n1.0 Y0 Y1\n0.1 Z0\n");
    }
}
