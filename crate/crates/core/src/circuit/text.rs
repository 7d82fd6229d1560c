//! Line-oriented circuit format.
//!
//! ```text
//! # qubits 3
//! H 2
//! CNOT 1 2
//! RZ 0 0.5
//! ```
//!
//! Lines starting with `#` are comments. Without a `# qubits` header the
//! width is one more than the largest index used.

use std::fmt::Write;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::Real;

const HEADER: &str = "qubits";

/// Serializes `c`; phases are written in shortest round-trip form.
pub fn write_circuit<T: Real>(c: &Circuit<T>) -> String {
    let mut out = format!("# {HEADER} {}\n", c.n_qubits());
    for g in c.gates() {
        out.push_str(g.name());
        for q in g.qubits() {
            write!(out, " {q}").expect("writing to a String");
        }
        if let Some(p) = g.phase() {
            write!(out, " {p}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_gate<T: Real>(line: usize, tokens: &[&str]) -> Result<Gate<T>> {
    let name = tokens[0].to_ascii_uppercase();
    let (arity, has_phase) = match name.as_str() {
        "RZ" | "RX" | "RY" => (1, true),
        "H" | "T" | "TDG" => (1, false),
        "CNOT" => (2, false),
        "TOFFOLI" => (3, false),
        _ => return Err(parse_err(line, format!("unknown gate {:?}", tokens[0]))),
    };
    let expected = 1 + arity + usize::from(has_phase);
    if tokens.len() != expected {
        return Err(parse_err(
            line,
            format!(
                "{name} takes {} arguments, got {}",
                expected - 1,
                tokens.len() - 1
            ),
        ));
    }
    let mut q = [0usize; 3];
    for k in 0..arity {
        q[k] = tokens[1 + k]
            .parse()
            .map_err(|_| parse_err(line, format!("bad qubit index {:?}", tokens[1 + k])))?;
    }
    let phase = if has_phase {
        let raw = tokens[1 + arity];
        let p: T = raw
            .parse()
            .map_err(|_| parse_err(line, format!("bad phase {raw:?}")))?;
        if !p.is_finite() {
            return Err(parse_err(line, format!("phase {raw:?} is not finite")));
        }
        p
    } else {
        T::zero()
    };
    Ok(match name.as_str() {
        "RZ" => Gate::Rz(q[0], phase),
        "RX" => Gate::Rx(q[0], phase),
        "RY" => Gate::Ry(q[0], phase),
        "H" => Gate::H(q[0]),
        "T" => Gate::T(q[0]),
        "TDG" => Gate::Tdg(q[0]),
        "CNOT" => Gate::Cnot(q[0], q[1]),
        _ => Gate::Toffoli(q[0], q[1], q[2]),
    })
}

pub fn parse_circuit<T: Real>(text: &str) -> Result<Circuit<T>> {
    let mut declared: Option<(usize, usize)> = None;
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let words: Vec<&str> = comment.split_whitespace().collect();
            if words.first() == Some(&HEADER) {
                if declared.is_some() {
                    return Err(parse_err(line, "duplicate qubit count"));
                }
                let n = words
                    .get(1)
                    .filter(|_| words.len() == 2)
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| parse_err(line, "expected `# qubits <count>`"))?;
                declared = Some((n, line));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        gates.push((line, parse_gate::<T>(line, &tokens)?));
    }
    let (n, header_line) = match declared {
        Some(d) => d,
        None => {
            let width = gates
                .iter()
                .flat_map(|(_, g)| g.qubits())
                .max()
                .map_or(1, |q| q + 1);
            (width, 0)
        }
    };
    let mut c = Circuit::new(n).map_err(|e| parse_err(header_line, e.to_string()))?;
    for (line, g) in gates {
        c.push(g).map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(c)
}
