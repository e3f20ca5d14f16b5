//! Line-oriented circuit text format:
//!
//! ```text
//! QUBITS 2
//! U3 0 1.5707963267948966e0 0.0000000000000000e0 3.1415926535897931e0
//! CNOT 1 0
//! RZ 0 -2.5000000000000000e-1
//! ```
//!
//! Angles are radians written with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::fmt::Write as _;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = format!("QUBITS {}\n", c.width());
    for g in c.gates() {
        match *g {
            Gate::Ry { qubit, theta } => writeln!(out, "RY {qubit} {theta:.16e}"),
            Gate::Rz { qubit, theta } => writeln!(out, "RZ {qubit} {theta:.16e}"),
            Gate::U3 { qubit, theta, phi, lambda } => {
                writeln!(out, "U3 {qubit} {theta:.16e} {phi:.16e} {lambda:.16e}")
            }
            Gate::Cnot { control, target } => writeln!(out, "CNOT {control} {target}"),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

/// Blank lines and lines starting with `#` are ignored.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty circuit file".into() })?;
    let width = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["QUBITS", n] => parse_index(n, line)?,
        _ => return Err(Error::Parse { line, msg: format!("expected `QUBITS n`, got `{header}`") }),
    };

    let mut circuit = Circuit::new(width, Vec::new()).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let gate = match fields.as_slice() {
            ["RY", q, t] => Gate::Ry { qubit: parse_index(q, line)?, theta: parse_angle(t, line)? },
            ["RZ", q, t] => Gate::Rz { qubit: parse_index(q, line)?, theta: parse_angle(t, line)? },
            ["U3", q, t, p, l] => Gate::U3 {
                qubit: parse_index(q, line)?,
                theta: parse_angle(t, line)?,
                phi: parse_angle(p, line)?,
                lambda: parse_angle(l, line)?,
            },
            ["CNOT", c, t] => Gate::Cnot { control: parse_index(c, line)?, target: parse_index(t, line)? },
            _ => return Err(Error::Parse { line, msg: format!("unrecognized gate line `{text}`") }),
        };
        circuit.push(gate).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    Ok(circuit)
}

fn parse_index(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("bad qubit index `{s}`") })
}

fn parse_angle(s: &str, line: usize) -> Result<f64> {
    let x: f64 = s.parse().map_err(|_| Error::Parse { line, msg: format!("bad angle `{s}`") })?;
    if !x.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite angle `{s}`") });
    }
    Ok(x)
}
