//! Line-oriented circuit scripts and plain-text matrix files.
//!
//! ```text
//! # comment
//! U C C1 C2 bell.mat      # unitary by party C on registers C1 C2
//! SEND C1 C B             # C sends C1 to B through the dephasing channel
//! DEPH B                  # local dephasing
//! ```
//!
//! Matrix files hold whitespace-separated `re im` pairs in row-major order;
//! the dimension is inferred from the entry count. Matrix paths are
//! resolved relative to the script.

use std::fmt::Write as _;
use std::path::Path;

use super::{ProtocolCircuit, ProtocolStep};
use crate::densop::{ComplexMatrix, Party, SubsystemLayout, C64};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut values = Vec::new();
    for (n, line) in text.lines().enumerate() {
        for tok in strip_comment(line).split_whitespace() {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("matrix line {}: `{tok}` is not a number", n + 1)))?;
            values.push(x);
        }
    }
    if values.len() % 2 != 0 {
        return Err(Error::Parse("matrix file has an odd number of values".into()));
    }
    let entries = values.len() / 2;
    let dim = (entries as f64).sqrt().round() as usize;
    if dim * dim != entries || dim == 0 {
        return Err(Error::Parse(format!("{entries} complex entries do not form a square matrix")));
    }
    let data = values.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    ComplexMatrix::from_vec(dim, dim, data)
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = crate::error::read_text(path)?;
    parse_matrix(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// One row per line, `re im` pairs, shortest round-trip formatting.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|z| format!("{:?} {:?}", z.re, z.im)).collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
    out
}

fn parse_party(tok: &str, line: usize) -> Result<Party> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line}: unknown party `{tok}`")))
}

/// Parses a script against `layout`; `matrix` loads the file named in a
/// `U` line.
pub fn parse_script(
    text: &str,
    layout: &SubsystemLayout,
    mut matrix: impl FnMut(&str) -> Result<ComplexMatrix>,
) -> Result<ProtocolCircuit> {
    let mut circuit = ProtocolCircuit::new(layout.clone());
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let Some((&op, args)) = toks.split_first() else {
            continue;
        };
        let step = match op.to_ascii_uppercase().as_str() {
            "U" => {
                if args.len() < 3 {
                    return Err(Error::Parse(format!(
                        "line {line}: expected `U <party> <regs...> <matrix-file>`"
                    )));
                }
                let party = parse_party(args[0], line)?;
                let targets: Vec<String> = args[1..args.len() - 1].iter().map(|s| s.to_string()).collect();
                for t in &targets {
                    layout
                        .index_of(t)
                        .map_err(|_| Error::Parse(format!("line {line}: unknown register `{t}`")))?;
                }
                let m = matrix(args[args.len() - 1])?;
                ProtocolStep::Unitary {
                    party,
                    targets,
                    matrix: m,
                }
            }
            "SEND" => {
                let [reg, from, to] = args else {
                    return Err(Error::Parse(format!("line {line}: expected `SEND <reg> <from> <to>`")));
                };
                layout
                    .index_of(reg)
                    .map_err(|_| Error::Parse(format!("line {line}: unknown register `{reg}`")))?;
                ProtocolStep::Send {
                    register: reg.to_string(),
                    from: parse_party(from, line)?,
                    to: parse_party(to, line)?,
                }
            }
            "DEPH" => {
                let [reg] = args else {
                    return Err(Error::Parse(format!("line {line}: expected `DEPH <reg>`")));
                };
                layout
                    .index_of(reg)
                    .map_err(|_| Error::Parse(format!("line {line}: unknown register `{reg}`")))?;
                ProtocolStep::Dephase {
                    register: reg.to_string(),
                }
            }
            other => return Err(Error::Parse(format!("line {line}: unknown step `{other}`"))),
        };
        circuit.steps.push(step);
    }
    Ok(circuit)
}

/// Reads a script file, resolving matrix files next to it.
pub fn load_script(path: &Path, layout: &SubsystemLayout) -> Result<ProtocolCircuit> {
    let text = crate::error::read_text(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_script(&text, layout, |name| read_matrix_file(&dir.join(name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densop::Register;

    fn layout() -> SubsystemLayout {
        SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("B", 2, Party::B),
        ])
        .unwrap()
    }

    #[test]
    fn matrix_roundtrip() {
        let m = ComplexMatrix::from_fn(3, 3, |r, c| C64::new(r as f64 / 3.0, -(c as f64) * 0.1));
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        assert!(parse_matrix("1 0 0").is_err());
        assert!(parse_matrix("1 0 0 0 0 0").is_err());
        assert!(parse_matrix("x 0").is_err());
    }

    #[test]
    fn parses_each_step() {
        let text = "# test\nU A A x.mat\n\nSEND A A B  # trailing\ndeph B\n";
        let c = parse_script(text, &layout(), |_| Ok(ComplexMatrix::identity(2))).unwrap();
        assert_eq!(c.steps.len(), 3);
        assert!(matches!(c.steps[1], ProtocolStep::Send { from: Party::A, to: Party::B, .. }));
    }

    #[test]
    fn reports_bad_lines() {
        let id = |_: &str| Ok(ComplexMatrix::identity(2));
        for bad in ["SEND A A", "DEPH Q", "U A", "FOO", "SEND A X B"] {
            let err = parse_script(bad, &layout(), id).unwrap_err();
            assert!(err.to_string().contains("line 1"), "{bad}: {err}");
        }
    }
}
