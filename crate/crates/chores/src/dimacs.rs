//! DIMACS CNF and whitespace-separated integer lists.

use std::fmt::Write as _;

use chores_core::reductions::{Formula, Literal};

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: expected `p cnf <vars> <clauses>`")]
    BadHeader { line: usize },
    #[error("line {line}: clause data before the header")]
    MissingHeader { line: usize },
    #[error("line {line}: `{token}` is not a literal")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: variable {var} exceeds the declared {vars}")]
    VariableOutOfRange { line: usize, var: u64, vars: usize },
    #[error("the last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("no `p cnf` header")]
    NoHeader,
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses end with `0`
/// and may span lines; a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<Formula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] if header.is_none() => {
                    let v = v.parse().map_err(|_| DimacsError::BadHeader { line })?;
                    let c = c.parse().map_err(|_| DimacsError::BadHeader { line })?;
                    header = Some((v, c));
                }
                _ => return Err(DimacsError::BadHeader { line }),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = lit.unsigned_abs();
            if var as usize > vars {
                return Err(DimacsError::VariableOutOfRange { line, var, vars });
            }
            let var = var as usize - 1;
            current.push(if lit < 0 {
                Literal::neg(var)
            } else {
                Literal::pos(var)
            });
        }
    }
    let (vars, declared) = header.ok_or(DimacsError::NoHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(vars, clauses))
}

pub fn emit_dimacs(formula: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.vars(), formula.clauses().len());
    for clause in formula.clauses() {
        for lit in clause {
            let v = lit.var as i64 + 1;
            let _ = write!(out, "{} ", if lit.negated { -v } else { v });
        }
        out.push_str("0\n");
    }
    out
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: `{token}` is not a non-negative integer")]
pub struct IntegerListError {
    pub line: usize,
    pub token: String,
}

/// Non-negative integers separated by whitespace or commas; `#` starts a
/// comment running to the end of the line.
pub fn parse_integers(text: &str) -> Result<Vec<u64>, IntegerListError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let data = raw.split('#').next().unwrap_or("");
        for token in data
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            out.push(token.parse().map_err(|_| IntegerListError {
                line: idx + 1,
                token: token.to_string(),
            })?);
        }
    }
    Ok(out)
}
