//! The `prismlab-spec v1` document format: a small text format describing a
//! coefficient window, an optional Frobenius lift per variable, and a list
//! of ideal generators.
//!
//! ```text
//! prismlab-spec v1
//!
//! [ring]
//! p = 5            # the prime
//! precision = 4    # coefficients live in Z/p^precision
//! degree = 8       # total-degree window cap
//! vars = T, S      # may be omitted for a zero-variable ring
//! phi.T = T^5      # optional; omit all phi keys for the default lift
//! phi.S = S^5
//!
//! [ideal]
//! gen = p - T*S
//! gen = T^3
//!
//! [options]
//! seed = 42        # free-form strings, interpreted by the caller
//! ```
//!
//! `#` starts a comment anywhere on a line.  Section order is fixed as
//! shown; `[options]` is optional.  Expressions use `+ - * ^`, integer
//! literals, ring variables, and the reserved scalar `p`; the printed form
//! of any series parses back to the same series.

mod expr;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{ArithError, RingSpec, TruncSeries};
use crate::delta::{DeltaError, DeltaRingSpec};

pub const HEADER: &str = "prismlab-spec v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReaderError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: expected header '{HEADER}', found '{found}'")]
    BadHeader { line: usize, found: String },
    #[error("line {line}, col {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}, col {col}: unknown variable '{name}'")]
    UnknownVariable {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, col {col}: exponent {exponent} exceeds the degree window (cap {cap})")]
    ExponentTooLarge {
        line: usize,
        col: usize,
        exponent: u128,
        cap: u32,
    },
    #[error("line {line}, col {col}: expression exceeds the degree window")]
    WindowOverflow { line: usize, col: usize },
    #[error("line {line}: {message}")]
    Structure { line: usize, message: String },
    #[error("missing required field '{field}' in [{section}]")]
    MissingField {
        section: &'static str,
        field: &'static str,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

/// A parsed document: the ring window, the δ-structure, the ideal
/// generators in file order, and the raw `[options]` entries.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub ring: Arc<RingSpec>,
    pub delta: DeltaRingSpec,
    pub ideal_gens: Vec<TruncSeries>,
    pub options: BTreeMap<String, String>,
}

/// Parse a single standalone expression over an existing ring window.
/// Positions in errors are reported as line 1 of the given text.
pub fn parse_expression(src: &str, ring: &Arc<RingSpec>) -> Result<TruncSeries, ReaderError> {
    expr::parse_series(src, 1, 1, ring)
}

/// Read and parse a document from disk.
pub fn load_spec(path: &Path) -> Result<SpecFile, ReaderError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReaderError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_spec(&text)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Ring,
    Ideal,
    Options,
}

struct RawField {
    key: String,
    value: String,
    line: usize,
    value_col: usize,
}

/// Parse a document from text.  Parsing is eager: the ring is validated,
/// every expression is evaluated, and the δ-structure is checked, so a
/// returned `SpecFile` is ready to use.
pub fn parse_spec(text: &str) -> Result<SpecFile, ReaderError> {
    let mut header_seen = false;
    let mut section = Section::None;
    let mut ring_fields: Vec<RawField> = Vec::new();
    let mut gen_fields: Vec<RawField> = Vec::new();
    let mut options: BTreeMap<String, String> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !header_seen {
            if trimmed != HEADER {
                return Err(ReaderError::BadHeader {
                    line: line_no,
                    found: trimmed.to_string(),
                });
            }
            header_seen = true;
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ReaderError::Structure {
                    line: line_no,
                    message: "section header must be '[name]'".into(),
                });
            };
            section = match name {
                "ring" => Section::Ring,
                "ideal" => Section::Ideal,
                "options" => Section::Options,
                other => {
                    return Err(ReaderError::Structure {
                        line: line_no,
                        message: format!("unknown section '[{other}]'"),
                    })
                }
            };
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ReaderError::Structure {
                line: line_no,
                message: "expected 'key = value'".into(),
            });
        };
        let key = content[..eq].trim().to_string();
        if key.is_empty() {
            return Err(ReaderError::Structure {
                line: line_no,
                message: "empty key".into(),
            });
        }
        let after = &content[eq + 1..];
        let value = after.trim().to_string();
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        let field = RawField {
            key,
            value,
            line: line_no,
            value_col,
        };
        match section {
            Section::None => {
                return Err(ReaderError::Structure {
                    line: line_no,
                    message: "content outside any section".into(),
                });
            }
            Section::Ring => ring_fields.push(field),
            Section::Ideal => {
                if field.key != "gen" {
                    return Err(ReaderError::Structure {
                        line: field.line,
                        message: format!(
                            "unknown key '{}' in [ideal]; only 'gen' is allowed",
                            field.key
                        ),
                    });
                }
                gen_fields.push(field);
            }
            Section::Options => {
                if options.contains_key(&field.key) {
                    return Err(ReaderError::Structure {
                        line: field.line,
                        message: format!("duplicate option '{}'", field.key),
                    });
                }
                options.insert(field.key, field.value);
            }
        }
    }

    if !header_seen {
        return Err(ReaderError::BadHeader {
            line: 1,
            found: String::new(),
        });
    }

    let (ring, delta) = build_ring(&ring_fields)?;

    let mut ideal_gens = Vec::with_capacity(gen_fields.len());
    for f in &gen_fields {
        ideal_gens.push(expr::parse_series(&f.value, f.line, f.value_col, &ring)?);
    }

    Ok(SpecFile {
        ring,
        delta,
        ideal_gens,
        options,
    })
}

fn build_ring(fields: &[RawField]) -> Result<(Arc<RingSpec>, DeltaRingSpec), ReaderError> {
    let mut prime: Option<u32> = None;
    let mut precision: Option<u32> = None;
    let mut degree: Option<u32> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut phi_fields: Vec<&RawField> = Vec::new();

    for f in fields {
        match f.key.as_str() {
            "p" => set_u32(&mut prime, f, "p")?,
            "precision" => set_u32(&mut precision, f, "precision")?,
            "degree" => set_u32(&mut degree, f, "degree")?,
            "vars" => {
                if vars.is_some() {
                    return Err(duplicate(f));
                }
                let list: Vec<String> = if f.value.is_empty() {
                    Vec::new()
                } else {
                    f.value.split(',').map(|s| s.trim().to_string()).collect()
                };
                if list.iter().any(|v| v.is_empty()) {
                    return Err(ReaderError::Structure {
                        line: f.line,
                        message: "empty variable name in 'vars'".into(),
                    });
                }
                vars = Some(list);
            }
            key if key.starts_with("phi.") => phi_fields.push(f),
            other => {
                return Err(ReaderError::Structure {
                    line: f.line,
                    message: format!("unknown key '{other}' in [ring]"),
                });
            }
        }
    }

    let prime = prime.ok_or(ReaderError::MissingField {
        section: "ring",
        field: "p",
    })?;
    let precision = precision.ok_or(ReaderError::MissingField {
        section: "ring",
        field: "precision",
    })?;
    let degree = degree.ok_or(ReaderError::MissingField {
        section: "ring",
        field: "degree",
    })?;
    let vars = vars.unwrap_or_default();

    let ring = RingSpec::new(prime, precision, degree, vars)?;

    if phi_fields.is_empty() {
        return Ok((ring.clone(), DeltaRingSpec::rank_one(&ring)));
    }

    let mut images: Vec<Option<TruncSeries>> = vec![None; ring.nvars()];
    for f in &phi_fields {
        let var_name = &f.key["phi.".len()..];
        let Some(i) = ring.vars().iter().position(|v| v == var_name) else {
            return Err(ReaderError::Structure {
                line: f.line,
                message: format!("phi image for unknown variable '{var_name}'"),
            });
        };
        if images[i].is_some() {
            return Err(duplicate(f));
        }
        images[i] = Some(expr::parse_series(&f.value, f.line, f.value_col, &ring)?);
    }
    let mut complete = Vec::with_capacity(ring.nvars());
    for (i, img) in images.into_iter().enumerate() {
        match img {
            Some(s) => complete.push(s),
            None => {
                return Err(ReaderError::Structure {
                    line: phi_fields.last().map(|f| f.line).unwrap_or(0),
                    message: format!(
                        "phi images must cover every variable; missing 'phi.{}'",
                        ring.vars()[i]
                    ),
                });
            }
        }
    }
    let delta = DeltaRingSpec::new(&ring, complete)?;
    Ok((ring, delta))
}

fn set_u32(slot: &mut Option<u32>, f: &RawField, what: &str) -> Result<(), ReaderError> {
    if slot.is_some() {
        return Err(duplicate(f));
    }
    let v: u32 = f.value.parse().map_err(|_| ReaderError::Structure {
        line: f.line,
        message: format!(
            "'{what}' must be a nonnegative integer, found '{}'",
            f.value
        ),
    })?;
    *slot = Some(v);
    Ok(())
}

fn duplicate(f: &RawField) -> ReaderError {
    ReaderError::Structure {
        line: f.line,
        message: format!("duplicate field '{}'", f.key),
    }
}
