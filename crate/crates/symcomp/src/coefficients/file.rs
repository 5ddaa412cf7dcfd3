//! Line-oriented text format for coefficient sets.
//!
//! ```text
//! name SC5
//! stages 5
//! composition_order 5
//! projected_order 6
//! symmetry symmetric-conjugate
//! stage 1.75268409072074114e-1 5.76147441305387020e-2
//! ...
//! ```
//!
//! `#` starts a comment, blank lines are ignored, decimals carry at least 17
//! significant digits so binary doubles survive a round trip.

use super::{classify_symmetry, CoefficientError, CoefficientSet, Symmetry, CLASSIFY_TOL};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> CoefficientError {
    CoefficientError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses a coefficient file and validates the result (stage count,
/// consistency sums, declared symmetry).
pub fn read_coefficient_file(path: impl AsRef<Path>) -> Result<CoefficientSet, CoefficientError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_coefficient_text(&text, &path.display().to_string())
}

/// Parses the file format from a string; `origin` labels error messages.
pub fn parse_coefficient_text(
    text: &str,
    origin: &str,
) -> Result<CoefficientSet, CoefficientError> {
    let err = |line: usize, msg: String| CoefficientError::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    // (line number, meaningful content) with comments and blanks dropped
    let mut rows = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| (i + 1, content.to_string()))
        })
        .collect::<Vec<_>>()
        .into_iter();

    let mut field = |key: &str| -> Result<(usize, String), CoefficientError> {
        let (line, content) = rows
            .next()
            .ok_or_else(|| err(text.lines().count(), format!("missing `{key}` line")))?;
        let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content.as_str(), ""));
        if head != key {
            return Err(err(line, format!("expected `{key}`, found `{head}`")));
        }
        let value = rest.trim();
        if value.is_empty() {
            return Err(err(line, format!("`{key}` has no value")));
        }
        Ok((line, value.to_string()))
    };

    let (_, name) = field("name")?;
    let (stages_line, stages_str) = field("stages")?;
    let stages: usize = stages_str
        .parse()
        .map_err(|_| err(stages_line, format!("invalid stage count `{stages_str}`")))?;
    let (co_line, co_str) = field("composition_order")?;
    let composition_order: u32 = co_str
        .parse()
        .map_err(|_| err(co_line, format!("invalid composition_order `{co_str}`")))?;
    let (po_line, po_str) = field("projected_order")?;
    let projected_order: u32 = po_str
        .parse()
        .map_err(|_| err(po_line, format!("invalid projected_order `{po_str}`")))?;
    let (sym_line, sym_str) = field("symmetry")?;
    let symmetry = match sym_str.as_str() {
        "none" => Symmetry::None,
        "palindromic" => Symmetry::Palindromic,
        "symmetric-conjugate" => Symmetry::SymmetricConjugate,
        other => {
            return Err(err(
                sym_line,
                format!("unknown symmetry `{other}` (expected none, palindromic or symmetric-conjugate)"),
            ))
        }
    };

    let mut coeffs = Vec::with_capacity(stages);
    for _ in 0..stages {
        let (line, content) = rows
            .next()
            .ok_or_else(|| err(text.lines().count(), format!("expected {stages} stage lines")))?;
        let mut parts = content.split_whitespace();
        if parts.next() != Some("stage") {
            return Err(err(line, "expected `stage <re> <im>`".into()));
        }
        let mut num = |what: &str| -> Result<f64, CoefficientError> {
            parts
                .next()
                .ok_or_else(|| err(line, format!("stage line missing {what} part")))?
                .parse()
                .map_err(|_| err(line, format!("invalid {what} decimal")))
        };
        let re = num("real")?;
        let im = num("imaginary")?;
        if parts.next().is_some() {
            return Err(err(line, "trailing tokens on stage line".into()));
        }
        coeffs.push(Complex64::new(re, im));
    }
    if let Some((line, _)) = rows.next() {
        return Err(err(line, "unexpected content after stage lines".into()));
    }

    let set = CoefficientSet {
        name,
        composition_order,
        projected_order,
        pseudo_symmetry_order: None,
        symmetry,
        coeffs,
        provenance: origin.to_string(),
    };
    set.validate()?;
    // validate() treats an undeclared tag as claiming nothing; a declared
    // tag in a file must also be checked the other way.
    if symmetry != Symmetry::None {
        let pattern = classify_symmetry(&set.coeffs, CLASSIFY_TOL);
        if !pattern.admits(symmetry) {
            return Err(CoefficientError::Validation {
                name: set.name,
                msg: format!("declared symmetry `{}` not satisfied", symmetry.token()),
            });
        }
    }
    Ok(set)
}

/// Renders a set in the file format.
pub fn format_coefficient_set(set: &CoefficientSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name {}", set.name);
    let _ = writeln!(out, "stages {}", set.stages());
    let _ = writeln!(out, "composition_order {}", set.composition_order);
    let _ = writeln!(out, "projected_order {}", set.projected_order);
    let _ = writeln!(out, "symmetry {}", set.symmetry.token());
    for a in &set.coeffs {
        let _ = writeln!(out, "stage {:.17e} {:.17e}", a.re, a.im);
    }
    out
}

/// Writes a set to disk in the file format.
pub fn write_coefficient_file(
    set: &CoefficientSet,
    path: impl AsRef<Path>,
) -> Result<(), CoefficientError> {
    let path = path.as_ref();
    std::fs::write(path, format_coefficient_set(set)).map_err(|e| io_err(path, e))
}
