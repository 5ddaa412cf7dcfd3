//! Deterministic CSV formatting: fixed column order, floats at 17
//! significant digits, so identical runs produce byte-identical output.

/// Formats a float with 17 significant digits in scientific notation.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Joins cells into one CSV row.
pub fn row(cells: &[String]) -> String {
    cells.join(",")
}
