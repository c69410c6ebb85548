//! Deterministic number and table formatting.

/// Shortest decimal that parses back to the same `f64`.
///
/// Plain notation for magnitudes in `[1e-5, 1e16)`, exponent notation otherwise.
/// Both zeros print as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if x.is_finite() && (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn csv_row(values: &[f64]) -> String {
    let mut line = values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn csv_header<S: AsRef<str>>(names: &[S]) -> String {
    let mut line = names.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}
