//! Decimal rendering shared by every CSV and header line.

/// Rounds to 12 significant digits and prints in plain decimal notation,
/// always with a fractional part (`1.0`, `0.5`, `-0.125`).
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let mut s = rounded.to_string();
    if !s.contains('.') {
        s.push_str(".0");
    }
    s
}

/// Comma-joined row of [`num`] values.
pub fn row(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")
}
