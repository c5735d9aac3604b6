//! Locale-free number formatting for CSV output.

/// Formats `x` with nine significant digits, `%.9g` style: fixed notation
/// for decimal exponents in [-5, 9), scientific otherwise. Trailing zeros
/// are kept so every value carries the same precision.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent present in {:e} output");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}
