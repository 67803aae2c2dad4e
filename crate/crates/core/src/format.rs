//! Fixed-format numbers for CSV and JSON output.

/// Fixed-point decimal with 12 significant digits.
///
/// Magnitudes of `10^12` and above print all integer digits.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let mut decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding may carry into a new leading digit, e.g. 9.99...9 -> 10.0...0.
    if decimals > 0 && significant_digits(&s) > 12 {
        decimals -= 1;
        s = format!("{x:.decimals$}");
    }
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s = s.trim_start_matches('-').to_string();
    }
    s
}

fn significant_digits(s: &str) -> usize {
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.1), "0.100000000000");
        assert_eq!(sig12(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(sig12(-1234.5), "-1234.50000000");
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(9.9999999999996), "10.0000000000");
        assert_eq!(sig12(1.5e-5), "0.0000150000000000");
        assert!(sig12(-1e-30).starts_with("-0.000000000000000000000000000001000"));
    }
}
