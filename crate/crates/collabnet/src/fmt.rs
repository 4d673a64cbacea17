// SPDX-License-Identifier: Apache-2.0

//! Deterministic number formatting for CSV artifacts.

/// Formats `x` with `sig` significant digits as a plain decimal string.
///
/// Zero prints as "0". The same value always yields the same bytes, which
/// keeps exported artifacts reproducible.
pub fn format_significant(x: f64, sig: usize) -> String {
    assert!(sig > 0);
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).clamp(0, 30) as usize;
    format!("{:.*}", decimals, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_forms() {
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(4.0 / 7.0, 12), "0.571428571429");
        assert_eq!(format_significant(123.456, 6), "123.456");
        assert_eq!(format_significant(-0.25, 12), "-0.250000000000");
        assert_eq!(format_significant(1e-3, 3), "0.00100");
    }
}
