//! Fixed-decimal rendering of metric values.
//!
//! Reports print percentages with a fixed number of decimals. Rounding is
//! performed on the shortest round-trip decimal representation of the `f64`,
//! so a value whose decimal form is exactly `80.65` is treated as a genuine
//! tie instead of being nudged by binary representation noise. Two tie rules
//! are supported because published tables are not always consistent about
//! which one their tooling used.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Tie-breaking rule applied when the dropped digits are exactly one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingMode {
    /// Ties round away from zero (97.145 -> 97.15).
    #[default]
    HalfUp,
    /// Ties round to the nearest even last digit (80.65 -> 80.6).
    HalfEven,
}

/// Formats `value` with exactly `decimals` fractional digits.
///
/// Rounding happens in decimal space: the value is first printed with the
/// standard shortest round-trip formatter and the digit string is rounded
/// arithmetically. A result that rounds to zero never carries a minus sign.
pub fn format_decimal(value: f64, decimals: usize, mode: RoundingMode) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    let repr = format!("{value}");
    let (negative, body) = match repr.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, repr.as_str()),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };

    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .map(|b| b - b'0')
        .collect();
    let mut int_len = int_part.len();
    let keep = int_len + decimals;

    if digits.len() > keep {
        let round_up = match mode {
            RoundingMode::HalfUp => digits[keep] >= 5,
            RoundingMode::HalfEven => match digits[keep] {
                d if d > 5 => true,
                d if d < 5 => false,
                _ if digits[keep + 1..].iter().any(|&d| d != 0) => true,
                // exact tie: round only when the kept digit is odd
                _ => digits[keep - 1] % 2 == 1,
            },
        };
        digits.truncate(keep);
        if round_up {
            let mut i = keep;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    int_len += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    } else {
        digits.resize(keep, 0);
    }

    let mut out = String::new();
    if negative && digits.iter().any(|&d| d != 0) {
        out.push('-');
    }
    for &d in &digits[..int_len] {
        out.push((b'0' + d) as char);
    }
    if decimals > 0 {
        out.push('.');
        for &d in &digits[int_len..] {
            out.push((b'0' + d) as char);
        }
    }
    out
}

/// Formats a fraction in `[0, 1]`-ish range as a percentage string.
///
/// The decimal point of the shortest representation is shifted two places
/// instead of multiplying by 100, so the conversion itself is exact.
pub fn format_percent(fraction: f64, decimals: usize, mode: RoundingMode) -> String {
    if !fraction.is_finite() {
        return format!("{fraction}");
    }
    format_decimal(shift_two(fraction), decimals, mode)
}

/// Exact decimal-shift of a fraction into percent space.
///
/// `0.8245` becomes `82.45` with identical decimal digits; the returned `f64`
/// is the one whose shortest representation is that shifted digit string.
fn shift_two(fraction: f64) -> f64 {
    let repr = format!("{fraction}");
    let (negative, body) = match repr.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, repr.as_str()),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let mut frac: Vec<u8> = frac_part.bytes().collect();
    while frac.len() < 2 {
        frac.push(b'0');
    }
    let mut shifted = String::new();
    if negative {
        shifted.push('-');
    }
    shifted.push_str(int_part);
    shifted.push_str(core::str::from_utf8(&frac[..2]).expect("digits are ascii"));
    if frac.len() > 2 {
        shifted.push('.');
        shifted.push_str(core::str::from_utf8(&frac[2..]).expect("digits are ascii"));
    }
    shifted.parse().expect("shifted decimal parses as f64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_up_basic() {
        assert_eq!(format_decimal(82.45, 1, RoundingMode::HalfUp), "82.5");
        assert_eq!(format_decimal(80.65, 1, RoundingMode::HalfUp), "80.7");
        assert_eq!(format_decimal(97.144, 2, RoundingMode::HalfUp), "97.14");
        assert_eq!(format_decimal(98.0, 2, RoundingMode::HalfUp), "98.00");
    }

    #[test]
    fn half_even_ties() {
        assert_eq!(format_decimal(80.65, 1, RoundingMode::HalfEven), "80.6");
        assert_eq!(format_decimal(82.45, 1, RoundingMode::HalfEven), "82.4");
        // non-ties behave like half-up
        assert_eq!(format_decimal(80.651, 1, RoundingMode::HalfEven), "80.7");
        assert_eq!(format_decimal(80.649, 1, RoundingMode::HalfEven), "80.6");
    }

    #[test]
    fn carry_propagates() {
        assert_eq!(format_decimal(99.95, 1, RoundingMode::HalfUp), "100.0");
        assert_eq!(format_decimal(9.999, 2, RoundingMode::HalfUp), "10.00");
    }

    #[test]
    fn negative_values() {
        assert_eq!(format_decimal(-1.25, 1, RoundingMode::HalfUp), "-1.3");
        assert_eq!(format_decimal(-1.25, 1, RoundingMode::HalfEven), "-1.2");
        // never render negative zero
        assert_eq!(format_decimal(-0.04, 1, RoundingMode::HalfUp), "0.0");
    }

    #[test]
    fn percent_shift_is_exact() {
        assert_eq!(format_percent(0.98, 2, RoundingMode::HalfUp), "98.00");
        assert_eq!(
            format_percent(346.0 / 350.0, 2, RoundingMode::HalfUp),
            "98.86"
        );
        assert_eq!(
            format_percent(340.0 / 350.0, 2, RoundingMode::HalfUp),
            "97.14"
        );
        assert_eq!(format_percent(0.8245, 1, RoundingMode::HalfUp), "82.5");
        assert_eq!(format_percent(0.8065, 1, RoundingMode::HalfEven), "80.6");
        assert_eq!(format_percent(1.0, 1, RoundingMode::HalfUp), "100.0");
    }

    #[test]
    fn zero_decimals() {
        assert_eq!(format_decimal(96.5, 0, RoundingMode::HalfUp), "97");
        assert_eq!(format_decimal(96.5, 0, RoundingMode::HalfEven), "96");
    }
}
