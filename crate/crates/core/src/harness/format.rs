//! Decimal text with 9 significant digits.

/// Significant digits written to every output file.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Format `x` as plain decimal rounded to 9 significant digits, trailing zeros
/// removed. `±inf` becomes `inf`/`-inf`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // d.dddddddde±X
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let point = exp + 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    out
}

/// Round `x` to the value that [`format_sig9`] text parses back to.
pub fn quantize_sig9(x: f64) -> f64 {
    format_sig9(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(format_sig9(-60.0), "-60");
        assert_eq!(format_sig9(10.0), "10");
        assert_eq!(format_sig9(0.5), "0.5");
        assert_eq!(format_sig9(0.25), "0.25");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(-73.123456789123), "-73.1234568");
        assert_eq!(format_sig9(0.000123456789012), "0.000123456789");
        assert_eq!(format_sig9(1.5e12), "1500000000000");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(f64::INFINITY), "inf");
    }

    proptest! {
        #[test]
        fn text_is_stable_after_one_round_trip(x in -1e6f64..1e6) {
            let text = format_sig9(x);
            let back: f64 = text.parse().unwrap();
            prop_assert_eq!(format_sig9(back), text.clone());
            prop_assert_eq!(quantize_sig9(back), back);
            prop_assert!((back - x).abs() <= x.abs() * 1e-8);
        }
    }
}
