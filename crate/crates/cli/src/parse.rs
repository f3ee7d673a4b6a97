//! Parsers for command-line values that clap cannot handle directly.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use polyslip::Mat2;

use crate::CliError;

/// Row-major `a11,a12,a21,a22`.
pub fn matrix(values: &[f64]) -> Result<Mat2, CliError> {
    match values {
        [a11, a12, a21, a22] => Ok(Mat2::new(*a11, *a12, *a21, *a22)),
        _ => Err(CliError::Input(format!(
            "--matrix expects 4 comma-separated entries, got {}",
            values.len()
        ))),
    }
}

/// Exact value of `p/q`, an integer, or a decimal such as `-0.25` or `1.5e-3`.
pub fn rational(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Input(format!("cannot parse {text:?} as an exact number"));
    let text = text.trim();
    if text.contains('/') {
        return BigRational::from_str(text).map_err(|_| bad());
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let power = BigInt::from(10).pow(scale.unsigned_abs());
    let value = BigRational::from_integer(digits);
    Ok(if scale >= 0 {
        value * BigRational::from_integer(power)
    } else {
        value / BigRational::from_integer(power)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_exact_numbers() {
        assert_eq!(rational("1/2").unwrap(), q(1, 2));
        assert_eq!(rational("0.5").unwrap(), q(1, 2));
        assert_eq!(rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(rational("3").unwrap(), q(3, 1));
        assert_eq!(rational("1.5e-3").unwrap(), q(3, 2000));
        assert_eq!(rational("2e2").unwrap(), q(200, 1));
        assert!(rational("abc").is_err());
        assert!(rational("1/0").is_err());
    }

    #[test]
    fn matrix_needs_four_entries() {
        assert!(matrix(&[1.0, 0.0, 0.0]).is_err());
        assert_eq!(
            matrix(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            Mat2::new(1.0, 2.0, 3.0, 4.0)
        );
    }
}
