//! Exact rational numbers and their textual form.
//!
//! Accepted forms are integers (`7`, `-3`), fractions (`3/10`) and finite
//! decimals (`0.25`, `-1.5`). Decimals are converted exactly, so `0.1`
//! is `1/10`.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("`{text}` is not a rational number: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom`. Panics when `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty"));
    }
    if let Some((numer, denom)) = trimmed.split_once('/') {
        let numer = parse_integer(numer.trim()).ok_or_else(|| err("bad numerator"))?;
        let denom = parse_integer(denom.trim()).ok_or_else(|| err("bad denominator"))?;
        if denom.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = trimmed.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(err("no digits"));
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let mut digits = String::with_capacity(whole.len() + frac.len());
        digits.push_str(whole);
        digits.push_str(frac);
        let numer = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(|| err("bad decimal"))?;
        let mut denom = BigInt::one();
        for _ in 0..frac.len() {
            denom *= 10;
        }
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    parse_integer(trimmed)
        .map(Rational::from_integer)
        .ok_or_else(|| err("bad integer"))
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('+').unwrap_or(text);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(digits.as_bytes(), 10)
}

/// Canonical text: `p` for integers, `p/q` in lowest terms otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms_exactly() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" 3/10 ").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
        assert_eq!(parse_rational("-0").unwrap(), int(0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "1/0",
            "a",
            "1.2.3",
            "1/x",
            "--1",
            ".",
            "1e3",
            "1 / 2 / 3",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_text_round_trips() {
        for text in ["0", "5", "1/3", "-7/2"] {
            assert_eq!(format_rational(&parse_rational(text).unwrap()), text);
        }
        assert_eq!(format_rational(&parse_rational("0.50").unwrap()), "1/2");
    }
}
