//! Exact rational scalars: parsing, formatting, and f64 conversion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q", "p", or a JSON-style float written as a decimal string.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let combined = format!("{int}{frac}");
        let n: BigInt = combined
            .parse()
            .map_err(|_| Error::Invalid(format!("bad decimal `{s}`")))?;
        return Ok(Rat::new(n, BigInt::from(10u32).pow(digits)));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer `{s}`")))?;
    Ok(Rat::from_integer(n))
}

/// Renders in lowest terms, as an integer when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // ToPrimitive on Ratio<BigInt> handles large numerators/denominators.
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Accepts JSON numbers (integers or floats) and "p/q" strings.
pub fn rat_from_json(v: &serde_json::Value) -> Result<Rat, Error> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat(i))
            } else if let Some(f) = n.as_f64() {
                // Exact binary expansion of the float.
                BigRational::from_float(f)
                    .ok_or_else(|| Error::Invalid(format!("non-finite number {f}")))
            } else {
                Err(Error::Invalid(format!("unrepresentable number {n}")))
            }
        }
        serde_json::Value::String(s) => parse_rat(s),
        other => Err(Error::Invalid(format!("expected rational, got {other}"))),
    }
}

pub fn rat_to_json(r: &Rat) -> serde_json::Value {
    serde_json::Value::String(format_rat(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "1/2", "-22/7", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("0.25").unwrap()), "1/4");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rat("1/0").is_err());
    }
}
