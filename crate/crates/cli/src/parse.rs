//! Flag value parsing: algebras, weights, color counts, complex and rational
//! lists.

use bethevec::{CartanData, Weight};
use num_complex::Complex64;
use num_rational::BigRational;
use std::str::FromStr;

use crate::commands::CliError;

pub fn algebra(token: &str) -> Result<CartanData, CliError> {
    let n = token
        .strip_prefix("sl")
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 2)
        .ok_or_else(|| CliError::Usage(format!("--algebra wants sl2, sl3, ..., got `{token}`")))?;
    Ok(CartanData::type_a(n - 1))
}

pub fn weights(sys: &CartanData, token: &str) -> Result<Vec<Weight>, CliError> {
    token.split(',').map(|w| weight(sys, w.trim())).collect()
}

fn weight(sys: &CartanData, token: &str) -> Result<Weight, CliError> {
    if let Some(k) = token.strip_prefix('w').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=sys.rank()).contains(&k) {
            return Ok(sys.fundamental(k - 1));
        }
        return Err(CliError::Usage(format!(
            "w{k} is out of range, the rank is {}",
            sys.rank()
        )));
    }
    coordinates(sys, token, ':')
}

pub fn coordinate_weight(sys: &CartanData, token: &str) -> Result<Weight, CliError> {
    coordinates(sys, token, ',')
}

fn coordinates(sys: &CartanData, token: &str, sep: char) -> Result<Weight, CliError> {
    let coords = int_list(token, sep)?;
    if coords.len() != sys.rank() {
        return Err(CliError::Usage(format!(
            "weight `{token}` has {} coordinates, the rank is {}",
            coords.len(),
            sys.rank()
        )));
    }
    Ok(Weight::from_ints(&coords))
}

fn int_list(token: &str, sep: char) -> Result<Vec<i64>, CliError> {
    token
        .split(sep)
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))
        })
        .collect()
}

pub fn color_counts(token: &str) -> Result<Vec<usize>, CliError> {
    token
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("`{s}` is not a color count")))
        })
        .collect()
}

pub fn complex_list(token: &str) -> Result<Vec<Complex64>, CliError> {
    token.split(',').map(complex).collect()
}

fn complex(token: &str) -> Result<Complex64, CliError> {
    let t = token.trim();
    let fail = || CliError::Usage(format!("`{t}` is not a complex number"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| fail())?, 0.0));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| fail())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().map_err(|_| fail())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn rational_list(token: &str) -> Result<Vec<BigRational>, CliError> {
    token.split(',').map(rational).collect()
}

pub fn rational(token: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(token.trim())
        .map_err(|_| CliError::Usage(format!("`{token}` is not a rational p/q")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_tokens_cover_the_usual_shapes() {
        let cases = [
            ("1", 1.0, 0.0),
            ("-2.5", -2.5, 0.0),
            ("1e-3", 1e-3, 0.0),
            ("i", 0.0, 1.0),
            ("-i", 0.0, -1.0),
            ("2i", 0.0, 2.0),
            ("1+2i", 1.0, 2.0),
            ("1-2i", 1.0, -2.0),
            ("-1.5+0.5i", -1.5, 0.5),
            ("1.5e+2i", 0.0, 150.0),
            ("1e-2-3e-4i", 1e-2, -3e-4),
        ];
        for (token, re, im) in cases {
            let z = complex(token).unwrap_or_else(|e| panic!("{token}: {}", e.message()));
            assert_eq!((z.re, z.im), (re, im), "{token}");
        }
        assert!(complex("").is_err());
        assert!(complex("1+2j").is_err());
        assert!(complex("+-i").is_err());
    }

    #[test]
    fn weight_tokens_accept_fundamentals_and_coordinates() {
        let sys = CartanData::type_a(2);
        let ws = weights(&sys, "w1, w2 ,1:1").unwrap();
        assert_eq!(ws[0], sys.fundamental(0));
        assert_eq!(ws[1], sys.fundamental(1));
        assert_eq!(ws[2], Weight::from_ints(&[1, 1]));
        assert!(weights(&sys, "w3").is_err());
        assert!(weights(&sys, "1:2:3").is_err());
    }
}
