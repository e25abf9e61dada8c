//! Exact rationals, Gaussian rationals, and parsing/formatting of numeric tokens.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact complex rational a + bi.
pub type GaussRat = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

pub fn gauss_to_c64(z: &GaussRat) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

pub fn gauss_zero() -> GaussRat {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn gauss_one() -> GaussRat {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub fn gauss_from_rat(q: BigRational) -> GaussRat {
    Complex::new(q, BigRational::zero())
}

/// |z|² as an exact rational.
pub fn gauss_norm_sqr(z: &GaussRat) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn gauss_conj(z: &GaussRat) -> GaussRat {
    Complex::new(z.re.clone(), -z.im.clone())
}

pub fn gauss_pow(z: &GaussRat, e: usize) -> GaussRat {
    let mut acc = gauss_one();
    for _ in 0..e {
        acc = &acc * z;
    }
    acc
}

/// Parses an exact rational from `p`, `p/q`, or a decimal such as `-0.25` or `3e-2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse("empty number"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::parse(format!("bad numerator in {t:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::parse(format!("bad denominator in {t:?}")))?;
        if q.is_zero() {
            return Err(Error::parse(format!("zero denominator in {t:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..]
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent in {t:?}")))?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::parse(format!("not a number: {t:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().expect("digits") };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Parses `re`, `re+imi`, `re-imi` or `imi` into a Gaussian rational.
pub fn parse_complex(s: &str) -> Result<GaussRat> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(gauss_from_rat(parse_rational(t)?));
    };
    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (parse_rational(&body[..p])?, &body[p..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other)?,
    };
    Ok(Complex::new(re, im))
}

/// Comma-separated complex tokens.
pub fn parse_complex_list(s: &str) -> Result<Vec<GaussRat>> {
    s.split(',').map(parse_complex).collect()
}

/// `p/q`, or `p/q+r/si` when the imaginary part is nonzero.
pub fn format_gauss(z: &GaussRat) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}


/// Serde adapter: exact rational as a `"p/q"` string.
pub mod serde_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: optional Gaussian rational as `"p/q"` / `"p/q+r/si"` or null.
pub mod serde_opt_gauss {
    use super::GaussRat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<GaussRat>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_str(&super::format_gauss(z)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<GaussRat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::parse_complex(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter: big unsigned integer as a decimal string.
pub mod serde_biguint {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
