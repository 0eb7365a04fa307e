//! Rational scalars and the `"p/q"` string form used in JSON interchange.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Parses `"p"` or `"p/q"` (optional sign, arbitrary precision, `q != 0`).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: Int = num
        .parse()
        .map_err(|_| format!("invalid rational numerator in `{s}`"))?;
    let d: Int = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid rational denominator in `{s}`"))?,
        None => Int::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// Lowest-terms string form: `"p"` when the denominator is 1, else `"p/q"`
/// with `q > 0`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
