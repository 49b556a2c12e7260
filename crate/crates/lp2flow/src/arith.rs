//! Exact integer and rational helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn to_rat(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// `a + b`, skipping the gcd when either side is an integer.
pub fn add(a: &Rat, b: &Rat) -> Rat {
    match (a.is_integer(), b.is_integer()) {
        (true, true) => Rat::from_integer(a.numer() + b.numer()),
        (true, false) => shift(b, a.numer()),
        (false, true) => shift(a, b.numer()),
        (false, false) => a + b,
    }
}

pub fn add_to(acc: &mut Rat, v: &Rat) {
    if acc.is_integer() || v.is_integer() {
        *acc = add(acc, v);
    } else {
        *acc += v;
    }
}

/// `v + z` for an integer z; a reduced fraction shifted by an integer stays reduced.
fn shift(v: &Rat, z: &Int) -> Rat {
    Rat::new_raw(v.numer() + z * v.denom(), v.denom().clone())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(vals: impl Iterator<Item = &'a Rat>) -> Int {
    let mut l = Int::one();
    for v in vals {
        let d = v.denom();
        if !d.is_one() && !(&l % d).is_zero() {
            l = l.lcm(d);
        }
    }
    l
}

/// Numerator of `v` over the denominator `l`, a multiple of `v`'s.
pub fn scaled_numer(v: &Rat, l: &Int) -> Int {
    if v.denom() == l {
        v.numer().clone()
    } else if v.is_zero() {
        Int::zero()
    } else if v.denom().is_one() {
        v.numer() * l
    } else {
        v.numer() * (l / v.denom())
    }
}

/// `n / l`, skipping the gcd when `l` is one.
pub fn over(n: Int, l: &Int) -> Rat {
    if l.is_one() || n.is_zero() {
        Rat::from_integer(n)
    } else {
        Rat::new(n, l.clone())
    }
}

/// floor(log2 |z|) for z != 0, and 0 for z = 0.
pub fn floor_log2(z: &Int) -> u64 {
    let bits = z.bits();
    if bits == 0 {
        0
    } else {
        bits - 1
    }
}

/// `max(1, v)`.
pub fn at_least_one(v: &Int) -> Int {
    if v < &Int::one() {
        Int::one()
    } else {
        v.clone()
    }
}

pub fn max_rat(a: Rat, b: &Rat) -> Rat {
    if &a >= b {
        a
    } else {
        b.clone()
    }
}

pub fn pos_part(v: Rat) -> Rat {
    if v.is_negative() {
        Rat::zero()
    } else {
        v
    }
}

/// Canonical text: "p" when the denominator is one, otherwise "p/q".
pub fn fmt_rat(v: &Rat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_int(s: &str) -> Result<Int, Error> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::format(format!("malformed integer {s:?}")));
    }
    if (body.len() > 1 && body.starts_with('0')) || s == "-0" {
        return Err(Error::format(format!("non-canonical integer {s:?}")));
    }
    s.parse::<Int>()
        .map_err(|_| Error::format(format!("malformed integer {s:?}")))
}

/// Parses a canonical rational and rejects any non-reduced spelling.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    match s.split_once('/') {
        None => Ok(Rat::from_integer(
            parse_int(s).map_err(|_| Error::format(format!("malformed rational {s:?}")))?,
        )),
        Some((p, q)) => {
            let num = parse_int(p).map_err(|_| Error::format(format!("malformed rational {s:?}")))?;
            let den = parse_int(q).map_err(|_| Error::format(format!("malformed rational {s:?}")))?;
            if den.sign() != Sign::Plus {
                return Err(Error::format(format!("rational {s:?} needs a positive denominator")));
            }
            if den.is_one() || !num.gcd(&den).is_one() {
                return Err(Error::format(format!("rational {s:?} is not reduced")));
            }
            Ok(Rat::new_raw(num, den))
        }
    }
}

/// Sum of absolute values.
pub fn abs_sum<'a>(vals: impl Iterator<Item = &'a Int>) -> Int {
    vals.fold(Int::zero(), |acc, v| acc + v.abs())
}

pub fn two_pow(l: u64) -> Int {
    Int::one() << l
}
