//! Exact rational scalars.
//!
//! All combinatorial modules compute over `Rat` (arbitrary-precision
//! rationals, always in lowest terms with positive denominator — the backing
//! type maintains both invariants on every operation).  Floating point enters
//! only through the explicit conversions at the bottom of this module, used
//! by the amoeba and moduli modules.

use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar: lowest terms, positive denominator.
pub type Rat = BigRational;

/// `n/d` as a `Rat`.  Panics on `d == 0` (programming error, not input).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "rational with zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rat`.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"` (arbitrary-precision, optional sign).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected rational `p/q` or `p`, got `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64` (used only at the boundary to the float modules).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Exact rational value of a finite `f64` (every finite double is dyadic).
pub fn f64_to_rat(x: f64) -> Result<Rat, Error> {
    Rat::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite float {x}")))
}

/// Sum of products `Σ aᵢ·bᵢ` with integer left factors (the common pairing
/// pattern: lattice vector against rational point).
pub fn dot_int_rat(a: &[i64], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (ai, bi) in a.iter().zip(b) {
        if *ai != 0 {
            acc += bi * rat_i(*ai);
        }
    }
    acc
}

/// Average of a non-empty set of rational points (component-wise).
pub fn average(points: &[&[Rat]]) -> Vec<Rat> {
    assert!(!points.is_empty(), "average of empty point set");
    let dim = points[0].len();
    let n = rat_i(points.len() as i64);
    let mut acc = vec![Rat::zero(); dim];
    for p in points {
        debug_assert_eq!(p.len(), dim);
        for (a, x) in acc.iter_mut().zip(p.iter()) {
            *a += x;
        }
    }
    for a in acc.iter_mut() {
        *a /= &n;
    }
    acc
}

/// `|r|` as a convenience (backing type provides `abs` via `Signed`).
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
