//! Exact arithmetic kernel: big rationals, sparse multivariate polynomials
//! over a declared variable universe, rational functions with factored
//! denominators, root-symbol reduction and q^(1/24)-graded truncated series.
//!
//! No floating point appears anywhere in this crate; every coefficient is an
//! arbitrary-precision rational and all canonical forms are deterministic.

mod mpoly;
mod parse;
mod ratfunc;
mod ring;
mod series;

pub use mpoly::MPoly;
pub use parse::{parse_mpoly, parse_ratfunc};
pub use ratfunc::RatFunc;
pub use ring::{AlgebraicContext, Ring};
pub use series::QSeries;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Arbitrary-precision rational. `num_rational::BigRational` keeps the
/// gcd-reduced, positive-denominator canonical form this crate relies on.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "3", "-3", "1/27" or "-49/18". Floats and whitespace are rejected;
/// exactness is part of the interface contract.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rat::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Render a rational the way the polynomial printer expects ("-3/4", "2").
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Errors raised by the exact kernel and everything layered on top of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different variable universes.
    VarMismatch(String),
    /// Division by the zero polynomial, rational function or series.
    DivisionByZero,
    /// A division would introduce a denominator factor outside the declared
    /// factor set; this signals a modelling bug upstream, never user input.
    UndeclaredFactor(String),
    /// Multiplicative inverse of a series whose leading coefficient is zero.
    NonInvertibleSeries,
    /// q -> -q or q -> q/lambda on a series with non-integral support.
    FractionalSupport,
    /// Unknown variable name in this ring.
    UnknownVariable(String),
    /// Text that does not parse as a polynomial / rational function / number.
    Parse(String),
    /// Operation outside the supported parameter range (e.g. layouts for n > 4).
    Unsupported(String),
    /// A linear system the theory promises solvable turned out singular.
    SingularSystem(String),
    /// An identity the pipeline asserts failed to hold.
    CheckFailed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VarMismatch(s) => write!(f, "variable universe mismatch: {s}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::UndeclaredFactor(s) => write!(f, "undeclared denominator factor: {s}"),
            Error::NonInvertibleSeries => {
                write!(f, "series with vanishing leading coefficient is not invertible")
            }
            Error::FractionalSupport => {
                write!(f, "substitution requires integral q-support")
            }
            Error::UnknownVariable(s) => write!(f, "unknown variable: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::SingularSystem(s) => write!(f, "singular system: {s}"),
            Error::CheckFailed(s) => write!(f, "check failed: {s}"),
        }
    }
}

impl std::error::Error for Error {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rat_accepts_exact_forms() {
        assert_eq!(parse_rat("1/27").unwrap(), rat(1, 27));
        assert_eq!(parse_rat("-1/64").unwrap(), rat(-1, 64));
        assert_eq!(parse_rat("49/18").unwrap(), rat(49, 18));
        assert_eq!(parse_rat("-7").unwrap(), rat_i(-7));
    }

    #[test]
    fn parse_rat_rejects_floats() {
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1e3").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn sqrt_of_perfect_square() {
        assert_eq!(rat_sqrt(&rat(1, 64)), Some(rat(1, 8)));
        assert_eq!(rat_sqrt(&rat(4, 9)), Some(rat(2, 3)));
        assert_eq!(rat_sqrt(&rat(1, 2)), None);
        assert_eq!(rat_sqrt(&rat(-1, 4)), None);
    }
}
