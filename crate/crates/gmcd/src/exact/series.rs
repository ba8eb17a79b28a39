//! Truncated formal q-series with exponents graded in units of q^(1/24).
//!
//! One grading serves eta products (native 1/24 steps), theta series (half-
//! and quarter-integer exponents) and the integral solution series, so no
//! representation changes are ever needed. Exponent bookkeeping is exact
//! integer arithmetic on the unit grid; truncation propagates as the minimum
//! over operands, adjusted by leading exponents for products and inverses.

use super::{Error, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

fn rat_pow(r: &Rat, e: i64) -> Rat {
    let base = if e < 0 { r.recip() } else { r.clone() };
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc = &acc * &base;
    }
    acc
}

/// A truncated series sum_{u=lead..=trunc} coeffs[u-lead] * q^(u/24).
/// Slots below `lead` are exactly zero; slots above `trunc` are unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    lead: i64,
    coeffs: Vec<Rat>,
    trunc: i64,
}

impl QSeries {
    fn make(lead: i64, mut coeffs: Vec<Rat>, trunc: i64) -> QSeries {
        if trunc < lead {
            return QSeries { lead: trunc + 1, coeffs: Vec::new(), trunc };
        }
        coeffs.resize((trunc - lead + 1) as usize, Rat::zero());
        QSeries { lead, coeffs, trunc }
    }

    /// Zero, known through the given truncation (in 1/24 units).
    pub fn zero(trunc_units: i64) -> QSeries {
        QSeries::make(0, Vec::new(), trunc_units)
    }

    pub fn one(trunc_units: i64) -> QSeries {
        QSeries::monomial(0, Rat::one(), trunc_units)
    }

    /// c * q^(exp/24).
    pub fn monomial(exp_units: i64, c: Rat, trunc_units: i64) -> QSeries {
        QSeries::make(exp_units.min(0), vec![], trunc_units).with_slot(exp_units, c)
    }

    fn with_slot(mut self, u: i64, c: Rat) -> QSeries {
        if u > self.trunc {
            return self;
        }
        if u < self.lead {
            let shift = (self.lead - u) as usize;
            let mut v = vec![Rat::zero(); shift];
            v.extend(self.coeffs);
            self.coeffs = v;
            self.lead = u;
        }
        self.coeffs[(u - self.lead) as usize] = c;
        self
    }

    /// Integral series from coefficients of q^0..q^n; truncation q^n.
    pub fn from_q_coeffs(coeffs: &[Rat]) -> QSeries {
        let n = coeffs.len() as i64 - 1;
        let mut s = QSeries::zero(24 * n);
        for (k, c) in coeffs.iter().enumerate() {
            s = s.with_slot(24 * k as i64, c.clone());
        }
        s
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// First slot holding a nonzero coefficient; `trunc + 1` when the series
    /// is zero throughout its known window.
    pub fn eff_lead(&self) -> i64 {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                return self.lead + i as i64;
            }
        }
        self.trunc + 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient at exponent u/24. Panics beyond the truncation.
    pub fn coeff_unit(&self, u: i64) -> Rat {
        assert!(u <= self.trunc, "coefficient beyond truncation");
        if u < self.lead {
            Rat::zero()
        } else {
            self.coeffs[(u - self.lead) as usize].clone()
        }
    }

    /// Coefficient of q^k for integer k.
    pub fn coeff_q(&self, k: i64) -> Rat {
        self.coeff_unit(24 * k)
    }

    pub fn truncate(&self, trunc_units: i64) -> QSeries {
        assert!(trunc_units <= self.trunc, "cannot extend a truncated series");
        QSeries::make(self.lead, self.coeffs.clone(), trunc_units)
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, r: &Rat) -> QSeries {
        QSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, rhs: &QSeries) -> QSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let lead = self.lead.min(rhs.lead);
        let mut out = QSeries::make(lead, vec![], trunc);
        for u in lead..=trunc {
            let a = if u >= self.lead && u <= self.trunc { self.coeff_unit(u) } else { Rat::zero() };
            let b = if u >= rhs.lead && u <= rhs.trunc { rhs.coeff_unit(u) } else { Rat::zero() };
            let s = a + b;
            if !s.is_zero() {
                out = out.with_slot(u, s);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &QSeries) -> QSeries {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &QSeries) -> QSeries {
        let la = self.eff_lead();
        let lb = rhs.eff_lead();
        let trunc = (self.trunc + lb).min(rhs.trunc + la);
        let lead = la + lb;
        if lead > trunc {
            return QSeries::zero(trunc);
        }
        let nz = |s: &QSeries| -> Vec<(i64, Rat)> {
            s.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (s.lead + i as i64, c.clone()))
                .collect()
        };
        let a = nz(self);
        let b = nz(rhs);
        let mut out = vec![Rat::zero(); (trunc - lead + 1) as usize];
        for (ua, ca) in &a {
            for (ub, cb) in &b {
                let u = ua + ub;
                if u > trunc {
                    break;
                }
                out[(u - lead) as usize] += ca * cb;
            }
        }
        QSeries { lead, coeffs: out, trunc }
    }

    /// Multiplicative inverse; requires a nonzero leading coefficient within
    /// the known window. The result is reliable through trunc - 2*lead.
    pub fn inv(&self) -> Result<QSeries, Error> {
        let l = self.eff_lead();
        if l > self.trunc {
            return Err(Error::NonInvertibleSeries);
        }
        let a0 = self.coeff_unit(l);
        let m = (self.trunc - 2 * l) - (-l); // number of slots after the lead
        if m < 0 {
            return Err(Error::NonInvertibleSeries);
        }
        let n = m as usize + 1;
        let mut b = vec![Rat::zero(); n];
        b[0] = a0.recip();
        for k in 1..n {
            let mut s = Rat::zero();
            for j in 1..=k {
                let a_j = self.coeff_unit(l + j as i64);
                if !a_j.is_zero() && !b[k - j].is_zero() {
                    s += &a_j * &b[k - j];
                }
            }
            if !s.is_zero() {
                b[k] = -(&s / &a0);
            }
        }
        Ok(QSeries { lead: -l, coeffs: b, trunc: self.trunc - 2 * l })
    }

    pub fn pow_i(&self, e: i64) -> Result<QSeries, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc: Option<QSeries> = None;
        for _ in 0..e.unsigned_abs() {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.mul(&base),
            });
        }
        Ok(acc.unwrap_or_else(|| QSeries::one(self.trunc)))
    }

    /// a * q * d/dq, exactly: the slot at u picks up the factor u/24.
    pub fn q_d_dq(&self) -> QSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rat::new((self.lead + i as i64).into(), 24.into()))
            .collect();
        QSeries { lead: self.lead, coeffs, trunc: self.trunc }
    }

    fn require_integral(&self) -> Result<(), Error> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && num_integer::Integer::mod_floor(&(self.lead + i as i64), &24) != 0 {
                return Err(Error::FractionalSupport);
            }
        }
        Ok(())
    }

    /// q -> -q; defined only on series supported on integral exponents.
    pub fn subst_neg_q(&self) -> Result<QSeries, Error> {
        self.require_integral()?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let u = self.lead + i as i64;
                if num_integer::Integer::div_floor(&u, &24).mod_floor(&2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Ok(QSeries { lead: self.lead, coeffs, trunc: self.trunc })
    }

    /// q -> q/lambda: the coefficient of q^k is multiplied by lambda^(-k).
    pub fn scale_q(&self, lambda: &Rat) -> Result<QSeries, Error> {
        if lambda.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.require_integral()?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_zero() {
                    c.clone()
                } else {
                    c * rat_pow(lambda, -(self.lead + i as i64) / 24)
                }
            })
            .collect();
        Ok(QSeries { lead: self.lead, coeffs, trunc: self.trunc })
    }

    /// Equality of all coefficients up to the common truncation.
    pub fn eq_through_common(&self, rhs: &QSeries) -> bool {
        let trunc = self.trunc.min(rhs.trunc);
        let lead = self.lead.min(rhs.lead);
        (lead..=trunc).all(|u| {
            let a = if u <= self.trunc { self.coeff_unit(u) } else { Rat::zero() };
            let b = if u <= rhs.trunc { rhs.coeff_unit(u) } else { Rat::zero() };
            a == b
        })
    }

    /// First integral exponent where the two series disagree, if any,
    /// scanning through the common truncation.
    pub fn first_mismatch(&self, rhs: &QSeries) -> Option<i64> {
        let trunc = self.trunc.min(rhs.trunc);
        let lead = self.lead.min(rhs.lead).min(0);
        (lead..=trunc).find(|&u| self.coeff_unit(u) != rhs.coeff_unit(u))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let u = self.lead + i as i64;
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if u == 0 {
                write!(f, "{}", super::rat_str(&mag))?;
                continue;
            }
            let q = if u % 24 == 0 {
                let k = u / 24;
                if k == 1 { "q".to_string() } else { format!("q^{k}") }
            } else {
                let g = (u.abs()).gcd(&24);
                format!("q^({}/{})", u / g, 24 / g)
            };
            if mag.is_one() {
                write!(f, "{q}")?;
            } else {
                write!(f, "{}*{}", super::rat_str(&mag), q)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_i, Error};
    use super::*;

    #[test]
    fn geometric_series_inverse() {
        // (1 - q)^-1 through q^3
        let one_minus_q = QSeries::one(24 * 3).sub(&QSeries::monomial(24, Rat::one(), 24 * 3));
        let inv = one_minus_q.inv().unwrap();
        for k in 0..=3 {
            assert_eq!(inv.coeff_q(k), rat_i(1));
        }
    }

    #[test]
    fn product_respects_truncation() {
        let a = QSeries::from_q_coeffs(&[rat_i(1), rat_i(2)]); // through q^1
        let b = QSeries::from_q_coeffs(&[rat_i(1), rat_i(0), rat_i(5)]); // through q^2
        let p = a.mul(&b);
        assert_eq!(p.trunc(), 24); // min truncation
        assert_eq!(p.coeff_q(0), rat_i(1));
        assert_eq!(p.coeff_q(1), rat_i(2));
    }

    #[test]
    fn product_of_leading_zeros_extends_truncation() {
        // q * q is reliable through q^(t+1)
        let q = QSeries::monomial(24, Rat::one(), 24 * 4);
        let sq = q.mul(&q);
        assert_eq!(sq.trunc(), 24 * 5);
        assert_eq!(sq.coeff_q(2), rat_i(1));
        assert_eq!(sq.coeff_q(5), rat_i(0));
    }

    #[test]
    fn inverse_needs_nonzero_lead() {
        let z = QSeries::zero(24);
        assert_eq!(z.inv(), Err(Error::NonInvertibleSeries));
    }

    #[test]
    fn inverse_of_shifted_series() {
        // (q + q^2)^-1 = q^-1 (1 + q)^-1 = q^-1 - 1 + q - q^2 ...
        let s = QSeries::from_q_coeffs(&[rat_i(0), rat_i(1), rat_i(1), rat_i(0), rat_i(0)]);
        let inv = s.inv().unwrap();
        assert_eq!(inv.coeff_unit(-24), rat_i(1));
        assert_eq!(inv.coeff_q(0), rat_i(-1));
        assert_eq!(inv.coeff_q(1), rat_i(1));
        assert_eq!(s.mul(&inv).coeff_q(0), rat_i(1));
    }

    #[test]
    fn q_derivative_is_exact_on_fractional_grid() {
        // q d/dq of q^(1/24) = (1/24) q^(1/24)
        let s = QSeries::monomial(1, Rat::one(), 48);
        assert_eq!(s.q_d_dq().coeff_unit(1), rat(1, 24));
    }

    #[test]
    fn sign_substitution_requires_integral_support() {
        let eta_ish = QSeries::monomial(1, Rat::one(), 48);
        assert_eq!(eta_ish.subst_neg_q(), Err(Error::FractionalSupport));
        let s = QSeries::from_q_coeffs(&[rat_i(1), rat_i(2), rat_i(3)]);
        let t = s.subst_neg_q().unwrap();
        assert_eq!(t.coeff_q(1), rat_i(-2));
        assert_eq!(t.coeff_q(2), rat_i(3));
    }

    #[test]
    fn scale_q_divides_by_powers() {
        let s = QSeries::from_q_coeffs(&[rat_i(7), rat_i(10), rat_i(300)]);
        let t = s.scale_q(&rat_i(10)).unwrap();
        assert_eq!(t.coeff_q(0), rat_i(7));
        assert_eq!(t.coeff_q(1), rat_i(1));
        assert_eq!(t.coeff_q(2), rat_i(3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn mul_then_div_recovers(
                a in proptest::collection::vec(-5i64..=5, 1..8),
                b in proptest::collection::vec(-5i64..=5, 1..8),
            ) {
                prop_assume!(b[0] != 0);
                let a: Vec<Rat> = a.into_iter().map(rat_i).collect();
                let b: Vec<Rat> = b.into_iter().map(rat_i).collect();
                let sa = QSeries::from_q_coeffs(&a);
                let sb = QSeries::from_q_coeffs(&b);
                let back = sa.mul(&sb).mul(&sb.inv().unwrap());
                prop_assert!(back.eq_through_common(&sa));
            }
        }
    }
}
