//! Rational functions whose denominators are multisets over the ring's
//! declared factor list.
//!
//! Division never runs a general gcd: the divisor's numerator must decompose
//! as unit * product of declared factors (after rationalizing away root
//! symbols), and anything else is reported as an undeclared-factor error --
//! which in this pipeline always means a modelling bug, not bad user input.
//! Denominators stay root-free; canonical forms are unique because the
//! declared factors are pairwise non-associate irreducibles.

use super::mpoly::MPoly;
use super::ring::Ring;
use super::{Error, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: BTreeMap<usize, u32>,
}

impl RatFunc {
    pub fn from_mpoly(num: MPoly) -> RatFunc {
        RatFunc { num, den: BTreeMap::new() }
    }

    pub fn zero(ring: &Ring) -> RatFunc {
        RatFunc::from_mpoly(ring.zero())
    }

    pub fn one(ring: &Ring) -> RatFunc {
        RatFunc::from_mpoly(ring.one())
    }

    pub fn constant(ring: &Ring, r: Rat) -> RatFunc {
        RatFunc::from_mpoly(ring.constant(r))
    }

    pub fn var(ring: &Ring, name: &str) -> RatFunc {
        RatFunc::from_mpoly(ring.var(name))
    }

    /// Canonical constructor: cancels declared factors out of the numerator.
    pub fn new(num: MPoly, den: BTreeMap<usize, u32>) -> RatFunc {
        if num.is_zero() {
            return RatFunc { num, den: BTreeMap::new() };
        }
        let ring = num.ring().clone();
        let mut num = num;
        let mut out = BTreeMap::new();
        for (idx, exp) in den {
            let factor = ring.factor(idx);
            let mut e = exp;
            while e > 0 {
                match num.try_div_exact(&factor) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                out.insert(idx, e);
            }
        }
        RatFunc { num, den: out }
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    /// The denominator expanded as a polynomial.
    pub fn denominator_poly(&self) -> MPoly {
        let ring = self.ring();
        let mut d = ring.one();
        for (&idx, &e) in &self.den {
            d = &d * &ring.factor(idx).pow(e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_mpoly(&self) -> Option<&MPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn common_den(&self, rhs: &RatFunc) -> (MPoly, MPoly, BTreeMap<usize, u32>) {
        // lcm of factor multisets; returns the two complementary cofactors
        let ring = self.ring();
        let mut lcm = self.den.clone();
        for (&idx, &e) in &rhs.den {
            let cur = lcm.entry(idx).or_insert(0);
            *cur = (*cur).max(e);
        }
        let co = |own: &BTreeMap<usize, u32>| {
            let mut p = ring.one();
            for (&idx, &e) in &lcm {
                let have = own.get(&idx).copied().unwrap_or(0);
                if e > have {
                    p = &p * &ring.factor(idx).pow(e - have);
                }
            }
            p
        };
        (co(&self.den), co(&rhs.den), lcm)
    }

    /// Multiply by the inverse of a single-term unit polynomial
    /// (a rational times unit-variable powers).
    fn div_unit(num: &MPoly, unit: &MPoly) -> MPoly {
        let ring = num.ring().clone();
        let (mono, coeff) = {
            let mut it = unit.data().iter();
            let (m, c) = it.next().expect("unit is nonzero");
            assert!(it.next().is_none(), "unit must be a single term");
            (m.clone(), c.clone())
        };
        let inv_exps: Vec<i32> = mono.exps.iter().map(|e| -e).collect();
        let inv = MPoly::monomial(ring, inv_exps, coeff.recip());
        num * &inv
    }

    /// Decompose a root-free polynomial as unit * product of declared
    /// factors, or report the leftover as undeclared.
    fn factorize(p: &MPoly) -> Result<(MPoly, BTreeMap<usize, u32>), Error> {
        let ring = p.ring().clone();
        let mut rest = p.clone();
        let mut den = BTreeMap::new();
        for idx in 0..ring.n_factors() {
            let (k, reduced) = rest.multiplicity_of(&ring.factor(idx));
            if k > 0 {
                den.insert(idx, k);
                rest = reduced;
            }
        }
        let is_unit = rest.num_terms() == 1
            && rest
                .data()
                .iter()
                .all(|(m, _)| {
                    m.exps
                        .iter()
                        .enumerate()
                        .all(|(i, &e)| e == 0 || ring.is_unit_var(i))
                });
        if is_unit {
            Ok((rest, den))
        } else {
            Err(Error::UndeclaredFactor(format!("{rest}")))
        }
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = self.ring().clone();
        // self / (g_num / g_den)  =  self * g_den / g_num
        let mut num = &self.num * &rhs.denominator_poly();
        let mut divisor = rhs.num.clone();
        // rationalize root symbols out of the divisor
        for r in ring.root_vars() {
            if divisor.contains_var(r) {
                let (a, b) = divisor.split_root(r);
                let conj = &a - &(&b * &ring.var(ring.var_name(r)));
                num = &num * &conj;
                divisor = &divisor * &conj;
            }
        }
        let (unit, extra) = Self::factorize(&divisor)?;
        num = Self::div_unit(&num, &unit);
        let mut den = self.den.clone();
        for (idx, e) in extra {
            *den.entry(idx).or_insert(0) += e;
        }
        Ok(RatFunc::new(num, den))
    }

    pub fn inv(&self) -> Result<RatFunc, Error> {
        RatFunc::one(self.ring()).div(self)
    }

    pub fn pow_i(&self, e: i32) -> Result<RatFunc, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one(self.ring());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact partial derivative (quotient rule).
    pub fn derivative(&self, idx: usize) -> RatFunc {
        let ring = self.ring();
        // d(N / prod f_i^e_i) has denominator prod f_i^(e_i+1) and numerator
        // dN * prod f_i - N * sum_i e_i * df_i * prod_{j != i} f_j
        let mut prod_all = ring.one();
        for &i in self.den.keys() {
            prod_all = &prod_all * &ring.factor(i);
        }
        let mut num = &self.num.derivative(idx) * &prod_all;
        for (&i, &e) in &self.den {
            let mut cof = ring.constant(Rat::from_integer(e.into()));
            for &j in self.den.keys() {
                if j != i {
                    cof = &cof * &ring.factor(j);
                }
            }
            num = &num - &(&(&self.num * &ring.factor(i).derivative(idx)) * &cof);
        }
        let den = self.den.iter().map(|(&i, &e)| (i, e + 1)).collect();
        RatFunc::new(num, den)
    }

    /// Substitute every variable by a rational function (in any ring).
    pub fn eval_ratfunc(&self, images: &[RatFunc]) -> Result<RatFunc, Error> {
        let target = images
            .first()
            .map(|r| r.ring().clone())
            .expect("at least one variable image");
        let num = self.num.eval(
            images,
            |a: &RatFunc, b| a + b,
            |a, b| a * b,
            |a| a.inv(),
            |r| RatFunc::constant(&target, r.clone()),
        )?;
        let mut out = num;
        for (&idx, &e) in &self.den {
            let f = RatFunc::from_mpoly(self.ring().factor(idx)).eval_ratfunc(images)?;
            out = out.div(&f.pow_i(e as i32)?)?;
        }
        Ok(out)
    }

    /// Evaluate at an exact rational point; denominator factors must not vanish.
    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat, Error> {
        let mut val = self.num.eval(
            point,
            |a: &Rat, b| a + b,
            |a, b| a * b,
            |a| {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(a.recip())
                }
            },
            |r| r.clone(),
        )?;
        for (&idx, &e) in &self.den {
            let fval = self.ring().factor(idx).eval_rat(point);
            if fval.is_zero() {
                return Err(Error::DivisionByZero);
            }
            for _ in 0..e {
                val = &val / &fval;
            }
        }
        Ok(val)
    }

    /// Move to a ring sharing variable names (possibly more variables and a
    /// finer factor list). Denominator factors must be declared there too.
    pub fn lift(&self, target: &Ring) -> Result<RatFunc, Error> {
        let num = target.lift_poly(&self.num)?;
        let mut den = BTreeMap::new();
        for (&idx, &e) in &self.den {
            let f = target.lift_poly(&self.ring().factor(idx))?;
            let j = target
                .factor_index(&f)
                .ok_or_else(|| Error::UndeclaredFactor(format!("{f}")))?;
            den.insert(j, e);
        }
        Ok(RatFunc::new(num, den))
    }
}

impl PartialEq for RatFunc {
    /// Cross-multiplication equality; with canonical forms this reduces to
    /// structural equality, which is what we compare.
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let (ca, cb, lcm) = self.common_den(rhs);
        RatFunc::new(&(&self.num * &ca) + &(&rhs.num * &cb), lcm)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let (ca, cb, lcm) = self.common_den(rhs);
        RatFunc::new(&(&self.num * &ca) - &(&rhs.num * &cb), lcm)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (&idx, &e) in &rhs.den {
            *den.entry(idx).or_insert(0) += e;
        }
        RatFunc::new(&self.num * &rhs.num, den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let dens: Vec<String> = self
            .den
            .iter()
            .map(|(&idx, &e)| {
                let base = format!("({})", self.ring().factor(idx));
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "({})/({})", self.num, dens.join("*"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
