//! Sparse multivariate polynomials over big rationals.
//!
//! Monomials are exponent vectors over the ring's ordered variables, compared
//! in graded lexicographic order (the order only fixes canonical printing and
//! iteration; it never changes semantics). Variables marked as units may
//! carry negative exponents, so the symbolic constant `c` lives in a Laurent
//! ring and expressions like `(1/1296)*c^-1*(t1^6-t6)` are honest
//! polynomials. Products are reduced modulo every root relation `r^2 = p`,
//! keeping root exponents at 0 or 1.

use super::ring::Ring;
use super::{rat_str, Error, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector; `Ord` is graded lex on the declared variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Monomial {
    pub exps: Vec<i32>,
}

impl Monomial {
    fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ring-agnostic term storage. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct PolyData {
    pub terms: BTreeMap<Monomial, Rat>,
}

impl PolyData {
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    fn insert(&mut self, mono: Monomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

/// Sparse multivariate polynomial anchored to a [`Ring`].
#[derive(Clone)]
pub struct MPoly {
    ring: Ring,
    data: PolyData,
}

impl MPoly {
    pub(crate) fn from_data(ring: Ring, data: PolyData) -> MPoly {
        MPoly { ring, data }
    }

    pub(crate) fn data(&self) -> &PolyData {
        &self.data
    }

    pub fn zero(ring: Ring) -> MPoly {
        MPoly { ring, data: PolyData::default() }
    }

    pub fn constant(ring: Ring, r: Rat) -> MPoly {
        let n = ring.nvars();
        let mut data = PolyData::default();
        data.insert(Monomial { exps: vec![0; n] }, r);
        MPoly { ring, data }
    }

    pub fn var(ring: Ring, idx: usize) -> MPoly {
        let mut exps = vec![0; ring.nvars()];
        exps[idx] = 1;
        MPoly::monomial(ring, exps, Rat::one())
    }

    pub fn monomial(ring: Ring, exps: Vec<i32>, coeff: Rat) -> MPoly {
        assert_eq!(exps.len(), ring.nvars(), "exponent vector length");
        for (i, &e) in exps.iter().enumerate() {
            assert!(e >= 0 || ring.is_unit_var(i), "negative exponent on non-unit variable");
        }
        let mut data = PolyData::default();
        data.insert(Monomial { exps }, coeff);
        MPoly { ring, data }.reduced()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.data.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.data.terms.len() <= 1
            && self.data.terms.keys().all(|m| m.exps.iter().all(|&e| e == 0))
    }

    /// The constant value, if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.data.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.data.terms.len()
    }

    pub fn contains_var(&self, idx: usize) -> bool {
        self.data.terms.keys().any(|m| m.exps[idx] != 0)
    }

    pub fn degree_in(&self, idx: usize) -> i32 {
        self.data.terms.keys().map(|m| m.exps[idx]).max().unwrap_or(0)
    }

    fn assert_same_ring(&self, other: &MPoly) {
        assert!(
            self.ring.same(&other.ring),
            "variable universe mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    /// Reduce every root exponent to 0 or 1 using r^2 = p. Relations are
    /// root-free, so one pass per symbol is exhaustive; the result does not
    /// depend on the order symbols are processed in.
    fn reduced(self) -> MPoly {
        let ring = self.ring.clone();
        let root_vars: Vec<usize> = ring.root_vars().collect();
        if root_vars.is_empty() || !root_vars.iter().any(|&r| self.degree_in(r) >= 2) {
            return self;
        }
        self.reduced_in_order(&root_vars)
    }

    /// Reduction applying relations in the given symbol order; exposed to the
    /// crate so confluence can be tested on permuted orders.
    pub(crate) fn reduced_in_order(&self, order: &[usize]) -> MPoly {
        let ring = self.ring.clone();
        let mut current = self.data.clone();
        for &r in order {
            let rel = ring.root_relation(r).expect("not a root symbol");
            let mut next = PolyData::default();
            for (mono, coeff) in current.iter() {
                let e = mono.exps[r];
                if e < 2 {
                    next.insert(mono.clone(), coeff.clone());
                    continue;
                }
                let mut base = mono.clone();
                base.exps[r] = e % 2;
                // multiply (base, coeff) by p^(e/2)
                let mut acc = PolyData::default();
                acc.insert(base, coeff.clone());
                for _ in 0..(e / 2) {
                    acc = mul_data(&acc, &rel.data);
                }
                for (m, c) in acc.iter() {
                    next.insert(m.clone(), c.clone());
                }
            }
            current = next;
        }
        MPoly { ring, data: current }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to a variable (root symbols are
    /// treated as independent coordinates; the power rule covers negative
    /// unit-variable exponents).
    pub fn derivative(&self, idx: usize) -> MPoly {
        let mut data = PolyData::default();
        for (mono, coeff) in self.data.iter() {
            let e = mono.exps[idx];
            if e == 0 {
                continue;
            }
            let mut m = mono.clone();
            m.exps[idx] = e - 1;
            data.insert(m, coeff * Rat::from_integer(e.into()));
        }
        MPoly { ring: self.ring.clone(), data }.reduced()
    }

    /// Exact division by a root-free divisor, if the quotient exists in the
    /// polynomial ring. Unit variables divide unconditionally.
    pub fn try_div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        self.assert_same_ring(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        for r in self.ring.root_vars() {
            assert!(!divisor.contains_var(r), "divisor must be root-free");
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (dm, dc) = divisor.data.terms.iter().next_back()?;
        let mut rem = self.data.clone();
        let mut quot = PolyData::default();
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))
        {
            // leading-term divisibility
            let mut q = vec![0i32; rm.exps.len()];
            for i in 0..q.len() {
                let d = rm.exps[i] - dm.exps[i];
                if d < 0 && !self.ring.is_unit_var(i) {
                    return None;
                }
                q[i] = d;
            }
            let qm = Monomial { exps: q };
            let qc = &rc / dc;
            quot.insert(qm.clone(), qc.clone());
            // rem -= (qm, qc) * divisor
            for (m, c) in divisor.data.iter() {
                rem.insert(qm.mul(m), -(&qc * c));
            }
            if rem.terms.is_empty() {
                break;
            }
        }
        if rem.terms.is_empty() {
            Some(MPoly { ring: self.ring.clone(), data: quot })
        } else {
            None
        }
    }

    /// View as a univariate polynomial in one variable: exponent -> coefficient
    /// polynomial free of that variable.
    pub fn coeffs_in_var(&self, idx: usize) -> BTreeMap<i32, MPoly> {
        let mut out: BTreeMap<i32, PolyData> = BTreeMap::new();
        for (mono, coeff) in self.data.iter() {
            let e = mono.exps[idx];
            let mut m = mono.clone();
            m.exps[idx] = 0;
            out.entry(e).or_default().insert(m, coeff.clone());
        }
        out.into_iter()
            .map(|(e, d)| (e, MPoly { ring: self.ring.clone(), data: d }))
            .collect()
    }

    /// Split into (root-free part, coefficient of the root symbol).
    pub fn split_root(&self, root: usize) -> (MPoly, MPoly) {
        let mut even = PolyData::default();
        let mut odd = PolyData::default();
        for (mono, coeff) in self.data.iter() {
            match mono.exps[root] {
                0 => even.insert(mono.clone(), coeff.clone()),
                1 => {
                    let mut m = mono.clone();
                    m.exps[root] = 0;
                    odd.insert(m, coeff.clone());
                }
                _ => unreachable!("unreduced root exponent"),
            }
        }
        (
            MPoly { ring: self.ring.clone(), data: even },
            MPoly { ring: self.ring.clone(), data: odd },
        )
    }

    /// Evaluate with one image per variable, over any exact scalar domain.
    pub fn eval<T, AddF, MulF, InvF, FromF>(
        &self,
        images: &[T],
        add: AddF,
        mul: MulF,
        inv: InvF,
        from_rat: FromF,
    ) -> Result<T, Error>
    where
        T: Clone,
        AddF: Fn(&T, &T) -> T,
        MulF: Fn(&T, &T) -> T,
        InvF: Fn(&T) -> Result<T, Error>,
        FromF: Fn(&Rat) -> T,
    {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc: Option<T> = None;
        for (mono, coeff) in self.data.iter() {
            let mut term = from_rat(coeff);
            for (i, &e) in mono.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if e < 0 { inv(&images[i])? } else { images[i].clone() };
                for _ in 0..e.unsigned_abs() {
                    term = mul(&term, &base);
                }
            }
            acc = Some(match acc {
                None => term,
                Some(a) => add(&a, &term),
            });
        }
        Ok(acc.unwrap_or_else(|| from_rat(&Rat::zero())))
    }

    /// Evaluate at a rational point.
    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        self.eval(
            point,
            |a, b| a + b,
            |a, b| a * b,
            |a| {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(a.recip())
                }
            },
            |r| r.clone(),
        )
        .expect("rational evaluation hit a zero unit variable")
    }

    /// Largest power of `divisor` dividing self exactly (0 if none or self = 0).
    pub fn multiplicity_of(&self, divisor: &MPoly) -> (u32, MPoly) {
        let mut k = 0u32;
        let mut cur = self.clone();
        if cur.is_zero() {
            return (0, cur);
        }
        while let Some(q) = cur.try_div_exact(divisor) {
            cur = q;
            k += 1;
        }
        (k, cur)
    }
}

fn mul_data(a: &PolyData, b: &PolyData) -> PolyData {
    let mut out = PolyData::default();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.insert(ma.mul(mb), ca * cb);
        }
    }
    out
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.data == other.data
    }
}

impl Eq for MPoly {}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.assert_same_ring(rhs);
        let mut data = self.data.clone();
        for (m, c) in rhs.data.iter() {
            data.insert(m.clone(), c.clone());
        }
        MPoly { ring: self.ring.clone(), data }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.assert_same_ring(rhs);
        let mut data = self.data.clone();
        for (m, c) in rhs.data.iter() {
            data.insert(m.clone(), -c.clone());
        }
        MPoly { ring: self.ring.clone(), data }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let mut data = PolyData::default();
        for (m, c) in self.data.iter() {
            data.insert(m.clone(), -c.clone());
        }
        MPoly { ring: self.ring.clone(), data }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.assert_same_ring(rhs);
        MPoly {
            ring: self.ring.clone(),
            data: mul_data(&self.data, &rhs.data),
        }
        .reduced()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in self.data.terms.iter().rev() {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = mono
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    let name = self.ring.var_name(i);
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", rat_str(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", rat_str(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::{AlgebraicContext, Ring};
    use super::super::{parse_mpoly, rat, rat_i};
    use super::*;

    fn plain_ring() -> Ring {
        Ring::new(&["t1", "t2", "t3"], &[])
    }

    /// Ring carrying the n=4 root symbol: t8^2 = (1/1296) c^-1 (t1^6 - t6).
    fn root_ring() -> Ring {
        let bare = Ring::new(&["c", "t1", "t6", "t8"], &["c"]);
        let rel = parse_mpoly(&bare, "1/1296 * c^-1 * (t1^6 - t6)").unwrap();
        bare.extend(AlgebraicContext::new().define("t8", rel), &[])
    }

    #[test]
    fn binomial_square() {
        let r = plain_ring();
        let s = &r.var("t1") + &r.var("t2");
        let sq = &s * &s;
        assert_eq!(sq, parse_mpoly(&r, "t1^2 + 2*t1*t2 + t2^2").unwrap());
    }

    #[test]
    fn additive_identity() {
        let r = plain_ring();
        let p = parse_mpoly(&r, "3*t1^2*t3 - 1/2*t2").unwrap();
        assert_eq!(&p + &r.zero(), p);
    }

    #[test]
    fn root_square_reduces_to_relation() {
        let r = root_ring();
        let t8 = r.var("t8");
        let got = &t8 * &t8;
        assert_eq!(got, parse_mpoly(&r, "1/1296 * c^-1 * (t1^6 - t6)").unwrap());
        // odd powers keep a single root factor
        let cubed = &got * &t8;
        assert_eq!(cubed.degree_in(r.var_index("t8").unwrap()), 1);
    }

    #[test]
    fn reduction_is_confluent_across_root_order() {
        // two independent root symbols; build raw unreduced exponent data and
        // reduce it in either order
        let bare = Ring::new(&["x", "r", "s"], &[]);
        let px = parse_mpoly(&bare, "x + 1").unwrap();
        let qx = parse_mpoly(&bare, "x^2 - 2").unwrap();
        let ring = bare.extend(
            AlgebraicContext::new().define("r", px).define("s", qx),
            &[],
        );
        let mut data = PolyData::default();
        data.insert(Monomial { exps: vec![1, 4, 3] }, rat_i(2));
        data.insert(Monomial { exps: vec![0, 3, 5] }, rat(-1, 3));
        data.insert(Monomial { exps: vec![2, 2, 2] }, rat_i(7));
        let p = MPoly::from_data(ring.clone(), data);
        let a = p.reduced_in_order(&[1, 2]);
        let b = p.reduced_in_order(&[2, 1]);
        assert_eq!(a, b);
        assert!(a.degree_in(1) <= 1 && a.degree_in(2) <= 1);
    }

    #[test]
    fn exact_division_roundtrip() {
        let r = plain_ring();
        let a = parse_mpoly(&r, "t1^3 - t3").unwrap();
        let b = parse_mpoly(&r, "2*t1*t2 + t3^2").unwrap();
        let prod = &a * &b;
        assert_eq!(prod.try_div_exact(&a), Some(b.clone()));
        assert_eq!(prod.try_div_exact(&b), Some(a.clone()));
        let off = &prod + &r.one();
        assert_eq!(off.try_div_exact(&a), None);
    }

    #[test]
    fn derivative_power_rule() {
        let r = plain_ring();
        let p = parse_mpoly(&r, "t1^3*t2 - 2*t3").unwrap();
        let i = r.var_index("t1").unwrap();
        assert_eq!(p.derivative(i), parse_mpoly(&r, "3*t1^2*t2").unwrap());
    }

    #[test]
    fn laurent_unit_variable() {
        let r = root_ring();
        let c = r.var("c");
        let cinv = MPoly::monomial(r.clone(), vec![-1, 0, 0, 0], rat_i(1));
        assert_eq!(&c * &cinv, r.one());
        let d = cinv.derivative(0);
        assert_eq!(d, MPoly::monomial(r.clone(), vec![-2, 0, 0, 0], rat_i(-1)));
    }

    #[test]
    fn display_parse_roundtrip_is_canonical() {
        let r = plain_ring();
        for text in ["t1^2 - 2*t1*t2 + 1/3", "-t3", "0", "5", "-1/2*t1*t2*t3"] {
            let p = parse_mpoly(&r, text).unwrap();
            assert_eq!(parse_mpoly(&r, &p.to_string()).unwrap(), p);
        }
        assert_eq!(
            parse_mpoly(&r, "t2*t1 + t1*t2").unwrap().to_string(),
            "2*t1*t2"
        );
    }

    #[test]
    #[should_panic(expected = "variable universe mismatch")]
    fn cross_ring_arithmetic_panics() {
        let a = plain_ring().var("t1");
        let b = Ring::new(&["z"], &[]).var("z");
        let _ = &a + &b;
    }

    #[test]
    fn eval_rat_point() {
        let r = plain_ring();
        let p = parse_mpoly(&r, "t1^2*t2 - t3").unwrap();
        let v = p.eval_rat(&[rat(1, 2), rat_i(4), rat_i(1)]);
        assert_eq!(v, rat_i(0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = MPoly> {
            let terms = proptest::collection::vec(
                (
                    proptest::collection::vec(0..4i32, 3),
                    -6i64..=6,
                    1i64..=3,
                ),
                0..5,
            );
            terms.prop_map(|ts| {
                let r = plain_ring();
                let mut acc = r.zero();
                for (exps, n, d) in ts {
                    acc = &acc + &MPoly::monomial(r.clone(), exps, rat(n, d));
                }
                acc
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_axioms((a, b, c) in (arb_poly(), arb_poly(), arb_poly())) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a + &b, &b + &a);
            }

            #[test]
            fn root_product_confluence(terms in proptest::collection::vec(
                (proptest::collection::vec(0..5i32, 3), -6i64..=6), 1..5))
            {
                // random raw exponent data over a two-root universe, reduced
                // in both symbol orders
                let bare = Ring::new(&["t1", "t2", "t3"], &[]);
                let p1 = parse_mpoly(&bare, "t1 + 1").unwrap();
                let p2 = parse_mpoly(&bare, "t1*t1 + 2").unwrap();
                let ring = bare.extend(
                    AlgebraicContext::new().define("t2", p1).define("t3", p2),
                    &[],
                );
                let mut data = PolyData::default();
                for (exps, n) in terms {
                    data.insert(Monomial { exps }, rat_i(n));
                }
                let p = MPoly::from_data(ring.clone(), data);
                prop_assert_eq!(p.reduced_in_order(&[1, 2]), p.reduced_in_order(&[2, 1]));
            }
        }
    }
}
