//! The intersection-form matrix Omega in the omega-basis, built row by row:
//! the first row is pinned by the Hodge-filtration vanishing, the pairing
//! constant c and the antidiagonal alternation; each next row follows from
//! differentiating pairings in t1 and reducing omega_{n+2} through the
//! Picard-Fuchs operator.

use crate::charts::{self, tn2_name};
use crate::exact::{Error, Rat, RatFunc, Ring};
use crate::gaussmanin::ConnectionMatrix;
use crate::matrix::{self, Mat};
use crate::picardfuchs;
use num_bigint::BigInt;

/// Intersection matrix over the chart ring, with the constant c symbolic.
#[derive(Clone, Debug)]
pub struct OmegaMatrix {
    pub n: u32,
    pub entries: Mat,
}

impl OmegaMatrix {
    pub fn ring(&self) -> Ring {
        self.entries[0][0].ring().clone()
    }

    pub fn size(&self) -> usize {
        self.n as usize + 1
    }

    /// Substitute a rational value for c.
    pub fn specialize_c(&self, c: &Rat) -> OmegaMatrix {
        let ring = self.ring();
        let images: Vec<RatFunc> = ring
            .var_names()
            .iter()
            .map(|v| {
                if v == "c" {
                    RatFunc::constant(&ring, c.clone())
                } else {
                    RatFunc::var(&ring, v)
                }
            })
            .collect();
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval_ratfunc(&images).unwrap()).collect())
            .collect();
        OmegaMatrix { n: self.n, entries }
    }
}

pub fn omega_matrix(n: u32) -> OmegaMatrix {
    omega_matrix_in_ring(&charts::chart_ring(n), n).expect("chart divisions are declared")
}

pub(crate) fn omega_matrix_in_ring(ring: &Ring, n: u32) -> Result<OmegaMatrix, Error> {
    let size = n as usize + 1;
    let t1 = ring.var_index("t1")?;
    let disc = RatFunc::from_mpoly(charts::discriminant(ring, n));
    // <omega_1, omega_{n+1}> = (-(n+2))^n c / (t1^(n+2) - t_{n+2})
    let top = {
        let sign = BigInt::from(-(n as i64 + 2)).pow(n);
        let num = &RatFunc::constant(ring, Rat::from_integer(sign)) * &RatFunc::var(ring, "c");
        num.div(&disc)?
    };
    // omega_{n+2} = -sum_j pf_coeffs[j-1] omega_j via the annihilating operator
    let pf = picardfuchs::pf_t1_in_ring(ring, n)?;
    let reduce_last = |row: &[RatFunc]| -> RatFunc {
        let mut acc = RatFunc::zero(ring);
        for j in 0..size {
            if !row[j].is_zero() && !pf.coeffs[j].is_zero() {
                acc = &acc - &(&pf.coeffs[j] * &row[j]);
            }
        }
        acc
    };
    let mut entries = matrix::zero(ring, size, size);
    entries[0][size - 1] = top;
    for i in 0..(size - 1) {
        let prev: Vec<RatFunc> = entries[i].clone();
        let overflow = reduce_last(&prev);
        for j in 0..size {
            let right = if j + 1 < size { prev[j + 1].clone() } else { overflow.clone() };
            entries[i + 1][j] = &prev[j].derivative(t1) - &right;
        }
    }
    Ok(OmegaMatrix { n, entries })
}

/// Residual of the compatibility identity d Omega = A~ Omega + Omega A~^tr,
/// one matrix per coordinate differential; the identity holds iff every
/// residual vanishes.
pub fn compatibility_residual(omega: &OmegaMatrix, gm: &ConnectionMatrix) -> Vec<(String, Mat)> {
    let ring = omega.ring();
    let ot = matrix::transpose(&omega.entries);
    gm.components
        .iter()
        .map(|(coord, m)| {
            let idx = ring.var_index(coord).expect("coordinate in ring");
            let d = matrix::entrywise(&omega.entries, |e| e.derivative(idx));
            let rhs = matrix::add(
                &matrix::mul(m, &omega.entries),
                &matrix::transpose(&matrix::mul(m, &ot)),
            );
            (coord.clone(), matrix::sub(&d, &rhs))
        })
        .collect()
}

pub fn check_compatibility(omega: &OmegaMatrix, gm: &ConnectionMatrix) -> bool {
    compatibility_residual(omega, gm)
        .iter()
        .all(|(_, m)| matrix::is_zero(m))
}

/// Structural invariants of the intersection matrix: (-1)^n symmetry, the
/// Hodge vanishing triangle, and the antidiagonal alternation.
pub fn omega_invariants_hold(omega: &OmegaMatrix) -> bool {
    let n = omega.n;
    let size = omega.size();
    let e = &omega.entries;
    for i in 0..size {
        for j in 0..size {
            let sym = if n % 2 == 0 { e[j][i].clone() } else { -&e[j][i] };
            if e[i][j] != sym {
                return false;
            }
            if i + j + 2 <= n as usize + 1 && !e[i][j].is_zero() {
                return false;
            }
        }
    }
    for j in 0..size {
        // <omega_{j+1}, omega_{n+1-j}> = (-1)^j <omega_1, omega_{n+1}>
        let expect = if j % 2 == 0 { e[0][size - 1].clone() } else { -&e[0][size - 1] };
        if e[j][size - 1 - j] != expect {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_ratfunc;
    use crate::gaussmanin::gm_matrix;

    fn parse(ring: &Ring, s: &str) -> RatFunc {
        parse_ratfunc(ring, s).unwrap()
    }

    #[test]
    fn omega_n1_matches_print() {
        let o = omega_matrix(1);
        let ring = o.ring();
        assert!(o.entries[0][0].is_zero());
        assert!(o.entries[1][1].is_zero());
        assert_eq!(o.entries[0][1], parse(&ring, "-3*c/(t1^3 - t3)"));
        assert_eq!(o.entries[1][0], parse(&ring, "3*c/(t1^3 - t3)"));
    }

    #[test]
    fn omega_n2_matches_print() {
        let o = omega_matrix(2);
        let ring = o.ring();
        let e = &o.entries;
        let d = "(t1^4 - t4)";
        assert!(e[0][0].is_zero() && e[0][1].is_zero() && e[1][0].is_zero());
        assert_eq!(e[0][2], parse(&ring, &format!("16*c/{d}")));
        assert_eq!(e[1][1], parse(&ring, &format!("-16*c/{d}")));
        assert_eq!(e[1][2], parse(&ring, &format!("32*c*t1^3/{d}^2")));
        assert_eq!(e[2][0], parse(&ring, &format!("16*c/{d}")));
        assert_eq!(e[2][1], parse(&ring, &format!("32*c*t1^3/{d}^2")));
        assert_eq!(e[2][2], parse(&ring, &format!("-16*c*t1^2*(5*t1^4 - t4)/{d}^3")));
    }

    #[test]
    fn omega_n4_key_entries_match_print() {
        let o = omega_matrix(4);
        let ring = o.ring();
        let e = &o.entries;
        let d = "(t1^6 - t6)";
        assert_eq!(e[0][4], parse(&ring, &format!("1296*c/{d}")));
        assert_eq!(e[1][3], parse(&ring, &format!("-1296*c/{d}")));
        assert_eq!(e[1][4], parse(&ring, &format!("9*1296*c*t1^5/{d}^2")));
        assert_eq!(e[2][2], parse(&ring, &format!("1296*c/{d}")));
        assert_eq!(e[2][3], parse(&ring, &format!("-3*1296*c*t1^5/{d}^2")));
        assert_eq!(
            e[2][4],
            parse(&ring, &format!("1296*c*t1^4*(7*t1^6 + 20*t6)/{d}^3"))
        );
        assert_eq!(
            e[3][4],
            parse(
                &ring,
                &format!("-1296*c*t1^3*(56*t1^12 + 35*t1^6*t6 - 10*t6^2)/{d}^4")
            )
        );
    }

    #[test]
    fn omega_invariants_through_n6() {
        for n in 1..=6 {
            let o = omega_matrix(n);
            assert!(omega_invariants_hold(&o), "invariants for n={n}");
        }
    }

    #[test]
    fn entries_are_linear_in_c() {
        for n in 1..=5 {
            let o = omega_matrix(n);
            let c = o.ring().var_index("c").unwrap();
            for row in &o.entries {
                for e in row {
                    assert!(e.denominator_factors().keys().all(|_| true));
                    for (mono_exp, _) in e.numerator().coeffs_in_var(c) {
                        assert_eq!(mono_exp, 1, "n={n}: entry not linear in c: {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn poles_only_on_declared_locus() {
        for n in 1..=5u32 {
            let o = omega_matrix(n);
            let ring = o.ring();
            let tn2 = ring.factor_index(&ring.var(&tn2_name(n))).unwrap();
            let disc = ring.factor_index(&charts::discriminant(&ring, n)).unwrap();
            for row in &o.entries {
                for e in row {
                    assert!(e
                        .denominator_factors()
                        .keys()
                        .all(|&f| f == tn2 || f == disc));
                }
            }
        }
    }

    #[test]
    fn compatibility_holds_for_small_n() {
        for n in 1..=4 {
            let o = omega_matrix(n);
            let gm = gm_matrix(n);
            assert!(check_compatibility(&o, &gm), "d Omega residual for n={n}");
        }
    }

    #[test]
    fn perturbed_omega_fails_compatibility() {
        let mut o = omega_matrix(1);
        let two = RatFunc::constant(&o.ring(), crate::exact::rat_i(2));
        o.entries[0][1] = &o.entries[0][1] * &two;
        assert!(!check_compatibility(&o, &gm_matrix(1)));
    }

    #[test]
    fn c_scaling_is_linear() {
        let o = omega_matrix(2);
        let scaled = o.specialize_c(&crate::exact::rat_i(6));
        let base = o.specialize_c(&crate::exact::rat_i(3));
        for (rs, rb) in scaled.entries.iter().zip(&base.entries) {
            for (s, b) in rs.iter().zip(rb) {
                assert_eq!(s, &(b * &RatFunc::constant(&o.ring(), crate::exact::rat_i(2))));
            }
        }
    }
}
