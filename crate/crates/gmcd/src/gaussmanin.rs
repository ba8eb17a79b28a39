//! The Gauss-Manin connection of the family over the (t1, t_{n+2}) chart in
//! the omega-basis, computed by base change from the companion matrix A(z),
//! and the enhanced connection in the alpha-basis.
//!
//! The base-change route is the definition; the closed structural row
//! formulas serve as oracles in the tests, never as the computation.

use crate::charts::{self, tn2_name};
use crate::exact::{Error, Rat, RatFunc, Ring};
use crate::matrix::{self, Mat};
use crate::picardfuchs;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// A matrix of 1-forms sum_c M_c dc, stored as one square rational-function
/// matrix per coordinate differential.
#[derive(Clone, Debug)]
pub struct ConnectionMatrix {
    pub size: usize,
    pub components: BTreeMap<String, Mat>,
}

impl ConnectionMatrix {
    pub fn ring(&self) -> Ring {
        self.components
            .values()
            .next()
            .expect("connection has at least one component")[0][0]
            .ring()
            .clone()
    }

    pub fn component(&self, coord: &str) -> Option<&Mat> {
        self.components.get(coord)
    }

    /// Contract with a vector field: sum_c M_c * vdot_c.
    pub fn contract(&self, vf: &BTreeMap<String, RatFunc>) -> Mat {
        let ring = self.ring();
        let mut out = matrix::zero(&ring, self.size, self.size);
        for (coord, m) in &self.components {
            if let Some(dot) = vf.get(coord) {
                if !dot.is_zero() {
                    out = matrix::add(&out, &matrix::scale(m, dot));
                }
            }
        }
        out
    }

    /// Move every component into a larger ring by variable name.
    pub fn lift(&self, target: &Ring) -> Result<ConnectionMatrix, Error> {
        let components = self
            .components
            .iter()
            .map(|(c, m)| Ok((c.clone(), matrix::lift(m, target)?)))
            .collect::<Result<_, Error>>()?;
        Ok(ConnectionMatrix { size: self.size, components })
    }

    /// Curvature two-form components d A - A /\ A, one matrix per coordinate
    /// pair (c1 < c2): del_{c1} M_{c2} - del_{c2} M_{c1} - [M_{c1}, M_{c2}].
    pub fn curvature(&self) -> Vec<(String, String, Mat)> {
        let ring = self.ring();
        let coords: Vec<&String> = self.components.keys().collect();
        let mut out = Vec::new();
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                let c1 = coords[i];
                let c2 = coords[j];
                let v1 = ring.var_index(c1).expect("coordinate in ring");
                let v2 = ring.var_index(c2).expect("coordinate in ring");
                let m1 = &self.components[c1];
                let m2 = &self.components[c2];
                let d = matrix::sub(
                    &matrix::entrywise(m2, |e| e.derivative(v1)),
                    &matrix::entrywise(m1, |e| e.derivative(v2)),
                );
                out.push((c1.clone(), c2.clone(), matrix::sub(&d, &matrix::commutator(m1, m2))));
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().iter().all(|(_, _, m)| matrix::is_zero(m))
    }
}

/// Base-change matrix: row k expresses d^k eta / dz^k over omega_1..omega_{k+1}
/// using eta = t1 omega_1 and d/dz = -(1/(n+2)) t1^(n+3)/t_{n+2} d/dt1.
pub fn base_change(n: u32) -> Mat {
    base_change_in_ring(&charts::chart_ring(n), n).expect("chart divisions are declared")
}

pub(crate) fn base_change_in_ring(ring: &Ring, n: u32) -> Result<Mat, Error> {
    let size = n as usize + 1;
    let t1 = ring.var_index("t1")?;
    let pre = {
        let num = -&RatFunc::var(ring, "t1").pow_i(n as i32 + 3)?;
        let den = &RatFunc::constant(ring, Rat::from_integer(BigInt::from(n + 2)))
            * &RatFunc::var(ring, &tn2_name(n));
        num.div(&den)?
    };
    let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(size);
    let mut row = vec![RatFunc::zero(ring); size];
    row[0] = RatFunc::var(ring, "t1");
    rows.push(row);
    for _ in 1..size {
        let prev = rows.last().unwrap();
        let mut next = vec![RatFunc::zero(ring); size];
        for (i, g) in prev.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            next[i] = &next[i] + &(&pre * &g.derivative(t1));
            next[i + 1] = &next[i + 1] + &(&pre * g);
        }
        rows.push(next);
    }
    Ok(rows)
}

/// The Gauss-Manin connection matrix of the omega-basis over the two-variable
/// chart: (d S~ + S~ A(z) dz) S~^(-1) with z = t_{n+2}/t1^(n+2).
pub fn gm_matrix(n: u32) -> ConnectionMatrix {
    gm_matrix_in_ring(&charts::chart_ring(n), n).expect("chart divisions are declared")
}

pub(crate) fn gm_matrix_in_ring(ring: &Ring, n: u32) -> Result<ConnectionMatrix, Error> {
    let size = n as usize + 1;
    let t1 = ring.var_index("t1")?;
    let tn2 = tn2_name(n);
    let tn2_idx = ring.var_index(&tn2)?;
    // base_change rows give the eta-derivative basis over omega, so the
    // matrix with omega = S~ (eta-basis) is its inverse
    let s = matrix::lower_triangular_inverse(&base_change_in_ring(ring, n)?)?;
    let s_inv = matrix::lower_triangular_inverse(&s)?;
    let z_img = charts::z_in_chart(ring, n);
    let a_z: Mat = picardfuchs::companion_matrix(n)
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.eval_ratfunc(&[z_img.clone()]))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    // dz = dz/dt1 dt1 + dz/dt_{n+2} dt_{n+2}
    let t1_rf = RatFunc::var(ring, "t1");
    let dz_dt1 = {
        let num = -&(&RatFunc::constant(ring, Rat::from_integer(BigInt::from(n + 2)))
            * &RatFunc::var(ring, &tn2));
        num.div(&t1_rf.pow_i(n as i32 + 3)?)?
    };
    let dz_dtn2 = RatFunc::one(ring).div(&t1_rf.pow_i(n as i32 + 2)?)?;
    let mut components = BTreeMap::new();
    for (coord, var_idx, dz_part) in [("t1", t1, dz_dt1), (tn2.as_str(), tn2_idx, dz_dtn2)] {
        let ds = matrix::entrywise(&s, |e| e.derivative(var_idx));
        let m = matrix::mul(
            &matrix::add(&ds, &matrix::scale(&matrix::mul(&s, &a_z), &dz_part)),
            &s_inv,
        );
        components.insert(coord.to_string(), m);
    }
    Ok(ConnectionMatrix { size, components })
}

/// Enhanced connection A = (dS + S A~) S^(-1), differentiating with respect
/// to every coordinate of the enhanced ring (the symbolic constant c is not
/// a coordinate). `S` is the filled parameter matrix over the enhanced ring.
pub fn enhanced_connection(n: u32, s: &Mat, gm: &ConnectionMatrix) -> Result<ConnectionMatrix, Error> {
    let ring = s[0][0].ring().clone();
    let size = n as usize + 1;
    assert_eq!(s.len(), size, "parameter matrix size");
    if s[0][0] != RatFunc::one(&ring) {
        return Err(Error::CheckFailed("s11 must be 1".into()));
    }
    let gm = gm.lift(&ring)?;
    let s_inv = matrix::lower_triangular_inverse(s)?;
    let mut components = BTreeMap::new();
    for idx in 0..ring.nvars() {
        let coord = ring.var_name(idx).to_string();
        if coord == "c" {
            continue;
        }
        let ds = matrix::entrywise(s, |e| e.derivative(idx));
        let base = match gm.component(&coord) {
            Some(m) => matrix::add(&ds, &matrix::mul(s, m)),
            None => ds,
        };
        components.insert(coord, matrix::mul(&base, &s_inv));
    }
    Ok(ConnectionMatrix { size, components })
}

/// Poles of the connection entries must lie along t_{n+2} = 0 and
/// t1^(n+2) - t_{n+2} = 0 only.
pub fn poles_within_declared(gm: &ConnectionMatrix, n: u32) -> bool {
    let ring = gm.ring();
    let tn2 = ring
        .factor_index(&ring.var(&tn2_name(n)))
        .expect("t_{n+2} declared");
    let disc = ring
        .factor_index(&charts::discriminant(&ring, n))
        .expect("discriminant declared");
    gm.components.values().all(|m| {
        m.iter().flatten().all(|e| {
            e.denominator_factors()
                .keys()
                .all(|&f| f == tn2 || f == disc)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_ratfunc;
    use crate::picardfuchs::stirling2;

    fn parse(ring: &Ring, s: &str) -> RatFunc {
        parse_ratfunc(ring, s).unwrap()
    }

    #[test]
    fn base_change_first_rows() {
        for n in 1..=4u32 {
            let s = base_change(n);
            let ring = s[0][0].ring().clone();
            assert_eq!(s[0][0], parse(&ring, "t1"));
            for e in &s[0][1..] {
                assert!(e.is_zero());
            }
            if n >= 1 {
                let expected = parse(
                    &ring,
                    &format!("-t1^{}/({}*t{})", n + 4, n + 2, n + 2),
                );
                assert_eq!(s[1][1], expected, "n={n} entry (2,2)");
            }
        }
    }

    #[test]
    fn base_change_is_invertible_lower_triangular() {
        for n in 1..=4u32 {
            let s = base_change(n);
            let inv = matrix::lower_triangular_inverse(&s).unwrap();
            let ring = s[0][0].ring().clone();
            assert_eq!(matrix::mul(&s, &inv), matrix::identity(&ring, n as usize + 1));
        }
    }

    #[test]
    fn gm_matrix_n1_matches_print() {
        let gm = gm_matrix(1);
        let ring = gm.ring();
        let dt1 = gm.component("t1").unwrap();
        let dt3 = gm.component("t3").unwrap();
        assert_eq!(dt1[0][0], parse(&ring, "0"));
        assert_eq!(dt3[0][0], parse(&ring, "-1/(3*t3)"));
        assert_eq!(dt1[0][1], parse(&ring, "1"));
        assert_eq!(dt3[0][1], parse(&ring, "-t1/(3*t3)"));
        assert_eq!(dt1[1][0], parse(&ring, "-t1/(t1^3 - t3)"));
        assert_eq!(dt3[1][0], parse(&ring, "t1^2/(3*t3*(t1^3 - t3))"));
        assert_eq!(dt1[1][1], parse(&ring, "-3*t1^2/(t1^3 - t3)"));
        assert_eq!(dt3[1][1], parse(&ring, "(t1^3 + 2*t3)/(3*t3*(t1^3 - t3))"));
    }

    #[test]
    fn gm_matrix_n2_matches_print() {
        let gm = gm_matrix(2);
        let ring = gm.ring();
        let dt1 = gm.component("t1").unwrap();
        let dt4 = gm.component("t4").unwrap();
        let zero = RatFunc::zero(&ring);
        // row 1
        assert_eq!(dt4[0][0], parse(&ring, "-1/(4*t4)"));
        assert_eq!(dt1[0][1], parse(&ring, "1"));
        assert_eq!(dt4[0][1], parse(&ring, "-t1/(4*t4)"));
        assert_eq!(dt1[0][2], zero);
        assert_eq!(dt4[0][2], zero);
        // row 2
        assert_eq!(dt1[1][0], zero);
        assert_eq!(dt4[1][0], zero);
        assert_eq!(dt4[1][1], parse(&ring, "-2/(4*t4)"));
        assert_eq!(dt1[1][2], parse(&ring, "1"));
        assert_eq!(dt4[1][2], parse(&ring, "-t1/(4*t4)"));
        // row 3
        assert_eq!(dt1[2][0], parse(&ring, "-t1/(t1^4 - t4)"));
        assert_eq!(dt4[2][0], parse(&ring, "t1^2/(4*t4*(t1^4 - t4))"));
        assert_eq!(dt1[2][1], parse(&ring, "-7*t1^2/(t1^4 - t4)"));
        assert_eq!(dt4[2][1], parse(&ring, "7*t1^3/(4*t4*(t1^4 - t4))"));
        assert_eq!(dt1[2][2], parse(&ring, "-6*t1^3/(t1^4 - t4)"));
        assert_eq!(dt4[2][2], parse(&ring, "(3*t1^4 + 3*t4)/(4*t4*(t1^4 - t4))"));
    }

    #[test]
    fn gm_matrix_structural_formulas() {
        // diagonal, superdiagonal and Stirling last row for n = 1..4
        for n in 1..=4u32 {
            let gm = gm_matrix(n);
            let ring = gm.ring();
            let dt1 = gm.component("t1").unwrap();
            let dtn = gm.component(&tn2_name(n)).unwrap();
            let np2 = n + 2;
            let tn2 = tn2_name(n);
            let disc = format!("(t1^{np2} - {tn2})");
            for i in 0..n as usize {
                let k = i + 1;
                assert_eq!(dt1[i][i], RatFunc::zero(&ring), "n={n} ({k},{k}) dt1");
                assert_eq!(
                    dtn[i][i],
                    parse(&ring, &format!("-{k}/({np2}*{tn2})")),
                    "n={n} ({k},{k})"
                );
                assert_eq!(dt1[i][i + 1], RatFunc::one(&ring));
                assert_eq!(dtn[i][i + 1], parse(&ring, &format!("-t1/({np2}*{tn2})")));
                // everything above the superdiagonal vanishes
                for j in (i + 2)..=(n as usize) {
                    assert!(dt1[i][j].is_zero() && dtn[i][j].is_zero());
                }
            }
            let last = n as usize;
            for j in 1..=n {
                let s2 = stirling2(np2, j);
                assert_eq!(
                    dt1[last][j as usize - 1],
                    parse(&ring, &format!("-{s2}*t1^{j}/{disc}")),
                    "n={n} last row dt1 col {j}"
                );
                assert_eq!(
                    dtn[last][j as usize - 1],
                    parse(&ring, &format!("{s2}*t1^{}/({np2}*{tn2}*{disc})", j + 1)),
                    "n={n} last row dtn col {j}"
                );
            }
            let s2top = stirling2(np2, n + 1);
            assert_eq!(
                dt1[last][last],
                parse(&ring, &format!("-{s2top}*t1^{}/{disc}", n + 1))
            );
            assert_eq!(
                dtn[last][last],
                parse(
                    &ring,
                    &format!(
                        "({}*t1^{np2} + {}*{tn2})/({np2}*{tn2}*{disc})",
                        n * (n + 1) / 2,
                        n + 1
                    )
                )
            );
        }
    }

    #[test]
    fn poles_only_along_declared_locus() {
        for n in 1..=4u32 {
            assert!(poles_within_declared(&gm_matrix(n), n), "n={n}");
        }
    }

    #[test]
    fn two_variable_chart_is_flat() {
        for n in 1..=4u32 {
            assert!(gm_matrix(n).is_flat(), "curvature for n={n}");
        }
    }

    #[test]
    fn identity_gauge_fixes_connection() {
        let gm = gm_matrix(1);
        let ring = gm.ring();
        let s = matrix::identity(&ring, 2);
        let a = enhanced_connection(1, &s, &gm).unwrap();
        for (coord, m) in &a.components {
            match gm.component(coord) {
                Some(base) => assert_eq!(m, base),
                None => assert!(matrix::is_zero(m)),
            }
        }
    }
}
