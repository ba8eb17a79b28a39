//! The hypergeometric Picard-Fuchs operator of the Dwork family and its
//! coordinate forms: the theta-form in z, the derivative form, the companion
//! matrix, and the operator in the t1 chart.
//!
//! The theta-form is the source of truth; every derivative form is obtained
//! by the exact conversion theta^k = sum_j S2(k,j) z^j d^j/dz^j. The Stirling
//! closed form of the t1-operator is kept as a second, independent route and
//! is cross-checked against the pullback computation rather than assumed.

use crate::charts::{self, tn2_name};
use crate::exact::{Error, MPoly, Rat, RatFunc, Ring};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Operator sum_i coeffs[i] * theta^i with theta = z d/dz.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaOperator {
    pub coeffs: Vec<RatFunc>,
}

/// Operator sum_i coeffs[i] * d^i (d = d/dz, or d/dt1 in the t1 chart).
#[derive(Clone, Debug, PartialEq)]
pub struct DOperator {
    pub coeffs: Vec<RatFunc>,
}

impl ThetaOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Apply to a polynomial in the operator's variable (test oracle).
    pub fn apply(&self, p: &MPoly, var: usize) -> RatFunc {
        let z = RatFunc::var(p.ring(), p.ring().var_name(var));
        let mut out = RatFunc::zero(p.ring());
        let mut cur = RatFunc::from_mpoly(p.clone());
        for c in &self.coeffs {
            out = &out + &(c * &cur);
            cur = &z * &cur.derivative(var);
        }
        out
    }
}

impl DOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn apply(&self, p: &MPoly, var: usize) -> RatFunc {
        let mut out = RatFunc::zero(p.ring());
        let mut cur = RatFunc::from_mpoly(p.clone());
        for c in &self.coeffs {
            out = &out + &(c * &cur);
            cur = cur.derivative(var);
        }
        out
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Result<DOperator, Error> {
        let lead = self.coeffs.last().expect("empty operator");
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.div(lead))
            .collect::<Result<_, _>>()?;
        Ok(DOperator { coeffs })
    }
}

/// Stirling number of the second kind by the alternating binomial sum;
/// equals the count of partitions of an r-set into s nonempty blocks.
pub fn stirling2(r: u32, s: u32) -> BigInt {
    assert!(s <= r, "stirling2 requires s <= r");
    if r == 0 && s == 0 {
        return BigInt::one();
    }
    if s == 0 {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one(); // C(s, i)
    for i in 0..=s {
        let term = &binom * BigInt::from(s - i).pow(r);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if i < s {
            binom = binom * BigInt::from(s - i) / BigInt::from(i + 1);
        }
    }
    let mut fact = BigInt::one();
    for k in 2..=s {
        fact *= BigInt::from(k);
    }
    sum / fact
}

/// The Dwork Picard-Fuchs operator in theta-form:
/// theta^(n+1) - z (theta + 1/(n+2)) ... (theta + (n+1)/(n+2)).
pub fn pf_theta(n: u32) -> ThetaOperator {
    let ring = charts::z_ring();
    let z = ring.var("z");
    // expand prod_{i=1..n+1} (theta + i/(n+2)) as a polynomial in theta
    let mut prod: Vec<Rat> = vec![Rat::one()];
    for i in 1..=(n + 1) {
        let a = Rat::new(BigInt::from(i), BigInt::from(n + 2));
        let mut next = vec![Rat::zero(); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] += c.clone();
            next[k] += c * &a;
        }
        prod = next;
    }
    let mut coeffs: Vec<RatFunc> = prod
        .iter()
        .map(|c| RatFunc::from_mpoly(-&(&z * &ring.constant(c.clone()))))
        .collect();
    coeffs[n as usize + 1] = &coeffs[n as usize + 1] + &RatFunc::one(&ring);
    ThetaOperator { coeffs }
}

/// theta^k = sum_j S2(k,j) z^j d^j.
pub fn theta_to_d(op: &ThetaOperator) -> DOperator {
    let ring = op.coeffs[0].ring().clone();
    let z = RatFunc::var(&ring, "z");
    let mut out = vec![RatFunc::zero(&ring); op.coeffs.len()];
    for (k, a) in op.coeffs.iter().enumerate() {
        for j in 0..=k {
            let s = stirling2(k as u32, j as u32);
            if s.is_zero() {
                continue;
            }
            let m = &RatFunc::constant(&ring, Rat::from_integer(s)) * &z.pow_i(j as i32).unwrap();
            out[j] = &out[j] + &(a * &m);
        }
    }
    DOperator { coeffs: out }
}

/// z^j d^j = theta (theta - 1) ... (theta - j + 1), so d^j expands in theta
/// with rational-function coefficients b_j(z)/z^j.
pub fn d_to_theta(op: &DOperator) -> Result<ThetaOperator, Error> {
    let ring = op.coeffs[0].ring().clone();
    let z = RatFunc::var(&ring, "z");
    let mut out = vec![RatFunc::zero(&ring); op.coeffs.len()];
    for (j, b) in op.coeffs.iter().enumerate() {
        // falling factorial theta(theta-1)...(theta-j+1) as theta-coefficients
        let mut ff: Vec<Rat> = vec![Rat::one()];
        for m in 0..j as i64 {
            let mut next = vec![Rat::zero(); ff.len() + 1];
            for (k, c) in ff.iter().enumerate() {
                next[k + 1] += c.clone();
                next[k] -= c * &Rat::from_integer(BigInt::from(m));
            }
            ff = next;
        }
        let scale = b.div(&z.pow_i(j as i32)?)?;
        for (k, c) in ff.iter().enumerate() {
            if !c.is_zero() {
                out[k] = &out[k] + &(&scale * &RatFunc::constant(&ring, c.clone()));
            }
        }
    }
    Ok(ThetaOperator { coeffs: out })
}

/// Companion matrix A(z) of the monic derivative form: shift rows above the
/// last row (b_1, ..., b_{n+1}) of d^(n+1) = b_1 + b_2 d + ... + b_{n+1} d^n.
pub fn companion_matrix(n: u32) -> Vec<Vec<RatFunc>> {
    let d = theta_to_d(&pf_theta(n));
    let monic = d.monic().expect("leading coefficient is a declared factor product");
    let size = n as usize + 1;
    let ring = monic.coeffs[0].ring().clone();
    let mut m = vec![vec![RatFunc::zero(&ring); size]; size];
    for (i, row) in m.iter_mut().enumerate().take(size - 1) {
        row[i + 1] = RatFunc::one(&ring);
    }
    for j in 0..size {
        m[size - 1][j] = -&monic.coeffs[j];
    }
    m
}

/// The Picard-Fuchs operator for omega_1 in the t1 chart, computed by pulling
/// back the z-operator through z = t_{n+2}/t1^(n+2), eta = t1 omega_1. This
/// route is authoritative for every n.
pub fn pf_t1(n: u32) -> DOperator {
    let ring = charts::chart_ring(n);
    pf_t1_in_ring(&ring, n).expect("pullback stays inside the declared factor set")
}

pub(crate) fn pf_t1_in_ring(ring: &Ring, n: u32) -> Result<DOperator, Error> {
    let size = n as usize + 1;
    let t1 = ring.var_index("t1")?;
    let z_img = charts::z_in_chart(ring, n);
    // monic z-form with coefficients substituted at z = t_{n+2}/t1^(n+2)
    let monic = theta_to_d(&pf_theta(n)).monic()?;
    let b: Vec<RatFunc> = monic
        .coeffs
        .iter()
        .take(size)
        .map(|c| c.eval_ratfunc(&[z_img.clone()]).map(|v| -&v))
        .collect::<Result<_, Error>>()?;
    // dz/dt1 = -(n+2) t_{n+2} / t1^(n+3)
    let tn2 = RatFunc::var(ring, &tn2_name(n));
    let nplus2 = RatFunc::constant(ring, Rat::from_integer(BigInt::from(n + 2)));
    let dz_dt1 = (-&(&nplus2 * &tn2)).div(&RatFunc::var(ring, "t1").pow_i(n as i32 + 3)?)?;
    // rows u_k: d^k/dt1^k (y/t1) expanded over y, y', ..., y^(n) with the
    // order-(n+1) term folded back through the operator
    let inv_t1 = RatFunc::one(ring).div(&RatFunc::var(ring, "t1"))?;
    let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(size + 1);
    let mut row = vec![RatFunc::zero(ring); size];
    row[0] = inv_t1;
    rows.push(row);
    for _ in 0..size {
        let prev = rows.last().unwrap();
        let mut next = vec![RatFunc::zero(ring); size];
        let mut overflow = RatFunc::zero(ring);
        for (m, g) in prev.iter().enumerate() {
            next[m] = &next[m] + &g.derivative(t1);
            let shifted = g * &dz_dt1;
            if m + 1 < size {
                next[m + 1] = &next[m + 1] + &shifted;
            } else {
                overflow = &overflow + &shifted;
            }
        }
        if !overflow.is_zero() {
            for (m, bm) in b.iter().enumerate() {
                next[m] = &next[m] + &(&overflow * bm);
            }
        }
        rows.push(next);
    }
    // solve rows[n+1] = sum_k a_k rows[k]; the system is triangular with
    // monomial diagonal, so back-substitution divides only by declared factors
    let target = rows.pop().unwrap();
    let mut a = vec![RatFunc::zero(ring); size];
    let mut residual = target;
    for k in (0..size).rev() {
        let ak = residual[k].div(&rows[k][k])?;
        for m in 0..size {
            residual[m] = &residual[m] - &(&ak * &rows[k][m]);
        }
        a[k] = ak;
    }
    for r in &residual {
        assert!(r.is_zero(), "pullback system failed to close");
    }
    let mut coeffs: Vec<RatFunc> = a.iter().map(|ak| -ak).collect();
    coeffs.push(RatFunc::one(ring));
    Ok(DOperator { coeffs })
}

/// Closed form with Stirling coefficients, as an annihilating operator:
/// d^(n+1) + sum_j S2(n+2,j) t1^j/(t1^(n+2)-t_{n+2}) d^(j-1).
/// Proved for small n only; kept as a cross-check, never assumed.
pub fn pf_t1_stirling(n: u32) -> DOperator {
    let ring = charts::chart_ring(n);
    let disc = RatFunc::from_mpoly(charts::discriminant(&ring, n));
    let t1 = RatFunc::var(&ring, "t1");
    let mut coeffs = Vec::with_capacity(n as usize + 2);
    for j in 1..=(n + 1) {
        let s = RatFunc::constant(&ring, Rat::from_integer(stirling2(n + 2, j)));
        let num = &s * &t1.pow_i(j as i32).unwrap();
        coeffs.push(num.div(&disc).unwrap());
    }
    coeffs.push(RatFunc::one(&ring));
    DOperator { coeffs }
}
