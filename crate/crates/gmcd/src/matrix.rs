//! Small dense matrices over rational functions. Everything here is exact;
//! the only divisions are by lower-triangular diagonals, which in this
//! pipeline always factor over the declared denominator sets.

use crate::exact::{Error, RatFunc, Ring};

pub type Mat = Vec<Vec<RatFunc>>;

pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Mat {
    vec![vec![RatFunc::zero(ring); cols]; rows]
}

pub fn identity(ring: &Ring, n: usize) -> Mat {
    let mut m = zero(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RatFunc::one(ring);
    }
    m
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let ring = a[0][0].ring().clone();
    let mut out = zero(&ring, n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = RatFunc::zero(&ring);
            for (l, brow) in b.iter().enumerate().take(k) {
                if !a[i][l].is_zero() && !brow[j].is_zero() {
                    acc = &acc + &(&a[i][l] * &brow[j]);
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn scale(a: &Mat, s: &RatFunc) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn entrywise<F: Fn(&RatFunc) -> RatFunc>(a: &Mat, f: F) -> Mat {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

pub fn is_zero(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    sub(&mul(a, b), &mul(b, a))
}

/// Inverse of a lower-triangular matrix by forward substitution; divides
/// only by the diagonal entries.
pub fn lower_triangular_inverse(m: &Mat) -> Result<Mat, Error> {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    for (i, row) in m.iter().enumerate() {
        for entry in row.iter().skip(i + 1) {
            assert!(entry.is_zero(), "matrix is not lower triangular");
        }
        if row[i].is_zero() {
            return Err(Error::SingularSystem("zero diagonal entry".into()));
        }
    }
    let mut inv = zero(&ring, n, n);
    for j in 0..n {
        inv[j][j] = RatFunc::one(&ring).div(&m[j][j])?;
        for i in (j + 1)..n {
            let mut acc = RatFunc::zero(&ring);
            for k in j..i {
                if !m[i][k].is_zero() && !inv[k][j].is_zero() {
                    acc = &acc + &(&m[i][k] * &inv[k][j]);
                }
            }
            if !acc.is_zero() {
                inv[i][j] = -&acc.div(&m[i][i])?;
            }
        }
    }
    Ok(inv)
}

/// Lift every entry into a larger ring sharing variable names.
pub fn lift(a: &Mat, target: &Ring) -> Result<Mat, Error> {
    a.iter()
        .map(|r| r.iter().map(|x| x.lift(target)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_ratfunc, AlgebraicContext, Ring};

    fn ring() -> Ring {
        let bare = Ring::new(&["a", "b"], &[]);
        let fa = bare.var("a");
        let fb = bare.var("b");
        bare.extend(AlgebraicContext::new(), &[fa, fb])
    }

    #[test]
    fn triangular_inverse_roundtrip() {
        let r = ring();
        let p = |s: &str| parse_ratfunc(&r, s).unwrap();
        let m = vec![
            vec![p("1"), p("0"), p("0")],
            vec![p("a"), p("b"), p("0")],
            vec![p("a*b"), p("a+b"), p("a*b")],
        ];
        let inv = lower_triangular_inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(&r, 3));
        assert_eq!(mul(&inv, &m), identity(&r, 3));
    }

    #[test]
    fn singular_diagonal_reported() {
        let r = ring();
        let p = |s: &str| parse_ratfunc(&r, s).unwrap();
        let m = vec![vec![p("1"), p("0")], vec![p("a"), p("0")]];
        assert!(lower_triangular_inverse(&m).is_err());
    }
}
