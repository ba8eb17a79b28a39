//! The coordinate charts the pipeline computes in, with their declared
//! denominator factor sets.

use crate::exact::{AlgebraicContext, MPoly, RatFunc, Ring};

/// Name of the second base coordinate, t_{n+2}.
pub fn tn2_name(n: u32) -> String {
    format!("t{}", n + 2)
}

/// Univariate chart in z; singularities of the family sit at z = 0, 1.
pub fn z_ring() -> Ring {
    let bare = Ring::new(&["z"], &[]);
    let z = bare.var("z");
    let one_minus_z = &bare.one() - &z;
    bare.extend(AlgebraicContext::new(), &[z, one_minus_z])
}

/// Two-parameter chart (t1, t_{n+2}) together with the symbolic pairing
/// constant c; divisions may hit t1, t_{n+2} and t1^(n+2) - t_{n+2}.
pub fn chart_ring(n: u32) -> Ring {
    let tn2 = tn2_name(n);
    let bare = Ring::new(&["c", "t1", &tn2], &["c"]);
    let t1 = bare.var("t1");
    let tn = bare.var(&tn2);
    let disc = &t1.pow(n + 2) - &tn;
    bare.extend(AlgebraicContext::new(), &[t1, tn, disc])
}

/// z = t_{n+2} / t1^(n+2) as a rational function of the chart.
pub fn z_in_chart(ring: &Ring, n: u32) -> RatFunc {
    let tn = RatFunc::var(ring, &tn2_name(n));
    let t1 = RatFunc::var(ring, "t1");
    tn.div(&t1.pow_i(n as i32 + 2).unwrap()).unwrap()
}

/// t1^(n+2) - t_{n+2}, the discriminant factor of the chart.
pub fn discriminant(ring: &Ring, n: u32) -> MPoly {
    let t1 = ring.var("t1");
    &t1.pow(n + 2) - &ring.var(&tn2_name(n))
}
