//! Variable universes. A [`Ring`] fixes the ordered variable list, which
//! variables are invertible units, the root-symbol relations used to reduce
//! polynomial products, and the declared set of denominator factors that
//! rational functions may be divided by.

use super::mpoly::{MPoly, PolyData};
use super::{Error, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Root-symbol relations `r^2 = p(t)`, with `p` free of root symbols.
///
/// Attached to a ring at construction time; reduction keeps every stored
/// monomial at exponent <= 1 in each root symbol.
#[derive(Debug, Clone, Default)]
pub struct AlgebraicContext {
    relations: Vec<(String, MPoly)>,
}

impl AlgebraicContext {
    pub fn new() -> Self {
        AlgebraicContext { relations: Vec::new() }
    }

    /// Declare `symbol^2 = p`. `p` must not mention any root symbol.
    pub fn define(mut self, symbol: &str, p: MPoly) -> Self {
        self.relations.push((symbol.to_string(), p));
        self
    }

    pub fn relations(&self) -> &[(String, MPoly)] {
        &self.relations
    }
}

#[derive(Debug)]
pub(crate) struct RingData {
    pub vars: Vec<String>,
    /// Invertible (Laurent) variables; exponents may go negative for these.
    pub units: Vec<bool>,
    /// var index -> defining polynomial of the square.
    pub roots: BTreeMap<usize, PolyData>,
    /// Declared denominator factors, root-free and non-constant.
    pub factors: Vec<PolyData>,
}

/// A shared, immutable variable universe. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(pub(crate) Arc<RingData>);

impl Ring {
    /// Bare ring with the given ordered variables; `units` marks variables
    /// (by name) that are invertible, such as the symbolic constant `c`.
    pub fn new(vars: &[&str], units: &[&str]) -> Ring {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        assert!(
            vars.iter().collect::<std::collections::BTreeSet<_>>().len() == vars.len(),
            "duplicate variable names"
        );
        let units = vars.iter().map(|v| units.contains(&v.as_str())).collect();
        Ring(Arc::new(RingData {
            vars,
            units,
            roots: BTreeMap::new(),
            factors: Vec::new(),
        }))
    }

    /// Final ring: same variables, with root relations and declared
    /// denominator factors. The polynomials are supplied over a bare ring
    /// with identical variables and are re-anchored here.
    pub fn extend(&self, ctx: AlgebraicContext, factors: &[MPoly]) -> Ring {
        let mut roots = BTreeMap::new();
        for (name, p) in ctx.relations() {
            let idx = self.var_index(name).expect("root symbol not a ring variable");
            roots.insert(idx, p.data().clone());
        }
        for p in roots.values() {
            for (mono, _) in p.iter() {
                for r in roots.keys() {
                    assert!(mono.exps[*r] == 0, "root relation must be free of root symbols");
                }
            }
        }
        let factors: Vec<PolyData> = factors
            .iter()
            .map(|f| {
                assert!(!f.is_zero() && !f.is_constant(), "factors must be non-constant");
                for (mono, _) in f.data().iter() {
                    for r in roots.keys() {
                        assert!(mono.exps[*r] == 0, "declared factors must be root-free");
                    }
                }
                f.data().clone()
            })
            .collect();
        Ring(Arc::new(RingData {
            vars: self.0.vars.clone(),
            units: self.0.units.clone(),
            roots,
            factors,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_name(&self, idx: usize) -> &str {
        &self.0.vars[idx]
    }

    pub fn var_index(&self, name: &str) -> Result<usize, Error> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn is_unit_var(&self, idx: usize) -> bool {
        self.0.units[idx]
    }

    pub fn is_root_var(&self, idx: usize) -> bool {
        self.0.roots.contains_key(&idx)
    }

    pub fn root_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.roots.keys().copied()
    }

    /// The defining polynomial of `symbol^2`, as a polynomial of this ring.
    pub fn root_relation(&self, idx: usize) -> Option<MPoly> {
        self.0.roots.get(&idx).map(|p| MPoly::from_data(self.clone(), p.clone()))
    }

    pub fn n_factors(&self) -> usize {
        self.0.factors.len()
    }

    pub fn factor(&self, idx: usize) -> MPoly {
        MPoly::from_data(self.clone(), self.0.factors[idx].clone())
    }

    pub fn factor_index(&self, f: &MPoly) -> Option<usize> {
        self.0.factors.iter().position(|g| g == f.data())
    }

    /// Structural equality: same variables, units, relations and factors.
    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vars == other.0.vars
                && self.0.units == other.0.units
                && self.0.roots == other.0.roots
                && self.0.factors == other.0.factors)
    }

    // -- polynomial constructors ------------------------------------------

    pub fn zero(&self) -> MPoly {
        MPoly::zero(self.clone())
    }

    pub fn one(&self) -> MPoly {
        self.constant(Rat::from_integer(1.into()))
    }

    pub fn constant(&self, r: Rat) -> MPoly {
        MPoly::constant(self.clone(), r)
    }

    pub fn var(&self, name: &str) -> MPoly {
        let idx = self.var_index(name).expect("unknown variable");
        MPoly::var(self.clone(), idx)
    }

    /// Re-anchor a polynomial from a ring with the same variable names.
    /// Used to move data between the bare and the extended stage of ring
    /// construction and between charts sharing variable names.
    pub fn lift_poly(&self, p: &MPoly) -> Result<MPoly, Error> {
        if self.same(p.ring()) {
            return Ok(p.clone());
        }
        let mut out = self.zero();
        for (mono, coeff) in p.data().iter() {
            let mut exps = vec![0i32; self.nvars()];
            for (i, e) in mono.exps.iter().enumerate() {
                if *e != 0 {
                    let j = self.var_index(p.ring().var_name(i))?;
                    exps[j] = *e;
                }
            }
            out = &out + &MPoly::monomial(self.clone(), exps, coeff.clone());
        }
        Ok(out)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]", self.0.vars.join(","))
    }
}
