//! Normalized 3-cocycles on finite abelian groups.
//!
//! [`Cochain3`] and [`Cochain2`] abstract over closed formulas, tables, and
//! derived cochains (sums, coboundaries, pullbacks). Coboundary questions
//! are decided on the small complex `K` after pushing a cochain down along
//! the chain map `K -> B`, see [`pushdown`].

mod classify;
mod cochain;
mod kcomplex;
mod spec;

pub use classify::{classify, classify_unchecked};
pub use cochain::{
    cocycle_counterexample, is_2cocycle, is_cocycle, is_normalized, phi_tilde, Combination,
    Differential, FnCochain2, FnCochain3, PhiTilde, TableCochain2, TableCochain3,
};
pub use kcomplex::{
    is_coboundary, is_coboundary_unchecked, k_is_coboundary, k_is_cocycle, pushdown, KCochain3,
    KWitness,
};
pub use spec::{pairs, triples, CocycleSpec, Pair, Triple};

pub(crate) use spec::{format_pair_key, format_triple_key, parse_key};

use crate::error::Result;
use crate::group::{FinAbGroup, GroupElem};
use crate::phase::Phase;

/// A `Q/Z`-valued function on `G x G x G`.
pub trait Cochain3: Sync {
    fn group(&self) -> &FinAbGroup;
    /// Evaluates on elements already known to be valid for [`Cochain3::group`].
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase;
}

/// A `Q/Z`-valued function on `G x G`.
pub trait Cochain2: Sync {
    fn group(&self) -> &FinAbGroup;
    fn eval(&self, x: &GroupElem, y: &GroupElem) -> Phase;
}

/// `Φ_a(x, y, z)` with validation of the arguments.
pub fn phi_eval(spec: &CocycleSpec, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Result<Phase> {
    spec.eval(x, y, z)
}

/// `∂J(a,b,c) = J(b,c) + J(a,bc) - J(ab,c) - J(a,b)`.
pub fn differential3<C: Cochain2>(j: &C) -> Differential<'_, C> {
    Differential::new(j)
}

impl<T: Cochain3 + ?Sized> Cochain3 for &T {
    fn group(&self) -> &FinAbGroup {
        (**self).group()
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        (**self).eval(x, y, z)
    }
}

impl<T: Cochain2 + ?Sized> Cochain2 for &T {
    fn group(&self) -> &FinAbGroup {
        (**self).group()
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem) -> Phase {
        (**self).eval(x, y)
    }
}
