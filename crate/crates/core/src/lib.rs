//! Twisted quantum doubles and root data over finite abelian groups.
//!
//! The crate works with normalized 3-cocycles on `G = Z_{m_1} x ... x Z_{m_n}`
//! valued in `Q/Z`. It classifies them by their coefficient vectors,
//! builds the quasi-Hopf double `D^Φ(G)` on group-like data, trivializes
//! abelian cocycles on the squared-moduli cover `G~ -> G`, and builds the
//! twisted Yetter-Drinfeld data that realize a diagonal braiding.
//!
//! Every decision procedure is exact. Exhaustive checks carry a tuple
//! [`Budget`] and refuse, rather than sample, when the budget is too small.

pub mod arith;
pub mod cocycle;
pub mod congruence;
pub mod construct;
pub mod diagram;
pub mod double;
pub mod error;
pub mod group;
pub mod phase;
pub mod resolution;
pub mod rootdatum;
pub mod sample;

pub use cocycle::{
    classify, is_coboundary, is_cocycle, phi_eval, Cochain2, Cochain3, CocycleSpec, KCochain3,
};
pub use congruence::solve_congruence_system;
pub use diagram::Diagram;
pub use error::{Error, Result};
pub use group::{FinAbGroup, GroupElem};
pub use phase::Phase;
pub use rootdatum::RootDatum;

/// Upper bound on the number of tuples an exhaustive check may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_tuples: u64,
}

impl Budget {
    pub const DEFAULT_TUPLES: u64 = 1 << 28;

    pub fn new(max_tuples: u64) -> Budget {
        Budget { max_tuples }
    }

    pub fn unlimited() -> Budget {
        Budget {
            max_tuples: u64::MAX,
        }
    }

    /// Fails with [`Error::BudgetExceeded`] if `base^power` tuples are too many.
    pub fn check(&self, what: &'static str, base: u64, power: u32) -> Result<()> {
        let needed = (base as u128).checked_pow(power).unwrap_or(u128::MAX);
        if needed > self.max_tuples as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.max_tuples,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_TUPLES)
    }
}
