use num_integer::Integer;

use super::spec::{pairs, triples, Pair, Triple};
use super::{is_coboundary_unchecked, is_cocycle, pushdown, Cochain3, CocycleSpec};
use crate::arith::gcd3;
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::phase::Phase;
use crate::Budget;

/// Upper bound on specs scanned by the exhaustive fallback.
const FALLBACK_SPECS: u128 = 1 << 20;

/// The unique canonical `a` with `φ - Φ_a` a coboundary. Checks that `φ`
/// is a normalized 3-cocycle first.
pub fn classify<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<CocycleSpec> {
    if !is_cocycle(phi, budget)? {
        return Err(Error::Precondition(
            "input is not a normalized 3-cocycle".into(),
        ));
    }
    classify_unchecked(phi)
}

/// [`classify`] without the exhaustive cocycle precheck.
pub fn classify_unchecked<C: Cochain3 + ?Sized>(phi: &C) -> Result<CocycleSpec> {
    if let Some(spec) = closed_form(phi) {
        if verify(phi, &spec)? {
            return Ok(spec);
        }
    }
    let group = phi.group();
    if CocycleSpec::count(group) > FALLBACK_SPECS {
        return Err(Error::NoClassFound);
    }
    for spec in CocycleSpec::enumerate(group) {
        if verify(phi, &spec)? {
            return Ok(spec);
        }
    }
    Err(Error::NoClassFound)
}

/// `φ - Φ_a`.
struct Difference<'a, C: ?Sized> {
    phi: &'a C,
    spec: &'a CocycleSpec,
}

impl<C: Cochain3 + ?Sized> Cochain3 for Difference<'_, C> {
    fn group(&self) -> &FinAbGroup {
        self.phi.group()
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        self.phi.eval(x, y, z) - self.spec.eval_unchecked(x.exps(), y.exps(), z.exps())
    }
}

fn verify<C: Cochain3 + ?Sized>(phi: &C, spec: &CocycleSpec) -> Result<bool> {
    let diff = Difference { phi, spec };
    match is_coboundary_unchecked(&diff) {
        Ok(w) => Ok(w.is_some()),
        Err(Error::Precondition(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Candidate read off the pushed-down values.
fn closed_form<C: Cochain3 + ?Sized>(phi: &C) -> Option<CocycleSpec> {
    let group = phi.group();
    let m = group.moduli();
    let n = m.len();
    let k = pushdown(phi);
    let a_l = (0..n)
        .map(|l| k.f_rrr[l].numerator_over(m[l]))
        .collect::<Option<Vec<u64>>>()?;
    let mut a_ij: Vec<(Pair, u64)> = Vec::new();
    for (i, j) in pairs(n) {
        // shift by the coboundary that kills f_ijj, then read f_iij
        let gamma = (-k.f_rss[&(i, j)]).divide(m[j]);
        let f = k.f_rrs[&(i, j)] - gamma.scale(m[i] as i64);
        let b = f.numerator_over(m[j])?;
        a_ij.push(((i, j), b % m[i].gcd(&m[j])));
    }
    let mut a_rst: Vec<(Triple, u64)> = Vec::new();
    for (r, s, t) in triples(n) {
        let d = gcd3(m[r], m[s], m[t]);
        a_rst.push(((r, s, t), k.f_rst[&(r, s, t)].numerator_over(d)?));
    }
    CocycleSpec::new(group.clone(), a_l, &a_ij, &a_rst).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{Combination, Differential, FnCochain3};
    use crate::sample::random_cochain2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn roundtrip_on_small_groups() {
        for moduli in [&[2, 4][..], &[2, 2, 2], &[3, 3], &[4, 6]] {
            let z = g(moduli);
            for s in CocycleSpec::enumerate(&z) {
                assert_eq!(classify(&s, &Budget::default()).unwrap(), s);
            }
        }
    }

    #[test]
    fn trivial_cochain_classifies_to_zero() {
        let z = g(&[2, 2]);
        let zero = FnCochain3::new(z.clone(), |_, _, _| Phase::ZERO);
        assert!(classify(&zero, &Budget::default()).unwrap().is_zero());
    }

    #[test]
    fn coboundary_absorption() {
        let z = g(&[3, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = CocycleSpec::random(&z, &mut rng);
            let j = random_cochain2(&z, 9, &mut rng);
            let dj = Differential::new(&j);
            let sum = Combination::sum(&s, &dj).unwrap();
            assert_eq!(classify(&sum, &Budget::default()).unwrap(), s);
        }
    }

    #[test]
    fn rejects_non_cocycles() {
        let z = g(&[2]);
        let gen = z.generator(0);
        let bad = FnCochain3::new(z, move |x, y, w| {
            if *x == gen && *y == gen && *w == gen {
                Phase::new(1, 3)
            } else {
                Phase::ZERO
            }
        });
        assert!(matches!(
            classify(&bad, &Budget::default()),
            Err(Error::Precondition(_))
        ));
    }
}
