//! Multiplicative structure of the twisted double `D^Φ(G)` and the
//! axioms of the Majid algebra `(kG, Φ)` on group-like elements.
//!
//! `θ` and `γ` are written in their conjugation-aware form. On an abelian
//! group every conjugate `x^{-1} g x` is `g` again, and the formulas reduce
//! to `Φ~_g`; tests check this rather than assume it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{Cochain3, CocycleSpec, TableCochain3};
use crate::error::Result;
use crate::group::{FinAbGroup, GroupElem, GroupTable};
use crate::phase::Phase;
use crate::Budget;

/// `x^{-1} g x`.
fn conj(group: &FinAbGroup, g: &GroupElem, x: &GroupElem) -> GroupElem {
    group.mul(&group.mul(&group.inv(x), g), x)
}

/// `θ_g(x,y) = Φ(g,x,y) + Φ(x,y,(xy)^{-1} g xy) - Φ(x, x^{-1} g x, y)`.
pub fn theta<C: Cochain3 + ?Sized>(phi: &C, g: &GroupElem, x: &GroupElem, y: &GroupElem) -> Phase {
    let grp = phi.group();
    let xy = grp.mul(x, y);
    phi.eval(g, x, y) + phi.eval(x, y, &conj(grp, g, &xy)) - phi.eval(x, &conj(grp, g, x), y)
}

/// `γ_g(x,y) = Φ(x,y,g) + Φ(g, g^{-1} x g, g^{-1} y g) - Φ(x, g, g^{-1} y g)`.
pub fn gamma<C: Cochain3 + ?Sized>(phi: &C, g: &GroupElem, x: &GroupElem, y: &GroupElem) -> Phase {
    let grp = phi.group();
    let xg = conj(grp, x, g);
    let yg = conj(grp, y, g);
    phi.eval(x, y, g) + phi.eval(g, &xg, &yg) - phi.eval(x, g, &yg)
}

/// A scalar multiple of the basis vector `e(g) ⊗ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleElem {
    pub delta_part: GroupElem,
    pub group_part: GroupElem,
    pub coefficient: Phase,
}

impl DoubleElem {
    pub fn basis(g: GroupElem, x: GroupElem) -> DoubleElem {
        DoubleElem {
            delta_part: g,
            group_part: x,
            coefficient: Phase::ZERO,
        }
    }
}

/// `(e(g) ⊗ x)(e(h) ⊗ y) = θ_g(x,y) δ_{x^{-1} g x, h} e(g) ⊗ xy`.
/// `None` is the zero product.
pub fn double_multiply<C: Cochain3 + ?Sized>(
    phi: &C,
    u: &DoubleElem,
    v: &DoubleElem,
) -> Result<Option<DoubleElem>> {
    let grp = phi.group();
    for e in [&u.delta_part, &u.group_part, &v.delta_part, &v.group_part] {
        grp.check(e)?;
    }
    Ok(multiply_unchecked(phi, u, v))
}

fn multiply_unchecked<C: Cochain3 + ?Sized>(
    phi: &C,
    u: &DoubleElem,
    v: &DoubleElem,
) -> Option<DoubleElem> {
    let grp = phi.group();
    if conj(grp, &u.delta_part, &u.group_part) != v.delta_part {
        return None;
    }
    Some(DoubleElem {
        delta_part: u.delta_part.clone(),
        group_part: grp.mul(&u.group_part, &v.group_part),
        coefficient: u.coefficient
            + v.coefficient
            + theta(phi, &u.delta_part, &u.group_part, &v.group_part),
    })
}

/// `(uv)w = u(vw)` on every triple of basis vectors; `|G|^6` products.
pub fn double_associative<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<bool> {
    let grp = phi.group();
    budget.check("double associativity", grp.order(), 6)?;
    let table = TableCochain3::tabulate(phi, budget)?;
    let elems: Vec<GroupElem> = grp.elements().collect();
    let basis: Vec<DoubleElem> = elems
        .iter()
        .flat_map(|g| {
            elems
                .iter()
                .map(|x| DoubleElem::basis(g.clone(), x.clone()))
        })
        .collect();
    let ok = basis.par_iter().all(|u| {
        basis.iter().all(|v| {
            basis.iter().all(|w| {
                let left = multiply_unchecked(&table, u, v)
                    .and_then(|uv| multiply_unchecked(&table, &uv, w));
                let right = multiply_unchecked(&table, v, w)
                    .and_then(|vw| multiply_unchecked(&table, u, &vw));
                left == right
            })
        })
    });
    Ok(ok)
}

/// `Φ` is abelian iff every `a_rst` vanishes.
pub fn is_abelian_spec(spec: &CocycleSpec) -> bool {
    spec.is_abelian()
}

/// Commutativity of `D^Φ(G)` for abelian `G`: `θ_g(x,y) = θ_g(y,x)` for
/// all `g, x, y`.
pub fn is_abelian_bruteforce<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<bool> {
    Ok(abelian_counterexample(phi, budget)?.is_none())
}

/// First `(g, x, y)` with `θ_g(x,y) != θ_g(y,x)`.
pub fn abelian_counterexample<C: Cochain3 + ?Sized>(
    phi: &C,
    budget: &Budget,
) -> Result<Option<Vec<GroupElem>>> {
    let grp = phi.group();
    budget.check("abelian check", grp.order(), 3)?;
    let table = TableCochain3::tabulate(phi, budget)?;
    let elems: Vec<GroupElem> = grp.elements().collect();
    let n = elems.len();
    let hit = (0..n).into_par_iter().find_map_first(|g| {
        for x in 0..n {
            for y in x + 1..n {
                let (a, b, c) = (&elems[g], &elems[x], &elems[y]);
                if theta(&table, a, b, c) != theta(&table, a, c, b) {
                    return Some(vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        None
    });
    Ok(hit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<GroupElem>>,
}

impl AxiomResult {
    fn from_hit(hit: Option<Vec<GroupElem>>) -> AxiomResult {
        AxiomResult {
            pass: hit.is_none(),
            counterexample: hit,
        }
    }
}

/// Per-axiom outcome of [`majid_axiom_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajidReport {
    pub axioms: BTreeMap<String, AxiomResult>,
}

impl MajidReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.values().all(|a| a.pass)
    }
}

/// Checks the Majid-algebra axioms of `(kG, Φ)` on group-likes with
/// `α = ε`, `β(g) = -Φ(g, g^{-1}, g)` and `S(g) = g^{-1}`.
pub fn majid_axiom_check<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<MajidReport> {
    let grp = phi.group();
    budget.check("axiom check", grp.order(), 4)?;
    let table = TableCochain3::tabulate(phi, budget)?;
    let gt = GroupTable::new(grp);
    let n = gt.len();
    let el = |v: &[usize]| -> Vec<GroupElem> { v.iter().map(|&i| gt.elems[i].clone()).collect() };
    let beta = |g: usize| -table.at(g, gt.inv(g), g);
    let mut axioms = BTreeMap::new();

    // (ab)c = a(bc) with the same scalar on both sides
    let assoc = (0..n).into_par_iter().find_map_first(|a| {
        (0..n).find_map(|b| {
            (0..n).find_map(|c| {
                (gt.mul(gt.mul(a, b), c) != gt.mul(a, gt.mul(b, c))).then(|| vec![a, b, c])
            })
        })
    });
    axioms.insert(
        "quasi_associativity".into(),
        AxiomResult::from_hit(assoc.map(|v| el(&v))),
    );

    let unit = (0..n).find(|&a| gt.mul(0, a) != a || gt.mul(a, 0) != a);
    axioms.insert("unit".into(), AxiomResult::from_hit(unit.map(|a| el(&[a]))));

    // Φ(a,b,cd) + Φ(ab,c,d) = Φ(b,c,d) + Φ(a,bc,d) + Φ(a,b,c)
    let pentagon = (0..n).into_par_iter().find_map_first(|a| {
        for b in 0..n {
            let ab = gt.mul(a, b);
            for c in 0..n {
                let bc = gt.mul(b, c);
                for d in 0..n {
                    let lhs = table.at(a, b, gt.mul(c, d)) + table.at(ab, c, d);
                    let rhs = table.at(b, c, d) + table.at(a, bc, d) + table.at(a, b, c);
                    if lhs != rhs {
                        return Some(vec![a, b, c, d]);
                    }
                }
            }
        }
        None
    });
    axioms.insert(
        "pentagon".into(),
        AxiomResult::from_hit(pentagon.map(|v| el(&v))),
    );

    let norm = (0..n)
        .find_map(|a| (0..n).find_map(|b| (!table.at(a, 0, b).is_zero()).then(|| vec![a, 0, b])));
    axioms.insert(
        "counit_normalization".into(),
        AxiomResult::from_hit(norm.map(|v| el(&v))),
    );

    // S(g) α(g) g = α(g) and g β(g) S(g) = β(g); α = ε so both reduce to g^{-1} g = 1
    let antipode = (0..n).find(|&g| gt.mul(gt.inv(g), g) != 0 || gt.mul(g, gt.inv(g)) != 0);
    axioms.insert(
        "antipode_alpha_beta".into(),
        AxiomResult::from_hit(antipode.map(|g| el(&[g]))),
    );

    // Φ(g, g^{-1}, g) + β(g) + α(g) = 0
    let left = (0..n).find(|&g| !(table.at(g, gt.inv(g), g) + beta(g)).is_zero());
    axioms.insert(
        "quasi_antipode_phi".into(),
        AxiomResult::from_hit(left.map(|g| el(&[g]))),
    );

    // -Φ(g^{-1}, g, g^{-1}) + α(g) + β(g) = 0
    let right = (0..n).find(|&g| {
        let gi = gt.inv(g);
        !(beta(g) - table.at(gi, g, gi)).is_zero()
    });
    axioms.insert(
        "quasi_antipode_phi_inverse".into(),
        AxiomResult::from_hit(right.map(|g| el(&[g]))),
    );

    Ok(MajidReport { axioms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{phi_tilde, Cochain2, FnCochain3};

    fn g(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.to_vec()).unwrap()
    }

    fn z2_cubed_nonabelian() -> (FinAbGroup, CocycleSpec) {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::new(z.clone(), vec![0; 3], &[], &[((0, 1, 2), 1)]).unwrap();
        (z, s)
    }

    #[test]
    fn theta_examples() {
        let (z, s) = z2_cubed_nonabelian();
        let (g1, g2, g3) = (z.generator(0), z.generator(1), z.generator(2));
        assert_eq!(theta(&s, &g1, &g2, &g3), Phase::ZERO);
        assert_eq!(theta(&s, &g1, &g3, &g2), Phase::new(1, 2));
        let e = z.identity();
        for x in z.elements() {
            for y in z.elements() {
                assert!(theta(&s, &e, &x, &y).is_zero());
                assert!(gamma(&s, &e, &x, &y).is_zero());
                assert!(gamma(&s, &x, &e, &y).is_zero());
            }
        }
    }

    #[test]
    fn theta_matches_phi_tilde() {
        for spec in CocycleSpec::enumerate(&g(&[2, 2, 2])) {
            let z = spec.group().clone();
            for a in z.elements() {
                let pt = phi_tilde(&spec, &a).unwrap();
                for x in z.elements() {
                    for y in z.elements() {
                        assert_eq!(theta(&spec, &a, &x, &y), pt.eval(&x, &y));
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_z2_example() {
        let z = g(&[2]);
        let s = CocycleSpec::new(z.clone(), vec![1], &[], &[]).unwrap();
        let x = z.generator(0);
        assert_eq!(gamma(&s, &x, &x, &x), Phase::new(1, 2));
    }

    #[test]
    fn multiply_examples() {
        let (z, s) = z2_cubed_nonabelian();
        let (g1, g2, g3) = (z.generator(0), z.generator(1), z.generator(2));
        let e = z.identity();
        let u = DoubleElem::basis(g1.clone(), e.clone());
        let p = double_multiply(&s, &u, &u).unwrap().unwrap();
        assert_eq!(p, u);
        let v = DoubleElem::basis(g2.clone(), e.clone());
        assert_eq!(double_multiply(&s, &u, &v).unwrap(), None);

        let a = DoubleElem::basis(g1.clone(), g2.clone());
        let b = DoubleElem::basis(g1.clone(), g3.clone());
        let ab = double_multiply(&s, &a, &b).unwrap().unwrap();
        let ba = double_multiply(&s, &b, &a).unwrap().unwrap();
        assert_eq!(ab.group_part, ba.group_part);
        assert_eq!(ba.coefficient - ab.coefficient, Phase::new(1, 2));

        let other = DoubleElem::basis(g(&[2, 2]).identity(), e);
        assert!(double_multiply(&s, &a, &other).is_err());
    }

    #[test]
    fn abelian_spec_vs_bruteforce_on_z2_cubed() {
        let z = g(&[2, 2, 2]);
        let mut count = 0;
        for s in CocycleSpec::enumerate(&z) {
            assert_eq!(
                is_abelian_spec(&s),
                is_abelian_bruteforce(&s, &Budget::default()).unwrap()
            );
            count += 1;
        }
        assert_eq!(count, 128);
        assert!(is_abelian_spec(&CocycleSpec::zero(&z)));
        assert!(!is_abelian_spec(&z2_cubed_nonabelian().1));
    }

    #[test]
    fn associativity_small_groups() {
        for moduli in [&[2, 2][..], &[4], &[2, 2, 2]] {
            for s in CocycleSpec::enumerate(&g(moduli)).step_by(7) {
                assert!(double_associative(&s, &Budget::default()).unwrap(), "{s:?}");
            }
        }
    }

    #[test]
    fn axioms_hold_for_representatives() {
        for moduli in [&[2][..], &[4], &[2, 2], &[2, 4], &[3, 3]] {
            for s in CocycleSpec::enumerate(&g(moduli)) {
                let r = majid_axiom_check(&s, &Budget::default()).unwrap();
                assert!(r.all_pass(), "{s:?}: {r:?}");
            }
        }
    }

    #[test]
    fn perturbed_table_fails_pentagon() {
        let z = g(&[2, 2]);
        let s = CocycleSpec::new(z.clone(), vec![1, 1], &[((0, 1), 1)], &[]).unwrap();
        let mut t = TableCochain3::tabulate(&s, &Budget::default()).unwrap();
        let (a, b) = (z.generator(0), z.generator(1));
        let old = t.eval(&a, &b, &b);
        t.set(&a, &b, &b, old + Phase::new(1, 2));
        let r = majid_axiom_check(&t, &Budget::default()).unwrap();
        let p = &r.axioms["pentagon"];
        assert!(!p.pass);
        assert_eq!(p.counterexample.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn trivial_cochain_passes() {
        let z = g(&[2, 3]);
        let zero = FnCochain3::new(z, |_, _, _| Phase::ZERO);
        assert!(majid_axiom_check(&zero, &Budget::default())
            .unwrap()
            .all_pass());
        assert!(is_abelian_bruteforce(&zero, &Budget::default()).unwrap());
    }
}
