use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Cochain2, Cochain3};
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem, GroupTable};
use crate::phase::{CommonDenominator, Phase};
use crate::Budget;

/// A 3-cochain stored as `|G|^3` values in index order `(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCochain3 {
    group: FinAbGroup,
    values: Vec<Phase>,
}

impl TableCochain3 {
    pub fn new(group: FinAbGroup, values: Vec<Phase>) -> Result<TableCochain3> {
        let n = group.order() as usize;
        let want = n.checked_pow(3).ok_or(Error::Overflow("table size"))?;
        if values.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                got: values.len(),
            });
        }
        Ok(TableCochain3 { group, values })
    }

    /// Materializes any cochain; refuses when `|G|^3` exceeds the budget.
    pub fn tabulate<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<TableCochain3> {
        let group = phi.group().clone();
        let n = group.order();
        budget.check("tabulating a 3-cochain", n, 3)?;
        let elems: Vec<GroupElem> = group.elements().collect();
        let values: Vec<Phase> = (0..n as usize)
            .into_par_iter()
            .flat_map_iter(|a| {
                let elems = &elems;
                (0..n as usize).flat_map(move |b| {
                    (0..n as usize).map(move |c| phi.eval(&elems[a], &elems[b], &elems[c]))
                })
            })
            .collect();
        Ok(TableCochain3 { group, values })
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize, c: usize) -> Phase {
        let n = self.group.order() as usize;
        self.values[(a * n + b) * n + c]
    }

    /// Sets one value; used to build perturbed tables.
    pub fn set(&mut self, x: &GroupElem, y: &GroupElem, z: &GroupElem, v: Phase) {
        let n = self.group.order() as usize;
        let (a, b, c) = (
            self.group.index(x),
            self.group.index(y),
            self.group.index(z),
        );
        self.values[(a * n + b) * n + c] = v;
    }
}

impl Cochain3 for TableCochain3 {
    fn group(&self) -> &FinAbGroup {
        &self.group
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        let g = &self.group;
        self.at(g.index(x), g.index(y), g.index(z))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    moduli: Vec<u64>,
    values: Vec<Phase>,
}

/// JSON `{"moduli": [...], "values": [...]}`, values in index order.
impl Serialize for TableCochain3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawTable {
            schema: None,
            moduli: self.group.moduli().to_vec(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TableCochain3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTable::deserialize(d)?;
        if let Some(v) = raw.schema.filter(|&v| v != 1) {
            return Err(serde::de::Error::custom(format!("unsupported schema {v}")));
        }
        FinAbGroup::new(raw.moduli)
            .and_then(|g| TableCochain3::new(g, raw.values))
            .map_err(serde::de::Error::custom)
    }
}

/// A 2-cochain stored as `|G|^2` values in index order `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCochain2 {
    group: FinAbGroup,
    values: Vec<Phase>,
}

impl TableCochain2 {
    pub fn new(group: FinAbGroup, values: Vec<Phase>) -> Result<TableCochain2> {
        let n = group.order() as usize;
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(TableCochain2 { group, values })
    }

    pub fn tabulate<C: Cochain2 + ?Sized>(j: &C, budget: &Budget) -> Result<TableCochain2> {
        let group = j.group().clone();
        let n = group.order();
        budget.check("tabulating a 2-cochain", n, 2)?;
        let elems: Vec<GroupElem> = group.elements().collect();
        let values = (0..n as usize)
            .into_par_iter()
            .flat_map_iter(|a| {
                let elems = &elems;
                (0..n as usize).map(move |b| j.eval(&elems[a], &elems[b]))
            })
            .collect();
        Ok(TableCochain2 { group, values })
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Phase {
        self.values[a * self.group.order() as usize + b]
    }
}

impl Cochain2 for TableCochain2 {
    fn group(&self) -> &FinAbGroup {
        &self.group
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem) -> Phase {
        self.at(self.group.index(x), self.group.index(y))
    }
}

/// A 3-cochain given by a closure.
pub struct FnCochain3<F> {
    group: FinAbGroup,
    f: F,
}

impl<F> FnCochain3<F>
where
    F: Fn(&GroupElem, &GroupElem, &GroupElem) -> Phase + Sync,
{
    pub fn new(group: FinAbGroup, f: F) -> Self {
        FnCochain3 { group, f }
    }
}

impl<F> Cochain3 for FnCochain3<F>
where
    F: Fn(&GroupElem, &GroupElem, &GroupElem) -> Phase + Sync,
{
    fn group(&self) -> &FinAbGroup {
        &self.group
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        (self.f)(x, y, z)
    }
}

/// A 2-cochain given by a closure.
pub struct FnCochain2<F> {
    group: FinAbGroup,
    f: F,
}

impl<F> FnCochain2<F>
where
    F: Fn(&GroupElem, &GroupElem) -> Phase + Sync,
{
    pub fn new(group: FinAbGroup, f: F) -> Self {
        FnCochain2 { group, f }
    }
}

impl<F> Cochain2 for FnCochain2<F>
where
    F: Fn(&GroupElem, &GroupElem) -> Phase + Sync,
{
    fn group(&self) -> &FinAbGroup {
        &self.group
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem) -> Phase {
        (self.f)(x, y)
    }
}

/// `sum_k c_k * φ_k` over one group.
pub struct Combination<'a> {
    group: FinAbGroup,
    terms: Vec<(i64, &'a dyn Cochain3)>,
}

impl<'a> Combination<'a> {
    pub fn new(terms: Vec<(i64, &'a dyn Cochain3)>) -> Result<Combination<'a>> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidInput("empty combination".into()));
        };
        let group = first.1.group().clone();
        if let Some(t) = terms.iter().find(|t| t.1.group() != &group) {
            return Err(Error::InvalidInput(format!(
                "cochains live on different groups: {:?} vs {:?}",
                group.moduli(),
                t.1.group().moduli()
            )));
        }
        Ok(Combination { group, terms })
    }

    /// `a - b`.
    pub fn difference(a: &'a dyn Cochain3, b: &'a dyn Cochain3) -> Result<Combination<'a>> {
        Self::new(vec![(1, a), (-1, b)])
    }

    /// `a + b`.
    pub fn sum(a: &'a dyn Cochain3, b: &'a dyn Cochain3) -> Result<Combination<'a>> {
        Self::new(vec![(1, a), (1, b)])
    }
}

impl Cochain3 for Combination<'_> {
    fn group(&self) -> &FinAbGroup {
        &self.group
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        self.terms
            .iter()
            .map(|(c, phi)| phi.eval(x, y, z).scale(*c))
            .sum()
    }
}

/// The coboundary `∂J` of a 2-cochain.
pub struct Differential<'a, C: ?Sized> {
    j: &'a C,
}

impl<'a, C: Cochain2 + ?Sized> Differential<'a, C> {
    pub fn new(j: &'a C) -> Self {
        Differential { j }
    }
}

impl<C: Cochain2 + ?Sized> Cochain3 for Differential<'_, C> {
    fn group(&self) -> &FinAbGroup {
        self.j.group()
    }
    fn eval(&self, a: &GroupElem, b: &GroupElem, c: &GroupElem) -> Phase {
        let g = self.j.group();
        let bc = g.mul(b, c);
        let ab = g.mul(a, b);
        self.j.eval(b, c) + self.j.eval(a, &bc) - self.j.eval(&ab, c) - self.j.eval(a, b)
    }
}

/// `Φ~_g(e, f) = φ(g,e,f) + φ(e,f,g) - φ(e,g,f)`.
pub struct PhiTilde<'a, C: ?Sized> {
    phi: &'a C,
    g: GroupElem,
}

impl<C: Cochain3 + ?Sized> Cochain2 for PhiTilde<'_, C> {
    fn group(&self) -> &FinAbGroup {
        self.phi.group()
    }
    fn eval(&self, e: &GroupElem, f: &GroupElem) -> Phase {
        let g = &self.g;
        self.phi.eval(g, e, f) + self.phi.eval(e, f, g) - self.phi.eval(e, g, f)
    }
}

pub fn phi_tilde<'a, C: Cochain3 + ?Sized>(phi: &'a C, g: &GroupElem) -> Result<PhiTilde<'a, C>> {
    phi.group().check(g)?;
    Ok(PhiTilde { phi, g: g.clone() })
}

/// Checks `φ = 0` whenever an argument is the identity.
pub fn is_normalized<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<bool> {
    Ok(normalization_counterexample(phi, budget)?.is_none())
}

fn normalization_counterexample<C: Cochain3 + ?Sized>(
    phi: &C,
    budget: &Budget,
) -> Result<Option<Vec<GroupElem>>> {
    let g = phi.group();
    budget.check("normalization check", g.order(), 2)?;
    let e = g.identity();
    for x in g.elements() {
        for y in g.elements() {
            for args in [[&e, &x, &y], [&x, &e, &y], [&x, &y, &e]] {
                if !phi.eval(args[0], args[1], args[2]).is_zero() {
                    return Ok(Some(args.iter().map(|a| (*a).clone()).collect()));
                }
            }
        }
    }
    Ok(None)
}

/// First failure of normalization (three elements) or of the 3-cocycle
/// identity (four elements), in index order. Refuses when `|G|^4` exceeds
/// the budget.
pub fn cocycle_counterexample<C: Cochain3 + ?Sized>(
    phi: &C,
    budget: &Budget,
) -> Result<Option<Vec<GroupElem>>> {
    let group = phi.group();
    budget.check("3-cocycle check", group.order(), 4)?;
    if let Some(bad) = normalization_counterexample(phi, budget)? {
        return Ok(Some(bad));
    }
    let table = TableCochain3::tabulate(phi, &Budget::unlimited())?;
    let gt = GroupTable::new(group);
    let n = gt.len();
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let hit = match CommonDenominator::new(table.values()) {
        Some(cd) => {
            let d = cd.den();
            (0..n).into_par_iter().find_map_first(|a| {
                for b in 0..n {
                    let ab = gt.mul(a, b);
                    for c in 0..n {
                        let bc = gt.mul(b, c);
                        let abc_lhs = cd.get(idx(a, b, c));
                        for dd in 0..n {
                            let lhs = cd.get(idx(b, c, dd)) + cd.get(idx(a, bc, dd)) + abc_lhs;
                            let rhs = cd.get(idx(ab, c, dd)) + cd.get(idx(a, b, gt.mul(c, dd)));
                            if lhs % d != rhs % d {
                                return Some([a, b, c, dd]);
                            }
                        }
                    }
                }
                None
            })
        }
        None => (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                let ab = gt.mul(a, b);
                for c in 0..n {
                    let bc = gt.mul(b, c);
                    for dd in 0..n {
                        let lhs = table.at(b, c, dd) + table.at(a, bc, dd) + table.at(a, b, c);
                        let rhs = table.at(ab, c, dd) + table.at(a, b, gt.mul(c, dd));
                        if lhs != rhs {
                            return Some([a, b, c, dd]);
                        }
                    }
                }
            }
            None
        }),
    };
    Ok(hit.map(|q| q.iter().map(|&i| gt.elems[i].clone()).collect()))
}

/// Exhaustive 3-cocycle test, including normalization.
pub fn is_cocycle<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<bool> {
    Ok(cocycle_counterexample(phi, budget)?.is_none())
}

/// Exhaustive 2-cocycle test `J(e,f) + J(ef,h) = J(f,h) + J(e,fh)`.
pub fn is_2cocycle<C: Cochain2 + ?Sized>(j: &C, budget: &Budget) -> Result<bool> {
    let group = j.group();
    budget.check("2-cocycle check", group.order(), 3)?;
    let table = TableCochain2::tabulate(j, &Budget::unlimited())?;
    let gt = GroupTable::new(group);
    let n = gt.len();
    let bad = (0..n).into_par_iter().any(|e| {
        (0..n).any(|f| {
            let ef = gt.mul(e, f);
            (0..n).any(|h| {
                table.at(e, f) + table.at(ef, h) != table.at(f, h) + table.at(e, gt.mul(f, h))
            })
        })
    });
    Ok(!bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::CocycleSpec;
    use crate::sample::random_cochain2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn spec_cocycles_on_klein_group() {
        let z = g(&[2, 2]);
        for s in CocycleSpec::enumerate(&z) {
            assert!(is_cocycle(&s, &Budget::default()).unwrap(), "{s:?}");
        }
    }

    #[test]
    fn table_json_roundtrip() {
        let s = CocycleSpec::new(g(&[2]), vec![1], &[], &[]).unwrap();
        let t = TableCochain3::tabulate(&s, &Budget::default()).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TableCochain3>(&text).unwrap(), t);
        assert!(serde_json::from_str::<TableCochain3>(r#"{"moduli":[2],"values":[]}"#).is_err());
    }

    #[test]
    fn zero_and_broken_cochains() {
        let z = g(&[2]);
        let zero = FnCochain3::new(z.clone(), |_, _, _| Phase::ZERO);
        assert!(is_cocycle(&zero, &Budget::default()).unwrap());
        let gen = z.generator(0);
        let bad = FnCochain3::new(z.clone(), move |x, y, w| {
            if *x == gen && *y == gen && *w == gen {
                Phase::new(1, 3)
            } else {
                Phase::ZERO
            }
        });
        assert!(!is_cocycle(&bad, &Budget::default()).unwrap());
    }

    #[test]
    fn budget_refuses_instead_of_sampling() {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::zero(&z);
        let err = is_cocycle(&s, &Budget::new(4095)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 4096, .. }));
    }

    #[test]
    fn differential_of_zero_and_normalization() {
        let z = g(&[3, 3]);
        let zero = FnCochain2::new(z.clone(), |_, _| Phase::ZERO);
        let d = Differential::new(&zero);
        for x in z.elements() {
            assert!(d.eval(&x, &x, &x).is_zero());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let j = random_cochain2(&z, 9, &mut rng);
        let dj = Differential::new(&j);
        assert!(is_normalized(&dj, &Budget::default()).unwrap());
        assert!(is_cocycle(&dj, &Budget::default()).unwrap());
    }

    #[test]
    fn phi_tilde_examples() {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::new(z.clone(), vec![0; 3], &[], &[((0, 1, 2), 1)]).unwrap();
        let e = z.identity();
        let t0 = phi_tilde(&s, &e).unwrap();
        for x in z.elements() {
            for y in z.elements() {
                assert!(t0.eval(&x, &y).is_zero());
            }
        }
        let (g1, g2, g3) = (z.generator(0), z.generator(1), z.generator(2));
        let t = phi_tilde(&s, &g1).unwrap();
        assert_eq!(t.eval(&g2, &g3) - t.eval(&g3, &g2), Phase::new(1, 2));
        for x in z.elements() {
            assert!(is_2cocycle(&phi_tilde(&s, &x).unwrap(), &Budget::default()).unwrap());
        }
    }

    #[test]
    fn combination_rejects_mixed_groups() {
        let a = CocycleSpec::zero(&g(&[2]));
        let b = CocycleSpec::zero(&g(&[3]));
        assert!(Combination::difference(&a, &b).is_err());
    }
}
