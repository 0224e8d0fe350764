use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spec::{format_pair_key, format_triple_key, pairs, parse_key, triples, Pair, Triple};
use super::{is_cocycle, Cochain3};
use crate::congruence::solve_congruence_system;
use crate::error::{Error, Result};
use crate::group::FinAbGroup;
use crate::phase::Phase;
use crate::Budget;

/// A 3-cochain on the complex `K`, given by its values on the generators
/// `Ψ_rrr`, `Ψ_rrs`, `Ψ_rss`, `Ψ_rst` (0-based indices, `r < s < t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCochain3 {
    pub f_rrr: Vec<Phase>,
    pub f_rrs: BTreeMap<Pair, Phase>,
    pub f_rss: BTreeMap<Pair, Phase>,
    pub f_rst: BTreeMap<Triple, Phase>,
}

impl KCochain3 {
    pub fn zero(n: usize) -> KCochain3 {
        KCochain3 {
            f_rrr: vec![Phase::ZERO; n],
            f_rrs: pairs(n).into_iter().map(|p| (p, Phase::ZERO)).collect(),
            f_rss: pairs(n).into_iter().map(|p| (p, Phase::ZERO)).collect(),
            f_rst: triples(n).into_iter().map(|t| (t, Phase::ZERO)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.f_rrr.len()
    }

    pub fn is_zero(&self) -> bool {
        self.f_rrr.iter().all(Phase::is_zero)
            && self.f_rrs.values().all(Phase::is_zero)
            && self.f_rss.values().all(Phase::is_zero)
            && self.f_rst.values().all(Phase::is_zero)
    }

    fn check_shape(&self, group: &FinAbGroup) -> Result<()> {
        let n = group.rank();
        if self.f_rrr.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.f_rrr.len(),
            });
        }
        let ps = pairs(n);
        let ts = triples(n);
        let ok = self.f_rrs.keys().copied().eq(ps.iter().copied())
            && self.f_rss.keys().copied().eq(ps.iter().copied())
            && self.f_rst.keys().copied().eq(ts.iter().copied());
        if !ok {
            return Err(Error::InvalidInput(format!(
                "K-cochain tables do not match rank {n}"
            )));
        }
        Ok(())
    }
}

/// Coboundary witness on `K`: `γ_ij` per pair with `m_i γ = f_iij`,
/// `m_j γ = -f_ijj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWitness {
    pub gamma: BTreeMap<Pair, Phase>,
}

/// Pulls a cochain on the bar resolution back along the chain map `K -> B`.
pub fn pushdown<C: Cochain3 + ?Sized>(phi: &C) -> KCochain3 {
    let g = phi.group();
    let n = g.rank();
    let m = g.moduli();
    let gen: Vec<_> = (0..n).map(|i| g.generator(i)).collect();
    let pw = |i: usize, l: u64| g.pow(&gen[i], l as i64);

    let f_rrr = (0..n)
        .map(|r| {
            (0..m[r])
                .map(|l| phi.eval(&gen[r], &pw(r, l), &gen[r]))
                .sum()
        })
        .collect();
    let mut f_rrs = BTreeMap::new();
    let mut f_rss = BTreeMap::new();
    for (r, s) in pairs(n) {
        let (gr, gs) = (&gen[r], &gen[s]);
        let a: Phase = (0..m[r])
            .map(|l| {
                let x = pw(r, l);
                phi.eval(&x, gr, gs) - phi.eval(&x, gs, gr) + phi.eval(gs, &x, gr)
            })
            .sum();
        let b: Phase = (0..m[s])
            .map(|l| {
                let x = pw(s, l);
                phi.eval(gr, &x, gs) - phi.eval(&x, gr, gs) + phi.eval(&x, gs, gr)
            })
            .sum();
        f_rrs.insert((r, s), a);
        f_rss.insert((r, s), b);
    }
    let f_rst = triples(n)
        .into_iter()
        .map(|(r, s, t)| {
            let (a, b, c) = (&gen[r], &gen[s], &gen[t]);
            let v = phi.eval(a, b, c) - phi.eval(b, a, c) - phi.eval(a, c, b)
                + phi.eval(c, a, b)
                + phi.eval(b, c, a)
                - phi.eval(c, b, a);
            ((r, s, t), v)
        })
        .collect();
    KCochain3 {
        f_rrr,
        f_rrs,
        f_rss,
        f_rst,
    }
}

fn m_i64(m: u64) -> i64 {
    m as i64
}

/// Cocycle criterion on `K`.
pub fn k_is_cocycle(f: &KCochain3, group: &FinAbGroup) -> Result<bool> {
    f.check_shape(group)?;
    let m = group.moduli();
    let ok = f
        .f_rrr
        .iter()
        .zip(m)
        .all(|(v, &mr)| v.scale(m_i64(mr)).is_zero())
        && pairs(group.rank()).into_iter().all(|(r, s)| {
            (f.f_rss[&(r, s)].scale(m_i64(m[r])) + f.f_rrs[&(r, s)].scale(m_i64(m[s]))).is_zero()
        })
        && f.f_rst
            .iter()
            .all(|(&(r, s, t), v)| [r, s, t].iter().all(|&k| v.scale(m_i64(m[k])).is_zero()));
    Ok(ok)
}

/// Coboundary criterion on `K`. Requires `f` to be a `K`-cocycle.
pub fn k_is_coboundary(f: &KCochain3, group: &FinAbGroup) -> Result<Option<KWitness>> {
    if !k_is_cocycle(f, group)? {
        return Err(Error::Precondition("K-cochain is not a cocycle".into()));
    }
    if f.f_rrr.iter().any(|v| !v.is_zero()) || f.f_rst.values().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    let m = group.moduli();
    let mut gamma = BTreeMap::new();
    for (i, j) in pairs(group.rank()) {
        let a = f.f_rrs[&(i, j)];
        let b = f.f_rss[&(i, j)];
        let l = num_integer::lcm(a.den(), b.den()) as u128;
        let big_n = l * m[i] as u128 * m[j] as u128;
        let n64 = u64::try_from(big_n).map_err(|_| Error::Overflow("coboundary witness"))?;
        let ra = (a.num() as u128 * (big_n / a.den() as u128)) as i64;
        let rb = (b.num() as u128 * (big_n / b.den() as u128)) as i64;
        let sol = solve_congruence_system(
            &[vec![m_i64(m[i])], vec![m_i64(m[j])]],
            &[ra, -rb],
            &[n64, n64],
        )?;
        match sol {
            Some(y) => {
                gamma.insert((i, j), Phase::new(y[0], n64));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(KWitness { gamma }))
}

/// Decides whether a 3-cocycle is a coboundary; checks the cocycle
/// condition first.
pub fn is_coboundary<C: Cochain3 + ?Sized>(phi: &C, budget: &Budget) -> Result<Option<KWitness>> {
    if !is_cocycle(phi, budget)? {
        return Err(Error::Precondition(
            "input is not a normalized 3-cocycle".into(),
        ));
    }
    is_coboundary_unchecked(phi)
}

/// [`is_coboundary`] without the exhaustive cocycle precheck; for cochains
/// known to be cocycles by construction.
pub fn is_coboundary_unchecked<C: Cochain3 + ?Sized>(phi: &C) -> Result<Option<KWitness>> {
    k_is_coboundary(&pushdown(phi), phi.group())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawK {
    f_rrr: Vec<Phase>,
    f_rrs: BTreeMap<String, Phase>,
    f_rss: BTreeMap<String, Phase>,
    f_rst: BTreeMap<String, Phase>,
}

impl Serialize for KCochain3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawK {
            f_rrr: self.f_rrr.clone(),
            f_rrs: self
                .f_rrs
                .iter()
                .map(|(&p, &v)| (format_pair_key(p), v))
                .collect(),
            f_rss: self
                .f_rss
                .iter()
                .map(|(&p, &v)| (format_pair_key(p), v))
                .collect(),
            f_rst: self
                .f_rst
                .iter()
                .map(|(&t, &v)| (format_triple_key(t), v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KCochain3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawK::deserialize(d)?;
        let n = raw.f_rrr.len();
        let pair_map = |m: &BTreeMap<String, Phase>| -> Result<BTreeMap<Pair, Phase>> {
            let mut out: BTreeMap<Pair, Phase> =
                pairs(n).into_iter().map(|p| (p, Phase::ZERO)).collect();
            for (k, &v) in m {
                let ix = parse_key(k, 2)?;
                let key = (ix[0], ix[1]);
                if !out.contains_key(&key) {
                    return Err(Error::InvalidInput(format!("bad pair key {k:?}")));
                }
                out.insert(key, v);
            }
            Ok(out)
        };
        let f_rrs = pair_map(&raw.f_rrs).map_err(serde::de::Error::custom)?;
        let f_rss = pair_map(&raw.f_rss).map_err(serde::de::Error::custom)?;
        let mut f_rst: BTreeMap<Triple, Phase> =
            triples(n).into_iter().map(|t| (t, Phase::ZERO)).collect();
        for (k, &v) in &raw.f_rst {
            let ix = parse_key(k, 3).map_err(serde::de::Error::custom)?;
            let key = (ix[0], ix[1], ix[2]);
            if !f_rst.contains_key(&key) {
                return Err(serde::de::Error::custom(format!("bad triple key {k:?}")));
            }
            f_rst.insert(key, v);
        }
        Ok(KCochain3 {
            f_rrr: raw.f_rrr,
            f_rrs,
            f_rss,
            f_rst,
        })
    }
}

impl Serialize for KWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, Phase> = self
            .gamma
            .iter()
            .map(|(&p, &v)| (format_pair_key(p), v))
            .collect();
        m.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd3;
    use crate::cocycle::{CocycleSpec, Differential};
    use crate::sample::random_cochain2;
    use num_integer::Integer;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.to_vec()).unwrap()
    }

    /// Representative values read off the closed form by hand.
    fn expected_k(spec: &CocycleSpec) -> KCochain3 {
        let m = spec.group().moduli();
        let n = m.len();
        let mut k = KCochain3::zero(n);
        for r in 0..n {
            k.f_rrr[r] = Phase::new(spec.a_l()[r] as i64, m[r]);
        }
        for (r, s) in pairs(n) {
            k.f_rrs
                .insert((r, s), Phase::new(spec.a_ij(r, s) as i64, m[s]));
        }
        for (r, s, t) in triples(n) {
            k.f_rst.insert(
                (r, s, t),
                Phase::new(spec.a_rst(r, s, t) as i64, gcd3(m[r], m[s], m[t])),
            );
        }
        k
    }

    #[test]
    fn pushdown_of_representatives() {
        for moduli in [&[2, 2, 2][..], &[2, 4]] {
            let z = g(moduli);
            for s in CocycleSpec::enumerate(&z) {
                let k = pushdown(&s);
                assert_eq!(k, expected_k(&s), "{s:?}");
                assert!(k_is_cocycle(&k, &z).unwrap());
            }
        }
    }

    #[test]
    fn z2_cubed_triple_value() {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::new(z, vec![0; 3], &[], &[((0, 1, 2), 1)]).unwrap();
        assert_eq!(pushdown(&s).f_rst[&(0, 1, 2)], Phase::new(1, 2));
    }

    #[test]
    fn k_cocycle_examples() {
        let z = g(&[2, 2]);
        assert!(k_is_cocycle(&KCochain3::zero(2), &z).unwrap());
        let mut f = KCochain3::zero(2);
        f.f_rrs.insert((0, 1), Phase::new(1, 3));
        assert!(!k_is_cocycle(&f, &z).unwrap());
        assert!(matches!(
            k_is_coboundary(&f, &z),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn k_coboundary_examples() {
        let z = g(&[2, 2]);
        let w = k_is_coboundary(&KCochain3::zero(2), &z).unwrap().unwrap();
        assert!(w.gamma.values().all(Phase::is_zero));

        let mut f = KCochain3::zero(2);
        f.f_rrs.insert((0, 1), Phase::new(1, 2));
        f.f_rss.insert((0, 1), Phase::new(1, 2));
        let w = k_is_coboundary(&f, &z).unwrap().unwrap();
        let gamma = w.gamma[&(0, 1)];
        assert_eq!(gamma, Phase::new(1, 4));
        assert_eq!(gamma.scale(2), f.f_rrs[&(0, 1)]);
        assert_eq!(gamma.scale(2), -f.f_rss[&(0, 1)]);

        let s = CocycleSpec::new(z.clone(), vec![1, 0], &[], &[]).unwrap();
        assert!(k_is_coboundary(&pushdown(&s), &z).unwrap().is_none());
    }

    #[test]
    fn nonzero_representatives_are_not_coboundaries() {
        for moduli in [&[2, 2][..], &[2, 4], &[3, 3]] {
            let z = g(moduli);
            for s in CocycleSpec::enumerate(&z) {
                let w = is_coboundary(&s, &Budget::default()).unwrap();
                assert_eq!(w.is_some(), s.is_zero(), "{s:?}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let mut f = KCochain3::zero(2);
        f.f_rrs.insert((0, 1), Phase::new(1, 2));
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"f_rrr":[{"num":0,"den":1},{"num":0,"den":1}],"f_rrs":{"1,2":{"num":1,"den":2}},"f_rss":{"1,2":{"num":0,"den":1}},"f_rst":{}}"#
        );
        let back: KCochain3 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Chain-map shadow: pushdown of any coboundary is a K-coboundary.
        #[test]
        fn pushdown_of_coboundary_is_coboundary(
            moduli in prop::collection::vec(1u64..7, 1..4),
            seed in any::<u64>(),
            den_mult in 1u64..5,
        ) {
            let z = g(&moduli);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let j = random_cochain2(&z, z.exponent() * den_mult, &mut rng);
            let dj = Differential::new(&j);
            let k = pushdown(&dj);
            prop_assert!(k_is_cocycle(&k, &z).unwrap());
            let w = k_is_coboundary(&k, &z).unwrap();
            prop_assert!(w.is_some());
            let w = w.unwrap();
            let m = z.moduli();
            for ((i, jj), gam) in w.gamma {
                prop_assert_eq!(gam.scale(m[i] as i64), k.f_rrs[&(i, jj)]);
                prop_assert_eq!(gam.scale(m[jj] as i64), -k.f_rss[&(i, jj)]);
            }
        }

        #[test]
        fn class_count_matches_formula(moduli in prop::collection::vec(1u64..7, 0..4)) {
            let z = g(&moduli);
            let n = moduli.len();
            let mut want: u128 = moduli.iter().map(|&x| x as u128).product();
            for (i, j) in pairs(n) { want *= moduli[i].gcd(&moduli[j]) as u128; }
            for (r, s, t) in triples(n) { want *= gcd3(moduli[r], moduli[s], moduli[t]) as u128; }
            prop_assert_eq!(CocycleSpec::count(&z), want);
        }
    }
}
