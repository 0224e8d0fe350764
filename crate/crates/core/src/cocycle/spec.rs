use std::collections::BTreeMap;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Cochain3;
use crate::arith::{gcd3, lcm_all};
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::phase::Phase;

pub type Pair = (usize, usize);
pub type Triple = (usize, usize, usize);

/// All pairs `i < j` in lexicographic order (0-based).
pub fn pairs(n: usize) -> Vec<Pair> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// All triples `r < s < t` in lexicographic order (0-based).
pub fn triples(n: usize) -> Vec<Triple> {
    (0..n)
        .flat_map(|r| (r + 1..n).flat_map(move |s| (s + 1..n).map(move |t| (r, s, t))))
        .collect()
}

/// Coefficients `a = (a_l, a_ij, a_rst)` of the representative cocycle
/// `Φ_a`. Indices are 0-based in the API and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CocycleSpec {
    group: FinAbGroup,
    a_l: Vec<u64>,
    a_ij: BTreeMap<Pair, u64>,
    a_rst: BTreeMap<Triple, u64>,
    eval: Evaluator,
}

/// `Φ_a` over the common denominator `lcm(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Evaluator {
    den: u64,
    single: Vec<(usize, u64)>,
    pair: Vec<(usize, usize, u64)>,
    triple: Vec<(usize, usize, usize, u64)>,
}

impl CocycleSpec {
    /// Builds a spec with the canonical bounds `a_l < m_l`,
    /// `a_ij < (m_i, m_j)`, `a_rst < (m_r, m_s, m_t)`. Missing pair and
    /// triple entries are zero.
    pub fn new(
        group: FinAbGroup,
        a_l: Vec<u64>,
        a_ij: &[(Pair, u64)],
        a_rst: &[(Triple, u64)],
    ) -> Result<CocycleSpec> {
        Self::build(group, a_l, a_ij, a_rst, false)
    }

    /// Like [`CocycleSpec::new`] but allows `a_ij < m_j`. `Φ_a` only
    /// depends on `a_ij mod m_j`, and the resolution formulas keep this
    /// wider representative.
    pub fn new_unreduced(
        group: FinAbGroup,
        a_l: Vec<u64>,
        a_ij: &[(Pair, u64)],
        a_rst: &[(Triple, u64)],
    ) -> Result<CocycleSpec> {
        Self::build(group, a_l, a_ij, a_rst, true)
    }

    pub fn zero(group: &FinAbGroup) -> CocycleSpec {
        Self::new(group.clone(), vec![0; group.rank()], &[], &[]).expect("zero spec")
    }

    fn build(
        group: FinAbGroup,
        a_l: Vec<u64>,
        a_ij: &[(Pair, u64)],
        a_rst: &[(Triple, u64)],
        wide: bool,
    ) -> Result<CocycleSpec> {
        let n = group.rank();
        let m = group.moduli();
        if a_l.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a_l.len(),
            });
        }
        for (l, &a) in a_l.iter().enumerate() {
            if a >= m[l] {
                return Err(Error::InvalidInput(format!(
                    "a_{} = {a} must be < m_{} = {}",
                    l + 1,
                    l + 1,
                    m[l]
                )));
            }
        }
        let mut pair_map: BTreeMap<Pair, u64> = pairs(n).into_iter().map(|p| (p, 0)).collect();
        for &((i, j), a) in a_ij {
            if !(i < j && j < n) {
                return Err(Error::InvalidInput(format!(
                    "pair index ({},{}) must satisfy i < j <= {n}",
                    i + 1,
                    j + 1
                )));
            }
            let bound = if wide { m[j] } else { m[i].gcd(&m[j]) };
            if a >= bound {
                return Err(Error::InvalidInput(format!(
                    "a_{},{} = {a} must be < {bound}",
                    i + 1,
                    j + 1
                )));
            }
            pair_map.insert((i, j), a);
        }
        let mut triple_map: BTreeMap<Triple, u64> =
            triples(n).into_iter().map(|t| (t, 0)).collect();
        for &((r, s, t), a) in a_rst {
            if !(r < s && s < t && t < n) {
                return Err(Error::InvalidInput(format!(
                    "triple index ({},{},{}) must satisfy r < s < t <= {n}",
                    r + 1,
                    s + 1,
                    t + 1
                )));
            }
            let bound = gcd3(m[r], m[s], m[t]);
            if a >= bound {
                return Err(Error::InvalidInput(format!(
                    "a_{},{},{} = {a} must be < {bound}",
                    r + 1,
                    s + 1,
                    t + 1
                )));
            }
            triple_map.insert((r, s, t), a);
        }
        let eval = Evaluator::new(m, &a_l, &pair_map, &triple_map);
        Ok(CocycleSpec {
            group,
            a_l,
            a_ij: pair_map,
            a_rst: triple_map,
            eval,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn a_l(&self) -> &[u64] {
        &self.a_l
    }

    pub fn a_ij(&self, i: usize, j: usize) -> u64 {
        self.a_ij[&(i, j)]
    }

    pub fn a_rst(&self, r: usize, s: usize, t: usize) -> u64 {
        self.a_rst[&(r, s, t)]
    }

    pub fn pair_coefficients(&self) -> &BTreeMap<Pair, u64> {
        &self.a_ij
    }

    pub fn triple_coefficients(&self) -> &BTreeMap<Triple, u64> {
        &self.a_rst
    }

    pub fn is_zero(&self) -> bool {
        self.a_l.iter().all(|&a| a == 0)
            && self.a_ij.values().all(|&a| a == 0)
            && self.a_rst.values().all(|&a| a == 0)
    }

    /// True when every `a_rst` vanishes.
    pub fn is_abelian(&self) -> bool {
        self.a_rst.values().all(|&a| a == 0)
    }

    /// True when the coefficients satisfy the canonical bounds.
    pub fn is_canonical(&self) -> bool {
        let m = self.group.moduli();
        self.a_ij.iter().all(|(&(i, j), &a)| a < m[i].gcd(&m[j]))
    }

    /// The canonical representative of the same class (`a_ij` reduced mod
    /// `(m_i, m_j)`).
    pub fn canonical(&self) -> CocycleSpec {
        let m = self.group.moduli();
        let pairs: Vec<(Pair, u64)> = self
            .a_ij
            .iter()
            .map(|(&(i, j), &a)| ((i, j), a % m[i].gcd(&m[j])))
            .collect();
        let triples: Vec<(Triple, u64)> = self.a_rst.iter().map(|(&k, &v)| (k, v)).collect();
        CocycleSpec::new(self.group.clone(), self.a_l.clone(), &pairs, &triples)
            .expect("reduced coefficients are in range")
    }

    /// Number of canonical specs on `group`.
    pub fn count(group: &FinAbGroup) -> u128 {
        bounds(group).iter().map(|&b| b as u128).product()
    }

    /// Every canonical spec on `group`, in mixed-radix order over
    /// `(a_l, a_ij, a_rst)`.
    pub fn enumerate(group: &FinAbGroup) -> impl Iterator<Item = CocycleSpec> + '_ {
        let b = bounds(group);
        let total = Self::count(group) as usize;
        (0..total).map(move |mut idx| {
            let mut digits = vec![0u64; b.len()];
            for k in (0..b.len()).rev() {
                digits[k] = (idx % b[k] as usize) as u64;
                idx /= b[k] as usize;
            }
            Self::from_digits(group, &digits)
        })
    }

    /// A uniformly random canonical spec.
    pub fn random<R: Rng>(group: &FinAbGroup, rng: &mut R) -> CocycleSpec {
        let digits: Vec<u64> = bounds(group).iter().map(|&b| rng.gen_range(0..b)).collect();
        Self::from_digits(group, &digits)
    }

    fn from_digits(group: &FinAbGroup, digits: &[u64]) -> CocycleSpec {
        let n = group.rank();
        let ps = pairs(n);
        let ts = triples(n);
        let a_l = digits[..n].to_vec();
        let a_ij: Vec<(Pair, u64)> = ps.into_iter().zip(digits[n..].iter().copied()).collect();
        let a_rst: Vec<(Triple, u64)> = ts
            .into_iter()
            .zip(digits[n + a_ij.len()..].iter().copied())
            .collect();
        CocycleSpec::new(group.clone(), a_l, &a_ij, &a_rst).expect("digits within bounds")
    }

    /// `Φ_a(x, y, z)` on validated elements.
    pub fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Result<Phase> {
        for e in [x, y, z] {
            self.group.check(e)?;
        }
        Ok(self.eval_unchecked(x.exps(), y.exps(), z.exps()))
    }

    /// `Φ_a` on raw canonical exponent vectors.
    #[inline]
    pub fn eval_unchecked(&self, i: &[u64], j: &[u64], k: &[u64]) -> Phase {
        self.eval.eval(self.group.moduli(), i, j, k)
    }
}

fn bounds(group: &FinAbGroup) -> Vec<u64> {
    let m = group.moduli();
    let n = m.len();
    let mut b: Vec<u64> = m.to_vec();
    b.extend(pairs(n).into_iter().map(|(i, j)| m[i].gcd(&m[j])));
    b.extend(
        triples(n)
            .into_iter()
            .map(|(r, s, t)| gcd3(m[r], m[s], m[t])),
    );
    b
}

impl Evaluator {
    fn new(
        m: &[u64],
        a_l: &[u64],
        a_ij: &BTreeMap<Pair, u64>,
        a_rst: &BTreeMap<Triple, u64>,
    ) -> Evaluator {
        let den = lcm_all(m.iter().copied()).max(1);
        let single = a_l
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(l, &a)| (l, a * (den / m[l])))
            .collect();
        let pair = a_ij
            .iter()
            .filter(|(_, &a)| a != 0)
            .map(|(&(s, t), &a)| (s, t, a * (den / m[t])))
            .collect();
        let triple = a_rst
            .iter()
            .filter(|(_, &a)| a != 0)
            .map(|(&(r, s, t), &a)| (r, s, t, a * (den / gcd3(m[r], m[s], m[t]))))
            .collect();
        Evaluator {
            den,
            single,
            pair,
            triple,
        }
    }

    #[inline]
    fn eval(&self, m: &[u64], i: &[u64], j: &[u64], k: &[u64]) -> Phase {
        let d = self.den as i128;
        let mut acc: i128 = 0;
        for &(l, c) in &self.single {
            if j[l] + k[l] >= m[l] {
                acc += (c as i128 * i[l] as i128) % d;
            }
        }
        for &(s, t, c) in &self.pair {
            if j[s] + k[s] >= m[s] {
                acc += (c as i128 * i[t] as i128) % d;
            }
        }
        for &(r, s, t, c) in &self.triple {
            let prod = (k[r] as i128 * j[s] as i128 % d) * i[t] as i128 % d;
            acc -= c as i128 * prod % d;
        }
        Phase::from_ratio(acc, self.den as u128)
    }
}

impl Cochain3 for CocycleSpec {
    fn group(&self) -> &FinAbGroup {
        &self.group
    }

    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        self.eval_unchecked(x.exps(), y.exps(), z.exps())
    }
}

fn pair_key(i: usize, j: usize) -> String {
    format!("{},{}", i + 1, j + 1)
}

fn triple_key(r: usize, s: usize, t: usize) -> String {
    format!("{},{},{}", r + 1, s + 1, t + 1)
}

pub(crate) fn parse_key(key: &str, arity: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != arity {
        return Err(Error::InvalidInput(format!(
            "key {key:?} must have {arity} comma-separated indices"
        )));
    }
    parts
        .iter()
        .map(|p| match p.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::InvalidInput(format!(
                "bad index {p:?} in key {key:?}"
            ))),
        })
        .collect()
}

pub(crate) fn format_pair_key(p: Pair) -> String {
    pair_key(p.0, p.1)
}

pub(crate) fn format_triple_key(t: Triple) -> String {
    triple_key(t.0, t.1, t.2)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    moduli: Vec<u64>,
    a_l: Vec<u64>,
    #[serde(default)]
    a_ij: BTreeMap<String, u64>,
    #[serde(default)]
    a_rst: BTreeMap<String, u64>,
}

impl Serialize for CocycleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSpec {
            schema: None,
            moduli: self.group.moduli().to_vec(),
            a_l: self.a_l.clone(),
            a_ij: self
                .a_ij
                .iter()
                .map(|(&(i, j), &v)| (pair_key(i, j), v))
                .collect(),
            a_rst: self
                .a_rst
                .iter()
                .map(|(&(r, s, t), &v)| (triple_key(r, s, t), v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CocycleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(d)?;
        spec_from_raw(raw).map_err(serde::de::Error::custom)
    }
}

fn spec_from_raw(raw: RawSpec) -> Result<CocycleSpec> {
    if let Some(v) = raw.schema {
        if v != 1 {
            return Err(Error::InvalidInput(format!("unsupported schema {v}")));
        }
    }
    let group = FinAbGroup::new(raw.moduli)?;
    let a_ij = raw
        .a_ij
        .iter()
        .map(|(k, &v)| parse_key(k, 2).map(|ix| ((ix[0], ix[1]), v)))
        .collect::<Result<Vec<_>>>()?;
    let a_rst = raw
        .a_rst
        .iter()
        .map(|(k, &v)| parse_key(k, 3).map(|ix| ((ix[0], ix[1], ix[2]), v)))
        .collect::<Result<Vec<_>>>()?;
    CocycleSpec::new_unreduced(group, raw.a_l, &a_ij, &a_rst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn z2_example() {
        let z = g(&[2]);
        let s = CocycleSpec::new(z.clone(), vec![1], &[], &[]).unwrap();
        let x = z.generator(0);
        assert_eq!(s.eval(&x, &x, &x).unwrap(), Phase::new(1, 2));
    }

    #[test]
    fn z2_cubed_example() {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::new(z.clone(), vec![0, 0, 0], &[], &[((0, 1, 2), 1)]).unwrap();
        let (g1, g2, g3) = (z.generator(0), z.generator(1), z.generator(2));
        assert_eq!(s.eval(&g3, &g2, &g1).unwrap(), Phase::new(1, 2));
        assert_eq!(s.eval(&g1, &g2, &g3).unwrap(), Phase::ZERO);
    }

    #[test]
    fn bounds_enforced() {
        let z = g(&[2, 4]);
        assert!(CocycleSpec::new(z.clone(), vec![2, 0], &[], &[]).is_err());
        assert!(CocycleSpec::new(z.clone(), vec![0, 0], &[((0, 1), 2)], &[]).is_err());
        assert!(CocycleSpec::new_unreduced(z.clone(), vec![0, 0], &[((0, 1), 3)], &[]).is_ok());
        assert!(CocycleSpec::new(z.clone(), vec![0, 0], &[((1, 0), 1)], &[]).is_err());
        assert!(CocycleSpec::new(z, vec![0], &[], &[]).is_err());
    }

    #[test]
    fn count_and_enumeration() {
        let z = g(&[2, 4]);
        assert_eq!(CocycleSpec::count(&z), 2 * 4 * 2);
        let all: Vec<_> = CocycleSpec::enumerate(&z).collect();
        assert_eq!(all.len(), 16);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 16);
        assert_eq!(CocycleSpec::count(&g(&[2, 2, 2])), 8 * 8 * 2);
    }

    #[test]
    fn json_roundtrip() {
        let z = g(&[2, 2, 2]);
        let s = CocycleSpec::new(z, vec![1, 0, 1], &[((0, 2), 1)], &[((0, 1, 2), 1)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"moduli":[2,2,2],"a_l":[1,0,1],"a_ij":{"1,2":0,"1,3":1,"2,3":0},"a_rst":{"1,2,3":1}}"#
        );
        let back: CocycleSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let sparse: CocycleSpec = serde_json::from_str(
            r#"{"schema":1,"moduli":[2,2,2],"a_l":[1,0,1],"a_ij":{"1,3":1},"a_rst":{"1,2,3":1}}"#,
        )
        .unwrap();
        assert_eq!(sparse, s);
        assert!(
            serde_json::from_str::<CocycleSpec>(r#"{"moduli":[2],"a_l":[1],"bogus":1}"#).is_err()
        );
        assert!(serde_json::from_str::<CocycleSpec>(
            r#"{"moduli":[2,2],"a_l":[1,0],"a_ij":{"2,1":1}}"#
        )
        .is_err());
    }
}
