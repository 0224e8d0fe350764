//! Finite abelian groups `Z_{m_1} x ... x Z_{m_n}` with a fixed generating set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{crt, factorize};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FinAbGroup {
    moduli: Vec<u64>,
    order: u64,
    invariant_factor: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    moduli: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    invariant_factor: Option<bool>,
}

impl TryFrom<RawGroup> for FinAbGroup {
    type Error = Error;
    fn try_from(r: RawGroup) -> Result<Self> {
        let g = FinAbGroup::new(r.moduli)?;
        match r.invariant_factor {
            Some(flag) if flag != g.invariant_factor => Err(Error::InvalidInput(format!(
                "invariant_factor flag {flag} does not match moduli {:?}",
                g.moduli
            ))),
            _ => Ok(g),
        }
    }
}

impl From<FinAbGroup> for RawGroup {
    fn from(g: FinAbGroup) -> Self {
        RawGroup {
            invariant_factor: Some(g.invariant_factor),
            moduli: g.moduli,
        }
    }
}

/// An element given by its exponent vector, each entry in `[0, m_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupElem {
    #[serde(rename = "exp")]
    exps: Vec<u64>,
}

impl GroupElem {
    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u64 {
        self.exps[i]
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }
}

impl FinAbGroup {
    pub fn new(moduli: Vec<u64>) -> Result<FinAbGroup> {
        if let Some(&m) = moduli.iter().find(|&&m| m == 0) {
            return Err(Error::InvalidInput(format!(
                "modulus must be >= 1, got {m}"
            )));
        }
        let mut order: u64 = 1;
        for &m in &moduli {
            order = order.checked_mul(m).ok_or(Error::Overflow("group order"))?;
        }
        let invariant_factor = moduli.windows(2).all(|w| w[1] % w[0] == 0);
        Ok(FinAbGroup {
            moduli,
            order,
            invariant_factor,
        })
    }

    pub fn cyclic(m: u64) -> FinAbGroup {
        FinAbGroup::new(vec![m]).expect("valid modulus")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn modulus(&self, i: usize) -> u64 {
        self.moduli[i]
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_invariant_factor(&self) -> bool {
        self.invariant_factor
    }

    /// Exponent of the group (lcm of the moduli).
    pub fn exponent(&self) -> u64 {
        crate::arith::lcm_all(self.moduli.iter().copied())
    }

    /// Builds an element, reducing each exponent mod its modulus.
    pub fn elem(&self, exps: &[i64]) -> Result<GroupElem> {
        self.check_len(exps.len())?;
        Ok(GroupElem {
            exps: exps
                .iter()
                .zip(&self.moduli)
                .map(|(&e, &m)| e.rem_euclid(m as i64) as u64)
                .collect(),
        })
    }

    /// Builds an element from unsigned exponents, reducing mod the moduli.
    pub fn elem_u(&self, exps: &[u64]) -> Result<GroupElem> {
        self.check_len(exps.len())?;
        Ok(GroupElem {
            exps: exps
                .iter()
                .zip(&self.moduli)
                .map(|(&e, &m)| e % m)
                .collect(),
        })
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            exps: vec![0; self.rank()],
        }
    }

    /// The generator `g_i` (0-based).
    pub fn generator(&self, i: usize) -> GroupElem {
        let mut exps = vec![0; self.rank()];
        exps[i] = 1 % self.moduli[i];
        GroupElem { exps }
    }

    pub fn contains(&self, x: &GroupElem) -> bool {
        x.exps.len() == self.rank() && x.exps.iter().zip(&self.moduli).all(|(&e, &m)| e < m)
    }

    pub fn check(&self, x: &GroupElem) -> Result<()> {
        self.check_len(x.rank())?;
        if !self.contains(x) {
            return Err(Error::InvalidInput(format!(
                "exponents {:?} out of range for moduli {:?}",
                x.exps, self.moduli
            )));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: len,
            });
        }
        Ok(())
    }

    pub fn mul(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        GroupElem {
            exps: x
                .exps
                .iter()
                .zip(&y.exps)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        }
    }

    /// Checked multiplication for untrusted operands.
    pub fn try_mul(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn inv(&self, x: &GroupElem) -> GroupElem {
        GroupElem {
            exps: x
                .exps
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
        }
    }

    pub fn pow(&self, x: &GroupElem, k: i64) -> GroupElem {
        GroupElem {
            exps: x
                .exps
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| ((a as i128 * k as i128).rem_euclid(m as i128)) as u64)
                .collect(),
        }
    }

    /// Mixed-radix index; the last coordinate varies fastest.
    pub fn index(&self, x: &GroupElem) -> usize {
        let mut i = 0u64;
        for (&e, &m) in x.exps.iter().zip(&self.moduli) {
            i = i * m + e;
        }
        i as usize
    }

    pub fn elem_at(&self, mut idx: usize) -> GroupElem {
        let mut exps = vec![0; self.rank()];
        for k in (0..self.rank()).rev() {
            let m = self.moduli[k] as usize;
            exps[k] = (idx % m) as u64;
            idx /= m;
        }
        GroupElem { exps }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.order as usize).map(move |i| self.elem_at(i))
    }

    /// Decomposition into invariant factors `d_1 | d_2 | ...` (trivial
    /// factors dropped) with mutually inverse isomorphisms.
    pub fn invariant_factor_form(&self) -> (FinAbGroup, GroupHom, GroupHom) {
        // per prime: list of (source index, exponent)
        let mut per_prime: BTreeMap<u64, Vec<(usize, u32)>> = BTreeMap::new();
        for (i, &m) in self.moduli.iter().enumerate() {
            for (p, e) in factorize(m) {
                per_prime.entry(p).or_default().push((i, e));
            }
        }
        let r = per_prime.values().map(Vec::len).max().unwrap_or(0);
        // slot[k][p] = (source index, exponent)
        let mut slots: Vec<BTreeMap<u64, (usize, u32)>> = vec![BTreeMap::new(); r];
        for (&p, list) in per_prime.iter_mut() {
            list.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            for (rank_from_top, &(i, e)) in list.iter().enumerate() {
                slots[r - 1 - rank_from_top].insert(p, (i, e));
            }
        }
        let target_moduli: Vec<u64> = slots
            .iter()
            .map(|s| s.iter().map(|(&p, &(_, e))| p.pow(e)).product())
            .collect();
        let target = FinAbGroup::new(target_moduli).expect("valid moduli");

        let forward_images = (0..self.rank())
            .map(|i| {
                slots
                    .iter()
                    .map(|s| {
                        let res: Vec<(u64, u64)> = s
                            .iter()
                            .map(|(&p, &(src, e))| (u64::from(src == i), p.pow(e)))
                            .collect();
                        crt(&res)
                    })
                    .collect()
            })
            .collect();
        let backward_images = (0..r)
            .map(|k| {
                (0..self.rank())
                    .map(|i| {
                        let res: Vec<(u64, u64)> = factorize(self.moduli[i])
                            .into_iter()
                            .map(|(p, e)| {
                                let hit = slots[k].get(&p).is_some_and(|&(src, _)| src == i);
                                (u64::from(hit), p.pow(e))
                            })
                            .collect();
                        crt(&res)
                    })
                    .collect()
            })
            .collect();
        let fwd = GroupHom {
            source: self.clone(),
            target: target.clone(),
            images: forward_images,
        };
        let bwd = GroupHom {
            source: target.clone(),
            target: self.clone(),
            images: backward_images,
        };
        (target, fwd, bwd)
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub images: Vec<Vec<u64>>,
}

impl GroupHom {
    pub fn apply(&self, x: &GroupElem) -> GroupElem {
        let mut out = vec![0u128; self.target.rank()];
        for (i, &e) in x.exps.iter().enumerate() {
            for (k, &img) in self.images[i].iter().enumerate() {
                out[k] += e as u128 * img as u128;
            }
        }
        GroupElem {
            exps: out
                .iter()
                .zip(self.target.moduli())
                .map(|(&v, &m)| (v % m as u128) as u64)
                .collect(),
        }
    }
}

/// Precomputed product and inverse tables, indexed by [`FinAbGroup::index`].
pub struct GroupTable {
    pub group: FinAbGroup,
    pub elems: Vec<GroupElem>,
    n: usize,
    mul: Option<Vec<u32>>,
    inv: Vec<u32>,
}

impl GroupTable {
    pub fn new(group: &FinAbGroup) -> GroupTable {
        let n = group.order() as usize;
        let elems: Vec<GroupElem> = group.elements().collect();
        let inv = elems
            .iter()
            .map(|x| group.index(&group.inv(x)) as u32)
            .collect();
        let mul = (n <= 2048).then(|| {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = group.index(&group.mul(&elems[i], &elems[j])) as u32;
                }
            }
            t
        });
        GroupTable {
            group: group.clone(),
            elems,
            n,
            mul,
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.mul {
            Some(t) => t[i * self.n + j] as usize,
            None => self
                .group
                .index(&self.group.mul(&self.elems[i], &self.elems[j])),
        }
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }
}
