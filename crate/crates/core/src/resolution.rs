//! Trivializing abelian 3-cocycles on the squared-moduli cover.
//!
//! For `𝔾 = Z_{𝕞_1} x ... x Z_{𝕞_n}` the cover is `G = Z_{𝕞_1^2} x ...`
//! with `π` reducing exponents mod `𝕞_i`. For abelian `a` the 2-cochain
//! `J_a` on `G` satisfies `∂J_a = π*Φ_a`; for non-abelian `a` the pullback
//! keeps a nonzero `f_rst` and is never a coboundary.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{
    format_triple_key, is_coboundary_unchecked, pushdown, Cochain2, Cochain3, CocycleSpec,
    TableCochain3,
};
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem, GroupTable};
use crate::phase::{CommonDenominator, Phase};
use crate::Budget;

/// `π: G -> 𝔾` with its canonical section `ι`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLift {
    base: FinAbGroup,
    lifted: FinAbGroup,
}

impl GroupLift {
    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn lifted(&self) -> &FinAbGroup {
        &self.lifted
    }

    /// `π`: exponents mod `𝕞_i`.
    pub fn project(&self, x: &GroupElem) -> GroupElem {
        self.base.elem_u(x.exps()).expect("ranks agree")
    }

    /// `ι`: the same canonical exponents read in `G`.
    pub fn section(&self, x: &GroupElem) -> GroupElem {
        self.lifted.elem_u(x.exps()).expect("ranks agree")
    }
}

/// The cover with moduli `𝕞_i^2`.
pub fn lift_group(base: &FinAbGroup) -> Result<GroupLift> {
    let moduli = base
        .moduli()
        .iter()
        .map(|&m| m.checked_mul(m).ok_or(Error::Overflow("lifted modulus")))
        .collect::<Result<Vec<u64>>>()?;
    Ok(GroupLift {
        base: base.clone(),
        lifted: FinAbGroup::new(moduli)?,
    })
}

/// `(g, h, z) ↦ φ(πg, πh, πz)`.
pub struct Pullback<'a, C: ?Sized> {
    phi: &'a C,
    lift: &'a GroupLift,
}

pub fn pullback_cochain<'a, C: Cochain3 + ?Sized>(
    phi: &'a C,
    lift: &'a GroupLift,
) -> Result<Pullback<'a, C>> {
    if phi.group() != lift.base() {
        return Err(Error::InvalidInput(format!(
            "cochain lives on {:?}, lift base is {:?}",
            phi.group().moduli(),
            lift.base().moduli()
        )));
    }
    Ok(Pullback { phi, lift })
}

impl<C: Cochain3 + ?Sized> Cochain3 for Pullback<'_, C> {
    fn group(&self) -> &FinAbGroup {
        self.lift.lifted()
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        let p = |e: &GroupElem| self.lift.project(e);
        self.phi.eval(&p(x), &p(y), &p(z))
    }
}

/// The resolving 2-cochain `J_a` on the cover:
///
/// `J(x, y) = sum_l a_l x_l ⌊y_l/𝕞_l⌋/𝕞_l
///          + sum_{s<t} (a_st x_t ⌊y_s/𝕞_s⌋/𝕞_t - u_st x_t y_s/𝕞_t^2)`.
///
/// The bilinear term cancels the high carry of `y_s + z_s` on the cover,
/// which the carry term alone leaves behind as `-(a_st 𝕞_s/𝕞_t) x_t c`.
/// `u_st` is the least residue with `(u 𝕞_s^2 - a_st 𝕞_s 𝕞_t)/𝕞_t^2`
/// integral; it is zero exactly when `𝕞_t | a_st 𝕞_s`.
#[derive(Clone, Debug)]
pub struct JCochain {
    spec: CocycleSpec,
    lift: GroupLift,
    correction: Vec<((usize, usize), u64)>,
}

fn carry_correction(a: u64, ms: u64, mt: u64) -> Option<u64> {
    let (a, ms, mt) = (a as u128, ms as u128, mt as u128);
    let target = (a * ms * mt) % (mt * mt);
    (0..mt * mt)
        .find(|&u| (u * ms * ms) % (mt * mt) == target)
        .map(|u| u as u64)
}

impl JCochain {
    pub fn new(spec: &CocycleSpec) -> Result<JCochain> {
        if !spec.is_abelian() {
            return Err(Error::Precondition(
                "J_a is only defined for abelian coefficients (all a_rst = 0)".into(),
            ));
        }
        let bm = spec.group().moduli();
        let mut correction = Vec::new();
        for (&(s, t), &a) in spec.pair_coefficients() {
            if a == 0 {
                continue;
            }
            let u = carry_correction(a, bm[s], bm[t]).ok_or_else(|| {
                Error::Precondition(format!("no carry correction for a_{}{}", s + 1, t + 1))
            })?;
            if u != 0 {
                correction.push(((s, t), u));
            }
        }
        Ok(JCochain {
            spec: spec.clone(),
            lift: lift_group(spec.group())?,
            correction,
        })
    }

    pub fn lift(&self) -> &GroupLift {
        &self.lift
    }

    fn eval_raw(&self, x: &[u64], y: &[u64]) -> Phase {
        let bm = self.spec.group().moduli();
        let e = self.spec.group().exponent().max(1);
        let den = e * e;
        let mut acc: i128 = 0;
        // (y - y')/m_l = floor(y/𝕞_l)/𝕞_l
        for (l, &a) in self.spec.a_l().iter().enumerate() {
            if a != 0 {
                let q = y[l] / bm[l];
                acc += a as i128 * x[l] as i128 * q as i128 * (den / bm[l]) as i128;
            }
        }
        for (&(s, t), &a) in self.spec.pair_coefficients() {
            if a != 0 {
                let q = y[s] / bm[s];
                acc += a as i128 * x[t] as i128 * q as i128 * (den / bm[t]) as i128;
            }
        }
        for &((s, t), u) in &self.correction {
            let mt2 = bm[t] * bm[t];
            let term = u as i128 * x[t] as i128 % mt2 as i128 * y[s] as i128 % mt2 as i128;
            acc -= term * (den / mt2) as i128;
        }
        Phase::from_ratio(acc, den as u128)
    }
}

impl Cochain2 for JCochain {
    fn group(&self) -> &FinAbGroup {
        self.lift.lifted()
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem) -> Phase {
        self.eval_raw(x.exps(), y.exps())
    }
}

/// `J_a(g, h)` for `g, h` in the cover.
pub fn j_eval(spec: &CocycleSpec, g: &GroupElem, h: &GroupElem) -> Result<Phase> {
    let j = JCochain::new(spec)?;
    j.lift.lifted().check(g)?;
    j.lift.lifted().check(h)?;
    Ok(j.eval(g, h))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub abelian: bool,
    pub resolved: bool,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<GroupElem>>,
}

/// Checks `∂J_a = π*Φ_a` at every triple of the cover.
pub fn verify_resolution(spec: &CocycleSpec, budget: &Budget) -> Result<ResolutionReport> {
    verify_resolution_with(spec, spec, budget)
}

/// Checks `∂J_b = π*Φ_a`, with `J` built from `j_spec` and `Φ` from
/// `phi_spec`.
pub fn verify_resolution_with(
    j_spec: &CocycleSpec,
    phi_spec: &CocycleSpec,
    budget: &Budget,
) -> Result<ResolutionReport> {
    if j_spec.group() != phi_spec.group() {
        return Err(Error::InvalidInput("specs live on different groups".into()));
    }
    if !phi_spec.is_abelian() {
        return Err(Error::Precondition(
            "resolution needs an abelian spec; use obstruction_check".into(),
        ));
    }
    let j = JCochain::new(j_spec)?;
    let lifted = j.lift.lifted().clone();
    let base = phi_spec.group();
    let n = lifted.order() as usize;
    budget.check("resolution check", n as u64, 3)?;

    let gt = GroupTable::new(&lifted);
    let proj: Vec<usize> = gt
        .elems
        .iter()
        .map(|x| base.index(&j.lift.project(x)))
        .collect();
    let phi_table = TableCochain3::tabulate(phi_spec, &Budget::unlimited())?;
    let nb = base.order() as usize;
    let mut values: Vec<Phase> = Vec::with_capacity(n * n + phi_table.values().len());
    for a in &gt.elems {
        for b in &gt.elems {
            values.push(j.eval(a, b));
        }
    }
    values.extend_from_slice(phi_table.values());
    let cd = CommonDenominator::new(&values).ok_or(Error::Overflow("phase denominators"))?;
    let d = cd.den();
    let jv = |a: usize, b: usize| cd.get(a * n + b);
    let pv = |a: usize, b: usize, c: usize| cd.get(n * n + (a * nb + b) * nb + c);

    let hit = (0..n).into_par_iter().find_map_first(|a| {
        for b in 0..n {
            let ab = gt.mul(a, b);
            for c in 0..n {
                let bc = gt.mul(b, c);
                let lhs = jv(b, c) + jv(a, bc) + 2 * d - jv(ab, c) - jv(a, b);
                if lhs % d != pv(proj[a], proj[b], proj[c]) {
                    return Some([a, b, c]);
                }
            }
        }
        None
    });
    Ok(ResolutionReport {
        abelian: true,
        resolved: hit.is_none(),
        witness: "J_a".into(),
        counterexample: hit.map(|h| h.iter().map(|&i| gt.elems[i].clone()).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub abelian: bool,
    /// True when the pullback to the cover is not a coboundary.
    pub confirmed: bool,
    /// `f_rst` of the pushed-down pullback, keyed `"r,s,t"` (1-based).
    pub f_rst: BTreeMap<String, Phase>,
}

/// Confirms that `π*Φ_a` is not a coboundary for non-abelian `a`.
pub fn obstruction_check(spec: &CocycleSpec) -> Result<ObstructionReport> {
    if spec.is_abelian() {
        return Err(Error::Precondition(
            "obstruction needs a non-abelian spec; use verify_resolution".into(),
        ));
    }
    let lift = lift_group(spec.group())?;
    let pb = pullback_cochain(spec, &lift)?;
    let k = pushdown(&pb);
    let confirmed = is_coboundary_unchecked(&pb)?.is_none();
    Ok(ObstructionReport {
        abelian: false,
        confirmed,
        f_rst: k
            .f_rst
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&t, &v)| (format_triple_key(t), v))
            .collect(),
    })
}
