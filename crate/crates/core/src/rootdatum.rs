//! Root data over `𝔾 = Z_{𝕞_1} x ... x Z_{𝕞_n}` and the twisted
//! Yetter-Drinfeld modules they define.
//!
//! A datum is a diagram of rank `m` with integer matrices `S` (`m x n`) and
//! `X` (`n x m`). Entries are read against the lifted moduli
//! `m_k = 𝕞_k^2`: `s_jk < m_k`, `x_ij < m_i`, and `T` (`n x m`) solves
//! `(T S)_{ij} = δ_ij (mod m_j)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cocycle::{format_pair_key, pairs, Cochain2, CocycleSpec, Pair};
use crate::congruence::{hnf_index, lattice_hnf, solve_congruence_system};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::phase::Phase;
use crate::resolution::{lift_group, GroupLift, JCochain};

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    base: FinAbGroup,
    lift: GroupLift,
    diagram: Diagram,
    s: Matrix,
    x: Matrix,
    t: Option<Matrix>,
}

fn check_shape(name: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows {
        return Err(Error::InvalidInput(format!(
            "{name} must have {rows} rows, got {}",
            m.len()
        )));
    }
    if let Some(r) = m.iter().find(|r| r.len() != cols) {
        return Err(Error::InvalidInput(format!(
            "{name} rows must have {cols} entries, got {}",
            r.len()
        )));
    }
    Ok(())
}

impl RootDatum {
    /// Checks shapes and solves for `T`; all other conditions are left to
    /// [`verify_root_datum`].
    pub fn new(base: FinAbGroup, diagram: Diagram, s: Matrix, x: Matrix) -> Result<RootDatum> {
        let n = base.rank();
        let m = diagram.rank();
        check_shape("S", &s, m, n)?;
        check_shape("X", &x, n, m)?;
        let lift = lift_group(&base)?;
        let t = solve_t(&s, &base)?;
        Ok(RootDatum {
            base,
            lift,
            diagram,
            s,
            x,
            t,
        })
    }

    /// Replaces the cached `T` by another solution of `T S = I`.
    pub fn with_t(mut self, t: Matrix) -> Result<RootDatum> {
        check_shape("T", &t, self.base.rank(), self.diagram.rank())?;
        if !ts_is_identity(&t, &self.s, self.lift.lifted().moduli()) {
            return Err(Error::InvalidInput("T S is not the identity".into()));
        }
        self.t = Some(t);
        Ok(self)
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn lift(&self) -> &GroupLift {
        &self.lift
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn t(&self) -> Option<&Matrix> {
        self.t.as_ref()
    }

    /// Lifted moduli `m_k = 𝕞_k^2`.
    pub fn lifted_moduli(&self) -> &[u64] {
        self.lift.lifted().moduli()
    }

    /// `q_ii = sum_k s_ik x_ki / m_k`.
    pub fn vertex_constant(&self, i: usize) -> Phase {
        let mk = self.lifted_moduli();
        (0..self.base.rank())
            .map(|k| Phase::from_ratio(self.s[i][k] as i128 * self.x[k][i] as i128, mk[k] as u128))
            .sum()
    }

    /// `q~_ij = sum_k (s_ik x_kj + s_jk x_ki) / m_k`.
    pub fn edge_constant(&self, i: usize, j: usize) -> Phase {
        let mk = self.lifted_moduli();
        (0..self.base.rank())
            .map(|k| {
                let v = self.s[i][k] as i128 * self.x[k][j] as i128
                    + self.s[j][k] as i128 * self.x[k][i] as i128;
                Phase::from_ratio(v, mk[k] as u128)
            })
            .sum()
    }
}

fn ts_is_identity(t: &Matrix, s: &Matrix, moduli: &[u64]) -> bool {
    let n = moduli.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let v: i128 = (0..s.len())
                .map(|l| t[i][l] as i128 * s[l][j] as i128)
                .sum();
            (v - i128::from(i == j)).rem_euclid(moduli[j] as i128) == 0
        })
    })
}

/// Solves `(T S)_{ij} = δ_ij (mod m_j)` row by row; `None` when the
/// degrees do not generate.
pub fn solve_t(s: &Matrix, base: &FinAbGroup) -> Result<Option<Matrix>> {
    let n = base.rank();
    let m = s.len();
    check_shape("S", s, m, n)?;
    let lifted = lift_group(base)?;
    let mk = lifted.lifted().moduli();
    // row j of the system: sum_l t_l s_lj = δ_ij (mod m_j)
    let rows: Vec<Vec<i64>> = (0..n).map(|j| (0..m).map(|l| s[l][j]).collect()).collect();
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let rhs: Vec<i64> = (0..n).map(|j| i64::from(i == j)).collect();
        match solve_congruence_system(&rows, &rhs, mk)? {
            Some(row) => t.push(row),
            None => return Ok(None),
        }
    }
    Ok(Some(t))
}

/// A failed lower-triangular congruence `sum_j x_ij t_lj = 0 (mod 𝕞_i)`,
/// indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerFailure {
    pub i: usize,
    pub l: usize,
    pub residue: i64,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub lower_pass: bool,
    pub lower_failures: Vec<LowerFailure>,
    /// `a_i = sum_j x_ij t_ij mod 𝕞_i`.
    pub forced_a_l: Vec<u64>,
    /// `a_il = (𝕞_l/𝕞_i) sum_j x_ij t_lj mod 𝕞_l` for `i < l`, keyed `"i,l"`.
    pub forced_a_il: BTreeMap<String, u64>,
    /// The undivided form `(sum_j x_ij t_lj) 𝕞_l = 𝕞_i a_il (mod 𝕞_i 𝕞_l)`
    /// holds for the forced values.
    pub raw_form_consistent: bool,
}

fn row_dot(x: &[i64], t: &[i64]) -> i128 {
    x.iter().zip(t).map(|(&a, &b)| a as i128 * b as i128).sum()
}

/// Evaluates the three congruence families. Needs invariant-factor form.
pub fn check_congruences(x: &Matrix, t: &Matrix, base: &FinAbGroup) -> Result<CongruenceReport> {
    if !base.is_invariant_factor() {
        return Err(Error::NotInvariantFactor(base.moduli().to_vec()));
    }
    let n = base.rank();
    let m = x.first().map_or(0, Vec::len);
    check_shape("X", x, n, m)?;
    check_shape("T", t, n, m)?;
    let bm = base.moduli();
    let mut lower_failures = Vec::new();
    for i in 0..n {
        for l in 0..i {
            let r = row_dot(&x[i], &t[l]).rem_euclid(bm[i] as i128) as i64;
            if r != 0 {
                lower_failures.push(LowerFailure {
                    i: i + 1,
                    l: l + 1,
                    residue: r,
                    modulus: bm[i],
                });
            }
        }
    }
    let forced_a_l: Vec<u64> = (0..n)
        .map(|i| row_dot(&x[i], &t[i]).rem_euclid(bm[i] as i128) as u64)
        .collect();
    let mut a_il: BTreeMap<Pair, u64> = BTreeMap::new();
    let mut raw_ok = true;
    for (i, l) in pairs(n) {
        let sum = row_dot(&x[i], &t[l]);
        let ratio = (bm[l] / bm[i]) as i128;
        let a = (ratio * sum).rem_euclid(bm[l] as i128) as u64;
        let md = bm[i] as i128 * bm[l] as i128;
        raw_ok &= (sum * bm[l] as i128 - bm[i] as i128 * a as i128).rem_euclid(md) == 0;
        a_il.insert((i, l), a);
    }
    Ok(CongruenceReport {
        lower_pass: lower_failures.is_empty(),
        lower_failures,
        forced_a_l,
        forced_a_il: a_il
            .iter()
            .map(|(&p, &v)| (format_pair_key(p), v))
            .collect(),
        raw_form_consistent: raw_ok,
    })
}

/// The abelian coefficients forced by `(S, X, T)`; `None` exactly when the
/// lower-triangular congruences fail.
pub fn determine_a(d: &RootDatum) -> Result<Option<CocycleSpec>> {
    let t = d
        .t()
        .ok_or_else(|| Error::Precondition("S has no left inverse T".into()))?;
    let rep = check_congruences(&d.x, t, &d.base)?;
    if !rep.lower_pass {
        return Ok(None);
    }
    let n = d.base.rank();
    let bm = d.base.moduli();
    let a_ij: Vec<(Pair, u64)> = pairs(n)
        .into_iter()
        .map(|(i, l)| {
            let sum = row_dot(&d.x[i], &t[l]);
            let ratio = (bm[l] / bm[i]) as i128;
            ((i, l), (ratio * sum).rem_euclid(bm[l] as i128) as u64)
        })
        .collect();
    CocycleSpec::new_unreduced(d.base.clone(), rep.forced_a_l, &a_ij, &[]).map(Some)
}

/// Degrees, coefficients and diagonal action of the module `V_𝔇`.
#[derive(Clone, Debug)]
pub struct YDModuleData {
    spec: CocycleSpec,
    j: JCochain,
    x: Matrix,
    degrees: Vec<GroupElem>,
    action: Vec<Vec<Phase>>,
}

impl YDModuleData {
    pub fn group(&self) -> &FinAbGroup {
        self.j.lift().lifted()
    }

    pub fn spec(&self) -> &CocycleSpec {
        &self.spec
    }

    pub fn degrees(&self) -> &[GroupElem] {
        &self.degrees
    }

    /// `p_ij` with `g_i ▶ X_j = p_ij X_j`.
    pub fn action(&self) -> &[Vec<Phase>] {
        &self.action
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Action of an arbitrary element `y` on `X_j`. The action is projective
    /// for `Φ~_{h_j}`: `A(e f) = A(e) + A(f) - Φ~_{h_j}(e, f)`.
    pub fn act(&self, y: &GroupElem, j: usize) -> Phase {
        let mk = self.group().moduli();
        let chi: Phase = (0..mk.len())
            .map(|k| Phase::from_ratio(y.exp(k) as i128 * self.x[k][j] as i128, mk[k] as u128))
            .sum();
        let h = &self.degrees[j];
        chi + self.j.eval(y, h) - self.j.eval(h, y)
    }

    /// Pairs `(i, j)` (0-based) where `g_i^{𝕞_i}` does not act trivially on
    /// `X_j`, with the offending phase.
    pub fn descent_failures(&self) -> Vec<(usize, usize, Phase)> {
        let lifted = self.group();
        let base = self.spec.group();
        let mut out = Vec::new();
        for i in 0..lifted.rank() {
            let g = lifted.pow(&lifted.generator(i), base.modulus(i) as i64);
            for j in 0..self.rank() {
                let v = self.act(&g, j);
                if !v.is_zero() {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn descends(&self) -> bool {
        self.descent_failures().is_empty()
    }

    pub fn support_group(&self) -> SupportGroup {
        support_group(self.group(), &self.degrees)
    }
}

impl Serialize for YDModuleData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            moduli: &'a [u64],
            a: &'a CocycleSpec,
            degrees: &'a [GroupElem],
            action: &'a [Vec<Phase>],
        }
        Raw {
            moduli: self.group().moduli(),
            a: &self.spec,
            degrees: &self.degrees,
            action: &self.action,
        }
        .serialize(s)
    }
}

/// Builds `V_𝔇`: degrees `h_j = prod_k g_k^{s_jk}` and
/// `p_ij = x_ij/m_i + J(g_i, h_j) - J(h_j, g_i)`.
pub fn build_yd_module(d: &RootDatum) -> Result<YDModuleData> {
    let spec = determine_a(d)?.ok_or_else(|| {
        Error::Precondition("lower-triangular congruences fail; no cocycle parameters".into())
    })?;
    let j = JCochain::new(&spec)?;
    let lifted = j.lift().lifted().clone();
    let degrees =
        d.s.iter()
            .map(|row| lifted.elem(row))
            .collect::<Result<Vec<_>>>()?;
    let mut yd = YDModuleData {
        spec,
        j,
        x: d.x.clone(),
        degrees,
        action: Vec::new(),
    };
    yd.action = (0..lifted.rank())
        .map(|i| {
            let g = lifted.generator(i);
            (0..d.diagram.rank()).map(|jj| yd.act(&g, jj)).collect()
        })
        .collect();
    Ok(yd)
}

/// `q_ij = h_i ▶ X_j`; the diagram has `q_ii` and `q~_ij = q_ij + q_ji`.
pub fn braiding_of_yd(v: &YDModuleData) -> Diagram {
    let m = v.rank();
    let q = |i: usize, j: usize| v.act(&v.degrees[i], j);
    let q_ii = (0..m).map(|i| q(i, i)).collect();
    let edges: Vec<(Pair, Phase)> = pairs(m)
        .into_iter()
        .map(|(i, j)| ((i, j), q(i, j) + q(j, i)))
        .collect();
    Diagram::from_constants(q_ii, &edges).expect("pairs are ordered")
}

/// The subgroup generated by a set of elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportGroup {
    /// Hermite-form generators, exponents reduced mod the moduli.
    pub generators: Vec<GroupElem>,
    pub order: u64,
    pub index: u64,
    pub is_full: bool,
}

pub fn support_group(group: &FinAbGroup, elems: &[GroupElem]) -> SupportGroup {
    let n = group.rank();
    let mut gens: Vec<Vec<BigInt>> = elems
        .iter()
        .map(|e| e.exps().iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for k in 0..n {
        let mut v = vec![BigInt::from(0); n];
        v[k] = BigInt::from(group.modulus(k));
        gens.push(v);
    }
    let basis = lattice_hnf(&gens, n);
    let index = u64::try_from(hnf_index(&basis)).expect("index divides the group order");
    let generators = basis
        .iter()
        .map(|(_, v)| {
            let ex: Vec<i64> = v
                .iter()
                .map(|x| i64::try_from(x).expect("small entries"))
                .collect();
            group.elem(&ex).expect("rank matches")
        })
        .filter(|e| *e != group.identity())
        .collect();
    SupportGroup {
        generators,
        order: group.order() / index,
        index,
        is_full: index == 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str, failures: Vec<String>) -> Check {
        Check {
            name: name.into(),
            pass: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootDatumReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub conventions: String,
}

impl RootDatumReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CONVENTIONS: &str = "entries bounded by lifted moduli m_k = base_k^2 by column: \
0 <= s_jk < m_k, 0 <= x_ij < m_i; (T S)_ij = δ_ij mod m_j";

/// Checks every root-datum condition and reports each one separately.
pub fn verify_root_datum(d: &RootDatum, require_connected: bool) -> RootDatumReport {
    let mk = d.lifted_moduli().to_vec();
    let n = d.base.rank();
    let m = d.diagram.rank();
    let mut checks = Vec::new();

    let inv = if d.base.is_invariant_factor() {
        vec![]
    } else {
        vec![format!(
            "moduli {:?} are not divisibility-ordered",
            d.base.moduli()
        )]
    };
    checks.push(Check::new("invariant_factor_base", inv));

    let mut bounds = Vec::new();
    for (j, row) in d.s.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if v < 0 || v as u64 >= mk[k] {
                bounds.push(format!(
                    "s[{},{}] = {v} not in [0, {})",
                    j + 1,
                    k + 1,
                    mk[k]
                ));
            }
        }
    }
    for (i, row) in d.x.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < 0 || v as u64 >= mk[i] {
                bounds.push(format!(
                    "x[{},{}] = {v} not in [0, {})",
                    i + 1,
                    j + 1,
                    mk[i]
                ));
            }
        }
    }
    checks.push(Check::new("entry_bounds", bounds));

    let t_fail = match d.t() {
        Some(t) if ts_is_identity(t, &d.s, &mk) => vec![],
        Some(_) => vec!["cached T does not invert S".into()],
        None => vec!["no T with T S = I exists".into()],
    };
    checks.push(Check::new("t_inverts_s", t_fail));

    let vertex: Vec<String> = (0..m)
        .filter(|&i| d.vertex_constant(i) != d.diagram.vertex(i))
        .map(|i| {
            format!(
                "({},{}): diagram {} but S,X give {}",
                i + 1,
                i + 1,
                d.diagram.vertex(i),
                d.vertex_constant(i)
            )
        })
        .collect();
    checks.push(Check::new("vertex_constants", vertex));

    let edge: Vec<String> = pairs(m)
        .into_iter()
        .filter(|&(i, j)| d.edge_constant(i, j) != d.diagram.edge(i, j))
        .map(|(i, j)| {
            format!(
                "({},{}): diagram {} but S,X give {}",
                i + 1,
                j + 1,
                d.diagram.edge(i, j),
                d.edge_constant(i, j)
            )
        })
        .collect();
    checks.push(Check::new("edge_constants", edge));

    let lower = match (d.t(), d.base.is_invariant_factor()) {
        (Some(t), true) => match check_congruences(&d.x, t, &d.base) {
            Ok(r) => r
                .lower_failures
                .iter()
                .map(|f| {
                    format!(
                        "i={}, l={}: sum_j x_ij t_lj = {} mod {}",
                        f.i, f.l, f.residue, f.modulus
                    )
                })
                .collect(),
            Err(e) => vec![e.to_string()],
        },
        (None, _) => vec!["needs T".into()],
        (_, false) => vec!["needs invariant-factor form".into()],
    };
    checks.push(Check::new("lower_congruences", lower));

    let descent = match build_yd_module(d) {
        Ok(v) => v
            .descent_failures()
            .iter()
            .map(|(i, j, p)| {
                format!(
                    "g_{}^{} acts on X_{} by {p}",
                    i + 1,
                    d.base.modulus(*i),
                    j + 1
                )
            })
            .collect(),
        Err(e) => vec![e.to_string()],
    };
    checks.push(Check::new("descent", descent));

    if require_connected {
        let c = d.diagram.components().len();
        let fails = if c <= 1 {
            vec![]
        } else {
            vec![format!("diagram has {c} components")]
        };
        checks.push(Check::new("connected", fails));
    }
    let _ = n;
    RootDatumReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
        conventions: CONVENTIONS.into(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    moduli: Vec<u64>,
    diagram: Diagram,
    #[serde(rename = "S")]
    s: Matrix,
    #[serde(rename = "X")]
    x: Matrix,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    t: Option<Matrix>,
}

impl Serialize for RootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawDatum {
            schema: None,
            moduli: self.base.moduli().to_vec(),
            diagram: self.diagram.clone(),
            s: self.s.clone(),
            x: self.x.clone(),
            t: self.t.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDatum::deserialize(d)?;
        let build = || -> Result<RootDatum> {
            if let Some(v) = raw.schema {
                if v != 1 {
                    return Err(Error::InvalidInput(format!("unsupported schema {v}")));
                }
            }
            let base = FinAbGroup::new(raw.moduli)?;
            let d = RootDatum::new(base, raw.diagram, raw.s, raw.x)?;
            match raw.t {
                Some(t) => d.with_t(t),
                None => Ok(d),
            }
        };
        build().map_err(serde::de::Error::custom)
    }
}
