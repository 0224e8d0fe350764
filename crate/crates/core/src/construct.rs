//! Generators of genuine examples: the standard construction from an
//! arbitrary diagram with a non-squarefree label order, and the Cartan
//! construction from a symmetrizable Cartan matrix.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, factorize, is_squarefree, lcm_all};
use crate::cocycle::{pairs, CocycleSpec, Pair};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::group::FinAbGroup;
use crate::phase::Phase;
use crate::rootdatum::{
    braiding_of_yd, build_yd_module, determine_a, verify_root_datum, Matrix, RootDatum,
    RootDatumReport,
};

/// `k + 1` for odd `k`, `k` otherwise.
pub fn upsilon(k: u32) -> u32 {
    if k % 2 == 1 {
        k + 1
    } else {
        k
    }
}

/// Rounds every prime exponent of `k` up to the next even number.
pub fn big_upsilon(k: u64) -> u64 {
    factorize(k)
        .into_iter()
        .map(|(p, e)| p.checked_pow(upsilon(e)).expect("Υ overflows u64"))
        .try_fold(1u64, |acc, v| acc.checked_mul(v))
        .expect("Υ overflows u64")
}

pub fn squarefree(k: u64) -> bool {
    is_squarefree(k)
}

/// Nonzero coefficients; these constructions are genuine exactly then.
pub fn genuine_flag(spec: &CocycleSpec) -> bool {
    !spec.is_zero()
}

/// Output of either construction.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub datum: RootDatum,
    pub verification: RootDatumReport,
    pub a: CocycleSpec,
    pub genuine: bool,
    /// The braiding read back from the built module equals the input.
    pub braiding_roundtrip: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn assemble(datum: RootDatum, notes: Vec<String>) -> Result<Construction> {
    let verification = verify_root_datum(&datum, false);
    if !verification.pass {
        return Err(Error::Precondition(format!(
            "constructed datum failed verification: {:?}",
            verification
                .checks
                .iter()
                .filter(|c| !c.pass)
                .collect::<Vec<_>>()
        )));
    }
    let a =
        determine_a(&datum)?.ok_or_else(|| Error::Precondition("no cocycle parameters".into()))?;
    let yd = build_yd_module(&datum)?;
    let braiding_roundtrip = braiding_of_yd(&yd) == *datum.diagram();
    if !braiding_roundtrip {
        return Err(Error::Precondition(
            "braiding does not reproduce the diagram".into(),
        ));
    }
    Ok(Construction {
        genuine: genuine_flag(&a),
        datum,
        verification,
        a,
        braiding_roundtrip,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StandardOutcome {
    Built {
        m: u64,
        /// The closed formula `Υ(|q|)` for even `|q|` on rank one, shown
        /// for comparison only.
        #[serde(skip_serializing_if = "Option::is_none")]
        table_formula_m: Option<u64>,
        #[serde(flatten)]
        construction: Box<Construction>,
    },
    Refused {
        reason: String,
    },
}

/// Builds `Z_m^θ` with `S = T = I` and `x_ij = q~_ij m^2` (upper triangle),
/// `x_ii = q_ii m^2`, where `m^2` is the least common multiple of `Υ` over
/// all label orders.
pub fn standard_construction(d: &Diagram) -> Result<StandardOutcome> {
    let n = d.rank();
    if n == 0 {
        return Err(Error::InvalidInput("empty diagram".into()));
    }
    if let Some(i) = d.q_ii().iter().position(Phase::is_zero) {
        return Err(Error::InvalidInput(format!(
            "vertex label {} is trivial",
            i + 1
        )));
    }
    let labels: Vec<Phase> = d.q_ii().iter().chain(d.edges().values()).copied().collect();
    if labels.iter().all(|q| squarefree(q.order())) {
        return Ok(StandardOutcome::Refused {
            reason: "every label order is squarefree: no nontrivial Φ possible".into(),
        });
    }
    let big_m = lcm_all(labels.iter().map(|q| big_upsilon(q.order())));
    let m = exact_sqrt(big_m).expect("Υ values are squares");
    let table_formula_m =
        (n == 1 && d.vertex(0).order() % 2 == 0).then(|| big_upsilon(d.vertex(0).order()));
    let num = |q: Phase| q.numerator_over(big_m).expect("label order divides m^2") as i64;
    let mut x = vec![vec![0i64; n]; n];
    for i in 0..n {
        x[i][i] = num(d.vertex(i));
        for j in i + 1..n {
            x[i][j] = num(d.edge(i, j));
        }
    }
    let s: Matrix = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let base = FinAbGroup::new(vec![m; n])?;
    let datum = RootDatum::new(base, d.clone(), s, x)?;
    let c = assemble(datum, vec![])?;
    Ok(StandardOutcome::Built {
        m,
        table_formula_m,
        construction: Box::new(c),
    })
}

/// A Cartan matrix with optional per-component orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub cartan_matrix: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_orders: Option<Vec<u64>>,
}

fn check_cartan(c: &Matrix) -> Result<usize> {
    let n = c.len();
    if n == 0 || c.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidCartan(
            "matrix must be square and nonempty".into(),
        ));
    }
    for i in 0..n {
        if c[i][i] != 2 {
            return Err(Error::InvalidCartan(format!("c_{0}{0} must be 2", i + 1)));
        }
        for j in 0..n {
            if i != j && c[i][j] > 0 {
                return Err(Error::InvalidCartan(format!(
                    "c_{}{} is positive",
                    i + 1,
                    j + 1
                )));
            }
            if (c[i][j] == 0) != (c[j][i] == 0) {
                return Err(Error::InvalidCartan(format!(
                    "c_{}{} and c_{}{} must vanish together",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(n)
}

/// Connected components under `c_ij != 0`, ordered by smallest member.
pub fn cartan_components(c: &Matrix) -> Result<Vec<Vec<usize>>> {
    let n = check_cartan(c)?;
    let edges: Vec<(Pair, Phase)> = pairs(n)
        .into_iter()
        .filter(|&(i, j)| c[i][j] != 0)
        .map(|p| (p, Phase::new(1, 2)))
        .collect();
    Ok(Diagram::from_constants(vec![Phase::ZERO; n], &edges)?.components())
}

/// Minimal positive integers with `d_i c_ij = d_j c_ji`.
pub fn symmetrizer(c: &Matrix) -> Result<Vec<u64>> {
    let n = check_cartan(c)?;
    let mut d = vec![0u64; n];
    for comp in cartan_components(c)? {
        // propagate rationals num/den along a spanning tree
        let mut val: Vec<Option<(u64, u64)>> = vec![None; n];
        val[comp[0]] = Some((1, 1));
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            let (p, q) = val[i].expect("visited");
            for &j in &comp {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                // d_j = d_i c_ij / c_ji
                let (np, nq) = (p * c[i][j].unsigned_abs(), q * c[j][i].unsigned_abs());
                let g = np.gcd(&nq);
                let v = (np / g, nq / g);
                match val[j] {
                    None => {
                        val[j] = Some(v);
                        stack.push(j);
                    }
                    Some(w) if w != v => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()))
                    }
                    Some(_) => {}
                }
            }
        }
        let l = lcm_all(comp.iter().map(|&i| val[i].expect("connected").1));
        let g = comp
            .iter()
            .map(|&i| {
                let (p, q) = val[i].expect("connected");
                p * (l / q)
            })
            .fold(0u64, |a, b| a.gcd(&b));
        for &i in &comp {
            let (p, q) = val[i].expect("connected");
            d[i] = p * (l / q) / g;
        }
    }
    Ok(d)
}

fn is_g2(c: &Matrix, comp: &[usize]) -> bool {
    if let [i, j] = *comp {
        let mut v = [c[i][j], c[j][i]];
        v.sort_unstable();
        v == [-3, -1]
    } else {
        false
    }
}

/// Smallest odd `k > 2` per component, each a multiple of the previous,
/// avoiding multiples of 3 while a component of type G_2 is still ahead.
fn default_orders(g2: &[bool]) -> Vec<u64> {
    let mut prev = 1u64;
    let mut out = Vec::with_capacity(g2.len());
    for k in 0..g2.len() {
        let avoid3 = g2[k..].iter().any(|&b| b);
        let v = (1..)
            .map(|t| prev * t)
            .find(|&v| v > 2 && v % 2 == 1 && !(avoid3 && v % 3 == 0))
            .expect("some multiple qualifies");
        out.push(v);
        prev = v;
    }
    out
}

/// Base `Z_{𝕞_1} x ... x Z_{𝕞_θ}`, `S = T = I`, `x_ii = d_i`,
/// `x_ij = d_i c_ij mod 𝕞_i^2` for `i < j`, so that `q_ii = d_i/𝕞_i^2` and
/// `q~_ij = q_ii^{c_ij}`.
pub fn cartan_construction(input: &CartanInput) -> Result<Construction> {
    let c = &input.cartan_matrix;
    let n = check_cartan(c)?;
    let d = symmetrizer(c)?;
    let comps = cartan_components(c)?;
    let g2: Vec<bool> = comps.iter().map(|comp| is_g2(c, comp)).collect();
    let orders = match &input.component_orders {
        Some(o) => {
            if o.len() != comps.len() {
                return Err(Error::InvalidInput(format!(
                    "{} component orders given for {} components",
                    o.len(),
                    comps.len()
                )));
            }
            o.clone()
        }
        None => default_orders(&g2),
    };
    for (k, &v) in orders.iter().enumerate() {
        if v <= 2 || v % 2 == 0 {
            return Err(Error::Precondition(format!(
                "component order {v} must be odd and > 2"
            )));
        }
        if k > 0 && v % orders[k - 1] != 0 {
            return Err(Error::Precondition(format!(
                "component order {} must be divisible by {}",
                v,
                orders[k - 1]
            )));
        }
        if g2[k] && v % 3 == 0 {
            return Err(Error::Precondition(format!(
                "component {} has type G_2 and needs an order prime to 3, got {v}",
                k + 1
            )));
        }
    }
    let mut bm = vec![0u64; n];
    for (comp, &v) in comps.iter().zip(&orders) {
        for &i in comp {
            bm[i] = v;
        }
    }
    if bm.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(Error::Precondition(
            "vertex orders are not divisibility-ordered; number components contiguously".into(),
        ));
    }
    let mut x = vec![vec![0i64; n]; n];
    let mut q_tilde = Vec::new();
    let q_ii: Vec<Phase> = (0..n)
        .map(|i| Phase::from_ratio(d[i] as i128, (bm[i] * bm[i]) as u128))
        .collect();
    for i in 0..n {
        let mi = (bm[i] * bm[i]) as i64;
        x[i][i] = (d[i] as i64).rem_euclid(mi);
        for j in i + 1..n {
            x[i][j] = (d[i] as i64 * c[i][j]).rem_euclid(mi);
            q_tilde.push(((i, j), q_ii[i].scale(c[i][j])));
        }
    }
    let diagram = Diagram::from_constants(q_ii, &q_tilde)?;
    let s: Matrix = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let datum = RootDatum::new(FinAbGroup::new(bm)?, diagram, s, x)?;
    let mut notes = vec![format!(
        "symmetrizer d = {d:?}, component orders = {orders:?}"
    )];
    if g2.iter().any(|&b| b) {
        notes.push("G_2 components require component orders prime to 3".into());
    }
    let out = assemble(datum, notes)?;
    debug_assert!(out
        .a
        .a_l()
        .iter()
        .zip(out.datum.base().moduli())
        .zip(&d)
        .all(|((&a, &m), &di)| a == di % m));
    Ok(out)
}
