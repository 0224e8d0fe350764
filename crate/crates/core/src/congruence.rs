//! Linear congruence systems over the integers.
//!
//! A system `sum_j a_ij x_j = b_i (mod p_i)` is lifted to the integer system
//! `A x + diag(p) z = b`, put into column echelon form by unimodular column
//! operations, and solved exactly with arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Mat = Vec<Vec<BigInt>>;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Column operation `col[k] -= q * col[p]` on a row-major matrix.
fn col_axpy(m: &mut Mat, k: usize, p: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[p] * q;
        row[k] -= t;
    }
}

fn col_swap(m: &mut Mat, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Column echelon form `B V = H`. Returns the pivot `(row, col)` pairs;
/// pivot columns are `0..rank` in order.
fn column_echelon(b: &mut Mat, v: &mut Mat) -> Vec<(usize, usize)> {
    let rows = b.len();
    let cols = v.len();
    let mut p = 0;
    let mut pivots = Vec::new();
    for i in 0..rows {
        if p == cols {
            break;
        }
        loop {
            let best = (p..cols)
                .filter(|&k| !b[i][k].is_zero())
                .min_by(|&x, &y| b[i][x].abs().cmp(&b[i][y].abs()));
            let Some(k) = best else { break };
            col_swap(b, k, p);
            col_swap(v, k, p);
            let mut done = true;
            for k in p + 1..cols {
                if !b[i][k].is_zero() {
                    let q = b[i][k].div_floor(&b[i][p]);
                    col_axpy(b, k, p, &q);
                    col_axpy(v, k, p, &q);
                    if !b[i][k].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !b[i][p].is_zero() {
            pivots.push((i, p));
            p += 1;
        }
    }
    pivots
}

/// Row-style Hermite normal form of the lattice spanned by `gens` in `Z^n`:
/// one basis vector per pivot column, pivots positive, entries above each
/// pivot reduced into `[0, pivot)`. Returns `(pivot column, vector)` pairs.
pub fn lattice_hnf(gens: &[Vec<BigInt>], n: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut work: Vec<Vec<BigInt>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for j in 0..n {
        loop {
            let best = (0..work.len())
                .filter(|&r| !work[r][j].is_zero())
                .min_by(|&x, &y| work[x][j].abs().cmp(&work[y][j].abs()));
            let Some(r) = best else { break };
            let pivot = work[r].clone();
            let mut done = true;
            for (s, row) in work.iter_mut().enumerate() {
                if s != r && !row[j].is_zero() {
                    let q = row[j].div_floor(&pivot[j]);
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                    if !row[j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                let mut row = work.swap_remove(r);
                if row[j].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                basis.push((j, row));
                break;
            }
        }
        work.retain(|g| g.iter().any(|x| !x.is_zero()));
    }
    // reduce entries above pivots
    for b in (0..basis.len()).rev() {
        let (j, piv) = (basis[b].0, basis[b].1.clone());
        for a in 0..b {
            let q = basis[a].1[j].div_floor(&piv[j]);
            if !q.is_zero() {
                for (x, y) in basis[a].1.iter_mut().zip(&piv) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

/// Solves `sum_j rows[i][j] * x_j = rhs[i] (mod moduli[i])`.
///
/// Returns the canonical solution: the unique representative of the
/// solution coset whose coordinates, taken in order, are each the least
/// nonnegative value compatible with the earlier ones. In particular a
/// single-variable system yields its minimal nonnegative solution.
pub fn solve_congruence_system(
    rows: &[Vec<i64>],
    rhs: &[i64],
    moduli: &[u64],
) -> Result<Option<Vec<i64>>> {
    let r = rows.len();
    if rhs.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: rhs.len(),
        });
    }
    if moduli.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: moduli.len(),
        });
    }
    if moduli.iter().any(|&p| p == 0) {
        return Err(Error::InvalidInput(
            "congruence modulus must be >= 1".into(),
        ));
    }
    let n = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let cols = n + r;
    let mut b: Mat = (0..r)
        .map(|i| {
            let mut row: Vec<BigInt> = rows[i].iter().map(|&a| big(a)).collect();
            row.extend((0..r).map(|k| {
                if k == i {
                    BigInt::from(moduli[i])
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let mut v: Mat = (0..cols)
        .map(|i| (0..cols).map(|k| BigInt::from(u8::from(i == k))).collect())
        .collect();
    let pivots = column_echelon(&mut b, &mut v);
    let rank = pivots.len();

    let mut u = vec![BigInt::zero(); cols];
    let mut next = 0;
    for i in 0..r {
        let s: BigInt = (0..next).map(|k| &b[i][k] * &u[k]).sum();
        let target = big(rhs[i]) - s;
        if next < rank && pivots[next].0 == i {
            let (q, rem) = target.div_rem(&b[i][next]);
            if !rem.is_zero() {
                return Ok(None);
            }
            u[next] = q;
            next += 1;
        } else if !target.is_zero() {
            return Ok(None);
        }
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut x: Vec<BigInt> = (0..n)
        .map(|j| (0..cols).map(|k| &v[j][k] * &u[k]).sum())
        .collect();
    let kernel: Vec<Vec<BigInt>> = (rank..cols)
        .map(|k| (0..n).map(|j| v[j][k].clone()).collect())
        .collect();
    let basis = lattice_hnf(&kernel, n);
    debug_assert_eq!(basis.len(), n, "kernel lattice has full rank");
    for (j, vec) in &basis {
        let q = x[*j].div_floor(&vec[*j]);
        if !q.is_zero() {
            for (a, b) in x.iter_mut().zip(vec) {
                *a -= &q * b;
            }
        }
    }
    x.iter()
        .map(|a| a.to_i64().ok_or(Error::Overflow("congruence solution")))
        .collect::<Result<Vec<i64>>>()
        .map(Some)
}

/// Index `[Z^n : L]` of a full-rank lattice given in Hermite form.
pub fn hnf_index(basis: &[(usize, Vec<BigInt>)]) -> BigInt {
    basis.iter().fold(BigInt::one(), |acc, (j, v)| acc * &v[*j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        assert_eq!(
            solve_congruence_system(&[vec![2]], &[0], &[4]).unwrap(),
            Some(vec![0])
        );
        assert_eq!(
            solve_congruence_system(&[vec![2]], &[1], &[4]).unwrap(),
            None
        );
        assert_eq!(
            solve_congruence_system(&[vec![1], vec![3]], &[1, 0], &[2, 9]).unwrap(),
            Some(vec![3])
        );
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            solve_congruence_system(&[vec![1, 2]], &[0, 0], &[4]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_congruence_system(&[vec![1, 2], vec![1]], &[0, 0], &[4, 4]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let gens = vec![vec![big(2)], vec![big(4)]];
        let h = lattice_hnf(&gens, 1);
        assert_eq!(h, vec![(0, vec![big(2)])]);
        assert_eq!(hnf_index(&h), big(2));
    }

    /// Brute-force oracle: scan the box `prod [0, M)` in lexicographic order.
    fn brute(rows: &[Vec<i64>], rhs: &[i64], moduli: &[u64]) -> Option<Vec<i64>> {
        let n = rows[0].len();
        let m: i64 = moduli.iter().fold(1u64, |a, &b| num_integer::lcm(a, b)) as i64;
        let total = (m as usize).pow(n as u32);
        (0..total)
            .map(|mut idx| {
                let mut x = vec![0i64; n];
                for j in (0..n).rev() {
                    x[j] = (idx % m as usize) as i64;
                    idx /= m as usize;
                }
                x
            })
            .find(|x| {
                rows.iter().zip(rhs).zip(moduli).all(|((row, &b), &p)| {
                    let s: i64 = row.iter().zip(x).map(|(a, y)| a * y).sum();
                    (s - b).rem_euclid(p as i64) == 0
                })
            })
    }

    fn system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, Vec<u64>)> {
        (1usize..3, 1usize..4).prop_flat_map(|(n, r)| {
            (
                prop::collection::vec(prop::collection::vec(-8i64..9, n), r),
                prop::collection::vec(-8i64..9, r),
                prop::collection::vec(1u64..7, r),
            )
        })
    }

    proptest! {
        #[test]
        fn agrees_with_lexicographic_scan((rows, rhs, moduli) in system()) {
            let got = solve_congruence_system(&rows, &rhs, &moduli).unwrap();
            let want = brute(&rows, &rhs, &moduli);
            prop_assert_eq!(got, want);
        }
    }
}
