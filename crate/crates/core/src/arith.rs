//! Small integer helpers.

use num_integer::Integer;

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

pub fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1, |a, b| a.lcm(&b))
}

pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    a.gcd(&b).gcd(&c)
}

/// Inverse of `a` mod `m`, when it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Chinese remaindering for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, q) in residues {
        let q = q as i128;
        let inv = inv_mod(m, q).expect("crt moduli must be coprime");
        let t = ((r as i128 - x).rem_euclid(q) * inv).rem_euclid(q);
        x += m * t;
        m *= q;
    }
    x as u64
}
