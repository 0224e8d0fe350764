//! Seeded random inputs for randomized checks.

use rand::Rng;

use crate::cocycle::TableCochain2;
use crate::group::FinAbGroup;
use crate::phase::Phase;

/// A random normalized 2-cochain with values in `(1/den) Z / Z`.
pub fn random_cochain2<R: Rng>(group: &FinAbGroup, den: u64, rng: &mut R) -> TableCochain2 {
    let n = group.order() as usize;
    let values = (0..n * n)
        .map(|k| {
            let (a, b) = (k / n, k % n);
            if a == 0 || b == 0 {
                Phase::ZERO
            } else {
                Phase::new(rng.gen_range(0..den) as i64, den)
            }
        })
        .collect();
    TableCochain2::new(group.clone(), values).expect("table has |G|^2 entries")
}
