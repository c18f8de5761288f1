//! Seeded generators and brute-force oracles for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, RealMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let a = random_complex(n, n, seed);
    (&a + &a.adjoint()).scale_re(0.5)
}

pub fn random_real(rows: usize, cols: usize, seed: u64) -> RealMatrix {
    let mut r = rng(seed);
    RealMatrix::from_fn(rows, cols, |_, _| r.gen_range(-1.0..1.0))
}

/// Permutation expansion of the determinant.
pub fn leibniz_det(m: &RealMatrix) -> f64 {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * (0..n).map(|i| m[(i, p[i])]).product::<f64>();
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
