#![allow(dead_code)]

use drgkit::array::IntersectionArray;
use rand::Rng;

/// A random array with b nonincreasing, b1 < k, c nondecreasing from 1 and
/// every a_i >= 0. Nothing else (integrality, spectrum) is guaranteed.
pub fn random_array<R: Rng>(rng: &mut R, d: usize, k: i64) -> IntersectionArray {
    let mut b = vec![k];
    for i in 1..d {
        let hi = if i == 1 { k - 1 } else { b[i - 1] };
        b.push(rng.gen_range(1..=hi));
    }
    let mut c = vec![1];
    for j in 2..=d {
        let hi = if j == d { k } else { (k - b[j - 1]).min(b[d - j]) };
        let lo = c[j - 2];
        c.push(rng.gen_range(lo..=hi.max(lo)));
    }
    IntersectionArray::new(b, c).unwrap()
}

/// Rejection-samples arrays whose k_i are all integers.
pub fn random_integral_array<R: Rng>(rng: &mut R, d: usize, k_lo: i64, k_hi: i64) -> IntersectionArray {
    loop {
        let k = rng.gen_range(k_lo..=k_hi);
        let arr = random_array(rng, d, k);
        if arr.has_integral_kseq() {
            return arr;
        }
    }
}

/// (L^j)_{00} for j = 0..=max, by repeated multiplication of the full
/// intersection matrix in plain integers.
pub fn walk_counts(arr: &IntersectionArray, max: usize) -> Vec<i128> {
    let d = arr.diameter();
    let n = d + 1;
    let mut l = vec![vec![0i128; n]; n];
    for i in 0..n {
        l[i][i] = arr.a(i) as i128;
        if i + 1 < n {
            l[i][i + 1] = arr.c(i + 1) as i128;
            l[i + 1][i] = arr.b(i) as i128;
        }
    }
    // e_0^T L^j, tracked as a row vector.
    let mut row = vec![0i128; n];
    row[0] = 1;
    let mut out = vec![1];
    for _ in 0..max {
        let mut next = vec![0i128; n];
        for (i, x) in row.iter().enumerate() {
            for (j, y) in l[i].iter().enumerate() {
                next[j] += x * y;
            }
        }
        row = next;
        out.push(row[0]);
    }
    out
}
