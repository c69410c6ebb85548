#![allow(dead_code)]

use monopole_moments::{MomentState, N_MEANS, N_MOMENTS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_means(rng: &mut ChaCha8Rng, scale: f64) -> [f64; N_MEANS] {
    std::array::from_fn(|_| rng.gen_range(-scale..scale))
}

/// Random positive semidefinite second-moment matrix `L Lᵀ`, packed in storage order.
pub fn random_psd_moments(rng: &mut ChaCha8Rng, scale: f64) -> [f64; N_MOMENTS] {
    let mut l = [[0.0; 6]; 6];
    for (i, row) in l.iter_mut().enumerate() {
        for v in row.iter_mut().take(i + 1) {
            *v = rng.gen_range(-scale..scale);
        }
    }
    let mut out = [0.0; N_MOMENTS];
    let mut k = 0;
    for i in 0..6 {
        for j in i..6 {
            out[k] = (0..6).map(|c| l[i][c] * l[j][c]).sum();
            k += 1;
        }
    }
    out
}

pub fn random_state(rng: &mut ChaCha8Rng) -> MomentState<f64> {
    MomentState::new(random_means(rng, 1.0), random_psd_moments(rng, 0.5)).unwrap()
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
