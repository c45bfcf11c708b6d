//! Seeded instance builders shared by the benchmark targets, so every run
//! times the same inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qperm_core::{
    BvInstance, FixedPointInstance, HiddenHomomorphism, Permutation, ProgramBank, SearchTarget,
};

pub fn bv_instance(p: u64, m: usize) -> BvInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ (m as u64) << 8);
    let hidden = HiddenHomomorphism::random(p, m, &mut rng).expect("valid modulus");
    BvInstance::new(hidden).expect("instance builds")
}

/// A random permutation on `n` points redrawn until some element is fixed,
/// so the search has a target.
pub fn fixed_point_instance(n: usize) -> FixedPointInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    loop {
        let sigma = Permutation::random(n, &mut rng);
        match FixedPointInstance::new(sigma, 1) {
            Ok(instance) => return instance,
            Err(_) => continue,
        }
    }
}

/// A bank of `m` random programs on `n` points with exactly one program
/// satisfying the returned single-pair constraint.
pub fn planted_bank(m: usize, n: usize) -> (ProgramBank, SearchTarget) {
    let mut rng = ChaCha8Rng::seed_from_u64((m as u64) << 32 | n as u64);
    let target = SearchTarget::single(0, 1);
    let winner = rng.gen_range(0..m);
    let bank = ProgramBank::random_with_unique_solution(m, n, &target, winner, &mut rng)
        .expect("bank builds");
    (bank, target)
}
