//! Arithmetic mod a prime p and the automorphisms of Z_p built from it.
//!
//! Every automorphism of Z_p is multiplication by some k in 1..p, so the
//! automorphism group is the multiplicative group mod p, cyclic of order
//! p - 1. Generators of that group ("primitive roots") index the whole
//! automorphism group through their powers.

use rand::Rng;

use super::{GroupError, Permutation};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus > 0, "zero modulus");
    let m = modulus as u128;
    let mut base = base as u128 % m;
    let mut acc: u128 = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// Order of `k` in the multiplicative group mod the prime `p`.
pub fn multiplicative_order(k: u64, p: u64) -> Result<u64, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime { value: p });
    }
    if k == 0 || k >= p {
        return Err(GroupError::OutOfRange { value: k, modulus: p });
    }
    let mut acc = k;
    let mut order = 1;
    while acc != 1 {
        acc = acc * k % p;
        order += 1;
    }
    Ok(order)
}

/// Smallest generator of the multiplicative group mod the prime `p`, i.e. the
/// smallest k whose multiplicative order is exactly p - 1.
pub fn find_generator(p: u64) -> Result<u64, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime { value: p });
    }
    if p < 3 {
        return Err(GroupError::ModulusTooSmall(p));
    }
    for k in 2..p {
        if multiplicative_order(k, p)? == p - 1 {
            return Ok(k);
        }
    }
    unreachable!("every prime modulus has a primitive root")
}

/// Exhaustive discrete logarithm: the s in 0..p-1 with base^s = target mod p.
/// `base` must generate the multiplicative group, so s always exists.
pub fn discrete_log(base: u64, target: u64, p: u64) -> Result<u64, GroupError> {
    if multiplicative_order(base, p)? != p - 1 {
        return Err(GroupError::NotAGenerator { base, modulus: p });
    }
    if target == 0 || target >= p {
        return Err(GroupError::OutOfRange { value: target, modulus: p });
    }
    let mut acc = 1;
    for s in 0..p - 1 {
        if acc == target {
            return Ok(s);
        }
        acc = acc * base % p;
    }
    unreachable!("generator powers cover the whole multiplicative group")
}

/// The automorphism of Z_p sending n to n*k mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModAutomorphism {
    modulus: u64,
    multiplier: u64,
}

impl ModAutomorphism {
    pub fn new(modulus: u64, multiplier: u64) -> Result<Self, GroupError> {
        if !is_prime(modulus) {
            return Err(GroupError::NotPrime { value: modulus });
        }
        if multiplier == 0 || multiplier >= modulus {
            return Err(GroupError::OutOfRange {
                value: multiplier,
                modulus,
            });
        }
        Ok(ModAutomorphism { modulus, multiplier })
    }

    pub fn identity(modulus: u64) -> Result<Self, GroupError> {
        Self::new(modulus, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn apply(&self, n: u64) -> u64 {
        debug_assert!(n < self.modulus);
        n * self.multiplier % self.modulus
    }

    /// Composition multiplies the multipliers mod p.
    pub fn compose(&self, other: &Self) -> Result<Self, GroupError> {
        if self.modulus != other.modulus {
            return Err(GroupError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(ModAutomorphism {
            modulus: self.modulus,
            multiplier: self.multiplier * other.multiplier % self.modulus,
        })
    }

    pub fn pow(&self, exp: u64) -> Self {
        ModAutomorphism {
            modulus: self.modulus,
            multiplier: mod_pow(self.multiplier, exp, self.modulus),
        }
    }

    /// The same map as a permutation of `{0..p-1}`; 0 is always fixed.
    pub fn to_permutation(&self) -> Permutation {
        let images = (0..self.modulus).map(|n| self.apply(n) as usize).collect();
        Permutation::from_images(images).expect("multiplication by a unit is a bijection")
    }
}

/// An element of Z_{p-1}^m: the exponent tuples that address a homomorphism
/// into Aut(Z_p), and the tuples read back out of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    entries: Vec<u64>,
}

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Self {
        ExponentVector { entries }
    }

    pub fn zeros(m: usize) -> Self {
        ExponentVector {
            entries: vec![0; m],
        }
    }

    /// The k-th standard probe vector (1 in slot k, 0 elsewhere).
    pub fn unit(m: usize, k: usize) -> Self {
        assert!(k < m);
        let mut entries = vec![0; m];
        entries[k] = 1;
        ExponentVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn entry(&self, k: usize) -> u64 {
        self.entries[k]
    }

    pub fn dot(&self, other: &Self, modulus: u64) -> Result<u64, GroupError> {
        if self.len() != other.len() {
            return Err(GroupError::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut acc: u64 = 0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = (acc + a % modulus * (b % modulus)) % modulus;
        }
        Ok(acc)
    }
}

/// A homomorphism f: Z_{p-1}^m -> Aut(Z_p), determined by the m automorphisms
/// the unit vectors map to. f(n) multiplies by the product of the hidden
/// multipliers raised to the entries of n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenHomomorphism {
    modulus: u64,
    multipliers: Vec<u64>,
}

impl HiddenHomomorphism {
    pub fn new(modulus: u64, multipliers: Vec<u64>) -> Result<Self, GroupError> {
        if !is_prime(modulus) {
            return Err(GroupError::NotPrime { value: modulus });
        }
        if modulus < 3 {
            return Err(GroupError::ModulusTooSmall(modulus));
        }
        if multipliers.is_empty() {
            return Err(GroupError::SizeMismatch { left: 0, right: 1 });
        }
        for &j in &multipliers {
            if j == 0 || j >= modulus {
                return Err(GroupError::OutOfRange {
                    value: j,
                    modulus,
                });
            }
        }
        Ok(HiddenHomomorphism { modulus, multipliers })
    }

    pub fn random<R: Rng + ?Sized>(modulus: u64, m: usize, rng: &mut R) -> Result<Self, GroupError> {
        if !is_prime(modulus) || modulus < 3 {
            return Err(GroupError::NotPrime { value: modulus });
        }
        let multipliers = (0..m).map(|_| rng.gen_range(1..modulus)).collect();
        Self::new(modulus, multipliers)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.multipliers.len()
    }

    pub fn multipliers(&self) -> &[u64] {
        &self.multipliers
    }

    /// One oracle evaluation: the automorphism f(n).
    pub fn evaluate(&self, n: &ExponentVector) -> Result<ModAutomorphism, GroupError> {
        if n.len() != self.arity() {
            return Err(GroupError::SizeMismatch {
                left: n.len(),
                right: self.arity(),
            });
        }
        let mut multiplier = 1;
        for (&j, &e) in self.multipliers.iter().zip(n.entries()) {
            multiplier = multiplier * mod_pow(j, e, self.modulus) % self.modulus;
        }
        ModAutomorphism::new(self.modulus, multiplier)
    }
}

/// Result of the classical identification procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalBv {
    pub exponents: ExponentVector,
    pub oracle_uses: usize,
}

/// Identifies a hidden homomorphism classically: probe each unit vector (m
/// oracle evaluations), read off where 1 goes, and take discrete logs to the
/// smallest generator.
pub fn classical_bv(hidden: &HiddenHomomorphism) -> Result<ClassicalBv, GroupError> {
    classical_bv_with_generator(hidden, find_generator(hidden.modulus())?)
}

/// Same procedure, but expresses the exponents in terms of a caller-chosen
/// generator of the multiplicative group.
pub fn classical_bv_with_generator(
    hidden: &HiddenHomomorphism,
    generator: u64,
) -> Result<ClassicalBv, GroupError> {
    let p = hidden.modulus();
    let m = hidden.arity();
    let mut exponents = Vec::with_capacity(m);
    for k in 0..m {
        let alpha = hidden.evaluate(&ExponentVector::unit(m, k))?;
        exponents.push(discrete_log(generator, alpha.apply(1), p)?);
    }
    Ok(ClassicalBv {
        exponents: ExponentVector::new(exponents),
        oracle_uses: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }

    #[test]
    fn mod_pow_table() {
        let cases = [
            ((2, 8, 300), 256),
            ((3, 0, 7), 1),
            ((10, 9, 1), 0),
            ((7, 5, 13), 11),
            ((2, 62, 1_000_000_007), 145_586_002),
        ];
        for ((b, e, m), want) in cases {
            assert_eq!(mod_pow(b, e, m), want, "{b}^{e} mod {m}");
        }
    }

    #[test]
    fn orders_in_small_prime_fields() {
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        assert_eq!(multiplicative_order(4, 5).unwrap(), 2);
        assert_eq!(multiplicative_order(3, 7).unwrap(), 6);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(1, 13).unwrap(), 1);
        assert_eq!(
            multiplicative_order(3, 6),
            Err(GroupError::NotPrime { value: 6 })
        );
        assert_eq!(
            multiplicative_order(0, 5),
            Err(GroupError::OutOfRange { value: 0, modulus: 5 })
        );
    }

    #[test]
    fn smallest_generators() {
        assert_eq!(find_generator(3).unwrap(), 2);
        assert_eq!(find_generator(5).unwrap(), 2);
        assert_eq!(find_generator(7).unwrap(), 3);
        assert_eq!(find_generator(11).unwrap(), 2);
        assert_eq!(find_generator(13).unwrap(), 2);
        assert!(find_generator(2).is_err());
        assert!(find_generator(9).is_err());
    }

    #[test]
    fn discrete_log_examples() {
        assert_eq!(discrete_log(2, 3, 5).unwrap(), 3); // 2^3 = 8 = 3 mod 5
        assert_eq!(discrete_log(3, 5, 7).unwrap(), 5); // 3^5 = 243 = 5 mod 7
        assert_eq!(discrete_log(2, 1, 5).unwrap(), 0);
        assert!(discrete_log(4, 2, 5).is_err()); // 4 has order 2, not a generator
    }

    #[test]
    fn automorphism_action_and_fixed_point() {
        let a = ModAutomorphism::new(7, 3).unwrap();
        assert_eq!(a.apply(1), 3);
        assert_eq!(a.apply(5), 1);
        assert_eq!(a.to_permutation().fixed_points(), vec![0]);
        assert!(ModAutomorphism::new(7, 0).is_err());
        assert!(ModAutomorphism::new(7, 7).is_err());
        assert!(ModAutomorphism::new(8, 3).is_err());
    }

    #[test]
    fn composition_multiplies_multipliers() {
        let a = ModAutomorphism::new(11, 4).unwrap();
        let b = ModAutomorphism::new(11, 7).unwrap();
        assert_eq!(a.compose(&b).unwrap().multiplier(), 28 % 11);
        // The permutation picture composes the same way.
        let via_perms = a.to_permutation().compose(&b.to_permutation()).unwrap();
        assert_eq!(via_perms, a.compose(&b).unwrap().to_permutation());
    }

    #[test]
    fn homomorphism_evaluation_multiplies_powers() {
        let f = HiddenHomomorphism::new(5, vec![2, 4]).unwrap();
        let n = ExponentVector::new(vec![3, 1]);
        // 2^3 * 4^1 = 32 = 2 mod 5.
        assert_eq!(f.evaluate(&n).unwrap().multiplier(), 2);
        assert_eq!(f.evaluate(&ExponentVector::zeros(2)).unwrap().multiplier(), 1);
        assert!(f.evaluate(&ExponentVector::zeros(3)).is_err());
    }

    #[test]
    fn classical_identification_examples() {
        let f = HiddenHomomorphism::new(5, vec![2, 4]).unwrap();
        let out = classical_bv(&f).unwrap();
        assert_eq!(out.exponents, ExponentVector::new(vec![1, 2]));
        assert_eq!(out.oracle_uses, 2);

        let f = HiddenHomomorphism::new(7, vec![3, 2, 6]).unwrap();
        let out = classical_bv(&f).unwrap();
        assert_eq!(out.exponents, ExponentVector::new(vec![1, 2, 3]));
        assert_eq!(out.oracle_uses, 3);
    }

    #[test]
    fn dot_products_reduce_mod_group_order() {
        let y = ExponentVector::new(vec![1, 2]);
        let n = ExponentVector::new(vec![2, 1]);
        assert_eq!(y.dot(&n, 4).unwrap(), 0);
        assert_eq!(y.dot(&ExponentVector::new(vec![1, 0]), 4).unwrap(), 1);
        assert!(y.dot(&ExponentVector::zeros(3), 4).is_err());
    }

    proptest! {
        #[test]
        fn discrete_log_inverts_generator_powers(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), s in 0u64..12) {
            let g = find_generator(p).unwrap();
            let s = s % (p - 1);
            prop_assert_eq!(discrete_log(g, mod_pow(g, s, p), p).unwrap(), s);
        }

        #[test]
        fn evaluate_is_a_homomorphism(p in prop::sample::select(vec![5u64, 7, 11]), seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = HiddenHomomorphism::random(p, 3, &mut rng).unwrap();
            let a = ExponentVector::new((0..3).map(|_| rng.gen_range(0..p - 1)).collect());
            let b = ExponentVector::new((0..3).map(|_| rng.gen_range(0..p - 1)).collect());
            let sum = ExponentVector::new(
                a.entries().iter().zip(b.entries()).map(|(x, y)| (x + y) % (p - 1)).collect(),
            );
            let lhs = f.evaluate(&sum).unwrap();
            let rhs = f.evaluate(&a).unwrap().compose(&f.evaluate(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
