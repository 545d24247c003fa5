//! Elementary arithmetic on machine integers: gcd, modular inverses,
//! factorisation, φ, μ, divisors and a deterministic primality test.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd(|a|, q)
pub fn gcd_signed(a: i64, q: u64) -> u64 {
    gcd(a.unsigned_abs(), q)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Least non-negative residue of `a` modulo `q`.
pub fn reduce(a: i64, q: u64) -> u64 {
    debug_assert!(q > 0);
    a.rem_euclid(q as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order of the prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
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

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Deterministic Miller–Rabin. The witness set {2, 3, 5, 7, 11, 13, 17} is
/// exact for every n < 341 550 071 728 321.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Smallest primitive root modulo an odd prime power `p^e`.
pub fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    debug_assert!(p > 2);
    let modulus = p.pow(e);
    let phi = modulus / p * (p - 1);
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(r, _)| r).collect();
    (2..modulus)
        .find(|&g| {
            gcd(g, p) == 1
                && prime_factors
                    .iter()
                    .all(|&r| pow_mod(g, phi / r, modulus) != 1)
        })
        .expect("odd prime powers are cyclic")
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated summation of complex numbers, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: num_complex::Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.total(), self.im.total())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_mu_small_values() {
        let phi: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phi, [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(1), [1]);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(25), [1, 5, 25]);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            let trial = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(2_152_302_898_747));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn inverse_mod_roundtrip() {
        for m in 2..60u64 {
            for a in 1..m {
                match inverse_mod(a, m) {
                    Some(b) => assert_eq!(a * b % m, 1),
                    None => assert!(gcd(a, m) > 1),
                }
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for &(p, e) in &[(3u64, 1u32), (3, 3), (5, 2), (7, 1), (11, 1), (101, 1)] {
            let m = p.pow(e);
            let g = primitive_root_prime_power(p, e);
            let phi = euler_phi(m);
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..phi {
                seen.insert(x);
                x = x * g % m;
            }
            assert_eq!(seen.len() as u64, phi);
        }
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert!((acc.total() - (1.0 + 1e-12)).abs() < 1e-15);
    }
}
