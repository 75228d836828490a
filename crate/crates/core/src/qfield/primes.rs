use super::element::Element;
use super::field::FieldCtx;
use super::ideal::Ideal;

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
}

/// Kronecker symbol `(a / n)` for `n ≥ 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    let mut n = n;
    let mut a = a as i128;
    let mut res = 1;
    while n % 2 == 0 {
        n /= 2;
        if a.rem_euclid(2) == 0 {
            return 0;
        }
        if matches!(a.rem_euclid(8), 3 | 5) {
            res = -res;
        }
    }
    // Jacobi symbol (a / n), n odd
    let mut m = n as i128;
    a = a.rem_euclid(m);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(m % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            res = -res;
        }
        a %= m;
    }
    if m == 1 {
        res
    } else {
        0
    }
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A square root of `a` modulo an odd prime `p`, if one exists.
pub fn sqrt_mod(a: i128, p: u64) -> Option<u64> {
    let p128 = p as u128;
    let a = a.rem_euclid(p as i128) as u128;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p128 - 1) / 2, p128) != 1 {
        return None;
    }
    let (mut q, mut s) = (p128 - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (p128 - 1) / 2, p128) != p128 - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p128);
    let mut t = pow_mod(a, q, p128);
    let mut r = pow_mod(a, (q + 1) / 2, p128);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p128;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p128);
        m = i;
        c = b * b % p128;
        t = t * c % p128;
        r = r * b % p128;
    }
    Some(r as u64)
}

/// Roots of `X² − tX + n` modulo `p`, where `ω² = tω − n`.
fn omega_roots_mod(k: &FieldCtx, p: u64) -> Vec<i128> {
    let (t, n) = k.omega_trace_norm();
    let pi = p as i128;
    if p == 2 {
        return (0..2).filter(|&r| (r * r - t * r + n).rem_euclid(2) == 0).collect();
    }
    // r = (t ± √(t² − 4n)) / 2
    let disc = t * t - 4 * n;
    let Some(s) = sqrt_mod(disc, p) else { return Vec::new() };
    let inv2 = (pi + 1) / 2;
    let mut roots: Vec<i128> = [s as i128, -(s as i128)]
        .iter()
        .map(|&si| ((t + si) * inv2).rem_euclid(pi))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// The prime ideals above the rational prime `p`, with their norms.
pub fn primes_above(k: &FieldCtx, p: u64) -> Vec<(Ideal, u64)> {
    let pi = p as i128;
    let roots = omega_roots_mod(k, p);
    if roots.is_empty() {
        return vec![(Ideal::principal(k, Element::from_int(pi)), p * p)];
    }
    roots
        .into_iter()
        .map(|r| (Ideal::from_generators(k, &[Element::from_int(pi), Element::new(-r, 1)]), p))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime ideal `𝔭` of `𝒪_K` lying over `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdl {
    pub ideal: Ideal,
    pub p: u64,
    pub norm: u64,
    pub splitting: Splitting,
}

/// All prime ideals of norm `≤ bound`, sorted by norm and then by HNF.
pub fn prime_ideals_up_to(k: &FieldCtx, bound: u64) -> Vec<PrimeIdl> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let splitting = match kronecker(k.disc(), p) {
            1 => Splitting::Split,
            0 => Splitting::Ramified,
            _ => Splitting::Inert,
        };
        if splitting == Splitting::Inert && p.checked_mul(p).map_or(true, |q| q > bound) {
            continue;
        }
        for (ideal, norm) in primes_above(k, p) {
            out.push(PrimeIdl { ideal, p, norm, splitting });
        }
    }
    out.sort_by_key(|q| (q.norm, q.ideal.hnf()));
    out
}

/// Norms of all prime ideals with norm `≤ bound`, in increasing order. Only the
/// splitting type of each rational prime is used.
pub fn prime_ideal_norms(disc: i64, bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        match kronecker(disc, p) {
            1 => {
                out.push(p);
                out.push(p);
            }
            0 => out.push(p),
            _ => {
                if let Some(q) = p.checked_mul(p).filter(|&q| q <= bound) {
                    out.push(q);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Prime ideal factorisation of a nonzero integral ideal.
pub fn factor(k: &FieldCtx, i: &Ideal) -> Vec<(Ideal, u32)> {
    assert!(!i.is_zero(), "factorisation of the zero ideal");
    let mut rest = *i;
    let mut out = Vec::new();
    let mut n = i.norm() as u64;
    let mut p = 2u64;
    let mut rational_primes = Vec::new();
    while p * p <= n {
        if n % p == 0 {
            rational_primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rational_primes.push(n);
    }
    for p in rational_primes {
        for (q, _) in primes_above(k, p) {
            let mut e = 0;
            while rest.is_subset_of(&q) && !rest.is_unit() {
                // rest · q⁻¹ = rest · conj(q) / N(q)
                let prod = rest.mul(k, &q.conj(k));
                let nq = q.norm();
                let (a, b, c) = prod.hnf();
                rest = Ideal::from_hnf(k, a / nq, b / nq, c / nq).expect("exact division by a prime");
                e += 1;
            }
            if e > 0 {
                out.push((q, e));
            }
        }
    }
    debug_assert!(rest.is_unit());
    out
}
