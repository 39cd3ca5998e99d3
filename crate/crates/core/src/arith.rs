//! Integer helpers shared across the crate: primality, factorization,
//! gcd and modular arithmetic on machine words.

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
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

/// Deterministic Miller–Rabin, valid for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    // n is odd, composite, and has no small factors at this point.
    let mul = |a: u128, b: u128| -> u128 {
        // n < 2^126 in practice; use wrapping big multiplication via split.
        mod_mul_u128(a, b, n)
    };
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul(x, x) + c) % n;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// (a * b) mod m for u128 without overflow, via 64-bit limb schoolbook.
pub fn mod_mul_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64), Ok(m64)) = (
        u64::try_from(a),
        u64::try_from(b),
        u64::try_from(m),
    ) {
        return mul_mod(a64, b64, m64) as u128;
    }
    // double-and-add; m < 2^127 keeps a + a from overflowing.
    let mut acc = 0u128;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a + a) % m;
        b >>= 1;
    }
    acc
}

pub fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul_u128(acc, base, m);
        }
        base = mod_mul_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u128(n: u128) -> bool {
    if let Ok(n64) = u64::try_from(n) {
        return is_prime(n64);
    }
    if n % 2 == 0 {
        return false;
    }
    // Miller–Rabin with a fixed witness battery; probabilistic above 2^64 but
    // the error odds are far below any practical concern for factor drivers.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_mul_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of n as sorted (prime, exponent) pairs.
pub fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    let mut n = n;
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u128, 3, 5] {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut d = 7u128;
    let inc = [4u128, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d * d <= n && d < 1_000_000 {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += inc[i % 8];
        i += 1;
    }
    // Whatever is left is prime or a product of primes > 10^6; split with rho.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort();
    out
}

pub fn factor(n: u64) -> Vec<(u64, u32)> {
    factor_u128(n as u128)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect()
}

/// Writes q as p^a with p prime, if possible.
pub fn as_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// All primes below the bound, by sieve.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p < n {
        if sieve[p] {
            let mut m = p * p;
            while m < n {
                sieve[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}
