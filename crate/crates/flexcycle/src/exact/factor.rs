//! Integer factorization used by the squarefree decomposition.
//!
//! Trial division up to 10^6, then Miller-Rabin plus Brent's variant of
//! Pollard rho with a hard iteration budget. Inputs beyond the budget
//! produce [`ExactError::FactorizationBudgetExceeded`] instead of a wrong
//! or slow answer.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ExactError;

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_BUDGET: u64 = 10_000_000;

/// Factor `n > 0` into prime powers, ascending by prime.
pub fn factor(n: &BigUint) -> Result<Vec<(BigUint, u32)>, ExactError> {
    let mut n = n.clone();
    if n.is_zero() {
        panic!("factor: zero input");
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, e: u32, out: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += e;
                return;
            }
        }
        out.push((p, e));
    };

    let mut d: u64 = 2;
    while d <= TRIAL_LIMIT {
        let db = BigUint::from(d);
        if (&db * &db) > n {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = n.div_rem(&db);
            if r.is_zero() {
                n = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            push(db, e, &mut out);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    if !n.is_one() {
        // remaining cofactor has no prime factor <= min(TRIAL_LIMIT, sqrt)
        factor_large(n, &mut out)?;
        out.sort_by(|a, b| a.0.cmp(&b.0));
        // merge equal primes after sorting
        let mut merged: Vec<(BigUint, u32)> = Vec::new();
        for (p, e) in out {
            push(p, e, &mut merged);
        }
        return Ok(merged);
    }
    Ok(out)
}

fn factor_large(n: BigUint, out: &mut Vec<(BigUint, u32)>) -> Result<(), ExactError> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime(&n) {
        out.push((n, 1));
        return Ok(());
    }
    if let Some(r) = exact_sqrt(&n) {
        factor_large(r.clone(), out)?;
        factor_large(r, out)?;
        return Ok(());
    }
    let d = pollard_brent(&n)?;
    let q = &n / &d;
    factor_large(d, out)?;
    factor_large(q, out)
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Miller-Rabin with a fixed base set, deterministic well past 2^64.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigUint::from(p);
        if n == &pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let n1 = n - BigUint::one();
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Result<BigUint, ExactError> {
    // n is odd composite, not a perfect square, no small factors
    let one = BigUint::one();
    let mut c = BigUint::from(1u32);
    let mut spent: u64 = 0;
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            if spent >= RHO_BUDGET {
                return Err(ExactError::FactorizationBudgetExceeded);
            }
            spent += 1;
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor; retry with new c
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return Ok(d);
        }
        c += 1u32;
    }
}
