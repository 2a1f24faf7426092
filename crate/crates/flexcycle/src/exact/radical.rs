//! Formal sums `sum_k c_k * sqrt(s_k)` over squarefree positive integers
//! `s_k` with rational coefficients. Square roots of distinct squarefree
//! integers are linearly independent over Q, so such a sum is zero exactly
//! when the stored map is empty.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{rat_to_f64, squarefree_decompose, ExactError, Rat};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Radical {
    // squarefree core -> nonzero coefficient; core 1 is the rational part
    terms: BTreeMap<BigUint, Rat>,
}

impl Radical {
    pub fn zero() -> Self {
        Radical::default()
    }

    pub fn from_rat(q: Rat) -> Self {
        let mut r = Radical::zero();
        if !q.is_zero() {
            r.terms.insert(BigUint::one(), q);
        }
        r
    }

    pub fn from_int(n: i64) -> Self {
        Radical::from_rat(super::rat_int(n))
    }

    /// `coeff * sqrt(core)`; `core` must be squarefree (not re-checked).
    pub fn term(coeff: Rat, core: BigUint) -> Self {
        let mut r = Radical::zero();
        if !coeff.is_zero() {
            r.terms.insert(core, coeff);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(q)` when the value is rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (core, coeff) = self.terms.iter().next().unwrap();
                if core.is_one() {
                    Some(coeff.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(core, coeff)| rat_to_f64(coeff) * core.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }

    fn insert(&mut self, core: BigUint, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(core) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + coeff;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Exact square. Cross terms use sqrt(s)*sqrt(t) = g*sqrt(st/g^2)
    /// with g = gcd(s,t), which keeps cores squarefree without factoring.
    pub fn square(&self) -> Radical {
        self * self
    }
}

/// The positive square root of `q > 0` as a single-term radical.
pub fn radical_from_square(q: &Rat) -> Result<Radical, ExactError> {
    let (coeff, core) = squarefree_decompose(q)?;
    Ok(Radical::term(coeff, core))
}

/// Exact signed sum `sum_j signs[j] * lengths[j]`.
pub fn radical_signed_sum(lengths: &[Radical], signs: &[i8]) -> Radical {
    assert_eq!(lengths.len(), signs.len(), "sequence length mismatch");
    let mut acc = Radical::zero();
    for (len, &sign) in lengths.iter().zip(signs) {
        debug_assert!(sign == 1 || sign == -1);
        if sign >= 0 {
            acc = acc + len;
        } else {
            acc = acc - len;
        }
    }
    acc
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(core, coeff)| {
                if core.is_one() {
                    super::rat_to_string(coeff)
                } else {
                    format!("{}*sqrt({})", super::rat_to_string(coeff), core)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&Radical> for Radical {
    type Output = Radical;
    fn add(mut self, rhs: &Radical) -> Radical {
        for (core, coeff) in &rhs.terms {
            self.insert(core.clone(), coeff.clone());
        }
        self
    }
}

impl Sub<&Radical> for Radical {
    type Output = Radical;
    fn sub(mut self, rhs: &Radical) -> Radical {
        for (core, coeff) in &rhs.terms {
            self.insert(core.clone(), -coeff.clone());
        }
        self
    }
}

impl Mul<&Radical> for &Radical {
    type Output = Radical;
    fn mul(self, rhs: &Radical) -> Radical {
        let mut out = Radical::zero();
        for (s, a) in &self.terms {
            for (t, b) in &rhs.terms {
                // sqrt(s)*sqrt(t) = g * sqrt((s/g)*(t/g)), g = gcd(s,t)
                let g = s.gcd(t);
                let core = (s / &g) * (t / &g);
                let coeff = a * b * Rat::from(num_bigint::BigInt::from(g));
                out.insert(core, coeff);
            }
        }
        out
    }
}

macro_rules! impl_rad_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Radical> for Radical {
            type Output = Radical;
            fn $method(self, rhs: Radical) -> Radical {
                $trait::$method(self, &rhs)
            }
        }
        impl $trait<&Radical> for &Radical {
            type Output = Radical;
            fn $method(self, rhs: &Radical) -> Radical {
                $trait::$method(self.clone(), rhs)
            }
        }
    };
}
impl_rad_binop!(Add, add);
impl_rad_binop!(Sub, sub);

impl Mul<Radical> for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        (&self).mul(&rhs)
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical::zero() - &self
    }
}
