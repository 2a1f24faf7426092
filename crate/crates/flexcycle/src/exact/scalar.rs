//! Gaussian rationals: exact complex numbers with rational real and
//! imaginary parts.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{rat_from_str, rat_to_string, ExactError, Rat};

/// An element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rat,
    pub im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        Scalar {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(super::rat_int(n))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rat(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `Some(re)` when the value is real.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the norm over Q.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    /// Serialize as `"p/q+r/s*i"` with zero parts omitted.
    pub fn to_string_exact(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&rat_to_string(&self.re));
        }
        if !self.im.is_zero() {
            if !self.re.is_zero() && !self.im.is_negative() {
                out.push('+');
            }
            out.push_str(&rat_to_string(&self.im));
            out.push_str("*i");
        }
        out
    }

    pub fn from_str_exact(s: &str) -> Result<Self, ExactError> {
        let bad = || ExactError::BadScalar(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        // split at a '+' or '-' that is not the leading sign and not inside
        // a component (components are rationals, so any later sign is a split)
        let bytes = t.as_bytes();
        let mut split = None;
        for (k, &c) in bytes.iter().enumerate().skip(1) {
            if (c == b'+' || c == b'-') && bytes[k - 1] != b'/' {
                split = Some(k);
            }
        }
        // a lone real or a lone imaginary part
        let parse_part = |p: &str| -> Result<(Rat, bool), ExactError> {
            if let Some(coeff) = p.strip_suffix("*i") {
                Ok((rat_from_str(coeff).map_err(|_| bad())?, true))
            } else if p == "i" {
                Ok((Rat::one(), true))
            } else if p == "-i" {
                Ok((-Rat::one(), true))
            } else {
                Ok((rat_from_str(p).map_err(|_| bad())?, false))
            }
        };
        let parts: Vec<&str> = match split {
            Some(k) if t[k..].contains('i') || t[..k].contains('i') => vec![&t[..k], &t[k..]],
            _ => vec![t],
        };
        let mut re = Rat::zero();
        let mut im = Rat::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for p in parts {
            let p = p.strip_prefix('+').unwrap_or(p);
            let (v, is_im) = parse_part(p)?;
            if is_im {
                if seen_im {
                    return Err(bad());
                }
                im = v;
                seen_im = true;
            } else {
                if seen_re {
                    return Err(bad());
                }
                re = v;
                seen_re = true;
            }
        }
        Ok(Scalar { re, im })
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_exact())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_exact())
    }
}

impl From<Rat> for Scalar {
    fn from(re: Rat) -> Self {
        Scalar::from_rat(re)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(self.clone(), rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self, &rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self.clone(), &rhs)
            }
        }
    };
}

impl Add<&Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}
impl_binop!(Add, add);

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re - &rhs.re,
            im: self.im - &rhs.im,
        }
    }
}
impl_binop!(Sub, sub);

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}
impl_binop!(Mul, mul);

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * rhs.inv().expect("division by zero Scalar")
    }
}
impl_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn field_ops() {
        let a = Scalar::new(rat(1, 2), rat(-3, 1));
        let b = Scalar::new(rat(2, 3), rat(5, 7));
        assert_eq!((&a * &b) / &b, a);
        assert_eq!(&a + &b - &b, a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn string_round_trip() {
        for s in ["0", "3", "-1/2", "2*i", "-1/3*i", "1/2+2*i", "1/2-2/3*i", "-5-1*i"] {
            let v = Scalar::from_str_exact(s).unwrap();
            assert_eq!(
                Scalar::from_str_exact(&v.to_string_exact()).unwrap(),
                v,
                "round trip of {s}"
            );
        }
        assert_eq!(Scalar::from_str_exact("i").unwrap(), Scalar::i());
        assert_eq!(Scalar::from_str_exact("-i").unwrap(), -Scalar::i());
        assert!(Scalar::from_str_exact("").is_err());
        assert!(Scalar::from_str_exact("1+1+1").is_err());
    }
}
