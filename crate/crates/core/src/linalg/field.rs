//! Coefficient fields: ℚ via `BigRational` and prime fields 𝔽_p with a
//! runtime modulus, both usable as scalars in the generic elimination
//! kernels.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::{Int, Rat};

/// Tag selecting the coefficient field of a homology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    /// The rationals.
    Q,
    /// The prime field with the given modulus.
    Fp(u64),
}

impl CoeffField {
    pub fn is_prime_field(self) -> bool {
        matches!(self, CoeffField::Fp(_))
    }

    /// The modulus must be prime; composite moduli are rejected by the
    /// homology entry points.
    pub fn modulus_is_prime(self) -> bool {
        match self {
            CoeffField::Q => true,
            CoeffField::Fp(p) => is_prime(p),
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Q => write!(f, "Q"),
            CoeffField::Fp(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Scalar usable in the generic elimination and solve kernels.
///
/// Implemented by `Rat` and [`Fp`]. Floating-point types are deliberately
/// not implemented: every assertion path in this crate is exact.
pub trait FieldScalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}

impl FieldScalar for Rat {}
impl FieldScalar for Fp {}

/// Element of 𝔽_p with the modulus carried alongside the value.
///
/// A modulus of 0 marks a bare integer literal (produced by `zero()` and
/// `one()`, which cannot know the modulus); any arithmetic with a bound
/// element rebinds the literal. Elements of two different nonzero moduli
/// must never be mixed.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        debug_assert!(modulus > 0);
        let m = modulus as i128;
        let v = ((value as i128 % m) + m) % m;
        Fp {
            value: v as u64,
            modulus,
        }
    }

    pub fn from_int(value: &Int, modulus: u64) -> Self {
        use num_integer::Integer;
        let m = Int::from(modulus);
        let v = value.mod_floor(&m);
        let digits = v.to_u64_digits().1;
        Fp {
            value: digits.first().copied().unwrap_or(0),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    fn unify(a: Fp, b: Fp) -> (u64, u64, u64) {
        let m = match (a.modulus, b.modulus) {
            (0, 0) => 0,
            (m, 0) | (0, m) => m,
            (m, n) => {
                assert_eq!(m, n, "mixed moduli {m} and {n}");
                m
            }
        };
        if m == 0 {
            (a.value, b.value, 0)
        } else {
            (a.value % m, b.value % m, m)
        }
    }

    fn inverse(self) -> Fp {
        assert!(self.modulus > 0, "cannot invert an unbound literal");
        assert!(self.value % self.modulus != 0, "division by zero in Fp");
        // Fermat: p is prime everywhere this type is used.
        let mut result: u128 = 1;
        let mut base = (self.value % self.modulus) as u128;
        let mut exp = self.modulus - 2;
        let m = self.modulus as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Fp {
            value: result as u64,
            modulus: self.modulus,
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, m) = Fp::unify(self, rhs);
        if m == 0 {
            Fp {
                value: a.wrapping_add(b),
                modulus: 0,
            }
        } else {
            Fp {
                value: (a + b) % m,
                modulus: m,
            }
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            Fp {
                value: self.value.wrapping_neg(),
                modulus: 0,
            }
        } else {
            Fp {
                value: (self.modulus - self.value % self.modulus) % self.modulus,
                modulus: self.modulus,
            }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, m) = Fp::unify(self, rhs);
        if m == 0 {
            Fp {
                value: a.wrapping_mul(b),
                modulus: 0,
            }
        } else {
            Fp {
                value: ((a as u128 * b as u128) % m as u128) as u64,
                modulus: m,
            }
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let (_, _, m) = Fp::unify(self, rhs);
        assert!(m > 0, "division between unbound Fp literals");
        let rhs = Fp {
            value: rhs.value % m,
            modulus: m,
        };
        let lhs = Fp {
            value: self.value % m,
            modulus: m,
        };
        lhs * rhs.inverse()
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        if self.modulus == 0 {
            self.value == 0
        } else {
            self.value % self.modulus == 0
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(3, 7);
        let b = Fp::new(5, 7);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a / b).value(), 2); // 3 * 5^{-1} = 3 * 3 = 2 mod 7
        assert_eq!((-a).value(), 4);
    }

    #[test]
    fn fp_literals_rebind() {
        let a = Fp::new(4, 5);
        let one = Fp::one();
        assert_eq!((a + one).value(), 0);
        assert!((a + one).is_zero());
        assert!(Fp::zero().is_zero());
    }

    #[test]
    fn fp_negative_input() {
        assert_eq!(Fp::new(-1, 5).value(), 4);
        assert_eq!(Fp::from_int(&Int::from(-9), 5).value(), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
