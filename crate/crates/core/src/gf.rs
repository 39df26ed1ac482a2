//! Exact arithmetic in prime fields `F_q` for small `q`.
//!
//! Hot loops elsewhere in the crate work on raw residues through the
//! [`PrimeField`] helpers; [`FieldElement`] is the checked public type that
//! carries its field along so mixed-field arithmetic is caught.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const DEFAULT_MAX_Q: u32 = 13;

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u32,
}

fn is_prime(n: u64) -> bool {
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

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_cap(q, DEFAULT_MAX_Q)
    }

    pub fn with_cap(q: u64, cap: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q > cap as u64 {
            return Err(Error::ModulusTooLarge { q, cap });
        }
        Ok(PrimeField { q: q as u32 })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.q as u64) as u32,
            field: *self,
        }
    }

    /// Reduces a signed integer into the field.
    pub fn elem_i64(&self, value: i64) -> FieldElement {
        self.elem(value.rem_euclid(self.q as i64) as u64)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |v| FieldElement {
            value: v,
            field: *self,
        })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.q;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via Fermat: `a^(q-2)`.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// An element of a [`PrimeField`], always kept in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

/// Checked field arithmetic; fails if the operands live in different fields.
pub fn arith(a: FieldElement, b: FieldElement, kind: ArithKind) -> Result<FieldElement> {
    a.field.check_same(&b.field)?;
    let f = a.field;
    let value = match kind {
        ArithKind::Add => f.add(a.value, b.value),
        ArithKind::Sub => f.sub(a.value, b.value),
        ArithKind::Mul => f.mul(a.value, b.value),
    };
    Ok(FieldElement { value, field: f })
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            value: self.field.pow(self.value, e),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mixed fields; use `arith` for the checked variant.
macro_rules! impl_op {
    ($trait:ident, $method:ident, $kind:expr) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                match arith(self, rhs, $kind) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

impl_op!(Add, add, ArithKind::Add);
impl_op!(Sub, sub, ArithKind::Sub);
impl_op!(Mul, mul, ArithKind::Mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

/// Canonical exponent under `x^q = x`: 0 stays 0, otherwise `1 + (e-1) mod (q-1)`.
#[inline]
pub fn reduce_exponent(e: u64, q: u32) -> u32 {
    if e == 0 {
        0
    } else {
        1 + ((e - 1) % (q as u64 - 1)) as u32
    }
}
