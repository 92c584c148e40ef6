//! Scalars in `Z/p^N` with a precision ledger.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("not a unit: {value} is divisible by {prime}")]
    NotAUnit { value: u64, prime: u32 },
    #[error("precision exhausted: need at least {needed} digits, have {have}")]
    PrecisionExhausted { needed: u32, have: u32 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{value} is not divisible by {prime}")]
    NotDivisible { value: u64, prime: u32 },
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
}

/// `p^k` as a `u64`; panics on overflow, which ring validation rules out.
pub(crate) fn p_pow(p: u32, k: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p as u64).expect("modulus overflow");
    }
    acc
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
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

/// Inverse of `a` mod `m` by extended Euclid, `None` when `gcd(a, m) != 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
    }
    if r0 != 1 {
        return None;
    }
    let m = m as i128;
    Some(((s0 % m + m) % m) as u64)
}

/// An element of `Z/p^precision`, stored as its least nonnegative residue.
///
/// Binary operations require equal primes (a structural invariant, enforced by
/// assertion) and produce the minimum of the two precisions: a digit we never
/// knew cannot reappear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecScalar {
    value: u64,
    prime: u32,
    precision: u32,
}

impl Serialize for PrecScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::fmt::Display for PrecScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.prime, self.precision)
    }
}

impl PrecScalar {
    pub fn new(value: i128, prime: u32, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        let m = p_pow(prime, precision) as i128;
        let v = ((value % m) + m) % m;
        PrecScalar {
            value: v as u64,
            prime,
            precision,
        }
    }

    pub fn zero(prime: u32, precision: u32) -> Self {
        Self::new(0, prime, precision)
    }

    pub fn one(prime: u32, precision: u32) -> Self {
        Self::new(1, prime, precision)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        p_pow(self.prime, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.prime as u64)
    }

    /// Residue mod p.
    pub fn residue(&self) -> u64 {
        self.value % self.prime as u64
    }

    /// p-adic valuation of the representative; `None` for zero (valuation >= precision).
    pub fn valuation(&self) -> Option<u32> {
        if self.value == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = self.value;
        while x.is_multiple_of(self.prime as u64) {
            x /= self.prime as u64;
            v += 1;
        }
        Some(v)
    }

    fn meet(&self, other: &Self) -> (u64, u32) {
        assert_eq!(self.prime, other.prime, "mixed primes");
        let prec = self.precision.min(other.precision);
        (p_pow(self.prime, prec), prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (m, prec) = self.meet(other);
        PrecScalar {
            value: (self.value % m + other.value % m) % m,
            prime: self.prime,
            precision: prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (m, prec) = self.meet(other);
        PrecScalar {
            value: (self.value % m + m - other.value % m) % m,
            prime: self.prime,
            precision: prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (m, prec) = self.meet(other);
        PrecScalar {
            value: mul_mod(self.value % m, other.value % m, m),
            prime: self.prime,
            precision: prec,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PrecScalar {
            value: (m - self.value) % m,
            prime: self.prime,
            precision: self.precision,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        PrecScalar {
            value: pow_mod(self.value, exp as u64, self.modulus()),
            prime: self.prime,
            precision: self.precision,
        }
    }

    /// Multiplicative inverse at the same precision; errors on non-units.
    pub fn inv(&self) -> Result<Self, ArithError> {
        if !self.is_unit() {
            return Err(ArithError::NotAUnit {
                value: self.value,
                prime: self.prime,
            });
        }
        let v = inv_mod(self.value, self.modulus()).expect("unit must invert");
        Ok(PrecScalar {
            value: v,
            prime: self.prime,
            precision: self.precision,
        })
    }

    /// Exact division by p: one digit shifts out, precision drops by one.
    pub fn div_exact_p(&self) -> Result<Self, ArithError> {
        if self.precision < 2 {
            return Err(ArithError::PrecisionExhausted {
                needed: 2,
                have: self.precision,
            });
        }
        if !self.value.is_multiple_of(self.prime as u64) {
            return Err(ArithError::NotDivisible {
                value: self.value,
                prime: self.prime,
            });
        }
        Ok(PrecScalar {
            value: self.value / self.prime as u64,
            prime: self.prime,
            precision: self.precision - 1,
        })
    }

    /// Forget digits down to `precision` (no-op when already at or below it).
    pub fn reduce_to(&self, precision: u32) -> Self {
        assert!(precision >= 1);
        if precision >= self.precision {
            return *self;
        }
        PrecScalar {
            value: self.value % p_pow(self.prime, precision),
            prime: self.prime,
            precision,
        }
    }
}

/// Inverse of a coefficient in `Z/p^N`. Contract-level alias for [`PrecScalar::inv`].
pub fn coeff_inv(a: &PrecScalar) -> Result<PrecScalar, ArithError> {
    a.inv()
}
