//! Exact multivariate polynomials over `F_p` — the residue fiber carries no
//! truncation, so Frobenius powers and Groebner computations stay honest.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::monomial::{MonOrder, Monomial};
use super::scalar::{inv_mod, mul_mod};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpPoly {
    prime: u32,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Serialize for FpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = default_vars(self.nvars);
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", m.render(&vars))?;
            } else {
                write!(f, "{}*{}", c, m.render(&vars))?;
            }
        }
        Ok(())
    }
}

fn default_vars(n: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["T", "S", "U", "V", "W", "X"];
    (0..n)
        .map(|i| {
            NAMES
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or(format!("X{i}"))
        })
        .collect()
}

impl FpPoly {
    pub fn zero(prime: u32, nvars: usize) -> Self {
        FpPoly {
            prime,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(prime: u32, nvars: usize) -> Self {
        Self::scalar(prime, nvars, 1)
    }

    pub fn scalar(prime: u32, nvars: usize, c: i64) -> Self {
        let p = prime as i64;
        let c = ((c % p) + p) % p;
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::one(nvars), c as u64);
        }
        FpPoly {
            prime,
            nvars,
            terms,
        }
    }

    pub fn var(prime: u32, nvars: usize, index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index, nvars), 1);
        FpPoly {
            prime,
            nvars,
            terms,
        }
    }

    pub fn from_terms(prime: u32, nvars: usize, terms: Vec<(Monomial, u64)>) -> Self {
        let p = prime as u64;
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            let e = map.entry(m).or_insert(0);
            *e = (*e + c % p) % p;
        }
        map.retain(|_, c| *c != 0);
        FpPoly {
            prime,
            nvars,
            terms: map,
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant(&self) -> u64 {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.prime, self.nvars), (other.prime, other.nvars));
        let p = self.prime as u64;
        let mut map = self.terms.clone();
        for (m, &c) in &other.terms {
            let e = map.entry(m.clone()).or_insert(0);
            *e = (*e + c) % p;
        }
        map.retain(|_, c| *c != 0);
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms: map,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prime as u64;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), (p - c) % p))
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!((self.prime, self.nvars), (other.prime, other.nvars));
        let p = self.prime as u64;
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let c = mul_mod(ca, cb, p);
                if c == 0 {
                    continue;
                }
                let e = map.entry(ma.mul(mb)).or_insert(0);
                *e = (*e + c) % p;
            }
        }
        map.retain(|_, c| *c != 0);
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms: map,
        }
    }

    pub fn mul_scalar(&self, c: u64) -> Self {
        let p = self.prime as u64;
        let c = c % p;
        let terms = self
            .terms
            .iter()
            .map(|(m, &v)| (m.clone(), mul_mod(v, c, p)))
            .filter(|(_, v)| *v != 0)
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Self {
        let p = self.prime as u64;
        let c = c % p;
        let terms = self
            .terms
            .iter()
            .map(|(mm, &v)| (mm.mul(m), mul_mod(v, c, p)))
            .filter(|(_, v)| *v != 0)
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.prime, self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading (monomial, coefficient) under the given order.
    pub fn leading(&self, order: MonOrder) -> Option<(&Monomial, u64)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
            .map(|(m, &c)| (m, c))
    }

    /// Scale so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonOrder) -> Self {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => {
                let cinv = inv_mod(c, self.prime as u64).expect("field");
                self.mul_scalar(cinv)
            }
        }
    }

    /// Exact division by a factor; `None` when the division leaves a remainder.
    /// Used by the colon-ideal construction where divisibility is structural.
    pub fn exact_div(&self, divisor: &Self, order: MonOrder) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let p = self.prime as u64;
        let (dlm, dlc) = divisor.leading(order).unwrap();
        let dlm = dlm.clone();
        let dinv = inv_mod(dlc, p).expect("field");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.prime, self.nvars);
        while let Some((rlm, rlc)) = rem.leading(order) {
            let q = dlm.div_into(rlm)?;
            let qc = mul_mod(rlc, dinv, p);
            let qpoly = FpPoly::from_terms(self.prime, self.nvars, vec![(q, qc)]);
            quot = quot.add(&qpoly);
            rem = rem.sub(&qpoly.mul(divisor));
        }
        Some(quot)
    }

    /// The p^k-th power, using that x ↦ x^p is termwise in characteristic p:
    /// exponents scale by p^k and coefficients are fixed (Fermat). Stays
    /// sparse where the generic binary power would blow up.
    pub fn frobenius_power(&self, k: u32) -> Self {
        let factor = (self.prime as u64).checked_pow(k).expect("p^k fits") as u32;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.pow(factor), c))
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms,
        }
    }

    /// Drop every term of degree above `cap` — the image in the degree-window
    /// quotient ring that the truncated series layer works in.
    pub fn truncate(&self, cap: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= cap)
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars,
            terms,
        }
    }

    /// Insert an extra variable at index 0 (for elimination constructions).
    pub fn lift_aux(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut exps = vec![0u32];
                exps.extend_from_slice(m.exps());
                (Monomial::from_exps(exps), c)
            })
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars + 1,
            terms,
        }
    }

    /// Drop the variable at index 0; caller guarantees no term uses it.
    pub fn drop_aux(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                debug_assert_eq!(m.exps()[0], 0);
                (Monomial::from_exps(m.exps()[1..].to_vec()), c)
            })
            .collect();
        FpPoly {
            prime: self.prime,
            nvars: self.nvars - 1,
            terms,
        }
    }

    /// True if any term uses the variable at index 0.
    pub fn uses_aux(&self) -> bool {
        self.terms.keys().any(|m| m.exps()[0] > 0)
    }
}
