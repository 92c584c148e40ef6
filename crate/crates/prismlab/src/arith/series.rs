//! Truncated multivariate series over `Z/p^N` with a total-degree window.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::fppoly::FpPoly;
use super::monomial::Monomial;
use super::scalar::{inv_mod, mul_mod, p_pow, ArithError, PrecScalar};

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Shared description of a working window: the prime, the coefficient precision
/// `N`, the total-degree cap `D`, and the ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingSpec {
    prime: u32,
    precision: u32,
    degree_cap: u32,
    vars: Vec<String>,
}

impl RingSpec {
    pub fn new(
        prime: u32,
        precision: u32,
        degree_cap: u32,
        vars: Vec<String>,
    ) -> Result<Arc<Self>, ArithError> {
        if !is_prime(prime) {
            return Err(ArithError::InvalidRing(format!("{prime} is not prime")));
        }
        if precision < 1 {
            return Err(ArithError::InvalidRing(
                "precision must be at least 1".into(),
            ));
        }
        if degree_cap < 1 {
            return Err(ArithError::InvalidRing(
                "degree cap must be at least 1".into(),
            ));
        }
        // Keep p^N with headroom for u128 products.
        let bits = (prime as f64).log2() * precision as f64;
        if bits > 62.0 {
            return Err(ArithError::InvalidRing(format!(
                "p^N too large: {prime}^{precision} exceeds the 62-bit budget"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if v == "p" {
                return Err(ArithError::InvalidRing(
                    "variable name 'p' is reserved".into(),
                ));
            }
            if v.is_empty()
                || !v.chars().next().unwrap().is_ascii_alphabetic()
                || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(ArithError::InvalidRing(format!("bad variable name '{v}'")));
            }
            if !seen.insert(v.clone()) {
                return Err(ArithError::InvalidRing(format!("duplicate variable '{v}'")));
            }
        }
        Ok(Arc::new(RingSpec {
            prime,
            precision,
            degree_cap,
            vars,
        }))
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same window with a different precision (used by tests and the CLI overrides).
    pub fn with_precision(&self, precision: u32) -> Result<Arc<Self>, ArithError> {
        RingSpec::new(self.prime, precision, self.degree_cap, self.vars.clone())
    }
}

/// A truncated series: finitely many monomials of total degree at most the
/// ring's cap, coefficients in `Z/p^precision` for a single series-wide
/// precision, plus a saturation flag recording whether any nonzero term was
/// ever discarded past the cap during the series' computation history.
///
/// Equality is bit-exact on (ring, precision, terms); the saturation flag is
/// bookkeeping, not part of the value, so window-ring identities such as
/// `a*(b+c) == a*b + a*c` compare equal even when the two sides saturated
/// differently along the way.
#[derive(Debug, Clone)]
pub struct TruncSeries {
    ring: Arc<RingSpec>,
    precision: u32,
    terms: BTreeMap<Monomial, u64>,
    saturated: bool,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.precision == other.precision && self.terms == other.terms
    }
}

impl Eq for TruncSeries {}

impl Serialize for TruncSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for TruncSeries {
    /// Canonical text form: terms in descending degrevlex order, least
    /// nonnegative coefficients, explicit `*` and `^`. Round-trips through the
    /// expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", m.render(self.ring.vars()))?;
            } else {
                write!(f, "{}*{}", c, m.render(self.ring.vars()))?;
            }
        }
        Ok(())
    }
}

impl TruncSeries {
    fn from_map(
        ring: Arc<RingSpec>,
        precision: u32,
        map: BTreeMap<Monomial, u64>,
        saturated: bool,
    ) -> Self {
        debug_assert!(precision >= 1 && precision <= ring.precision());
        let modulus = p_pow(ring.prime(), precision);
        let mut terms = BTreeMap::new();
        for (m, c) in map {
            debug_assert!(m.degree() <= ring.degree_cap());
            let c = c % modulus;
            if c != 0 {
                terms.insert(m, c);
            }
        }
        TruncSeries {
            ring,
            precision,
            terms,
            saturated,
        }
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        TruncSeries {
            ring: ring.clone(),
            precision: ring.precision(),
            terms: BTreeMap::new(),
            saturated: false,
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::scalar(ring, 1)
    }

    pub fn scalar(ring: &Arc<RingSpec>, value: i128) -> Self {
        let c = PrecScalar::new(value, ring.prime(), ring.precision());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c.value());
        }
        TruncSeries {
            ring: ring.clone(),
            precision: ring.precision(),
            terms,
            saturated: false,
        }
    }

    /// The scalar `p` as a series.
    pub fn p(ring: &Arc<RingSpec>) -> Self {
        Self::scalar(ring, ring.prime() as i128)
    }

    pub fn var(ring: &Arc<RingSpec>, index: usize) -> Self {
        assert!(index < ring.nvars(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index, ring.nvars()), 1);
        TruncSeries {
            ring: ring.clone(),
            precision: ring.precision(),
            terms,
            saturated: false,
        }
    }

    /// Build from explicit (monomial, coefficient) pairs at full ring precision.
    /// Terms beyond the degree cap are rejected rather than silently dropped.
    pub fn from_terms(
        ring: &Arc<RingSpec>,
        terms: Vec<(Monomial, i128)>,
    ) -> Result<Self, ArithError> {
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        let modulus = p_pow(ring.prime(), ring.precision());
        for (m, c) in terms {
            if m.nvars() != ring.nvars() {
                return Err(ArithError::RingMismatch("monomial arity".into()));
            }
            if m.degree() > ring.degree_cap() {
                return Err(ArithError::InvalidRing(format!(
                    "term degree {} exceeds cap {}",
                    m.degree(),
                    ring.degree_cap()
                )));
            }
            let c = (((c % modulus as i128) + modulus as i128) % modulus as i128) as u64;
            let e = map.entry(m).or_insert(0);
            *e = (*e + c) % modulus;
        }
        map.retain(|_, c| *c != 0);
        Ok(TruncSeries {
            ring: ring.clone(),
            precision: ring.precision(),
            terms: map,
            saturated: false,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, PrecScalar)> + '_ {
        self.terms.iter().map(move |(m, &c)| {
            (
                m,
                PrecScalar::new(c as i128, self.ring.prime(), self.precision),
            )
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> PrecScalar {
        let c = self.terms.get(m).copied().unwrap_or(0);
        PrecScalar::new(c as i128, self.ring.prime(), self.precision)
    }

    pub fn constant_term(&self) -> PrecScalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Maximum total degree of a nonzero term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Minimum total degree of a nonzero term (the order).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// True when the constant term is divisible by p, i.e. the series lies in
    /// the maximal ideal `(p, T_1..T_n)` of the window model.
    pub fn in_max_ideal(&self) -> bool {
        self.constant_term().residue() == 0
    }

    /// True when every nonzero term has positive degree (no constant at all).
    pub fn has_no_constant(&self) -> bool {
        self.constant_term().is_zero()
    }

    fn check_ring(&self, other: &Self) -> Result<(), ArithError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(ArithError::RingMismatch(format!(
                "left window ({}, N={}, D={}) vs right ({}, N={}, D={})",
                self.ring.prime(),
                self.ring.precision(),
                self.ring.degree_cap(),
                other.ring.prime(),
                other.ring.precision(),
                other.ring.degree_cap()
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_ring(other)?;
        let prec = self.precision.min(other.precision);
        let modulus = p_pow(self.ring.prime(), prec);
        let mut map = BTreeMap::new();
        for (m, &c) in self.terms.iter().chain(other.terms.iter()) {
            let e = map.entry(m.clone()).or_insert(0u64);
            *e = (*e + c % modulus) % modulus;
        }
        Ok(Self::from_map(
            self.ring.clone(),
            prec,
            map,
            self.saturated || other.saturated,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let modulus = p_pow(self.ring.prime(), self.precision);
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), (modulus - c) % modulus))
            .collect();
        Self::from_map(self.ring.clone(), self.precision, terms, self.saturated)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_ring(other)?;
        let prec = self.precision.min(other.precision);
        let modulus = p_pow(self.ring.prime(), prec);
        let cap = self.ring.degree_cap();
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        let mut dropped = false;
        for (ma, &ca) in &self.terms {
            let ca = ca % modulus;
            if ca == 0 {
                continue;
            }
            for (mb, &cb) in &other.terms {
                let cb = cb % modulus;
                if cb == 0 {
                    continue;
                }
                let c = mul_mod(ca, cb, modulus);
                if c == 0 {
                    continue;
                }
                if ma.degree() + mb.degree() > cap {
                    dropped = true;
                    continue;
                }
                let m = ma.mul(mb);
                let e = map.entry(m).or_insert(0);
                *e = (*e + c) % modulus;
            }
        }
        Ok(Self::from_map(
            self.ring.clone(),
            prec,
            map,
            self.saturated || other.saturated || dropped,
        ))
    }

    pub fn mul_scalar(&self, c: &PrecScalar) -> Self {
        assert_eq!(c.prime(), self.ring.prime(), "mixed primes");
        let prec = self.precision.min(c.precision());
        let modulus = p_pow(self.ring.prime(), prec);
        let terms = self
            .terms
            .iter()
            .map(|(m, &v)| {
                (
                    m.clone(),
                    mul_mod(v % modulus, c.value() % modulus, modulus),
                )
            })
            .collect();
        Self::from_map(self.ring.clone(), prec, terms, self.saturated)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = TruncSeries {
            ring: self.ring.clone(),
            precision: self.precision,
            terms: {
                let mut t = BTreeMap::new();
                t.insert(Monomial::one(self.ring.nvars()), 1);
                t
            },
            saturated: self.saturated && exp == 0,
        };
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Inverse of a series whose constant term is a unit: write
    /// `u = c*(1 - w)` with `w` of positive order and sum the geometric series,
    /// which terminates because `w^k` vanishes beyond the degree window.
    pub fn try_inv(&self) -> Result<Self, ArithError> {
        let c = self.constant_term();
        if !c.is_unit() {
            return Err(ArithError::NotAUnit {
                value: c.value(),
                prime: c.prime(),
            });
        }
        let modulus = p_pow(self.ring.prime(), self.precision);
        let cinv = inv_mod(c.value(), modulus).expect("unit");
        let cinv = PrecScalar::new(cinv as i128, self.ring.prime(), self.precision);
        // w = 1 - c^{-1} * self has zero constant term.
        let one = {
            let mut t = BTreeMap::new();
            t.insert(Monomial::one(self.ring.nvars()), 1);
            Self::from_map(self.ring.clone(), self.precision, t, false)
        };
        let w = one.try_sub(&self.mul_scalar(&cinv))?;
        debug_assert!(w.constant_term().is_zero());
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.ring.degree_cap() {
            power = power.try_mul(&w)?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.mul_scalar(&cinv))
    }

    /// Substitute `images[i]` for variable `i`. Every image must lie in the
    /// maximal ideal with no constant term so the substitution descends to the
    /// degree-window quotient; the Frobenius lift of the delta layer satisfies
    /// this by validation.
    pub fn substitute(&self, images: &[TruncSeries]) -> Result<Self, ArithError> {
        if images.len() != self.ring.nvars() {
            return Err(ArithError::RingMismatch(
                "wrong image count for substitution".into(),
            ));
        }
        let mut prec = self.precision;
        for img in images {
            self.check_ring(img)?;
            if !img.has_no_constant() {
                return Err(ArithError::InvalidRing(
                    "substitution image has a constant term, which breaks the degree window".into(),
                ));
            }
            prec = prec.min(img.precision);
        }
        let mut acc = TruncSeries {
            ring: self.ring.clone(),
            precision: prec,
            terms: BTreeMap::new(),
            saturated: self.saturated,
        };
        // Power cache per variable, built lazily to each monomial's need.
        let mut powers: Vec<Vec<TruncSeries>> = images
            .iter()
            .map(|img| {
                vec![
                    TruncSeries::one(&self.ring).reduce_precision(prec),
                    img.reduce_precision(prec),
                ]
            })
            .collect();
        for (m, &c) in &self.terms {
            let mut term = TruncSeries::scalar(&self.ring, c as i128).reduce_precision(prec);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let last = powers[i].last().unwrap().clone();
                    powers[i].push(last.try_mul(&images[i].reduce_precision(prec))?);
                }
                term = term.try_mul(&powers[i][e as usize])?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Reduce the residue of every coefficient mod p; exact output, no window.
    pub fn fiber_reduce(&self) -> FpPoly {
        let p = self.ring.prime() as u64;
        let terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), c % p))
            .collect();
        FpPoly::from_terms(self.ring.prime(), self.ring.nvars(), terms)
    }

    /// Exact division by p: every coefficient must be divisible; the precision
    /// ledger drops by one digit.
    pub fn div_exact_p(&self) -> Result<Self, ArithError> {
        if self.precision < 2 {
            return Err(ArithError::PrecisionExhausted {
                needed: 2,
                have: self.precision,
            });
        }
        let p = self.ring.prime() as u64;
        let mut map = BTreeMap::new();
        for (m, &c) in &self.terms {
            if c % p != 0 {
                return Err(ArithError::NotDivisible {
                    value: c,
                    prime: self.ring.prime(),
                });
            }
            map.insert(m.clone(), c / p);
        }
        Ok(Self::from_map(
            self.ring.clone(),
            self.precision - 1,
            map,
            self.saturated,
        ))
    }

    /// Multiply by the scalar p (precision does not change; top digit shifts out).
    pub fn mul_p(&self) -> Self {
        let modulus = p_pow(self.ring.prime(), self.precision);
        let p = self.ring.prime() as u64;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), mul_mod(c, p, modulus)))
            .collect();
        Self::from_map(self.ring.clone(), self.precision, terms, self.saturated)
    }

    pub fn reduce_precision(&self, precision: u32) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        assert!(precision >= 1);
        Self::from_map(
            self.ring.clone(),
            precision,
            self.terms.clone(),
            self.saturated,
        )
    }

    /// The positive-degree part (constant term removed).
    pub fn positive_part(&self) -> Self {
        let mut map = self.terms.clone();
        map.remove(&Monomial::one(self.ring.nvars()));
        Self::from_map(self.ring.clone(), self.precision, map, self.saturated)
    }

    /// Mark as saturated (used when a caller knows a window drop occurred
    /// upstream of this representation).
    pub fn with_saturation(mut self, saturated: bool) -> Self {
        self.saturated = self.saturated || saturated;
        self
    }
}

/// Contract-level alias for [`TruncSeries::try_mul`].
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, ArithError> {
    a.try_mul(b)
}

/// Contract-level alias for [`TruncSeries::try_inv`].
pub fn series_inv(a: &TruncSeries) -> Result<TruncSeries, ArithError> {
    a.try_inv()
}

/// Contract-level alias for [`TruncSeries::fiber_reduce`].
pub fn fiber_reduce(a: &TruncSeries) -> FpPoly {
    a.fiber_reduce()
}
