//! δ-ring structures on the truncated window.
//!
//! A δ-structure is carried entirely by the Frobenius lift φ: it is the ring
//! endomorphism substituting each variable by its declared image, and
//! δ(a) = (φ(a) − a^p)/p is derived from it. Keeping φ as the single source of
//! truth localizes the precision decrement (the division by p) in one code
//! path. The division is exact whenever the images reduce to p-th powers
//! modulo p, which construction-time validation guarantees; a non-divisible
//! coefficient therefore indicates internal corruption and aborts loudly.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Monomial, RingSpec, TruncSeries};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("Frobenius image for variable {var} is invalid: {reason}")]
    InvalidPhiImage { var: String, reason: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A δ-ring window: the base ring together with one Frobenius image per
/// variable. The residue coefficients are F_p, where the lift is the identity
/// on scalars.
#[derive(Debug, Clone)]
pub struct DeltaRingSpec {
    ring: Arc<RingSpec>,
    phi_images: Vec<TruncSeries>,
}

impl DeltaRingSpec {
    /// The default structure φ(T_i) = T_i^p (every variable has δ = 0).
    pub fn rank_one(ring: &Arc<RingSpec>) -> Self {
        let images = (0..ring.nvars())
            .map(|i| TruncSeries::var(ring, i).pow(ring.prime()))
            .collect();
        DeltaRingSpec {
            ring: ring.clone(),
            phi_images: images,
        }
    }

    /// A custom Frobenius lift. Each image must (a) have no constant term, so
    /// substitution descends to the degree window, and (b) reduce to T_i^p
    /// modulo p, so φ lifts the p-power Frobenius of the fiber.
    pub fn new(ring: &Arc<RingSpec>, images: Vec<TruncSeries>) -> Result<Self, DeltaError> {
        if images.len() != ring.nvars() {
            return Err(DeltaError::InvalidPhiImage {
                var: "*".into(),
                reason: format!("expected {} images, got {}", ring.nvars(), images.len()),
            });
        }
        // The p-th power of a variable must fit in the window for the
        // structure to be expressible at all.
        if ring.nvars() > 0 && ring.degree_cap() < ring.prime() {
            return Err(DeltaError::InvalidPhiImage {
                var: "*".into(),
                reason: format!(
                    "degree cap {} cannot hold T^p with p = {}",
                    ring.degree_cap(),
                    ring.prime()
                ),
            });
        }
        for (i, img) in images.iter().enumerate() {
            let var = ring.vars()[i].clone();
            if img.ring() != ring && !Arc::ptr_eq(img.ring(), ring) {
                return Err(DeltaError::InvalidPhiImage {
                    var,
                    reason: "image lives in a different window".into(),
                });
            }
            if !img.has_no_constant() {
                return Err(DeltaError::InvalidPhiImage {
                    var,
                    reason: "image has a constant term; substitution would not respect the degree window".into(),
                });
            }
            let expected = Monomial::var(i, ring.nvars()).pow(ring.prime());
            let fiber = img.fiber_reduce();
            let target =
                crate::arith::FpPoly::from_terms(ring.prime(), ring.nvars(), vec![(expected, 1)]);
            if fiber != target {
                return Err(DeltaError::InvalidPhiImage {
                    var,
                    reason: format!(
                        "image reduces to {fiber} mod p, expected the p-th power of the variable"
                    ),
                });
            }
        }
        Ok(DeltaRingSpec {
            ring: ring.clone(),
            phi_images: images,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn phi_images(&self) -> &[TruncSeries] {
        &self.phi_images
    }

    /// The Frobenius lift: identity on coefficients, T_i ↦ phi_images[i].
    /// Ring-homomorphic by construction; precision is preserved.
    pub fn phi(&self, a: &TruncSeries) -> Result<TruncSeries, DeltaError> {
        Ok(a.substitute(&self.phi_images)?)
    }

    /// δ(a) = (φ(a) − a^p)/p at precision one less than the input.
    ///
    /// The numerator is divisible by p because φ lifts the Frobenius; a
    /// remainder would contradict the validated structure, so it panics
    /// rather than returning an error.
    pub fn delta(&self, a: &TruncSeries) -> Result<TruncSeries, DeltaError> {
        if a.precision() < 2 {
            return Err(DeltaError::Arith(ArithError::PrecisionExhausted {
                needed: 2,
                have: a.precision(),
            }));
        }
        let numerator = self.phi(a)?.try_sub(&a.pow(self.ring.prime()))?;
        match numerator.div_exact_p() {
            Ok(d) => Ok(d),
            Err(ArithError::NotDivisible { value, prime }) => panic!(
                "Frobenius-lift invariant violated: φ(a) − a^p has coefficient {value} \
                 not divisible by {prime} for a = {a}; the δ-structure is corrupt"
            ),
            Err(e) => Err(e.into()),
        }
    }

    /// Distinguished test: δ(d) is a unit of the local window, i.e. its
    /// constant term is a unit mod p.
    pub fn is_distinguished(&self, d: &TruncSeries) -> Result<bool, DeltaError> {
        Ok(self.delta(d)?.constant_term().is_unit())
    }

    /// Rank-one test: δ(a) vanishes identically (at the decremented precision,
    /// within the window).
    pub fn is_rank_one(&self, a: &TruncSeries) -> Result<bool, DeltaError> {
        Ok(self.delta(a)?.is_zero())
    }

    /// Sample-based check of the two δ-ring laws and the Frobenius-fiber
    /// compatibility. Violations are report content, not errors; each sample
    /// derives its generator from (seed, index) so runs are reproducible and
    /// parallelizable.
    pub fn check_delta_axioms(&self, sample_count: u32, seed: u64) -> AxiomReport {
        let unit_laws_hold = {
            let zero = TruncSeries::zero(&self.ring);
            let one = TruncSeries::one(&self.ring);
            self.delta(&zero).map(|d| d.is_zero()).unwrap_or(false)
                && self.delta(&one).map(|d| d.is_zero()).unwrap_or(false)
        };
        let outcomes: Vec<Vec<AxiomViolation>> = par::map_indexed(sample_count as usize, |i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15));
            let a = sample_series(&self.ring, &mut rng);
            let b = sample_series(&self.ring, &mut rng);
            self.check_pair(&a, &b)
        });
        let mut violations: Vec<AxiomViolation> = outcomes.into_iter().flatten().collect();
        if !unit_laws_hold {
            violations.push(AxiomViolation {
                law: "units".into(),
                witness_a: "0".into(),
                witness_b: "1".into(),
                detail: "δ(0) or δ(1) is nonzero".into(),
            });
        }
        AxiomReport {
            samples: sample_count,
            unit_laws_hold,
            violations,
        }
    }

    fn check_pair(&self, a: &TruncSeries, b: &TruncSeries) -> Vec<AxiomViolation> {
        let p = self.ring.prime();
        let mut out = Vec::new();
        let da = self.delta(a).expect("precision");
        let db = self.delta(b).expect("precision");

        // Sum rule: δ(a+b) = δ(a) + δ(b) + (a^p + b^p − (a+b)^p)/p.
        let sum = a.try_add(b).expect("ring");
        let lhs = self.delta(&sum).expect("precision");
        let correction = a
            .pow(p)
            .try_add(&b.pow(p))
            .and_then(|s| s.try_sub(&sum.pow(p)))
            .expect("ring")
            .div_exact_p()
            .expect("binomial sums are divisible by p");
        let rhs = da
            .try_add(&db)
            .and_then(|s| s.try_add(&correction))
            .expect("ring");
        if lhs != rhs {
            out.push(AxiomViolation {
                law: "sum".into(),
                witness_a: a.to_string(),
                witness_b: b.to_string(),
                detail: format!("lhs = {lhs}, rhs = {rhs}"),
            });
        }

        // Product rule: δ(ab) = a^p δ(b) + b^p δ(a) + p δ(a) δ(b).
        let prod = a.try_mul(b).expect("ring");
        let lhs = self.delta(&prod).expect("precision");
        let rhs = a
            .pow(p)
            .try_mul(&db)
            .and_then(|x| b.pow(p).try_mul(&da).and_then(|y| x.try_add(&y)))
            .and_then(|x| da.try_mul(&db).map(|z| (x, z.mul_p())))
            .and_then(|(x, z)| x.try_add(&z))
            .expect("ring");
        if lhs != rhs {
            out.push(AxiomViolation {
                law: "product".into(),
                witness_a: a.to_string(),
                witness_b: b.to_string(),
                detail: format!("lhs = {lhs}, rhs = {rhs}"),
            });
        }

        // Frobenius-fiber compatibility: φ reduces to x ↦ x^p mod p. Both
        // sides live in the degree-window quotient of F_p[T], so the exact
        // p-th power is truncated to the cap before comparing.
        let fib = self.phi(a).expect("ring").fiber_reduce();
        let expect = a.fiber_reduce().pow(p).truncate(self.ring.degree_cap());
        if fib != expect {
            out.push(AxiomViolation {
                law: "frobenius-fiber".into(),
                witness_a: a.to_string(),
                witness_b: String::new(),
                detail: format!("fiber(φ(a)) = {fib}, fiber(a)^p = {expect}"),
            });
        }

        // Defining identity: φ(a) = a^p + p δ(a), compared at the decremented
        // precision where δ(a) is known.
        let lhs = self.phi(a).expect("ring").reduce_precision(da.precision());
        let rhs = a
            .pow(p)
            .reduce_precision(da.precision())
            .try_add(&da.mul_p())
            .expect("ring");
        if lhs != rhs {
            out.push(AxiomViolation {
                law: "phi-delta".into(),
                witness_a: a.to_string(),
                witness_b: String::new(),
                detail: format!("φ(a) = {lhs}, a^p + pδ(a) = {rhs}"),
            });
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: u32,
    pub unit_laws_hold: bool,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty() && self.unit_laws_hold
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub law: String,
    pub witness_a: String,
    pub witness_b: String,
    pub detail: String,
}

/// Random window element: a handful of terms of any degree the window holds,
/// coefficients uniform over Z/p^N.
pub(crate) fn sample_series<R: Rng>(ring: &Arc<RingSpec>, rng: &mut R) -> TruncSeries {
    let modulus = crate::arith::p_pow(ring.prime(), ring.precision());
    let nterms = rng.gen_range(1..=6u32);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        terms.push((
            sample_monomial(ring, rng),
            rng.gen_range(0..modulus) as i128,
        ));
    }
    TruncSeries::from_terms(ring, terms).expect("degrees within the cap")
}

pub(crate) fn sample_monomial<R: Rng>(ring: &Arc<RingSpec>, rng: &mut R) -> Monomial {
    let n = ring.nvars();
    if n == 0 {
        return Monomial::one(0);
    }
    loop {
        let exps: Vec<u32> = (0..n)
            .map(|_| rng.gen_range(0..=ring.degree_cap()))
            .collect();
        if exps.iter().sum::<u32>() <= ring.degree_cap() {
            return Monomial::from_exps(exps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, n: u32, d: u32, vars: &[&str]) -> Arc<RingSpec> {
        RingSpec::new(p, n, d, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn phi_of_variable_is_pth_power() {
        let r = ring(5, 3, 10, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let t = TruncSeries::var(&r, 0);
        assert_eq!(spec.phi(&t).unwrap(), t.pow(5));
    }

    #[test]
    fn phi_fixes_constants() {
        let r = ring(5, 3, 10, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let c = TruncSeries::scalar(&r, 42);
        assert_eq!(spec.phi(&c).unwrap(), c);
    }

    /// Oracle: substitution by hand, φ(p − T) = p − T^p.
    #[test]
    fn phi_of_p_minus_t() {
        let r = ring(5, 3, 10, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = TruncSeries::p(&r)
            .try_sub(&TruncSeries::var(&r, 0))
            .unwrap();
        let expect = TruncSeries::p(&r)
            .try_sub(&TruncSeries::var(&r, 0).pow(5))
            .unwrap();
        assert_eq!(spec.phi(&d).unwrap(), expect);
    }

    #[test]
    fn delta_vanishes_on_variables_zero_and_one() {
        let r = ring(3, 4, 9, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        for a in [
            TruncSeries::var(&r, 0),
            TruncSeries::zero(&r),
            TruncSeries::one(&r),
        ] {
            let d = spec.delta(&a).unwrap();
            assert!(d.is_zero(), "δ({a}) = {d}");
            assert_eq!(d.precision(), 3);
        }
        assert!(spec.is_rank_one(&TruncSeries::var(&r, 0)).unwrap());
        assert!(spec.is_rank_one(&TruncSeries::zero(&r)).unwrap());
        assert!(!spec.is_rank_one(&TruncSeries::p(&r)).unwrap());
    }

    /// Oracle: δ(p) = (p − p^p)/p = 1 − p^{p−1}; for p = 3 that is −8,
    /// i.e. 19 mod 27 at the decremented precision 3 of a precision-4 window.
    #[test]
    fn delta_of_p_is_one_minus_p_to_p_minus_one() {
        let r = ring(3, 4, 6, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = spec.delta(&TruncSeries::p(&r)).unwrap();
        assert_eq!(d.precision(), 3);
        assert_eq!(d.to_string(), "19");
    }

    /// Oracle: expanded by hand. φ(3−T) − (3−T)³ = −24 + 27T − 9T², so
    /// δ(3−T) = −8 + 9T − 3T² = 19 + 9T + 24T² mod 27.
    #[test]
    fn delta_of_p_minus_t_expansion() {
        let r = ring(3, 4, 6, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = TruncSeries::p(&r)
            .try_sub(&TruncSeries::var(&r, 0))
            .unwrap();
        let dd = spec.delta(&d).unwrap();
        assert_eq!(dd.to_string(), "24*T^2 + 9*T + 19");
        assert_eq!(dd.constant_term().residue(), 1);
    }

    /// Oracle: δ(2) = (2 − 2^p)/p; for p = 3 that is −2 = 25 mod 27.
    #[test]
    fn delta_of_two_by_fermat_quotient() {
        let r = ring(3, 4, 6, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let d = spec.delta(&TruncSeries::scalar(&r, 2)).unwrap();
        assert_eq!(d.to_string(), "25");
    }

    #[test]
    fn distinguished_elements() {
        let r = ring(5, 3, 10, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let t = TruncSeries::var(&r, 0);
        assert!(spec.is_distinguished(&TruncSeries::p(&r)).unwrap());
        assert!(!spec.is_distinguished(&t).unwrap());
        let d = TruncSeries::p(&r).try_sub(&t.pow(2)).unwrap();
        assert!(spec.is_distinguished(&d).unwrap());
    }

    #[test]
    fn precision_floor_is_enforced() {
        let r = ring(3, 1, 6, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let err = spec.delta(&TruncSeries::p(&r)).unwrap_err();
        assert!(matches!(
            err,
            DeltaError::Arith(ArithError::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn invalid_phi_images_rejected() {
        let r = ring(3, 3, 9, &["T"]);
        // Constant term breaks the window.
        let bad = TruncSeries::var(&r, 0)
            .pow(3)
            .try_add(&TruncSeries::one(&r))
            .unwrap();
        assert!(DeltaRingSpec::new(&r, vec![bad]).is_err());
        // Wrong fiber: T^3 + T mod 3 is not T^3... (T is not divisible by p).
        let bad = TruncSeries::var(&r, 0)
            .pow(3)
            .try_add(&TruncSeries::var(&r, 0))
            .unwrap();
        assert!(DeltaRingSpec::new(&r, vec![bad]).is_err());
        // T^3 + p·T is a legitimate lift: fiber is still T^3.
        let good = TruncSeries::var(&r, 0)
            .pow(3)
            .try_add(&TruncSeries::var(&r, 0).mul_p())
            .unwrap();
        assert!(DeltaRingSpec::new(&r, vec![good]).is_ok());
    }

    #[test]
    fn axioms_hold_on_seeded_samples() {
        for (p, n, d, vars) in [
            (3u32, 4u32, 6u32, vec!["T", "S"]),
            (2, 4, 5, vec!["T"]),
            (5, 2, 10, vec!["T"]),
        ] {
            let r = ring(p, n, d, &vars);
            let spec = DeltaRingSpec::rank_one(&r);
            let report = spec.check_delta_axioms(40, 42);
            assert!(
                report.all_hold(),
                "violations at p={p}: {:?}",
                report.violations
            );
        }
    }

    /// A non-default lift must satisfy the same axioms: φ(T) = T^p + p·T².
    #[test]
    fn axioms_hold_for_custom_lift() {
        let r = ring(3, 4, 9, &["T"]);
        let img = TruncSeries::var(&r, 0)
            .pow(3)
            .try_add(&TruncSeries::var(&r, 0).pow(2).mul_p())
            .unwrap();
        let spec = DeltaRingSpec::new(&r, vec![img]).unwrap();
        let report = spec.check_delta_axioms(30, 7);
        assert!(report.all_hold(), "{:?}", report.violations);
        // δ(T) = ((T^3 + 3T²) − T^3)/3 = T².
        let dt = spec.delta(&TruncSeries::var(&r, 0)).unwrap();
        assert_eq!(dt.to_string(), "T^2");
    }

    /// Products of maximal-ideal elements have non-unit δ: sampled form of the
    /// Jacobson-square containment.
    #[test]
    fn jacobson_square_law_on_samples() {
        let r = ring(3, 4, 6, &["T", "S"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let xc = rng.gen_range(0..81) as i128;
            let x = sample_series(&r, &mut rng)
                .positive_part()
                .try_add(&TruncSeries::scalar(&r, xc).mul_p())
                .unwrap();
            let y = sample_series(&r, &mut rng).positive_part();
            let prod = x.try_mul(&y).unwrap();
            let d = spec.delta(&prod).unwrap();
            assert_eq!(
                d.constant_term().residue(),
                0,
                "δ({prod}) has unit constant"
            );
        }
    }

    #[test]
    fn deterministic_reports() {
        let r = ring(3, 3, 6, &["T"]);
        let spec = DeltaRingSpec::rank_one(&r);
        let a = spec.check_delta_axioms(25, 99);
        let b = spec.check_delta_axioms(25, 99);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
