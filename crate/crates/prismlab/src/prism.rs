//! Prism verification, orientation normalization, transversal/crystalline
//! classification, and the nine-condition regular-sequence cross-check.
//!
//! The base is the truncated window of Z_p[|T_1..T_n|] with a validated
//! δ-structure. An orientation is a distinguished element d of the maximal
//! ideal; the prism condition p ∈ (d, φ(d)) is certified by an explicit
//! linear solve over the window, and every orientation is normalized to the
//! shape p − f with f free of constant term.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, FpPoly, Monomial, TruncSeries};
use crate::delta::{DeltaError, DeltaRingSpec};
use crate::exactalg::{howell_solve, HowellSolution, ZpnMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrismError {
    #[error("element is not in the maximal ideal (constant term {constant} is a unit)")]
    NotInMaximalIdeal { constant: String },
    #[error("element is not distinguished: δ(d) has constant term {delta_constant}, not a unit")]
    NotDistinguished { delta_constant: String },
    #[error("no solution to p = a·d + b·φ(d) at the working precision; system over {unknowns} window unknowns")]
    MembershipFailed { unknowns: usize },
    #[error("normalization unit u = 1−g is not a unit (u = {u}); contradicts distinguishedness — internal inconsistency")]
    NormalizationFailed { u: String },
    #[error("degree window too small: need cap ≥ {needed}, have {have}")]
    WindowTooSmall { needed: u32, have: u32 },
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrismKind {
    Transversal,
    Crystalline,
}

/// A verified oriented prism over the truncated base.
#[derive(Debug, Clone, Serialize)]
pub struct Prism {
    #[serde(skip)]
    spec: DeltaRingSpec,
    orientation: TruncSeries,
    normalized_f: TruncSeries,
    kind: PrismKind,
    certificate: PrismCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrismCertificate {
    /// Constant coefficient of δ(d), shown to be a unit.
    pub delta_constant: String,
    /// Witness pair for p = a·d + b·φ(d) over the window.
    pub membership_a: String,
    pub membership_b: String,
    /// The unit u with p − f = u^{-1}·d.
    pub normalization_unit: String,
    /// Derived (p, I)-completeness is structural: window elements are finite
    /// sums, so completeness is recorded rather than tested.
    pub completeness: &'static str,
}

/// Rewrite a distinguished orientation to the canonical shape: returns
/// (f, u) with p − f = u^{-1}·d, f free of constant term, u a unit scalar.
///
/// The decomposition follows the constructive proof: p − d = p·g + h with
/// h the positive-degree part, u = 1 − g, f = u^{-1}·h.
pub fn normalize_orientation(
    spec: &DeltaRingSpec,
    d: &TruncSeries,
) -> Result<(TruncSeries, TruncSeries), PrismError> {
    let ring = spec.ring();
    if !d.in_max_ideal() {
        return Err(PrismError::NotInMaximalIdeal {
            constant: d.constant_term().to_string(),
        });
    }
    if !spec.is_distinguished(d)? {
        return Err(PrismError::NotDistinguished {
            delta_constant: spec.delta(d)?.constant_term().to_string(),
        });
    }
    let p_minus_d = TruncSeries::p(ring).try_sub(d)?;
    let g = p_minus_d.constant_term().div_exact_p()?;
    let h = p_minus_d.positive_part();
    // The division determines g one digit short of full precision; any lift
    // keeps p·g = constant(p−d) exact, so the identity below holds either
    // way. The centered representative is chosen because it reproduces the
    // hand construction on integer examples (g = −1 rather than p^{N−1}−1).
    let half = crate::arith::p_pow(ring.prime(), g.precision()) / 2;
    let g_lift: i128 = if g.value() > half {
        g.value() as i128 - crate::arith::p_pow(ring.prime(), g.precision()) as i128
    } else {
        g.value() as i128
    };
    let u = TruncSeries::one(ring).try_sub(&TruncSeries::scalar(ring, g_lift))?;
    if !u.constant_term().is_unit() {
        return Err(PrismError::NormalizationFailed { u: u.to_string() });
    }
    let u_inv = u.try_inv()?;
    let f = u_inv.try_mul(&h)?;
    // Exact identity check in the window: p − f = u^{-1}·d.
    let lhs = TruncSeries::p(ring).try_sub(&f)?;
    let rhs = u_inv.try_mul(d)?;
    debug_assert_eq!(lhs, rhs, "normalization identity failed");
    if lhs != rhs {
        return Err(PrismError::NormalizationFailed { u: u.to_string() });
    }
    Ok((f, u))
}

/// Verify the prism axioms for orientation `d` and return the certified
/// prism: d distinguished, p ∈ (d, φ(d)) with an explicit witness, kind
/// classified from the fiber of the normalized orientation.
pub fn verify_prism(spec: &DeltaRingSpec, d: &TruncSeries) -> Result<Prism, PrismError> {
    let ring = spec.ring();
    if !d.in_max_ideal() {
        return Err(PrismError::NotInMaximalIdeal {
            constant: d.constant_term().to_string(),
        });
    }
    let delta_d = spec.delta(d)?;
    if !delta_d.constant_term().is_unit() {
        return Err(PrismError::NotDistinguished {
            delta_constant: delta_d.constant_term().to_string(),
        });
    }

    // Membership p = a·d + b·φ(d): a linear system over Z/p^N indexed by the
    // window monomials. Unknowns are the coefficients of a and b.
    let phi_d = spec.phi(d)?;
    let monomials = Monomial::all_up_to(ring.nvars(), ring.degree_cap());
    let mut rows: Vec<Vec<u64>> = vec![vec![0; 2 * monomials.len()]; monomials.len()];
    for (j, m) in monomials.iter().enumerate() {
        let m_series = TruncSeries::from_terms(ring, vec![(m.clone(), 1)]).expect("in window");
        let col_d = m_series.try_mul(d)?;
        let col_phi = m_series.try_mul(&phi_d)?;
        for (i, mu) in monomials.iter().enumerate() {
            rows[i][j] = col_d.coeff(mu).value();
            rows[i][monomials.len() + j] = col_phi.coeff(mu).value();
        }
    }
    let matrix = ZpnMatrix::from_rows(ring.prime(), ring.precision(), rows).expect("rectangular");
    let mut target = vec![0u64; monomials.len()];
    let one_pos = monomials
        .iter()
        .position(|m| m.is_one())
        .expect("1 is in the window");
    target[one_pos] = ring.prime() as u64;
    let (a, b) = match howell_solve(&matrix, &target).expect("dimensions agree") {
        HowellSolution::Solved { particular, .. } => {
            let a_terms: Vec<(Monomial, i128)> = monomials
                .iter()
                .enumerate()
                .map(|(j, m)| (m.clone(), particular[j] as i128))
                .collect();
            let b_terms: Vec<(Monomial, i128)> = monomials
                .iter()
                .enumerate()
                .map(|(j, m)| (m.clone(), particular[monomials.len() + j] as i128))
                .collect();
            (
                TruncSeries::from_terms(ring, a_terms).expect("window"),
                TruncSeries::from_terms(ring, b_terms).expect("window"),
            )
        }
        HowellSolution::NoSolution => {
            return Err(PrismError::MembershipFailed {
                unknowns: 2 * monomials.len(),
            })
        }
    };
    // Re-check the witness end to end.
    let recombined = a.try_mul(d)?.try_add(&b.try_mul(&phi_d)?)?;
    debug_assert_eq!(recombined, TruncSeries::p(ring));

    let (f, u) = normalize_orientation(spec, d)?;
    let kind = classify_fiber(&f.fiber_reduce());
    Ok(Prism {
        spec: spec.clone(),
        orientation: d.clone(),
        normalized_f: f,
        kind,
        certificate: PrismCertificate {
            delta_constant: delta_d.constant_term().to_string(),
            membership_a: a.to_string(),
            membership_b: b.to_string(),
            normalization_unit: u.to_string(),
            completeness: "derived (p, I)-completeness holds structurally in the window model",
        },
    })
}

fn classify_fiber(fbar: &FpPoly) -> PrismKind {
    if fbar.is_zero() {
        PrismKind::Crystalline
    } else {
        PrismKind::Transversal
    }
}

impl Prism {
    pub fn spec(&self) -> &DeltaRingSpec {
        &self.spec
    }

    pub fn orientation(&self) -> &TruncSeries {
        &self.orientation
    }

    /// The normalized orientation: p − f generates the same ideal as d.
    pub fn normalized_f(&self) -> &TruncSeries {
        &self.normalized_f
    }

    pub fn kind(&self) -> PrismKind {
        self.kind
    }

    pub fn certificate(&self) -> &PrismCertificate {
        &self.certificate
    }

    /// Crystalline iff the fiber of the normalized orientation vanishes.
    pub fn classify(&self) -> PrismKind {
        self.kind
    }
}

/// One of the nine regular-sequence conditions, with its evaluation evidence.
#[derive(Debug, Clone, Serialize)]
pub struct CondVerdict {
    pub index: u32,
    pub condition: String,
    pub holds: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegseqReport {
    pub conditions: Vec<CondVerdict>,
    pub i_max: u32,
    pub all_agree: bool,
    pub overall: bool,
}

/// Evaluate the nine equivalent regular-sequence conditions for the prism's
/// orientation d over the window base A.
///
/// Evaluation semantics, each exact within the model:
/// - p is regular on A structurally: every coefficient lives in Z/p^N, and
///   p·x = 0 at precision N forces x = 0 at precision N−1.
/// - φ^a(d) is regular on A when d ≠ 0: the ambient ring is a domain and φ is
///   injective on it (it is p-torsion-free and lifts the Frobenius).
/// - x regular on A/p: the fiber is the polynomial domain, so the criterion
///   is fiber(x) ≠ 0; for x = φ^a(d) that fiber is fiber(d)^{p^a}, computed
///   termwise (Frobenius is monomial-wise in characteristic p), never
///   truncated.
/// - p regular on A/x for x = unit·(p − g): exact cancellation argument — if
///   p·t = q·x then q̄·ḡ = 0 in the fiber domain, so q = p·q′ and t ∈ (x);
///   the criterion is fiber(x) ≠ 0.
/// - twisted pairs (φ^{a}(d), φ^{b}(d)), a ≠ b: evaluated through the same
///   fiber criterion on both elements.
pub fn regseq_suite(prism: &Prism, i_max: u32) -> Result<RegseqReport, PrismError> {
    let ring = prism.spec.ring();
    let f = &prism.normalized_f;
    let f_deg = f.degree().unwrap_or(0);
    let needed = ring.prime() * f_deg;
    if f_deg > 0 && ring.degree_cap() < needed {
        return Err(PrismError::WindowTooSmall {
            needed,
            have: ring.degree_cap(),
        });
    }

    let d_nonzero = !prism.orientation.is_zero();
    let dbar = prism.orientation.fiber_reduce();
    // fiber(φ^a(d)) = fiber(d)^{p^a}, exact and sparse.
    let fiber_pow = |a: u32| dbar.frobenius_power(a);

    let p_reg_on_a = (
        true,
        "structural: coefficients are p-adic digits; p·x = 0 at precision N forces x ≡ 0 at precision N−1".to_string(),
    );
    let twist_reg_on_a = |a: u32| {
        (
            d_nonzero,
            format!(
                "φ^{a}(d) ≠ 0 in the domain window (d {}, φ injective)",
                if d_nonzero { "nonzero" } else { "zero" }
            ),
        )
    };
    let reg_on_a_mod_p = |a: u32| {
        let fb = fiber_pow(a);
        (
            !fb.is_zero(),
            format!("fiber(φ^{a}(d)) = {fb} in the polynomial domain"),
        )
    };
    let p_reg_mod_twist = |a: u32| {
        let fb = fiber_pow(a);
        (
            !fb.is_zero(),
            format!("p regular on A/φ^{a}(d) iff fiber(φ^{a}(d)) = {fb} is nonzero"),
        )
    };
    let twist_reg_mod_twist = |b: u32, a: u32| {
        let fb = fiber_pow(b);
        (
            !fb.is_zero(),
            format!("φ^{b}(d) regular on A/φ^{a}(d) iff fiber(φ^{b}(d)) = {fb} is nonzero"),
        )
    };

    let pair = |first: (bool, String), second: (bool, String)| {
        (
            first.0 && second.0,
            format!("first: {}; second: {}", first.1, second.1),
        )
    };

    let mut conditions = Vec::new();
    let mut push = |index: u32, name: String, v: (bool, String)| {
        conditions.push(CondVerdict {
            index,
            condition: name,
            holds: v.0,
            evidence: v.1,
        });
    };

    push(
        1,
        "p, d regular on A".into(),
        pair(p_reg_on_a.clone(), reg_on_a_mod_p(0)),
    );
    push(
        2,
        "d, p regular on A".into(),
        pair(twist_reg_on_a(0), p_reg_mod_twist(0)),
    );
    push(
        3,
        "φ(d), d regular on A".into(),
        pair(twist_reg_on_a(1), twist_reg_mod_twist(0, 1)),
    );
    push(
        4,
        "d, φ(d) regular on A".into(),
        pair(twist_reg_on_a(0), twist_reg_mod_twist(1, 0)),
    );
    push(
        5,
        "p, φ(d) regular on A".into(),
        pair(p_reg_on_a.clone(), reg_on_a_mod_p(1)),
    );
    push(
        6,
        "φ(d), p regular on A".into(),
        pair(twist_reg_on_a(1), p_reg_mod_twist(1)),
    );

    // Conditions quantified over all i (and j): checked to the finite prefix
    // i ≤ i_max, and labeled as such.
    let mut all7 = (true, Vec::new());
    let mut all8 = (true, Vec::new());
    let mut all9 = (true, Vec::new());
    for i in 0..=i_max {
        let c7 = pair(p_reg_on_a.clone(), reg_on_a_mod_p(i + 1));
        all7.0 &= c7.0;
        all7.1.push(format!("i={i}: {}", c7.0));
        let c8 = pair(twist_reg_on_a(i + 1), p_reg_mod_twist(i + 1));
        all8.0 &= c8.0;
        all8.1.push(format!("i={i}: {}", c8.0));
        for j in 0..=i_max {
            if i == j {
                continue;
            }
            let c9 = pair(twist_reg_on_a(i + 1), twist_reg_mod_twist(j + 1, i + 1));
            all9.0 &= c9.0;
            all9.1.push(format!("i={i},j={j}: {}", c9.0));
        }
    }
    push(
        7,
        format!("p, φ^{{i+1}}(d) regular for all i (checked to i_max={i_max})"),
        (all7.0, all7.1.join("; ")),
    );
    push(
        8,
        format!("φ^{{i+1}}(d), p regular for all i (checked to i_max={i_max})"),
        (all8.0, all8.1.join("; ")),
    );
    push(
        9,
        format!("φ^{{i+1}}(d), φ^{{j+1}}(d) regular for all i ≠ j (checked to i_max={i_max})"),
        (all9.0, all9.1.join("; ")),
    );

    let overall = conditions[0].holds;
    let all_agree = conditions.iter().all(|c| c.holds == overall);
    Ok(RegseqReport {
        conditions,
        i_max,
        all_agree,
        overall,
    })
}
