//! Presentation building over the power-series base: locate an orientation
//! of the shape `p − f` inside a kernel ideal, rewrite the remaining
//! generators modulo it, classify how small the base is for the presented
//! quotient, and verify change-of-basis data between two presentations.
//!
//! The orientation search is a rank condition: the `p`-coordinate of a
//! linear combination of kernel generators is the same combination of their
//! `p`-coordinates (products of two maximal-ideal elements land in `m²`), so
//! an orientation exists iff some supplied generator already has a unit
//! `p`-coordinate, and a greedy scan is exhaustive.
//!
//! The change-of-basis direction is *verified*, not discovered: given the
//! matrix expressing one generator tuple in another, the module checks the
//! invertibility of the matrix modulo the maximal ideal and pushes the
//! second presentation's ideal generators through the induced substitution,
//! demanding membership witnesses in the first ideal.  Finding the matrix in
//! the first place is a ring-isomorphism problem outside this toolkit.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Monomial, TruncSeries};
use crate::delta::DeltaRingSpec;
use crate::exactalg::{fp_reduce, FpMatrix};
use crate::localring::{emdim, linear_part, window_membership, LocalPresentation, LocalRingError};
use crate::prism::{normalize_orientation, PrismError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohenError {
    /// No kernel generator has a unit `p`-coordinate in its linear part.
    /// The attached matrix lists every generator's linear part in the
    /// cotangent basis `(p, T_1..T_n)`.
    #[error("no orientation found: every linear part has zero p-coordinate; linear parts: {linear_parts:?}")]
    NoOrientationFound { linear_parts: Vec<Vec<u64>> },
    #[error("generator index {index} out of range ({count} generators)")]
    BadIndex { index: usize, count: usize },
    #[error("generator {index} has p-coordinate 0 and cannot orient the presentation")]
    NotOrientable { index: usize },
    #[error("generators live on a different ring than the base")]
    RingMismatch,
    #[error("change-of-basis matrix must be {expected} x {expected}")]
    BadMatrixShape { expected: usize },
    #[error("matrix is not invertible modulo (p, T..): rank {rank} of {needed}")]
    NotInvertibleModM { rank: usize, needed: usize },
    #[error("substituted generator {index} has no membership witness in the target ideal")]
    CommutationFailed { index: usize },
    #[error(transparent)]
    Prism(#[from] PrismError),
    #[error(transparent)]
    LocalRing(#[from] LocalRingError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A presentation of a complete local ring as a quotient of the `δ`-base:
/// one kernel generator is normalized into the orientation `p − f`, and the
/// remaining generators are rewritten with their `p`-digits replaced by `f`.
#[derive(Debug, Clone)]
pub struct CohenPresentation {
    base: DeltaRingSpec,
    kernel_gens: Vec<TruncSeries>,
    orientation_index: usize,
    orientation_f: TruncSeries,
    /// Unit `u` with `p − f = u^{-1} · d` for the chosen generator `d`; the
    /// coefficient witnessing that `p − f` lies in the kernel ideal.
    normalization_unit: TruncSeries,
    residual_gens: Vec<TruncSeries>,
}

impl CohenPresentation {
    pub fn base(&self) -> &DeltaRingSpec {
        &self.base
    }

    pub fn kernel_gens(&self) -> &[TruncSeries] {
        &self.kernel_gens
    }

    /// Index of the kernel generator that was normalized away.
    pub fn orientation_index(&self) -> usize {
        self.orientation_index
    }

    /// The normalized `f` with orientation `p − f`.
    pub fn orientation_f(&self) -> &TruncSeries {
        &self.orientation_f
    }

    /// The orientation itself, `p − f`.
    pub fn orientation_d(&self) -> TruncSeries {
        TruncSeries::p(self.base.ring())
            .try_sub(&self.orientation_f)
            .expect("same ring")
    }

    /// Unit `u` with `p − f = u^{-1} · d`.
    pub fn normalization_unit(&self) -> &TruncSeries {
        &self.normalization_unit
    }

    /// The remaining kernel generators, rewritten modulo the orientation.
    pub fn residual_gens(&self) -> &[TruncSeries] {
        &self.residual_gens
    }

    /// View the presentation through the local-ring toolkit.
    pub fn local_presentation(&self) -> Result<LocalPresentation, LocalRingError> {
        LocalPresentation::new(
            self.base.clone(),
            self.orientation_f.clone(),
            self.residual_gens.clone(),
        )
    }
}

/// Greedy orientation search over the supplied kernel generators.  A
/// combination fallback is unnecessary: the `p`-coordinate is linear in the
/// generators, so if every generator has `p`-coordinate zero then so does
/// every element of the ideal, and no orientation exists.
pub fn build_presentation(
    base: &DeltaRingSpec,
    kernel_gens: &[TruncSeries],
) -> Result<CohenPresentation, CohenError> {
    let linear_parts = collect_linear_parts(base, kernel_gens)?;
    let index =
        linear_parts
            .iter()
            .position(|lp| lp[0] != 0)
            .ok_or(CohenError::NoOrientationFound {
                linear_parts: linear_parts.clone(),
            })?;
    build_presentation_at(base, kernel_gens, index)
}

/// Build the presentation around a caller-chosen orientation generator.
/// Exposed so that orientation independence can be tested: any valid choice
/// must lead to the same regularity verdict for the quotient.
pub fn build_presentation_at(
    base: &DeltaRingSpec,
    kernel_gens: &[TruncSeries],
    index: usize,
) -> Result<CohenPresentation, CohenError> {
    let linear_parts = collect_linear_parts(base, kernel_gens)?;
    if index >= kernel_gens.len() {
        return Err(CohenError::BadIndex {
            index,
            count: kernel_gens.len(),
        });
    }
    if linear_parts[index][0] == 0 {
        return Err(CohenError::NotOrientable { index });
    }
    let (f, u) = normalize_orientation(base, &kernel_gens[index])?;
    let mut residual_gens = Vec::new();
    for (j, g) in kernel_gens.iter().enumerate() {
        if j == index {
            continue;
        }
        let rewritten = rewrite_mod_orientation(g, &f)?;
        if !rewritten.is_zero() {
            residual_gens.push(rewritten);
        }
    }
    Ok(CohenPresentation {
        base: base.clone(),
        kernel_gens: kernel_gens.to_vec(),
        orientation_index: index,
        orientation_f: f,
        normalization_unit: u,
        residual_gens,
    })
}

fn collect_linear_parts(
    base: &DeltaRingSpec,
    kernel_gens: &[TruncSeries],
) -> Result<Vec<Vec<u64>>, CohenError> {
    let mut out = Vec::with_capacity(kernel_gens.len());
    for g in kernel_gens {
        if !std::sync::Arc::ptr_eq(g.ring(), base.ring()) {
            return Err(CohenError::RingMismatch);
        }
        out.push(linear_part(g)?);
    }
    Ok(out)
}

/// Replace every `p`-digit of `g` by the orientation residual `f`: write
/// each coefficient in base `p` and send `Σ d_k p^k · T^e` to
/// `Σ d_k f^k · T^e`.  The result is congruent to `g` modulo `(p − f)`,
/// with the congruence witnessed inside the window.
pub fn rewrite_mod_orientation(
    g: &TruncSeries,
    f: &TruncSeries,
) -> Result<TruncSeries, CohenError> {
    let ring = g.ring().clone();
    let p = u64::from(ring.prime());
    let mut buckets: Vec<Vec<(Monomial, i128)>> = vec![Vec::new(); ring.precision() as usize];
    for (m, c) in g.terms() {
        let mut v = c.value();
        let mut k = 0usize;
        while v > 0 {
            let d = v % p;
            if d != 0 {
                buckets[k].push((m.clone(), d as i128));
            }
            v /= p;
            k += 1;
        }
    }
    let mut result = TruncSeries::zero(&ring);
    for (k, bucket) in buckets.into_iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let layer = TruncSeries::from_terms(&ring, bucket).map_err(CohenError::Arith)?;
        let scaled = layer.try_mul(&f.pow(k as u32)).map_err(CohenError::Arith)?;
        result = result.try_add(&scaled).map_err(CohenError::Arith)?;
    }
    Ok(result)
}

/// How the base compares against the presented quotient: `dim A = n + 1`
/// against `emdim(R) + 1`.  For presentations that carry an orientation the
/// embedding dimension never exceeds `n`, so smallness and minimality
/// coincide; both flags are reported for the record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallBaseReport {
    pub base_dim: usize,
    pub emdim: usize,
    pub emdim_plus_one: usize,
    /// `dim A ≤ emdim(R) + 1`.
    pub small: bool,
    /// `dim A = emdim(R) + 1`.
    pub minimal: bool,
}

/// Compare the base dimension with the quotient's embedding dimension.
pub fn small_base_check(pres: &CohenPresentation) -> Result<SmallBaseReport, CohenError> {
    let local = pres.local_presentation()?;
    let e = emdim(&local)?;
    let base_dim = pres.base().ring().nvars() + 1;
    Ok(SmallBaseReport {
        base_dim,
        emdim: e,
        emdim_plus_one: e + 1,
        small: base_dim <= e + 1,
        minimal: base_dim == e + 1,
    })
}

/// Outcome of verifying change-of-basis data between two presentations of
/// the same quotient.
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    /// Rank of the matrix modulo `(p, T..)`; full rank is required.
    pub rank_mod_m: usize,
    /// The substituted variable images `f(T_i) = Σ_k m_ik T_k`, rendered.
    pub variable_images: Vec<String>,
    /// One membership witness per generator of the second ideal.
    pub witnesses: Vec<MembershipWitness>,
}

/// Witness that a substituted generator lands in the target ideal:
/// `image = Σ coefficients[k] · gens_x[k]` inside the window.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipWitness {
    pub generator: String,
    pub image: String,
    pub coefficients: Vec<String>,
}

/// Verify that the matrix `M = (m_ik)` induces a map between the two
/// presentations: `M` must be invertible modulo the maximal ideal, and the
/// substitution `T_i ↦ Σ_k m_ik T_k` must carry every generator of the
/// second ideal into the first, with explicit membership witnesses.
pub fn correspondence_automorphism(
    base: &DeltaRingSpec,
    gens_x: &[TruncSeries],
    gens_xprime: &[TruncSeries],
    matrix: &[Vec<TruncSeries>],
) -> Result<CorrespondenceReport, CohenError> {
    let ring = base.ring();
    let n = ring.nvars();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(CohenError::BadMatrixShape { expected: n });
    }
    for g in gens_x.iter().chain(gens_xprime) {
        if !std::sync::Arc::ptr_eq(g.ring(), ring) {
            return Err(CohenError::RingMismatch);
        }
    }
    for entry in matrix.iter().flatten() {
        if !std::sync::Arc::ptr_eq(entry.ring(), ring) {
            return Err(CohenError::RingMismatch);
        }
    }
    // Invertibility modulo (p, T..): constant terms mod p.
    let rows: Vec<Vec<u64>> = matrix
        .iter()
        .map(|row| row.iter().map(|e| e.constant_term().residue()).collect())
        .collect();
    let rank = if n == 0 {
        0
    } else {
        fp_reduce(&FpMatrix::from_rows(ring.prime(), rows).expect("square matrix")).rank
    };
    if rank != n {
        return Err(CohenError::NotInvertibleModM { rank, needed: n });
    }
    // Variable images of the substitution endomorphism.
    let mut images = Vec::with_capacity(n);
    for row in matrix {
        let mut img = TruncSeries::zero(ring);
        for (k, entry) in row.iter().enumerate() {
            let term = entry
                .try_mul(&TruncSeries::var(ring, k))
                .map_err(CohenError::Arith)?;
            img = img.try_add(&term).map_err(CohenError::Arith)?;
        }
        images.push(img);
    }
    // Push every generator of I' through the substitution and demand a
    // membership witness in I.
    let mut witnesses = Vec::with_capacity(gens_xprime.len());
    for (j, g) in gens_xprime.iter().enumerate() {
        let image = g.substitute(&images).map_err(CohenError::Arith)?;
        let witness =
            window_membership(&image, gens_x)?.ok_or(CohenError::CommutationFailed { index: j })?;
        witnesses.push(MembershipWitness {
            generator: g.to_string(),
            image: image.to_string(),
            coefficients: witness.iter().map(|w| w.to_string()).collect(),
        });
    }
    Ok(CorrespondenceReport {
        rank_mod_m: rank,
        variable_images: images.iter().map(|i| i.to_string()).collect(),
        witnesses,
    })
}
