//! Koszul complexes on the special fiber, regular-sequence testing, and
//! Hodge–Tate rank bookkeeping.
//!
//! The fiber of every ring in this crate is a polynomial ring over the prime
//! field, so Koszul homology in a fixed internal degree is finite-dimensional
//! exact linear algebra: for homogeneous generators the differential preserves
//! the grading and each graded strand is computed by [`crate::exactalg::fp_reduce`]
//! with no truncation error.  Two independent testers decide whether a family
//! of fiber polynomials is a regular sequence:
//!
//! 1. the Koszul window (`H_1` vanishing degree by degree), and
//! 2. the dimension-drop criterion (`n - dim V(I) = r`), which is the
//!    certified route.
//!
//! Certification of the second route near the origin rests on two classical
//! facts: every minimal prime over an `r`-generated ideal has height at most
//! `r` (Krull), and in a Cohen–Macaulay local ring an `r`-generated ideal of
//! height `r` is generated by a regular sequence.  Consequently, when the
//! global dimension drop equals `r` and every generator vanishes at the
//! origin, the sequence is regular in the local ring at the origin — not just
//! globally.  When the drop falls short the global verdict is negative, but a
//! local verdict needs homogeneity (or `r` exceeding the ambient dimension)
//! to be certified, because components away from the origin can mask local
//! regularity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{FpPoly, MonOrder, Monomial};
use crate::exactalg::{fp_reduce, FpMatrix};
use crate::groebner::{buchberger, GroebnerError};
use crate::localring::LocalPresentation;
use crate::par;

/// Errors from Koszul-window and regular-sequence computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KoszulError {
    /// The degree window cannot see any strand containing the generators.
    #[error("degree window {have} is too small; need at least {needed}")]
    WindowTooSmall { needed: u32, have: u32 },
    /// A zero polynomial was passed as a generator.
    #[error("generator {index} is the zero polynomial")]
    ZeroGenerator { index: usize },
    /// The generators span the unit ideal, so no sequence question remains.
    #[error("generators span the unit ideal")]
    UnitIdeal,
    /// A Gröbner computation failed.
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Graded Koszul homology dimensions in a degree window.
#[derive(Debug, Clone, Serialize)]
pub struct KoszulWindow {
    /// Generators of the Koszul complex, as printed strings for reporting.
    pub gens: Vec<String>,
    /// Largest internal degree inspected.
    pub degree_window: u32,
    /// Nonzero homology dimensions: `(i, degree) -> dim_Fp H_i` for `i >= 1`.
    pub homology_dims: BTreeMap<(u32, u32), u64>,
    /// True when the generators were homogeneous, so every strand is exact
    /// linear algebra.  False marks the truncated inhomogeneous heuristic.
    pub certified: bool,
}

impl KoszulWindow {
    /// Dimension of `H_i` in internal degree `t` (zero when absent).
    pub fn h_dim(&self, i: u32, degree: u32) -> u64 {
        self.homology_dims.get(&(i, degree)).copied().unwrap_or(0)
    }

    /// Total dimension of `H_i` across the window.
    pub fn h_total(&self, i: u32) -> u64 {
        self.homology_dims
            .iter()
            .filter(|((j, _), _)| *j == i)
            .map(|(_, d)| *d)
            .sum()
    }

    /// True when `H_i = 0` throughout the window for every `i >= 1`.
    pub fn acyclic_in_window(&self) -> bool {
        self.homology_dims.is_empty()
    }
}

/// Scope of a regular-sequence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictScope {
    /// The verdict holds in the local ring at the origin as well as globally.
    CertifiedLocal,
    /// Only the global (polynomial-ring) semantics are certified; the local
    /// behavior at the origin may differ.
    GlobalOnly,
}

/// Outcome of the dimension-drop regular-sequence test.
#[derive(Debug, Clone, Serialize)]
pub struct RegSeqVerdict {
    /// Whether the generators form a regular sequence under global semantics:
    /// the dimension of the vanishing locus drops by exactly the number of
    /// generators.
    pub holds: bool,
    /// Whether the verdict is certified to hold locally at the origin.
    pub scope: VerdictScope,
    /// Ambient dimension used for the drop computation.
    pub ambient_dim: usize,
    /// Dimension of the quotient by the ideal the generators span.
    pub quotient_dim: usize,
    /// Human-readable explanation of the scope decision.
    pub detail: String,
}

impl RegSeqVerdict {
    /// True exactly when the sequence is regular with a local certificate.
    pub fn certified_true(&self) -> bool {
        self.holds && self.scope == VerdictScope::CertifiedLocal
    }

    /// True exactly when the sequence is certified *not* regular locally.
    pub fn certified_false(&self) -> bool {
        !self.holds && self.scope == VerdictScope::CertifiedLocal
    }
}

/// Hodge–Tate graded ranks and filtration totals for `r` extra generators.
#[derive(Debug, Clone, Serialize)]
pub struct HTTable {
    /// Number of extra generators.
    pub r: u32,
    /// Graded ranks `D_0..D_jmax`, where `D_i = C(r+i-1, i)`.
    pub ranks: Vec<u64>,
    /// Partial sums of the ranks; entry `j` equals `C(r+j, j)`.
    pub filtration: Vec<u64>,
    /// Formal twist tags carried alongside the ranks (entry `i` is `-i`).
    pub twists: Vec<i64>,
}

/// Exact binomial coefficient `C(n, k)` in `u64`, with `C(n, 0) = 1`.
pub(crate) fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Graded rank of the `i`-th Hodge–Tate piece for `r` extra generators:
/// `C(r+i-1, i)`.  For `r = 0` this is `1` at `i = 0` and `0` afterwards.
pub fn ht_rank(r: u32, i: u32) -> u64 {
    if r == 0 {
        return if i == 0 { 1 } else { 0 };
    }
    binom(u64::from(r + i - 1), u64::from(i))
}

/// Rank and filtration table for the Hodge–Tate pieces up to level `j_max`.
///
/// The filtration entry at `j` is the partial sum of the ranks through `j`,
/// which closes to `C(r+j, j)` by the hockey-stick identity.
pub fn ht_filtration_table(r: u32, j_max: u32) -> HTTable {
    let mut ranks = Vec::with_capacity(j_max as usize + 1);
    let mut filtration = Vec::with_capacity(j_max as usize + 1);
    let mut twists = Vec::with_capacity(j_max as usize + 1);
    let mut total = 0u64;
    for i in 0..=j_max {
        let d = ht_rank(r, i);
        total += d;
        ranks.push(d);
        filtration.push(total);
        twists.push(-i64::from(i));
    }
    HTTable {
        r,
        ranks,
        filtration,
        twists,
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`.
fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    Monomial::all_up_to(nvars, d)
        .into_iter()
        .filter(|m| m.degree() == d)
        .collect()
}

/// Subsets of `{0..r}` with `j` elements, as sorted index lists, in a fixed
/// deterministic order.
fn subsets(r: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, j, &mut Vec::new(), &mut out);
    out
}

/// Basis of one Koszul chain space: pairs (monomial, subset index).
type ChainBasis = Vec<(Monomial, usize)>;

/// Builds the strand of the Koszul chain space `K_j` in internal degree `t`:
/// basis elements `m * e_S` with `deg m + sum_{i in S} deg f_i = t`.
fn strand_basis(
    nvars: usize,
    gen_degs: &[u32],
    all_subsets: &[Vec<Vec<usize>>],
    j: usize,
    t: u32,
) -> ChainBasis {
    let mut basis = Vec::new();
    for (si, s) in all_subsets[j].iter().enumerate() {
        let ds: u32 = s.iter().map(|&i| gen_degs[i]).sum();
        if ds > t {
            continue;
        }
        for m in monomials_of_degree(nvars, t - ds) {
            basis.push((m, si));
        }
    }
    basis
}

/// The Koszul differential `K_j -> K_{j-1}` restricted to the given bases, as
/// an `F_p` matrix (rows: target basis, columns: source basis).  Products that
/// fall outside the target basis are dropped, which is exact for graded
/// strands and a truncation for the aggregate inhomogeneous chain spaces.
fn restricted_differential(
    prime: u32,
    gens: &[FpPoly],
    src: &ChainBasis,
    src_subs: &[Vec<usize>],
    tgt: &ChainBasis,
    tgt_subs: &[Vec<usize>],
) -> FpMatrix {
    let p = u64::from(prime);
    let mut tgt_index: BTreeMap<(Monomial, usize), usize> = BTreeMap::new();
    for (row, (m, si)) in tgt.iter().enumerate() {
        tgt_index.insert((m.clone(), *si), row);
    }
    let tgt_lookup: BTreeMap<&[usize], usize> = tgt_subs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();

    let mut mat = FpMatrix::zero(prime, tgt.len(), src.len());
    for (col, (m, si)) in src.iter().enumerate() {
        let s = &src_subs[*si];
        for (pos, &i) in s.iter().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { p - 1 };
            let mut reduced = s.clone();
            reduced.remove(pos);
            let tsi = *tgt_lookup
                .get(reduced.as_slice())
                .expect("subset lattice is closed under deletion");
            for (mon, coeff) in gens[i].terms() {
                let prod = m.mul(mon);
                if let Some(&row) = tgt_index.get(&(prod, tsi)) {
                    let add = sign * (coeff % p) % p;
                    let cur = mat.get(row, col);
                    mat.set(row, col, (cur + add) % p);
                }
            }
        }
    }
    mat
}

/// Computes graded Koszul homology dimensions `H_i` (`i >= 1`) of the complex
/// on `gens` in every internal degree up to `degree_window`.
///
/// For homogeneous generators the grading is preserved by the differential and
/// every reported dimension is exact.  For inhomogeneous generators the
/// complex is truncated at the window and a single aggregated dimension per
/// homological index is reported under the key `(i, degree_window)`, flagged
/// uncertified: truncation can create or destroy homology near the window
/// boundary, so those numbers are a heuristic signal only.
pub fn koszul_homology_window(
    gens: &[FpPoly],
    degree_window: u32,
) -> Result<KoszulWindow, KoszulError> {
    for (index, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(KoszulError::ZeroGenerator { index });
        }
    }
    if gens.is_empty() {
        return Ok(KoszulWindow {
            gens: vec![],
            degree_window,
            homology_dims: BTreeMap::new(),
            certified: true,
        });
    }
    let prime = gens[0].prime();
    let nvars = gens[0].nvars();
    let gen_degs: Vec<u32> = gens.iter().map(|g| g.degree().unwrap()).collect();
    let max_deg = gen_degs.iter().copied().max().unwrap_or(0);
    if degree_window < max_deg {
        return Err(KoszulError::WindowTooSmall {
            needed: max_deg,
            have: degree_window,
        });
    }

    let r = gens.len();
    let all_subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|j| subsets(r, j)).collect();
    let homogeneous = gens.iter().all(FpPoly::is_homogeneous);

    let mut homology_dims = BTreeMap::new();
    if homogeneous {
        let degrees: Vec<u32> = (0..=degree_window).collect();
        let per_degree = par::map_slice(&degrees, |&t| {
            // Strand bases and differential ranks for K_. in internal degree t.
            let bases: Vec<ChainBasis> = (0..=r)
                .map(|j| strand_basis(nvars, &gen_degs, &all_subsets, j, t))
                .collect();
            let ranks: Vec<usize> = (1..=r)
                .map(|j| {
                    let (src, tgt) = (&bases[j], &bases[j - 1]);
                    if src.is_empty() || tgt.is_empty() {
                        0
                    } else {
                        fp_reduce(&restricted_differential(
                            prime,
                            gens,
                            src,
                            &all_subsets[j],
                            tgt,
                            &all_subsets[j - 1],
                        ))
                        .rank
                    }
                })
                .collect();
            let mut dims = Vec::new();
            for i in 1..=r {
                let dim_ki = bases[i].len();
                let rank_in = ranks[i - 1];
                let rank_out = if i < r { ranks[i] } else { 0 };
                let h = dim_ki - rank_in - rank_out;
                if h > 0 {
                    dims.push((i as u32, h as u64));
                }
            }
            dims
        });
        for (t, dims) in degrees.iter().zip(per_degree) {
            for (i, h) in dims {
                homology_dims.insert((i, *t), h);
            }
        }
    } else {
        // Truncated aggregate: one chain space per homological index, holding
        // all strands up to the window at once, with products truncated.
        let bases: Vec<ChainBasis> = (0..=r)
            .map(|j| {
                let mut basis = Vec::new();
                for (si, s) in all_subsets[j].iter().enumerate() {
                    let ds: u32 = s.iter().map(|&i| gen_degs[i]).sum();
                    if ds > degree_window {
                        continue;
                    }
                    for d in 0..=(degree_window - ds) {
                        for m in monomials_of_degree(nvars, d) {
                            basis.push((m, si));
                        }
                    }
                }
                basis
            })
            .collect();
        let ranks: Vec<usize> = (1..=r)
            .map(|j| {
                let (src, tgt) = (&bases[j], &bases[j - 1]);
                if src.is_empty() || tgt.is_empty() {
                    0
                } else {
                    fp_reduce(&restricted_differential(
                        prime,
                        gens,
                        src,
                        &all_subsets[j],
                        tgt,
                        &all_subsets[j - 1],
                    ))
                    .rank
                }
            })
            .collect();
        for i in 1..=r {
            let dim_ki = bases[i].len();
            let rank_in = ranks[i - 1];
            let rank_out = if i < r { ranks[i] } else { 0 };
            let h = dim_ki.saturating_sub(rank_in + rank_out);
            if h > 0 {
                homology_dims.insert((i as u32, degree_window), h as u64);
            }
        }
    }

    Ok(KoszulWindow {
        gens: gens.iter().map(|g| g.to_string()).collect(),
        degree_window,
        homology_dims,
        certified: homogeneous,
    })
}

/// Decides whether `gens` form a regular sequence in the fiber polynomial
/// ring of `nvars` variables via the dimension-drop criterion, with an
/// explicit scope.
///
/// Globally, `r` polynomials form a regular sequence iff the dimension of
/// their vanishing locus is `n - r`.  The verdict is additionally certified
/// to hold in the local ring at the origin when either
///
/// * the drop equals `r` and every generator vanishes at the origin (height
///   bounds pin every minimal prime to height exactly `r`, and the local ring
///   is Cohen–Macaulay), or
/// * the drop falls short and the generators are homogeneous (grading makes
///   the origin see every component), or
/// * more generators than the ambient dimension are supplied (no local ring
///   admits such a sequence).
pub fn regular_sequence_verdict(
    nvars: usize,
    gens: &[FpPoly],
) -> Result<RegSeqVerdict, KoszulError> {
    let r = gens.len();
    let nonzero: Vec<FpPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let quotient_dim = if nonzero.is_empty() {
        nvars
    } else {
        let basis = buchberger(&nonzero, MonOrder::DegRevLex)?;
        if basis.is_unit_ideal() {
            return Err(KoszulError::UnitIdeal);
        }
        basis.dimension()?
    };
    let drop = nvars - quotient_dim;
    let holds = drop == r && nonzero.len() == r;
    let const_free = gens.iter().all(|g| g.constant() == 0);
    let homogeneous = gens.iter().all(FpPoly::is_homogeneous);

    let (scope, detail) = if holds && const_free {
        (
            VerdictScope::CertifiedLocal,
            format!(
                "dimension drop {drop} equals generator count and all generators \
                 vanish at the origin; height bounds certify local regularity"
            ),
        )
    } else if !holds && homogeneous {
        (
            VerdictScope::CertifiedLocal,
            format!("homogeneous generators with dimension drop {drop} != {r}"),
        )
    } else if !holds && r > nvars {
        (
            VerdictScope::CertifiedLocal,
            format!("{r} generators exceed the ambient dimension {nvars}"),
        )
    } else {
        (
            VerdictScope::GlobalOnly,
            format!(
                "global dimension drop is {drop} for {r} generators; local behavior \
                 at the origin is not certified for this input"
            ),
        )
    };

    Ok(RegSeqVerdict {
        holds,
        scope,
        ambient_dim: nvars,
        quotient_dim,
        detail,
    })
}

/// Checks discreteness of the derived quotient attached to a presentation:
/// true when the extra generators form a regular sequence on the fiber of the
/// oriented base, so the derived quotient is a usual ring and the Hodge–Tate
/// pieces are free of the [`ht_rank`] ranks.
///
/// The test runs the dimension-drop criterion on the hypersurface fiber
/// `F_p[T..]/(fbar)`: the extra fiber generators must cut the dimension by
/// exactly their number.  The scope rules mirror [`regular_sequence_verdict`];
/// the hypersurface fiber is Cohen–Macaulay and equidimensional, so the same
/// height argument certifies the local verdict when the drop is exact and the
/// generators vanish at the origin.
pub fn lci_discreteness_check(pres: &LocalPresentation) -> Result<RegSeqVerdict, KoszulError> {
    let ring = pres.ring();
    let nvars = ring.nvars();
    let fbar = pres.orientation_f().fiber_reduce();
    let gbars: Vec<FpPoly> = pres
        .extra_gens()
        .iter()
        .map(|g| g.fiber_reduce())
        .filter(|g| !g.is_zero())
        .collect();
    let r = pres.extra_gens().len();

    // Dimension of the hypersurface fiber itself.
    let fiber_dim = if fbar.is_zero() {
        nvars
    } else {
        let b = buchberger(std::slice::from_ref(&fbar), MonOrder::DegRevLex)?;
        if b.is_unit_ideal() {
            return Err(KoszulError::UnitIdeal);
        }
        b.dimension()?
    };

    if r == 0 {
        return Ok(RegSeqVerdict {
            holds: true,
            scope: VerdictScope::CertifiedLocal,
            ambient_dim: fiber_dim,
            quotient_dim: fiber_dim,
            detail: "no extra generators; the derived quotient is the base itself".to_string(),
        });
    }

    let mut all = vec![fbar.clone()];
    all.extend(gbars.iter().cloned());
    let all: Vec<FpPoly> = all.into_iter().filter(|g| !g.is_zero()).collect();
    let total_dim = if all.is_empty() {
        nvars
    } else {
        let b = buchberger(&all, MonOrder::DegRevLex)?;
        if b.is_unit_ideal() {
            return Err(KoszulError::UnitIdeal);
        }
        b.dimension()?
    };

    let drop = fiber_dim - total_dim;
    // A zero fiber image can never be part of a regular sequence on a nonzero
    // ring, and it also caps the possible drop below r.
    let holds = drop == r && gbars.len() == r;
    let const_free = pres
        .extra_gens()
        .iter()
        .all(|g| g.fiber_reduce().constant() == 0);
    let homogeneous =
        gbars.iter().all(FpPoly::is_homogeneous) && (fbar.is_zero() || fbar.is_homogeneous());

    let (scope, detail) = if holds && const_free {
        (
            VerdictScope::CertifiedLocal,
            format!(
                "fiber dimension drops from {fiber_dim} to {total_dim} across {r} \
                 extra generators vanishing at the closed point"
            ),
        )
    } else if !holds && homogeneous {
        (
            VerdictScope::CertifiedLocal,
            format!(
                "homogeneous data with fiber dimension drop {drop} != {r}; the \
                 derived quotient keeps higher homotopy"
            ),
        )
    } else if !holds && r > fiber_dim {
        (
            VerdictScope::CertifiedLocal,
            format!("{r} extra generators exceed the fiber dimension {fiber_dim}"),
        )
    } else {
        (
            VerdictScope::GlobalOnly,
            format!(
                "fiber dimension drop {drop} for {r} extra generators; local \
                 verdict not certified for this input"
            ),
        )
    };

    Ok(RegSeqVerdict {
        holds,
        scope,
        ambient_dim: fiber_dim,
        quotient_dim: total_dim,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 5;

    fn t() -> FpPoly {
        FpPoly::var(P, 2, 0)
    }

    fn s() -> FpPoly {
        FpPoly::var(P, 2, 1)
    }

    #[test]
    fn binomial_table_and_pascal_recursion() {
        assert_eq!(ht_rank(1, 5), 1);
        assert_eq!(ht_rank(2, 3), 4);
        assert_eq!(ht_rank(3, 2), 6);
        assert_eq!(ht_rank(0, 0), 1);
        assert_eq!(ht_rank(0, 7), 0);
        for r in 1..=6u32 {
            for i in 1..=12u32 {
                assert_eq!(
                    ht_rank(r, i),
                    ht_rank(r - 1, i) + ht_rank(r, i - 1),
                    "Pascal fails at r={r}, i={i}"
                );
            }
        }
    }

    #[test]
    fn filtration_closes_by_hockey_stick() {
        for r in 0..=6u32 {
            let table = ht_filtration_table(r, 12);
            for j in 0..=12u32 {
                let expect = binom(u64::from(r + j), u64::from(j));
                assert_eq!(
                    table.filtration[j as usize], expect,
                    "hockey stick fails at r={r}, j={j}"
                );
            }
        }
        let t2 = ht_filtration_table(2, 5);
        assert_eq!(t2.ranks, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(t2.filtration, vec![1, 3, 6, 10, 15, 21]);
        let t0 = ht_filtration_table(0, 4);
        assert_eq!(t0.ranks, vec![1, 0, 0, 0, 0]);
        let t1 = ht_filtration_table(1, 4);
        assert_eq!(t1.ranks, vec![1, 1, 1, 1, 1]);
        assert_eq!(t1.twists, vec![0, -1, -2, -3, -4]);
    }

    #[test]
    fn koszul_regular_pair_is_acyclic() {
        let w = koszul_homology_window(&[t(), s()], 6).unwrap();
        assert!(w.certified);
        assert!(w.acyclic_in_window());
        for deg in 0..=6 {
            assert_eq!(w.h_dim(1, deg), 0);
            assert_eq!(w.h_dim(2, deg), 0);
        }
    }

    #[test]
    fn koszul_repeated_generator_has_h1() {
        let w = koszul_homology_window(&[t(), t()], 5).unwrap();
        assert!(w.certified);
        // The cycle e_1 - e_2 sits in internal degree 1 and is not a boundary.
        assert_eq!(w.h_dim(1, 1), 1);
        assert!(w.h_total(1) > 0);
    }

    #[test]
    fn koszul_single_nonzerodivisor_is_acyclic() {
        let f = FpPoly::var(P, 1, 0).pow(2);
        let w = koszul_homology_window(&[f], 6).unwrap();
        assert!(w.certified);
        assert!(w.acyclic_in_window());
    }

    #[test]
    fn koszul_window_too_small_is_reported() {
        let f = FpPoly::var(P, 1, 0).pow(3);
        let err = koszul_homology_window(&[f], 2).unwrap_err();
        match err {
            KoszulError::WindowTooSmall { needed, have } => {
                assert_eq!((needed, have), (3, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn koszul_inhomogeneous_is_flagged_heuristic() {
        let f = t().pow(2).add(&s());
        let w = koszul_homology_window(&[f], 6).unwrap();
        assert!(!w.certified);
    }

    #[test]
    fn regseq_variables_are_regular() {
        let v = regular_sequence_verdict(2, &[t(), s()]).unwrap();
        assert!(v.holds);
        assert_eq!(v.scope, VerdictScope::CertifiedLocal);
        assert_eq!(v.quotient_dim, 0);
        assert!(v.certified_true());
    }

    #[test]
    fn regseq_overlapping_pair_fails() {
        let v = regular_sequence_verdict(2, &[t().mul(&s()), t()]).unwrap();
        assert!(!v.holds);
        assert_eq!(v.quotient_dim, 1);
        // Homogeneous, so the failure is certified locally too.
        assert_eq!(v.scope, VerdictScope::CertifiedLocal);
        assert!(v.certified_false());
    }

    #[test]
    fn regseq_inhomogeneous_artinian_pair_holds() {
        let v = regular_sequence_verdict(2, &[t().pow(2).sub(&s()), s().pow(2)]).unwrap();
        assert!(v.holds);
        assert_eq!(v.quotient_dim, 0);
        // Both generators vanish at the origin and the drop is exact, so the
        // verdict is certified locally despite the inhomogeneity.
        assert_eq!(v.scope, VerdictScope::CertifiedLocal);
    }

    #[test]
    fn regseq_unit_ideal_is_an_error() {
        // (T, T+1) spans the unit ideal: no sequence question remains.
        let f = t().add(&FpPoly::one(P, 2));
        let err = regular_sequence_verdict(2, &[t(), f]).unwrap_err();
        assert!(matches!(err, KoszulError::UnitIdeal));
        // A nonzero constant alone does too.
        let c = FpPoly::scalar(P, 2, 3);
        let err = regular_sequence_verdict(2, &[c]).unwrap_err();
        assert!(matches!(err, KoszulError::UnitIdeal));
    }

    #[test]
    fn regseq_empty_family_is_trivially_regular() {
        let v = regular_sequence_verdict(2, &[]).unwrap();
        assert!(v.holds);
        assert_eq!(v.quotient_dim, 2);
    }

    #[test]
    fn regseq_far_component_gets_global_scope_only() {
        // (T*(T-1), S*(T-1)) vanishes on {T=1} plus the origin: global drop 1,
        // but at the origin the pair is regular, so no local certificate.
        let g1 = t().pow(2).sub(&t());
        let g2 = t().mul(&s()).sub(&s());
        let v = regular_sequence_verdict(2, &[g1, g2]).unwrap();
        assert!(!v.holds);
        assert_eq!(v.scope, VerdictScope::GlobalOnly);
    }

    #[test]
    fn regseq_power_invariance_on_homogeneous_gens() {
        let base = regular_sequence_verdict(2, &[t(), s()]).unwrap();
        for (e1, e2) in [(1u32, 2u32), (2, 2), (3, 1), (3, 3)] {
            let v = regular_sequence_verdict(2, &[t().pow(e1), s().pow(e2)]).unwrap();
            assert_eq!(v.holds, base.holds, "power invariance at ({e1},{e2})");
        }
        let bad = regular_sequence_verdict(2, &[t().mul(&s()), t()]).unwrap();
        for (e1, e2) in [(2u32, 1u32), (2, 3), (3, 2)] {
            let v = regular_sequence_verdict(2, &[t().mul(&s()).pow(e1), t().pow(e2)]).unwrap();
            assert_eq!(v.holds, bad.holds, "power invariance at ({e1},{e2})");
        }
    }

    #[test]
    fn koszul_and_dimension_testers_agree_on_homogeneous_inputs() {
        let families: Vec<Vec<FpPoly>> = vec![
            vec![t(), s()],
            vec![t().pow(2), s().pow(3)],
            vec![t(), t()],
            vec![t().mul(&s()), t().pow(2)],
            vec![t().add(&s()), t().sub(&s())],
        ];
        for gens in families {
            let kw = koszul_homology_window(&gens, 6).unwrap();
            let rs = regular_sequence_verdict(2, &gens).unwrap();
            assert!(kw.certified);
            assert_eq!(
                kw.h_total(1) == 0,
                rs.holds,
                "testers disagree on {:?}",
                gens.iter().map(|g| g.to_string()).collect::<Vec<_>>()
            );
        }
    }
}
