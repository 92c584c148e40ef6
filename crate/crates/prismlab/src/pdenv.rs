//! Truncated divided-power envelope with its Frobenius lift.
//!
//! The algebra modelled here is spanned by divided powers `γ_0, …, γ_M` of a
//! single variable `T`, with `γ_0 = 1`, `γ_1 = T`, and the product rule
//! `γ_i · γ_j = C(i+j, i) · γ_{i+j}` (zero past the truncation index `M`).
//! Coefficients live in `Z/p^N`.  Informally `γ_n` plays the role of
//! `T^n / n!`, which is exactly why `T^n = n! · γ_n` and why `T` becomes a
//! nonzero nilpotent once `p` is divided out: `T^p = p! · γ_p ≡ 0 (mod p)`.
//!
//! The Frobenius lift sends `γ_n` to `γ_n` evaluated at `T^p`, which expands
//! to `((pn)! / n!) · γ_{pn}`; the coefficient has `p`-adic valuation exactly
//! `n`, so the lift reduces to the `p`-th power map modulo `p`.
//!
//! `counterexample_report` packages the punchline: over the rank-one base on
//! `Z_p[|T|]` presenting the field `F_p` (a regular quotient), the Frobenius
//! on the divided-power fiber is *not* flat — and the base is not small,
//! since `dim Z_p[|T|] = 2` exceeds `emdim(F_p) + 1 = 1`.  Smallness of the
//! base is therefore not a cosmetic hypothesis.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{RingSpec, TruncSeries};
use crate::delta::DeltaRingSpec;
use crate::kunzartin::{frobenius_flat, ArtinAlgebra, FlatnessCertificate, KunzError};
use crate::localring::{
    emdim, regularity_verdict, LocalPresentation, LocalRingError, RegularityStatus,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PdError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("divided-power window too small: need top index at least {needed}, have {have}")]
    WindowTooSmall { needed: usize, have: usize },
    #[error("coefficient precision too low: need at least {needed}, have {have}")]
    PrecisionTooLow { needed: u32, have: u32 },
    #[error(transparent)]
    Kunz(#[from] KunzError),
    #[error(transparent)]
    LocalRing(#[from] LocalRingError),
}

/// The truncated divided-power algebra `(Z/p^N)·γ_0 ⊕ … ⊕ (Z/p^N)·γ_M`.
/// Elements are coordinate vectors of length `M + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDAlgebra {
    p: u32,
    precision: u32,
    top: usize,
    modulus: u64,
    /// Pascal's triangle modulo `p^N`: `binom[n][k] = C(n, k)`.
    binom: Vec<Vec<u64>>,
}

/// Image of an element under the Frobenius lift, together with a flag
/// recording whether any support index was carried past the truncation
/// window (and therefore dropped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusImage {
    pub coords: Vec<u64>,
    pub truncated: bool,
}

impl PDAlgebra {
    /// Build the envelope.  Requires `M ≥ p` so that the nilpotence of `T`
    /// in the fiber is visible inside the window.
    pub fn new(p: u32, precision: u32, top: usize) -> Result<Self, PdError> {
        if !is_small_prime(p) {
            return Err(PdError::NotPrime(p));
        }
        if precision < 1 {
            return Err(PdError::PrecisionTooLow {
                needed: 1,
                have: precision,
            });
        }
        if top < p as usize {
            return Err(PdError::WindowTooSmall {
                needed: p as usize,
                have: top,
            });
        }
        let modulus = u64::from(p)
            .checked_pow(precision)
            .filter(|&m| m < (1u64 << 62))
            .ok_or(PdError::PrecisionTooLow {
                needed: 1,
                have: precision,
            })?;
        let mut binom = vec![vec![0u64; top + 1]; top + 1];
        for n in 0..=top {
            binom[n][0] = 1 % modulus;
            for k in 1..=n {
                let up = if k < n { binom[n - 1][k] } else { 0 };
                binom[n][k] = (binom[n - 1][k - 1] + up) % modulus;
            }
        }
        Ok(PDAlgebra {
            p,
            precision,
            top,
            modulus,
            binom,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Top divided-power index `M`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.top + 1
    }

    /// `C(n, k)` modulo `p^N` for `n ≤ M`.
    pub fn binom_mod(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.binom[n][k]
        }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Vec<u64> {
        self.gamma(0)
    }

    /// The basis element `γ_n`.
    pub fn gamma(&self, n: usize) -> Vec<u64> {
        assert!(n <= self.top, "index {n} beyond the window");
        let mut v = self.zero();
        v[n] = 1 % self.modulus;
        v
    }

    /// The distinguished element `T = γ_1`.
    pub fn t(&self) -> Vec<u64> {
        self.gamma(1)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| (a + b) % self.modulus)
            .collect()
    }

    pub fn scalar_mul(&self, c: u64, x: &[u64]) -> Vec<u64> {
        x.iter()
            .map(|&a| mulm(c % self.modulus, a, self.modulus))
            .collect()
    }

    /// The truncated divided-power product.
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || i + j > self.top {
                    continue;
                }
                let c = mulm(
                    mulm(xi, yj, self.modulus),
                    self.binom[i + j][i],
                    self.modulus,
                );
                out[i + j] = (out[i + j] + c) % self.modulus;
            }
        }
        out
    }

    pub fn pow(&self, x: &[u64], k: u32) -> Vec<u64> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Reduce coordinates modulo `p`, landing in the fiber `D/(p)`.
    pub fn fiber_coords(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| a % u64::from(self.p)).collect()
    }

    /// The Frobenius lift `γ_n ↦ ((pn)!/n!) · γ_{pn}`, extended linearly.
    /// Support carried past the window is dropped and flagged.
    pub fn frobenius(&self, x: &[u64]) -> FrobeniusImage {
        let mut coords = self.zero();
        let mut truncated = false;
        for (n, &xn) in x.iter().enumerate() {
            if xn == 0 {
                continue;
            }
            let target = self.p as usize * n;
            if target > self.top {
                truncated = true;
                continue;
            }
            let c = rising_factorial_mod(n, self.p, self.precision, self.modulus);
            coords[target] = (coords[target] + mulm(xn, c, self.modulus)) % self.modulus;
        }
        FrobeniusImage { coords, truncated }
    }

    /// The fiber `D/(p)` as a finite local algebra: basis `1, T, γ_2, …`,
    /// structure constants `C(i+j, i) mod p`.
    pub fn fiber_algebra(&self) -> Result<ArtinAlgebra, PdError> {
        let p64 = u64::from(self.p);
        let labels: Vec<String> = (0..=self.top)
            .map(|n| match n {
                0 => "1".to_string(),
                1 => "T".to_string(),
                _ => format!("g_{n}"),
            })
            .collect();
        let dim = self.dim();
        let table: Vec<Vec<Vec<u64>>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let mut row = vec![0u64; dim];
                        if i + j <= self.top {
                            row[i + j] = self.binom[i + j][i] % p64;
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Ok(ArtinAlgebra::from_table(self.p, labels, table)?)
    }
}

/// Build the truncated divided-power envelope; alias for `PDAlgebra::new`.
pub fn pd_build(p: u32, precision: u32, top: usize) -> Result<PDAlgebra, PdError> {
    PDAlgebra::new(p, precision, top)
}

/// Everything the counterexample needs, verified in one pass.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub p: u32,
    pub precision: u32,
    pub top: usize,
    /// `T ≠ 0` in the fiber `D/(p)`.
    pub t_nonzero_in_fiber: bool,
    /// `T^p = 0` in the fiber (because `T^p = p! · γ_p`).
    pub t_pth_power_zero: bool,
    /// Frobenius-flatness certificate for the fiber algebra; the point of
    /// the counterexample is that it comes back negative.
    pub fiber_flatness: FlatnessCertificate,
    /// Regularity status of the presented quotient `R = F_p`.
    pub quotient_status: RegularityStatus,
    pub quotient_dim: Option<u64>,
    /// Krull dimension of the base ring `Z_p[|T|]`.
    pub base_dim: usize,
    /// `emdim(R) + 1`, the small-base budget.
    pub emdim_plus_one: usize,
    /// Whether the base is small for this quotient (it is not).
    pub small_base: bool,
    /// Conjunction of all the expected outcomes.
    pub verdict: bool,
}

/// Run the counterexample at prime `p`: a regular quotient over a non-small
/// base whose divided-power Frobenius fails flatness.  Needs `M ≥ p²` so the
/// image `φ(γ_p)` stays inside the window and `N ≥ 2` so that `p ≠ 0` in the
/// coefficients.
pub fn counterexample_report(
    p: u32,
    precision: u32,
    top: usize,
) -> Result<CounterexampleReport, PdError> {
    let needed = (p as usize) * (p as usize);
    if top < needed {
        return Err(PdError::WindowTooSmall { needed, have: top });
    }
    if precision < 2 {
        return Err(PdError::PrecisionTooLow {
            needed: 2,
            have: precision,
        });
    }
    let pd = PDAlgebra::new(p, precision, top)?;

    // (i) Nilpotence of T in the fiber: nonzero, with vanishing p-th power.
    let t = pd.t();
    let t_nonzero_in_fiber = pd.fiber_coords(&t).iter().any(|&c| c != 0);
    let t_pth_power_zero = pd.fiber_coords(&pd.pow(&t, p)).iter().all(|&c| c == 0);

    // (ii) The Frobenius on the fiber algebra is not flat.
    let fiber = pd.fiber_algebra()?;
    let fiber_flatness = frobenius_flat(&fiber);

    // (iii) The quotient R = F_p is as regular as a ring can be, yet the
    // base is too big: dim Z_p[|T|] = 2 > emdim(F_p) + 1 = 1.
    let ring =
        RingSpec::new(p, precision.max(2), 4, vec!["T".into()]).map_err(LocalRingError::from)?;
    let presentation = LocalPresentation::new(
        DeltaRingSpec::rank_one(&ring),
        TruncSeries::zero(&ring),
        vec![TruncSeries::var(&ring, 0)],
    )?;
    let verdict_r = regularity_verdict(&presentation)?;
    let quotient_emdim = emdim(&presentation)?;
    let base_dim = 2; // one formal variable plus the p-adic direction
    let emdim_plus_one = quotient_emdim + 1;
    let small_base = base_dim <= emdim_plus_one;

    let verdict = t_nonzero_in_fiber
        && t_pth_power_zero
        && !fiber_flatness.flat
        && verdict_r.status == RegularityStatus::ProvenRegular
        && !small_base;
    Ok(CounterexampleReport {
        p,
        precision,
        top,
        t_nonzero_in_fiber,
        t_pth_power_zero,
        fiber_flatness,
        quotient_status: verdict_r.status,
        quotient_dim: verdict_r.dim,
        base_dim,
        emdim_plus_one,
        small_base,
        verdict,
    })
}

/// `(pn)!/n! mod p^N`, computed exactly: strip the `p`-part of every factor
/// in `(n, pn]`, accumulate the unit part modulo `p^N`, and reattach
/// `p^valuation` (the valuation is exactly `n`, so the result vanishes once
/// `n ≥ N`).
fn rising_factorial_mod(n: usize, p: u32, precision: u32, modulus: u64) -> u64 {
    let p64 = u64::from(p);
    let mut val = 0u32;
    let mut unit = 1u64 % modulus;
    for k in (n + 1)..=(p as usize * n) {
        let mut k64 = k as u64;
        while k64.is_multiple_of(p64) {
            k64 /= p64;
            val += 1;
        }
        unit = mulm(unit, k64 % modulus, modulus);
    }
    debug_assert!(n == 0 || val == n as u32, "valuation of (pn)!/n! is n");
    if val >= precision {
        return 0;
    }
    let mut out = unit;
    for _ in 0..val {
        out = mulm(out, p64, modulus);
    }
    out
}

fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn is_small_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
