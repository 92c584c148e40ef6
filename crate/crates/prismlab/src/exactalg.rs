//! Exact linear algebra over `F_p` and over `Z/p^N`.
//!
//! Over the field we use ordinary reduced row echelon form. Over `Z/p^N` —
//! which has zero divisors — echelon form alone does not canonicalize row
//! spans, so membership and kernels go through the Howell form: pivots are
//! normalized to powers of p, rows above pivots are reduced, and for every
//! pivot `p^k` with `k > 0` the row `p^(N-k) * (pivot row)` is appended and
//! processed too, which closes the span under the hidden torsion directions.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{inv_mod, mul_mod, p_pow, PrecScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("inconsistent moduli or primes: {0}")]
    ModulusMismatch(String),
}

/// Dense matrix over `F_p`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    prime: u32,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(prime: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            prime,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(prime: u32, rows: Vec<Vec<u64>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinAlgError::DimMismatch("ragged rows".into()));
        }
        let p = prime as u64;
        let data = rows.into_iter().flatten().map(|v| v % p).collect();
        Ok(FpMatrix {
            prime,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn identity(prime: u32, n: usize) -> Self {
        let mut m = Self::zero(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.prime as u64;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimMismatch("vector length".into()));
        }
        let p = self.prime as u64;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + mul_mod(a, b, p)) % p)
            })
            .collect())
    }
}

/// Result of Gauss–Jordan over `F_p`.
#[derive(Debug, Clone, Serialize)]
pub struct FpReduction {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Reduced row echelon form rows (nonzero rows only).
    pub rref: Vec<Vec<u64>>,
    /// Basis of the right kernel `{x : M x = 0}`.
    pub kernel: Vec<Vec<u64>>,
}

/// Reduced row echelon form, rank, and right-kernel basis over `F_p`.
pub fn fp_reduce(m: &FpMatrix) -> FpReduction {
    let p = m.prime as u64;
    let mut rows: Vec<Vec<u64>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut lead = 0usize;
    for col in 0..m.cols {
        let Some(sel) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(lead, sel);
        let inv = inv_mod(rows[lead][col], p).expect("field");
        for v in rows[lead].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let lead_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != lead && row[col] != 0 {
                let factor = row[col];
                for (dst, &src) in row.iter_mut().zip(&lead_row) {
                    let sub = mul_mod(factor, src, p);
                    *dst = (*dst + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    let rank = pivot_cols.len();
    let rref: Vec<Vec<u64>> = rows.into_iter().take(rank).collect();
    // Kernel basis: one vector per free column.
    let mut kernel = Vec::new();
    let pivot_set: std::collections::BTreeMap<usize, usize> = pivot_cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    for free in 0..m.cols {
        if pivot_set.contains_key(&free) {
            continue;
        }
        let mut v = vec![0u64; m.cols];
        v[free] = 1;
        for (&pc, &pr) in &pivot_set {
            // pivot row pr: x[pc] + sum coeffs = 0 => x[pc] = -rref[pr][free]
            v[pc] = (p - rref[pr][free]) % p;
        }
        kernel.push(v);
    }
    FpReduction {
        rank,
        pivot_cols,
        rref,
        kernel,
    }
}

/// Dense matrix over `Z/p^N`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpnMatrix {
    prime: u32,
    precision: u32,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZpnMatrix {
    pub fn zero(prime: u32, precision: u32, rows: usize, cols: usize) -> Self {
        ZpnMatrix {
            prime,
            precision,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(prime: u32, precision: u32, rows: Vec<Vec<u64>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinAlgError::DimMismatch("ragged rows".into()));
        }
        let m = p_pow(prime, precision);
        let data = rows.into_iter().flatten().map(|v| v % m).collect();
        Ok(ZpnMatrix {
            prime,
            precision,
            rows: r,
            cols: c,
            data,
        })
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus();
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.prime, self.precision, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimMismatch("vector length".into()));
        }
        let m = self.modulus();
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0u64, |acc, c| (acc + mul_mod(self.get(r, c), v[c], m)) % m)
            })
            .collect())
    }
}

/// Outcome of a linear solve over `Z/p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HowellSolution {
    /// `m * particular = b`; `kernel_gens` generate `{x : m x = 0}`.
    Solved {
        particular: Vec<u64>,
        kernel_gens: Vec<Vec<u64>>,
    },
    NoSolution,
}

fn val_p(mut x: u64, p: u64, n: u32) -> u32 {
    if x == 0 {
        return n;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Howell form of the row span of `a`, with a transformation ledger:
/// every returned row satisfies `row = trans * a` over `Z/p^N`.
struct Howell {
    /// (pivot column, pivot valuation, row, transformation row)
    pivots: Vec<(usize, u32, Vec<u64>, Vec<u64>)>,
    /// Transformations of rows that vanished — these generate the left kernel.
    kernel: Vec<Vec<u64>>,
}

fn howell_form(a: &ZpnMatrix) -> Howell {
    let p = a.prime as u64;
    let n = a.precision;
    let modulus = a.modulus();
    let ncols = a.cols;
    let nrows = a.rows;
    // Working rows: (A-part, transformation part).
    let mut work: Vec<(Vec<u64>, Vec<u64>)> = (0..nrows)
        .map(|r| {
            let mut t = vec![0u64; nrows];
            t[r] = 1;
            ((0..ncols).map(|c| a.get(r, c)).collect(), t)
        })
        .collect();
    let mut processed: Vec<(usize, u32, Vec<u64>, Vec<u64>)> = Vec::new();

    for col in 0..ncols {
        // Minimal-valuation row in this column (first such, deterministic).
        let mut best: Option<(usize, u32)> = None;
        for (i, (row, _)) in work.iter().enumerate() {
            if row[col] == 0 {
                continue;
            }
            let v = val_p(row[col], p, n);
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        let Some((idx, v)) = best else {
            continue;
        };
        let (mut row, mut trans) = work.swap_remove(idx);
        // Normalize pivot to exactly p^v.
        let unit = row[col] / p_pow(a.prime, v);
        let uinv = inv_mod(unit % modulus, modulus).expect("unit part");
        for x in row.iter_mut().chain(trans.iter_mut()) {
            *x = mul_mod(*x, uinv, modulus);
        }
        let pv = p_pow(a.prime, v);
        debug_assert_eq!(row[col], pv);
        // Eliminate this column from the remaining working rows (their
        // valuation at col is >= v, so division is exact).
        for (wrow, wtrans) in work.iter_mut() {
            if wrow[col] == 0 {
                continue;
            }
            let q = wrow[col] / pv;
            for c in 0..ncols {
                let sub = mul_mod(q, row[c], modulus);
                wrow[c] = (wrow[c] + modulus - sub) % modulus;
            }
            for c in 0..nrows {
                let sub = mul_mod(q, trans[c], modulus);
                wtrans[c] = (wtrans[c] + modulus - sub) % modulus;
            }
        }
        // Reduce entries above the pivot to their residue mod p^v.
        for (_, _, prow, ptrans) in processed.iter_mut() {
            let q = prow[col] / pv;
            if q == 0 {
                continue;
            }
            for c in 0..ncols {
                let sub = mul_mod(q, row[c], modulus);
                prow[c] = (prow[c] + modulus - sub) % modulus;
            }
            for c in 0..nrows {
                let sub = mul_mod(q, trans[c], modulus);
                ptrans[c] = (ptrans[c] + modulus - sub) % modulus;
            }
        }
        // Howell augmentation: p^(N-v) times the pivot row re-enters the queue.
        if v > 0 {
            let factor = p_pow(a.prime, n - v);
            let arow: Vec<u64> = row.iter().map(|&x| mul_mod(x, factor, modulus)).collect();
            let atrans: Vec<u64> = trans.iter().map(|&x| mul_mod(x, factor, modulus)).collect();
            if arow.iter().any(|&x| x != 0) || atrans.iter().any(|&x| x != 0) {
                work.push((arow, atrans));
            }
        }
        processed.push((col, v, row, trans));
    }

    let kernel = work
        .into_iter()
        .filter(|(row, trans)| row.iter().all(|&x| x == 0) && trans.iter().any(|&x| x != 0))
        .map(|(_, trans)| trans)
        .collect();
    Howell {
        pivots: processed,
        kernel,
    }
}

/// Solve `m * x = b` over `Z/p^N`, returning a particular solution and
/// generators of the right kernel, or `NoSolution`.
///
/// Internally this runs the Howell form of `m` transposed — the column span of
/// `m` is the row span of the transpose — and reads the solution off the
/// transformation ledger.
pub fn howell_solve(m: &ZpnMatrix, b: &[u64]) -> Result<HowellSolution, LinAlgError> {
    if b.len() != m.rows {
        return Err(LinAlgError::DimMismatch(format!(
            "rhs has length {}, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let modulus = m.modulus();
    let p = m.prime as u64;
    let at = m.transpose();
    let h = howell_form(&at);

    // Reduce b against the Howell rows, accumulating transformation coefficients.
    let mut target: Vec<u64> = b.iter().map(|&x| x % modulus).collect();
    let mut combo = vec![0u64; at.rows]; // coefficients in terms of at's rows = m's columns
    for (col, v, row, trans) in &h.pivots {
        let pv = p_pow(m.prime, *v);
        let entry = target[*col];
        if entry == 0 {
            continue;
        }
        if val_p(entry, p, m.precision) < *v {
            return Ok(HowellSolution::NoSolution);
        }
        let q = entry / pv;
        for c in 0..target.len() {
            let sub = mul_mod(q, row[c], modulus);
            target[c] = (target[c] + modulus - sub) % modulus;
        }
        for c in 0..combo.len() {
            combo[c] = (combo[c] + mul_mod(q, trans[c], modulus)) % modulus;
        }
    }
    if target.iter().any(|&x| x != 0) {
        return Ok(HowellSolution::NoSolution);
    }
    let kernel_gens = h.kernel;
    Ok(HowellSolution::Solved {
        particular: combo,
        kernel_gens,
    })
}

/// Log_p of the cardinality of the row span of `m` over `Z/p^N`: each Howell
/// pivot `p^k` contributes `N - k` digits. Used for exact length computations.
pub fn span_size_log(m: &ZpnMatrix) -> u64 {
    let h = howell_form(m);
    h.pivots
        .iter()
        .map(|(_, v, _, _)| (m.precision - v) as u64)
        .sum()
}

/// Membership of `b` in the row span of `m` over `Z/p^N`.
pub fn row_span_contains(m: &ZpnMatrix, b: &[u64]) -> Result<bool, LinAlgError> {
    if b.len() != m.cols {
        return Err(LinAlgError::DimMismatch("vector length".into()));
    }
    match howell_solve(&m.transpose(), b)? {
        HowellSolution::Solved { .. } => Ok(true),
        HowellSolution::NoSolution => Ok(false),
    }
}

/// Convenience: scalar view of a 1x1 system, used by small certificates.
pub fn scalar_solve(a: PrecScalar, b: PrecScalar) -> Option<PrecScalar> {
    let m = ZpnMatrix::from_rows(
        a.prime(),
        a.precision().min(b.precision()),
        vec![vec![a.value()]],
    )
    .expect("1x1");
    match howell_solve(&m, &[b.value()]).expect("1x1") {
        HowellSolution::Solved { particular, .. } => Some(PrecScalar::new(
            particular[0] as i128,
            a.prime(),
            m.precision(),
        )),
        HowellSolution::NoSolution => None,
    }
}
