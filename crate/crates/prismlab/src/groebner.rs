//! Gröbner bases over `F_p` for any supported monomial order.
//!
//! The fiber computations downstream all reduce to ideal arithmetic in
//! `F_p[T_1..T_n]`: membership, quotient bases, Krull dimension of the
//! leading-term ideal, colon ideals, intersections. Everything here is exact.
//!
//! Buchberger runs in rounds: all currently pending S-pairs that survive the
//! coprimality and chain criteria are reduced against a snapshot of the basis
//! in one parallel batch, then the nonzero remainders are folded in
//! sequentially in a fixed order. Correctness does not depend on the batching
//! (every remainder is re-reduced against the live basis before insertion),
//! and the fixed fold order keeps the output identical across thread counts.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{FpPoly, MonOrder, Monomial};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("the quotient is not finite-dimensional: no pure power of {var} appears among the leading terms")]
    NotArtinian { var: usize },
    #[error("quotient dimension exceeds the enumeration budget ({0} monomials)")]
    QuotientTooLarge(u64),
    #[error("generators disagree on prime or variable count: {0}")]
    Mixed(String),
}

/// A reduced Gröbner basis: monic generators, no leading term divides
/// another, every tail term reduced, sorted by ascending leading monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroebnerBasis {
    prime: u32,
    nvars: usize,
    order: MonOrder,
    gens: Vec<FpPoly>,
}

/// Fully reduce `f` against `basis`: no term of the result is divisible by
/// any leading monomial of the basis. Reducer choice is the first match in
/// basis order, so the result is deterministic for a fixed basis.
pub fn normal_form(f: &FpPoly, basis: &[FpPoly], order: MonOrder) -> FpPoly {
    let p = f.prime() as u64;
    let leads: Vec<(Monomial, u64)> = basis
        .iter()
        .filter_map(|g| g.leading(order).map(|(m, c)| (m.clone(), c)))
        .collect();
    let mut work = f.clone();
    let mut rem = FpPoly::zero(f.prime(), f.nvars());
    'outer: while let Some((lm, lc)) = work.leading(order) {
        let lm = lm.clone();
        for (i, (gm, gc)) in leads.iter().enumerate() {
            if let Some(q) = gm.div_into(&lm) {
                let ginv = crate::arith::inv_mod(*gc, p).expect("field");
                let scale = crate::arith::mul_mod(lc, ginv, p);
                work = work.sub(&basis[i].mul_monomial(&q, scale));
                continue 'outer;
            }
        }
        // Leading term irreducible: bank it and continue with the tail.
        let t = FpPoly::from_terms(f.prime(), f.nvars(), vec![(lm.clone(), lc)]);
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

fn s_poly(f: &FpPoly, g: &FpPoly, order: MonOrder) -> FpPoly {
    let (lf, cf) = f.leading(order).expect("nonzero");
    let (lg, cg) = g.leading(order).expect("nonzero");
    let l = lf.lcm(lg);
    let qf = lf.div_into(&l).expect("lcm");
    let qg = lg.div_into(&l).expect("lcm");
    f.mul_monomial(&qf, cg).sub(&g.mul_monomial(&qg, cf))
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Compute the reduced Gröbner basis of the ideal generated by `input`.
pub fn buchberger(input: &[FpPoly], order: MonOrder) -> Result<GroebnerBasis, GroebnerError> {
    let nonzero: Vec<&FpPoly> = input.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        // Zero ideal. Prime/nvars taken from the input if present, else trivial.
        let (p, n) = input
            .first()
            .map(|f| (f.prime(), f.nvars()))
            .unwrap_or((2, 0));
        return Ok(GroebnerBasis {
            prime: p,
            nvars: n,
            order,
            gens: vec![],
        });
    };
    let prime = first.prime();
    let nvars = first.nvars();
    if nonzero
        .iter()
        .any(|f| f.prime() != prime || f.nvars() != nvars)
    {
        return Err(GroebnerError::Mixed(format!(
            "expected all generators over F_{prime} in {nvars} variables"
        )));
    }

    let mut basis: Vec<FpPoly> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();
    for f in &nonzero {
        let r = normal_form(f, &basis, order);
        if !r.is_zero() {
            let idx = basis.len();
            basis.push(r.monic(order));
            for i in 0..idx {
                pending.insert((i, idx));
            }
        }
    }

    while !pending.is_empty() {
        // Deterministic batch order: by lcm degree, then lcm, then indices.
        let mut batch: Vec<(Monomial, usize, usize)> = pending
            .iter()
            .map(|&(i, j)| {
                let l = basis[i]
                    .leading(order)
                    .unwrap()
                    .0
                    .lcm(basis[j].leading(order).unwrap().0);
                (l, i, j)
            })
            .collect();
        batch.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| order.cmp(&a.0, &b.0))
                .then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
        });
        pending.clear();

        let mut todo: Vec<(usize, usize)> = Vec::new();
        for (lij, i, j) in batch {
            let li = basis[i].leading(order).unwrap().0;
            let lj = basis[j].leading(order).unwrap().0;
            // Coprimality criterion: disjoint leading supports reduce to zero.
            if li.mul(lj) == lij {
                processed.insert(pair_key(i, j));
                continue;
            }
            // Chain criterion: a third leading term dividing the lcm whose two
            // side pairs are already treated. Treated-set citations are ordered
            // by pop time, so the skips cannot be circular.
            let mut skip = false;
            for (k, g) in basis.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                if g.leading(order).unwrap().0.divides(&lij)
                    && processed.contains(&pair_key(i, k))
                    && processed.contains(&pair_key(j, k))
                {
                    skip = true;
                    break;
                }
            }
            processed.insert(pair_key(i, j));
            if !skip {
                todo.push((i, j));
            }
        }

        let snapshot = basis.clone();
        let remainders: Vec<FpPoly> = par::map_slice(&todo, |&(i, j)| {
            normal_form(&s_poly(&snapshot[i], &snapshot[j], order), &snapshot, order)
        });
        for r in remainders {
            if r.is_zero() {
                continue;
            }
            // Re-reduce against additions made earlier in this fold.
            let r = normal_form(&r, &basis, order);
            if r.is_zero() {
                continue;
            }
            let idx = basis.len();
            basis.push(r.monic(order));
            for i in 0..idx {
                pending.insert((i, idx));
            }
        }
    }

    let gens = interreduce(basis, order);
    Ok(GroebnerBasis {
        prime,
        nvars,
        order,
        gens,
    })
}

/// Interreduce a Gröbner basis to the unique reduced one.
fn interreduce(mut basis: Vec<FpPoly>, order: MonOrder) -> Vec<FpPoly> {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < basis.len() {
            let g = basis.remove(i);
            let r = normal_form(&g, &basis, order);
            if r.is_zero() {
                changed = true;
                continue; // dropped; indices shift down
            }
            let r = r.monic(order);
            if r != g {
                changed = true;
            }
            basis.insert(i, r);
            i += 1;
        }
        if !changed {
            break;
        }
    }
    basis.sort_by(|a, b| order.cmp(a.leading(order).unwrap().0, b.leading(order).unwrap().0));
    basis
}

impl GroebnerBasis {
    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonOrder {
        self.order
    }

    pub fn gens(&self) -> &[FpPoly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.iter().any(|g| g.degree() == Some(0))
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.gens
            .iter()
            .map(|g| g.leading(self.order).unwrap().0)
            .collect()
    }

    /// Normal form with respect to this basis — the canonical representative
    /// of `f` in the quotient.
    pub fn reduce(&self, f: &FpPoly) -> FpPoly {
        normal_form(f, &self.gens, self.order)
    }

    pub fn contains(&self, f: &FpPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Krull dimension of `F_p[T_1..T_n] / I`, computed from the leading-term
    /// ideal: the largest set of variables such that no leading monomial is
    /// supported inside it.
    pub fn dimension(&self) -> Result<usize, GroebnerError> {
        if self.is_unit_ideal() {
            return Err(GroebnerError::UnitIdeal);
        }
        let n = self.nvars;
        assert!(n <= 20, "variable count beyond subset enumeration");
        let supports: Vec<u32> = self
            .leading_monomials()
            .iter()
            .map(|m| m.support().iter().fold(0u32, |acc, &i| acc | (1 << i)))
            .collect();
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            if supports.iter().any(|&s| s & !mask == 0) {
                continue; // some leading monomial lives inside this set
            }
            best = best.max(mask.count_ones() as usize);
        }
        Ok(best)
    }

    /// Monomial basis of the quotient `F_p[T_1..T_n] / I` when it is finite
    /// dimensional, sorted ascending under the basis order. The quotient is
    /// finite dimensional exactly when every variable has a pure power among
    /// the leading terms.
    pub fn quotient_basis(&self) -> Result<Vec<Monomial>, GroebnerError> {
        if self.is_unit_ideal() {
            return Ok(vec![]); // the zero ring
        }
        let leads: Vec<&Monomial> = self.leading_monomials();
        let mut bounds = vec![0u32; self.nvars];
        for (var, slot) in bounds.iter_mut().enumerate() {
            let bound = leads
                .iter()
                .filter(|m| m.support() == [var])
                .map(|m| m.exps()[var])
                .min();
            match bound {
                Some(b) => *slot = b,
                None => return Err(GroebnerError::NotArtinian { var }),
            }
        }
        let size: u64 = bounds.iter().map(|&b| b as u64).product();
        if size > 1 << 20 {
            return Err(GroebnerError::QuotientTooLarge(size));
        }
        let mut basis = Vec::new();
        let mut exps = vec![0u32; self.nvars];
        loop {
            let m = Monomial::from_exps(exps.clone());
            if !leads.iter().any(|l| l.divides(&m)) {
                basis.push(m);
            }
            // Odometer increment over the box [0, bounds).
            let mut carry = true;
            for i in 0..self.nvars {
                if !carry {
                    break;
                }
                exps[i] += 1;
                if exps[i] >= bounds[i] {
                    exps[i] = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        basis.sort_by(|a, b| self.order.cmp(a, b));
        Ok(basis)
    }
}

/// Intersection of two ideals via a single auxiliary elimination variable:
/// `I ∩ J` is the elimination ideal of `t·I + (1−t)·J`.
pub fn ideal_intersection(a: &[FpPoly], b: &[FpPoly]) -> Result<Vec<FpPoly>, GroebnerError> {
    let probe = a.iter().chain(b.iter()).find(|f| !f.is_zero());
    let Some(probe) = probe else {
        return Ok(vec![]);
    };
    let (prime, nvars) = (probe.prime(), probe.nvars());
    let t = FpPoly::var(prime, nvars + 1, 0);
    let one_minus_t = FpPoly::one(prime, nvars + 1).sub(&t);
    let mut gens: Vec<FpPoly> = Vec::new();
    for f in a {
        gens.push(t.mul(&f.lift_aux()));
    }
    for g in b {
        gens.push(one_minus_t.mul(&g.lift_aux()));
    }
    let gb = buchberger(&gens, MonOrder::ElimFirst)?;
    Ok(gb
        .gens()
        .iter()
        .filter(|f| !f.uses_aux())
        .map(|f| f.drop_aux())
        .collect())
}

/// Colon ideal `I : f` for a single nonzero `f`, through the intersection
/// `I ∩ (f)` whose generators are exactly divisible by `f`.
pub fn ideal_colon(
    gens: &[FpPoly],
    f: &FpPoly,
    order: MonOrder,
) -> Result<Vec<FpPoly>, GroebnerError> {
    if f.is_zero() {
        // I : 0 is the unit ideal.
        let (p, n) = gens
            .first()
            .map(|g| (g.prime(), g.nvars()))
            .unwrap_or((2, 0));
        return Ok(vec![FpPoly::one(p, n)]);
    }
    let meet = ideal_intersection(gens, std::slice::from_ref(f))?;
    Ok(meet
        .iter()
        .map(|g| {
            g.exact_div(f, order)
                .expect("members of I ∩ (f) are divisible by f")
        })
        .collect())
}

/// Membership test for the ideal generated by `gens`.
pub fn ideal_member(f: &FpPoly, gens: &[FpPoly], order: MonOrder) -> Result<bool, GroebnerError> {
    Ok(buchberger(gens, order)?.contains(f))
}
