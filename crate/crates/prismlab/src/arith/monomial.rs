//! Monomials as exponent vectors, ordered degrevlex by default.

use std::cmp::Ordering;

use serde::Serialize;

/// Exponent vector of a monomial. The canonical `Ord` is degree-reverse-
/// lexicographic: higher total degree wins; on ties, the monomial with the
/// *smaller* exponent in the last differing position is the larger one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

/// Monomial orders recognized by the Groebner engine.
///
/// `ElimFirst` is an elimination order for the variable at index 0: any
/// monomial containing it beats any monomial that does not, with degrevlex
/// breaking ties. It is what the intersection/colon constructions use for
/// their auxiliary variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonOrder {
    DegRevLex,
    Lex,
    ElimFirst,
}

impl MonOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.exps.len(), b.exps.len(), "mixed arities");
        match self {
            MonOrder::DegRevLex => degrevlex(&a.exps, &b.exps),
            MonOrder::Lex => a.exps.cmp(&b.exps),
            MonOrder::ElimFirst => match a.exps[0].cmp(&b.exps[0]) {
                Ordering::Equal => degrevlex(&a.exps[1..], &b.exps[1..]),
                ord => ord,
            },
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    // smaller exponent in the last differing slot => larger monomial
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        ord => ord,
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        MonOrder::DegRevLex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn div_into(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Raise every exponent by the factor (the Frobenius on monomials).
    pub fn pow(&self, k: u32) -> Self {
        Monomial {
            exps: self.exps.iter().map(|&e| e * k).collect(),
        }
    }

    /// Every monomial in `nvars` variables of total degree at most `cap`,
    /// ascending in the canonical (degrevlex) order. This is the standard
    /// basis of one degree window, used to index linear systems.
    pub fn all_up_to(nvars: usize, cap: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; nvars];
        loop {
            if exps.iter().sum::<u32>() <= cap {
                out.push(Monomial::from_exps(exps.clone()));
            }
            // Odometer over the box [0, cap]^n; over-cap combinations are
            // filtered above.
            let mut carry = true;
            for e in exps.iter_mut() {
                if !carry {
                    break;
                }
                *e += 1;
                if *e > cap {
                    *e = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        out.sort();
        out
    }

    /// Render with the supplied variable names, `1` for the empty monomial.
    pub fn render(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                parts.push(vars[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", vars[i], e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    #[test]
    fn degrevlex_orders_by_total_degree_first() {
        assert!(m(&[2, 0]) > m(&[0, 1]));
        assert!(m(&[0, 3]) > m(&[1, 1]));
    }

    #[test]
    fn degrevlex_tie_break() {
        // Same degree: T^2 > T*S > S^2 when vars are (T, S).
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        // Classic three-variable check: x*z < y^2 in degrevlex.
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
    }

    #[test]
    fn lex_differs_from_degrevlex() {
        // Lex: T > S^5 for vars (T, S); degrevlex: S^5 > T.
        assert_eq!(
            MonOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])),
            Ordering::Greater
        );
        assert_eq!(
            MonOrder::DegRevLex.cmp(&m(&[1, 0]), &m(&[0, 5])),
            Ordering::Less
        );
    }

    #[test]
    fn elimination_order_separates_first_variable() {
        // (t, T, S): any power of t dominates.
        assert_eq!(
            MonOrder::ElimFirst.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])),
            Ordering::Greater
        );
        assert_eq!(
            MonOrder::ElimFirst.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 1])),
            Ordering::Greater
        );
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 0]);
        assert!(b.divides(&a));
        assert_eq!(b.div_into(&a), Some(m(&[1, 1])));
        assert_eq!(a.div_into(&b), None);
        assert_eq!(a.lcm(&m(&[0, 3])), m(&[2, 3]));
    }

    #[test]
    fn rendering() {
        let vars = vec!["T".to_string(), "S".to_string()];
        assert_eq!(m(&[0, 0]).render(&vars), "1");
        assert_eq!(m(&[2, 1]).render(&vars), "T^2*S");
    }
}
