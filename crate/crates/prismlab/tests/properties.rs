//! Property-based invariants for the exact-arithmetic core and the
//! normalization/rewriting layers.  Strategies draw small windows (p in
//! {2,3,5}, low precision, low degree caps) so each case is cheap while the
//! sampled space still covers carries, truncation, and unit handling.

use std::sync::Arc;

use proptest::prelude::*;

use prismlab::arith::{MonOrder, Monomial, RingSpec, TruncSeries};
use prismlab::cohen::rewrite_mod_orientation;
use prismlab::delta::DeltaRingSpec;
use prismlab::exactalg::{row_span_contains, span_size_log, ZpnMatrix};
use prismlab::groebner::ideal_member;
use prismlab::localring::window_membership;
use prismlab::prism::normalize_orientation;
use prismlab::reader::parse_expression;

// ---------------------------------------------------------------------------
// strategies
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Window {
    ring: Arc<RingSpec>,
}

fn window_strategy() -> impl Strategy<Value = Window> {
    (
        prop_oneof![Just(2u32), Just(3), Just(5)],
        2u32..=4,
        4u32..=6,
        1usize..=2,
    )
        .prop_map(|(p, precision, cap, nvars)| {
            let vars: Vec<String> = ["T", "S"]
                .iter()
                .take(nvars)
                .map(|s| s.to_string())
                .collect();
            Window {
                ring: RingSpec::new(p, precision, cap, vars).expect("valid window"),
            }
        })
}

/// Series with monomial degrees at most `max_deg` (cap-bounded).
fn series_in(window: &Window, max_deg: u32) -> impl Strategy<Value = TruncSeries> {
    let ring = window.ring.clone();
    let modulus = i128::from(ring.prime()).pow(ring.precision());
    let nvars = ring.nvars();
    let deg = max_deg.min(ring.degree_cap());
    let term =
        (proptest::collection::vec(0..=deg, nvars), 0..modulus).prop_map(move |(exps, c)| {
            let mut exps = exps;
            // Clamp the total degree by zeroing trailing exponents if needed.
            let mut total: u32 = exps.iter().sum();
            for e in exps.iter_mut().rev() {
                if total <= deg {
                    break;
                }
                let drop = (*e).min(total - deg);
                *e -= drop;
                total -= drop;
            }
            (Monomial::from_exps(exps), c)
        });
    proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
        let mut acc = std::collections::BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert(0i128) += c;
        }
        TruncSeries::from_terms(
            &ring,
            acc.into_iter().map(|(m, c)| (m, c % modulus)).collect(),
        )
        .expect("sampled terms fit the window")
    })
}

fn full_series(window: &Window) -> impl Strategy<Value = TruncSeries> {
    let deg = window.ring.degree_cap();
    series_in(window, deg)
}

prop_compose! {
    fn window_and_three()(w in window_strategy())
        (a in full_series(&w), b in full_series(&w), c in full_series(&w), w in Just(w))
        -> (Window, TruncSeries, TruncSeries, TruncSeries) {
        (w, a, b, c)
    }
}

prop_compose! {
    fn window_and_two_bounded()(w in window_strategy())
        (a in series_in(&w, w.ring.degree_cap() / 2),
         b in series_in(&w, w.ring.degree_cap() / 2),
         w in Just(w))
        -> (Window, TruncSeries, TruncSeries) {
        (w, a, b)
    }
}

// ---------------------------------------------------------------------------
// window arithmetic is a commutative ring (truncation included)
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn addition_is_commutative_and_associative((_w, a, b, c) in window_and_three()) {
        let ab = a.try_add(&b).unwrap();
        let ba = b.try_add(&a).unwrap();
        prop_assert_eq!(&ab, &ba);
        let left = ab.try_add(&c).unwrap();
        let right = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_commutative_and_associative((_w, a, b, c) in window_and_three()) {
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        // Truncation keeps associativity exact: a term dropped early would
        // only feed monomials beyond the cap later.
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes((_w, a, b, c) in window_and_three()) {
        let left = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let right = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn additive_inverse_and_units((w, a, _b, _c) in window_and_three()) {
        let zero = TruncSeries::zero(&w.ring);
        let one = TruncSeries::one(&w.ring);
        prop_assert_eq!(a.try_add(&a.neg()).unwrap(), zero.clone());
        prop_assert_eq!(a.try_add(&zero).unwrap(), a.clone());
        prop_assert_eq!(a.try_mul(&one).unwrap(), a.clone());
        prop_assert_eq!(a.try_mul(&zero).unwrap(), zero);
    }
}

// ---------------------------------------------------------------------------
// display round-trips through the expression parser
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn display_round_trips((w, a, _b, _c) in window_and_three()) {
        let rendered = a.to_string();
        let reparsed = parse_expression(&rendered, &w.ring)
            .unwrap_or_else(|e| panic!("display output `{rendered}` must reparse: {e}"));
        prop_assert_eq!(reparsed, a);
    }
}

// ---------------------------------------------------------------------------
// the fiber map is a ring homomorphism (absent truncation)
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn fiber_reduce_is_a_homomorphism((_w, a, b) in window_and_two_bounded()) {
        let sum = a.try_add(&b).unwrap();
        prop_assert_eq!(sum.fiber_reduce(), a.fiber_reduce().add(&b.fiber_reduce()));
        // Bounded degrees keep the product inside the window, where the
        // fiber of a product is the product of the fibers.
        let prod = a.try_mul(&b).unwrap();
        prop_assert!(!prod.is_saturated());
        prop_assert_eq!(prod.fiber_reduce(), a.fiber_reduce().mul(&b.fiber_reduce()));
    }

    #[test]
    fn frobenius_lift_reduces_to_pth_power((w, a, _b) in window_and_two_bounded()) {
        // Degrees at most cap/2 guarantee an exact phi image only when
        // p = 2, so filter the rest through the saturation flag.
        let spec = DeltaRingSpec::rank_one(&w.ring);
        let image = spec.phi(&a);
        prop_assume!(image.is_ok());
        let image = image.unwrap();
        prop_assume!(!image.is_saturated());
        let max_deg = a.degree().unwrap_or(0);
        prop_assume!(max_deg * w.ring.prime() <= w.ring.degree_cap());
        prop_assert_eq!(image.fiber_reduce(), a.fiber_reduce().pow(w.ring.prime()));
    }
}

// ---------------------------------------------------------------------------
// orientation normalization: scalar units round-trip exactly
// ---------------------------------------------------------------------------

prop_compose! {
    fn normalization_case()(w in window_strategy())
        (unit in 1i128..=120, tail in full_series(&w), w in Just(w))
        -> (Window, i128, TruncSeries) {
        (w, unit, tail)
    }
}

proptest! {
    #[test]
    fn scalar_unit_normalization_round_trips((w, unit_raw, tail) in normalization_case()) {
        let p = i128::from(w.ring.prime());
        prop_assume!(unit_raw % p != 0);
        // Strip the constant term so the tail sits in the maximal ideal.
        let constant = TruncSeries::scalar(&w.ring, i128::from(tail.constant_term().value()));
        let f = tail.try_sub(&constant).unwrap();

        let u = TruncSeries::scalar(&w.ring, unit_raw);
        let p_minus_f = TruncSeries::p(&w.ring).try_sub(&f).unwrap();
        let d = u.try_mul(&p_minus_f).unwrap();
        prop_assume!(!d.is_saturated());

        let spec = DeltaRingSpec::rank_one(&w.ring);
        let (f_back, u_back) = normalize_orientation(&spec, &d)
            .unwrap_or_else(|e| panic!("u*(p - f) must normalize: {e}"));

        // The recorded unit must witness the factorization bit-exactly.
        let recomposed = u_back.try_mul(&TruncSeries::p(&w.ring).try_sub(&f_back).unwrap()).unwrap();
        prop_assert_eq!(recomposed, d, "u * (p - f) must reproduce the input");

        // The decomposition itself is unique only modulo p^(N-1): scaling p
        // by 1 + c*p^(N-1) is invisible at precision N.  The recovered pair
        // must therefore agree with the constructed one at one digit less.
        let modulus_down = u64::try_from(p).unwrap().pow(w.ring.precision() - 1);
        let u_diff = u_back.try_sub(&u).unwrap();
        prop_assert_eq!(
            u_diff.constant_term().value() % modulus_down, 0,
            "units must agree modulo p^(N-1): got {} vs {}", &u_back, &u
        );
        let f_diff = f_back.try_sub(&f).unwrap();
        prop_assert!(
            f_diff.terms().all(|(_, c)| c.value() % modulus_down == 0),
            "tails must agree modulo p^(N-1): got {} vs {}", &f_back, &f
        );
        // In particular the fibers coincide.
        prop_assert_eq!(f_back.fiber_reduce(), f.fiber_reduce());
    }
}

// ---------------------------------------------------------------------------
// digit rewriting stays congruent modulo the orientation
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rewrite_is_congruent_mod_orientation(
        (w, g, _b) in window_and_two_bounded(),
        fexp in 1u32..=2,
    ) {
        prop_assume!(w.ring.nvars() >= 1);
        let f = TruncSeries::var(&w.ring, 0).pow(fexp);
        let rewritten = rewrite_mod_orientation(&g, &f).unwrap();
        let diff = g.try_sub(&rewritten).unwrap();
        let p_minus_f = TruncSeries::p(&w.ring).try_sub(&f).unwrap();
        let witness = window_membership(&diff, &[p_minus_f]).unwrap();
        prop_assert!(
            witness.is_some(),
            "g - rewrite(g) must lie in (p - f): g = {}, rewritten = {}",
            g,
            rewritten
        );
    }
}

// ---------------------------------------------------------------------------
// monomial order: degrevlex is a total, multiplicative order
// ---------------------------------------------------------------------------

fn monomial_strategy(nvars: usize) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..=5, nvars).prop_map(Monomial::from_exps)
}

proptest! {
    #[test]
    fn degrevlex_is_total_and_multiplicative(
        m1 in monomial_strategy(2),
        m2 in monomial_strategy(2),
        m3 in monomial_strategy(2),
    ) {
        use std::cmp::Ordering;
        // Antisymmetry and totality come from Ord; spot-check consistency.
        prop_assert_eq!(m1.cmp(&m2), m2.cmp(&m1).reverse());
        // Transitivity on the sampled triple.
        if m1 <= m2 && m2 <= m3 {
            prop_assert!(m1 <= m3);
        }
        // Multiplication preserves strict order.
        if m1.cmp(&m2) == Ordering::Less {
            prop_assert_eq!(m1.mul(&m3).cmp(&m2.mul(&m3)), Ordering::Less);
        }
        // The unit divides everything and multiplication respects divisibility.
        prop_assert!(Monomial::one(2).divides(&m1));
        prop_assert!(m1.divides(&m1.mul(&m2)));
        prop_assert_eq!(m1.lcm(&m1.mul(&m2)), m1.mul(&m2));
    }
}

// ---------------------------------------------------------------------------
// Howell span invariants over Z/p^N
// ---------------------------------------------------------------------------

prop_compose! {
    fn zpn_case()(p in prop_oneof![Just(2u32), Just(3), Just(5)], precision in 2u32..=3)
        (rows in proptest::collection::vec(
            proptest::collection::vec(0u64..u64::from(p).pow(precision), 4), 1..=3),
         p in Just(p), precision in Just(precision))
        -> (u32, u32, Vec<Vec<u64>>) {
        (p, precision, rows)
    }
}

proptest! {
    #[test]
    fn howell_span_contains_rows_and_ignores_order((p, precision, rows) in zpn_case()) {
        let m = ZpnMatrix::from_rows(p, precision, rows.clone()).unwrap();
        for row in &rows {
            prop_assert!(row_span_contains(&m, row).unwrap(), "own row escaped the span");
        }
        let mut reversed = rows.clone();
        reversed.reverse();
        let m2 = ZpnMatrix::from_rows(p, precision, reversed).unwrap();
        prop_assert_eq!(span_size_log(&m), span_size_log(&m2), "span must not depend on row order");

        // Scaling a row by p shrinks or preserves the span, never grows it.
        let mut scaled = rows;
        for v in scaled[0].iter_mut() {
            *v = (*v * u64::from(p)) % u64::from(p).pow(precision);
        }
        let m3 = ZpnMatrix::from_rows(p, precision, scaled).unwrap();
        prop_assert!(span_size_log(&m3) <= span_size_log(&m));
    }
}

// ---------------------------------------------------------------------------
// ideal membership over the polynomial fiber
// ---------------------------------------------------------------------------

prop_compose! {
    fn fiber_pair()(w in window_strategy())
        (a in full_series(&w), b in full_series(&w))
        -> (prismlab::arith::FpPoly, prismlab::arith::FpPoly) {
        (a.fiber_reduce(), b.fiber_reduce())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn products_lie_in_principal_ideals((f, g) in fiber_pair()) {
        prop_assume!(!f.is_zero());
        let product = f.mul(&g);
        prop_assert!(ideal_member(&product, &[f], MonOrder::DegRevLex).unwrap());
    }
}
