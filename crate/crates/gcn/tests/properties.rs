//! Property tests for the exact-geometry and polynomial layers: random
//! rationals with numerators and denominators up to 10^6, random integer
//! lines, and random small polynomials.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use gcn::geom::{incident, intersect, line_through, Intersection, Line, Point, Rat};
use gcn::poly::BivarPoly;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
        .prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn point_strategy() -> impl Strategy<Value = Point> {
    (rat_strategy(), rat_strategy()).prop_map(|(x, y)| Point::new(x, y))
}

fn line_strategy() -> impl Strategy<Value = Line> {
    (-60i64..=60, -60i64..=60, -60i64..=60)
        .prop_filter("nonzero normal", |(a, b, _)| *a != 0 || *b != 0)
        .prop_map(|(a, b, c)| Line::from_ints(a, b, c).unwrap())
}

fn small_poly_strategy(n: usize) -> impl Strategy<Value = BivarPoly> {
    let terms = (n + 1) * (n + 2) / 2;
    proptest::collection::vec(-9i64..=9, terms).prop_map(move |coeffs| {
        let mut terms = Vec::new();
        let mut k = 0;
        for d in 0..=n {
            for i in 0..=d {
                terms.push((i, d - i, Rat::from_int(coeffs[k])));
                k += 1;
            }
        }
        BivarPoly::from_terms(n, &terms)
    })
}

proptest! {
    /// Canonicalization is idempotent on arbitrary integer triples.
    #[test]
    fn canonicalization_idempotent(a in -10_000i64..=10_000, b in -10_000i64..=10_000, c in -10_000i64..=10_000) {
        prop_assume!(a != 0 || b != 0);
        let l = Line::from_ints(a, b, c).unwrap();
        let again = Line::new(l.a().clone(), l.b().clone(), l.c().clone()).unwrap();
        prop_assert_eq!(l, again);
    }

    #[test]
    fn line_through_is_symmetric(p in point_strategy(), q in point_strategy()) {
        prop_assume!(p != q);
        prop_assert_eq!(line_through(&p, &q).unwrap(), line_through(&q, &p).unwrap());
    }

    /// Both defining points lie on the constructed line.
    #[test]
    fn line_through_round_trip(p in point_strategy(), q in point_strategy()) {
        prop_assume!(p != q);
        let l = line_through(&p, &q).unwrap();
        prop_assert!(incident(&l, &p));
        prop_assert!(incident(&l, &q));
    }

    /// Any intersection point lies on both lines.
    #[test]
    fn intersection_consistency(l1 in line_strategy(), l2 in line_strategy()) {
        match intersect(&l1, &l2) {
            Intersection::At(p) => {
                prop_assert!(incident(&l1, &p));
                prop_assert!(incident(&l2, &p));
            }
            Intersection::ParallelOrEqual => {
                prop_assert!(l1.is_parallel_to(&l2));
            }
        }
    }

    /// Multiplying by a line and dividing by it again is the identity, and
    /// the product vanishes identically on the line.
    #[test]
    fn division_round_trip(p in small_poly_strategy(3), l in line_strategy()) {
        let prod = p.mul_line(&l);
        prop_assert!(prod.restrict_to_line(&l).iter().all(Rat::is_zero) || !p.is_zero());
        let back = prod.divide_by_line(&l).unwrap();
        prop_assert_eq!(back, p);
    }

    /// A line-multiple vanishes at every point of the line; adding a nonzero
    /// constant breaks both the restriction and the point values.
    #[test]
    fn restriction_detects_divisibility(q in small_poly_strategy(2), l in line_strategy(), t in -20i64..=20) {
        let p = q.mul_line(&l);
        prop_assert!(p.restrict_to_line(&l).iter().all(Rat::is_zero));
        // a concrete point on the line via the canonical parametrization
        let pt = if !l.b().is_zero() {
            let x = Rat::from_int(t);
            let y = &(-&(&(&Rat::from_bigint(l.a().clone()) * &x) + &Rat::from_bigint(l.c().clone())))
                / &Rat::from_bigint(l.b().clone());
            Point::new(x, y)
        } else {
            let x = &(-&Rat::from_bigint(l.c().clone())) / &Rat::from_bigint(l.a().clone());
            Point::new(x, Rat::from_int(t))
        };
        prop_assert!(p.eval(&pt).is_zero());
        let shifted = p.add(&BivarPoly::constant(p.degree_bound(), Rat::one()));
        prop_assert!(shifted.restrict_to_line(&l).iter().any(|c| !c.is_zero()));
        prop_assert!(shifted.eval(&pt).is_one());
    }

    /// Evaluation is compatible with line multiplication.
    #[test]
    fn mul_line_eval_compatible(p in small_poly_strategy(2), l in line_strategy(), pt in point_strategy()) {
        let lhs = p.mul_line(&l).eval(&pt);
        let rhs = &p.eval(&pt) * &l.eval_at(&pt);
        prop_assert_eq!(lhs, rhs);
    }
}
