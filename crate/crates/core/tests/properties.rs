use obstree_core::blend::{blend_metric, marked_graph_length, LengthFunction};
use obstree_core::boundary::{act, audit, reduce, saturate, Basis, BoundaryPair, BoundaryPoint, LaminationSample, Letter, ReducedWord};
use obstree_core::gen::{random_pair, random_table, random_tree};
use obstree_core::qmap::{q_fiber_check, translation_length, LineAction};
use obstree_core::{check_hyperbolic, reconstruct_tree, Quadratic, Rational, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1usize..=2, any::<bool>()), 0..max)
        .prop_map(|v| v.into_iter().map(|(k, inv)| if inv { Letter::generator(k).inverse() } else { Letter::generator(k) }).collect())
}

fn word(max: usize) -> impl Strategy<Value = ReducedWord> {
    letters(max).prop_map(|l| reduce(&l))
}

fn nonempty_word(max: usize) -> impl Strategy<Value = ReducedWord> {
    word(max).prop_filter("nonempty", |w| !w.is_empty())
}

fn periodic_point() -> impl Strategy<Value = BoundaryPoint> {
    (word(4), nonempty_word(4))
        .prop_map(|(u, c)| BoundaryPoint::periodic(u.letters(), c.letters()).unwrap_or_else(|_| BoundaryPoint::power(&c).unwrap()))
}

fn line() -> LineAction<Quadratic> {
    LineAction::new(vec![Quadratic::from_i128(1), Quadratic::sqrt(2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn centers_lie_on_all_three_segments(seed in any::<u64>(), i in 0usize..12, j in 0usize..12, k in 0usize..12) {
        let t = random_tree(&mut rng(seed), 8);
        let pts: Vec<_> = t.points().iter().map(|p| p.location.clone()).collect();
        let (p, q, r) = (&pts[i % pts.len()], &pts[j % pts.len()], &pts[k % pts.len()]);
        let c = t.center(p, q, r);
        prop_assert!(t.point_on_segment(&c, p, q));
        prop_assert!(t.point_on_segment(&c, q, r));
        prop_assert!(t.point_on_segment(&c, p, r));
        prop_assert!(t.same_point(&c, &t.center(r, p, q)));
        prop_assert_eq!(t.distance(p, &c), t.gromov_product(q, r, p));
    }

    #[test]
    fn tree_metrics_are_zero_hyperbolic_and_rebuild(seed in any::<u64>()) {
        let table = random_table(&mut rng(seed), 9);
        prop_assert!(check_hyperbolic(&table, &Rational::from_integer(0.into())).passes);
        let t = reconstruct_tree(&table).unwrap();
        let rebuilt = t.metric_table();
        let names: Vec<&str> = table.names().iter().map(String::as_str).collect();
        prop_assert_eq!(rebuilt.restrict(&names).unwrap(), table);
    }

    #[test]
    fn reduction_is_a_group_law(a in letters(12), b in letters(12), c in letters(12)) {
        let (u, v, w) = (reduce(&a), reduce(&b), reduce(&c));
        prop_assert_eq!(reduce(u.letters()), u.clone());
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        let mut ab = a.clone();
        ab.extend(&b);
        prop_assert_eq!(reduce(&ab), u.mul(&v));
    }

    #[test]
    fn boundary_action_composes(u in word(6), v in word(6), x in periodic_point()) {
        prop_assert_eq!(act(&u, &act(&v, &x)), act(&u.mul(&v), &x));
        prop_assert_eq!(act(&u.inverse(), &act(&u, &x)), x);
    }

    #[test]
    fn saturated_samples_pass_the_audit(c in nonempty_word(4), depth in 0usize..3) {
        let pair = BoundaryPair::new(BoundaryPoint::power(&c).unwrap(), BoundaryPoint::power(&c.inverse()).unwrap()).unwrap();
        let gens: Vec<ReducedWord> = Basis::new(2).unwrap().generators().into_iter().map(ReducedWord::letter).collect();
        let s = saturate(&LaminationSample::from_pairs([pair]), &gens, depth);
        prop_assert!(audit(&s).passes());
    }

    #[test]
    fn translation_length_is_a_class_function(w in nonempty_word(8), u in word(6)) {
        let conj = u.mul(&w).mul(&u.inverse());
        let a = line();
        prop_assert_eq!(translation_length(&a, &conj).unwrap().value, translation_length(&a, &w).unwrap().value);
        let images = [ReducedWord::parse("a").unwrap(), ReducedWord::parse("ba").unwrap()];
        let lens = [Rational::from_integer(1.into()), Rational::from_integer(2.into())];
        prop_assert_eq!(marked_graph_length(&images, &lens, &conj).unwrap(), marked_graph_length(&images, &lens, &w).unwrap());
        let lf = LengthFunction::from_line(&a);
        prop_assert_eq!(lf.eval(&w.inverse()), lf.eval(&w));
    }

    #[test]
    fn blended_metrics_are_affine(seed in any::<u64>(), n in 0i64..=8) {
        let p = random_pair(&mut rng(seed), 8);
        let lam = Rational::new(n.into(), 8.into());
        let m = blend_metric(&p, &lam).unwrap().metric_table();
        let (a, b) = (p.tree0().metric_table(), p.tree1().metric_table());
        for i in 0..m.len() {
            for j in 0..m.len() {
                let want = lam.clone() * b.get(i, j).clone() + (Rational::from_integer(1.into()) - lam.clone()) * a.get(i, j).clone();
                prop_assert_eq!(m.get(i, j), &want);
            }
        }
        prop_assert!(check_hyperbolic(&m, &Rational::from_integer(0.into())).passes);
    }

    #[test]
    fn fiber_checks_are_symmetric(x in periodic_point(), y in periodic_point()) {
        let a = line();
        let tol = Quadratic::from_ratio(1, 1_000_000);
        prop_assert_eq!(q_fiber_check(&a, &x, &y, 200, &tol).unwrap(), q_fiber_check(&a, &y, &x, 200, &tol).unwrap());
    }
}
