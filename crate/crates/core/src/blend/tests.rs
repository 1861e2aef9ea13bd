use super::*;
use crate::boundary::ReducedWord;
use crate::num::{Quadratic, Rational};
use crate::tree::parse_table;

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(s).unwrap()
}

fn path_pair() -> CompatibleMetricPair<Rational> {
    parse_pair("edge x m 1 3\nedge m y 2 1\npoint x x\npoint y y\npoint p x m 1/2\n").unwrap()
}

fn star_pair() -> CompatibleMetricPair<Rational> {
    parse_pair(
        "edge h a 1 2\nedge h b 2 1/2\nedge h c 3 3\nedge c d 1 5\n\
         point a a\npoint b b\npoint d d\npoint q h c 1\npoint hub h\n",
    )
    .unwrap()
}

#[test]
fn endpoints_and_arithmetic() {
    let p = path_pair();
    let t0 = blend_metric(&p, &r(0, 1)).unwrap();
    let t1 = blend_metric(&p, &r(1, 1)).unwrap();
    assert_eq!(t0.metric_table(), p.tree0().metric_table());
    assert_eq!(t1.metric_table(), p.tree1().metric_table());
    let half = blend_metric(&p, &r(1, 2)).unwrap();
    let lens: Vec<Rational> = half.edges().iter().map(|e| e.length.clone()).collect();
    assert_eq!(lens, vec![r(2, 1), r(3, 2)]);
    // p sits halfway along x-m in every metric
    assert_eq!(half.distance_by_name("x", "p").unwrap(), r(1, 1));
    assert!(matches!(blend_metric(&p, &r(-1, 10)), Err(BlendError::LambdaOutOfRange(_))));
    assert!(matches!(blend_metric(&p, &r(11, 10)), Err(BlendError::LambdaOutOfRange(_))));
}

#[test]
fn blends_are_affine_and_certified() {
    let p = star_pair();
    let (a, b) = (p.tree0().metric_table(), p.tree1().metric_table());
    for lam in lambda_grid::<Rational>(10) {
        let t = blend_metric(&p, &lam).unwrap();
        let m = t.metric_table();
        for i in 0..m.len() {
            for j in 0..m.len() {
                let want = lam.clone() * b.get(i, j).clone() + (r(1, 1) - lam.clone()) * a.get(i, j).clone();
                assert_eq!(*m.get(i, j), want);
            }
        }
        assert!(certify_rtree(&m).passes());
        assert_eq!(center_shift(p.tree0(), &t), None);
        assert_eq!(gromov_dichotomy(&a, &m), Ok(()));
    }
    assert_eq!(gromov_dichotomy(&a, &b), Ok(()));
}

#[test]
fn certification() {
    let square =
        parse_table::<Rational>("point a\npoint b\npoint c\npoint d\nd a b 1\nd b c 1\nd c d 1\nd d a 1\nd a c 2\nd b d 2\n").unwrap();
    let c = certify_rtree(&square);
    assert!(!c.passes() && c.realized.is_none() && c.verdict.witness.is_some());
    let edge = parse_table::<Rational>("point a\npoint b\nd a b 3\n").unwrap();
    assert!(certify_rtree(&edge).passes());
}

#[test]
fn incompatible_pairs_are_rejected() {
    assert!(matches!(parse_pair::<Rational>("edge a b 1 0\n"), Err(BlendError::NonPositiveLength(0))));
    assert!(parse_pair::<Rational>("edge a b 1\n").is_err());
    let shape = path_pair().tree0().clone();
    assert!(matches!(CompatibleMetricPair::new(shape, vec![r(1, 1)]), Err(BlendError::LengthCount { .. })));
}

#[test]
fn pair_files_round_trip() {
    let p = star_pair();
    let q: CompatibleMetricPair<Rational> = parse_pair(&write_pair(&p)).unwrap();
    assert_eq!(q.tree0().metric_table(), p.tree0().metric_table());
    assert_eq!(q.tree1().metric_table(), p.tree1().metric_table());
}

#[test]
fn marked_graphs() {
    let id = [w("a"), w("b")];
    let one = [r(1, 1), r(1, 1)];
    assert_eq!(marked_graph_length(&id, &one, &w("abab")).unwrap(), r(4, 1));
    assert_eq!(marked_graph_length(&id, &one, &w("abA")).unwrap(), r(1, 1));
    assert_eq!(marked_graph_length(&[w("a"), w("ba")], &one, &w("b")).unwrap(), r(2, 1));
    assert!(matches!(marked_graph_length(&[w("ab"), w("ba")], &one, &w("a")), Err(BlendError::NotGenerating(_))));
    assert!(matches!(marked_graph_length(&[w("a"), w("aa")], &one, &w("a")), Err(BlendError::NotGenerating(_))));
    assert!(marked_graph_length(&[w("aba"), w("ab")], &one, &w("a")).is_ok());
}

#[test]
fn axiom_checks() {
    let words = WordSet::up_to(2, 6);
    let rose = LengthFunction::from_marked_graph(&MarkedGraph::identity(vec![r(1, 1), r(1, 1)]).unwrap());
    assert!(length_axiom_check(&rose, &words).passes);
    let skew = LengthFunction::from_marked_graph(&MarkedGraph::new(vec![w("a"), w("ba")], vec![r(1, 1), r(2, 1)]).unwrap());
    assert!(length_axiom_check(&skew, &words).passes);
    let line = LengthFunction::from_line(&LineAction::new(vec![Quadratic::from_i128(1), Quadratic::sqrt(2)]).unwrap());
    assert!(length_axiom_check(&line, &WordSet::up_to(2, 5)).passes);

    let squared = LengthFunction::from_fn("squared", Provenance::Table, |v: &ReducedWord| Some(r((v.len() * v.len()) as i64, 1)));
    let rep = length_axiom_check(&squared, &words);
    let v = rep.witness.unwrap();
    assert_eq!((v.axiom, v.u.clone(), v.v.clone()), (Axiom::Products, w("a"), Some(w("a"))));
}

#[test]
fn naive_blends_of_two_roses_are_scanned_deterministically() {
    let one = vec![r(1, 1), r(1, 1)];
    let l0 = LengthFunction::from_marked_graph(&MarkedGraph::identity(one.clone()).unwrap());
    let l1 = LengthFunction::from_marked_graph(&MarkedGraph::new(vec![w("a"), w("ba")], one).unwrap());
    let words = WordSet::up_to(2, 4);
    let grid = lambda_grid::<Rational>(4);
    let a = axiom_scan(&l0, &l1, &grid, &words);
    let b = axiom_scan(&l0, &l1, &grid, &words);
    assert_eq!(a, b);
    assert!(a[0].1.passes && a[4].1.passes);
}

#[test]
fn combination_deviation() {
    let words: Vec<ReducedWord> = crate::boundary::cyclically_reduced_words(&crate::boundary::Basis::new(2).unwrap(), 6);
    let m0 = LineAction::new(vec![Quadratic::from_i128(1), Quadratic::sqrt(2)]).unwrap();
    let m1 = LineAction::new(vec![Quadratic::from_i128(2), Quadratic::sqrt(2) * Quadratic::from_i128(2)]).unwrap();
    let lam = Quadratic::from_ratio(1, 3);
    let blended = blend_line_actions(&m0, &m1, &lam).unwrap();
    let (l0, l1, lb) = (LengthFunction::from_line(&m0), LengthFunction::from_line(&m1), LengthFunction::from_line(&blended));
    let rep = convex_combination_length_check(&l0, &l1, &lb, &lam, &words);
    assert_eq!(rep.max_deviation, Quadratic::zero());
    assert_eq!(rep.skipped, 0);
    let same = convex_combination_length_check(&l0, &l0, &l0, &lam, &words);
    assert_eq!(same.max_deviation, Quadratic::zero());
    // weights pointing different ways do not combine linearly
    let m2 = LineAction::new(vec![Quadratic::from_i128(1), -Quadratic::sqrt(2)]).unwrap();
    let b2 = blend_line_actions(&m0, &m2, &lam).unwrap();
    let rep = convex_combination_length_check(&l0, &LengthFunction::from_line(&m2), &LengthFunction::from_line(&b2), &lam, &words);
    assert!(rep.max_deviation > Quadratic::zero());
}

#[test]
fn length_tables() {
    let lf: LengthFunction<Rational> = parse_length_table("a 1\nb 2 # petal\nab 3\n").unwrap();
    assert_eq!(lf.eval(&w("abA")), Some(r(2, 1)));
    assert_eq!(lf.eval(&w("ba")), Some(r(3, 1)));
    assert_eq!(lf.eval(&w("aab")), None);
    assert_eq!(lf.eval(&ReducedWord::empty()), Some(r(0, 1)));
    assert!(parse_length_table::<Rational>("a\n").is_err());
}
