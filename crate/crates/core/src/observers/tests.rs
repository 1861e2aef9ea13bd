use super::*;
use crate::num::Rational;
use crate::tree::parse_tree;

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn tree(text: &str) -> MetricTree<Rational> {
    parse_tree(text).unwrap()
}

fn loc(t: &MetricTree<Rational>, n: &str) -> Location<Rational> {
    t.locate(n).unwrap()
}

#[test]
fn directions_on_a_path_and_a_star() {
    let p = tree("edge A B 1\nedge B C 2");
    let d = direction_of(&p, &loc(&p, "B"), &loc(&p, "A")).unwrap();
    assert!(in_direction(&p, &d, &loc(&p, "A")).unwrap());
    assert!(!in_direction(&p, &d, &loc(&p, "C")).unwrap());
    assert_eq!(in_direction(&p, &d, &loc(&p, "B")), Err(ObserverError::PointIsBase));
    assert!(direction_of(&p, &loc(&p, "A"), &loc(&p, "A")).is_err());

    let s = tree("edge H x 1\nedge H y 2\nedge H z 3");
    let d = direction_of(&s, &loc(&s, "H"), &loc(&s, "x")).unwrap();
    assert!(!in_direction(&s, &d, &loc(&s, "y")).unwrap());
    assert!(!in_direction(&s, &d, &loc(&s, "z")).unwrap());
    assert!(in_direction(&s, &d, &s.normalize(crate::tree::EdgeId(0), r(1, 2))).unwrap());

    let q = tree("edge A B 1\nedge B C 1\nedge C D 1");
    let d = direction_of(&q, &loc(&q, "B"), &loc(&q, "D")).unwrap();
    assert!(in_direction(&q, &d, &loc(&q, "C")).unwrap());
}

#[test]
fn multipod_directions_hold_one_arm() {
    let m = Multipod::<Rational>::new(10);
    let d = direction_of(&m, &PodPoint::Hub, &m.point(3, r(1, 1))).unwrap();
    for arm in 0..10 {
        for off in [r(1, 3), r(1, 1)] {
            assert_eq!(in_direction(&m, &d, &m.point(arm, off)).unwrap(), arm == 3);
        }
    }
}

#[test]
fn constant_sequence_stabilizes_immediately() {
    let p = tree("edge A B 1\nedge B C 2");
    let seq = PointSequence::constant(loc(&p, "C"));
    let l = liminf_from(&p, &loc(&p, "A"), &seq, 20).unwrap();
    assert_eq!(l.point, loc(&p, "C"));
    assert_eq!(l.stabilized_at, 1);
    assert_eq!(l.certificate, Dist::Finite(r(0, 1)));
}

#[test]
fn turning_sequence_has_the_hub_as_inferior_limit() {
    let m = Multipod::<Rational>::infinite();
    let q = m.point(0, r(1, 2));
    let seq = PointSequence::from_fn(|n| Some(m.point(n, r(1, 1))));
    let l = liminf_from(&m, &q, &seq, 200).unwrap();
    assert_eq!(l.point, PodPoint::Hub);
    assert_eq!(l.certificate, Dist::Finite(r(0, 1)));
}

#[test]
fn line_liminf_toward_the_basepoint() {
    let line = RealLine::<f64>::new();
    let seq = PointSequence::from_fn(|n| {
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        Some(LinePoint::At(s * (1.0 + 1.0 / n as f64)))
    });
    let depth = 10_000;
    let l = liminf_from(&line, &LinePoint::At(-5.0), &seq, depth).unwrap();
    // numeric oracle: from the left the limit is the least term of the window
    let h = tail_start(depth);
    let oracle = (h..=depth).map(|n| if n % 2 == 0 { 1.0 + 1.0 / n as f64 } else { -(1.0 + 1.0 / n as f64) }).fold(f64::INFINITY, f64::min);
    let got = *l.point.coordinate().unwrap();
    assert!((got - oracle).abs() < 1e-12);
    assert!((got + 1.0).abs() <= 1.0 / h as f64);
}

#[test]
fn liminf_rejects_bad_input() {
    let line = RealLine::<f64>::new();
    let empty = PointSequence::<LinePoint<f64>>::from_vec(vec![]);
    assert_eq!(liminf_from(&line, &LinePoint::At(0.0), &empty, 5), Err(ObserverError::EmptySequence));
    let seq = PointSequence::constant(LinePoint::At(1.0));
    assert_eq!(liminf_from(&line, &LinePoint::PosInf, &seq, 5), Err(ObserverError::BoundaryBasepoint));
    assert_eq!(liminf_from(&line, &LinePoint::At(0.0), &seq, 0), Err(ObserverError::ZeroDepth));
}

#[test]
fn convergence_verdicts() {
    let p = tree("edge A B 1\nedge B C 2");
    let b = loc(&p, "B");
    let seq = PointSequence::constant(b.clone());
    let probes = vec![direction_of(&p, &loc(&p, "A"), &loc(&p, "C")).unwrap(), direction_of(&p, &loc(&p, "C"), &loc(&p, "A")).unwrap()];
    assert!(converges_obs(&p, &seq, &b, &probes, 10).unwrap().is_consistent());

    let line = RealLine::<Rational>::new();
    let seq = PointSequence::from_fn(|n| Some(LinePoint::At(r(1, n as i64))));
    let zero = LinePoint::At(r(0, 1));
    let probes =
        vec![direction_of(&line, &LinePoint::At(r(1, 2)), &zero).unwrap(), direction_of(&line, &LinePoint::At(r(-1, 2)), &zero).unwrap()];
    assert!(converges_obs(&line, &seq, &zero, &probes, 50).unwrap().is_consistent());
    // the same probes see that the sequence does not approach 1
    let one = LinePoint::At(r(1, 1));
    let probes = vec![direction_of(&line, &LinePoint::At(r(1, 2)), &one).unwrap()];
    assert!(matches!(converges_obs(&line, &seq, &one, &probes, 50).unwrap(), ObsVerdict::Refuted { probe: 0, .. }));
}

#[test]
fn multipod_turning_sequence_converges_only_to_the_hub() {
    let n = 100;
    let m = Multipod::<Rational>::new(n);
    let seq = PointSequence::from_fn(|k| Some(m.point((k - 1) % n, r(1, 1))));
    let probes = subbasis_from_sample(&m, (0..).map(|i| m.sample_point(i)), 8).unwrap();
    assert!(converges_obs(&m, &seq, &PodPoint::Hub, &probes, 100).unwrap().is_consistent());
    let target = m.point(3, r(1, 1));
    let mid = m.midpoint(&PodPoint::Hub, &target).unwrap();
    let refuter = vec![direction_of(&m, &mid, &target).unwrap()];
    assert!(!converges_obs(&m, &seq, &target, &refuter, 100).unwrap().is_consistent());
    let mv = metric_convergence(&m, &seq, &PodPoint::Hub, 100, &r(1, 10)).unwrap();
    assert!(!mv.converges);
    assert_eq!(mv.tail_distance, Dist::Finite(r(1, 1)));
}

#[test]
fn subbasis_counts() {
    let p = tree("edge A B 1\nedge B C 2");
    let two = subbasis_from_sample(&p, [loc(&p, "A"), loc(&p, "C")], 2).unwrap();
    assert_eq!(two.len(), 2);
    assert!(two.iter().all(|d| p.distance(&d.base, &loc(&p, "A")) == r(3, 2)));

    // first four sample points: A, B, C and the middle of A-B at 0, 1, 3, 1/2;
    // the six pairwise midpoints are distinct and each splits the sample
    let sample: Vec<_> = (0..4).map(|i| p.sample_point(i)).collect();
    let pos: Vec<Rational> = sample.iter().map(|x| p.distance(&loc(&p, "A"), x)).collect();
    assert_eq!(pos, vec![r(0, 1), r(1, 1), r(3, 1), r(1, 2)]);
    let mut mids = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let m = (pos[i].clone() + pos[j].clone()) / r(2, 1);
            if !mids.contains(&m) {
                mids.push(m);
            }
        }
    }
    let expected: usize = mids.iter().map(|m| usize::from(pos.iter().any(|x| x < m)) + usize::from(pos.iter().any(|x| x > m))).sum();
    assert_eq!(expected, 12);
    assert_eq!(subbasis_from_sample(&p, sample, 4).unwrap().len(), expected);

    // star: the three leaf midpoints sit inside the legs toward y and z
    let s = tree("edge H x 1\nedge H y 2\nedge H z 3");
    let dirs = subbasis_from_sample(&s, [loc(&s, "x"), loc(&s, "y"), loc(&s, "z")], 3).unwrap();
    assert_eq!(dirs.len(), 6);
    let mut bases: Vec<String> = dirs.iter().map(|d| s.describe(&d.base)).collect();
    bases.dedup();
    assert_eq!(bases, vec!["H-y@1/2", "H-z@1", "H-z@1/2"]);

    assert_eq!(subbasis_from_sample(&s, [loc(&s, "x"), loc(&s, "x")], 2), Err(ObserverError::DegenerateSample));
}

#[test]
fn extraction_examples() {
    let line = RealLine::<Rational>::new();
    let seq = PointSequence::from_fn(|n| Some(LinePoint::At(r(if n % 2 == 0 { 1 } else { -1 }, 1))));
    let zero = LinePoint::At(r(0, 1));
    let dirs = vec![direction_of(&line, &zero, &LinePoint::At(r(1, 1))).unwrap()];
    let ex = extract_convergent_subsequence(&line, &seq, &dirs, 100, Some(&zero)).unwrap();
    assert!(ex.indices.iter().all(|i| i % 2 == 0));
    assert_eq!(ex.indices.len(), 50);
    assert_eq!(ex.limit.point, LinePoint::At(r(1, 1)));
    assert!(!ex.exhausted);

    let constant = PointSequence::constant(LinePoint::At(r(2, 1)));
    let ex = extract_convergent_subsequence(&line, &constant, &dirs, 30, None).unwrap();
    assert_eq!(ex.indices, (1..=30).collect::<Vec<_>>());
    assert_eq!(ex.limit.point, LinePoint::At(r(2, 1)));

    let m = Multipod::<Rational>::infinite();
    let seq = PointSequence::from_fn(|k| Some(m.point(k, r(1, 1))));
    let dirs = subbasis_from_sample(&m, (0..).map(|i| m.sample_point(i)), 10).unwrap();
    let ex = extract_convergent_subsequence(&m, &seq, &dirs, 100, Some(&m.point(0, r(1, 2)))).unwrap();
    assert_eq!(ex.limit.point, PodPoint::Hub);
}

#[test]
fn shape_maps() {
    let a = tree("edge A B 1\nedge B C 2");
    let b = tree("edge A2 B2 3\nedge B2 C2 1");
    let id: Vec<(String, String)> = ["A", "B", "C"].iter().map(|x| (x.to_string(), x.to_string())).collect();
    assert!(verify_shape_map(&a, &a, &id).unwrap().passes);
    let natural: Vec<(String, String)> =
        [("A", "A2"), ("B", "B2"), ("C", "C2")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    assert!(verify_shape_map(&a, &b, &natural).unwrap().passes);

    let t = tree("edge H x 1\nedge H y 2\nedge H z 3\npoint px x\npoint py y\npoint pz z\npoint ph H\npoint m H x 1/2");
    let swap: Vec<(String, String)> =
        [("px", "py"), ("py", "px"), ("pz", "pz"), ("ph", "ph"), ("m", "m")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let v = verify_shape_map(&t, &t, &swap).unwrap();
    assert!(!v.passes);
    assert!(v.witness.is_some());

    let bad = vec![("A".to_string(), "A2".to_string()), ("B".to_string(), "A2".to_string()), ("C".to_string(), "C2".to_string())];
    assert!(matches!(verify_shape_map(&a, &b, &bad), Err(ObserverError::NotBijective(_))));
}

#[test]
fn convexity_of_designated_sets() {
    let s = tree("edge H x 1\nedge H y 2\nedge H z 3");
    assert!(is_convex(&s, &["H", "x"]).unwrap());
    assert!(!is_convex(&s, &["x", "y"]).unwrap());
    assert!(is_convex(&s, &["x", "y", "H"]).unwrap());
}
