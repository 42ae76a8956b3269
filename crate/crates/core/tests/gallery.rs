use cis_core::cis::{is_finitely_semicomponible, semicomponible, validate_cis, Cis};
use cis_core::gallery::{
    build_example, search_non_fundamental, sphere, BaseSpace, GalleryId, SearchOutcome,
};
use cis_core::homology::{betti_mod2, order_complex};
use cis_core::limit::{
    build_fundamental, canonical_bijection, cover_profile, has_weak_topology, verify_limit_axioms,
    verify_split_axioms,
};
use cis_core::space::{classify_map, find_homeomorphism};

fn all_examples() -> Vec<GalleryId> {
    let mut v = Vec::new();
    for base in [
        BaseSpace::Point,
        BaseSpace::Sierpinski,
        BaseSpace::Discrete(3),
        BaseSpace::Circle,
    ] {
        v.push(GalleryId::Identity { base, stages: 3 });
    }
    for n in 0..=4 {
        v.push(GalleryId::SphereChain(n));
        v.push(GalleryId::StationarySphere(n));
    }
    for n in 1..=3 {
        v.push(GalleryId::TorusChain(n));
    }
    for n in 1..=5 {
        v.push(GalleryId::IntervalChain(n));
    }
    v.push(GalleryId::NonSemicomponible);
    v
}

fn found(outcome: SearchOutcome) -> Vec<cis_core::limit::LimitSpace> {
    match outcome {
        SearchOutcome::Completed { found, .. } => found,
        SearchOutcome::Undecided { points, cap } => panic!("undecided: {points} points, cap {cap}"),
    }
}

#[test]
fn every_example_is_valid() {
    for id in all_examples() {
        let c = build_example(id).unwrap();
        assert!(validate_cis(&c).is_valid(), "{id}");
        let ls = build_fundamental(&c).unwrap();
        assert!(verify_limit_axioms(&c, &ls).unwrap().passes(), "{id}");
    }
}

#[test]
fn caps_are_enforced() {
    assert!(build_example(GalleryId::SphereChain(7)).is_err());
    assert!(build_example(GalleryId::TorusChain(5)).is_err());
    assert!(build_example(GalleryId::IntervalChain(7)).is_err());
    assert!(build_example(GalleryId::Identity {
        base: BaseSpace::Point,
        stages: 0
    })
    .is_err());
}

#[test]
fn names_parse() {
    let p = |name: &str, args: &[&str]| {
        GalleryId::parse(
            name,
            &args.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        )
    };
    assert_eq!(
        p("sphere_chain", &["2"]).unwrap(),
        GalleryId::SphereChain(2)
    );
    assert_eq!(
        p("identity", &["sierpinski", "3"]).unwrap(),
        GalleryId::Identity {
            base: BaseSpace::Sierpinski,
            stages: 3
        }
    );
    assert_eq!(
        p("non_semicomponible", &[]).unwrap(),
        GalleryId::NonSemicomponible
    );
    assert!(p("klein_bottle", &[]).is_err());
    assert!(p("sphere_chain", &["two"]).is_err());
    assert_eq!(GalleryId::SphereChain(2).to_string(), "sphere_chain(2)");
}

#[test]
fn sphere_chain_inclusions_are_closed_embeddings() {
    let c = build_example(GalleryId::SphereChain(2)).unwrap();
    assert_eq!(c.len(), 3);
    for i in 0..3 {
        assert_eq!(c.space(i).unwrap().len(), 2 * i + 2);
    }
    for i in 0..2 {
        let p = classify_map(&c.gluing_map(i).unwrap());
        assert!(p.continuous && p.closed && p.injective && p.embedding);
    }
}

#[test]
fn sphere_limits_reproduce_the_sphere() {
    for n in 0..=4 {
        let ls = build_fundamental(&build_example(GalleryId::SphereChain(n)).unwrap()).unwrap();
        assert!(find_homeomorphism(ls.space(), &sphere(n)).is_found());
        let mut expected = vec![0; n + 1];
        expected[0] += 1;
        expected[n] += 1;
        assert_eq!(betti_mod2(&order_complex(ls.space()), n), expected);
    }
}

#[test]
fn interval_chain_pairs() {
    let c = build_example(GalleryId::IntervalChain(3)).unwrap();
    assert!(is_finitely_semicomponible(&c).value);
    for i in 0..3 {
        assert!(semicomponible(&c, i, i).unwrap());
        for j in i + 1..3 {
            assert!(!semicomponible(&c, i, j).unwrap());
        }
    }
    let p = cover_profile(&build_fundamental(&c).unwrap());
    assert!(p.locally_finite && p.closed_cover);
}

#[test]
fn search_on_a_point_finds_nothing() {
    let c = build_example(GalleryId::Identity {
        base: BaseSpace::Point,
        stages: 2,
    })
    .unwrap();
    assert!(found(search_non_fundamental(&c, 6).unwrap()).is_empty());
}

#[test]
fn search_on_sierpinski_identity_finds_nothing() {
    // Stage maps onto the whole limit force its topology.
    let c = build_example(GalleryId::Identity {
        base: BaseSpace::Sierpinski,
        stages: 2,
    })
    .unwrap();
    match search_non_fundamental(&c, 6).unwrap() {
        SearchOutcome::Completed { limits, found, .. } => {
            assert_eq!(limits, 1);
            assert!(found.is_empty());
        }
        other => panic!("{other:?}"),
    }
}

fn check_non_fundamental(c: &Cis) -> usize {
    let fundamental = build_fundamental(c).unwrap();
    let hits = found(search_non_fundamental(c, 6).unwrap());
    for cand in &hits {
        assert!(verify_limit_axioms(c, cand).unwrap().passes());
        assert!(verify_split_axioms(c, cand).unwrap().passes());
        assert!(!has_weak_topology(c, cand).unwrap());
        // Same points and stage maps, strictly coarser topology: the
        // canonical bijection is continuous only out of the fundamental one.
        let bijection = canonical_bijection(c, &fundamental, cand).unwrap();
        assert!(bijection.is_continuous());
        assert!(!bijection.inverse().unwrap().is_continuous());
    }
    hits.len()
}

#[test]
fn non_semicomponible_system_has_a_non_fundamental_limit() {
    let c = build_example(GalleryId::NonSemicomponible).unwrap();
    assert!(check_non_fundamental(&c) >= 1);
    let hits = found(search_non_fundamental(&c, 6).unwrap());
    let cand = &hits[0];
    let ce = cand.space().index_of("[c=e]").unwrap();
    let a = cand.space().index_of("a").unwrap();
    assert!(cand.space().min_open(ce).contains(a));
}

#[test]
fn search_respects_its_cap() {
    let c = build_example(GalleryId::SphereChain(3)).unwrap();
    assert!(matches!(
        search_non_fundamental(&c, 6).unwrap(),
        SearchOutcome::Undecided { points: 8, cap: 6 }
    ));
    assert!(search_non_fundamental(&c, 99).is_err());
}
