mod common;

use cis_core::cat::{
    check_limit_compatibility, cis_direct_limit, cocone_failures, compose_morphisms,
    induced_fundamental_map, induced_map, is_cis_isomorphism, validate_morphism, CisDiagram,
    CisMorphism, MorphismClause,
};
use cis_core::cis::Cis;
use cis_core::fuzz::{
    random_diagram, random_morphism, rng, GenConfig, MorphismKind, MORPHISM_KINDS,
};
use cis_core::gallery::{
    build_example, collapse_diagram, collapse_morphism, sphere_truncation_diagram, BaseSpace,
    GalleryId,
};
use cis_core::limit::build_fundamental;
use cis_core::space::find_homeomorphism;
use cis_core::CtsMap;
use common::seeded_cis;
use proptest::prelude::*;

fn gallery(id: GalleryId) -> Cis {
    build_example(id).unwrap()
}

/// Stagewise homeomorphic with matching gluing-set sizes.
fn stagewise_homeomorphic(a: &Cis, b: &Cis) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| {
            find_homeomorphism(a.space(i).unwrap(), b.space(i).unwrap()).is_found()
                && a.gluing_set(i).unwrap().len() == b.gluing_set(i).unwrap().len()
        })
}

#[test]
fn morphism_validation_examples() {
    let sc = gallery(GalleryId::SphereChain(3));
    assert!(validate_morphism(&CisMorphism::identity(&sc)).is_valid());
    let collapse_map = collapse_morphism(&sc).unwrap();
    assert!(validate_morphism(&collapse_map).is_valid());

    // Swap l0 and r0: a homeomorphism of the first stage that moves Y_0 = {r0}
    // off the target's gluing set.
    let ic = gallery(GalleryId::IntervalChain(2));
    let x0 = ic.space(0).unwrap();
    let image = (0..3)
        .map(|x| {
            let to = match x0.id(x) {
                "l0" => "r0",
                "r0" => "l0",
                other => other,
            };
            x0.index_of(to).unwrap()
        })
        .collect();
    let h0 = CtsMap::new(x0.clone(), x0.clone(), image).unwrap();
    assert!(h0.is_homeomorphism());
    let h1 = CtsMap::identity(ic.space(1).unwrap());
    let bad = CisMorphism::new(ic.clone(), ic.clone(), vec![h0, h1]).unwrap();
    let report = validate_morphism(&bad);
    assert!(report.has_failure(0, MorphismClause::KeepsGluingSet));
}

#[test]
fn composition_examples() {
    let c = seeded_cis(11, &GenConfig::default());
    let mut r = rng(11);
    let first = random_morphism(&mut r, &c, MorphismKind::Extend, "e").unwrap();
    let left = compose_morphisms(&CisMorphism::identity(first.target()), &first).unwrap();
    let right = compose_morphisms(&first, &CisMorphism::identity(&c)).unwrap();
    assert!(left.same_as(&first) && right.same_as(&first));
}

#[test]
fn isomorphism_examples() {
    let sc = gallery(GalleryId::SphereChain(2));
    assert!(is_cis_isomorphism(&CisMorphism::identity(&sc)));
    let rel = random_morphism(&mut rng(1), &sc, MorphismKind::Relabel, "q").unwrap();
    assert!(is_cis_isomorphism(&rel));
    assert!(!is_cis_isomorphism(&collapse_morphism(&sc).unwrap()));
}

#[test]
fn induced_map_examples() {
    let sc = gallery(GalleryId::SphereChain(3));
    let one = induced_fundamental_map(&CisMorphism::identity(&sc)).unwrap();
    assert_eq!(one, CtsMap::identity(one.source()));

    let collapse_map = induced_fundamental_map(&collapse_morphism(&sc).unwrap()).unwrap();
    assert_eq!(collapse_map.target().len(), 1);
    assert!(collapse_map.image().iter().all(|&t| t == 0));

    let rel = random_morphism(&mut rng(2), &sc, MorphismKind::Relabel, "q").unwrap();
    let l = induced_fundamental_map(&rel).unwrap();
    assert!(l.is_homeomorphism());
    assert!(l.inverse().unwrap().profile().embedding);
}

#[test]
fn constant_diagram_limit_is_the_object() {
    let c = gallery(GalleryId::Identity {
        base: BaseSpace::Circle,
        stages: 3,
    });
    let id = CisMorphism::identity(&c);
    let d = CisDiagram::new(vec![c.clone(); 3], vec![id.clone(), id]).unwrap();
    let dl = cis_direct_limit(&d).unwrap();
    assert!(stagewise_homeomorphic(&dl.cis, &c));
    assert!(dl.cocone.iter().all(is_cis_isomorphism));
    assert!(cocone_failures(&d, &dl).unwrap().is_empty());

    let report = check_limit_compatibility(&d).unwrap();
    assert!(report.passes(), "{report}");
    let target = build_fundamental(&dl.cis).unwrap();
    let mediators: Vec<CtsMap> = (0..3)
        .map(|n| {
            induced_map(
                &dl.cocone[n],
                &build_fundamental(&d.objects()[n]).unwrap(),
                &target,
            )
            .unwrap()
        })
        .collect();
    assert!(mediators
        .iter()
        .all(|t| t.is_homeomorphism() && t == &mediators[0]));
}

#[test]
fn sphere_truncations_converge_to_the_largest() {
    let d = sphere_truncation_diagram(3).unwrap();
    let dl = cis_direct_limit(&d).unwrap();
    let last = d.objects().last().unwrap();
    assert!(stagewise_homeomorphic(&dl.cis, last));
    assert!(is_cis_isomorphism(dl.cocone.last().unwrap()));
    assert!(cocone_failures(&d, &dl).unwrap().is_empty());
    let report = check_limit_compatibility(&d).unwrap();
    assert!(report.passes(), "{report}");
}

#[test]
fn collapse_diagram_limit_is_the_point_system() {
    let sc = gallery(GalleryId::SphereChain(2));
    let d = collapse_diagram(&sc).unwrap();
    let dl = cis_direct_limit(&d).unwrap();
    assert!(stagewise_homeomorphic(&dl.cis, &d.objects()[1]));
    assert!(is_cis_isomorphism(&dl.cocone[1]));
    let report = check_limit_compatibility(&d).unwrap();
    assert!(report.passes() && report.cocone_identities, "{report}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn functor_laws(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let c = seeded_cis(seed, &GenConfig::default());
        let mut r = rng(seed);
        let first = random_morphism(&mut r, &c, MORPHISM_KINDS[a], "h").unwrap();
        let second = random_morphism(&mut r, first.target(), MORPHISM_KINDS[b], "k").unwrap();
        prop_assert!(validate_morphism(&first).is_valid() && validate_morphism(&second).is_valid());
        let composite = compose_morphisms(&second, &first).unwrap();
        prop_assert!(validate_morphism(&composite).is_valid());
        let one = induced_fundamental_map(&CisMorphism::identity(&c)).unwrap();
        prop_assert_eq!(&one, &CtsMap::identity(one.source()));
        let induced = induced_fundamental_map(&first).unwrap();
        let induced_second = induced_fundamental_map(&second).unwrap();
        prop_assert_eq!(induced_second.after(&induced).unwrap(), induced_fundamental_map(&composite).unwrap());
        if is_cis_isomorphism(&first) {
            prop_assert!(induced.is_homeomorphism());
        }
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), kinds in proptest::collection::vec(0usize..4, 3)) {
        let c = seeded_cis(seed, &GenConfig::default());
        let mut r = rng(seed);
        let first = random_morphism(&mut r, &c, MORPHISM_KINDS[kinds[0]], "h").unwrap();
        let second = random_morphism(&mut r, first.target(), MORPHISM_KINDS[kinds[1]], "k").unwrap();
        let m = random_morphism(&mut r, second.target(), MORPHISM_KINDS[kinds[2]], "m").unwrap();
        let a = compose_morphisms(&compose_morphisms(&m, &second).unwrap(), &first).unwrap();
        let b = compose_morphisms(&m, &compose_morphisms(&second, &first).unwrap()).unwrap();
        prop_assert!(a.same_as(&b));
    }

    #[test]
    fn induced_maps_are_forced(seed in any::<u64>(), a in 0usize..4) {
        let c = seeded_cis(seed, &GenConfig::default());
        let first = random_morphism(&mut rng(seed), &c, MORPHISM_KINDS[a], "h").unwrap();
        let induced = induced_fundamental_map(&first).unwrap();
        let from = build_fundamental(first.source()).unwrap();
        let to = build_fundamental(first.target()).unwrap();
        for (i, stage_map) in first.maps().iter().enumerate() {
            for x in 0..stage_map.source().len() {
                prop_assert_eq!(induced.apply(from.embedding(i).apply(x)), to.embedding(i).apply(stage_map.apply(x)));
            }
        }
    }

    #[test]
    fn direct_limits_of_random_diagrams(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), &GenConfig::default()).unwrap();
        let dl = cis_direct_limit(&d).unwrap();
        prop_assert!(cocone_failures(&d, &dl).unwrap().is_empty());
        for m in &dl.cocone {
            prop_assert!(validate_morphism(m).is_valid());
        }
        let report = check_limit_compatibility(&d).unwrap();
        prop_assert!(report.passes(), "{}", report);
    }
}
