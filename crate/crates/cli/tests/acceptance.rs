//! The ten acceptance criteria, one report line each. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cis_core::cis::{is_finitely_semicomponible, validate_cis, Cis};
use cis_core::doc::{CisDoc, DiagramDoc, LimitDoc};
use cis_core::fuzz::{random_cis, rng, run_suite, GenConfig, SuiteConfig, SuiteReport};
use cis_core::gallery::{
    build_example, sphere, sphere_truncation_diagram, torus, BaseSpace, GalleryId,
};
use cis_core::homology::{
    betti_mod2, counter_functorial_check, functorial_invariance_check, order_complex,
};
use cis_core::limit::{
    attaching, build_fundamental, cover_profile, has_weak_topology, images_closed, is_perfect_map,
    verify_limit_axioms, verify_split_axioms,
};
use cis_core::space::find_homeomorphism;

const SEED: u64 = 20_240_611;
const FUZZ_COUNT: usize = 200;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gallery_ids() -> Vec<GalleryId> {
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

fn construction_ok(c: &Cis) -> Result<(), String> {
    let ls = build_fundamental(c).map_err(|e| e.to_string())?;
    let axioms = verify_limit_axioms(c, &ls)
        .map_err(|e| e.to_string())?
        .passes();
    let split = verify_split_axioms(c, &ls)
        .map_err(|e| e.to_string())?
        .passes();
    let weak = has_weak_topology(c, &ls).map_err(|e| e.to_string())?;
    ensure(
        axioms && split && weak && images_closed(&ls).all_closed,
        "fundamental limit fails a check",
    )
}

fn tally_ok(report: &SuiteReport, name: &str, min: usize) -> Result<usize, String> {
    let t = report.tally(name).ok_or(format!("no check `{name}`"))?;
    if t.failed > 0 {
        return Err(format!(
            "{name}: {} of {} failed, first: {}",
            t.failed,
            t.checked,
            t.first_failure.clone().unwrap_or_default()
        ));
    }
    ensure(
        t.checked >= min,
        format!("{name}: only {} checked, need {min}", t.checked),
    )?;
    Ok(t.checked)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let ids = gallery_ids();
    for id in &ids {
        let c = build_example(*id).map_err(|e| e.to_string())?;
        construction_ok(&c).map_err(|e| format!("{id}: {e}"))?;
    }
    let mut r = rng(SEED);
    let cfg = GenConfig::default();
    for n in 0..FUZZ_COUNT {
        let c = random_cis(&mut r, &cfg);
        ensure(
            validate_cis(&c).is_valid(),
            format!("fuzzed system {n} invalid"),
        )?;
        ensure(
            c.len() <= 4 && c.stages().iter().all(|s| s.space().len() <= 6),
            "generator bounds",
        )?;
        construction_ok(&c).map_err(|e| format!("fuzzed system {n}: {e}"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), format!("took {took:?}"))?;
    Ok(format!(
        "{} gallery + {FUZZ_COUNT} fuzzed systems in {:.2}s",
        ids.len(),
        took.as_secs_f64()
    ))
}

fn criterion_2(s: &SuiteReport) -> Verdict {
    let n = tally_ok(s, "axiom-equivalence", FUZZ_COUNT)?;
    ensure(
        s.failing_mutants >= 50,
        format!("only {} failing mutants", s.failing_mutants),
    )?;
    Ok(format!(
        "{n} pairs agree, {} mutated candidates fail the axioms",
        s.failing_mutants
    ))
}

fn criterion_3(s: &SuiteReport) -> Verdict {
    let n = tally_ok(s, "canonical-bijection", 50)?;
    let m = tally_ok(s, "bijection-composition", 50)?;
    Ok(format!("{n} relabeled pairs, {m} composed triples"))
}

fn criterion_4(s: &SuiteReport) -> Verdict {
    tally_ok(s, "functor-unit", 50)?;
    let n = tally_ok(s, "functor-composition", 50)?;
    tally_ok(s, "induced-uniqueness", 50)?;
    Ok(format!("{n} composable morphism pairs"))
}

fn criterion_5(s: &SuiteReport) -> Verdict {
    let n = tally_ok(s, "direct-limit", 20)?;
    Ok(format!("{n} diagrams"))
}

// Independent rank oracle for the sphere and torus criteria.

fn rank_gf2(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn betti_of_facets(facets: &[Vec<usize>], pmax: usize) -> Vec<usize> {
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); pmax + 2];
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        for mask in 1u32..1 << f.len() {
            let face: Vec<usize> = (0..f.len())
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| f[b])
                .collect();
            if face.len() <= pmax + 2 {
                by_dim[face.len() - 1].insert(face);
            }
        }
    }
    let lists: Vec<Vec<Vec<usize>>> = by_dim
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let rank = |p: usize| -> usize {
        if p == 0 || lists[p].is_empty() {
            return 0;
        }
        rank_gf2(
            lists[p]
                .iter()
                .map(|s| {
                    lists[p - 1]
                        .iter()
                        .map(|t| t.iter().all(|v| s.contains(v)))
                        .collect()
                })
                .collect(),
        )
    };
    (0..=pmax)
        .map(|p| lists[p].len() - rank(p) - rank(p + 1))
        .collect()
}

fn cross_polytope_facets(d: usize) -> Vec<Vec<usize>> {
    (0..1usize << (d + 1))
        .map(|signs| (0..=d).map(|k| 2 * k + (signs >> k & 1)).collect())
        .collect()
}

fn grid_torus_facets(n: usize) -> Vec<Vec<usize>> {
    let v = |i: usize, j: usize| (i % n) * n + (j % n);
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .flat_map(|(i, j)| {
            [
                vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)],
                vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)],
            ]
        })
        .collect()
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let c = build_example(GalleryId::SphereChain(4)).map_err(|e| e.to_string())?;
    let ls = build_fundamental(&c).map_err(|e| e.to_string())?;
    ensure(
        ls.space().len() == 10,
        format!("{} points", ls.space().len()),
    )?;
    ensure(
        find_homeomorphism(ls.space(), &sphere(4)).is_found(),
        "not homeomorphic to the 4-sphere model",
    )?;
    let betti = betti_mod2(&order_complex(ls.space()), 4);
    let oracle = betti_of_facets(&cross_polytope_facets(4), 4);
    ensure(
        oracle == vec![1, 0, 0, 0, 1],
        format!("oracle gives {oracle:?}"),
    )?;
    ensure(betti == oracle, format!("betti {betti:?}"))?;
    for p in 0..=3 {
        let r = functorial_invariance_check(&c, p).map_err(|e| e.to_string())?;
        let want = usize::from(p == 0);
        ensure(
            r.passes() && r.limit_dim == want && r.module_dim == want,
            format!("invariance at degree {p}: {r}"),
        )?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), format!("took {took:?}"))?;
    Ok(format!(
        "betti {betti:?}, invariance p=0..3 in {:.2}s",
        took.as_secs_f64()
    ))
}

fn criterion_7() -> Verdict {
    let betti = betti_mod2(&order_complex(&torus(2)), 2);
    let oracle = betti_of_facets(&grid_torus_facets(4), 2);
    ensure(oracle == vec![1, 2, 1], format!("oracle gives {oracle:?}"))?;
    ensure(betti == oracle, format!("betti {betti:?}"))?;
    let c = build_example(GalleryId::TorusChain(2)).map_err(|e| e.to_string())?;
    let r = functorial_invariance_check(&c, 1).map_err(|e| e.to_string())?;
    ensure(r.passes() && r.limit_dim == 2, format!("{r}"))?;
    Ok(format!(
        "betti {betti:?}, degree-1 invariance with dimension {}",
        r.limit_dim
    ))
}

fn criterion_8(s: &SuiteReport) -> Verdict {
    let c = build_example(GalleryId::IntervalChain(4)).map_err(|e| e.to_string())?;
    ensure(
        is_finitely_semicomponible(&c).value,
        "interval chain not finitely semicomponible",
    )?;
    let cp = cover_profile(&build_fundamental(&c).map_err(|e| e.to_string())?);
    ensure(cp.locally_finite && cp.closed_cover, "interval cover")?;
    let candidates = tally_ok(s, "locally-finite-closed-cover", 1)?;
    tally_ok(s, "finite-cover", 1)?;
    tally_ok(s, "perfect-projection", FUZZ_COUNT)?;
    let mut perfect = 0;
    for id in gallery_ids() {
        let c = build_example(id).map_err(|e| e.to_string())?;
        let fs = is_finitely_semicomponible(&c).value;
        let stationary = cis_core::cis::is_stationary(&c).is_some();
        if fs || stationary {
            let projection = attaching(&c).map_err(|e| e.to_string())?.projection;
            ensure(
                is_perfect_map(&projection),
                format!("{id}: projection not perfect"),
            )?;
            perfect += 1;
        }
    }
    let discrete = tally_ok(s, "discrete-transfer", FUZZ_COUNT)?;
    Ok(format!(
        "{candidates} cover candidates, {perfect} gallery projections perfect, {discrete} discrete systems"
    ))
}

fn criterion_9(s: &SuiteReport) -> Verdict {
    let n = tally_ok(s, "cohomology-dual", FUZZ_COUNT)?;
    let m = tally_ok(s, "module-duality", FUZZ_COUNT)?;
    tally_ok(s, "invariance", FUZZ_COUNT)?;
    let c = build_example(GalleryId::SphereChain(4)).map_err(|e| e.to_string())?;
    for p in 0..=3 {
        let r = counter_functorial_check(&c, p).map_err(|e| e.to_string())?;
        ensure(
            r.passes() && r.limit_dim == usize::from(p == 0),
            format!("{r}"),
        )?;
    }
    Ok(format!(
        "{n} limits with matching dimensions, {m} module sequences dual"
    ))
}

fn cis_bin(args: &[&str], dir: &Path) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cis"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let seed = SEED.to_string();
    let a = cis_bin(&["fuzz", "--count", "40", "--seed", &seed], d)?;
    let b = cis_bin(&["fuzz", "--count", "40", "--seed", &seed], d)?;
    ensure(a.0 == 0, "fuzz run failed")?;
    ensure(a == b, "fuzz reports differ")?;
    let mut docs = 0;
    let cases: [&[&str]; 6] = [
        &["sphere_chain", "3"],
        &["stationary_sphere", "2"],
        &["torus_chain", "2"],
        &["interval_chain", "4"],
        &["identity", "circle", "2"],
        &["non_semicomponible"],
    ];
    for (k, params) in cases.iter().enumerate() {
        let sys = format!("sys{k}.json");
        let lim = format!("lim{k}.json");
        let mut args = vec!["gallery"];
        args.extend_from_slice(params);
        args.extend_from_slice(&["-o", &sys]);
        ensure(cis_bin(&args, d)?.0 == 0, format!("gallery {params:?}"))?;
        let text = std::fs::read_to_string(d.join(&sys)).map_err(|e| e.to_string())?;
        let doc: CisDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let c = doc.to_cis().map_err(|e| e.to_string())?;
        ensure(
            validate_cis(&c).is_valid(),
            format!("{sys} does not re-validate"),
        )?;
        ensure(
            CisDoc::from_cis(&c) == doc,
            format!("{sys} does not round-trip"),
        )?;
        ensure(
            cis_bin(&["limit", &sys, "-o", &lim], d)?.0 == 0,
            format!("limit of {sys}"),
        )?;
        let text = std::fs::read_to_string(d.join(&lim)).map_err(|e| e.to_string())?;
        let ldoc: LimitDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let ls = ldoc.to_limit(&c).map_err(|e| e.to_string())?;
        ensure(
            verify_limit_axioms(&c, &ls)
                .map_err(|e| e.to_string())?
                .passes(),
            format!("{lim} fails"),
        )?;
        ensure(
            LimitDoc::from_limit(&ls) == ldoc,
            format!("{lim} does not round-trip"),
        )?;
        ensure(
            cis_bin(&["verify", &sys, &lim], d)?.0 == 0,
            format!("verify {lim}"),
        )?;
        docs += 2;
    }
    let diagram = sphere_truncation_diagram(2).map_err(|e| e.to_string())?;
    let text =
        serde_json::to_string(&DiagramDoc::from_diagram(&diagram)).map_err(|e| e.to_string())?;
    std::fs::write(d.join("diagram.json"), text).map_err(|e| e.to_string())?;
    ensure(
        cis_bin(&["diagram-limit", "diagram.json", "-o", "dl.json"], d)?.0 == 0,
        "diagram-limit",
    )?;
    let text = std::fs::read_to_string(d.join("dl.json")).map_err(|e| e.to_string())?;
    let doc: CisDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let c = doc.to_cis().map_err(|e| e.to_string())?;
    ensure(
        validate_cis(&c).is_valid(),
        "direct limit document does not re-validate",
    )?;
    ensure(
        CisDoc::from_cis(&c) == doc,
        "direct limit document does not round-trip",
    )?;
    docs += 1;
    Ok(format!(
        "byte-identical fuzz reports, {docs} documents round-trip"
    ))
}

fn main() {
    let suite_start = Instant::now();
    let suite = run_suite(&SuiteConfig::new(FUZZ_COUNT, SEED));
    println!(
        "property suite: seed {SEED}, {FUZZ_COUNT} systems per flavour, {:.2}s",
        suite_start.elapsed().as_secs_f64()
    );
    let results: Vec<(&str, Verdict)> = vec![
        ("construction soundness", criterion_1()),
        ("axiom equivalence", criterion_2(&suite)),
        ("uniqueness of limits", criterion_3(&suite)),
        ("functor laws", criterion_4(&suite)),
        ("direct limits", criterion_5(&suite)),
        ("sphere reproduction", criterion_6()),
        ("torus analogue", criterion_7()),
        (
            "locally finite covers and perfect maps",
            criterion_8(&suite),
        ),
        ("counter-functor", criterion_9(&suite)),
        ("determinism and round-trip", criterion_10()),
    ];
    let mut failed = 0;
    for (k, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
