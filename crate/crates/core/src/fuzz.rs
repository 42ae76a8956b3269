//! Seeded generators of valid systems, mutated limit candidates, morphisms
//! and diagrams, and a suite that runs the property checks over them.
//!
//! Everything is driven by one `ChaCha8Rng`, so a seed fixes the corpus and
//! the report text.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat::{
    check_limit_compatibility, cis_direct_limit, cocone_failures, compose_morphisms,
    induced_fundamental_map, is_cis_isomorphism, validate_morphism, CisDiagram, CisMorphism,
};
use crate::cis::{
    composite, is_finitely_semicomponible, is_inductive, semicomponible, validate_cis, Cis,
    TailPolicy,
};
use crate::error::{Error, Result};
use crate::gallery::collapse_morphism;
use crate::gf2::Gf2Matrix;
use crate::homology::{
    betti_mod2, cohomology_mod2, counter_functorial_check, functorial_invariance_check, h0_rank,
    module_colimit, module_limit, order_complex, Gf2ModuleSeq,
};
use crate::limit::{
    attaching, build_fundamental, canonical_bijection, cover_profile, has_weak_topology,
    images_closed, is_perfect_map, verify_limit_axioms, verify_split_axioms, LimitSpace,
};
use crate::pointset::PointSet;
use crate::space::{quotient, separation_profile, CtsMap, FinSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub max_stages: usize,
    pub max_points: usize,
    /// Every stage discrete.
    pub discrete: bool,
    /// `Y_i = X_i` at every stage.
    pub inductive: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_stages: 4,
            max_points: 6,
            discrete: false,
            inductive: false,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random preorder: transitive closure of a sparse random digraph.
pub fn random_space<R: Rng>(rng: &mut R, ids: Vec<String>, density: f64) -> FinSpace {
    let n = ids.len();
    let mut edges = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.gen_bool(density) {
                edges.push((x, y));
            }
        }
    }
    FinSpace::from_relation(ids, &edges).expect("closure of a digraph is a preorder")
}

/// Union of a random selection of point closures, possibly empty.
pub fn random_closed<R: Rng>(rng: &mut R, space: &FinSpace, full: bool) -> PointSet {
    if full {
        return space.full_set();
    }
    let mut y = space.empty_set();
    let p = rng.gen_range(0.2..0.8);
    for x in 0..space.len() {
        if rng.gen_bool(p) {
            y.union_with(space.point_closure(x));
        }
    }
    y
}

/// The next stage, built around a copy of `y`: new points may only sit
/// above copied ones, so the copy stays closed. Returns the stage and
/// where each point of `y` lands.
fn next_stage<R: Rng>(
    rng: &mut R,
    space: &FinSpace,
    y: &PointSet,
    stage: usize,
    cfg: &GenConfig,
) -> (FinSpace, BTreeMap<usize, usize>) {
    let old: Vec<usize> = y.to_vec();
    let k = old.len();
    let room = cfg.max_points.saturating_sub(k);
    let lo = usize::from(k == 0);
    let extra = if room < lo {
        lo
    } else {
        rng.gen_range(lo..=room)
    };
    let n = k + extra;
    let density = if cfg.discrete {
        0.0
    } else {
        rng.gen_range(0.1..0.45)
    };
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && space.leq(old[a], old[b]) {
                edges.push((a, b));
            }
        }
    }
    for a in 0..n {
        for b in k..n {
            if a != b && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // Point at position `pos` of the shuffled stage is `order[pos]`.
    let mut pos_of = vec![0; n];
    for (pos, &p) in order.iter().enumerate() {
        pos_of[p] = pos;
    }
    let shuffled: Vec<(usize, usize)> =
        edges.iter().map(|&(a, b)| (pos_of[a], pos_of[b])).collect();
    let ids = (0..n).map(|p| format!("s{stage}p{p}")).collect();
    let x = FinSpace::from_relation(ids, &shuffled).expect("preorder");
    let glue = old
        .iter()
        .enumerate()
        .map(|(a, &p)| (p, pos_of[a]))
        .collect();
    (x, glue)
}

/// A valid system. Tails are stationary about a quarter of the time.
pub fn random_cis<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Cis {
    let stages = rng.gen_range(1..=cfg.max_stages);
    let stationary = rng.gen_bool(0.25);
    let first_n = rng.gen_range(1..=cfg.max_points);
    let density = if cfg.discrete {
        0.0
    } else {
        rng.gen_range(0.1..0.45)
    };
    let ids = (0..first_n).map(|p| format!("s0p{p}")).collect();
    let mut spaces = vec![random_space(rng, ids, density)];
    let mut ys = Vec::new();
    let mut maps = Vec::new();
    for i in 0..stages {
        let last = i + 1 == stages;
        let full = cfg.inductive || (last && stationary);
        let y = random_closed(rng, &spaces[i], full);
        if !last {
            let (x, glue) = next_stage(rng, &spaces[i], &y, i + 1, cfg);
            spaces.push(x);
            maps.push(glue);
        }
        ys.push(y);
    }
    let tail = if stationary {
        TailPolicy::Stationary { n0: stages - 1 }
    } else {
        TailPolicy::Cutoff
    };
    Cis::new(spaces, ys, maps, tail).expect("generator builds well-formed systems")
}

/// Ways a valid limit is spoiled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Two limit points identified.
    MergePoints,
    /// A stage map sends two points to one.
    NonInjective,
    /// Two values of a stage map exchanged.
    Swap,
    /// One value of a stage map moved elsewhere.
    Redirect,
    /// The topology coarsened by an extra relation.
    Coarsen,
}

pub const MUTATIONS: [Mutation; 5] = [
    Mutation::MergePoints,
    Mutation::NonInjective,
    Mutation::Swap,
    Mutation::Redirect,
    Mutation::Coarsen,
];

/// Applies `m` when it makes sense for `ls`.
pub fn mutate<R: Rng>(rng: &mut R, ls: &LimitSpace, m: Mutation) -> Option<LimitSpace> {
    let n = ls.space().len();
    let embeddings = ls.embeddings();
    let pick_stage = |rng: &mut R, min: usize| -> Option<usize> {
        let ok: Vec<usize> = (0..embeddings.len())
            .filter(|&i| embeddings[i].source().len() >= min)
            .collect();
        ok.choose(rng).copied()
    };
    let rebuild = |i: usize, image: Vec<usize>| -> Option<LimitSpace> {
        let mut v = embeddings.to_vec();
        v[i] = CtsMap::new(embeddings[i].source().clone(), ls.space().clone(), image).ok()?;
        LimitSpace::new(ls.space().clone(), v).ok()
    };
    match m {
        Mutation::MergePoints => {
            if n < 2 {
                return None;
            }
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let mut classes: Vec<Vec<usize>> = (0..n)
                .filter(|&x| x != a && x != b)
                .map(|x| vec![x])
                .collect();
            classes.push(vec![a.min(b), a.max(b)]);
            classes.sort();
            let (q, proj) = quotient(ls.space(), &classes).ok()?;
            let v = embeddings
                .iter()
                .map(|p| proj.after(p))
                .collect::<Result<Vec<_>>>()
                .ok()?;
            LimitSpace::new(q, v).ok()
        }
        Mutation::NonInjective => {
            let i = pick_stage(rng, 2)?;
            let k = embeddings[i].source().len();
            let a = rng.gen_range(0..k);
            let b = (a + rng.gen_range(1..k)) % k;
            let mut image = embeddings[i].image().to_vec();
            image[a] = image[b];
            rebuild(i, image)
        }
        Mutation::Swap => {
            let i = pick_stage(rng, 2)?;
            let k = embeddings[i].source().len();
            let a = rng.gen_range(0..k);
            let b = (a + rng.gen_range(1..k)) % k;
            let mut image = embeddings[i].image().to_vec();
            image.swap(a, b);
            rebuild(i, image)
        }
        Mutation::Redirect => {
            if n < 2 {
                return None;
            }
            let i = pick_stage(rng, 1)?;
            let k = embeddings[i].source().len();
            let a = rng.gen_range(0..k);
            let mut image = embeddings[i].image().to_vec();
            image[a] = (image[a] + rng.gen_range(1..n)) % n;
            rebuild(i, image)
        }
        Mutation::Coarsen => {
            let s = ls.space();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|y| (0..n).map(move |x| (y, x)))
                .filter(|&(y, x)| !s.leq(y, x))
                .collect();
            let &(y, x) = pairs.choose(rng)?;
            let mut edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| {
                    s.min_open(a)
                        .iter()
                        .map(move |b| (a, b))
                        .collect::<Vec<_>>()
                })
                .filter(|&(a, b)| a != b)
                .collect();
            edges.push((y, x));
            let coarse = FinSpace::from_relation(s.ids().to_vec(), &edges).ok()?;
            ls.with_topology(coarse).ok()
        }
    }
}

/// A copy of `ls` with shuffled points renamed `r0, r1, ...`.
pub fn relabel<R: Rng>(rng: &mut R, ls: &LimitSpace, prefix: &str) -> LimitSpace {
    let n = ls.space().len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let ids = (0..n).map(|k| format!("{prefix}{k}")).collect();
    ls.relabeled(&order, ids).expect("permutation is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Identity,
    Relabel,
    Extend,
    Collapse,
}

pub const MORPHISM_KINDS: [MorphismKind; 4] = [
    MorphismKind::Identity,
    MorphismKind::Relabel,
    MorphismKind::Extend,
    MorphismKind::Collapse,
];

/// Rebuilds `c` with stage `i` replaced by `spaces[i]`, gluing sets
/// `ys[i]`, and gluing maps transported along `place[i]` (old index to new).
fn transport(
    c: &Cis,
    spaces: Vec<FinSpace>,
    ys: Vec<PointSet>,
    place: &[Vec<usize>],
) -> Result<Cis> {
    let maps = (0..c.len().saturating_sub(1))
        .map(|i| {
            c.gluing_set(i)?
                .iter()
                .map(|y| {
                    Ok((
                        place[i][y],
                        place[i + 1][c.glue(i, y)?.expect("defined on Y")],
                    ))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Cis::new(spaces, ys, maps, c.tail())
}

/// Isomorphic copy of `c` with every stage shuffled and renamed.
fn relabel_system<R: Rng>(rng: &mut R, c: &Cis, tag: &str) -> Result<CisMorphism> {
    let mut spaces = Vec::new();
    let mut ys = Vec::new();
    let mut place = Vec::new();
    let mut maps = Vec::new();
    for i in 0..c.len() {
        let x = c.space(i)?;
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.shuffle(rng);
        let ids = (0..x.len()).map(|k| format!("{tag}{i}_{k}")).collect();
        let (copy, iso) = x.permuted(&order, ids)?;
        ys.push(iso.image_of(c.gluing_set(i)?));
        place.push(iso.image().to_vec());
        spaces.push(copy);
        maps.push(iso);
    }
    let target = transport(c, spaces, ys, &place)?;
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            CtsMap::new(
                c.space(i)?.clone(),
                target.space(i)?.clone(),
                m.image().to_vec(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    CisMorphism::new(c.clone(), target, maps)
}

/// Inclusion of `c` into a system whose stages carry extra points above
/// the old ones. Old stages stay closed; gluing data is unchanged except
/// that a stationary last stage keeps `W = Z`.
fn extend_system<R: Rng>(rng: &mut R, c: &Cis, tag: &str) -> Result<CisMorphism> {
    let mut spaces = Vec::new();
    let mut ys = Vec::new();
    let mut place = Vec::new();
    for i in 0..c.len() {
        let x = c.space(i)?;
        let k = x.len();
        let extra = rng.gen_range(0..=2);
        let n = k + extra;
        let mut edges = Vec::new();
        for a in 0..k {
            for b in x.min_open(a).iter() {
                if a != b {
                    edges.push((a, b));
                }
            }
        }
        for a in 0..n {
            for b in k..n {
                if a != b && rng.gen_bool(0.3) {
                    edges.push((a, b));
                }
            }
        }
        let ids = x
            .ids()
            .iter()
            .cloned()
            .chain((0..extra).map(|e| format!("{tag}{i}_{e}")))
            .collect();
        let z = FinSpace::from_relation(ids, &edges)?;
        let stationary_last = matches!(c.tail(), TailPolicy::Stationary { n0 } if n0 == i);
        let w = if stationary_last {
            z.full_set()
        } else {
            PointSet::from_indices(n, c.gluing_set(i)?.iter())
        };
        ys.push(w);
        place.push((0..k).collect::<Vec<_>>());
        spaces.push(z);
    }
    let target = transport(c, spaces, ys, &place)?;
    let maps = (0..c.len())
        .map(|i| {
            CtsMap::new(
                c.space(i)?.clone(),
                target.space(i)?.clone(),
                (0..c.space(i)?.len()).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    CisMorphism::new(c.clone(), target, maps)
}

pub fn random_morphism<R: Rng>(
    rng: &mut R,
    c: &Cis,
    kind: MorphismKind,
    tag: &str,
) -> Result<CisMorphism> {
    match kind {
        MorphismKind::Identity => Ok(CisMorphism::identity(c)),
        MorphismKind::Relabel => relabel_system(rng, c, tag),
        MorphismKind::Extend => extend_system(rng, c, tag),
        MorphismKind::Collapse => collapse_morphism(c),
    }
}

/// A chain of 2 to 4 objects joined by random morphisms.
pub fn random_diagram<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Result<CisDiagram> {
    let len = rng.gen_range(2..=4);
    let mut objects = vec![random_cis(rng, cfg)];
    let mut arrows = Vec::new();
    for k in 1..len {
        let kind = *MORPHISM_KINDS.choose(rng).expect("nonempty");
        let m = random_morphism(rng, &objects[k - 1], kind, &format!("o{k}s"))?;
        objects.push(m.target().clone());
        arrows.push(m);
    }
    CisDiagram::new(objects, arrows)
}

/// Counts for one property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(why());
            }
        }
    }

    fn record_result(&mut self, r: Result<bool>, why: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, why),
            Err(e) => {
                let msg = why();
                self.record(false, || format!("{msg}: {e}"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub count: usize,
    pub seed: u64,
    pub gen: GenConfig,
}

impl SuiteConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        SuiteConfig {
            count,
            seed,
            gen: GenConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub count: usize,
    pub tallies: Vec<Tally>,
    /// Mutated candidates that fail the axioms.
    pub failing_mutants: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }

    pub fn tally(&self, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuzz seed {} count {}", self.seed, self.count)?;
        for t in &self.tallies {
            let status = if t.failed == 0 { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{status} {:<28} {:>6} checked {:>4} failed",
                t.name, t.checked, t.failed
            )?;
            if let Some(why) = &t.first_failure {
                writeln!(f, "     first failure: {why}")?;
            }
        }
        writeln!(f, "failing mutants: {}", self.failing_mutants)?;
        writeln!(
            f,
            "overall: {}",
            if self.all_passed() { "pass" } else { "FAIL" }
        )
    }
}

pub const CHECK_NAMES: [&str; 20] = [
    "valid",
    "construction",
    "axiom-equivalence",
    "weak-implies-closed-images",
    "locally-finite-closed-cover",
    "finite-cover",
    "perfect-projection",
    "discrete-transfer",
    "semicomponible-monotone",
    "composite-consistency",
    "canonical-bijection",
    "bijection-composition",
    "functor-unit",
    "functor-composition",
    "induced-uniqueness",
    "direct-limit",
    "homology-basics",
    "cohomology-dual",
    "invariance",
    "module-duality",
];

struct Suite {
    tallies: BTreeMap<&'static str, Tally>,
    failing_mutants: usize,
}

impl Suite {
    fn t(&mut self, name: &'static str) -> &mut Tally {
        self.tallies.get_mut(name).expect("known check")
    }
}

fn limit_checks(s: &mut Suite, c: &Cis, label: &str) -> Option<LimitSpace> {
    let ls = match build_fundamental(c) {
        Ok(ls) => ls,
        Err(e) => {
            s.t("construction")
                .record(false, || format!("{label}: {e}"));
            return None;
        }
    };
    let ok = (|| -> Result<bool> {
        Ok(verify_limit_axioms(c, &ls)?.passes()
            && verify_split_axioms(c, &ls)?.passes()
            && has_weak_topology(c, &ls)?
            && images_closed(&ls).all_closed)
    })();
    s.t("construction")
        .record_result(ok, || format!("{label}: fundamental limit fails a check"));
    Some(ls)
}

fn candidate_checks(s: &mut Suite, c: &Cis, cand: &LimitSpace, label: &str) {
    let r = (|| -> Result<(bool, bool, bool)> {
        let a = verify_limit_axioms(c, cand)?.passes();
        let b = verify_split_axioms(c, cand)?.passes();
        Ok((a, b, has_weak_topology(c, cand)?))
    })();
    let (a, b, weak) = match r {
        Ok(v) => v,
        Err(e) => {
            s.t("axiom-equivalence")
                .record(false, || format!("{label}: {e}"));
            return;
        }
    };
    s.t("axiom-equivalence")
        .record(a == b, || format!("{label}: verdicts {a} vs {b}"));
    let closed = images_closed(cand).all_closed;
    s.t("weak-implies-closed-images")
        .record(!(a && weak) || closed, || {
            format!("{label}: weak limit with a non-closed image")
        });
    let cp = cover_profile(cand);
    if a && cp.pointwise_finite && cp.locally_finite && cp.closed_cover {
        s.t("locally-finite-closed-cover").record(weak, || {
            format!("{label}: closed locally finite cover without weak topology")
        });
    }
}

fn system_checks<R: Rng>(s: &mut Suite, rng: &mut R, c: &Cis, label: &str) {
    s.t("valid").record(validate_cis(c).is_valid(), || {
        format!("{label}: invalid system")
    });
    let top = c.len() - 1;
    // Monotonicity of semicomponibility.
    let mut mono = true;
    for i in 0..=top {
        for j in i..=top {
            let sij = semicomponible(c, i, j).unwrap_or(false);
            for k in i..=j {
                for l in k..=j {
                    if sij && !semicomponible(c, k, l).unwrap_or(false) {
                        mono = false;
                    }
                }
            }
            if !sij {
                for k in j + 1..=top {
                    if semicomponible(c, i, k).unwrap_or(true) {
                        mono = false;
                    }
                }
            }
        }
    }
    s.t("semicomponible-monotone")
        .record(mono, || format!("{label}: monotonicity broken"));
    // Composite domains chain: Y_{i,j} = f_{i,j-1}^{-1}(Y_j), and the image
    // of f_{i,j} is f_j applied to the image of f_{i,j-1} on that domain.
    let mut consistent = true;
    for i in 0..top {
        for j in i..top {
            let Ok(cij) = composite(c, i, j) else {
                consistent = false;
                continue;
            };
            if cij.domain().iter().any(|x| cij.apply(x).is_none()) {
                consistent = false;
            }
            if !cij.domain().is_empty() && !cij.as_map().profile().injective {
                consistent = false;
            }
            if j > i {
                let prev = composite(c, i, j - 1).expect("shorter composite");
                let yj = c.gluing_set(j).expect("represented");
                for x in prev.domain().iter() {
                    let mid = prev.apply(x).expect("defined");
                    let inside = yj.contains(mid);
                    if inside != cij.domain().contains(x) {
                        consistent = false;
                    }
                    if inside && cij.apply(x) != c.glue(j, mid).expect("represented") {
                        consistent = false;
                    }
                }
            }
        }
    }
    s.t("composite-consistency")
        .record(consistent, || format!("{label}: composite mismatch"));

    let Some(ls) = limit_checks(s, c, label) else {
        return;
    };
    // Cover properties and the projection from the coproduct.
    let fs = is_finitely_semicomponible(c);
    if fs.value {
        let cp = cover_profile(&ls);
        s.t("finite-cover")
            .record(cp.pointwise_finite && cp.locally_finite, || {
                format!("{label}: cover not locally finite")
            });
    }
    let perfect = attaching(c).map(|a| is_perfect_map(&a.projection));
    s.t("perfect-projection")
        .record_result(perfect, || format!("{label}: projection not perfect"));

    // Mutated candidates.
    candidate_checks(s, c, &ls, label);
    for m in MUTATIONS {
        if let Some(cand) = mutate(rng, &ls, m) {
            if !verify_limit_axioms(c, &cand)
                .map(|r| r.passes())
                .unwrap_or(true)
            {
                s.failing_mutants += 1;
            }
            candidate_checks(s, c, &cand, &format!("{label} {m:?}"));
        }
    }

    // Canonical bijections between relabeled copies.
    let b = relabel(rng, &ls, "r");
    let d = relabel(rng, &ls, "t");
    let ok = (|| -> Result<bool> {
        let ab = canonical_bijection(c, &ls, &b)?;
        let mut ok = ab.is_homeomorphism();
        for (p, q) in ls.embeddings().iter().zip(b.embeddings()) {
            ok &= ab.after(p)? == *q;
        }
        Ok(ok)
    })();
    s.t("canonical-bijection")
        .record_result(ok, || format!("{label}: bijection check"));
    let ok = (|| -> Result<bool> {
        let ab = canonical_bijection(c, &ls, &b)?;
        let bd = canonical_bijection(c, &b, &d)?;
        let ad = canonical_bijection(c, &ls, &d)?;
        Ok(bd.after(&ab)? == ad)
    })();
    s.t("bijection-composition")
        .record_result(ok, || format!("{label}: composed bijection differs"));

    // Homology of the limit.
    let k = order_complex(ls.space());
    let pmax = 3;
    let betti = betti_mod2(&k, pmax);
    let mut ok = betti[0] == h0_rank(ls.space());
    let full = betti_mod2(&k, k.dimension().unwrap_or(0));
    let euler: i64 = full
        .iter()
        .enumerate()
        .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    ok &= euler == k.euler_characteristic();
    for p in 1..=k.dimension().unwrap_or(0) {
        ok &= k
            .boundary(p)
            .mul(&k.boundary(p + 1))
            .map(|m| m.is_zero())
            .unwrap_or(false);
    }
    s.t("homology-basics")
        .record(ok, || format!("{label}: homology bookkeeping"));
    let co = cohomology_mod2(&k, pmax);
    s.t("cohomology-dual").record(co == betti, || {
        format!("{label}: cohomology {co:?} vs homology {betti:?}")
    });
}

fn discrete_checks(s: &mut Suite, c: &Cis, label: &str) {
    let ok = build_fundamental(c).map(|ls| separation_profile(ls.space()).discrete);
    s.t("discrete-transfer").record_result(ok, || {
        format!("{label}: limit of discrete stages not discrete")
    });
}

fn invariance_checks(s: &mut Suite, c: &Cis, label: &str) {
    debug_assert!(is_inductive(c));
    for p in 0..=3 {
        let ok = (|| -> Result<bool> {
            let f = functorial_invariance_check(c, p)?;
            let g = counter_functorial_check(c, p)?;
            Ok(f.passes() && g.passes() && f.limit_dim == g.limit_dim)
        })();
        s.t("invariance")
            .record_result(ok, || format!("{label}: invariance at degree {p}"));
    }
}

fn morphism_checks<R: Rng>(s: &mut Suite, rng: &mut R, c: &Cis, label: &str) {
    let k1 = *MORPHISM_KINDS.choose(rng).expect("nonempty");
    let k2 = *MORPHISM_KINDS.choose(rng).expect("nonempty");
    let ok = (|| -> Result<(bool, bool, bool)> {
        let first = random_morphism(rng, c, k1, "h")?;
        let second = random_morphism(rng, first.target(), k2, "k")?;
        let composite = compose_morphisms(&second, &first)?;
        if !(validate_morphism(&first).is_valid()
            && validate_morphism(&second).is_valid()
            && validate_morphism(&composite).is_valid())
        {
            return Err(Error::Invariant("generated morphism invalid".into()));
        }
        let one = induced_fundamental_map(&CisMorphism::identity(c))?;
        let unit = one == CtsMap::identity(one.source());
        let induced = induced_fundamental_map(&first)?;
        let induced_second = induced_fundamental_map(&second)?;
        let induced_composite = induced_fundamental_map(&composite)?;
        let comp = induced_second.after(&induced)? == induced_composite;
        let iso_ok = !is_cis_isomorphism(&first) || induced.is_homeomorphism();
        // Any map commuting with all stages is forced on every point.
        let from = build_fundamental(first.source())?;
        let to = build_fundamental(first.target())?;
        let mut forced = vec![None; from.space().len()];
        for (i, stage_map) in first.maps().iter().enumerate() {
            for x in 0..stage_map.source().len() {
                forced[from.embedding(i).apply(x)] =
                    Some(to.embedding(i).apply(stage_map.apply(x)));
            }
        }
        let unique = forced
            .iter()
            .enumerate()
            .all(|(a, &b)| b == Some(induced.apply(a)));
        Ok((unit, comp, iso_ok && unique))
    })();
    match ok {
        Ok((unit, comp, unique)) => {
            s.t("functor-unit")
                .record(unit, || format!("{label}: unit law"));
            s.t("functor-composition")
                .record(comp, || format!("{label}: {k1:?} then {k2:?}"));
            s.t("induced-uniqueness")
                .record(unique, || format!("{label}: induced map not forced"));
        }
        Err(e) => s
            .t("functor-composition")
            .record(false, || format!("{label}: {e}")),
    }
}

fn diagram_checks<R: Rng>(s: &mut Suite, rng: &mut R, cfg: &GenConfig, label: &str) {
    let ok = (|| -> Result<bool> {
        let d = random_diagram(rng, cfg)?;
        let dl = cis_direct_limit(&d)?;
        let cocone = cocone_failures(&d, &dl)?.is_empty();
        Ok(cocone && check_limit_compatibility(&d)?.passes())
    })();
    s.t("direct-limit")
        .record_result(ok, || format!("{label}: direct limit"));
}

fn module_checks<R: Rng>(s: &mut Suite, rng: &mut R, label: &str) {
    let len = rng.gen_range(1..=4);
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
    let maps = (0..len - 1)
        .map(|n| {
            let mut m = Gf2Matrix::zeros(dims[n + 1], dims[n]);
            for r in 0..dims[n + 1] {
                for c in 0..dims[n] {
                    m.set(r, c, rng.gen_bool(0.5));
                }
            }
            m
        })
        .collect();
    let seq = Gf2ModuleSeq::new(dims, maps).expect("shapes match");
    let co = module_colimit(&seq);
    let li = module_limit(&seq);
    let ok = co.dim == li.dim
        && co
            .legs
            .iter()
            .zip(&li.legs)
            .all(|(a, b)| a.transpose() == *b);
    s.t("module-duality")
        .record(ok, || format!("{label}: module duality"));
}

/// Runs every property check over `count` random systems of each flavour.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = rng(cfg.seed);
    let mut s = Suite {
        tallies: CHECK_NAMES.iter().map(|&n| (n, Tally::new(n))).collect(),
        failing_mutants: 0,
    };
    let discrete = GenConfig {
        discrete: true,
        ..cfg.gen
    };
    let inductive = GenConfig {
        inductive: true,
        max_points: cfg.gen.max_points.max(8),
        ..cfg.gen
    };
    for n in 0..cfg.count {
        let label = format!("system {n}");
        let c = random_cis(&mut rng, &cfg.gen);
        system_checks(&mut s, &mut rng, &c, &label);
        morphism_checks(&mut s, &mut rng, &c, &label);
        diagram_checks(&mut s, &mut rng, &cfg.gen, &label);
        let d = random_cis(&mut rng, &discrete);
        discrete_checks(&mut s, &d, &format!("discrete {n}"));
        let ind = random_cis(&mut rng, &inductive);
        invariance_checks(&mut s, &ind, &format!("inductive {n}"));
        module_checks(&mut s, &mut rng, &label);
    }
    SuiteReport {
        seed: cfg.seed,
        count: cfg.count,
        tallies: CHECK_NAMES
            .iter()
            .map(|n| s.tallies.remove(n).expect("known"))
            .collect(),
        failing_mutants: s.failing_mutants,
    }
}
