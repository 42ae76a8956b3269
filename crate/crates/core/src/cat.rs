//! Morphisms of closed injective systems, their induced maps on fundamental
//! limits, and direct limits of finite chains of systems.
//!
//! A morphism `h: {X_i, Y_i, f_i} → {Z_i, W_i, g_i}` is a family of closed
//! continuous maps `h_i: X_i → Z_i` with `h_i(Y_i) ⊆ W_i` and
//! `h_{i+1} ∘ f_i = g_i ∘ h_i` on `Y_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cis::{validate_cis, Cis};
use crate::error::{Error, Result};
use crate::limit::{build_fundamental, class_names, LimitSpace};
use crate::pointset::PointSet;
use crate::space::{coproduct, final_space, final_topology, CtsMap, FinSpace};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CisMorphism {
    source: Cis,
    target: Cis,
    maps: Vec<CtsMap>,
}

impl CisMorphism {
    pub fn new(source: Cis, target: Cis, maps: Vec<CtsMap>) -> Result<CisMorphism> {
        if source.len() != target.len() || source.tail() != target.tail() {
            return Err(Error::Mismatch(
                "morphism ends need the same stage count and tail".into(),
            ));
        }
        if maps.len() != source.len() {
            return Err(Error::Mismatch(format!(
                "{} stage maps for {} stages",
                maps.len(),
                source.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.source() != source.space(i)? || m.target() != target.space(i)? {
                return Err(Error::Mismatch(format!(
                    "h_{i} does not run from X_{i} to Z_{i}"
                )));
            }
        }
        Ok(CisMorphism {
            source,
            target,
            maps,
        })
    }

    pub fn from_ids(
        source: Cis,
        target: Cis,
        stage_ids: &[BTreeMap<String, String>],
    ) -> Result<CisMorphism> {
        if stage_ids.len() != source.len() {
            return Err(Error::Mismatch(format!(
                "{} stage maps for {} stages",
                stage_ids.len(),
                source.len()
            )));
        }
        let maps = stage_ids
            .iter()
            .enumerate()
            .map(|(i, m)| CtsMap::from_ids(source.space(i)?.clone(), target.space(i)?.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        CisMorphism::new(source, target, maps)
    }

    pub fn identity(c: &Cis) -> CisMorphism {
        let maps = c
            .stages()
            .iter()
            .map(|s| CtsMap::identity(s.space()))
            .collect();
        CisMorphism {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &Cis {
        &self.source
    }

    pub fn target(&self) -> &Cis {
        &self.target
    }

    pub fn maps(&self) -> &[CtsMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &CtsMap {
        &self.maps[i]
    }

    /// Stagewise pointwise equality.
    pub fn same_as(&self, other: &CisMorphism) -> bool {
        self.source == other.source && self.target == other.target && self.maps == other.maps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MorphismClause {
    Continuous,
    Closed,
    KeepsGluingSet,
    Commutes,
}

impl fmt::Display for MorphismClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MorphismClause::Continuous => "stage maps continuous",
            MorphismClause::Closed => "stage maps closed",
            MorphismClause::KeepsGluingSet => "stage maps keep gluing sets",
            MorphismClause::Commutes => "stage maps commute with gluing",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFailure {
    pub stage: usize,
    pub clause: MorphismClause,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub failures: Vec<MorphismFailure>,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_failure(&self, stage: usize, clause: MorphismClause) -> bool {
        self.failures
            .iter()
            .any(|f| f.stage == stage && f.clause == clause)
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.is_valid())?;
        for fail in &self.failures {
            writeln!(
                f,
                "FAIL stage {}: {} ({})",
                fail.stage, fail.clause, fail.detail
            )?;
        }
        Ok(())
    }
}

pub fn validate_morphism(m: &CisMorphism) -> MorphismReport {
    let mut failures = Vec::new();
    let (src, tgt) = (&m.source, &m.target);
    for (i, stage_map) in m.maps.iter().enumerate() {
        let mut fail = |clause, detail: String| {
            failures.push(MorphismFailure {
                stage: i,
                clause,
                detail,
            })
        };
        let p = stage_map.profile();
        if !p.continuous {
            fail(MorphismClause::Continuous, "not continuous".into());
        }
        if !p.closed {
            fail(MorphismClause::Closed, "not a closed map".into());
        }
        let y = src.gluing_set(i).expect("represented stage");
        let w = tgt.gluing_set(i).expect("represented stage");
        let stray: Vec<usize> = y
            .iter()
            .filter(|&x| !w.contains(stage_map.apply(x)))
            .collect();
        if !stray.is_empty() {
            let ids = stray
                .iter()
                .map(|&x| stage_map.source().id(x).to_string())
                .collect::<Vec<_>>();
            fail(MorphismClause::KeepsGluingSet, format!("{ids:?} leave W"));
        }
        if i + 1 < m.maps.len() {
            let next = &m.maps[i + 1];
            for x in y.iter() {
                if !w.contains(stage_map.apply(x)) {
                    continue;
                }
                let left = next.apply(src.glue(i, x).unwrap().expect("defined on Y"));
                let right = tgt
                    .glue(i, stage_map.apply(x))
                    .unwrap()
                    .expect("defined on W");
                if left != right {
                    fail(
                        MorphismClause::Commutes,
                        format!("square fails at `{}`", stage_map.source().id(x)),
                    );
                }
            }
        }
    }
    MorphismReport { failures }
}

/// `outer ∘ inner`.
pub fn compose_morphisms(outer: &CisMorphism, inner: &CisMorphism) -> Result<CisMorphism> {
    if inner.target != outer.source {
        return Err(Error::Mismatch("composed morphisms do not meet".into()));
    }
    let maps = outer
        .maps
        .iter()
        .zip(&inner.maps)
        .map(|(a, b)| a.after(b))
        .collect::<Result<Vec<_>>>()?;
    CisMorphism::new(inner.source.clone(), outer.target.clone(), maps)
}

/// Each `h_i` a homeomorphism carrying `Y_i` onto `W_i`.
pub fn is_cis_isomorphism(m: &CisMorphism) -> bool {
    m.maps.iter().enumerate().all(|(i, stage_map)| {
        let y = m.source.gluing_set(i).expect("represented stage");
        let w = m.target.gluing_set(i).expect("represented stage");
        stage_map.is_homeomorphism() && &stage_map.image_of(y) == w
    })
}

/// The induced map between given limits of the source and target, sending
/// `from.embedding(i)(x)` to `to.embedding(i)(maps[i](x))`. Fails when that rule is not a function.
pub fn induced_map(m: &CisMorphism, from: &LimitSpace, to: &LimitSpace) -> Result<CtsMap> {
    if from.embeddings().len() != m.maps.len() || to.embeddings().len() != m.maps.len() {
        return Err(Error::Mismatch(
            "limits do not match the morphism's stages".into(),
        ));
    }
    let mut image: Vec<Option<usize>> = vec![None; from.space().len()];
    for (i, stage_map) in m.maps.iter().enumerate() {
        let (from_leg, to_leg) = (from.embedding(i), to.embedding(i));
        for x in 0..stage_map.source().len() {
            let (a, b) = (from_leg.apply(x), to_leg.apply(stage_map.apply(x)));
            match image[a] {
                None => image[a] = Some(b),
                Some(prev) if prev == b => {}
                Some(_) => {
                    return Err(Error::Invariant(format!(
                        "induced map is not well defined at `{}`",
                        from.space().id(a)
                    )))
                }
            }
        }
    }
    let image = image
        .into_iter()
        .enumerate()
        .map(|(a, b)| {
            b.ok_or_else(|| Error::Invariant(format!("`{}` is uncovered", from.space().id(a))))
        })
        .collect::<Result<Vec<_>>>()?;
    CtsMap::new(from.space().clone(), to.space().clone(), image)
}

/// The induced map between the fundamental limits, checked to be closed, continuous
/// and to commute with every stage map.
pub fn induced_fundamental_map(m: &CisMorphism) -> Result<CtsMap> {
    let report = validate_morphism(m);
    if !report.is_valid() {
        return Err(Error::InvalidSystem(
            report.to_string().trim_end().to_string(),
        ));
    }
    let from = build_fundamental(&m.source)?;
    let to = build_fundamental(&m.target)?;
    let induced = induced_map(m, &from, &to)?;
    let p = induced.profile();
    if !(p.continuous && p.closed) {
        return Err(Error::Invariant(
            "induced map is not closed and continuous".into(),
        ));
    }
    for (i, stage_map) in m.maps.iter().enumerate() {
        if !induced
            .after(from.embedding(i))?
            .same_as(&to.embedding(i).after(stage_map)?)
        {
            return Err(Error::Invariant(format!(
                "induced map fails to commute at stage {i}"
            )));
        }
    }
    Ok(induced)
}

/// A finite chain of systems `X^(0) → X^(1) → ...` with consecutive arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CisDiagram {
    objects: Vec<Cis>,
    arrows: Vec<CisMorphism>,
}

impl CisDiagram {
    pub fn new(objects: Vec<Cis>, arrows: Vec<CisMorphism>) -> Result<CisDiagram> {
        if objects.is_empty() {
            return Err(Error::EmptyList);
        }
        if arrows.len() + 1 != objects.len() {
            return Err(Error::Mismatch(format!(
                "{} objects need {} arrows, got {}",
                objects.len(),
                objects.len() - 1,
                arrows.len()
            )));
        }
        let (len, tail) = (objects[0].len(), objects[0].tail());
        if objects.iter().any(|o| o.len() != len || o.tail() != tail) {
            return Err(Error::Mismatch(
                "diagram objects differ in stage count or tail".into(),
            ));
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.source != objects[k] || a.target != objects[k + 1] {
                return Err(Error::Mismatch(format!(
                    "arrow {k} does not join objects {k} and {}",
                    k + 1
                )));
            }
            let r = validate_morphism(a);
            if !r.is_valid() {
                return Err(Error::InvalidSystem(format!(
                    "arrow {k}: {}",
                    r.to_string().trim_end()
                )));
            }
        }
        Ok(CisDiagram { objects, arrows })
    }

    pub fn objects(&self) -> &[Cis] {
        &self.objects
    }

    pub fn arrows(&self) -> &[CisMorphism] {
        &self.arrows
    }

    /// The derived arrow from object `m` to object `n`, `m ≤ n`.
    pub fn arrow_between(&self, m: usize, n: usize) -> Result<CisMorphism> {
        if m > n || n >= self.objects.len() {
            return Err(Error::Mismatch(format!("no arrow from {m} to {n}")));
        }
        let mut acc = CisMorphism::identity(&self.objects[m]);
        for a in &self.arrows[m..n] {
            acc = compose_morphisms(a, &acc)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone)]
pub struct DirectLimit {
    pub cis: Cis,
    /// Cocone morphisms from each object into the limit.
    pub cocone: Vec<CisMorphism>,
}

/// Colimit of a chain of spaces: coproduct, identify `x` with its image,
/// final topology. Returns the colimit and the maps into it.
fn chain_colimit(spaces: &[FinSpace], maps: &[&CtsMap]) -> Result<(FinSpace, Vec<CtsMap>)> {
    let (sum, _) = coproduct(spaces)?;
    let mut offsets = Vec::with_capacity(spaces.len());
    let mut member_ids = Vec::with_capacity(sum.len());
    let mut off = 0;
    for (n, s) in spaces.iter().enumerate() {
        offsets.push(off);
        member_ids.extend(s.ids().iter().map(|id| (n, id.clone())));
        off += s.len();
    }
    let mut uf = UnionFind::new(sum.len());
    for (n, m) in maps.iter().enumerate() {
        for x in 0..m.source().len() {
            uf.union(offsets[n] + x, offsets[n + 1] + m.apply(x));
        }
    }
    let classes = uf.classes();
    let mut label = vec![0; sum.len()];
    for (k, class) in classes.iter().enumerate() {
        for &p in class {
            label[p] = k;
        }
    }
    let names = class_names(&member_ids, &classes);
    let colim = final_topology(names, &[(&sum, &label)])?;
    let legs = spaces
        .iter()
        .zip(&offsets)
        .map(|(s, &o)| CtsMap::new(s.clone(), colim.clone(), label[o..o + s.len()].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok((colim, legs))
}

/// Stagewise colimit of the diagram with glued `Y_i` and `f_i`, together
/// with the cocone morphisms, which are checked to commute with the arrows.
pub fn cis_direct_limit(d: &CisDiagram) -> Result<DirectLimit> {
    let stages = d.objects[0].len();
    let mut spaces = Vec::with_capacity(stages);
    let mut legs: Vec<Vec<CtsMap>> = Vec::with_capacity(stages);
    for i in 0..stages {
        let column: Vec<FinSpace> = d
            .objects
            .iter()
            .map(|o| o.space(i).cloned())
            .collect::<Result<_>>()?;
        let maps: Vec<&CtsMap> = d.arrows.iter().map(|a| a.map(i)).collect();
        let (x, leg) = chain_colimit(&column, &maps)?;
        spaces.push(x);
        legs.push(leg);
    }
    let mut ys = Vec::with_capacity(stages);
    for i in 0..stages {
        let mut y = spaces[i].empty_set();
        for (n, o) in d.objects.iter().enumerate() {
            y.union_with(&legs[i][n].image_of(o.gluing_set(i)?));
        }
        ys.push(y);
    }
    let mut glues = Vec::with_capacity(stages.saturating_sub(1));
    for i in 0..stages.saturating_sub(1) {
        let mut f: BTreeMap<usize, usize> = BTreeMap::new();
        for (n, o) in d.objects.iter().enumerate() {
            for y in o.gluing_set(i)?.iter() {
                let src = legs[i][n].apply(y);
                let dst = legs[i + 1][n].apply(o.glue(i, y)?.expect("defined on Y"));
                if let Some(&prev) = f.get(&src) {
                    if prev != dst {
                        return Err(Error::Invariant(format!(
                            "glued f_{i} is not well defined at `{}`",
                            spaces[i].id(src)
                        )));
                    }
                }
                f.insert(src, dst);
            }
        }
        glues.push(f);
    }
    let cis = Cis::new(spaces, ys, glues, d.objects[0].tail())?;
    let report = validate_cis(&cis);
    if !report.is_valid() {
        return Err(Error::Invariant(format!(
            "direct limit is not a valid system: {report}"
        )));
    }
    let cocone = (0..d.objects.len())
        .map(|n| {
            let maps = (0..stages).map(|i| legs[i][n].clone()).collect();
            CisMorphism::new(d.objects[n].clone(), cis.clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = DirectLimit { cis, cocone };
    if let Some(msg) = cocone_failures(d, &out)?.into_iter().next() {
        return Err(Error::Invariant(msg));
    }
    Ok(out)
}

/// Violations of `E^(m) = E^(m+1) ∘ h^(m,m+1)` and of cocone validity.
pub fn cocone_failures(d: &CisDiagram, dl: &DirectLimit) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (n, e) in dl.cocone.iter().enumerate() {
        let r = validate_morphism(e);
        if !r.is_valid() {
            out.push(format!(
                "cocone morphism {n} is invalid: {}",
                r.to_string().trim_end()
            ));
        }
    }
    for (m, a) in d.arrows.iter().enumerate() {
        let through = compose_morphisms(&dl.cocone[m + 1], a)?;
        for i in 0..through.maps.len() {
            if through.maps[i] != dl.cocone[m].maps[i] {
                out.push(format!("cocone identity fails for object {m} at stage {i}"));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// Number of mediating maps `ϑ^(n)` checked.
    pub objects: usize,
    pub continuous: bool,
    pub cocone_identities: bool,
    pub final_topology: bool,
    pub jointly_surjective: bool,
    /// `ϑ` from the last object is a homeomorphism.
    pub last_is_homeomorphism: bool,
    pub failures: Vec<String>,
}

impl CompatibilityReport {
    pub fn passes(&self) -> bool {
        self.continuous
            && self.cocone_identities
            && self.final_topology
            && self.jointly_surjective
            && self.last_is_homeomorphism
    }
}

impl fmt::Display for CompatibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(f, "mediating maps: {}", self.objects)?;
        writeln!(f, "continuous: {}", flag(self.continuous))?;
        writeln!(f, "cocone identities: {}", flag(self.cocone_identities))?;
        writeln!(f, "final topology: {}", flag(self.final_topology))?;
        writeln!(f, "jointly surjective: {}", flag(self.jointly_surjective))?;
        writeln!(
            f,
            "last map homeomorphism: {}",
            flag(self.last_is_homeomorphism)
        )?;
        for msg in &self.failures {
            writeln!(f, "  {msg}")?;
        }
        Ok(())
    }
}

/// Compares the fundamental limit of the direct limit with the fundamental
/// limits of the objects through `ϑ^(n)(φ_i^(n)(x)) = φ_i(ξ_i^(n)(x))`.
pub fn check_limit_compatibility(d: &CisDiagram) -> Result<CompatibilityReport> {
    let dl = cis_direct_limit(d)?;
    let big = build_fundamental(&dl.cis)?;
    let smalls = d
        .objects
        .iter()
        .map(build_fundamental)
        .collect::<Result<Vec<_>>>()?;
    let mediators = dl
        .cocone
        .iter()
        .zip(&smalls)
        .map(|(e, l)| induced_map(e, l, &big))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    let continuous = mediators.iter().all(CtsMap::is_continuous);
    if !continuous {
        failures.push("a mediating map is not continuous".into());
    }
    let mut cocone_identities = true;
    for (m, a) in d.arrows.iter().enumerate() {
        let la = induced_map(a, &smalls[m], &smalls[m + 1])?;
        if mediators[m + 1].after(&la)? != mediators[m] {
            cocone_identities = false;
            failures.push(format!("mediating maps disagree through arrow {m}"));
        }
    }
    let refs: Vec<&CtsMap> = mediators.iter().collect();
    let final_topology = final_space(big.space(), &refs)?.same_topology(big.space());
    if !final_topology {
        failures.push("limit does not carry the final topology of the mediating maps".into());
    }
    let mut covered = PointSet::empty(big.space().len());
    for t in &mediators {
        covered.union_with(&t.full_image());
    }
    let jointly_surjective = covered.len() == big.space().len();
    if !jointly_surjective {
        failures.push("mediating maps miss points of the limit".into());
    }
    let last_is_homeomorphism = mediators.last().is_some_and(CtsMap::is_homeomorphism);
    if !last_is_homeomorphism {
        failures.push("mediating map of the last object is not a homeomorphism".into());
    }
    Ok(CompatibilityReport {
        objects: mediators.len(),
        continuous,
        cocone_identities,
        final_topology,
        jointly_surjective,
        last_is_homeomorphism,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cis::TailPolicy;

    fn sierpinski() -> FinSpace {
        FinSpace::new(vec!["a".into(), "b".into()], vec![vec![0], vec![0, 1]]).unwrap()
    }

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn idmap(space: &FinSpace) -> BTreeMap<String, String> {
        space.ids().iter().map(|p| (p.clone(), p.clone())).collect()
    }

    fn identity_system(x: FinSpace, n: usize) -> Cis {
        let all = x.ids().to_vec();
        let id = idmap(&x);
        Cis::from_ids(
            vec![x; n],
            &vec![all; n],
            &vec![id; n - 1],
            TailPolicy::Cutoff,
        )
        .unwrap()
    }

    fn point_system(n: usize) -> Cis {
        identity_system(FinSpace::point("*"), n)
    }

    fn collapse(c: &Cis) -> CisMorphism {
        let target = point_system(c.len());
        let maps = (0..c.len())
            .map(|i| CtsMap::constant(c.space(i).unwrap(), target.space(i).unwrap(), 0).unwrap())
            .collect();
        CisMorphism::new(c.clone(), target, maps).unwrap()
    }

    #[test]
    fn identity_morphism_laws() {
        let c = identity_system(sierpinski(), 3);
        let one = CisMorphism::identity(&c);
        assert!(validate_morphism(&one).is_valid());
        assert!(is_cis_isomorphism(&one));
        let induced = induced_fundamental_map(&one).unwrap();
        let ls = build_fundamental(&c).unwrap();
        assert!(induced.same_as(&CtsMap::identity(ls.space())));
        let collapse_map = collapse(&c);
        assert!(compose_morphisms(&collapse_map, &one)
            .unwrap()
            .same_as(&collapse_map));
        let one_t = CisMorphism::identity(collapse_map.target());
        assert!(compose_morphisms(&one_t, &collapse_map)
            .unwrap()
            .same_as(&collapse_map));
    }

    #[test]
    fn collapse_is_valid_not_iso_and_induces_constant() {
        let c = identity_system(sierpinski(), 2);
        let collapse_map = collapse(&c);
        assert!(validate_morphism(&collapse_map).is_valid());
        assert!(!is_cis_isomorphism(&collapse_map));
        let induced = induced_fundamental_map(&collapse_map).unwrap();
        assert_eq!(induced.target().len(), 1);
        assert!(induced.image().iter().all(|&t| t == 0));
    }

    #[test]
    fn map_leaving_w_is_reported() {
        // Source keeps b glued; target's gluing set is empty at stage 0.
        let x = FinSpace::discrete(["u", "v"]);
        let src = Cis::from_ids(
            vec![x.clone(), x.clone()],
            &[ids(&["u"]), ids(&["u", "v"])],
            &[[("u".to_string(), "u".to_string())].into_iter().collect()],
            TailPolicy::Cutoff,
        )
        .unwrap();
        let tgt = Cis::from_ids(
            vec![x.clone(), x.clone()],
            &[vec![], ids(&["u", "v"])],
            &[BTreeMap::new()],
            TailPolicy::Cutoff,
        )
        .unwrap();
        let m = CisMorphism::from_ids(src, tgt, &[idmap(&x), idmap(&x)]).unwrap();
        let r = validate_morphism(&m);
        assert!(r.has_failure(0, MorphismClause::KeepsGluingSet));
    }

    #[test]
    fn constant_diagram_limit_is_the_object() {
        let c = identity_system(sierpinski(), 2);
        let d = CisDiagram::new(
            vec![c.clone(), c.clone(), c.clone()],
            vec![CisMorphism::identity(&c), CisMorphism::identity(&c)],
        )
        .unwrap();
        let dl = cis_direct_limit(&d).unwrap();
        assert_eq!(dl.cis.space(0).unwrap().ids(), c.space(0).unwrap().ids());
        let iso =
            CisMorphism::new(c.clone(), dl.cis.clone(), dl.cocone[2].maps().to_vec()).unwrap();
        assert!(is_cis_isomorphism(&iso));
        let r = check_limit_compatibility(&d).unwrap();
        assert!(r.passes(), "{r}");
    }

    #[test]
    fn collapse_diagram_limit_is_point_system() {
        let c = identity_system(sierpinski(), 2);
        let collapse_map = collapse(&c);
        let d =
            CisDiagram::new(vec![c, collapse_map.target().clone()], vec![collapse_map]).unwrap();
        let dl = cis_direct_limit(&d).unwrap();
        assert!(dl.cis.stages().iter().all(|s| s.space().len() == 1));
        assert!(check_limit_compatibility(&d).unwrap().passes());
    }
}
