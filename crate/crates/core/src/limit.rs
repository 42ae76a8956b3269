//! Limit spaces of a closed injective system.
//!
//! A limit space is a space `X` with maps `φ_i: X_i → X` such that the
//! images cover `X`, each `φ_i` is an embedding, and two images overlap
//! exactly along the gluing data: for `i < j` the overlap
//! `φ_i(X_i) ∩ φ_j(X_j)` equals `φ_j f_{i,j-1}(Y_{i,j-1})` point by point
//! when the composite chain from `i` reaches `j`, and is empty otherwise.
//!
//! The fundamental limit is the attaching space: the coproduct of the stages
//! with each `y ∈ Y_i` identified with `f_i(y)`, carrying the final topology.

use std::collections::BTreeMap;
use std::fmt;

use crate::cis::{overlap_data, semicomponible, validate_cis, Cis, TailPolicy};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{coproduct, final_space, final_topology, CtsMap, FinSpace};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSpace {
    space: FinSpace,
    embeddings: Vec<CtsMap>,
}

impl LimitSpace {
    /// Every `φ_i` must land in `space`; nothing else is checked here.
    pub fn new(space: FinSpace, embeddings: Vec<CtsMap>) -> Result<LimitSpace> {
        if embeddings.is_empty() {
            return Err(Error::EmptyList);
        }
        if let Some(i) = embeddings.iter().position(|p| p.target() != &space) {
            return Err(Error::Mismatch(format!(
                "φ_{i} does not land in the limit space"
            )));
        }
        Ok(LimitSpace { space, embeddings })
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn embeddings(&self) -> &[CtsMap] {
        &self.embeddings
    }

    pub fn embedding(&self, i: usize) -> &CtsMap {
        &self.embeddings[i]
    }

    /// Same assignments with the limit's topology replaced by `space`, which
    /// must have the same point ids.
    pub fn with_topology(&self, space: FinSpace) -> Result<LimitSpace> {
        if space.ids() != self.space.ids() {
            return Err(Error::Mismatch(
                "retopologized limit must keep its points".into(),
            ));
        }
        let embeddings = self
            .embeddings
            .iter()
            .map(|p| CtsMap::new(p.source().clone(), space.clone(), p.image().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        LimitSpace::new(space, embeddings)
    }

    /// An isomorphic copy whose point `k` is the old point `order[k]`,
    /// renamed to `ids[k]`, with every `φ_i` transported.
    pub fn relabeled(&self, order: &[usize], ids: Vec<String>) -> Result<LimitSpace> {
        let (copy, iso) = self.space.permuted(order, ids)?;
        let embeddings = self
            .embeddings
            .iter()
            .map(|p| iso.after(p))
            .collect::<Result<Vec<_>>>()?;
        LimitSpace::new(copy, embeddings)
    }
}

/// The attaching construction behind the fundamental limit.
#[derive(Debug, Clone)]
pub struct Attaching {
    pub coproduct: FinSpace,
    pub injections: Vec<CtsMap>,
    /// Projection of the coproduct onto the limit.
    pub projection: CtsMap,
    pub limit: LimitSpace,
}

/// Names each class by its members' ids: a shared id when all members carry
/// the same one, otherwise `[a=b=...]`. Clashes get primes appended.
pub(crate) fn class_names(stage_ids: &[(usize, String)], classes: &[Vec<usize>]) -> Vec<String> {
    let mut taken = std::collections::HashSet::new();
    let mut names = Vec::with_capacity(classes.len());
    for class in classes {
        let mut distinct: Vec<&str> = Vec::new();
        for &p in class {
            let id = stage_ids[p].1.as_str();
            if !distinct.contains(&id) {
                distinct.push(id);
            }
        }
        let mut name = if distinct.len() == 1 {
            distinct[0].to_string()
        } else {
            format!("[{}]", distinct.join("="))
        };
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        names.push(name);
    }
    names
}

/// Builds the attaching space of all represented stages.
pub fn attaching(c: &Cis) -> Result<Attaching> {
    let report = validate_cis(c);
    if !report.is_valid() {
        return Err(Error::InvalidSystem(
            report.to_string().trim_end().to_string(),
        ));
    }
    let spaces: Vec<FinSpace> = c.stages().iter().map(|s| s.space().clone()).collect();
    let (sum, injections) = coproduct(&spaces)?;
    let mut offsets = Vec::with_capacity(spaces.len());
    let mut stage_ids = Vec::with_capacity(sum.len());
    let mut off = 0;
    for (i, s) in spaces.iter().enumerate() {
        offsets.push(off);
        stage_ids.extend(s.ids().iter().map(|id| (i, id.clone())));
        off += s.len();
    }
    let mut uf = UnionFind::new(sum.len());
    for i in 0..spaces.len().saturating_sub(1) {
        for y in c.gluing_set(i)?.iter() {
            let t = c.glue(i, y)?.expect("glue is defined on Y");
            uf.union(offsets[i] + y, offsets[i + 1] + t);
        }
    }
    let classes = uf.classes();
    let mut label = vec![0; sum.len()];
    for (k, class) in classes.iter().enumerate() {
        for &p in class {
            label[p] = k;
        }
    }
    let names = class_names(&stage_ids, &classes);
    let x = final_topology(names, &[(&sum, &label)])?;
    let projection = CtsMap::new(sum.clone(), x.clone(), label)?;
    let embeddings = injections
        .iter()
        .map(|inj| projection.after(inj))
        .collect::<Result<Vec<_>>>()?;
    let limit = LimitSpace::new(x, embeddings)?;
    Ok(Attaching {
        coproduct: sum,
        injections,
        projection,
        limit,
    })
}

/// The fundamental limit space. The result is checked against the limit
/// axioms and the weak topology before it is returned.
pub fn build_fundamental(c: &Cis) -> Result<LimitSpace> {
    let limit = attaching(c)?.limit;
    let report = verify_limit_axioms(c, &limit)?;
    if !report.passes() {
        return Err(Error::Invariant(format!(
            "attaching space is not a limit: {report}"
        )));
    }
    if !has_weak_topology(c, &limit)? {
        return Err(Error::Invariant(
            "attaching space lacks the weak topology".into(),
        ));
    }
    Ok(limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// The images cover the limit.
    Cover,
    /// Each `φ_i` is an embedding.
    Embedding,
    /// Overlaps equal the transported gluing locus, point by point.
    Overlap,
    /// Images of stages whose chain breaks are disjoint.
    Disjoint,
    /// `φ_j f_{i,j-1} = φ_i` on `Y_{i,j-1}`.
    Agreement,
    /// Points off the gluing locus never meet.
    OffLocus,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Cover => "cover",
            Axiom::Embedding => "embedding",
            Axiom::Overlap => "overlap",
            Axiom::Disjoint => "disjoint",
            Axiom::Agreement => "agreement",
            Axiom::OffLocus => "off-locus",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub i: usize,
    pub j: Option<usize>,
    /// Ids of offending points of the limit.
    pub points: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: Vec<Axiom>,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.violations.iter().all(|v| v.axiom != axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.checked {
            writeln!(f, "{a}: {}", if self.holds(*a) { "pass" } else { "FAIL" })?;
        }
        for v in &self.violations {
            let pair = match v.j {
                Some(j) => format!("({}, {j})", v.i),
                None => format!("{}", v.i),
            };
            writeln!(f, "  {} at {pair}: {} {:?}", v.axiom, v.detail, v.points)?;
        }
        Ok(())
    }
}

/// Highest index worth checking: one virtual stage past a stationary tail
/// exercises the identity gluing.
fn top_index(c: &Cis) -> usize {
    match c.tail() {
        TailPolicy::Stationary { n0 } => n0 + 1,
        TailPolicy::Cutoff => c.last(),
    }
}

fn check_shape(c: &Cis, ls: &LimitSpace) -> Result<()> {
    if ls.embeddings.len() != c.len() {
        return Err(Error::Mismatch(format!(
            "{} stage maps for {} stages",
            ls.embeddings.len(),
            c.len()
        )));
    }
    for (i, p) in ls.embeddings.iter().enumerate() {
        if p.source() != c.space(i)? {
            return Err(Error::Mismatch(format!("φ_{i} does not start at X_{i}")));
        }
    }
    Ok(())
}

struct Checker<'a> {
    c: &'a Cis,
    ls: &'a LimitSpace,
    violations: Vec<AxiomViolation>,
}

impl<'a> Checker<'a> {
    fn embedding(&self, i: usize) -> &'a CtsMap {
        &self.ls.embeddings[self.c.resolve(i).expect("checked index")]
    }

    fn push(&mut self, axiom: Axiom, i: usize, j: Option<usize>, pts: &[usize], detail: String) {
        let points = pts
            .iter()
            .map(|&p| self.ls.space.id(p).to_string())
            .collect();
        self.violations.push(AxiomViolation {
            axiom,
            i,
            j,
            points,
            detail,
        });
    }

    fn cover_and_embedding(&mut self) {
        let mut covered = self.ls.space.empty_set();
        for p in &self.ls.embeddings {
            covered.union_with(&p.full_image());
        }
        let missing: Vec<usize> = covered.complement().iter().collect();
        if !missing.is_empty() {
            self.push(
                Axiom::Cover,
                0,
                None,
                &missing,
                "points outside every image".into(),
            );
        }
        for i in 0..self.ls.embeddings.len() {
            let p = self.ls.embeddings[i].profile();
            if !p.embedding {
                let why = if !p.injective {
                    "not injective"
                } else if !p.continuous {
                    "not continuous"
                } else {
                    "not a homeomorphism onto its image"
                };
                self.push(Axiom::Embedding, i, None, &[], why.into());
            }
        }
    }

    fn overlap_pairs(&mut self, split: bool) -> Result<()> {
        let top = top_index(self.c);
        for j in 1..=top {
            for i in 0..j {
                let linked = semicomponible(self.c, i, j - 1)?;
                let (pi, pj) = (self.embedding(i), self.embedding(j));
                if !linked {
                    let meet = pi.full_image().intersection(&pj.full_image());
                    if !meet.is_empty() {
                        let pts = meet.to_vec();
                        self.push(Axiom::Disjoint, i, Some(j), &pts, "images meet".into());
                    }
                    continue;
                }
                let g = overlap_data(self.c, i, j)?;
                let domain = g.domain().clone();
                if split {
                    self.agreement(i, j, pi, pj, &domain, &g);
                } else {
                    self.pointwise_overlap(i, j, pi, pj, &domain, &g);
                }
            }
        }
        Ok(())
    }

    fn pointwise_overlap(
        &mut self,
        i: usize,
        j: usize,
        pi: &CtsMap,
        pj: &CtsMap,
        domain: &PointSet,
        g: &crate::cis::CompositeInjection,
    ) {
        let (ni, nj) = (pi.source().len(), pj.source().len());
        for u in 0..ni {
            for v in 0..nj {
                if pi.apply(u) != pj.apply(v) {
                    continue;
                }
                if !domain.contains(u) || g.apply(u) != Some(v) {
                    self.push(
                        Axiom::Overlap,
                        i,
                        Some(j),
                        &[pi.apply(u)],
                        format!(
                            "`{}` and `{}` meet off the gluing",
                            pi.source().id(u),
                            pj.source().id(v)
                        ),
                    );
                }
            }
        }
        let img_i = pi.full_image();
        for y in domain.iter() {
            let t = pj.apply(g.apply(y).expect("defined on domain"));
            if !img_i.contains(t) {
                self.push(
                    Axiom::Overlap,
                    i,
                    Some(j),
                    &[t],
                    "transported gluing point lies outside the earlier image".into(),
                );
            }
        }
    }

    fn agreement(
        &mut self,
        i: usize,
        j: usize,
        pi: &CtsMap,
        pj: &CtsMap,
        domain: &PointSet,
        g: &crate::cis::CompositeInjection,
    ) {
        for y in domain.iter() {
            let t = pj.apply(g.apply(y).expect("defined on domain"));
            if t != pi.apply(y) {
                self.push(
                    Axiom::Agreement,
                    i,
                    Some(j),
                    &[pi.apply(y), t],
                    format!("`{}` lands apart from its glued image", pi.source().id(y)),
                );
            }
        }
        let off_i = pi.image_of(&domain.complement());
        let locus = g.image_set();
        let off_j = pj.image_of(&locus.complement());
        let meet = off_i.intersection(&off_j);
        if !meet.is_empty() {
            let pts = meet.to_vec();
            self.push(
                Axiom::OffLocus,
                i,
                Some(j),
                &pts,
                "points off the locus meet".into(),
            );
        }
    }
}

/// Checks cover, embedding, pointwise overlap and disjointness.
pub fn verify_limit_axioms(c: &Cis, ls: &LimitSpace) -> Result<AxiomReport> {
    check_shape(c, ls)?;
    let mut ch = Checker {
        c,
        ls,
        violations: Vec::new(),
    };
    ch.cover_and_embedding();
    ch.overlap_pairs(false)?;
    Ok(AxiomReport {
        checked: vec![
            Axiom::Cover,
            Axiom::Embedding,
            Axiom::Overlap,
            Axiom::Disjoint,
        ],
        violations: ch.violations,
    })
}

/// The same axioms with the overlap clause split into agreement on the
/// gluing locus and disjointness off it.
pub fn verify_split_axioms(c: &Cis, ls: &LimitSpace) -> Result<AxiomReport> {
    check_shape(c, ls)?;
    let mut ch = Checker {
        c,
        ls,
        violations: Vec::new(),
    };
    ch.cover_and_embedding();
    ch.overlap_pairs(true)?;
    Ok(AxiomReport {
        checked: vec![
            Axiom::Cover,
            Axiom::Embedding,
            Axiom::Disjoint,
            Axiom::Agreement,
            Axiom::OffLocus,
        ],
        violations: ch.violations,
    })
}

/// Whether the limit carries the final topology of its stage maps.
pub fn has_weak_topology(c: &Cis, ls: &LimitSpace) -> Result<bool> {
    check_shape(c, ls)?;
    let maps: Vec<&CtsMap> = ls.embeddings.iter().collect();
    Ok(final_space(&ls.space, &maps)?.same_topology(&ls.space))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagesClosed {
    pub all_closed: bool,
    /// Stages whose image is not closed.
    pub open_stages: Vec<usize>,
}

pub fn images_closed(ls: &LimitSpace) -> ImagesClosed {
    let open_stages: Vec<usize> = (0..ls.embeddings.len())
        .filter(|&i| !ls.space.is_closed(&ls.embeddings[i].full_image()))
        .collect();
    ImagesClosed {
        all_closed: open_stages.is_empty(),
        open_stages,
    }
}

/// The unique bijection `β` with `ψ_i = β ∘ φ_i`. Fails unless both
/// limits satisfy the axioms. When both carry the weak topology the result
/// is checked to be a homeomorphism.
pub fn canonical_bijection(c: &Cis, from: &LimitSpace, to: &LimitSpace) -> Result<CtsMap> {
    for (name, ls) in [("source", from), ("target", to)] {
        let r = verify_limit_axioms(c, ls)?;
        if !r.passes() {
            return Err(Error::AxiomFailure(format!(
                "{name} limit: {}",
                r.to_string().trim_end()
            )));
        }
    }
    let mut image: Vec<Option<usize>> = vec![None; from.space.len()];
    for (pa, pb) in from.embeddings.iter().zip(&to.embeddings) {
        for x in 0..pa.source().len() {
            let (a, b) = (pa.apply(x), pb.apply(x));
            match image[a] {
                None => image[a] = Some(b),
                Some(prev) if prev == b => {}
                Some(_) => {
                    return Err(Error::Invariant(format!(
                        "β is not well defined at `{}`",
                        from.space.id(a)
                    )))
                }
            }
        }
    }
    let image = image
        .into_iter()
        .enumerate()
        .map(|(a, b)| {
            b.ok_or_else(|| Error::Invariant(format!("`{}` is uncovered", from.space.id(a))))
        })
        .collect::<Result<Vec<_>>>()?;
    let bijection = CtsMap::new(from.space.clone(), to.space.clone(), image)?;
    let p = bijection.profile();
    if !(p.injective && p.surjective) {
        return Err(Error::Invariant("β is not a bijection".into()));
    }
    if has_weak_topology(c, from)? && has_weak_topology(c, to)? && !bijection.is_homeomorphism() {
        return Err(Error::Invariant(
            "β between fundamental limits is not a homeomorphism".into(),
        ));
    }
    Ok(bijection)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverProfile {
    pub pointwise_finite: bool,
    pub locally_finite: bool,
    pub closed_cover: bool,
    /// Most images containing one point.
    pub max_point_multiplicity: usize,
    /// Most images meeting one minimal open set.
    pub max_neighbourhood_multiplicity: usize,
}

/// Properties of the image family `{φ_i(X_i)}` over represented stages.
///
/// A neighbourhood of `x` in a finite space contains `U_x`, so local
/// finiteness is decided on minimal open sets. A represented family is
/// finite, so both finiteness flags hold; the multiplicities say by how much.
pub fn cover_profile(ls: &LimitSpace) -> CoverProfile {
    let images: Vec<PointSet> = ls.embeddings.iter().map(CtsMap::full_image).collect();
    let n = ls.space.len();
    let at_point = (0..n)
        .map(|x| images.iter().filter(|im| im.contains(x)).count())
        .max()
        .unwrap_or(0);
    let near_point = (0..n)
        .map(|x| {
            let u = ls.space.min_open(x);
            images.iter().filter(|im| !im.is_disjoint(u)).count()
        })
        .max()
        .unwrap_or(0);
    CoverProfile {
        pointwise_finite: at_point <= images.len(),
        locally_finite: near_point <= images.len(),
        closed_cover: images_closed(ls).all_closed,
        max_point_multiplicity: at_point,
        max_neighbourhood_multiplicity: near_point,
    }
}

/// Closed and surjective. Fibres in a finite space are finite, hence
/// compact, so they are not examined.
pub fn is_perfect_map(m: &CtsMap) -> bool {
    let p = m.profile();
    p.closed && p.surjective
}

/// Which stage images contain each limit point, keyed by point id.
pub fn image_membership(ls: &LimitSpace) -> BTreeMap<String, Vec<usize>> {
    (0..ls.space.len())
        .map(|x| {
            let stages = (0..ls.embeddings.len())
                .filter(|&i| ls.embeddings[i].full_image().contains(x))
                .collect();
            (ls.space.id(x).to_string(), stages)
        })
        .collect()
}
