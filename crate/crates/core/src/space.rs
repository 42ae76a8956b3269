//! Finite topological spaces.
//!
//! A finite space is an Alexandrov space, so its topology is determined by
//! the minimal open set `U_x` of each point. Open sets are unions of minimal
//! open sets; the closure of a set `A` is `{y : U_y ∩ A ≠ ∅}`. The
//! specialization preorder is `y ≤ x ⇔ y ∈ cl{x} ⇔ x ∈ U_y`.
//!
//! Every finite space is compact, so compactness is never computed here.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::unionfind::UnionFind;

/// Point cap under which [`find_homeomorphism`] is complete.
pub const DEFAULT_HOMEOMORPHISM_CAP: usize = 12;

struct Inner {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    min_open: Vec<PointSet>,
    point_closure: Vec<PointSet>,
}

/// A finite topological space, stored as its minimal open sets.
///
/// Cloning is cheap; the point data is shared.
#[derive(Clone)]
pub struct FinSpace {
    inner: Arc<Inner>,
}

impl FinSpace {
    /// Builds a space from point ids and, for each point, the indices of its
    /// minimal open set. Rejects `x ∉ U_x` and `y ∈ U_x, U_y ⊄ U_x`.
    pub fn new(ids: Vec<String>, min_open: Vec<Vec<usize>>) -> Result<Self> {
        let n = ids.len();
        if min_open.len() != n {
            return Err(Error::Malformed(format!(
                "{} points but {} minimal open sets",
                n,
                min_open.len()
            )));
        }
        let mut sets = Vec::with_capacity(n);
        for list in &min_open {
            let mut s = PointSet::empty(n);
            for &y in list {
                if y >= n {
                    return Err(Error::IndexOutOfRange { index: y, size: n });
                }
                s.insert(y);
            }
            sets.push(s);
        }
        Self::from_sets(ids, sets)
    }

    pub fn from_sets(ids: Vec<String>, min_open: Vec<PointSet>) -> Result<Self> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(id.clone()));
            }
        }
        if min_open.len() != n {
            return Err(Error::Malformed(format!(
                "{} points but {} minimal open sets",
                n,
                min_open.len()
            )));
        }
        for (x, ux) in min_open.iter().enumerate() {
            if ux.universe() != n {
                return Err(Error::Malformed(format!(
                    "minimal open set of `{}` has universe {} (expected {n})",
                    ids[x],
                    ux.universe()
                )));
            }
            if !ux.contains(x) {
                return Err(Error::InvalidMinOpen {
                    point: ids[x].clone(),
                    reason: "point is not in its own minimal open set".into(),
                });
            }
            for y in ux.iter() {
                if !min_open[y].is_subset(ux) {
                    return Err(Error::InvalidMinOpen {
                        point: ids[x].clone(),
                        reason: format!(
                            "contains `{}` but not the minimal open set of `{}`",
                            ids[y], ids[y]
                        ),
                    });
                }
            }
        }
        let mut point_closure = vec![PointSet::empty(n); n];
        for (y, uy) in min_open.iter().enumerate() {
            for x in uy.iter() {
                point_closure[x].insert(y);
            }
        }
        Ok(FinSpace {
            inner: Arc::new(Inner {
                ids,
                index,
                min_open,
                point_closure,
            }),
        })
    }

    /// Builds a space from the reflexive-transitive closure of `edges`, where
    /// an edge `(x, y)` means `y ∈ U_x`.
    pub fn from_relation(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        let mut reach: Vec<PointSet> = (0..n).map(|x| PointSet::singleton(n, x)).collect();
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::IndexOutOfRange {
                    index: x.max(y),
                    size: n,
                });
            }
            reach[x].insert(y);
        }
        // Warshall over bitsets.
        for k in 0..n {
            let rk = reach[k].clone();
            for row in reach.iter_mut() {
                if row.contains(k) {
                    row.union_with(&rk);
                }
            }
        }
        Self::from_sets(ids, reach)
    }

    pub fn discrete<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Self {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let n = ids.len();
        let sets = (0..n).map(|x| PointSet::singleton(n, x)).collect();
        Self::from_sets(ids, sets).expect("discrete space is well formed")
    }

    pub fn indiscrete<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Self {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let n = ids.len();
        let sets = vec![PointSet::full(n); n];
        Self::from_sets(ids, sets).expect("indiscrete space is well formed")
    }

    pub fn point(id: &str) -> Self {
        Self::discrete([id])
    }

    pub fn len(&self) -> usize {
        self.inner.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.inner.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.inner.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.inner
            .index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn set_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for id in ids {
            s.insert(self.index_of(id.as_ref())?);
        }
        Ok(s)
    }

    pub fn ids_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|x| self.inner.ids[x].clone()).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// `U_x`.
    pub fn min_open(&self, x: usize) -> &PointSet {
        &self.inner.min_open[x]
    }

    /// `cl{x}`.
    pub fn point_closure(&self, x: usize) -> &PointSet {
        &self.inner.point_closure[x]
    }

    /// Specialization: `y ≤ x ⇔ y ∈ cl{x}`.
    pub fn leq(&self, y: usize, x: usize) -> bool {
        self.inner.min_open[y].contains(x)
    }

    pub fn closure(&self, a: &PointSet) -> PointSet {
        let mut c = self.empty_set();
        for x in a.iter() {
            c.union_with(&self.inner.point_closure[x]);
        }
        c
    }

    /// Smallest open superset of `a`.
    pub fn open_hull(&self, a: &PointSet) -> PointSet {
        let mut c = self.empty_set();
        for x in a.iter() {
            c.union_with(&self.inner.min_open[x]);
        }
        c
    }

    pub fn is_open(&self, a: &PointSet) -> bool {
        a.iter().all(|x| self.inner.min_open[x].is_subset(a))
    }

    pub fn is_closed(&self, a: &PointSet) -> bool {
        a.iter().all(|x| self.inner.point_closure[x].is_subset(a))
    }

    /// Closure of a set given by ids, returned as ids in point order.
    pub fn closure_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<String>> {
        let a = self.set_of_ids(ids)?;
        Ok(self.ids_of(&self.closure(&a)))
    }

    /// Same topology and the same point ids in the same order.
    pub fn same_topology(&self, other: &FinSpace) -> bool {
        self.len() == other.len() && self.inner.min_open == other.inner.min_open
    }

    /// Subspace on `a`, with its inclusion map.
    pub fn subspace(&self, a: &PointSet) -> (FinSpace, CtsMap) {
        let members = a.to_vec();
        let m = members.len();
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &x) in members.iter().enumerate() {
            pos[x] = k;
        }
        let ids = members.iter().map(|&x| self.inner.ids[x].clone()).collect();
        let sets = members
            .iter()
            .map(|&x| {
                PointSet::from_indices(
                    m,
                    self.inner.min_open[x]
                        .iter()
                        .filter(|y| a.contains(*y))
                        .map(|y| pos[y]),
                )
            })
            .collect();
        let sub = FinSpace::from_sets(ids, sets).expect("subspace of a valid space is valid");
        let incl = CtsMap::new(sub.clone(), self.clone(), members).expect("inclusion is total");
        (sub, incl)
    }

    pub fn subspace_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<(FinSpace, CtsMap)> {
        let a = self.set_of_ids(ids)?;
        Ok(self.subspace(&a))
    }

    /// Same topology with point ids replaced by `ids` (index order kept).
    pub fn renamed(&self, ids: Vec<String>) -> Result<FinSpace> {
        if ids.len() != self.len() {
            return Err(Error::Mismatch("renaming has the wrong length".into()));
        }
        FinSpace::from_sets(ids, self.inner.min_open.clone())
    }

    /// An isomorphic copy whose point `k` is the old point `order[k]`.
    pub fn permuted(&self, order: &[usize], ids: Vec<String>) -> Result<(FinSpace, CtsMap)> {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        for (k, &x) in order.iter().enumerate() {
            if x >= n || pos[x] != usize::MAX {
                return Err(Error::Mismatch("not a permutation".into()));
            }
            pos[x] = k;
        }
        if order.len() != n || ids.len() != n {
            return Err(Error::Mismatch("not a permutation".into()));
        }
        let sets = order
            .iter()
            .map(|&x| PointSet::from_indices(n, self.inner.min_open[x].iter().map(|y| pos[y])))
            .collect();
        let copy = FinSpace::from_sets(ids, sets)?;
        let map = CtsMap::new(self.clone(), copy.clone(), pos)?;
        Ok((copy, map))
    }

    /// Edges `y → x` with `y ∈ U_x`, `y ≠ x` and no `z` with `U_y ⊊ U_z ⊊ U_x`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let strict = |a: usize, b: usize| {
            let (ua, ub) = (&self.inner.min_open[a], &self.inner.min_open[b]);
            ua.is_subset(ub) && ua != ub
        };
        let mut edges = Vec::new();
        for x in 0..n {
            for y in self.inner.min_open[x].iter() {
                if y == x {
                    continue;
                }
                let covered = (0..n).any(|z| strict(y, z) && strict(z, x));
                if !covered {
                    edges.push((y, x));
                }
            }
        }
        edges
    }
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ids == other.inner.ids && self.inner.min_open == other.inner.min_open)
    }
}

impl Eq for FinSpace {}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for x in 0..self.len() {
            m.entry(&self.inner.ids[x], &self.ids_of(&self.inner.min_open[x]));
        }
        m.finish()
    }
}

/// Flags describing a point function between finite spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MapProfile {
    pub continuous: bool,
    pub closed: bool,
    pub injective: bool,
    pub surjective: bool,
    pub embedding: bool,
    /// Surjective, continuous, and the target carries the final topology.
    pub quotient: bool,
}

impl MapProfile {
    pub fn compute(source: &FinSpace, target: &FinSpace, image: &[usize]) -> MapProfile {
        let continuous = (0..source.len()).all(|x| {
            let ux = target.min_open(image[x]);
            source.min_open(x).iter().all(|y| ux.contains(image[y]))
        });
        let mut hit = target.empty_set();
        let mut injective = true;
        for &t in image {
            if hit.contains(t) {
                injective = false;
            }
            hit.insert(t);
        }
        let surjective = hit.len() == target.len();
        let closed = (0..source.len()).all(|x| {
            let img = PointSet::from_indices(
                target.len(),
                source.point_closure(x).iter().map(|y| image[y]),
            );
            target.is_closed(&img)
        });
        let embedding = injective
            && continuous
            && (0..source.len()).all(|y| {
                let uy = target.min_open(image[y]);
                (0..source.len()).all(|x| !uy.contains(image[x]) || source.min_open(y).contains(x))
            });
        let quotient = surjective
            && continuous
            && final_topology(target.ids().to_vec(), &[(source, image)])
                .map(|fin| fin.same_topology(target))
                .unwrap_or(false);
        MapProfile {
            continuous,
            closed,
            injective,
            surjective,
            embedding,
            quotient,
        }
    }
}

/// A total point function between finite spaces together with its profile.
///
/// Continuity is not required at construction; it is one of the profile
/// flags.
#[derive(Clone)]
pub struct CtsMap {
    source: FinSpace,
    target: FinSpace,
    image: Vec<usize>,
    profile: MapProfile,
}

impl CtsMap {
    pub fn new(source: FinSpace, target: FinSpace, image: Vec<usize>) -> Result<CtsMap> {
        if image.len() != source.len() {
            return Err(Error::Malformed(format!(
                "assignment has {} entries for {} source points",
                image.len(),
                source.len()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&t| t >= target.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: target.len(),
            });
        }
        let profile = MapProfile::compute(&source, &target, &image);
        Ok(CtsMap {
            source,
            target,
            image,
            profile,
        })
    }

    /// Builds a map from an id-to-id assignment that must cover the source.
    pub fn from_ids(
        source: FinSpace,
        target: FinSpace,
        assignment: &BTreeMap<String, String>,
    ) -> Result<CtsMap> {
        let mut image = vec![usize::MAX; source.len()];
        for (from, to) in assignment {
            let x = source.index_of(from)?;
            image[x] = target.index_of(to)?;
        }
        if let Some(x) = image.iter().position(|&t| t == usize::MAX) {
            return Err(Error::NotTotal(source.id(x).to_string()));
        }
        CtsMap::new(source, target, image)
    }

    pub fn identity(space: &FinSpace) -> CtsMap {
        CtsMap::new(space.clone(), space.clone(), (0..space.len()).collect())
            .expect("identity is total")
    }

    pub fn constant(source: &FinSpace, target: &FinSpace, value: usize) -> Result<CtsMap> {
        CtsMap::new(source.clone(), target.clone(), vec![value; source.len()])
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn profile(&self) -> MapProfile {
        self.profile
    }

    pub fn is_continuous(&self) -> bool {
        self.profile.continuous
    }

    /// Bijective, continuous, with continuous inverse.
    pub fn is_homeomorphism(&self) -> bool {
        self.profile.embedding && self.profile.surjective
    }

    pub fn image_of(&self, a: &PointSet) -> PointSet {
        PointSet::from_indices(self.target.len(), a.iter().map(|x| self.image[x]))
    }

    pub fn full_image(&self) -> PointSet {
        self.image_of(&self.source.full_set())
    }

    pub fn preimage(&self, b: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.source.len(),
            (0..self.source.len()).filter(|&x| b.contains(self.image[x])),
        )
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CtsMap) -> Result<CtsMap> {
        if first.target != self.source {
            return Err(Error::Mismatch(
                "composition: target of the first map is not the source of the second".into(),
            ));
        }
        CtsMap::new(
            first.source.clone(),
            self.target.clone(),
            first.image.iter().map(|&y| self.image[y]).collect(),
        )
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<CtsMap> {
        if !(self.profile.injective && self.profile.surjective) {
            return None;
        }
        let mut inv = vec![0; self.target.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        CtsMap::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    pub fn to_id_map(&self) -> BTreeMap<String, String> {
        (0..self.source.len())
            .map(|x| {
                (
                    self.source.id(x).to_string(),
                    self.target.id(self.image[x]).to_string(),
                )
            })
            .collect()
    }

    /// Same assignment on the same spaces.
    pub fn same_as(&self, other: &CtsMap) -> bool {
        self.source == other.source && self.target == other.target && self.image == other.image
    }
}

impl PartialEq for CtsMap {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for CtsMap {}

impl fmt::Debug for CtsMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CtsMap")
            .field("assignment", &self.to_id_map())
            .field("profile", &self.profile)
            .finish()
    }
}

/// Recomputes the profile of `m` from its definition.
pub fn classify_map(m: &CtsMap) -> MapProfile {
    MapProfile::compute(&m.source, &m.target, &m.image)
}

/// Closure of a set given by ids.
pub fn set_closure<S: AsRef<str>>(space: &FinSpace, a: &[S]) -> Result<Vec<String>> {
    space.closure_of_ids(a)
}

/// Topological sum. Point `x` of summand `i` is renamed `"{i}:{x}"`.
pub fn coproduct(spaces: &[FinSpace]) -> Result<(FinSpace, Vec<CtsMap>)> {
    if spaces.is_empty() {
        return Err(Error::EmptyList);
    }
    let total: usize = spaces.iter().map(FinSpace::len).sum();
    let mut ids = Vec::with_capacity(total);
    let mut sets = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(spaces.len());
    let mut offset = 0;
    for (i, s) in spaces.iter().enumerate() {
        offsets.push(offset);
        for x in 0..s.len() {
            ids.push(format!("{i}:{}", s.id(x)));
            sets.push(PointSet::from_indices(
                total,
                s.min_open(x).iter().map(|y| y + offset),
            ));
        }
        offset += s.len();
    }
    let sum = FinSpace::from_sets(ids, sets)?;
    let injections = spaces
        .iter()
        .zip(&offsets)
        .map(|(s, &off)| CtsMap::new(s.clone(), sum.clone(), (off..off + s.len()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok((sum, injections))
}

/// Quotient by a partition given as classes of point indices.
pub fn quotient(space: &FinSpace, classes: &[Vec<usize>]) -> Result<(FinSpace, CtsMap)> {
    let n = space.len();
    let mut label = vec![usize::MAX; n];
    for (c, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::NotPartition(format!("class {c} is empty")));
        }
        for &x in class {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, size: n });
            }
            if label[x] != usize::MAX {
                return Err(Error::NotPartition(format!(
                    "`{}` lies in two classes",
                    space.id(x)
                )));
            }
            label[x] = c;
        }
    }
    if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
        return Err(Error::NotPartition(format!(
            "`{}` is in no class",
            space.id(x)
        )));
    }
    let mut names = Vec::with_capacity(classes.len());
    let mut taken: std::collections::HashSet<String> = space.ids().iter().cloned().collect();
    for class in classes {
        let mut members = class.clone();
        members.sort_unstable();
        let name = if members.len() == 1 {
            space.id(members[0]).to_string()
        } else {
            let joined: Vec<&str> = members.iter().map(|&x| space.id(x)).collect();
            let mut name = format!("[{}]", joined.join("="));
            while taken.contains(&name) {
                name.push('\'');
            }
            name
        };
        taken.insert(name.clone());
        names.push(name);
    }
    let q = final_topology(names, &[(space, &label)])?;
    let proj = CtsMap::new(space.clone(), q.clone(), label)?;
    Ok((q, proj))
}

/// Quotient by the id-level partition.
pub fn quotient_by_ids<S: AsRef<str>>(
    space: &FinSpace,
    classes: &[Vec<S>],
) -> Result<(FinSpace, CtsMap)> {
    let idx = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|id| space.index_of(id.as_ref()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    quotient(space, &idx)
}

/// Product space: `U_(x,y) = U_x × U_y`, point `(x, y)` named `"(x,y)"`.
pub fn product(a: &FinSpace, b: &FinSpace) -> FinSpace {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut ids = Vec::with_capacity(n);
    let mut sets = Vec::with_capacity(n);
    for x in 0..na {
        for y in 0..nb {
            ids.push(format!("({},{})", a.id(x), b.id(y)));
            let mut s = PointSet::empty(n);
            for u in a.min_open(x).iter() {
                for v in b.min_open(y).iter() {
                    s.insert(u * nb + v);
                }
            }
            sets.push(s);
        }
    }
    FinSpace::from_sets(ids, sets).expect("product of valid spaces is valid")
}

/// The finest topology on `ids` making every `(source, assignment)` map
/// continuous.
///
/// `U_t` is the least set containing `t` and closed under
/// `S ↦ S ∪ m(U_p)` for every map `m` and point `p` with `m(p) ∈ S`.
pub fn final_topology(ids: Vec<String>, maps: &[(&FinSpace, &[usize])]) -> Result<FinSpace> {
    let n = ids.len();
    let mut fibers: Vec<Vec<Vec<usize>>> = Vec::with_capacity(maps.len());
    for (src, img) in maps {
        if img.len() != src.len() {
            return Err(Error::Malformed(
                "assignment length differs from source size".into(),
            ));
        }
        let mut fib = vec![Vec::new(); n];
        for (p, &t) in img.iter().enumerate() {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, size: n });
            }
            fib[t].push(p);
        }
        fibers.push(fib);
    }
    let mut sets = Vec::with_capacity(n);
    for t in 0..n {
        let mut s = PointSet::singleton(n, t);
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            for (k, (src, img)) in maps.iter().enumerate() {
                for &p in &fibers[k][u] {
                    for q in src.min_open(p).iter() {
                        let v = img[q];
                        if !s.contains(v) {
                            s.insert(v);
                            stack.push(v);
                        }
                    }
                }
            }
        }
        sets.push(s);
    }
    FinSpace::from_sets(ids, sets)
}

/// [`final_topology`] for maps already typed into a target space; the
/// target's topology is ignored, only its points are used.
pub fn final_space(target: &FinSpace, maps: &[&CtsMap]) -> Result<FinSpace> {
    let pairs: Vec<(&FinSpace, &[usize])> = maps
        .iter()
        .map(|m| {
            if m.target().len() != target.len() {
                Err(Error::Mismatch(
                    "map does not land in the given point set".into(),
                ))
            } else {
                Ok((m.source(), m.image()))
            }
        })
        .collect::<Result<_>>()?;
    final_topology(target.ids().to_vec(), &pairs)
}

/// Outcome of a homeomorphism search.
#[derive(Debug, Clone)]
pub enum HomeoSearch {
    Found(CtsMap),
    NotHomeomorphic,
    /// Invariants agree but the spaces exceed the search cap.
    Undecided {
        points: usize,
        cap: usize,
    },
}

impl HomeoSearch {
    pub fn found(&self) -> Option<&CtsMap> {
        match self {
            HomeoSearch::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, HomeoSearch::Found(_))
    }
}

pub fn find_homeomorphism(a: &FinSpace, b: &FinSpace) -> HomeoSearch {
    find_homeomorphism_with_cap(a, b, DEFAULT_HOMEOMORPHISM_CAP)
}

fn signatures(s: &FinSpace) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let base: Vec<(usize, usize)> = (0..s.len())
        .map(|x| (s.min_open(x).len(), s.point_closure(x).len()))
        .collect();
    (0..s.len())
        .map(|x| {
            let mut up: Vec<usize> = s
                .min_open(x)
                .iter()
                .map(|y| base[y].0 * 1000 + base[y].1)
                .collect();
            let mut down: Vec<usize> = s
                .point_closure(x)
                .iter()
                .map(|y| base[y].0 * 1000 + base[y].1)
                .collect();
            up.sort_unstable();
            down.sort_unstable();
            (base[x].0, base[x].1, up, down)
        })
        .collect()
}

/// Backtracking search for a homeomorphism `a → b`; complete when both
/// spaces have at most `cap` points.
pub fn find_homeomorphism_with_cap(a: &FinSpace, b: &FinSpace, cap: usize) -> HomeoSearch {
    if a.len() != b.len() {
        return HomeoSearch::NotHomeomorphic;
    }
    let sa = signatures(a);
    let sb = signatures(b);
    let mut ma = sa.clone();
    let mut mb = sb.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return HomeoSearch::NotHomeomorphic;
    }
    if a.len() > cap {
        return HomeoSearch::Undecided {
            points: a.len(),
            cap,
        };
    }
    let n = a.len();
    // Assign the most constrained points first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| {
        let count = sb.iter().filter(|s| **s == sa[x]).count();
        (count, std::cmp::Reverse(a.min_open(x).len()))
    });
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn extend(
        depth: usize,
        order: &[usize],
        a: &FinSpace,
        b: &FinSpace,
        sa: &[(usize, usize, Vec<usize>, Vec<usize>)],
        sb: &[(usize, usize, Vec<usize>, Vec<usize>)],
        assign: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for t in 0..b.len() {
            if used[t] || sa[x] != sb[t] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                let fu = assign[u];
                a.min_open(x).contains(u) == b.min_open(t).contains(fu)
                    && a.min_open(u).contains(x) == b.min_open(fu).contains(t)
            });
            if !consistent {
                continue;
            }
            assign[x] = t;
            used[t] = true;
            if extend(depth + 1, order, a, b, sa, sb, assign, used) {
                return true;
            }
            used[t] = false;
            assign[x] = usize::MAX;
        }
        false
    }

    if extend(0, &order, a, b, &sa, &sb, &mut assign, &mut used) {
        let m = CtsMap::new(a.clone(), b.clone(), assign).expect("assignment is total");
        debug_assert!(m.is_homeomorphism());
        HomeoSearch::Found(m)
    } else {
        HomeoSearch::NotHomeomorphic
    }
}

/// Connected components, each sorted, ordered by least member.
pub fn components(space: &FinSpace) -> Vec<PointSet> {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in space.min_open(x).iter() {
            uf.union(x, y);
        }
    }
    let mut by_root: BTreeMap<usize, PointSet> = BTreeMap::new();
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..n {
        let r = uf.find(x);
        first.entry(r).or_insert(x);
        by_root
            .entry(r)
            .or_insert_with(|| PointSet::empty(n))
            .insert(x);
    }
    let mut comps: Vec<(usize, PointSet)> =
        by_root.into_iter().map(|(r, s)| (first[&r], s)).collect();
    comps.sort_by_key(|(f, _)| *f);
    comps.into_iter().map(|(_, s)| s).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationProfile {
    pub t0: bool,
    /// For finite spaces T1 coincides with discreteness.
    pub t1: bool,
    pub discrete: bool,
}

pub fn separation_profile(space: &FinSpace) -> SeparationProfile {
    let n = space.len();
    let t0 = (0..n).all(|x| (x + 1..n).all(|y| space.min_open(x) != space.min_open(y)));
    let t1 = (0..n).all(|x| space.is_closed(&PointSet::singleton(n, x)));
    let discrete = (0..n).all(|x| space.min_open(x).len() == 1);
    SeparationProfile { t0, t1, discrete }
}
