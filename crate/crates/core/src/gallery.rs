//! Example systems: identity chains, sphere and torus chains, an interval
//! chain, a chain whose composites break, and a search for limit spaces
//! that lack the weak topology.

use std::collections::BTreeMap;
use std::fmt;

use crate::cat::{CisDiagram, CisMorphism};
use crate::cis::{Cis, TailPolicy};
use crate::error::{Error, Result};
use crate::limit::{build_fundamental, has_weak_topology, verify_limit_axioms, LimitSpace};
use crate::pointset::PointSet;
use crate::space::{product, CtsMap, FinSpace};

pub const MAX_SPHERE: usize = 6;
pub const MAX_TORUS: usize = 4;
pub const MAX_STAGES: usize = 6;
/// Largest limit the topology search accepts.
pub const MAX_SEARCH_POINTS: usize = 7;
pub const DEFAULT_SEARCH_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSpace {
    Point,
    Sierpinski,
    Discrete(usize),
    Circle,
}

impl BaseSpace {
    pub fn build(self) -> FinSpace {
        match self {
            BaseSpace::Point => FinSpace::point("x"),
            BaseSpace::Sierpinski => sierpinski(),
            BaseSpace::Discrete(n) => FinSpace::discrete((0..n).map(|k| format!("d{k}"))),
            BaseSpace::Circle => circle(),
        }
    }
}

impl fmt::Display for BaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSpace::Point => f.write_str("point"),
            BaseSpace::Sierpinski => f.write_str("sierpinski"),
            BaseSpace::Discrete(n) => write!(f, "discrete{n}"),
            BaseSpace::Circle => f.write_str("circle"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalleryId {
    Identity { base: BaseSpace, stages: usize },
    SphereChain(usize),
    StationarySphere(usize),
    TorusChain(usize),
    IntervalChain(usize),
    NonSemicomponible,
}

impl GalleryId {
    pub const NAMES: [&'static str; 6] = [
        "identity",
        "sphere_chain",
        "stationary_sphere",
        "torus_chain",
        "interval_chain",
        "non_semicomponible",
    ];

    /// Parses a name and its parameters, e.g. `identity sierpinski 3` or
    /// `sphere_chain 2`.
    pub fn parse(name: &str, params: &[String]) -> Result<GalleryId> {
        let num = |k: usize| -> Result<usize> {
            let raw = params
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("`{name}` needs parameter {}", k + 1)))?;
            raw.parse()
                .map_err(|_| Error::Malformed(format!("`{raw}` is not a nonnegative integer")))
        };
        let id = match name {
            "identity" => {
                let base = match params.first().map(String::as_str) {
                    Some("point") => BaseSpace::Point,
                    Some("sierpinski") => BaseSpace::Sierpinski,
                    Some("circle") => BaseSpace::Circle,
                    Some(s) if s.starts_with("discrete") => {
                        let n = s["discrete".len()..]
                            .parse()
                            .map_err(|_| Error::Malformed(format!("bad base space `{s}`")))?;
                        BaseSpace::Discrete(n)
                    }
                    Some(s) => return Err(Error::Malformed(format!("unknown base space `{s}`"))),
                    None => return Err(Error::Malformed("`identity` needs a base space".into())),
                };
                GalleryId::Identity {
                    base,
                    stages: num(1)?,
                }
            }
            "sphere_chain" => GalleryId::SphereChain(num(0)?),
            "stationary_sphere" => GalleryId::StationarySphere(num(0)?),
            "torus_chain" => GalleryId::TorusChain(num(0)?),
            "interval_chain" => GalleryId::IntervalChain(num(0)?),
            "non_semicomponible" => GalleryId::NonSemicomponible,
            other => {
                return Err(Error::Malformed(format!(
                    "unknown example `{other}`; known: {}",
                    GalleryId::NAMES.join(", ")
                )))
            }
        };
        Ok(id)
    }
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalleryId::Identity { base, stages } => write!(f, "identity({base}, {stages})"),
            GalleryId::SphereChain(n) => write!(f, "sphere_chain({n})"),
            GalleryId::StationarySphere(n) => write!(f, "stationary_sphere({n})"),
            GalleryId::TorusChain(n) => write!(f, "torus_chain({n})"),
            GalleryId::IntervalChain(n) => write!(f, "interval_chain({n})"),
            GalleryId::NonSemicomponible => f.write_str("non_semicomponible()"),
        }
    }
}

pub fn sierpinski() -> FinSpace {
    FinSpace::new(vec!["a".into(), "b".into()], vec![vec![0], vec![0, 1]]).expect("valid")
}

/// Four-point circle: `p`, `q` open, `U_a = {a,p,q}`, `U_b = {b,p,q}`.
pub fn circle() -> FinSpace {
    FinSpace::new(
        vec!["p".into(), "q".into(), "a".into(), "b".into()],
        vec![vec![0], vec![1], vec![2, 0, 1], vec![3, 0, 1]],
    )
    .expect("valid")
}

/// Sphere model of dimension `n`: two discrete points `n0`, `s0`, then for
/// each level `k` two open points `nk`, `sk` added to every older minimal
/// open set. Older models sit inside as closed subspaces.
pub fn sphere(n: usize) -> FinSpace {
    let mut ids = Vec::with_capacity(2 * n + 2);
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(2 * n + 2);
    for k in 0..=n {
        ids.push(format!("n{k}"));
        ids.push(format!("s{k}"));
    }
    for x in 0..2 * n + 2 {
        let level = x / 2;
        let mut u = vec![x];
        u.extend((2 * level + 2)..(2 * n + 2));
        sets.push(u);
    }
    FinSpace::new(ids, sets).expect("sphere model is valid")
}

/// `T^k` as the `k`-fold product of [`circle`].
pub fn torus(k: usize) -> FinSpace {
    let mut t = circle();
    for _ in 1..k {
        t = product(&t, &circle());
    }
    t
}

fn inclusion_pairs(from: &FinSpace, to: &FinSpace) -> Result<BTreeMap<usize, usize>> {
    (0..from.len())
        .map(|x| Ok((x, to.index_of(from.id(x))?)))
        .collect()
}

fn full_inductive(
    spaces: Vec<FinSpace>,
    maps: Vec<BTreeMap<usize, usize>>,
    tail: TailPolicy,
) -> Result<Cis> {
    let ys = spaces.iter().map(FinSpace::full_set).collect();
    Cis::new(spaces, ys, maps, tail)
}

fn sphere_system(n: usize, tail: TailPolicy) -> Result<Cis> {
    let spaces: Vec<FinSpace> = (0..=n).map(sphere).collect();
    let maps = (0..n)
        .map(|i| inclusion_pairs(&spaces[i], &spaces[i + 1]))
        .collect::<Result<Vec<_>>>()?;
    full_inductive(spaces, maps, tail)
}

fn interval(n: usize) -> FinSpace {
    FinSpace::new(
        vec![format!("l{n}"), format!("m{n}"), format!("r{n}")],
        vec![vec![0, 1], vec![1], vec![2, 1]],
    )
    .expect("valid")
}

fn cap(what: &str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(Error::CapExceeded(format!(
            "{what} = {value}, maximum {max}"
        )));
    }
    Ok(())
}

pub fn build_example(id: GalleryId) -> Result<Cis> {
    match id {
        GalleryId::Identity { base, stages } => {
            cap("stages", stages, MAX_STAGES)?;
            if stages == 0 {
                return Err(Error::Malformed("at least one stage".into()));
            }
            if let BaseSpace::Discrete(n) = base {
                cap("discrete points", n, 8)?;
                if n == 0 {
                    return Err(Error::Malformed("base space must be nonempty".into()));
                }
            }
            let x = base.build();
            let id: BTreeMap<usize, usize> = (0..x.len()).map(|k| (k, k)).collect();
            full_inductive(vec![x; stages], vec![id; stages - 1], TailPolicy::Cutoff)
        }
        GalleryId::SphereChain(n) => {
            cap("sphere dimension", n, MAX_SPHERE)?;
            sphere_system(n, TailPolicy::Cutoff)
        }
        GalleryId::StationarySphere(n) => {
            cap("sphere dimension", n, MAX_SPHERE)?;
            sphere_system(n, TailPolicy::Stationary { n0: n })
        }
        GalleryId::TorusChain(n) => {
            cap("torus dimension", n, MAX_TORUS)?;
            if n == 0 {
                return Err(Error::Malformed("torus chain starts at dimension 1".into()));
            }
            let spaces: Vec<FinSpace> = (1..=n).map(torus).collect();
            let c = circle();
            let a = c.index_of("a")?;
            // x ↦ (x, a); `a` is a closed point of the circle.
            let maps = (0..n - 1)
                .map(|i| (0..spaces[i].len()).map(|x| (x, x * c.len() + a)).collect())
                .collect();
            full_inductive(spaces, maps, TailPolicy::Cutoff)
        }
        GalleryId::IntervalChain(n) => {
            cap("stages", n, MAX_STAGES)?;
            if n == 0 {
                return Err(Error::Malformed("at least one stage".into()));
            }
            let spaces: Vec<FinSpace> = (0..n).map(interval).collect();
            let ys = (0..n).map(|_| PointSet::singleton(3, 2)).collect();
            let maps = (0..n - 1).map(|_| BTreeMap::from([(2, 0)])).collect();
            Cis::new(spaces, ys, maps, TailPolicy::Cutoff)
        }
        GalleryId::NonSemicomponible => {
            let ids = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
            let map = |a: &str, b: &str| BTreeMap::from([(a.to_string(), b.to_string())]);
            Cis::from_ids(
                vec![
                    sierpinski(),
                    FinSpace::discrete(["c", "d"]),
                    FinSpace::point("e"),
                ],
                &[ids(&["b"]), ids(&["c"]), ids(&["e"])],
                &[map("b", "d"), map("c", "e")],
                TailPolicy::Cutoff,
            )
        }
    }
}

/// A system of one-point stages with identity gluing, shaped like `c`.
pub fn point_system(c: &Cis) -> Result<Cis> {
    let spaces = vec![FinSpace::point("*"); c.len()];
    let maps = vec![BTreeMap::from([(0, 0)]); c.len() - 1];
    full_inductive(spaces, maps, c.tail())
}

/// The morphism sending every stage of `c` to the point.
pub fn collapse_morphism(c: &Cis) -> Result<CisMorphism> {
    let target = point_system(c)?;
    let maps = (0..c.len())
        .map(|i| CtsMap::constant(c.space(i)?, target.space(i)?, 0))
        .collect::<Result<Vec<_>>>()?;
    CisMorphism::new(c.clone(), target, maps)
}

/// Object `k` (for `k = 0..=n`) has stages `S^min(i,k)` for `i = 0..=n`,
/// joined by inclusions; arrows are stagewise inclusions.
pub fn sphere_truncation_diagram(n: usize) -> Result<CisDiagram> {
    cap("sphere dimension", n, MAX_SPHERE)?;
    let objects = (0..=n)
        .map(|k| {
            let spaces: Vec<FinSpace> = (0..=n).map(|i| sphere(i.min(k))).collect();
            let maps = (0..n)
                .map(|i| inclusion_pairs(&spaces[i], &spaces[i + 1]))
                .collect::<Result<Vec<_>>>()?;
            full_inductive(spaces, maps, TailPolicy::Cutoff)
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows = (0..n)
        .map(|k| {
            let (a, b) = (&objects[k], &objects[k + 1]);
            let maps = (0..=n)
                .map(|i| {
                    let (x, z) = (a.space(i)?, b.space(i)?);
                    let img = (0..x.len())
                        .map(|p| z.index_of(x.id(p)))
                        .collect::<Result<Vec<_>>>()?;
                    CtsMap::new(x.clone(), z.clone(), img)
                })
                .collect::<Result<Vec<_>>>()?;
            CisMorphism::new(a.clone(), b.clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    CisDiagram::new(objects, arrows)
}

/// `c` followed by its collapse onto the point system.
pub fn collapse_diagram(c: &Cis) -> Result<CisDiagram> {
    let collapse_map = collapse_morphism(c)?;
    CisDiagram::new(
        vec![c.clone(), collapse_map.target().clone()],
        vec![collapse_map],
    )
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Completed {
        /// Topologies consistent with the stage embeddings that were tried.
        examined: usize,
        /// Of those, how many satisfy the limit axioms.
        limits: usize,
        /// Limits without the weak topology.
        found: Vec<LimitSpace>,
    },
    Undecided {
        points: usize,
        cap: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Unknown,
    Yes,
    No,
}

struct Search<'a> {
    c: &'a Cis,
    base: &'a LimitSpace,
    n: usize,
    /// `rel[y][x]` says whether `y ≤ x`.
    rel: Vec<Vec<Rel>>,
    free: Vec<(usize, usize)>,
    examined: usize,
    limits: usize,
    found: Vec<LimitSpace>,
}

impl Search<'_> {
    fn consistent_after(&self, y: usize, x: usize) -> bool {
        let r = &self.rel;
        match r[y][x] {
            Rel::Yes => (0..self.n).all(|w| {
                !(r[x][w] == Rel::Yes && r[y][w] == Rel::No)
                    && !(r[w][y] == Rel::Yes && r[w][x] == Rel::No)
            }),
            Rel::No => (0..self.n).all(|w| !(r[y][w] == Rel::Yes && r[w][x] == Rel::Yes)),
            Rel::Unknown => true,
        }
    }

    fn run(&mut self, k: usize) -> Result<()> {
        if k == self.free.len() {
            return self.evaluate();
        }
        let (y, x) = self.free[k];
        for choice in [Rel::No, Rel::Yes] {
            self.rel[y][x] = choice;
            if self.consistent_after(y, x) {
                self.run(k + 1)?;
            }
        }
        self.rel[y][x] = Rel::Unknown;
        Ok(())
    }

    fn evaluate(&mut self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if self.rel[a][b] != Rel::Yes {
                    continue;
                }
                for d in 0..n {
                    if self.rel[b][d] == Rel::Yes && self.rel[a][d] != Rel::Yes {
                        return Ok(());
                    }
                }
            }
        }
        self.examined += 1;
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|y| (0..n).map(move |x| (y, x)))
            .filter(|&(y, x)| y != x && self.rel[y][x] == Rel::Yes)
            .collect();
        let space = FinSpace::from_relation(self.base.space().ids().to_vec(), &edges)?;
        let candidate = self.base.with_topology(space)?;
        if !verify_limit_axioms(self.c, &candidate)?.passes() {
            return Ok(());
        }
        self.limits += 1;
        if !has_weak_topology(self.c, &candidate)? {
            self.found.push(candidate);
        }
        Ok(())
    }
}

/// Tries every topology on the fundamental limit's points that keeps the
/// stage maps, and returns the limit spaces among them whose topology is
/// not the weak one.
pub fn search_non_fundamental(c: &Cis, cap: usize) -> Result<SearchOutcome> {
    if cap > MAX_SEARCH_POINTS {
        return Err(Error::CapExceeded(format!(
            "search cap {cap}, maximum {MAX_SEARCH_POINTS}"
        )));
    }
    let base = build_fundamental(c)?;
    let n = base.space().len();
    if n > cap {
        return Ok(SearchOutcome::Undecided { points: n, cap });
    }
    let mut rel = vec![vec![Rel::Unknown; n]; n];
    for (x, row) in rel.iter_mut().enumerate() {
        row[x] = Rel::Yes;
    }
    // Pairs inside one image are fixed by the embedding.
    for embedding in base.embeddings() {
        let src = embedding.source();
        for a in 0..src.len() {
            for b in 0..src.len() {
                let (y, x) = (embedding.apply(a), embedding.apply(b));
                let want = if src.leq(a, b) { Rel::Yes } else { Rel::No };
                match rel[y][x] {
                    Rel::Unknown => rel[y][x] = want,
                    have if have == want => {}
                    _ => {
                        return Ok(SearchOutcome::Completed {
                            examined: 0,
                            limits: 0,
                            found: Vec::new(),
                        })
                    }
                }
            }
        }
    }
    let free = (0..n)
        .flat_map(|y| (0..n).map(move |x| (y, x)))
        .filter(|&(y, x)| rel[y][x] == Rel::Unknown)
        .collect();
    let mut s = Search {
        c,
        base: &base,
        n,
        rel,
        free,
        examined: 0,
        limits: 0,
        found: Vec::new(),
    };
    s.run(0)?;
    Ok(SearchOutcome::Completed {
        examined: s.examined,
        limits: s.limits,
        found: s.found,
    })
}
