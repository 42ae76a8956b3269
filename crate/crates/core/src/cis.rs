//! Closed injective systems `{X_i, Y_i, f_i}` over a finite run of stages.
//!
//! Stage `i` holds a space `X_i`, a closed set `Y_i ⊆ X_i` and, except on the
//! last stage, a gluing map `f_i: Y_i → X_{i+1}`. The tail policy says what
//! lies past the last represented stage:
//!
//! * `Stationary { n0 }`: the last stage is `n0`, `Y_{n0} = X_{n0}`, and
//!   every index `n ≥ n0` denotes stage `n0` with `f_n` the identity.
//! * `Cutoff`: nothing lies past the last stage. Statements that quantify
//!   over infinitely many indices are evaluated on represented indices only.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{CtsMap, FinSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    Stationary { n0: usize },
    Cutoff,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Stage {
    space: FinSpace,
    gluing_set: PointSet,
    /// Defined exactly on `gluing_set`; absent on the last stage.
    glue: Option<Vec<Option<usize>>>,
}

impl Stage {
    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn gluing_set(&self) -> &PointSet {
        &self.gluing_set
    }
}

impl fmt::Debug for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Stage")
            .field("space", &self.space)
            .field("gluing_set", &self.space.ids_of(&self.gluing_set))
            .field("glue", &self.glue)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cis {
    stages: Vec<Stage>,
    tail: TailPolicy,
}

impl Cis {
    /// `maps[i]` is `f_i` as index pairs `(y, f_i(y))`; there is one map per
    /// consecutive pair of stages.
    pub fn new(
        spaces: Vec<FinSpace>,
        ys: Vec<PointSet>,
        maps: Vec<BTreeMap<usize, usize>>,
        tail: TailPolicy,
    ) -> Result<Cis> {
        let n = spaces.len();
        if n == 0 {
            return Err(Error::Malformed("a system needs at least one stage".into()));
        }
        if ys.len() != n {
            return Err(Error::Malformed(format!(
                "{n} stages but {} Y sets",
                ys.len()
            )));
        }
        if maps.len() + 1 != n {
            return Err(Error::Malformed(format!(
                "{n} stages need {} gluing maps, got {}",
                n - 1,
                maps.len()
            )));
        }
        if let TailPolicy::Stationary { n0 } = tail {
            if n0 + 1 != n {
                return Err(Error::Malformed(format!(
                    "stationary index {n0} must be the last stage ({})",
                    n - 1
                )));
            }
        }
        let mut stages = Vec::with_capacity(n);
        for (i, (space, y)) in spaces.iter().zip(ys).enumerate() {
            if y.universe() != space.len() {
                return Err(Error::Malformed(format!("Y_{i} is not a subset of X_{i}")));
            }
            let glue = match maps.get(i) {
                None => None,
                Some(m) => {
                    let next = spaces[i + 1].len();
                    let mut g = vec![None; space.len()];
                    for (&from, &to) in m {
                        if from >= space.len() || !y.contains(from) {
                            return Err(Error::Malformed(format!(
                                "f_{i} is defined outside Y_{i}"
                            )));
                        }
                        if to >= next {
                            return Err(Error::IndexOutOfRange {
                                index: to,
                                size: next,
                            });
                        }
                        g[from] = Some(to);
                    }
                    if let Some(x) = y.iter().find(|&x| g[x].is_none()) {
                        return Err(Error::NotTotal(space.id(x).to_string()));
                    }
                    Some(g)
                }
            };
            stages.push(Stage {
                space: space.clone(),
                gluing_set: y,
                glue,
            });
        }
        Ok(Cis { stages, tail })
    }

    /// Builds a system from ids: `ys[i]` lists ids of `X_i`, `maps[i]` sends
    /// ids of `X_i` to ids of `X_{i+1}`.
    pub fn from_ids(
        spaces: Vec<FinSpace>,
        ys: &[Vec<String>],
        maps: &[BTreeMap<String, String>],
        tail: TailPolicy,
    ) -> Result<Cis> {
        if ys.len() != spaces.len() || maps.len() + 1 != spaces.len() {
            return Err(Error::Malformed("stage data lengths disagree".into()));
        }
        let ysets = spaces
            .iter()
            .zip(ys)
            .map(|(s, y)| s.set_of_ids(y))
            .collect::<Result<Vec<_>>>()?;
        let imaps = maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.iter()
                    .map(|(a, b)| Ok((spaces[i].index_of(a)?, spaces[i + 1].index_of(b)?)))
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Cis::new(spaces, ysets, imaps, tail)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    /// Number of represented stages.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn last(&self) -> usize {
        self.stages.len() - 1
    }

    /// Maps an index, possibly virtual, to its represented stage.
    pub fn resolve(&self, i: usize) -> Result<usize> {
        match self.tail {
            TailPolicy::Stationary { n0 } => Ok(i.min(n0)),
            TailPolicy::Cutoff if i < self.stages.len() => Ok(i),
            TailPolicy::Cutoff => Err(Error::StageOutOfRange {
                index: i,
                stages: self.stages.len(),
            }),
        }
    }

    pub fn space(&self, i: usize) -> Result<&FinSpace> {
        Ok(&self.stages[self.resolve(i)?].space)
    }

    pub fn gluing_set(&self, i: usize) -> Result<&PointSet> {
        Ok(&self.stages[self.resolve(i)?].gluing_set)
    }

    /// Whether `f_i` exists (virtual identities included).
    pub fn has_glue(&self, i: usize) -> bool {
        match self.tail {
            TailPolicy::Stationary { .. } => true,
            TailPolicy::Cutoff => i + 1 < self.stages.len(),
        }
    }

    /// `f_i(x)`, or `None` when `x ∉ Y_i`.
    pub fn glue(&self, i: usize, x: usize) -> Result<Option<usize>> {
        if !self.has_glue(i) {
            return Err(Error::NoGluing(i));
        }
        let r = self.resolve(i)?;
        let stage = &self.stages[r];
        match &stage.glue {
            Some(g) => Ok(g[x]),
            // Stationary tail: identity on X_{n0} = Y_{n0}.
            None => Ok(stage.gluing_set.contains(x).then_some(x)),
        }
    }

    /// `f_i` as a map from the subspace `Y_i` into `X_{i+1}`.
    pub fn gluing_map(&self, i: usize) -> Result<CtsMap> {
        let x = self.space(i)?;
        let y = self.gluing_set(i)?;
        let (sub, _) = x.subspace(y);
        let next = self.space(i + 1)?.clone();
        let image = y
            .iter()
            .map(|p| self.glue(i, p).map(|t| t.expect("glue is defined on Y")))
            .collect::<Result<Vec<_>>>()?;
        CtsMap::new(sub, next, image)
    }

    /// Represented stages of an equivalent system truncated to `count` stages.
    pub fn with_tail(&self, count: usize, tail: TailPolicy) -> Result<Cis> {
        let spaces = (0..count)
            .map(|i| self.space(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        let ys = (0..count)
            .map(|i| self.gluing_set(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        let maps = (0..count.saturating_sub(1))
            .map(|i| {
                let y = self.gluing_set(i)?;
                y.iter()
                    .map(|p| Ok((p, self.glue(i, p)?.expect("glue is defined on Y"))))
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Cis::new(spaces, ys, maps, tail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    XNonempty,
    YClosed,
    FContinuous,
    FClosed,
    FInjective,
    StationaryYEqualsX,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::XNonempty => "X nonempty",
            Clause::YClosed => "Y closed",
            Clause::FContinuous => "f continuous",
            Clause::FClosed => "f closed",
            Clause::FInjective => "f injective",
            Clause::StationaryYEqualsX => "stationary Y = X",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFailure {
    pub stage: usize,
    pub clause: Clause,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<StageFailure>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_failure(&self, stage: usize, clause: Clause) -> bool {
        self.failures
            .iter()
            .any(|f| f.stage == stage && f.clause == clause)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.is_valid())?;
        for fail in &self.failures {
            writeln!(
                f,
                "FAIL stage {}: {} ({})",
                fail.stage, fail.clause, fail.detail
            )?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

pub fn validate_cis(c: &Cis) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut fail = |stage, clause, detail: String| {
        report.failures.push(StageFailure {
            stage,
            clause,
            detail,
        })
    };
    for (i, stage) in c.stages.iter().enumerate() {
        let x = &stage.space;
        if x.is_empty() {
            fail(i, Clause::XNonempty, "X is empty".into());
        }
        if !x.is_closed(&stage.gluing_set) {
            let cl = x.closure(&stage.gluing_set);
            let extra = x.ids_of(&cl.difference(&stage.gluing_set));
            fail(i, Clause::YClosed, format!("closure adds {extra:?}"));
        }
        if stage.glue.is_some() {
            let f = c.gluing_map(i).expect("represented gluing map");
            let p = f.profile();
            if !p.continuous {
                fail(i, Clause::FContinuous, "f is not continuous on Y".into());
            }
            if !p.closed {
                fail(i, Clause::FClosed, "f is not a closed map".into());
            }
            if !p.injective {
                fail(i, Clause::FInjective, "f identifies two points of Y".into());
            }
        }
    }
    if let TailPolicy::Stationary { n0 } = c.tail {
        let stage = &c.stages[n0];
        if stage.gluing_set.len() != stage.space.len() {
            fail(
                n0,
                Clause::StationaryYEqualsX,
                "Y_n0 is a proper subset".into(),
            );
        }
    }
    for (i, stage) in c.stages.iter().enumerate() {
        if stage.gluing_set.is_empty() && stage.glue.is_some() {
            report
                .notes
                .push(format!("stage {i}: Y is empty, f_{i} is the empty map"));
        }
    }
    if c.tail == TailPolicy::Cutoff {
        report
            .notes
            .push("cutoff tail: infinite-index statements are truncation-relative".into());
    }
    report
}

/// `Y_{i,j}` (inside `X_i`) and `f_{i,j-1}` restricted to it (into `X_j`),
/// for `i ≤ j`. With `i = j` this is `Y_i` and its inclusion.
fn domain_and_transport(c: &Cis, i: usize, j: usize) -> Result<(PointSet, Vec<Option<usize>>)> {
    let stage_space = c.space(i)?;
    let mut domain = c.gluing_set(i)?.clone();
    let mut cur: Vec<Option<usize>> = (0..stage_space.len())
        .map(|x| domain.contains(x).then_some(x))
        .collect();
    for k in i..j {
        let yk1 = c.gluing_set(k + 1)?;
        for (x, slot) in cur.iter_mut().enumerate() {
            if let Some(p) = *slot {
                let q = c.glue(k, p)?.expect("transported points lie in Y");
                if yk1.contains(q) {
                    *slot = Some(q);
                } else {
                    *slot = None;
                    domain.remove(x);
                }
            }
        }
    }
    Ok((domain, cur))
}

pub fn semicomponible(c: &Cis, i: usize, j: usize) -> Result<bool> {
    if i > j {
        return Err(Error::Mismatch(format!(
            "semicomponible needs i ≤ j, got {i} > {j}"
        )));
    }
    c.resolve(j)?;
    if i == j {
        return Ok(true);
    }
    Ok(!domain_and_transport(c, i, j)?.0.is_empty())
}

/// `f_{i,j}: Y_{i,j} → X_{j+1}`.
#[derive(Debug, Clone)]
pub struct CompositeInjection {
    pub i: usize,
    pub j: usize,
    source: FinSpace,
    target: FinSpace,
    domain: PointSet,
    image: Vec<Option<usize>>,
}

impl CompositeInjection {
    /// `Y_{i,j}` as a subset of `X_i`.
    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.image[x]
    }

    /// `f_{i,j}(Y_{i,j})` inside `X_{j+1}`.
    pub fn image_set(&self) -> PointSet {
        PointSet::from_indices(self.target.len(), self.image.iter().flatten().copied())
    }

    /// As a map from the subspace `Y_{i,j}`.
    pub fn as_map(&self) -> CtsMap {
        let (sub, _) = self.source.subspace(&self.domain);
        let img = self
            .domain
            .iter()
            .map(|x| self.image[x].expect("defined on domain"))
            .collect();
        CtsMap::new(sub, self.target.clone(), img).expect("composite is total on its domain")
    }
}

pub fn composite(c: &Cis, i: usize, j: usize) -> Result<CompositeInjection> {
    if i > j {
        return Err(Error::Mismatch(format!(
            "composite needs i ≤ j, got {i} > {j}"
        )));
    }
    if !c.has_glue(j) {
        return Err(Error::NoGluing(j));
    }
    let (domain, cur) = domain_and_transport(c, i, j)?;
    let image = cur
        .iter()
        .map(|p| match p {
            Some(p) => c.glue(j, *p),
            None => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompositeInjection {
        i,
        j,
        source: c.space(i)?.clone(),
        target: c.space(j + 1)?.clone(),
        domain,
        image,
    })
}

/// For `i < j`: the pair `(Y_{i,j-1}, f_{i,j-1})` that governs how `X_i`
/// and `X_j` overlap in a limit space.
pub fn overlap_data(c: &Cis, i: usize, j: usize) -> Result<CompositeInjection> {
    if i >= j {
        return Err(Error::Mismatch(format!(
            "overlap data needs i < j, got {i}, {j}"
        )));
    }
    composite(c, i, j - 1)
}

pub fn is_inductive(c: &Cis) -> bool {
    c.stages.iter().all(|s| s.gluing_set.len() == s.space.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteSemicomponibility {
    pub value: bool,
    /// The verdict only speaks about represented stages.
    pub truncation_relative: bool,
}

pub fn is_finitely_semicomponible(c: &Cis) -> FiniteSemicomponibility {
    match c.tail {
        TailPolicy::Cutoff => FiniteSemicomponibility {
            value: true,
            truncation_relative: true,
        },
        TailPolicy::Stationary { n0 } => {
            // f_{n0+1} onwards are identities, so any chain reaching n0 + 1
            // continues forever.
            let infinite = (0..=n0).any(|i| semicomponible(c, i, n0 + 1).unwrap_or(false));
            FiniteSemicomponibility {
                value: !infinite,
                truncation_relative: false,
            }
        }
    }
}

pub fn is_stationary(c: &Cis) -> Option<usize> {
    match c.tail {
        TailPolicy::Stationary { n0 } => {
            let s = &c.stages[n0];
            (s.gluing_set.len() == s.space.len()).then_some(n0)
        }
        TailPolicy::Cutoff => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FinSpace {
        FinSpace::new(vec!["a".into(), "b".into()], vec![vec![0], vec![0, 1]]).unwrap()
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// X_0 = Sierpiński {a,b}, Y_0 = {b}, f_0(b) = d; X_1 = {c,d} discrete,
    /// Y_1 = {c}, f_1(c) = e; X_2 = {e}.
    fn three_stage() -> Cis {
        Cis::from_ids(
            vec![
                sierpinski(),
                FinSpace::discrete(["c", "d"]),
                FinSpace::point("e"),
            ],
            &[ids(&["b"]), ids(&["c"]), ids(&["e"])],
            &[map(&[("b", "d")]), map(&[("c", "e")])],
            TailPolicy::Cutoff,
        )
        .unwrap()
    }

    fn identity_system(x: FinSpace, n: usize) -> Cis {
        let all: Vec<String> = x.ids().to_vec();
        let id: BTreeMap<String, String> = all.iter().map(|p| (p.clone(), p.clone())).collect();
        Cis::from_ids(
            vec![x; n],
            &vec![all; n],
            &vec![id; n - 1],
            TailPolicy::Cutoff,
        )
        .unwrap()
    }

    #[test]
    fn identity_system_is_valid_and_inductive() {
        let c = identity_system(sierpinski(), 3);
        assert!(validate_cis(&c).is_valid());
        assert!(is_inductive(&c));
        for i in 0..3 {
            for j in i..3 {
                assert!(semicomponible(&c, i, j).unwrap());
            }
        }
        let comp = composite(&c, 0, 1).unwrap();
        assert_eq!(comp.domain().len(), 2);
        assert!(comp.as_map().is_homeomorphism());
    }

    #[test]
    fn open_y_is_rejected() {
        let c = Cis::from_ids(
            vec![sierpinski(), FinSpace::point("e")],
            &[ids(&["a"]), ids(&["e"])],
            &[map(&[("a", "e")])],
            TailPolicy::Cutoff,
        )
        .unwrap();
        let r = validate_cis(&c);
        assert!(!r.is_valid());
        assert!(r.has_failure(0, Clause::YClosed));
    }

    #[test]
    fn non_injective_glue_is_reported() {
        let c = Cis::from_ids(
            vec![FinSpace::discrete(["u", "v"]), FinSpace::point("e")],
            &[ids(&["u", "v"]), ids(&["e"])],
            &[map(&[("u", "e"), ("v", "e")])],
            TailPolicy::Cutoff,
        )
        .unwrap();
        assert!(validate_cis(&c).has_failure(0, Clause::FInjective));
    }

    #[test]
    fn structural_errors_are_hard() {
        let err = Cis::from_ids(
            vec![sierpinski(), FinSpace::point("e")],
            &[ids(&["b"]), ids(&["e"])],
            &[map(&[("a", "e")])],
            TailPolicy::Cutoff,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        let err = Cis::from_ids(
            vec![sierpinski(), FinSpace::point("e")],
            &[ids(&["b"]), ids(&["e"])],
            &[map(&[("b", "e")])],
            TailPolicy::Stationary { n0: 0 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn three_stage_semicomponibility() {
        let c = three_stage();
        assert!(validate_cis(&c).is_valid());
        assert!(!semicomponible(&c, 0, 1).unwrap());
        assert!(!semicomponible(&c, 0, 2).unwrap());
        assert!(semicomponible(&c, 1, 2).unwrap());
        assert!(semicomponible(&c, 0, 0).unwrap());
        assert!(composite(&c, 0, 1).unwrap().domain().is_empty());
        assert!(matches!(
            semicomponible(&c, 0, 3),
            Err(Error::StageOutOfRange { .. })
        ));
        assert!(matches!(composite(&c, 0, 2), Err(Error::NoGluing(2))));
        assert!(!is_inductive(&c));
        assert_eq!(is_stationary(&c), None);
        let fs = is_finitely_semicomponible(&c);
        assert!(fs.value && fs.truncation_relative);
    }

    #[test]
    fn stationary_identity_tail() {
        let x = sierpinski();
        let all = x.ids().to_vec();
        let c = Cis::from_ids(vec![x], &[all], &[], TailPolicy::Stationary { n0: 0 }).unwrap();
        assert!(validate_cis(&c).is_valid());
        assert_eq!(is_stationary(&c), Some(0));
        assert!(semicomponible(&c, 0, 7).unwrap());
        let comp = composite(&c, 0, 5).unwrap();
        assert_eq!(comp.domain().len(), 2);
        assert_eq!(comp.apply(1), Some(1));
        assert!(!is_finitely_semicomponible(&c).value);
    }

    #[test]
    fn stationary_requires_full_y() {
        let x = sierpinski();
        let c = Cis::from_ids(
            vec![x],
            &[ids(&["b"])],
            &[],
            TailPolicy::Stationary { n0: 0 },
        )
        .unwrap();
        assert!(validate_cis(&c).has_failure(0, Clause::StationaryYEqualsX));
        assert_eq!(is_stationary(&c), None);
    }
}
