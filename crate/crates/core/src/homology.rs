//! Homology of finite spaces over GF(2), computed on order complexes, and
//! module sequences built from it.
//!
//! The homology of a finite space is taken to be the simplicial homology of
//! the order complex of its T0 quotient. Cohomology over a field is the
//! dual, so it is obtained by transposing.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::cis::{is_inductive, Cis};
use crate::error::{Error, Result};
use crate::gf2::{EchelonBasis, Gf2Matrix};
use crate::limit::build_fundamental;
use crate::space::{components, CtsMap, FinSpace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    /// `simplices[p]` lists the p-simplices as sorted vertex indices, in
    /// lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Closes the given simplices under faces.
    pub fn from_simplices(vertices: Vec<String>, generators: &[Vec<usize>]) -> Result<Self> {
        let n = vertices.len();
        let mut all: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        for v in 0..n {
            all.insert(vec![v]);
        }
        for g in generators {
            let mut s = g.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    size: n,
                });
            }
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| s[b])
                    .collect();
                all.insert(face);
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut simplices = vec![Vec::new(); top];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        for layer in &mut simplices {
            layer.sort();
        }
        let index = simplices
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(k, s)| (s.clone(), k))
                    .collect()
            })
            .collect();
        Ok(SimplicialComplex {
            vertices,
            simplices,
            index,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Highest dimension with a simplex, or `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    pub fn position(&self, simplex: &[usize]) -> Option<usize> {
        let p = simplex.len().checked_sub(1)?;
        self.index.get(p)?.get(simplex).copied()
    }

    /// `∂_p: C_p → C_{p-1}`, of shape `count(p-1) × count(p)`; zero rows
    /// for `p = 0`.
    pub fn boundary(&self, p: usize) -> Gf2Matrix {
        let cols = self.count(p);
        if p == 0 {
            return Gf2Matrix::zeros(0, cols);
        }
        let mut m = Gf2Matrix::zeros(self.count(p - 1), cols);
        for (c, s) in self.simplices(p).iter().enumerate() {
            for skip in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let r = self.position(&face).expect("complex is closed under faces");
                m.set(r, c, true);
            }
        }
        m
    }

    /// Alternating count of simplices.
    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|p| if p % 2 == 0 { 1 } else { -1 } * self.count(p) as i64)
            .sum()
    }
}

/// Classes of points with equal minimal open sets, ordered by least member,
/// and the class of each point.
fn t0_classes(space: &FinSpace) -> (Vec<usize>, Vec<usize>) {
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![0; space.len()];
    for (x, class) in class_of.iter_mut().enumerate() {
        match reps
            .iter()
            .position(|&r| space.min_open(r) == space.min_open(x))
        {
            Some(k) => *class = k,
            None => {
                *class = reps.len();
                reps.push(x);
            }
        }
    }
    (reps, class_of)
}

/// Order complex of the T0 quotient, and the vertex of each point.
///
/// Vertices are named by the least point of their class. Simplices are the
/// chains of the specialization order.
pub fn order_complex_with_vertices(space: &FinSpace) -> (SimplicialComplex, Vec<usize>) {
    let (reps, class_of) = t0_classes(space);
    let k = reps.len();
    // below[a] holds the classes strictly below class a.
    let below: Vec<Vec<usize>> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a && space.leq(reps[b], reps[a]))
                .collect()
        })
        .collect();
    let mut maximal_chains = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..k).map(|a| vec![a]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().expect("nonempty chain");
        if below[top].is_empty() {
            maximal_chains.push(chain);
            continue;
        }
        for &b in &below[top] {
            let mut next = chain.clone();
            next.push(b);
            stack.push(next);
        }
    }
    let names = reps.iter().map(|&r| space.id(r).to_string()).collect();
    let complex =
        SimplicialComplex::from_simplices(names, &maximal_chains).expect("vertices are in range");
    (complex, class_of)
}

pub fn order_complex(space: &FinSpace) -> SimplicialComplex {
    order_complex_with_vertices(space).0
}

/// Mod 2 Betti numbers `b_0..=b_pmax`.
pub fn betti_mod2(k: &SimplicialComplex, pmax: usize) -> Vec<usize> {
    (0..=pmax)
        .map(|p| {
            let n = k.count(p);
            let rank_d = if p == 0 { 0 } else { k.boundary(p).rank() };
            let rank_up = k.boundary(p + 1).rank();
            n - rank_d - rank_up
        })
        .collect()
}

/// Mod 2 cohomology dimensions `0..=pmax`, from the coboundaries
/// `δ_p = ∂_{p+1}^T` rather than from the Betti numbers.
pub fn cohomology_mod2(k: &SimplicialComplex, pmax: usize) -> Vec<usize> {
    (0..=pmax)
        .map(|p| {
            let delta = k.boundary(p + 1).transpose();
            let cocycles = delta.kernel().len();
            let coboundaries = if p == 0 {
                0
            } else {
                k.boundary(p).transpose().rank()
            };
            cocycles - coboundaries
        })
        .collect()
}

pub fn h0_rank(space: &FinSpace) -> usize {
    components(space).len()
}

/// Chosen homology bases of one space, up to a fixed degree.
#[derive(Debug, Clone)]
pub struct SpaceHomology {
    complex: SimplicialComplex,
    vertex_of: Vec<usize>,
    /// Per degree: cycle representatives followed by a boundary basis, as
    /// columns, and how many leading columns are representatives.
    frames: Vec<(Gf2Matrix, usize)>,
}

impl SpaceHomology {
    pub fn new(space: &FinSpace, pmax: usize) -> Self {
        let (complex, vertex_of) = order_complex_with_vertices(space);
        let frames = (0..=pmax).map(|p| homology_frame(&complex, p)).collect();
        SpaceHomology {
            complex,
            vertex_of,
            frames,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self, p: usize) -> usize {
        self.frames[p].1
    }

    pub fn pmax(&self) -> usize {
        self.frames.len() - 1
    }

    /// Coordinates of the classes of the given cycles, as columns.
    fn coordinates(&self, p: usize, cycles: &Gf2Matrix) -> Gf2Matrix {
        let (frame, reps) = &self.frames[p];
        let x = frame
            .solve(cycles)
            .expect("shapes agree")
            .expect("every cycle lies in the span of the frame");
        let mut out = Gf2Matrix::zeros(*reps, cycles.cols());
        for r in 0..*reps {
            for c in 0..cycles.cols() {
                if x.get(r, c) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }
}

fn homology_frame(k: &SimplicialComplex, p: usize) -> (Gf2Matrix, usize) {
    let n = k.count(p);
    let cycles = if p == 0 {
        (0..n)
            .map(|v| {
                let mut b = FixedBitSet::with_capacity(n);
                b.insert(v);
                b
            })
            .collect()
    } else {
        k.boundary(p).kernel()
    };
    let up = k.boundary(p + 1);
    let mut echelon = EchelonBasis::new();
    let mut basis: Vec<FixedBitSet> = Vec::new();
    for c in 0..up.cols() {
        let col = up.column(c);
        if echelon.insert(&col) {
            basis.push(col);
        }
    }
    let mut reps: Vec<FixedBitSet> = Vec::new();
    for z in cycles {
        if echelon.insert(&z) {
            reps.push(z);
        }
    }
    let cols: Vec<FixedBitSet> = reps.iter().chain(&basis).cloned().collect();
    (Gf2Matrix::from_columns(n, &cols), reps.len())
}

/// Matrix of `H_p(m)` in the chosen bases of the two spaces.
pub fn induced_matrix_between(
    from: &SpaceHomology,
    to: &SpaceHomology,
    m: &CtsMap,
    p: usize,
) -> Result<Gf2Matrix> {
    if !m.is_continuous() {
        return Err(Error::NotContinuous);
    }
    if p > from.pmax() || p > to.pmax() {
        return Err(Error::Mismatch(format!("degree {p} beyond computed range")));
    }
    // Vertex map of order complexes: class of x goes to class of m(x).
    let mut vmap = vec![usize::MAX; from.complex.vertices.len()];
    for (x, &v) in from.vertex_of.iter().enumerate() {
        vmap[v] = to.vertex_of[m.apply(x)];
    }
    let (frame, reps) = &from.frames[p];
    let n_to = to.complex.count(p);
    let mut pushed = Vec::with_capacity(*reps);
    for r in 0..*reps {
        let mut chain = FixedBitSet::with_capacity(n_to);
        for s in frame.column(r).ones() {
            let mut img: Vec<usize> = from.complex.simplices(p)[s]
                .iter()
                .map(|&v| vmap[v])
                .collect();
            img.sort_unstable();
            img.dedup();
            if img.len() == p + 1 {
                let t = to
                    .complex
                    .position(&img)
                    .expect("order-preserving maps send chains to chains");
                chain.toggle(t);
            }
        }
        pushed.push(chain);
    }
    Ok(to.coordinates(p, &Gf2Matrix::from_columns(n_to, &pushed)))
}

pub fn induced_matrix(m: &CtsMap, p: usize) -> Result<Gf2Matrix> {
    let from = SpaceHomology::new(m.source(), p);
    let to = SpaceHomology::new(m.target(), p);
    induced_matrix_between(&from, &to, m, p)
}

/// Finite-dimensional GF(2) spaces with maps `maps[n]: dims[n] → dims[n+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2ModuleSeq {
    dims: Vec<usize>,
    maps: Vec<Gf2Matrix>,
}

impl Gf2ModuleSeq {
    pub fn new(dims: Vec<usize>, maps: Vec<Gf2Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyList);
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::Mismatch(format!(
                "{} modules need {} maps",
                dims.len(),
                dims.len() - 1
            )));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.cols() != dims[n] || m.rows() != dims[n + 1] {
                return Err(Error::Mismatch(format!(
                    "map {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[n + 1],
                    dims[n]
                )));
            }
        }
        Ok(Gf2ModuleSeq { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Gf2Matrix] {
        &self.maps
    }
}

/// A module with one matrix per term of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleCone {
    pub dim: usize,
    pub legs: Vec<Gf2Matrix>,
}

/// Colimit of a finite chain: the last module, with `ψ_n` the composite of
/// the remaining maps.
pub fn module_colimit(s: &Gf2ModuleSeq) -> ModuleCone {
    let last = s.dims.len() - 1;
    let mut legs = vec![Gf2Matrix::identity(s.dims[last]); s.dims.len()];
    for n in (0..last).rev() {
        legs[n] = legs[n + 1]
            .mul(&s.maps[n])
            .expect("shapes checked at construction");
    }
    ModuleCone {
        dim: s.dims[last],
        legs,
    }
}

/// Limit of the dual sequence `dims[n+1]* → dims[n]*` given by transposes:
/// the dual of the last module, with cone maps into each dual.
pub fn module_limit(s: &Gf2ModuleSeq) -> ModuleCone {
    let last = s.dims.len() - 1;
    let mut legs = vec![Gf2Matrix::identity(s.dims[last]); s.dims.len()];
    for n in (0..last).rev() {
        legs[n] = s.maps[n]
            .transpose()
            .mul(&legs[n + 1])
            .expect("shapes checked at construction");
    }
    ModuleCone {
        dim: s.dims[last],
        legs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub degree: usize,
    /// Cohomology instead of homology.
    pub dual: bool,
    /// Dimension of the (co)homology of the limit space.
    pub limit_dim: usize,
    /// Dimension of the (co)limit module.
    pub module_dim: usize,
    pub exists: bool,
    pub unique: bool,
    pub isomorphism: bool,
    pub comparison: Option<Gf2Matrix>,
}

impl InvarianceReport {
    pub fn passes(&self) -> bool {
        self.exists && self.unique && self.isomorphism && self.limit_dim == self.module_dim
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.dual { "cohomology" } else { "homology" };
        writeln!(f, "{kind} degree {}", self.degree)?;
        writeln!(f, "  limit space dimension: {}", self.limit_dim)?;
        writeln!(f, "  module dimension: {}", self.module_dim)?;
        writeln!(f, "  comparison map exists: {}", self.exists)?;
        writeln!(f, "  unique: {}", self.unique)?;
        writeln!(f, "  isomorphism: {}", self.isomorphism)
    }
}

struct StageData {
    module: Gf2ModuleSeq,
    limit_dim: usize,
    /// `H_p(φ_i)`, shape `limit_dim × dims[i]`.
    embeddings: Vec<Gf2Matrix>,
}

fn stage_data(c: &Cis, p: usize) -> Result<StageData> {
    if !is_inductive(c) {
        return Err(Error::InvalidSystem(
            "invariance needs an inductive system (Y_i = X_i)".into(),
        ));
    }
    let limit = build_fundamental(c)?;
    let stages: Vec<SpaceHomology> = c
        .stages()
        .iter()
        .map(|s| SpaceHomology::new(s.space(), p))
        .collect();
    let top = SpaceHomology::new(limit.space(), p);
    let mut maps = Vec::with_capacity(c.len().saturating_sub(1));
    for i in 0..c.len().saturating_sub(1) {
        let g = c.gluing_map(i)?;
        // Y_i = X_i, so the gluing map's source has the stage's homology.
        let sub = SpaceHomology::new(g.source(), p);
        maps.push(induced_matrix_between(&sub, &stages[i + 1], &g, p)?);
    }
    let dims = stages.iter().map(|s| s.dim(p)).collect();
    let module = Gf2ModuleSeq::new(dims, maps)?;
    let embeddings = limit
        .embeddings()
        .iter()
        .zip(&stages)
        .map(|(embedding, stage)| induced_matrix_between(stage, &top, embedding, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(StageData {
        module,
        limit_dim: top.dim(p),
        embeddings,
    })
}

/// Looks for `comparison: H_p(X) → M` with `ψ_i = comparison ∘ H_p(φ_i)` for every stage.
pub fn functorial_invariance_check(c: &Cis, p: usize) -> Result<InvarianceReport> {
    let data = stage_data(c, p)?;
    let cone = module_colimit(&data.module);
    let embedding_stack =
        Gf2Matrix::hstack(&data.embeddings.iter().collect::<Vec<_>>(), data.limit_dim)?;
    let leg_stack = Gf2Matrix::hstack(&cone.legs.iter().collect::<Vec<_>>(), cone.dim)?;
    // solve the transposed system: stack^T · comparison^T = legs^T
    let sol = embedding_stack.transpose().solve(&leg_stack.transpose())?;
    let comparison = sol.map(|x| x.transpose());
    let unique = embedding_stack.rank() == data.limit_dim;
    let isomorphism = comparison
        .as_ref()
        .is_some_and(|m| m.rows() == m.cols() && m.rank() == m.rows());
    Ok(InvarianceReport {
        degree: p,
        dual: false,
        limit_dim: data.limit_dim,
        module_dim: cone.dim,
        exists: comparison.is_some(),
        unique,
        isomorphism,
        comparison,
    })
}

/// Looks for `comparison: M → H^p(X)` with `ψ_i = H^p(φ_i) ∘ comparison`, where `M` is the
/// limit of the dual sequence.
pub fn counter_functorial_check(c: &Cis, p: usize) -> Result<InvarianceReport> {
    let data = stage_data(c, p)?;
    let cone = module_limit(&data.module);
    let dual_embeddings: Vec<Gf2Matrix> =
        data.embeddings.iter().map(Gf2Matrix::transpose).collect();
    let dual_stack =
        Gf2Matrix::vstack(&dual_embeddings.iter().collect::<Vec<_>>(), data.limit_dim)?;
    let leg_stack = Gf2Matrix::vstack(&cone.legs.iter().collect::<Vec<_>>(), cone.dim)?;
    let comparison = dual_stack.solve(&leg_stack)?;
    let unique = dual_stack.rank() == data.limit_dim;
    let isomorphism = comparison
        .as_ref()
        .is_some_and(|m| m.rows() == m.cols() && m.rank() == m.rows());
    Ok(InvarianceReport {
        degree: p,
        dual: true,
        limit_dim: data.limit_dim,
        module_dim: cone.dim,
        exists: comparison.is_some(),
        unique,
        isomorphism,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FinSpace {
        FinSpace::new(vec!["a".into(), "b".into()], vec![vec![0], vec![0, 1]]).unwrap()
    }

    /// p, q open; U_a = {a,p,q}, U_b = {b,p,q}.
    fn circle() -> FinSpace {
        FinSpace::new(
            vec!["p".into(), "q".into(), "a".into(), "b".into()],
            vec![vec![0], vec![1], vec![2, 0, 1], vec![3, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn small_order_complexes() {
        let pt = order_complex(&FinSpace::point("x"));
        assert_eq!((pt.count(0), pt.count(1)), (1, 0));
        let s = order_complex(&sierpinski());
        assert_eq!((s.count(0), s.count(1)), (2, 1));
        let c = order_complex(&circle());
        assert_eq!((c.count(0), c.count(1), c.count(2)), (4, 4, 0));
        assert_eq!(betti_mod2(&c, 2), vec![1, 1, 0]);
        let ind = order_complex(&FinSpace::indiscrete(["u", "v", "w"]));
        assert_eq!(ind.count(0), 1);
    }

    #[test]
    fn point_and_discrete_h0() {
        assert_eq!(
            betti_mod2(&order_complex(&FinSpace::point("x")), 3),
            vec![1, 0, 0, 0]
        );
        assert_eq!(h0_rank(&FinSpace::discrete(["u", "v"])), 2);
        assert_eq!(h0_rank(&FinSpace::point("x")), 1);
    }

    #[test]
    fn identity_and_constant_induced() {
        let c = circle();
        let id = CtsMap::identity(&c);
        assert_eq!(induced_matrix(&id, 1).unwrap(), Gf2Matrix::identity(1));
        let two = FinSpace::discrete(["u", "v"]);
        let k = CtsMap::constant(&two, &FinSpace::point("x"), 0).unwrap();
        let m0 = induced_matrix(&k, 0).unwrap();
        assert_eq!(m0.to_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn non_continuous_rejected() {
        let s = sierpinski();
        let swap = CtsMap::new(s.clone(), s, vec![1, 0]).unwrap();
        assert_eq!(induced_matrix(&swap, 0), Err(Error::NotContinuous));
    }

    #[test]
    fn colimit_and_limit_are_dual() {
        let a = Gf2Matrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]], 2).unwrap();
        let b = Gf2Matrix::from_rows(&[vec![1, 1, 0]], 3).unwrap();
        let s = Gf2ModuleSeq::new(vec![2, 3, 1], vec![a, b]).unwrap();
        let co = module_colimit(&s);
        let li = module_limit(&s);
        assert_eq!(co.dim, 1);
        for (x, y) in co.legs.iter().zip(&li.legs) {
            assert_eq!(&x.transpose(), y);
        }
    }

    #[test]
    fn zero_map_sequence() {
        let s = Gf2ModuleSeq::new(vec![2, 1], vec![Gf2Matrix::zeros(1, 2)]).unwrap();
        let co = module_colimit(&s);
        assert_eq!(co.dim, 1);
        assert!(co.legs[0].is_zero());
        assert_eq!(co.legs[1], Gf2Matrix::identity(1));
    }
}
