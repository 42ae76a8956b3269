#![allow(dead_code)]

use cis_core::cis::Cis;
use cis_core::fuzz::{random_cis, rng, GenConfig};
use cis_core::{FinSpace, PointSet};
use proptest::prelude::*;

/// Preorder on up to `max` points from a random edge set.
pub fn arb_space(max: usize) -> impl Strategy<Value = FinSpace> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| x != y && bits[x * n + y])
                .collect();
            FinSpace::from_relation((0..n).map(|k| format!("x{k}")).collect(), &edges).unwrap()
        })
    })
}

pub fn set_from_mask(n: usize, mask: u32) -> PointSet {
    PointSet::from_indices(n, (0..n).filter(|&x| mask >> x & 1 == 1))
}

pub fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (0..1u32 << n).map(move |m| set_from_mask(n, m))
}

/// Open by definition: an up-set of the specialization order.
pub fn open_by_definition(s: &FinSpace, a: &PointSet) -> bool {
    a.iter()
        .all(|x| (0..s.len()).all(|y| !s.leq(x, y) || a.contains(y)))
}

pub fn seeded_cis(seed: u64, cfg: &GenConfig) -> Cis {
    random_cis(&mut rng(seed), cfg)
}

/// Rank over GF(2) by plain elimination on boolean rows.
pub fn rank_gf2(mut rows: Vec<Vec<bool>>) -> usize {
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

/// Betti numbers of a complex given by its facets, all faces generated here.
pub fn betti_of_facets(facets: &[Vec<usize>], pmax: usize) -> Vec<usize> {
    use std::collections::BTreeSet;
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); pmax + 2];
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        let k = f.len();
        for mask in 1u32..1 << k {
            let face: Vec<usize> = (0..k)
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
    let boundary_rank = |p: usize| -> usize {
        if p == 0 || lists[p].is_empty() {
            return 0;
        }
        let rows = lists[p]
            .iter()
            .map(|s| {
                lists[p - 1]
                    .iter()
                    .map(|t| t.iter().all(|v| s.contains(v)))
                    .collect()
            })
            .collect();
        rank_gf2(rows)
    };
    (0..=pmax)
        .map(|p| lists[p].len() - boundary_rank(p) - boundary_rank(p + 1))
        .collect()
}
