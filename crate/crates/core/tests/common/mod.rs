#![allow(dead_code)] // shared between test targets, each using a subset

//! Shared test helpers: the naive tiling oracle and seeded random data
//! generators. The oracle is deliberately independent of the solver: it
//! re-derives placements from transforms on the fly, keeps piece instances
//! labeled, does no pruning or symmetry breaking, and deduplicates complete
//! partitions at the end.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use chie::lattice::{apply_transform, unit_triangle, Cell, Half, Region, Shape, Transform, D4};
use chie::pieces::PieceSet;

/// Counts distinct partitions of `region` into the pieces of `pieces` by
/// plain exhaustive recursion.
pub fn naive_count(pieces: &PieceSet, region: &Region) -> u64 {
    let mut instances: Vec<Region> = Vec::new();
    for (shape, mult) in pieces.pieces() {
        for _ in 0..*mult {
            instances.push(shape.region());
        }
    }
    if 2 * pieces.total_triangles() != region.len() {
        return 0;
    }
    let mut partitions: BTreeSet<Vec<Vec<Cell>>> = BTreeSet::new();
    let mut used = vec![false; instances.len()];
    let mut placed: Vec<Vec<Cell>> = Vec::new();
    let covered: BTreeSet<Cell> = BTreeSet::new();
    recurse(
        region,
        &instances,
        &mut used,
        &mut placed,
        &mut partitions,
        &covered,
    );
    partitions.len() as u64
}

fn recurse(
    region: &Region,
    instances: &[Region],
    used: &mut Vec<bool>,
    placed: &mut Vec<Vec<Cell>>,
    partitions: &mut BTreeSet<Vec<Vec<Cell>>>,
    covered: &BTreeSet<Cell>,
) {
    let next = region.cells().find(|c| !covered.contains(c));
    let Some(anchor) = next else {
        let mut key = placed.clone();
        key.sort();
        partitions.insert(key);
        return;
    };
    for i in 0..instances.len() {
        if used[i] {
            continue;
        }
        for g in D4::ALL {
            let image = apply_transform(&instances[i], &Transform { g, t: (0, 0) });
            for base in image.cells() {
                if base.q != anchor.q {
                    continue;
                }
                let moved = image.translate(anchor.x - base.x, anchor.y - base.y);
                if moved
                    .cells()
                    .all(|c| region.contains(c) && !covered.contains(&c))
                {
                    let mut now_covered = covered.clone();
                    now_covered.extend(moved.cells());
                    used[i] = true;
                    placed.push(moved.cells().collect());
                    recurse(region, instances, used, placed, partitions, &now_covered);
                    placed.pop();
                    used[i] = false;
                }
            }
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected polyabolo of `k` triangles grown one edge-glued
/// triangle at a time, then knocked out of canonical position by a random
/// transform.
pub fn random_region(rng: &mut ChaCha8Rng, k: usize) -> Region {
    let halves = [Half::NE, Half::NW, Half::SE, Half::SW];
    let mut region = unit_triangle(0, 0, *halves.choose(rng).unwrap());
    while region.triangle_count() < k {
        let (x0, y0, x1, y1) = region.bounds().unwrap();
        let x = rng.gen_range(x0 - 1..=x1 + 1);
        let y = rng.gen_range(y0 - 1..=y1 + 1);
        let half = *halves.choose(rng).unwrap();
        let tri = unit_triangle(x, y, half);
        if !tri.is_disjoint(&region) {
            continue;
        }
        let Ok(grown) = region.union(&tri) else {
            continue;
        };
        let touches = tri
            .cells()
            .flat_map(|c| c.neighbors())
            .any(|n| region.contains(n));
        if touches {
            region = grown;
        }
    }
    let transform = random_transform(rng);
    apply_transform(&region, &transform)
}

pub fn random_transform(rng: &mut ChaCha8Rng) -> Transform {
    Transform {
        g: *D4::ALL.choose(rng).unwrap(),
        t: (rng.gen_range(-10..=10), rng.gen_range(-10..=10)),
    }
}

/// A random piece multiset of polyaboloes of size ≤ 3 with the given
/// triangle total and at most `max_pieces` pieces. Returns `None` when the
/// random walk fails to hit the total exactly.
pub fn random_small_pieceset(
    rng: &mut ChaCha8Rng,
    vocabulary: &[Shape],
    total: usize,
    max_pieces: usize,
) -> Option<PieceSet> {
    let mut left = total;
    let mut picks: Vec<Shape> = Vec::new();
    while left > 0 {
        if picks.len() >= max_pieces {
            return None;
        }
        let choices: Vec<&Shape> = vocabulary
            .iter()
            .filter(|s| s.triangle_count() <= left)
            .collect();
        let pick = (*choices.choose(rng)?).clone();
        left -= pick.triangle_count();
        picks.push(pick);
    }
    // Remaining pieces must be able to finish: at least one triangle each.
    if picks.len() > max_pieces {
        return None;
    }
    PieceSet::new("random", picks.into_iter().map(|s| (s, 1))).ok()
}
