//! Enumeration of the convex polygons formable by `n` unit triangles.
//!
//! Every convex polygon whose edges are multiples of 45° is described by at
//! most eight edges, one per compass direction, traversed counterclockwise
//! in the fixed order E, NE, N, NW, W, SW, S, SE. Axis edges have integer
//! length `m`, diagonal edges length `k√2`. Interior angles are then 45°,
//! 90° or 135° by construction, and enumerating all valid side-length
//! assignments enumerates all candidate targets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lattice::{
    apply_transform, rasterize_polygon, shoelace, Region, Shape, Transform, D4,
};

/// The eight edge directions in counterclockwise order: E, NE, N, NW, W,
/// SW, S, SE. Index `i` of an [`OctagonSpec`] is the length of the edge in
/// direction `DIRECTIONS[i]` (axis edges count lattice units, diagonal edges
/// count multiples of √2).
pub const DIRECTIONS: [(i32, i32); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("edge vectors do not close up (sum {0:?})")]
    ClosureViolated((i64, i64)),
    #[error("a polygon needs at least 3 edges")]
    TooFewEdges,
    #[error("polygon has zero area")]
    ZeroArea,
}

/// Side lengths `(m1, k1, m2, k2, m3, k3, m4, k4)` of a 45°-convex polygon,
/// one entry per direction of [`DIRECTIONS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OctagonSpec {
    lengths: [u32; 8],
}

impl OctagonSpec {
    pub fn new(lengths: [u32; 8]) -> Result<OctagonSpec, SpecError> {
        let mut sum = (0i64, 0i64);
        for (len, dir) in lengths.iter().zip(DIRECTIONS) {
            sum.0 += *len as i64 * dir.0 as i64;
            sum.1 += *len as i64 * dir.1 as i64;
        }
        if sum != (0, 0) {
            return Err(SpecError::ClosureViolated(sum));
        }
        if lengths.iter().filter(|&&l| l > 0).count() < 3 {
            return Err(SpecError::TooFewEdges);
        }
        let spec = OctagonSpec { lengths };
        if shoelace(&spec.vertices()) <= 0 {
            return Err(SpecError::ZeroArea);
        }
        Ok(spec)
    }

    pub fn lengths(&self) -> [u32; 8] {
        self.lengths
    }

    /// Vertices accumulated from the origin, zero-length edges skipped.
    /// Simple, convex and counterclockwise by construction.
    pub fn vertices(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        let mut p = (0i32, 0i32);
        for (len, dir) in self.lengths.iter().zip(DIRECTIONS) {
            if *len == 0 {
                continue;
            }
            out.push(p);
            p.0 += *len as i32 * dir.0;
            p.1 += *len as i32 * dir.1;
        }
        debug_assert_eq!(p, (0, 0), "closure already validated");
        out
    }

    /// Twice the polygon area; equals the number of unit triangles.
    pub fn triangle_count(&self) -> i64 {
        shoelace(&self.vertices())
    }

    /// Lexicographically least tuple over the dihedral action on the
    /// direction ring: rotating the polygon by 90° shifts the tuple by two
    /// positions, reflecting reverses the ring with an even shift. Odd
    /// shifts would equate an integer axis length with a √2 multiple, which
    /// never identifies two valid specs.
    pub fn canonical(&self) -> OctagonSpec {
        let mut best = self.lengths;
        for r in 0..4 {
            let mut rot = [0u32; 8];
            let mut refl = [0u32; 8];
            for i in 0..8 {
                rot[i] = self.lengths[(i + 8 - 2 * r) % 8];
                refl[i] = self.lengths[(4 + 2 * r + 8 - i) % 8];
            }
            if rot < best {
                best = rot;
            }
            if refl < best {
                best = refl;
            }
        }
        OctagonSpec { lengths: best }
    }
}

/// See [`OctagonSpec::vertices`].
pub fn polygon_from_spec(spec: &OctagonSpec) -> Vec<(i32, i32)> {
    spec.vertices()
}

/// See [`OctagonSpec::canonical`].
pub fn canonical_spec(spec: &OctagonSpec) -> OctagonSpec {
    spec.canonical()
}

/// A convex polygon target: canonical spec, vertex list starting at the
/// lexicographically least vertex, rasterized region in non-negative
/// coordinates, triangle count, and the subgroup of D4 fixing the region.
#[derive(Clone, Debug)]
pub struct ConvexTarget {
    pub spec: OctagonSpec,
    pub vertices: Vec<(i32, i32)>,
    pub region: Region,
    pub triangles: u32,
    pub symmetries: Vec<D4>,
}

/// Stable identifier of the `index`-th target of the `n`-triangle catalog.
pub fn target_id(n: u32, index: usize) -> String {
    format!("n{}-t{:02}", n, index)
}

/// The elements of D4 whose action, combined with some translation, maps the
/// region onto itself. Always a subgroup.
pub fn target_symmetries(region: &Region) -> Vec<D4> {
    let base = region.normalize();
    D4::ALL
        .into_iter()
        .filter(|&g| {
            apply_transform(region, &Transform { g, t: (0, 0) }).normalize() == base
        })
        .collect()
}

/// Every congruence class of convex 45°-polygons of area `n/2`, i.e. of all
/// convex polygons formable by `n` unit triangles, sorted by canonical spec.
///
/// The search runs over bounding boxes `W × H` with right isosceles corner
/// cuts `(a, b, c, d)` at the SW, SE, NE and NW corners; closure is then
/// automatic and the area condition reads `2WH − (a²+b²+c²+d²) = n`. The
/// spec's diameter bound keeps `W` and `H` at most `2n`. Every candidate is
/// verified tileable by `n` single triangles as a guard; a failure would
/// contradict the enumeration method and panics.
pub fn enumerate_targets(n: u32) -> Vec<ConvexTarget> {
    assert!(n >= 1, "target size must be at least 1");
    let mut specs: BTreeSet<OctagonSpec> = BTreeSet::new();
    let limit = 2 * n as i64;
    for w in 1..=limit {
        for h in 1..=w {
            let budget = 2 * w * h - n as i64;
            if budget < 0 {
                continue;
            }
            // Corner cut legs: a at SW, b at SE, c at NE, d at NW. Cuts on a
            // shared side may not overlap.
            for a in 0..=w.min(h) {
                let ra = budget - a * a;
                if ra < 0 {
                    break;
                }
                for b in 0..=(w - a).min(h) {
                    let rb = ra - b * b;
                    if rb < 0 {
                        break;
                    }
                    for c in 0..=(h - b).min(w) {
                        let rc = rb - c * c;
                        if rc < 0 {
                            break;
                        }
                        let d = isqrt(rc);
                        if d * d != rc || d > h - a || d > w - c {
                            continue;
                        }
                        let lengths = [
                            (w - a - b) as u32,
                            b as u32,
                            (h - b - c) as u32,
                            c as u32,
                            (w - c - d) as u32,
                            d as u32,
                            (h - d - a) as u32,
                            a as u32,
                        ];
                        let spec = OctagonSpec::new(lengths)
                            .expect("corner-cut construction closes with positive area");
                        debug_assert_eq!(spec.triangle_count(), n as i64);
                        specs.insert(spec.canonical());
                    }
                }
            }
        }
    }

    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let target = build_target(spec, n);
        out.push(target);
    }
    out
}

fn build_target(spec: OctagonSpec, n: u32) -> ConvexTarget {
    let raw = spec.vertices();
    let min_x = raw.iter().map(|v| v.0).min().unwrap();
    let min_y = raw.iter().map(|v| v.1).min().unwrap();
    let mut vertices: Vec<(i32, i32)> = raw
        .iter()
        .map(|&(x, y)| (x - min_x, y - min_y))
        .collect();
    let start = vertices
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    vertices.rotate_left(start);

    let region = rasterize_polygon(&vertices).expect("spec polygons are valid");
    assert_eq!(
        region.len(),
        2 * n as usize,
        "rasterized target has wrong area"
    );
    let symmetries = target_symmetries(&region);

    // Guard: every candidate must be tileable by n single triangles. The
    // raster is all halves and full squares, so this always succeeds; a
    // failure would mean the enumeration produced a non-formable polygon.
    let tri = Shape::canonicalize(&crate::lattice::unit_triangle(0, 0, crate::lattice::Half::SE))
        .unwrap();
    let singles = crate::pieces::PieceSet::new("unit-triangles", [(tri, n)])
        .expect("guard piece set is valid");
    let (sat, _) = crate::solver::solve_exists(&singles, &region)
        .expect("guard solve is well-formed");
    assert!(
        sat,
        "enumerated target {:?} is not tileable by unit triangles",
        spec
    );

    ConvexTarget {
        spec,
        vertices,
        region,
        triangles: n,
        symmetries,
    }
}

/// `f(n)`: the number of convex polygons formable by `n` unit triangles.
pub fn f(n: u32) -> usize {
    enumerate_targets(n).len()
}

fn isqrt(v: i64) -> i64 {
    if v < 0 {
        return -1;
    }
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}
