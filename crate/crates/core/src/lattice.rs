//! Quarter-cell lattice geometry.
//!
//! Every unit square of the integer lattice is cut along both diagonals into
//! four *quarter cells*, one per square edge, apex at the square center. A
//! unit right isosceles triangle (legs 1, hypotenuse √2) placed with its legs
//! on the lattice covers exactly two quarter cells of one square, so any
//! union of internally disjoint unit triangles is an exact set of quarter
//! cells. Overlap testing becomes set disjointness and coverage becomes set
//! equality, with both diagonal splits of a square representable at once.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Which quarter of a square a cell is: the triangle whose base is the
/// north/east/south/west edge of the square and whose apex is the center.
///
/// The declaration order `N < E < S < W` is the canonical quadrant order
/// used everywhere cells are sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    N,
    E,
    S,
    W,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::N, Quadrant::E, Quadrant::S, Quadrant::W];

    /// Unit offset from the square center toward the quarter's base edge,
    /// in quadrupled coordinates.
    fn offset(self) -> (i32, i32) {
        match self {
            Quadrant::N => (0, 1),
            Quadrant::E => (1, 0),
            Quadrant::S => (0, -1),
            Quadrant::W => (-1, 0),
        }
    }

    fn from_offset(dx: i32, dy: i32) -> Option<Quadrant> {
        match (dx, dy) {
            (0, 1) => Some(Quadrant::N),
            (1, 0) => Some(Quadrant::E),
            (0, -1) => Some(Quadrant::S),
            (-1, 0) => Some(Quadrant::W),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Quadrant::N => 1,
            Quadrant::E => 2,
            Quadrant::S => 4,
            Quadrant::W => 8,
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quadrant::N => "N",
            Quadrant::E => "E",
            Quadrant::S => "S",
            Quadrant::W => "W",
        };
        f.write_str(s)
    }
}

/// Which half of a square a unit triangle occupies, named by the two square
/// edges its legs lie on. `NE` covers quarters `{N, E}`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    NE,
    NW,
    SE,
    SW,
}

impl Half {
    pub const ALL: [Half; 4] = [Half::NE, Half::NW, Half::SE, Half::SW];

    pub fn quadrants(self) -> [Quadrant; 2] {
        match self {
            Half::NE => [Quadrant::N, Quadrant::E],
            Half::NW => [Quadrant::N, Quadrant::W],
            Half::SE => [Quadrant::S, Quadrant::E],
            Half::SW => [Quadrant::S, Quadrant::W],
        }
    }

    /// The triangle's three corners on square `(0, 0)`, counterclockwise.
    pub fn corners(self) -> [(i32, i32); 3] {
        match self {
            Half::NE => [(1, 0), (1, 1), (0, 1)],
            Half::NW => [(0, 0), (1, 1), (0, 1)],
            Half::SE => [(0, 0), (1, 0), (1, 1)],
            Half::SW => [(0, 0), (1, 0), (0, 1)],
        }
    }

    pub fn parse(s: &str) -> Option<Half> {
        match s {
            "NE" => Some(Half::NE),
            "NW" => Some(Half::NW),
            "SE" => Some(Half::SE),
            "SW" => Some(Half::SW),
            _ => None,
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Half::NE => "NE",
            Half::NW => "NW",
            Half::SE => "SE",
            Half::SW => "SW",
        };
        f.write_str(s)
    }
}

/// One quarter cell: quadrant `q` of lattice square `(x, y)`.
///
/// Cells order by `(y, x, q)` so that sorted cell lists read row by row;
/// this order is what "lexicographically least" means for canonical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
    pub q: Quadrant,
}

impl Cell {
    pub fn new(x: i32, y: i32, q: Quadrant) -> Cell {
        Cell { x, y, q }
    }

    /// Representative interior point in quadrupled coordinates: the square
    /// center `(4x+2, 4y+2)` nudged one step toward the quarter's base edge.
    /// Distinct cells map to distinct points and the map commutes with every
    /// lattice isometry, which makes transforms exact integer arithmetic.
    pub fn qpoint(self) -> (i32, i32) {
        let (dx, dy) = self.q.offset();
        (4 * self.x + 2 + dx, 4 * self.y + 2 + dy)
    }

    /// Inverse of [`Cell::qpoint`].
    pub fn from_qpoint(u: i32, v: i32) -> Cell {
        let x = u.div_euclid(4);
        let y = v.div_euclid(4);
        let q = Quadrant::from_offset(u - (4 * x + 2), v - (4 * y + 2))
            .expect("quadrupled point is not a quarter-cell representative");
        Cell { x, y, q }
    }

    /// Edge-adjacent neighbours: the two quarters sharing a half-diagonal
    /// inside the same square, plus the quarter across the base edge in the
    /// neighbouring square. Corner contact is not adjacency.
    pub fn neighbors(self) -> [Cell; 3] {
        let Cell { x, y, q } = self;
        match q {
            Quadrant::N => [
                Cell::new(x, y, Quadrant::E),
                Cell::new(x, y, Quadrant::W),
                Cell::new(x, y + 1, Quadrant::S),
            ],
            Quadrant::E => [
                Cell::new(x, y, Quadrant::N),
                Cell::new(x, y, Quadrant::S),
                Cell::new(x + 1, y, Quadrant::W),
            ],
            Quadrant::S => [
                Cell::new(x, y, Quadrant::E),
                Cell::new(x, y, Quadrant::W),
                Cell::new(x, y - 1, Quadrant::N),
            ],
            Quadrant::W => [
                Cell::new(x, y, Quadrant::N),
                Cell::new(x, y, Quadrant::S),
                Cell::new(x - 1, y, Quadrant::E),
            ],
        }
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x, self.q).cmp(&(other.y, other.x, other.q))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.q, self.x, self.y)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("square ({x},{y}) has quarter pattern {pattern:#06b}, which is not a union of disjoint unit triangles")]
    InvalidPattern { x: i32, y: i32, pattern: u8 },
    #[error("triangle T {x} {y} {half} overlaps earlier triangles")]
    OverlappingTriangle { x: i32, y: i32, half: Half },
    #[error("region is empty")]
    Empty,
    #[error("region is not edge-connected")]
    Disconnected,
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon edge {index} has zero length")]
    ZeroLengthEdge { index: usize },
    #[error("polygon edge {index} is not a multiple of 45 degrees")]
    NonOctilinearEdge { index: usize },
    #[error("polygon is not convex and counterclockwise")]
    NotConvexCcw,
}

/// A finite set of quarter cells that is a union of internally disjoint unit
/// triangles: per square the covered quarters are nothing, an adjacent pair
/// (a half), or all four.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Region {
    cells: BTreeSet<Cell>,
}

impl Region {
    /// Builds a region from arbitrary cells, validating the quarter pattern
    /// of every square.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(iter: I) -> Result<Region, GeometryError> {
        let cells: BTreeSet<Cell> = iter.into_iter().collect();
        let mut masks: std::collections::BTreeMap<(i32, i32), u8> = Default::default();
        for c in &cells {
            *masks.entry((c.x, c.y)).or_default() |= c.q.bit();
        }
        for ((x, y), pattern) in masks {
            if !matches!(pattern, 0b0011 | 0b0110 | 0b1100 | 0b1001 | 0b1111) {
                return Err(GeometryError::InvalidPattern { x, y, pattern });
            }
        }
        Ok(Region { cells })
    }

    /// Builds a region from unit triangles, rejecting overlaps.
    pub fn from_triangles<I: IntoIterator<Item = (i32, i32, Half)>>(
        iter: I,
    ) -> Result<Region, GeometryError> {
        let mut cells = BTreeSet::new();
        for (x, y, half) in iter {
            for q in half.quadrants() {
                if !cells.insert(Cell::new(x, y, q)) {
                    return Err(GeometryError::OverlappingTriangle { x, y, half });
                }
            }
        }
        Region::from_cells(cells)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    /// Number of unit triangles of area (`|cells| / 2`).
    pub fn triangle_count(&self) -> usize {
        self.cells.len() / 2
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.cells.is_subset(&other.cells)
    }

    /// Union of disjoint regions. Fails if they overlap or if the union
    /// violates the quarter pattern.
    pub fn union(&self, other: &Region) -> Result<Region, GeometryError> {
        if !self.is_disjoint(other) {
            let c = *self.cells.intersection(&other.cells).next().unwrap();
            return Err(GeometryError::InvalidPattern {
                x: c.x,
                y: c.y,
                pattern: 0,
            });
        }
        Region::from_cells(self.cells().chain(other.cells()))
    }

    /// Bounding box `(min_x, min_y, max_x, max_y)` in square coordinates.
    pub fn bounds(&self) -> Option<(i32, i32, i32, i32)> {
        if self.cells.is_empty() {
            return None;
        }
        let mut it = self.cells.iter();
        let first = it.next().unwrap();
        let (mut x0, mut y0, mut x1, mut y1) = (first.x, first.y, first.x, first.y);
        for c in it {
            x0 = x0.min(c.x);
            y0 = y0.min(c.y);
            x1 = x1.max(c.x);
            y1 = y1.max(c.y);
        }
        Some((x0, y0, x1, y1))
    }

    pub fn translate(&self, dx: i32, dy: i32) -> Region {
        Region {
            cells: self
                .cells
                .iter()
                .map(|c| Cell::new(c.x + dx, c.y + dy, c.q))
                .collect(),
        }
    }

    /// Translates so that the bounding box starts at the origin.
    pub fn normalize(&self) -> Region {
        match self.bounds() {
            Some((x0, y0, _, _)) => self.translate(-x0, -y0),
            None => self.clone(),
        }
    }

    /// Decomposes the region into unit triangles, sorted by `(y, x, half)`.
    /// Full squares split along the anti-diagonal into `NE + SW`; that choice
    /// is fixed so serialized forms are reproducible.
    pub fn triangles(&self) -> Vec<(i32, i32, Half)> {
        let mut masks: std::collections::BTreeMap<(i32, i32), u8> = Default::default();
        for c in &self.cells {
            *masks.entry((c.x, c.y)).or_default() |= c.q.bit();
        }
        let mut out = Vec::with_capacity(self.cells.len() / 2);
        for ((x, y), pattern) in masks {
            match pattern {
                0b0011 => out.push((x, y, Half::NE)),
                0b1001 => out.push((x, y, Half::NW)),
                0b0110 => out.push((x, y, Half::SE)),
                0b1100 => out.push((x, y, Half::SW)),
                0b1111 => {
                    out.push((x, y, Half::NE));
                    out.push((x, y, Half::SW));
                }
                _ => unreachable!("region invariant violated"),
            }
        }
        out.sort_by_key(|&(x, y, h)| (y, x, h));
        out
    }
}

/// The unit triangle covering the stated half of square `(x, y)`.
pub fn unit_triangle(x: i32, y: i32, half: Half) -> Region {
    let cells = half.quadrants().map(|q| Cell::new(x, y, q));
    Region {
        cells: cells.into_iter().collect(),
    }
}

/// The eight elements of the dihedral group of the square, acting linearly
/// about the lattice origin. Rotations are counterclockwise; `FlipX` reflects
/// across the x-axis, `FlipDiag` across the line `y = x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum D4 {
    Id,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    FlipDiag,
    FlipAnti,
}

impl D4 {
    pub const ALL: [D4; 8] = [
        D4::Id,
        D4::Rot90,
        D4::Rot180,
        D4::Rot270,
        D4::FlipX,
        D4::FlipY,
        D4::FlipDiag,
        D4::FlipAnti,
    ];

    /// Applies the linear map to an integer point (or vector).
    pub fn apply(self, p: (i32, i32)) -> (i32, i32) {
        let (x, y) = p;
        match self {
            D4::Id => (x, y),
            D4::Rot90 => (-y, x),
            D4::Rot180 => (-x, -y),
            D4::Rot270 => (y, -x),
            D4::FlipX => (x, -y),
            D4::FlipY => (-x, y),
            D4::FlipDiag => (y, x),
            D4::FlipAnti => (-y, -x),
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(self, other: D4) -> D4 {
        let e1 = self.apply(other.apply((1, 0)));
        let e2 = self.apply(other.apply((0, 1)));
        for g in D4::ALL {
            if g.apply((1, 0)) == e1 && g.apply((0, 1)) == e2 {
                return g;
            }
        }
        unreachable!("composition left the group")
    }

    pub fn inverse(self) -> D4 {
        for g in D4::ALL {
            if g.compose(self) == D4::Id {
                return g;
            }
        }
        unreachable!()
    }

    pub fn apply_cell(self, cell: Cell) -> Cell {
        let (u, v) = cell.qpoint();
        let (u, v) = self.apply((u, v));
        Cell::from_qpoint(u, v)
    }
}

/// A lattice isometry: a [`D4`] element about the origin followed by an
/// integer translation in square units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transform {
    pub g: D4,
    pub t: (i32, i32),
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        g: D4::Id,
        t: (0, 0),
    };

    pub fn new(g: D4, tx: i32, ty: i32) -> Transform {
        Transform { g, t: (tx, ty) }
    }

    pub fn apply_cell(&self, cell: Cell) -> Cell {
        let (u, v) = cell.qpoint();
        let (u, v) = self.g.apply((u, v));
        Cell::from_qpoint(u + 4 * self.t.0, v + 4 * self.t.1)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Transform) -> Transform {
        let gt = self.g.apply(other.t);
        Transform {
            g: self.g.compose(other.g),
            t: (gt.0 + self.t.0, gt.1 + self.t.1),
        }
    }

    pub fn inverse(&self) -> Transform {
        let gi = self.g.inverse();
        let it = gi.apply(self.t);
        Transform {
            g: gi,
            t: (-it.0, -it.1),
        }
    }
}

/// Image of a region under a transform. Isometries preserve the quarter
/// pattern, so no revalidation is needed.
pub fn apply_transform(region: &Region, transform: &Transform) -> Region {
    Region {
        cells: region.cells().map(|c| transform.apply_cell(c)).collect(),
    }
}

/// True iff the quarter-cell adjacency graph of the region is connected.
/// The empty region counts as connected.
pub fn is_connected(region: &Region) -> bool {
    let mut todo = Vec::new();
    let mut seen = BTreeSet::new();
    match region.cells().next() {
        Some(c) => {
            todo.push(c);
            seen.insert(c);
        }
        None => return true,
    }
    while let Some(c) = todo.pop() {
        for n in c.neighbors() {
            if region.contains(n) && seen.insert(n) {
                todo.push(n);
            }
        }
    }
    seen.len() == region.len()
}

/// A connected region in canonical position: the lexicographically least of
/// its eight dihedral images, each translated so the bounding box starts at
/// the origin. Two regions are congruent (allowing reflection) iff they
/// canonicalize to equal shapes.
///
/// The optional `name` is a label only; it takes no part in equality,
/// ordering or hashing.
#[derive(Clone, Debug)]
pub struct Shape {
    cells: Vec<Cell>,
    pub name: Option<String>,
}

impl Shape {
    /// Canonicalizes a region. Rejects empty or disconnected input; pattern
    /// validity is already guaranteed by [`Region`].
    pub fn canonicalize(region: &Region) -> Result<Shape, GeometryError> {
        if region.is_empty() {
            return Err(GeometryError::Empty);
        }
        if !is_connected(region) {
            return Err(GeometryError::Disconnected);
        }
        Ok(Shape {
            cells: canonical_cells(region),
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Shape {
        self.name = Some(name.into());
        self
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn region(&self) -> Region {
        Region {
            cells: self.cells.iter().copied().collect(),
        }
    }

    /// Size in unit triangles.
    pub fn triangle_count(&self) -> usize {
        self.cells.len() / 2
    }

    /// Serialized form: one `T <x> <y> <half>` line per triangle, sorted by
    /// `(y, x, half)`, shape in canonical position.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (x, y, h) in self.region().triangles() {
            out.push_str(&format!("T {} {} {}\n", x, y, h));
        }
        out
    }
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Shape {}

impl Ord for Shape {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cells.cmp(&other.cells)
    }
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Shape {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

fn canonical_cells(region: &Region) -> Vec<Cell> {
    let mut best: Option<Vec<Cell>> = None;
    for g in D4::ALL {
        let img = apply_transform(region, &Transform { g, t: (0, 0) });
        let mut cells: Vec<Cell> = img.normalize().cells().collect();
        cells.sort();
        if best.as_ref().is_none_or(|b| cells < *b) {
            best = Some(cells);
        }
    }
    best.unwrap()
}

/// Octant index of a 45°-multiple direction: E=0, NE=1, ... SE=7, going
/// counterclockwise.
fn octant(dx: i64, dy: i64) -> Option<usize> {
    let s = |v: i64| v.signum();
    match (s(dx), s(dy)) {
        (1, 0) => Some(0),
        (1, 1) if dx == dy => Some(1),
        (0, 1) => Some(2),
        (-1, 1) if -dx == dy => Some(3),
        (-1, 0) => Some(4),
        (-1, -1) if dx == dy => Some(5),
        (0, -1) => Some(6),
        (1, -1) if dx == -dy => Some(7),
        _ => None,
    }
}

/// Rasterizes a simple, counterclockwise, convex polygon whose edges are
/// multiples of 45° into the quarter cells whose interior it contains.
///
/// Every edge lies on a lattice line of one of the four 45° directions, and
/// no such line passes through a quarter-cell representative point, so a
/// strict half-plane test per edge classifies each quarter exactly: every
/// square comes out empty, a half, or full, and `|cells| = 4 × area`.
pub fn rasterize_polygon(vertices: &[(i32, i32)]) -> Result<Region, GeometryError> {
    if vertices.len() < 3 {
        return Err(GeometryError::TooFewVertices);
    }
    let n = vertices.len();
    let mut octants = Vec::with_capacity(n);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let (dx, dy) = ((b.0 - a.0) as i64, (b.1 - a.1) as i64);
        if dx == 0 && dy == 0 {
            return Err(GeometryError::ZeroLengthEdge { index: i });
        }
        octants.push(octant(dx, dy).ok_or(GeometryError::NonOctilinearEdge { index: i })?);
    }
    // Convex + ccw + simple iff every left turn is 0..3 octant steps and the
    // total turning is exactly one full revolution.
    let mut turning = 0usize;
    for i in 0..n {
        let step = (octants[(i + 1) % n] + 8 - octants[i]) % 8;
        if step >= 4 {
            return Err(GeometryError::NotConvexCcw);
        }
        turning += step;
    }
    if turning != 8 {
        return Err(GeometryError::NotConvexCcw);
    }

    let min_x = vertices.iter().map(|v| v.0).min().unwrap();
    let max_x = vertices.iter().map(|v| v.0).max().unwrap();
    let min_y = vertices.iter().map(|v| v.1).min().unwrap();
    let max_y = vertices.iter().map(|v| v.1).max().unwrap();

    let mut cells = BTreeSet::new();
    for y in min_y..max_y {
        for x in min_x..max_x {
            for q in Quadrant::ALL {
                let cell = Cell::new(x, y, q);
                let (u, v) = cell.qpoint();
                let inside = (0..n).all(|i| {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let (au, av) = (4 * a.0 as i64, 4 * a.1 as i64);
                    let (bu, bv) = (4 * b.0 as i64, 4 * b.1 as i64);
                    (bu - au) * (v as i64 - av) - (bv - av) * (u as i64 - au) > 0
                });
                if inside {
                    cells.insert(cell);
                }
            }
        }
    }
    debug_assert_eq!(cells.len() as i64, 2 * shoelace(vertices));
    Ok(Region { cells })
}

/// Twice the signed area of a polygon (positive when counterclockwise).
pub fn shoelace(vertices: &[(i32, i32)]) -> i64 {
    let n = vertices.len();
    let mut sum = 0i64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        sum += a.0 as i64 * b.1 as i64 - b.0 as i64 * a.1 as i64;
    }
    sum
}
