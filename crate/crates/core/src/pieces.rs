//! Piece sets: named multisets of shapes, the piece-file format, built-in
//! puzzle definitions, and free polyabolo enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lattice::{
    rasterize_polygon, Cell, GeometryError, Half, Quadrant, Region, Shape,
};

/// A named multiset of canonical shapes. Congruent shapes are merged into a
/// single entry with a multiplicity, which lets the solver break symmetry
/// between identical pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSet {
    pub name: String,
    pieces: Vec<(Shape, u32)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PieceError {
    #[error("piece multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("piece set has no pieces")]
    EmptySet,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl PieceSet {
    /// Builds a piece set, merging congruent shapes and fixing the piece
    /// order to (size, canonical serialization).
    pub fn new(
        name: impl Into<String>,
        entries: impl IntoIterator<Item = (Shape, u32)>,
    ) -> Result<PieceSet, PieceError> {
        let mut merged: BTreeMap<Shape, (Option<String>, u32)> = BTreeMap::new();
        let mut any = false;
        for (shape, mult) in entries {
            any = true;
            if mult == 0 {
                return Err(PieceError::ZeroMultiplicity);
            }
            let label = shape.name.clone();
            let slot = merged.entry(shape).or_insert((None, 0));
            if slot.0.is_none() {
                slot.0 = label;
            }
            slot.1 += mult;
        }
        if !any {
            return Err(PieceError::EmptySet);
        }
        let mut pieces: Vec<(Shape, u32)> = merged
            .into_iter()
            .map(|(mut shape, (label, mult))| {
                shape.name = label;
                (shape, mult)
            })
            .collect();
        pieces.sort_by(|a, b| {
            (a.0.triangle_count(), a.0.cells()).cmp(&(b.0.triangle_count(), b.0.cells()))
        });
        Ok(PieceSet {
            name: name.into(),
            pieces,
        })
    }

    /// Distinct shapes with multiplicities, in serialization order.
    pub fn pieces(&self) -> &[(Shape, u32)] {
        &self.pieces
    }

    /// Total number of pieces, multiplicities included.
    pub fn piece_count(&self) -> usize {
        self.pieces.iter().map(|(_, m)| *m as usize).sum()
    }

    /// Total triangle budget: Σ multiplicity × shape size.
    pub fn total_triangles(&self) -> usize {
        self.pieces
            .iter()
            .map(|(s, m)| s.triangle_count() * *m as usize)
            .sum()
    }

    /// Serializes to the piece-file format.
    pub fn serialize(&self) -> String {
        let mut out = format!("pieceset {}\n", self.name);
        for (i, (shape, mult)) in self.pieces.iter().enumerate() {
            out.push('\n');
            let name = shape.name.clone().unwrap_or_else(|| format!("piece{}", i));
            out.push_str(&format!("piece {} x{}\n", name, mult));
            out.push_str(&shape.serialize());
        }
        out
    }

    /// Parses the piece-file format. See the crate README for the grammar.
    pub fn parse(text: &str) -> Result<PieceSet, PieceFileError> {
        parse_piece_file(text)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub struct PieceFileError {
    pub line: usize,
    pub kind: PieceFileErrorKind,
}

impl fmt::Display for PieceFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.kind)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PieceFileErrorKind {
    #[error("expected `pieceset <name>` header")]
    MissingHeader,
    #[error("malformed line: {0}")]
    Syntax(String),
    #[error("triangle line outside a piece block")]
    TriangleOutsidePiece,
    #[error("piece has no triangles")]
    EmptyPiece,
    #[error("piece multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("{0}")]
    Geometry(GeometryError),
    #[error("piece set has no pieces")]
    EmptySet,
}

fn err(line: usize, kind: PieceFileErrorKind) -> PieceFileError {
    PieceFileError { line, kind }
}

/// In-progress piece block: name, multiplicity, triangles, header line.
type OpenPiece = (String, u32, Vec<(i32, i32, Half)>, usize);

fn parse_piece_file(text: &str) -> Result<PieceSet, PieceFileError> {
    let mut set_name: Option<String> = None;
    let mut entries: Vec<(Shape, u32)> = Vec::new();
    let mut open: Option<OpenPiece> = None;

    let flush = |open: &mut Option<OpenPiece>,
                     entries: &mut Vec<(Shape, u32)>|
     -> Result<(), PieceFileError> {
        if let Some((name, mult, tris, header_line)) = open.take() {
            if tris.is_empty() {
                return Err(err(header_line, PieceFileErrorKind::EmptyPiece));
            }
            let region = Region::from_triangles(tris)
                .map_err(|e| err(header_line, PieceFileErrorKind::Geometry(e)))?;
            let shape = Shape::canonicalize(&region)
                .map_err(|e| err(header_line, PieceFileErrorKind::Geometry(e)))?
                .with_name(name);
            entries.push((shape, mult));
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            flush(&mut open, &mut entries)?;
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next().unwrap() {
            "pieceset" => {
                if set_name.is_some() {
                    return Err(err(
                        lineno,
                        PieceFileErrorKind::Syntax("duplicate pieceset header".into()),
                    ));
                }
                let name = words.collect::<Vec<_>>().join(" ");
                if name.is_empty() {
                    return Err(err(lineno, PieceFileErrorKind::MissingHeader));
                }
                set_name = Some(name);
            }
            "piece" => {
                if set_name.is_none() {
                    return Err(err(lineno, PieceFileErrorKind::MissingHeader));
                }
                flush(&mut open, &mut entries)?;
                let name = words
                    .next()
                    .ok_or_else(|| {
                        err(lineno, PieceFileErrorKind::Syntax("piece needs a name".into()))
                    })?
                    .to_string();
                let mult_word = words.next().ok_or_else(|| {
                    err(
                        lineno,
                        PieceFileErrorKind::Syntax("piece needs a multiplicity like x2".into()),
                    )
                })?;
                let mult: u32 = mult_word
                    .strip_prefix('x')
                    .and_then(|m| m.parse().ok())
                    .ok_or_else(|| {
                        err(
                            lineno,
                            PieceFileErrorKind::Syntax(format!(
                                "bad multiplicity {:?}, expected x<count>",
                                mult_word
                            )),
                        )
                    })?;
                if mult == 0 {
                    return Err(err(lineno, PieceFileErrorKind::ZeroMultiplicity));
                }
                if let Some(extra) = words.next() {
                    return Err(err(
                        lineno,
                        PieceFileErrorKind::Syntax(format!("unexpected token {:?}", extra)),
                    ));
                }
                open = Some((name, mult, Vec::new(), lineno));
            }
            "T" => {
                let block = open.as_mut().ok_or_else(|| {
                    err(lineno, PieceFileErrorKind::TriangleOutsidePiece)
                })?;
                let parts: Vec<&str> = words.collect();
                if parts.len() != 3 {
                    return Err(err(
                        lineno,
                        PieceFileErrorKind::Syntax("expected `T <x> <y> <half>`".into()),
                    ));
                }
                let x: i32 = parts[0].parse().map_err(|_| {
                    err(lineno, PieceFileErrorKind::Syntax(format!("bad x {:?}", parts[0])))
                })?;
                let y: i32 = parts[1].parse().map_err(|_| {
                    err(lineno, PieceFileErrorKind::Syntax(format!("bad y {:?}", parts[1])))
                })?;
                let half = Half::parse(parts[2]).ok_or_else(|| {
                    err(
                        lineno,
                        PieceFileErrorKind::Syntax(format!(
                            "bad half {:?}, expected NE/NW/SE/SW",
                            parts[2]
                        )),
                    )
                })?;
                block.2.push((x, y, half));
            }
            other => {
                return Err(err(
                    lineno,
                    PieceFileErrorKind::Syntax(format!("unknown directive {:?}", other)),
                ));
            }
        }
    }
    flush(&mut open, &mut entries)?;

    let name = set_name.ok_or_else(|| err(1, PieceFileErrorKind::MissingHeader))?;
    PieceSet::new(name, entries).map_err(|e| match e {
        PieceError::ZeroMultiplicity => err(0, PieceFileErrorKind::ZeroMultiplicity),
        PieceError::EmptySet => err(0, PieceFileErrorKind::EmptySet),
        PieceError::Geometry(g) => err(0, PieceFileErrorKind::Geometry(g)),
    })
}

/// Built-in piece sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Tangram,
    SeiShonagon,
    Nineteen,
    Eleven,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Tangram,
        Builtin::SeiShonagon,
        Builtin::Nineteen,
        Builtin::Eleven,
    ];

    pub fn parse(name: &str) -> Option<Builtin> {
        match name.to_ascii_uppercase().as_str() {
            "TANGRAM" => Some(Builtin::Tangram),
            "SEI_SHONAGON" | "SEI-SHONAGON" | "SEISHONAGON" => Some(Builtin::SeiShonagon),
            "NINETEEN" => Some(Builtin::Nineteen),
            "ELEVEN" => Some(Builtin::Eleven),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Tangram => "TANGRAM",
            Builtin::SeiShonagon => "SEI_SHONAGON",
            Builtin::Nineteen => "NINETEEN",
            Builtin::Eleven => "ELEVEN",
        }
    }
}

fn shape_from_polygon(name: &str, vertices: &[(i32, i32)]) -> Shape {
    let region = rasterize_polygon(vertices).expect("built-in piece polygon is valid");
    Shape::canonicalize(&region)
        .expect("built-in piece is connected")
        .with_name(name)
}

/// The seven tangram pieces: two large triangles (legs 2), one medium
/// triangle (hypotenuse 2), two small triangles (legs 1), a unit square and
/// a 1×√2 parallelogram. 16 unit triangles in total.
fn tangram() -> PieceSet {
    let large = shape_from_polygon("large-triangle", &[(0, 0), (2, 0), (2, 2)]);
    let medium = shape_from_polygon("medium-triangle", &[(0, 0), (2, 0), (1, 1)]);
    let small = shape_from_polygon("small-triangle", &[(0, 0), (1, 0), (1, 1)]);
    let square = shape_from_polygon("square", &[(0, 0), (1, 0), (1, 1), (0, 1)]);
    let para = shape_from_polygon("parallelogram", &[(0, 0), (1, 0), (2, 1), (1, 1)]);
    PieceSet::new(
        "TANGRAM",
        [
            (large, 2),
            (medium, 1),
            (small, 2),
            (square, 1),
            (para, 1),
        ],
    )
    .expect("tangram is a valid piece set")
}

/// Five 1×√2 parallelograms plus six single triangles: the smallest piece
/// set that forms all twenty 16-triangle convex targets.
fn eleven() -> PieceSet {
    let para = shape_from_polygon("parallelogram", &[(0, 0), (1, 0), (2, 1), (1, 1)]);
    let tri = shape_from_polygon("triangle", &[(0, 0), (1, 0), (1, 1)]);
    PieceSet::new("ELEVEN", [(para, 5), (tri, 6)]).expect("eleven is a valid piece set")
}

const SEI_SHONAGON_FILE: &str = include_str!("../data/sei_shonagon.pieces");
const NINETEEN_FILE: &str = include_str!("../data/nineteen.pieces");

/// Returns a built-in piece set. `TANGRAM` and `ELEVEN` are constructed in
/// code; `SEI_SHONAGON` and `NINETEEN` load from bundled piece files.
pub fn builtin(which: Builtin) -> Result<PieceSet, PieceFileError> {
    match which {
        Builtin::Tangram => Ok(tangram()),
        Builtin::Eleven => Ok(eleven()),
        Builtin::SeiShonagon => PieceSet::parse(SEI_SHONAGON_FILE),
        Builtin::Nineteen => PieceSet::parse(NINETEEN_FILE),
    }
}

/// All free (reflections allowed) edge-connected shapes of exactly `k` unit
/// triangles, canonical and sorted. Grows size-(k-1) shapes by one triangle
/// at every edge-sharing placement and dedups canonically.
pub fn enumerate_polyaboloes(k: usize) -> Vec<Shape> {
    assert!(k >= 1, "polyabolo size must be at least 1");
    let tri = Shape::canonicalize(&crate::lattice::unit_triangle(0, 0, Half::SE)).unwrap();
    let mut current: BTreeSet<Shape> = [tri].into();
    for _ in 2..=k {
        let mut next = BTreeSet::new();
        for shape in &current {
            let region = shape.region();
            let (x0, y0, x1, y1) = region.bounds().unwrap();
            let mut masks: BTreeMap<(i32, i32), u8> = BTreeMap::new();
            for c in region.cells() {
                *masks.entry((c.x, c.y)).or_default() |= match c.q {
                    Quadrant::N => 1,
                    Quadrant::E => 2,
                    Quadrant::S => 4,
                    Quadrant::W => 8,
                };
            }
            for y in y0 - 1..=y1 + 1 {
                for x in x0 - 1..=x1 + 1 {
                    let have = masks.get(&(x, y)).copied().unwrap_or(0);
                    for half in Half::ALL {
                        let add: u8 = half
                            .quadrants()
                            .iter()
                            .map(|q| match q {
                                Quadrant::N => 1,
                                Quadrant::E => 2,
                                Quadrant::S => 4,
                                Quadrant::W => 8,
                            })
                            .sum();
                        // The square must stay a valid pattern: empty square
                        // takes any half, a half-square only its complement.
                        if have & add != 0 || (have != 0 && have | add != 0b1111) {
                            continue;
                        }
                        let new_cells: Vec<Cell> =
                            half.quadrants().iter().map(|&q| Cell::new(x, y, q)).collect();
                        let touches = new_cells
                            .iter()
                            .flat_map(|c| c.neighbors())
                            .any(|n| region.contains(n));
                        if !touches {
                            continue;
                        }
                        let grown =
                            Region::from_cells(region.cells().chain(new_cells.iter().copied()))
                                .expect("grown region keeps the quarter pattern");
                        next.insert(Shape::canonicalize(&grown).expect("growth is connected"));
                    }
                }
            }
        }
        current = next;
    }
    current.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_transform, Transform, D4};

    #[test]
    fn tangram_has_seven_pieces_and_sixteen_triangles() {
        let t = builtin(Builtin::Tangram).unwrap();
        assert_eq!(t.piece_count(), 7);
        assert_eq!(t.total_triangles(), 16);
        assert_eq!(t.pieces().len(), 5); // two duplicated shapes merged
        let mults: Vec<u32> = t.pieces().iter().map(|p| p.1).collect();
        assert_eq!(mults.iter().filter(|&&m| m == 2).count(), 2);
    }

    #[test]
    fn eleven_is_five_parallelograms_and_six_triangles() {
        let e = builtin(Builtin::Eleven).unwrap();
        assert_eq!(e.piece_count(), 11);
        assert_eq!(e.total_triangles(), 16);
        assert_eq!(e.pieces().len(), 2);
    }

    #[test]
    fn sei_shonagon_loads_with_seven_pieces_and_a_base3_trapezoid() {
        let s = builtin(Builtin::SeiShonagon).unwrap();
        assert_eq!(s.piece_count(), 7);
        assert_eq!(s.total_triangles(), 16);
        // Contains the area-2 trapezoid whose longer base is 3.
        let trap = Shape::canonicalize(
            &rasterize_polygon(&[(0, 0), (3, 0), (2, 1), (1, 1)]).unwrap(),
        )
        .unwrap();
        assert!(s.pieces().iter().any(|(shape, _)| *shape == trap));
    }

    #[test]
    fn nineteen_loads_with_seven_pieces() {
        let n = builtin(Builtin::Nineteen).unwrap();
        assert_eq!(n.piece_count(), 7);
        assert_eq!(n.total_triangles(), 16);
    }

    #[test]
    fn single_triangle_file_parses() {
        let ps = PieceSet::parse("pieceset tiny\n\npiece tri x1\nT 0 0 SE\n").unwrap();
        assert_eq!(ps.piece_count(), 1);
        assert_eq!(ps.total_triangles(), 1);
        assert_eq!(ps.name, "tiny");
    }

    #[test]
    fn serialize_parse_roundtrip_for_builtins() {
        for which in Builtin::ALL {
            let ps = builtin(which).unwrap();
            let round = PieceSet::parse(&ps.serialize()).unwrap();
            assert_eq!(round, ps, "{} round trip", which.name());
            // Names survive too.
            for ((a, ma), (b, mb)) in ps.pieces().iter().zip(round.pieces()) {
                assert_eq!(a.name, b.name);
                assert_eq!(ma, mb);
            }
        }
    }

    #[test]
    fn forbidden_pattern_is_rejected_with_line_number() {
        // N and S quarters of one square form no triangle; the two T lines
        // overlap on neither quarter, so the pattern check catches it.
        let text = "pieceset bad\n\npiece p x1\nT 0 0 NE\nT 0 0 SE\n";
        let e = PieceSet::parse(text).unwrap_err();
        assert!(matches!(e.kind, PieceFileErrorKind::Geometry(_)));

        let dup = "pieceset bad\n\npiece p x1\nT 0 0 NE\nT 0 0 NW\n";
        let e = PieceSet::parse(dup).unwrap_err();
        assert!(matches!(
            e.kind,
            PieceFileErrorKind::Geometry(GeometryError::OverlappingTriangle { .. })
        ));
    }

    #[test]
    fn disconnected_piece_is_rejected() {
        let text = "pieceset bad\n\npiece p x1\nT 0 0 SE\nT 5 5 SE\n";
        let e = PieceSet::parse(text).unwrap_err();
        assert!(matches!(
            e.kind,
            PieceFileErrorKind::Geometry(GeometryError::Disconnected)
        ));
    }

    #[test]
    fn zero_multiplicity_is_rejected() {
        let text = "pieceset bad\n\npiece p x0\nT 0 0 SE\n";
        let e = PieceSet::parse(text).unwrap_err();
        assert_eq!(e.kind, PieceFileErrorKind::ZeroMultiplicity);
        assert_eq!(e.line, 3);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "pieceset bad\n\npiece p x1\nT 0 zero SE\n";
        let e = PieceSet::parse(text).unwrap_err();
        assert_eq!(e.line, 4);

        let text = "pieceset bad\n\nT 0 0 SE\n";
        let e = PieceSet::parse(text).unwrap_err();
        assert_eq!(e.kind, PieceFileErrorKind::TriangleOutsidePiece);
    }

    #[test]
    fn duplicate_shapes_merge_into_multiplicity() {
        let text = "pieceset twice\n\npiece a x1\nT 0 0 SE\n\npiece b x2\nT 3 3 NW\n";
        let ps = PieceSet::parse(text).unwrap();
        assert_eq!(ps.pieces().len(), 1);
        assert_eq!(ps.pieces()[0].1, 3);
        assert_eq!(ps.piece_count(), 3);
    }

    #[test]
    fn polyabolo_counts_match_published_values() {
        // Free polyaboloes of 1..6 triangles.
        assert_eq!(enumerate_polyaboloes(1).len(), 1);
        assert_eq!(enumerate_polyaboloes(2).len(), 3);
        assert_eq!(enumerate_polyaboloes(3).len(), 4);
        assert_eq!(enumerate_polyaboloes(4).len(), 14);
        assert_eq!(enumerate_polyaboloes(5).len(), 30);
        assert_eq!(enumerate_polyaboloes(6).len(), 107);
    }

    #[test]
    fn diaboloes_are_square_triangle_parallelogram() {
        let two = enumerate_polyaboloes(2);
        let square = Shape::canonicalize(
            &rasterize_polygon(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap(),
        )
        .unwrap();
        let tri = Shape::canonicalize(&rasterize_polygon(&[(0, 0), (2, 0), (1, 1)]).unwrap())
            .unwrap();
        let para = Shape::canonicalize(
            &rasterize_polygon(&[(0, 0), (1, 0), (2, 1), (1, 1)]).unwrap(),
        )
        .unwrap();
        let want: BTreeSet<Shape> = [square, tri, para].into();
        assert_eq!(two.iter().cloned().collect::<BTreeSet<_>>(), want);
    }

    #[test]
    fn polyaboloes_are_canonical_and_distinct_under_d4() {
        for k in 1..=6 {
            let shapes = enumerate_polyaboloes(k);
            let mut seen = BTreeSet::new();
            for s in &shapes {
                // Canonical: re-canonicalizing is the identity.
                assert_eq!(Shape::canonicalize(&s.region()).unwrap(), *s);
                for g in D4::ALL {
                    let img = apply_transform(&s.region(), &Transform::new(g, 0, 0));
                    let c = Shape::canonicalize(&img).unwrap();
                    assert_eq!(c, *s);
                }
                assert!(seen.insert(s.clone()), "duplicate shape at size {k}");
            }
        }
    }
}
