//! Minimal deterministic SVG output: target sheets, solution drawings and
//! the f(n) chart. 32 px per lattice unit, pieces colored by piece index
//! from a fixed 12-color palette.

use chie::targets::{target_id, ConvexTarget};
use chie::{Region, Solution};

pub const SCALE: i32 = 32;
const MARGIN: i32 = 16;

pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc949", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ab", "#86bcb6", "#d37295",
];

fn open_svg(width: i32, height: i32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = width,
        h = height
    )
}

/// Flips y so larger lattice y is higher on screen.
fn point(x: i32, y: i32, max_y: i32, ox: i32, oy: i32) -> (i32, i32) {
    (ox + x * SCALE, oy + (max_y - y) * SCALE)
}

fn polygon_path(vertices: &[(i32, i32)], max_y: i32, ox: i32, oy: i32) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in vertices.iter().enumerate() {
        let (px, py) = point(x, y, max_y, ox, oy);
        d.push_str(if i == 0 { "M" } else { "L" });
        d.push_str(&format!("{} {} ", px, py));
    }
    d.push('Z');
    d
}

type Segment = ((i32, i32), (i32, i32));

/// Boundary segments of a region: triangle edges that appear exactly once.
/// Coordinates are doubled so diagonal midpoints stay integral.
fn boundary_segments(region: &Region) -> Vec<Segment> {
    use std::collections::BTreeMap;
    let mut count: BTreeMap<Segment, u32> = BTreeMap::new();
    for (x, y, half) in region.triangles() {
        let corners = half.corners();
        for i in 0..3 {
            let a = (2 * (corners[i].0 + x), 2 * (corners[i].1 + y));
            let b = (
                2 * (corners[(i + 1) % 3].0 + x),
                2 * (corners[(i + 1) % 3].1 + y),
            );
            let key = if a <= b { (a, b) } else { (b, a) };
            *count.entry(key).or_default() += 1;
        }
    }
    count
        .into_iter()
        .filter(|(_, c)| *c == 1)
        .map(|(seg, _)| seg)
        .collect()
}

fn draw_region_triangles(
    out: &mut String,
    region: &Region,
    fill: &str,
    max_y: i32,
    ox: i32,
    oy: i32,
) {
    for (x, y, half) in region.triangles() {
        let vs: Vec<(i32, i32)> = half
            .corners()
            .iter()
            .map(|&(cx, cy)| (cx + x, cy + y))
            .collect();
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"{fill}\" stroke=\"{fill}\" stroke-width=\"1\"/>\n",
            polygon_path(&vs, max_y, ox, oy)
        ));
    }
}

/// One solution: each placement's triangles filled with the piece color,
/// placement boundaries stroked dark.
pub fn render_solution(region: &Region, solution: &Solution) -> String {
    let (x0, y0, x1, y1) = region.bounds().expect("nonempty region");
    let max_y = y1 + 1 - y0;
    let width = (x1 + 1 - x0) * SCALE + 2 * MARGIN;
    let height = max_y * SCALE + 2 * MARGIN;
    let mut out = open_svg(width, height);
    for p in solution.placements() {
        let fill = PALETTE[p.piece_index % PALETTE.len()];
        let shifted = p.cells.translate(-x0, -y0);
        draw_region_triangles(&mut out, &shifted, fill, max_y, MARGIN, MARGIN);
    }
    for p in solution.placements() {
        let shifted = p.cells.translate(-x0, -y0);
        // Outline in doubled coordinates to keep diagonal ends exact.
        for ((ax, ay), (bx, by)) in boundary_segments(&shifted) {
            let px = |v: i32| MARGIN + v * SCALE / 2;
            let py = |v: i32| MARGIN + (2 * max_y - v) * SCALE / 2;
            out.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#222222\" stroke-width=\"2\" stroke-linecap=\"round\"/>\n",
                px(ax), py(ay), px(bx), py(by)
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Catalog sheet: every target outlined on a grid with its id.
pub fn render_target_sheet(n: u32, targets: &[ConvexTarget]) -> String {
    let cols = 5usize;
    let cell_w = targets
        .iter()
        .map(|t| t.vertices.iter().map(|v| v.0).max().unwrap_or(0))
        .max()
        .unwrap_or(1)
        * SCALE
        + 2 * MARGIN;
    let cell_h = targets
        .iter()
        .map(|t| t.vertices.iter().map(|v| v.1).max().unwrap_or(0))
        .max()
        .unwrap_or(1)
        * SCALE
        + 2 * MARGIN
        + 20;
    let rows = targets.len().div_ceil(cols);
    let width = cell_w * cols.min(targets.len().max(1)) as i32;
    let height = cell_h * rows as i32;
    let mut out = open_svg(width, height);
    for (i, t) in targets.iter().enumerate() {
        let ox = (i % cols) as i32 * cell_w + MARGIN;
        let oy = (i / cols) as i32 * cell_h + MARGIN;
        let max_y = t.vertices.iter().map(|v| v.1).max().unwrap_or(1);
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"#dddddd\" stroke=\"#222222\" stroke-width=\"2\"/>\n",
            polygon_path(&t.vertices, max_y, ox, oy)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
            ox,
            oy + max_y * SCALE + 16,
            target_id(n, i)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Point-and-line chart of f(1..=max).
pub fn render_ftable_chart(rows: &[(u32, usize)]) -> String {
    let max_f = rows.iter().map(|r| r.1).max().unwrap_or(1).max(1);
    let step_x = 28;
    let step_y = 16;
    let width = MARGIN * 2 + 40 + rows.len() as i32 * step_x;
    let height = MARGIN * 2 + 30 + max_f as i32 * step_y;
    let x = |n: u32| MARGIN + 40 + (n as i32 - 1) * step_x;
    let y = |f: usize| height - MARGIN - 20 - f as i32 * step_y;
    let mut out = open_svg(width, height);
    // Axes.
    out.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#222222\" stroke-width=\"1\"/>\n",
        x0 = x(1) - step_x / 2,
        y0 = y(0),
        x1 = width - MARGIN
    ));
    out.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"#222222\" stroke-width=\"1\"/>\n",
        x0 = x(1) - step_x / 2,
        y0 = y(0),
        y1 = MARGIN
    ));
    let mut path = String::new();
    for (i, &(n, fv)) in rows.iter().enumerate() {
        path.push_str(if i == 0 { "M" } else { "L" });
        path.push_str(&format!("{} {} ", x(n), y(fv)));
    }
    out.push_str(&format!(
        "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        path.trim_end(),
        PALETTE[0]
    ));
    for &(n, fv) in rows {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
            x(n),
            y(fv),
            PALETTE[2]
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            x(n),
            y(0) + 14,
            n
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            x(n),
            y(fv) - 7,
            fv
        ));
    }
    out.push_str("</svg>\n");
    out
}
