//! SVG diamond of the unit table: the root unit on top, x-levels stepping down-left and y-levels
//! stepping down-right.

use std::fmt::Write;

use crate::unified::TreeStats;

const CELL_W: f64 = 112.0;
const CELL_H: f64 = 52.0;
const GAP_X: f64 = 12.0;
const GAP_Y: f64 = 22.0;
const MARGIN: f64 = 16.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(stats: &TreeStats, title: &str) -> String {
    let (lx, ly) = (stats.lx as f64, stats.ly as f64);
    let step_x = (CELL_W + GAP_X) / 2.0;
    let step_y = CELL_H + GAP_Y;
    let rows = stats.lx + stats.ly + 1;
    let width = 2.0 * MARGIN + (lx + ly) * step_x + CELL_W;
    let height = 2.0 * MARGIN + 24.0 + rows as f64 * step_y - GAP_Y;
    // top-left corner of unit (a, b)
    let origin = |a: u32, b: u32| {
        let x = MARGIN + (lx + b as f64 - a as f64) * step_x;
        let y = MARGIN + 24.0 + (a + b) as f64 * step_y;
        (x, y)
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{MARGIN}" y="{}" font-size="13">{} - {} rects, {} nodes, Lx={}, Ly={}</text>"#,
        MARGIN + 10.0,
        escape(title),
        stats.rects,
        stats.nodes,
        stats.lx,
        stats.ly
    )
    .unwrap();

    svg.push_str("<g class=\"links\" stroke=\"#999\" stroke-width=\"1\">\n");
    for u in &stats.units {
        let (x, y) = origin(u.a, u.b);
        let (cx, bottom) = (x + CELL_W / 2.0, y + CELL_H);
        if u.a < stats.lx {
            let (tx, ty) = origin(u.a + 1, u.b);
            writeln!(svg, r#"<line class="x-link" x1="{cx}" y1="{bottom}" x2="{}" y2="{ty}"/>"#, tx + CELL_W / 2.0).unwrap();
        }
        if u.b < stats.ly {
            let (tx, ty) = origin(u.a, u.b + 1);
            writeln!(svg, r#"<line class="y-link" x1="{cx}" y1="{bottom}" x2="{}" y2="{ty}"/>"#, tx + CELL_W / 2.0).unwrap();
        }
    }
    svg.push_str("</g>\n");

    let densest = stats.units.iter().map(|u| u.nodes).max().unwrap_or(0).max(1) as f64;
    for u in &stats.units {
        let (x, y) = origin(u.a, u.b);
        // shade by node count relative to the densest unit
        let light = 96.0 - 36.0 * (u.nodes as f64 / densest);
        writeln!(svg, r#"<g class="unit" data-a="{}" data-b="{}" data-nodes="{}" data-stored="{}">"#, u.a, u.b, u.nodes, u.stored).unwrap();
        writeln!(
            svg,
            r##"<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" rx="6" fill="hsl(210,60%,{light:.1}%)" stroke="#345"/>"##
        )
        .unwrap();
        let cx = x + CELL_W / 2.0;
        writeln!(svg, r#"<text x="{cx}" y="{}" font-size="11" text-anchor="middle">({}, {})</text>"#, y + 15.0, u.a, u.b).unwrap();
        writeln!(svg, r#"<text x="{cx}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, y + 31.0, u.nodes).unwrap();
        writeln!(svg, r#"<text x="{cx}" y="{}" font-size="10" text-anchor="middle">stored {}</text>"#, y + 45.0, u.stored).unwrap();
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Tree;

    #[test]
    fn empty_dataset_has_one_cell() {
        let svg = render_svg(&Tree::build(&[]).unwrap().stats(), "empty");
        assert_eq!(svg.matches(r#"class="unit""#).count(), 1);
        assert!(svg.contains(r#"data-nodes="0""#));
        assert!(!svg.contains("<line"));
    }

    #[test]
    fn title_is_escaped() {
        let svg = render_svg(&Tree::build(&[]).unwrap().stats(), "a<b & \"c\"");
        assert!(svg.contains("a&lt;b &amp; &quot;c&quot;"));
    }
}
