//! Deterministic SVG rendering of a node set: nodes as circles colored by
//! class, maximal lines solid, proper lines dashed, other used lines dotted.
//! Identical input always produces byte-identical output; coordinates are
//! the only lossy part and are printed with six significant digits.

use gcn::usage::{used_nodes_pipeline, LineClass};
use gcn::{Context, Error, GeomLine as Line};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 760.0;
const MARGIN: f64 = 40.0;
const LEGEND_H: f64 = 70.0;

/// Six significant digits, plain decimal notation.
fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Frame {
    fn to_svg(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.min_x) * self.scale,
            // svg y axis points down
            HEIGHT - MARGIN - (y - self.min_y) * self.scale,
        )
    }
}

/// Clips the line ax + by + c = 0 to the world-coordinate box, returning
/// segment endpoints when the line crosses it.
fn clip_line(l: &Line, min_x: f64, max_x: f64, min_y: f64, max_y: f64) -> Option<[(f64, f64); 2]> {
    let a = l.a().to_string().parse::<f64>().unwrap_or(0.0);
    let b = l.b().to_string().parse::<f64>().unwrap_or(0.0);
    let c = l.c().to_string().parse::<f64>().unwrap_or(0.0);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let eps = 1e-9 * (1.0 + max_x.abs() + max_y.abs());
    if b != 0.0 {
        for x in [min_x, max_x] {
            let y = -(a * x + c) / b;
            if y >= min_y - eps && y <= max_y + eps {
                pts.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [min_y, max_y] {
            let x = -(b * y + c) / a;
            if x >= min_x - eps && x <= max_x + eps {
                pts.push((x, y));
            }
        }
    }
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < eps && (p.1 - q.1).abs() < eps);
    if pts.len() < 2 {
        return None;
    }
    // farthest pair keeps the choice deterministic when corners coincide
    let mut best = [(pts[0]), (pts[1])];
    let mut best_d = -1.0;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = (pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2);
            if d > best_d {
                best_d = d;
                best = [pts[i], pts[j]];
            }
        }
    }
    Some(best)
}

pub fn render(ctx: &mut Context) -> Result<String, Error> {
    let report = ctx.analyze()?;
    let nodes: Vec<(f64, f64, usize)> = report
        .node_classes
        .iter()
        .map(|(p, k)| (p.x.to_f64(), p.y.to_f64(), *k))
        .collect();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y, _) in &nodes {
        min_x = min_x.min(*x);
        max_x = max_x.max(*x);
        min_y = min_y.min(*y);
        max_y = max_y.max(*y);
    }
    let span_x = (max_x - min_x).max(1e-6);
    let span_y = (max_y - min_y).max(1e-6);
    let pad_x = span_x * 0.08;
    let pad_y = span_y * 0.08;
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;
    let scale =
        ((WIDTH - 2.0 * MARGIN) / (max_x - min_x)).min((HEIGHT - 2.0 * MARGIN) / (max_y - min_y));
    let frame = Frame {
        min_x,
        min_y,
        scale,
    };

    // classify lines worth drawing: anything used, plus maximal lines
    let lines: Vec<Line> = ctx.catalog().iter().map(|e| e.line.clone()).collect();
    let mut styled: Vec<(Line, &'static str)> = Vec::new();
    let gc = ctx.is_gc()?;
    for l in &lines {
        let style = if report.maximal_lines.contains(l) {
            "maximal"
        } else if gc {
            match used_nodes_pipeline(ctx, l)?.classification.variant {
                LineClass::Proper => "proper",
                LineClass::ProperMinus(_) => "used",
                _ => continue,
            }
        } else {
            continue;
        };
        styled.push((l.clone(), style));
    }

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = sig6(WIDTH),
        h = sig6(HEIGHT + LEGEND_H),
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (l, style) in &styled {
        let Some([p, q]) = clip_line(l, min_x, max_x, min_y, max_y) else {
            continue;
        };
        let (x1, y1) = frame.to_svg(p.0, p.1);
        let (x2, y2) = frame.to_svg(q.0, q.1);
        let (color, dash, width) = match *style {
            "maximal" => ("#444444", "none", 2.0),
            "proper" => ("#b05cc4", "9,5", 1.6),
            _ => ("#7f7f7f", "2,4", 1.2),
        };
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\" stroke-dasharray=\"{dash}\"/>\n",
            sig6(x1), sig6(y1), sig6(x2), sig6(y2), sig6(width),
        ));
    }
    for (x, y, class) in &nodes {
        let (cx, cy) = frame.to_svg(*x, *y);
        let color = match class {
            0 => "#2ca02c",
            1 => "#1f77b4",
            _ => "#d62728",
        };
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{color}\" stroke=\"black\" stroke-width=\"0.8\"/>\n",
            sig6(cx),
            sig6(cy),
        ));
    }
    // legend
    let ly = HEIGHT + 8.0;
    out.push_str(&format!(
        "<g font-family=\"sans-serif\" font-size=\"13\">\n\
         <circle cx=\"{x0}\" cy=\"{y0}\" r=\"5\" fill=\"#2ca02c\"/><text x=\"{x0t}\" y=\"{yt}\">0m node</text>\n\
         <circle cx=\"{x1}\" cy=\"{y0}\" r=\"5\" fill=\"#1f77b4\"/><text x=\"{x1t}\" y=\"{yt}\">1m node</text>\n\
         <circle cx=\"{x2}\" cy=\"{y0}\" r=\"5\" fill=\"#d62728\"/><text x=\"{x2t}\" y=\"{yt}\">2m node</text>\n\
         <line x1=\"{x3}\" y1=\"{y0}\" x2=\"{x3e}\" y2=\"{y0}\" stroke=\"#444444\" stroke-width=\"2\"/><text x=\"{x3t}\" y=\"{yt}\">maximal</text>\n\
         <line x1=\"{x4}\" y1=\"{y0}\" x2=\"{x4e}\" y2=\"{y0}\" stroke=\"#b05cc4\" stroke-width=\"1.6\" stroke-dasharray=\"9,5\"/><text x=\"{x4t}\" y=\"{yt}\">proper</text>\n\
         <line x1=\"{x5}\" y1=\"{y0}\" x2=\"{x5e}\" y2=\"{y0}\" stroke=\"#7f7f7f\" stroke-width=\"1.2\" stroke-dasharray=\"2,4\"/><text x=\"{x5t}\" y=\"{yt}\">used</text>\n\
         </g>\n",
        x0 = sig6(MARGIN),
        x0t = sig6(MARGIN + 10.0),
        x1 = sig6(MARGIN + 90.0),
        x1t = sig6(MARGIN + 100.0),
        x2 = sig6(MARGIN + 180.0),
        x2t = sig6(MARGIN + 190.0),
        x3 = sig6(MARGIN + 270.0),
        x3e = sig6(MARGIN + 300.0),
        x3t = sig6(MARGIN + 306.0),
        x4 = sig6(MARGIN + 380.0),
        x4e = sig6(MARGIN + 410.0),
        x4t = sig6(MARGIN + 416.0),
        x5 = sig6(MARGIN + 480.0),
        x5e = sig6(MARGIN + 510.0),
        x5t = sig6(MARGIN + 516.0),
        y0 = sig6(ly + 12.0),
        yt = sig6(ly + 17.0),
    ));
    out.push_str("</svg>\n");
    Ok(out)
}
