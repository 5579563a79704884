//! Schematic drawings: circles with their marked points, each singular set drawn as a star
//! joining its points, annotated with its oriented cyclic order.

use std::fmt::Write;

use crate::gauss::{GaussDiagram, PointId};

const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

pub fn to_dot(d: &GaussDiagram) -> String {
    let mut out = String::from("digraph gauss {\n  node [shape=point];\n");
    for (c, pts) in d.circles().iter().enumerate() {
        if pts.is_empty() {
            let _ = writeln!(out, "  loop{c} [shape=circle, label=\"\"];");
            continue;
        }
        for (i, p) in pts.iter().enumerate() {
            let q = pts[(i + 1) % pts.len()];
            let _ = writeln!(out, "  p{p} -> p{q} [color=gray40, label=\"c{c}\"];");
        }
    }
    for (i, (l, o)) in d.orders().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, "  s{} [shape=star, color=\"{color}\", xlabel=\"{l} {o}\"];", l.0);
        for p in o.points() {
            let _ = writeln!(out, "  s{} -> p{p} [dir=none, style=dashed, color=\"{color}\"];", l.0);
        }
    }
    out.push_str("}\n");
    out
}

pub fn to_svg(d: &GaussDiagram) -> String {
    let radius = 80.0;
    let gap = 40.0;
    let n = d.circles().len().max(1) as f64;
    let width = n * (2.0 * radius + gap) + gap;
    let legend = 22.0 * d.orders().len() as f64;
    let height = 2.0 * radius + 2.0 * gap + legend + 10.0;
    let mut pos = std::collections::HashMap::<PointId, (f64, f64)>::new();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"monospace\" font-size=\"12\">"
    );
    for (c, pts) in d.circles().iter().enumerate() {
        let cx = gap + radius + c as f64 * (2.0 * radius + gap);
        let cy = gap + radius;
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{radius}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\"/>"
        );
        // orientation arrow at the top, counterclockwise
        let _ = writeln!(
            out,
            "  <path d=\"M {:.1} {:.1} l 8 -5 l 0 10 z\" fill=\"#555\"/>",
            cx - 4.0,
            cy - radius
        );
        for (i, &p) in pts.iter().enumerate() {
            let angle = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * i as f64 / pts.len() as f64;
            let (x, y) = (cx + radius * angle.cos(), cy - radius * angle.sin());
            pos.insert(p, (x, y));
        }
    }
    for (i, (l, o)) in d.orders().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = o.points().iter().map(|p| pos[p]).collect();
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        let center = (sx / pts.len() as f64, sy / pts.len() as f64);
        for &(x, y) in &pts {
            let _ = writeln!(
                out,
                "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{y:.1}\" stroke=\"{color}\" stroke-dasharray=\"4 3\"/>",
                center.0, center.1
            );
        }
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{l}</text>",
            center.0 + 4.0,
            center.1 - 4.0
        );
        for p in o.points() {
            let (x, y) = pos[&p];
            let _ = writeln!(out, "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"{color}\"/>");
            let _ = writeln!(out, "  <text x=\"{:.1}\" y=\"{:.1}\" fill=\"#333\">{p}</text>", x + 6.0, y - 6.0);
        }
        let _ = writeln!(
            out,
            "  <text x=\"{gap}\" y=\"{:.1}\" fill=\"{color}\">{l}: {o}</text>",
            2.0 * radius + 2.0 * gap + 22.0 * i as f64 + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
