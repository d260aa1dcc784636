//! Static SVG drawings of packings.

use std::fmt::Write;

use crate::engine::PhaseEvent;
use crate::io::PackingFile;

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    /// Draw the ring boundaries recorded in the packing trace.
    pub show_rings: bool,
    /// Label each disk with its packing index.
    pub labels: bool,
}

const PALETTE: [&str; 8] = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45"];

fn num(x: f64) -> String {
    // Fixed precision keeps the output stable and readable; -0 prints as 0.
    let s = format!("{:.9}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Render `packing` in container units. The y-axis points up.
pub fn render_svg(packing: &PackingFile, options: RenderOptions) -> String {
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"800\" height=\"800\">\n",
    );
    out.push_str("  <circle class=\"container\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.004\"/>\n");

    if options.show_rings {
        let rings = packing.trace.iter().flatten().filter_map(|e| match e {
            PhaseEvent::RingCreated { shape, .. } => Some(shape),
            _ => None,
        });
        for ring in rings {
            let (cx, cy) = (num(ring.center.x), num(-ring.center.y));
            let _ = writeln!(out, "  <g class=\"ring\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.002\" stroke-dasharray=\"0.01 0.01\">");
            for r in [ring.r_out, ring.r_in] {
                let _ = writeln!(out, "    <circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\"/>", num(r));
            }
            out.push_str("  </g>\n");
        }
    }

    for (i, p) in packing.placements.iter().enumerate() {
        let _ = writeln!(
            out,
            "  <circle class=\"disk\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.8\" stroke=\"#222\" stroke-width=\"0.002\"/>",
            num(p.x),
            num(-p.y),
            num(p.radius),
            PALETTE[i % PALETTE.len()]
        );
        if options.labels {
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\">{i}</text>",
                num(p.x),
                num(-p.y),
                num(p.radius.min(0.05))
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
