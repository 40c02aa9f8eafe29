//! Drawing of a rank 2 arrangement: hyperplanes as lines, bounded chambers shaded.

use std::fmt::Write as _;
use std::path::Path;

use hypertoric::arrangement::{core, StackyArrangement};
use hypertoric::multifan::circuits;
use hypertoric::{Int, Rat};
use num_traits::ToPrimitive;

use crate::CliError;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn f(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn fi(x: &Int) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn internal(message: String) -> CliError {
    CliError::Internal {
        path: "$".into(),
        message,
    }
}

/// Intersection of `a.x + c = 0` and `b.x + e = 0`, if the normals are independent.
fn meet(a: &[f64; 2], c: f64, b: &[f64; 2], e: f64) -> Option<[f64; 2]> {
    let det = a[0] * b[1] - a[1] * b[0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some([(-c * b[1] + e * a[1]) / det, (-a[0] * e + b[0] * c) / det])
}

/// Segment of `n.x + c = 0` inside the box `[lo, hi]^2`.
fn clip(n: &[f64; 2], c: f64, lo: [f64; 2], hi: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    let mut hits: Vec<[f64; 2]> = Vec::new();
    for (axis, value) in [(0, lo[0]), (0, hi[0]), (1, lo[1]), (1, hi[1])] {
        let other = 1 - axis;
        if n[other].abs() < 1e-12 {
            continue;
        }
        let t = -(c + n[axis] * value) / n[other];
        if t < lo[other] - 1e-9 || t > hi[other] + 1e-9 {
            continue;
        }
        let mut p = [0.0; 2];
        p[axis] = value;
        p[other] = t;
        if !hits
            .iter()
            .any(|q| (q[0] - p[0]).abs() < 1e-9 && (q[1] - p[1]).abs() < 1e-9)
        {
            hits.push(p);
        }
    }
    (hits.len() >= 2).then(|| (hits[0], hits[1]))
}

pub fn render(arr: &StackyArrangement) -> Result<String, CliError> {
    if arr.d() != 2 {
        return Err(CliError::Validation {
            path: "$.rank".into(),
            message: format!(
                "UnsupportedDimension: drawing needs rank 2, got {}",
                arr.d()
            ),
        });
    }
    let lines: Vec<(usize, [f64; 2], f64)> = arr
        .hyperplanes()
        .iter()
        .map(|h| (h.index, [fi(&h.normal[0]), fi(&h.normal[1])], fi(&h.offset)))
        .collect();
    let bounded = core(arr).map_err(|e| internal(e.to_string()))?;
    let cs = circuits(arr).map_err(|e| internal(e.to_string()))?;

    let mut points: Vec<[f64; 2]> = Vec::new();
    for (i, (_, a, c)) in lines.iter().enumerate() {
        for (_, b, e) in &lines[i + 1..] {
            points.extend(meet(a, *c, b, *e));
        }
    }
    if points.is_empty() {
        points.push([0.0, 0.0]);
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in &points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    for k in 0..2 {
        let mid = (lo[k] + hi[k]) / 2.0;
        lo[k] = mid - 0.75 * span;
        hi[k] = mid + 0.75 * span;
    }
    let scale = (SIZE - 2.0 * MARGIN) / (1.5 * span);
    let px = |p: [f64; 2]| -> (f64, f64) {
        (
            MARGIN + (p[0] - lo[0]) * scale,
            SIZE - MARGIN - (p[1] - lo[1]) * scale,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, (_, fan)) in bounded.iter().enumerate() {
        let mut verts: Vec<[f64; 2]> = Vec::new();
        for v in &fan.vertices {
            let p = [f(&v[0]), f(&v[1])];
            if !verts
                .iter()
                .any(|q| (q[0] - p[0]).abs() < 1e-9 && (q[1] - p[1]).abs() < 1e-9)
            {
                verts.push(p);
            }
        }
        let n = verts.len() as f64;
        let cx = verts.iter().map(|p| p[0]).sum::<f64>() / n;
        let cy = verts.iter().map(|p| p[1]).sum::<f64>() / n;
        verts.sort_by(|a, b| {
            let ta = (a[1] - cy).atan2(a[0] - cx);
            let tb = (b[1] - cy).atan2(b[0] - cx);
            ta.total_cmp(&tb)
        });
        let coords: Vec<String> = verts
            .iter()
            .map(|&p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon class="chamber" data-chamber="{}" points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>"##,
            k + 1,
            coords.join(" ")
        );
    }
    for (index, n, c) in &lines {
        let Some((a, b)) = clip(n, *c, lo, hi) else {
            continue;
        };
        let (x1, y1) = px(a);
        let (x2, y2) = px(b);
        let _ = writeln!(
            out,
            r#"<line class="hyperplane" data-index="{0}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="1.5"/>"#,
            index + 1
        );
        let (lx, ly) = (x2 + (x1 - x2) * 0.05, y2 + (y1 - y2) * 0.05);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="sans-serif" font-size="12">H{}</text>"#,
            index + 1
        );
    }
    for (k, c) in cs.iter().enumerate() {
        let support: Vec<String> = c.support.iter().map(|i| (i + 1).to_string()).collect();
        let weights: Vec<String> = c.weights.iter().map(Int::to_string).collect();
        let _ = writeln!(
            out,
            r#"<text class="circuit" x="8" y="{:.2}" font-family="sans-serif" font-size="11">circuit {}: {{{}}} weights ({})</text>"#,
            16.0 + 14.0 * k as f64,
            k + 1,
            support.join(","),
            weights.join(", ")
        );
    }
    out += "</svg>\n";
    Ok(out)
}

pub fn write_svg(arr: &StackyArrangement, path: &Path) -> Result<(), CliError> {
    let svg = render(arr)?;
    std::fs::write(path, svg).map_err(|e| CliError::Validation {
        path: "--svg".into(),
        message: format!("cannot write {}: {e}", path.display()),
    })
}
