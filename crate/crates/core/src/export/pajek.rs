use std::fmt::Write;
use std::path::Path;

use super::{read_text, write_text, ExportError};
use crate::layout::{bounding_box, normalize_with_box, LayoutResult};
use crate::network::{Edge, Node, SimilarityNetwork};
use crate::registry::make_match_key;

/// Smallest glyph size factor written.
pub const GLYPH_FLOOR: f64 = 0.5;
/// Margin of the unit box that coordinates are scaled into.
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PajekReport {
    /// `(line, token)` for vertex attributes the reader does not use.
    pub ignored: Vec<(usize, String)>,
}

fn ordered_positions(
    net: &SimilarityNetwork,
    layout: &LayoutResult,
) -> Result<Vec<[f64; 2]>, ExportError> {
    let aligned = layout.journals.len() == net.nodes.len()
        && layout.positions.len() == net.nodes.len()
        && net
            .nodes
            .iter()
            .zip(&layout.journals)
            .all(|(n, j)| &n.journal == j);
    if aligned {
        return Ok(layout.positions.clone());
    }
    net.nodes
        .iter()
        .map(|n| {
            layout
                .position_of(&n.journal)
                .ok_or_else(|| ExportError::MissingPosition(n.journal.clone()))
        })
        .collect()
}

/// Layout positions scaled into `[MARGIN, 1 - MARGIN]`.
pub fn normalized_positions(
    net: &SimilarityNetwork,
    layout: &LayoutResult,
) -> Result<Vec<[f64; 2]>, ExportError> {
    let pos = ordered_positions(net, layout)?;
    Ok(match bounding_box(&pos) {
        Some(b) => normalize_with_box(&pos, b, MARGIN, 1.0 - MARGIN),
        None => Vec::new(),
    })
}

pub fn render_pajek(net: &SimilarityNetwork, layout: &LayoutResult) -> Result<String, ExportError> {
    let pos = ordered_positions(net, layout)?;
    render(net, bounding_box(&pos), &pos)
}

/// Render using a fixed bounding box, so several files share one scale.
pub fn render_pajek_in_box(
    net: &SimilarityNetwork,
    layout: &LayoutResult,
    bbox: [f64; 4],
) -> Result<String, ExportError> {
    let pos = ordered_positions(net, layout)?;
    render(net, Some(bbox), &pos)
}

/// Weight rounded up to 4 decimals, so a weight above a cutoff stays above it.
fn print_weight(w: f64) -> String {
    let t = (w.clamp(0.0, 1.0) * 1e4 - 1e-7).ceil().max(0.0) / 1e4;
    format!("{t:.4}")
}

fn render(
    net: &SimilarityNetwork,
    bbox: Option<[f64; 4]>,
    pos: &[[f64; 2]],
) -> Result<String, ExportError> {
    let pos = match bbox {
        Some(b) => normalize_with_box(pos, b, MARGIN, 1.0 - MARGIN),
        None => Vec::new(),
    };
    let mut out = String::new();
    writeln!(out, "*Vertices {}", net.nodes.len()).unwrap();
    for (i, (n, p)) in net.nodes.iter().zip(&pos).enumerate() {
        writeln!(
            out,
            "{} \"{}\" {:.4} {:.4} 0.5 ellipse x_fact {:.4} y_fact {:.4} ic {}",
            i + 1,
            n.label.replace('"', "'"),
            p[0],
            // Pajek's y axis points down
            1.0 - p[1],
            n.size_horizontal.max(GLYPH_FLOOR),
            n.size_main.max(GLYPH_FLOOR),
            n.color
        )
        .unwrap();
    }
    out.push_str("*Edges\n");
    for e in &net.edges {
        if e.a >= net.nodes.len() || e.b >= net.nodes.len() {
            return Err(ExportError::Invalid(format!(
                "edge {}-{} outside the node list",
                e.a, e.b
            )));
        }
        writeln!(out, "{} {} {}", e.a + 1, e.b + 1, print_weight(e.weight)).unwrap();
    }
    Ok(out)
}

pub fn write_pajek(
    net: &SimilarityNetwork,
    layout: &LayoutResult,
    path: impl AsRef<Path>,
) -> Result<(), ExportError> {
    write_text(path, &render_pajek(net, layout)?)
}

pub fn read_pajek(
    path: impl AsRef<Path>,
) -> Result<(SimilarityNetwork, LayoutResult, PajekReport), ExportError> {
    parse_pajek(&read_text(path)?)
}

fn err(line: usize, message: impl Into<String>) -> ExportError {
    ExportError::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<f64, ExportError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("bad {what} '{tok}'")))
}

/// Split a vertex line into id, quoted label and the remaining tokens.
fn split_vertex(text: &str, line: usize) -> Result<(usize, String, Vec<&str>), ExportError> {
    let text = text.trim();
    let (id, rest) = text
        .split_once(char::is_whitespace)
        .ok_or_else(|| err(line, "vertex line without label"))?;
    let id: usize = id
        .parse()
        .map_err(|_| err(line, format!("bad vertex id '{id}'")))?;
    let rest = rest.trim_start();
    let (label, tail) = if let Some(r) = rest.strip_prefix('"') {
        let end = r.find('"').ok_or_else(|| err(line, "unterminated label"))?;
        (r[..end].to_string(), &r[end + 1..])
    } else {
        let (l, t) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        (l.to_string(), t)
    };
    Ok((id, label, tail.split_whitespace().collect()))
}

/// Parse the dialect written by [`render_pajek`].
pub fn parse_pajek(
    text: &str,
) -> Result<(SimilarityNetwork, LayoutResult, PajekReport), ExportError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut report = PajekReport::default();
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| err(1, "empty file"))?;
    let mut parts = header.split_whitespace();
    let n: usize = match (parts.next(), parts.next(), parts.next()) {
        (Some(h), Some(n), None) if h.eq_ignore_ascii_case("*vertices") => n
            .parse()
            .map_err(|_| err(hline, format!("bad vertex count '{n}'")))?,
        _ => {
            return Err(err(
                hline,
                format!("expected '*Vertices N', found '{header}'"),
            ))
        }
    };
    let mut nodes = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    while nodes.len() < n {
        let (ln, l) = lines.next().ok_or_else(|| {
            err(
                hline,
                format!("expected {n} vertices, found {}", nodes.len()),
            )
        })?;
        if l.trim().is_empty() {
            continue;
        }
        if l.trim_start().starts_with('*') {
            return Err(err(
                ln,
                format!("expected {n} vertices, found {}", nodes.len()),
            ));
        }
        let (id, label, toks) = split_vertex(l, ln)?;
        if id != nodes.len() + 1 {
            return Err(err(ln, format!("vertex id {id} out of sequence")));
        }
        let mut it = toks.into_iter();
        let x = number(it.next(), ln, "x")?;
        let y = 1.0 - number(it.next(), ln, "y")?;
        let _z = number(it.next(), ln, "z")?;
        let key = make_match_key(&label)
            .map(|k| k.key)
            .unwrap_or_else(|_| label.clone());
        let mut node = Node::new(key, label, 0);
        while let Some(tok) = it.next() {
            match tok {
                "ellipse" => {}
                "x_fact" => node.size_horizontal = number(it.next(), ln, "x_fact")?,
                "y_fact" => node.size_main = number(it.next(), ln, "y_fact")?,
                "ic" => {
                    node.color = it
                        .next()
                        .ok_or_else(|| err(ln, "missing color"))?
                        .to_string()
                }
                other => report.ignored.push((ln, other.to_string())),
            }
        }
        nodes.push(node);
        positions.push([x, y]);
    }
    let mut edges = Vec::new();
    let mut in_edges = false;
    for (ln, l) in lines {
        let t = l.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('*') {
            if t.eq_ignore_ascii_case("*edges") && !in_edges {
                in_edges = true;
                continue;
            }
            return Err(err(ln, format!("unexpected section header '{t}'")));
        }
        if !in_edges {
            return Err(err(ln, "line outside any section"));
        }
        let mut it = t.split_whitespace();
        let a = number(it.next(), ln, "edge source")? as usize;
        let b = number(it.next(), ln, "edge target")? as usize;
        let weight = number(it.next(), ln, "edge weight")?;
        for v in [a, b] {
            if v == 0 || v > n {
                return Err(err(ln, format!("edge endpoint {v} outside 1..={n}")));
            }
        }
        if a == b {
            return Err(err(ln, format!("self-loop on vertex {a}")));
        }
        edges.push(Edge {
            a: a.min(b) - 1,
            b: a.max(b) - 1,
            weight,
        });
    }
    if !in_edges {
        return Err(err(text.lines().count().max(1), "missing '*Edges' section"));
    }
    let layout = LayoutResult {
        journals: nodes.iter().map(|n| n.journal.clone()).collect(),
        positions,
        initial_stress: 0.0,
        final_stress: 0.0,
        anchor_penalty: 0.0,
        iterations: 0,
        converged: true,
        trace: Vec::new(),
    };
    Ok((SimilarityNetwork { nodes, edges }, layout, report))
}
