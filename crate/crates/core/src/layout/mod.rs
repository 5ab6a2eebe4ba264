//! Kamada-Kawai stress layouts and anchored layouts for frame sequences.

mod stress;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::network::{connected_components, SimilarityNetwork};
use crate::params::AnalysisParams;

pub use stress::{shortest_paths, StressFunction};

/// Floor added to `1 - weight` so that no edge has zero length.
pub const EDGE_EPSILON: f64 = 0.01;
pub const GRADIENT_TOLERANCE: f64 = 1e-6;
pub const MOVES_PER_NODE: usize = 10_000;
pub const DESIRED_LENGTH: f64 = 1.0;
/// Horizontal gap between packed components.
pub const COMPONENT_GAP: f64 = 1.0;

pub fn edge_length(weight: f64) -> f64 {
    1.0 - weight + EDGE_EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutResult {
    pub journals: Vec<String>,
    /// Aligned with the network's nodes.
    pub positions: Vec<[f64; 2]>,
    pub initial_stress: f64,
    pub final_stress: f64,
    /// λ-weighted squared displacement from the previous frame.
    pub anchor_penalty: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value after every |V| moves, first entry initial.
    pub trace: Vec<f64>,
}

impl LayoutResult {
    fn empty() -> Self {
        LayoutResult {
            journals: Vec::new(),
            positions: Vec::new(),
            initial_stress: 0.0,
            final_stress: 0.0,
            anchor_penalty: 0.0,
            iterations: 0,
            converged: true,
            trace: vec![0.0],
        }
    }

    pub fn position_of(&self, journal: &str) -> Option<[f64; 2]> {
        self.journals
            .iter()
            .position(|j| j == journal)
            .map(|i| self.positions[i])
    }

    /// `(min_x, min_y, max_x, max_y)`, or `None` when empty.
    pub fn bounding_box(&self) -> Option<[f64; 4]> {
        bounding_box(&self.positions)
    }
}

pub fn bounding_box(pos: &[[f64; 2]]) -> Option<[f64; 4]> {
    let first = pos.first()?;
    Some(
        pos.iter()
            .fold([first[0], first[1], first[0], first[1]], |b, p| {
                [
                    b[0].min(p[0]),
                    b[1].min(p[1]),
                    b[2].max(p[0]),
                    b[3].max(p[1]),
                ]
            }),
    )
}

struct Descent {
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn argmax_gradient(grad: &[[f64; 2]]) -> (usize, f64) {
    grad.iter()
        .enumerate()
        .map(|(i, g)| (i, g[0].hypot(g[1])))
        .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best })
}

/// Move `i` along `dir`, halving until the node energy decreases.
fn line_search(sf: &StressFunction, i: usize, dir: [f64; 2], pos: &[[f64; 2]]) -> Option<[f64; 2]> {
    let old = pos[i];
    let mut t = 1.0;
    for _ in 0..60 {
        let p = [old[0] + t * dir[0], old[1] + t * dir[1]];
        if p != old && sf.node_energy_delta(i, p, pos) < 0.0 {
            return Some(p);
        }
        t *= 0.5;
    }
    None
}

fn minimize(sf: &StressFunction, pos: &mut [[f64; 2]]) -> Descent {
    let n = sf.len();
    let mut grad = sf.gradient(pos);
    let mut trace = vec![sf.value(pos)];
    let cap = MOVES_PER_NODE * n;
    let mut moves = 0;
    let mut converged = false;
    loop {
        let (mut i, mut gmax) = argmax_gradient(&grad);
        if gmax < GRADIENT_TOLERANCE {
            grad = sf.gradient(pos);
            (i, gmax) = argmax_gradient(&grad);
            if gmax < GRADIENT_TOLERANCE {
                converged = true;
                break;
            }
        }
        if moves >= cap {
            break;
        }
        let old = pos[i];
        let g = grad[i];
        let h = sf.node_hessian(i, old, pos);
        let det = h[0] * h[2] - h[1] * h[1];
        let down = [-g[0], -g[1]];
        let newton = if det > 0.0 && h[0] > 0.0 {
            let d = [
                -(h[2] * g[0] - h[1] * g[1]) / det,
                -(h[0] * g[1] - h[1] * g[0]) / det,
            ];
            (d[0] * g[0] + d[1] * g[1] < 0.0).then_some(d)
        } else {
            None
        };
        let step = newton
            .and_then(|d| line_search(sf, i, d, pos))
            .or_else(|| line_search(sf, i, down, pos));
        let Some(new) = step else {
            break;
        };
        pos[i] = new;
        for (j, gj) in grad.iter_mut().enumerate() {
            if j != i {
                let a = sf.pair_gradient(j, i, pos[j], old);
                let b = sf.pair_gradient(j, i, pos[j], new);
                gj[0] += b[0] - a[0];
                gj[1] += b[1] - a[1];
            }
        }
        grad[i] = sf.node_gradient(i, new, pos);
        moves += 1;
        if moves % n == 0 {
            grad = sf.gradient(pos);
            trace.push(sf.value(pos));
        }
    }
    trace.push(sf.value(pos));
    Descent {
        iterations: moves,
        converged,
        trace,
    }
}

fn random_disk(rng: &mut ChaCha8Rng, center: [f64; 2], radius: f64) -> [f64; 2] {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    [center[0] + r * theta.cos(), center[1] + r * theta.sin()]
}

fn initial_radius(sf: &StressFunction) -> f64 {
    (sf.max_target() / 2.0).max(0.5)
}

/// Stress function and node list of one component.
fn component(net: &SimilarityNetwork, nodes: &[usize]) -> StressFunction {
    let mut local = vec![usize::MAX; net.nodes.len()];
    for (k, &v) in nodes.iter().enumerate() {
        local[v] = k;
    }
    let edges: Vec<(usize, usize, f64)> = net
        .edges
        .iter()
        .filter(|e| local[e.a] != usize::MAX)
        .map(|e| {
            (
                local[e.a],
                local[e.b],
                edge_length(e.weight.clamp(0.0, 1.0)),
            )
        })
        .collect();
    StressFunction::from_edges(nodes.len(), &edges, DESIRED_LENGTH)
}

/// Shift so the box starts at `x0` horizontally and is centred on y = 0.
fn place(pos: &mut [[f64; 2]], x0: f64) {
    if let Some(b) = bounding_box(pos) {
        let (dx, dy) = (x0 - b[0], -(b[1] + b[3]) / 2.0);
        for p in pos.iter_mut() {
            p[0] += dx;
            p[1] += dy;
        }
    }
}

struct Accumulator {
    result: LayoutResult,
    traces: Vec<Vec<f64>>,
    converged: bool,
}

impl Accumulator {
    fn new(net: &SimilarityNetwork) -> Self {
        let mut result = LayoutResult::empty();
        result.journals = net.nodes.iter().map(|n| n.journal.clone()).collect();
        result.positions = vec![[0.0, 0.0]; net.nodes.len()];
        result.trace.clear();
        Accumulator {
            result,
            traces: Vec::new(),
            converged: true,
        }
    }

    fn add(
        &mut self,
        sf: &StressFunction,
        nodes: &[usize],
        init: &[[f64; 2]],
        pos: &[[f64; 2]],
        d: Descent,
    ) {
        self.result.initial_stress += sf.value(init);
        self.result.final_stress += sf.stress(pos);
        self.result.anchor_penalty += sf.anchor_penalty(pos);
        self.result.iterations += d.iterations;
        self.converged &= d.converged;
        self.traces.push(d.trace);
        for (k, &v) in nodes.iter().enumerate() {
            self.result.positions[v] = pos[k];
        }
    }

    fn finish(mut self) -> LayoutResult {
        let len = self.traces.iter().map(Vec::len).max().unwrap_or(0);
        self.result.trace = (0..len)
            .map(|s| self.traces.iter().map(|t| t[s.min(t.len() - 1)]).sum())
            .collect();
        if self.result.trace.is_empty() {
            self.result.trace.push(0.0);
        }
        self.result.converged = self.converged;
        self.result
    }
}

/// Kamada-Kawai layout; components are laid out separately and packed
/// left to right.
pub fn kamada_kawai(net: &SimilarityNetwork, params: &AnalysisParams) -> LayoutResult {
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let mut acc = Accumulator::new(net);
    let mut x0 = 0.0;
    for nodes in connected_components(net) {
        let sf = component(net, &nodes);
        let radius = initial_radius(&sf);
        let init: Vec<[f64; 2]> = (0..nodes.len())
            .map(|_| random_disk(&mut rng, [0.0, 0.0], radius))
            .collect();
        let mut pos = init.clone();
        let descent = minimize(&sf, &mut pos);
        place(&mut pos, x0);
        x0 = bounding_box(&pos).map_or(x0, |b| b[2]) + COMPONENT_GAP;
        acc.add(&sf, &nodes, &init, &pos, descent);
    }
    acc.finish()
}

/// Layouts for a year-ordered sequence of networks.
///
/// Frame `t > 0` minimizes its stress plus `lambda` times the squared
/// displacement of the nodes shared with frame `t - 1`, starting from their
/// previous positions. Components sharing no node with the previous frame
/// are laid out on their own and packed to the right.
pub fn anchored_sequence_layout(
    nets: &[SimilarityNetwork],
    lambda: f64,
    params: &AnalysisParams,
) -> Vec<LayoutResult> {
    let mut out: Vec<LayoutResult> = Vec::with_capacity(nets.len());
    for (t, net) in nets.iter().enumerate() {
        let frame = match out.last() {
            Some(prev) if lambda > 0.0 => anchored_frame(net, prev, lambda, params, t as u64),
            _ => kamada_kawai(net, params),
        };
        out.push(frame);
    }
    out
}

fn anchored_frame(
    net: &SimilarityNetwork,
    prev: &LayoutResult,
    lambda: f64,
    params: &AnalysisParams,
    frame: u64,
) -> LayoutResult {
    let previous: HashMap<&str, [f64; 2]> = prev
        .journals
        .iter()
        .map(String::as_str)
        .zip(prev.positions.iter().copied())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    rng.set_stream(frame);
    let mut acc = Accumulator::new(net);
    let mut free = Vec::new();
    let mut right: Option<f64> = None;
    for nodes in connected_components(net) {
        let anchors: Vec<Option<[f64; 2]>> = nodes
            .iter()
            .map(|&v| previous.get(net.nodes[v].journal.as_str()).copied())
            .collect();
        if anchors.iter().all(Option::is_none) {
            free.push(nodes);
            continue;
        }
        let sf = component(net, &nodes).with_anchors(lambda, anchors.clone());
        let fixed: Vec<[f64; 2]> = anchors.iter().flatten().copied().collect();
        let centroid = [
            fixed.iter().map(|p| p[0]).sum::<f64>() / fixed.len() as f64,
            fixed.iter().map(|p| p[1]).sum::<f64>() / fixed.len() as f64,
        ];
        let radius = initial_radius(&sf);
        let init: Vec<[f64; 2]> = anchors
            .iter()
            .map(|a| a.unwrap_or_else(|| random_disk(&mut rng, centroid, radius)))
            .collect();
        let mut pos = init.clone();
        let descent = minimize(&sf, &mut pos);
        let edge = bounding_box(&pos).map_or(f64::NEG_INFINITY, |b| b[2]);
        right = Some(right.map_or(edge, |r: f64| r.max(edge)));
        acc.add(&sf, &nodes, &init, &pos, descent);
    }
    let mut x0 = right.map_or(0.0, |r| r + COMPONENT_GAP);
    for nodes in free {
        let sf = component(net, &nodes);
        let radius = initial_radius(&sf);
        let init: Vec<[f64; 2]> = (0..nodes.len())
            .map(|_| random_disk(&mut rng, [0.0, 0.0], radius))
            .collect();
        let mut pos = init.clone();
        let descent = minimize(&sf, &mut pos);
        place(&mut pos, x0);
        x0 = bounding_box(&pos).map_or(x0, |b| b[2]) + COMPONENT_GAP;
        acc.add(&sf, &nodes, &init, &pos, descent);
    }
    acc.finish()
}

/// Rescale into `[lo, hi]²` preserving aspect ratio, centred on the short axis.
pub fn normalize_positions(pos: &[[f64; 2]], lo: f64, hi: f64) -> Vec<[f64; 2]> {
    match bounding_box(pos) {
        Some(b) => normalize_with_box(pos, b, lo, hi),
        None => Vec::new(),
    }
}

pub fn normalize_with_box(pos: &[[f64; 2]], b: [f64; 4], lo: f64, hi: f64) -> Vec<[f64; 2]> {
    let (w, h) = (b[2] - b[0], b[3] - b[1]);
    let span = w.max(h);
    let mid = (lo + hi) / 2.0;
    if span <= 0.0 {
        return vec![[mid, mid]; pos.len()];
    }
    let s = (hi - lo) / span;
    let (ox, oy) = (lo + (span - w) * s / 2.0, lo + (span - h) * s / 2.0);
    pos.iter()
        .map(|p| [ox + (p[0] - b[0]) * s, oy + (p[1] - b[1]) * s])
        .collect()
}
