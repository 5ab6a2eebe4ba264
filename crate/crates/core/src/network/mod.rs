//! Cosine-normalized journal similarity networks and their structure.

mod eigen;
mod factor;
mod kcore;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::matrix::{CitationEnvironment, CitationMatrix};
use crate::params::AnalysisParams;

pub use eigen::symmetric_eigen;
pub use factor::{
    factor_solution, factor_solution_from_profiles, varimax, FactorError, FactorOptions,
    FactorSolution, Rotation,
};
pub use kcore::{assign_core_numbers, core_numbers, k_core};

/// Twelve Pajek color names cycled by category index.
pub const PALETTE: [&str; 12] = [
    "Yellow",
    "Red",
    "Green",
    "Blue",
    "Cyan",
    "Pink",
    "Orange",
    "Purple",
    "Brown",
    "Gray",
    "Magenta",
    "LightGreen",
];

pub fn palette_color(category: usize) -> &'static str {
    PALETTE[category % PALETTE.len()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub journal: String,
    pub label: String,
    pub frequency: u64,
    pub self_citations: u64,
    pub core_number: u32,
    pub factor: Option<usize>,
    pub size_main: f64,
    pub size_horizontal: f64,
    pub color: String,
}

impl Node {
    pub fn new(journal: impl Into<String>, label: impl Into<String>, frequency: u64) -> Self {
        Node {
            journal: journal.into(),
            label: label.into(),
            frequency,
            self_citations: 0,
            core_number: 0,
            factor: None,
            size_main: 0.0,
            size_horizontal: 0.0,
            color: palette_color(0).to_string(),
        }
    }
}

/// Undirected edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimilarityNetwork {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl SimilarityNetwork {
    pub fn degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for e in &self.edges {
            d[e.a] += 1;
            d[e.b] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    pub fn index_of(&self, journal: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.journal == journal)
    }

    /// Keep the listed nodes (in the given order) and the edges among them.
    pub fn induced(&self, keep: &[usize]) -> SimilarityNetwork {
        let mut map = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| map[e.a] != usize::MAX && map[e.b] != usize::MAX)
            .map(|e| {
                let (a, b) = (map[e.a].min(map[e.b]), map[e.a].max(map[e.b]));
                Edge {
                    a,
                    b,
                    weight: e.weight,
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.a, e.b));
        SimilarityNetwork {
            nodes: keep.iter().map(|&i| self.nodes[i].clone()).collect(),
            edges,
        }
    }
}

/// Salton's cosine; `None` when either vector has zero norm.
pub fn cosine(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        xy += a * b;
        xx += a * a;
        yy += b * b;
    }
    if xx <= 0.0 || yy <= 0.0 {
        return None;
    }
    Some((xy / (xx.sqrt() * yy.sqrt())).clamp(0.0, 1.0))
}

/// Cosine with positions `skip` removed from both vectors.
fn cosine_skipping(x: &[f64], y: &[f64], skip: [usize; 2]) -> Option<f64> {
    let keep = |i: &usize| !skip.contains(i);
    let xs: Vec<f64> = (0..x.len()).filter(keep).map(|i| x[i]).collect();
    let ys: Vec<f64> = (0..y.len()).filter(keep).map(|i| y[i]).collect();
    cosine(&xs, &ys)
}

/// Order used for nodes everywhere: descending frequency, then key.
pub fn node_order(frequencies: &[u64], keys: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| {
        frequencies[b]
            .cmp(&frequencies[a])
            .then_with(|| keys[a].cmp(&keys[b]))
    });
    order
}

pub fn cosine_network(env: &CitationEnvironment, params: &AnalysisParams) -> SimilarityNetwork {
    let order = node_order(&env.totals, &env.journals);
    let profiles: Vec<Vec<f64>> = order.iter().map(|&j| env.profile_of(j)).collect();
    let skip_diag = env.has_diagonal() && !params.include_diagonal_in_similarity;

    let nodes = order
        .iter()
        .map(|&j| {
            let mut n = Node::new(
                env.journals[j].clone(),
                env.displays[j].clone(),
                env.totals[j],
            );
            n.self_citations = env.self_citations[j];
            n
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let w = if skip_diag {
                cosine_skipping(&profiles[a], &profiles[b], [order[a], order[b]])
            } else {
                cosine(&profiles[a], &profiles[b])
            };
            if let Some(w) = w.filter(|&w| w > 0.0) {
                edges.push(Edge { a, b, weight: w });
            }
        }
    }
    SimilarityNetwork { nodes, edges }
}

/// Keep edges with weight strictly above `cutoff`; nodes stay.
pub fn cosine_threshold_filter(net: &SimilarityNetwork, cutoff: f64) -> SimilarityNetwork {
    SimilarityNetwork {
        nodes: net.nodes.clone(),
        edges: net
            .edges
            .iter()
            .copied()
            .filter(|e| e.weight > cutoff)
            .collect(),
    }
}

pub fn connected_components(net: &SimilarityNetwork) -> Vec<Vec<usize>> {
    let adj = net.adjacency();
    let mut seen = vec![false; net.nodes.len()];
    let mut comps = Vec::new();
    for start in 0..net.nodes.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &v in &adj[comp[i]] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub kept: usize,
    pub excluded: Vec<String>,
}

/// The largest connected component; ties go to the component holding the
/// smallest journal key.
pub fn largest_component(net: &SimilarityNetwork) -> (SimilarityNetwork, ComponentReport) {
    let comps = connected_components(net);
    let min_key = |c: &Vec<usize>| {
        c.iter()
            .map(|&i| net.nodes[i].journal.as_str())
            .min()
            .unwrap_or("")
    };
    let best = comps.iter().max_by(|x, y| {
        x.len()
            .cmp(&y.len())
            .then_with(|| min_key(y).cmp(min_key(x)))
    });
    let keep: Vec<usize> = best.cloned().unwrap_or_default();
    let mut excluded: Vec<String> = (0..net.nodes.len())
        .filter(|i| !keep.contains(i))
        .map(|i| net.nodes[i].journal.clone())
        .collect();
    excluded.sort();
    (
        net.induced(&keep),
        ComponentReport {
            kept: keep.len(),
            excluded,
        },
    )
}

/// Log-frequency glyph sizes and category colors.
///
/// With a citation matrix available the horizontal size uses the frequency
/// minus journal self-citations. Colors follow the factor assignment when a
/// solution is given, core numbers otherwise.
pub fn node_attributes(
    net: &mut SimilarityNetwork,
    matrix: Option<&CitationMatrix>,
    factors: Option<&FactorSolution>,
    scale: f64,
) {
    let assignment: BTreeMap<&str, usize> = factors
        .map(|f| f.assignment.iter().map(|(k, &v)| (k.as_str(), v)).collect())
        .unwrap_or_default();
    for node in &mut net.nodes {
        let freq = node.frequency as f64;
        node.size_main = scale * (1.0 + freq).ln();
        node.size_horizontal = match matrix {
            Some(m) => {
                node.self_citations = m.self_citations_of(&node.journal);
                let own = node.frequency.saturating_sub(node.self_citations) as f64;
                scale * (1.0 + own).ln()
            }
            None => node.size_main,
        };
        node.factor = assignment.get(node.journal.as_str()).copied();
        let category = match factors {
            Some(_) => node.factor.map_or(PALETTE.len() - 1, |f| f),
            None => node.core_number as usize,
        };
        node.color = palette_color(category).to_string();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Direction, ProfileKind};
    use proptest::prelude::*;

    pub(crate) fn net_from(n: usize, edges: &[(usize, usize, f64)]) -> SimilarityNetwork {
        SimilarityNetwork {
            nodes: (0..n)
                .map(|i| Node::new(format!("J{i:02}"), format!("J{i:02}"), 1))
                .collect(),
            edges: edges
                .iter()
                .map(|&(a, b, w)| Edge {
                    a: a.min(b),
                    b: a.max(b),
                    weight: w,
                })
                .collect(),
        }
    }

    #[test]
    fn cosine_examples() {
        assert_eq!(
            cosine(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).map(|c| (c * 1e12).round()),
            Some(1e12)
        );
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]), Some(0.0));
        assert!((cosine(&[1.0, 1.0, 0.0], &[1.0, 0.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), None);
    }

    fn env(profile: Vec<Vec<u64>>, kind: ProfileKind, direction: Direction) -> CitationEnvironment {
        let n = profile[0].len();
        let journals: Vec<String> = (0..n).map(|i| format!("K{i}")).collect();
        let totals: Vec<u64> = (0..n).map(|j| profile.iter().map(|r| r[j]).sum()).collect();
        CitationEnvironment {
            seed: "K0".into(),
            direction,
            kind,
            displays: journals.clone(),
            row_labels: (0..profile.len()).map(|i| format!("r{i}")).collect(),
            journals,
            self_citations: vec![0; n],
            contributions: totals.clone(),
            totals,
            profile,
            candidate_count: n,
            environment_total: 0,
            min_count: 1,
            params: AnalysisParams::default(),
        }
    }

    #[test]
    fn network_from_document_profiles() {
        let e = env(
            vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 0]],
            ProfileKind::DocumentByJournal,
            Direction::Citing,
        );
        let net = cosine_network(&e, &AnalysisParams::default());
        assert_eq!(net.nodes.len(), 3);
        assert_eq!(net.nodes[0].journal, "K0"); // frequency 2
                                                // K1 = (1,0,0), K2 = (0,1,0): orthogonal, no edge
        assert_eq!(net.edges.len(), 2);
        for e in &net.edges {
            assert!((e.weight - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_is_dropped_from_pairs() {
        // columns: K0 = (10, 1, 1), K1 = (1, 10, 0), K2 = (1, 0, 10)
        let p = vec![vec![10, 1, 1], vec![1, 10, 0], vec![1, 0, 10]];
        let e = env(p, ProfileKind::JournalByJournal, Direction::Cited);
        let net = cosine_network(&e, &AnalysisParams::default());
        // pair (K1, K2): skipping positions 1 and 2 leaves (1) vs (1) -> 1.0
        let (i1, i2) = (net.index_of("K1").unwrap(), net.index_of("K2").unwrap());
        let w = net
            .edges
            .iter()
            .find(|e| (e.a, e.b) == (i1.min(i2), i1.max(i2)))
            .unwrap()
            .weight;
        assert!((w - 1.0).abs() < 1e-12);
        let with = AnalysisParams {
            include_diagonal_in_similarity: true,
            ..Default::default()
        };
        let net2 = cosine_network(&e, &with);
        let w2 = net2
            .edges
            .iter()
            .find(|e| (e.a, e.b) == (i1.min(i2), i1.max(i2)))
            .unwrap()
            .weight;
        assert!((w2 - 1.0 / 101.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_filter() {
        let net = net_from(
            4,
            &[
                (0, 1, 0.1),
                (0, 2, 0.2),
                (1, 2, 0.25),
                (2, 3, 0.9),
                (1, 3, 1.0),
            ],
        );
        let f = cosine_threshold_filter(&net, 0.2);
        let kept: Vec<(usize, usize)> = f.edges.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(kept, vec![(1, 2), (2, 3), (1, 3)]);
        assert_eq!(f.nodes.len(), 4);
        assert_eq!(cosine_threshold_filter(&net, 0.0).edges.len(), 5);
        assert!(cosine_threshold_filter(&net, 1.0).edges.is_empty());
    }

    #[test]
    fn largest_component_cases() {
        let connected = net_from(3, &[(0, 1, 0.5), (1, 2, 0.5)]);
        let (c, r) = largest_component(&connected);
        assert_eq!(c.nodes.len(), 3);
        assert!(r.excluded.is_empty());

        let split = net_from(5, &[(0, 1, 0.5), (3, 4, 0.5), (2, 3, 0.5)]);
        let (c, r) = largest_component(&split);
        assert_eq!(
            c.nodes
                .iter()
                .map(|n| n.journal.as_str())
                .collect::<Vec<_>>(),
            ["J02", "J03", "J04"]
        );
        assert_eq!(r.excluded, vec!["J00", "J01"]);
        assert_eq!(c.edges.len(), 2);

        let tie = net_from(6, &[(3, 4, 0.5), (4, 5, 0.5), (0, 1, 0.5), (1, 2, 0.5)]);
        let (c, r) = largest_component(&tie);
        assert_eq!(c.nodes[0].journal, "J00");
        assert_eq!(r.kept, 3);

        let (c, _) = largest_component(&SimilarityNetwork::default());
        assert!(c.nodes.is_empty());
    }

    #[test]
    fn sizes_and_colors() {
        let mut net = net_from(3, &[]);
        net.nodes[0].frequency = 0;
        net.nodes[1].frequency = 99;
        net.nodes[2].frequency = 100;
        net.nodes[2].core_number = 13;
        let mut cells = BTreeMap::new();
        cells.insert(("J02".to_string(), "J02".to_string()), 40);
        let m = CitationMatrix::from_cells("x", cells, BTreeMap::new());
        node_attributes(&mut net, Some(&m), None, 2.0);
        assert_eq!(net.nodes[0].size_main, 0.0);
        assert!((net.nodes[1].size_main - 2.0 * 100f64.ln()).abs() < 1e-12);
        assert!((net.nodes[2].size_horizontal - 2.0 * 61f64.ln()).abs() < 1e-12);
        assert_eq!(net.nodes[2].self_citations, 40);
        assert_eq!(net.nodes[2].color, PALETTE[1]);

        node_attributes(&mut net, None, None, 1.0);
        assert_eq!(net.nodes[2].size_horizontal, net.nodes[2].size_main);
    }

    proptest! {
        #[test]
        fn cosine_bounds_and_symmetry(x in proptest::collection::vec(0u64..50, 1..12), seed in 0u64..1000) {
            let y: Vec<u64> = x.iter().enumerate().map(|(i, v)| (v * 7 + i as u64 * 13 + seed) % 23).collect();
            let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
            let a = cosine(&xf, &yf);
            prop_assert_eq!(a, cosine(&yf, &xf));
            if let Some(w) = a {
                prop_assert!((0.0..=1.0).contains(&w));
                prop_assert!((cosine(&xf, &xf).unwrap() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn filter_is_monotone(ws in proptest::collection::vec(0.0f64..1.0, 0..20), c1 in 0.0f64..1.0, c2 in 0.0f64..1.0) {
            let edges: Vec<(usize, usize, f64)> = ws.iter().enumerate().map(|(i, &w)| (i % 5, 5 + i, w)).collect();
            let net = net_from(30, &edges);
            let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            let a = cosine_threshold_filter(&net, lo);
            let b = cosine_threshold_filter(&net, hi);
            for e in &b.edges {
                prop_assert!(a.edges.contains(e));
            }
        }
    }
}
