//! End-to-end steps shared by the command line and the Python module.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::layout::{anchored_sequence_layout, kamada_kawai, LayoutResult};
use crate::matrix::{
    build_quasi_jcr_with, cited_environment, citing_environment, slice_by_year, BuildOptions,
    CitationEnvironment, CitationMatrix, Direction, EnvError,
};
use crate::network::{
    assign_core_numbers, cosine_network, cosine_threshold_filter, factor_solution,
    largest_component, node_attributes, ComponentReport, FactorError, FactorOptions,
    FactorSolution, SimilarityNetwork,
};
use crate::params::AnalysisParams;
use crate::registry::SourceList;
use crate::wos::DocumentRecord;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapOptions {
    pub largest_component: bool,
    pub rotate: bool,
    pub exclude_seed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub cosine_cutoff: f64,
    pub max_core: u32,
    /// Core number -> node count.
    pub core_sizes: BTreeMap<u32, usize>,
    pub excluded: Vec<String>,
    pub initial_stress: f64,
    pub final_stress: f64,
    pub layout_moves: usize,
    pub layout_converged: bool,
    pub explained_variance: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalMap {
    pub network: SimilarityNetwork,
    pub layout: LayoutResult,
    pub factors: Option<FactorSolution>,
    pub component: ComponentReport,
    pub stats: NetworkStats,
}

/// Cosine network, threshold, k-cores, optional factors and attributes,
/// without layout.
pub fn build_network(
    env: &CitationEnvironment,
    matrix: Option<&CitationMatrix>,
    params: &AnalysisParams,
    opts: MapOptions,
) -> Result<(SimilarityNetwork, ComponentReport, Option<FactorSolution>), FactorError> {
    let full = cosine_threshold_filter(&cosine_network(env, params), params.cosine_cutoff);
    let (mut net, component) = if opts.largest_component {
        largest_component(&full)
    } else {
        let kept = full.nodes.len();
        (
            full,
            ComponentReport {
                kept,
                excluded: Vec::new(),
            },
        )
    };
    assign_core_numbers(&mut net);
    let factors = match params.factor_count {
        Some(k) => Some(factor_solution(
            env,
            k,
            opts.rotate,
            FactorOptions {
                exclude_seed: opts.exclude_seed,
            },
        )?),
        None => None,
    };
    node_attributes(&mut net, matrix, factors.as_ref(), params.size_scale);
    Ok((net, component, factors))
}

fn stats(
    net: &SimilarityNetwork,
    component: &ComponentReport,
    layout: &LayoutResult,
    factors: Option<&FactorSolution>,
    cutoff: f64,
) -> NetworkStats {
    let n = net.nodes.len();
    let mut core_sizes = BTreeMap::new();
    for node in &net.nodes {
        *core_sizes.entry(node.core_number).or_insert(0) += 1;
    }
    NetworkStats {
        nodes: n,
        edges: net.edges.len(),
        density: if n > 1 {
            2.0 * net.edges.len() as f64 / (n * (n - 1)) as f64
        } else {
            0.0
        },
        cosine_cutoff: cutoff,
        max_core: net.nodes.iter().map(|x| x.core_number).max().unwrap_or(0),
        core_sizes,
        excluded: component.excluded.clone(),
        initial_stress: layout.initial_stress,
        final_stress: layout.final_stress,
        layout_moves: layout.iterations,
        layout_converged: layout.converged,
        explained_variance: factors.map(|f| f.explained_variance.clone()),
    }
}

pub fn build_map(
    env: &CitationEnvironment,
    matrix: Option<&CitationMatrix>,
    params: &AnalysisParams,
    opts: MapOptions,
) -> Result<JournalMap, FactorError> {
    let (network, component, factors) = build_network(env, matrix, params, opts)?;
    let layout = kamada_kawai(&network, params);
    let stats = stats(
        &network,
        &component,
        &layout,
        factors.as_ref(),
        params.cosine_cutoff,
    );
    Ok(JournalMap {
        network,
        layout,
        factors,
        component,
        stats,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub year: i32,
    pub network: SimilarityNetwork,
    pub layout: LayoutResult,
    /// Why the frame is empty, if it is.
    pub note: Option<String>,
}

/// One frame per year of `years`: the seed's environment in that year's
/// quasi-JCR, thresholded, reduced to its largest component, laid out with
/// inter-frame anchoring.
pub fn animation_frames(
    records: &[DocumentRecord],
    list: &SourceList,
    seed: &str,
    direction: Direction,
    years: std::ops::RangeInclusive<i32>,
    build: &BuildOptions,
    params: &AnalysisParams,
) -> Vec<Frame> {
    let mut nets = Vec::new();
    let mut notes = Vec::new();
    let year_list: Vec<i32> = years.collect();
    for &year in &year_list {
        let matrix = build_quasi_jcr_with(&slice_by_year(records, year), list, build);
        let env = match direction {
            Direction::Cited => cited_environment(&matrix, seed, params),
            Direction::Citing => citing_environment(&matrix, seed, params),
        };
        match env {
            Ok(env) => {
                let opts = MapOptions {
                    largest_component: true,
                    ..Default::default()
                };
                let p = AnalysisParams {
                    factor_count: None,
                    ..params.clone()
                };
                let (net, _, _) =
                    build_network(&env, Some(&matrix), &p, opts).expect("no factors requested");
                nets.push(net);
                notes.push(None);
            }
            Err(e) => {
                nets.push(SimilarityNetwork::default());
                notes.push(Some(match e {
                    EnvError::UnknownSeed { .. } => format!("{seed} absent in {year}"),
                    other => other.to_string(),
                }));
            }
        }
    }
    let layouts = anchored_sequence_layout(&nets, params.anchor_weight, params);
    year_list
        .into_iter()
        .zip(nets)
        .zip(layouts)
        .zip(notes)
        .map(|(((year, network), layout), note)| Frame {
            year,
            network,
            layout,
            note,
        })
        .collect()
}
