use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::{pajek::render_pajek_in_box, write_text, ExportError};
use crate::layout::{bounding_box, LayoutResult};
use crate::network::SimilarityNetwork;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub year: i32,
    pub file: String,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameManifest {
    pub frames: Vec<FrameEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Write `frame_<year>.net` per frame plus `manifest.json`.
///
/// All frames share one coordinate scale. On failure every file written so
/// far is removed.
pub fn write_frame_series(
    years: &[i32],
    nets: &[SimilarityNetwork],
    layouts: &[LayoutResult],
    dir: impl AsRef<Path>,
) -> Result<FrameManifest, ExportError> {
    if years.len() != nets.len() || nets.len() != layouts.len() {
        return Err(ExportError::Invalid(format!(
            "{} years, {} networks, {} layouts",
            years.len(),
            nets.len(),
            layouts.len()
        )));
    }
    if years.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExportError::Invalid(
            "frame years must be strictly increasing".into(),
        ));
    }
    let dir = dir.as_ref();
    let all: Vec<[f64; 2]> = layouts
        .iter()
        .flat_map(|l| l.positions.iter().copied())
        .collect();
    let bbox = bounding_box(&all).unwrap_or([0.0, 0.0, 1.0, 1.0]);

    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| {
        let mut frames = Vec::new();
        for ((&year, net), layout) in years.iter().zip(nets).zip(layouts) {
            let file = format!("frame_{year}.net");
            let path = dir.join(&file);
            let text = render_pajek_in_box(net, layout, bbox)?;
            written.push(path.clone());
            write_text(&path, &text)?;
            frames.push(FrameEntry {
                year,
                file,
                nodes: net.nodes.len(),
                edges: net.edges.len(),
            });
        }
        let manifest = FrameManifest { frames };
        let path = dir.join(MANIFEST_FILE);
        written.push(path.clone());
        write_text(
            &path,
            &(serde_json::to_string_pretty(&manifest).expect("serializable") + "\n"),
        )?;
        Ok(manifest)
    })();
    if result.is_err() {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::kamada_kawai;
    use crate::network::{Edge, Node};
    use crate::params::AnalysisParams;

    fn frame(n: usize) -> (SimilarityNetwork, LayoutResult) {
        let net = SimilarityNetwork {
            nodes: (0..n)
                .map(|i| Node::new(format!("J{i}"), format!("J{i}"), 1))
                .collect(),
            edges: (1..n)
                .map(|i| Edge {
                    a: i - 1,
                    b: i,
                    weight: 0.5,
                })
                .collect(),
        };
        let l = kamada_kawai(&net, &AnalysisParams::default());
        (net, l)
    }

    #[test]
    fn writes_files_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let (years, (nets, lays)): (Vec<i32>, (Vec<_>, Vec<_>)) = (1974..=2008)
            .map(|y| (y, frame(2 + (y as usize % 4))))
            .unzip();
        let m = write_frame_series(&years, &nets, &lays, dir.path()).unwrap();
        assert_eq!(m.frames.len(), 35);
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(files, 36);
        assert!(m.frames.windows(2).all(|w| w[0].year < w[1].year));
    }

    #[test]
    fn failure_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let (net, lay) = frame(3);
        let mut bad = lay.clone();
        bad.journals = vec!["X".into(); 3];
        let r = write_frame_series(&[2000, 2001], &[net.clone(), net], &[lay, bad], dir.path());
        assert!(matches!(r, Err(ExportError::MissingPosition(_))));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
        assert!(write_frame_series(&[2001, 2000], &[], &[], dir.path()).is_err());
    }
}
