use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::eigen::symmetric_eigen;
use crate::matrix::CitationEnvironment;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FactorError {
    #[error("factor count must be at least 1")]
    ZeroFactors,
    #[error("{requested} factors requested but only {available} variables with nonzero variance")]
    TooFewVariables { requested: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    None,
    Varimax,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FactorOptions {
    /// Drop the environment's seed journal from the variables.
    pub exclude_seed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSolution {
    /// Variables in loading-row order.
    pub journals: Vec<String>,
    pub loadings: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
    /// Leading eigenvalues of the correlation matrix.
    pub eigenvalues: Vec<f64>,
    pub assignment: BTreeMap<String, usize>,
    pub rotation: Rotation,
    /// Orthogonal rotation applied to the unrotated loadings (identity without rotation).
    pub rotation_matrix: Vec<Vec<f64>>,
    /// Journals left out: zero variance, or the excluded seed.
    pub excluded: Vec<String>,
    /// Factor indices whose eigenvalue is numerically zero.
    pub degenerate: Vec<usize>,
    pub sweeps: usize,
}

impl FactorSolution {
    pub fn total_explained(&self) -> f64 {
        self.explained_variance.iter().sum()
    }

    pub fn communalities(&self) -> Vec<f64> {
        self.loadings
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum())
            .collect()
    }
}

pub fn factor_solution(
    env: &CitationEnvironment,
    k: usize,
    rotate: bool,
    opts: FactorOptions,
) -> Result<FactorSolution, FactorError> {
    let mut journals = Vec::new();
    let mut profiles = Vec::new();
    let mut excluded = Vec::new();
    for j in 0..env.len() {
        if opts.exclude_seed && env.journals[j] == env.seed {
            excluded.push(env.journals[j].clone());
            continue;
        }
        journals.push(env.journals[j].clone());
        profiles.push(env.profile_of(j));
    }
    let mut sol = factor_solution_from_profiles(&journals, &profiles, k, rotate)?;
    sol.excluded.extend(excluded);
    sol.excluded.sort();
    Ok(sol)
}

fn correlation(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let centered: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            let d: Vec<f64> = c.iter().map(|x| x - mean).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            d.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let p = centered.len();
    let mut r = vec![vec![0.0; p]; p];
    for i in 0..p {
        r[i][i] = 1.0;
        for j in 0..i {
            let v: f64 = centered[i]
                .iter()
                .zip(&centered[j])
                .map(|(a, b)| a * b)
                .sum();
            r[i][j] = v;
            r[j][i] = v;
        }
    }
    r
}

fn has_variance(c: &[f64]) -> bool {
    c.len() >= 2 && c.iter().any(|&x| x != c[0])
}

/// Principal components of the correlation matrix of `profiles`
/// (one vector per variable), optionally varimax-rotated.
pub fn factor_solution_from_profiles(
    journals: &[String],
    profiles: &[Vec<f64>],
    k: usize,
    rotate: bool,
) -> Result<FactorSolution, FactorError> {
    if k == 0 {
        return Err(FactorError::ZeroFactors);
    }
    let mut names = Vec::new();
    let mut cols = Vec::new();
    let mut excluded = Vec::new();
    for (j, p) in journals.iter().zip(profiles) {
        if has_variance(p) {
            names.push(j.clone());
            cols.push(p.clone());
        } else {
            excluded.push(j.clone());
        }
    }
    let p = names.len();
    if k > p {
        return Err(FactorError::TooFewVariables {
            requested: k,
            available: p,
        });
    }
    let (values, vectors) = symmetric_eigen(&correlation(&cols));
    let eigenvalues: Vec<f64> = values[..k].to_vec();
    let degenerate: Vec<usize> = (0..k)
        .filter(|&f| eigenvalues[f] <= 1e-10 * p as f64)
        .collect();
    let unrotated: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            (0..k)
                .map(|f| vectors[i][f] * eigenvalues[f].max(0.0).sqrt())
                .collect()
        })
        .collect();

    let (mut loadings, mut t, sweeps) = if rotate && k > 1 {
        varimax(&unrotated)
    } else {
        (unrotated, identity(k), 0)
    };

    let explained: Vec<f64> = (0..k)
        .map(|f| loadings.iter().map(|r| r[f] * r[f]).sum::<f64>() / p as f64)
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    if rotate {
        order.sort_by(|&a, &b| explained[b].total_cmp(&explained[a]).then(a.cmp(&b)));
    }
    loadings = loadings
        .iter()
        .map(|r| order.iter().map(|&f| r[f]).collect())
        .collect();
    t = t
        .iter()
        .map(|r| order.iter().map(|&f| r[f]).collect())
        .collect();
    let explained_variance: Vec<f64> = order.iter().map(|&f| explained[f]).collect();

    for f in 0..k {
        let lead = (0..p).fold(0, |best, i| {
            if loadings[i][f].abs() > loadings[best][f].abs() {
                i
            } else {
                best
            }
        });
        if loadings[lead][f] < 0.0 {
            for row in loadings.iter_mut() {
                row[f] = -row[f];
            }
            for row in t.iter_mut() {
                row[f] = -row[f];
            }
        }
    }

    let assignment = names
        .iter()
        .zip(&loadings)
        .map(|(j, row)| {
            let best = (0..k).fold(0, |b, f| if row[f].abs() > row[b].abs() { f } else { b });
            (j.clone(), best)
        })
        .collect();
    excluded.sort();
    Ok(FactorSolution {
        journals: names,
        loadings,
        explained_variance,
        eigenvalues,
        assignment,
        rotation: if rotate {
            Rotation::Varimax
        } else {
            Rotation::None
        },
        rotation_matrix: t,
        excluded,
        degenerate,
        sweeps,
    })
}

fn identity(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Kaiser-normalized varimax by pairwise planar rotations.
///
/// Returns the rotated loadings, the accumulated rotation matrix and the
/// number of sweeps.
pub fn varimax(loadings: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, usize) {
    let p = loadings.len();
    let k = loadings.first().map_or(0, Vec::len);
    let h: Vec<f64> = loadings
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut x: Vec<Vec<f64>> = loadings
        .iter()
        .zip(&h)
        .map(|(r, &hi)| {
            r.iter()
                .map(|v| if hi > 0.0 { v / hi } else { 0.0 })
                .collect()
        })
        .collect();
    let mut t = identity(k);
    let n = p as f64;
    let mut sweeps = 0;
    while sweeps < 1000 {
        sweeps += 1;
        let mut max_angle: f64 = 0.0;
        for a in 0..k {
            for b in a + 1..k {
                let (mut sa, mut sb, mut sc, mut sd) = (0.0, 0.0, 0.0, 0.0);
                for row in &x {
                    let u = row[a] * row[a] - row[b] * row[b];
                    let v = 2.0 * row[a] * row[b];
                    sa += u;
                    sb += v;
                    sc += u * u - v * v;
                    sd += 2.0 * u * v;
                }
                let num = sd - 2.0 * sa * sb / n;
                let den = sc - (sa * sa - sb * sb) / n;
                let phi = num.atan2(den) / 4.0;
                max_angle = max_angle.max(phi.abs());
                if phi.abs() < 1e-14 {
                    continue;
                }
                let (s, c) = phi.sin_cos();
                for row in x.iter_mut().chain(t.iter_mut()) {
                    let (ra, rb) = (row[a], row[b]);
                    row[a] = c * ra + s * rb;
                    row[b] = -s * ra + c * rb;
                }
            }
        }
        if max_angle < 1e-10 {
            break;
        }
    }
    let rotated = x
        .into_iter()
        .zip(&h)
        .map(|(r, &hi)| r.into_iter().map(|v| v * hi).collect())
        .collect();
    (rotated, t, sweeps)
}
