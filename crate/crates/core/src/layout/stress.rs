/// Kamada-Kawai stress over target distances, with an optional anchor term.
#[derive(Debug, Clone)]
pub struct StressFunction {
    n: usize,
    /// Graph distances `d_ij`; infinite for disconnected pairs.
    dist: Vec<f64>,
    desired_length: f64,
    lambda: f64,
    anchors: Vec<Option<[f64; 2]>>,
}

/// All-pairs shortest path lengths (dense Dijkstra).
pub fn shortest_paths(n: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, l) in edges {
        adj[a].push((b, l));
        adj[b].push((a, l));
    }
    let mut d = vec![f64::INFINITY; n * n];
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        let mut done = vec![false; n];
        row[s] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            for v in 0..n {
                if !done[v] && row[v].is_finite() && (u == usize::MAX || row[v] < row[u]) {
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for &(v, l) in &adj[u] {
                if row[u] + l < row[v] {
                    row[v] = row[u] + l;
                }
            }
        }
    }
    d
}

impl StressFunction {
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)], desired_length: f64) -> Self {
        StressFunction {
            n,
            dist: shortest_paths(n, edges),
            desired_length,
            lambda: 0.0,
            anchors: vec![None; n],
        }
    }

    pub fn with_anchors(mut self, lambda: f64, anchors: Vec<Option<[f64; 2]>>) -> Self {
        assert_eq!(anchors.len(), self.n);
        self.lambda = lambda;
        self.anchors = anchors;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Desired distance and spring constant of a pair, if it contributes.
    fn spring(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        let d = self.distance(i, j);
        (i != j && d.is_finite() && d > 0.0).then(|| (self.desired_length * d, 1.0 / (d * d)))
    }

    pub fn max_target(&self) -> f64 {
        self.desired_length
            * self
                .dist
                .iter()
                .copied()
                .filter(|d| d.is_finite())
                .fold(0.0, f64::max)
    }

    pub fn stress(&self, pos: &[[f64; 2]]) -> f64 {
        let mut e = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                e += self.pair_energy(i, j, pos[i], pos[j]);
            }
        }
        e
    }

    pub fn anchor_penalty(&self, pos: &[[f64; 2]]) -> f64 {
        self.anchors
            .iter()
            .zip(pos)
            .filter_map(|(a, p)| a.map(|a| self.lambda * dist2(*p, a)))
            .sum()
    }

    /// Stress plus anchor penalty.
    pub fn value(&self, pos: &[[f64; 2]]) -> f64 {
        self.stress(pos) + self.anchor_penalty(pos)
    }

    pub fn gradient(&self, pos: &[[f64; 2]]) -> Vec<[f64; 2]> {
        (0..self.n)
            .map(|i| self.node_gradient(i, pos[i], pos))
            .collect()
    }

    fn pair_energy(&self, i: usize, j: usize, pi: [f64; 2], pj: [f64; 2]) -> f64 {
        let Some((l, k)) = self.spring(i, j) else {
            return 0.0;
        };
        let r = dist2(pi, pj).sqrt();
        k * (r - l).powi(2)
    }

    /// Gradient contribution of pair (i, j) with respect to `pi`.
    pub(crate) fn pair_gradient(&self, i: usize, j: usize, pi: [f64; 2], pj: [f64; 2]) -> [f64; 2] {
        let Some((l, k)) = self.spring(i, j) else {
            return [0.0, 0.0];
        };
        let (dx, dy) = (pi[0] - pj[0], pi[1] - pj[1]);
        let r = (dx * dx + dy * dy).sqrt();
        if r < 1e-300 {
            return [0.0, 0.0];
        }
        let c = 2.0 * k * (r - l) / r;
        [c * dx, c * dy]
    }

    /// Energy terms involving node `i` placed at `p`.
    #[cfg(test)]
    pub(crate) fn node_energy(&self, i: usize, p: [f64; 2], pos: &[[f64; 2]]) -> f64 {
        let mut e: f64 = (0..self.n)
            .filter(|&j| j != i)
            .map(|j| self.pair_energy(i, j, p, pos[j]))
            .sum();
        if let Some(a) = self.anchors[i] {
            e += self.lambda * dist2(p, a);
        }
        e
    }

    /// Change of the node energy when `i` moves from `pos[i]` to `new`,
    /// computed from differences to avoid cancellation.
    pub(crate) fn node_energy_delta(&self, i: usize, new: [f64; 2], pos: &[[f64; 2]]) -> f64 {
        let old = pos[i];
        let d = [new[0] - old[0], new[1] - old[1]];
        let mut delta = 0.0;
        for (j, pj) in pos.iter().enumerate() {
            let Some((l, k)) = self.spring(i, j) else {
                continue;
            };
            let (ox, oy) = (old[0] - pj[0], old[1] - pj[1]);
            let r_old = (ox * ox + oy * oy).sqrt();
            let r_new = ((new[0] - pj[0]).powi(2) + (new[1] - pj[1]).powi(2)).sqrt();
            // r_new^2 - r_old^2 = d . (2 (old - pj) + d)
            let sq = d[0] * (2.0 * ox + d[0]) + d[1] * (2.0 * oy + d[1]);
            let dr = if r_new + r_old > 0.0 {
                sq / (r_new + r_old)
            } else {
                0.0
            };
            delta += k * dr * (r_new + r_old - 2.0 * l);
        }
        if let Some(a) = self.anchors[i] {
            delta += self.lambda
                * (d[0] * (2.0 * (old[0] - a[0]) + d[0]) + d[1] * (2.0 * (old[1] - a[1]) + d[1]));
        }
        delta
    }

    pub(crate) fn node_gradient(&self, i: usize, p: [f64; 2], pos: &[[f64; 2]]) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for (j, &pj) in pos.iter().enumerate() {
            let d = self.pair_gradient(i, j, p, pj);
            g[0] += d[0];
            g[1] += d[1];
        }
        if let Some(a) = self.anchors[i] {
            g[0] += 2.0 * self.lambda * (p[0] - a[0]);
            g[1] += 2.0 * self.lambda * (p[1] - a[1]);
        }
        g
    }

    /// 2x2 Hessian `[hxx, hxy, hyy]` of the node energy.
    pub(crate) fn node_hessian(&self, i: usize, p: [f64; 2], pos: &[[f64; 2]]) -> [f64; 3] {
        let mut h = [0.0; 3];
        for (j, pj) in pos.iter().enumerate() {
            let Some((l, k)) = self.spring(i, j) else {
                continue;
            };
            let (dx, dy) = (p[0] - pj[0], p[1] - pj[1]);
            let r2 = dx * dx + dy * dy;
            if r2 < 1e-300 {
                continue;
            }
            let r3 = r2 * r2.sqrt();
            let k = 2.0 * k;
            h[0] += k * (1.0 - l * dy * dy / r3);
            h[1] += k * l * dx * dy / r3;
            h[2] += k * (1.0 - l * dx * dx / r3);
        }
        if self.anchors[i].is_some() {
            h[0] += 2.0 * self.lambda;
            h[2] += 2.0 * self.lambda;
        }
        h
    }
}

pub(crate) fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let d = shortest_paths(3, &[(0, 1, 1.0), (1, 2, 0.5)]);
        assert_eq!(d[2], 1.5);
        assert_eq!(d[3 + 2], 0.5);
        let d = shortest_paths(3, &[(0, 1, 1.0)]);
        assert!(d[2].is_infinite());
    }

    #[test]
    fn exact_embedding_has_zero_stress() {
        let s = StressFunction::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)], 1.0);
        let pos = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(s.stress(&pos) < 1e-15);
        assert!(s
            .gradient(&pos)
            .iter()
            .all(|g| g[0].abs() < 1e-12 && g[1].abs() < 1e-12));
    }

    #[test]
    fn energy_delta_matches_difference() {
        let s = StressFunction::from_edges(
            4,
            &[(0, 1, 0.3), (1, 2, 1.0), (2, 3, 0.7), (0, 3, 0.2)],
            1.0,
        )
        .with_anchors(0.5, vec![Some([0.1, 0.2]), None, None, None]);
        let pos = [[0.0, 0.0], [1.0, 0.3], [0.4, 1.2], [-0.5, 0.7]];
        for new in [[0.3, -0.2], [0.0, 1e-3], [2.0, 2.0]] {
            let direct = s.node_energy(0, new, &pos) - s.node_energy(0, pos[0], &pos);
            assert!((s.node_energy_delta(0, new, &pos) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn anchor_term() {
        let s = StressFunction::from_edges(2, &[(0, 1, 1.0)], 1.0)
            .with_anchors(2.0, vec![Some([0.0, 0.0]), None]);
        let pos = [[1.0, 0.0], [2.0, 0.0]];
        assert!((s.anchor_penalty(&pos) - 2.0).abs() < 1e-15);
        assert!((s.value(&pos) - 2.0).abs() < 1e-15);
    }
}
