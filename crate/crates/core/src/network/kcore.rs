use super::SimilarityNetwork;

/// Core numbers by bucket peeling (Batagelj-Zaversnik), in O(V + E).
pub fn core_numbers(n: usize, adj: &[Vec<usize>]) -> Vec<u32> {
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let c = *b;
        *b = start;
        start += c;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    for i in 0..n {
        let v = vert[i];
        for &u in &adj[v] {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}

pub fn k_core(net: &SimilarityNetwork) -> Vec<u32> {
    core_numbers(net.nodes.len(), &net.adjacency())
}

/// Store core numbers on the nodes.
pub fn assign_core_numbers(net: &mut SimilarityNetwork) {
    let core = k_core(net);
    for (node, k) in net.nodes.iter_mut().zip(core) {
        node.core_number = k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::tests::net_from;
    use proptest::prelude::*;

    fn peel(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
        let mut core = vec![0u32; n];
        let mut k = 0u32;
        loop {
            let mut alive: Vec<bool> = vec![true; n];
            loop {
                let deg: Vec<usize> = (0..n)
                    .map(|v| {
                        edges
                            .iter()
                            .filter(|&&(a, b)| alive[a] && alive[b] && (a == v || b == v))
                            .count()
                    })
                    .collect();
                let drop: Vec<usize> = (0..n)
                    .filter(|&v| alive[v] && deg[v] < k as usize)
                    .collect();
                if drop.is_empty() {
                    break;
                }
                for v in drop {
                    alive[v] = false;
                }
            }
            if !alive.iter().any(|&a| a) {
                return core;
            }
            for v in 0..n {
                if alive[v] {
                    core[v] = k;
                }
            }
            k += 1;
        }
    }

    #[test]
    fn small_cases() {
        let tri = net_from(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        assert_eq!(k_core(&tri), vec![2, 2, 2]);
        let star = net_from(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]);
        assert_eq!(k_core(&star), vec![1, 1, 1, 1]);
        assert_eq!(k_core(&net_from(2, &[])), vec![0, 0]);
        assert!(k_core(&net_from(0, &[])).is_empty());
    }

    proptest! {
        #[test]
        fn matches_peeling(n in 1usize..20, raw in proptest::collection::vec((0usize..20, 0usize..20), 0..60)) {
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(a, b)| (a % n, b % n))
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort();
            edges.dedup();
            let w: Vec<(usize, usize, f64)> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
            let net = net_from(n, &w);
            let core = k_core(&net);
            prop_assert_eq!(&core, &peel(n, &edges));
            let adj = net.adjacency();
            for v in 0..n {
                prop_assert!(core[v] as usize <= adj[v].len());
                let strong = adj[v].iter().filter(|&&u| core[u] >= core[v]).count();
                prop_assert!(strong >= core[v] as usize);
            }
        }
    }
}
