//! Brute-force set-partition search, independent of the library's subset DP.

/// Every set partition of `0..n`, as restricted-growth strings.
pub fn all_rgs(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            go(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    go(&mut vec![0], 0, n, &mut out);
    out
}

pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (e, &b) in rgs.iter().enumerate() {
        blocks[b].push(e);
    }
    blocks
}

pub fn feasible(blocks: &[Vec<usize>], entries: &[f64], eps: f64) -> bool {
    blocks.iter().all(|b| b.iter().map(|&e| entries[e]).sum::<f64>() >= -eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub block_count: usize,
    pub maximizers: Vec<Vec<usize>>,
}

pub fn finest_feasible(entries: &[f64], eps: f64) -> OracleResult {
    let mut best = 0;
    let mut maximizers = Vec::new();
    for rgs in all_rgs(entries.len()) {
        let blocks = blocks_of(&rgs);
        if !feasible(&blocks, entries, eps) {
            continue;
        }
        if blocks.len() > best {
            best = blocks.len();
            maximizers.clear();
        }
        if blocks.len() == best {
            maximizers.push(rgs);
        }
    }
    OracleResult { block_count: best, maximizers }
}
