//! Brute-force graph oracle: exact k-colorability and chromatic number by
//! deterministic backtracking, exact independence number, and two-sided
//! chromatic bounds for infinite Cayley graphs via balls and finite
//! quotients.

use crate::cayley::{bfs_ball, finite_quotient_graph, FiniteGraph};
use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, HeubergerMatrix};

pub const DEFAULT_RADIUS: u32 = 7;
pub const DEFAULT_MIS_CAP: usize = 64;

pub fn default_moduli() -> Vec<i64> {
    (6..=24).collect()
}

/// Is the graph k-colorable? Returns a witness coloring if so. DSATUR-ordered
/// exhaustive backtracking, fully deterministic. Errors on loops.
pub fn k_colorable(g: &FiniteGraph, k: u32) -> Result<Option<Vec<u32>>> {
    k_colorable_with_budget(g, k, u64::MAX)
}

/// Like `k_colorable`, but gives up after `budget` search nodes and returns
/// None. A Some result is always a real coloring; None means either no
/// coloring exists or the budget ran out.
pub fn k_colorable_with_budget(
    g: &FiniteGraph,
    k: u32,
    mut budget: u64,
) -> Result<Option<Vec<u32>>> {
    k_colorable_impl(g, k, &mut budget)
}

fn k_colorable_impl(g: &FiniteGraph, k: u32, budget: &mut u64) -> Result<Option<Vec<u32>>> {
    if g.has_loops() {
        return Err(Error::Loops);
    }
    let n = g.order();
    if n == 0 || k == 0 {
        return Ok(if n == 0 { Some(Vec::new()) } else { None });
    }
    let k = k as usize;
    let mut color = vec![usize::MAX; n];

    // pick the uncolored vertex with most distinctly-colored neighbors,
    // ties by degree then index
    fn pick(g: &FiniteGraph, color: &[usize], k: usize) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..g.order() {
            if color[v] != usize::MAX {
                continue;
            }
            let mut seen = vec![false; k];
            let mut sat = 0;
            for &w in g.neighbors(v) {
                if color[w] != usize::MAX && !seen[color[w]] {
                    seen[color[w]] = true;
                    sat += 1;
                }
            }
            let key = (sat, g.degree(v), usize::MAX - v);
            if best.map_or(true, |(s, d, i)| key > (s, d, i)) {
                best = Some(key);
            }
        }
        best.map(|(_, _, i)| usize::MAX - i)
    }

    fn go(
        g: &FiniteGraph,
        color: &mut [usize],
        k: usize,
        max_used: usize,
        budget: &mut u64,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let v = match pick(g, color, k) {
            Some(v) => v,
            None => return true,
        };
        let mut forbidden = vec![false; k];
        for &w in g.neighbors(v) {
            if color[w] != usize::MAX {
                forbidden[color[w]] = true;
            }
        }
        // symmetry breaking: allow at most one brand-new color
        let limit = k.min(max_used + 1);
        for c in 0..limit {
            if forbidden[c] {
                continue;
            }
            color[v] = c;
            let used = if c == max_used { max_used + 1 } else { max_used };
            if go(g, color, k, used, budget) {
                return true;
            }
            color[v] = usize::MAX;
        }
        false
    }

    if go(g, &mut color, k, 0, budget) {
        Ok(Some(color.iter().map(|&c| c as u32).collect()))
    } else {
        Ok(None)
    }
}

/// Outcome of a budgeted k-colorability search.
enum Decision {
    Colorable,
    NotColorable,
    Unknown,
}

fn decide_k_colorable(g: &FiniteGraph, k: u32, mut budget: u64) -> Result<Decision> {
    match k_colorable_impl(g, k, &mut budget)? {
        Some(_) => Ok(Decision::Colorable),
        // a leftover budget means the search space was exhausted
        None if budget > 0 => Ok(Decision::NotColorable),
        None => Ok(Decision::Unknown),
    }
}

/// Greedy clique from each of the highest-degree vertices; a cheap lower
/// bound for the chromatic number.
fn greedy_clique_bound(g: &FiniteGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = 1;
    for &start in order.iter().take(20.min(n)) {
        let mut clique = vec![start];
        for &v in g.neighbors(start) {
            if clique.iter().all(|&u| g.neighbors(v).contains(&u)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Exact chromatic number by increasing-k search from a clique lower bound.
pub fn exact_chi(g: &FiniteGraph) -> Result<u32> {
    if g.has_loops() {
        return Err(Error::Loops);
    }
    if g.order() == 0 {
        return Ok(0);
    }
    if g.num_edges() == 0 {
        return Ok(1);
    }
    let mut k = greedy_clique_bound(g).max(2) as u32;
    loop {
        if k_colorable(g, k)?.is_some() {
            return Ok(k);
        }
        k += 1;
        if k as usize > g.order() {
            return Err(Error::Internal("chi search exceeded graph order".into()));
        }
    }
}

/// Exact independence number by branch and bound over a 64-bit vertex mask.
/// Errors with `CapExceeded` when the order exceeds `cap` (at most 64).
pub fn independence_number(g: &FiniteGraph, cap: usize) -> Result<usize> {
    let n = g.order();
    if n > cap.min(64) {
        return Err(Error::CapExceeded(format!(
            "independence number cap is {} vertices",
            cap.min(64)
        )));
    }
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    let loop_mask = g
        .loop_vertices()
        .iter()
        .fold(0u64, |m, &v| m | (1 << v));
    let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };

    fn mis(candidates: u64, size: usize, best: &mut usize, masks: &[u64]) {
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        // include v
        mis(candidates & !masks[v] & !(1 << v), size + 1, best, masks);
        // exclude v
        mis(candidates & !(1 << v), size, best, masks);
    }

    let mut best = 0;
    mis(full & !loop_mask, 0, &mut best, &masks);
    Ok(best)
}

/// Two-sided chromatic bounds for an infinite graph, with the evidence that
/// produced each side.
#[derive(Debug, Clone)]
pub struct ChiBounds {
    pub lower: u32,
    pub lower_evidence: String,
    pub upper: u32,
    pub upper_evidence: String,
}

/// Q-rank of the 3x2 matrix extended by the standard basis vector e_j.
fn rank_with_basis_vector(m: &HeubergerMatrix, j: usize) -> Result<usize> {
    let mut data = m.rows_vec();
    for (i, row) in data.iter_mut().enumerate() {
        row.push(if i == j { 1 } else { 0 });
    }
    Ok(smith_normal_form(&HeubergerMatrix::new(data)?)?.rank())
}

/// Search-node budgets for the bound computations below. Lower bounds need
/// completed non-colorability proofs, so they get the larger share; upper
/// bounds only need some coloring to be found.
const LOWER_NODE_BUDGET: u64 = 400_000;
const UPPER_NODE_BUDGET: u64 = 40_000;

/// Chromatic bounds for the infinite Cayley graph of a rank-2 3x2 matrix:
/// lower bound from a radius-`radius` ball, upper bound from the best finite
/// quotient obtained by adding one column N * e_j over N in `moduli`.
/// Both sides are budgeted, so the bracket may be loose on hard instances
/// but the bounds themselves are always sound.
pub fn chi_bounds_infinite(
    m: &HeubergerMatrix,
    radius: u32,
    moduli: &[i64],
    ball_cap: usize,
) -> Result<ChiBounds> {
    if m.num_rows() != 3 || m.num_cols() != 2 {
        return Err(Error::Shape {
            expected: "3x2".into(),
            got: format!("{}x{}", m.num_rows(), m.num_cols()),
        });
    }
    let ball = bfs_ball(m, radius, ball_cap)?;
    if ball.has_loops() {
        return Err(Error::Loops);
    }
    // raise the lower bound while non-colorability proofs stay affordable
    let mut lower = 2u32;
    let mut k = 2u32;
    while (k as usize) <= ball.order() {
        match decide_k_colorable(&ball, k, LOWER_NODE_BUDGET)? {
            Decision::Colorable => break,
            Decision::NotColorable => {
                lower = k + 1;
                k += 1;
            }
            Decision::Unknown => break,
        }
    }
    let lower_evidence = format!(
        "ball of radius {radius} has {} vertices and needs at least {lower} colors",
        ball.order()
    );

    // direction along which to truncate: the first basis vector independent
    // of the column span over Q
    let mut dir = None;
    for j in 0..3 {
        if rank_with_basis_vector(m, j)? == 3 {
            dir = Some(j);
            break;
        }
    }
    let j = dir.ok_or_else(|| {
        Error::Precondition("column span has rank below 2; no finite truncation".into())
    })?;

    let mut upper: Option<(u32, i64)> = None;
    for &n in moduli {
        if n == 0 {
            continue;
        }
        let mut extra = vec![0i64; 3];
        extra[j] = n;
        let q = match finite_quotient_graph(m, &[extra]) {
            Ok(q) => q,
            Err(Error::CapExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        if q.has_loops() {
            continue;
        }
        // look for the smallest affordable coloring of this quotient
        let best_so_far = upper.map_or(u32::MAX, |(u, _)| u);
        let mut k = lower;
        while k < best_so_far && k <= lower + 3 {
            match decide_k_colorable(&q, k, UPPER_NODE_BUDGET)? {
                Decision::Colorable => {
                    upper = Some((k, n));
                    break;
                }
                _ => k += 1,
            }
        }
        if upper.map_or(false, |(u, _)| u == lower) {
            break;
        }
    }
    let (upper, used_n) = upper.ok_or_else(|| {
        Error::Internal("no colorable loop-free finite quotient found in the moduli range".into())
    })?;
    if lower > upper {
        return Err(Error::Internal(format!(
            "bound inversion: ball gives >= {lower} but quotient gives <= {upper}"
        )));
    }
    Ok(ChiBounds {
        lower,
        lower_evidence,
        upper,
        upper_evidence: format!(
            "quotient by extra relation {used_n} * e{} is {upper}-colorable",
            j + 1
        ),
    })
}

/// Verify that a coloring is proper and uses at most k colors.
pub fn check_coloring(g: &FiniteGraph, coloring: &[u32], k: u32) -> bool {
    if coloring.len() != g.order() || g.has_loops() {
        return false;
    }
    if coloring.iter().any(|&c| c >= k) {
        return false;
    }
    g.edges().iter().all(|&(u, v)| coloring[u] != coloring[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{circulant_graph, DEFAULT_BALL_CAP};
    use crate::classify::CirculantSpec;

    fn path(n: usize) -> FiniteGraph {
        let mut g = FiniteGraph::new(n);
        for v in 0..n.saturating_sub(1) {
            g.add_edge(v, v + 1);
        }
        g.normalize();
        g
    }

    fn complete(n: usize) -> FiniteGraph {
        let mut g = FiniteGraph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g.normalize();
        g
    }

    #[test]
    fn chi_of_small_graphs() {
        assert_eq!(exact_chi(&path(5)).unwrap(), 2);
        assert_eq!(exact_chi(&complete(5)).unwrap(), 5);
        assert_eq!(exact_chi(&FiniteGraph::new(3)).unwrap(), 1);
        let spec = CirculantSpec::new(5, 1, 2).unwrap();
        assert_eq!(exact_chi(&circulant_graph(&spec).unwrap()).unwrap(), 5);
        let spec = CirculantSpec::new(13, 1, 5).unwrap();
        assert_eq!(exact_chi(&circulant_graph(&spec).unwrap()).unwrap(), 4);
    }

    #[test]
    fn witness_is_proper() {
        let spec = CirculantSpec::new(9, 1, 2).unwrap();
        let g = circulant_graph(&spec).unwrap();
        let chi = exact_chi(&g).unwrap();
        let w = k_colorable(&g, chi).unwrap().unwrap();
        assert!(check_coloring(&g, &w, chi));
        assert!(k_colorable(&g, chi - 1).unwrap().is_none());
    }

    #[test]
    fn loops_rejected() {
        let mut g = FiniteGraph::new(2);
        g.add_edge(0, 0);
        assert_eq!(exact_chi(&g).unwrap_err(), Error::Loops);
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&complete(6), 64).unwrap(), 1);
        assert_eq!(independence_number(&path(7), 64).unwrap(), 4);
        let spec = CirculantSpec::new(13, 1, 5).unwrap();
        let g = circulant_graph(&spec).unwrap();
        assert_eq!(independence_number(&g, 64).unwrap(), 4);
        assert!(matches!(
            independence_number(&complete(10), 5),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn infinite_bounds_tight_on_known_cases() {
        let m = HeubergerMatrix::parse("1 0; 0 1; 2 3").unwrap();
        let b = chi_bounds_infinite(&m, 5, &default_moduli(), DEFAULT_BALL_CAP).unwrap();
        assert_eq!((b.lower, b.upper), (4, 4));

        let m = HeubergerMatrix::parse("1 0; 0 1; 3 5").unwrap();
        let b = chi_bounds_infinite(&m, 4, &default_moduli(), DEFAULT_BALL_CAP).unwrap();
        assert_eq!(b.upper, 2);
    }
}
