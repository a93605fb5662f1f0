//! Concrete finite graphs: quotient Cayley graphs, circulants, and balls in
//! infinite Cayley graphs, all as explicit adjacency lists.

use std::collections::{HashMap, VecDeque};

use crate::classify::CirculantSpec;
use crate::error::{Error, Result};
use crate::intmat::{checked_add, smith_normal_form, HeubergerMatrix};

/// Hard safety cap on the number of vertices of any materialized graph.
pub const MAX_GRAPH_ORDER: usize = 2_000_000;

/// Default cap for ball construction in infinite graphs.
pub const DEFAULT_BALL_CAP: usize = 200_000;

/// A finite undirected graph with optional group-element labels on vertices.
/// Loops are recorded separately from the simple adjacency lists.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<Vec<i64>>>,
    loop_vertices: Vec<usize>,
}

impl FiniteGraph {
    pub fn new(order: usize) -> Self {
        Self {
            adj: vec![Vec::new(); order],
            labels: None,
            loop_vertices: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn has_loops(&self) -> bool {
        !self.loop_vertices.is_empty()
    }

    pub fn loop_vertices(&self) -> &[usize] {
        &self.loop_vertices
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            if !self.loop_vertices.contains(&u) {
                self.loop_vertices.push(u);
            }
            return;
        }
        if !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    /// Sort all neighbor lists so iteration order is deterministic.
    pub fn normalize(&mut self) {
        for n in &mut self.adj {
            n.sort_unstable();
        }
        self.loop_vertices.sort_unstable();
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn set_labels(&mut self, labels: Vec<Vec<i64>>) {
        self.labels = Some(labels);
    }

    pub fn label(&self, v: usize) -> Option<&[i64]> {
        self.labels.as_ref().map(|l| l[v].as_slice())
    }

    /// All edges as (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.order() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Plain-text edge list: a header line "order edges", then one "u v"
    /// line per edge, then one "loop v" line per loop vertex.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.order(), edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        let mut loops = self.loop_vertices.clone();
        loops.sort_unstable();
        for v in loops {
            s.push_str(&format!("loop {v}\n"));
        }
        s
    }

    /// Is the graph bipartite? (BFS 2-coloring; loops make it non-bipartite.)
    pub fn is_bipartite(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        let n = self.order();
        let mut side = vec![u8::MAX; n];
        for start in 0..n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Mixed-radix coordinates for Z^m / H when H has full rank: after U M V = D,
/// the map v -> (U v) mod diag is a group isomorphism onto
/// Z_{d1} x ... x Z_{dm}.
struct TorsionCoords {
    u: HeubergerMatrix,
    diag: Vec<i64>,
    strides: Vec<usize>,
}

impl TorsionCoords {
    fn new(m: &HeubergerMatrix) -> Result<Self> {
        let snf = smith_normal_form(m)?;
        let diag = snf.diagonal();
        if diag.len() < m.num_rows() || diag.iter().any(|&d| d == 0) {
            return Err(Error::InfiniteQuotient);
        }
        let mut order: usize = 1;
        for &d in &diag {
            order = order
                .checked_mul(d as usize)
                .ok_or(Error::Overflow)?;
            if order > MAX_GRAPH_ORDER {
                return Err(Error::CapExceeded(format!(
                    "quotient order exceeds {MAX_GRAPH_ORDER}"
                )));
            }
        }
        let mut strides = vec![0usize; diag.len()];
        let mut acc = 1usize;
        for i in 0..diag.len() {
            strides[i] = acc;
            acc *= diag[i] as usize;
        }
        Ok(Self {
            u: snf.u,
            diag,
            strides,
        })
    }

    fn order(&self) -> usize {
        self.diag.iter().map(|&d| d as usize).product()
    }

    fn coords(&self, v: &[i64]) -> Result<Vec<i64>> {
        let w = self.u.mul_vec(v)?;
        Ok(w.iter()
            .zip(&self.diag)
            .map(|(&x, &d)| x.rem_euclid(d))
            .collect())
    }

    fn index(&self, coords: &[i64]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    fn decode(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.diag.len()];
        for i in 0..self.diag.len() {
            out[i] = (idx % self.diag[i] as usize) as i64;
            idx /= self.diag[i] as usize;
        }
        out
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.diag)
            .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
            .collect()
    }
}

/// The Cayley graph of Z^m / H with generators the images of +/-e_1..+/-e_m,
/// where H is spanned by the columns of `m` plus the optional extra columns.
/// Errors with `InfiniteQuotient` if the span does not have full rank.
pub fn finite_quotient_graph(
    m: &HeubergerMatrix,
    extra_columns: &[Vec<i64>],
) -> Result<FiniteGraph> {
    let rows = m.num_rows();
    for c in extra_columns {
        if c.len() != rows {
            return Err(Error::Shape {
                expected: format!("extra column of length {rows}"),
                got: format!("length {}", c.len()),
            });
        }
    }
    let mut data = m.rows_vec();
    for (i, row) in data.iter_mut().enumerate() {
        for c in extra_columns {
            row.push(c[i]);
        }
    }
    let aug = HeubergerMatrix::new(data)?;
    let tc = TorsionCoords::new(&aug)?;
    let order = tc.order();

    let mut gens = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut e = vec![0i64; rows];
        e[i] = 1;
        gens.push(tc.coords(&e)?);
    }

    let mut g = FiniteGraph::new(order);
    let mut labels = Vec::with_capacity(order);
    for idx in 0..order {
        let c = tc.decode(idx);
        for gen in &gens {
            let n = tc.add(&c, gen);
            g.add_edge(idx, tc.index(&n));
        }
        labels.push(c);
    }
    g.set_labels(labels);
    g.normalize();
    Ok(g)
}

/// The circulant C_n(a, b) as a concrete graph on |n| vertices.
pub fn circulant_graph(spec: &CirculantSpec) -> Result<FiniteGraph> {
    spec.validate()?;
    let n = spec.n.unsigned_abs() as usize;
    if n > MAX_GRAPH_ORDER {
        return Err(Error::CapExceeded(format!(
            "circulant order exceeds {MAX_GRAPH_ORDER}"
        )));
    }
    let modn = spec.n.abs();
    let mut g = FiniteGraph::new(n);
    for v in 0..n as i64 {
        for step in [spec.a, spec.b] {
            let w = (v + step).rem_euclid(modn) as usize;
            g.add_edge(v as usize, w);
        }
    }
    g.set_labels((0..n as i64).map(|v| vec![v]).collect());
    g.normalize();
    Ok(g)
}

/// Canonical coordinates for Z^m / H: torsion coordinates up to the rank of
/// H, the rest free, via the Smith decomposition.
struct QuotientCoords {
    u: HeubergerMatrix,
    diag: Vec<i64>,
    rank: usize,
}

impl QuotientCoords {
    fn new(m: &HeubergerMatrix) -> Result<Self> {
        let snf = smith_normal_form(m)?;
        let rank = snf.rank();
        let diag = snf.diagonal();
        Ok(Self { u: snf.u, diag, rank })
    }

    fn canon(&self, v: &[i64]) -> Result<Vec<i64>> {
        let w = self.u.mul_vec(v)?;
        Ok(self.reduce(w))
    }

    fn reduce(&self, mut w: Vec<i64>) -> Vec<i64> {
        for i in 0..self.rank {
            w[i] = w[i].rem_euclid(self.diag[i]);
        }
        w
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let sum: Result<Vec<i64>> = a.iter().zip(b).map(|(&x, &y)| checked_add(x, y)).collect();
        Ok(self.reduce(sum?))
    }
}

/// The ball of the given radius around the identity in the Cayley graph of
/// Z^m / H, H spanned by the columns of `m`. Vertices are discovered by BFS
/// with generator order e1, -e1, e2, -e2, ...; errors with `CapExceeded`
/// past `cap` vertices.
pub fn bfs_ball(m: &HeubergerMatrix, radius: u32, cap: usize) -> Result<FiniteGraph> {
    let rows = m.num_rows();
    let rc = QuotientCoords::new(m)?;
    let zero = rc.canon(&vec![0; rows])?;
    let mut gen_coords = Vec::with_capacity(2 * rows);
    for i in 0..rows {
        for sign in [1i64, -1] {
            let mut e = vec![0i64; rows];
            e[i] = sign;
            gen_coords.push(rc.canon(&e)?);
        }
    }
    let has_loop_gen = gen_coords.iter().any(|g| *g == zero);

    let mut id_of: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut verts: Vec<Vec<i64>> = Vec::new();
    id_of.insert(zero.clone(), 0);
    verts.push(zero);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &u in &frontier {
            let cu = verts[u].clone();
            for g in &gen_coords {
                let w = rc.add(&cu, g)?;
                if !id_of.contains_key(&w) {
                    if verts.len() >= cap {
                        return Err(Error::CapExceeded(format!(
                            "ball exceeds {cap} vertices"
                        )));
                    }
                    id_of.insert(w.clone(), verts.len());
                    next.push(verts.len());
                    verts.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let mut g = FiniteGraph::new(verts.len());
    for (u, cu) in verts.iter().enumerate() {
        if has_loop_gen {
            g.add_edge(u, u);
        }
        for gen in &gen_coords {
            let w = rc.add(cu, gen)?;
            if let Some(&v) = id_of.get(&w) {
                g.add_edge(u, v);
            }
        }
    }
    g.set_labels(verts);
    g.normalize();
    Ok(g)
}
