//! Kontsevich graphs: admissibility, the operators `B_Gamma`, classification of
//! 0-admissible graphs, and graph weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::polyvector::PolyVector;

mod weight;

pub use weight::{bernoulli_polynomial, bernoulli_weight, weight_mc, BernoulliWeight, WeightEstimate};

/// Edge target: aerial vertex or ground vertex, both 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Vertex {
    Aerial(usize),
    Ground(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KGraph {
    n: usize,
    m: usize,
    edges: Vec<(usize, Vertex)>,
    first_kind: Option<BTreeSet<usize>>,
}

impl KGraph {
    /// Edges must be grouped by nondecreasing source; order inside a group is
    /// the labeling.
    pub fn new(n: usize, m: usize, edges: Vec<(usize, Vertex)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (k, &(s, t)) in edges.iter().enumerate() {
            if s >= n {
                return Err(Error::Structural(format!("edge {} starts at missing aerial vertex {}", k + 1, s + 1)));
            }
            match t {
                Vertex::Aerial(a) if a >= n => {
                    return Err(Error::Structural(format!("edge {} ends at missing aerial vertex {}", k + 1, a + 1)))
                }
                Vertex::Ground(g) if g >= m => {
                    return Err(Error::Structural(format!("edge {} ends at missing ground vertex G{}", k + 1, g + 1)))
                }
                Vertex::Aerial(a) if a == s => {
                    return Err(Error::Structural(format!("edge {} is a loop at {}", k + 1, s + 1)))
                }
                _ => {}
            }
            if !seen.insert((s, t)) {
                return Err(Error::Structural(format!("edge {} repeats an earlier edge", k + 1)));
            }
            if k > 0 && edges[k - 1].0 > s {
                return Err(Error::Structural("edges must be ordered by source vertex".into()));
            }
        }
        Ok(KGraph {
            n,
            m,
            edges,
            first_kind: None,
        })
    }

    /// Sets `V^{1,1}` (0-based aerial indices); the rest of the aerial vertices form `V^{1,2}`.
    pub fn with_partition(mut self, first_kind: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = first_kind.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::Structural(format!("partition names missing vertex {}", bad + 1)));
        }
        self.first_kind = Some(set);
        Ok(self)
    }

    pub fn aerial(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, Vertex)] {
        &self.edges
    }

    pub fn partition(&self) -> Option<&BTreeSet<usize>> {
        self.first_kind.as_ref()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    /// Edge count `2n + m - 2` of graphs with a possibly nonzero weight.
    pub fn has_weight_dimension(&self) -> bool {
        2 * self.n + self.m == self.edges.len() + 2
    }

    /// Aerial vertices receive at most one edge.
    pub fn is_linear(&self) -> bool {
        (0..self.n).all(|v| self.in_degree(Vertex::Aerial(v)) <= 1)
    }

    /// Swaps two edges with the same source.
    pub fn swap_edges(&self, a: usize, b: usize) -> Result<KGraph> {
        if self.edges[a].0 != self.edges[b].0 {
            return Err(Error::Precondition("only edges with a common source can be relabeled".into()));
        }
        let mut g = self.clone();
        g.edges.swap(a, b);
        Ok(g)
    }

    /// Parses `1->2, 2->G1` (aerial vertices numbered from 1, `G` marks ground
    /// vertices; `→` is accepted). Vertex counts are the largest indices seen.
    pub fn parse(text: &str) -> Result<KGraph> {
        let edges = parse_edges(text)?;
        let n = edges
            .iter()
            .flat_map(|&(s, t)| [Some(s), if let Vertex::Aerial(a) = t { Some(a) } else { None }])
            .flatten()
            .map(|v| v + 1)
            .max()
            .unwrap_or(0);
        let m = edges
            .iter()
            .filter_map(|&(_, t)| if let Vertex::Ground(g) = t { Some(g + 1) } else { None })
            .max()
            .unwrap_or(0);
        KGraph::new(n, m, edges)
    }

    /// Like [`KGraph::parse`] with explicit vertex counts.
    pub fn parse_with(text: &str, n: usize, m: usize) -> Result<KGraph> {
        KGraph::new(n, m, parse_edges(text)?)
    }

    pub fn render(&self) -> String {
        self.edges
            .iter()
            .map(|&(s, t)| match t {
                Vertex::Aerial(a) => format!("{}->{}", s + 1, a + 1),
                Vertex::Ground(g) => format!("{}->G{}", s + 1, g + 1),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn parse_vertex(tok: &str) -> Result<Vertex> {
    let tok = tok.trim();
    let (ground, digits) = match tok.strip_prefix(['G', 'g']) {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let k: usize = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex '{tok}'")))?;
    if k == 0 {
        return Err(Error::Parse(format!("vertices are numbered from 1: '{tok}'")));
    }
    Ok(if ground { Vertex::Ground(k - 1) } else { Vertex::Aerial(k - 1) })
}

fn parse_edges(text: &str) -> Result<Vec<(usize, Vertex)>> {
    let mut edges = Vec::new();
    for part in text.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = part
            .split_once("->")
            .or_else(|| part.split_once('→'))
            .ok_or_else(|| Error::Parse(format!("expected 'a->b', got '{part}'")))?;
        let s = match parse_vertex(a)? {
            Vertex::Aerial(s) => s,
            Vertex::Ground(_) => return Err(Error::Parse(format!("edge '{part}' starts at a ground vertex"))),
        };
        edges.push((s, parse_vertex(b)?));
    }
    Ok(edges)
}

/// Constraint on the number of edges in [`enumerate_linear_graphs`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeCount {
    /// `2n + m - 2`
    Weight,
    Exactly(usize),
    Any,
}

fn ordered_subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), vec![false; items.len()])];
    while let Some((seq, used)) = frontier.pop() {
        for (i, &it) in items.iter().enumerate() {
            if used[i] {
                continue;
            }
            let mut s: Vec<T> = seq.clone();
            s.push(it);
            let mut u = used.clone();
            u[i] = true;
            out.push(s.clone());
            frontier.push((s, u));
        }
    }
    out
}

/// Labeled graphs whose aerial vertices have in-degree at most one.
pub fn enumerate_linear_graphs(n: usize, m: usize, count: EdgeCount) -> Vec<KGraph> {
    let target = match count {
        EdgeCount::Weight => match (2 * n + m).checked_sub(2) {
            Some(e) => Some(e),
            None => return Vec::new(),
        },
        EdgeCount::Exactly(e) => Some(e),
        EdgeCount::Any => None,
    };
    let choices: Vec<Vec<Vec<Vertex>>> = (0..n)
        .map(|s| {
            let targets: Vec<Vertex> = (0..n)
                .filter(|&a| a != s)
                .map(Vertex::Aerial)
                .chain((0..m).map(Vertex::Ground))
                .collect();
            let mut subs = ordered_subsets(&targets);
            subs.sort();
            subs
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    if n == 0 {
        return out;
    }
    loop {
        let total: usize = (0..n).map(|s| choices[s][pick[s]].len()).sum();
        if target.is_none_or(|t| t == total) {
            let edges: Vec<(usize, Vertex)> = (0..n)
                .flat_map(|s| choices[s][pick[s]].iter().map(move |&t| (s, t)))
                .collect();
            let g = KGraph::new(n, m, edges).expect("enumerated graphs are well formed");
            if g.is_linear() {
                out.push(g);
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// Membership in `G^{l,0}` together with the two conditions on `V^{1,1}`:
/// it is `{1, ..., l+1}` and no edge joins two of its vertices.
pub fn is_l_admissible(g: &KGraph, l: usize) -> Result<bool> {
    let part = g
        .partition()
        .ok_or_else(|| Error::Structural("l-admissibility needs the vertex partition".into()))?;
    if 2 * g.n + g.m != g.edges.len() + 2 + l {
        return Ok(false);
    }
    if part.len() != l + 1 || part.iter().copied().ne(0..=l) {
        return Ok(false);
    }
    Ok(!g
        .edges
        .iter()
        .any(|&(s, t)| matches!(t, Vertex::Aerial(a) if part.contains(&s) && part.contains(&a))))
}

/// `B_Gamma(alpha_1, ..., alpha_n)(f_1, ..., f_m)` with coefficients read through
/// [`PolyVector::to_tensor`].
pub fn b_gamma(g: &KGraph, polyvectors: &[PolyVector], functions: &[Polynomial]) -> Result<Polynomial> {
    if polyvectors.len() != g.n || functions.len() != g.m {
        return Err(Error::Structural(format!(
            "graph has {} aerial and {} ground vertices, got {} polyvectors and {} functions",
            g.n,
            g.m,
            polyvectors.len(),
            functions.len()
        )));
    }
    let dim = polyvectors
        .first()
        .map(|a| a.dim())
        .or_else(|| functions.first().map(|f| f.dim()))
        .unwrap_or(0);
    if polyvectors.iter().any(|a| a.dim() != dim) || functions.iter().any(|f| f.dim() != dim) {
        return Err(Error::Structural("arguments live in different dimensions".into()));
    }
    for (k, a) in polyvectors.iter().enumerate() {
        if g.out_degree(k) != a.degree() {
            return Err(Error::Precondition(format!(
                "aerial vertex {} has out-degree {} but its polyvector has degree {}",
                k + 1,
                g.out_degree(k),
                a.degree()
            )));
        }
    }
    let tensors: Vec<BTreeMap<Vec<usize>, Polynomial>> = polyvectors.iter().map(|a| a.to_tensor()).collect();
    let e = g.edges.len();
    let mut total = Polynomial::zero(dim);
    if dim == 0 && e > 0 {
        return Ok(total);
    }
    let mut idx = vec![0usize; e];
    loop {
        let mut prod = Polynomial::one(dim);
        for k in 0..g.n {
            let key: Vec<usize> = (0..e).filter(|&j| g.edges[j].0 == k).map(|j| idx[j]).collect();
            let Some(mut c) = tensors[k].get(&key).cloned() else {
                prod = Polynomial::zero(dim);
                break;
            };
            for j in (0..e).filter(|&j| g.edges[j].1 == Vertex::Aerial(k)) {
                c = c.partial(idx[j]);
            }
            prod = &prod * &c;
            if prod.is_zero() {
                break;
            }
        }
        if !prod.is_zero() {
            for (l, f) in functions.iter().enumerate() {
                let mut d = f.clone();
                for j in (0..e).filter(|&j| g.edges[j].1 == Vertex::Ground(l)) {
                    d = d.partial(idx[j]);
                }
                prod = &prod * &d;
            }
            total = &total + &prod;
        }
        let mut k = e;
        loop {
            if k == 0 {
                return Ok(total);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dim {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Connected pieces of a 0-admissible graph once the vertex `alpha` (vertex 1)
/// and its edges are removed.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Decomposition {
    /// Edges from `alpha` straight to the ground.
    pub trivial: usize,
    /// Sizes of snail components.
    pub snails: Vec<usize>,
    /// Sizes of pure wheels.
    pub wheels: Vec<usize>,
    pub other: usize,
}

impl Decomposition {
    pub fn is_simple(&self) -> bool {
        self.other == 0
    }
}

pub fn classify_zero_admissible(g: &KGraph) -> Result<Decomposition> {
    let admissible = g.partition().is_some() && is_l_admissible(g, 0)?;
    let linear = (1..g.n).all(|v| g.in_degree(Vertex::Aerial(v)) <= 1);
    if !admissible || !linear {
        return Err(Error::Precondition(
            "classification needs a linear 0-admissible graph with partition {1}".into(),
        ));
    }
    let alpha = 0usize;
    // union-find over aerial 1..n then grounds
    let size = g.n + g.m;
    let node = |v: Vertex| match v {
        Vertex::Aerial(a) => a,
        Vertex::Ground(l) => g.n + l,
    };
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(s, t) in &g.edges {
        if s == alpha || t == Vertex::Aerial(alpha) {
            continue;
        }
        let (a, b) = (find(&mut parent, s), find(&mut parent, node(t)));
        parent[a] = b;
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 1..size {
        let r = find(&mut parent, x);
        comps.entry(r).or_default().push(x);
    }
    let mut out = Decomposition::default();
    for members in comps.values() {
        let aerial: Vec<usize> = members.iter().copied().filter(|&x| x < g.n).collect();
        let grounds: Vec<usize> = members.iter().copied().filter(|&x| x >= g.n).map(|x| x - g.n).collect();
        let from_alpha: Vec<Vertex> = g
            .edges
            .iter()
            .filter(|&&(s, t)| s == alpha && members.contains(&node(t)))
            .map(|e| e.1)
            .collect();
        if aerial.is_empty() {
            // a lone ground vertex
            if from_alpha.len() == 1 {
                out.trivial += 1;
            } else {
                out.other += 1;
            }
            continue;
        }
        // every aerial vertex: one edge back to alpha and one edge inside the component
        let mut next: BTreeMap<usize, Vertex> = BTreeMap::new();
        let mut shape_ok = true;
        for &v in &aerial {
            let outs: Vec<Vertex> = g.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect();
            let back = outs.iter().filter(|&&t| t == Vertex::Aerial(alpha)).count();
            let inner: Vec<Vertex> = outs.into_iter().filter(|&t| t != Vertex::Aerial(alpha)).collect();
            if back != 1 || inner.len() != 1 {
                shape_ok = false;
                break;
            }
            next.insert(v, inner[0]);
        }
        if !shape_ok {
            out.other += 1;
            continue;
        }
        let p = aerial.len();
        if grounds.is_empty() && from_alpha.is_empty() {
            // a single cycle through all vertices
            let mut v = aerial[0];
            let mut steps = 0;
            loop {
                match next[&v] {
                    Vertex::Aerial(w) => v = w,
                    Vertex::Ground(_) => break,
                }
                steps += 1;
                if v == aerial[0] || steps > p {
                    break;
                }
            }
            if v == aerial[0] && steps == p {
                out.wheels.push(p);
            } else {
                out.other += 1;
            }
        } else if grounds.len() == 1 && from_alpha.len() == 1 {
            let Vertex::Aerial(root) = from_alpha[0] else {
                out.other += 1;
                continue;
            };
            let mut v = root;
            let mut visited = 1;
            let reached_ground = loop {
                match next[&v] {
                    Vertex::Ground(l) => break l == grounds[0],
                    Vertex::Aerial(w) => {
                        v = w;
                        visited += 1;
                        if visited > p {
                            break false;
                        }
                    }
                }
            };
            if reached_ground && visited == p {
                out.snails.push(p);
            } else {
                out.other += 1;
            }
        } else {
            out.other += 1;
        }
    }
    out.snails.sort_unstable();
    out.wheels.sort_unstable();
    Ok(out)
}

/// Graphs built from a `k`-vector field `alpha` (vertex 1), `gamma` copies
/// (out-degree 2, linear), and `k` ground vertices, keeping those whose
/// components pass the dimension count: a component with `p` aerial and `c`
/// ground vertices receives exactly `c` edges from `alpha`. One labeling per
/// edge set.
pub fn enumerate_zero_admissible(gammas: usize, k: usize) -> Vec<KGraph> {
    let n = gammas + 1;
    let m = k;
    let alpha_targets: Vec<Vertex> = (1..n).map(Vertex::Aerial).chain((0..m).map(Vertex::Ground)).collect();
    let alpha_choices = combinations(&alpha_targets, k);
    let gamma_choices: Vec<Vec<Vec<Vertex>>> = (1..n)
        .map(|s| {
            let t: Vec<Vertex> = (0..n)
                .filter(|&a| a != s)
                .map(Vertex::Aerial)
                .chain((0..m).map(Vertex::Ground))
                .collect();
            combinations(&t, 2)
        })
        .collect();
    let mut out = Vec::new();
    if gamma_choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    let mut pick = vec![0usize; gammas];
    for a in &alpha_choices {
        loop {
            let mut edges: Vec<(usize, Vertex)> = a.iter().map(|&t| (0, t)).collect();
            for (i, &c) in pick.iter().enumerate() {
                edges.extend(gamma_choices[i][c].iter().map(|&t| (i + 1, t)));
            }
            if let Some(g) = admissible_candidate(n, m, edges) {
                out.push(g);
            }
            let mut j = gammas;
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < gamma_choices[j].len() {
                    break false;
                }
                pick[j] = 0;
            };
            if done {
                break;
            }
        }
    }
    out
}

fn admissible_candidate(n: usize, m: usize, edges: Vec<(usize, Vertex)>) -> Option<KGraph> {
    let g = KGraph::new(n, m, edges).ok()?.with_partition([0]).ok()?;
    let ground_ok = (0..m).all(|l| g.in_degree(Vertex::Ground(l)) <= 1);
    let gamma_ok = (1..n).all(|v| g.in_degree(Vertex::Aerial(v)) <= 1);
    if !ground_ok || !gamma_ok {
        return None;
    }
    // components after removing alpha
    let mut label: Vec<usize> = (0..n + m).collect();
    let node = |v: Vertex| match v {
        Vertex::Aerial(a) => a,
        Vertex::Ground(l) => n + l,
    };
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, t) in g.edges() {
            if s == 0 || t == Vertex::Aerial(0) {
                continue;
            }
            let (x, y) = (node(Vertex::Aerial(s)), node(t));
            let l = label[x].min(label[y]);
            if label[x] != l || label[y] != l {
                label[x] = l;
                label[y] = l;
                changed = true;
            }
        }
    }
    let roots: BTreeSet<usize> = (1..n + m).map(|x| label[x]).collect();
    for r in roots {
        let grounds = (n..n + m).filter(|&x| label[x] == r).count();
        let hits = g
            .edges()
            .iter()
            .filter(|&&(s, t)| s == 0 && label[node(t)] == r)
            .count();
        if hits != grounds {
            return None;
        }
    }
    Some(g)
}

fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Aerial vertex over two grounds.
pub fn wedge_graph() -> KGraph {
    KGraph::new(1, 2, vec![(0, Vertex::Ground(0)), (0, Vertex::Ground(1))]).expect("static graph")
}

/// `alpha` (vertex 1) feeds the root `v_1` of a chain `v_1 -> ... -> v_p -> G1`;
/// every `v_k` also sends an edge back to `alpha`. `p = 0` is the single edge
/// `alpha -> G1`.
pub fn snail_graph(p: usize) -> KGraph {
    let mut edges = vec![(0, if p == 0 { Vertex::Ground(0) } else { Vertex::Aerial(1) })];
    for k in 1..=p {
        edges.push((k, Vertex::Aerial(0)));
        edges.push((k, if k == p { Vertex::Ground(0) } else { Vertex::Aerial(k + 1) }));
    }
    KGraph::new(p + 1, 1, edges)
        .and_then(|g| g.with_partition([0]))
        .expect("static graph")
}

/// Cycle `v_1 -> ... -> v_p -> v_1` with every `v_k` also pointing to `alpha` (vertex 1).
pub fn wheel_graph(p: usize) -> KGraph {
    assert!(p >= 2, "a wheel needs at least two spokes");
    let mut edges = Vec::new();
    for k in 1..=p {
        edges.push((k, Vertex::Aerial(0)));
        edges.push((k, Vertex::Aerial(if k == p { 1 } else { k + 1 })));
    }
    KGraph::new(p + 1, 0, edges)
        .and_then(|g| g.with_partition([0]))
        .expect("static graph")
}

/// The deployed snail at the endpoint where `alpha` reaches the real axis: a
/// new vertex `w` (vertex 1) heads the chain `w -> v_1 -> ... -> v_p -> G1`, and
/// `w` and every `v_k` point to `alpha`, now the ground vertex `G2` at 1.
pub fn bernoulli_graph(p: usize) -> KGraph {
    let alpha = Vertex::Ground(1);
    let mut edges = Vec::new();
    for k in 0..=p {
        let next = if k == p { Vertex::Ground(0) } else { Vertex::Aerial(k + 1) };
        edges.push((k, next));
        edges.push((k, alpha));
    }
    KGraph::new(p + 1, 2, edges).expect("static graph")
}

#[cfg(test)]
mod tests;
