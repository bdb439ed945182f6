//! Finite crystal graphs: breadth-first generation, tensor products, rooted isomorphism and
//! export to DOT or JSON.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::affine_data::AffineCartanDatum;
use crate::error::{Error, Result};
use crate::par;
use crate::paths::{ClPath, Op, Path};
use crate::weights::{ClWeight, LevelZeroWeight};

pub const DEFAULT_CAP: usize = 1_000_000;

/// A crystal whose elements can be enumerated one operator at a time.
pub trait Crystal: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync;
    type Weight: Clone + Eq + Hash + Serialize + Send + Sync;

    /// Number of nodes `|I|`.
    fn nodes(&self) -> usize;
    fn apply(&self, b: &Self::Elem, op: Op) -> Option<Self::Elem>;
    fn weight(&self, b: &Self::Elem) -> Self::Weight;
    fn epsilon(&self, b: &Self::Elem, j: usize) -> Result<i64>;
    fn phi(&self, b: &Self::Elem, j: usize) -> Result<i64>;
    fn key(&self, b: &Self::Elem) -> String;
}

/// LS paths with `δ`, under the root operators.
pub struct PathCrystal<'a> {
    pub datum: &'a AffineCartanDatum,
}

impl Crystal for PathCrystal<'_> {
    type Elem = Path;
    type Weight = LevelZeroWeight;

    fn nodes(&self) -> usize {
        self.datum.rank() + 1
    }
    fn apply(&self, b: &Path, op: Op) -> Option<Path> {
        b.apply(self.datum, op)
    }
    fn weight(&self, b: &Path) -> LevelZeroWeight {
        b.endpoint()
    }
    fn epsilon(&self, b: &Path, j: usize) -> Result<i64> {
        b.epsilon(self.datum, j)
    }
    fn phi(&self, b: &Path, j: usize) -> Result<i64> {
        b.phi(self.datum, j)
    }
    fn key(&self, b: &Path) -> String {
        b.key()
    }
}

/// Paths modulo `δ`.
pub struct ClPathCrystal<'a> {
    pub datum: &'a AffineCartanDatum,
}

impl Crystal for ClPathCrystal<'_> {
    type Elem = ClPath;
    type Weight = ClWeight;

    fn nodes(&self) -> usize {
        self.datum.rank() + 1
    }
    fn apply(&self, b: &ClPath, op: Op) -> Option<ClPath> {
        b.apply(self.datum, op)
    }
    fn weight(&self, b: &ClPath) -> ClWeight {
        b.endpoint()
    }
    fn epsilon(&self, b: &ClPath, j: usize) -> Result<i64> {
        b.epsilon(self.datum, j)
    }
    fn phi(&self, b: &ClPath, j: usize) -> Result<i64> {
        b.phi(self.datum, j)
    }
    fn key(&self, b: &ClPath) -> String {
        b.key()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex<W> {
    pub key: String,
    pub wt: W,
    pub eps: Vec<i64>,
    pub phi: Vec<i64>,
}

/// A finite crystal graph. Vertices are sorted by key; `f[v][j]` and `e[v][j]` hold the
/// targets of `f_j` and `e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalGraph<W> {
    pub nodes: usize,
    pub vertices: Vec<Vertex<W>>,
    pub f: Vec<Vec<Option<usize>>>,
    pub e: Vec<Vec<Option<usize>>>,
    /// Vertices with an operator image outside the graph (depth-bounded generation only).
    pub incomplete: Vec<bool>,
    index: HashMap<String, usize>,
}

/// A generated graph together with the elements and the operator words reaching them.
#[derive(Debug, Clone)]
pub struct Generated<E, W> {
    pub graph: CrystalGraph<W>,
    pub elems: Vec<E>,
    /// `words[v]` applied left to right to the seed gives `elems[v]`.
    pub words: Vec<Vec<Op>>,
    pub depth: Vec<usize>,
    pub root: usize,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    j: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "W: Serialize", deserialize = "W: DeserializeOwned"))]
struct GraphJson<W> {
    nodes: usize,
    vertices: Vec<Vertex<W>>,
    edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    incomplete: Vec<usize>,
}

impl<W: Clone + Eq + Hash> CrystalGraph<W> {
    fn from_parts(
        nodes: usize,
        vertices: Vec<Vertex<W>>,
        f: Vec<Vec<Option<usize>>>,
        incomplete: Vec<bool>,
    ) -> Self {
        let mut e = vec![vec![None; nodes]; vertices.len()];
        for (v, row) in f.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    e[*t][j] = Some(v);
                }
            }
        }
        let index = vertices.iter().enumerate().map(|(i, v)| (v.key.clone(), i)).collect();
        CrystalGraph { nodes, vertices, f, e, incomplete, index }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.f.iter().map(|r| r.iter().flatten().count()).sum()
    }

    pub fn apply(&self, v: usize, op: Op) -> Option<usize> {
        match op {
            Op::E(j) => self.e[v][j],
            Op::F(j) => self.f[v][j],
        }
    }

    /// Vertices of weight `wt`.
    pub fn with_weight(&self, wt: &W) -> Vec<usize> {
        (0..self.len()).filter(|&v| &self.vertices[v].wt == wt).collect()
    }

    /// Whether every vertex is reachable from `root` along edges in either direction.
    pub fn is_connected_from(&self, root: usize) -> bool {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for j in 0..self.nodes {
                for t in [self.f[v][j], self.e[v][j]].into_iter().flatten() {
                    if !seen[t] {
                        seen[t] = true;
                        count += 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        count == self.len()
    }

    /// Checks that `e` inverts `f` and that string lengths match the decorations.
    pub fn check_axioms(&self) -> Result<()> {
        for v in 0..self.len() {
            for j in 0..self.nodes {
                if let Some(t) = self.f[v][j] {
                    if self.e[t][j] != Some(v) {
                        return Err(Error::Malformed(format!("e_{j} does not invert f_{j} at {v}")));
                    }
                }
                if self.incomplete[v] {
                    continue;
                }
                let string = |edges: &Vec<Vec<Option<usize>>>| {
                    let mut n = 0;
                    let mut cur = v;
                    while let Some(t) = edges[cur][j] {
                        n += 1;
                        cur = t;
                        if self.incomplete[cur] {
                            return None;
                        }
                    }
                    Some(n)
                };
                let vx = &self.vertices[v];
                if let Some(n) = string(&self.f) {
                    if n != vx.phi[j] {
                        return Err(Error::Malformed(format!("φ_{j} at {} is {} not {n}", vx.key, vx.phi[j])));
                    }
                }
                if let Some(n) = string(&self.e) {
                    if n != vx.eps[j] {
                        return Err(Error::Malformed(format!("ε_{j} at {} is {} not {n}", vx.key, vx.eps[j])));
                    }
                }
            }
        }
        Ok(())
    }
}

impl<W: Clone + Eq + Hash + Serialize + DeserializeOwned> CrystalGraph<W> {
    pub fn to_json(&self) -> String {
        let mut edges = Vec::new();
        for (v, row) in self.f.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    edges.push(EdgeJson { from: v, to: *t, j });
                }
            }
        }
        let g = GraphJson {
            nodes: self.nodes,
            vertices: self.vertices.clone(),
            edges,
            incomplete: (0..self.len()).filter(|&v| self.incomplete[v]).collect(),
        };
        serde_json::to_string(&g).expect("graphs serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GraphJson<W> = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        let n = g.vertices.len();
        let mut f = vec![vec![None; g.nodes]; n];
        for e in &g.edges {
            if e.from >= n || e.to >= n || e.j >= g.nodes {
                return Err(Error::Malformed("edge out of range".into()));
            }
            f[e.from][e.j] = Some(e.to);
        }
        let mut incomplete = vec![false; n];
        for v in g.incomplete {
            if v >= n {
                return Err(Error::Malformed("incomplete vertex out of range".into()));
            }
            incomplete[v] = true;
        }
        Ok(Self::from_parts(g.nodes, g.vertices, f, incomplete))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph crystal {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let wt = serde_json::to_string(&v.wt).expect("weights serialize");
            let _ = writeln!(out, "  v{i} [label=\"{i}\", tooltip=\"{}\"];", wt.replace('"', "\\\""));
        }
        for (v, row) in self.f.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    let _ = writeln!(out, "  v{v} -> v{t} [label=\"f_{j}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn export(&self, format: &str) -> Result<String> {
        match format {
            "json" => Ok(self.to_json()),
            "dot" => Ok(self.to_dot()),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

struct Found<E> {
    elem: E,
    key: String,
}

fn generate<C: Crystal>(
    crystal: &C,
    seed: C::Elem,
    cap: usize,
    max_depth: Option<usize>,
) -> Result<Generated<C::Elem, C::Weight>>
where
    C::Weight: Clone + Eq + Hash,
{
    let ops = Op::all(crystal.nodes());
    let nodes = crystal.nodes();
    let mut elems = vec![seed.clone()];
    let mut keys = vec![crystal.key(&seed)];
    let mut index: HashMap<String, usize> = HashMap::from([(keys[0].clone(), 0)]);
    let mut words: Vec<Vec<Op>> = vec![Vec::new()];
    let mut depth = vec![0usize];
    let mut f_raw: Vec<Vec<Option<usize>>> = vec![vec![None; nodes]];
    let mut incomplete = vec![false];
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() {
        let last_level = max_depth.is_some_and(|d| level >= d);
        let results: Vec<Vec<Option<Found<C::Elem>>>> = par::map(&frontier, |&v| {
            ops.iter()
                .map(|&op| {
                    crystal.apply(&elems[v], op).map(|elem| {
                        let key = crystal.key(&elem);
                        Found { elem, key }
                    })
                })
                .collect()
        });
        let mut next = Vec::new();
        for (&v, res) in frontier.iter().zip(results) {
            for (&op, found) in ops.iter().zip(res) {
                let Some(Found { elem, key }) = found else { continue };
                let t = match index.get(&key) {
                    Some(&t) => t,
                    None if last_level => {
                        incomplete[v] = true;
                        continue;
                    }
                    None => {
                        let t = elems.len();
                        if t >= cap {
                            return Err(Error::CapExceeded { cap, found: t + 1 });
                        }
                        index.insert(key.clone(), t);
                        let mut w = words[v].clone();
                        w.push(op);
                        words.push(w);
                        depth.push(level + 1);
                        elems.push(elem);
                        keys.push(key);
                        f_raw.push(vec![None; nodes]);
                        incomplete.push(false);
                        next.push(t);
                        t
                    }
                };
                match op {
                    Op::F(j) => f_raw[v][j] = Some(t),
                    Op::E(j) => f_raw[t][j] = Some(v),
                }
            }
        }
        frontier = next;
        level += 1;
    }
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut new_of = vec![0; elems.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let decorations: Vec<Result<Vertex<C::Weight>>> = par::map(&order, |&old| {
        let b = &elems[old];
        let eps = (0..nodes).map(|j| crystal.epsilon(b, j)).collect::<Result<Vec<_>>>()?;
        let phi = (0..nodes).map(|j| crystal.phi(b, j)).collect::<Result<Vec<_>>>()?;
        Ok(Vertex { key: keys[old].clone(), wt: crystal.weight(b), eps, phi })
    });
    let vertices = decorations.into_iter().collect::<Result<Vec<_>>>()?;
    let f = order
        .iter()
        .map(|&old| f_raw[old].iter().map(|t| t.map(|t| new_of[t])).collect())
        .collect();
    let incomplete_sorted = order.iter().map(|&old| incomplete[old]).collect();
    let graph = CrystalGraph::from_parts(nodes, vertices, f, incomplete_sorted);
    let mut elems_sorted = Vec::with_capacity(elems.len());
    let mut words_sorted = Vec::with_capacity(elems.len());
    let mut depth_sorted = Vec::with_capacity(elems.len());
    let mut slots: Vec<Option<C::Elem>> = elems.into_iter().map(Some).collect();
    for &old in &order {
        elems_sorted.push(slots[old].take().unwrap());
        words_sorted.push(std::mem::take(&mut words[old]));
        depth_sorted.push(depth[old]);
    }
    Ok(Generated {
        graph,
        elems: elems_sorted,
        words: words_sorted,
        depth: depth_sorted,
        root: new_of[0],
    })
}

/// Closure of `seed` under every `e_j` and `f_j`, failing once more than `cap` vertices appear.
pub fn generate_closure<C: Crystal>(
    crystal: &C,
    seed: C::Elem,
    cap: usize,
) -> Result<Generated<C::Elem, C::Weight>> {
    generate(crystal, seed, cap, None)
}

/// Everything reachable from `seed` by at most `depth` operator applications.
pub fn generate_depth_bounded<C: Crystal>(
    crystal: &C,
    seed: C::Elem,
    depth: usize,
) -> Result<Generated<C::Elem, C::Weight>> {
    generate(crystal, seed, usize::MAX, Some(depth))
}

/// Weight arithmetic needed to tensor graphs.
pub trait TensorWeight: Clone + Eq + Hash {
    fn tensor_add(&self, o: &Self) -> Self;
}

impl TensorWeight for ClWeight {
    fn tensor_add(&self, o: &Self) -> Self {
        self.add(o)
    }
}

impl TensorWeight for LevelZeroWeight {
    fn tensor_add(&self, o: &Self) -> Self {
        self.add(o)
    }
}

/// Index of the pair `(a, b)` before sorting.
fn pair_slot(a: usize, b: usize, n2: usize) -> usize {
    a * n2 + b
}

/// Tensor product with `f_j(b_1 ⊗ b_2) = f_j b_1 ⊗ b_2` when `φ_j(b_1) > ε_j(b_2)` and
/// `b_1 ⊗ f_j b_2` otherwise.
pub fn tensor<W: TensorWeight>(g1: &CrystalGraph<W>, g2: &CrystalGraph<W>) -> CrystalGraph<W> {
    assert_eq!(g1.nodes, g2.nodes, "tensor factors over different index sets");
    let nodes = g1.nodes;
    let n2 = g2.len();
    let pairs: Vec<(usize, usize)> =
        (0..g1.len()).flat_map(|a| (0..n2).map(move |b| (a, b))).collect();
    let vertex = |&(a, b): &(usize, usize)| {
        let (x, y) = (&g1.vertices[a], &g2.vertices[b]);
        let eps = (0..nodes).map(|j| x.eps[j].max(y.eps[j] - x.phi[j] + x.eps[j])).collect();
        let phi = (0..nodes).map(|j| y.phi[j].max(x.phi[j] + y.phi[j] - y.eps[j])).collect();
        Vertex {
            key: format!("[{},{}]", x.key, y.key),
            wt: x.wt.tensor_add(&y.wt),
            eps,
            phi,
        }
    };
    let raw: Vec<Vertex<W>> = pairs.iter().map(vertex).collect();
    let f_raw: Vec<Vec<Option<usize>>> = pairs
        .iter()
        .map(|&(a, b)| {
            (0..nodes)
                .map(|j| {
                    if g1.vertices[a].phi[j] > g2.vertices[b].eps[j] {
                        g1.f[a][j].map(|t| pair_slot(t, b, n2))
                    } else {
                        g2.f[b][j].map(|t| pair_slot(a, t, n2))
                    }
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].key.cmp(&raw[b].key));
    let mut new_of = vec![0; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let vertices = order.iter().map(|&o| raw[o].clone()).collect();
    let f = order
        .iter()
        .map(|&o| f_raw[o].iter().map(|t| t.map(|t| new_of[t])).collect())
        .collect();
    let incomplete = vec![false; raw.len()];
    CrystalGraph::from_parts(nodes, vertices, f, incomplete)
}

/// Raising operator of a tensor product, read off the factors.
pub fn tensor_e<W>(g1: &CrystalGraph<W>, g2: &CrystalGraph<W>, a: usize, b: usize, j: usize) -> Option<(usize, usize)> {
    if g1.vertices[a].phi[j] >= g2.vertices[b].eps[j] {
        g1.e[a][j].map(|t| (t, b))
    } else {
        g2.e[b][j].map(|t| (a, t))
    }
}

/// The vertex of `tensor(g1, g2)` for the pair `(a, b)`.
pub fn tensor_vertex<W: Clone + Eq + Hash>(
    product: &CrystalGraph<W>,
    g1: &CrystalGraph<W>,
    g2: &CrystalGraph<W>,
    a: usize,
    b: usize,
) -> Option<usize> {
    product.find(&format!("[{},{}]", g1.vertices[a].key, g2.vertices[b].key))
}

/// The bijection `g1 → g2` extending `r1 ↦ r2` that preserves edge labels, weights and
/// decorations, if one exists and both graphs are exhausted.
pub fn rooted_isomorphic<W: Clone + Eq + Hash>(
    g1: &CrystalGraph<W>,
    r1: usize,
    g2: &CrystalGraph<W>,
    r2: usize,
) -> Option<Vec<usize>> {
    if g1.len() != g2.len() || g1.nodes != g2.nodes {
        return None;
    }
    let same = |a: usize, b: usize| {
        let (x, y) = (&g1.vertices[a], &g2.vertices[b]);
        x.wt == y.wt && x.eps == y.eps && x.phi == y.phi
    };
    let mut map: Vec<Option<usize>> = vec![None; g1.len()];
    let mut back: Vec<Option<usize>> = vec![None; g2.len()];
    if !same(r1, r2) {
        return None;
    }
    map[r1] = Some(r2);
    back[r2] = Some(r1);
    let mut queue = VecDeque::from([r1]);
    while let Some(a) = queue.pop_front() {
        let b = map[a].unwrap();
        for j in 0..g1.nodes {
            for (ea, eb) in [(g1.f[a][j], g2.f[b][j]), (g1.e[a][j], g2.e[b][j])] {
                match (ea, eb) {
                    (None, None) => {}
                    (Some(x), Some(y)) => match (map[x], back[y]) {
                        (Some(mx), _) if mx != y => return None,
                        (None, Some(_)) => return None,
                        (Some(_), _) => {}
                        (None, None) => {
                            if !same(x, y) {
                                return None;
                            }
                            map[x] = Some(y);
                            back[y] = Some(x);
                            queue.push_back(x);
                        }
                    },
                    _ => return None,
                }
            }
        }
    }
    map.into_iter().collect()
}

/// A random walk of `steps` operator applications starting at `start`, choosing uniformly
/// among the operators that do not vanish. Returns every element visited, `start` first.
pub fn random_walk<C: Crystal, R: Rng>(
    crystal: &C,
    start: &C::Elem,
    steps: usize,
    rng: &mut R,
) -> Vec<C::Elem> {
    let ops = Op::all(crystal.nodes());
    let mut out = vec![start.clone()];
    let mut cur = start.clone();
    for _ in 0..steps {
        let options: Vec<C::Elem> = ops.iter().filter_map(|&op| crystal.apply(&cur, op)).collect();
        if options.is_empty() {
            break;
        }
        cur = options[rng.random_range(0..options.len())].clone();
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::from_shape;

    fn datum(s: &str) -> AffineCartanDatum {
        AffineCartanDatum::from_label(s).unwrap()
    }

    fn cl_graph(d: &AffineCartanDatum, shape: &str) -> Generated<ClPath, ClWeight> {
        let lam = from_shape(d, &shape.parse().unwrap());
        generate_closure(&ClPathCrystal { datum: d }, ClPath::straight(lam.cl()), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn small_classical_crystals() {
        let d = datum("A1~1");
        let g = cl_graph(&d, "1");
        assert_eq!(g.graph.len(), 2);
        g.graph.check_axioms().unwrap();
        let d = datum("A2~1");
        let g = cl_graph(&d, "1,0");
        assert_eq!(g.graph.len(), 3);
        g.graph.check_axioms().unwrap();
        assert!(g.graph.is_connected_from(g.root));
    }

    #[test]
    fn words_reach_their_vertices() {
        let d = datum("C2~1");
        let g = cl_graph(&d, "1,1");
        let root = &g.elems[g.root];
        for (v, w) in g.words.iter().enumerate() {
            assert_eq!(root.apply_word(&d, w).as_ref(), Some(&g.elems[v]));
        }
    }

    #[test]
    fn depth_bounded_generation() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &"1".parse().unwrap());
        let pc = PathCrystal { datum: &d };
        let g0 = generate_depth_bounded(&pc, Path::straight(lam.clone()), 0).unwrap();
        assert_eq!(g0.graph.len(), 1);
        let g1 = generate_depth_bounded(&pc, Path::straight(lam.clone()), 1).unwrap();
        assert!(g1.graph.len() <= 1 + 2 * (d.rank() + 1));
        let g2 = generate_depth_bounded(&pc, Path::straight(lam.clone()), 2).unwrap();
        let down = Path::straight(lam.sub(&LevelZeroWeight::simple_root(&d, 1)));
        assert!(g2.graph.find(&down.key()).is_some());
        let shifted = Path::straight(lam.shift_delta(&crate::rational::q(-1)));
        assert!(g2.graph.find(&shifted.key()).is_some());
        assert!(g2.graph.incomplete.iter().any(|&x| x));
        g2.graph.check_axioms().unwrap();
    }

    #[test]
    fn infinite_crystals_hit_the_cap() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &"1".parse().unwrap());
        let r = generate_closure(&PathCrystal { datum: &d }, Path::straight(lam), 50);
        assert!(matches!(r, Err(Error::CapExceeded { cap: 50, .. })));
    }

    #[test]
    fn tensor_products() {
        let d = datum("A2~1");
        let a = cl_graph(&d, "1,0");
        let b = cl_graph(&d, "0,1");
        let t = tensor(&a.graph, &b.graph);
        assert_eq!(t.len(), 9);
        t.check_axioms().unwrap();
        // A one-vertex crystal of weight zero is a unit.
        let unit = CrystalGraph::from_parts(
            3,
            vec![Vertex { key: "{}".into(), wt: ClWeight::zero(2), eps: vec![0; 3], phi: vec![0; 3] }],
            vec![vec![None; 3]],
            vec![false],
        );
        let u = tensor(&a.graph, &unit);
        let root = tensor_vertex(&u, &a.graph, &unit, a.root, 0).unwrap();
        assert!(rooted_isomorphic(&a.graph, a.root, &u, root).is_some());
        let ab = tensor_vertex(&t, &a.graph, &b.graph, 0, 0).unwrap();
        for j in 0..3 {
            let via = tensor_e(&a.graph, &b.graph, 0, 0, j)
                .and_then(|(x, y)| tensor_vertex(&t, &a.graph, &b.graph, x, y));
            assert_eq!(via, t.e[ab][j]);
        }
    }

    #[test]
    fn isomorphism_checks() {
        let d = datum("A2~1");
        let a = cl_graph(&d, "1,1");
        let id = rooted_isomorphic(&a.graph, a.root, &a.graph, a.root).unwrap();
        assert!(id.iter().enumerate().all(|(i, &j)| i == j));
        let b = cl_graph(&d, "1,0");
        assert!(rooted_isomorphic(&a.graph, a.root, &b.graph, b.root).is_none());
    }

    #[test]
    fn exports() {
        let d = datum("A2~1");
        let a = cl_graph(&d, "1,0");
        let json = a.graph.to_json();
        let back = CrystalGraph::<ClWeight>::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back, a.graph);
        let dot = a.graph.to_dot();
        assert!(dot.contains("[label=\"f_1\"]"));
        assert!(a.graph.export("svg").is_err());
        let single = CrystalGraph::from_parts(
            1,
            vec![Vertex { key: "x".into(), wt: ClWeight::zero(1), eps: vec![0], phi: vec![0] }],
            vec![vec![None]],
            vec![false],
        );
        assert_eq!(single.to_dot(), "digraph crystal {\n  v0 [label=\"0\", tooltip=\"{\\\"fin\\\":[\\\"0\\\"]}\"];\n}\n");
    }

    #[test]
    fn random_walks_stay_in_the_crystal() {
        use rand::SeedableRng;
        let d = datum("A2~1");
        let g = cl_graph(&d, "2,1");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let walk = random_walk(&ClPathCrystal { datum: &d }, &g.elems[g.root], 40, &mut rng);
        assert_eq!(walk.len(), 41);
        for p in walk {
            assert!(g.graph.find(&p.key()).is_some());
        }
    }
}
