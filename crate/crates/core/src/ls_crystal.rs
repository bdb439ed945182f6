//! LS paths of a level-zero dominant shape and the decomposition of their crystal into
//! connected components.
//!
//! Components are labelled by signatures `(N_1, …, N_{s-1})`, one entry per turning point
//! `τ_1 < … < τ_{s-1}` of `λ`. The component with signature `N` contains exactly one path of the
//! form `(λ - N_1 δ, …, λ - N_{s-1} δ, λ; 0, τ_1, …, τ_{s-1}, 1)`. [`LsCrystal`] holds the finite
//! classical crystal `B(λ)_cl` with its generating words and computes signatures by walking a
//! path back to the straight line through that graph.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Mutex;

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine_data::AffineCartanDatum;
use crate::chain_order::{chain_generators, has_sigma_chain, in_monoid, ChainCertificate};
use crate::crystal_graph::{
    generate_closure, generate_depth_bounded, ClPathCrystal, Generated, PathCrystal, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::par;
use crate::paths::{inverse_word, ClPath, Path};
use crate::rational::{frac, q, to_i64, Q};
use crate::weights::{find_reflection_word, from_shape, ClWeight, DominantShape, LevelZeroWeight, WeylOrbit};

/// `⋃_{m_i ≥ 2} {q/m_i : 1 ≤ q < m_i}`, sorted.
pub fn turn_set(shape: &DominantShape) -> Vec<Q> {
    let mut set = BTreeSet::new();
    for &m in &shape.m {
        for k in 1..m {
            set.insert(frac(k as i64, m as i64));
        }
    }
    set.into_iter().collect()
}

/// Nodes `i` with `m_i ∈ pZ`.
pub fn i0_lambda_p(shape: &DominantShape, p: u32) -> Vec<usize> {
    shape.nodes_divisible_by(p)
}

/// `(N_1, …, N_{s-1})`, aligned with the turning points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ComponentSignature(pub Vec<i64>);

impl ComponentSignature {
    pub fn zero(len: usize) -> Self {
        ComponentSignature(vec![0; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }
}

/// Outcome of an LS membership test.
#[derive(Debug, Clone, Serialize)]
pub struct LsVerdict {
    pub is_ls: bool,
    /// One chain per interior breakpoint, when the path is LS.
    pub certificates: Vec<ChainCertificate>,
    pub reason: Option<String>,
}

/// Decides whether `π` is an LS path of shape `λ`, returning the chain certificates.
pub fn is_ls_path(datum: &AffineCartanDatum, pi: &Path, lambda: &LevelZeroWeight) -> Result<LsVerdict> {
    let orbit = WeylOrbit::new(datum, lambda)?;
    Ok(ls_check(datum, &orbit, pi, &|mu, nu, s| has_sigma_chain(datum, mu, nu, s)))
}

type ChainFn<'a> = dyn Fn(&LevelZeroWeight, &LevelZeroWeight, &Q) -> Result<Option<ChainCertificate>> + 'a;

fn ls_check(datum: &AffineCartanDatum, orbit: &WeylOrbit, pi: &Path, chain: &ChainFn<'_>) -> LsVerdict {
    let fail = |reason: String| LsVerdict { is_ls: false, certificates: Vec::new(), reason: Some(reason) };
    if pi.rank() != datum.rank() {
        return fail("rank mismatch".into());
    }
    for (u, nu) in pi.dirs().iter().enumerate() {
        if !orbit.contains(nu) {
            return fail(format!("direction {} is not in the orbit of λ", u + 1));
        }
    }
    let mut certificates = Vec::new();
    for u in 1..pi.segments() {
        let sigma = &pi.breaks()[u];
        match chain(&pi.dirs()[u - 1], &pi.dirs()[u], sigma) {
            Ok(Some(c)) => certificates.push(c),
            Ok(None) => return fail(format!("no {sigma}-chain at breakpoint {u}")),
            Err(e) => return fail(e.to_string()),
        }
    }
    LsVerdict { is_ls: true, certificates, reason: None }
}

/// Checks the monoid condition of a signature, naming the first failing position.
pub fn check_signature(datum: &AffineCartanDatum, shape: &DominantShape, sig: &ComponentSignature) -> Result<()> {
    let turn = turn_set(shape);
    if sig.0.len() != turn.len() {
        return Err(Error::InvalidSignature {
            position: 0,
            reason: format!("{} entries for {} turning points", sig.0.len(), turn.len()),
        });
    }
    for (u, tau) in turn.iter().enumerate() {
        let next = sig.0.get(u + 1).copied().unwrap_or(0);
        let p = to_i64(&Q::from_integer(tau.denom().clone())).expect("small denominator") as u32;
        let gens = chain_generators(datum, shape, p);
        let diff = sig.0[u] - next;
        if !in_monoid(&gens, diff) {
            return Err(Error::InvalidSignature {
                position: u + 1,
                reason: format!("N_{} - N_{} = {diff} is not a sum of {gens:?}", u + 1, u + 2),
            });
        }
    }
    Ok(())
}

/// The path `(λ - N_1 δ, …, λ - N_{s-1} δ, λ; 0, τ_1, …, τ_{s-1}, 1)` without any validity
/// check.
pub fn signature_path(datum: &AffineCartanDatum, shape: &DominantShape, sig: &ComponentSignature) -> Result<Path> {
    let lambda = from_shape(datum, shape);
    let turn = turn_set(shape);
    if sig.0.len() != turn.len() {
        return Err(Error::InvalidSignature { position: 0, reason: "wrong length".into() });
    }
    let mut dirs: Vec<LevelZeroWeight> = sig.0.iter().map(|&n| lambda.shift_delta(&q(-n))).collect();
    dirs.push(lambda);
    let mut breaks = vec![Q::zero()];
    breaks.extend(turn);
    breaks.push(Q::one());
    Path::canonicalize(dirs, breaks)
}

/// The extremal representative of the component with signature `sig`.
pub fn canonical_extremal(datum: &AffineCartanDatum, shape: &DominantShape, sig: &ComponentSignature) -> Result<Path> {
    check_signature(datum, shape, sig)?;
    signature_path(datum, shape, sig)
}

/// Every tuple of length `|Turn(λ)|` with entries in `0..=nmax`.
pub fn all_signatures(shape: &DominantShape, nmax: i64) -> Vec<ComponentSignature> {
    let len = turn_set(shape).len();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=nmax).map(move |n| {
                    let mut w = v.clone();
                    w.push(n);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(ComponentSignature).collect()
}

pub fn valid_signatures(datum: &AffineCartanDatum, shape: &DominantShape, nmax: i64) -> Vec<ComponentSignature> {
    all_signatures(shape, nmax)
        .into_iter()
        .filter(|s| check_signature(datum, shape, s).is_ok())
        .collect()
}

type ChainKey = (LevelZeroWeight, LevelZeroWeight, Q);
type ChainCache = Mutex<HashMap<ChainKey, Option<ChainCertificate>>>;

/// The LS crystal of one shape, with its classical crystal generated once.
pub struct LsCrystal {
    pub datum: AffineCartanDatum,
    pub shape: DominantShape,
    pub lambda: LevelZeroWeight,
    pub orbit: WeylOrbit,
    pub turn: Vec<Q>,
    /// `B(λ)_cl` generated from the straight line, with words from it.
    pub cl: Generated<ClPath, ClWeight>,
    extremal: Vec<bool>,
    /// For every vertex in the `S`-orbit of the root: the `S_j` to apply, in order, to reach it
    /// from the root.
    s_words: Vec<Option<Vec<usize>>>,
    translations: Mutex<HashMap<Q, Vec<usize>>>,
    chains: ChainCache,
}

/// `S_j` on a vertex of a classical crystal graph.
fn s_on_graph(cl: &Generated<ClPath, ClWeight>, v: usize, j: usize) -> usize {
    let vx = &cl.graph.vertices[v];
    let n = vx.phi[j] - vx.eps[j];
    let mut cur = v;
    for _ in 0..n.abs() {
        cur = if n > 0 { cl.graph.f[cur][j] } else { cl.graph.e[cur][j] }.expect("string lengths match");
    }
    cur
}

impl LsCrystal {
    pub fn new(datum: &AffineCartanDatum, shape: &DominantShape) -> Result<Self> {
        shape.check(datum)?;
        if shape.is_zero() {
            return Err(Error::InvalidShape("the zero shape has no LS crystal to decompose".into()));
        }
        let lambda = from_shape(datum, shape);
        let orbit = WeylOrbit::new(datum, &lambda)?;
        let cl = generate_closure(&ClPathCrystal { datum }, ClPath::straight(lambda.cl()), DEFAULT_CAP)?;
        let n = cl.graph.len();
        let nodes = datum.rank() + 1;

        let mut extremal = vec![false; n];
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members = vec![start];
            orbit_of[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                for j in 0..nodes {
                    let t = s_on_graph(&cl, v, j);
                    if orbit_of[t] == usize::MAX {
                        orbit_of[t] = id;
                        members.push(t);
                    }
                }
                i += 1;
            }
            orbits.push(members);
        }
        for members in &orbits {
            let ok = members
                .iter()
                .all(|&v| (0..nodes).all(|j| cl.graph.e[v][j].is_none() || cl.graph.f[v][j].is_none()));
            for &v in members {
                extremal[v] = ok;
            }
        }

        let mut s_words: Vec<Option<Vec<usize>>> = vec![None; n];
        s_words[cl.root] = Some(Vec::new());
        let mut queue = VecDeque::from([cl.root]);
        while let Some(v) = queue.pop_front() {
            for j in 0..nodes {
                let t = s_on_graph(&cl, v, j);
                if s_words[t].is_none() {
                    let mut w = s_words[v].clone().unwrap();
                    w.push(j);
                    s_words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }

        Ok(LsCrystal {
            datum: datum.clone(),
            shape: shape.clone(),
            turn: turn_set(shape),
            lambda,
            orbit,
            cl,
            extremal,
            s_words,
            translations: Mutex::new(HashMap::new()),
            chains: Mutex::new(HashMap::new()),
        })
    }

    pub fn d_lambda(&self) -> i64 {
        self.orbit.d_lambda.expect("nonzero shape")
    }

    pub fn straight(&self) -> Path {
        Path::straight(self.lambda.clone())
    }

    /// Vertices of `B(λ)_cl` that are extremal by definition: every `S_w`-image of them is
    /// killed by `e_j` or by `f_j` for each `j`.
    pub fn extremal_vertices(&self) -> Vec<usize> {
        (0..self.extremal.len()).filter(|&v| self.extremal[v]).collect()
    }

    /// The `S_j`-closure of the straight line in `B(λ)_cl`.
    pub fn extremal_cl_set(&self) -> Vec<usize> {
        (0..self.s_words.len()).filter(|&v| self.s_words[v].is_some()).collect()
    }

    pub fn is_extremal(&self, pi: &Path) -> Result<bool> {
        let v = self.cl_vertex(pi)?;
        Ok(self.extremal[v])
    }

    pub fn cl_vertex(&self, pi: &Path) -> Result<usize> {
        self.cl
            .graph
            .find(&pi.cl().key())
            .ok_or_else(|| Error::NotLsType("projection is not in B(λ)_cl".into()))
    }

    /// LS membership with chain searches shared across calls. A chain for `(μ, ν)` shifted by
    /// `kδ` is a chain for `(μ + kδ, ν + kδ)` with the same roots, so results are stored for the
    /// pair normalized to `μ` having no `δ` part.
    pub fn is_ls(&self, pi: &Path) -> LsVerdict {
        let chain = |mu: &LevelZeroWeight, nu: &LevelZeroWeight, s: &Q| -> Result<Option<ChainCertificate>> {
            let shift = -mu.delta.clone();
            let key = (mu.shift_delta(&shift), nu.shift_delta(&shift), s.clone());
            let cached = self.chains.lock().unwrap().get(&key).cloned();
            let found = match cached {
                Some(found) => found,
                None => {
                    let found = has_sigma_chain(&self.datum, &key.0, &key.1, s)?;
                    self.chains.lock().unwrap().insert(key, found.clone());
                    found
                }
            };
            Ok(found.map(|c| ChainCertificate {
                weights: c.weights.iter().map(|w| w.shift_delta(&mu.delta)).collect(),
                roots: c.roots,
            }))
        };
        ls_check(&self.datum, &self.orbit, pi, &chain)
    }

    /// Reflection word (application order) taking `λ` to `λ + n δ`.
    fn translation_word(&self, n: &Q) -> Result<Vec<usize>> {
        if let Some(w) = self.translations.lock().unwrap().get(n) {
            return Ok(w.clone());
        }
        let target = self.lambda.shift_delta(n);
        let w = find_reflection_word(&self.datum, &self.orbit, &self.lambda, &target)?;
        self.translations.lock().unwrap().insert(n.clone(), w.clone());
        Ok(w)
    }

    /// For a path whose directions all have finite part `λ`, moves the last direction to `λ` by
    /// the Weyl group action.
    pub fn normalize_top(&self, p: &Path) -> Result<Path> {
        if p.dirs().iter().any(|d| d.fin != self.lambda.fin) {
            return Err(Error::NotLsType("path does not project to the straight line".into()));
        }
        let c = &p.dirs().last().unwrap().delta - &self.lambda.delta;
        if c.is_zero() {
            return Ok(p.clone());
        }
        let mut word = self.translation_word(&-c)?;
        word.reverse();
        let out = p.s_w(&self.datum, &word)?;
        if out.dirs().last() != Some(&self.lambda) {
            return Err(Error::SearchFailed("translation did not reach λ".into()));
        }
        Ok(out)
    }

    fn read_signature(&self, p: &Path) -> Result<ComponentSignature> {
        for b in &p.breaks()[1..p.breaks().len() - 1] {
            if !self.turn.contains(b) {
                return Err(Error::NotLsType(format!("breakpoint {b} is not a turning point")));
            }
        }
        let mut sig = Vec::with_capacity(self.turn.len());
        let mut start = Q::zero();
        for tau in &self.turn {
            let dir = p.evaluate(tau)?.sub(&p.evaluate(&start)?).scale(&(Q::one() / (tau - &start)));
            let n = to_i64(&(&self.lambda.delta - &dir.delta))
                .ok_or_else(|| Error::NotLsType("non-integral δ-offset".into()))?;
            sig.push(n);
            start = tau.clone();
        }
        Ok(ComponentSignature(sig))
    }

    /// The path of the form `(λ - N_1 δ, …, λ; τ)` in the component of `π`.
    pub fn representative(&self, pi: &Path) -> Result<Path> {
        let v = self.cl_vertex(pi)?;
        let back = inverse_word(&self.cl.words[v]);
        let top = pi
            .apply_word(&self.datum, &back)
            .ok_or_else(|| Error::NotLsType("walk back to the straight line vanished".into()))?;
        self.normalize_top(&top)
    }

    pub fn component_signature(&self, pi: &Path) -> Result<ComponentSignature> {
        self.read_signature(&self.representative(pi)?)
    }

    /// Whether `π` lies in the component of the straight line `π_λ`.
    pub fn in_b0(&self, pi: &Path) -> bool {
        if pi.dirs().iter().any(|d| !self.orbit.contains(d)) || !self.is_ls(pi).is_ls {
            return false;
        }
        self.component_signature(pi).is_ok_and(|s| s.is_zero())
    }

    /// If `π` is extremal, moves it by `S_w` to the canonical form, which must equal the
    /// representative of its component.
    pub fn extremal_to_canonical(&self, pi: &Path) -> Result<Path> {
        let v = self.cl_vertex(pi)?;
        let word = self.s_words[v]
            .as_ref()
            .ok_or_else(|| Error::NotLsType("projection is not in the orbit of the straight line".into()))?;
        // S_j is an involution, so the word from the root read backwards leads back to it.
        let mut cur = pi.clone();
        for &j in word.iter().rev() {
            cur = cur.s_j(&self.datum, j)?;
        }
        self.normalize_top(&cur)
    }

    pub fn verify_simple(&self) -> SimpleReport {
        let g = &self.cl.graph;
        let lam = self.lambda.cl();
        let of_weight = g.with_weight(&lam);
        let extremal: BTreeSet<usize> = self.extremal_vertices().into_iter().collect();
        let orbit: BTreeSet<usize> = self.extremal_cl_set().into_iter().collect();
        let mut violations = Vec::new();
        let connected = g.is_connected_from(self.cl.root);
        if !connected {
            violations.push("B(λ)_cl is not connected".to_string());
        }
        if of_weight != vec![self.cl.root] {
            violations.push(format!("{} vertices of weight cl(λ)", of_weight.len()));
        }
        if extremal != orbit {
            violations.push(format!(
                "{} extremal vertices but the S-orbit of the straight line has {}",
                extremal.len(),
                orbit.len()
            ));
        }
        if let Err(e) = g.check_axioms() {
            violations.push(e.to_string());
        }
        SimpleReport {
            affine_type: self.datum.ty.to_string(),
            shape: self.shape.to_string(),
            vertices: g.len(),
            edges: g.edge_count(),
            connected,
            weight_lambda_vertices: of_weight.len(),
            extremal_vertices: extremal.len(),
            orbit_of_straight_line: orbit.len(),
            violations,
        }
    }

    /// Checks the component law on depth-bounded pieces of every component with signature
    /// entries up to `nmax`.
    pub fn verify_theorem_comps(&self, depth: usize, nmax: i64, seed: u64) -> CompsReport {
        let all = all_signatures(&self.shape, nmax);
        let results: Vec<(SignatureReport, Vec<String>, Vec<String>)> =
            par::map(&all, |sig| self.check_component(sig, depth, seed));
        let mut signatures = Vec::new();
        let mut rejected = Vec::new();
        let mut violations = Vec::new();
        let mut owner: HashMap<String, ComponentSignature> = HashMap::new();
        for (report, keys, mut v) in results {
            violations.append(&mut v);
            if !report.valid {
                rejected.push(report.signature.clone());
                continue;
            }
            for k in keys {
                if let Some(prev) = owner.insert(k.clone(), report.signature.clone()) {
                    violations.push(format!(
                        "path {k} generated from both {:?} and {:?}",
                        prev.0, report.signature.0
                    ));
                }
            }
            signatures.push(report);
        }
        CompsReport {
            affine_type: self.datum.ty.to_string(),
            shape: self.shape.to_string(),
            depth,
            nmax,
            turn: self.turn.iter().map(|t| t.to_string()).collect(),
            signatures,
            rejected,
            violations,
            scope: "components are truncated at the given depth; extremal paths are checked within the truncation".into(),
        }
    }

    fn check_component(
        &self,
        sig: &ComponentSignature,
        depth: usize,
        seed: u64,
    ) -> (SignatureReport, Vec<String>, Vec<String>) {
        let mut violations = Vec::new();
        let mut report = SignatureReport {
            signature: sig.clone(),
            valid: false,
            vertices: 0,
            incomplete: 0,
            weight_lambda_vertices: 0,
            extremal_vertices: 0,
            ls_checked: 0,
        };
        let raw = match signature_path(&self.datum, &self.shape, sig) {
            Ok(p) => p,
            Err(e) => {
                violations.push(format!("{:?}: {e}", sig.0));
                return (report, Vec::new(), violations);
            }
        };
        // Membership is judged twice: by the closed form and by the chain oracle.
        let oracle = is_ls_path(&self.datum, &raw, &self.lambda).map(|v| v.is_ls).unwrap_or(false);
        let seed_path = match canonical_extremal(&self.datum, &self.shape, sig) {
            Ok(p) => p,
            Err(_) => {
                if oracle {
                    violations.push(format!("{:?} rejected but its path is LS", sig.0));
                }
                return (report, Vec::new(), violations);
            }
        };
        report.valid = true;
        if !oracle {
            violations.push(format!("{:?} accepted but its path is not LS", sig.0));
        }
        let gen = match generate_depth_bounded(&PathCrystal { datum: &self.datum }, seed_path.clone(), depth) {
            Ok(g) => g,
            Err(e) => {
                violations.push(format!("{:?}: generation failed: {e}", sig.0));
                return (report, Vec::new(), violations);
            }
        };
        let n = gen.elems.len();
        report.vertices = n;
        report.incomplete = gen.graph.incomplete.iter().filter(|&&x| x).count();
        report.weight_lambda_vertices = gen.graph.with_weight(&self.lambda).len();
        if report.weight_lambda_vertices > 1 {
            violations.push(format!(
                "{:?}: {} vertices of weight λ",
                sig.0, report.weight_lambda_vertices
            ));
        }
        let check_ls: Vec<bool> = if n < 200 {
            vec![true; n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64));
            let mut mask = vec![false; n];
            for i in sample(&mut rng, n, n.div_ceil(10)) {
                mask[i] = true;
            }
            mask
        };
        report.ls_checked = check_ls.iter().filter(|&&x| x).count();
        let idx: Vec<usize> = (0..n).collect();
        let per_vertex: Vec<(bool, Vec<String>)> = par::map(&idx, |&v| {
            let pi = &gen.elems[v];
            let mut out = Vec::new();
            match self.component_signature(pi) {
                Ok(s) if &s == sig => {}
                Ok(s) => out.push(format!("{:?}: vertex {} has signature {:?}", sig.0, pi.key(), s.0)),
                Err(e) => out.push(format!("{:?}: vertex {}: {e}", sig.0, pi.key())),
            }
            if check_ls[v] && !self.is_ls(pi).is_ls {
                out.push(format!("{:?}: vertex {} is not LS", sig.0, pi.key()));
            }
            let ext = self.is_extremal(pi).unwrap_or(false);
            if ext {
                match self.extremal_to_canonical(pi) {
                    Ok(c) if c == seed_path => {}
                    Ok(c) => out.push(format!("{:?}: extremal {} moves to {}", sig.0, pi.key(), c.key())),
                    Err(e) => out.push(format!("{:?}: extremal {}: {e}", sig.0, pi.key())),
                }
            }
            (ext, out)
        });
        for (ext, mut out) in per_vertex {
            report.extremal_vertices += ext as usize;
            violations.append(&mut out);
        }
        let keys = gen.graph.vertices.iter().map(|v| v.key.clone()).collect();
        (report, keys, violations)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleReport {
    #[serde(rename = "type")]
    pub affine_type: String,
    pub shape: String,
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub weight_lambda_vertices: usize,
    pub extremal_vertices: usize,
    pub orbit_of_straight_line: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureReport {
    pub signature: ComponentSignature,
    pub valid: bool,
    pub vertices: usize,
    pub incomplete: usize,
    pub weight_lambda_vertices: usize,
    pub extremal_vertices: usize,
    pub ls_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompsReport {
    #[serde(rename = "type")]
    pub affine_type: String,
    pub shape: String,
    pub depth: usize,
    pub nmax: i64,
    pub turn: Vec<String>,
    pub signatures: Vec<SignatureReport>,
    pub rejected: Vec<ComponentSignature>,
    pub violations: Vec<String>,
    pub scope: String,
}
