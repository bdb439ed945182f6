//! The affinization `B(λ)_cl × a_0^{-1}Z` of the classical crystal, and the map `Θ` that
//! identifies it with a union of components of `B(λ)`.
//!
//! An element `η ⊗ z^n` is stored as a vertex index into the classical graph of an
//! [`LsCrystal`] together with an exact exponent. For each vertex we keep `X·π_λ`, where `X` is
//! the word recorded during generation, and its `δ`-offset `n'`. Then `π⁰_η = X·π_λ - π_{n'δ}`
//! and `Θ(η ⊗ z^n) = π⁰_η + π_{nδ}`.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ls_crystal::LsCrystal;
use crate::par;
use crate::paths::{Op, Path};
use crate::rational::{frac, is_multiple_of, q, Q};
use crate::weights::LevelZeroWeight;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffElement {
    pub eta: usize,
    pub n: Q,
}

pub struct Affinization<'a> {
    pub ls: &'a LsCrystal,
    /// `X·π_λ` for every vertex.
    lifts: Vec<Path>,
    /// The `δ`-coefficient of `X·π_λ(1)`.
    offsets: Vec<Q>,
}

impl<'a> Affinization<'a> {
    pub fn new(ls: &'a LsCrystal) -> Result<Self> {
        let straight = ls.straight();
        let lifts: Vec<Option<Path>> = par::map(&ls.cl.words, |w| straight.apply_word(&ls.datum, w));
        let lifts: Vec<Path> = lifts
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::SearchFailed("a generating word vanished on π_λ".into()))?;
        let offsets = lifts.iter().map(|p| p.endpoint().delta).collect();
        Ok(Affinization { ls, lifts, offsets })
    }

    fn step(&self) -> Q {
        frac(1, self.ls.datum.a0())
    }

    pub fn element(&self, eta: &crate::paths::ClPath, n: Q) -> Option<AffElement> {
        self.ls.cl.graph.find(&eta.key()).map(|eta| AffElement { eta, n })
    }

    /// `e_j` and `f_j`. Only `j = 0` moves the exponent, by `±a_0^{-1}`.
    pub fn apply(&self, x: &AffElement, op: Op) -> Option<AffElement> {
        let eta = self.ls.cl.graph.apply(x.eta, op)?;
        let n = match op {
            Op::E(0) => &x.n + self.step(),
            Op::F(0) => &x.n - self.step(),
            _ => x.n.clone(),
        };
        Some(AffElement { eta, n })
    }

    /// `aff(η(1)) + nδ`.
    pub fn weight(&self, x: &AffElement) -> LevelZeroWeight {
        self.ls.cl.graph.vertices[x.eta].wt.aff().shift_delta(&x.n)
    }

    pub fn epsilon(&self, x: &AffElement, j: usize) -> i64 {
        self.ls.cl.graph.vertices[x.eta].eps[j]
    }

    pub fn phi(&self, x: &AffElement, j: usize) -> i64 {
        self.ls.cl.graph.vertices[x.eta].phi[j]
    }

    pub fn lift(&self, eta: usize) -> &Path {
        &self.lifts[eta]
    }

    /// `n'` of the vertex: the `δ`-coefficient of `X·π_λ(1)`.
    pub fn offset(&self, eta: usize) -> &Q {
        &self.offsets[eta]
    }

    /// `π⁰_η = X·π_λ - π_{n'δ}`.
    pub fn pi_eta_0(&self, eta: usize) -> Path {
        self.lifts[eta].shift_delta(&-&self.offsets[eta])
    }

    pub fn theta(&self, x: &AffElement) -> Path {
        self.lifts[x.eta].shift_delta(&(&x.n - &self.offsets[x.eta]))
    }

    /// `n' - n ∈ d_λ Z`.
    pub fn condition_c(&self, x: &AffElement) -> bool {
        is_multiple_of(&(&self.offsets[x.eta] - &x.n), &q(self.ls.d_lambda()))
    }

    /// Exponents `n ∈ a_0^{-1}Z` with `|n| ≤ bound`.
    pub fn exponents(&self, bound: i64) -> Vec<Q> {
        let a0 = self.ls.datum.a0();
        (-bound * a0..=bound * a0).map(|k| frac(k, a0)).collect()
    }

    /// Checks the defining properties of `π⁰` on every vertex and the recursion
    /// `π⁰_{e_j η} = e_j π⁰_η - π_{δ_{j0} a_0^{-1} δ}` on every edge.
    pub fn check_pi0(&self) -> Vec<String> {
        let g = &self.ls.cl.graph;
        let idx: Vec<usize> = (0..g.len()).collect();
        let out: Vec<Vec<String>> = par::map(&idx, |&v| {
            let mut bad = Vec::new();
            let p0 = self.pi_eta_0(v);
            if p0.cl().key() != g.vertices[v].key {
                bad.push(format!("cl(π⁰) differs from vertex {v}"));
            }
            if !p0.endpoint().delta.is_zero() {
                bad.push(format!("π⁰ of vertex {v} has nonzero δ-coefficient"));
            }
            if !self.ls.in_b0(&self.lifts[v]) {
                bad.push(format!("X·π_λ of vertex {v} is not in B₀(λ)"));
            }
            for j in 0..g.nodes {
                let Some(u) = g.e[v][j] else { continue };
                let shift = if j == 0 { -self.step() } else { Q::zero() };
                match p0.e(&self.ls.datum, j) {
                    Some(p) if p.shift_delta(&shift) == self.pi_eta_0(u) => {}
                    _ => bad.push(format!("π⁰ recursion fails on e_{j} at vertex {v}")),
                }
            }
            bad
        });
        out.into_iter().flatten().collect()
    }

    pub fn verify_theta(&self, nbound: i64) -> ThetaReport {
        let ls = self.ls;
        let datum = &ls.datum;
        let nodes = datum.rank() + 1;
        let exps = self.exponents(nbound);
        let elems: Vec<AffElement> = (0..ls.cl.graph.len())
            .flat_map(|eta| exps.iter().map(move |n| AffElement { eta, n: n.clone() }))
            .collect();

        let per: Vec<(String, bool, bool, Vec<String>)> = par::map(&elems, |x| {
            let mut bad = Vec::new();
            let t = self.theta(x);
            let label = || format!("(vertex {}, n = {})", x.eta, x.n);
            if t.endpoint() != self.weight(x) {
                bad.push(format!("{}: weight differs", label()));
            }
            for j in 0..nodes {
                if t.epsilon(datum, j).ok() != Some(self.epsilon(x, j))
                    || t.phi(datum, j).ok() != Some(self.phi(x, j))
                {
                    bad.push(format!("{}: ε/φ differ at {j}", label()));
                }
                for op in [Op::E(j), Op::F(j)] {
                    let lhs = self.apply(x, op).map(|y| self.theta(&y));
                    let rhs = t.apply(datum, op);
                    if lhs != rhs {
                        bad.push(format!("{}: Θ does not commute with {op:?}", label()));
                    }
                }
            }
            // Θ(x) - π_{Mδ} with M = n - n' is X·π_λ, so the image lies in B₀(λ + Mδ).
            let m = &x.n - &self.offsets[x.eta];
            if !ls.in_b0(&t.shift_delta(&-m)) {
                bad.push(format!("{}: Θ(x) is not in B₀(λ + Mδ)", label()));
            }
            let cond = self.condition_c(x);
            let member = ls.in_b0(&t);
            if cond != member {
                bad.push(format!("{}: condition C is {cond} but membership is {member}", label()));
            }
            (t.key(), cond, member, bad)
        });

        let mut violations = self.check_pi0();
        let mut seen: HashMap<String, usize> = HashMap::with_capacity(per.len());
        let mut condition_c_true = 0;
        let mut b0_members = 0;
        for (i, (key, cond, member, mut bad)) in per.into_iter().enumerate() {
            condition_c_true += cond as usize;
            b0_members += member as usize;
            violations.append(&mut bad);
            if let Some(j) = seen.insert(key, i) {
                violations.push(format!("Θ is not injective: elements {j} and {i} collide"));
            }
        }
        violations.extend(self.check_translation_components(nbound));
        ThetaReport {
            affine_type: datum.ty.to_string(),
            shape: ls.shape.to_string(),
            nbound,
            d_lambda: ls.d_lambda(),
            a0: datum.a0(),
            cl_vertices: ls.cl.graph.len(),
            elements: elems.len(),
            injective: seen.len() == elems.len(),
            condition_c_true,
            b0_members,
            violations,
        }
    }

    /// `π_{λ + Dδ} ∈ B₀(λ)` exactly when `D ∈ d_λ Z`, for `|D| ≤ 2·bound`.
    pub fn check_translation_components(&self, bound: i64) -> Vec<String> {
        let shifts = self.exponents(2 * bound);
        let d = q(self.ls.d_lambda());
        let out: Vec<Option<String>> = par::map(&shifts, |s| {
            let member = self.ls.in_b0(&Path::straight(self.ls.lambda.shift_delta(s)));
            let expected = is_multiple_of(s, &d);
            (member != expected).then(|| format!("π_(λ + {s}δ) membership is {member}, expected {expected}"))
        });
        out.into_iter().flatten().collect()
    }
}

impl AffElement {
    pub fn root(ls: &LsCrystal, n: Q) -> AffElement {
        AffElement { eta: ls.cl.root, n }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaReport {
    #[serde(rename = "type")]
    pub affine_type: String,
    pub shape: String,
    pub nbound: i64,
    pub d_lambda: i64,
    pub a0: i64,
    pub cl_vertices: usize,
    pub elements: usize,
    pub injective: bool,
    pub condition_c_true: usize,
    pub b0_members: usize,
    pub violations: Vec<String>,
}

/// `3·d_λ`.
pub fn default_nbound(ls: &LsCrystal) -> i64 {
    3 * ls.d_lambda()
}
