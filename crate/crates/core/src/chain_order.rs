//! Chains of weights, their maximal length and sigma-chains, decided by exhaustive search.
//!
//! A chain from `μ` to `ν` moves by reflections `r_ξ` with `μ(ξ^∨) < 0`, so every step adds a
//! positive multiple of a positive real root. Every intermediate weight therefore lies in the
//! finite box `{τ : τ - μ ∈ Q_+, ν - τ ∈ Q_+}`, and the search runs on integer offset vectors
//! over the simple roots `α_0, …, α_l` relative to `μ`.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Signed;
use serde::Serialize;

use crate::affine_data::{AffineCartanDatum, PositiveRealRoot, RootKind};
use crate::error::{Error, Result};
use crate::rational::{q, to_i64, Q};
use crate::weights::{DominantShape, LevelZeroWeight};

/// A chain `ν_0, …, ν_k` with `ν_l = r_{ξ_l}(ν_{l-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub weights: Vec<LevelZeroWeight>,
    pub roots: Vec<PositiveRealRoot>,
}

impl ChainCertificate {
    pub fn trivial(w: &LevelZeroWeight) -> Self {
        ChainCertificate { weights: vec![w.clone()], roots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Re-derives every step root from the consecutive weights and checks it matches.
    pub fn validate(&self, datum: &AffineCartanDatum) -> Result<()> {
        if self.weights.len() != self.roots.len() + 1 {
            return Err(Error::Malformed("weights and roots lengths disagree".into()));
        }
        for (l, root) in self.roots.iter().enumerate() {
            let (a, b) = (&self.weights[l], &self.weights[l + 1]);
            let found = recover_root(datum, a, b)?;
            if &found != root {
                return Err(Error::Malformed(format!("step {l} uses {root:?}, expected {found:?}")));
            }
            if !a.pair_coroot(datum, root).is_negative() || &a.reflect(datum, root) != b {
                return Err(Error::Malformed(format!("step {l} is not a chain step")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificates serialize")
    }
}

/// The unique positive real root `ξ` with `to = r_ξ(from)` and `from(ξ^∨) < 0`.
pub fn recover_root(
    datum: &AffineCartanDatum,
    from: &LevelZeroWeight,
    to: &LevelZeroWeight,
) -> Result<PositiveRealRoot> {
    let diff = to.sub(from);
    if diff.is_zero() || !diff.in_q_plus(datum) {
        return Err(Error::NotComparable);
    }
    let mut found = Vec::new();
    for xi in datum.positive_real_roots_up_to(&diff.delta) {
        let k = from.pair_coroot(datum, &xi);
        if k.is_negative() && &from.reflect(datum, &xi) == to {
            found.push(xi);
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::Malformed(format!("no reflection takes {from} to {to}"))),
        n => Err(Error::Malformed(format!("{n} reflections take {from} to {to}"))),
    }
}

struct StepRoot {
    root: PositiveRealRoot,
    coords: Vec<i64>,
    /// `μ(ξ^∨)`.
    base: i64,
    /// `α_j(ξ^∨)` for every node `j`.
    slope: Vec<i64>,
    /// One of the three shapes a distance-one step can take.
    short_step: bool,
}

type Point = Vec<i64>;

/// The search space between two weights with memo tables that live as long as the search.
struct Interval<'a> {
    datum: &'a AffineCartanDatum,
    origin: LevelZeroWeight,
    budget: Point,
    roots: Vec<StepRoot>,
    reach: RefCell<HashMap<(Point, Point), bool>>,
    longest: RefCell<HashMap<Point, usize>>,
}

fn int_coords(datum: &AffineCartanDatum, w: &LevelZeroWeight) -> Option<Vec<i64>> {
    w.simple_root_coords(datum).iter().map(to_i64).collect()
}

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn is_short_step(root: &PositiveRealRoot) -> bool {
    match root.kind {
        RootKind::Full => {
            (root.beta.is_positive() && root.n == 0) || (!root.beta.is_positive() && root.n == 1)
        }
        RootKind::Half => !root.beta.is_positive() && root.n == 1,
    }
}

impl<'a> Interval<'a> {
    fn new(datum: &'a AffineCartanDatum, mu: &LevelZeroWeight, nu: &LevelZeroWeight) -> Option<Self> {
        let diff = nu.sub(mu);
        let budget = int_coords(datum, &diff)?;
        if budget.iter().any(|&c| c < 0) {
            return None;
        }
        let mut roots = Vec::new();
        for root in datum.positive_real_roots_up_to(&diff.delta) {
            let w = LevelZeroWeight::from_root(datum, &root);
            let coords = int_coords(datum, &w).expect("real roots have integral coordinates");
            if !le(&coords, &budget) {
                continue;
            }
            let Some(base) = to_i64(&mu.pair_coroot(datum, &root)) else {
                continue;
            };
            let slope = datum
                .nodes()
                .map(|j| {
                    let a = LevelZeroWeight::simple_root(datum, j);
                    to_i64(&a.pair_coroot(datum, &root)).expect("coroots pair integrally with roots")
                })
                .collect();
            let short_step = is_short_step(&root);
            roots.push(StepRoot { root, coords, base, slope, short_step });
        }
        Some(Interval {
            datum,
            origin: mu.clone(),
            budget,
            roots,
            reach: RefCell::new(HashMap::new()),
            longest: RefCell::new(HashMap::new()),
        })
    }

    fn pairing(&self, r: &StepRoot, x: &[i64]) -> i64 {
        r.base + r.slope.iter().zip(x).map(|(s, v)| s * v).sum::<i64>()
    }

    /// Chain steps from `x` that stay below `limit`, as `(root index, pairing, target)`.
    fn steps(&self, x: &[i64], limit: &[i64]) -> Vec<(usize, i64, Point)> {
        let mut out = Vec::new();
        for (i, r) in self.roots.iter().enumerate() {
            let p = self.pairing(r, x);
            if p >= 0 {
                continue;
            }
            let k = -p;
            let y: Point = x.iter().zip(&r.coords).map(|(a, c)| a + k * c).collect();
            if le(&y, limit) {
                out.push((i, p, y));
            }
        }
        out
    }

    /// Whether some chain (possibly empty) leads from `x` to `y`.
    fn reaches(&self, x: &[i64], y: &[i64]) -> bool {
        if x == y {
            return true;
        }
        if !le(x, y) {
            return false;
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(&v) = self.reach.borrow().get(&key) {
            return v;
        }
        let v = self.steps(x, y).iter().any(|(_, _, z)| self.reaches(z, y));
        self.reach.borrow_mut().insert(key, v);
        v
    }

    /// Whether the one-step chain `x -> y` has distance one, that is no longer chain joins them.
    fn is_distance_one(&self, x: &[i64], y: &[i64]) -> bool {
        !self
            .steps(x, y)
            .iter()
            .any(|(_, _, z)| z.as_slice() != y && self.reaches(z, y))
    }

    /// Length of the longest chain from `x` to the budget; requires reachability.
    fn longest_to_end(&self, x: &[i64]) -> usize {
        if x == self.budget.as_slice() {
            return 0;
        }
        if let Some(&v) = self.longest.borrow().get(x) {
            return v;
        }
        let end = self.budget.clone();
        let v = self
            .steps(x, &end)
            .iter()
            .filter(|(_, _, z)| self.reaches(z, &end))
            .map(|(_, _, z)| 1 + self.longest_to_end(z))
            .max()
            .expect("caller checked reachability");
        self.longest.borrow_mut().insert(x.to_vec(), v);
        v
    }

    fn weight_at(&self, x: &[i64]) -> LevelZeroWeight {
        let xs: Vec<Q> = x.iter().map(|&c| q(c)).collect();
        self.origin.add(&LevelZeroWeight::from_simple_root_coords(self.datum, &xs))
    }

    fn certificate(&self, points: &[Point], roots: &[usize]) -> ChainCertificate {
        ChainCertificate {
            weights: points.iter().map(|p| self.weight_at(p)).collect(),
            roots: roots.iter().map(|&i| self.roots[i].root.clone()).collect(),
        }
    }

    fn any_chain(&self) -> Option<ChainCertificate> {
        let zero = vec![0; self.budget.len()];
        let end = self.budget.clone();
        if !self.reaches(&zero, &end) {
            return None;
        }
        let mut points = vec![zero];
        let mut used = Vec::new();
        while points.last().unwrap() != &end {
            let x = points.last().unwrap().clone();
            let (i, _, z) = self
                .steps(&x, &end)
                .into_iter()
                .find(|(_, _, z)| self.reaches(z, &end))
                .expect("reachability was established");
            used.push(i);
            points.push(z);
        }
        Some(self.certificate(&points, &used))
    }

    fn sigma_chain(&self, sigma: &Q) -> Option<ChainCertificate> {
        let zero = vec![0; self.budget.len()];
        let end = self.budget.clone();
        let mut parent: HashMap<Point, (Point, usize)> = HashMap::new();
        let mut seen: HashSet<Point> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(zero.clone());
        queue.push_back(zero.clone());
        while let Some(x) = queue.pop_front() {
            if x == end {
                let mut points = vec![x.clone()];
                let mut used = Vec::new();
                let mut cur = x;
                while let Some((p, i)) = parent.get(&cur) {
                    used.push(*i);
                    points.push(p.clone());
                    cur = p.clone();
                }
                points.reverse();
                used.reverse();
                return Some(self.certificate(&points, &used));
            }
            for (i, p, y) in self.steps(&x, &end) {
                if !self.roots[i].short_step || seen.contains(&y) {
                    continue;
                }
                if !(sigma * q(p)).is_integer() || !self.reaches(&y, &end) {
                    continue;
                }
                if !self.is_distance_one(&x, &y) {
                    continue;
                }
                seen.insert(y.clone());
                parent.insert(y.clone(), (x.clone(), i));
                queue.push_back(y);
            }
        }
        None
    }
}

/// A chain from `μ` to `ν` if `μ ≥ ν`; the empty chain when they are equal.
pub fn greater(
    datum: &AffineCartanDatum,
    mu: &LevelZeroWeight,
    nu: &LevelZeroWeight,
) -> Option<ChainCertificate> {
    if mu == nu {
        return Some(ChainCertificate::trivial(mu));
    }
    Interval::new(datum, mu, nu)?.any_chain()
}

/// The maximal length of a chain from `μ` to `ν`.
pub fn dist(datum: &AffineCartanDatum, mu: &LevelZeroWeight, nu: &LevelZeroWeight) -> Result<usize> {
    if mu == nu {
        return Err(Error::NotComparable);
    }
    let space = Interval::new(datum, mu, nu).ok_or(Error::NotComparable)?;
    let zero = vec![0; space.budget.len()];
    if !space.reaches(&zero, &space.budget) {
        return Err(Error::NotComparable);
    }
    Ok(space.longest_to_end(&zero))
}

/// A `σ`-chain from `μ` to `ν`: every step has distance one and pairing in `σ^{-1} Z_{<0}`.
pub fn has_sigma_chain(
    datum: &AffineCartanDatum,
    mu: &LevelZeroWeight,
    nu: &LevelZeroWeight,
    sigma: &Q,
) -> Result<Option<ChainCertificate>> {
    if !sigma.is_positive() || *sigma >= q(1) {
        return Err(Error::Malformed(format!("σ = {sigma} is not strictly between 0 and 1")));
    }
    if mu == nu {
        return Ok(Some(ChainCertificate::trivial(mu)));
    }
    Ok(Interval::new(datum, mu, nu).and_then(|s| s.sigma_chain(sigma)))
}

/// Whether `n` lies in the additive monoid generated by `gens`.
pub fn in_monoid(gens: &[i64], n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let gens: Vec<usize> = gens.iter().filter(|&&g| g > 0).map(|&g| g as usize).collect();
    let n = n as usize;
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for v in 1..=n {
        ok[v] = gens.iter().any(|&g| g <= v && ok[v - g]);
    }
    ok[n]
}

/// Generators `m_j d_j` for the nodes `j` with `p | m_j`.
pub fn chain_generators(datum: &AffineCartanDatum, shape: &DominantShape, p: u32) -> Vec<i64> {
    shape
        .nodes_divisible_by(p)
        .into_iter()
        .map(|j| shape.multiplicity(j) as i64 * datum.d_i(j).expect("node in range"))
        .filter(|g| *g > 0)
        .collect()
}

/// Closed-form existence of a `(q/p)`-chain from `λ` to `λ + N δ`.
pub fn sigma_chain_criterion(
    datum: &AffineCartanDatum,
    shape: &DominantShape,
    p: u32,
    q_num: u32,
    n: i64,
) -> bool {
    debug_assert!(q_num >= 1 && q_num < p && num_integer::gcd(p, q_num) == 1);
    in_monoid(&chain_generators(datum, shape, p), n)
}

/// The pairing `ν(ξ^∨)` every step of a certificate uses, for display.
pub fn step_pairings(datum: &AffineCartanDatum, cert: &ChainCertificate) -> Vec<Q> {
    cert.roots
        .iter()
        .zip(&cert.weights)
        .map(|(r, w)| w.pair_coroot(datum, r))
        .collect()
}
