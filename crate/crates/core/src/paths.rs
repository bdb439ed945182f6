//! Piecewise-linear paths, the root operators `e_j`, `f_j`, the Weyl group action `S_w` and the
//! projection that forgets `δ`.
//!
//! A path is stored by its canonical expression: directions `ν_1, …, ν_s` with
//! `ν_u ≠ ν_{u+1}` and breakpoints `0 = σ_0 < … < σ_s = 1`, so that `π'(t) = ν_u` on
//! `(σ_{u-1}, σ_u)`. The same code serves paths with `δ` ([`Path`]) and without ([`ClPath`]).

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{One, Signed, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::affine_data::AffineCartanDatum;
use crate::error::{Error, Result};
use crate::rational::{q, serde_q, to_i64, Q};
use crate::weights::{ClWeight, LevelZeroWeight};

/// Weight arithmetic needed by paths.
pub trait PathWeight:
    Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned + Send + Sync
{
    fn zero_of_rank(rank: usize) -> Self;
    fn rank(&self) -> usize;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn pair_h(&self, datum: &AffineCartanDatum, j: usize) -> Q;
    fn simple_root(datum: &AffineCartanDatum, j: usize) -> Self;
    fn simple_reflect(&self, datum: &AffineCartanDatum, j: usize) -> Self;
}

impl PathWeight for LevelZeroWeight {
    fn zero_of_rank(rank: usize) -> Self {
        LevelZeroWeight::zero(rank)
    }
    fn rank(&self) -> usize {
        self.fin.len()
    }
    fn add(&self, o: &Self) -> Self {
        LevelZeroWeight::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LevelZeroWeight::sub(self, o)
    }
    fn scale(&self, c: &Q) -> Self {
        LevelZeroWeight::scale(self, c)
    }
    fn pair_h(&self, datum: &AffineCartanDatum, j: usize) -> Q {
        LevelZeroWeight::pair_h(self, datum, j)
    }
    fn simple_root(datum: &AffineCartanDatum, j: usize) -> Self {
        LevelZeroWeight::simple_root(datum, j)
    }
    fn simple_reflect(&self, datum: &AffineCartanDatum, j: usize) -> Self {
        LevelZeroWeight::simple_reflect(self, datum, j)
    }
}

impl PathWeight for ClWeight {
    fn zero_of_rank(rank: usize) -> Self {
        ClWeight::zero(rank)
    }
    fn rank(&self) -> usize {
        self.fin.len()
    }
    fn add(&self, o: &Self) -> Self {
        ClWeight::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ClWeight::sub(self, o)
    }
    fn scale(&self, c: &Q) -> Self {
        ClWeight::scale(self, c)
    }
    fn pair_h(&self, datum: &AffineCartanDatum, j: usize) -> Q {
        ClWeight::pair_h(self, datum, j)
    }
    fn simple_root(datum: &AffineCartanDatum, j: usize) -> Self {
        ClWeight::simple_root(datum, j)
    }
    fn simple_reflect(&self, datum: &AffineCartanDatum, j: usize) -> Self {
        ClWeight::simple_reflect(self, datum, j)
    }
}

/// A root operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Op {
    E(usize),
    F(usize),
}

impl Op {
    pub fn inverse(self) -> Op {
        match self {
            Op::E(j) => Op::F(j),
            Op::F(j) => Op::E(j),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Op::E(j) | Op::F(j) => j,
        }
    }

    /// All operators for nodes `0..nodes`, `e` before `f` at each node.
    pub fn all(nodes: usize) -> Vec<Op> {
        (0..nodes).flat_map(|j| [Op::E(j), Op::F(j)]).collect()
    }
}

/// Inverse of an operator word applied left to right.
pub fn inverse_word(word: &[Op]) -> Vec<Op> {
    word.iter().rev().map(|o| o.inverse()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound = "W: PathWeight")]
pub struct GenericPath<W: PathWeight> {
    dirs: Vec<W>,
    #[serde(with = "serde_q::vec")]
    breaks: Vec<Q>,
}

pub type Path = GenericPath<LevelZeroWeight>;
pub type ClPath = GenericPath<ClWeight>;

/// Values of `H(t) = <π(t), h_j>` at the breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFunction {
    pub breaks: Vec<Q>,
    pub values: Vec<Q>,
}

impl HFunction {
    pub fn min(&self) -> &Q {
        self.values.iter().min().expect("at least one breakpoint")
    }

    pub fn end(&self) -> &Q {
        self.values.last().expect("at least one breakpoint")
    }
}

impl<W: PathWeight> GenericPath<W> {
    /// `π_ν(t) = t ν`.
    pub fn straight(nu: W) -> Self {
        GenericPath { dirs: vec![nu], breaks: vec![Q::zero(), Q::one()] }
    }

    /// Validates an expression and merges equal consecutive directions.
    pub fn canonicalize(dirs: Vec<W>, breaks: Vec<Q>) -> Result<Self> {
        if dirs.is_empty() {
            return Err(Error::InvalidPath("no directions".into()));
        }
        if breaks.len() != dirs.len() + 1 {
            return Err(Error::InvalidPath(format!(
                "{} directions need {} breakpoints, got {}",
                dirs.len(),
                dirs.len() + 1,
                breaks.len()
            )));
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(Error::InvalidPath("breakpoints must run from 0 to 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPath("breakpoints must increase strictly".into()));
        }
        let rank = dirs[0].rank();
        if dirs.iter().any(|d| d.rank() != rank) {
            return Err(Error::InvalidPath("directions of different ranks".into()));
        }
        Ok(Self::merge(dirs, breaks))
    }

    fn merge(dirs: Vec<W>, breaks: Vec<Q>) -> Self {
        let mut out_dirs: Vec<W> = Vec::with_capacity(dirs.len());
        let mut out_breaks = vec![breaks[0].clone()];
        for (d, b) in dirs.into_iter().zip(breaks.into_iter().skip(1)) {
            if out_dirs.last() == Some(&d) {
                *out_breaks.last_mut().unwrap() = b;
            } else {
                out_dirs.push(d);
                out_breaks.push(b);
            }
        }
        GenericPath { dirs: out_dirs, breaks: out_breaks }
    }

    pub fn dirs(&self) -> &[W] {
        &self.dirs
    }

    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }

    pub fn segments(&self) -> usize {
        self.dirs.len()
    }

    pub fn rank(&self) -> usize {
        self.dirs[0].rank()
    }

    pub fn is_straight(&self) -> bool {
        self.dirs.len() == 1
    }

    /// `π(t)`.
    pub fn evaluate(&self, t: &Q) -> Result<W> {
        if t.is_negative() || *t > Q::one() {
            return Err(Error::InvalidPath(format!("t = {t} lies outside [0, 1]")));
        }
        let mut acc = W::zero_of_rank(self.rank());
        for (u, d) in self.dirs.iter().enumerate() {
            let (a, b) = (&self.breaks[u], &self.breaks[u + 1]);
            if t <= b {
                return Ok(acc.add(&d.scale(&(t - a))));
            }
            acc = acc.add(&d.scale(&(b - a)));
        }
        Ok(acc)
    }

    /// `π(1)`.
    pub fn endpoint(&self) -> W {
        let mut acc = W::zero_of_rank(self.rank());
        for (u, d) in self.dirs.iter().enumerate() {
            acc = acc.add(&d.scale(&(&self.breaks[u + 1] - &self.breaks[u])));
        }
        acc
    }

    /// Direction on the open segment that starts at `t` (or the last one when `t = 1`).
    fn direction_after(&self, t: &Q) -> &W {
        let u = self.breaks[1..].iter().position(|b| b > t).unwrap_or(self.dirs.len() - 1);
        &self.dirs[u]
    }

    fn combine(&self, other: &Self, f: impl Fn(&W, &W) -> W) -> Self {
        let mut breaks: Vec<Q> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let dirs = breaks[..breaks.len() - 1]
            .iter()
            .map(|t| f(self.direction_after(t), other.direction_after(t)))
            .collect();
        Self::merge(dirs, breaks)
    }

    /// `(π_1 + π_2)(t) = π_1(t) + π_2(t)`.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn h_function(&self, datum: &AffineCartanDatum, j: usize) -> HFunction {
        let mut values = Vec::with_capacity(self.breaks.len());
        let mut acc = Q::zero();
        values.push(acc.clone());
        for (u, d) in self.dirs.iter().enumerate() {
            acc += d.pair_h(datum, j) * (&self.breaks[u + 1] - &self.breaks[u]);
            values.push(acc.clone());
        }
        HFunction { breaks: self.breaks.clone(), values }
    }

    /// Replaces the directions on `[t0, t1]` by their images under `r_j`.
    fn reflect_on(&self, datum: &AffineCartanDatum, j: usize, t0: &Q, t1: &Q) -> Self {
        let mut breaks = self.breaks.clone();
        for t in [t0, t1] {
            if !breaks.contains(t) {
                breaks.push(t.clone());
            }
        }
        breaks.sort();
        let dirs = breaks[..breaks.len() - 1]
            .iter()
            .map(|t| {
                let d = self.direction_after(t);
                if t >= t0 && t < t1 {
                    d.simple_reflect(datum, j)
                } else {
                    d.clone()
                }
            })
            .collect();
        Self::merge(dirs, breaks)
    }

    /// `e_j π`, or `None` when it vanishes.
    pub fn e(&self, datum: &AffineCartanDatum, j: usize) -> Option<Self> {
        let h = self.h_function(datum, j);
        let m = h.min().clone();
        if m > -Q::one() {
            return None;
        }
        let level = &m + Q::one();
        let u1 = h.values.iter().position(|v| *v == m).unwrap();
        let u = (0..u1).rev().find(|&u| h.values[u] >= level).unwrap();
        let (hu, hn) = (&h.values[u], &h.values[u + 1]);
        let t0 = &h.breaks[u] + (hu - &level) / (hu - hn) * (&h.breaks[u + 1] - &h.breaks[u]);
        Some(self.reflect_on(datum, j, &t0, &h.breaks[u1]))
    }

    /// `f_j π`, or `None` when it vanishes.
    pub fn f(&self, datum: &AffineCartanDatum, j: usize) -> Option<Self> {
        let h = self.h_function(datum, j);
        let m = h.min().clone();
        if h.end() - &m < Q::one() {
            return None;
        }
        let level = &m + Q::one();
        let u0 = h.values.iter().rposition(|v| *v == m).unwrap();
        let u = (u0 + 1..h.values.len()).find(|&u| h.values[u] >= level).unwrap();
        let (hp, hu) = (&h.values[u - 1], &h.values[u]);
        let t1 = &h.breaks[u - 1] + (&level - hp) / (hu - hp) * (&h.breaks[u] - &h.breaks[u - 1]);
        Some(self.reflect_on(datum, j, &h.breaks[u0], &t1))
    }

    pub fn apply(&self, datum: &AffineCartanDatum, op: Op) -> Option<Self> {
        match op {
            Op::E(j) => self.e(datum, j),
            Op::F(j) => self.f(datum, j),
        }
    }

    /// Applies the operators of `word` from left to right.
    pub fn apply_word(&self, datum: &AffineCartanDatum, word: &[Op]) -> Option<Self> {
        let mut cur = self.clone();
        for &op in word {
            cur = cur.apply(datum, op)?;
        }
        Some(cur)
    }

    fn integral_min(&self, datum: &AffineCartanDatum, j: usize) -> Result<(i64, i64)> {
        let h = self.h_function(datum, j);
        let m = to_i64(h.min())
            .ok_or_else(|| Error::NotLsType(format!("min of H_{j} is {}", h.min())))?;
        let end = to_i64(h.end())
            .ok_or_else(|| Error::NotLsType(format!("H_{j}(1) is {}", h.end())))?;
        Ok((m, end))
    }

    /// `ε_j(π) = -min H`.
    pub fn epsilon(&self, datum: &AffineCartanDatum, j: usize) -> Result<i64> {
        Ok(-self.integral_min(datum, j)?.0)
    }

    /// `φ_j(π) = H(1) - min H`.
    pub fn phi(&self, datum: &AffineCartanDatum, j: usize) -> Result<i64> {
        let (m, end) = self.integral_min(datum, j)?;
        Ok(end - m)
    }

    /// `S_j π`: `f_j^n π` if `n = <π(1), h_j> ≥ 0`, else `e_j^{-n} π`.
    pub fn s_j(&self, datum: &AffineCartanDatum, j: usize) -> Result<Self> {
        let n = self.endpoint().pair_h(datum, j);
        let n = to_i64(&n).ok_or_else(|| Error::NotLsType(format!("<π(1), h_{j}> = {n}")))?;
        let op = if n >= 0 { Op::F(j) } else { Op::E(j) };
        let mut cur = self.clone();
        for _ in 0..n.abs() {
            cur = cur
                .apply(datum, op)
                .ok_or_else(|| Error::NotLsType(format!("S_{j} stopped early")))?;
        }
        Ok(cur)
    }

    /// `S_w π` for `w = r_{j_1} ⋯ r_{j_k}`, so `S_{j_k}` acts first.
    pub fn s_w(&self, datum: &AffineCartanDatum, word: &[usize]) -> Result<Self> {
        let mut cur = self.clone();
        for &j in word.iter().rev() {
            cur = cur.s_j(datum, j)?;
        }
        Ok(cur)
    }

    /// Canonical JSON, used as a graph key.
    pub fn key(&self) -> String {
        serde_json::to_string(self).expect("paths serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GenericPath<W> =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::canonicalize(raw.dirs, raw.breaks)
    }
}

impl Path {
    pub fn cl(&self) -> ClPath {
        ClPath::merge(self.dirs.iter().map(|d| d.cl()).collect(), self.breaks.clone())
    }

    /// `π + π_{nδ}`.
    pub fn shift_delta(&self, n: &Q) -> Path {
        GenericPath {
            dirs: self.dirs.iter().map(|d| d.shift_delta(n)).collect(),
            breaks: self.breaks.clone(),
        }
    }

    /// `π(t) + F(t) δ` for a piecewise-linear `F` given by its slopes on `breaks`.
    pub fn add_delta_function(&self, slopes: &[Q], breaks: &[Q]) -> Result<Path> {
        let rank = self.rank();
        let f = Path::canonicalize(
            slopes.iter().map(|s| LevelZeroWeight::delta_multiple(rank, s.clone())).collect(),
            breaks.to_vec(),
        )?;
        Ok(self.add(&f))
    }
}

impl ClPath {
    /// The lift whose directions have zero `δ`-coefficient.
    pub fn aff(&self) -> Path {
        Path::merge(self.dirs.iter().map(|d| d.aff()).collect(), self.breaks.clone())
    }
}

/// Helper for tests and callers building paths from integer data.
pub fn breaks_from(values: &[(i64, i64)]) -> Vec<Q> {
    values.iter().map(|&(n, d)| q(n) / q(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::weights::from_shape;

    fn datum(s: &str) -> AffineCartanDatum {
        AffineCartanDatum::from_label(s).unwrap()
    }

    fn w(fin: &[Q], delta: Q) -> LevelZeroWeight {
        LevelZeroWeight::new(fin.to_vec(), delta)
    }

    #[test]
    fn straight_and_canonical_forms() {
        let nu = w(&[frac(1, 2)], q(0));
        let p = Path::straight(nu.clone());
        let repeated = Path::canonicalize(
            vec![nu.clone(), nu.clone(), nu.clone()],
            breaks_from(&[(0, 1), (1, 3), (2, 3), (1, 1)]),
        )
        .unwrap();
        assert_eq!(p, repeated);
        assert!(Path::straight(LevelZeroWeight::zero(1)).endpoint().is_zero());
        assert!(Path::canonicalize(vec![nu.clone()], breaks_from(&[(0, 1), (1, 2)])).is_err());
        assert!(Path::canonicalize(
            vec![nu.clone(), nu.clone()],
            breaks_from(&[(0, 1), (1, 2), (1, 2)])
        )
        .is_err());
        let again = Path::canonicalize(p.dirs.clone(), p.breaks.clone()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn evaluation() {
        let a = w(&[q(1)], q(0));
        let b = w(&[q(-1)], q(2));
        let p = Path::canonicalize(vec![a.clone(), b.clone()], breaks_from(&[(0, 1), (1, 2), (1, 1)]))
            .unwrap();
        assert!(p.evaluate(&q(0)).unwrap().is_zero());
        assert_eq!(p.evaluate(&frac(1, 2)).unwrap(), a.scale(&frac(1, 2)));
        assert_eq!(p.endpoint(), a.scale(&frac(1, 2)).add(&b.scale(&frac(1, 2))));
        assert_eq!(p.evaluate(&q(1)).unwrap(), p.endpoint());
        assert!(p.evaluate(&q(2)).is_err());
    }

    #[test]
    fn sums() {
        let a = w(&[q(1)], q(0));
        let b = w(&[q(-1)], q(2));
        let p = Path::canonicalize(vec![a.clone(), b.clone()], breaks_from(&[(0, 1), (1, 3), (1, 1)]))
            .unwrap();
        let zero = Path::straight(LevelZeroWeight::zero(1));
        assert_eq!(p.add(&zero), p);
        assert_eq!(Path::straight(a.clone()).add(&Path::straight(b.clone())), Path::straight(a.add(&b)));
        let shift = Path::straight(LevelZeroWeight::delta_multiple(1, q(3)));
        assert_eq!(p.sub(&shift).add(&shift), p);
        assert_eq!(p.shift_delta(&q(3)), p.add(&shift));
    }

    #[test]
    fn operators_on_a1() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &"1".parse().unwrap());
        let p = Path::straight(lam.clone());
        assert!(p.e(&d, 1).is_none());
        let f = p.f(&d, 1).unwrap();
        assert_eq!(f, Path::straight(lam.sub(&LevelZeroWeight::simple_root(&d, 1))));
        assert_eq!(f.e(&d, 1).unwrap(), p);
        assert_eq!(p.epsilon(&d, 1).unwrap(), 0);
        assert_eq!(p.phi(&d, 1).unwrap(), 1);
        assert_eq!(p.epsilon(&d, 0).unwrap(), 1);
        assert_eq!(p.phi(&d, 0).unwrap(), 0);
        let h = p.h_function(&d, 0);
        assert_eq!(h.values, vec![q(0), q(-1)]);
    }

    #[test]
    fn operators_split_segments() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &"2".parse().unwrap());
        let p = Path::straight(lam.clone());
        // H_1(t) = 2t; f_1 reflects [0, 1/2].
        let f = p.f(&d, 1).unwrap();
        let r = lam.simple_reflect(&d, 1);
        assert_eq!(f.dirs(), &[r.clone(), lam.clone()]);
        assert_eq!(f.breaks(), &breaks_from(&[(0, 1), (1, 2), (1, 1)])[..]);
        assert_eq!(f.f(&d, 1).unwrap(), Path::straight(r));
        assert_eq!(f.e(&d, 1).unwrap(), p);
        assert_eq!(f.endpoint(), lam.sub(&LevelZeroWeight::simple_root(&d, 1)));
    }

    #[test]
    fn weyl_action_on_straight_lines() {
        for label in ["A2~1", "C2~1", "A2~2"] {
            let d = datum(label);
            let lam = from_shape(&d, &(if d.rank() == 1 { "2" } else { "1,1" }).parse().unwrap());
            let p = Path::straight(lam.clone());
            for j in d.nodes() {
                let s = p.s_j(&d, j).unwrap();
                assert_eq!(s, Path::straight(lam.simple_reflect(&d, j)));
                assert_eq!(s.s_j(&d, j).unwrap(), p);
            }
            let word = [0, 1, 0];
            let s = p.s_w(&d, &word).unwrap();
            let mut nu = lam.clone();
            for &j in word.iter().rev() {
                nu = nu.simple_reflect(&d, j);
            }
            assert_eq!(s, Path::straight(nu));
        }
    }

    #[test]
    fn classical_projection() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &"2".parse().unwrap());
        let a = lam.shift_delta(&q(-2));
        let p = Path::canonicalize(vec![a, lam.clone()], breaks_from(&[(0, 1), (1, 2), (1, 1)])).unwrap();
        assert_eq!(p.cl(), ClPath::straight(lam.cl()));
        assert!(Path::straight(LevelZeroWeight::delta_multiple(1, q(4))).cl().endpoint().fin[0].is_zero());
        assert!(p.f(&d, 0).is_none());
        let e = p.e(&d, 0).unwrap();
        assert_eq!(e.cl(), p.cl().e(&d, 0).unwrap());
        let f = p.f(&d, 1).unwrap();
        assert_eq!(f.cl(), p.cl().f(&d, 1).unwrap());
        assert_eq!(p.shift_delta(&q(5)).cl(), p.cl());
    }

    #[test]
    fn non_integral_minima_are_rejected() {
        let d = datum("A1~1");
        let p = Path::straight(w(&[frac(1, 4)], q(0)));
        assert!(p.epsilon(&d, 1).is_err());
        assert!(p.s_j(&d, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = datum("A2~1");
        let lam = from_shape(&d, &"2,1".parse().unwrap());
        let p = Path::straight(lam).f(&d, 1).unwrap();
        let k = p.key();
        assert_eq!(Path::from_json(&k).unwrap(), p);
        assert!(k.starts_with(r#"{"dirs":[{"fin":"#));
        let c = p.cl();
        assert_eq!(ClPath::from_json(&c.key()).unwrap(), c);
    }
}
