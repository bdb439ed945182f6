//! Affine Cartan data, the normalized invariant form, the finite root system and the positive
//! real roots.
//!
//! Nodes are numbered `0..=l` with `0` the special node. Finite coordinates are vectors of
//! length `l` over the simple roots `α_1, …, α_l`; entry `k` holds the coefficient of
//! `α_{k+1}`. The Cartan matrix follows `a_ij = <α_j, h_i>`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{frac, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// An affine type `X_N^(r)`, written `XN~r` in text (for example `A2~1` or `D4~3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineType {
    pub family: Family,
    /// The subscript `N` of `X_N^(r)`.
    pub index: u32,
    /// The twist `r`.
    pub twist: u32,
}

impl AffineType {
    pub fn new(family: Family, index: u32, twist: u32) -> Result<Self> {
        let t = AffineType { family, index, twist };
        t.rank_checked()?;
        Ok(t)
    }

    /// Rank `l` of the finite part, so that the node set is `0..=l`.
    pub fn rank(&self) -> usize {
        self.rank_checked().expect("validated on construction")
    }

    fn rank_checked(&self) -> Result<usize> {
        use Family::*;
        let n = self.index;
        let l = match (self.family, self.twist) {
            (A, 1) if (1..=4).contains(&n) => n,
            (B, 1) if (3..=4).contains(&n) => n,
            (C, 1) if (2..=4).contains(&n) => n,
            (D, 1) if n == 4 => 4,
            (F, 1) if n == 4 => 4,
            (G, 1) if n == 2 => 2,
            (A, 2) if n.is_multiple_of(2) && (2..=8).contains(&n) => n / 2,
            (A, 2) if n % 2 == 1 && (5..=7).contains(&n) => n.div_ceil(2),
            (D, 2) if (3..=5).contains(&n) => n - 1,
            (E, 2) if n == 6 => 4,
            (D, 3) if n == 4 => 2,
            _ => return Err(Error::UnsupportedType(self.to_string())),
        };
        Ok(l as usize)
    }

    /// Whether this is `A_{2l}^(2)`, the only type with half real roots.
    pub fn is_a_even_twisted(&self) -> bool {
        self.family == Family::A && self.twist == 2 && self.index.is_multiple_of(2)
    }

    pub fn is_untwisted(&self) -> bool {
        self.twist == 1
    }

    /// Every supported type.
    pub fn all_supported() -> Vec<AffineType> {
        use Family::*;
        let mut out = Vec::new();
        for family in [A, B, C, D, E, F, G] {
            for twist in 1..=3 {
                for index in 1..=9 {
                    if let Ok(t) = AffineType::new(family, index, twist) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}~{}", self.family, self.index, self.twist)
    }
}

impl FromStr for AffineType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let (index, twist) = chars.as_str().split_once('~').ok_or_else(bad)?;
        let index = index.parse().map_err(|_| bad())?;
        let twist = twist.parse().map_err(|_| bad())?;
        AffineType::new(family, index, twist).map_err(|_| bad())
    }
}

impl Serialize for AffineType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A root of the finite root system, in coordinates over `α_1, …, α_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteRoot {
    pub coords: Vec<i64>,
}

impl FiniteRoot {
    pub fn new(coords: Vec<i64>) -> Self {
        FiniteRoot { coords }
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn neg(&self) -> FiniteRoot {
        FiniteRoot::new(self.coords.iter().map(|c| -c).collect())
    }

    /// `self` made positive.
    pub fn abs(&self) -> FiniteRoot {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn to_q(&self) -> Vec<Q> {
        self.coords.iter().map(|&c| q(c)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootKind {
    /// `β + n c_β δ`.
    Full,
    /// `(β + (2n-1) δ) / 2`, only in type `A_{2l}^(2)` with `β` long.
    Half,
}

/// A positive real root of the affine root system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PositiveRealRoot {
    pub kind: RootKind,
    pub beta: FiniteRoot,
    pub n: i64,
}

impl PositiveRealRoot {
    /// Builds and validates a positive real root.
    pub fn new(datum: &AffineCartanDatum, kind: RootKind, beta: FiniteRoot, n: i64) -> Result<Self> {
        if !datum.is_root(&beta) {
            return Err(Error::NotARoot(format!("{:?}", beta.coords)));
        }
        let ok = match kind {
            RootKind::Full => n >= if beta.is_positive() { 0 } else { 1 },
            RootKind::Half => {
                datum.ty.is_a_even_twisted() && datum.is_long(&beta) && n >= 1
            }
        };
        if !ok {
            return Err(Error::NotARoot(format!("{kind:?} {:?} n={n}", beta.coords)));
        }
        Ok(PositiveRealRoot { kind, beta, n })
    }

    /// The positive finite root attached to `self`.
    pub fn finite_part(&self) -> FiniteRoot {
        self.beta.abs()
    }

    /// The coefficient of `δ`.
    pub fn delta_degree(&self, datum: &AffineCartanDatum) -> Q {
        match self.kind {
            RootKind::Full => q(self.n) * datum.c_beta_unchecked(&self.beta),
            RootKind::Half => frac(2 * self.n - 1, 2),
        }
    }

    /// Finite coordinates of the root vector (the part away from `δ`).
    pub fn fin_vector(&self) -> Vec<Q> {
        match self.kind {
            RootKind::Full => self.beta.to_q(),
            RootKind::Half => self.beta.coords.iter().map(|&c| frac(c, 2)).collect(),
        }
    }
}

/// A fully expanded affine Cartan datum.
#[derive(Debug, Clone)]
pub struct AffineCartanDatum {
    pub ty: AffineType,
    /// `a_ij = <α_j, h_i>` for `i, j` in `0..=l`.
    pub cartan: Vec<Vec<i64>>,
    /// Marks `a_j` with `δ = Σ a_j α_j`.
    pub marks: Vec<i64>,
    /// Comarks `a_j^∨` with `c = Σ a_j^∨ h_j`.
    pub comarks: Vec<i64>,
    /// `(α_i, α_j)` for `i, j` in `0..=l`.
    pub gram: Vec<Vec<Q>>,
    roots: Vec<FiniteRoot>,
    root_set: BTreeSet<FiniteRoot>,
    long_norm: Q,
    fundamental: Vec<Vec<Q>>,
}

/// Builder for Dynkin diagrams: `link(i, j, a_ij, a_ji)`.
struct Diagram(Vec<Vec<i64>>);

impl Diagram {
    fn new(size: usize) -> Self {
        let mut m = vec![vec![0; size]; size];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        Diagram(m)
    }

    fn link(&mut self, i: usize, j: usize, aij: i64, aji: i64) -> &mut Self {
        self.0[i][j] = aij;
        self.0[j][i] = aji;
        self
    }

    fn chain(&mut self, from: usize, to: usize) -> &mut Self {
        for i in from..to {
            self.link(i, i + 1, -1, -1);
        }
        self
    }
}

fn table_entry(ty: &AffineType) -> (Vec<Vec<i64>>, Vec<i64>, Vec<i64>) {
    use Family::*;
    let l = ty.rank();
    let mut d = Diagram::new(l + 1);
    let ones = vec![1; l + 1];
    let (marks, comarks) = match (ty.family, ty.twist) {
        (A, 1) if l == 1 => {
            d.link(0, 1, -2, -2);
            (ones.clone(), ones)
        }
        (A, 1) => {
            d.chain(0, l).link(l, 0, -1, -1);
            (ones.clone(), ones)
        }
        (B, 1) => {
            d.link(0, 2, -1, -1).link(1, 2, -1, -1).chain(2, l - 1);
            d.link(l - 1, l, -1, -2);
            let mut a = vec![2; l + 1];
            a[0] = 1;
            a[1] = 1;
            let mut av = a.clone();
            av[l] = 1;
            (a, av)
        }
        (C, 1) => {
            d.link(0, 1, -1, -2).chain(1, l - 1).link(l - 1, l, -2, -1);
            let mut a = vec![2; l + 1];
            a[0] = 1;
            a[l] = 1;
            (a, ones)
        }
        (D, 1) => {
            for i in [0, 1, 3, 4] {
                d.link(i, 2, -1, -1);
            }
            (vec![1, 1, 2, 1, 1], vec![1, 1, 2, 1, 1])
        }
        (F, 1) => {
            d.chain(0, 2).link(2, 3, -1, -2).chain(3, 4);
            (vec![1, 2, 3, 4, 2], vec![1, 2, 3, 2, 1])
        }
        (G, 1) => {
            d.link(0, 1, -1, -1).link(1, 2, -1, -3);
            (vec![1, 2, 3], vec![1, 2, 1])
        }
        (A, 2) if ty.index.is_multiple_of(2) && l == 1 => {
            d.link(0, 1, -4, -1);
            (vec![2, 1], vec![1, 2])
        }
        (A, 2) if ty.index.is_multiple_of(2) => {
            d.link(0, 1, -2, -1).chain(1, l - 1).link(l - 1, l, -2, -1);
            let mut a = vec![2; l + 1];
            a[l] = 1;
            let mut av = vec![2; l + 1];
            av[0] = 1;
            (a, av)
        }
        (A, 2) => {
            d.link(0, 2, -1, -1).link(1, 2, -1, -1).chain(2, l - 1);
            d.link(l - 1, l, -2, -1);
            let mut a = vec![2; l + 1];
            a[0] = 1;
            a[1] = 1;
            a[l] = 1;
            let mut av = vec![2; l + 1];
            av[0] = 1;
            av[1] = 1;
            (a, av)
        }
        (D, 2) => {
            d.link(0, 1, -2, -1).chain(1, l - 1).link(l - 1, l, -1, -2);
            let mut av = vec![2; l + 1];
            av[0] = 1;
            av[l] = 1;
            (ones, av)
        }
        (E, 2) => {
            d.chain(0, 2).link(2, 3, -2, -1).chain(3, 4);
            (vec![1, 2, 3, 2, 1], vec![1, 2, 3, 4, 2])
        }
        (D, 3) => {
            d.link(0, 1, -1, -1).link(1, 2, -3, -1);
            (vec![1, 2, 1], vec![1, 2, 3])
        }
        _ => unreachable!("rank_checked admits only table entries"),
    };
    (d.0, marks, comarks)
}

/// Solves `m x = b` over the rationals for an invertible square `m`.
pub(crate) fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Builds the datum of a supported affine type.
pub fn build_datum(ty: AffineType) -> AffineCartanDatum {
    let (cartan, marks, comarks) = table_entry(&ty);
    let l = ty.rank();
    let gram: Vec<Vec<Q>> = (0..=l)
        .map(|i| {
            (0..=l)
                .map(|j| frac(comarks[i] * cartan[i][j], marks[i]))
                .collect()
        })
        .collect();
    let finite: Vec<Vec<Q>> = (1..=l)
        .map(|i| (1..=l).map(|k| q(cartan[i][k])).collect())
        .collect();
    let fundamental = (0..l)
        .map(|i| {
            let mut e = vec![Q::zero(); l];
            e[i] = Q::one();
            solve(&finite, &e).expect("finite Cartan matrix is invertible")
        })
        .collect();
    let mut datum = AffineCartanDatum {
        ty,
        cartan,
        marks,
        comarks,
        gram,
        roots: Vec::new(),
        root_set: BTreeSet::new(),
        long_norm: Q::zero(),
        fundamental,
    };
    datum.roots = datum.close_roots();
    datum.root_set = datum.roots.iter().cloned().collect();
    datum.long_norm = datum
        .roots
        .iter()
        .map(|b| datum.norm(&b.to_q()))
        .max()
        .expect("nonempty root system");
    datum
}

impl AffineCartanDatum {
    pub fn from_label(label: &str) -> Result<Self> {
        Ok(build_datum(label.parse()?))
    }

    /// `l`, the number of non-special nodes.
    pub fn rank(&self) -> usize {
        self.cartan.len() - 1
    }

    /// The node set `0..=l`.
    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.rank()
    }

    pub fn a0(&self) -> i64 {
        self.marks[0]
    }

    /// `(x, y)` for finite coordinate vectors.
    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if !yb.is_zero() {
                    s += xa * yb * &self.gram[a + 1][b + 1];
                }
            }
        }
        s
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        self.form(x, x)
    }

    /// `<x, h_j>` for a finite coordinate vector `x` and any node `j`.
    pub fn pair_h(&self, x: &[Q], j: usize) -> Q {
        let row = &self.cartan[j];
        let mut s = Q::zero();
        for (k, xk) in x.iter().enumerate() {
            let a = row[k + 1];
            if a != 0 && !xk.is_zero() {
                s += xk * q(a);
            }
        }
        s
    }

    fn pair_h_int(&self, x: &[i64], j: usize) -> i64 {
        x.iter()
            .enumerate()
            .map(|(k, xk)| xk * self.cartan[j][k + 1])
            .sum()
    }

    fn close_roots(&self) -> Vec<FiniteRoot> {
        let l = self.rank();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = 1;
            let r = FiniteRoot::new(e);
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
        while let Some(r) = queue.pop_front() {
            for j in 1..=l {
                let c = self.pair_h_int(&r.coords, j);
                let mut s = r.coords.clone();
                s[j - 1] -= c;
                let s = FiniteRoot::new(s);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All roots of the finite root system, sorted.
    pub fn finite_roots(&self) -> &[FiniteRoot] {
        &self.roots
    }

    pub fn positive_finite_roots(&self) -> Vec<FiniteRoot> {
        self.roots.iter().filter(|r| r.is_positive()).cloned().collect()
    }

    pub fn is_root(&self, beta: &FiniteRoot) -> bool {
        self.root_set.contains(beta)
    }

    pub fn is_long(&self, beta: &FiniteRoot) -> bool {
        self.norm(&beta.to_q()) == self.long_norm
    }

    pub fn long_norm(&self) -> &Q {
        &self.long_norm
    }

    /// `max(1, (β, β)/2)`.
    pub fn c_beta(&self, beta: &FiniteRoot) -> Result<Q> {
        if !self.is_root(beta) {
            return Err(Error::NotARoot(format!("{:?}", beta.coords)));
        }
        Ok(self.c_beta_unchecked(beta))
    }

    fn c_beta_unchecked(&self, beta: &FiniteRoot) -> Q {
        let half = self.norm(&beta.to_q()) / q(2);
        if half > Q::one() {
            half
        } else {
            Q::one()
        }
    }

    /// The integer `d_i` for `i` in `1..=l`.
    pub fn d_i(&self, i: usize) -> Result<i64> {
        if i == 0 || i > self.rank() {
            return Err(Error::IndexOutOfRange { what: "d_i", index: i });
        }
        if self.ty.is_a_even_twisted() && i == self.rank() {
            return Ok(1);
        }
        let mut e = vec![0; self.rank()];
        e[i - 1] = 1;
        let c = self.c_beta_unchecked(&FiniteRoot::new(e));
        Ok(crate::rational::to_i64(&c).expect("c_beta of a simple root is integral"))
    }

    /// `θ` with `δ = a_0 α_0 + θ`.
    pub fn theta(&self) -> FiniteRoot {
        FiniteRoot::new(self.marks[1..].to_vec())
    }

    /// Finite coordinates of the level-zero fundamental weight `ϖ_i`, `i` in `1..=l`.
    pub fn fundamental_weight(&self, i: usize) -> &[Q] {
        &self.fundamental[i - 1]
    }

    /// Finite coordinates and `δ`-coefficient of the simple root `α_j`.
    pub fn simple_root_vector(&self, j: usize) -> (Vec<Q>, Q) {
        let l = self.rank();
        if j == 0 {
            let a0 = q(self.a0());
            let fin = self.marks[1..].iter().map(|&m| -q(m) / &a0).collect();
            (fin, Q::one() / a0)
        } else {
            let mut fin = vec![Q::zero(); l];
            fin[j - 1] = Q::one();
            (fin, Q::zero())
        }
    }

    /// The simple root `α_j` as a positive real root.
    pub fn simple_root(&self, j: usize) -> PositiveRealRoot {
        if j == 0 {
            let kind = if self.ty.is_a_even_twisted() {
                RootKind::Half
            } else {
                RootKind::Full
            };
            PositiveRealRoot { kind, beta: self.theta().neg(), n: 1 }
        } else {
            let mut e = vec![0; self.rank()];
            e[j - 1] = 1;
            PositiveRealRoot { kind: RootKind::Full, beta: FiniteRoot::new(e), n: 0 }
        }
    }

    /// All positive real roots with `δ`-coefficient at most `bound`, sorted by
    /// `δ`-coefficient and then by finite part.
    pub fn positive_real_roots_up_to(&self, bound: &Q) -> Vec<PositiveRealRoot> {
        let mut out: Vec<(Q, PositiveRealRoot)> = Vec::new();
        if bound.is_negative() {
            return Vec::new();
        }
        for beta in &self.roots {
            let c = self.c_beta_unchecked(beta);
            let mut n = if beta.is_positive() { 0 } else { 1 };
            while q(n) * &c <= *bound {
                out.push((
                    q(n) * &c,
                    PositiveRealRoot { kind: RootKind::Full, beta: beta.clone(), n },
                ));
                n += 1;
            }
            if self.ty.is_a_even_twisted() && self.is_long(beta) {
                let mut n = 1;
                while frac(2 * n - 1, 2) <= *bound {
                    out.push((
                        frac(2 * n - 1, 2),
                        PositiveRealRoot { kind: RootKind::Half, beta: beta.clone(), n },
                    ));
                    n += 1;
                }
            }
        }
        out.sort_by(|(da, a), (db, b)| {
            da.cmp(db)
                .then_with(|| a.finite_part().cmp(&b.finite_part()))
                .then_with(|| a.cmp(b))
        });
        out.into_iter().map(|(_, r)| r).collect()
    }

    /// JSON description of the datum.
    pub fn to_json(&self) -> serde_json::Value {
        let gram: Vec<Vec<String>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        serde_json::json!({
            "type": self.ty,
            "rank": self.rank(),
            "cartan": self.cartan,
            "marks": self.marks,
            "comarks": self.comarks,
            "gram": gram,
            "theta": self.theta().coords,
            "d": (1..=self.rank()).map(|i| self.d_i(i).unwrap()).collect::<Vec<_>>(),
            "positive_finite_roots": self
                .positive_finite_roots()
                .into_iter()
                .map(|r| r.coords)
                .collect::<Vec<_>>(),
        })
    }
}
