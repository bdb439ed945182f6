//! Level-zero weights: pairings, reflections, Weyl orbits and the translation period `d_λ`.
//!
//! A [`LevelZeroWeight`] is stored as finite coordinates over `α_1, …, α_l` together with the
//! coefficient of `δ`. Every simple root, including `α_0 = (δ - θ)/a_0`, has this form, so the
//! level-zero slice is closed under everything the crate does.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_data::{AffineCartanDatum, PositiveRealRoot};
use crate::error::{Error, Result};
use crate::rational::{gcd_i64, q, serde_q, to_i64, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelZeroWeight {
    #[serde(with = "serde_q::vec")]
    pub fin: Vec<Q>,
    #[serde(with = "serde_q")]
    pub delta: Q,
}

/// A weight modulo `δ`: finite coordinates only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClWeight {
    #[serde(with = "serde_q::vec")]
    pub fin: Vec<Q>,
}

fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_vec(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

impl LevelZeroWeight {
    pub fn new(fin: Vec<Q>, delta: Q) -> Self {
        LevelZeroWeight { fin, delta }
    }

    pub fn zero(rank: usize) -> Self {
        LevelZeroWeight { fin: vec![Q::zero(); rank], delta: Q::zero() }
    }

    /// `n δ`.
    pub fn delta_multiple(rank: usize, n: Q) -> Self {
        LevelZeroWeight { fin: vec![Q::zero(); rank], delta: n }
    }

    pub fn from_fin(fin: Vec<Q>) -> Self {
        LevelZeroWeight { fin, delta: Q::zero() }
    }

    pub fn simple_root(datum: &AffineCartanDatum, j: usize) -> Self {
        let (fin, delta) = datum.simple_root_vector(j);
        LevelZeroWeight { fin, delta }
    }

    pub fn from_root(datum: &AffineCartanDatum, xi: &PositiveRealRoot) -> Self {
        LevelZeroWeight { fin: xi.fin_vector(), delta: xi.delta_degree(datum) }
    }

    pub fn rank(&self) -> usize {
        self.fin.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        LevelZeroWeight { fin: add_vec(&self.fin, &o.fin), delta: &self.delta + &o.delta }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LevelZeroWeight { fin: sub_vec(&self.fin, &o.fin), delta: &self.delta - &o.delta }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LevelZeroWeight { fin: scale_vec(&self.fin, c), delta: &self.delta * c }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn shift_delta(&self, n: &Q) -> Self {
        LevelZeroWeight { fin: self.fin.clone(), delta: &self.delta + n }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero() && self.fin.iter().all(Zero::is_zero)
    }

    /// `<ν, h_j>`; the `δ` part pairs to zero.
    pub fn pair_h(&self, datum: &AffineCartanDatum, j: usize) -> Q {
        datum.pair_h(&self.fin, j)
    }

    /// `ν(ξ^∨) = 2(ν, ξ)/(ξ, ξ)`, which doubles automatically for half roots.
    pub fn pair_coroot(&self, datum: &AffineCartanDatum, xi: &PositiveRealRoot) -> Q {
        let v = xi.fin_vector();
        q(2) * datum.form(&self.fin, &v) / datum.norm(&v)
    }

    /// `r_ξ(ν) = ν - ν(ξ^∨) ξ`.
    pub fn reflect(&self, datum: &AffineCartanDatum, xi: &PositiveRealRoot) -> Self {
        let k = self.pair_coroot(datum, xi);
        self.sub(&LevelZeroWeight::from_root(datum, xi).scale(&k))
    }

    pub fn simple_reflect(&self, datum: &AffineCartanDatum, j: usize) -> Self {
        let k = self.pair_h(datum, j);
        self.sub(&LevelZeroWeight::simple_root(datum, j).scale(&k))
    }

    pub fn cl(&self) -> ClWeight {
        ClWeight { fin: self.fin.clone() }
    }

    /// Whether every `<ν, h_j>` is an integer and the `δ`-coefficient lies in `a_0^{-1} Z`.
    pub fn is_integral(&self, datum: &AffineCartanDatum) -> bool {
        datum.nodes().all(|j| self.pair_h(datum, j).is_integer())
            && (&self.delta * q(datum.a0())).is_integer()
    }

    /// Coordinates over all simple roots `α_0, …, α_l`.
    pub fn simple_root_coords(&self, datum: &AffineCartanDatum) -> Vec<Q> {
        let x0 = &self.delta * q(datum.a0());
        let mut out = Vec::with_capacity(self.fin.len() + 1);
        out.push(x0);
        for (k, f) in self.fin.iter().enumerate() {
            out.push(f + &self.delta * q(datum.marks[k + 1]));
        }
        out
    }

    /// Inverse of [`Self::simple_root_coords`].
    pub fn from_simple_root_coords(datum: &AffineCartanDatum, x: &[Q]) -> Self {
        let delta = &x[0] / q(datum.a0());
        let fin = (1..x.len()).map(|k| &x[k] - &delta * q(datum.marks[k])).collect();
        LevelZeroWeight { fin, delta }
    }

    /// Whether `ν` is a nonnegative integer combination of the simple roots.
    pub fn in_q_plus(&self, datum: &AffineCartanDatum) -> bool {
        self.simple_root_coords(datum)
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weights serialize")
    }
}

impl fmt::Display for LevelZeroWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl ClWeight {
    pub fn new(fin: Vec<Q>) -> Self {
        ClWeight { fin }
    }

    pub fn zero(rank: usize) -> Self {
        ClWeight { fin: vec![Q::zero(); rank] }
    }

    pub fn simple_root(datum: &AffineCartanDatum, j: usize) -> Self {
        ClWeight { fin: datum.simple_root_vector(j).0 }
    }

    pub fn add(&self, o: &Self) -> Self {
        ClWeight { fin: add_vec(&self.fin, &o.fin) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ClWeight { fin: sub_vec(&self.fin, &o.fin) }
    }

    pub fn scale(&self, c: &Q) -> Self {
        ClWeight { fin: scale_vec(&self.fin, c) }
    }

    pub fn pair_h(&self, datum: &AffineCartanDatum, j: usize) -> Q {
        datum.pair_h(&self.fin, j)
    }

    pub fn simple_reflect(&self, datum: &AffineCartanDatum, j: usize) -> Self {
        let k = self.pair_h(datum, j);
        self.sub(&ClWeight::simple_root(datum, j).scale(&k))
    }

    /// The lift with zero `δ`-coefficient.
    pub fn aff(&self) -> LevelZeroWeight {
        LevelZeroWeight::from_fin(self.fin.clone())
    }
}

/// Multiplicities `m_1, …, m_l` of a level-zero dominant weight `Σ m_i ϖ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominantShape {
    pub m: Vec<u32>,
}

impl DominantShape {
    pub fn new(m: Vec<u32>) -> Self {
        DominantShape { m }
    }

    /// Reads the shape of a dominant level-zero weight from its pairings.
    pub fn from_weight(datum: &AffineCartanDatum, lambda: &LevelZeroWeight) -> Result<Self> {
        let m = (1..=datum.rank())
            .map(|i| {
                let v = lambda.pair_h(datum, i);
                to_i64(&v)
                    .filter(|&x| x >= 0)
                    .map(|x| x as u32)
                    .ok_or_else(|| Error::InvalidShape(format!("<λ, h_{i}> = {v} is not dominant")))
            })
            .collect::<Result<_>>()?;
        Ok(DominantShape { m })
    }

    pub fn check(&self, datum: &AffineCartanDatum) -> Result<()> {
        if self.m.len() != datum.rank() {
            return Err(Error::InvalidShape(format!(
                "{} has {} entries, {} expected",
                self,
                self.m.len(),
                datum.rank()
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|&x| x == 0)
    }

    /// `m_i` for `i` in `1..=l`.
    pub fn multiplicity(&self, i: usize) -> u32 {
        self.m[i - 1]
    }

    pub fn total(&self) -> u32 {
        self.m.iter().sum()
    }

    /// Nodes `i` with `m_i` divisible by `p`.
    pub fn nodes_divisible_by(&self, p: u32) -> Vec<usize> {
        (1..=self.m.len()).filter(|&i| self.m[i - 1].is_multiple_of(p)).collect()
    }

    /// All shapes of rank `rank` with `1 <= Σ m_i <= max_total`.
    pub fn all_up_to(rank: usize, max_total: u32) -> Vec<DominantShape> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; rank];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DominantShape>) {
            if i == cur.len() {
                if cur.iter().any(|&x| x > 0) {
                    out.push(DominantShape::new(cur.clone()));
                }
                return;
            }
            for v in 0..=left {
                cur[i] = v;
                rec(i + 1, left - v, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, max_total, &mut cur, &mut out);
        out.sort();
        out
    }

    /// `Σ m_i ϖ_i`.
    pub fn weight(&self, datum: &AffineCartanDatum) -> LevelZeroWeight {
        from_shape(datum, self)
    }
}

impl fmt::Display for DominantShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for DominantShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidShape(format!("`{s}` is not a comma list of naturals")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DominantShape { m })
    }
}

/// `λ = Σ m_i ϖ_i` with zero `δ`-coefficient.
pub fn from_shape(datum: &AffineCartanDatum, shape: &DominantShape) -> LevelZeroWeight {
    let l = datum.rank();
    let mut fin = vec![Q::zero(); l];
    for i in 1..=l {
        let m = q(shape.multiplicity(i) as i64);
        for (f, w) in fin.iter_mut().zip(datum.fundamental_weight(i)) {
            *f += &m * w;
        }
    }
    LevelZeroWeight::from_fin(fin)
}

/// Splits `ν = λ - α + n δ` into `(α, n)`, requiring `α` to be a nonnegative combination of the
/// finite simple roots.
pub fn fin_and_d(nu: &LevelZeroWeight, lambda: &LevelZeroWeight) -> Result<(Vec<Q>, Q)> {
    let alpha = sub_vec(&lambda.fin, &nu.fin);
    if alpha.iter().any(Signed::is_negative) {
        return Err(Error::NotInOrbit(format!("{nu} is not below {lambda}")));
    }
    Ok((alpha, &nu.delta - &lambda.delta))
}

/// The finite Weyl orbit of `λ`, sorted.
pub fn weyl_orbit_fin(datum: &AffineCartanDatum, lambda: &LevelZeroWeight) -> Vec<LevelZeroWeight> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(w) = queue.pop_front() {
        for j in 1..=datum.rank() {
            let r = w.simple_reflect(datum, j);
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    seen.into_iter().collect()
}

/// `gcd{m_i d_i : m_i > 0}`.
pub fn d_lambda(datum: &AffineCartanDatum, shape: &DominantShape) -> Result<i64> {
    shape.check(datum)?;
    if shape.is_zero() {
        return Err(Error::InvalidShape("d_λ is undefined for λ = 0".into()));
    }
    let mut g = 0;
    for i in 1..=datum.rank() {
        let m = shape.multiplicity(i) as i64;
        if m > 0 {
            g = gcd_i64(g, m * datum.d_i(i)?);
        }
    }
    Ok(g)
}

/// Membership in the affine Weyl orbit `Wλ = W̄λ + d_λ Z δ` of a dominant `λ`.
#[derive(Debug, Clone)]
pub struct WeylOrbit {
    pub lambda: LevelZeroWeight,
    pub shape: DominantShape,
    /// `None` exactly when `λ` has zero finite part, in which case `Wλ = {λ}`.
    pub d_lambda: Option<i64>,
    fin_orbit: HashSet<Vec<Q>>,
}

impl WeylOrbit {
    pub fn new(datum: &AffineCartanDatum, lambda: &LevelZeroWeight) -> Result<Self> {
        let shape = DominantShape::from_weight(datum, lambda)?;
        let d = if shape.is_zero() { None } else { Some(d_lambda(datum, &shape)?) };
        let fin_orbit = weyl_orbit_fin(datum, lambda).into_iter().map(|w| w.fin).collect();
        Ok(WeylOrbit { lambda: lambda.clone(), shape, d_lambda: d, fin_orbit })
    }

    pub fn contains(&self, nu: &LevelZeroWeight) -> bool {
        if !self.fin_orbit.contains(&nu.fin) {
            return false;
        }
        let offset = &nu.delta - &self.lambda.delta;
        match self.d_lambda {
            Some(d) => (offset / q(d)).is_integer(),
            None => offset.is_zero(),
        }
    }

    pub fn fin_orbit_size(&self) -> usize {
        self.fin_orbit.len()
    }
}

pub fn in_w_orbit(datum: &AffineCartanDatum, nu: &LevelZeroWeight, lambda: &LevelZeroWeight) -> Result<bool> {
    Ok(WeylOrbit::new(datum, lambda)?.contains(nu))
}

/// A sequence of simple reflections `j_1, j_2, …` (applied in that order) taking `from` to
/// `to`, found by breadth-first search over the orbit. The `δ`-coefficient of intermediate
/// weights stays within `slack` of the segment between the two endpoints.
pub fn reflection_word(
    datum: &AffineCartanDatum,
    from: &LevelZeroWeight,
    to: &LevelZeroWeight,
    slack: &Q,
) -> Option<Vec<usize>> {
    let lo = std::cmp::min(&from.delta, &to.delta) - slack;
    let hi = std::cmp::max(&from.delta, &to.delta) + slack;
    let mut parent: HashMap<LevelZeroWeight, (LevelZeroWeight, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut seen = HashSet::new();
    seen.insert(from.clone());
    queue.push_back(from.clone());
    while let Some(w) = queue.pop_front() {
        if &w == to {
            let mut word = Vec::new();
            let mut cur = w;
            while let Some((p, j)) = parent.get(&cur) {
                word.push(*j);
                cur = p.clone();
            }
            word.reverse();
            return Some(word);
        }
        for j in datum.nodes() {
            let r = w.simple_reflect(datum, j);
            if r.delta < lo || r.delta > hi || seen.contains(&r) {
                continue;
            }
            seen.insert(r.clone());
            parent.insert(r.clone(), (w.clone(), j));
            queue.push_back(r);
        }
    }
    None
}

/// A reflection word taking `from` to `to`, widening the search until one is found or
/// `to` is shown not to lie in the orbit of `from`.
pub fn find_reflection_word(
    datum: &AffineCartanDatum,
    orbit: &WeylOrbit,
    from: &LevelZeroWeight,
    to: &LevelZeroWeight,
) -> Result<Vec<usize>> {
    if !orbit.contains(from) || !orbit.contains(to) {
        return Err(Error::NotInOrbit(format!("{from} or {to}")));
    }
    let mut slack = q(2);
    for _ in 0..8 {
        if let Some(w) = reflection_word(datum, from, to, &slack) {
            return Ok(w);
        }
        slack *= q(2);
    }
    Err(Error::SearchFailed(format!("no reflection word from {from} to {to}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_data::{FiniteRoot, RootKind};
    use crate::rational::frac;

    fn datum(s: &str) -> AffineCartanDatum {
        AffineCartanDatum::from_label(s).unwrap()
    }

    fn shape(s: &str) -> DominantShape {
        s.parse().unwrap()
    }

    #[test]
    fn fundamental_weight_of_a1() {
        let d = datum("A1~1");
        let w = from_shape(&d, &shape("1"));
        assert_eq!(w.fin, vec![frac(1, 2)]);
        assert_eq!(w.delta, q(0));
        assert!(from_shape(&d, &shape("0")).is_zero());
    }

    #[test]
    fn pairing_with_h0_is_minus_level() {
        for label in ["A2~1", "C2~1", "A2~2", "G2~1", "D4~3", "A4~2"] {
            let d = datum(label);
            for s in DominantShape::all_up_to(d.rank(), 3) {
                let w = from_shape(&d, &s);
                let want: i64 = (1..=d.rank())
                    .map(|i| d.comarks[i] * s.multiplicity(i) as i64)
                    .sum();
                assert_eq!(w.pair_h(&d, 0), q(-want), "{label} {s}");
                for i in 1..=d.rank() {
                    assert_eq!(w.pair_h(&d, i), q(s.multiplicity(i) as i64));
                }
                assert!(w.is_integral(&d));
            }
            let delta = LevelZeroWeight::delta_multiple(d.rank(), q(1));
            for j in d.nodes() {
                assert_eq!(delta.pair_h(&d, j), q(0));
            }
        }
    }

    #[test]
    fn simple_roots_pair_into_the_cartan_matrix() {
        for ty in crate::affine_data::AffineType::all_supported() {
            let d = crate::affine_data::build_datum(ty);
            for i in d.nodes() {
                let a = LevelZeroWeight::simple_root(&d, i);
                for j in d.nodes() {
                    assert_eq!(a.pair_h(&d, j), q(d.cartan[j][i]), "{ty}");
                    let xi = d.simple_root(j);
                    assert_eq!(a.pair_coroot(&d, &xi), q(d.cartan[j][i]), "{ty}");
                }
            }
        }
    }

    #[test]
    fn coroot_pairings() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &shape("2"));
        let a1 = FiniteRoot::new(vec![1]);
        let xi = PositiveRealRoot::new(&d, RootKind::Full, a1.clone(), 0).unwrap();
        assert_eq!(lam.pair_coroot(&d, &xi), q(2));
        let xi = PositiveRealRoot::new(&d, RootKind::Full, a1.neg(), 1).unwrap();
        assert_eq!(lam.pair_coroot(&d, &xi), q(-2));
        let r = lam.reflect(&d, &xi);
        assert_eq!(r, lam.sub(&LevelZeroWeight::from_fin(vec![q(2)])).shift_delta(&q(2)));
        assert_eq!(fin_and_d(&r, &lam).unwrap(), (vec![q(2)], q(2)));

        let d = datum("A2~2");
        let lam = from_shape(&d, &shape("1"));
        let b = FiniteRoot::new(vec![1]);
        let half = PositiveRealRoot::new(&d, RootKind::Half, b.neg(), 1).unwrap();
        let full = PositiveRealRoot::new(&d, RootKind::Full, b.clone(), 0).unwrap();
        assert_eq!(lam.pair_coroot(&d, &half), -q(2) * lam.pair_coroot(&d, &full));
    }

    #[test]
    fn reflections_are_involutions_and_preserve_integrality() {
        for label in ["A2~1", "C2~1", "A2~2", "G2~1"] {
            let d = datum(label);
            let lam = from_shape(&d, &shape(if d.rank() == 1 { "2" } else { "1,1" }));
            for xi in d.positive_real_roots_up_to(&q(3)) {
                let r = lam.reflect(&d, &xi);
                assert_eq!(r.reflect(&d, &xi), lam);
                assert!(r.is_integral(&d));
                assert!(lam.pair_coroot(&d, &xi).is_integer());
            }
        }
    }

    #[test]
    fn finite_orbits() {
        let d = datum("A1~1");
        let o = weyl_orbit_fin(&d, &from_shape(&d, &shape("1")));
        assert_eq!(o.len(), 2);
        assert!(o.contains(&LevelZeroWeight::from_fin(vec![frac(-1, 2)])));
        assert_eq!(weyl_orbit_fin(&d, &LevelZeroWeight::zero(1)).len(), 1);
        let d = datum("A2~1");
        assert_eq!(weyl_orbit_fin(&d, &from_shape(&d, &shape("1,1"))).len(), 6);
        assert_eq!(weyl_orbit_fin(&d, &from_shape(&d, &shape("1,0"))).len(), 3);
        let d = datum("G2~1");
        assert_eq!(weyl_orbit_fin(&d, &from_shape(&d, &shape("1,1"))).len(), 12);
    }

    #[test]
    fn d_lambda_values() {
        let d = datum("A2~1");
        assert_eq!(d_lambda(&d, &shape("2,3")).unwrap(), 1);
        assert_eq!(d_lambda(&d, &shape("2,4")).unwrap(), 2);
        assert_eq!(d_lambda(&d, &shape("3,0")).unwrap(), 3);
        assert!(d_lambda(&d, &shape("0,0")).is_err());
        let d = datum("A2~2");
        assert_eq!(d_lambda(&d, &shape("2")).unwrap(), 2);
        let d = datum("D4~3");
        assert_eq!(d_lambda(&d, &shape("0,1")).unwrap(), 3);
    }

    #[test]
    fn orbit_membership() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &shape("2"));
        assert!(in_w_orbit(&d, &lam, &lam).unwrap());
        assert!(in_w_orbit(&d, &lam.shift_delta(&q(2)), &lam).unwrap());
        assert!(!in_w_orbit(&d, &lam.shift_delta(&q(1)), &lam).unwrap());
    }

    /// Bounded closure of `λ` under all simple reflections, the reference for orbit membership.
    fn reflection_closure(d: &AffineCartanDatum, lam: &LevelZeroWeight, bound: &Q) -> BTreeSet<LevelZeroWeight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lam.clone());
        queue.push_back(lam.clone());
        while let Some(w) = queue.pop_front() {
            for j in d.nodes() {
                let r = w.simple_reflect(d, j);
                if r.delta.abs() <= *bound && seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    #[test]
    fn orbit_membership_matches_reflection_closure() {
        for label in ["A1~1", "A2~1", "C2~1", "A2~2"] {
            let d = datum(label);
            for s in DominantShape::all_up_to(d.rank(), 3) {
                let lam = from_shape(&d, &s);
                let dl = d_lambda(&d, &s).unwrap();
                let orbit = WeylOrbit::new(&d, &lam).unwrap();
                // Search wide, compare on the inner window where the closure is complete.
                let closure = reflection_closure(&d, &lam, &q(3 * dl + 6));
                let window = q(3 * dl);
                let reached: BTreeSet<_> =
                    closure.iter().filter(|w| w.delta.abs() <= window).cloned().collect();
                let fins = weyl_orbit_fin(&d, &lam);
                let a0 = d.a0();
                let mut expected = BTreeSet::new();
                for f in &fins {
                    for k in -(3 * dl * a0)..=(3 * dl * a0) {
                        let w = f.shift_delta(&frac(k, a0));
                        if orbit.contains(&w) {
                            expected.insert(w);
                        }
                    }
                }
                assert_eq!(reached, expected, "{label} {s}");
                // Translation periods reachable from λ form d_λ Z.
                let periods: BTreeSet<Q> = reached
                    .iter()
                    .filter(|w| w.fin == lam.fin)
                    .map(|w| w.delta.clone())
                    .collect();
                let want: BTreeSet<Q> = (-3..=3).map(|k| q(k * dl)).collect();
                assert_eq!(periods, want, "{label} {s}");
            }
        }
    }

    #[test]
    fn orbit_elements_sit_below_lambda() {
        for label in ["A2~1", "C2~1", "A2~2", "G2~1"] {
            let d = datum(label);
            for s in DominantShape::all_up_to(d.rank(), 2) {
                let lam = from_shape(&d, &s);
                for w in weyl_orbit_fin(&d, &lam) {
                    let w = w.shift_delta(&q(5));
                    let (alpha, n) = fin_and_d(&w, &lam).unwrap();
                    assert!(alpha.iter().all(|a| a.is_integer() && !a.is_negative()));
                    assert_eq!(n, q(5));
                }
            }
        }
    }

    #[test]
    fn simple_root_coordinates_round_trip() {
        let d = datum("A2~2");
        let delta = LevelZeroWeight::delta_multiple(1, q(1));
        assert_eq!(delta.simple_root_coords(&d), vec![q(2), q(1)]);
        assert!(delta.in_q_plus(&d));
        let a0 = LevelZeroWeight::simple_root(&d, 0);
        assert_eq!(a0.simple_root_coords(&d), vec![q(1), q(0)]);
        let w = LevelZeroWeight::new(vec![frac(3, 2)], frac(-1, 2));
        assert_eq!(LevelZeroWeight::from_simple_root_coords(&d, &w.simple_root_coords(&d)), w);
    }

    #[test]
    fn translation_words() {
        let d = datum("A1~1");
        let lam = from_shape(&d, &shape("2"));
        let orbit = WeylOrbit::new(&d, &lam).unwrap();
        let target = lam.shift_delta(&q(4));
        let word = find_reflection_word(&d, &orbit, &lam, &target).unwrap();
        let mut w = lam.clone();
        for j in &word {
            w = w.simple_reflect(&d, *j);
        }
        assert_eq!(w, target);
        assert!(find_reflection_word(&d, &orbit, &lam, &lam.shift_delta(&q(1))).is_err());
    }

    #[test]
    fn json_form() {
        let w = LevelZeroWeight::new(vec![frac(1, 2), q(-1)], q(3));
        assert_eq!(w.to_json(), r#"{"fin":["1/2","-1"],"delta":"3"}"#);
        let back: LevelZeroWeight = serde_json::from_str(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }
}
