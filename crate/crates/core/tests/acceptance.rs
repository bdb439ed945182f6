//! End-to-end acceptance checks over the small-rank grid. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use ls_crystal::affinization::{default_nbound, Affinization};
use ls_crystal::chain_order::{has_sigma_chain, sigma_chain_criterion};
use ls_crystal::crystal_graph::{
    generate_closure, rooted_isomorphic, tensor, tensor_vertex, ClPathCrystal, CrystalGraph,
    DEFAULT_CAP,
};
use ls_crystal::ls_crystal::{canonical_extremal, turn_set, valid_signatures, CompsReport, LsCrystal};
use ls_crystal::paths::Op;
use ls_crystal::weights::from_shape;
use ls_crystal::{AffineCartanDatum, ClPath, ClWeight, DominantShape, LevelZeroWeight, Path, Q};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_TYPES: [&str; 4] = ["A1~1", "A2~1", "C2~1", "A2~2"];

fn grid() -> Vec<(AffineCartanDatum, DominantShape)> {
    let mut out = Vec::new();
    for t in GRID_TYPES {
        let d = AffineCartanDatum::from_label(t).unwrap();
        for s in DominantShape::all_up_to(d.rank(), 4) {
            out.push((d.clone(), s));
        }
    }
    out
}

struct Outcome {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

impl Outcome {
    fn from(failures: Vec<String>, detail: String) -> Self {
        Outcome { pass: failures.is_empty(), detail, failures }
    }
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let verdict = if out.pass { "PASS" } else { "FAIL" };
    println!("criterion {label}: {verdict} ({}; {:.1}s)", out.detail, start.elapsed().as_secs_f64());
    for msg in out.failures.iter().take(10) {
        println!("    {msg}");
    }
    if out.failures.len() > 10 {
        println!("    … {} more", out.failures.len() - 10);
    }
    out.pass
}

fn chain_criterion() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (d, s) in grid() {
        let lam = from_shape(&d, &s);
        for tau in turn_set(&s) {
            let p: u32 = tau.denom().try_into().unwrap();
            let qn: u32 = tau.numer().try_into().unwrap();
            for n in 0..=6i64 {
                cases += 1;
                let nu = lam.shift_delta(&Q::from_integer(n.into()));
                let found = has_sigma_chain(&d, &lam, &nu, &tau).unwrap();
                if let Some(c) = &found {
                    if let Err(e) = c.validate(&d) {
                        failures.push(format!("{} {s} τ={tau} N={n}: bad certificate: {e}", d.ty));
                    }
                }
                let predicted = sigma_chain_criterion(&d, &s, p, qn, n);
                if found.is_some() != predicted {
                    failures.push(format!(
                        "{} {s} τ={tau} N={n}: search says {}, criterion says {predicted}",
                        d.ty,
                        found.is_some()
                    ));
                }
            }
        }
    }
    Outcome::from(failures, format!("{cases} cases"))
}

fn component_reports() -> Vec<CompsReport> {
    let a1 = AffineCartanDatum::from_label("A1~1").unwrap();
    let a2 = AffineCartanDatum::from_label("A2~1").unwrap();
    let cases = [(a1, "2"), (a2.clone(), "2,0"), (a2.clone(), "1,1"), (a2, "2,2")];
    cases
        .iter()
        .map(|(d, s)| {
            let ls = LsCrystal::new(d, &s.parse().unwrap()).unwrap();
            ls.verify_theorem_comps(8, 6, 2024)
        })
        .collect()
}

fn component_law(reports: &[CompsReport]) -> Outcome {
    let mut failures = Vec::new();
    let mut vertices = 0;
    let mut rejected = 0;
    for r in reports {
        failures.extend(r.violations.iter().map(|v| format!("{} {}: {v}", r.affine_type, r.shape)));
        vertices += r.signatures.iter().map(|s| s.vertices).sum::<usize>();
        rejected += r.rejected.len();
    }
    Outcome::from(failures, format!("{vertices} vertices, {rejected} signatures rejected"))
}

fn weight_lambda_unique(reports: &[CompsReport]) -> Outcome {
    let mut failures = Vec::new();
    let mut components = 0;
    for r in reports {
        for s in &r.signatures {
            components += 1;
            if s.weight_lambda_vertices > 1 {
                failures.push(format!(
                    "{} {} {:?}: {} vertices of weight λ",
                    r.affine_type, r.shape, s.signature.0, s.weight_lambda_vertices
                ));
            }
        }
    }
    Outcome::from(failures, format!("{components} components"))
}

fn simplicity() -> Outcome {
    let mut failures = Vec::new();
    let mut vertices = 0;
    let grid = grid();
    for (d, s) in &grid {
        match LsCrystal::new(d, s) {
            Ok(ls) => {
                let r = ls.verify_simple();
                vertices += r.vertices;
                if !r.connected || r.weight_lambda_vertices != 1 {
                    failures.push(format!("{} {s}: connected={} weight-λ={}", d.ty, r.connected, r.weight_lambda_vertices));
                }
                failures.extend(r.violations.into_iter().map(|v| format!("{} {s}: {v}", d.ty)));
            }
            Err(e) => failures.push(format!("{} {s}: {e}", d.ty)),
        }
    }
    Outcome::from(failures, format!("{} shapes, {vertices} vertices", grid.len()))
}

fn fundamental_graph(d: &AffineCartanDatum, i: usize) -> (CrystalGraph<ClWeight>, usize) {
    let mut m = vec![0; d.rank()];
    m[i - 1] = 1;
    let lam = from_shape(d, &DominantShape::new(m));
    let g = generate_closure(&ClPathCrystal { datum: d }, ClPath::straight(lam.cl()), DEFAULT_CAP).unwrap();
    (g.graph, g.root)
}

fn tensor_decomposition() -> Outcome {
    let mut failures = Vec::new();
    let grid = grid();
    for (d, s) in &grid {
        let ls = LsCrystal::new(d, s).unwrap();
        let mut product: Option<(CrystalGraph<ClWeight>, usize)> = None;
        for i in 1..=d.rank() {
            let (g, r) = fundamental_graph(d, i);
            for _ in 0..s.multiplicity(i) {
                product = Some(match product.take() {
                    None => (g.clone(), r),
                    Some((p, pr)) => {
                        let t = tensor(&p, &g);
                        let tr = tensor_vertex(&t, &p, &g, pr, r).unwrap();
                        (t, tr)
                    }
                });
            }
        }
        let (p, pr) = product.unwrap();
        if rooted_isomorphic(&ls.cl.graph, ls.cl.root, &p, pr).is_none() {
            failures.push(format!("{} {s}: {} vertices against a product of {}", d.ty, ls.cl.graph.len(), p.len()));
        }
    }
    Outcome::from(failures, format!("{} shapes", grid.len()))
}

fn affinization() -> Outcome {
    let mut failures = Vec::new();
    let mut elements = 0;
    let grid = grid();
    for (d, s) in &grid {
        let ls = LsCrystal::new(d, s).unwrap();
        let aff = Affinization::new(&ls).unwrap();
        let r = aff.verify_theta(default_nbound(&ls));
        elements += r.elements;
        if !r.injective {
            failures.push(format!("{} {s}: Θ is not injective", d.ty));
        }
        failures.extend(r.violations.into_iter().map(|v| format!("{} {s}: {v}", d.ty)));
    }
    Outcome::from(failures, format!("{} shapes, {elements} elements", grid.len()))
}

/// `H(t) = ⟨π(t), h_j⟩` at every breakpoint, evaluated directly from the path.
fn h_values(d: &AffineCartanDatum, pi: &Path, j: usize) -> Vec<Q> {
    pi.breaks().iter().map(|t| pi.evaluate(t).unwrap().pair_h(d, j)).collect()
}

/// Distinct paths from a walk that leans towards `f`, restarting at a canonical seed every
/// 2000 steps. An unbiased walk on the one-dimensional crystals keeps revisiting the same few
/// paths.
fn sample_paths(ls: &LsCrystal, target: usize, rng: &mut ChaCha8Rng) -> Vec<Path> {
    let d = &ls.datum;
    let seeds: Vec<Path> = valid_signatures(d, &ls.shape, 4)
        .iter()
        .map(|sig| canonical_extremal(d, &ls.shape, sig).unwrap())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut cur = seeds[0].clone();
    for step in 0..100 * target {
        if out.len() >= target {
            break;
        }
        if step % 2000 == 0 {
            cur = seeds[rng.random_range(0..seeds.len())].clone();
        }
        if seen.insert(cur.key()) {
            out.push(cur.clone());
        }
        let mut nodes: Vec<usize> = (0..=d.rank()).collect();
        nodes.shuffle(rng);
        let lower = rng.random_bool(0.75);
        let next = [lower, !lower].into_iter().find_map(|down| {
            nodes.iter().find_map(|&j| if down { cur.f(d, j) } else { cur.e(d, j) })
        });
        cur = match next {
            Some(p) => p,
            None => seeds[rng.random_range(0..seeds.len())].clone(),
        };
    }
    out
}

fn operator_axioms() -> Outcome {
    let mut failures = Vec::new();
    let mut sampled = 0;
    let mut outputs = 0;
    let mut reverified = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (d, s) in grid() {
        let ls = LsCrystal::new(&d, &s).unwrap();
        let paths = sample_paths(&ls, 500, &mut rng);
        if paths.len() < 500 {
            failures.push(format!("{} {s}: only {} distinct paths sampled", d.ty, paths.len()));
        }
        sampled += paths.len();
        let a0 = Q::new(1.into(), d.a0().into());
        for (k, pi) in paths.iter().enumerate() {
            let bad = |what: &str| format!("{} {s} path {}: {what}", d.ty, pi.key());
            let cl = pi.cl();
            for j in 0..=d.rank() {
                let alpha = LevelZeroWeight::simple_root(&d, j);
                let h = h_values(&d, pi, j);
                let min = h.iter().fold(Q::zero(), |m, x| if *x < m { x.clone() } else { m });
                let eps = Q::from_integer(pi.epsilon(&d, j).unwrap().into());
                let phi = Q::from_integer(pi.phi(&d, j).unwrap().into());
                if eps != -min.clone() || phi != h.last().unwrap() - &min {
                    failures.push(bad(&format!("ε/φ at {j} disagree with H")));
                }
                if let Some(f) = pi.f(&d, j) {
                    outputs += 1;
                    if f.e(&d, j).as_ref() != Some(pi) {
                        failures.push(bad(&format!("e_{j} f_{j} is not the identity")));
                    }
                    if f.endpoint() != pi.endpoint().sub(&alpha) {
                        failures.push(bad(&format!("f_{j} does not lower the weight by α_{j}")));
                    }
                    if Some(f.cl()) != cl.f(&d, j) {
                        failures.push(bad(&format!("cl does not commute with f_{j}")));
                    }
                    if (k + j) % 5 == 0 {
                        reverified += 1;
                        if !ls.is_ls(&f).is_ls {
                            failures.push(bad(&format!("f_{j} output is not LS")));
                        }
                    }
                }
                if let Some(e) = pi.e(&d, j) {
                    if e.f(&d, j).as_ref() != Some(pi) {
                        failures.push(bad(&format!("f_{j} e_{j} is not the identity")));
                    }
                    if e.endpoint() != pi.endpoint().add(&alpha) {
                        failures.push(bad(&format!("e_{j} does not raise the weight by α_{j}")));
                    }
                    if Some(e.cl()) != cl.e(&d, j) {
                        failures.push(bad(&format!("cl does not commute with e_{j}")));
                    }
                }
                if pi.s_j(&d, j).unwrap().cl() != cl.s_j(&d, j).unwrap() {
                    failures.push(bad(&format!("cl does not commute with S_{j}")));
                }
                for n in [Q::one(), -Q::from_integer(2.into()), a0.clone()] {
                    let shifted = pi.add_delta_function(std::slice::from_ref(&n), &[Q::zero(), Q::one()]).unwrap();
                    if shifted != pi.shift_delta(&n) {
                        failures.push(bad("t·nδ shift disagrees with the direction shift"));
                    }
                    for op in [Op::E(j), Op::F(j)] {
                        let lhs = shifted.apply(&d, op);
                        let rhs = pi.apply(&d, op).map(|p| p.shift_delta(&n));
                        if lhs != rhs {
                            failures.push(bad(&format!("{op:?} is not δ-shift equivariant")));
                        }
                    }
                    if shifted.epsilon(&d, j).unwrap() != pi.epsilon(&d, j).unwrap() {
                        failures.push(bad("ε changes under a δ-shift"));
                    }
                }
            }
            let word: Vec<usize> = (0..=d.rank()).rev().chain(0..=d.rank()).collect();
            if pi.s_w(&d, &word).unwrap().cl() != cl.s_w(&d, &word).unwrap() {
                failures.push(bad("cl does not commute with S_w"));
            }
        }
        if reverified * 10 < outputs {
            failures.push(format!("{} {s}: re-verified fewer than 10% of outputs", d.ty));
        }
    }
    Outcome::from(failures, format!("{sampled} paths, {outputs} f-outputs, {reverified} re-verified"))
}

fn main() -> ExitCode {
    println!("acceptance suite, {} worker thread(s)", ls_crystal::par::threads());
    let mut ok = true;
    ok &= run("1 chain criterion", chain_criterion);
    let mut reports = Vec::new();
    ok &= run("2 component law", || {
        reports = component_reports();
        component_law(&reports)
    });
    ok &= run("3 simplicity and connectedness", simplicity);
    ok &= run("4 tensor decomposition", tensor_decomposition);
    ok &= run("5 affinization", affinization);
    ok &= run("6 operator axioms and δ-shifts", operator_axioms);
    ok &= run("7 weight-λ uniqueness per component", || weight_lambda_unique(&reports));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
