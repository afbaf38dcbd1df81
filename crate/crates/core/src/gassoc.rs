//! Generalized associahedra: the involutions tau+- on almost positive roots,
//! compatibility, the cluster complex, the support function, the explicit
//! polytope and the cluster fan.
//!
//! Almost positive roots are indexed like the root system: `0..N` are the
//! positive roots and `N + i` is `-alpha_i`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cartan::{Bipartition, Family};
use crate::coxgroup::CoxeterGroup;
use crate::rootsys::{rational_text, RootSystem};
use crate::{ExactError, IntMatrix, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GassocError {
    #[error("root system is not irreducible or its diagram is not bipartite")]
    NotIrreducible,
    #[error("alternating tau reduction of ({0}, {1}) did not reach a negative simple root")]
    OrbitEscape(usize, usize),
    #[error("compatibility of ({0}, {1}) depends on the reduction path")]
    InconsistentReduction(usize, usize),
    #[error("cluster {0:?} is not a basis of the root lattice (determinant {1})")]
    NonUnimodularCluster(Vec<usize>, String),
    #[error("support function takes two values on the orbit of root {0}")]
    OrbitConflict(usize),
    #[error("support function violates {0}")]
    BadSupportFunction(String),
    #[error("vertex of cluster {0:?} violates the inequality of root {1}")]
    InequalityViolation(Vec<usize>, usize),
    #[error("cluster {0:?} gives a singular linear system")]
    SingularClusterSystem(Vec<usize>),
    #[error("the polytope is not dual to the cluster complex: {0}")]
    NotDual(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The almost positive roots with the bipartite involutions.
#[derive(Debug, Clone)]
pub struct AlmostPositiveRoots {
    rs: RootSystem,
    parts: Bipartition,
    h: usize,
    tau: [Vec<usize>; 2],
}

fn ratio(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl AlmostPositiveRoots {
    pub fn new(rs: &RootSystem) -> Result<Self, GassocError> {
        let parts = rs.cartan().bipartition().map_err(|_| GassocError::NotIrreducible)?;
        let h = rs.coxeter_data().map_err(|_| GassocError::NotIrreducible)?.h as usize;
        let npos = rs.num_positive();
        let n = rs.rank();
        let mut tau = [Vec::new(), Vec::new()];
        for (slot, eps) in [(0usize, 1i64), (1, -1)] {
            let mine = parts.part(eps);
            tau[slot] = (0..npos + n)
                .map(|k| {
                    if k >= npos && !mine.contains(&(k - npos)) {
                        return k;
                    }
                    let mut c = rs.root(k).coords.clone();
                    for &i in &mine {
                        c = rs.simple_reflection(i, &c);
                    }
                    rs.index_of(&c).expect("reflections permute roots")
                })
                .collect();
        }
        Ok(AlmostPositiveRoots { rs: rs.clone(), parts, h, tau })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn coxeter_number(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.rs.num_positive() + self.rs.rank()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Some(i)` when root `k` is `-alpha_i`.
    pub fn negative_simple(&self, k: usize) -> Option<usize> {
        k.checked_sub(self.rs.num_positive())
    }

    pub fn coords(&self, k: usize) -> &[i64] {
        &self.rs.root(k).coords
    }

    /// Text such as `-a1` or `a1+2a2`.
    pub fn label(&self, k: usize) -> String {
        if let Some(i) = self.negative_simple(k) {
            return format!("-a{}", i + 1);
        }
        let parts: Vec<String> = self
            .coords(k)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| if c == 1 { format!("a{}", i + 1) } else { format!("{c}a{}", i + 1) })
            .collect();
        parts.join("+")
    }

    /// `tau_eps(k)` for `eps = +1` or `-1`.
    pub fn tau(&self, eps: i64, k: usize) -> usize {
        self.tau[usize::from(eps < 0)][k]
    }

    /// Permutation order of `tau- tau+`.
    pub fn tau_order(&self) -> usize {
        let step = |k: usize| self.tau(-1, self.tau(1, k));
        let mut order = 1;
        let mut cur: Vec<usize> = (0..self.len()).map(step).collect();
        while cur.iter().enumerate().any(|(k, &v)| k != v) {
            cur = cur.into_iter().map(step).collect();
            order += 1;
        }
        order
    }

    /// The predicted order: `(h+2)/2` when `w0 = -1`, otherwise `h+2`.
    pub fn predicted_tau_order(&self, w0_is_minus_identity: bool) -> usize {
        if w0_is_minus_identity {
            (self.h + 2) / 2
        } else {
            self.h + 2
        }
    }

    /// Orbits of the group generated by `tau+` and `tau-`, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(k) = q.pop_front() {
                for eps in [1, -1] {
                    let t = self.tau(eps, k);
                    if !seen[t] {
                        seen[t] = true;
                        orbit.push(t);
                        q.push_back(t);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Compatibility of two distinct roots by alternating reduction,
    /// starting with `tau_{start}`.
    fn reduce(&self, a: usize, b: usize, start: i64) -> Result<bool, GassocError> {
        let (mut x, mut y) = (a, b);
        let mut eps = start;
        for _ in 0..=2 * (self.h + 2) {
            if let Some(i) = self.negative_simple(x) {
                return Ok(self.coords(y)[i] == 0);
            }
            if let Some(i) = self.negative_simple(y) {
                return Ok(self.coords(x)[i] == 0);
            }
            x = self.tau(eps, x);
            y = self.tau(eps, y);
            eps = -eps;
        }
        Err(GassocError::OrbitEscape(a, b))
    }

    /// Whether distinct roots `a` and `b` are compatible. Both alternation
    /// starts must agree.
    pub fn compatible(&self, a: usize, b: usize) -> Result<bool, GassocError> {
        if a == b {
            return Ok(false);
        }
        let p = self.reduce(a, b, 1)?;
        if self.reduce(a, b, -1)? != p || self.reduce(b, a, 1)? != p {
            return Err(GassocError::InconsistentReduction(a, b));
        }
        Ok(p)
    }

    pub fn compatibility(&self) -> Result<CompatibilityRelation, GassocError> {
        let m = self.len();
        let mut rel = vec![vec![false; m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let c = self.compatible(a, b)?;
                rel[a][b] = c;
                rel[b][a] = c;
            }
        }
        Ok(CompatibilityRelation { rel })
    }

    /// The permutation `sigma` with `-w0(alpha_i) = alpha_sigma(i)`.
    pub fn minus_w0_on_simples(&self, group: &CoxeterGroup) -> Vec<usize> {
        let npos = self.rs.num_positive();
        let p = group.perm(group.w0());
        (0..self.rank()).map(|i| p[npos + i] as usize).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityRelation {
    pub rel: Vec<Vec<bool>>,
}

impl CompatibilityRelation {
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.rel[a][b]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.rel.len()).all(|a| (0..self.rel.len()).all(|b| self.rel[a][b] == self.rel[b][a]))
    }

    pub fn is_tau_invariant(&self, apr: &AlmostPositiveRoots) -> bool {
        let m = self.rel.len();
        [1, -1].iter().all(|&e| (0..m).all(|a| (0..m).all(|b| self.rel[a][b] == self.rel[apr.tau(e, a)][apr.tau(e, b)])))
    }

    pub fn edge_count(&self) -> usize {
        self.rel.iter().map(|r| r.iter().filter(|&&x| x).count()).sum::<usize>() / 2
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

#[derive(Debug, Clone)]
pub struct ClusterComplex {
    pub rank: usize,
    /// `faces[s]` lists the compatible subsets of size `s`, each sorted.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `f[s]` = number of faces with `s` elements (so `f[0] = 1`).
    pub f_vector: Vec<usize>,
    pub h_vector: Vec<i64>,
}

impl ClusterComplex {
    /// All cliques of the compatibility graph; checks that every maximal
    /// clique has `n` elements and is a basis of the root lattice.
    pub fn build(apr: &AlmostPositiveRoots, compat: &CompatibilityRelation) -> Result<Self, GassocError> {
        let n = apr.rank();
        let m = apr.len();
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
        let mut maximal_ok = true;
        fn extend(
            cur: &mut Vec<usize>,
            cands: &[usize],
            compat: &CompatibilityRelation,
            faces: &mut Vec<Vec<Vec<usize>>>,
            n: usize,
            maximal_ok: &mut bool,
        ) {
            if cur.len() > n {
                *maximal_ok = false;
                return;
            }
            faces[cur.len()].push(cur.clone());
            for (pos, &c) in cands.iter().enumerate() {
                let next: Vec<usize> = cands[pos + 1..].iter().copied().filter(|&d| compat.get(c, d)).collect();
                cur.push(c);
                extend(cur, &next, compat, faces, n, maximal_ok);
                cur.pop();
            }
        }
        let all: Vec<usize> = (0..m).collect();
        extend(&mut Vec::new(), &all, compat, &mut faces, n, &mut maximal_ok);
        if !maximal_ok {
            return Err(GassocError::NotDual("a compatible set exceeds the rank".into()));
        }
        // Purity: each face below the top lies in a larger face.
        for s in 0..n {
            let upper: BTreeSet<&Vec<usize>> = faces[s + 1].iter().collect();
            let covered: BTreeSet<Vec<usize>> = upper
                .iter()
                .flat_map(|f| (0..f.len()).map(move |i| f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect()))
                .collect();
            if let Some(f) = faces[s].iter().find(|f| !covered.contains(*f)) {
                return Err(GassocError::NotDual(format!("face {f:?} lies in no larger face")));
            }
        }
        for facet in &faces[n] {
            let rows: Vec<Vec<i64>> = facet.iter().map(|&k| apr.coords(k).to_vec()).collect();
            let d = IntMatrix::from_i64_rows(&rows)?.determinant()?;
            if d.abs() != BigInt::one() {
                return Err(GassocError::NonUnimodularCluster(facet.clone(), d.to_string()));
            }
        }
        let f_vector: Vec<usize> = faces.iter().map(Vec::len).collect();
        let h_vector = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let c = binomial((n - i) as u64, (k - i) as u64).to_i64().expect("small") * f_vector[i] as i64;
                        if (k - i) % 2 == 0 {
                            c
                        } else {
                            -c
                        }
                    })
                    .sum()
            })
            .collect();
        Ok(ClusterComplex { rank: n, faces, f_vector, h_vector })
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.faces[self.rank]
    }
}

/// `prod (e_i + h + 1) / (e_i + 1)`.
pub fn n_phi(h: u64, exponents: &[u64]) -> BigUint {
    let num: BigUint = exponents.iter().map(|&e| BigUint::from(e + h + 1)).product();
    let den: BigUint = exponents.iter().map(|&e| BigUint::from(e + 1)).product();
    num / den
}

/// Narayana numbers of an irreducible type from their closed forms.
pub fn narayana(family: Family, n: usize) -> Vec<BigUint> {
    let nn = n as u64;
    match family {
        Family::A => (0..=nn).map(|k| binomial(nn + 1, k) * binomial(nn + 1, k + 1) / BigUint::from(nn + 1)).collect(),
        Family::B | Family::C => (0..=nn).map(|k| binomial(nn, k).pow(2)).collect(),
        // 1 + q^n + sum over 0 < k < n of (C(n,k)^2 - n/(n-1) C(n-1,k-1) C(n-1,k)) q^k
        Family::D => (0..=nn)
            .map(|k| {
                if k == 0 || k == nn {
                    return BigUint::one();
                }
                let sub = BigUint::from(nn) * binomial(nn - 1, k - 1) * binomial(nn - 1, k) / BigUint::from(nn - 1);
                binomial(nn, k).pow(2) - sub
            })
            .collect(),
        Family::E => {
            let v: &[u64] = match n {
                6 => &[1, 36, 204, 351, 204, 36, 1],
                7 => &[1, 63, 546, 1470, 1470, 546, 63, 1],
                _ => &[1, 120, 1540, 6120, 9518, 6120, 1540, 120, 1],
            };
            v.iter().map(|&x| BigUint::from(x)).collect()
        }
        Family::F => [1u64, 24, 55, 24, 1].iter().map(|&x| BigUint::from(x)).collect(),
        Family::G => [1u64, 6, 1].iter().map(|&x| BigUint::from(x)).collect(),
    }
}

/// The `tau`-invariant extension of `F(-alpha_i) = rho_vee_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    pub values: Vec<Rational>,
}

impl SupportFunction {
    pub fn from_rho_vee(apr: &AlmostPositiveRoots, group: &CoxeterGroup) -> Result<Self, GassocError> {
        let rho = apr.root_system().weight_data().rho_vee;
        Self::extend(apr, group, &rho)
    }

    /// Extends prescribed values on `-Pi` along `tau` orbits, checking the
    /// hypotheses on the way.
    pub fn extend(apr: &AlmostPositiveRoots, group: &CoxeterGroup, on_simples: &[Rational]) -> Result<Self, GassocError> {
        let n = apr.rank();
        let npos = apr.root_system().num_positive();
        let sigma = apr.minus_w0_on_simples(group);
        if (0..n).any(|i| on_simples[i] != on_simples[sigma[i]]) {
            return Err(GassocError::BadSupportFunction("(-w0)-invariance".into()));
        }
        for j in 0..n {
            let s: Rational = (0..n).map(|i| ratio(apr.root_system().cartan().entry(i, j)) * on_simples[i].clone()).sum();
            if !s.is_positive() {
                return Err(GassocError::BadSupportFunction(format!("the strict inequality at node {}", j + 1)));
            }
        }
        let mut values: Vec<Option<Rational>> = vec![None; apr.len()];
        for i in 0..n {
            let start = npos + i;
            match &values[start] {
                Some(v) if *v != on_simples[i] => return Err(GassocError::OrbitConflict(start)),
                Some(_) => continue,
                None => values[start] = Some(on_simples[i].clone()),
            }
            let mut q = VecDeque::from([start]);
            while let Some(k) = q.pop_front() {
                for eps in [1, -1] {
                    let t = apr.tau(eps, k);
                    match &values[t] {
                        Some(v) if *v != on_simples[i] => return Err(GassocError::OrbitConflict(t)),
                        Some(_) => {}
                        None => {
                            values[t] = Some(on_simples[i].clone());
                            q.push_back(t);
                        }
                    }
                }
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| GassocError::BadSupportFunction(format!("orbit of root {k} misses -Pi"))))
            .collect::<Result<_, _>>()?;
        Ok(SupportFunction { values })
    }
}

/// Vertices in coordinates `z_j = <z, alpha_j>`, one per cluster.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub rank: usize,
    pub clusters: Vec<Vec<usize>>,
    pub vertices: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub facet_roots: Vec<Vec<i64>>,
    pub facet_labels: Vec<String>,
    /// Vertex pairs whose clusters differ in one root.
    pub edges: Vec<(usize, usize)>,
}

fn pair(z: &[Rational], c: &[i64]) -> Rational {
    z.iter().zip(c).map(|(a, &b)| a.clone() * ratio(b)).sum()
}

impl Polytope {
    pub fn build(apr: &AlmostPositiveRoots, complex: &ClusterComplex, f: &SupportFunction) -> Result<Self, GassocError> {
        let n = apr.rank();
        let m = apr.len();
        let mut vertices = Vec::new();
        for cl in complex.facets() {
            let a = RationalMatrix::from_fn(n, n, |r, c| ratio(apr.coords(cl[r])[c]));
            let b: Vec<Rational> = cl.iter().map(|&k| f.values[k].clone()).collect();
            let z = a.solve(&b).map_err(|_| GassocError::SingularClusterSystem(cl.clone()))?;
            for k in 0..m {
                let lhs = pair(&z, apr.coords(k));
                let tight = lhs == f.values[k];
                if lhs > f.values[k] || (tight != cl.contains(&k)) {
                    return Err(GassocError::InequalityViolation(cl.clone(), k));
                }
            }
            vertices.push(z);
        }
        let clusters = complex.facets().to_vec();
        let mut edges = Vec::new();
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let common = clusters[i].iter().filter(|x| clusters[j].contains(x)).count();
                if common == n - 1 {
                    edges.push((i, j));
                }
            }
        }
        Ok(Polytope {
            rank: n,
            clusters,
            vertices,
            rhs: f.values.clone(),
            facet_roots: (0..m).map(|k| apr.coords(k).to_vec()).collect(),
            facet_labels: (0..m).map(|k| apr.label(k)).collect(),
            edges,
        })
    }

    /// Every vertex lies on exactly `n` facets and has `n` neighbours.
    pub fn is_simple(&self) -> bool {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        self.vertices.iter().enumerate().all(|(v, z)| {
            let tight = self.facet_roots.iter().zip(&self.rhs).filter(|(c, r)| pair(z, c) == **r).count();
            tight == self.rank && deg[v] == self.rank
        })
    }

    pub fn to_poly_json(&self) -> Value {
        json!({
            "facets": self.facet_roots.iter().zip(&self.rhs).zip(&self.facet_labels).map(|((r, q), l)| json!({
                "root": r, "label": l, "rhs": rational_text(q),
            })).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|z| z.iter().map(rational_text).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "incidence": self.clusters,
            "edges": self.edges,
        })
    }

    /// OFF export (3-dimensional polytopes only): faces are the facet
    /// polygons with vertices in cyclic order.
    pub fn to_off(&self) -> Option<String> {
        if self.rank != 3 {
            return None;
        }
        let adj: BTreeSet<(usize, usize)> = self.edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let mut faces = Vec::new();
        for k in 0..self.facet_roots.len() {
            let on: Vec<usize> = (0..self.clusters.len()).filter(|&v| self.clusters[v].contains(&k)).collect();
            let mut cycle = vec![on[0]];
            while cycle.len() < on.len() {
                let last = *cycle.last().expect("nonempty");
                let next = on.iter().copied().find(|&v| adj.contains(&(last, v)) && !cycle.contains(&v))?;
                cycle.push(next);
            }
            faces.push(cycle);
        }
        let mut s = format!("OFF\n{} {} {}\n", self.vertices.len(), faces.len(), self.edges.len());
        for z in &self.vertices {
            let c: Vec<String> = z.iter().map(|q| format!("{}", q.to_f64().unwrap_or(0.0))).collect();
            s.push_str(&c.join(" "));
            s.push('\n');
        }
        for f in faces {
            let idx: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!("{} {}\n", f.len(), idx.join(" ")));
        }
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanReport {
    pub cones: usize,
    pub simplicial_failures: usize,
    pub walls: usize,
    pub wall_failures: usize,
    pub samples: usize,
    pub uncovered: usize,
    pub multiply_covered: usize,
    pub regions: usize,
    pub refinement_failures: usize,
    /// For each Coxeter region (group element), the cone index containing it.
    pub region_cone: Vec<Option<usize>>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.simplicial_failures == 0
            && self.wall_failures == 0
            && self.uncovered == 0
            && self.multiply_covered == 0
            && self.refinement_failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cones": self.cones,
            "simplicial_failures": self.simplicial_failures,
            "walls": self.walls,
            "wall_failures": self.wall_failures,
            "samples": self.samples,
            "uncovered": self.uncovered,
            "multiply_covered": self.multiply_covered,
            "regions": self.regions,
            "refinement_failures": self.refinement_failures,
        })
    }
}

/// Coefficients of `v` in the basis `rays`, if independent.
fn cone_coefficients(inv: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    inv.mul_vec(v).expect("dimensions agree")
}

fn inverse_of_rays(rays: &[Vec<Rational>]) -> Option<RationalMatrix> {
    let n = rays.len();
    RationalMatrix::from_fn(n, n, |i, j| rays[j][i].clone()).inverse().ok()
}

/// Simpliciality, wall pairing, random coverage (rank at most 3, `samples`
/// points from `rng_seed`) and, when `group` is given, refinement of the
/// transformed fan by the Coxeter fan.
pub fn fan_checks(
    apr: &AlmostPositiveRoots,
    complex: &ClusterComplex,
    group: Option<&CoxeterGroup>,
    samples: usize,
    rng_seed: u64,
) -> FanReport {
    let n = apr.rank();
    let facets = complex.facets();
    let as_q = |k: usize| -> Vec<Rational> { apr.coords(k).iter().map(|&c| ratio(c)).collect() };
    let invs: Vec<Option<RationalMatrix>> =
        facets.iter().map(|f| inverse_of_rays(&f.iter().map(|&k| as_q(k)).collect::<Vec<_>>())).collect();
    let simplicial_failures = invs.iter().filter(|i| i.is_none()).count();

    let mut wall_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for f in facets {
        for i in 0..n {
            let w: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            *wall_count.entry(w).or_default() += 1;
        }
    }
    let wall_failures = wall_count.values().filter(|&&c| c != 2).count();

    let (mut uncovered, mut multiply_covered, mut taken) = (0, 0, 0);
    if n <= 3 && simplicial_failures == 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        for _ in 0..samples {
            let v: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(-1000..=1000))).collect();
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            taken += 1;
            let (mut closed, mut open) = (0, 0);
            for inv in invs.iter().flatten() {
                let c = cone_coefficients(inv, &v);
                if c.iter().all(|x| !x.is_negative()) {
                    closed += 1;
                    if c.iter().all(|x| x.is_positive()) {
                        open += 1;
                    }
                }
            }
            if closed == 0 {
                uncovered += 1;
            }
            if open > 1 {
                multiply_covered += 1;
            }
        }
    }

    let mut regions = 0;
    let mut refinement_failures = 0;
    let mut region_cone = Vec::new();
    if let Some(g) = group {
        let weights = apr.root_system().weight_data().fundamental_weights;
        let eps: Vec<i64> = (0..n).map(|i| apr.bipartition().epsilon(i)).collect();
        // Image of alpha = sum c_i alpha_i is sum c_i eps_i omega_i.
        let image = |c: &[i64]| -> Vec<Rational> {
            (0..n)
                .map(|r| (0..n).map(|i| ratio(c[i] * eps[i]) * weights[i][r].clone()).sum())
                .collect()
        };
        let image_invs: Vec<Option<RationalMatrix>> = facets
            .iter()
            .map(|f| inverse_of_rays(&f.iter().map(|&k| image(apr.coords(k))).collect::<Vec<_>>()))
            .collect();
        for w in 0..g.len() {
            regions += 1;
            let mat = g.matrix(apr.root_system(), w);
            let rays: Vec<Vec<Rational>> = weights
                .iter()
                .map(|om| (0..n).map(|r| (0..n).map(|c| ratio(mat[r][c]) * om[c].clone()).sum()).collect())
                .collect();
            let found = image_invs.iter().position(|inv| {
                inv.as_ref().is_some_and(|inv| rays.iter().all(|ray| cone_coefficients(inv, ray).iter().all(|x| !x.is_negative())))
            });
            if found.is_none() {
                refinement_failures += 1;
            }
            region_cone.push(found);
        }
    }

    FanReport {
        cones: facets.len(),
        simplicial_failures,
        walls: wall_count.len(),
        wall_failures,
        samples: taken,
        uncovered,
        multiply_covered,
        regions,
        refinement_failures,
        region_cone,
    }
}

/// Everything for one type, computed in order.
#[derive(Debug, Clone)]
pub struct Associahedron {
    pub apr: AlmostPositiveRoots,
    pub compat: CompatibilityRelation,
    pub complex: ClusterComplex,
    pub support: SupportFunction,
    pub polytope: Polytope,
}

impl Associahedron {
    pub fn build(rs: &RootSystem, group: &CoxeterGroup) -> Result<Self, GassocError> {
        let apr = AlmostPositiveRoots::new(rs)?;
        let compat = apr.compatibility()?;
        let complex = ClusterComplex::build(&apr, &compat)?;
        let support = SupportFunction::from_rho_vee(&apr, group)?;
        let polytope = Polytope::build(&apr, &complex, &support)?;
        Ok(Associahedron { apr, compat, complex, support, polytope })
    }

    /// Fan as ray lists per cone.
    pub fn fan_json(&self) -> Value {
        json!({
            "rays": (0..self.apr.len()).map(|k| self.apr.coords(k).to_vec()).collect::<Vec<_>>(),
            "labels": (0..self.apr.len()).map(|k| self.apr.label(k)).collect::<Vec<_>>(),
            "cones": self.complex.facets(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use crate::coxgroup::DEFAULT_GROUP_BUDGET;
    use crate::mutation::{denominator_map, explore, Seed};
    use crate::polygon::{symmetric_compatibility_graph, SnakeLabeling};
    use petgraph::graph::UnGraph;

    fn setup(spec: &str) -> (RootSystem, CoxeterGroup, AlmostPositiveRoots) {
        let rs = RootSystem::generate(&CartanMatrix::parse(spec).unwrap()).unwrap();
        let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET).unwrap();
        let apr = AlmostPositiveRoots::new(&rs).unwrap();
        (rs, g, apr)
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn a2_tau_chain() {
        let (rs, _, apr) = setup("A2");
        let idx = |c: &[i64]| rs.index_of(c).unwrap();
        assert_eq!(apr.tau(1, idx(&[-1, 0])), idx(&[1, 0]));
        assert_eq!(apr.tau(-1, idx(&[1, 0])), idx(&[1, 1]));
        assert_eq!(apr.tau(1, idx(&[1, 1])), idx(&[0, 1]));
        assert_eq!(apr.tau(-1, idx(&[0, 1])), idx(&[0, -1]));
        assert_eq!(apr.tau(-1, idx(&[-1, 0])), idx(&[-1, 0]));
        assert_eq!(apr.orbits().len(), 1);
    }

    #[test]
    fn tau_involutions_and_orders() {
        for (spec, expected) in [("A2", 5), ("B2", 3), ("G2", 4), ("A3", 6), ("B3", 4), ("D4", 4), ("A4", 7), ("F4", 7)] {
            let (_, g, apr) = setup(spec);
            for e in [1, -1] {
                assert!((0..apr.len()).all(|k| apr.tau(e, apr.tau(e, k)) == k));
            }
            assert_eq!(apr.tau_order(), expected, "{spec}");
            assert_eq!(apr.predicted_tau_order(g.is_minus_identity(g.w0())), expected);
            let npos = apr.root_system().num_positive();
            let sigma = apr.minus_w0_on_simples(&g);
            for orbit in apr.orbits() {
                let meet: BTreeSet<usize> = orbit.iter().filter_map(|&k| k.checked_sub(npos)).collect();
                assert!(!meet.is_empty());
                let i = *meet.iter().next().unwrap();
                assert_eq!(meet, BTreeSet::from([i, sigma[i]]));
            }
        }
    }

    #[test]
    fn compatibility_basics() {
        let (rs, _, apr) = setup("A2");
        let c = apr.compatibility().unwrap();
        assert!(c.is_symmetric() && c.is_tau_invariant(&apr));
        let idx = |v: &[i64]| rs.index_of(v).unwrap();
        // alpha1 and alpha2 cross as snake diagonals (0,2) and (1,3).
        assert!(!c.get(idx(&[1, 0]), idx(&[0, 1])));
        assert!(c.get(idx(&[1, 0]), idx(&[1, 1])));
        assert!(c.get(idx(&[0, 1]), idx(&[-1, 0])));
        assert!(!c.get(idx(&[1, 0]), idx(&[-1, 0])));
        assert_eq!(c.edge_count(), 5);
        let (_, _, apr) = setup("F4");
        let npos = apr.root_system().num_positive();
        for i in 0..4 {
            for k in 0..npos {
                assert_eq!(apr.compatible(npos + i, k).unwrap(), apr.coords(k)[i] == 0);
            }
        }
    }

    #[test]
    fn matches_snake_in_type_a() {
        for n in 2..=6 {
            let (rs, _, apr) = setup(&format!("A{n}"));
            let c = apr.compatibility().unwrap();
            let s = SnakeLabeling::new(&rs).unwrap();
            for a in 0..apr.len() {
                for b in 0..apr.len() {
                    assert_eq!(c.get(a, b), s.compatible(a, b), "A{n} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn matches_symmetric_polygons_in_type_b() {
        for n in 2..=3 {
            let (_, _, apr) = setup(&format!("B{n}"));
            let c = apr.compatibility().unwrap();
            let mut g = UnGraph::<(), ()>::new_undirected();
            let nodes: Vec<_> = (0..apr.len()).map(|_| g.add_node(())).collect();
            for a in 0..apr.len() {
                for b in a + 1..apr.len() {
                    if c.get(a, b) {
                        g.add_edge(nodes[a], nodes[b], ());
                    }
                }
            }
            assert!(petgraph::algo::is_isomorphic(&g, &symmetric_compatibility_graph(n)));
        }
    }

    #[test]
    fn complexes_and_counts() {
        let cases = [
            ("A1", 2),
            ("A2", 5),
            ("A3", 14),
            ("A4", 42),
            ("B2", 6),
            ("B3", 20),
            ("C3", 20),
            ("D4", 50),
            ("G2", 8),
            ("F4", 105),
        ];
        for (spec, count) in cases {
            let (rs, _, apr) = setup(spec);
            let cx = ClusterComplex::build(&apr, &apr.compatibility().unwrap()).unwrap();
            assert_eq!(cx.facets().len(), count, "{spec}");
            let cd = rs.coxeter_data().unwrap();
            assert_eq!(n_phi(cd.h, &cd.exponents), BigUint::from(count as u64));
            let comp = &rs.dynkin().0[0];
            let nar: Vec<i64> = narayana(comp.family, comp.rank).iter().map(|x| x.to_i64().unwrap()).collect();
            assert_eq!(cx.h_vector, nar, "{spec}");
            let n = cx.h_vector.len();
            assert!((0..n).all(|k| cx.h_vector[k] == cx.h_vector[n - 1 - k]));
        }
        let (_, _, a3) = setup("A3");
        let cx = ClusterComplex::build(&a3, &a3.compatibility().unwrap()).unwrap();
        assert_eq!(cx.f_vector, vec![1, 9, 21, 14]);
        let (_, _, b3) = setup("B3");
        let cx = ClusterComplex::build(&b3, &b3.compatibility().unwrap()).unwrap();
        assert_eq!((cx.f_vector.clone(), cx.h_vector.clone()), (vec![1, 12, 30, 20], vec![1, 9, 9, 1]));
        let d4: Vec<u64> = narayana(Family::D, 4).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d4, vec![1, 12, 24, 12, 1]);
        assert_eq!(n_phi(12, &[1, 4, 5, 7, 8, 11]), BigUint::from(833u32));
        for fam in [Family::E] {
            for (n, total) in [(6, 833u64), (7, 4160), (8, 25080)] {
                let s: BigUint = narayana(fam, n).into_iter().sum();
                assert_eq!(s, BigUint::from(total));
            }
        }
    }

    #[test]
    fn complex_matches_mutation_clusters() {
        for spec in ["A1", "A2", "A3", "B2", "G2"] {
            let (rs, _, apr) = setup(spec);
            let cx = ClusterComplex::build(&apr, &apr.compatibility().unwrap()).unwrap();
            let c = rs.cartan();
            let b = c.b_of_a(&c.bipartition().unwrap());
            let graph = explore(&Seed::with_principal_coefficients(b).unwrap(), 10_000).unwrap();
            let map = denominator_map(&graph, &rs).unwrap();
            let var_to_root: BTreeMap<usize, usize> = map.iter().map(|(&r, &v)| (v, r)).collect();
            let mut from_mutation: Vec<Vec<usize>> = graph
                .cluster_indices()
                .into_iter()
                .map(|cl| {
                    let mut r: Vec<usize> = cl.iter().map(|v| var_to_root[v]).collect();
                    r.sort_unstable();
                    r
                })
                .collect();
            from_mutation.sort();
            from_mutation.dedup();
            let mut facets = cx.facets().to_vec();
            facets.sort();
            assert_eq!(from_mutation, facets, "{spec}");
        }
    }

    #[test]
    fn support_functions() {
        let (rs, g, apr) = setup("A3");
        let f = SupportFunction::from_rho_vee(&apr, &g).unwrap();
        let group_of = |val: Rational| -> BTreeSet<String> {
            (0..apr.len()).filter(|&k| f.values[k] == val).map(|k| apr.label(k)).collect()
        };
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(group_of(q(3, 2)), set(&["-a1", "-a3", "a1", "a3", "a1+a2", "a2+a3"]));
        assert_eq!(group_of(q(2, 1)), set(&["-a2", "a2", "a1+a2+a3"]));
        drop(rs);

        let (_, g, apr) = setup("matrix:[[2,-1,0],[-1,2,-2],[0,-1,2]]");
        let f = SupportFunction::from_rho_vee(&apr, &g).unwrap();
        let group_of = |val: Rational| -> BTreeSet<String> {
            (0..apr.len()).filter(|&k| f.values[k] == val).map(|k| apr.label(k)).collect()
        };
        assert_eq!(group_of(q(5, 2)), set(&["-a1", "a1", "a1+a2", "a2+a3"]));
        assert_eq!(group_of(q(4, 1)), set(&["-a2", "a2", "a1+a2+a3", "a1+2a2+a3"]));
        assert_eq!(group_of(q(9, 2)), set(&["-a3", "a3", "2a2+a3", "2a1+2a2+a3"]));

        let (_, g, apr) = setup("A2");
        let f = SupportFunction::from_rho_vee(&apr, &g).unwrap();
        assert!(f.values.iter().all(|v| *v == q(1, 1)));
        let bad = SupportFunction::extend(&apr, &g, &[q(1, 1), q(2, 1)]);
        assert!(matches!(bad, Err(GassocError::BadSupportFunction(_))));
    }

    #[test]
    fn polytopes() {
        for (spec, verts) in [("A2", 5), ("A3", 14), ("matrix:[[2,-1,0],[-1,2,-2],[0,-1,2]]", 20), ("B3", 20), ("G2", 8), ("D4", 50)] {
            let (rs, g, _) = setup(spec);
            let a = Associahedron::build(&rs, &g).unwrap();
            assert_eq!(a.polytope.vertices.len(), verts);
            assert!(a.polytope.is_simple());
        }
        let (rs, g, _) = setup("A3");
        let a = Associahedron::build(&rs, &g).unwrap();
        let off = a.polytope.to_off().unwrap();
        assert!(off.starts_with("OFF\n14 9 21\n"));
        let json = a.polytope.to_poly_json();
        assert_eq!(json["facets"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn fans() {
        for spec in ["A2", "A3", "B2", "B3", "G2"] {
            let (rs, g, apr) = setup(spec);
            let cx = ClusterComplex::build(&apr, &apr.compatibility().unwrap()).unwrap();
            let r = fan_checks(&apr, &cx, Some(&g), 300, 7);
            assert!(r.passed(), "{spec} {r:?}");
            assert_eq!(r.regions, g.len());
            let negs: Vec<usize> = (0..rs.rank()).map(|i| rs.neg_simple(i)).collect();
            assert!(cx.facets().contains(&negs));
        }
        let (_, g, apr) = setup("A2");
        let cx = ClusterComplex::build(&apr, &apr.compatibility().unwrap()).unwrap();
        let r = fan_checks(&apr, &cx, Some(&g), 100, 1);
        let mut per_cone = vec![0; 5];
        for c in r.region_cone.iter().flatten() {
            per_cone[*c] += 1;
        }
        per_cone.sort_unstable();
        assert_eq!(per_cone, vec![1, 1, 1, 1, 2]);
        let (_, _, apr) = setup("D4");
        let cx = ClusterComplex::build(&apr, &apr.compatibility().unwrap()).unwrap();
        let r = fan_checks(&apr, &cx, None, 0, 0);
        assert_eq!((r.walls, r.wall_failures), (cx.f_vector[3], 0));
    }
}
