//! Matrix and seed mutation, canonical seeds, exchange-graph exploration,
//! finite-type detection and denominator vectors.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{permutations, CartanMatrix, DynkinType};
use crate::exactnum::{vars_from, ExactError, Vars};
use crate::rootsys::RootSystem;
use crate::{IntMatrix, LaurentPoly};

pub const DEFAULT_SEED_BUDGET: usize = 100_000;
pub const DEFAULT_CLASS_BUDGET: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum MutationError {
    #[error("invalid exchange matrix: {0}")]
    InvalidMatrix(String),
    #[error("direction {0} out of range")]
    BadDirection(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("seed budget of {budget} exceeded")]
    BudgetExceeded { budget: usize, partial: Box<ExchangeGraph> },
    #[error("seed has two equal cluster variables")]
    RepeatedVariable,
    #[error("mutation class scan inconclusive after {0} matrices")]
    Inconclusive(usize),
    #[error("denominator vector {0:?} is not an almost positive root")]
    NotAlmostPositive(Vec<i64>),
    #[error("bad seed file: {0}")]
    SeedFile(String),
}

/// `b'_ij = -b_ij` if `k` is `i` or `j`; `b_ij + |b_ik| b_kj` if
/// `b_ik b_kj > 0`; `b_ij` otherwise. Rows may outnumber columns.
pub fn mutate_matrix(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let m = b.len();
    let n = b[0].len();
    let mut out = b.to_vec();
    for i in 0..m {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else if b[i][k] * b[k][j] > 0 {
                b[i][j] + b[i][k].abs() * b[k][j]
            } else {
                b[i][j]
            };
        }
    }
    out
}

/// Positive `d` with `d_i b_ij = -d_j b_ji` on the square top block, if any.
pub fn skew_symmetrizer(b: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = b[0].len();
    let mut cart = vec![vec![0i64; n]; n];
    for i in 0..n {
        if b[i][i] != 0 {
            return None;
        }
        for j in 0..n {
            if (b[i][j] == 0) != (b[j][i] == 0) || (i != j && b[i][j] != 0 && b[i][j].signum() == b[j][i].signum()) {
                return None;
            }
            cart[i][j] = if i == j { 2 } else { -b[i][j].abs() };
        }
    }
    // The Cartan-like companion has the same symmetrizer as B; reuse its propagation.
    symmetrizer_of(&cart)
}

fn symmetrizer_of(cart: &[Vec<i64>]) -> Option<Vec<i64>> {
    use num_integer::Integer;
    use num_rational::Ratio;
    let n = cart.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for s in 0..n {
        if d[s].is_some() {
            continue;
        }
        d[s] = Some(Ratio::from_integer(1));
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if i == j || cart[i][j] == 0 {
                    continue;
                }
                let dj = d[i].unwrap() * Ratio::new(cart[i][j], cart[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        comp.push(j);
                    }
                    Some(x) if x != dj => return None,
                    _ => {}
                }
            }
            k += 1;
        }
        let l = comp.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
        for &i in &comp {
            d[i] = Some(d[i].unwrap() * l);
        }
    }
    Some(d.into_iter().map(|x| x.unwrap().to_integer()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExchangeMatrix {
    rows: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    /// Validates an `m x n` extended exchange matrix: `m >= n`, skew-symmetrizable
    /// principal part and full column rank.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MutationError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 || m < n || rows.iter().any(|r| r.len() != n) {
            return Err(MutationError::InvalidMatrix("need an m x n matrix with m >= n >= 1".into()));
        }
        if skew_symmetrizer(&rows).is_none() {
            return Err(MutationError::InvalidMatrix("principal part is not skew-symmetrizable".into()));
        }
        let im = IntMatrix::from_fn(m, n, |i, j| rows[i][j].into());
        if im.rank() != n {
            return Err(MutationError::InvalidMatrix(format!("rank {} is less than n = {n}", im.rank())));
        }
        Ok(ExchangeMatrix { rows })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn principal(&self) -> Vec<Vec<i64>> {
        self.rows[..self.n()].to_vec()
    }

    pub fn mutate(&self, k: usize) -> Result<Self, MutationError> {
        if k >= self.n() {
            return Err(MutationError::BadDirection(k));
        }
        Ok(ExchangeMatrix { rows: mutate_matrix(&self.rows, k) })
    }

    pub fn rank(&self) -> usize {
        IntMatrix::from_fn(self.m(), self.n(), |i, j| self.rows[i][j].into()).rank()
    }
}

/// Extended cluster: `n` mutable values followed by `m - n` frozen ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    exchange: ExchangeMatrix,
    values: Vec<LaurentPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSeed {
    pub cluster: Vec<String>,
    pub btilde: Vec<Vec<i64>>,
}

impl Seed {
    pub fn new(exchange: ExchangeMatrix, values: Vec<LaurentPoly>) -> Result<Self, MutationError> {
        if values.len() != exchange.m() {
            return Err(MutationError::InvalidMatrix(format!(
                "{} values for {} rows",
                values.len(),
                exchange.m()
            )));
        }
        Ok(Seed { exchange, values })
    }

    /// The seed whose values are the ambient variables themselves.
    pub fn initial(exchange: ExchangeMatrix, names: &[String]) -> Result<Self, MutationError> {
        let vars = vars_from(names);
        let values = (0..names.len()).map(|i| LaurentPoly::var(&vars, i)).collect();
        Self::new(exchange, values)
    }

    /// Initial seed with generated names `x1..xn` and frozen `q1..q{m-n}`.
    pub fn from_matrix(rows: Vec<Vec<i64>>) -> Result<Self, MutationError> {
        let ex = ExchangeMatrix::new(rows)?;
        let names = default_names(ex.n(), ex.m());
        Self::initial(ex, &names)
    }

    /// Initial seed of `B` stacked over the identity (one frozen variable per
    /// direction), which always has full rank.
    pub fn with_principal_coefficients(b: Vec<Vec<i64>>) -> Result<Self, MutationError> {
        let n = b.len();
        let mut rows = b;
        rows.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()));
        Self::from_matrix(rows)
    }

    pub fn exchange(&self) -> &ExchangeMatrix {
        &self.exchange
    }

    pub fn n(&self) -> usize {
        self.exchange.n()
    }

    pub fn cluster(&self) -> &[LaurentPoly] {
        &self.values[..self.n()]
    }

    pub fn frozen(&self) -> &[LaurentPoly] {
        &self.values[self.n()..]
    }

    pub fn values(&self) -> &[LaurentPoly] {
        &self.values
    }

    pub fn ambient(&self) -> &Vars {
        self.values[0].vars()
    }

    /// The two monomials of the exchange relation in direction `k`.
    pub fn exchange_monomials(&self, k: usize) -> (LaurentPoly, LaurentPoly) {
        let vars = self.ambient().clone();
        let mut pos = LaurentPoly::one(&vars);
        let mut neg = LaurentPoly::one(&vars);
        for (i, v) in self.values.iter().enumerate() {
            let b = self.exchange.entry(i, k);
            if b > 0 {
                pos = &pos * &v.pow(b as u32);
            } else if b < 0 {
                neg = &neg * &v.pow((-b) as u32);
            }
        }
        (pos, neg)
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, MutationError> {
        let exchange = self.exchange.mutate(k)?;
        let (pos, neg) = self.exchange_monomials(k);
        let new = (&pos + &neg).exact_div(&self.values[k])?;
        let mut values = self.values.clone();
        values[k] = new;
        Ok(Seed { exchange, values })
    }

    /// Cluster sorted by canonical text, matrix permuted to match.
    pub fn canonical(&self) -> Result<CanonicalSeed, MutationError> {
        let n = self.n();
        let texts: Vec<String> = self.cluster().iter().map(|v| v.to_string()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| texts[a].cmp(&texts[b]));
        if order.windows(2).any(|w| texts[w[0]] == texts[w[1]]) {
            return Err(MutationError::RepeatedVariable);
        }
        let m = self.exchange.m();
        let row_of = |i: usize| if i < n { order[i] } else { i };
        let btilde = (0..m).map(|i| (0..n).map(|j| self.exchange.entry(row_of(i), order[j])).collect()).collect();
        Ok(CanonicalSeed { cluster: order.iter().map(|&i| texts[i].clone()).collect(), btilde })
    }
}

pub fn default_names(n: usize, m: usize) -> Vec<String> {
    (0..m).map(|i| if i < n { format!("x{}", i + 1) } else { format!("q{}", i + 1 - n) }).collect()
}

/// The exchange graph found by breadth-first mutation.
#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub seeds: Vec<Seed>,
    pub canonical: Vec<CanonicalSeed>,
    /// `(u, k, v)`: mutating seed `u` in its direction `k` gives seed `v`; each edge once.
    pub edges: Vec<(usize, usize, usize)>,
    /// Distinct cluster variables in order of discovery.
    pub variables: Vec<LaurentPoly>,
    pub closed: bool,
}

impl ExchangeGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.seeds.len()];
        for &(u, _, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        let n = self.seeds.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, _, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(adj[u].iter().copied());
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Index of each seed's cluster variables in `variables`.
    pub fn cluster_indices(&self) -> Vec<Vec<usize>> {
        let pos: HashMap<&LaurentPoly, usize> = self.variables.iter().enumerate().map(|(i, v)| (v, i)).collect();
        self.seeds
            .iter()
            .map(|s| {
                let mut c: Vec<usize> = s.cluster().iter().map(|v| pos[v]).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let clusters = self.cluster_indices();
        let mut s = String::from("graph exchange {\n");
        for (i, c) in clusters.iter().enumerate() {
            let label: Vec<String> = c.iter().map(|k| (k + 1).to_string()).collect();
            let _ = writeln!(s, "  s{i} [label=\"{{{}}}\"];", label.join(","));
        }
        for &(u, k, v) in &self.edges {
            let _ = writeln!(s, "  s{u} -- s{v} [label=\"{}\"];", k + 1);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let clusters = self.cluster_indices();
        let mut adj = vec![Vec::new(); self.seeds.len()];
        for &(u, _, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        json!({
            "closed": self.closed,
            "seeds": self.seeds.len(),
            "variables": self.variables.iter().map(|v| v.fraction_form()).collect::<Vec<_>>(),
            "clusters": clusters,
            "adjacency": adj,
        })
    }
}

/// Breadth-first exploration of the exchange graph with canonical dedup.
pub fn explore(s0: &Seed, budget: usize) -> Result<ExchangeGraph, MutationError> {
    let mut g = ExchangeGraph { seeds: Vec::new(), canonical: Vec::new(), edges: Vec::new(), variables: Vec::new(), closed: false };
    let mut index: HashMap<CanonicalSeed, usize> = HashMap::new();
    let mut var_set: HashSet<LaurentPoly> = HashSet::new();
    let mut edge_set: HashSet<(usize, usize)> = HashSet::new();
    let add_vars = |s: &Seed, g: &mut ExchangeGraph, var_set: &mut HashSet<LaurentPoly>| {
        for v in s.cluster() {
            if var_set.insert(v.clone()) {
                g.variables.push(v.clone());
            }
        }
    };
    let c0 = s0.canonical()?;
    index.insert(c0.clone(), 0);
    g.seeds.push(s0.clone());
    g.canonical.push(c0);
    add_vars(s0, &mut g, &mut var_set);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for k in 0..s0.n() {
            let s = g.seeds[u].mutate(k)?;
            let c = s.canonical()?;
            let v = match index.get(&c) {
                Some(&v) => v,
                None => {
                    if g.seeds.len() >= budget {
                        return Err(MutationError::BudgetExceeded { budget, partial: Box::new(g) });
                    }
                    let v = g.seeds.len();
                    index.insert(c.clone(), v);
                    add_vars(&s, &mut g, &mut var_set);
                    g.seeds.push(s);
                    g.canonical.push(c);
                    queue.push_back(v);
                    v
                }
            };
            if edge_set.insert((u.min(v), u.max(v))) {
                g.edges.push((u, k, v));
            }
        }
    }
    g.closed = true;
    Ok(g)
}

/// Seeds visited by alternating mutations `mu_1, mu_2, mu_1, ...` until the
/// canonical form repeats the initial one. Returns the distinct seeds in order.
pub fn alternating_orbit(s0: &Seed, max_steps: usize) -> Result<Vec<Seed>, MutationError> {
    let start = s0.canonical()?;
    let mut out = vec![s0.clone()];
    let mut cur = s0.clone();
    for step in 0..max_steps {
        cur = cur.mutate(step % 2)?;
        if cur.canonical()? == start {
            return Ok(out);
        }
        out.push(cur.clone());
    }
    Err(MutationError::Inconclusive(max_steps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteTypeResult {
    Finite(DynkinType),
    /// A matrix of the mutation class with some `|b_ij b_ji| > 3`.
    Infinite { witness: Vec<Vec<i64>> },
}

fn canonical_principal(b: &[Vec<i64>], perms: &[Vec<usize>]) -> Vec<i64> {
    let n = b.len();
    let mut best: Option<Vec<i64>> = None;
    for sign in [1, -1] {
        for p in perms {
            let flat: Vec<i64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| sign * b[p[i]][p[j]]).collect();
            if best.as_ref().is_none_or(|x| flat < *x) {
                best = Some(flat);
            }
        }
    }
    best.expect("at least one permutation")
}

/// Cartan companion of a sign-coherent (bipartite) principal part, if any.
fn as_b_of_a(b: &[Vec<i64>]) -> Option<CartanMatrix> {
    let n = b.len();
    for row in b {
        let signs: HashSet<i64> = row.iter().filter(|&&x| x != 0).map(|x| x.signum()).collect();
        if signs.len() > 1 {
            return None;
        }
    }
    let a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { -b[i][j].abs() }).collect()).collect();
    CartanMatrix::new(a).ok()
}

/// Explores the mutation class of a principal part, up to simultaneous
/// permutation and global sign.
pub fn detect_finite_type(b: &[Vec<i64>], budget: usize) -> Result<FiniteTypeResult, MutationError> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) || skew_symmetrizer(b).is_none() {
        return Err(MutationError::InvalidMatrix("principal part must be square and skew-symmetrizable".into()));
    }
    let perms = permutations(n);
    let violates = |m: &[Vec<i64>]| (0..n).any(|i| (0..n).any(|j| (m[i][j] * m[j][i]).abs() > 3));
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut class: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_principal(b, &perms));
    queue.push_back(b.to_vec());
    while let Some(m) = queue.pop_front() {
        if violates(&m) {
            return Ok(FiniteTypeResult::Infinite { witness: m });
        }
        for k in 0..n {
            let next = mutate_matrix(&m, k);
            if seen.insert(canonical_principal(&next, &perms)) {
                if seen.len() > budget {
                    return Err(MutationError::Inconclusive(budget));
                }
                queue.push_back(next);
            }
        }
        class.push(m);
    }
    for m in &class {
        if let Some(c) = as_b_of_a(m) {
            if let Ok(t) = c.classify() {
                return Ok(FiniteTypeResult::Finite(t));
            }
        }
    }
    Err(MutationError::Inconclusive(class.len()))
}

/// Denominator vector of a cluster variable written in an initial cluster
/// occupying the first `n` ambient variables; returns the root index.
pub fn denominator_root(v: &LaurentPoly, rs: &RootSystem) -> Result<usize, MutationError> {
    let n = rs.rank();
    let mins = v.min_exponents();
    let c: Vec<i64> = mins[..n].iter().map(|&e| -(e as i64)).collect();
    let idx = rs.index_of(&c).filter(|&k| rs.is_positive(k) || (k >= rs.num_positive() && k < rs.num_positive() + n));
    idx.ok_or(MutationError::NotAlmostPositive(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub variables_checked: usize,
    pub violations: Vec<String>,
}

/// Reports cluster variables with a negative coefficient; never fails.
pub fn observe_positivity<'a>(vars: impl IntoIterator<Item = &'a LaurentPoly>) -> PositivityReport {
    let mut r = PositivityReport { variables_checked: 0, violations: Vec::new() };
    for v in vars {
        r.variables_checked += 1;
        if !v.all_coefficients_positive() {
            r.violations.push(v.to_string());
        }
    }
    r
}

/// Seed file: `{m, n, btilde, cluster: [...], frozen: [...], values?: [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedFile {
    pub m: usize,
    pub n: usize,
    pub btilde: Vec<Vec<i64>>,
    pub cluster: Vec<String>,
    #[serde(default)]
    pub frozen: Vec<String>,
    #[serde(default)]
    pub values: Option<Vec<String>>,
}

impl SeedFile {
    pub fn to_seed(&self) -> Result<Seed, MutationError> {
        let bad = |s: &str| MutationError::SeedFile(s.to_string());
        if self.btilde.len() != self.m || self.cluster.len() != self.n || self.frozen.len() + self.n != self.m {
            return Err(bad("dimensions of btilde, cluster and frozen disagree with m and n"));
        }
        if self.btilde.iter().any(|r| r.len() != self.n) {
            return Err(bad("btilde rows must have n entries"));
        }
        let ex = ExchangeMatrix::new(self.btilde.clone())?;
        let names: Vec<String> = self.cluster.iter().chain(&self.frozen).cloned().collect();
        match &self.values {
            None => Seed::initial(ex, &names),
            Some(exprs) => {
                if exprs.len() != self.m {
                    return Err(bad("values must list m expressions"));
                }
                let vars = vars_from(&names);
                let values = exprs.iter().map(|e| LaurentPoly::parse(e, &vars)).collect::<Result<Vec<_>, _>>()?;
                Seed::new(ex, values)
            }
        }
    }
}

/// Groups cluster variables by denominator root (used to check the bijection).
pub fn denominator_map(graph: &ExchangeGraph, rs: &RootSystem) -> Result<BTreeMap<usize, usize>, MutationError> {
    let mut map = BTreeMap::new();
    for (i, v) in graph.variables.iter().enumerate() {
        map.insert(denominator_root(v, rs)?, i);
    }
    Ok(map)
}
