//! Triangulations of convex polygons (type A) and centrally symmetric
//! triangulations (type B): flips, signed edge-adjacency matrices, Ptolemy
//! exchange relations, Plücker coordinates and the snake labeling.
//!
//! Vertices are `0..N` counterclockwise. Diagonals are labeled `1..=n`
//! (stored at index `label - 1`), sides `n+1..=2n+3`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use petgraph::graph::UnGraph;

use crate::exactnum::{vars_from, ExactError};
use crate::mutation::{mutate_matrix, ExchangeMatrix, Seed};
use crate::rootsys::RootSystem;
use crate::LaurentPoly;

pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("label {0} is not a diagonal of the triangulation")]
    NotADiagonal(usize),
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("two flip paths give different values for diagonal {edge:?}: {first} vs {second}")]
    MonodromyDetected { edge: Edge, first: String, second: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn norm(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

/// Strict interleaving of endpoints; diagonals sharing a vertex never cross.
pub fn crosses(x: Edge, y: Edge) -> bool {
    let ((a, b), (c, d)) = (norm(x.0, x.1), norm(y.0, y.1));
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

pub fn is_side(ngon: usize, e: Edge) -> bool {
    let (a, b) = norm(e.0, e.1);
    b - a == 1 || (a == 0 && b == ngon - 1)
}

/// Sides in the default label order `(0,1), (1,2), ..., (N-2,N-1), (0,N-1)`.
pub fn default_sides(ngon: usize) -> Vec<Edge> {
    let mut s: Vec<Edge> = (0..ngon - 1).map(|i| (i, i + 1)).collect();
    s.push((0, ngon - 1));
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    ngon: usize,
    diagonals: Vec<Edge>,
    sides: Vec<Edge>,
}

impl Triangulation {
    pub fn new(ngon: usize, diagonals: Vec<Edge>) -> Result<Self, PolygonError> {
        Self::with_sides(ngon, diagonals, default_sides(ngon))
    }

    pub fn with_sides(ngon: usize, diagonals: Vec<Edge>, sides: Vec<Edge>) -> Result<Self, PolygonError> {
        if ngon < 3 || diagonals.len() != ngon - 3 {
            return Err(PolygonError::Invalid(format!("an {ngon}-gon needs {} diagonals", ngon.saturating_sub(3))));
        }
        let diagonals: Vec<Edge> = diagonals.into_iter().map(|(a, b)| norm(a, b)).collect();
        for &d in &diagonals {
            if d.1 >= ngon || d.0 == d.1 || is_side(ngon, d) {
                return Err(PolygonError::Invalid(format!("{d:?} is not a diagonal")));
            }
        }
        for (i, &x) in diagonals.iter().enumerate() {
            for &y in &diagonals[i + 1..] {
                if x == y || crosses(x, y) {
                    return Err(PolygonError::Invalid(format!("{x:?} and {y:?} cross or repeat")));
                }
            }
        }
        let sides: Vec<Edge> = sides.into_iter().map(|(a, b)| norm(a, b)).collect();
        let mut sorted = sides.clone();
        sorted.sort_unstable();
        let mut expected = default_sides(ngon);
        expected.sort_unstable();
        if sorted != expected {
            return Err(PolygonError::Invalid("side labels must list every side once".into()));
        }
        Ok(Triangulation { ngon, diagonals, sides })
    }

    pub fn ngon(&self) -> usize {
        self.ngon
    }

    pub fn n(&self) -> usize {
        self.diagonals.len()
    }

    pub fn diagonals(&self) -> &[Edge] {
        &self.diagonals
    }

    pub fn sides(&self) -> &[Edge] {
        &self.sides
    }

    /// Diagonals then sides, i.e. edges in label order.
    pub fn edges(&self) -> Vec<Edge> {
        self.diagonals.iter().chain(&self.sides).copied().collect()
    }

    /// Sorted diagonal list (forgets labels).
    pub fn key(&self) -> Vec<Edge> {
        let mut k = self.diagonals.clone();
        k.sort_unstable();
        k
    }

    fn has_edge(&self, e: Edge) -> bool {
        let e = norm(e.0, e.1);
        is_side(self.ngon, e) || self.diagonals.contains(&e)
    }

    /// Triangles `a < b < c` of the triangulation.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        let n = self.ngon;
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_edge((a, b)) {
                    continue;
                }
                for c in b + 1..n {
                    if self.has_edge((a, c)) && self.has_edge((b, c)) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Signed edge adjacency: `b_ij = 1` when edges `i` and `j` lie in a
    /// common triangle and `j` follows `i` clockwise, `-1` for the opposite
    /// order. Rows are all edges in label order; columns are the diagonals.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let edges = self.edges();
        let label: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = self.n();
        let mut b = vec![vec![0i64; n]; edges.len()];
        for [a, bb, c] in self.triangles() {
            // Counterclockwise a -> b -> c, so clockwise the edges come as ac, cb, ba.
            let cyc = [label[&norm(a, c)], label[&norm(c, bb)], label[&norm(bb, a)]];
            for t in 0..3 {
                let (i, j) = (cyc[t], cyc[(t + 1) % 3]);
                if j < n {
                    b[i][j] += 1;
                }
                if i < n {
                    b[j][i] -= 1;
                }
            }
        }
        b
    }

    /// The two apexes of the quadrilateral around diagonal `d`.
    fn quad_apexes(&self, d: Edge) -> (usize, usize) {
        let apex: Vec<usize> = (0..self.ngon)
            .filter(|&v| v != d.0 && v != d.1 && self.has_edge((v, d.0)) && self.has_edge((v, d.1)))
            .collect();
        debug_assert_eq!(apex.len(), 2);
        (apex[0], apex[1])
    }

    /// Replaces diagonal `label` (1-based) by the other diagonal of its quadrilateral.
    pub fn flip(&self, label: usize) -> Result<Triangulation, PolygonError> {
        if label == 0 || label > self.n() {
            return Err(PolygonError::NotADiagonal(label));
        }
        let d = self.diagonals[label - 1];
        let (c, e) = self.quad_apexes(d);
        let mut t = self.clone();
        t.diagonals[label - 1] = norm(c, e);
        Ok(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.key().iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>())
    }
}

fn triangulate(verts: &[usize], out: &mut Vec<Vec<Edge>>) {
    if verts.len() < 3 {
        out.push(Vec::new());
        return;
    }
    let (first, last) = (verts[0], verts[verts.len() - 1]);
    for k in 1..verts.len() - 1 {
        let mut left = Vec::new();
        let mut right = Vec::new();
        triangulate(&verts[..=k], &mut left);
        triangulate(&verts[k..], &mut right);
        for l in &left {
            for r in &right {
                let mut d = l.clone();
                d.extend(r);
                if k > 1 {
                    d.push(norm(first, verts[k]));
                }
                if k < verts.len() - 2 {
                    d.push(norm(verts[k], last));
                }
                out.push(d);
            }
        }
    }
}

/// All triangulations of the `(n+3)`-gon, diagonals sorted, in lexicographic order.
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    let ngon = n + 3;
    let verts: Vec<usize> = (0..ngon).collect();
    let mut raw = Vec::new();
    triangulate(&verts, &mut raw);
    let mut keys: Vec<Vec<Edge>> = raw
        .into_iter()
        .map(|mut d| {
            d.sort_unstable();
            d
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().map(|d| Triangulation::new(ngon, d).expect("generated triangulations are valid")).collect()
}

/// Flip graph on unlabeled triangulations: indices into `list`.
pub fn flip_graph(list: &[Triangulation]) -> Vec<(usize, usize)> {
    let pos: HashMap<Vec<Edge>, usize> = list.iter().enumerate().map(|(i, t)| (t.key(), i)).collect();
    let mut edges = BTreeSet::new();
    for (i, t) in list.iter().enumerate() {
        for k in 1..=t.n() {
            let j = pos[&t.flip(k).expect("label in range").key()];
            edges.insert((i.min(j), i.max(j)));
        }
    }
    edges.into_iter().collect()
}

/// Values of every diagonal obtained from the initial assignment (all
/// sides plus the diagonals of `t0`) by Ptolemy exchanges
/// `x_ab x_cd = x_ac x_bd + x_ad x_bc` along every flip of every reachable
/// triangulation; any disagreement is reported.
pub fn ptolemy_values(t0: &Triangulation, init: &HashMap<Edge, LaurentPoly>) -> Result<BTreeMap<Edge, LaurentPoly>, PolygonError> {
    let mut val: BTreeMap<Edge, LaurentPoly> = BTreeMap::new();
    for e in t0.edges() {
        let v = init.get(&e).ok_or_else(|| PolygonError::Invalid(format!("no initial value for {e:?}")))?;
        val.insert(e, v.clone());
    }
    let mut seen: BTreeSet<Vec<Edge>> = BTreeSet::from([t0.key()]);
    let mut queue = VecDeque::from([t0.clone()]);
    while let Some(t) = queue.pop_front() {
        for k in 1..=t.n() {
            let (a, b) = t.diagonals[k - 1];
            let (c, d) = t.quad_apexes((a, b));
            let get = |x: usize, y: usize| val[&norm(x, y)].clone();
            let num = &(&get(a, c) * &get(b, d)) + &(&get(a, d) * &get(b, c));
            let new = num.exact_div(&get(a, b))?;
            let e = norm(c, d);
            match val.get(&e) {
                Some(old) if *old != new => {
                    return Err(PolygonError::MonodromyDetected { edge: e, first: old.to_string(), second: new.to_string() })
                }
                Some(_) => {}
                None => {
                    val.insert(e, new);
                }
            }
            let f = t.flip(k)?;
            if seen.insert(f.key()) {
                queue.push_back(f);
            }
        }
    }
    for s in default_sides(t0.ngon) {
        val.remove(&s);
    }
    Ok(val)
}

/// Symbolic ring for a labeled triangulation: edge with label `i` is `x{i}`.
pub fn labeled_variables(t0: &Triangulation) -> HashMap<Edge, LaurentPoly> {
    let edges = t0.edges();
    let names: Vec<String> = (1..=edges.len()).map(|i| format!("x{i}")).collect();
    let vars = vars_from(&names);
    edges.iter().enumerate().map(|(i, &e)| (e, LaurentPoly::var(&vars, i))).collect()
}

/// Value of `target` in the initial variables of `t0`.
pub fn ptolemy_expand(t0: &Triangulation, target: Edge) -> Result<LaurentPoly, PolygonError> {
    let vals = ptolemy_values(t0, &labeled_variables(t0))?;
    vals.get(&norm(target.0, target.1)).cloned().ok_or(PolygonError::Invalid(format!("{target:?} is not a diagonal")))
}

/// The seed `(x, adjacency_matrix(t0))` with sides frozen.
pub fn polygon_seed(t0: &Triangulation) -> Seed {
    let names: Vec<String> = (1..=t0.edges().len()).map(|i| format!("x{i}")).collect();
    let ex = ExchangeMatrix::new(t0.adjacency_matrix()).expect("polygon matrices have full rank");
    Seed::initial(ex, &names).expect("dimensions agree")
}

/// Checks `adjacency_matrix(flip(T, k)) = mu_k(adjacency_matrix(T))` for every
/// triangulation of the `(n+3)`-gon and every diagonal; returns the number of checks.
pub fn check_flip_mutation(n: usize) -> Result<usize, String> {
    let mut count = 0;
    for t in enumerate_triangulations(n) {
        let b = t.adjacency_matrix();
        for k in 1..=n {
            let f = t.flip(k).map_err(|e| e.to_string())?;
            if f.adjacency_matrix() != mutate_matrix(&b, k - 1) {
                return Err(format!("flip {k} of {:?} disagrees with mutation", t.key()));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// The labeled pentagon used in the exchange-relation examples:
/// vertices counterclockwise from the bottom left, diagonals `(0,3)`,
/// `(1,3)`, sides labeled 3..7 as `(1,2), (0,4), (2,3), (0,1), (3,4)`.
pub fn labeled_pentagon() -> Triangulation {
    Triangulation::with_sides(5, vec![(0, 3), (1, 3)], vec![(1, 2), (0, 4), (2, 3), (0, 1), (3, 4)]).expect("valid")
}

/// One Ptolemy relation `lhs = rhs`, both sides as canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub flipped: String,
    pub created: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct PentagonCycle {
    pub relations: Vec<Relation>,
    pub closes: bool,
    pub values: BTreeMap<String, LaurentPoly>,
}

/// Runs the five flips of the pentagon with sides `q1..q5` and diagonals
/// `y1..y5` and checks the five exchange relations and the return to the
/// start.
pub fn pentagon_cycle() -> Result<PentagonCycle, PolygonError> {
    let names = ["y1", "y2", "q1", "q2", "q3", "q4", "q5"];
    let vars = vars_from(&names);
    let v = |s: &str| LaurentPoly::var_named(&vars, s).expect("known variable");
    let diag: BTreeMap<&str, Edge> = [("y1", (0, 3)), ("y2", (1, 3)), ("y3", (1, 4)), ("y4", (2, 4)), ("y5", (0, 2))].into();
    let sides: [(Edge, &str); 5] = [((0, 1), "q4"), ((1, 2), "q1"), ((2, 3), "q3"), ((3, 4), "q5"), ((0, 4), "q2")];
    let mut init: HashMap<Edge, LaurentPoly> = sides.iter().map(|&(e, s)| (e, v(s))).collect();
    init.insert((0, 3), v("y1"));
    init.insert((1, 3), v("y2"));
    let t0 = Triangulation::new(5, vec![(0, 3), (1, 3)])?;
    let vals = ptolemy_values(&t0, &init)?;
    let y = |s: &str| vals[&diag[s]].clone();
    let q = |s: &str| v(s);
    // (old, new, first monomial pair, second monomial pair)
    let rels = [
        ("y1", "y3", ("q2", "y2"), ("q4", "q5")),
        ("y2", "y4", ("q3", "y3"), ("q5", "q1")),
        ("y3", "y5", ("q4", "y4"), ("q1", "q2")),
        ("y4", "y1", ("q5", "y5"), ("q2", "q3")),
        ("y5", "y2", ("q1", "y1"), ("q3", "q4")),
    ];
    let val = |s: &str| if s.starts_with('y') { y(s) } else { q(s) };
    let mut relations = Vec::new();
    let mut t = t0.clone();
    let mut labels: Vec<&str> = vec!["y1", "y2"];
    for (old, new, (a, b), (c, d)) in rels {
        let lhs = &y(old) * &y(new);
        let rhs = &(&val(a) * &val(b)) + &(&val(c) * &val(d));
        relations.push(Relation { flipped: old.into(), created: new.into(), holds: lhs == rhs });
        let k = labels.iter().position(|&l| l == old).expect("diagonal present") + 1;
        t = t.flip(k)?;
        labels[k - 1] = new;
        if t.diagonals()[k - 1] != diag[new] {
            relations.last_mut().expect("just pushed").holds = false;
        }
    }
    let closes = t.key() == t0.key() && y("y1") == v("y1") && y("y2") == v("y2");
    Ok(PentagonCycle { relations, closes, values: diag.keys().map(|&k| (k.to_string(), y(k))).collect() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerReport {
    pub quadruples: usize,
    pub identity_failures: usize,
    pub diagonals_checked: usize,
    pub diagonal_failures: usize,
}

/// Grassmann-Plücker check on a symbolic `2 x (n+3)` matrix: the three-term
/// relation for every quadruple, and Ptolemy propagation from the fan
/// triangulation at vertex 0 reproducing every minor.
pub fn plucker_verify(n: usize) -> Result<PluckerReport, PolygonError> {
    let ngon = n + 3;
    let names: Vec<String> = (1..=ngon).map(|i| format!("a{i}")).chain((1..=ngon).map(|i| format!("b{i}"))).collect();
    let vars = vars_from(&names);
    let a = |i: usize| LaurentPoly::var(&vars, i);
    let b = |i: usize| LaurentPoly::var(&vars, ngon + i);
    let p = |i: usize, j: usize| &(&a(i) * &b(j)) - &(&a(j) * &b(i));
    let mut rep = PluckerReport { quadruples: 0, identity_failures: 0, diagonals_checked: 0, diagonal_failures: 0 };
    for i in 0..ngon {
        for j in i + 1..ngon {
            for k in j + 1..ngon {
                for l in k + 1..ngon {
                    rep.quadruples += 1;
                    let lhs = &p(i, k) * &p(j, l);
                    let rhs = &(&p(i, j) * &p(k, l)) + &(&p(i, l) * &p(j, k));
                    if lhs != rhs {
                        rep.identity_failures += 1;
                    }
                }
            }
        }
    }
    let t0 = Triangulation::new(ngon, (2..ngon - 1).map(|k| (0, k)).collect())?;
    let init: HashMap<Edge, LaurentPoly> = t0.edges().into_iter().map(|(i, j)| ((i, j), p(i, j))).collect();
    let vals = ptolemy_values(&t0, &init)?;
    for (&(i, j), v) in &vals {
        rep.diagonals_checked += 1;
        if *v != p(i, j) {
            rep.diagonal_failures += 1;
        }
    }
    Ok(rep)
}

/// Diagonal of each almost positive root of `A_n` (root indices of `rs`).
#[derive(Debug, Clone)]
pub struct SnakeLabeling {
    pub ngon: usize,
    pub diagonal: BTreeMap<usize, Edge>,
}

impl SnakeLabeling {
    /// Builds the zigzag snake `1, N-1, 2, N-2, ...` and labels every
    /// positive root `alpha_i + ... + alpha_j` by the unique diagonal crossing
    /// exactly the snake diagonals `-alpha_i, ..., -alpha_j`.
    pub fn new(rs: &RootSystem) -> Result<Self, PolygonError> {
        let n = rs.rank();
        let ngon = n + 3;
        let mut zig = Vec::with_capacity(n + 1);
        let (mut lo, mut hi) = (1, ngon - 1);
        for t in 0..=n {
            if t % 2 == 0 {
                zig.push(lo);
                lo += 1;
            } else {
                zig.push(hi);
                hi -= 1;
            }
        }
        let snake: Vec<Edge> = zig.windows(2).map(|w| norm(w[0], w[1])).collect();
        let mut diagonal = BTreeMap::new();
        for (i, &d) in snake.iter().enumerate() {
            diagonal.insert(rs.neg_simple(i), d);
        }
        let all: Vec<Edge> = (0..ngon).flat_map(|a| (a + 2..ngon).map(move |b| (a, b))).filter(|&e| !is_side(ngon, e)).collect();
        for k in 0..rs.num_positive() {
            let c = &rs.root(k).coords;
            let support: Vec<usize> = (0..n).filter(|&i| c[i] != 0).collect();
            let hits: Vec<Edge> = all
                .iter()
                .copied()
                .filter(|&e| {
                    let crossed: Vec<usize> = (0..n).filter(|&i| crosses(e, snake[i])).collect();
                    crossed == support
                })
                .collect();
            match hits.as_slice() {
                [e] => {
                    diagonal.insert(k, *e);
                }
                _ => return Err(PolygonError::Invalid(format!("{} diagonals match root {c:?}", hits.len()))),
            }
        }
        Ok(SnakeLabeling { ngon, diagonal })
    }

    /// Distinct roots are compatible iff their diagonals do not cross.
    pub fn compatible(&self, a: usize, b: usize) -> bool {
        a != b && !crosses(self.diagonal[&a], self.diagonal[&b])
    }
}

/// A centrally symmetric triangulation of the `(2n+2)`-gon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymTriangulation {
    pub n: usize,
    pub triangulation: Triangulation,
}

pub fn antipode(n: usize, e: Edge) -> Edge {
    let m = 2 * n + 2;
    norm((e.0 + n + 1) % m, (e.1 + n + 1) % m)
}

/// Orbit of a diagonal under the antipodal map: a diameter alone or a pair.
pub fn orbit_of(n: usize, e: Edge) -> Vec<Edge> {
    let e = norm(e.0, e.1);
    let f = antipode(n, e);
    if f == e {
        vec![e]
    } else {
        let mut v = vec![e, f];
        v.sort_unstable();
        v
    }
}

/// All antipodal orbits of diagonals of the `(2n+2)`-gon, sorted.
pub fn symmetric_orbits(n: usize) -> Vec<Vec<Edge>> {
    let m = 2 * n + 2;
    let mut set = BTreeSet::new();
    for a in 0..m {
        for b in a + 2..m {
            if !is_side(m, (a, b)) {
                set.insert(orbit_of(n, (a, b)));
            }
        }
    }
    set.into_iter().collect()
}

pub fn orbits_compatible(x: &[Edge], y: &[Edge]) -> bool {
    x != y && x.iter().all(|&a| y.iter().all(|&b| !crosses(a, b)))
}

impl SymTriangulation {
    /// Orbits present, sorted.
    pub fn orbits(&self) -> Vec<Vec<Edge>> {
        let set: BTreeSet<Vec<Edge>> = self.triangulation.diagonals().iter().map(|&e| orbit_of(self.n, e)).collect();
        set.into_iter().collect()
    }

    /// Flips a whole orbit: a diameter flip or two antipodal flips.
    pub fn flip_orbit(&self, orbit: &[Edge]) -> Result<SymTriangulation, PolygonError> {
        let mut t = self.triangulation.clone();
        for e in orbit {
            let k = t.diagonals().iter().position(|d| d == e).ok_or(PolygonError::NotADiagonal(0))? + 1;
            t = t.flip(k)?;
        }
        Ok(SymTriangulation { n: self.n, triangulation: t })
    }

    /// Exchange matrix on orbits, folded from the signed adjacency of the
    /// full triangulation: `b_IJ = sum over i in I of b_{i, j0}` for a
    /// representative `j0` of `J`.
    pub fn folded_matrix(&self) -> Vec<Vec<i64>> {
        let orbits = self.orbits();
        let full = self.triangulation.adjacency_matrix();
        let pos = |e: &Edge| self.triangulation.diagonals().iter().position(|d| d == e).expect("present");
        orbits
            .iter()
            .map(|oi| orbits.iter().map(|oj| oi.iter().map(|e| full[pos(e)][pos(&oj[0])]).sum()).collect())
            .collect()
    }
}

pub fn enumerate_symmetric(n: usize) -> Vec<SymTriangulation> {
    enumerate_triangulations(2 * n - 1)
        .into_iter()
        .filter(|t| t.diagonals().iter().all(|&e| t.diagonals().contains(&antipode(n, e))))
        .map(|triangulation| SymTriangulation { n, triangulation })
        .collect()
}

/// Flip graph of symmetric triangulations (orbit flips), as index pairs.
pub fn symmetric_flip_graph(list: &[SymTriangulation]) -> Vec<(usize, usize)> {
    let pos: HashMap<Vec<Edge>, usize> = list.iter().enumerate().map(|(i, t)| (t.triangulation.key(), i)).collect();
    let mut edges = BTreeSet::new();
    for (i, t) in list.iter().enumerate() {
        for o in t.orbits() {
            let f = t.flip_orbit(&o).expect("orbit present");
            let j = pos[&f.triangulation.key()];
            edges.insert((i.min(j), i.max(j)));
        }
    }
    edges.into_iter().collect()
}

/// Compatibility graph on orbits (type B oracle).
pub fn symmetric_compatibility_graph(n: usize) -> UnGraph<(), ()> {
    let orbits = symmetric_orbits(n);
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = orbits.iter().map(|_| g.add_node(())).collect();
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            if orbits_compatible(&orbits[i], &orbits[j]) {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanMatrix, Family};
    use crate::mutation::{detect_finite_type, explore, FiniteTypeResult};

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_triangulations(n).len()).collect();
        assert_eq!(counts, vec![2, 5, 14, 42, 132]);
    }

    #[test]
    fn labeled_pentagon_matrix() {
        let t = labeled_pentagon();
        assert_eq!(
            t.adjacency_matrix(),
            vec![vec![0, 1], vec![-1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, -1], vec![1, 0]]
        );
    }

    #[test]
    fn flips() {
        let t = labeled_pentagon();
        assert_eq!(t.flip(1).unwrap().flip(1).unwrap(), t);
        assert_eq!(t.flip(3), Err(PolygonError::NotADiagonal(3)));
        // Five alternating flips return with the labels swapped.
        let mut cur = t.clone();
        for step in 0..5 {
            cur = cur.flip(step % 2 + 1).unwrap();
        }
        assert_eq!(cur.key(), t.key());
        assert_eq!(cur.diagonals(), &[t.diagonals()[1], t.diagonals()[0]]);
        let hex = enumerate_triangulations(3);
        let g = flip_graph(&hex);
        assert_eq!(g.len(), 14 * 3 / 2);
    }

    #[test]
    fn flip_commutes_with_mutation() {
        for n in 1..=4 {
            assert!(check_flip_mutation(n).is_ok());
        }
    }

    #[test]
    fn pentagon_relations() {
        let c = pentagon_cycle().unwrap();
        assert!(c.relations.iter().all(|r| r.holds), "{:?}", c.relations);
        assert!(c.closes);
        let strip = |s: String| s.replace([' ', '*'], "");
        assert_eq!(strip(c.values["y3"].fraction_form()), "(y2q2+q4q5)/y1");
        assert_eq!(strip(c.values["y5"].fraction_form()), "(y1q1+q3q4)/y2");
    }

    #[test]
    fn specialization_gives_the_five_periodic_sequence() {
        let vars = vars_from(&["x", "y"]);
        let one = LaurentPoly::one(&vars);
        let t0 = Triangulation::new(5, vec![(0, 3), (1, 3)]).unwrap();
        let mut init: HashMap<Edge, LaurentPoly> = default_sides(5).into_iter().map(|s| (s, one.clone())).collect();
        init.insert((0, 3), LaurentPoly::var(&vars, 0));
        init.insert((1, 3), LaurentPoly::var(&vars, 1));
        let vals = ptolemy_values(&t0, &init).unwrap();
        let got: BTreeSet<String> = vals.values().map(|v| v.fraction_form().replace([' ', '*'], "")).collect();
        let want: BTreeSet<String> = ["x", "y", "(y+1)/x", "(x+y+1)/(xy)", "(x+1)/y"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn monodromy_free_and_plucker() {
        for n in 1..=4 {
            let t0 = enumerate_triangulations(n).remove(0);
            let vals = ptolemy_values(&t0, &labeled_variables(&t0)).unwrap();
            assert_eq!(vals.len(), (n + 3) * n / 2);
            let r = plucker_verify(n).unwrap();
            assert_eq!((r.identity_failures, r.diagonal_failures), (0, 0));
        }
        assert_eq!(plucker_verify(1).unwrap().quadruples, 1);
    }

    #[test]
    fn polygon_exchange_graph_matches_mutation_engine() {
        for n in 1..=3 {
            let list = enumerate_triangulations(n);
            let t0 = list[0].clone();
            let vals = ptolemy_values(&t0, &labeled_variables(&t0)).unwrap();
            let by_value: HashMap<&LaurentPoly, Edge> = vals.iter().map(|(e, v)| (v, *e)).collect();
            let g = explore(&polygon_seed(&t0), 1000).unwrap();
            assert_eq!(g.seeds.len(), list.len());
            for seed in &g.seeds {
                let diags: Vec<Edge> = seed.cluster().iter().map(|v| by_value[v]).collect();
                let t = Triangulation::new(n + 3, diags).unwrap();
                assert_eq!(seed.exchange().rows(), t.adjacency_matrix().as_slice());
            }
        }
    }

    #[test]
    fn snake_labels_a2() {
        let rs = RootSystem::generate(&CartanMatrix::parse("A2").unwrap()).unwrap();
        let s = SnakeLabeling::new(&rs).unwrap();
        // The drawn labeling rotated by one vertex.
        assert_eq!(s.diagonal[&rs.neg_simple(0)], (1, 4));
        assert_eq!(s.diagonal[&rs.neg_simple(1)], (2, 4));
        assert_eq!(s.diagonal[&0], (0, 2));
        assert_eq!(s.diagonal[&1], (1, 3));
        assert_eq!(s.diagonal[&2], (0, 3));
        assert!(s.compatible(rs.neg_simple(0), rs.neg_simple(1)));
        assert!(!s.compatible(2, rs.neg_simple(0)));
        let rs5 = RootSystem::generate(&CartanMatrix::parse("A5").unwrap()).unwrap();
        let s5 = SnakeLabeling::new(&rs5).unwrap();
        let distinct: BTreeSet<Edge> = s5.diagonal.values().copied().collect();
        assert_eq!(distinct.len(), 20);
    }

    #[test]
    fn symmetric_model() {
        assert_eq!(enumerate_symmetric(2).len(), 6);
        let b3 = enumerate_symmetric(3);
        assert_eq!(b3.len(), 20);
        let g = symmetric_flip_graph(&b3);
        let mut deg = vec![0; b3.len()];
        for &(u, v) in &g {
            deg[u] += 1;
            deg[v] += 1;
        }
        assert!(deg.iter().all(|&d| d == 3));
        assert_eq!(symmetric_orbits(3).len(), 12);
    }

    #[test]
    fn folded_matrices_are_type_b_and_follow_flips() {
        for n in 2..=4 {
            for t in enumerate_symmetric(n) {
                let b = t.folded_matrix();
                for (k, o) in t.orbits().iter().enumerate() {
                    let f = t.flip_orbit(o).unwrap();
                    // Orbit order may change after the flip; compare up to relabeling.
                    let fb = f.folded_matrix();
                    let new_orbit = f.orbits();
                    let perm: Vec<usize> = t
                        .orbits()
                        .iter()
                        .enumerate()
                        .map(|(i, oo)| if i == k { new_orbit.iter().position(|x| !t.orbits().contains(x)).unwrap() } else { new_orbit.iter().position(|x| x == oo).unwrap() })
                        .collect();
                    let mb = mutate_matrix(&b, k);
                    for i in 0..n {
                        for j in 0..n {
                            assert_eq!(fb[perm[i]][perm[j]], mb[i][j]);
                        }
                    }
                }
            }
            let t = &enumerate_symmetric(n)[0];
            match detect_finite_type(&t.folded_matrix(), 10_000).unwrap() {
                FiniteTypeResult::Finite(d) => {
                    assert_eq!(d.0.len(), 1);
                    assert!(matches!(d.0[0].family, Family::B | Family::C));
                    assert_eq!(d.0[0].rank, n);
                }
                other => panic!("{other:?}"),
            }
        }
    }
}
