//! Double wiring diagrams for `GL_n`: chamber minors, local moves, the
//! three-term relation and the cluster structure of the `GL_3` double
//! Bruhat cell.
//!
//! A diagram is a word in letters `t_i` (thin wires cross at level `i`)
//! and `T_i` (thick wires cross at level `i`), read left to right. Level
//! `i` lies between wire positions `i` and `i+1`, counted from the bottom.
//! Thin wires are numbered `1..n` bottom to top on the left, thick wires
//! `n..1`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::exactnum::{vars_from, Vars};
use crate::mutation::{detect_finite_type, explore, ExchangeMatrix, FiniteTypeResult, MutationError, Seed};
use crate::{LaurentPoly, Rational, RationalMatrix};

#[derive(Debug, thiserror::Error)]
pub enum WiringError {
    #[error("cannot parse diagram letter {0:?}")]
    Parse(String),
    #[error("the {0} letters do not form a reduced word for the longest permutation")]
    NotReduced(&'static str),
    #[error("no local move at position {0}")]
    NoMoveAvailable(usize),
    #[error("move at position {0} changes {1} chamber minors")]
    BadMove(usize, usize),
    #[error("move at position {0} satisfies no three-term relation")]
    NoRelation(usize),
    #[error("exchange matrix columns cannot be signed consistently")]
    InconsistentSigns,
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Thin,
    Thick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub color: Color,
    pub level: usize,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.color == Color::Thin { 't' } else { 'T' };
        write!(f, "{c}{}", self.level)
    }
}

/// Row set (thick wires below) and column set (thin wires below), 1-based.
pub type ChamberLabel = (Vec<usize>, Vec<usize>);

pub fn label_text(l: &ChamberLabel) -> String {
    let s = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<String>();
    format!("{},{}", s(&l.0), s(&l.1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub level: usize,
    /// Gaps between letters covered: gap `s` lies just before letter `s`.
    pub start: usize,
    pub end: usize,
    pub label: ChamberLabel,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleWiringDiagram {
    n: usize,
    word: Vec<Letter>,
}

fn is_reduced_w0(n: usize, levels: &[usize]) -> bool {
    if levels.len() != n * (n - 1) / 2 {
        return false;
    }
    let mut p: Vec<usize> = (0..n).collect();
    let mut inversions = 0usize;
    for &l in levels {
        if l == 0 || l >= n {
            return false;
        }
        if p[l - 1] < p[l] {
            inversions += 1;
        }
        p.swap(l - 1, l);
    }
    inversions == levels.len() && p.iter().enumerate().all(|(i, &v)| v == n - 1 - i)
}

impl DoubleWiringDiagram {
    pub fn new(n: usize, word: Vec<Letter>) -> Result<Self, WiringError> {
        for (color, name) in [(Color::Thin, "thin"), (Color::Thick, "thick")] {
            let levels: Vec<usize> = word.iter().filter(|l| l.color == color).map(|l| l.level).collect();
            if !is_reduced_w0(n, &levels) {
                return Err(WiringError::NotReduced(name));
            }
        }
        Ok(DoubleWiringDiagram { n, word })
    }

    /// Parses `T2 t1 t2 T1 T2 t1`.
    pub fn parse(n: usize, s: &str) -> Result<Self, WiringError> {
        let word = s
            .split_whitespace()
            .map(|tok| {
                let color = match tok.chars().next() {
                    Some('t') => Color::Thin,
                    Some('T') => Color::Thick,
                    _ => return Err(WiringError::Parse(tok.into())),
                };
                let level = tok[1..].parse().map_err(|_| WiringError::Parse(tok.into()))?;
                Ok(Letter { color, level })
            })
            .collect::<Result<_, _>>()?;
        Self::new(n, word)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    /// Chambers level by level, left to right; the top chamber last.
    pub fn chambers(&self) -> Vec<Chamber> {
        let n = self.n;
        let mut thin: Vec<usize> = (1..=n).collect();
        let mut thick: Vec<usize> = (1..=n).rev().collect();
        let below = |thick: &[usize], thin: &[usize], k: usize| -> ChamberLabel {
            let mut a = thick[..k].to_vec();
            let mut b = thin[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            (a, b)
        };
        let mut open: Vec<(usize, ChamberLabel)> = (1..n).map(|k| (0, below(&thick, &thin, k))).collect();
        let mut out: Vec<Chamber> = Vec::new();
        for (pos, l) in self.word.iter().enumerate() {
            let wires = if l.color == Color::Thin { &mut thin } else { &mut thick };
            wires.swap(l.level - 1, l.level);
            let k = l.level;
            let (start, label) = std::mem::replace(&mut open[k - 1], (pos + 1, below(&thick, &thin, k)));
            out.push(Chamber { level: k, start, end: pos, label, bounded: start != 0 });
        }
        for (k, (start, label)) in open.into_iter().enumerate() {
            out.push(Chamber { level: k + 1, start, end: self.word.len(), label, bounded: false });
        }
        out.sort_by_key(|c| (c.level, c.start));
        let all: Vec<usize> = (1..=n).collect();
        out.push(Chamber { level: n, start: 0, end: self.word.len(), label: (all.clone(), all), bounded: false });
        out
    }

    /// The isotopy invariant: the sorted chamber-label collection.
    pub fn collection(&self) -> Vec<ChamberLabel> {
        let mut v: Vec<ChamberLabel> = self.chambers().into_iter().map(|c| c.label).collect();
        v.sort();
        v
    }

    fn chamber_at(chambers: &[Chamber], level: usize, gap: usize) -> Option<ChamberLabel> {
        if level == 0 {
            return None;
        }
        chambers.iter().find(|c| c.level == level && c.start <= gap && gap <= c.end).map(|c| c.label.clone())
    }

    /// Local moves available at letter positions of this word: mixed
    /// `t_i T_i <-> T_i t_i`, and braids `x_i x_j x_i <-> x_j x_i x_j` with
    /// `|i - j| = 1` within one color.
    pub fn moves(&self) -> Vec<LocalMove> {
        let w = &self.word;
        let chambers = self.chambers();
        let mut out = Vec::new();
        for p in 0..w.len() {
            if p + 1 < w.len() && w[p].level == w[p + 1].level && w[p].color != w[p + 1].color {
                let i = w[p].level;
                let mut word = w.clone();
                word.swap(p, p + 1);
                let neighbors = [
                    Self::chamber_at(&chambers, i, p),
                    Self::chamber_at(&chambers, i, p + 2),
                    Self::chamber_at(&chambers, i + 1, p + 1),
                    Self::chamber_at(&chambers, i - 1, p + 1),
                ];
                out.push(LocalMove { position: p, kind: MoveKind::Mixed, result: DoubleWiringDiagram { n: self.n, word }, neighbors });
            }
            if p + 2 < w.len()
                && w[p].color == w[p + 1].color
                && w[p + 1].color == w[p + 2].color
                && w[p].level == w[p + 2].level
                && w[p].level.abs_diff(w[p + 1].level) == 1
            {
                let (i, j) = (w[p].level, w[p + 1].level);
                let mut word = w.clone();
                word[p].level = j;
                word[p + 1].level = i;
                word[p + 2].level = j;
                let neighbors = [
                    Self::chamber_at(&chambers, i, p),
                    Self::chamber_at(&chambers, i, p + 3),
                    Self::chamber_at(&chambers, j, p + 1),
                    Self::chamber_at(&chambers, j, p + 2),
                ];
                let kind = if w[p].color == Color::Thin { MoveKind::ThinBraid } else { MoveKind::ThickBraid };
                out.push(LocalMove { position: p, kind, result: DoubleWiringDiagram { n: self.n, word }, neighbors });
            }
        }
        out
    }

    pub fn word_text(&self) -> String {
        self.word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for DoubleWiringDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Mixed,
    ThinBraid,
    ThickBraid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMove {
    pub position: usize,
    pub kind: MoveKind,
    pub result: DoubleWiringDiagram,
    /// Chambers around the moving one; `None` stands for the empty minor 1.
    pub neighbors: [Option<ChamberLabel>; 4],
}

/// A verified move: `Y Z = A C + B D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRelation {
    pub y: ChamberLabel,
    pub z: ChamberLabel,
    pub a: Option<ChamberLabel>,
    pub c: Option<ChamberLabel>,
    pub b: Option<ChamberLabel>,
    pub d: Option<ChamberLabel>,
}

/// Symbolic minors of the generic `n x n` matrix with entries `x11, x12, ...`.
#[derive(Debug, Clone)]
pub struct MinorRing {
    n: usize,
    vars: Vars,
    cache: HashMap<ChamberLabel, LaurentPoly>,
}

impl MinorRing {
    pub fn new(n: usize) -> Self {
        let names: Vec<String> = (1..=n).flat_map(|i| (1..=n).map(move |j| format!("x{i}{j}"))).collect();
        MinorRing { n, vars: vars_from(&names), cache: HashMap::new() }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        LaurentPoly::var(&self.vars, (i - 1) * self.n + (j - 1))
    }

    /// `Delta_{I,J}` by Laplace expansion along the first row; the empty minor is 1.
    pub fn minor(&mut self, label: &ChamberLabel) -> LaurentPoly {
        if let Some(v) = self.cache.get(label) {
            return v.clone();
        }
        let (rows, cols) = label;
        let v = if rows.is_empty() {
            LaurentPoly::one(&self.vars)
        } else {
            let mut acc = LaurentPoly::zero(&self.vars);
            for (t, &c) in cols.iter().enumerate() {
                let sub: ChamberLabel = (rows[1..].to_vec(), cols.iter().copied().filter(|&x| x != c).collect());
                let term = &self.entry(rows[0], c) * &self.minor(&sub);
                acc = if t % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        };
        self.cache.insert(label.clone(), v.clone());
        v
    }

    fn opt_minor(&mut self, l: &Option<ChamberLabel>) -> LaurentPoly {
        match l {
            Some(l) => self.minor(l),
            None => LaurentPoly::one(&self.vars),
        }
    }

    /// All minors of the matrix, by size then lexicographically.
    pub fn all_labels(&self) -> Vec<ChamberLabel> {
        let n = self.n;
        let mut out = Vec::new();
        for k in 1..=n {
            let subsets: Vec<Vec<usize>> = (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (1..=n).filter(|&i| m & (1 << (i - 1)) != 0).collect())
                .collect();
            for r in &subsets {
                for c in &subsets {
                    out.push((r.clone(), c.clone()));
                }
            }
        }
        out
    }
}

/// Checks a move: exactly one chamber changes, and one pairing of the four
/// neighbours gives `Y Z = A C + B D`.
pub fn verify_move(d: &DoubleWiringDiagram, mv: &LocalMove, ring: &mut MinorRing) -> Result<MoveRelation, WiringError> {
    let before: BTreeSet<ChamberLabel> = d.collection().into_iter().collect();
    let after: BTreeSet<ChamberLabel> = mv.result.collection().into_iter().collect();
    let gone: Vec<&ChamberLabel> = before.difference(&after).collect();
    let new: Vec<&ChamberLabel> = after.difference(&before).collect();
    if gone.len() != 1 || new.len() != 1 {
        return Err(WiringError::BadMove(mv.position, gone.len().max(new.len())));
    }
    let (y, z) = (gone[0].clone(), new[0].clone());
    let yz = &ring.minor(&y) * &ring.minor(&z);
    let nb = &mv.neighbors;
    for (a, c, b, dd) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let lhs = &(&ring.opt_minor(&nb[a]) * &ring.opt_minor(&nb[c])) + &(&ring.opt_minor(&nb[b]) * &ring.opt_minor(&nb[dd]));
        if lhs == yz {
            return Ok(MoveRelation {
                y,
                z,
                a: nb[a].clone(),
                c: nb[c].clone(),
                b: nb[b].clone(),
                d: nb[dd].clone(),
            });
        }
    }
    Err(WiringError::NoRelation(mv.position))
}

fn reduced_words_w0(n: usize) -> Vec<Vec<usize>> {
    let len = n * (n - 1) / 2;
    let mut out = Vec::new();
    fn go(n: usize, len: usize, p: &mut Vec<usize>, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        for l in 1..n {
            if p[l - 1] < p[l] {
                p.swap(l - 1, l);
                word.push(l);
                go(n, len, p, word, out);
                word.pop();
                p.swap(l - 1, l);
            }
        }
    }
    go(n, len, &mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Every diagram: all shuffles of all pairs of reduced words for `w0`.
pub fn all_diagrams(n: usize) -> Vec<DoubleWiringDiagram> {
    let words = reduced_words_w0(n);
    let len = n * (n - 1) / 2;
    let mut out = Vec::new();
    for thin in &words {
        for thick in &words {
            for mask in 0u32..1 << (2 * len) {
                if mask.count_ones() as usize != len {
                    continue;
                }
                let (mut a, mut b) = (thin.iter(), thick.iter());
                let word = (0..2 * len)
                    .map(|pos| {
                        if mask & (1 << pos) != 0 {
                            Letter { color: Color::Thin, level: *a.next().expect("counted") }
                        } else {
                            Letter { color: Color::Thick, level: *b.next().expect("counted") }
                        }
                    })
                    .collect();
                out.push(DoubleWiringDiagram { n, word });
            }
        }
    }
    out.sort();
    out
}

/// Isotopy classes (by chamber collection) and the graph of local moves.
#[derive(Debug, Clone)]
pub struct MoveGraph {
    pub n: usize,
    pub classes: Vec<Vec<ChamberLabel>>,
    /// Lexicographically first word of each class.
    pub representatives: Vec<DoubleWiringDiagram>,
    pub edges: Vec<(usize, usize)>,
    pub relations: BTreeMap<(usize, usize), MoveRelation>,
    pub moves_checked: usize,
}

impl MoveGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.classes.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn class_of(&self, d: &DoubleWiringDiagram) -> Option<usize> {
        self.classes.binary_search(&d.collection()).ok()
    }

    pub fn is_connected(&self) -> bool {
        let m = self.classes.len();
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; m];
        let mut q = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph wiring {\n");
        for (i, r) in self.representatives.iter().enumerate() {
            s.push_str(&format!("  c{i} [label=\"{r}\"];\n"));
        }
        for &(a, b) in &self.edges {
            let rel = &self.relations[&(a, b)];
            s.push_str(&format!("  c{a} -- c{b} [label=\"{} / {}\"];\n", label_text(&rel.y), label_text(&rel.z)));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let opt = |l: &Option<ChamberLabel>| l.as_ref().map(label_text);
        json!({
            "n": self.n,
            "classes": self.representatives.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "degrees": self.degrees(),
            "moves_checked": self.moves_checked,
            "edges": self.edges.iter().map(|e| {
                let r = &self.relations[e];
                json!({
                    "from": e.0, "to": e.1,
                    "y": label_text(&r.y), "z": label_text(&r.z),
                    "a": opt(&r.a), "b": opt(&r.b), "c": opt(&r.c), "d": opt(&r.d),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Enumerates classes, applies every move of every word and verifies each one.
pub fn enumerate_classes(n: usize) -> Result<MoveGraph, WiringError> {
    let diagrams = all_diagrams(n);
    let mut by_class: BTreeMap<Vec<ChamberLabel>, Vec<DoubleWiringDiagram>> = BTreeMap::new();
    for d in diagrams {
        by_class.entry(d.collection()).or_default().push(d);
    }
    let classes: Vec<Vec<ChamberLabel>> = by_class.keys().cloned().collect();
    let representatives: Vec<DoubleWiringDiagram> = by_class.values().map(|v| v[0].clone()).collect();
    let index: HashMap<&Vec<ChamberLabel>, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut ring = MinorRing::new(n);
    let mut relations = BTreeMap::new();
    let mut moves_checked = 0;
    for (u, words) in by_class.values().enumerate() {
        for d in words {
            for mv in d.moves() {
                let rel = verify_move(d, &mv, &mut ring)?;
                moves_checked += 1;
                let v = index[&mv.result.collection()];
                relations.entry((u.min(v), u.max(v))).or_insert(rel);
            }
        }
    }
    let edges = relations.keys().copied().collect();
    Ok(MoveGraph { n, classes, representatives, edges, relations, moves_checked })
}

/// The diagram drawn in the text: `T2 t1 t2 T1 T2 t1`.
pub fn figure_diagram() -> DoubleWiringDiagram {
    DoubleWiringDiagram::parse(3, "T2 t1 t2 T1 T2 t1").expect("valid diagram")
}

pub const HIDDEN: [&str; 2] = [
    "x12*x21*x33 - x12*x23*x31 - x13*x21*x32 + x13*x22*x31",
    "x11*x23*x32 - x12*x23*x31 - x13*x21*x32 + x13*x22*x31",
];

#[derive(Debug, Clone)]
pub struct Gl3Report {
    pub diagram: String,
    pub cluster_labels: Vec<ChamberLabel>,
    pub frozen_labels: Vec<ChamberLabel>,
    pub btilde: Vec<Vec<i64>>,
    pub seeds: usize,
    pub variables: usize,
    /// Each cluster variable as a minor label (`I,J`) or `hidden1`/`hidden2`.
    pub identified: Vec<String>,
    pub unidentified: usize,
    pub all_polynomial: bool,
    pub detected_type: String,
    pub wiring_clusters_embedded: usize,
    pub jacobian_rank: usize,
}

impl Gl3Report {
    pub fn passed(&self) -> bool {
        self.seeds == 50
            && self.variables == 16
            && self.unidentified == 0
            && HIDDEN.len() == self.identified.iter().filter(|s| s.starts_with("hidden")).count()
            && self.all_polynomial
            && self.detected_type == "D4"
            && self.wiring_clusters_embedded == 34
            && self.jacobian_rank == 9
    }

    pub fn to_json(&self) -> Value {
        json!({
            "diagram": self.diagram,
            "cluster": self.cluster_labels.iter().map(label_text).collect::<Vec<_>>(),
            "frozen": self.frozen_labels.iter().map(label_text).collect::<Vec<_>>(),
            "btilde": self.btilde,
            "seeds": self.seeds,
            "cluster_variables": self.variables,
            "identified": self.identified,
            "unidentified": self.unidentified,
            "all_polynomial": self.all_polynomial,
            "type": self.detected_type,
            "wiring_clusters_embedded": self.wiring_clusters_embedded,
            "jacobian_rank": self.jacobian_rank,
            "passed": self.passed(),
        })
    }
}

/// Rank of the Jacobian of the chamber minors of `d` at a random point with
/// entries in `[1, 97]`.
pub fn jacobian_rank(d: &DoubleWiringDiagram, rng_seed: u64) -> usize {
    let n = d.n();
    let mut ring = MinorRing::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let point: Vec<Rational> = (0..n * n).map(|_| Rational::from_integer(rng.gen_range(1..=97).into())).collect();
    let minors: Vec<LaurentPoly> = d.collection().iter().map(|l| ring.minor(l)).collect();
    let jac = RationalMatrix::from_fn(minors.len(), n * n, |r, v| {
        let mut acc = Rational::zero();
        for (m, c) in minors[r].terms() {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut t = Rational::from_integer(c.clone() * e);
            for (u, &eu) in m.0.iter().enumerate() {
                let k = if u == v { eu - 1 } else { eu };
                t *= point[u].pow(k);
            }
            acc += t;
        }
        acc
    });
    jac.rank()
}

/// Builds the seed of `d` (every bounded chamber must admit a move), reads
/// off the exchange matrix from the move relations, explores, and
/// identifies every cluster variable.
pub fn gl3_cell(d: &DoubleWiringDiagram, graph: &MoveGraph, seed_budget: usize, rng_seed: u64) -> Result<Gl3Report, WiringError> {
    let mut ring = MinorRing::new(3);
    let chambers = d.chambers();
    let cluster_labels: Vec<ChamberLabel> = chambers.iter().filter(|c| c.bounded).map(|c| c.label.clone()).collect();
    let mut frozen_labels: Vec<ChamberLabel> = chambers.iter().filter(|c| !c.bounded).map(|c| c.label.clone()).collect();
    frozen_labels.sort();
    let rows: Vec<ChamberLabel> = cluster_labels.iter().chain(&frozen_labels).cloned().collect();
    let n = cluster_labels.len();
    let u = graph.class_of(d).ok_or(WiringError::NoMoveAvailable(0))?;
    let mut columns: Vec<Vec<i64>> = Vec::new();
    for y in &cluster_labels {
        let rel = graph
            .relations
            .iter()
            .find(|(&(a, b), r)| (a == u || b == u) && (r.y == *y || r.z == *y))
            .map(|(_, r)| r.clone())
            .ok_or(WiringError::NoMoveAvailable(0))?;
        let mut col = vec![0i64; rows.len()];
        for (l, sign) in [(&rel.a, 1), (&rel.c, 1), (&rel.b, -1), (&rel.d, -1)] {
            if let Some(l) = l {
                let r = rows.iter().position(|x| x == l).expect("neighbour chambers belong to the diagram");
                col[r] += sign;
            }
        }
        columns.push(col);
    }
    // Column signs are fixed by skew-symmetry of the principal part.
    let mut sign: Vec<Option<i64>> = vec![None; n];
    sign[0] = Some(1);
    let mut q = VecDeque::from([0]);
    while let Some(j) = q.pop_front() {
        for i in 0..n {
            if columns[j][i] == 0 {
                continue;
            }
            let want = -columns[j][i] * sign[j].expect("set") * columns[i][j].signum();
            if columns[i][j] == 0 {
                return Err(WiringError::InconsistentSigns);
            }
            match sign[i] {
                None => {
                    sign[i] = Some(want.signum());
                    q.push_back(i);
                }
                Some(s) if s != want.signum() => return Err(WiringError::InconsistentSigns),
                Some(_) => {}
            }
        }
    }
    let btilde: Vec<Vec<i64>> = (0..rows.len())
        .map(|r| (0..n).map(|j| columns[j][r] * sign[j].unwrap_or(1)).collect())
        .collect();
    let principal: Vec<Vec<i64>> = btilde[..n].to_vec();
    if (0..n).any(|i| (0..n).any(|j| principal[i][j] != -principal[j][i])) {
        return Err(WiringError::InconsistentSigns);
    }
    let values: Vec<LaurentPoly> = rows.iter().map(|l| ring.minor(l)).collect();
    let seed = Seed::new(ExchangeMatrix::new(btilde.clone())?, values)?;
    let eg = explore(&seed, seed_budget)?;

    let mut known: HashMap<LaurentPoly, String> = HashMap::new();
    for l in ring.all_labels() {
        known.insert(ring.minor(&l), label_text(&l));
    }
    for (i, h) in HIDDEN.iter().enumerate() {
        known.insert(LaurentPoly::parse(h, ring.vars()).expect("valid polynomial"), format!("hidden{}", i + 1));
    }
    let mut identified: Vec<String> = eg.variables.iter().filter_map(|v| known.get(v).cloned()).collect();
    identified.sort();
    let unidentified = eg.variables.len() - identified.len();
    let all_polynomial = eg.variables.iter().all(LaurentPoly::is_polynomial);
    let detected_type = match detect_finite_type(&principal, 10_000)? {
        FiniteTypeResult::Finite(t) => t.to_string(),
        FiniteTypeResult::Infinite { .. } => "infinite".into(),
    };
    let key = |vals: &mut dyn Iterator<Item = &LaurentPoly>| -> BTreeSet<String> { vals.map(|v| v.to_string()).collect() };
    let seed_clusters: BTreeSet<BTreeSet<String>> = eg.seeds.iter().map(|s| key(&mut s.cluster().iter())).collect();
    let mut embedded = 0;
    for class in &graph.classes {
        let vals: Vec<LaurentPoly> = class
            .iter()
            .filter(|l| !frozen_labels.contains(l))
            .map(|l| ring.minor(l))
            .collect();
        if seed_clusters.contains(&key(&mut vals.iter())) {
            embedded += 1;
        }
    }
    Ok(Gl3Report {
        diagram: d.word_text(),
        cluster_labels,
        frozen_labels,
        btilde,
        seeds: eg.seeds.len(),
        variables: eg.variables.len(),
        identified,
        unidentified,
        all_polynomial,
        detected_type,
        wiring_clusters_embedded: embedded,
        jacobian_rank: jacobian_rank(d, rng_seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::DEFAULT_SEED_BUDGET;

    fn lab(a: &[usize], b: &[usize]) -> ChamberLabel {
        (a.to_vec(), b.to_vec())
    }

    #[test]
    fn figure_chambers() {
        let d = figure_diagram();
        let ch = d.chambers();
        assert_eq!(ch.len(), 9);
        let bottom: Vec<String> = ch.iter().filter(|c| c.level == 1).map(|c| label_text(&c.label)).collect();
        assert_eq!(bottom, vec!["3,1", "3,2", "1,2", "1,3"]);
        let middle: Vec<String> = ch.iter().filter(|c| c.level == 2).map(|c| label_text(&c.label)).collect();
        assert_eq!(middle, vec!["23,12", "13,12", "13,23", "12,23"]);
        assert_eq!(ch.iter().filter(|c| c.bounded).count(), 4);
        let mut frozen: Vec<ChamberLabel> = ch.iter().filter(|c| !c.bounded).map(|c| c.label.clone()).collect();
        frozen.sort();
        let mut want = vec![lab(&[1], &[3]), lab(&[1, 2], &[2, 3]), lab(&[3], &[1]), lab(&[2, 3], &[1, 2]), lab(&[1, 2, 3], &[1, 2, 3])];
        want.sort();
        assert_eq!(frozen, want);
        assert!(DoubleWiringDiagram::parse(3, "T2 t1 t1 T1 T2 t1").is_err());
        assert!(DoubleWiringDiagram::parse(3, "Q1").is_err());
    }

    #[test]
    fn isotopic_figure_has_same_collection() {
        let a = figure_diagram();
        let b = DoubleWiringDiagram::parse(3, "t1 T2 t2 T1 t1 T2").unwrap();
        assert_eq!(a.collection(), b.collection());
    }

    #[test]
    fn lewis_carroll() {
        let d = DoubleWiringDiagram::parse(2, "t1 T1").unwrap();
        let mv = d.moves();
        assert_eq!(mv.len(), 1);
        let mut ring = MinorRing::new(2);
        let rel = verify_move(&d, &mv[0], &mut ring).unwrap();
        assert_eq!((rel.y.clone(), rel.z.clone()), (lab(&[2], &[2]), lab(&[1], &[1])));
        let g = enumerate_classes(2).unwrap();
        assert_eq!((g.classes.len(), g.edges.len()), (2, 1));
        let back = mv[0].result.moves();
        assert_eq!(back[0].result.collection(), d.collection());
    }

    #[test]
    fn thirty_four_classes() {
        let g = enumerate_classes(3).unwrap();
        assert_eq!(g.classes.len(), 34);
        let deg = g.degrees();
        assert_eq!(deg.iter().filter(|&&x| x == 4).count(), 18);
        assert_eq!(deg.iter().filter(|&&x| x == 3).count(), 16);
        assert!(g.is_connected());
        let fig = g.class_of(&figure_diagram()).unwrap();
        assert_eq!(deg[fig], 4);
        let lexmin = DoubleWiringDiagram::parse(3, "T1 T2 T1 t1 t2 t1").unwrap();
        assert_eq!(deg[g.class_of(&lexmin).unwrap()], 3);
        assert!(g.to_dot().starts_with("graph wiring {"));
    }

    #[test]
    fn jacobian_full_rank() {
        assert_eq!(jacobian_rank(&figure_diagram(), 11), 9);
    }

    #[test]
    fn gl3() {
        let g = enumerate_classes(3).unwrap();
        let r = gl3_cell(&figure_diagram(), &g, DEFAULT_SEED_BUDGET, 5).unwrap();
        assert_eq!(r.seeds, 50);
        assert_eq!(r.variables, 16);
        assert_eq!(r.unidentified, 0);
        assert!(r.identified.contains(&"hidden1".to_string()) && r.identified.contains(&"hidden2".to_string()));
        assert_eq!(r.detected_type, "D4");
        assert!(r.all_polynomial);
        assert_eq!(r.wiring_clusters_embedded, 34);
        assert!(r.passed());
        let frozen_text: BTreeSet<String> = r.frozen_labels.iter().map(label_text).collect();
        assert!(r.identified.iter().all(|s| !frozen_text.contains(s)));
        assert_eq!(MinorRing::new(3).minor(&lab(&[1, 2, 3], &[1, 2, 3])).len(), 6);
    }
}
