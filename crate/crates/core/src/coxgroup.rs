//! The Weyl group as a permutation group on the root indices.
//!
//! Elements are stored once, in breadth-first order from the identity, so
//! element indices are sorted by length. Products are taken as maps:
//! `(u v)(beta) = u(v(beta))`; the weak order is the right weak order.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rootsys::RootSystem;

pub const DEFAULT_GROUP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group has more than {0} elements")]
    BudgetExceeded(usize),
    #[error("weak order lattice check failed: {0}")]
    LatticeCheckFailed(String),
    #[error("element is not a Coxeter element")]
    NotCoxeterElement,
}

#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    n: usize,
    nroots: usize,
    npos: usize,
    perms: Vec<u16>,
    lengths: Vec<usize>,
    index: HashMap<Vec<u16>, usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    reflections: Vec<usize>,
    w0: usize,
    neg: Vec<usize>,
}

/// Summary of the weak order.
#[derive(Debug, Clone)]
pub struct WeakOrder {
    /// `(lower, upper)` element indices with `upper = lower * s_i`.
    pub covers: Vec<(usize, usize)>,
    pub exhaustive: bool,
    pub pairs_checked: usize,
}

#[derive(Debug, Clone)]
pub struct AbsoluteInterval {
    pub coxeter_element: usize,
    /// Elements of `[1, c]` with their reflection length.
    pub elements: Vec<(usize, usize)>,
    /// `(lower, upper)`: upper = lower * t with reflection length increasing by one.
    pub covers: Vec<(usize, usize)>,
}

impl AbsoluteInterval {
    pub fn rank_counts(&self) -> Vec<usize> {
        let top = self.elements.iter().map(|e| e.1).max().unwrap_or(0);
        let mut v = vec![0; top + 1];
        for &(_, l) in &self.elements {
            v[l] += 1;
        }
        v
    }
}

impl CoxeterGroup {
    pub fn build(rs: &RootSystem, budget: usize) -> Result<Self, GroupError> {
        let n = rs.rank();
        let nroots = rs.num_roots();
        assert!(nroots <= u16::MAX as usize);
        let gens: Vec<Vec<u16>> =
            (0..n).map(|i| rs.simple_permutation(i).into_iter().map(|k| k as u16).collect()).collect();
        let ident: Vec<u16> = (0..nroots as u16).collect();
        let mut g = CoxeterGroup {
            n,
            nroots,
            npos: rs.num_positive(),
            perms: Vec::new(),
            lengths: Vec::new(),
            index: HashMap::new(),
            right: Vec::new(),
            left: Vec::new(),
            reflections: Vec::new(),
            w0: 0,
            neg: (0..nroots).map(|k| rs.negate(k)).collect(),
        };
        g.insert(ident);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            let mut row = Vec::with_capacity(n);
            for s in &gens {
                let p: Vec<u16> = {
                    let pw = g.perm(w);
                    s.iter().map(|&k| pw[k as usize]).collect()
                };
                let idx = match g.index.get(&p) {
                    Some(&i) => i,
                    None => {
                        if g.lengths.len() >= budget {
                            return Err(GroupError::BudgetExceeded(budget));
                        }
                        let i = g.insert(p);
                        queue.push_back(i);
                        i
                    }
                };
                row.push(idx);
            }
            g.right.push(row);
        }
        let size = g.len();
        g.left = (0..size)
            .map(|w| {
                gens.iter()
                    .map(|s| {
                        let p: Vec<u16> = g.perm(w).iter().map(|&k| s[k as usize]).collect();
                        g.index[&p]
                    })
                    .collect()
            })
            .collect();
        g.reflections = (0..rs.num_positive())
            .map(|k| {
                let p: Vec<u16> = rs.reflection_permutation(k).into_iter().map(|x| x as u16).collect();
                g.index[&p]
            })
            .collect();
        g.w0 = (0..size).max_by_key(|&w| g.lengths[w]).expect("nonempty group");
        Ok(g)
    }

    fn insert(&mut self, p: Vec<u16>) -> usize {
        let len = (0..self.npos).filter(|&k| (p[k] as usize) >= self.npos).count();
        let i = self.lengths.len();
        self.perms.extend_from_slice(&p);
        self.lengths.push(len);
        self.index.insert(p, i);
        i
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generator(&self, i: usize) -> usize {
        self.right[0][i]
    }

    pub fn perm(&self, w: usize) -> &[u16] {
        &self.perms[w * self.nroots..(w + 1) * self.nroots]
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn w0(&self) -> usize {
        self.w0
    }

    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    /// `w * s_i`.
    pub fn mul_gen(&self, w: usize, i: usize) -> usize {
        self.right[w][i]
    }

    /// `s_i * w`.
    pub fn gen_mul(&self, i: usize, w: usize) -> usize {
        self.left[w][i]
    }

    pub fn element_of(&self, perm: &[u16]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    pub fn mul(&self, u: usize, v: usize) -> usize {
        let pu = self.perm(u);
        let p: Vec<u16> = self.perm(v).iter().map(|&k| pu[k as usize]).collect();
        self.index[&p]
    }

    pub fn inverse(&self, w: usize) -> usize {
        let mut p = vec![0u16; self.nroots];
        for (k, &img) in self.perm(w).iter().enumerate() {
            p[img as usize] = k as u16;
        }
        self.index[&p]
    }

    /// Product of generators, left to right.
    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |w, &i| self.mul_gen(w, i))
    }

    pub fn is_right_descent(&self, w: usize, i: usize) -> bool {
        (self.perm(w)[i] as usize) >= self.npos
    }

    pub fn is_left_descent(&self, w: usize, i: usize) -> bool {
        self.length(self.gen_mul(i, w)) < self.length(w)
    }

    /// Whether `w` acts on the roots as minus the identity.
    pub fn is_minus_identity(&self, w: usize) -> bool {
        self.perm(w).iter().enumerate().all(|(k, &img)| img as usize == self.neg[k])
    }

    /// Matrix of `w` in simple-root coordinates (column `j` is `w(alpha_j)`).
    pub fn matrix(&self, rs: &RootSystem, w: usize) -> Vec<Vec<i64>> {
        let n = self.n;
        let p = self.perm(w);
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = rs.root(p[j] as usize).coords[i];
            }
        }
        m
    }

    /// Lexicographically smallest reduced word (0-based letters).
    pub fn lex_min_reduced_word(&self, w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = w;
        while self.length(cur) > 0 {
            let i = (0..self.n).find(|&i| self.is_left_descent(cur, i)).expect("nonidentity has a descent");
            out.push(i);
            cur = self.gen_mul(i, cur);
        }
        out
    }

    pub fn word_label(&self, w: usize) -> String {
        let word = self.lex_min_reduced_word(w);
        if word.is_empty() {
            return "e".into();
        }
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }

    /// Whether `word` is a reduced word for `w`.
    pub fn is_reduced_word_for(&self, word: &[usize], w: usize) -> bool {
        word.len() == self.length(w) && self.from_word(word) == w
    }

    /// Number of reduced words, by `R(v) = sum of R(v s_i)` over right descents.
    pub fn count_reduced_words(&self, w: usize) -> BigUint {
        let mut memo: HashMap<usize, BigUint> = HashMap::new();
        memo.insert(0, BigUint::one());
        let mut stack = vec![w];
        while let Some(&v) = stack.last() {
            if memo.contains_key(&v) {
                stack.pop();
                continue;
            }
            let below: Vec<usize> =
                (0..self.n).filter(|&i| self.is_right_descent(v, i)).map(|i| self.mul_gen(v, i)).collect();
            let missing: Vec<usize> = below.iter().copied().filter(|u| !memo.contains_key(u)).collect();
            if missing.is_empty() {
                let total = below.iter().fold(BigUint::zero(), |acc, u| acc + &memo[u]);
                memo.insert(v, total);
                stack.pop();
            } else {
                stack.extend(missing);
            }
        }
        memo.remove(&w).expect("computed")
    }

    /// Bitset of the inversion set `N(w) = {beta > 0 : w^{-1} beta < 0}`.
    fn inversion_bits(&self, w: usize) -> Vec<u64> {
        let winv = self.inverse(w);
        let p = self.perm(winv);
        let mut bits = vec![0u64; self.npos.div_ceil(64).max(1)];
        for (k, &img) in p.iter().take(self.npos).enumerate() {
            if img as usize >= self.npos {
                bits[k / 64] |= 1 << (k % 64);
            }
        }
        bits
    }

    pub fn weak_covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for w in 0..self.len() {
            for i in 0..self.n {
                let v = self.mul_gen(w, i);
                if self.length(v) == self.length(w) + 1 {
                    out.push((w, v));
                }
            }
        }
        out
    }

    /// Meet in the weak order: the unique maximal element of the common
    /// lower set, found by climbing covers from the identity inside it.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize, GroupError> {
        let na = self.inversion_bits(a);
        let nb = self.inversion_bits(b);
        let common: Vec<u64> = na.iter().zip(&nb).map(|(x, y)| x & y).collect();
        let inside = |w: usize| self.inversion_bits(w).iter().zip(&common).all(|(x, c)| x & !c == 0);
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut maximal = Vec::new();
        while let Some(w) = queue.pop_front() {
            let mut has_up = false;
            for i in 0..self.n {
                let v = self.mul_gen(w, i);
                if self.length(v) == self.length(w) + 1 && inside(v) {
                    has_up = true;
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            if !has_up {
                maximal.push(w);
            }
        }
        match maximal.as_slice() {
            [m] => Ok(*m),
            _ => Err(GroupError::LatticeCheckFailed(format!("{} maximal lower bounds", maximal.len()))),
        }
    }

    /// Builds the weak order and verifies that all meets exist (hence, with
    /// the top element `w0`, that it is a lattice). Exhaustive up to
    /// `exhaustive_limit` elements, otherwise on `samples` random pairs.
    pub fn weak_order<R: Rng>(&self, exhaustive_limit: usize, samples: usize, rng: &mut R) -> Result<WeakOrder, GroupError> {
        let covers = self.weak_covers();
        let size = self.len();
        if self.length(self.w0) != self.npos || (0..size).any(|w| w != self.w0 && self.length(w) == self.npos) {
            return Err(GroupError::LatticeCheckFailed("no unique maximum".into()));
        }
        if size <= exhaustive_limit {
            let words = size.div_ceil(64);
            let mut down = vec![vec![0u64; words]; size];
            let mut lower: Vec<Vec<usize>> = vec![Vec::new(); size];
            for &(u, v) in &covers {
                lower[v].push(u);
            }
            for w in 0..size {
                let mut d = vec![0u64; words];
                d[w / 64] |= 1 << (w % 64);
                for &u in &lower[w] {
                    for (x, y) in d.iter_mut().zip(&down[u]) {
                        *x |= y;
                    }
                }
                down[w] = d;
            }
            let mut pairs = 0;
            for a in 0..size {
                for b in a + 1..size {
                    let common: Vec<u64> = down[a].iter().zip(&down[b]).map(|(x, y)| x & y).collect();
                    let top = common
                        .iter()
                        .enumerate()
                        .rev()
                        .find(|(_, &x)| x != 0)
                        .map(|(k, &x)| k * 64 + 63 - x.leading_zeros() as usize)
                        .ok_or_else(|| GroupError::LatticeCheckFailed("empty lower set".into()))?;
                    if down[top] != common {
                        return Err(GroupError::LatticeCheckFailed(format!("elements {a} and {b} have no meet")));
                    }
                    pairs += 1;
                }
            }
            return Ok(WeakOrder { covers, exhaustive: true, pairs_checked: pairs });
        }
        let elems: Vec<usize> = (0..size).collect();
        for _ in 0..samples {
            let abc: Vec<usize> = elems.choose_multiple(rng, 3).copied().collect();
            let (a, b, c) = (abc[0], abc[1], abc[2]);
            let ab = self.meet(a, b)?;
            if ab != self.meet(b, a)? {
                return Err(GroupError::LatticeCheckFailed("meet not commutative".into()));
            }
            if self.meet(ab, c)? != self.meet(a, self.meet(b, c)?)? {
                return Err(GroupError::LatticeCheckFailed("meet not associative".into()));
            }
        }
        Ok(WeakOrder { covers, exhaustive: false, pairs_checked: samples })
    }

    /// Reflection length of every element (breadth-first over all reflections).
    pub fn absolute_lengths(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for &t in &self.reflections {
                let v = self.mul(w, t);
                if dist[v] == usize::MAX {
                    dist[v] = dist[w] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Product of the simple reflections in the given order.
    pub fn coxeter_element(&self, order: &[usize]) -> usize {
        self.from_word(order)
    }

    pub fn is_coxeter_element(&self, c: usize) -> bool {
        let word = self.lex_min_reduced_word(c);
        let mut seen = vec![false; self.n];
        word.iter().for_each(|&i| seen[i] = true);
        word.len() == self.n && seen.iter().all(|&s| s)
    }

    pub fn absolute_interval(&self, c: usize) -> Result<AbsoluteInterval, GroupError> {
        if !self.is_coxeter_element(c) {
            return Err(GroupError::NotCoxeterElement);
        }
        let lens = self.absolute_lengths();
        let lc = lens[c];
        let members: Vec<usize> =
            (0..self.len()).filter(|&w| lens[w] + lens[self.mul(self.inverse(w), c)] == lc).collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut covers = Vec::new();
        for &w in &members {
            for &t in &self.reflections {
                let v = self.mul(w, t);
                if pos.contains_key(&v) && lens[v] == lens[w] + 1 {
                    covers.push((w, v));
                }
            }
        }
        Ok(AbsoluteInterval { coxeter_element: c, elements: members.iter().map(|&w| (w, lens[w])).collect(), covers })
    }

    /// DOT rendering of a Hasse diagram with reduced-word labels.
    pub fn hasse_dot(&self, name: &str, nodes: &[usize], covers: &[(usize, usize)]) -> String {
        let mut s = format!("digraph {name} {{\n  rankdir=BT;\n");
        for &w in nodes {
            let _ = writeln!(s, "  n{w} [label=\"{}\"];", self.word_label(w));
        }
        for &(u, v) in covers {
            let _ = writeln!(s, "  n{u} -> n{v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Number of reduced words of the longest element of `A_n`:
/// `N! / prod_{k=1}^{n} (2k-1)^{n+1-k}` with `N = n(n+1)/2`.
pub fn stanley_count_type_a(n: u32) -> BigUint {
    let big_n = n * (n + 1) / 2;
    let num: BigUint = (1..=big_n).map(BigUint::from).product();
    let den: BigUint = (1..=n).map(|k| BigUint::from(2 * k - 1).pow(n + 1 - k)).product();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group(spec: &str) -> (RootSystem, CoxeterGroup) {
        let rs = RootSystem::generate(&CartanMatrix::parse(spec).unwrap()).unwrap();
        let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET).unwrap();
        (rs, g)
    }

    #[test]
    fn orders_and_reflections() {
        let (_, a3) = group("A3");
        assert_eq!((a3.len(), a3.reflections().len()), (24, 6));
        let (_, g2) = group("G2");
        assert_eq!((g2.len(), g2.reflections().len()), (12, 6));
        assert_eq!(a3.length(a3.w0()), 6);
        assert!(a3.is_reduced_word_for(&[0, 1, 0, 2, 1, 0], a3.w0()));
    }

    #[test]
    fn budget_is_enforced() {
        let rs = RootSystem::generate(&CartanMatrix::parse("A3").unwrap()).unwrap();
        assert_eq!(CoxeterGroup::build(&rs, 10).unwrap_err(), GroupError::BudgetExceeded(10));
    }

    #[test]
    fn reduced_word_counts() {
        let (_, a3) = group("A3");
        assert_eq!(a3.count_reduced_words(a3.w0()), BigUint::from(16u32));
        let w = a3.from_word(&[1, 0, 2, 1]);
        assert!(a3.is_reduced_word_for(&[1, 2, 0, 1], w));
        assert_eq!(a3.count_reduced_words(w), BigUint::from(2u32));
        for n in 1..=4u32 {
            let (_, g) = group(&format!("A{n}"));
            assert_eq!(g.count_reduced_words(g.w0()), stanley_count_type_a(n));
        }
        assert_eq!(stanley_count_type_a(4), BigUint::from(768u32));
    }

    #[test]
    fn weak_order_small_types() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (_, a2) = group("A2");
        let wo = a2.weak_order(1000, 0, &mut rng).unwrap();
        assert_eq!(wo.covers.len(), 6);
        let atoms = wo.covers.iter().filter(|c| c.0 == 0).count();
        assert_eq!(atoms, 2);
        let (_, a3) = group("A3");
        let wo = a3.weak_order(1000, 0, &mut rng).unwrap();
        assert!(wo.exhaustive);
        assert_eq!(wo.covers.len(), 36);
        let (_, f4) = group("F4");
        let wo = f4.weak_order(1000, 30, &mut rng).unwrap();
        assert!(!wo.exhaustive);
    }

    #[test]
    fn lengths_and_conjugation() {
        let (_, b3) = group("B3");
        for &(u, v) in &b3.weak_covers() {
            assert_eq!(b3.length(v), b3.length(u) + 1);
        }
        let refl: std::collections::HashSet<usize> = b3.reflections().iter().copied().collect();
        for w in 0..b3.len() {
            for &t in b3.reflections() {
                assert!(refl.contains(&b3.mul(b3.mul(w, t), b3.inverse(w))));
            }
        }
    }

    #[test]
    fn longest_element_sign() {
        for (spec, minus) in [("A2", false), ("A3", false), ("B2", true), ("B3", true), ("D4", true), ("D5", false), ("G2", true), ("F4", true), ("E6", false)] {
            let (_, g) = group(spec);
            assert_eq!(g.is_minus_identity(g.w0()), minus, "{spec}");
        }
    }

    #[test]
    fn absolute_intervals() {
        let (_, a3) = group("A3");
        let c = a3.coxeter_element(&[0, 2, 1]);
        let iv = a3.absolute_interval(c).unwrap();
        assert_eq!(iv.elements.len(), 14);
        assert_eq!(iv.rank_counts(), vec![1, 6, 6, 1]);
        let (_, b3) = group("B3");
        let iv = b3.absolute_interval(b3.coxeter_element(&[0, 2, 1])).unwrap();
        assert_eq!(iv.rank_counts(), vec![1, 9, 9, 1]);
        assert_eq!(a3.absolute_interval(a3.w0()).unwrap_err(), GroupError::NotCoxeterElement);
    }

    #[test]
    fn interval_size_independent_of_coxeter_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (spec, expected) in [("A4", 42), ("B4", 70), ("D4", 50), ("F4", 105), ("G2", 8)] {
            let (rs, g) = group(spec);
            for _ in 0..3 {
                let mut order: Vec<usize> = (0..rs.rank()).collect();
                order.shuffle(&mut rng);
                let iv = g.absolute_interval(g.coxeter_element(&order)).unwrap();
                assert_eq!(iv.elements.len(), expected, "{spec}");
            }
        }
    }

    #[test]
    fn dot_labels() {
        let (_, a2) = group("A2");
        let dot = a2.hasse_dot("weak", &(0..a2.len()).collect::<Vec<_>>(), &a2.weak_covers());
        assert!(dot.contains("label=\"e\""));
        assert!(dot.contains("label=\"s1s2s1\""));
    }
}
