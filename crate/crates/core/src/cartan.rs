//! Cartan matrices of finite type: validation, symmetrizers, Dynkin
//! classification, bipartition and the skew-symmetrizable matrix B(A).
//!
//! Convention: `s_i(alpha_j) = alpha_j - a_ij alpha_i`, with symmetrizer
//! `d_i a_ij = d_j a_ji`.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("not a Cartan matrix: {0}")]
    NotCartanShape(String),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("matrix is not of finite type")]
    NotFiniteType,
    #[error("unrecognized Dynkin diagram")]
    UnrecognizedDiagram,
    #[error("diagram contains an odd cycle")]
    OddCycle,
    #[error("cannot parse Cartan specification {0:?}: {1}")]
    Parse(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    /// Whether `(self, rank)` is a diagram of the classification list.
    pub fn admits_rank(self, n: usize) -> bool {
        match self {
            Family::A => n >= 1,
            Family::B => n >= 2,
            Family::C => n >= 3,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
            Family::F => n == 4,
            Family::G => n == 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// Irreducible factors, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DynkinType(pub Vec<Component>);

impl DynkinType {
    pub fn is_irreducible(&self) -> bool {
        self.0.len() == 1
    }

    pub fn single(family: Family, rank: usize) -> Self {
        DynkinType(vec![Component { family, rank }])
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Symmetrizer(pub Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCheck {
    pub finite: bool,
    pub symmetrizer: Option<Symmetrizer>,
}

/// A validated Cartan matrix of finite type together with its minimal symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    a: Vec<Vec<i64>>,
    d: Symmetrizer,
}

fn check_shape(m: &[Vec<i64>]) -> Result<(), CartanError> {
    let n = m.len();
    if n == 0 {
        return Err(CartanError::NotCartanShape("empty matrix".into()));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(CartanError::NotCartanShape("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(CartanError::NotCartanShape(format!("diagonal entry {} is {}", i + 1, row[i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if row[j] > 0 {
                return Err(CartanError::NotCartanShape(format!("positive off-diagonal entry at ({},{})", i + 1, j + 1)));
            }
            if (row[j] == 0) != (m[j][i] == 0) {
                return Err(CartanError::NotCartanShape(format!("zero pattern not symmetric at ({},{})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn components_of(m: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if j != i && m[i][j] != 0 && !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn symmetrize(m: &[Vec<i64>]) -> Result<Symmetrizer, CartanError> {
    let n = m.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for comp in components_of(m) {
        d[comp[0]] = Some(Ratio::from_integer(1));
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].unwrap();
            for j in 0..n {
                if i == j || m[i][j] == 0 {
                    continue;
                }
                let dj = di * Ratio::new(m[i][j], m[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(x) if x != dj => return Err(CartanError::NotSymmetrizable),
                    Some(_) => {}
                }
            }
        }
        let lcm = comp.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
        let ints: Vec<i64> = comp.iter().map(|&i| (d[i].unwrap() * lcm).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        for (&i, v) in comp.iter().zip(ints) {
            d[i] = Some(Ratio::from_integer(v / g));
        }
    }
    Ok(Symmetrizer(d.into_iter().map(|x| x.unwrap().to_integer()).collect()))
}

/// Checks the Cartan shape, computes the minimal symmetrizer and tests
/// positive definiteness of `D A` by its leading principal minors.
pub fn validate_finite_type(m: &[Vec<i64>]) -> Result<FiniteCheck, CartanError> {
    check_shape(m)?;
    let d = symmetrize(m)?;
    let n = m.len();
    let sym = IntMatrix::from_fn(n, n, |i, j| (d.0[i] * m[i][j]).into());
    let finite = (1..=n).all(|k| {
        let minor = IntMatrix::from_fn(k, k, |i, j| sym[(i, j)].clone());
        minor.determinant().map(|v| v > 0.into()).unwrap_or(false)
    });
    Ok(FiniteCheck { finite, symmetrizer: Some(d) })
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn link(a: &mut [Vec<i64>], i: usize, j: usize) {
    a[i][j] = -1;
    a[j][i] = -1;
}

/// The built-in Cartan matrix of an irreducible type (1-based node
/// numbering as in the standard Dynkin pictures, stored 0-based).
pub fn standard_matrix(family: Family, n: usize) -> Result<Vec<Vec<i64>>, CartanError> {
    if !family.admits_rank(n) {
        return Err(CartanError::Parse(format!("{family:?}{n}"), "rank not allowed for this family".into()));
    }
    let mut a = chain(n);
    match family {
        Family::A => {}
        Family::B => {
            // alpha_1 short
            a[0][1] = -2;
            a[1][0] = -1;
        }
        Family::C => {
            // alpha_1 long
            a[0][1] = -1;
            a[1][0] = -2;
        }
        Family::D => {
            a = vec![vec![0; n]; n];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            link(&mut a, 0, 2);
            link(&mut a, 1, 2);
            for i in 2..n - 1 {
                link(&mut a, i, i + 1);
            }
        }
        Family::E => {
            a = vec![vec![0; n]; n];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for i in 2..n - 1 {
                link(&mut a, i, i + 1);
            }
        }
        Family::F => {
            a[1][2] = -2;
        }
        Family::G => {
            a[0][1] = -3;
        }
    }
    Ok(a)
}

impl CartanMatrix {
    pub fn new(m: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let check = validate_finite_type(&m)?;
        if !check.finite {
            return Err(CartanError::NotFiniteType);
        }
        Ok(CartanMatrix { a: m, d: check.symmetrizer.expect("symmetrizer computed") })
    }

    pub fn of_type(family: Family, n: usize) -> Result<Self, CartanError> {
        Self::new(standard_matrix(family, n)?)
    }

    /// Block-diagonal matrix of a list of components.
    pub fn of_dynkin(t: &DynkinType) -> Result<Self, CartanError> {
        let total: usize = t.0.iter().map(|c| c.rank).sum();
        let mut a = vec![vec![0; total]; total];
        let mut off = 0;
        for c in &t.0 {
            let b = standard_matrix(c.family, c.rank)?;
            for i in 0..c.rank {
                for j in 0..c.rank {
                    a[off + i][off + j] = b[i][j];
                }
            }
            off += c.rank;
        }
        Self::new(a)
    }

    /// Parses `type:A3`, `A3`, `type:A1xA1` or `matrix:[[2,-1],[-1,2]]`.
    pub fn parse(spec: &str) -> Result<Self, CartanError> {
        let s = spec.trim();
        let err = |msg: &str| CartanError::Parse(spec.to_string(), msg.to_string());
        if let Some(body) = s.strip_prefix("matrix:") {
            let m: Vec<Vec<i64>> = serde_json::from_str(body).map_err(|e| err(&e.to_string()))?;
            return Self::new(m);
        }
        let body = s.strip_prefix("type:").unwrap_or(s);
        let mut comps = Vec::new();
        for part in body.split(['x', '+', '*']) {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = chars.next().and_then(Family::from_char).ok_or_else(|| err("unknown family letter"))?;
            let rank: usize = chars.as_str().parse().map_err(|_| err("missing or invalid rank"))?;
            if !fam.admits_rank(rank) {
                return Err(err("rank not allowed for this family"));
            }
            comps.push(Component { family: fam, rank });
        }
        Self::of_dynkin(&DynkinType(comps))
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizer(&self) -> &Symmetrizer {
        &self.d
    }

    /// Whether nodes `i != j` are joined in the Dynkin diagram.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.a[i][j] != 0
    }

    /// Connected components as sorted index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(&self.a)
    }

    /// The symmetrized form `<alpha_i, alpha_j> = d_i a_ij`.
    pub fn form(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| self.d.0[i] * self.a[i][j]).collect()).collect()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let n = self.rank();
        IntMatrix::from_fn(n, n, |i, j| self.a[i][j].into())
    }

    /// Simultaneous row/column permutation: `out[i][j] = a[p[i]][p[j]]`.
    pub fn permuted(&self, p: &[usize]) -> Result<Self, CartanError> {
        let n = self.rank();
        Self::new((0..n).map(|i| (0..n).map(|j| self.a[p[i]][p[j]]).collect()).collect())
    }

    pub fn classify(&self) -> Result<DynkinType, CartanError> {
        let mut comps = Vec::new();
        for comp in self.components() {
            comps.push(self.classify_component(&comp)?);
        }
        comps.sort();
        Ok(DynkinType(comps))
    }

    fn classify_component(&self, comp: &[usize]) -> Result<Component, CartanError> {
        let n = comp.len();
        let edges: Vec<(usize, usize, i64)> = comp
            .iter()
            .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i < j && self.a[i][j] != 0)
            .map(|(i, j)| (i, j, self.a[i][j] * self.a[j][i]))
            .collect();
        if edges.len() + 1 != n {
            return Err(CartanError::UnrecognizedDiagram);
        }
        let degree = |v: usize| comp.iter().filter(|&&u| self.adjacent(u, v)).count();
        let comp_of = |family| Ok(Component { family, rank: n });
        if n == 1 {
            return comp_of(Family::A);
        }
        let multiple: Vec<_> = edges.iter().filter(|e| e.2 > 1).collect();
        match multiple.as_slice() {
            [] => {}
            [&(i, j, 3)] if n == 2 => {
                let _ = (i, j);
                return comp_of(Family::G);
            }
            [&(i, j, 2)] => {
                if n == 2 {
                    return comp_of(Family::B);
                }
                let (di, dj) = (degree(i), degree(j));
                if n == 4 && di == 2 && dj == 2 {
                    return comp_of(Family::F);
                }
                if comp.iter().any(|&v| degree(v) > 2) {
                    return Err(CartanError::UnrecognizedDiagram);
                }
                let (leaf, other) = match (di, dj) {
                    (1, _) => (i, j),
                    (_, 1) => (j, i),
                    _ => return Err(CartanError::UnrecognizedDiagram),
                };
                return comp_of(if self.d.0[leaf] < self.d.0[other] { Family::B } else { Family::C });
            }
            _ => return Err(CartanError::UnrecognizedDiagram),
        }
        let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) > 2).collect();
        match branch.as_slice() {
            [] => comp_of(Family::A),
            [b] if degree(*b) == 3 => {
                let mut arms: Vec<usize> = comp
                    .iter()
                    .copied()
                    .filter(|&u| self.adjacent(u, *b))
                    .map(|start| {
                        let (mut prev, mut cur, mut len) = (*b, start, 1);
                        loop {
                            let next = comp.iter().copied().find(|&w| w != prev && self.adjacent(w, cur));
                            match next {
                                Some(w) => {
                                    prev = cur;
                                    cur = w;
                                    len += 1;
                                }
                                None => return len,
                            }
                        }
                    })
                    .collect();
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, _] => comp_of(Family::D),
                    [1, 2, 2..=4] => comp_of(Family::E),
                    _ => Err(CartanError::UnrecognizedDiagram),
                }
            }
            _ => Err(CartanError::UnrecognizedDiagram),
        }
    }

    /// Two-colors each component breadth-first, lowest index in `I+`.
    pub fn bipartition(&self) -> Result<Bipartition, CartanError> {
        let n = self.rank();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(true);
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                let c = color[i].unwrap();
                for j in 0..n {
                    if !self.adjacent(i, j) {
                        continue;
                    }
                    match color[j] {
                        None => {
                            color[j] = Some(!c);
                            queue.push_back(j);
                        }
                        Some(cj) if cj == c => return Err(CartanError::OddCycle),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(Bipartition { plus: color.into_iter().map(|c| c.unwrap()).collect() })
    }

    /// `b_ij = a_ij` for `i` in `I+`, `-a_ij` for `i` in `I-`, zero diagonal.
    pub fn b_of_a(&self, parts: &Bipartition) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { parts.epsilon(i) * self.a[i][j] }).collect())
            .collect()
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.a).expect("integers serialize"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    plus: Vec<bool>,
}

impl Bipartition {
    pub fn epsilon(&self, i: usize) -> i64 {
        if self.plus[i] {
            1
        } else {
            -1
        }
    }

    pub fn is_plus(&self, i: usize) -> bool {
        self.plus[i]
    }

    /// Indices with `epsilon(i) == eps`.
    pub fn part(&self, eps: i64) -> Vec<usize> {
        (0..self.plus.len()).filter(|&i| self.epsilon(i) == eps).collect()
    }
}

/// Every permutation of `0..n`, in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn builtins_reproduce_the_rank_four_examples() {
        let expect = [
            ("A4", m(&[&[2, -1, 0, 0], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]])),
            ("B4", m(&[&[2, -2, 0, 0], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]])),
            ("C4", m(&[&[2, -1, 0, 0], &[-2, 2, -1, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]])),
            ("D4", m(&[&[2, 0, -1, 0], &[0, 2, -1, 0], &[-1, -1, 2, -1], &[0, 0, -1, 2]])),
        ];
        for (name, rows) in expect {
            let c = CartanMatrix::parse(name).unwrap();
            assert_eq!(c.rows(), rows.as_slice(), "{name}");
            assert_eq!(c.classify().unwrap().to_string(), name);
        }
    }

    #[test]
    fn rank_two_examples() {
        let a2 = validate_finite_type(&m(&[&[2, -1], &[-1, 2]])).unwrap();
        assert!(a2.finite);
        assert_eq!(a2.symmetrizer.unwrap().0, vec![1, 1]);
        let affine = validate_finite_type(&m(&[&[2, -2], &[-2, 2]])).unwrap();
        assert!(!affine.finite);
        let g2 = validate_finite_type(&m(&[&[2, -3], &[-1, 2]])).unwrap();
        assert!(g2.finite);
        assert_eq!(g2.symmetrizer.unwrap().0, vec![1, 3]);
        let b2 = CartanMatrix::new(m(&[&[2, -1], &[-2, 2]])).unwrap();
        assert_eq!(b2.classify().unwrap().to_string(), "B2");
        let a1a1 = CartanMatrix::new(m(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(a1a1.classify().unwrap().to_string(), "A1xA1");
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(validate_finite_type(&m(&[&[1, 0], &[0, 2]])), Err(CartanError::NotCartanShape(_))));
        assert!(matches!(validate_finite_type(&m(&[&[2, 1], &[1, 2]])), Err(CartanError::NotCartanShape(_))));
        assert!(matches!(validate_finite_type(&m(&[&[2, -1], &[0, 2]])), Err(CartanError::NotCartanShape(_))));
        // A triangle with inconsistent multiplicities cannot be symmetrized.
        let cyc = m(&[&[2, -1, -1], &[-2, 2, -1], &[-1, -1, 2]]);
        assert_eq!(validate_finite_type(&cyc), Err(CartanError::NotSymmetrizable));
    }

    #[test]
    fn only_four_rank_two_classes_are_finite() {
        let mut accepted = Vec::new();
        for x in -3..=0 {
            for y in -3..=0 {
                let mat = m(&[&[2, x], &[y, 2]]);
                if let Ok(c) = validate_finite_type(&mat) {
                    if c.finite {
                        accepted.push((x.min(y), x.max(y)));
                    }
                }
            }
        }
        accepted.sort();
        accepted.dedup();
        assert_eq!(accepted, vec![(-3, -1), (-2, -1), (-1, -1), (0, 0)]);
    }

    #[test]
    fn bipartitions() {
        let a2 = CartanMatrix::parse("A2").unwrap().bipartition().unwrap();
        assert_eq!((a2.part(1), a2.part(-1)), (vec![0], vec![1]));
        let a3 = CartanMatrix::parse("A3").unwrap().bipartition().unwrap();
        assert_eq!((a3.part(1), a3.part(-1)), (vec![0, 2], vec![1]));
        let e8 = CartanMatrix::parse("E8").unwrap();
        let p = e8.bipartition().unwrap();
        // Branch node 4 sits opposite its three neighbours 2, 3, 5.
        for nb in [1, 2, 4] {
            assert_ne!(p.epsilon(3), p.epsilon(nb));
        }
        for i in 0..8 {
            for j in 0..8 {
                if e8.adjacent(i, j) {
                    assert_ne!(p.epsilon(i), p.epsilon(j));
                }
            }
        }
    }

    #[test]
    fn b_of_a_examples() {
        let b4 = CartanMatrix::parse("B4").unwrap();
        let p = b4.bipartition().unwrap();
        assert_eq!(p.part(1), vec![0, 2]);
        assert_eq!(
            b4.b_of_a(&p),
            m(&[&[0, -2, 0, 0], &[1, 0, 1, 0], &[0, -1, 0, -1], &[0, 0, 1, 0]])
        );
        let a2 = CartanMatrix::parse("A2").unwrap();
        assert_eq!(a2.b_of_a(&a2.bipartition().unwrap()), m(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn parse_errors() {
        assert!(CartanMatrix::parse("C2").is_err());
        assert!(CartanMatrix::parse("E9").is_err());
        assert!(CartanMatrix::parse("Q3").is_err());
        assert!(CartanMatrix::parse("matrix:[[2,-1],[-1]]").is_err());
        assert_eq!(CartanMatrix::parse("matrix:[[2,-2],[-2,2]]"), Err(CartanError::NotFiniteType));
        assert_eq!(CartanMatrix::parse("type:A1xG2").unwrap().rank(), 3);
    }

    fn builtin_types() -> Vec<(Family, usize)> {
        let mut v = Vec::new();
        for n in 1..=6 {
            v.push((Family::A, n));
        }
        for n in 2..=6 {
            v.push((Family::B, n));
        }
        for n in 3..=6 {
            v.push((Family::C, n));
        }
        for n in 4..=6 {
            v.push((Family::D, n));
        }
        v.extend([(Family::E, 6), (Family::E, 7), (Family::E, 8), (Family::F, 4), (Family::G, 2)]);
        v
    }

    #[test]
    fn every_builtin_classifies_as_itself() {
        for (f, n) in builtin_types() {
            let c = CartanMatrix::of_type(f, n).unwrap();
            assert_eq!(c.classify().unwrap(), DynkinType::single(f, n), "{f:?}{n}");
            let d = &c.symmetrizer().0;
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(d[i] * c.entry(i, j), d[j] * c.entry(j, i));
                }
            }
        }
    }

    #[test]
    fn classified_type_is_permutation_conjugate() {
        for spec in ["matrix:[[2,0,-1],[0,2,-2],[-1,-1,2]]", "matrix:[[2,-1,0,0],[-1,2,0,-1],[0,0,2,-1],[0,-2,-1,2]]"] {
            let c = CartanMatrix::parse(spec).unwrap();
            let std = CartanMatrix::of_dynkin(&c.classify().unwrap()).unwrap();
            assert!(permutations(c.rank()).iter().any(|p| c.permuted(p).unwrap().rows() == std.rows()));
        }
    }

    proptest! {
        #[test]
        fn classification_is_permutation_invariant(idx in 0usize..23, seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let types = builtin_types();
            let (f, n) = types[idx % types.len()];
            let c = CartanMatrix::of_type(f, n).unwrap();
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let q = c.permuted(&p).unwrap();
            prop_assert_eq!(q.classify().unwrap(), DynkinType::single(f, n));
            let parts = q.bipartition().unwrap();
            let b = q.b_of_a(&parts);
            let d = &q.symmetrizer().0;
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(d[i] * b[i][j], -d[j] * b[j][i]);
                }
            }
        }
    }
}
