//! Counting the same Catalan numbers several ways: antichains in the root
//! poset, the non-crossing partition lattice, W-orbits on the torus
//! `Q/(h+1)Q`, and positive regions of the Shi arrangement.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::coxgroup::{CoxeterGroup, GroupError};
use crate::gassoc::{n_phi, narayana};
use crate::rootsys::{RootError, RootPoset, RootSystem};
use crate::{Rational, RationalMatrix};

pub const DEFAULT_TORUS_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("torus has {points} points, over the budget of {budget}")]
    BudgetExceeded { points: u128, budget: usize },
    #[error("Shi region enumeration supports rank at most 3, got {0}")]
    RankTooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Number of antichains of each size (index = size), empty antichain included.
pub fn count_antichains(poset: &RootPoset) -> Vec<u64> {
    let m = poset.le.len();
    let mut counts = vec![0u64; m + 1];
    fn go(poset: &RootPoset, next: usize, chosen: &mut Vec<usize>, counts: &mut Vec<u64>) {
        counts[chosen.len()] += 1;
        for x in next..poset.le.len() {
            if chosen.iter().all(|&y| !poset.comparable(x, y)) {
                chosen.push(x);
                go(poset, x + 1, chosen, counts);
                chosen.pop();
            }
        }
    }
    go(poset, 0, &mut Vec::new(), &mut counts);
    while counts.len() > 1 && counts[counts.len() - 1] == 0 {
        counts.pop();
    }
    if m == 0 {
        counts.truncate(1);
    }
    counts
}

/// Rank sizes of `[1, c]` in absolute order for the bipartite Coxeter element.
pub fn nc_lattice_counts(rs: &RootSystem, group: &CoxeterGroup) -> Result<Vec<u64>, EnumError> {
    let parts = rs.cartan().bipartition().map_err(|e| RootError::NotIrreducible(e.to_string()))?;
    let order: Vec<usize> = parts.part(1).into_iter().chain(parts.part(-1)).collect();
    let c = group.coxeter_element(&order);
    Ok(group.absolute_interval(c)?.rank_counts().into_iter().map(|x| x as u64).collect())
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Number of W-orbits on `Q/(h+1)Q`. Generators are the simple
/// reflections, or every reflection when `all_reflections` is set.
pub fn torus_orbits(rs: &RootSystem, all_reflections: bool, budget: usize) -> Result<usize, EnumError> {
    let h = rs.coxeter_data()?.h as i64;
    let modulus = h + 1;
    let n = rs.rank();
    let points = (modulus as u128).pow(n as u32);
    if points > budget as u128 {
        return Err(EnumError::BudgetExceeded { points, budget });
    }
    let gens: Vec<Vec<i64>> = if all_reflections {
        (0..rs.num_positive()).map(|k| rs.root(k).coords.clone()).collect()
    } else {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    };
    // Each generator as an integer matrix acting on coordinates.
    let mats: Vec<Vec<Vec<i64>>> = gens
        .iter()
        .map(|alpha| {
            let mut m = vec![vec![0; n]; n];
            for j in 0..n {
                let mut e = vec![0; n];
                e[j] = 1;
                let img = rs.reflect(alpha, &e);
                for (i, row) in m.iter_mut().enumerate() {
                    row[j] = img[i];
                }
            }
            m
        })
        .collect();
    let total = points as usize;
    let mut uf = UnionFind { parent: (0..total as u32).collect() };
    let mut coords = vec![0i64; n];
    for p in 0..total {
        let mut r = p;
        for c in coords.iter_mut() {
            *c = (r % modulus as usize) as i64;
            r /= modulus as usize;
        }
        for m in &mats {
            let mut q = 0usize;
            for i in (0..n).rev() {
                let v: i64 = (0..n).map(|j| m[i][j] * coords[j]).sum::<i64>().rem_euclid(modulus);
                q = q * modulus as usize + v as usize;
            }
            uf.union(p as u32, q as u32);
        }
    }
    Ok((0..total as u32).filter(|&p| uf.find(p) == p).count())
}

/// A strict linear inequality `a . y < b` (or `<=` when closed).
#[derive(Debug, Clone)]
struct Halfspace {
    a: Vec<Rational>,
    b: Rational,
}

fn dot(a: &[Rational], y: &[Rational]) -> Rational {
    a.iter().zip(y).map(|(p, q)| p.clone() * q.clone()).sum()
}

fn ratio(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Vertices of the closed polytope `{ a . y <= b }`.
fn vertices(n: usize, ineqs: &[Halfspace]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let m = ineqs.len();
    if m < n {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = RationalMatrix::from_fn(n, n, |r, c| ineqs[idx[r]].a[c].clone());
        let b: Vec<Rational> = idx.iter().map(|&i| ineqs[i].b.clone()).collect();
        if let Ok(y) = a.solve(&b) {
            if ineqs.iter().all(|h| dot(&h.a, &y) <= h.b) && !out.contains(&y) {
                out.push(y);
            }
        }
        // Next n-subset in lexicographic order.
        let mut k = n;
        while k > 0 && idx[k - 1] == m - n + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for t in k..n {
            idx[t] = idx[t - 1] + 1;
        }
    }
    out
}

/// A bounded region with its vertices; constraints that are not facets are dropped.
#[derive(Debug, Clone)]
struct Region {
    ineqs: Vec<Halfspace>,
    vertices: Vec<Vec<Rational>>,
}

impl Region {
    /// `None` when the interior is empty. The centroid of the vertices of a
    /// full-dimensional polytope is an interior point.
    fn new(n: usize, ineqs: Vec<Halfspace>) -> Option<Region> {
        let vertices = vertices(n, &ineqs);
        if vertices.is_empty() {
            return None;
        }
        let count = ratio(vertices.len() as i64);
        let c: Vec<Rational> =
            (0..n).map(|j| vertices.iter().map(|v| v[j].clone()).sum::<Rational>() / count.clone()).collect();
        if !ineqs.iter().all(|h| dot(&h.a, &c) < h.b) {
            return None;
        }
        let ineqs = ineqs
            .into_iter()
            .filter(|h| vertices.iter().filter(|v| dot(&h.a, v) == h.b).count() >= n)
            .collect();
        Some(Region { ineqs, vertices })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiCount {
    pub hyperplanes: usize,
    pub regions: usize,
}

/// Positive regions of the Shi arrangement `<beta, x> in {0, 1}`, in
/// coordinates `y_j = <alpha_j, x>`, by adding hyperplanes one at a time
/// inside the box `0 < y_j < 2(h+1)`.
pub fn shi_positive_regions(rs: &RootSystem) -> Result<ShiCount, EnumError> {
    let n = rs.rank();
    if n > 3 {
        return Err(EnumError::RankTooLarge(n));
    }
    let h = rs.coxeter_data()?.h as i64;
    let bound = ratio(2 * (h + 1));
    let mut base = Vec::new();
    for j in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[j] = ratio(-1);
        base.push(Halfspace { a: a.clone(), b: Rational::zero() });
        a[j] = ratio(1);
        base.push(Halfspace { a, b: bound.clone() });
    }
    let mut hyperplanes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for r in rs.positive_roots() {
        let a: Vec<Rational> = r.coords.iter().map(|&c| ratio(c)).collect();
        hyperplanes.push((a.clone(), Rational::zero()));
        hyperplanes.push((a, ratio(1)));
    }
    let mut regions: Vec<Region> = vec![Region::new(n, base).expect("the box has interior")];
    for (a, b) in &hyperplanes {
        let mut next = Vec::new();
        for reg in regions {
            let side: Vec<Rational> = reg.vertices.iter().map(|v| dot(a, v) - b.clone()).collect();
            // A hyperplane cuts a polytope's interior iff vertices lie strictly on both sides.
            if !(side.iter().any(Signed::is_negative) && side.iter().any(Signed::is_positive)) {
                next.push(reg);
                continue;
            }
            let below = Halfspace { a: a.clone(), b: b.clone() };
            let above = Halfspace { a: a.iter().map(|x| -x.clone()).collect(), b: -b.clone() };
            for half in [below, above] {
                let mut cand = reg.ineqs.clone();
                cand.push(half);
                next.extend(Region::new(n, cand));
            }
        }
        regions = next;
    }
    Ok(ShiCount { hyperplanes: hyperplanes.len(), regions: regions.len() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub interpretation: &'static str,
    /// `None` for the total.
    pub k: Option<usize>,
    pub observed: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    pub type_name: String,
    pub rows: Vec<CountRow>,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.observed == r.expected)
    }

    pub fn total(&self, interpretation: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.interpretation == interpretation && r.k.is_none()).map(|r| r.observed)
    }

    pub fn refined(&self, interpretation: &str) -> Vec<u64> {
        self.rows.iter().filter(|r| r.interpretation == interpretation && r.k.is_some()).map(|r| r.observed).collect()
    }

    pub const CSV_HEADER: &'static str = "type,interpretation,k,observed,expected,match";

    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let k = r.k.map(|k| k.to_string()).unwrap_or_else(|| "total".into());
            let _ = writeln!(s, "{},{},{},{},{},{}", self.type_name, r.interpretation, k, r.observed, r.expected, r.observed == r.expected);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::CSV_HEADER, self.csv_rows())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.type_name,
            "passed": self.passed(),
            "rows": self.rows.iter().map(|r| json!({
                "interpretation": r.interpretation,
                "k": r.k,
                "observed": r.observed,
                "expected": r.expected,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub torus_budget: usize,
    /// Run the Shi count when the rank is at most 3.
    pub shi: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { torus_budget: DEFAULT_TORUS_BUDGET, shi: true }
    }
}

/// Every interpretation that applies, against `N(Phi)` and Narayana numbers.
pub fn catalan_report(rs: &RootSystem, group: &CoxeterGroup, opts: EnumOptions) -> Result<EnumerationReport, EnumError> {
    let cd = rs.coxeter_data()?;
    let expected_total = n_phi(cd.h, &cd.exponents).to_u64().expect("small");
    let comp = &rs.dynkin().0[0];
    let nar: Vec<u64> = narayana(comp.family, comp.rank).iter().map(|x| x.to_u64().expect("small")).collect();
    let mut rows = Vec::new();
    let push_refined = |rows: &mut Vec<CountRow>, name: &'static str, counts: &[u64]| {
        rows.push(CountRow { interpretation: name, k: None, observed: counts.iter().sum(), expected: expected_total });
        for (k, &e) in nar.iter().enumerate() {
            rows.push(CountRow { interpretation: name, k: Some(k), observed: counts.get(k).copied().unwrap_or(0), expected: e });
        }
    };
    push_refined(&mut rows, "antichains", &count_antichains(&rs.root_poset()));
    push_refined(&mut rows, "noncrossing", &nc_lattice_counts(rs, group)?);
    let h = cd.h as u128 + 1;
    if h.pow(rs.rank() as u32) <= opts.torus_budget as u128 {
        let orbits = torus_orbits(rs, false, opts.torus_budget)? as u64;
        rows.push(CountRow { interpretation: "torus", k: None, observed: orbits, expected: expected_total });
    }
    if opts.shi && rs.rank() <= 3 {
        let shi = shi_positive_regions(rs)?;
        rows.push(CountRow { interpretation: "shi", k: None, observed: shi.regions as u64, expected: expected_total });
    }
    Ok(EnumerationReport { type_name: rs.dynkin().to_string(), rows })
}

/// `sum` of a count vector as a big integer (for reporting).
pub fn total(counts: &[u64]) -> BigUint {
    counts.iter().map(|&c| BigUint::from(c)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use crate::coxgroup::DEFAULT_GROUP_BUDGET;

    fn setup(spec: &str) -> (RootSystem, CoxeterGroup) {
        let rs = RootSystem::generate(&CartanMatrix::parse(spec).unwrap()).unwrap();
        let g = CoxeterGroup::build(&rs, DEFAULT_GROUP_BUDGET).unwrap();
        (rs, g)
    }

    #[test]
    fn antichains() {
        let (rs, _) = setup("A3");
        assert_eq!(count_antichains(&rs.root_poset()), vec![1, 6, 6, 1]);
        let (rs, _) = setup("B2");
        assert_eq!(count_antichains(&rs.root_poset()).iter().sum::<u64>(), 6);
        let empty = RootPoset { le: vec![], covers: vec![] };
        assert_eq!(count_antichains(&empty), vec![1]);
        let (rs, _) = setup("E6");
        let c = count_antichains(&rs.root_poset());
        assert_eq!(c, vec![1, 36, 204, 351, 204, 36, 1]);
    }

    #[test]
    fn noncrossing() {
        let (rs, g) = setup("A3");
        assert_eq!(nc_lattice_counts(&rs, &g).unwrap(), vec![1, 6, 6, 1]);
        let (rs, g) = setup("B3");
        assert_eq!(nc_lattice_counts(&rs, &g).unwrap(), vec![1, 9, 9, 1]);
    }

    #[test]
    fn torus() {
        for (spec, count) in [("A2", 5), ("B2", 6), ("A3", 14), ("G2", 8), ("B3", 20), ("A4", 42)] {
            let (rs, _) = setup(spec);
            assert_eq!(torus_orbits(&rs, false, DEFAULT_TORUS_BUDGET).unwrap(), count, "{spec}");
            assert_eq!(torus_orbits(&rs, true, DEFAULT_TORUS_BUDGET).unwrap(), count, "{spec}");
        }
        let (rs, _) = setup("A3");
        assert!(matches!(torus_orbits(&rs, false, 10), Err(EnumError::BudgetExceeded { .. })));
    }

    #[test]
    fn shi() {
        for (spec, count) in [("A1", 2), ("A2", 5), ("B2", 6), ("G2", 8), ("A3", 14), ("B3", 20), ("C3", 20)] {
            let (rs, _) = setup(spec);
            let s = shi_positive_regions(&rs).unwrap();
            assert_eq!(s.regions, count, "{spec}");
            assert_eq!(s.hyperplanes, 2 * rs.num_positive());
        }
        let (rs, _) = setup("A4");
        assert_eq!(shi_positive_regions(&rs), Err(EnumError::RankTooLarge(4)));
    }

    #[test]
    fn reports() {
        for spec in ["A2", "A3", "B2", "B3", "G2", "D4", "F4"] {
            let (rs, g) = setup(spec);
            let r = catalan_report(&rs, &g, EnumOptions::default()).unwrap();
            assert!(r.passed(), "{}", r.to_csv());
            assert_eq!(r.refined("antichains"), r.refined("noncrossing"));
        }
        let (rs, g) = setup("A2");
        let r = catalan_report(&rs, &g, EnumOptions::default()).unwrap();
        assert_eq!(r.refined("antichains"), vec![1, 3, 1]);
        assert!(r.to_csv().starts_with("type,interpretation,k,observed,expected,match\nA2,antichains,total,5,5,true\n"));
        assert_eq!(total(&[1, 3, 1]), BigUint::from(5u32));
    }
}
