//! Root systems generated from a Cartan matrix, in simple-root coordinates.
//!
//! Roots are indexed globally: positive roots first, ordered by height and
//! then by coordinates in decreasing lexicographic order (so index `i < n`
//! is the simple root `alpha_{i+1}`), followed by their negatives in the same
//! order. The negative of root `k` is therefore `(k + N) mod 2N`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cartan::{CartanMatrix, DynkinType};
use crate::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("root closure exceeded {0} roots; input is not of finite type")]
    ClosureBudgetExceeded(usize),
    #[error("coroot coordinates of {0:?} are not integral")]
    NonIntegralCoroot(Vec<i64>),
    #[error("operation needs an irreducible root system, got {0}")]
    NotIrreducible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub coroot_coords: Vec<i64>,
    pub height: i64,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.height > 0
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanMatrix,
    dynkin: DynkinType,
    roots: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
    npos: usize,
    form: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterData {
    pub h: u64,
    pub exponents: Vec<u64>,
    pub group_order: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightData {
    /// `omega_i` in simple-root coordinates.
    pub fundamental_weights: Vec<Vec<Rational>>,
    /// Coefficient of each simple coroot in the half-sum of positive coroots.
    pub rho_vee: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct RootPoset {
    /// `le[a][b]` iff positive root `a` is below positive root `b`.
    pub le: Vec<Vec<bool>>,
    /// Cover relations `(lower, upper)` among positive-root indices.
    pub covers: Vec<(usize, usize)>,
}

impl RootPoset {
    pub fn maximal(&self) -> Vec<usize> {
        let n = self.le.len();
        (0..n).filter(|&a| (0..n).all(|b| a == b || !self.le[a][b])).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        let n = self.le.len();
        (0..n).filter(|&a| (0..n).all(|b| a == b || !self.le[b][a])).collect()
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le[a][b] || self.le[b][a]
    }
}

fn simple_reflect(cartan: &CartanMatrix, i: usize, c: &[i64]) -> Vec<i64> {
    let pairing: i64 = (0..c.len()).map(|j| cartan.entry(i, j) * c[j]).sum();
    let mut out = c.to_vec();
    out[i] -= pairing;
    out
}

impl RootSystem {
    pub fn generate(cartan: &CartanMatrix) -> Result<Self, RootError> {
        let dynkin = cartan.classify().map_err(|e| RootError::NotIrreducible(e.to_string()))?;
        let n = cartan.rank();
        let budget = 10 * n * n;
        let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(b) = queue.pop_front() {
            for i in 0..n {
                let r = simple_reflect(cartan, i, &b);
                if !seen.contains_key(&r) {
                    if seen.len() >= budget.max(2) {
                        return Err(RootError::ClosureBudgetExceeded(budget));
                    }
                    seen.insert(r.clone(), ());
                    queue.push_back(r);
                }
            }
        }
        let mut positives: Vec<Vec<i64>> = seen.into_keys().filter(|c| c.iter().all(|&x| x >= 0)).collect();
        positives.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let form = cartan.form();
        let d = &cartan.symmetrizer().0;
        let mut roots = Vec::with_capacity(2 * positives.len());
        for sign in [1i64, -1] {
            for p in &positives {
                let coords: Vec<i64> = p.iter().map(|x| sign * x).collect();
                let norm: i64 = (0..n).map(|i| (0..n).map(|j| coords[i] * form[i][j] * coords[j]).sum::<i64>()).sum();
                let d_alpha = norm / 2;
                let mut coroot = Vec::with_capacity(n);
                for i in 0..n {
                    let num = coords[i] * d[i];
                    if num % d_alpha != 0 {
                        return Err(RootError::NonIntegralCoroot(coords));
                    }
                    coroot.push(num / d_alpha);
                }
                let height = coords.iter().sum();
                roots.push(Root { coords, coroot_coords: coroot, height });
            }
        }
        let index = roots.iter().enumerate().map(|(k, r)| (r.coords.clone(), k)).collect();
        Ok(RootSystem { cartan: cartan.clone(), dynkin, roots, index, npos: positives.len(), form })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn dynkin(&self) -> &DynkinType {
        &self.dynkin
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &Root {
        &self.roots[k]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.npos]
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.npos
    }

    pub fn negate(&self, k: usize) -> usize {
        (k + self.npos) % (2 * self.npos)
    }

    /// Index of `-alpha_i`.
    pub fn neg_simple(&self, i: usize) -> usize {
        self.npos + i
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Symmetrized inner product `(beta, gamma)` of coordinate vectors.
    pub fn inner(&self, b: &[i64], g: &[i64]) -> i64 {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| b[i] * self.form[i][j] * g[j]).sum::<i64>()).sum()
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    /// `<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)`.
    pub fn pairing(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        2 * self.inner(beta, alpha) / self.inner(alpha, alpha)
    }

    /// `s_i` applied to a coordinate vector.
    pub fn simple_reflection(&self, i: usize, c: &[i64]) -> Vec<i64> {
        simple_reflect(&self.cartan, i, c)
    }

    /// `sigma_alpha(beta) = beta - <beta, alpha^vee> alpha`.
    pub fn reflect(&self, alpha: &[i64], beta: &[i64]) -> Vec<i64> {
        let p = self.pairing(beta, alpha);
        beta.iter().zip(alpha).map(|(b, a)| b - p * a).collect()
    }

    /// `s_i` as a permutation of root indices.
    pub fn simple_permutation(&self, i: usize) -> Vec<usize> {
        self.roots
            .iter()
            .map(|r| self.index_of(&self.simple_reflection(i, &r.coords)).expect("closed under reflections"))
            .collect()
    }

    /// Reflection in root `k` as a permutation of root indices.
    pub fn reflection_permutation(&self, k: usize) -> Vec<usize> {
        let a = &self.roots[k].coords;
        self.roots
            .iter()
            .map(|r| self.index_of(&self.reflect(a, &r.coords)).expect("closed under reflections"))
            .collect()
    }

    pub fn root_poset(&self) -> RootPoset {
        let p = self.positive_roots();
        let m = p.len();
        let le: Vec<Vec<bool>> = (0..m)
            .map(|a| (0..m).map(|b| p[a].coords.iter().zip(&p[b].coords).all(|(x, y)| x <= y)).collect())
            .collect();
        let mut covers = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && le[a][b] && !(0..m).any(|c| c != a && c != b && le[a][c] && le[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        RootPoset { le, covers }
    }

    /// Integer matrix of `s_i` acting on simple-root coordinates (column `j` is `s_i(alpha_j)`).
    pub fn simple_reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let img = self.simple_reflection(i, &e);
            for k in 0..n {
                m[k][j] = img[k];
            }
        }
        m
    }

    pub fn coxeter_data(&self) -> Result<CoxeterData, RootError> {
        if !self.dynkin.is_irreducible() {
            return Err(RootError::NotIrreducible(self.dynkin.to_string()));
        }
        let n = self.rank();
        let parts = self.cartan.bipartition().expect("finite-type diagrams are forests");
        let mut c = identity(n);
        for eps in [1, -1] {
            for i in parts.part(eps) {
                c = mat_mul(&c, &self.simple_reflection_matrix(i));
            }
        }
        let id = identity(n);
        let mut power = c.clone();
        let mut h = 1u64;
        while power != id {
            power = mat_mul(&power, &c);
            h += 1;
        }
        let mut by_height: BTreeMap<i64, usize> = BTreeMap::new();
        for r in self.positive_roots() {
            *by_height.entry(r.height).or_default() += 1;
        }
        let mut exponents: Vec<u64> =
            (1..=n).map(|i| by_height.values().filter(|&&k| k >= i).count() as u64).collect();
        exponents.sort_unstable();
        let group_order = exponents.iter().map(|&e| BigUint::from(e + 1)).product();
        Ok(CoxeterData { h, exponents, group_order })
    }

    pub fn weight_data(&self) -> WeightData {
        let n = self.rank();
        let mut rho = vec![Rational::zero(); n];
        for r in self.positive_roots() {
            for (acc, &c) in rho.iter_mut().zip(&r.coroot_coords) {
                *acc += Rational::from_integer(c.into());
            }
        }
        let half = BigRational::new(1.into(), 2.into());
        let rho_vee = rho.into_iter().map(|x| x * half.clone()).collect();
        let a = RationalMatrix::from_fn(n, n, |i, j| Rational::from_integer(self.cartan.entry(i, j).into()));
        let inv = a.inverse().expect("finite-type Cartan matrices are invertible");
        let fundamental_weights = (0..n).map(|i| inv.column(i)).collect();
        WeightData { fundamental_weights, rho_vee }
    }

    pub fn to_json(&self) -> Value {
        let cox = self.coxeter_data().ok();
        json!({
            "type": self.dynkin.to_string(),
            "rank": self.rank(),
            "roots": self.roots().iter().map(|r| r.coords.clone()).collect::<Vec<_>>(),
            "positive_roots": self.positive_roots().iter().map(|r| r.coords.clone()).collect::<Vec<_>>(),
            "cartan": self.cartan.rows(),
            "symmetrizer": self.cartan.symmetrizer().0,
            "h": cox.as_ref().map(|c| c.h),
            "exponents": cox.as_ref().map(|c| c.exponents.clone()),
            "group_order": cox.as_ref().map(|c| c.group_order.to_string()),
        })
    }
}

pub(crate) fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Formats a rational as `p` or `p/q`.
pub fn rational_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Family;

    fn rs(spec: &str) -> RootSystem {
        RootSystem::generate(&CartanMatrix::parse(spec).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_two_positive_roots() {
        let a2 = rs("A2");
        let pos: Vec<_> = a2.positive_roots().iter().map(|r| r.coords.clone()).collect();
        assert_eq!(pos, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let g2 = rs("G2");
        let pos: Vec<_> = g2.positive_roots().iter().map(|r| r.coords.clone()).collect();
        assert_eq!(pos, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]]);
        assert_eq!(rs("B3").num_positive(), 9);
    }

    #[test]
    fn figure_table_for_builtins_up_to_rank_six() {
        let fact = |k: u64| (1..=k).product::<u64>();
        let mut cases: Vec<(String, usize, u64, Vec<u64>, u64)> = Vec::new();
        for n in 1..=6u64 {
            cases.push((format!("A{n}"), (n * (n + 1) / 2) as usize, n + 1, (1..=n).collect(), fact(n + 1)));
        }
        for n in 2..=6u64 {
            let e: Vec<u64> = (1..=n).map(|i| 2 * i - 1).collect();
            cases.push((format!("B{n}"), (n * n) as usize, 2 * n, e.clone(), (1 << n) * fact(n)));
            if n >= 3 {
                cases.push((format!("C{n}"), (n * n) as usize, 2 * n, e, (1 << n) * fact(n)));
            }
        }
        for n in 4..=6u64 {
            let mut e: Vec<u64> = (1..n).map(|i| 2 * i - 1).collect();
            e.push(n - 1);
            e.sort_unstable();
            cases.push((format!("D{n}"), (n * (n - 1)) as usize, 2 * (n - 1), e, (1 << (n - 1)) * fact(n)));
        }
        cases.push(("E6".into(), 36, 12, vec![1, 4, 5, 7, 8, 11], 51840));
        cases.push(("F4".into(), 24, 12, vec![1, 5, 7, 11], 1152));
        cases.push(("G2".into(), 6, 6, vec![1, 5], 12));
        for (name, npos, h, exps, order) in cases {
            let r = rs(&name);
            assert_eq!(r.num_positive(), npos, "{name}");
            let c = r.coxeter_data().unwrap();
            assert_eq!(c.h, h, "{name}");
            assert_eq!(c.exponents, exps, "{name}");
            assert_eq!(c.group_order, BigUint::from(order), "{name}");
            assert_eq!(r.rank() as u64 * c.h, 2 * npos as u64, "{name}");
            assert_eq!(r.root_poset().maximal().len(), 1, "{name}");
        }
    }

    #[test]
    fn e7_e8_table_rows() {
        for (name, npos, h, exps) in [
            ("E7", 63, 18, vec![1, 5, 7, 9, 11, 13, 17]),
            ("E8", 120, 30, vec![1, 7, 11, 13, 17, 19, 23, 29]),
        ] {
            let r = rs(name);
            let c = r.coxeter_data().unwrap();
            assert_eq!((r.num_positive(), c.h, c.exponents), (npos, h, exps));
        }
    }

    #[test]
    fn axioms_hold_up_to_rank_four() {
        for spec in ["A4", "B4", "C4", "D4", "F4", "G2", "A1xB2"] {
            let r = rs(spec);
            for a in r.roots() {
                for b in r.roots() {
                    assert!(r.index_of(&r.reflect(&a.coords, &b.coords)).is_some(), "{spec}");
                }
                for k in [-3i64, -2, 2, 3] {
                    let m: Vec<i64> = a.coords.iter().map(|x| k * x).collect();
                    assert!(r.index_of(&m).is_none());
                }
                assert!(a.coords.iter().all(|&x| x >= 0) || a.coords.iter().all(|&x| x <= 0));
            }
        }
    }

    #[test]
    fn root_posets() {
        let a2 = rs("A2").root_poset();
        assert_eq!(a2.maximal(), vec![2]);
        assert_eq!(a2.minimal(), vec![0, 1]);
        let g2 = rs("G2").root_poset();
        assert_eq!(g2.minimal(), vec![0, 1]);
        // Above the two simple roots the G2 poset is a chain.
        for a in 2..6 {
            for b in 2..6 {
                assert!(g2.comparable(a, b));
            }
        }
        assert_eq!(g2.covers.len(), 5);
    }

    #[test]
    fn rho_vee_constants() {
        assert_eq!(rs("A3").weight_data().rho_vee, vec![q(3, 2), q(2, 1), q(3, 2)]);
        assert_eq!(rs("A2").weight_data().rho_vee, vec![q(1, 1), q(1, 1)]);
        let c3 = rs("matrix:[[2,-1,0],[-1,2,-2],[0,-1,2]]");
        assert_eq!(c3.dynkin(), &DynkinType::single(Family::C, 3));
        assert_eq!(c3.weight_data().rho_vee, vec![q(5, 2), q(4, 1), q(9, 2)]);
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for spec in ["B3", "G2", "D4"] {
            let r = rs(spec);
            let w = r.weight_data();
            let n = r.rank();
            for i in 0..n {
                for j in 0..n {
                    // <omega_i, alpha_j^vee> = sum_k omega_ik a_jk
                    let s: Rational = (0..n)
                        .map(|k| w.fundamental_weights[i][k].clone() * Rational::from_integer(r.cartan().entry(j, k).into()))
                        .sum();
                    assert_eq!(s, q(i64::from(i == j), 1));
                }
            }
            assert!(w.rho_vee.iter().all(|x| *x > q(0, 1)));
        }
    }

    #[test]
    fn budget_rejects_nothing_valid_and_reducible_has_no_coxeter_number() {
        let r = rs("A1xA1");
        assert_eq!(r.num_positive(), 2);
        assert!(matches!(r.coxeter_data(), Err(RootError::NotIrreducible(_))));
        assert_eq!(rational_text(&q(9, 2)), "9/2");
        assert_eq!(rational_text(&q(4, 1)), "4");
    }

    #[test]
    fn json_export_fields() {
        let v = rs("G2").to_json();
        assert_eq!(v["type"], "G2");
        assert_eq!(v["positive_roots"].as_array().unwrap().len(), 6);
        assert_eq!(v["group_order"], "12");
        assert_eq!(v["symmetrizer"], json!([1, 3]));
    }
}
