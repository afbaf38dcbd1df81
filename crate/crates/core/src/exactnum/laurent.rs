//! Multivariate Laurent polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by dense exponent vectors under the
//! graded lexicographic order, so the map itself is the canonical form:
//! two polynomials are equal iff their variable lists and term maps are.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use super::scalar::Scalar;
use super::ExactError;

/// Ordered variable names shared between polynomials of one ring.
pub type Vars = Arc<[String]>;

pub fn vars_from<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn shifted(&self, by: &[i32]) -> Monomial {
        Monomial(self.0.iter().zip(by).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<C> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Laurent<C> {
    pub fn zero(vars: &Vars) -> Self {
        Laurent { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    /// The `i`-th variable of the ring.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, C::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &Vars, exponents: Vec<i32>, c: C) -> Self {
        assert_eq!(exponents.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exponents), c);
        }
        Laurent { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<i32>, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, exponents: &[i32]) -> C {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// No negative exponents anywhere.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e >= 0))
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Componentwise minimum exponent over all terms (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut out: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            match &mut out {
                None => out = Some(m.0.clone()),
                Some(o) => o.iter_mut().zip(&m.0).for_each(|(a, &b)| *a = (*a).min(b)),
            }
        }
        out.unwrap_or_else(|| vec![0; self.nvars()])
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        let mut out: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            match &mut out {
                None => out = Some(m.0.clone()),
                Some(o) => o.iter_mut().zip(&m.0).for_each(|(a, &b)| *a = (*a).max(b)),
            }
        }
        out.unwrap_or_else(|| vec![0; self.nvars()])
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), ExactError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(ExactError::MismatchedVariables {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, ExactError> {
        self.check_vars(other)?;
        Ok(match op {
            ArithOp::Add => {
                let mut r = self.clone();
                for (m, c) in &other.terms {
                    r.add_term(m.clone(), c.clone());
                }
                r
            }
            ArithOp::Sub => {
                let mut r = self.clone();
                for (m, c) in &other.terms {
                    r.add_term(m.clone(), -c.clone());
                }
                r
            }
            ArithOp::Mul => {
                let mut r = Self::zero(&self.vars);
                for (ma, ca) in &self.terms {
                    for (mb, cb) in &other.terms {
                        r.add_term(ma.shifted(&mb.0), ca.clone() * cb.clone());
                    }
                }
                r
            }
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = Self::zero(&self.vars);
        for (m, v) in &self.terms {
            r.add_term(m.clone(), v.clone() * c.clone());
        }
        r
    }

    /// Multiplies by the monomial with exponent vector `by`.
    pub fn shift(&self, by: &[i32]) -> Self {
        Laurent {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.shifted(by), c.clone())).collect(),
        }
    }

    /// `self -= coeff * x^shift * other`, in place.
    fn sub_scaled_shifted(&mut self, other: &Self, coeff: &C, shift: &[i32]) {
        for (m, c) in &other.terms {
            self.add_term(m.shifted(shift), -(c.clone() * coeff.clone()));
        }
    }

    /// Exact quotient `self / den`.
    ///
    /// Both operands are shifted by monomials into the polynomial ring and
    /// divided by repeated leading-term cancellation in the graded lex order.
    /// If the divisor's leading term ever fails to divide the remainder's,
    /// the quotient is not a Laurent polynomial and the remainder at that
    /// point is returned inside the error.
    pub fn exact_div(&self, den: &Self) -> Result<Self, ExactError> {
        self.check_vars(den)?;
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let shift_num = self.min_exponents();
        let shift_den = den.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|e| -e).collect::<Vec<_>>();
        let num = self.shift(&neg(&shift_num));
        let d = den.shift(&neg(&shift_den));
        let (lead_m, lead_c) = {
            let (m, c) = d.leading().expect("nonzero divisor");
            (m.clone(), c.clone())
        };
        let mut quotient = Self::zero(&self.vars);
        let mut rem = num;
        while let Some((m, c)) = rem.leading() {
            let diff: Vec<i32> = m.0.iter().zip(&lead_m.0).map(|(a, b)| a - b).collect();
            let q = if diff.iter().all(|&e| e >= 0) { C::exact_quotient(c, &lead_c) } else { None };
            let Some(q) = q else {
                return Err(ExactError::NonExactDivision {
                    remainder: rem.shift(&shift_num).to_string(),
                });
            };
            quotient.add_term(Monomial(diff.clone()), q.clone());
            rem.sub_scaled_shifted(&d, &q, &diff);
        }
        let back: Vec<i32> = shift_num.iter().zip(&shift_den).map(|(a, b)| a - b).collect();
        Ok(quotient.shift(&back))
    }

    /// Substitutes `values[i]` for the `i`-th variable; negative powers are
    /// cleared with one exact division at the end.
    pub fn evaluate(&self, values: &[Laurent<C>]) -> Result<Laurent<C>, ExactError> {
        assert_eq!(values.len(), self.nvars(), "one value per variable");
        let target = values
            .first()
            .map(|v| v.vars.clone())
            .ok_or_else(|| ExactError::DimensionMismatch("no values".into()))?;
        for v in values {
            if v.vars != target {
                return Err(ExactError::MismatchedVariables { left: target.to_vec(), right: v.vars.to_vec() });
            }
        }
        let mins = self.min_exponents();
        let mut den = Laurent::one(&target);
        for (i, &m) in mins.iter().enumerate() {
            if m < 0 {
                den = &den * &values[i].pow((-m) as u32);
            }
        }
        let mut num = Laurent::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Laurent::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let k = e - mins[i].min(0);
                if k > 0 {
                    t = &t * &values[i].pow(k as u32);
                }
            }
            num = &num + &t;
        }
        num.exact_div(&den)
    }

    /// Re-expresses the polynomial over a larger variable list containing all
    /// of its variables.
    pub fn embed(&self, target: &Vars) -> Result<Laurent<C>, ExactError> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                target.iter().position(|t| t == v).ok_or_else(|| ExactError::MismatchedVariables {
                    left: self.vars.to_vec(),
                    right: target.to_vec(),
                })
            })
            .collect::<Result<_, _>>()?;
        let mut r = Laurent::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] = k;
            }
            r.add_term(Monomial(e), c.clone());
        }
        Ok(r)
    }

    /// `(numerator)/denominator-monomial` rendering, e.g. `(x + y + 1)/(x*y)`.
    pub fn fraction_form(&self) -> String {
        let mins = self.min_exponents();
        let den: Vec<i32> = mins.iter().map(|&m| if m < 0 { -m } else { 0 }).collect();
        if den.iter().all(|&e| e == 0) {
            return self.to_string();
        }
        let num = self.shift(&den);
        let num_s = if num.len() > 1 { format!("({num})") } else { num.to_string() };
        let factors: Vec<String> = den
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
            .collect();
        let den_s = if factors.len() == 1 {
            factors[0].clone()
        } else {
            format!("({})", factors.join("*"))
        };
        format!("{num_s}/{den_s}")
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial, lead: bool) -> fmt::Result {
    let mut first = lead;
    for (v, &e) in vars.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, " * ")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in descending graded-lex order, each written as
/// `coeff * v1^e1 * ... * vk^ek` with unit coefficients and zero exponents
/// omitted.
impl<C: Scalar> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_constant() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write_monomial(f, &self.vars, m, true)?;
            } else {
                write!(f, "{abs}")?;
                write_monomial(f, &self.vars, m, false)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<C: Scalar> std::ops::$tr for &Laurent<C> {
            type Output = Laurent<C>;
            fn $m(self, rhs: Self) -> Laurent<C> {
                self.arith(rhs, $op).expect("operands must share a variable list")
            }
        }
    };
}
binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);

impl<C: Scalar> std::ops::Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        self.scale(&-C::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LaurentPoly;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn xy() -> Vars {
        vars_from(&["x", "y"])
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, &xy()).unwrap()
    }

    #[test]
    fn ring_identities() {
        let v = xy();
        let x = LaurentPoly::var(&v, 0);
        let one = LaurentPoly::one(&v);
        assert_eq!((&(&x + &one) * &(&x - &one)).to_string(), "x^2 - 1");
        let m = p("x/y");
        assert_eq!((&m + &LaurentPoly::zero(&v)), m);
        assert_eq!(m.to_string(), "x * y^-1");
        assert_eq!((&p("y+1") + &p("x")).to_string(), "x + y + 1");
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = LaurentPoly::var(&xy(), 0);
        let b = LaurentPoly::var(&vars_from(&["x", "z"]), 0);
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(ExactError::MismatchedVariables { .. })));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("x^2 - 1").exact_div(&p("x - 1")).unwrap(), p("x + 1"));
        assert_eq!(p("x*y + y").exact_div(&p("y")).unwrap(), p("x + 1"));
        let err = p("x^2 + 1").exact_div(&p("x - 1")).unwrap_err();
        match err {
            ExactError::NonExactDivision { remainder } => assert!(!remainder.is_empty()),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(p("x").exact_div(&LaurentPoly::zero(&xy())), Err(ExactError::DivisionByZero)));
    }

    #[test]
    fn pentagon_ptolemy_division() {
        let v = vars_from(&["y1", "y2", "q1", "q2", "q3", "q4", "q5"]);
        let num = LaurentPoly::parse("q2*y2 + q4*q5", &v).unwrap();
        let y1 = LaurentPoly::var(&v, 0);
        let y3 = num.exact_div(&y1).unwrap();
        assert_eq!(y3.fraction_form(), "(y2 * q2 + q4 * q5)/y1");
        assert_eq!(&y3 * &y1, num);
    }

    #[test]
    fn fraction_forms() {
        assert_eq!(p("(y+1)/x").fraction_form(), "(y + 1)/x");
        assert_eq!(p("(x+y+1)/(x*y)").fraction_form(), "(x + y + 1)/(x*y)");
        assert_eq!(p("x").fraction_form(), "x");
        assert_eq!(p("1/x^2").fraction_form(), "1/x^2");
    }

    #[test]
    fn evaluate_substitutes() {
        let f = p("(x + y + 1)/(x*y)");
        let vals = [p("x"), p("(y+1)/x")];
        // The result (x^2 + x + y + 1)/(x*(y+1)) is not Laurent.
        assert!(f.evaluate(&vals).is_err());
        let g = p("x^2*y^-1 + 3");
        let h = g.evaluate(&[p("x*y"), p("y")]).unwrap();
        assert_eq!(h, p("x^2*y + 3"));
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(((-2i32..3, -2i32..3), -4i64..5), 1..5).prop_map(|ts| {
            LaurentPoly::from_terms(&xy(), ts.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
        }

        #[test]
        fn addition_is_confluent(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn text_form_roundtrips(a in small_poly()) {
            prop_assert_eq!(LaurentPoly::parse(&a.to_string(), &xy()).unwrap(), a.clone());
            prop_assert_eq!(LaurentPoly::parse(&a.fraction_form(), &xy()).unwrap(), a);
        }
    }
}
