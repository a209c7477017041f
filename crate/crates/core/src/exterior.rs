//! Exterior algebra on an orthonormal coframe `e^1..e^n` (n = 7 on the main
//! path). Basis elements are bitmasks of increasing multi-indices with the
//! sign absorbed into the coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::linalg::Mat;
use crate::scalar::{Scalar, SymbolTable};

pub const DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("form has mixed degrees {0:?}")]
    MixedDegree(Vec<usize>),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("coframe dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("coefficient `{0}` is not rational")]
    NotRational(String),
}

pub type Mask = u16;

fn mask_of(indices: &[usize]) -> Option<(Mask, i32)> {
    let mut mask: Mask = 0;
    let mut sign = 1;
    for &i in indices {
        let bit = 1 << (i - 1);
        if mask & bit != 0 {
            return None;
        }
        // moving e^i left past every larger index already present
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// Sign of `e^I ∧ e^J` relative to `e^{I∪J}`, zero if they overlap.
pub fn wedge_sign(i: Mask, j: Mask) -> i32 {
    if i & j != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 { 1 } else { -1 }
}

pub fn indices(mask: Mask) -> Vec<usize> {
    (0..16).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// All degree-`k` masks in lexicographic order of their multi-indices.
pub fn basis_masks(dim: usize, k: usize) -> Vec<Mask> {
    let mut out: Vec<Mask> = (0..(1u32 << dim))
        .map(|m| m as Mask)
        .filter(|m| m.count_ones() as usize == k)
        .collect();
    out.sort_by_key(|m| indices(*m));
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<Mask, Scalar>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        Form { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Form::zero(dim).with_term(0, Scalar::one())
    }

    /// `e^{i1} ∧ ... ∧ e^{ik}` with 1-based indices in any order.
    pub fn e(dim: usize, idx: &[usize]) -> Self {
        assert!(idx.iter().all(|&i| (1..=dim).contains(&i)), "index out of range");
        match mask_of(idx) {
            Some((m, s)) => Form::zero(dim).with_term(m, Scalar::int(s as i64)),
            None => Form::zero(dim),
        }
    }

    /// Shorthand for the 7-dimensional coframe.
    pub fn e7(idx: &[usize]) -> Self {
        Form::e(DIM, idx)
    }

    pub fn vol(dim: usize) -> Self {
        Form::e(dim, &(1..=dim).collect::<Vec<_>>())
    }

    fn with_term(mut self, m: Mask, c: Scalar) -> Self {
        self.add_term(m, c);
        self
    }

    fn add_term(&mut self, m: Mask, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Mask, Scalar)>) -> Self {
        let mut f = Form::zero(dim);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mask, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Mask) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Coefficient of `e^{idx}` with `idx` increasing.
    pub fn coeff_at(&self, idx: &[usize]) -> Scalar {
        match mask_of(idx) {
            Some((m, s)) => self.coeff(m).scale(&BigRational::from_integer((s as i64).into())),
            None => Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Degree of a homogeneous form; `Ok(None)` for the zero form.
    pub fn degree(&self) -> Result<Option<usize>, ExteriorError> {
        let d = self.degrees();
        match d.len() {
            0 => Ok(None),
            1 => Ok(Some(d[0])),
            _ => Err(ExteriorError::MixedDegree(d)),
        }
    }

    pub fn part(&self, k: usize) -> Form {
        Form::from_terms(self.dim, self.terms.iter().filter(|(m, _)| m.count_ones() as usize == k).map(|(m, c)| (*m, c.clone())))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Form {
        Form::from_terms(self.dim, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn try_map<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<Form, E> {
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    pub fn reduce(&self, table: &SymbolTable) -> Form {
        self.map(|c| table.reduce(c))
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        self.map(|c| c * s)
    }

    pub fn scale_q(&self, q: &BigRational) -> Form {
        self.map(|c| c.scale(q))
    }

    pub fn add(&self, o: &Form) -> Form {
        assert_eq!(self.dim, o.dim, "coframe dimensions differ");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.map(|c| -c)
    }

    pub fn wedge(&self, o: &Form) -> Form {
        assert_eq!(self.dim, o.dim, "coframe dimensions differ");
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let s = wedge_sign(*ma, *mb);
                if s == 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(ma | mb, if s > 0 { c } else { -c });
            }
        }
        out
    }

    /// `*e^I = sign(I, I^c) e^{I^c}`, so that `b ∧ *a = <b, a> vol`.
    pub fn hodge_star(&self) -> Result<Form, ExteriorError> {
        self.degree()?;
        let full: Mask = ((1u32 << self.dim) - 1) as Mask;
        Ok(Form::from_terms(
            self.dim,
            self.terms.iter().map(|(m, c)| {
                let comp = full & !m;
                let s = wedge_sign(*m, comp);
                (comp, if s > 0 { c.clone() } else { -c })
            }),
        ))
    }

    pub fn inner(&self, o: &Form) -> Result<Scalar, ExteriorError> {
        if let (Some(a), Some(b)) = (self.degree()?, o.degree()?) {
            if a != b {
                return Err(ExteriorError::DegreeMismatch(a, b));
            }
        }
        Ok(self.inner_any(o))
    }

    /// Inner product extended to mixed degrees (degrees are orthogonal).
    pub fn inner_any(&self, o: &Form) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            if let Some(d) = o.terms.get(m) {
                acc += &(c * d);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Scalar {
        self.inner_any(self)
    }

    /// Interior product with the frame vector `e_i`.
    pub fn contract(&self, i: usize) -> Form {
        let bit: Mask = 1 << (i - 1);
        Form::from_terms(
            self.dim,
            self.terms.iter().filter(|(m, _)| *m & bit != 0).map(|(m, c)| {
                let pos = (m & (bit - 1)).count_ones();
                (m & !bit, if pos.is_multiple_of(2) { c.clone() } else { -c })
            }),
        )
    }

    /// `e^{j1..jk} ⌟ a = e_{jk} ⌟ ... ⌟ e_{j1} ⌟ a`, so that `e^I ⌟ e^I = 1`.
    pub fn contract_by(&self, v: &Form) -> Form {
        let mut out = Form::zero(self.dim);
        for (m, c) in &v.terms {
            let mut cur = self.clone();
            for i in indices(*m) {
                cur = cur.contract(i);
            }
            out = out.add(&cur.scale(c));
        }
        out
    }

    /// Coefficients in the lexicographic degree-`k` basis.
    pub fn coords(&self, k: usize) -> Vec<Scalar> {
        basis_masks(self.dim, k).into_iter().map(|m| self.coeff(m)).collect()
    }

    pub fn rational_coords(&self, k: usize) -> Result<Vec<BigRational>, ExteriorError> {
        self.coords(k)
            .into_iter()
            .map(|c| c.as_rational().ok_or_else(|| ExteriorError::NotRational(c.to_string())))
            .collect()
    }

    pub fn from_coords(dim: usize, k: usize, coords: &[Scalar]) -> Form {
        Form::from_terms(dim, basis_masks(dim, k).into_iter().zip(coords.iter().cloned()))
    }
}

/// Matrix of a linear map from degree `k` to degree `l` forms; the map must
/// send rational forms to rational forms.
pub fn rational_matrix(dim: usize, k: usize, l: usize, f: impl Fn(&Form) -> Form) -> Result<Mat<BigRational>, ExteriorError> {
    let cols: Vec<Vec<BigRational>> = basis_masks(dim, k)
        .into_iter()
        .map(|m| f(&Form::from_terms(dim, [(m, Scalar::one())])).rational_coords(l))
        .collect::<Result<_, _>>()?;
    let rows = basis_masks(dim, l).len();
    Ok((0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
}

fn multi_index(m: Mask) -> String {
    let idx = indices(m);
    if idx.iter().all(|&i| i < 10) {
        idx.iter().map(|i| i.to_string()).collect()
    } else {
        idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Form {
    /// Terms sorted by degree then multi-index, e.g. `2*alpha : e^{4567}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Mask> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.count_ones(), indices(**m)));
        let parts: Vec<String> = keys.iter().map(|m| format!("{} : e^{{{}}}", self.terms[m], multi_index(**m))).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{self}]")
    }
}

/// Skew endomorphism-valued form `Σ_{c<d} ω_cd ⊗ E_cd`, where `E_cd` is the
/// skew endomorphism metrically dual to `e^{cd}`; `tr(E_cd E_c'd') = -2δ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndForm {
    pub dim: usize,
    pub parts: BTreeMap<(usize, usize), Form>,
}

impl EndForm {
    pub fn zero(dim: usize) -> Self {
        EndForm { dim, parts: BTreeMap::new() }
    }

    pub fn insert(&mut self, c: usize, d: usize, w: Form) {
        assert!(c < d);
        let cur = self.parts.remove(&(c, d)).unwrap_or_else(|| Form::zero(self.dim));
        let next = cur.add(&w);
        if !next.is_zero() {
            self.parts.insert((c, d), next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(Form::is_zero)
    }

    pub fn map_forms(&self, f: impl Fn(&Form) -> Form) -> EndForm {
        let mut out = EndForm::zero(self.dim);
        for ((c, d), w) in &self.parts {
            out.insert(*c, *d, f(w));
        }
        out
    }

    /// Form part wedged on the right by `x`.
    pub fn wedge_right(&self, x: &Form) -> EndForm {
        self.map_forms(|w| w.wedge(x))
    }

    /// Tensor norm: form norm times trace norm `tr(E^T E) = 2`.
    pub fn norm_sq(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for w in self.parts.values() {
            acc += &w.norm_sq();
        }
        acc.scale(&BigRational::from_integer(2.into()))
    }

    /// `tr(A ∧ B)` for 2-form valued endomorphisms.
    pub fn trace_wedge(&self, o: &EndForm) -> Form {
        let mut acc = Form::zero(self.dim);
        for (k, w) in &self.parts {
            if let Some(w2) = o.parts.get(k) {
                acc = acc.add(&w.wedge(w2));
            }
        }
        acc.scale_q(&BigRational::from_integer((-2).into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Sym};
    use proptest::prelude::*;

    fn e(idx: &[usize]) -> Form {
        Form::e7(idx)
    }

    #[test]
    fn basic_products() {
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
        assert_eq!(e(&[2]).wedge(&e(&[1])), e(&[1, 2]).neg());
        assert_eq!(e(&[2, 1]), e(&[1, 2]).neg());
        let ph1 = e(&[4, 5]).add(&e(&[6, 7])).neg();
        let ph2 = e(&[5, 7]).sub(&e(&[4, 6]));
        assert!(ph1.wedge(&ph2).is_zero());
        assert_eq!(ph1.wedge(&ph1), e(&[4, 5, 6, 7]).scale_q(&rat(2, 1)));
        assert_eq!(ph1.norm_sq(), Scalar::int(2));
    }

    #[test]
    fn star_and_contract() {
        assert_eq!(e(&[1]).hodge_star().unwrap(), e(&[2, 3, 4, 5, 6, 7]));
        assert!(e(&[1]).add(&e(&[1, 2])).hodge_star().is_err());
        assert_eq!(e(&[1, 2]).contract(1), e(&[2]));
        assert_eq!(e(&[1, 2]).contract(2), e(&[1]).neg());
        assert_eq!(e(&[1, 2, 3]).contract(1), e(&[2, 3]));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 2])).unwrap(), Scalar::one());
        assert!(e(&[1]).inner(&e(&[1, 2])).is_err());
        assert_eq!(e(&[1, 2]).contract_by(&e(&[1, 2])), Form::one(DIM));
    }

    #[test]
    fn display_sorted_by_degree() {
        let f = e(&[4, 5, 6, 7]).scale(&(&Scalar::sym(Sym::Alpha) * &Scalar::sym(Sym::Delta)).scale(&rat(2, 1))).add(&e(&[2]));
        assert_eq!(f.to_string(), "1 : e^{2} | 2*alpha*delta : e^{4567}");
    }

    #[test]
    fn trace_of_basis_endomorphisms() {
        let mut a = EndForm::zero(DIM);
        a.insert(4, 5, e(&[1, 2]));
        let t = a.trace_wedge(&a);
        assert!(t.is_zero());
        let mut b = EndForm::zero(DIM);
        b.insert(4, 5, e(&[1, 2]));
        b.insert(4, 5, e(&[3, 4]));
        assert_eq!(b.trace_wedge(&b), e(&[1, 2, 3, 4]).scale_q(&rat(-4, 1)));
        assert_eq!(b.norm_sq(), Scalar::int(4));
    }

    fn arb_form(k: usize) -> impl Strategy<Value = Form> {
        let masks = basis_masks(DIM, k);
        prop::collection::vec((0..masks.len(), -3i64..4, -1i32..2), 0..6).prop_map(move |ts| {
            Form::from_terms(
                DIM,
                ts.into_iter().map(|(i, c, ea)| (masks[i], Scalar::monomial(rat(c, 1), &[(Sym::Alpha, ea)]))),
            )
        })
    }

    fn arb_deg_form() -> impl Strategy<Value = (usize, Form)> {
        (0usize..=7).prop_flat_map(|k| arb_form(k).prop_map(move |f| (k, f)))
    }

    proptest! {
        #[test]
        fn graded_commutative((p, a) in arb_deg_form(), (q, b) in arb_deg_form()) {
            let lhs = a.wedge(&b);
            let rhs = b.wedge(&a);
            let rhs = if (p * q) % 2 == 1 { rhs.neg() } else { rhs };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn associative((_, a) in arb_deg_form(), (_, b) in arb_deg_form(), (_, c) in arb_deg_form()) {
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }

        #[test]
        fn star_involution_and_isometry((k, a) in arb_deg_form(), b in arb_form(3)) {
            let sa = a.hodge_star().unwrap();
            prop_assert_eq!(sa.hodge_star().unwrap(), a.clone());
            prop_assert_eq!(sa.norm_sq(), a.norm_sq());
            if k == 3 {
                let vol = Form::vol(DIM);
                prop_assert_eq!(b.wedge(&sa), vol.scale(&b.inner(&a).unwrap()));
            }
            let s2 = b.hodge_star().unwrap();
            prop_assert_eq!(s2.inner(&b.hodge_star().unwrap()).unwrap(), b.norm_sq());
        }

        #[test]
        fn contraction_is_derivation(i in 1usize..=7, (p, a) in arb_deg_form(), (_, b) in arb_deg_form()) {
            let lhs = a.wedge(&b).contract(i);
            let second = a.wedge(&b.contract(i));
            let rhs = a.contract(i).wedge(&b).add(&if p % 2 == 1 { second.neg() } else { second });
            prop_assert_eq!(lhs, rhs);
            // unit vector identity
            let ei = Form::e7(&[i]);
            prop_assert_eq!(ei.wedge(&a).contract(i).add(&ei.wedge(&a.contract(i))), a);
        }
    }
}
