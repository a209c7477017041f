//! Exact coefficient arithmetic: Laurent polynomials over the rationals in a
//! fixed list of parameter symbols, relation reduction, substitution, and the
//! quadratic extension `a + b*sqrt(d)` used to check radical solutions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub const NSYM: usize = 10;

/// Parameter symbols in their fixed monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Alpha,
    Delta,
    Lambda,
    Lambda1,
    Lambda2,
    AlphaP,
    S,
    C,
    T,
    Rho2,
}

impl Sym {
    pub const ALL: [Sym; NSYM] = [
        Sym::Alpha,
        Sym::Delta,
        Sym::Lambda,
        Sym::Lambda1,
        Sym::Lambda2,
        Sym::AlphaP,
        Sym::S,
        Sym::C,
        Sym::T,
        Sym::Rho2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::Alpha => "alpha",
            Sym::Delta => "delta",
            Sym::Lambda => "lambda",
            Sym::Lambda1 => "lambda1",
            Sym::Lambda2 => "lambda2",
            Sym::AlphaP => "alphap",
            Sym::S => "s",
            Sym::C => "c",
            Sym::T => "t",
            Sym::Rho2 => "rho2",
        }
    }

    pub fn parse(name: &str) -> Option<Sym> {
        Sym::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("cannot invert `{0}`: only nonzero monomials are units")]
    NotInvertible(String),
    #[error("expression `{0}` still depends on symbols other than t")]
    NotLaurentInT(String),
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("square-root radicands differ: {0} vs {1}")]
    RadicandMismatch(String, String),
}

pub type Mono = [i32; NSYM];

const UNIT: Mono = [0; NSYM];

fn mono_of(sym: Sym, e: i32) -> Mono {
    let mut m = UNIT;
    m[sym.index()] = e;
    m
}

fn mono_add(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for (x, y) in m.iter_mut().zip(b) {
        *x += *y;
    }
    m
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(text: &str) -> Result<BigRational, ScalarError> {
    let text = text.trim();
    let bad = || ScalarError::BadRational(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Laurent polynomial with rational coefficients. No zero coefficient is
/// ever stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Mono, BigRational>,
}

/// Lowest power of `t`, or the marker for the zero expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOrder {
    IdenticallyZero,
    Order(i32),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = Scalar::zero();
        if !q.is_zero() {
            s.terms.insert(UNIT, q);
        }
        s
    }

    pub fn sym(sym: Sym) -> Self {
        Scalar::monomial(BigRational::one(), &[(sym, 1)])
    }

    pub fn monomial(coeff: BigRational, powers: &[(Sym, i32)]) -> Self {
        let mut m = UNIT;
        for (s, e) in powers {
            m[s.index()] += e;
        }
        let mut out = Scalar::zero();
        if !coeff.is_zero() {
            out.terms.insert(m, coeff);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if no symbol occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&UNIT).cloned(),
            _ => None,
        }
    }

    pub fn contains(&self, sym: Sym) -> bool {
        self.terms.keys().any(|m| m[sym.index()] != 0)
    }

    pub fn symbols(&self) -> Vec<Sym> {
        Sym::ALL.iter().copied().filter(|s| self.contains(*s)).collect()
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Highest exponent of `sym`, `None` for zero.
    pub fn degree_in(&self, sym: Sym) -> Option<i32> {
        self.terms.keys().map(|m| m[sym.index()]).max()
    }

    /// Coefficient of `sym^k`, a Scalar free of `sym`.
    pub fn coeff_in(&self, sym: Sym, k: i32) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            if m[sym.index()] == k {
                let mut m2 = *m;
                m2[sym.index()] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Inverse of a single nonzero term.
    pub fn try_inverse(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let mut inv = UNIT;
        for (x, y) in inv.iter_mut().zip(m) {
            *x = -*y;
        }
        Some(Scalar::monomial(c.recip(), &[]).mul_mono(&inv))
    }

    fn mul_mono(&self, m: &Mono) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (mono_add(k, m), c.clone())).collect() }
    }

    /// Replace `sym` by `sym^k` shifted: multiply by `sym^e`.
    pub fn shift(&self, sym: Sym, e: i32) -> Scalar {
        self.mul_mono(&mono_of(sym, e))
    }

    /// Simultaneous substitution. Negative powers of a bound symbol need a
    /// value that is a single nonzero term.
    pub fn subs(&self, bindings: &[(Sym, Scalar)]) -> Result<Scalar, ScalarError> {
        let mut bound: [Option<&Scalar>; NSYM] = [None; NSYM];
        for (s, v) in bindings {
            bound[s.index()] = Some(v);
        }
        let mut inverses: [Option<Scalar>; NSYM] = Default::default();
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut free = *m;
            let mut term = Scalar::one();
            for s in Sym::ALL {
                let i = s.index();
                let Some(v) = bound[i] else { continue };
                let e = m[i];
                free[i] = 0;
                if e >= 0 {
                    term = &term * &v.pow(e as u32);
                } else {
                    if inverses[i].is_none() {
                        inverses[i] = Some(
                            v.try_inverse()
                                .ok_or_else(|| ScalarError::NotInvertible(v.to_string()))?,
                        );
                    }
                    term = &term * &inverses[i].as_ref().unwrap().pow((-e) as u32);
                }
            }
            out += &term.mul_mono(&free).scale(c);
        }
        Ok(out)
    }

    /// Substitution keyed by symbol names; unknown names are rejected.
    pub fn substitute(&self, bindings: &BTreeMap<String, Scalar>) -> Result<Scalar, ScalarError> {
        let typed = resolve_bindings(bindings)?;
        self.subs(&typed)
    }

    /// Lowest exponent of `t`. Every other symbol must be absent.
    pub fn laurent_order_in_t(&self) -> Result<LaurentOrder, ScalarError> {
        if self.symbols().iter().any(|s| *s != Sym::T) {
            return Err(ScalarError::NotLaurentInT(self.to_string()));
        }
        Ok(match self.terms.keys().map(|m| m[Sym::T.index()]).min() {
            None => LaurentOrder::IdenticallyZero,
            Some(k) => LaurentOrder::Order(k),
        })
    }

    /// One division step family: returns (quotient, remainder) of `self` by
    /// `d` as polynomials in `var`, whose leading coefficient must be a unit.
    pub fn div_rem_in(&self, d: &Scalar, var: Sym) -> Option<(Scalar, Scalar)> {
        let n = d.degree_in(var)?;
        let lc_inv = d.coeff_in(var, n).try_inverse()?;
        let mut q = Scalar::zero();
        let mut r = self.clone();
        while let Some(top) = r.degree_in(var) {
            if top < n || r.is_zero() {
                break;
            }
            let step = r.coeff_in(var, top).shift(var, top - n);
            let step = &step * &lc_inv;
            r -= &(&step * d);
            q += &step;
        }
        Some((q, r))
    }

    /// Exact quotient, if `d` divides `self` in the Laurent ring.
    pub fn div_exact(&self, d: &Scalar, var: Sym) -> Option<Scalar> {
        let (q, r) = self.div_rem_in(d, var)?;
        r.is_zero().then_some(q)
    }

    /// Pseudo-remainder of `self` by `r` in `var`. When the leading
    /// coefficient of `r` is a unit the division is exact and the result is
    /// the true remainder; otherwise it equals a nonzero multiple of it.
    pub fn prem(&self, r: &Scalar, var: Sym) -> Scalar {
        let Some(n) = r.degree_in(var) else { return self.clone() };
        let lc = r.coeff_in(var, n);
        if let Some(inv) = lc.try_inverse() {
            let mut x = self.clone();
            while let Some(top) = x.degree_in(var) {
                if top < n {
                    break;
                }
                let step = &x.coeff_in(var, top).shift(var, top - n) * &inv;
                x -= &(&step * r);
            }
            return x;
        }
        let mut x = self.clone();
        while let Some(top) = x.degree_in(var) {
            if top < n {
                break;
            }
            let step = x.coeff_in(var, top).shift(var, top - n);
            x = &(&lc * &x) - &(&step * r);
        }
        x
    }

    /// Whether every coefficient is positive and every exponent of the
    /// symbols outside `positive` is even, with a nonzero term free of those
    /// symbols. Such an expression is strictly positive whenever the symbols
    /// in `positive` are positive reals.
    pub fn is_positive_certificate(&self, positive: &[Sym]) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut has_anchor = false;
        for (m, c) in &self.terms {
            if !c.is_positive() {
                return false;
            }
            let mut anchored = true;
            for s in Sym::ALL {
                if positive.contains(&s) {
                    continue;
                }
                let e = m[s.index()];
                if e % 2 != 0 || e < 0 {
                    return false;
                }
                if e != 0 {
                    anchored = false;
                }
            }
            has_anchor |= anchored;
        }
        has_anchor
    }

    /// Divide out the largest monomial dividing every term.
    pub fn monomial_content(&self) -> (Mono, Scalar) {
        let mut low = [i32::MAX; NSYM];
        for m in self.terms.keys() {
            for (l, e) in low.iter_mut().zip(m) {
                *l = (*l).min(*e);
            }
        }
        if self.is_zero() {
            return (UNIT, Scalar::zero());
        }
        let neg: Mono = std::array::from_fn(|i| -low[i]);
        (low, self.mul_mono(&neg))
    }
}

pub fn resolve_bindings(bindings: &BTreeMap<String, Scalar>) -> Result<Vec<(Sym, Scalar)>, ScalarError> {
    bindings
        .iter()
        .map(|(k, v)| {
            Sym::parse(k)
                .map(|s| (s, v.clone()))
                .ok_or_else(|| ScalarError::UnknownSymbol(k.clone()))
        })
        .collect()
}

/// `beta = 2(delta - 2 alpha)`.
pub fn beta() -> Scalar {
    (Scalar::sym(Sym::Delta) - Scalar::sym(Sym::Alpha).scale(&rat(2, 1))).scale(&rat(2, 1))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || *m == UNIT {
                factors.push(a.to_string());
            }
            for s in Sym::ALL {
                match m[s.index()] {
                    0 => {}
                    1 => factors.push(s.name().to_string()),
                    e => factors.push(format!("{}^{}", s.name(), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<Sym> for Scalar {
    fn from(s: Sym) -> Self {
        Scalar::sym(s)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_add(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: Scalar) -> Scalar {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: &Scalar) -> Scalar {
                self.$assign(rhs);
                self
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul<Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

/// A defining relation `poly = 0`, used to rewrite powers of `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub poly: Scalar,
    pub var: Sym,
}

impl Relation {
    pub fn new(poly: Scalar, var: Sym) -> Self {
        Relation { poly, var }
    }
}

/// The relation ideal shared by every Scalar of one computation. The symbol
/// order itself is global and fixed by [`Sym::ALL`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub relations: Vec<Relation>,
}

impl SymbolTable {
    pub fn plain() -> Self {
        SymbolTable::default()
    }

    /// `s^2 + c^2 = 1`, eliminating powers of `s` beyond the first.
    pub fn trig() -> Self {
        SymbolTable::plain().with(Relation::new(
            Scalar::sym(Sym::S).pow(2) + Scalar::sym(Sym::C).pow(2) - Scalar::one(),
            Sym::S,
        ))
    }

    pub fn with(mut self, r: Relation) -> Self {
        self.relations.push(r);
        self
    }

    /// Normal form modulo the relations; idempotent.
    pub fn reduce(&self, x: &Scalar) -> Scalar {
        let mut cur = x.clone();
        loop {
            let mut next = cur.clone();
            for r in &self.relations {
                next = next.prem(&r.poly, r.var);
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Substitution followed by reduction.
    pub fn substitute(&self, x: &Scalar, bindings: &BTreeMap<String, Scalar>) -> Result<Scalar, ScalarError> {
        Ok(self.reduce(&x.substitute(bindings)?))
    }
}

/// `a + b*sqrt(d)` with `d` a positive rational that is not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad {
    pub a: Scalar,
    pub b: Scalar,
    pub d: BigRational,
}

impl Quad {
    pub fn new(a: Scalar, b: Scalar, d: BigRational) -> Self {
        Quad { a, b, d }
    }

    pub fn from_scalar(a: Scalar, d: &BigRational) -> Self {
        Quad { a, b: Scalar::zero(), d: d.clone() }
    }

    pub fn sqrt(d: &BigRational) -> Self {
        Quad { a: Scalar::zero(), b: Scalar::one(), d: d.clone() }
    }

    fn check(&self, o: &Quad) -> Result<(), ScalarError> {
        if self.d != o.d {
            return Err(ScalarError::RadicandMismatch(self.d.to_string(), o.d.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Quad) -> Result<Quad, ScalarError> {
        self.check(o)?;
        Ok(Quad::new(&self.a + &o.a, &self.b + &o.b, self.d.clone()))
    }

    pub fn sub(&self, o: &Quad) -> Result<Quad, ScalarError> {
        self.check(o)?;
        Ok(Quad::new(&self.a - &o.a, &self.b - &o.b, self.d.clone()))
    }

    pub fn mul(&self, o: &Quad) -> Result<Quad, ScalarError> {
        self.check(o)?;
        let bb = (&self.b * &o.b).scale(&self.d);
        Ok(Quad::new(&(&self.a * &o.a) + &bb, &(&self.a * &o.b) + &(&self.b * &o.a), self.d.clone()))
    }

    pub fn conj(&self) -> Quad {
        Quad::new(self.a.clone(), -&self.b, self.d.clone())
    }

    /// `a^2 - d b^2`, the product with the conjugate.
    pub fn norm(&self) -> Scalar {
        &(&self.a * &self.a) - &(&self.b * &self.b).scale(&self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn pow(&self, e: u32) -> Quad {
        let mut acc = Quad::from_scalar(Scalar::one(), &self.d);
        for _ in 0..e {
            acc = acc.mul(self).expect("same radicand");
        }
        acc
    }

    /// Inverse when the norm is a single nonzero term.
    pub fn try_inverse(&self) -> Option<Quad> {
        let ninv = self.norm().try_inverse()?;
        let c = self.conj();
        Some(Quad::new(&c.a * &ninv, &c.b * &ninv, self.d.clone()))
    }

    /// Since `sqrt(d)` is irrational, a power of `t` cancels only when both
    /// parts cancel, so the order is the smaller of the two orders.
    pub fn laurent_order_in_t(&self) -> Result<LaurentOrder, ScalarError> {
        let oa = self.a.laurent_order_in_t()?;
        let ob = self.b.laurent_order_in_t()?;
        Ok(match (oa, ob) {
            (LaurentOrder::IdenticallyZero, o) | (o, LaurentOrder::IdenticallyZero) => o,
            (LaurentOrder::Order(x), LaurentOrder::Order(y)) => LaurentOrder::Order(x.min(y)),
        })
    }

    /// Evaluate a Scalar with some symbols bound to quadratic values.
    pub fn eval(x: &Scalar, bindings: &[(Sym, Quad)], d: &BigRational) -> Result<Quad, ScalarError> {
        let mut out = Quad::from_scalar(Scalar::zero(), d);
        for (m, c) in x.terms() {
            let mut free = *m;
            let mut term = Quad::from_scalar(Scalar::from_rational(c.clone()), d);
            for (s, v) in bindings {
                let e = m[s.index()];
                free[s.index()] = 0;
                let p = if e >= 0 {
                    v.pow(e as u32)
                } else {
                    v.try_inverse()
                        .ok_or_else(|| ScalarError::NotInvertible(v.to_string()))?
                        .pow((-e) as u32)
                };
                term = term.mul(&p)?;
            }
            let fm = Scalar::one().mul_mono(&free);
            term = Quad::new(&term.a * &fm, &term.b * &fm, d.clone());
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> Scalar {
        Scalar::sym(Sym::Alpha)
    }
    fn d() -> Scalar {
        Scalar::sym(Sym::Delta)
    }

    #[test]
    fn trig_relation_reduces_to_one() {
        let tab = SymbolTable::trig();
        let s = Scalar::sym(Sym::S);
        let c = Scalar::sym(Sym::C);
        assert_eq!(tab.reduce(&(s.pow(2) + c.pow(2))), Scalar::one());
        let x = &(s.pow(2) + c.pow(2)) * &a() - a();
        assert!(tab.reduce(&x).is_zero());
    }

    #[test]
    fn beta_identity_cancels() {
        let x = beta() + (a().scale(&rat(2, 1)) - d()).scale(&rat(2, 1));
        assert!(x.is_zero());
    }

    #[test]
    fn substitution_examples() {
        let ap = Scalar::sym(Sym::AlphaP);
        let x = (&ap * &a().pow(2)).scale(&rat(12, 1));
        let b: BTreeMap<String, Scalar> =
            [("alpha".to_string(), Scalar::one()), ("alphap".to_string(), Scalar::frac(1, 12))].into();
        assert_eq!(x.substitute(&b).unwrap(), Scalar::one());
        let b2: BTreeMap<String, Scalar> =
            [("delta".to_string(), Scalar::zero()), ("alpha".to_string(), Scalar::one())].into();
        assert_eq!(beta().substitute(&b2).unwrap(), Scalar::int(-4));
        assert_eq!(x.substitute(&BTreeMap::new()).unwrap(), x);
        let bad: BTreeMap<String, Scalar> = [("gamma".to_string(), Scalar::one())].into();
        assert_eq!(x.substitute(&bad), Err(ScalarError::UnknownSymbol("gamma".into())));
    }

    #[test]
    fn laurent_orders() {
        let t = Scalar::sym(Sym::T);
        assert_eq!(t.pow(2).laurent_order_in_t().unwrap(), LaurentOrder::Order(2));
        assert_eq!(Scalar::zero().laurent_order_in_t().unwrap(), LaurentOrder::IdenticallyZero);
        // 48 t^4 / sqrt(12) = 4 sqrt(12) t^4
        let q = Quad::new(Scalar::zero(), t.pow(4).scale(&rat(4, 1)), rat(12, 1));
        assert_eq!(q.laurent_order_in_t().unwrap(), LaurentOrder::Order(4));
        // 6 t^5 sqrt(6) / t
        let q = Quad::new(Scalar::zero(), t.pow(5).shift(Sym::T, -1).scale(&rat(6, 1)), rat(6, 1));
        assert_eq!(q.laurent_order_in_t().unwrap(), LaurentOrder::Order(4));
        assert!(a().laurent_order_in_t().is_err());
    }

    #[test]
    fn exact_division_and_prem() {
        let l = Scalar::sym(Sym::Lambda);
        let p = &(&l + &beta()) * &l;
        assert_eq!(p.div_exact(&(&l + &beta()), Sym::Lambda).unwrap(), l);
        assert!((&p + &Scalar::one()).div_exact(&l, Sym::Lambda).is_none());
        // prem with non-unit leading coefficient still detects membership
        let r = &(&d() - &a()).pow(2) * &Scalar::sym(Sym::AlphaP) - Scalar::one();
        let x = &r * &(a() + d());
        assert!(x.prem(&r, Sym::AlphaP).is_zero());
    }

    #[test]
    fn display_is_canonical() {
        let x = (&a() * &d()).scale(&rat(2, 1)) - d().pow(2).scale(&rat(1, 7));
        assert_eq!(x.to_string(), "2*alpha*delta - 1/7*delta^2");
        assert_eq!(Scalar::frac(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn positivity_certificate() {
        let ap = Scalar::sym(Sym::AlphaP);
        let x = Scalar::sym(Sym::Lambda1);
        let p = (&ap.pow(2) * &x.pow(4)).scale(&rat(27, 1))
            + (&ap * &x.pow(2)).scale(&rat(36, 1))
            + Scalar::int(16);
        assert!(p.is_positive_certificate(&[Sym::AlphaP]));
        assert!(!(&p - &x).is_positive_certificate(&[Sym::AlphaP]));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-3i64..4, 1i64..4, 0i32..3, 0i32..3, -1i32..2), 0..5).prop_map(|ts| {
            let mut out = Scalar::zero();
            for (n, dd, ea, ed, et) in ts {
                out += &Scalar::monomial(rat(n, dd), &[(Sym::Alpha, ea), (Sym::Delta, ed), (Sym::T, et)]);
            }
            out
        })
    }

    fn arb_trig() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-3i64..4, 0i32..4, 0i32..4), 0..5).prop_map(|ts| {
            let mut out = Scalar::zero();
            for (n, es, ec) in ts {
                out += &Scalar::monomial(rat(n, 1), &[(Sym::S, es), (Sym::C, ec)]);
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert!((&x - &x).is_zero());
        }

        #[test]
        fn reduce_idempotent_and_multiplicative(x in arb_trig(), y in arb_trig()) {
            let tab = SymbolTable::trig();
            let rx = tab.reduce(&x);
            prop_assert_eq!(tab.reduce(&rx), rx.clone());
            let ry = tab.reduce(&y);
            prop_assert_eq!(tab.reduce(&(&x * &y)), tab.reduce(&(&rx * &ry)));
        }

        #[test]
        fn quad_norm_identity(x in arb_scalar(), y in arb_scalar(), d in 2i64..20) {
            let q = Quad::new(x.clone(), y.clone(), rat(d, 1));
            let prod = q.mul(&q.conj()).unwrap();
            prop_assert!(prod.b.is_zero());
            prop_assert_eq!(prod.a, &(&x * &x) - &(&y * &y).scale(&rat(d, 1)));
        }
    }
}
