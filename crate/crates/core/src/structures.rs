//! Adapted-frame structure forms, the finitely presented differential rings
//! carrying the structure equations, G2 forms, torsion classes and the
//! characteristic torsion.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exterior::{basis_masks, rational_matrix, ExteriorError, Form, DIM};
use crate::linalg::{kernel, rank, solve_scalar};
use crate::scalar::{beta, rat, Quad, Scalar, ScalarError, Sym, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("d^2 != 0 on generator {gen}: {residual}")]
    DSquared { gen: String, residual: String },
    #[error("relation {rel} fails in the coframe: {residual}")]
    RelationEmbedding { rel: String, residual: String },
    #[error("d is not compatible with relation {rel}: {residual}")]
    RelationD { rel: String, residual: String },
    #[error("form is not in the span of the ring: {0}")]
    NotExpressible(String),
    #[error("not a G2 pair: {0}")]
    NotG2(String),
    #[error("torsion data inconsistent: {0}")]
    Inconsistent(String),
    #[error("homothety parameter {0} is zero or not invertible")]
    Homothety(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

fn sym(s: Sym) -> Scalar {
    Scalar::sym(s)
}

// ---------------------------------------------------------------------------
// Frame forms

/// Even permutations `(i, j, k)` of `(0, 1, 2)`.
pub const CYC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Sp(1) adapted coframe data in dimension 7 (indices 0-based in arrays).
#[derive(Clone, Debug)]
pub struct Sp1Forms {
    pub eta: [Form; 3],
    /// `η_jk` for cyclic `(ijk)`: `η_23, η_31, η_12`.
    pub eta_jk: [Form; 3],
    pub phi_h: [Form; 3],
    pub phi: [Form; 3],
}

pub fn build_sp1_forms() -> Sp1Forms {
    let e = Form::e7;
    let eta = [e(&[1]), e(&[2]), e(&[3])];
    let eta_jk = [e(&[2, 3]), e(&[3, 1]), e(&[1, 2])];
    let phi_h = [
        e(&[4, 5]).add(&e(&[6, 7])).neg(),
        e(&[4, 6]).sub(&e(&[5, 7])).neg(),
        e(&[4, 7]).add(&e(&[5, 6])).neg(),
    ];
    let phi = std::array::from_fn(|i| phi_h[i].sub(&eta_jk[i]));
    Sp1Forms { eta, eta_jk, phi_h, phi }
}

/// `φ e_b = Σ_a Φ(e_a, e_b) e_a`, i.e. `Φ(X, Y) = g(X, φY)`, as a rational
/// 7x7 matrix (row `a`, column `b`).
pub fn endomorphism_of(two_form: &Form) -> Result<Vec<Vec<BigRational>>, StructureError> {
    let mut m = vec![vec![BigRational::zero(); DIM]; DIM];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            let c = two_form.contract(a + 1).contract(b + 1);
            *x = c
                .coeff(0)
                .as_rational()
                .ok_or_else(|| StructureError::NotExpressible(c.to_string()))?;
        }
    }
    Ok(m)
}

/// SU(3) adapted coframe data.
#[derive(Clone, Debug)]
pub struct Su3Forms {
    pub eta: Form,
    pub phi: Form,
    pub omega_p: Form,
    pub omega_m: Form,
}

/// `η = e^1`, `Φ = -(e^23 + e^45 + e^67)` and the real and imaginary parts
/// of `(e^3 + i e^2) ∧ (e^5 + i e^4) ∧ (e^7 + i e^6)`.
pub fn build_su3_forms() -> Su3Forms {
    let e = Form::e7;
    // expand the complex product over the 8 choices of real/imaginary legs
    let mut re = Form::zero(DIM);
    let mut im = Form::zero(DIM);
    for choice in 0..8u32 {
        let mut f = Form::one(DIM);
        let mut ipow = 0;
        for a in 0..3 {
            let imag = choice & (1 << a) != 0;
            let idx = if imag { 2 * a + 2 } else { 2 * a + 3 };
            ipow += imag as u32;
            f = f.wedge(&e(&[idx]));
        }
        match ipow % 4 {
            0 => re = re.add(&f),
            1 => im = im.add(&f),
            2 => re = re.sub(&f),
            _ => im = im.sub(&f),
        }
    }
    Su3Forms {
        eta: e(&[1]),
        phi: e(&[2, 3]).add(&e(&[4, 5])).add(&e(&[6, 7])).neg(),
        omega_p: re,
        omega_m: im,
    }
}

/// Metric induced by a 3-form: `g_ij vol = (1/6) (e_i⌟φ) ∧ (e_j⌟φ) ∧ φ`.
pub fn g2_metric(phi: &Form, table: &SymbolTable) -> Vec<Vec<Scalar>> {
    let vol = crate::exterior::basis_masks(DIM, DIM)[0];
    (1..=DIM)
        .map(|i| {
            (1..=DIM)
                .map(|j| {
                    let top = phi.contract(i).wedge(&phi.contract(j)).wedge(phi);
                    table.reduce(&top.coeff(vol).scale(&q(1, 6)))
                })
                .collect()
        })
        .collect()
}

/// Checks that `(φ, ψ)` is a G2 pair in the orthonormal coframe: the induced
/// metric is the identity, `ψ = *φ` and `φ ∧ ψ = 7 vol`.
pub fn check_g2_pair(phi: &Form, psi: &Form, table: &SymbolTable) -> Result<(), StructureError> {
    let g = g2_metric(phi, table);
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { Scalar::one() } else { Scalar::zero() };
            if *x != want {
                return Err(StructureError::NotG2(format!("induced metric g[{}][{}] = {x}", i + 1, j + 1)));
            }
        }
    }
    let star = phi.hodge_star()?.sub(psi).reduce(table);
    if !star.is_zero() {
        return Err(StructureError::NotG2(format!("*phi - psi = {star}")));
    }
    let top = phi.wedge(psi).sub(&Form::vol(DIM).scale(&Scalar::int(7))).reduce(table);
    if !top.is_zero() {
        return Err(StructureError::NotG2(format!("phi^psi - 7 vol = {top}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Differential ring

pub type GenMono = Vec<u8>;

/// Polynomial in ring generators with Scalar coefficients. Arithmetic that
/// needs the relations goes through [`GenRing`].
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GenForm {
    terms: BTreeMap<GenMono, Scalar>,
}

impl GenForm {
    pub fn zero() -> Self {
        GenForm::default()
    }

    pub fn term(m: GenMono, c: Scalar) -> Self {
        let mut g = GenForm::zero();
        g.add_term(m, c);
        g
    }

    fn add_term(&mut self, m: GenMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GenMono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u8]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &GenForm) -> GenForm {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &GenForm) -> GenForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GenForm {
        self.map(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> GenForm {
        self.map(|c| c * s)
    }

    pub fn scale_q(&self, x: &BigRational) -> GenForm {
        self.map(|c| c.scale(x))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> GenForm {
        let mut out = GenForm::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<GenForm, E> {
        let mut out = GenForm::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Debug for GenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenForm{:?}", self.terms)
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub embed: Form,
}

/// Rewrite rule `lhs -> rhs` on monomials.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: GenMono,
    pub rhs: GenForm,
}

/// Graded-commutative ring on named generators with a d-table and an
/// embedding into the coframe. Construction verifies `d^2 = 0`, that each
/// relation holds in the coframe and that `d` preserves the relations.
#[derive(Clone, Debug)]
pub struct GenRing {
    pub gens: Vec<Generator>,
    pub rules: Vec<Rule>,
    pub dtable: Vec<GenForm>,
    pub table: SymbolTable,
    pub dim: usize,
}

impl GenRing {
    pub fn new(gens: Vec<Generator>, rules: Vec<Rule>, table: SymbolTable) -> GenRing {
        let n = gens.len();
        GenRing { gens, rules, dtable: vec![GenForm::zero(); n], table, dim: DIM }
    }

    /// Installs the d-table and runs the construction checks.
    pub fn with_d(mut self, dtable: Vec<GenForm>) -> Result<GenRing, StructureError> {
        assert_eq!(dtable.len(), self.gens.len());
        self.dtable = dtable.iter().map(|x| self.normalize(x)).collect();
        for (i, g) in self.gens.iter().enumerate() {
            let dd = self.d(&self.dtable[i]);
            if !dd.is_zero() {
                return Err(StructureError::DSquared { gen: g.name.clone(), residual: self.show(&dd) });
            }
        }
        for r in &self.rules {
            let lhs = GenForm::term(r.lhs.clone(), Scalar::one());
            let name = self.show(&lhs);
            let diff = self.embed(&lhs).sub(&self.embed(&r.rhs)).reduce(&self.table);
            if !diff.is_zero() {
                return Err(StructureError::RelationEmbedding { rel: name, residual: diff.to_string() });
            }
            let dl = self.d_raw(&r.lhs);
            let dr = self.d(&r.rhs);
            let res = self.normalize(&dl).sub(&dr);
            if !res.is_zero() {
                return Err(StructureError::RelationD { rel: name, residual: self.show(&res) });
            }
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn gen(&self, i: usize) -> GenForm {
        let mut m = vec![0u8; self.n()];
        m[i] = 1;
        GenForm::term(m, Scalar::one())
    }

    pub fn constant(&self, c: Scalar) -> GenForm {
        GenForm::term(vec![0u8; self.n()], c)
    }

    fn is_odd(&self, i: usize) -> bool {
        self.gens[i].degree % 2 == 1
    }

    pub fn mono_degree(&self, m: &[u8]) -> usize {
        m.iter().zip(&self.gens).map(|(e, g)| *e as usize * g.degree).sum()
    }

    /// Degree of a homogeneous element, `None` if zero or mixed.
    pub fn degree(&self, x: &GenForm) -> Option<usize> {
        let mut ds = x.terms.keys().map(|m| self.mono_degree(m));
        let first = ds.next()?;
        ds.all(|d| d == first).then_some(first)
    }

    /// Sign with `m1 · m2 = sign · (m1 + m2)` for ordered monomials.
    fn product_sign(&self, m1: &[u8], m2: &[u8]) -> i32 {
        let mut swaps = 0u32;
        for j in 0..self.n() {
            if !self.is_odd(j) || m2[j] == 0 {
                continue;
            }
            let above: u32 = (j + 1..self.n()).filter(|&i| self.is_odd(i)).map(|i| m1[i] as u32).sum();
            swaps += m2[j] as u32 * above;
        }
        if swaps.is_multiple_of(2) { 1 } else { -1 }
    }

    fn vanishes(&self, m: &[u8]) -> bool {
        self.mono_degree(m) > self.dim || (0..self.n()).any(|i| self.is_odd(i) && m[i] > 1)
    }

    /// Normal form of the ordered monomial `m`.
    fn normal_mono(&self, m: &[u8]) -> GenForm {
        if self.vanishes(m) {
            return GenForm::zero();
        }
        for r in &self.rules {
            if r.lhs.iter().zip(m).all(|(a, b)| a <= b) {
                let rest: GenMono = m.iter().zip(&r.lhs).map(|(b, a)| b - a).collect();
                let s = self.product_sign(&r.lhs, &rest);
                let out = self.mul(&r.rhs, &GenForm::term(rest, Scalar::one()));
                return if s > 0 { out } else { out.neg() };
            }
        }
        GenForm::term(m.to_vec(), Scalar::one())
    }

    pub fn normalize(&self, x: &GenForm) -> GenForm {
        let mut out = GenForm::zero();
        for (m, c) in &x.terms {
            let c = self.table.reduce(c);
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.normal_mono(m).scale(&c));
        }
        out.map(|c| self.table.reduce(c))
    }

    pub fn mul(&self, a: &GenForm, b: &GenForm) -> GenForm {
        let mut out = GenForm::zero();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                if (0..self.n()).any(|i| self.is_odd(i) && m1[i] > 0 && m2[i] > 0) {
                    continue;
                }
                let s = self.product_sign(m1, m2);
                let m: GenMono = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                let c = c1 * c2;
                let c = if s > 0 { c } else { -c };
                out = out.add(&self.normal_mono(&m).scale(&c));
            }
        }
        out.map(|c| self.table.reduce(c))
    }

    pub fn prod(&self, xs: &[&GenForm]) -> GenForm {
        xs.iter().fold(self.constant(Scalar::one()), |acc, x| self.mul(&acc, x))
    }

    /// Leibniz expansion of `d` on an ordered monomial, unnormalized input.
    fn d_raw(&self, m: &[u8]) -> GenForm {
        let factors: Vec<usize> = (0..self.n()).flat_map(|i| std::iter::repeat_n(i, m[i] as usize)).collect();
        let mut out = GenForm::zero();
        for pos in 0..factors.len() {
            let mut pre = vec![0u8; self.n()];
            for &f in &factors[..pos] {
                pre[f] += 1;
            }
            let mut post = vec![0u8; self.n()];
            for &f in &factors[pos + 1..] {
                post[f] += 1;
            }
            let sign_deg = self.mono_degree(&pre) % 2;
            let term = self.mul(
                &self.mul(&GenForm::term(pre, Scalar::one()), &self.dtable[factors[pos]]),
                &GenForm::term(post, Scalar::one()),
            );
            out = if sign_deg == 0 { out.add(&term) } else { out.sub(&term) };
        }
        out
    }

    pub fn d(&self, x: &GenForm) -> GenForm {
        let mut out = GenForm::zero();
        for (m, c) in &x.terms {
            out = out.add(&self.d_raw(m).scale(c));
        }
        self.normalize(&out)
    }

    pub fn embed(&self, x: &GenForm) -> Form {
        let mut out = Form::zero(self.dim);
        for (m, c) in &x.terms {
            let mut f = Form::one(self.dim);
            for (i, e) in m.iter().enumerate() {
                for _ in 0..*e {
                    f = f.wedge(&self.gens[i].embed);
                }
            }
            out = out.add(&f.scale(c));
        }
        out.reduce(&self.table)
    }

    /// Normal monomials of degree `k`.
    pub fn normal_monomials(&self, k: usize) -> Vec<GenMono> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.n()];
        self.enumerate(0, k, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, i: usize, left: usize, cur: &mut GenMono, out: &mut Vec<GenMono>) {
        if i == self.n() {
            if left == 0 && !self.vanishes(cur) && !self.rules.iter().any(|r| r.lhs.iter().zip(cur.iter()).all(|(a, b)| a <= b)) {
                out.push(cur.clone());
            }
            return;
        }
        let deg = self.gens[i].degree;
        let max = if self.is_odd(i) { 1 } else { left / deg };
        for e in 0..=max.min(left / deg) {
            cur[i] = e as u8;
            self.enumerate(i + 1, left - e * deg, cur, out);
        }
        cur[i] = 0;
    }

    /// Re-express a homogeneous coframe form in the ring by an exact linear
    /// solve over the normal monomials of its degree.
    pub fn express(&self, f: &Form) -> Result<GenForm, StructureError> {
        let Some(k) = f.degree()? else { return Ok(GenForm::zero()) };
        let monos = self.normal_monomials(k);
        let cols: Vec<Vec<BigRational>> = monos
            .iter()
            .map(|m| self.embed(&GenForm::term(m.clone(), Scalar::one())).rational_coords(k))
            .collect::<Result<_, _>>()?;
        let rows = basis_masks(self.dim, k).len();
        let a: Vec<Vec<BigRational>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let x = solve_scalar(&a, &f.coords(k)).ok_or_else(|| StructureError::NotExpressible(f.to_string()))?;
        let mut out = GenForm::zero();
        for (m, c) in monos.into_iter().zip(x) {
            out.add_term(m, self.table.reduce(&c));
        }
        let back = self.embed(&out).sub(f).reduce(&self.table);
        if !back.is_zero() {
            return Err(StructureError::NotExpressible(f.to_string()));
        }
        Ok(out)
    }

    /// Hodge star through the coframe.
    pub fn star(&self, x: &GenForm) -> Result<GenForm, StructureError> {
        self.express(&self.embed(x).hodge_star()?)
    }

    pub fn reduce_coeffs(&self, x: &GenForm, f: impl Fn(&Scalar) -> Result<Scalar, ScalarError>) -> Result<GenForm, StructureError> {
        Ok(self.normalize(&x.try_map(f)?))
    }

    pub fn show(&self, x: &GenForm) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = x
            .terms
            .iter()
            .map(|(m, c)| {
                let names: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { self.gens[i].name.clone() } else { format!("{}^{}", self.gens[i].name, e) })
                    .collect();
                let mono = if names.is_empty() { "1".to_string() } else { names.join("*") };
                format!("{c} : {mono}")
            })
            .collect();
        parts.join(" | ")
    }
}

fn mono(n: usize, pairs: &[(usize, u8)]) -> GenMono {
    let mut m = vec![0u8; n];
    for (i, e) in pairs {
        m[*i] = *e;
    }
    m
}

// ---------------------------------------------------------------------------
// 3-(alpha, delta)-Sasaki

/// Generator indices of the 3ad ring: `η_1..η_3` then `Φ_1^H..Φ_3^H`.
pub const ETA: [usize; 3] = [0, 1, 2];
pub const PH: [usize; 3] = [3, 4, 5];

#[derive(Clone, Debug)]
pub struct Ring3ad {
    pub ring: GenRing,
    pub frame: Sp1Forms,
}

impl Ring3ad {
    pub fn new() -> Result<Ring3ad, StructureError> {
        let frame = build_sp1_forms();
        let mut gens = Vec::new();
        for i in 0..3 {
            gens.push(Generator { name: format!("eta{}", i + 1), degree: 1, embed: frame.eta[i].clone() });
        }
        for i in 0..3 {
            gens.push(Generator { name: format!("PH{}", i + 1), degree: 2, embed: frame.phi_h[i].clone() });
        }
        let n = 6;
        let p1sq = GenForm::term(mono(n, &[(PH[0], 2)]), Scalar::one());
        let mut rules = vec![
            Rule { lhs: mono(n, &[(PH[0], 1), (PH[1], 1)]), rhs: GenForm::zero() },
            Rule { lhs: mono(n, &[(PH[0], 1), (PH[2], 1)]), rhs: GenForm::zero() },
            Rule { lhs: mono(n, &[(PH[1], 1), (PH[2], 1)]), rhs: GenForm::zero() },
            Rule { lhs: mono(n, &[(PH[1], 2)]), rhs: p1sq.clone() },
            Rule { lhs: mono(n, &[(PH[2], 2)]), rhs: p1sq },
        ];
        rules.push(Rule { lhs: mono(n, &[(PH[0], 3)]), rhs: GenForm::zero() });
        let ring = GenRing::new(gens, rules, SymbolTable::plain());
        let r = Ring3ad { ring, frame };
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        let mut dt = vec![GenForm::zero(); n];
        for &(i, j, k) in &CYC {
            let de = r.p(i).scale(&a.scale(&q(2, 1))).sub(&r.eta_jk(i).scale(&d.scale(&q(2, 1))));
            dt[ETA[i]] = de;
            let dp = r.ring.mul(&r.p(j), &r.eta(k)).sub(&r.ring.mul(&r.eta(j), &r.p(k)));
            dt[PH[i]] = dp.scale(&d.scale(&q(2, 1)));
        }
        let ring = r.ring.with_d(dt)?;
        Ok(Ring3ad { ring, frame: r.frame })
    }

    pub fn eta(&self, i: usize) -> GenForm {
        self.ring.gen(ETA[i])
    }

    pub fn p(&self, i: usize) -> GenForm {
        self.ring.gen(PH[i])
    }

    /// `η_jk` with `(ijk)` cyclic.
    pub fn eta_jk(&self, i: usize) -> GenForm {
        let (_, j, k) = CYC[i];
        self.ring.mul(&self.eta(j), &self.eta(k))
    }

    pub fn eta123(&self) -> GenForm {
        self.ring.prod(&[&self.eta(0), &self.eta(1), &self.eta(2)])
    }

    /// `Σ_i η_i ∧ Φ_i^H`.
    pub fn sum_eta_p(&self) -> GenForm {
        (0..3).fold(GenForm::zero(), |acc, i| acc.add(&self.ring.mul(&self.eta(i), &self.p(i))))
    }

    /// `Σcyc Φ_i^H ∧ η_jk`.
    pub fn b1(&self) -> GenForm {
        (0..3).fold(GenForm::zero(), |acc, i| acc.add(&self.ring.mul(&self.p(i), &self.eta_jk(i))))
    }

    /// `Σ_ℓ Φ_ℓ^H ∧ Φ_ℓ^H`.
    pub fn b2(&self) -> GenForm {
        (0..3).fold(GenForm::zero(), |acc, i| acc.add(&self.ring.mul(&self.p(i), &self.p(i))))
    }

    pub fn phi(&self) -> GenForm {
        self.eta123().add(&self.sum_eta_p())
    }

    pub fn psi(&self) -> GenForm {
        self.b1().add(&self.b2().scale_q(&q(1, 6)))
    }

    /// Characteristic torsion `2(δ-4α) η_123 + 2α Σ η_i ∧ Φ_i^H`.
    pub fn torsion_expected(&self) -> GenForm {
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        self.eta123()
            .scale(&(&d - &a.scale(&q(4, 1))).scale(&q(2, 1)))
            .add(&self.sum_eta_p().scale(&a.scale(&q(2, 1))))
    }

    /// Auxiliary G2 forms `η_123 + 2 η_i ∧ Φ_i^H - Σ η_ℓ ∧ Φ_ℓ^H`.
    pub fn phi_aux(&self, i: usize) -> GenForm {
        self.eta123()
            .add(&self.ring.mul(&self.eta(i), &self.p(i)).scale_q(&q(2, 1)))
            .sub(&self.sum_eta_p())
    }
}

// ---------------------------------------------------------------------------
// (alpha, delta)-Sasaki, SU(3)

pub const SU_ETA: usize = 0;
pub const SU_PHI: usize = 1;
pub const SU_OP: usize = 2;
pub const SU_OM: usize = 3;

#[derive(Clone, Debug)]
pub struct RingSu3 {
    pub ring: GenRing,
    pub frame: Su3Forms,
}

impl RingSu3 {
    pub fn new() -> Result<RingSu3, StructureError> {
        let frame = build_su3_forms();
        let gens = vec![
            Generator { name: "eta".into(), degree: 1, embed: frame.eta.clone() },
            Generator { name: "Phi".into(), degree: 2, embed: frame.phi.clone() },
            Generator { name: "OmegaP".into(), degree: 3, embed: frame.omega_p.clone() },
            Generator { name: "OmegaM".into(), degree: 3, embed: frame.omega_m.clone() },
        ];
        let n = 4;
        let phi3 = GenForm::term(mono(n, &[(SU_PHI, 3)]), Scalar::frac(2, 3));
        let rules = vec![
            Rule { lhs: mono(n, &[(SU_PHI, 1), (SU_OP, 1)]), rhs: GenForm::zero() },
            Rule { lhs: mono(n, &[(SU_PHI, 1), (SU_OM, 1)]), rhs: GenForm::zero() },
            Rule { lhs: mono(n, &[(SU_OP, 1), (SU_OM, 1)]), rhs: phi3 },
        ];
        let ring = GenRing::new(gens, rules, SymbolTable::trig());
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        let eta = ring.gen(SU_ETA);
        let dt = vec![
            ring.gen(SU_PHI).scale(&a.scale(&q(2, 1))),
            GenForm::zero(),
            ring.mul(&eta, &ring.gen(SU_OM)).scale(&d.scale(&q(-4, 1))),
            ring.mul(&eta, &ring.gen(SU_OP)).scale(&d.scale(&q(4, 1))),
        ];
        let ring = ring.with_d(dt)?;
        Ok(RingSu3 { ring, frame })
    }

    pub fn eta(&self) -> GenForm {
        self.ring.gen(SU_ETA)
    }
    pub fn phi_form(&self) -> GenForm {
        self.ring.gen(SU_PHI)
    }
    pub fn op(&self) -> GenForm {
        self.ring.gen(SU_OP)
    }
    pub fn om(&self) -> GenForm {
        self.ring.gen(SU_OM)
    }

    /// `s Ω_+ + c Ω_-`.
    pub fn omega_theta(&self) -> GenForm {
        self.op().scale(&sym(Sym::S)).add(&self.om().scale(&sym(Sym::C)))
    }

    /// `φ(θ) = -η ∧ Φ + s Ω_+ + c Ω_-`.
    pub fn phi(&self) -> GenForm {
        self.ring.mul(&self.eta(), &self.phi_form()).neg().add(&self.omega_theta())
    }

    /// `ψ(θ) = ½ Φ ∧ Φ + s η ∧ Ω_- - c η ∧ Ω_+`.
    pub fn psi(&self) -> GenForm {
        let r = &self.ring;
        r.mul(&self.phi_form(), &self.phi_form())
            .scale_q(&q(1, 2))
            .add(&r.mul(&self.eta(), &self.om()).scale(&sym(Sym::S)))
            .sub(&r.mul(&self.eta(), &self.op()).scale(&sym(Sym::C)))
    }

    /// `((8δ - 6α)/3) η ∧ Φ + ((6α - 4δ)/3)(s Ω_+ + c Ω_-)`.
    pub fn torsion_expected(&self) -> GenForm {
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        let c1 = (d.scale(&q(8, 1)) - a.scale(&q(6, 1))).scale(&q(1, 3));
        let c2 = (a.scale(&q(6, 1)) - d.scale(&q(4, 1))).scale(&q(1, 3));
        self.ring.mul(&self.eta(), &self.phi_form()).scale(&c1).add(&self.omega_theta().scale(&c2))
    }

    /// τ_3 as displayed for this family: `(4/7)(α-δ)(4 η∧Φ - 3(sΩ_+ + cΩ_-))`.
    pub fn tau3_expected(&self) -> GenForm {
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        let f = (&a - &d).scale(&q(4, 7));
        self.ring
            .mul(&self.eta(), &self.phi_form())
            .scale_q(&q(4, 1))
            .sub(&self.omega_theta().scale_q(&q(3, 1)))
            .scale(&f)
    }
}

// ---------------------------------------------------------------------------
// Torsion classes

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionClasses {
    pub tau0: Scalar,
    pub tau1: Form,
    pub tau2: Form,
    pub tau3: Form,
}

/// Orthogonal projection of `dφ` and `dψ` onto the G2-irreducible summands.
/// `Λ⁴ = <ψ> ⊕ {α∧φ} ⊕ *Λ³₂₇` and `Λ⁵ = {α∧ψ} ⊕ *Λ²₁₄` are orthogonal with
/// `|ψ|² = 7`, `<e^i∧φ, e^j∧φ> = 4δ_ij`, `<e^i∧ψ, e^j∧ψ> = 3δ_ij`; these Gram
/// identities are verified first, which keeps the extraction valid when the
/// coefficients of φ are symbolic.
pub fn torsion_class_extract(
    phi: &Form,
    psi: &Form,
    dphi: &Form,
    dpsi: &Form,
    table: &SymbolTable,
) -> Result<TorsionClasses, StructureError> {
    check_g2_pair(phi, psi, table)?;
    let e: Vec<Form> = (1..=DIM).map(|i| Form::e7(&[i])).collect();
    let ephi: Vec<Form> = e.iter().map(|x| x.wedge(phi)).collect();
    let epsi: Vec<Form> = e.iter().map(|x| x.wedge(psi)).collect();
    for i in 0..DIM {
        if !table.reduce(&ephi[i].inner_any(psi)).is_zero() {
            return Err(StructureError::NotG2(format!("e^{}^phi not orthogonal to psi", i + 1)));
        }
        for j in 0..DIM {
            let want = |n: i64| if i == j { Scalar::int(n) } else { Scalar::zero() };
            if table.reduce(&ephi[i].inner_any(&ephi[j])) != want(4) || table.reduce(&epsi[i].inner_any(&epsi[j])) != want(3) {
                return Err(StructureError::NotG2(format!("Gram identity fails at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    let red = |s: Scalar| table.reduce(&s);
    let tau0 = red(dphi.inner(psi)?.scale(&q(1, 7)));
    let tau1 = Form::from_terms(
        DIM,
        (0..DIM).map(|i| (1 << i, red(dphi.inner_any(&ephi[i]).scale(&q(1, 12))))),
    );
    let tau1_from_psi = Form::from_terms(
        DIM,
        (0..DIM).map(|i| (1 << i, red(dpsi.inner_any(&epsi[i]).scale(&q(1, 12))))),
    );
    if tau1 != tau1_from_psi {
        return Err(StructureError::Inconsistent(format!("tau1 from dphi {tau1} vs from dpsi {tau1_from_psi}")));
    }
    let star_tau3 = dphi
        .sub(&psi.scale(&tau0))
        .sub(&tau1.wedge(phi).scale(&Scalar::int(3)))
        .reduce(table);
    let tau3 = star_tau3.hodge_star()?;
    let chk = tau3.wedge(phi).add(&tau3.wedge(psi)).reduce(table);
    if !chk.is_zero() {
        return Err(StructureError::Inconsistent(format!("tau3 leaves Lambda3_27: {chk}")));
    }
    let star_tau2 = dpsi.sub(&tau1.wedge(psi).scale(&Scalar::int(4))).reduce(table);
    let tau2 = star_tau2.hodge_star()?;
    let chk = tau2.wedge(psi).reduce(table);
    if !chk.is_zero() {
        return Err(StructureError::Inconsistent(format!("tau2 leaves Lambda2_14: {chk}")));
    }
    Ok(TorsionClasses { tau0, tau1, tau2, tau3 })
}

/// `T^c = (1/6) τ_0 φ - τ_1 ⌟ ψ - τ_3`.
pub fn characteristic_torsion(tc: &TorsionClasses, phi: &Form, psi: &Form, table: &SymbolTable) -> Form {
    phi.scale(&tc.tau0.scale(&q(1, 6)))
        .sub(&psi.contract_by(&tc.tau1))
        .sub(&tc.tau3)
        .reduce(table)
}

/// Torsion classes of a ring-defined G2 pair, using the ring's `d`.
pub fn ring_torsion_classes(ring: &GenRing, phi: &GenForm, psi: &GenForm) -> Result<TorsionClasses, StructureError> {
    torsion_class_extract(
        &ring.embed(phi),
        &ring.embed(psi),
        &ring.embed(&ring.d(phi)),
        &ring.embed(&ring.d(psi)),
        &ring.table,
    )
}

/// Rational basis of `Λ³₂₇ = {γ : γ∧φ = 0, γ∧ψ = 0}` for rational φ.
pub fn lambda3_27_basis(phi: &Form, psi: &Form) -> Result<Vec<Form>, StructureError> {
    let m1 = rational_matrix(DIM, 3, 6, |g| g.wedge(phi))?;
    let m2 = rational_matrix(DIM, 3, 7, |g| g.wedge(psi))?;
    let stacked: Vec<Vec<BigRational>> = m1.into_iter().chain(m2).collect();
    Ok(kernel(&stacked)
        .into_iter()
        .map(|v| Form::from_coords(DIM, 3, &v.into_iter().map(Scalar::from_rational).collect::<Vec<_>>()))
        .collect())
}

/// Dimensions of the two descriptions of `Λ²₁₄` (`β∧ψ = 0` and `β⌟φ = 0`)
/// and of their intersection.
pub fn lambda2_14_dims(phi: &Form, psi: &Form) -> Result<(usize, usize, usize), StructureError> {
    let a = rational_matrix(DIM, 2, 6, |b| b.wedge(psi))?;
    let b = rational_matrix(DIM, 2, 1, |x| phi.contract_by(x))?;
    let n = 21;
    let both: Vec<Vec<BigRational>> = a.iter().chain(b.iter()).cloned().collect();
    Ok((n - rank(&a), n - rank(&b), n - rank(&both)))
}

// ---------------------------------------------------------------------------
// H-homothetic deformations

/// `(α, δ) -> (cα/a, δ/c)`.
pub fn h_homothety(alpha: &Scalar, delta: &Scalar, a: &Scalar, c: &Scalar) -> Result<(Scalar, Scalar), StructureError> {
    let ainv = a.try_inverse().ok_or_else(|| StructureError::Homothety(a.to_string()))?;
    let cinv = c.try_inverse().ok_or_else(|| StructureError::Homothety(c.to_string()))?;
    Ok((&(c * alpha) * &ainv, delta * &cinv))
}

/// The same map over a quadratic extension.
pub fn h_homothety_quad(alpha: &Quad, delta: &Quad, a: &Quad, c: &Quad) -> Result<(Quad, Quad), StructureError> {
    let ainv = a.try_inverse().ok_or_else(|| StructureError::Homothety(a.to_string()))?;
    let cinv = c.try_inverse().ok_or_else(|| StructureError::Homothety(c.to_string()))?;
    Ok((c.mul(alpha)?.mul(&ainv)?, delta.mul(&cinv)?))
}

/// Sign of a rational, for the degenerate/positive/negative classification.
pub fn rational_sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Named forms

pub const FORM_NAMES: &[&str] = &[
    "phi.canonical.3ad",
    "psi.canonical.3ad",
    "Tc.3ad",
    "dTc.3ad",
    "tau3.3ad",
    "phi.theta.su3",
    "psi.theta.su3",
    "Tc.su3",
    "dTc.su3",
    "Omega+.su3",
    "Omega-.su3",
    "Phi.su3",
];

/// Canonical text of a named form, as a coframe form and in ring generators.
pub fn named_form(name: &str) -> Result<Option<(Form, String)>, StructureError> {
    let with3 = |f: &dyn Fn(&Ring3ad) -> Result<GenForm, StructureError>| -> Result<Option<(Form, String)>, StructureError> {
        let r = Ring3ad::new()?;
        let g = f(&r)?;
        Ok(Some((r.ring.embed(&g), r.ring.show(&g))))
    };
    let withsu = |f: &dyn Fn(&RingSu3) -> Result<GenForm, StructureError>| -> Result<Option<(Form, String)>, StructureError> {
        let r = RingSu3::new()?;
        let g = f(&r)?;
        Ok(Some((r.ring.embed(&g), r.ring.show(&g))))
    };
    match name {
        "phi.canonical.3ad" => with3(&|r| Ok(r.phi())),
        "psi.canonical.3ad" => with3(&|r| Ok(r.psi())),
        "Tc.3ad" => with3(&|r| {
            let tc = ring_torsion_classes(&r.ring, &r.phi(), &r.psi())?;
            r.ring.express(&characteristic_torsion(&tc, &r.ring.embed(&r.phi()), &r.ring.embed(&r.psi()), &r.ring.table))
        }),
        "dTc.3ad" => with3(&|r| Ok(r.ring.d(&r.torsion_expected()))),
        "tau3.3ad" => with3(&|r| r.ring.express(&ring_torsion_classes(&r.ring, &r.phi(), &r.psi())?.tau3)),
        "phi.theta.su3" => withsu(&|r| Ok(r.phi())),
        "psi.theta.su3" => withsu(&|r| Ok(r.psi())),
        "Tc.su3" => withsu(&|r| {
            let tc = ring_torsion_classes(&r.ring, &r.phi(), &r.psi())?;
            r.ring.express(&characteristic_torsion(&tc, &r.ring.embed(&r.phi()), &r.ring.embed(&r.psi()), &r.ring.table))
        }),
        "dTc.su3" => withsu(&|r| Ok(r.ring.d(&r.torsion_expected()))),
        "Omega+.su3" => withsu(&|r| Ok(r.op())),
        "Omega-.su3" => withsu(&|r| Ok(r.om())),
        "Phi.su3" => withsu(&|r| Ok(r.phi_form())),
        _ => Ok(None),
    }
}

/// `β` re-exported for callers that build 3ad expressions.
pub fn beta_3ad() -> Scalar {
    beta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn e(idx: &[usize]) -> Form {
        Form::e7(idx)
    }

    #[test]
    fn sp1_frame_values() {
        let f = build_sp1_forms();
        assert_eq!(f.phi[0], e(&[2, 3]).add(&e(&[4, 5])).add(&e(&[6, 7])).neg());
        assert_eq!(f.eta[0].wedge(&f.eta[1]).wedge(&f.eta[2]), e(&[1, 2, 3]));
        assert!(f.phi_h[0].wedge(&f.phi_h[1]).is_zero());
        assert_eq!(f.phi_h[0].wedge(&f.phi_h[0]), e(&[4, 5, 6, 7]).scale_q(&q(2, 1)));
    }

    #[test]
    fn almost_three_contact_compatibility() {
        // in this frame φ_i φ_j = φ_k + η_j ⊗ ξ_i and η_i ∘ φ_j = η_k; the
        // opposite sign on η_j ⊗ ξ_i already fails on ξ_j
        let f = build_sp1_forms();
        let mats: Vec<_> = f.phi.iter().map(|p| endomorphism_of(p).unwrap()).collect();
        for &(i, j, k) in &CYC {
            let prod = crate::linalg::mat_mul(&mats[i], &mats[j]);
            for a in 0..DIM {
                for b in 0..DIM {
                    let corr = if a == i && b == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(prod[a][b], &mats[k][a][b] + corr);
                    // η_i(φ_j e_b) = η_k(e_b)
                    let want = if b == k { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(mats[j][i][b], want);
                }
            }
        }
    }

    #[test]
    fn su3_frame_values() {
        let f = build_su3_forms();
        assert_eq!(f.omega_p, e(&[3, 5, 7]).sub(&e(&[3, 4, 6])).sub(&e(&[2, 5, 6])).sub(&e(&[2, 4, 7])));
        assert_eq!(f.omega_m, e(&[3, 5, 6]).add(&e(&[3, 4, 7])).add(&e(&[2, 5, 7])).sub(&e(&[2, 4, 6])));
        assert!(f.phi.wedge(&f.omega_p).is_zero());
        assert!(f.phi.wedge(&f.omega_m).is_zero());
        let phi3 = f.phi.wedge(&f.phi).wedge(&f.phi);
        assert_eq!(f.omega_p.wedge(&f.omega_m), phi3.scale_q(&q(2, 3)));
        assert_eq!(f.omega_p.wedge(&f.omega_m), e(&[2, 3, 4, 5, 6, 7]).scale_q(&q(-4, 1)));
        // (1/6)Φ³ = ((-1)^3 i^3 / 8) Ω∧Ω̄ = (i/8)(-2i)Ω_+∧Ω_- = (1/4)Ω_+∧Ω_-
        assert_eq!(phi3.scale_q(&q(1, 6)), f.omega_p.wedge(&f.omega_m).scale_q(&q(1, 4)));
    }

    #[test]
    fn rings_build_and_d() {
        let r = Ring3ad::new().unwrap();
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        let want = r.p(0).scale(&a.scale(&q(2, 1))).sub(&r.eta_jk(0).scale(&d.scale(&q(2, 1))));
        assert_eq!(r.ring.d(&r.eta(0)), want);
        let s = RingSu3::new().unwrap();
        assert!(s.ring.d(&s.ring.d(&s.op())).is_zero());
    }

    #[test]
    fn canonical_pair() {
        let r = Ring3ad::new().unwrap();
        let phi = r.ring.embed(&r.phi());
        let want = e(&[1, 2, 3])
            .sub(&e(&[1, 4, 5]))
            .sub(&e(&[1, 6, 7]))
            .sub(&e(&[2, 4, 6]))
            .add(&e(&[2, 5, 7]))
            .sub(&e(&[3, 4, 7]))
            .sub(&e(&[3, 5, 6]));
        assert_eq!(phi, want);
        assert_eq!(phi.hodge_star().unwrap(), r.ring.embed(&r.psi()));
        check_g2_pair(&phi, &r.ring.embed(&r.psi()), &SymbolTable::plain()).unwrap();
        assert_eq!(r.ring.star(&r.phi()).unwrap(), r.psi());
        let dphi = r.ring.embed(&r.ring.d(&r.phi()));
        assert_eq!(dphi.inner(&r.ring.embed(&r.psi())).unwrap(), (sym(Sym::Alpha).scale(&q(2, 1)) + sym(Sym::Delta)).scale(&q(12, 1)));
    }

    #[test]
    fn lambda_splittings() {
        let r = Ring3ad::new().unwrap();
        let phi = r.ring.embed(&r.phi());
        let psi = r.ring.embed(&r.psi());
        assert_eq!(lambda3_27_basis(&phi, &psi).unwrap().len(), 27);
        assert_eq!(lambda2_14_dims(&phi, &psi).unwrap(), (14, 14, 14));
    }

    #[test]
    fn homothety() {
        let (a, d) = (sym(Sym::Alpha), sym(Sym::Delta));
        assert_eq!(h_homothety(&a, &d, &Scalar::one(), &Scalar::one()).unwrap(), (a.clone(), d.clone()));
        let c = Scalar::frac(3, 2);
        let (at, dt) = h_homothety(&Scalar::one(), &Scalar::zero(), &Scalar::int(5), &c).unwrap();
        assert_eq!((at, dt), (Scalar::frac(3, 10), Scalar::zero()));
        assert!(h_homothety(&a, &d, &Scalar::zero(), &c).is_err());
    }

    #[test]
    fn named_forms_resolve() {
        for n in FORM_NAMES {
            assert!(named_form(n).unwrap().is_some(), "{n}");
        }
        assert!(named_form("nope").unwrap().is_none());
    }

    fn arb_genform() -> impl Strategy<Value = Vec<(usize, i64, i32)>> {
        prop::collection::vec((0usize..64, -3i64..4, 0i32..2), 0..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn d_squared_vanishes(ts in arb_genform()) {
            let r = Ring3ad::new().unwrap();
            let mut x = GenForm::zero();
            for (bits, c, ea) in ts {
                let m: GenMono = (0..6).map(|i| ((bits >> i) & 1) as u8).collect();
                x = x.add(&GenForm::term(m, Scalar::monomial(q(c, 1), &[(Sym::Alpha, ea)])));
            }
            let x = r.ring.normalize(&x);
            prop_assert!(r.ring.d(&r.ring.d(&x)).is_zero());
        }

        #[test]
        fn su3_d_squared_vanishes(bits in 0usize..16, c in -3i64..4) {
            let r = RingSu3::new().unwrap();
            let m: GenMono = (0..4).map(|i| ((bits >> i) & 1) as u8).collect();
            let x = r.ring.normalize(&GenForm::term(m, Scalar::monomial(q(c, 1), &[(Sym::S, 1)])));
            prop_assert!(r.ring.d(&r.ring.d(&x)).is_zero());
        }
    }
}
