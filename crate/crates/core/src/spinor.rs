//! Complex and real Clifford representations in odd dimension `2m+1`,
//! spinor bases, charge conjugation, purity, the `Σ_r` splitting and the
//! reconstruction of structure forms from spinor bilinears.
//!
//! Entries are Gaussian rationals. A spinor is stored as `√w · comps` with
//! `w` a squarefree positive integer, which keeps every `1/√2` exact.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exterior::{basis_masks, indices, Form, Mask};
use crate::linalg::{kernel, rank, Mat};
use crate::scalar::{rat, Scalar, Sym};
use crate::structures::build_sp1_forms;

pub type Gauss = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error("zero spinor")]
    ZeroSpinor,
    #[error("bilinear is not real: {0}")]
    NotReal(String),
    #[error("form coefficient is not rational: {0}")]
    NotRational(String),
    #[error("weights {0} and {1} do not combine rationally")]
    Irrational(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    Dim(usize, usize),
    #[error("unknown spinor label `{0}`")]
    UnknownLabel(String),
    #[error("eigenvalue multiplicity mismatch for r = {r}: {got} instead of {want}")]
    Multiplicity { r: usize, got: usize, want: usize },
}

pub fn gauss(re: i64, im: i64) -> Gauss {
    Complex::new(rat(re, 1), rat(im, 1))
}

fn gq(re: BigRational) -> Gauss {
    Complex::new(re, BigRational::zero())
}

pub fn i_pow(k: i64) -> Gauss {
    match k.rem_euclid(4) {
        0 => gauss(1, 0),
        1 => gauss(0, 1),
        2 => gauss(-1, 0),
        _ => gauss(0, -1),
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Matrices

/// Dense square matrix over the Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Gauss>,
}

impl CMatrix {
    pub fn zero(n: usize) -> Self {
        CMatrix { n, data: vec![Gauss::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Gauss::one() } else { Gauss::zero() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Gauss) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_ints(rows: &[&[(i64, i64)]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| gauss(rows[i][j].0, rows[i][j].1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Gauss {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] = &out.data[i * n + j] + a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Gauss) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> CMatrix {
        self.scale(&gauss(-1, 0))
    }

    pub fn kron(&self, o: &CMatrix) -> CMatrix {
        let (n, m) = (self.n, o.n);
        CMatrix::from_fn(n * m, |i, j| self.get(i / m, j / m) * o.get(i % m, j % m))
    }

    pub fn kron_all(ms: &[CMatrix]) -> CMatrix {
        ms.iter().fold(CMatrix::identity(1), |acc, m| acc.kron(m))
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(Complex::conj).collect() }
    }

    pub fn adjoint(&self) -> CMatrix {
        self.transpose().conj()
    }

    pub fn apply(&self, v: &[Gauss]) -> Vec<Gauss> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Gauss::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.im.is_zero())
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<Gauss> {
        let c = self.get(0, 0).clone();
        (*self == CMatrix::identity(self.n).scale(&c)).then_some(c)
    }

    pub fn rows(&self) -> Mat<Gauss> {
        (0..self.n).map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows())
    }
}

/// The 2x2 building blocks `g₁, g₂, E, T`.
pub fn g1() -> CMatrix {
    CMatrix::from_ints(&[&[(0, 1), (0, 0)], &[(0, 0), (0, -1)]])
}

pub fn g2() -> CMatrix {
    CMatrix::from_ints(&[&[(0, 0), (0, 1)], &[(0, 1), (0, 0)]])
}

pub fn e2() -> CMatrix {
    CMatrix::identity(2)
}

pub fn t2() -> CMatrix {
    CMatrix::from_ints(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]])
}

// ---------------------------------------------------------------------------
// Complex representation

/// Tensor placement of the 2x2 blocks for `e_{2a}`, `e_{2a+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Labelling {
    /// `ρ(e_{2a}) = E^{⊗(a-1)} ⊗ g₂ ⊗ T^{⊗(m-a)}`, `ρ(e_{2a+1}) = E^{⊗(a-1)} ⊗ g₁ ⊗ T^{⊗(m-a)}`.
    /// This is the placement for which `u(1,…,1)` spans `Σ₀` of
    /// `Φ = -Σ e^{2a,2a+1}` and the real dictionary holds index by index.
    Adapted,
    /// `ρ(e_{2a}) = E^{⊗(m-a)} ⊗ g₁ ⊗ T^{⊗(a-1)}`, `ρ(e_{2a+1}) = E^{⊗(m-a)} ⊗ g₂ ⊗ T^{⊗(a-1)}`.
    Printed,
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub m: usize,
    pub labelling: Labelling,
    gens: Vec<CMatrix>,
}

pub fn build_rep(m: usize) -> CliffordRep {
    build_rep_with(m, Labelling::Adapted)
}

pub fn build_rep_with(m: usize, labelling: Labelling) -> CliffordRep {
    assert!(m >= 1, "m must be positive");
    let mut gens = vec![CMatrix::kron_all(&vec![t2(); m]).scale(&gauss(0, 1))];
    for a in 1..=m {
        let (even, odd) = match labelling {
            Labelling::Adapted => {
                let block = |g: CMatrix| {
                    let mut f = vec![e2(); a - 1];
                    f.push(g);
                    f.extend(vec![t2(); m - a]);
                    CMatrix::kron_all(&f)
                };
                (block(g2()), block(g1()))
            }
            Labelling::Printed => {
                let block = |g: CMatrix| {
                    let mut f = vec![e2(); m - a];
                    f.push(g);
                    f.extend(vec![t2(); a - 1]);
                    CMatrix::kron_all(&f)
                };
                (block(g1()), block(g2()))
            }
        };
        gens.push(even);
        gens.push(odd);
    }
    CliffordRep { m, labelling, gens }
}

#[derive(Clone, Debug)]
pub struct CliffordReport {
    pub m: usize,
    pub failing_pairs: Vec<(usize, usize)>,
    pub volume: Option<Gauss>,
    pub volume_expected: Gauss,
}

impl CliffordReport {
    pub fn relations_ok(&self) -> bool {
        self.failing_pairs.is_empty()
    }

    pub fn volume_ok(&self) -> bool {
        self.volume.as_ref() == Some(&self.volume_expected)
    }
}

impl CliffordRep {
    pub fn n(&self) -> usize {
        2 * self.m + 1
    }

    pub fn spin_dim(&self) -> usize {
        1 << self.m
    }

    /// `ρ(e_μ)`, 1-based.
    pub fn gen(&self, mu: usize) -> &CMatrix {
        &self.gens[mu - 1]
    }

    pub fn gens(&self) -> &[CMatrix] {
        &self.gens
    }

    /// Pairs violating `ρ(e_μ)ρ(e_ν) + ρ(e_ν)ρ(e_μ) = -2δ_{μν}`.
    pub fn clifford_failures(&self) -> Vec<(usize, usize)> {
        clifford_failures(&self.gens)
    }

    pub fn volume(&self) -> Option<Gauss> {
        self.gens.iter().fold(CMatrix::identity(self.spin_dim()), |acc, g| acc.mul(g)).as_scalar()
    }

    pub fn report(&self) -> CliffordReport {
        CliffordReport {
            m: self.m,
            failing_pairs: self.clifford_failures(),
            volume: self.volume(),
            volume_expected: i_pow(-(self.m as i64 + 1)),
        }
    }

    /// Clifford action of a form with rational coefficients.
    pub fn act(&self, f: &Form) -> Result<CMatrix, SpinorError> {
        if f.dim() != self.n() {
            return Err(SpinorError::Dim(f.dim(), self.n()));
        }
        let mut out = CMatrix::zero(self.spin_dim());
        for (mask, c) in f.terms() {
            let q = c.as_rational().ok_or_else(|| SpinorError::NotRational(c.to_string()))?;
            out = out.add(&self.product(&indices(*mask)).scale(&gq(q)));
        }
        Ok(out)
    }

    /// `ρ(e_{i₁}) ⋯ ρ(e_{i_k})`, 1-based indices.
    pub fn product(&self, idx: &[usize]) -> CMatrix {
        idx.iter().fold(CMatrix::identity(self.spin_dim()), |acc, i| acc.mul(self.gen(*i)))
    }

    pub fn apply(&self, mu: usize, s: &Spinor) -> Spinor {
        s.map(self.gen(mu))
    }
}

fn clifford_failures(gens: &[CMatrix]) -> Vec<(usize, usize)> {
    let n = gens.first().map_or(0, CMatrix::n);
    let mut bad = Vec::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            let ac = gens[a].mul(&gens[b]).add(&gens[b].mul(&gens[a]));
            let want = if a == b { CMatrix::identity(n).scale(&gauss(-2, 0)) } else { CMatrix::zero(n) };
            if ac != want {
                bad.push((a + 1, b + 1));
            }
        }
    }
    bad
}

// ---------------------------------------------------------------------------
// Spinors

fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = r² · s with s squarefree; n is small in every use here
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    let mut x = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= x {
        let mut e = 0;
        while (&x % &p).is_zero() {
            x /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            r *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    (r, s * x)
}

/// `√weight · comps`, weight a squarefree positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spinor {
    comps: Vec<Gauss>,
    weight: BigInt,
}

impl Spinor {
    /// `√w · comps` for a positive rational `w`, brought to canonical form.
    pub fn new(comps: Vec<Gauss>, w: &BigRational) -> Self {
        assert!(w.is_positive(), "weight must be positive");
        // √(p/q) = √(pq)/q = r√s/q
        let pq = w.numer() * w.denom();
        let (r, s) = squarefree_split(&pq);
        let f = gq(BigRational::new(r, w.denom().clone()));
        let comps = comps.into_iter().map(|c| c * &f).collect();
        Spinor { comps, weight: s }
    }

    pub fn from_comps(comps: Vec<Gauss>) -> Self {
        Spinor { comps, weight: BigInt::one() }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Gauss] {
        &self.comps
    }

    pub fn weight(&self) -> &BigInt {
        &self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    /// `u(ε₁,…,ε_m) = u(ε₁) ⊗ ⋯ ⊗ u(ε_m)`, `u(±1) = (1, ∓i)/√2`.
    pub fn u(eps: &[i8]) -> Self {
        let mut comps = vec![Gauss::one()];
        for e in eps {
            let second = gauss(0, if *e > 0 { -1 } else { 1 });
            comps = comps.iter().flat_map(|c| [c.clone(), c * &second]).collect();
        }
        Spinor::new(comps, &BigRational::new(BigInt::one(), BigInt::one() << eps.len()))
    }

    pub fn map(&self, m: &CMatrix) -> Spinor {
        Spinor { comps: m.apply(&self.comps), weight: self.weight.clone() }
    }

    pub fn conj(&self) -> Spinor {
        Spinor { comps: self.comps.iter().map(Complex::conj).collect(), weight: self.weight.clone() }
    }

    pub fn scale(&self, c: &Gauss) -> Spinor {
        Spinor { comps: self.comps.iter().map(|x| x * c).collect(), weight: self.weight.clone() }
    }

    /// Multiplication by `1/√2`.
    pub fn div_sqrt2(&self) -> Spinor {
        Spinor::new(self.comps.clone(), &BigRational::new(self.weight.clone(), BigInt::from(2)))
    }

    pub fn add(&self, o: &Spinor) -> Result<Spinor, SpinorError> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.weight != o.weight {
            return Err(SpinorError::Irrational(self.weight.to_string(), o.weight.to_string()));
        }
        Ok(Spinor { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(), weight: self.weight.clone() })
    }

    pub fn sub(&self, o: &Spinor) -> Result<Spinor, SpinorError> {
        self.add(&o.scale(&gauss(-1, 0)))
    }

    /// Equality as vectors (zero spinors agree regardless of weight).
    pub fn same(&self, o: &Spinor) -> bool {
        (self.is_zero() && o.is_zero()) || self == o
    }

    /// Hermitian product `⟨x, y⟩ = Σ conj(x_i) y_i`, antilinear in `x`.
    pub fn herm(&self, o: &Spinor) -> Result<Gauss, SpinorError> {
        let raw = self.comps.iter().zip(&o.comps).fold(Gauss::zero(), |acc, (a, b)| acc + a.conj() * b);
        if raw.is_zero() {
            return Ok(raw);
        }
        let (r, s) = squarefree_split(&(&self.weight * &o.weight));
        if !s.is_one() {
            return Err(SpinorError::Irrational(self.weight.to_string(), o.weight.to_string()));
        }
        Ok(raw * gq(BigRational::from(r)))
    }

    pub fn norm_sq(&self) -> BigRational {
        self.herm(self).map(|c| c.re).unwrap_or_default()
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.weight.is_one() {
            write!(f, "sqrt({}) * ", self.weight)?;
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| {
                if c.im.is_zero() {
                    c.re.to_string()
                } else if c.re.is_zero() {
                    format!("{}i", c.im)
                } else {
                    format!("{}{:+}i", c.re, c.im)
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Bilinears and forms

/// `Σ_I ⟨x, e_I · y⟩ e^I` over increasing multi-indices of length `k`, as
/// real and imaginary parts.
pub fn bilinear(rep: &CliffordRep, x: &Spinor, y: &Spinor, k: usize) -> Result<(Form, Form), SpinorError> {
    let n = rep.n();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for mask in basis_masks(n, k) {
        let c = x.herm(&y.map(&rep.product(&indices(mask))))?;
        re.push((mask, Scalar::from_rational(c.re)));
        im.push((mask, Scalar::from_rational(c.im)));
    }
    Ok((Form::from_terms(n, re), Form::from_terms(n, im)))
}

fn real_part_checked(re: Form, im: Form) -> Result<Form, SpinorError> {
    if im.is_zero() {
        Ok(re)
    } else {
        Err(SpinorError::NotReal(im.to_string()))
    }
}

/// `φ = -Σ ⟨Ψ, e_abc Ψ⟩ e^abc` (k = 3) and `ψ = -Σ ⟨Ψ, e_abcd Ψ⟩ e^abcd`
/// (k = 4) for a Majorana spinor; `k = 1, 2` give the almost contact pair
/// of a `Σ₀` Dirac spinor.
pub fn form_from_spinor(rep: &CliffordRep, psi: &Spinor, k: usize) -> Result<Form, SpinorError> {
    if psi.is_zero() {
        return Err(SpinorError::ZeroSpinor);
    }
    let (re, im) = bilinear(rep, psi, psi, k)?;
    let m = rep.m as i64;
    match k {
        // η = i (-1)^{m+1} ⟨Ψ, e_μ Ψ⟩: the bilinear is imaginary
        1 => real_part_checked(im.scale_q(&rat(-sign(m + 1), 1)), re),
        // Φ = -i ⟨Ψ, e_ab Ψ⟩
        2 => real_part_checked(im, re),
        _ => real_part_checked(re.neg(), im),
    }
}

/// `Ω = (-1)^{m(m+1)/2} i^m Σ ⟨Ψ, e_I Ψ̄⟩ e^I`, returned as `(Ω₊, Ω₋)`.
pub fn holomorphic_form_from_spinor(rep: &CliffordRep, psi: &Spinor) -> Result<(Form, Form), SpinorError> {
    if psi.is_zero() {
        return Err(SpinorError::ZeroSpinor);
    }
    let m = rep.m as i64;
    let (re, im) = bilinear(rep, psi, &psi.conj(), rep.m)?;
    let c = i_pow(m).scale(rat(sign(m * (m + 1) / 2), 1));
    // (c_re + i c_im)(re + i im)
    let cr = Scalar::from_rational(c.re.clone());
    let ci = Scalar::from_rational(c.im.clone());
    let op = re.scale(&cr).sub(&im.scale(&ci));
    let om = re.scale(&ci).add(&im.scale(&cr));
    Ok((op, om))
}

/// For odd `m`: `η = Σ ⟨Ψ₋, e_μ Ψ₊⟩ e^μ`, `Φ = -Σ ⟨Ψ₋, e_ab Ψ₊⟩ e^ab`.
pub fn contact_from_pair(rep: &CliffordRep, plus: &Spinor, minus: &Spinor) -> Result<(Form, Form), SpinorError> {
    let (e_re, e_im) = bilinear(rep, minus, plus, 1)?;
    let (p_re, p_im) = bilinear(rep, minus, plus, 2)?;
    Ok((real_part_checked(e_re, e_im)?, real_part_checked(p_re.neg(), p_im)?))
}

/// Real bilinear `-Σ ⟨x, e_abc y⟩ e^abc` symmetrized in `x, y`.
fn form3_sym(rep: &CliffordRep, x: &Spinor, y: &Spinor) -> Result<Form, SpinorError> {
    let (a, _) = bilinear(rep, x, y, 3)?;
    let (b, _) = bilinear(rep, y, x, 3)?;
    Ok(a.add(&b).neg())
}

/// 3-form of `Ψ(θ) = cos(θ/2) Ψ₊ + sin(θ/2) Ψ₋` in terms of `s = sin θ`,
/// `c = cos θ`, via `cos² = (1+c)/2`, `sin² = (1-c)/2`, `sin·cos = s/2`.
pub fn form3_of_theta_family(rep: &CliffordRep, plus: &Spinor, minus: &Spinor) -> Result<Form, SpinorError> {
    let pp = form_from_spinor(rep, plus, 3)?;
    let mm = form_from_spinor(rep, minus, 3)?;
    let pm = form3_sym(rep, plus, minus)?;
    let (s, c) = (Scalar::sym(Sym::S), Scalar::sym(Sym::C));
    let half = rat(1, 2);
    let cos2 = (Scalar::one() + c.clone()).scale(&half);
    let sin2 = (Scalar::one() - c).scale(&half);
    Ok(pp.scale(&cos2).add(&mm.scale(&sin2)).add(&pm.scale(&s.scale(&half))))
}

// ---------------------------------------------------------------------------
// Adapted SU(m) forms

/// `η = e¹`, `Φ = -Σ_a e^{2a,2a+1}`, `Ω = ∧_a (e^{2a+1} + i e^{2a})` in
/// dimension `2m+1`, with `Ω = Ω₊ + iΩ₋`.
pub fn su_forms(m: usize) -> (Form, Form, Form, Form) {
    let n = 2 * m + 1;
    let eta = Form::e(n, &[1]);
    let phi = (1..=m).fold(Form::zero(n), |acc, a| acc.sub(&Form::e(n, &[2 * a, 2 * a + 1])));
    let (mut re, mut im) = (Form::one(n), Form::zero(n));
    for a in 1..=m {
        let (x, y) = (Form::e(n, &[2 * a + 1]), Form::e(n, &[2 * a]));
        // (re + i im)(x + i y)
        let nre = re.wedge(&x).sub(&im.wedge(&y));
        let nim = re.wedge(&y).add(&im.wedge(&x));
        re = nre;
        im = nim;
    }
    (eta, phi, re, im)
}

/// `φ e_b = Σ_a Φ(e_a, e_b) e_a` as a list of columns (1-based vectors).
fn endo(two_form: &Form) -> Vec<Vec<BigRational>> {
    let n = two_form.dim();
    (1..=n)
        .map(|b| {
            (1..=n)
                .map(|a| two_form.contract(a).contract(b).coeff(0).as_rational().unwrap_or_default())
                .collect()
        })
        .collect()
}

fn vector_action(rep: &CliffordRep, v: &[BigRational]) -> CMatrix {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(CMatrix::zero(rep.spin_dim()), |acc, (i, c)| acc.add(&rep.gen(i + 1).scale(&gq(c.clone()))))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub struct SigmaDecomposition {
    pub m: usize,
    pub projectors: Vec<CMatrix>,
    /// Dimensions from the eigenspace kernels.
    pub dims: Vec<usize>,
    pub phi_eigen_ok: bool,
    pub xi_eigen_ok: bool,
    pub projectors_ok: bool,
    pub sigma0_membership_ok: bool,
    pub sigma_m_membership_ok: bool,
}

impl SigmaDecomposition {
    pub fn all_ok(&self) -> bool {
        self.phi_eigen_ok
            && self.xi_eigen_ok
            && self.projectors_ok
            && self.sigma0_membership_ok
            && self.sigma_m_membership_ok
            && self.dims.iter().enumerate().all(|(r, d)| *d == binomial(self.m, r))
    }
}

fn eps_with_r(m: usize, bits: usize) -> (Vec<i8>, usize) {
    let eps: Vec<i8> = (0..m).map(|a| if bits & (1 << (m - 1 - a)) != 0 { -1 } else { 1 }).collect();
    let r = eps.iter().filter(|e| **e < 0).count();
    (eps, r)
}

/// `Σ = Σ₀ ⊕ ⋯ ⊕ Σ_m` with `Φ|Σ_r = -i(2r-m)`, `ξ|Σ_r = i(-1)^r(-1)^m`,
/// `dim Σ_r = C(m, r)`.
pub fn sigma_decompose(rep: &CliffordRep, xi: &Form, phi: &Form) -> Result<SigmaDecomposition, SpinorError> {
    let (m, nn) = (rep.m, rep.spin_dim());
    let phi_cl = rep.act(phi)?;
    let xi_cl = rep.act(xi)?;
    let mut dims = Vec::new();
    let mut xi_ok = true;
    for r in 0..=m {
        let lam = gauss(0, -(2 * r as i64 - m as i64));
        let shifted = phi_cl.sub(&CMatrix::identity(nn).scale(&lam));
        let ker = kernel(&shifted.rows());
        let mu = gauss(0, sign(r as i64 + m as i64));
        for v in &ker {
            xi_ok &= xi_cl.apply(v) == v.iter().map(|x| x * &mu).collect::<Vec<_>>();
        }
        if ker.len() != binomial(m, r) {
            return Err(SpinorError::Multiplicity { r, got: ker.len(), want: binomial(m, r) });
        }
        dims.push(ker.len());
    }
    // projectors from the u(ε) basis
    let mut projectors = vec![CMatrix::zero(nn); m + 1];
    for bits in 0..nn {
        let (eps, r) = eps_with_r(m, bits);
        let u = Spinor::u(&eps);
        // |u⟩⟨u| = w · comps comps†
        let (c, w) = (u.comps(), gq(BigRational::from(u.weight().clone())));
        let outer = CMatrix::from_fn(nn, |i, j| &c[i] * c[j].conj() * &w);
        projectors[r] = projectors[r].add(&outer);
    }
    let mut phi_ok = true;
    let mut xi_ok2 = true;
    let mut sum = CMatrix::zero(nn);
    for (r, p) in projectors.iter().enumerate() {
        phi_ok &= phi_cl.mul(p) == p.scale(&gauss(0, -(2 * r as i64 - m as i64)));
        xi_ok2 &= xi_cl.mul(p) == p.scale(&gauss(0, sign(r as i64 + m as i64)));
        sum = sum.add(p);
    }
    let mut proj_ok = sum == CMatrix::identity(nn);
    for (r, p) in projectors.iter().enumerate() {
        for (s, q) in projectors.iter().enumerate() {
            let want = if r == s { p.clone() } else { CMatrix::zero(nn) };
            proj_ok &= p.mul(q) == want;
        }
        proj_ok &= p.rank() == binomial(m, r);
    }
    // Σ₀: -φ(X)Ψ + iXΨ + (-1)^m η(X)Ψ = 0; Σ_m: -φ(X)Ψ - iXΨ - η(X)Ψ = 0
    let phi_end = endo(phi);
    let u0 = Spinor::u(&vec![1; m]);
    let um = u0.conj();
    let (mut s0, mut sm) = (true, true);
    for mu in 1..=rep.n() {
        let phx = vector_action(rep, &phi_end[mu - 1]);
        let x = rep.gen(mu);
        let eta_x = if xi.coeff_at(&[mu]).is_zero() { gauss(0, 0) } else { gq(xi.coeff_at(&[mu]).as_rational().unwrap_or_default()) };
        let id = CMatrix::identity(nn);
        let op0 = phx.neg().add(&x.scale(&gauss(0, 1))).add(&id.scale(&(eta_x.clone() * gauss(sign(m as i64), 0))));
        let opm = phx.neg().sub(&x.scale(&gauss(0, 1))).sub(&id.scale(&eta_x));
        s0 &= u0.map(&op0).is_zero();
        sm &= um.map(&opm).is_zero();
    }
    Ok(SigmaDecomposition {
        m,
        projectors,
        dims,
        phi_eigen_ok: phi_ok,
        xi_eigen_ok: xi_ok && xi_ok2,
        projectors_ok: proj_ok,
        sigma0_membership_ok: s0,
        sigma_m_membership_ok: sm,
    })
}

#[derive(Clone, Debug)]
pub struct OmegaActionReport {
    pub m: usize,
    /// `Ω₊Ψ = i^m 2^{m-1} Ψ̄`, `Ω₋Ψ = -i^{m+1} 2^{m-1} Ψ̄`,
    /// `Ω₊Ψ̄ = (-1)^{m(m-1)/2} i^m 2^{m-1} Ψ`, `Ω₋Ψ̄ = (-1)^{m(m-1)/2} i^{m+1} 2^{m-1} Ψ`.
    pub constants_ok: [bool; 4],
    /// `Ω± |Σ_r = 0` for `0 < r < m`.
    pub middle_vanish: bool,
}

pub fn omega_action(rep: &CliffordRep) -> Result<OmegaActionReport, SpinorError> {
    let m = rep.m;
    let (_, _, op, om) = su_forms(m);
    let (opc, omc) = (rep.act(&op)?, rep.act(&om)?);
    let psi = Spinor::u(&vec![1; m]);
    let bar = psi.conj();
    let mi = m as i64;
    let two = gq(BigRational::from(BigInt::one() << (m - 1)));
    let sgn = gauss(sign(mi * (mi - 1) / 2), 0);
    let constants_ok = [
        psi.map(&opc).same(&bar.scale(&(i_pow(mi) * &two))),
        psi.map(&omc).same(&bar.scale(&(-i_pow(mi + 1) * &two))),
        bar.map(&opc).same(&psi.scale(&(&sgn * i_pow(mi) * &two))),
        bar.map(&omc).same(&psi.scale(&(&sgn * i_pow(mi + 1) * &two))),
    ];
    let mut middle_vanish = true;
    for bits in 0..rep.spin_dim() {
        let (eps, r) = eps_with_r(m, bits);
        if r > 0 && r < m {
            let u = Spinor::u(&eps);
            middle_vanish &= u.map(&opc).is_zero() && u.map(&omc).is_zero();
        }
    }
    Ok(OmegaActionReport { m, constants_ok, middle_vanish })
}

// ---------------------------------------------------------------------------
// Purity

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub kernel_dim: usize,
    pub isotropic: bool,
}

/// `dim_C ker(j_Ψ)` for `j_Ψ(v) = v·Ψ`, plus isotropy of the kernel under
/// the complex-bilinear extension of the metric.
pub fn purity_dim(rep: &CliffordRep, psi: &Spinor) -> Result<PurityReport, SpinorError> {
    if psi.is_zero() {
        return Err(SpinorError::ZeroSpinor);
    }
    let cols: Vec<Vec<Gauss>> = (1..=rep.n()).map(|mu| rep.gen(mu).apply(psi.comps())).collect();
    let a: Mat<Gauss> = (0..rep.spin_dim()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let ker = kernel(&a);
    let isotropic = ker.iter().all(|v| {
        ker.iter().all(|w| v.iter().zip(w).fold(Gauss::zero(), |acc, (x, y)| acc + x * y).is_zero())
    });
    Ok(PurityReport { kernel_dim: ker.len(), isotropic })
}

// ---------------------------------------------------------------------------
// Real representation

/// `E_ij`: entry `(i,j) = -1`, `(j,i) = +1`, 1-based.
pub fn e_ij(i: usize, j: usize) -> CMatrix {
    CMatrix::from_fn(8, |r, c| {
        if (r, c) == (i - 1, j - 1) {
            gauss(-1, 0)
        } else if (r, c) == (j - 1, i - 1) {
            gauss(1, 0)
        } else {
            gauss(0, 0)
        }
    })
}

fn signed_sum(terms: &[(i64, usize, usize)]) -> CMatrix {
    terms.iter().fold(CMatrix::zero(8), |acc, (s, i, j)| acc.add(&e_ij(*i, *j).scale(&gauss(*s, 0))))
}

/// Real representation on `ℝ⁸`. `e67_sign` is the sign of `E_67` in
/// `ρ^R(e₃)`; only `+1` satisfies the Clifford relations.
pub fn build_real_rep_with(e67_sign: i64) -> Vec<CMatrix> {
    vec![
        signed_sum(&[(1, 1, 2), (1, 3, 4), (1, 5, 6), (1, 7, 8)]),
        signed_sum(&[(1, 1, 3), (-1, 2, 4), (-1, 5, 7), (1, 6, 8)]),
        signed_sum(&[(1, 1, 4), (1, 2, 3), (1, 5, 8), (e67_sign, 6, 7)]),
        signed_sum(&[(1, 1, 5), (-1, 2, 6), (1, 3, 7), (-1, 4, 8)]),
        signed_sum(&[(1, 1, 6), (1, 2, 5), (-1, 3, 8), (-1, 4, 7)]),
        signed_sum(&[(1, 1, 7), (-1, 2, 8), (-1, 3, 5), (1, 4, 6)]),
        signed_sum(&[(1, 1, 8), (1, 2, 7), (1, 3, 6), (1, 4, 5)]),
    ]
}

pub fn build_real_rep() -> Vec<CMatrix> {
    build_real_rep_with(1)
}

pub fn real_clifford_failures(gens: &[CMatrix]) -> Vec<(usize, usize)> {
    clifford_failures(gens)
}

/// Majorana basis `v₁ … v₈` in the complex `m = 3` spinor space.
pub fn majorana_basis() -> Vec<Spinor> {
    let u = |a: i8, b: i8, c: i8| Spinor::u(&[a, b, c]);
    let pair = |x: Spinor, y: Spinor, plus: bool, c: Gauss| -> Spinor {
        let s = if plus { x.add(&y) } else { x.sub(&y) };
        s.expect("equal weights").scale(&c).div_sqrt2()
    };
    let (one, mone, i, mi) = (gauss(1, 0), gauss(-1, 0), gauss(0, 1), gauss(0, -1));
    vec![
        pair(u(1, 1, 1), u(-1, -1, -1), true, one.clone()),
        pair(u(1, 1, 1), u(-1, -1, -1), false, mi.clone()),
        pair(u(-1, 1, 1), u(1, -1, -1), false, one.clone()),
        pair(u(-1, 1, 1), u(1, -1, -1), true, i.clone()),
        pair(u(1, -1, 1), u(-1, 1, -1), true, mone),
        pair(u(1, -1, 1), u(-1, 1, -1), false, mi),
        pair(u(1, 1, -1), u(-1, -1, 1), false, one),
        pair(u(1, 1, -1), u(-1, -1, 1), true, i),
    ]
}

/// `C = T ⊗ E ⊗ T`.
pub fn charge_conjugation() -> CMatrix {
    CMatrix::kron_all(&[t2(), e2(), t2()])
}

/// `J(u) = C ū`.
pub fn j_map(u: &Spinor) -> Spinor {
    u.conj().map(&charge_conjugation())
}

#[derive(Clone, Debug)]
pub struct RealStructureReport {
    pub c_real_symmetric: bool,
    pub c_squared_identity: bool,
    pub c_anticommutes: bool,
    pub j_involution: bool,
    pub majorana_fixed: bool,
    pub v_orthonormal: bool,
    /// `ρ(e_μ) v_k = Σ_l ρ^R(e_μ)_{lk} v_l` for every `μ, k`.
    pub dictionary_ok: bool,
    /// The same with the printed labelling of the complex generators.
    pub dictionary_printed_labelling_ok: bool,
    pub real_failures: Vec<(usize, usize)>,
    pub real_failures_printed_e3: Vec<(usize, usize)>,
}

fn dictionary(rep: &CliffordRep, real: &[CMatrix], v: &[Spinor]) -> bool {
    (1..=7).all(|mu| {
        (0..8).all(|k| {
            let lhs = rep.apply(mu, &v[k]);
            let rhs = (0..8).fold(Spinor::from_comps(vec![Gauss::zero(); 8]), |acc, l| {
                let c = real[mu - 1].get(l, k);
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&v[l].scale(c)).expect("equal weights")
                }
            });
            lhs.same(&rhs)
        })
    })
}

pub fn real_structure_report() -> RealStructureReport {
    let rep = build_rep(3);
    let c = charge_conjugation();
    let v = majorana_basis();
    let real = build_real_rep();
    let c_anticommutes = (1..=7).all(|mu| c.mul(rep.gen(mu)) == rep.gen(mu).transpose().mul(&c).neg());
    let probe: Vec<Spinor> = (0..8).map(|b| Spinor::u(&eps_with_r(3, b).0).scale(&gauss(2, 3))).collect();
    let mut ortho = true;
    for (a, x) in v.iter().enumerate() {
        for (b, y) in v.iter().enumerate() {
            let want = if a == b { Gauss::one() } else { Gauss::zero() };
            ortho &= x.herm(y).ok() == Some(want);
        }
    }
    RealStructureReport {
        c_real_symmetric: c.is_real() && c == c.transpose(),
        c_squared_identity: c.mul(&c) == CMatrix::identity(8),
        c_anticommutes,
        j_involution: probe.iter().all(|p| j_map(&j_map(p)).same(p)),
        majorana_fixed: v.iter().all(|x| j_map(x).same(x)),
        v_orthonormal: ortho,
        dictionary_ok: dictionary(&rep, &real, &v),
        dictionary_printed_labelling_ok: dictionary(&build_rep_with(3, Labelling::Printed), &real, &v),
        real_failures: real_clifford_failures(&real),
        real_failures_printed_e3: real_clifford_failures(&build_real_rep_with(-1)),
    }
}

// ---------------------------------------------------------------------------
// Sp(1) spinors

/// `Ψ₊ = (U + Ū)/√2`, `Ψ₋ = -i(U - Ū)/√2` for `U = u(1,1,1)`.
pub fn psi_plus_minus() -> (Spinor, Spinor) {
    let u = Spinor::u(&[1, 1, 1]);
    let ub = u.conj();
    let plus = u.add(&ub).expect("equal weights").div_sqrt2();
    let minus = u.sub(&ub).expect("equal weights").scale(&gauss(0, -1)).div_sqrt2();
    (plus, minus)
}

#[derive(Clone, Debug)]
pub struct Sp1Spinors {
    /// `ψ₀ … ψ₃`.
    pub psi: [Spinor; 4],
    /// `(Ψ_{i,+}, Ψ_{i,-})` for `i = 1, 2, 3`.
    pub pairs: [(Spinor, Spinor); 3],
}

/// `ψ₁ = ξ₂Ψ₋`, `ψ₂ = Ψ₊`, `ψ₃ = Ψ₋`, `ψ₀ = -ξ₂Ψ₊`, and the six
/// `Ψ_{i,±}` with `Ψ_{2,+} = Ψ_{1,-}`, `Ψ_{2,-} = ξ₂Ψ_{1,-}`,
/// `Ψ_{3,+} = ξ₂Ψ_{1,-}`, `Ψ_{3,-} = Ψ_{1,+}`.
pub fn sp1_spinors(rep: &CliffordRep) -> Sp1Spinors {
    let (plus, minus) = psi_plus_minus();
    let xi2_minus = rep.apply(2, &minus);
    let psi0 = rep.apply(2, &plus).scale(&gauss(-1, 0));
    Sp1Spinors {
        psi: [psi0, xi2_minus.clone(), plus.clone(), minus.clone()],
        pairs: [(plus.clone(), minus.clone()), (minus, xi2_minus.clone()), (xi2_minus, plus)],
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub ok: bool,
}

fn check(out: &mut Vec<IdentityCheck>, name: String, ok: bool) {
    out.push(IdentityCheck { name, ok });
}

/// Member of `E_i`: `(-2φ_i(X) + ξ_i X - X ξ_i) Ψ = 0` for all frame `X`.
pub fn in_e_bundle(rep: &CliffordRep, i: usize, psi: &Spinor) -> Result<bool, SpinorError> {
    let forms = build_sp1_forms();
    let phi_end = endo(&forms.phi[i - 1]);
    let xi = rep.gen(i);
    for mu in 1..=7 {
        let phx = vector_action(rep, &phi_end[mu - 1]);
        let x = rep.gen(mu);
        let op = phx.scale(&gauss(-2, 0)).add(&xi.mul(x)).sub(&x.mul(xi));
        if !psi.map(&op).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every identity relating the Sp(1) spinors and the almost 3-contact forms.
pub fn sp1_identity_suite() -> Result<Vec<IdentityCheck>, SpinorError> {
    let rep = build_rep(3);
    let sp = sp1_spinors(&rep);
    let forms = build_sp1_forms();
    let phis: Vec<CMatrix> = forms.phi.iter().map(|f| rep.act(f)).collect::<Result<_, _>>()?;
    let psi = &sp.psi;
    let mut out = Vec::new();
    for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let xi_i = |s: &Spinor| rep.apply(i, s);
        check(&mut out, format!("xi{i}.psi0 = psi{i}"), xi_i(&psi[0]).same(&psi[i]));
        check(&mut out, format!("Phi{i}.psi0 = xi{i}.psi0"), psi[0].map(&phis[i - 1]).same(&xi_i(&psi[0])));
        check(&mut out, format!("xi{i}.psi{j} = psi{k}"), xi_i(&psi[j]).same(&psi[k]));
        check(&mut out, format!("Phi{i}.psi{i} = xi{i}.psi{i}"), psi[i].map(&phis[i - 1]).same(&xi_i(&psi[i])));
        for l in [j, k] {
            check(
                &mut out,
                format!("Phi{i}.psi{l} = -3 xi{i}.psi{l}"),
                psi[l].map(&phis[i - 1]).same(&xi_i(&psi[l]).scale(&gauss(-3, 0))),
            );
        }
        check(&mut out, format!("psi0 = -xi{i}.psi{i}"), psi[0].same(&xi_i(&psi[i]).scale(&gauss(-1, 0))));
        check(&mut out, format!("psi{i} in E{j} and E{k}"), in_e_bundle(&rep, j, &psi[i])? && in_e_bundle(&rep, k, &psi[i])?);
        check(&mut out, format!("psi{i} not in E{i}"), !in_e_bundle(&rep, i, &psi[i])?);
        check(&mut out, format!("psi0 not in E{i}"), !in_e_bundle(&rep, i, &psi[0])?);
        // the pair (Ψ_{i,+}, Ψ_{i,-}) is the real/imaginary split of a Σ₀
        // spinor of structure i, and it recovers (η_i, Φ_i)
        let (p, m) = &sp.pairs[i - 1];
        let dirac = p.add(&m.scale(&gauss(0, 1)))?.div_sqrt2();
        check(
            &mut out,
            format!("Psi{i}+ + i Psi{i}- in Sigma0 of structure {i}"),
            dirac.map(&phis[i - 1]).same(&dirac.scale(&gauss(0, 3))) && rep.apply(i, &dirac).same(&dirac.scale(&gauss(0, -1))),
        );
        check(&mut out, format!("xi{i}.Psi{i}+ = Psi{i}-"), rep.apply(i, p).same(m));
        let (eta, phi) = contact_from_pair(&rep, p, m)?;
        check(&mut out, format!("(Psi{i}+, Psi{i}-) recovers eta{i}"), eta == forms.eta[i - 1]);
        check(&mut out, format!("(Psi{i}+, Psi{i}-) recovers Phi{i}"), phi == forms.phi[i - 1]);
        let phi_end = endo(&forms.phi[i - 1]);
        let horizontal_ok = (1..=7).filter(|mu| forms.eta[i - 1].coeff_at(&[*mu]).is_zero()).all(|mu| {
            let x = rep.apply(mu, p);
            let y = m.map(&vector_action(&rep, &phi_end[mu - 1]));
            let z = rep.apply(i, &x);
            let w = p.map(&vector_action(&rep, &phi_end[mu - 1]));
            x.same(&y) && z.same(&w)
        });
        check(&mut out, format!("X.Psi{i}+ = phi{i}(X).Psi{i}- and xi{i}.X.Psi{i}+ = phi{i}(X).Psi{i}+"), horizontal_ok);
    }
    // Σ₀ identity used for Ricci: Φ·Ψ = m(-1)^m ξ·Ψ
    let u = Spinor::u(&[1, 1, 1]);
    let (_, phi1, _, _) = su_forms(3);
    check(
        &mut out,
        "Sigma0: Phi.Psi = m(-1)^m xi.Psi".into(),
        u.map(&rep.act(&phi1)?).same(&rep.apply(1, &u).scale(&gauss(-3, 0))),
    );
    Ok(out)
}

/// Canonical 3-form `η₁₂₃ + Σ η_i ∧ Φ_i^H` in the adapted frame.
pub fn canonical_phi() -> Form {
    let f = build_sp1_forms();
    (0..3).fold(Form::e7(&[1, 2, 3]), |acc, i| acc.add(&f.eta[i].wedge(&f.phi_h[i])))
}

// ---------------------------------------------------------------------------
// Stabilizer

/// `dim {A ∈ so(n) : A·φ = 0}` for the derivation action
/// `A·ω = Σ A_ij e^i ∧ (e_j ⌟ ω)`.
pub fn stabilizer_dim(phi: &Form) -> Result<usize, SpinorError> {
    let n = phi.dim();
    let k = phi.degree().ok().flatten().unwrap_or(0);
    let mut cols = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            let img = Form::e(n, &[a]).wedge(&phi.contract(b)).sub(&Form::e(n, &[b]).wedge(&phi.contract(a)));
            let coords: Vec<BigRational> = img
                .coords(k)
                .iter()
                .map(|c| c.as_rational().ok_or_else(|| SpinorError::NotRational(c.to_string())))
                .collect::<Result<_, _>>()?;
            cols.push(coords);
        }
    }
    let rows = cols.first().map_or(0, Vec::len);
    let mat: Mat<BigRational> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok(cols.len() - rank(&mat))
}

// ---------------------------------------------------------------------------
// Generalized Killing consequences

#[derive(Clone, Debug)]
pub struct KillingConsequences {
    pub d_eta_ok: bool,
    pub d_phi_ok: bool,
    pub d_omega_ok: bool,
}

/// With `S(ξ) = (-1)^m (mα - (m+1)δ) ξ` and `S = (-1)^{m+1} α` on the
/// horizontal space, alternating `∇η`, `∇Φ`, `∇Ω` reproduces `dη = 2αΦ`,
/// `dΦ = 0`, `dΩ = (m+1) i δ η∧Ω`.
pub fn killing_consequences(m: usize) -> KillingConsequences {
    let (eta, phi, op, om) = su_forms(m);
    let n = 2 * m + 1;
    let mi = m as i64;
    let (a, d) = (Scalar::sym(Sym::Alpha), Scalar::sym(Sym::Delta));
    let s_of = |mu: usize| -> Scalar {
        if mu == 1 {
            (a.scale(&rat(mi, 1)) - d.scale(&rat(mi + 1, 1))).scale(&rat(sign(mi), 1))
        } else {
            a.scale(&rat(sign(mi + 1), 1))
        }
    };
    let pm = rat(sign(mi + 1), 1);
    let (mut d_eta, mut d_phi, mut d_op, mut d_om) = (Form::zero(n), Form::zero(n), Form::zero(n), Form::zero(n));
    for mu in 1..=n {
        let e = Form::e(n, &[mu]);
        let s = s_of(mu);
        d_eta = d_eta.add(&e.wedge(&phi.contract(mu).scale(&s).scale_q(&pm)));
        d_phi = d_phi.add(&e.wedge(&eta.wedge(&e.scale(&s))).scale_q(&pm));
        // ∇Ω = (-1)^{m+1} i Z, Z± = g(S e_μ, ξ) Ω± - η ∧ (S e_μ ⌟ Ω±)
        let g_sx_xi = if mu == 1 { s.clone() } else { Scalar::zero() };
        let z = |w: &Form| w.scale(&g_sx_xi).sub(&eta.wedge(&w.contract(mu).scale(&s)));
        let (zp, zm) = (z(&op), z(&om));
        d_op = d_op.add(&e.wedge(&zm.scale_q(&pm).neg()));
        d_om = d_om.add(&e.wedge(&zp.scale_q(&pm)));
    }
    let k = d.scale(&rat(mi + 1, 1));
    KillingConsequences {
        d_eta_ok: d_eta == phi.scale(&a.scale(&rat(2, 1))),
        d_phi_ok: d_phi.is_zero(),
        d_omega_ok: d_op == eta.wedge(&om).scale(&k).neg() && d_om == eta.wedge(&op).scale(&k),
    }
}

// ---------------------------------------------------------------------------
// Labels

pub const SPINOR_LABELS: &[&str] = &["psi0.sp1", "psi1.sp1", "psi2.sp1", "psi3.sp1", "psi+.su3", "psi-.su3", "u(e1,...,em)", "v1..v8"];

/// Spinor by label: `psi0.sp1` … `psi3.sp1`, `psi+.su3`, `psi-.su3`,
/// `u(1,-1,1)` (any length), `v1` … `v8`. Returns the representation rank
/// `m` with it.
pub fn spinor_by_label(label: &str) -> Result<(usize, Spinor), SpinorError> {
    let bad = || SpinorError::UnknownLabel(label.to_string());
    let rep = build_rep(3);
    if let Some(rest) = label.strip_suffix(".sp1") {
        let i: usize = rest.strip_prefix("psi").and_then(|x| x.parse().ok()).filter(|i| *i < 4).ok_or_else(bad)?;
        return Ok((3, sp1_spinors(&rep).psi[i].clone()));
    }
    match label {
        "psi+.su3" => return Ok((3, psi_plus_minus().0)),
        "psi-.su3" => return Ok((3, psi_plus_minus().1)),
        _ => {}
    }
    if let Some(inner) = label.strip_prefix("u(").and_then(|x| x.strip_suffix(')')) {
        let eps: Vec<i8> = inner
            .split(',')
            .map(|t| match t.trim() {
                "1" | "+1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        if eps.is_empty() || eps.len() > 8 {
            return Err(bad());
        }
        return Ok((eps.len(), Spinor::u(&eps)));
    }
    if let Some(k) = label.strip_prefix('v').and_then(|x| x.parse::<usize>().ok()).filter(|k| (1..=8).contains(k)) {
        return Ok((3, majorana_basis()[k - 1].clone()));
    }
    Err(bad())
}

/// Mask helper for tests and reports.
pub fn mask_of(idx: &[usize]) -> Mask {
    idx.iter().fold(0, |m, i| m | (1 << (i - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::SymbolTable;
    use crate::structures::RingSu3;
    use proptest::prelude::*;

    #[test]
    fn clifford_relations_all_m() {
        for m in 1..=4 {
            assert!(build_rep(m).clifford_failures().is_empty(), "m = {m}");
            assert!(build_rep_with(m, Labelling::Printed).clifford_failures().is_empty());
        }
    }

    #[test]
    fn volume_is_i_pow_m_plus_1() {
        // the product acts as i^{m+1}: equal to (-i)^{m+1} exactly for odd m
        for m in 1..=4 {
            let r = build_rep(m).report();
            assert_eq!(r.volume, Some(i_pow(m as i64 + 1)));
            assert_eq!(r.volume_ok(), m % 2 == 1, "m = {m}");
        }
    }

    #[test]
    fn e1_on_u_basis() {
        for m in 1..=3 {
            let rep = build_rep(m);
            for bits in 0..rep.spin_dim() {
                let (eps, _) = eps_with_r(m, bits);
                let prod: i64 = eps.iter().map(|e| *e as i64).product();
                let u = Spinor::u(&eps);
                assert!(rep.apply(1, &u).same(&u.scale(&gauss(0, prod * sign(m as i64)))));
            }
        }
    }

    #[test]
    fn u_basis_orthonormal() {
        let us: Vec<Spinor> = (0..8).map(|b| Spinor::u(&eps_with_r(3, b).0)).collect();
        for (a, x) in us.iter().enumerate() {
            for (b, y) in us.iter().enumerate() {
                assert_eq!(x.herm(y).unwrap(), if a == b { Gauss::one() } else { Gauss::zero() });
            }
            // conj u(ε) = u(-ε)
            let neg: Vec<i8> = eps_with_r(3, a).0.iter().map(|e| -e).collect();
            assert!(x.conj().same(&Spinor::u(&neg)));
        }
    }

    #[test]
    fn sigma_splitting() {
        for m in 1..=3 {
            let rep = build_rep(m);
            let (eta, phi, _, _) = su_forms(m);
            let s = sigma_decompose(&rep, &eta, &phi).unwrap();
            assert!(s.all_ok(), "{m}: {s:?}");
        }
        let rep = build_rep(3);
        let (_, phi, _, _) = su_forms(3);
        let u = Spinor::u(&[1, 1, 1]);
        assert!(u.map(&rep.act(&phi).unwrap()).same(&u.scale(&gauss(0, 3))));
    }

    #[test]
    fn omega_constants() {
        for m in 1..=3 {
            let r = omega_action(&build_rep(m)).unwrap();
            assert_eq!(r.constants_ok, [true; 4], "m = {m}");
            assert!(r.middle_vanish);
        }
        let rep = build_rep(3);
        let (_, _, op, _) = su_forms(3);
        let u = Spinor::u(&[1, 1, 1]);
        assert!(u.map(&rep.act(&op).unwrap()).same(&u.conj().scale(&gauss(0, -4))));
    }

    #[test]
    fn purity() {
        let rep = build_rep(3);
        let p = purity_dim(&rep, &Spinor::u(&[1, 1, 1])).unwrap();
        assert_eq!(p, PurityReport { kernel_dim: 3, isotropic: true });
        // Σ₀ ⊕ Σ₂ mixtures stay pure; a Majorana spinor is annihilated by no
        // nonzero complex vector
        let mixed = Spinor::u(&[1, 1, 1]).add(&Spinor::u(&[1, -1, -1])).unwrap();
        assert_eq!(purity_dim(&rep, &mixed).unwrap().kernel_dim, 3);
        let real = Spinor::u(&[1, 1, 1]).add(&Spinor::u(&[-1, -1, -1])).unwrap();
        assert_eq!(purity_dim(&rep, &real).unwrap().kernel_dim, 0);
        let r1 = build_rep(1);
        for s in [Spinor::u(&[1]), Spinor::u(&[-1]), Spinor::from_comps(vec![gauss(1, 2), gauss(-3, 1)])] {
            assert_eq!(purity_dim(&r1, &s).unwrap().kernel_dim, 1);
        }
        assert!(purity_dim(&rep, &Spinor::from_comps(vec![Gauss::zero(); 8])).is_err());
    }

    #[test]
    fn su3_forms_from_u111() {
        let rep = build_rep(3);
        let u = Spinor::u(&[1, 1, 1]);
        let (eta, phi, op, om) = su_forms(3);
        assert_eq!(form_from_spinor(&rep, &u, 1).unwrap(), eta);
        assert_eq!(form_from_spinor(&rep, &u, 2).unwrap(), phi);
        assert_eq!(holomorphic_form_from_spinor(&rep, &u).unwrap(), (op, om));
        // the printed placement gives the opposite Φ
        let printed = build_rep_with(3, Labelling::Printed);
        assert_eq!(form_from_spinor(&printed, &u, 2).unwrap(), su_forms(3).1.neg());
    }

    #[test]
    fn real_structure() {
        let r = real_structure_report();
        assert!(r.c_real_symmetric && r.c_squared_identity && r.c_anticommutes);
        assert!(r.j_involution && r.majorana_fixed && r.v_orthonormal);
        assert!(r.dictionary_ok);
        assert!(!r.dictionary_printed_labelling_ok);
        assert!(r.real_failures.is_empty());
        assert_eq!(r.real_failures_printed_e3, vec![(1, 3), (2, 3), (3, 4), (3, 5), (3, 6), (3, 7)]);
    }

    #[test]
    fn psi_pm_are_v1_v2() {
        let (p, m) = psi_plus_minus();
        let v = majorana_basis();
        assert!(p.same(&v[0]) && m.same(&v[1]));
    }

    #[test]
    fn sp1_suite_passes() {
        for c in sp1_identity_suite().unwrap() {
            assert!(c.ok, "{}", c.name);
        }
    }

    #[test]
    fn canonical_phi_from_psi0() {
        let rep = build_rep(3);
        let psi0 = &sp1_spinors(&rep).psi[0];
        let phi = form_from_spinor(&rep, psi0, 3).unwrap();
        let want = canonical_phi();
        for mask in basis_masks(7, 3) {
            assert_eq!(phi.coeff(mask), want.coeff(mask), "{:?}", indices(mask));
        }
        assert_eq!(form_from_spinor(&rep, psi0, 4).unwrap(), want.hodge_star().unwrap());
        assert_eq!(stabilizer_dim(&phi).unwrap(), 14);
    }

    #[test]
    fn v1_stabilizer_and_theta_family() {
        let rep = build_rep(3);
        let v1 = &majorana_basis()[0];
        assert_eq!(stabilizer_dim(&form_from_spinor(&rep, v1, 3).unwrap()).unwrap(), 14);
        let (p, m) = psi_plus_minus();
        let fam = form3_of_theta_family(&rep, &p, &m).unwrap();
        let ring = RingSu3::new().unwrap();
        let want = ring.ring.embed(&ring.phi());
        let table = SymbolTable::trig();
        assert_eq!(fam.sub(&want).reduce(&table), Form::zero(7));
        // rational point (s, c) = (3/5, 4/5)
        let pt = [(Sym::S, Scalar::frac(3, 5)), (Sym::C, Scalar::frac(4, 5))];
        let at = |f: &Form| f.try_map(|x| x.subs(&pt)).unwrap();
        assert_eq!(at(&fam), at(&want));
    }

    #[test]
    fn killing_consequences_hold() {
        for m in 1..=3 {
            let k = killing_consequences(m);
            assert!(k.d_eta_ok && k.d_phi_ok && k.d_omega_ok, "m = {m}: {k:?}");
        }
    }

    #[test]
    fn labels() {
        assert_eq!(spinor_by_label("u(1,1,1)").unwrap().1, Spinor::u(&[1, 1, 1]));
        assert!(spinor_by_label("v8").is_ok());
        assert!(spinor_by_label("psi0.sp1").is_ok());
        assert!(spinor_by_label("psi4.sp1").is_err());
        assert!(spinor_by_label("w1").is_err());
    }

    fn gvec(n: usize) -> impl Strategy<Value = Vec<Gauss>> {
        prop::collection::vec((-5i64..6, -5i64..6), n).prop_map(|v| v.into_iter().map(|(a, b)| gauss(a, b)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn generators_skew_adjoint(x in gvec(8), y in gvec(8), mu in 1usize..8) {
            let rep = build_rep(3);
            let (x, y) = (Spinor::from_comps(x), Spinor::from_comps(y));
            let lhs = rep.apply(mu, &x).herm(&y).unwrap();
            let rhs = x.herm(&rep.apply(mu, &y)).unwrap();
            prop_assert_eq!(lhs, -rhs);
        }

        #[test]
        fn real_dictionary_on_random_real_spinors(c in prop::collection::vec(-4i64..5, 8), mu in 1usize..8) {
            // J-fixed spinor with real coordinates c in the v basis
            let v = majorana_basis();
            let rep = build_rep(3);
            let real = build_real_rep();
            let s = (0..8).fold(Spinor::from_comps(vec![Gauss::zero(); 8]), |acc, k| acc.add(&v[k].scale(&gauss(c[k], 0))).unwrap());
            prop_assert!(j_map(&s).same(&s));
            let img = real[mu - 1].apply(&c.iter().map(|x| gauss(*x, 0)).collect::<Vec<_>>());
            let back = (0..8).fold(Spinor::from_comps(vec![Gauss::zero(); 8]), |acc, k| acc.add(&v[k].scale(&img[k])).unwrap());
            prop_assert!(rep.apply(mu, &s).same(&back));
        }
    }
}
