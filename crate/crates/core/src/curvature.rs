//! Torsion and contorsion of the deformed connection families, closed-form
//! curvature operators with an opaque remainder `R₂`, instanton
//! obstructions and wedge traces.
//!
//! Index conventions (1-based frame indices, vertical `V = {1,2,3}`):
//! `T[x,y,z] = g(e_x, T(e_y,e_z))`, `Δ[x,y,z] = g(e_x, Δ_{e_y} e_z)` and
//! `R[a,b,z,v] = g(R(e_a,e_b)e_z, e_v)`.

use num_rational::BigRational;
use thiserror::Error;

use crate::exterior::{EndForm, Form, DIM};
use crate::scalar::{beta, rat, Scalar, Sym, SymbolTable};
use crate::structures::{build_sp1_forms, build_su3_forms, GenForm, Ring3ad, RingSu3, StructureError, CYC};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("coassociative form does not belong to the {0:?} geometry")]
    GeometryMismatch(Geometry),
    #[error("curvature operators of different geometries")]
    MixedGeometry,
    #[error("factorisation failed: {0}")]
    Factor(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Geometry {
    ThreeAd,
    Su3,
}

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

pub fn is_vertical(i: usize) -> bool {
    (1..=3).contains(&i)
}

/// Dense 3-tensor on the frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3 {
    pub c: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero() -> Self {
        Tensor3 { c: vec![Scalar::zero(); DIM * DIM * DIM] }
    }
    fn ix(x: usize, y: usize, z: usize) -> usize {
        ((x - 1) * DIM + (y - 1)) * DIM + (z - 1)
    }
    pub fn get(&self, x: usize, y: usize, z: usize) -> &Scalar {
        &self.c[Self::ix(x, y, z)]
    }
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: Scalar) {
        self.c[Self::ix(x, y, z)] = v;
    }
    pub fn from_fn(f: impl Fn(usize, usize, usize) -> Scalar) -> Self {
        let mut t = Tensor3::zero();
        for x in 1..=DIM {
            for y in 1..=DIM {
                for z in 1..=DIM {
                    t.set(x, y, z, f(x, y, z));
                }
            }
        }
        t
    }
    /// Components of a 3-form, `T[x,y,z] = T(e_x,e_y,e_z)`.
    pub fn from_form(f: &Form) -> Self {
        Tensor3::from_fn(|x, y, z| f.contract(x).contract(y).contract(z).coeff(0))
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }
    pub fn sub(&self, o: &Tensor3) -> Tensor3 {
        Tensor3 { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor3 {
        Tensor3 { c: self.c.iter().map(f).collect() }
    }
    /// Whether the tensor is alternating in all three slots.
    pub fn is_totally_skew(&self) -> bool {
        (1..=DIM).all(|x| {
            (1..=DIM).all(|y| {
                (1..=DIM).all(|z| {
                    let v = self.get(x, y, z);
                    *self.get(y, x, z) == -v && *self.get(x, z, y) == -v
                })
            })
        })
    }
    /// The alternating part read as a 3-form, valid when totally skew.
    pub fn to_form(&self) -> Form {
        let mut f = Form::zero(DIM);
        for x in 1..=DIM {
            for y in x + 1..=DIM {
                for z in y + 1..=DIM {
                    f = f.add(&Form::e7(&[x, y, z]).scale(self.get(x, y, z)));
                }
            }
        }
        f
    }
}

/// The torsion of a member of a connection family. Torsions are 3-tensors
/// here because the deformed 3ad torsion is not alternating for `λ ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionTensor {
    pub t: Tensor3,
}

impl TorsionTensor {
    pub fn as_form(&self) -> Option<Form> {
        self.t.is_totally_skew().then(|| self.t.to_form())
    }
}

/// Canonical 3ad torsion as a coframe form.
pub fn torsion_3ad_form() -> Result<Form, StructureError> {
    let r = Ring3ad::new()?;
    Ok(r.ring.embed(&r.torsion_expected()))
}

fn phi_3ad_tensor() -> Result<Tensor3, StructureError> {
    let r = Ring3ad::new()?;
    Ok(Tensor3::from_form(&r.ring.embed(&r.phi())))
}

/// `Δ^λ`: `λφ` on VVV, `-(λ/2)φ` when only the middle slot is vertical.
pub fn contorsion_3ad(lambda: &Scalar) -> Result<Tensor3, StructureError> {
    let phi = phi_3ad_tensor()?;
    Ok(Tensor3::from_fn(|x, y, z| {
        let p = phi.get(x, y, z);
        if is_vertical(x) && is_vertical(y) && is_vertical(z) {
            p * lambda
        } else if is_vertical(y) && !is_vertical(x) && !is_vertical(z) {
            (p * lambda).scale(&q(-1, 2))
        } else {
            Scalar::zero()
        }
    }))
}

/// Contorsion of a torsion tensor: `½(T(X,Y,Z) - T(Y,Z,X) + T(Z,X,Y))`.
pub fn contorsion_of(t: &Tensor3) -> Tensor3 {
    Tensor3::from_fn(|x, y, z| (t.get(x, y, z) - t.get(y, z, x) + t.get(z, x, y).clone()).scale(&q(1, 2)))
}

/// Torsion of `∇ + Δ^λ`: `T + Δ(X,Y,Z) - Δ(X,Z,Y)`.
pub fn torsion_lambda_3ad(lambda: &Scalar) -> Result<TorsionTensor, StructureError> {
    let t = Tensor3::from_form(&torsion_3ad_form()?);
    let d = contorsion_3ad(lambda)?;
    Ok(TorsionTensor { t: Tensor3::from_fn(|x, y, z| t.get(x, y, z) + d.get(x, y, z) - d.get(x, z, y).clone()) })
}

/// The deformed torsion read off the case table directly.
pub fn torsion_lambda_3ad_table(lambda: &Scalar) -> Result<Tensor3, StructureError> {
    let t = Tensor3::from_form(&torsion_3ad_form()?);
    let phi = phi_3ad_tensor()?;
    Ok(Tensor3::from_fn(|x, y, z| {
        let (vx, vy, vz) = (is_vertical(x), is_vertical(y), is_vertical(z));
        let base = t.get(x, y, z).clone();
        let p = phi.get(x, y, z);
        if vx && vy && vz {
            base + (p * lambda).scale(&q(2, 1))
        } else if (vy && !vx && !vz) || (vz && !vx && !vy) {
            base - (p * lambda).scale(&q(1, 2))
        } else {
            base
        }
    }))
}

// ---------------------------------------------------------------------------
// Curvature operators

/// Curvature operator: explicit `Λ²⊗Λ²` array plus, when `opaque_r2`, the
/// λ-independent remainder `R₂` known only through its rules: `R₂∧ψ = 0`,
/// `tr(R_explicit ∧ R₂) = 0` and `tr(R₂∧R₂) = ρ₂`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurvOp {
    pub geometry: Geometry,
    pub explicit: Vec<Scalar>,
    pub opaque_r2: bool,
}

impl CurvOp {
    fn ix(a: usize, b: usize, z: usize, v: usize) -> usize {
        (((a - 1) * DIM + (b - 1)) * DIM + (z - 1)) * DIM + (v - 1)
    }
    pub fn get(&self, a: usize, b: usize, z: usize, v: usize) -> &Scalar {
        &self.explicit[Self::ix(a, b, z, v)]
    }
    pub fn from_fn(geometry: Geometry, opaque_r2: bool, f: impl Fn(usize, usize, usize, usize) -> Scalar) -> Self {
        let mut explicit = vec![Scalar::zero(); DIM.pow(4)];
        for a in 1..=DIM {
            for b in 1..=DIM {
                for z in 1..=DIM {
                    for v in 1..=DIM {
                        explicit[Self::ix(a, b, z, v)] = f(a, b, z, v);
                    }
                }
            }
        }
        CurvOp { geometry, explicit, opaque_r2 }
    }
    pub fn explicit_is_zero(&self) -> bool {
        self.explicit.iter().all(Scalar::is_zero)
    }
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> CurvOp {
        CurvOp { geometry: self.geometry, explicit: self.explicit.iter().map(f).collect(), opaque_r2: self.opaque_r2 }
    }
    /// `Σ_{z<v} ω_zv ⊗ E_zv` with `ω_zv = Σ_{a<b} R[a,b,z,v] e^{ab}`.
    pub fn to_endform(&self) -> EndForm {
        let mut out = EndForm::zero(DIM);
        for z in 1..=DIM {
            for v in z + 1..=DIM {
                let mut w = Form::zero(DIM);
                for a in 1..=DIM {
                    for b in a + 1..=DIM {
                        w = w.add(&Form::e7(&[a, b]).scale(self.get(a, b, z, v)));
                    }
                }
                out.insert(z, v, w);
            }
        }
        out
    }
    /// Whether `R[a,b,z,v] = R[z,v,a,b]` on the index set `idx`.
    pub fn pair_symmetric_on(&self, idx: &[usize]) -> bool {
        idx.iter().all(|&a| {
            idx.iter().all(|&b| idx.iter().all(|&z| idx.iter().all(|&v| self.get(a, b, z, v) == self.get(z, v, a, b))))
        })
    }
    /// The operator applied to a 2-form `β` in the first pair and in the
    /// second pair.
    pub fn apply_first(&self, beta2: &Form) -> Form {
        let mut out = Form::zero(DIM);
        for z in 1..=DIM {
            for v in z + 1..=DIM {
                let mut acc = Scalar::zero();
                for a in 1..=DIM {
                    for b in a + 1..=DIM {
                        acc += &(self.get(a, b, z, v) * &beta2.coeff_at(&[a, b]));
                    }
                }
                out = out.add(&Form::e7(&[z, v]).scale(&acc));
            }
        }
        out
    }
    pub fn apply_second(&self, beta2: &Form) -> Form {
        let mut out = Form::zero(DIM);
        for a in 1..=DIM {
            for b in a + 1..=DIM {
                let mut acc = Scalar::zero();
                for z in 1..=DIM {
                    for v in z + 1..=DIM {
                        acc += &(self.get(a, b, z, v) * &beta2.coeff_at(&[z, v]));
                    }
                }
                out = out.add(&Form::e7(&[a, b]).scale(&acc));
            }
        }
        out
    }
}

/// Block coefficient of `R₁^λ` (without the `-(β+λ)` prefactor).
pub fn block_coefficient_3ad(lambda: &Scalar, a: usize, b: usize, z: usize, v: usize) -> Scalar {
    let alpha = Scalar::sym(Sym::Alpha);
    let vv = |x: usize, y: usize| is_vertical(x) && is_vertical(y);
    let hh = |x: usize, y: usize| !is_vertical(x) && !is_vertical(y);
    if vv(a, b) && vv(z, v) {
        alpha.scale(&q(4, 1)) - lambda
    } else if hh(a, b) && vv(z, v) {
        alpha.scale(&q(2, 1))
    } else if vv(a, b) && hh(z, v) {
        alpha.scale(&q(2, 1)) - lambda.scale(&q(1, 2))
    } else if hh(a, b) && hh(z, v) {
        alpha
    } else {
        Scalar::zero()
    }
}

/// `R^λ = (β+λ) R₁^λ + R₂` with `R₁^λ = -Σ_i c_block Φ_i ⊗ φ_i`.
pub fn curvature_3ad(lambda: &Scalar) -> CurvOp {
    let f = build_sp1_forms();
    let pref = -(beta() + lambda.clone());
    let comps: Vec<Vec<Scalar>> = (0..3)
        .map(|i| {
            let mut m = vec![Scalar::zero(); DIM * DIM];
            for a in 1..=DIM {
                for b in 1..=DIM {
                    m[(a - 1) * DIM + b - 1] = f.phi[i].coeff_at_any(a, b);
                }
            }
            m
        })
        .collect();
    CurvOp::from_fn(Geometry::ThreeAd, true, |a, b, z, v| {
        let mut s = Scalar::zero();
        for m in &comps {
            let x = &m[(a - 1) * DIM + b - 1] * &m[(z - 1) * DIM + v - 1];
            if !x.is_zero() {
                s += &x;
            }
        }
        if s.is_zero() {
            return s;
        }
        &(&s * &block_coefficient_3ad(lambda, a, b, z, v)) * &pref
    })
}

/// The two candidate su3 curvature coefficients as functions of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su3Coefficient {
    /// From `R^λ|_H = R^{g_N} + α(4α-λ)Φ⊗φ` and the Kähler-Einstein
    /// eigenvalue of the base: `α(4α-λ) - (2(m+1)/m)αδ`.
    Derived,
    /// The closed form printed with the curvature decomposition:
    /// `α(4α - ((m+1)/(2m))δ - λ)`.
    Printed,
}

/// Einstein constant of the base, `Ric^{g_N} = 2(m+1)αδ g`.
pub fn base_einstein_constant(m: i64) -> Scalar {
    (&Scalar::sym(Sym::Alpha) * &Scalar::sym(Sym::Delta)).scale(&q(2 * (m + 1), 1))
}

/// Coefficient `K` of `Φ⊗φ` in the explicit part of the su3 family.
pub fn su3_coefficient(kind: Su3Coefficient, m: i64, lambda: &Scalar) -> Scalar {
    let (a, d) = (Scalar::sym(Sym::Alpha), Scalar::sym(Sym::Delta));
    match kind {
        Su3Coefficient::Derived => {
            // On a Kähler-Einstein base R(Φ) = Ric-constant * Φ and |Φ|² = m,
            // so the Φ⊗φ component of R^{g_N} is the constant divided by m.
            let ke = base_einstein_constant(m).scale(&q(1, m));
            &a * &(a.scale(&q(4, 1)) - lambda.clone()) - ke
        }
        Su3Coefficient::Printed => &a * &(a.scale(&q(4, 1)) - d.scale(&q(m + 1, 2 * m)) - lambda.clone()),
    }
}

/// `K·Φ⊗φ` on the horizontal space plus the opaque remainder.
pub fn curvature_su3_with(kind: Su3Coefficient, lambda: &Scalar) -> CurvOp {
    let f = build_su3_forms();
    let k = su3_coefficient(kind, 3, lambda);
    CurvOp::from_fn(Geometry::Su3, true, |a, b, z, v| {
        let x = &f.phi.coeff_at_any(a, b) * &f.phi.coeff_at_any(z, v);
        if x.is_zero() {
            x
        } else {
            &x * &k
        }
    })
}

pub fn curvature_su3(lambda: &Scalar) -> CurvOp {
    curvature_su3_with(Su3Coefficient::Derived, lambda)
}

trait CoeffAny {
    fn coeff_at_any(&self, a: usize, b: usize) -> Scalar;
}

impl CoeffAny for Form {
    /// Antisymmetric component `F(e_a, e_b)` of a 2-form.
    fn coeff_at_any(&self, a: usize, b: usize) -> Scalar {
        self.contract(a).contract(b).coeff(0)
    }
}

// ---------------------------------------------------------------------------
// Obstruction and traces

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// `R ∧ ψ` after the `R₂ ∧ ψ = 0` rule, a 6-form valued endomorphism.
    pub value: EndForm,
    pub norm_sq: Scalar,
}

pub fn coassociative(geometry: Geometry) -> Result<(Form, SymbolTable), StructureError> {
    Ok(match geometry {
        Geometry::ThreeAd => {
            let r = Ring3ad::new()?;
            (r.ring.embed(&r.psi()), r.ring.table.clone())
        }
        Geometry::Su3 => {
            let r = RingSu3::new()?;
            (r.ring.embed(&r.psi()), r.ring.table.clone())
        }
    })
}

pub fn instanton_obstruction(r: &CurvOp, psi: &Form) -> Result<Obstruction, CurvatureError> {
    let (own, table) = coassociative(r.geometry)?;
    if !own.sub(psi).reduce(&table).is_zero() {
        return Err(CurvatureError::GeometryMismatch(r.geometry));
    }
    let value = r.to_endform().wedge_right(psi).map_forms(|w| w.reduce(&table));
    let norm_sq = table.reduce(&value.norm_sq());
    Ok(Obstruction { value, norm_sq })
}

/// `Σcyc Φ_i^H∧Φ_i^H∧η_jk ⊗ (φ_i|_V + ½φ_i|_H)`, the λ-independent tensor in
/// the 3ad obstruction.
pub fn obstruction_tensor_3ad() -> EndForm {
    let f = build_sp1_forms();
    let mut out = EndForm::zero(DIM);
    for &(i, _, _) in &CYC {
        let six = f.phi_h[i].wedge(&f.phi_h[i]).wedge(&f.eta_jk[i]);
        let end = f.eta_jk[i].neg().add(&f.phi_h[i].scale_q(&q(1, 2)));
        for z in 1..=DIM {
            for v in z + 1..=DIM {
                let c = end.coeff_at(&[z, v]);
                if !c.is_zero() {
                    out.insert(z, v, six.scale(&c));
                }
            }
        }
    }
    out
}

/// Splits the 3ad obstruction as `-(β+λ)(λ/2) · F`, returning `F`.
pub fn factor_obstruction_3ad(ob: &Obstruction) -> Result<EndForm, CurvatureError> {
    let lam = Scalar::sym(Sym::Lambda);
    let factor = (&(beta() + lam.clone()) * &lam).scale(&q(-1, 2));
    let mut out = EndForm::zero(DIM);
    for ((z, v), w) in &ob.value.parts {
        let quo = w
            .try_map(|c| c.div_exact(&factor, Sym::Lambda).ok_or_else(|| CurvatureError::Factor(c.to_string())))?;
        if quo.terms().any(|(_, c)| c.contains(Sym::Lambda) || c.contains(Sym::Alpha) || c.contains(Sym::Delta)) {
            return Err(CurvatureError::Factor(format!("quotient still depends on parameters: {quo}")));
        }
        out.insert(*z, *v, quo);
    }
    Ok(out)
}

/// `tr(R∧R')`: explicit 4-form plus the multiplicity of the formal token
/// `ρ₂ = tr(R₂∧R₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceForm {
    pub explicit: Form,
    pub r2: Scalar,
}

impl TraceForm {
    pub fn sub(&self, o: &TraceForm) -> TraceForm {
        TraceForm { explicit: self.explicit.sub(&o.explicit), r2: &self.r2 - &o.r2 }
    }
}

pub fn wedge_trace(r: &CurvOp, r2: &CurvOp) -> Result<TraceForm, CurvatureError> {
    if r.geometry != r2.geometry {
        return Err(CurvatureError::MixedGeometry);
    }
    let table = match r.geometry {
        Geometry::ThreeAd => SymbolTable::plain(),
        Geometry::Su3 => SymbolTable::trig(),
    };
    let explicit = r.to_endform().trace_wedge(&r2.to_endform()).reduce(&table);
    let token = if r.opaque_r2 && r2.opaque_r2 { Scalar::one() } else { Scalar::zero() };
    Ok(TraceForm { explicit, r2: token })
}

/// Expected explicit trace for the 3ad family,
/// `12α(β+λ)² Σcyc((4α-λ) η_jk∧Φ_i^H - α Φ_i^H∧Φ_i^H)`, in the ring.
pub fn trace_expected_3ad(r: &Ring3ad, lambda: &Scalar) -> GenForm {
    let a = Scalar::sym(Sym::Alpha);
    let bl = beta() + lambda.clone();
    let pref = (&(&bl * &bl) * &a).scale(&q(12, 1));
    let mut acc = GenForm::zero();
    for i in 0..3 {
        let t1 = r.ring.mul(&r.eta_jk(i), &r.p(i)).scale(&(a.scale(&q(4, 1)) - lambda.clone()));
        let t2 = r.ring.mul(&r.p(i), &r.p(i)).scale(&a);
        acc = acc.add(&t1.sub(&t2));
    }
    acc.scale(&pref)
}

/// Expected explicit su3 trace, `-(2α²/3)(4(3α-2δ) - 3λ)² Φ∧Φ`.
pub fn trace_expected_su3(r: &RingSu3, lambda: &Scalar) -> GenForm {
    let (a, d) = (Scalar::sym(Sym::Alpha), Scalar::sym(Sym::Delta));
    let inner = (a.scale(&q(3, 1)) - d.scale(&q(2, 1))).scale(&q(4, 1)) - lambda.scale(&q(3, 1));
    let c = (&(&a * &a) * &(&inner * &inner)).scale(&q(-2, 3));
    r.ring.mul(&r.phi_form(), &r.phi_form()).scale(&c)
}

/// `tr(φ∘φ)` restricted to the span of the given frame vectors.
pub fn partial_trace_square(two_form: &Form, idx: &[usize]) -> Scalar {
    let mut acc = Scalar::zero();
    for &a in idx {
        for b in 1..=DIM {
            // (φ²)_{aa} = Σ_b φ_{ab} φ_{ba}
            acc += &(&two_form.coeff_at_any(a, b) * &two_form.coeff_at_any(b, a));
        }
    }
    acc
}

/// Anti-self-dual horizontal 2-forms for the orientation `e^{4567}`.
pub fn anti_self_dual_horizontal() -> [Form; 3] {
    let e = Form::e7;
    [e(&[4, 5]).sub(&e(&[6, 7])), e(&[4, 6]).add(&e(&[5, 7])), e(&[4, 7]).sub(&e(&[5, 6]))]
}
