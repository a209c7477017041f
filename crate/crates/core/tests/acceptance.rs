//! Acceptance criteria, each checked with exact arithmetic and reported on
//! one line. Expected values are assembled here from coframe forms rather
//! than taken from the library's own closed forms where possible.
//!
//! Criteria 2 and 9 fail against the stated values (a theta-convention sign
//! in the displayed tau3 and the m = 2 volume constant). They are listed in
//! `KNOWN_FAILURES`; the binary exits nonzero if any other criterion fails or
//! if a known failure starts passing.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hetg2::bianchi::{all_branches, approx_3ad, approx_constant_control, approx_su3, three_alpha_impossibility, verify_branch};
use hetg2::curvature::{
    coassociative, curvature_3ad, curvature_su3, factor_obstruction_3ad, instanton_obstruction, su3_coefficient,
    wedge_trace, Geometry, Su3Coefficient,
};
use hetg2::exterior::{basis_masks, Form};
use hetg2::heisenberg::{closed_form_curvature, connection_lambda, curvature_fp, exact_solution_end_to_end, heisenberg};
use hetg2::report::{run_suite, Params, Status, Suite};
use hetg2::scalar::{beta, rat, Scalar, Sym, SymbolTable};
use hetg2::spinor::{
    build_rep, canonical_phi, form_from_spinor, gauss, omega_action, purity_dim, sigma_decompose, sp1_identity_suite,
    sp1_spinors, su_forms, Spinor,
};
use hetg2::structures::{build_sp1_forms, ring_torsion_classes, Ring3ad, RingSu3, CYC};

const KNOWN_FAILURES: [usize; 2] = [2, 9];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn s(x: Sym) -> Scalar {
    Scalar::sym(x)
}

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

fn err<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn c1_torsion_3ad() -> Outcome {
    let r = Ring3ad::new().map_err(err)?;
    let tc = ring_torsion_classes(&r.ring, &r.phi(), &r.psi()).map_err(err)?;
    let (a, d) = (s(Sym::Alpha), s(Sym::Delta));
    let tau0 = (a.scale(&q(2, 1)) + d.clone()).scale(&q(12, 7));
    let phi = r.ring.embed(&r.phi());
    let tau3 = Form::e7(&[1, 2, 3]).sub(&phi.scale_q(&q(1, 7))).scale(&(a.scale(&q(10, 1)) - d.scale(&q(2, 1))));
    ensure(tc.tau0 == tau0, || format!("tau0 = {}", tc.tau0))?;
    ensure(tc.tau1.is_zero() && tc.tau2.is_zero(), || "tau1 or tau2 nonzero".into())?;
    ensure(tc.tau3 == tau3, || format!("tau3 - expected = {}", tc.tau3.sub(&tau3)))
}

fn c2_torsion_su3() -> Outcome {
    let r = RingSu3::new().map_err(err)?;
    let tc = ring_torsion_classes(&r.ring, &r.phi(), &r.psi()).map_err(err)?;
    let (a, d) = (s(Sym::Alpha), s(Sym::Delta));
    let tau0 = (a.scale(&q(3, 1)) + d.scale(&q(4, 1))).scale(&q(-4, 7));
    ensure(tc.tau0 == tau0, || format!("tau0 = {}", tc.tau0))?;
    ensure(!tc.tau0.contains(Sym::S) && !tc.tau0.contains(Sym::C), || "tau0 depends on theta".into())?;
    ensure(tc.tau1.is_zero() && tc.tau2.is_zero(), || "tau1 or tau2 nonzero".into())?;
    // (4/7)(α-δ)(4 η∧Φ - 3(s Ω₊ + c Ω₋))
    let eta = Form::e7(&[1]);
    let big_phi = Form::e7(&[2, 3]).add(&Form::e7(&[4, 5])).add(&Form::e7(&[6, 7])).neg();
    let (op, om) = su3_omegas();
    let omega = op.scale(&s(Sym::S)).add(&om.scale(&s(Sym::C)));
    let shown = eta.wedge(&big_phi).scale_q(&q(4, 1)).sub(&omega.scale_q(&q(3, 1))).scale(&(&a - &d).scale(&q(4, 7)));
    let diff = tc.tau3.sub(&shown).reduce(&SymbolTable::trig());
    ensure(diff.is_zero(), || format!("tau3 - displayed = {diff}"))
}

/// `(Ω₊, Ω₋)` on `e1 ... e7`; their horizontal frame depends on the base.
fn su3_omegas() -> (Form, Form) {
    let r = RingSu3::new().expect("ring");
    (r.ring.embed(&r.op()), r.ring.embed(&r.om()))
}

fn c3_instantons() -> Outcome {
    let lam = s(Sym::Lambda);
    let (psi, _) = coassociative(Geometry::ThreeAd).map_err(err)?;
    let ob = instanton_obstruction(&curvature_3ad(&lam), &psi).map_err(err)?;
    let f = factor_obstruction_3ad(&ob).map_err(err)?;
    ensure(!f.is_zero(), || "3ad tensor factor is zero".into())?;
    // fixed tensor Σ_cyc Φᵢᴴ∧Φᵢᴴ∧η_jk ⊗ (-η_jk + ½Φᵢᴴ)
    let sp = build_sp1_forms();
    for z in 1..=7 {
        for v in z + 1..=7 {
            let mut want = Form::zero(7);
            for &(i, _, _) in &CYC {
                let end = sp.eta_jk[i].neg().add(&sp.phi_h[i].scale_q(&q(1, 2)));
                want = want.add(&sp.phi_h[i].wedge(&sp.phi_h[i]).wedge(&sp.eta_jk[i]).scale(&end.coeff_at(&[z, v])));
            }
            let got = f.parts.get(&(z, v)).cloned().unwrap_or_else(|| Form::zero(7));
            ensure(got == want, || format!("3ad tensor differs at ({z},{v})"))?;
        }
    }
    for l in [Scalar::zero(), -beta()] {
        let at = instanton_obstruction(&curvature_3ad(&l), &psi).map_err(err)?;
        ensure(at.value.is_zero(), || format!("3ad obstruction nonzero at lambda = {l}"))?;
    }
    let (psi_su, _) = coassociative(Geometry::Su3).map_err(err)?;
    let ob = instanton_obstruction(&curvature_su3(&lam), &psi_su).map_err(err)?;
    let k = (s(Sym::Alpha).scale(&q(3, 1)) - s(Sym::Delta).scale(&q(2, 1))).scale(&q(4, 3)) - lam.clone();
    let mut nonzero = false;
    for w in ob.value.parts.values() {
        for (_, c) in w.terms() {
            let quo = c.div_exact(&k, Sym::Lambda).ok_or_else(|| format!("su3 entry {c} not divisible by {k}"))?;
            ensure(!quo.contains(Sym::Lambda), || format!("su3 quotient {quo} depends on lambda"))?;
            nonzero |= !quo.is_zero();
        }
    }
    ensure(nonzero, || "su3 obstruction vanishes identically".into())?;
    let zero = (s(Sym::Alpha).scale(&q(3, 1)) - s(Sym::Delta).scale(&q(2, 1))).scale(&q(4, 3));
    let at = instanton_obstruction(&curvature_su3(&zero), &psi_su).map_err(err)?;
    ensure(at.value.is_zero(), || "su3 obstruction nonzero at its zero".into())
}

fn c4_trace() -> Outcome {
    let lam = s(Sym::Lambda);
    let a = s(Sym::Alpha);
    let r = curvature_3ad(&lam);
    let tr = wedge_trace(&r, &r).map_err(err)?;
    let sp = build_sp1_forms();
    let bl = beta() + lam.clone();
    let mut want = Form::zero(7);
    for &(i, _, _) in &CYC {
        let t1 = sp.eta_jk[i].wedge(&sp.phi_h[i]).scale(&(a.scale(&q(4, 1)) - lam.clone()));
        let t2 = sp.phi_h[i].wedge(&sp.phi_h[i]).scale(&a);
        want = want.add(&t1.sub(&t2));
    }
    let want = want.scale(&(&(&bl * &bl) * &a).scale(&q(12, 1)));
    ensure(tr.explicit == want, || format!("explicit - expected = {}", tr.explicit.sub(&want)))?;
    ensure(tr.r2 == Scalar::one(), || format!("rho2 coefficient {}", tr.r2))
}

fn c5_end_to_end() -> Outcome {
    let m = heisenberg();
    let rep = exact_solution_end_to_end(&m, &q(1, 12)).map_err(err)?;
    ensure(rep.instanton_canonical && rep.instanton_flat, || "instanton check failed".into())?;
    ensure(rep.residual.is_zero(), || format!("residual {}", rep.residual))?;
    ensure(rep.holds(), || format!("{rep:?}"))?;
    let off = exact_solution_end_to_end(&m, &q(1, 10)).map_err(err)?;
    ensure(!off.residual.is_zero(), || "residual vanishes at alphap = 1/10".into())
}

fn c6_oracle() -> Outcome {
    let m = heisenberg();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut lams = vec![q(0, 1), q(4, 1)];
    while lams.len() < 8 {
        let l = q(rng.gen_range(-60..=60), rng.gen_range(1..=13));
        if !lams.contains(&l) {
            lams.push(l);
        }
    }
    for l in lams {
        let ls = Scalar::from_rational(l.clone());
        let fp = curvature_fp(&connection_lambda(&m, &ls).map_err(err)?, &m);
        ensure(fp == closed_form_curvature(&m, &ls).map_err(err)?, || format!("mismatch at lambda = {l}"))?;
    }
    Ok(())
}

fn c7_branches() -> Outcome {
    let mut solved = 0;
    for b in all_branches() {
        let rep = verify_branch(&b).map_err(err)?;
        ensure(rep.status_ok, || format!("branch {} residual {:?}", b.id, rep.residual_normal_form))?;
        if b.expect_solution {
            ensure(rep.solves, || format!("branch {}", b.id))?;
            solved += 1;
        }
    }
    ensure(solved == 5, || format!("{solved} solution branches"))?;
    let imp = three_alpha_impossibility().map_err(err)?;
    ensure(imp.certified, || format!("eliminant {} not certified", imp.shifted))
}

fn c8_orders() -> Outcome {
    for r in [approx_3ad().map_err(err)?, approx_su3().map_err(err)?] {
        ensure(r.meets_bound, || format!("{}: order {:?}", r.label, r.order))?;
    }
    let control = approx_constant_control().map_err(err)?;
    ensure(!control.meets_bound, || "control scaling also meets the bound".into())
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c9_spinors() -> Outcome {
    let mut problems = Vec::new();
    for m in 1..=3 {
        let rep = build_rep(m);
        let r = rep.report();
        if !r.relations_ok() {
            problems.push(format!("m={m}: Clifford relations"));
        }
        if !r.volume_ok() {
            problems.push(format!("m={m}: volume acts as {:?}, expected {}", r.volume.map(|v| v.to_string()), r.volume_expected));
        }
        let (eta, phi, _, _) = su_forms(m);
        let sd = sigma_decompose(&rep, &eta, &phi).map_err(err)?;
        if !sd.all_ok() || sd.dims != (0..=m).map(|k| binom(m, k)).collect::<Vec<_>>() {
            problems.push(format!("m={m}: splitting {:?}", sd.dims));
        }
        let oa = omega_action(&rep).map_err(err)?;
        if oa.constants_ok != [true; 4] || !oa.middle_vanish {
            problems.push(format!("m={m}: Omega action {oa:?}"));
        }
    }
    let rep = build_rep(3);
    let u = Spinor::u(&[1, 1, 1]);
    let (_, _, op, _) = su_forms(3);
    if !u.map(&rep.act(&op).map_err(err)?).same(&u.conj().scale(&gauss(0, -4))) {
        problems.push("Omega_+ . Psi != -4i conj(Psi)".into());
    }
    let p = purity_dim(&rep, &u).map_err(err)?;
    if p.kernel_dim != 3 || !p.isotropic {
        problems.push(format!("purity {p:?}"));
    }
    let failing: Vec<String> = sp1_identity_suite().map_err(err)?.into_iter().filter(|c| !c.ok).map(|c| c.name).collect();
    if !failing.is_empty() {
        problems.push(format!("Sp(1) identities {failing:?}"));
    }
    let psi0 = &sp1_spinors(&rep).psi[0];
    let phi = form_from_spinor(&rep, psi0, 3).map_err(err)?;
    let canon = canonical_phi();
    let agree = basis_masks(7, 3).into_iter().filter(|m| phi.coeff(*m) == canon.coeff(*m)).count();
    if agree != 35 {
        problems.push(format!("{agree}/35 components of phi"));
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn c10_flag() -> Outcome {
    let lam = s(Sym::Lambda);
    let a = s(Sym::Alpha);
    let want = &a * &(a.scale(&q(4, 1)) - s(Sym::Delta).scale(&q(8, 3)) - lam.clone());
    let derived = su3_coefficient(Su3Coefficient::Derived, 3, &lam);
    ensure(derived == want, || format!("derived K = {derived}"))?;
    let zero = [(Sym::Lambda, (a.scale(&q(3, 1)) - s(Sym::Delta).scale(&q(2, 1))).scale(&q(4, 3)))];
    ensure(derived.subs(&zero).map_err(err)?.is_zero(), || "derived K does not vanish at the instanton zero".into())?;
    let printed = su3_coefficient(Su3Coefficient::Printed, 3, &lam).subs(&zero).map_err(err)?;
    ensure(!printed.is_zero(), || "printed K vanishes at the instanton zero".into())?;
    let report = run_suite(Suite::Su3, &Params::default());
    let flagged: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.status == Status::Flagged && r.check_id.contains("coefficient"))
        .collect();
    ensure(flagged.len() == 1, || format!("{} flagged coefficient records", flagged.len()))?;
    ensure(report.summary.fail == 0, || "su3 suite has failures".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("torsion classes, 3ad", c1_torsion_3ad),
        ("torsion classes, su3 with the displayed tau3", c2_torsion_su3),
        ("instanton zero sets", c3_instantons),
        ("trace of the curvature squared", c4_trace),
        ("exact solution on the Heisenberg model", c5_end_to_end),
        ("closed-form curvature against first principles", c6_oracle),
        ("Bianchi branches and the 3-alpha obstruction", c7_branches),
        ("orders of the approximate solutions", c8_orders),
        ("spinor identities", c9_spinors),
        ("su3 coefficient flag", c10_flag),
    ];
    let start = Instant::now();
    let mut unexpected = 0;
    for (n, (name, f)) in criteria.iter().enumerate().map(|(i, c)| (i + 1, c)) {
        let t = Instant::now();
        let outcome = f();
        let ms = t.elapsed().as_millis();
        let known = KNOWN_FAILURES.contains(&n);
        match &outcome {
            Ok(()) => println!("criterion {n:>2} PASS {name} [{ms} ms]"),
            Err(why) => println!("criterion {n:>2} FAIL {name} [{ms} ms]: {why}"),
        }
        if outcome.is_ok() == known {
            unexpected += 1;
            if known {
                println!("             criterion {n} was expected to fail; update KNOWN_FAILURES");
            }
        }
    }
    println!("total {} ms", start.elapsed().as_millis());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
