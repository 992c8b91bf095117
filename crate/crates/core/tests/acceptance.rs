//! Acceptance gate: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wco_core::draws::{disk_point, draw_boundary_map, draw_cs_params, draw_hermitian, draw_normal_interior, draw_unitary};
use wco_core::operators::{
    bilinear_cs_check, cs_residual, involution_residual, kernel_adjoint_check, structure_residuals, AntilinearOperator,
    ResidualReport, WcoOperator,
};
use wco_core::symbols::{basepoint_residual, make_boundary_normal_family, ConjugationSpec, Rational, Symbol};
use wco_core::theorems::{classify_algebraic, match_cs_parameters, verify_case3_identity, verify_eq14, AlgebraicVerdict, CaseTag};
use wco_core::{CheckConfig, Expr, Holomorphic, TruncatedSeries, C64};

/// An operator, its conjugation and the matrix-pathway verdict, kept for
/// the cross-pathway comparison.
struct Pair {
    t: WcoOperator,
    u: AntilinearOperator,
    cs_passed: bool,
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn paired(psi: impl Into<Symbol>, phi: impl Into<Symbol>, spec: ConjugationSpec, order: usize, cfg: &CheckConfig) -> (Pair, ResidualReport) {
    let (t, u) = AntilinearOperator::paired(psi.into(), phi.into(), spec, order, cfg);
    let cs = cs_residual(t.matrix(), &u, cfg).expect("common padding");
    (Pair { t, u, cs_passed: cs.passed() }, cs)
}

fn conjugation_axioms(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut inv, mut iso, mut bad) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..100 {
        let spec = ConjugationSpec::at(disk_point(&mut rng, 0.6)).unwrap();
        let u = AntilinearOperator::new(spec, 96, cfg);
        inv.push(involution_residual(&u, cfg).value);
        iso.push(structure_residuals(u.matrix(), cfg).unitary.value);
    }
    for _ in 0..100 {
        let spec = ConjugationSpec::at(disk_point(&mut rng, 0.6)).unwrap();
        let offset = rng.random_range(0.1..std::f64::consts::PI) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let lambda = spec.lambda() * C64::from_polar(1.0, offset);
        let u = AntilinearOperator::new(ConjugationSpec::unconstrained(spec.p(), lambda).unwrap(), 96, cfg);
        bad.push(involution_residual(&u, cfg).value);
    }
    let (inv, iso, bad) = (max(inv), max(iso), min(bad));
    outcome(
        inv <= 1e-10 && iso <= 1e-10 && bad >= 1e-3,
        format!("max involution {inv:.2e}, max isometry {iso:.2e}, min perturbed involution {bad:.2e}"),
    )
}

fn cs_positive(cfg: &CheckConfig, pairs: &mut Vec<Pair>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut ok, mut worst, mut decay_ok) = (true, 0.0f64, true);
    for _ in 0..100 {
        let fam = draw_cs_params(&mut rng, 0.5);
        let (pair, fine) = paired(fam.psi.clone(), fam.phi, fam.conjugation, 128, cfg);
        let (_, coarse) = paired(fam.psi, fam.phi, fam.conjugation, 64, cfg);
        ok &= fine.value <= cfg.tolerance.max(cfg.tail_factor * fine.tail_bound);
        worst = worst.max(fine.value);
        decay_ok &= fine.value <= 0.5 * coarse.value || fine.value <= cfg.decay_floor;
        pairs.push(pair);
    }
    outcome(ok && decay_ok, format!("max residual at N=128 {worst:.2e}, decay {}", if decay_ok { "ok" } else { "violated" }))
}

fn cs_converse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let (mut worst, mut matched, mut rejected) = (0.0f64, 0, 0);
    for _ in 0..100 {
        let fam = draw_cs_params(&mut rng, 0.5);
        let m = match_cs_parameters(&fam.psi.series(128), &fam.phi, &fam.conjugation);
        if let Some(got) = m.params.filter(|_| m.matched) {
            matched += 1;
            let err = max([(got.a0 - fam.params.a0).norm(), (got.a1 - fam.params.a1).norm(), (got.c - fam.params.c).norm()]);
            worst = worst.max(err);
        }
    }
    for _ in 0..100 {
        let fam = draw_cs_params(&mut rng, 0.5);
        let eps = C64::from_polar(0.05, rng.random_range(0.0..std::f64::consts::TAU));
        let bump = TruncatedSeries::one(128).add(&TruncatedSeries::monomial(2, eps, 128)).unwrap();
        let psi = fam.psi.series(128).mul(&bump).unwrap();
        if !match_cs_parameters(&psi, &fam.phi, &fam.conjugation).matched {
            rejected += 1;
        }
    }
    outcome(
        matched == 100 && worst <= 1e-9 && rejected == 100,
        format!("{matched}/100 matched (max parameter error {worst:.2e}), {rejected}/100 perturbed rejected"),
    )
}

fn unitary_suite(cfg: &CheckConfig, pairs: &mut Vec<Pair>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut unitary, mut cs) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let fam = draw_unitary(&mut rng, 0.6);
        let (pair, report) = paired(fam.psi, fam.phi, fam.conjugation, 128, cfg);
        unitary = unitary.max(structure_residuals(pair.t.matrix(), cfg).unitary.value);
        cs = cs.max(report.value);
        pairs.push(pair);
    }
    outcome(unitary <= 1e-9 && cs <= 1e-8, format!("max unitary {unitary:.2e}, max complex symmetry {cs:.2e}"))
}

fn hermitian_suite(cfg: &CheckConfig, pairs: &mut Vec<Pair>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (mut herm, mut cs, mut rotation) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let fam = draw_hermitian(&mut rng, 0.6);
        rotation = rotation.max((fam.rotation * fam.b0.conj() + fam.b0).norm());
        let (pair, report) = paired(fam.psi, fam.phi, fam.conjugation, 128, cfg);
        herm = herm.max(structure_residuals(pair.t.matrix(), cfg).hermitian.value);
        cs = cs.max(report.value);
        pairs.push(pair);
    }
    outcome(
        herm <= 1e-9 && cs <= 1e-8 && rotation <= 1e-14,
        format!("max hermitian {herm:.2e}, max complex symmetry {cs:.2e}, rotation condition {rotation:.1e}"),
    )
}

fn normal_interior_suite(cfg: &CheckConfig, pairs: &mut Vec<Pair>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let (mut normal, mut cs, mut q_max) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let fam = draw_normal_interior(&mut rng, 0.5);
        q_max = q_max.max(fam.q.norm());
        let (pair, report) = paired(fam.psi, fam.phi, fam.conjugation, 128, cfg);
        normal = normal.max(structure_residuals(pair.t.matrix(), cfg).normal.value);
        cs = cs.max(report.value);
        pairs.push(pair);
    }
    outcome(
        normal <= 1e-8 && cs <= 1e-8 && q_max < 1.0,
        format!("max normal {normal:.2e}, max complex symmetry {cs:.2e}, max |q| {q_max:.3}"),
    )
}

fn boundary_operator(map: &wco_core::LinearFractionalMap, order: usize, cfg: &CheckConfig) -> WcoOperator {
    let [_, _, c, d] = map.coefficients();
    let psi = Rational::reciprocal_linear(d, c, d).unwrap();
    WcoOperator::new(psi.into(), (*map).into(), order, cfg)
}

fn boundary_dichotomy(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (mut eq_pos, mut normal_pos, mut eq_neg, mut normal_neg) = (0.0f64, 0.0f64, f64::INFINITY, f64::INFINITY);
    for balanced in [true, false] {
        for _ in 0..25 {
            let map = draw_boundary_map(&mut rng, balanced);
            let [a, b, c, d] = map.coefficients();
            let eq = verify_eq14(a, b, c, d, 128, cfg).unwrap().value;
            let normal = structure_residuals(boundary_operator(&map, 128, cfg).matrix(), cfg).normal.value;
            if balanced {
                eq_pos = eq_pos.max(eq);
                normal_pos = normal_pos.max(normal);
            } else {
                eq_neg = eq_neg.min(eq);
                normal_neg = normal_neg.min(normal);
            }
        }
    }
    outcome(
        eq_pos <= 1e-8 && normal_pos <= 1e-8 && eq_neg >= 1e-4 && normal_neg >= 1e-4,
        format!(
            "|b|=|c|: max identity {eq_pos:.2e}, max normal {normal_pos:.2e}; |b|!=|c|: min identity {eq_neg:.2e}, min normal {normal_neg:.2e}"
        ),
    )
}

fn boundary_conjugation(cfg: &CheckConfig) -> Outcome {
    // same stream as the positive half of the dichotomy suite
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (mut basepoint, mut cs, mut padding) = (0.0f64, 0.0f64, 0usize);
    for k in 0..10 {
        let map = draw_boundary_map(&mut rng, true);
        let [a, b, c, d] = map.coefficients();
        let radius = 0.2 + 0.04 * k as f64;
        let fam = make_boundary_normal_family(a, b, c, d, radius).unwrap();
        for &p in &fam.basepoints {
            basepoint = basepoint.max(basepoint_residual(fam.rotated_b, p));
        }
        let (pair, report) = paired(fam.psi, fam.phi, fam.conjugation, 160, cfg);
        padding = padding.max(pair.t.matrix().padding());
        cs = cs.max(report.value);
    }
    outcome(
        basepoint <= 1e-10 && cs <= 1e-7,
        format!("max base-point residual {basepoint:.2e}, max complex symmetry {cs:.2e} at N=160 (padding up to {padding})"),
    )
}

fn algebraic_suite(cfg: &CheckConfig) -> Outcome {
    let sym = |s: &str| Symbol::new(Expr::parse(s).unwrap());
    let mut ok = true;
    let mut notes = Vec::new();
    let mut identity_worst = 0.0f64;
    let mut check_identity = |psi: &Symbol, phi: &Symbol, v: &AlgebraicVerdict| {
        if let Some(cert) = v.certificate() {
            identity_worst = identity_worst.max(verify_case3_identity(psi, phi, cert, 8, 96, cfg).unwrap().value);
        }
    };

    let (psi, phi) = (sym("5"), sym("z"));
    let v = classify_algebraic(&psi, &phi, 96, cfg).unwrap();
    ok &= v.certificate().is_some_and(|c| c.degree == 1);
    check_identity(&psi, &phi, &v);

    let (psi, phi) = (sym("1"), sym("0"));
    let v = classify_algebraic(&psi, &phi, 96, cfg).unwrap();
    let idem = v.certificate().map_or(f64::INFINITY, |c| c.annihilation.value);
    ok &= v.certificate().is_some_and(|c| c.case_tag == CaseTag::ConstantPhi) && idem <= 1e-10;
    notes.push(format!("idempotent {idem:.1e}"));
    check_identity(&psi, &phi, &v);

    for src in ["exp(sin(z))", "exp(z)"] {
        let (psi, phi) = (sym(src), sym("-z"));
        let v = classify_algebraic(&psi, &phi, 96, cfg).unwrap();
        let value = v.certificate().map_or(f64::INFINITY, |c| c.annihilation.value);
        ok &= v.certificate().is_some_and(|c| c.case_tag == CaseTag::InvolutionOddWeight) && value <= 1e-8;
        notes.push(format!("{src} {value:.1e}"));
        check_identity(&psi, &phi, &v);
    }

    let fifth = C64::from_polar(1.0, std::f64::consts::TAU / 5.0);
    let rotation = format!("({} + {}i) z", fifth.re, fifth.im);
    for (psi, phi) in [("exp(z^2)", "-z"), ("1 + z", rotation.as_str())] {
        let v = classify_algebraic(&sym(psi), &sym(phi), 96, cfg).unwrap();
        ok &= matches!(v, AlgebraicVerdict::NotAlgebraic { .. });
    }
    ok &= identity_worst <= 1e-10;
    notes.push(format!("monomial identity {identity_worst:.1e}"));
    outcome(ok, notes.join(", "))
}

fn cross_pathway(cfg: &CheckConfig, pairs: &[Pair]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let (mut agree, mut total) = (0, 0);
    for pair in pairs {
        for _ in 0..20 {
            let (a, b) = (disk_point(&mut rng, 0.6), disk_point(&mut rng, 0.6));
            let r = bilinear_cs_check(&pair.t, &pair.u, a, b, cfg).unwrap();
            total += 1;
            if r.passed() == pair.cs_passed {
                agree += 1;
            }
        }
    }
    outcome(agree == total && total == 250 * 20, format!("{agree}/{total} verdicts agree"))
}

fn kernel_adjoint(cfg: &CheckConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let (psi, phi): (Symbol, Symbol) = match k % 4 {
            0 => {
                let f = draw_cs_params(&mut rng, 0.5);
                (f.psi.into(), f.phi.into())
            }
            1 => {
                let f = draw_unitary(&mut rng, 0.6);
                (f.psi.into(), f.phi.into())
            }
            2 => {
                let f = draw_hermitian(&mut rng, 0.6);
                (f.psi.into(), f.phi.into())
            }
            _ => {
                let f = draw_normal_interior(&mut rng, 0.5);
                (f.psi.into(), f.phi.into())
            }
        };
        let w = disk_point(&mut rng, 0.5);
        worst = worst.max(kernel_adjoint_check(&psi, &phi, w, 128, cfg).unwrap().value);
    }
    outcome(worst <= 1e-9, format!("max residual {worst:.2e}"))
}

fn main() -> ExitCode {
    let cfg = CheckConfig::default();
    let start = Instant::now();
    let mut pairs = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!(
            "criterion {n:>2} {:<4} {name}: {} ({:.1}s)",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((n, name, o));
    };
    run(1, "conjugation axioms", &mut || conjugation_axioms(&cfg));
    run(2, "complex symmetric family", &mut || cs_positive(&cfg, &mut pairs));
    run(3, "parameter recovery", &mut cs_converse);
    run(4, "unitary subclass", &mut || unitary_suite(&cfg, &mut pairs));
    run(5, "hermitian subclass", &mut || hermitian_suite(&cfg, &mut pairs));
    run(6, "normal interior subclass", &mut || normal_interior_suite(&cfg, &mut pairs));
    run(7, "boundary normality dichotomy", &mut || boundary_dichotomy(&cfg));
    run(8, "boundary conjugation", &mut || boundary_conjugation(&cfg));
    run(9, "algebraic classification", &mut || algebraic_suite(&cfg));
    run(10, "cross-pathway agreement", &mut || cross_pathway(&cfg, &pairs));
    run(11, "kernel adjoint identity", &mut || kernel_adjoint(&cfg));
    let failed = results.iter().filter(|(_, _, o)| !o.passed).count();
    println!("{}/{} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
