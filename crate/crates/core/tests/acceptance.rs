//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Run with `--nocapture` to see the lines for passing
//! criteria too.

use dehn_bounds::bounds::{self, BoundStyle, LhatWindow, VolumeDefect};
use dehn_bounds::calculus::{self, MonotoneMap};
use dehn_bounds::constants::{self, ConstantMode};
use dehn_bounds::polyalg::{rational_from_decimal, sturm_count, RationalPoly};
use dehn_bounds::tube::{self, exact};
use dehn_bounds::verification::{self, MonotoneKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::process::Command;

fn gate(name: &str, checks: &[(&str, bool)]) {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(what, _)| *what)
        .collect();
    if failed.is_empty() {
        println!("{name}: PASS");
    } else {
        println!("{name}: FAIL ({})", failed.join("; "));
        panic!("{name}: FAIL ({})", failed.join("; "));
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn criterion_01_constant_brackets() {
    let c = constants::default_constants();
    gate(
        "criterion 1 (constant brackets)",
        &[
            ("alpha <= 2.879", c.alpha <= 2.879),
            ("alpha > 2.86", c.alpha > 2.86),
            ("delta >= 4.563", c.delta >= 4.563),
            ("delta < 4.60", c.delta < 4.60),
            ("gamma <= 20.633", c.gamma <= 20.633),
            ("gamma > 20.40", c.gamma > 20.40),
        ],
    );
}

#[test]
fn criterion_02_threshold_reproduction() {
    let fv = calculus::floor_values();
    let short = TAU / fv.profile_plain.sqrt();
    let cap = tube::K / (TAU * tube::h(tube::working_floor()));
    gate(
        "criterion 2 (threshold reproduction)",
        &[
            ("short slope 7.5832 +- 1e-3", (short - 7.5832).abs() <= 1e-3),
            ("core cap 0.156012 +- 1e-6", (cap - 0.156012).abs() <= 1e-6),
            (
                "defect cap 0.198 +- 5e-4",
                (fv.defect_upper - 0.198).abs() <= 5e-4,
            ),
        ],
    );
}

#[test]
fn criterion_03_exact_rational_identities() {
    let third = rat(1, 3);
    let t13 = tube::even_value_at_sqrt(&exact::defect_lb_integrand(), &third);
    let hp13 = tube::even_value_at_sqrt(&exact::h_prime(), &third);
    let cap_t13 = tube::even_value_at_sqrt(&exact::defect_ub_integrand(), &third);
    gate(
        "criterion 3 (exact rational identities)",
        &[
            ("t at sqrt(1/3) = 1/2", t13 == Some(rat(1, 2))),
            ("h' at sqrt(1/3) = 3", hp13 == Some(rat(3, 1))),
            ("T at sqrt(1/3) = 1/8", cap_t13 == Some(rat(1, 8))),
        ],
    );
}

#[test]
fn criterion_04_window_scale_identity() {
    let c = constants::default_constants();
    let rel = (c.alpha * PI * c.delta / (2.0 * c.gamma) - 1.0).abs();
    gate(
        "criterion 4 (alpha*pi*delta = 2*gamma)",
        &[("relative error <= 1e-9", rel <= 1e-9)],
    );
}

#[test]
fn criterion_05_root_certification() {
    let numerator = exact::phi_tilde_numerator();
    let count = sturm_count(&numerator, &rat(1, 2), &rat(1, 1)).unwrap();
    let beta = constants::certify_beta(constants::BETA_ENCLOSURE_WIDTH).unwrap();
    let width_ok = beta.width() <= rational_from_decimal("1e-12").unwrap();
    let above_floor = beta.lo > rat(3, 5); // 0.6 > sqrt(1/3)

    let even_part = |p: &RationalPoly| -> RationalPoly {
        RationalPoly::new(p.coeffs().iter().step_by(2).cloned().collect())
    };
    let lb_core = even_part(&exact::lb_derivative_sign_core().unwrap());
    let ub_core = even_part(&exact::ub_derivative_sign_core().unwrap());
    let lb_roots = sturm_count(&lb_core, &rat(1, 3), &rat(1, 1)).unwrap();
    let ub_roots = sturm_count(&ub_core, &rat(1, 3), &rat(1, 1)).unwrap();
    gate(
        "criterion 5 (root certification)",
        &[
            ("tilde numerator has one root", count == 1),
            ("beta enclosure width <= 1e-12", width_ok),
            ("beta lies above sqrt(1/3)", above_floor),
            ("lb sign core root-free", lb_roots == 0),
            ("ub sign core root-free", ub_roots == 0),
        ],
    );
}

#[test]
fn criterion_06_monotonicity_grids() {
    let checks: Vec<(String, bool)> = MonotoneKind::ALL
        .iter()
        .map(|&kind| {
            let report = verification::check_monotonicity(kind, 10_000);
            (report.check_name.clone(), report.passed)
        })
        .collect();
    let borrowed: Vec<(&str, bool)> = checks.iter().map(|(n, ok)| (n.as_str(), *ok)).collect();
    gate("criterion 6 (monotonicity on 1e4 grids)", &borrowed);
}

#[test]
fn criterion_07_envelope_grids() {
    let reports = verification::check_envelopes(10_000);
    let checks: Vec<(&str, bool)> = reports
        .iter()
        .map(|r| (r.check_name.as_str(), r.passed))
        .collect();
    gate("criterion 7 (envelopes on 1e4 grid)", &checks);
}

#[test]
fn criterion_08_inversion_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let lo = tube::working_floor() + 1e-3;
    let hi = 1.0 - 1e-3;
    let maps = [
        MonotoneMap::DefectLower,
        MonotoneMap::DefectUpper,
        MonotoneMap::ProfilePlain,
    ];
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = rng.gen_range(lo..hi);
        for map in maps {
            let target = map.eval(z, 1e-12).unwrap();
            let back = calculus::invert_monotone(map, target, 1e-10).unwrap();
            worst = worst.max((back.get() - z).abs());
        }
    }
    gate(
        "criterion 8 (inversion roundtrips)",
        &[("all |roundtrip - z| <= 1e-8", worst <= 1e-8)],
    );
}

#[test]
fn criterion_09_composed_dominance() {
    let lo: f64 = 1e-4;
    let hi: f64 = 0.15;
    let mut ell_ok = true;
    let mut lo_ok = true;
    let mut hi_ok = true;
    for i in 0..100 {
        let t = (i as f64 + 1.0) / 101.0;
        let dv = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
        let defect = VolumeDefect(dv);
        let ell = bounds::ell_upper(defect, BoundStyle::Composed, ConstantMode::Published, 1e-12)
            .unwrap();
        ell_ok &= ell <= 2.879 * dv;
        match bounds::lhat_sq_window(defect, BoundStyle::Composed, ConstantMode::Published, 1e-12)
            .unwrap()
        {
            LhatWindow::Nonempty { lo_sq, hi_sq } => {
                lo_ok &= lo_sq >= 4.563 / dv * (1.0 - 1e-9);
                hi_ok &= hi_sq <= 20.633 / dv * (1.0 + 1e-9);
            }
            LhatWindow::Empty => {
                lo_ok = false;
                hi_ok = false;
            }
        }
    }
    gate(
        "criterion 9 (composed dominance)",
        &[
            ("composed ell <= alpha*defect", ell_ok),
            ("composed lower edge >= 4.563/defect", lo_ok),
            ("composed upper edge <= 20.633/defect", hi_ok),
        ],
    );
}

#[test]
fn criterion_10_decision_logic_cli() {
    let run = |dv: &str| -> String {
        let out = Command::new(env!("CARGO_BIN_EXE_dehn-bounds"))
            .args(["bounds", "--delta-v", dv])
            .output()
            .expect("run binary");
        assert!(out.status.success(), "bounds --delta-v {dv} exited nonzero");
        String::from_utf8(out.stdout).expect("utf8 output")
    };
    gate(
        "criterion 10 (decision logic table)",
        &[
            (
                "0.1 emits [45.63, 206.33]",
                run("0.1").contains("[45.63, 206.33]"),
            ),
            (
                "0.5 emits ShortSlopeOnly",
                run("0.5").contains("ShortSlopeOnly"),
            ),
            (
                "0 emits ExcludedByVolume",
                run("0").contains("ExcludedByVolume"),
            ),
        ],
    );
}
