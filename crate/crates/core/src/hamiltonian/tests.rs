use super::*;
use proptest::prelude::*;

fn richardson_midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let mid = |m: usize| {
        let h = (b - a) / m as f64;
        (0..m).map(|k| f(a + (k as f64 + 0.5) * h)).sum::<f64>() * h
    };
    (4.0 * mid(2 * n) - mid(n)) / 3.0
}

fn power_log_h2(t: f64, alpha: f64, a1: f64, a2: f64) -> f64 {
    let l = (1.0 / (1.0 - t)).ln();
    let ll = if l > 1.0 { l.ln() } else { 0.0 };
    (1.0 / (1.0 - t)).powf(alpha) * (1.0 + l).powf(-a1) * (1.0 + ll).powf(-a2)
}

fn one_cell(m: Mat2) -> HamiltonianSpec {
    HamiltonianSpec::from_table(Table::new(vec![0.0, 1.0], vec![m]).unwrap())
}

#[test]
fn eval_examples() {
    let unit = HamiltonianSpec::constant(Interval::finite(0.0, 1.0).unwrap(), 1.0, 1.0, 0.0).unwrap();
    assert_eq!(unit.eval(0.5).unwrap(), Mat2::IDENTITY);
    let pl = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let v = pl.eval(0.5).unwrap();
    assert!((v.h2() - 4.0 / (1.0 + 2f64.ln())).abs() < 1e-14);
    assert_eq!(v.h1(), 1.0);
    let cell = one_cell(Mat2::sym(2.0, 1.0, 1.0));
    for t in [0.0, 0.3, 0.999] {
        assert_eq!(cell.eval(t).unwrap(), Mat2::sym(2.0, 1.0, 1.0));
    }
    assert!(matches!(pl.eval(1.0), Err(Error::OutOfDomain(_))));
    assert!(matches!(pl.eval(-0.1), Err(Error::OutOfDomain(_))));
}

#[test]
fn right_continuity() {
    let h = HamiltonianSpec::from_table(
        Table::new(vec![0.0, 1.0, 2.0], vec![Mat2::sym(1.0, 0.0, 0.0), Mat2::sym(0.0, 1.0, 0.0)]).unwrap(),
    );
    assert_eq!(h.eval(1.0).unwrap(), Mat2::sym(0.0, 1.0, 0.0));
    assert_eq!(h.eval(1.0 - 1e-15).unwrap(), Mat2::sym(1.0, 0.0, 0.0));
}

#[test]
fn tail_examples() {
    let de = HamiltonianSpec::diag_exp();
    assert!((de.tail_h1(1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
    let pl = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    assert!((pl.tail_h1(0.25).unwrap() - 0.75).abs() < 1e-16);
    let inf = HamiltonianSpec::constant(Interval::half_line(0.0).unwrap(), 1.0, 1.0, 0.0).unwrap();
    assert!(matches!(inf.tail_h1(1.0), Err(Error::NotNormalized(_))));
}

#[test]
fn table_matches_family_tails() {
    for h in [
        HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap(),
        HamiltonianSpec::rank_one_power_log(1.0, 2.0).unwrap(),
    ] {
        let table = HamiltonianSpec::from_table(h.to_table(Resolution { depth: 30, per_cell: 8 }).unwrap());
        let end = table.interval().b_value();
        for &t in &[0.0, 0.1, 0.5, 0.75, 0.9, 0.99, 0.999_9] {
            // table lives on [0, c): compare ∫_t^c h₁ and ∫_0^t h₂
            let fam_tail = h.integral(Quantity::H1, h.point(t), h.point(end));
            let tab_tail = table.tail_h1(t).unwrap();
            assert!((fam_tail - tab_tail).abs() <= 1e-9 * fam_tail);
            let f2 = h.head_integral(2, t).unwrap();
            let t2 = table.head_integral(2, t).unwrap();
            if t == 0.0 {
                assert_eq!(t2, 0.0);
                continue;
            }
            // t sits on a breakpoint for dyadic t; compare at the enclosing breakpoints otherwise
            let k = table.as_table().unwrap().cell_index(t);
            let bp = table.as_table().unwrap().breakpoints()[k];
            if bp == t {
                assert!((f2 - t2).abs() <= 1e-9 * f2, "{t}: {f2} vs {t2}");
            }
        }
    }
}

#[test]
fn head_integral_examples() {
    let unit = HamiltonianSpec::constant(Interval::finite(0.0, 1.0).unwrap(), 1.0, 1.0, 0.0).unwrap();
    assert!((unit.head_integral(2, 0.5).unwrap() - 0.5).abs() < 1e-16);
    let pl = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    for t in [0.1, 0.5, 0.9] {
        assert_eq!(pl.head_integral(3, t).unwrap(), 0.0);
    }
    let t = 1.0 - 2f64.powi(-4);
    let got = pl.head_integral(2, t).unwrap();
    let oracle = richardson_midpoint(|s| power_log_h2(s, 2.0, 1.0, 0.0), 0.0, t, 1 << 15);
    assert!((got - oracle).abs() <= 1e-8 * oracle, "{got} vs {oracle}");
    // with the log-log factor as well
    let pl2 = HamiltonianSpec::power_log(2.0, 1.0, 2.0).unwrap();
    let got = pl2.head_integral(2, t).unwrap();
    let oracle = richardson_midpoint(|s| power_log_h2(s, 2.0, 1.0, 2.0), 0.0, t, 1 << 15);
    assert!((got - oracle).abs() <= 1e-8 * oracle, "{got} vs {oracle}");
    assert!(pl.head_integral(4, 0.5).is_err());
}

#[test]
fn rank_one_off_diagonal_integral() {
    // closed form −[2√(1+u)] against quadrature of −√h₂
    let h = HamiltonianSpec::rank_one_power_log(1.0, 0.0).unwrap();
    let t = 0.9;
    let got = h.head_integral(3, t).unwrap();
    let oracle = -richardson_midpoint(|s| power_log_h2(s, 2.0, 1.0, 0.0).sqrt(), 0.0, t, 1 << 14);
    assert!((got - oracle).abs() < 1e-9 * oracle.abs());
}

#[test]
fn string_rank_one_is_degenerate() {
    let h = HamiltonianSpec::string_rank_one(2.0, 1.0, 0.0).unwrap();
    for t in [0.0, 0.2, 0.5, 0.9, 0.999] {
        let m = h.eval(t).unwrap();
        assert_eq!(m.h1() * m.h2() - m.h3() * m.h3(), 0.0);
        let mass = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap().head_integral(2, t).unwrap();
        assert!((m.h3() + mass).abs() <= 1e-10 * mass.max(1e-300));
    }
    assert_eq!(h.det_sqrt_integral(0.9).unwrap(), 0.0);
}

#[test]
fn diag_examples() {
    let r1 = HamiltonianSpec::rank_one_power_log(1.0, 0.0).unwrap();
    let d = r1.diag();
    assert_eq!(d, HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap());
    let pl = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    assert_eq!(pl.diag(), pl);
    for t in [0.0, 0.3, 0.9] {
        assert_eq!(r1.tail_h1(t).unwrap(), d.tail_h1(t).unwrap());
        assert_eq!(r1.head_integral(2, t).unwrap(), d.head_integral(2, t).unwrap());
    }
    let s = HamiltonianSpec::string_rank_one(2.0, 0.0, 0.0).unwrap();
    assert_eq!(s.diag().diag(), s.diag());
    assert_eq!(s.diag().eval(0.5).unwrap().h3(), 0.0);
}

#[test]
fn rotation_examples() {
    let iv = Interval::finite(0.0, 1.0).unwrap();
    let h = HamiltonianSpec::constant(iv, 1.0, 0.0, 0.0).unwrap();
    let r = h.rotate(core::f64::consts::FRAC_PI_2).eval(0.5).unwrap();
    assert!(r.max_abs_diff(&Mat2::sym(0.0, 1.0, 0.0)) < 1e-15);
    let table = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap().rotate(0.0);
    let there = table.rotate(0.7).rotate(-0.7);
    let (a, b) = (table.as_table().unwrap(), there.as_table().unwrap());
    for (x, y) in a.cells().iter().zip(b.cells()) {
        let scale = x.h1().abs().max(x.h2().abs()).max(1.0);
        assert!(x.max_abs_diff(y) <= 1e-14 * scale);
    }
}

#[test]
fn sqrt_examples() {
    let s = psd_sqrt(&Mat2::sym(4.0, 9.0, 0.0)).unwrap();
    assert!((s.v1 - 2.0).abs() < 1e-15 && (s.v2 - 3.0).abs() < 1e-15 && s.v3 == 0.0);
    let r = psd_sqrt(&Mat2::sym(1.0, 1.0, 1.0)).unwrap();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    assert!((r.v1 - h).abs() < 1e-15 && (r.v2 - h).abs() < 1e-15 && (r.v3 - h).abs() < 1e-15);
    assert_eq!(psd_sqrt(&Mat2::ZERO).unwrap(), SqrtTriple { v1: 0.0, v2: 0.0, v3: 0.0 });
    assert!(matches!(psd_sqrt(&Mat2::sym(1.0, 1.0, 2.0)), Err(Error::NotPsd(_))));
    let cell = one_cell(Mat2::sym(1.0, 1.0, 2.0));
    assert!(cell.sqrt_at(0.5).is_err());
}

#[test]
fn reparametrize_examples() {
    let h = HamiltonianSpec::constant(Interval::half_line(0.0).unwrap(), 2.0, 2.0, 0.0).unwrap();
    let r = h.reparametrize_trace(Resolution::default()).unwrap();
    assert_eq!(r.interval(), Interval::half_line(0.0).unwrap());
    assert_eq!(r.eval(3.0).unwrap(), Mat2::sym(0.5, 0.5, 0.0));

    let normalized = HamiltonianSpec::from_table(
        Table::new(
            vec![0.0, 1.0, 2.5, f64::INFINITY],
            vec![Mat2::sym(0.5, 0.5, 0.1), Mat2::sym(1.0, 0.0, 0.0), Mat2::sym(0.25, 0.75, -0.4)],
        )
        .unwrap(),
    );
    assert_eq!(normalized.reparametrize_trace(Resolution::default()).unwrap(), normalized);

    let raw = HamiltonianSpec::from_table(
        Table::new(
            vec![0.0, 1.0, 1.5, 2.0, f64::INFINITY],
            vec![Mat2::sym(2.0, 1.0, 1.0), Mat2::ZERO, Mat2::sym(3.0, 5.0, -2.0), Mat2::sym(0.0, 4.0, 0.0)],
        )
        .unwrap(),
    );
    let r = raw.reparametrize_trace(Resolution::default()).unwrap();
    let t_in = raw.as_table().unwrap();
    let t_out = r.as_table().unwrap();
    assert_eq!(t_out.cells().len(), 3, "zero-trace cell removed");
    let kept: Vec<usize> = vec![0, 2, 3];
    for (j, &k) in kept.iter().enumerate() {
        let m = t_in.cells()[k];
        let mt = t_out.cells()[j];
        assert!((mt.trace() - 1.0).abs() < 1e-15);
        let dxdt = m.trace();
        assert!((mt.det() * dxdt * dxdt - m.det()).abs() < 1e-12);
        if k != 3 {
            let dt = t_in.breakpoints()[k + 1] - t_in.breakpoints()[k];
            let dx = t_out.breakpoints()[j + 1] - t_out.breakpoints()[j];
            assert!((dx - dxdt * dt).abs() < 1e-14);
        }
    }
    let finite = one_cell(Mat2::IDENTITY);
    assert!(matches!(finite.reparametrize_trace(Resolution::default()), Err(Error::NotLimitPoint(_))));
    let fam = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap().reparametrize_trace(Resolution::default()).unwrap();
    assert!(fam.is_limit_point());
    assert!((fam.eval(5.0).unwrap().trace() - 1.0).abs() < 1e-14);
}

#[test]
fn validate_examples() {
    let plain = HamiltonianSpec::constant(Interval::half_line(0.0).unwrap(), 1.0, 1.0, 0.0).unwrap();
    let rep = plain.validate();
    for name in ["psd", "local-integrability", "limit-point"] {
        assert!(rep.check(name).unwrap().passed, "{name}");
    }
    assert!(!rep.check("normalization").unwrap().passed);

    let bad = one_cell(Mat2::sym(1.0, 1.0, 1.5));
    let rep = bad.validate();
    assert!(!rep.check("psd").unwrap().passed);
    assert!(rep.check("psd").unwrap().detail.contains("cell 0"));

    let pl = HamiltonianSpec::power_log(2.0, 0.0, 0.0).unwrap();
    assert!(pl.validate().all_passed(), "{:?}", pl.validate());
    for h in [
        HamiltonianSpec::diag_exp(),
        HamiltonianSpec::rank_one_power_log(5.0, 0.0).unwrap(),
        HamiltonianSpec::string_rank_one(2.0, 1.0, 0.0).unwrap(),
    ] {
        assert!(h.validate().all_passed(), "{:?}", h.validate());
    }
    assert!(HamiltonianSpec::power_log(1.0, 0.0, 0.0).is_err());
}

#[test]
fn det_sqrt_examples() {
    let l = 2.5;
    let h = HamiltonianSpec::constant(Interval::finite(0.0, l).unwrap(), 1.0, 1.0, 0.0).unwrap();
    assert!((h.det_sqrt_integral(l).unwrap() - l).abs() < 1e-15);
    let pl = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let c = 0.99;
    let got = pl.det_sqrt_integral(c).unwrap();
    let oracle = richardson_midpoint(|s| power_log_h2(s, 2.0, 1.0, 0.0).sqrt(), 0.0, c, 1 << 16);
    assert!((got - oracle).abs() < 1e-8 * oracle, "{got} {oracle}");
    let closed = 2.0 * ((1.0 + (1.0 / (1.0 - c)).ln()).sqrt() - 1.0);
    assert!((got - closed).abs() < 1e-12);
    let pl2 = HamiltonianSpec::power_log(1.5, 1.0, 1.0).unwrap();
    let got = pl2.det_sqrt_integral(c).unwrap();
    let oracle = richardson_midpoint(|s| power_log_h2(s, 1.5, 1.0, 1.0).sqrt(), 0.0, c, 1 << 16);
    assert!((got - oracle).abs() < 1e-8 * oracle, "{got} {oracle}");
    assert_eq!(HamiltonianSpec::rank_one_power_log(1.0, 0.0).unwrap().det_sqrt_integral(0.9).unwrap(), 0.0);
}

fn psd_matrix() -> impl Strategy<Value = Mat2> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b, c)| {
        // L Lᵀ with L = [[a, 0], [b, c]]
        Mat2::sym(a * a, b * b + c * c, a * b)
    })
}

proptest! {
    #[test]
    fn sqrt_squares_back(m in psd_matrix()) {
        let s = psd_sqrt(&m).unwrap().matrix();
        let back = s.mul(&s);
        prop_assert!(back.max_abs_diff(&m) <= 1e-12 * (1.0 + m.trace()));
    }

    #[test]
    fn rotation_group_action(m in psd_matrix(), a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let h = one_cell(m);
        let two = h.rotate(a).rotate(b).eval(0.5).unwrap();
        let one = h.rotate(a + b).eval(0.5).unwrap();
        prop_assert!(two.max_abs_diff(&one) <= 1e-13 * (1.0 + m.trace()));
        let r = h.rotate(a).eval(0.5).unwrap();
        prop_assert!((r.trace() - m.trace()).abs() <= 1e-14 * (1.0 + m.trace()));
        prop_assert!((r.det() - m.det()).abs() <= 1e-14 * (1.0 + m.trace()).powi(2));
        let back = h.rotate(a).rotate(-a).eval(0.5).unwrap();
        prop_assert!(back.max_abs_diff(&m) <= 1e-14 * (1.0 + m.trace()));
    }

    #[test]
    fn sampled_eigenvalues_nonnegative(u in 0.0f64..30.0, a1 in 0.0f64..6.0, a2 in -1.0f64..3.0) {
        for h in [
            HamiltonianSpec::power_log(2.0, a1, a2).unwrap(),
            HamiltonianSpec::rank_one_power_log(a1, a2).unwrap(),
            HamiltonianSpec::diag_exp(),
        ] {
            let p = h.interval().point_at_u(u);
            let m = h.value_at(p);
            let (lo, _) = m.sym_eigenvalues();
            prop_assert!(lo >= -1e-12 * m.trace().max(1.0));
        }
    }

    #[test]
    fn tail_plus_head_is_total(t in 0.0f64..0.999_999, a1 in 0.0f64..3.0) {
        for h in [HamiltonianSpec::power_log(2.0, a1, 0.0).unwrap(), HamiltonianSpec::diag_exp()] {
            let total = h.tail_h1(h.interval().a).unwrap();
            let s = h.tail_h1(t).unwrap() + h.head_integral(1, t).unwrap();
            prop_assert!((s - total).abs() <= 1e-12 * total);
        }
    }

    #[test]
    fn diag_is_idempotent(m in psd_matrix()) {
        let h = one_cell(m);
        prop_assert_eq!(h.diag().diag(), h.diag());
    }
}
