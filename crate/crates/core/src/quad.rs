//! Adaptive Gauss–Kronrod quadrature and fixed Gauss–Legendre rules.

use crate::math;
use alloc::vec::Vec;

// 15-point Kronrod extension of the 7-point Gauss rule (nodes on [0,1], symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: returns (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for k in 0..7 {
        let dx = h * XGK[k];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[k] * s;
        if k % 2 == 1 {
            rg += WG[k / 2] * s;
        }
    }
    (rk * h, math::abs((rk - rg) * h))
}

const MAX_PANELS: usize = 600;

/// Globally adaptive integration of `f` over `[a, b]` (finite) to relative tolerance `rel_tol`.
///
/// Panels are split at their midpoint, always refining the panel with the largest
/// error estimate. After `MAX_PANELS` panels the best estimate is returned.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    integrate_with_error(&mut f, a, b, rel_tol, 0.0).0
}

/// As [`integrate`], also returning the final error estimate; `abs_tol` is an absolute floor.
pub fn integrate_with_error<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(32);
    panels.push((a, b, v, e));
    let mut total = v;
    let mut err = e;
    while panels.len() < MAX_PANELS {
        if !total.is_finite() {
            break;
        }
        if err <= (rel_tol * math::abs(total)).max(abs_tol) {
            break;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, pv, pe) = panels.swap_remove(idx);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            // panel cannot be split further
            panels.push((pa, pb, pv, 0.0));
            err -= pe;
            continue;
        }
        let (v1, e1) = gk15(f, pa, m);
        let (v2, e2) = gk15(f, m, pb);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
    // re-sum to limit drift from the running updates
    let total: f64 = panels.iter().map(|p| p.2).sum();
    let err: f64 = panels.iter().map(|p| p.3).sum();
    (total, err)
}

/// Integral of `f` over `[a, b]` split at every integer strictly inside the interval.
///
/// Used for integrands in logarithmic coordinates, where unit steps are natural scales.
pub fn integrate_unit_pieces<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut lo = a;
    let mut k = math::floor(a) + 1.0;
    while k < b {
        sum += integrate_with_error(&mut f, lo, k, rel_tol, 0.0).0;
        lo = k;
        k += 1.0;
    }
    sum + integrate_with_error(&mut f, lo, b, rel_tol, 0.0).0
}

/// Integral of `f` over `[a, ∞)`, summed over panels of geometrically growing length.
///
/// Returns `+∞` when the panel contributions do not become negligible (divergence),
/// which is the legal value for improper tails of nonnegative integrands.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> f64 {
    let mut sum = 0.0;
    let mut lo = a;
    let mut len = 1.0;
    let mut quiet = 0;
    for k in 0..200 {
        let hi = lo + len;
        let (v, _) = integrate_with_error(&mut f, lo, hi, rel_tol, 0.0);
        if !v.is_finite() {
            return v;
        }
        sum += v;
        if !sum.is_finite() {
            return sum;
        }
        if math::abs(v) <= 1e-17 * math::abs(sum) || (sum == 0.0 && v == 0.0 && k > 40) {
            quiet += 1;
            if quiet >= 3 {
                return sum;
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        if k >= 4 {
            len *= 2.0;
        }
        if lo > 1e280 {
            break;
        }
    }
    if sum >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Eight-point Gauss–Legendre nodes and weights on [−1, 1].
pub const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
pub const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre8<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..8 {
        s += GL8_WEIGHTS[k] * f(c + h * GL8_NODES[k]);
    }
    s * h
}
