use super::*;
use crate::hamiltonian::Table;
use proptest::prelude::*;

fn unit_grid(m: usize) -> Grid {
    let iv = Interval::finite(0.0, m as f64 + 1.0).unwrap();
    Grid::uniform(iv, 0.0, m as f64, m).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Deterministic pseudo-random matrix entries in [-1, 1).
fn lcg_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let data = (0..rows * cols)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect();
    DenseMatrix::from_row_major(rows, cols, data).unwrap()
}

fn matmul_t(a: &DenseMatrix) -> DenseMatrix {
    // AᵀA
    let mut out = DenseMatrix::zeros(a.cols(), a.cols());
    for i in 0..a.cols() {
        for j in 0..a.cols() {
            let v: f64 = (0..a.rows()).map(|k| a.get(k, i) * a.get(k, j)).sum();
            out.set(i, j, v);
        }
    }
    out
}

#[test]
fn two_cell_kernel() {
    let g = unit_grid(2);
    let t = discretize_t(&|_| 1.0, &|_| 1.0, &g, DiagonalRule::Exclude).unwrap();
    assert_eq!(t.matrix, DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap());
    let half = discretize_t(&|_| 1.0, &|_| 1.0, &g, DiagonalRule::Half).unwrap();
    assert_eq!(half.matrix, DenseMatrix::from_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap());
}

#[test]
fn zero_kappa_gives_zero_matrix() {
    let g = unit_grid(5);
    let t = discretize_t(&|_| 0.0, &|p| 1.0 + p.t, &g, DiagonalRule::Half).unwrap();
    assert!(t.matrix.as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn grid_errors() {
    let iv = Interval::finite(0.0, 1.0).unwrap();
    assert!(matches!(Grid::from_abscissae(iv, &[0.0, 0.5]), Err(Error::DegenerateGrid(_))));
    assert!(matches!(Grid::from_abscissae(iv, &[0.0, 0.5, 0.5]), Err(Error::DegenerateGrid(_))));
    assert!(matches!(Grid::from_abscissae(iv, &[0.0, 0.5, 1.0]), Err(Error::DegenerateGrid(_))));
    assert!(matches!(Grid::from_abscissae(iv, &[-0.1, 0.5, 0.9]), Err(Error::DegenerateGrid(_))));
}

#[test]
fn singular_value_examples() {
    let u = [1.0, -2.0, 0.5, 3.0];
    let v = [0.3, 1.0, -1.0];
    let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
    let sv = singular_values(&DenseMatrix::from_rows(&rows).unwrap()).unwrap().into_vec();
    let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((sv[0] - nu * nv).abs() < 1e-12 * nu * nv);
    assert!(sv[1..].iter().all(|&s| s < 1e-12));

    let id = singular_values(&DenseMatrix::identity(7)).unwrap().into_vec();
    assert_eq!(id, vec![1.0; 7]);

    let a = lcg_matrix(5, 4, 3);
    let sa = singular_values(&a).unwrap().into_vec();
    let mut big = DenseMatrix::zeros(9, 9);
    for i in 0..5 {
        for j in 0..4 {
            big.set(4 + i, j, a.get(i, j));
            big.set(j, 4 + i, a.get(i, j));
        }
    }
    let sb = singular_values(&big).unwrap().into_vec();
    for (k, s) in sa.iter().enumerate() {
        assert!((sb[2 * k] - s).abs() < 1e-12 && (sb[2 * k + 1] - s).abs() < 1e-12);
    }
    assert!(sb[8].abs() < 1e-12);
}

#[test]
fn singular_values_match_gram_trace() {
    // Σσ² = ‖A‖_F² and Σσ⁴ = ‖AᵀA‖_F²
    let a = lcg_matrix(12, 9, 11);
    let sv = singular_values(&a).unwrap().into_vec();
    let fro: f64 = a.as_slice().iter().map(|x| x * x).sum();
    let s2: f64 = sv.iter().map(|s| s * s).sum();
    assert!((fro - s2).abs() < 1e-12 * fro);
    let g = matmul_t(&a);
    let fro4: f64 = g.as_slice().iter().map(|x| x * x).sum();
    let s4: f64 = sv.iter().map(|s| s.powi(4)).sum();
    assert!((fro4 - s4).abs() < 1e-11 * fro4);
    assert!(sv.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn singular_values_reject_non_finite() {
    let mut a = DenseMatrix::identity(3);
    a.set(1, 2, f64::NAN);
    assert!(matches!(singular_values(&a), Err(Error::Numerical(_))));
}

#[test]
fn real_part_examples() {
    let mut a = DenseMatrix::zeros(3, 3);
    a.set(0, 2, 1.0);
    let r = real_part(&a).unwrap();
    assert_eq!(r.get(0, 2), 0.5);
    assert_eq!(r.get(2, 0), 0.5);
    assert_eq!(r.as_slice().iter().filter(|&&v| v != 0.0).count(), 2);
    let s = real_part(&r).unwrap();
    assert_eq!(s, r);
    assert!(real_part(&DenseMatrix::zeros(2, 3)).is_err());
}

#[test]
fn real_part_singular_value_bound() {
    // Ky Fan: σ_{2k−1}((T+Tᵀ)/2) ≤ σ_k(T)
    let h = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let g = Grid::log_levels(&h, 16, 64, 2).unwrap();
    let t = discretize_t(&|p| h.value_at(p).h1().sqrt(), &|p| h.value_at(p).h2().sqrt(), &g, DiagonalRule::Exclude)
        .unwrap();
    let st = singular_values(&t.matrix).unwrap().into_vec();
    let sr = singular_values(&real_part(&t.matrix).unwrap()).unwrap().into_vec();
    for k in 0..st.len() / 2 {
        assert!(sr[2 * k] <= st[k] * (1.0 + 1e-12));
    }
}

#[test]
fn kh_diagonal_block_identity() {
    let h = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let g = Grid::log_levels(&h, 6, 14, 2).unwrap();
    for rule in [DiagonalRule::Exclude, DiagonalRule::Half] {
        let k = discretize_kh(&h, &g, rule).unwrap();
        let t = discretize_t(&|p| h.value_at(p).h1().sqrt(), &|p| h.value_at(p).h2().sqrt(), &g, rule).unwrap();
        let m = g.len();
        for i in 0..m {
            for j in 0..m {
                // entry (2i+1, 2j) is −T(i, j); (2i, 2j+1) is −T(j, i); h₁–h₁ and h₂–h₂ blocks vanish
                assert_eq!(k.get(2 * i + 1, 2 * j), -t.matrix.get(i, j));
                assert_eq!(k.get(2 * i, 2 * j + 1), -t.matrix.get(j, i));
                assert_eq!(k.get(2 * i, 2 * j), 0.0);
                assert_eq!(k.get(2 * i + 1, 2 * j + 1), 0.0);
            }
        }
    }
}

#[test]
fn kh_is_symmetric() {
    let cells = vec![Mat2::sym(1.0, 2.0, 0.5), Mat2::sym(3.0, 1.0, -1.0), Mat2::sym(0.5, 0.5, 0.5), Mat2::sym(2.0, 0.0, 0.0)];
    let h = HamiltonianSpec::from_table(Table::new(vec![0.0, 1.0, 1.5, 3.0, 4.0], cells).unwrap());
    let g = Grid::from_abscissae(h.interval(), &[0.0, 0.4, 1.0, 1.2, 2.0, 3.0, 3.9]).unwrap();
    for rule in [DiagonalRule::Exclude, DiagonalRule::Half] {
        let k = discretize_kh(&h, &g, rule).unwrap();
        assert!(k.max_abs_diff(&k.transpose()) < 1e-15);
    }
}

#[test]
fn kh_rank_one_matches_direct_kernel() {
    let h = HamiltonianSpec::rank_one_power_log(1.0, 0.0).unwrap();
    let g = independence_grid(&h, 600).unwrap();
    let k = discretize_kh(&h, &g, DiagonalRule::Exclude).unwrap();
    assert!(k.is_finite());
    let cells = g.cells();
    let mut s = 17u64;
    for _ in 0..10 {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
        let i = (s >> 33) as usize % cells.len();
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
        let j = (s >> 33) as usize % cells.len();
        // H(t) = vvᵀ with v = (1, −√h₂), so H^{1/2} = vvᵀ/|v|
        let v = |p: Point| {
            let r = h.value_at(p).h2().sqrt();
            let n = (1.0 + r * r).sqrt();
            [1.0 / n.sqrt(), -r / n.sqrt()]
        };
        let (vi, vj) = (v(cells[i].mid), v(cells[j].mid));
        let w = (cells[i].len * cells[j].len).sqrt();
        for x in 0..2 {
            for y in 0..2 {
                let expected = if j < i {
                    -vi[x] * vi[0] * vj[1] * vj[y] * w
                } else if j > i {
                    -vi[x] * vi[1] * vj[0] * vj[y] * w
                } else {
                    0.0
                };
                let got = k.get(2 * i + x, 2 * j + y);
                assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1e-300), "({i},{j}) {got} {expected}");
            }
        }
    }
}

#[test]
fn compressed_kh_matches_direct_svd() {
    let tables = [
        HamiltonianSpec::rank_one_power_log(1.0, 0.0).unwrap(),
        HamiltonianSpec::rank_one_power_log(5.0, 1.0).unwrap(),
        HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap(),
        HamiltonianSpec::from_table(
            Table::new(
                vec![0.0, 0.3, 0.7, 1.0],
                vec![Mat2::sym(1.0, 2.0, 0.5), Mat2::sym(4.0, 1.0, -2.0), Mat2::sym(0.2, 3.0, 0.1)],
            )
            .unwrap(),
        ),
    ];
    for h in &tables {
        let g = Grid::log_levels(h, 5, 20, 2).unwrap();
        for rule in [DiagonalRule::Exclude, DiagonalRule::Half] {
            let direct = singular_values(&discretize_kh(h, &g, rule).unwrap()).unwrap().into_vec();
            let fast = kh_singular_values(h, &g, rule).unwrap().into_vec();
            let top = direct[0];
            assert!(close(&direct, &fast, 1e-10 * top), "{}: {direct:?} vs {fast:?}", h.describe());
        }
    }
}

#[test]
fn sym_eigen_extreme_ratio() {
    let h2 = 1e150;
    let m = Mat2::sym(1.0, h2, -(h2 as f64).sqrt());
    let [(mu1, v1), (mu2, _)] = sym_eigen(&m);
    assert!((mu1 - (1.0 + h2)).abs() <= 1e-15 * mu1);
    assert!(mu2.abs() <= 1e-12 * mu1);
    // v₁ ∝ (1, −√h₂)
    assert!((v1[0] * h2.sqrt() + v1[1]).abs() < 1e-15);
    for m in [Mat2::sym(2.0, 1.0, 0.3), Mat2::sym(1.0, 2.0, -0.3), Mat2::sym(1.0, 1.0, 0.0), Mat2::sym(0.0, 0.0, 0.0)] {
        for (mu, v) in sym_eigen(&m) {
            let mv = m.apply(v);
            assert!((mv[0] - mu * v[0]).abs() < 1e-14 && (mv[1] - mu * v[1]).abs() < 1e-14);
        }
    }
}

#[test]
fn offdiag_examples() {
    let a = lcg_matrix(6, 6, 5);
    let single = offdiag_block_singulars(&a, &[6]).unwrap().into_vec();
    assert_eq!(single, vec![0.0; 6]);
    // two blocks coupled by a rank-one upper block u vᵀ
    let u = [1.0, 2.0];
    let v = [0.5, -1.0, 2.0];
    let mut b = DenseMatrix::zeros(5, 5);
    for i in 0..2 {
        for j in 0..3 {
            b.set(i, 2 + j, 2.0 * u[i] * v[j]); // real part halves it
        }
    }
    let s = offdiag_block_singulars(&b, &[2, 3]).unwrap().into_vec();
    let norm = 5f64.sqrt() * 5.25f64.sqrt();
    assert!((s[0] - norm).abs() < 1e-12 * norm);
    assert!(s[1..].iter().all(|&x| x < 1e-12));
    assert!(matches!(offdiag_block_singulars(&b, &[2, 2]), Err(Error::PartitionMismatch(_))));
}

#[test]
fn offdiag_compression_of_dyadic_grid() {
    // Σ P_n (Re T) P_{n+1} has rank-one blocks of norm ½·‖φ‖_{J_n}‖κ‖_{J_{n+1}} = 2^{−3/2} ω_n
    let h = HamiltonianSpec::diag_exp();
    let depth = 24;
    let (g, part) = Grid::dyadic(&h, depth, 8).unwrap();
    let t = discretize_t(&|p| h.value_at(p).h1().sqrt(), &|p| h.value_at(p).h2().sqrt(), &g, DiagonalRule::Exclude)
        .unwrap();
    let sv = offdiag_block_singulars(&t.matrix, &part).unwrap().into_vec();
    let omega = crate::growth::rearrange_desc(&crate::dyadic::omega_sequence(&h, depth).unwrap());
    for n in 0..depth / 2 {
        let expected = 2f64.powf(-1.5) * omega[n];
        assert!((sv[n] / expected - 1.0).abs() < 0.05, "n={n}: {} vs {expected}", sv[n]);
    }
}

#[test]
fn independence_diagonal_input_is_identical() {
    let h = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let g = Grid::log_levels(&h, 16, 64, 2).unwrap();
    let r = independence_check(&h, &g, (4, 16), DiagonalRule::Half).unwrap();
    assert_eq!(r.slope_full, r.slope_diag);
    assert_eq!(r.difference, 0.0);
    assert_eq!(r.sigma_full, r.sigma_diag);
    assert!(independence_check(&h, &g, (4, 1000), DiagonalRule::Half).is_err());
}

#[test]
fn log_levels_allocation() {
    let h = HamiltonianSpec::power_log(2.0, 1.0, 0.0).unwrap();
    let g = Grid::log_levels(&h, 32, 256, 2).unwrap();
    assert_eq!(g.len(), 256);
    let last = g.cells().last().unwrap();
    assert!((last.hi.gap - 2f64.powi(-32)).abs() < 1e-25);
    assert!(g.cells().windows(2).all(|w| w[0].hi == w[1].lo));
    assert!(Grid::log_levels(&h, 32, 63, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn permutation_invariance(seed in 0u64..1000, rot in 0usize..8) {
        let a = lcg_matrix(8, 8, seed);
        let mut perm: Vec<usize> = (0..8).collect();
        perm.rotate_left(rot);
        perm.swap(0, 5);
        let p = a.permuted(&perm).unwrap();
        let s1 = singular_values(&a).unwrap().into_vec();
        let s2 = singular_values(&p).unwrap().into_vec();
        prop_assert!(close(&s1, &s2, 1e-12 * s1[0]));
    }

    #[test]
    fn transpose_invariance(seed in 0u64..1000, r in 2usize..9, c in 2usize..9) {
        let a = lcg_matrix(r, c, seed);
        let s1 = singular_values(&a).unwrap().into_vec();
        let s2 = singular_values(&a.transpose()).unwrap().into_vec();
        prop_assert!(close(&s1, &s2, 1e-12 * s1[0].max(1.0)));
    }

    #[test]
    fn rank_one_singular_values(u in prop::collection::vec(-5.0f64..5.0, 2..7), v in prop::collection::vec(-5.0f64..5.0, 2..7)) {
        let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let sv = singular_values(&DenseMatrix::from_rows(&rows).unwrap()).unwrap().into_vec();
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((sv[0] - nu * nv).abs() <= 1e-12 * (nu * nv).max(1.0));
        prop_assert!(sv[1..].iter().all(|&s| s <= 1e-12 * (nu * nv).max(1.0)));
    }

    #[test]
    fn block_doubling(seed in 0u64..1000, r in 1usize..6, c in 1usize..6) {
        let a = lcg_matrix(r, c, seed);
        let n = r + c;
        let mut big = DenseMatrix::zeros(n, n);
        for i in 0..r {
            for j in 0..c {
                big.set(c + i, j, a.get(i, j));
                big.set(j, c + i, a.get(i, j));
            }
        }
        let sa = singular_values(&a).unwrap().into_vec();
        let sb = singular_values(&big).unwrap().into_vec();
        for (k, s) in sa.iter().enumerate() {
            prop_assert!((sb[2 * k] - s).abs() < 1e-12 && (sb[2 * k + 1] - s).abs() < 1e-12);
        }
    }
}
