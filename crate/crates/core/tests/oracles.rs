//! Operator primitives against nalgebra and brute-force oracles.

mod common;

use std::f64::consts::PI;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specfield::models::{almost_mathieu, kohmoto, Rational};
use specfield::operators::{DenseHermitian, Operator, PeriodicJacobi, SymTridiag};
use specfield::{CompactSet, Poly2};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tridiag_dense(t: &SymTridiag) -> DenseHermitian {
    let n = t.n();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = t.diag()[i];
        if i + 1 < n {
            m[i * n + i + 1] = t.off()[i];
            m[(i + 1) * n + i] = t.off()[i];
        }
    }
    DenseHermitian::from_real(n, &m).unwrap()
}

fn random_tridiag(r: &mut ChaCha8Rng, n: usize) -> SymTridiag {
    let diag = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
    let off = (0..n - 1).map(|_| r.gen_range(-1.5..1.5)).collect();
    SymTridiag::new(diag, off).unwrap()
}

#[test]
fn tridiagonal_eigenvalues_match_nalgebra() {
    let mut r = rng(1);
    for n in [1, 2, 3, 7, 20, 64] {
        for _ in 0..10 {
            let t = random_tridiag(&mut r, n);
            let ours = t.eigenvalues();
            let oracle = eig(&tridiag_dense(&t));
            for (a, b) in ours.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn sturm_count_matches_eigenvalue_count() {
    let mut r = rng(2);
    for _ in 0..50 {
        let t = random_tridiag(&mut r, 12);
        let oracle = eig(&tridiag_dense(&t));
        for _ in 0..20 {
            let x: f64 = r.gen_range(-6.0..6.0);
            // stay clear of eigenvalues, where the strict count is a rounding decision
            if point_set_dist(x, &oracle) < 1e-8 {
                continue;
            }
            assert_eq!(t.sturm_count(x), oracle.iter().filter(|&&e| e < x).count());
        }
    }
}

#[test]
fn dense_hermitian_eigenvalues_match_nalgebra() {
    let mut r = rng(3);
    for n in [1, 2, 5, 8, 16] {
        for _ in 0..20 {
            let a = random_hermitian(&mut r, n, 2.0);
            for (x, y) in a.eigenvalues().iter().zip(&eig(&a)) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn poly_norm_matches_matrix_polynomial() {
    let mut r = rng(4);
    for _ in 0..100 {
        let a = random_hermitian(&mut r, 6, 1.5);
        let p = Poly2::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let m = to_nalgebra(&a);
        let id = CMat::identity(6, 6);
        let c = |x: f64| Complex64::new(x, 0.0);
        let pm = &id * c(p.p0) + &m * c(p.p1) + &m * &m * c(p.p2);
        let ours = Operator::from(a).poly_norm(&p).unwrap();
        let oracle = spectral_norm(&pm);
        assert!((ours - oracle).abs() < 1e-9 * oracle.max(1.0), "{ours} vs {oracle}");
    }
}

#[test]
fn resolvent_norm_matches_smallest_singular_value() {
    let mut r = rng(5);
    for _ in 0..100 {
        let a = random_hermitian(&mut r, 6, 1.5);
        let z = Complex64::new(r.gen_range(-4.0..4.0), r.gen_range(0.01..1.0) * if r.gen() { 1.0 } else { -1.0 });
        let shifted = CMat::from_diagonal_element(6, 6, z) - to_nalgebra(&a);
        let oracle = 1.0 / smallest_singular(&shifted);
        let ours = Operator::from(a).resolvent_norm(z).unwrap();
        assert!((ours / oracle - 1.0).abs() < 1e-9, "{ours} vs {oracle}");
    }
}

#[test]
fn probe_ball_matches_eigenvalue_distance() {
    let mut r = rng(6);
    let mut seen = [0usize; 2];
    for _ in 0..300 {
        let a = random_hermitian(&mut r, 5, 1.0);
        let e = eig(&a);
        let x = r.gen_range(-4.0..4.0);
        let d = point_set_dist(x, &e);
        let rad = r.gen_range(0.01..2.0 * d.max(0.02));
        if (rad - d).abs() < 1e-9 {
            continue;
        }
        let reach = (e[0] - x).abs().max((e[e.len() - 1] - x).abs());
        let m = reach.max(rad) + r.gen_range(0.1..3.0);
        let ours = Operator::from(a).probe_ball(x, rad, m).unwrap();
        assert_eq!(ours, d >= rad, "x={x} r={rad} d={d}");
        seen[ours as usize] += 1;
    }
    assert!(seen[0] > 50 && seen[1] > 50, "{seen:?}");
}

#[test]
fn probe_ball_rejects_small_m() {
    let a = Operator::diagonal(&[-1.0, 2.0]).unwrap();
    assert!(a.probe_ball(0.0, 0.5, 1.5).is_err());
    assert!(a.probe_ball(0.0, 0.0, 5.0).is_err());
    assert!(a.probe_ball(0.0, 0.5, 2.5).is_ok());
}

/// The bands of a q-periodic operator, from its Bloch matrices at 64 phases.
fn bloch_sampled_bands(p: &PeriodicJacobi) -> CompactSet {
    let q = p.q();
    let mut lo = vec![f64::INFINITY; q];
    let mut hi = vec![f64::NEG_INFINITY; q];
    for j in 0..64 {
        let e = eig(&p.bloch_matrix(2.0 * PI * j as f64 / 64.0));
        for b in 0..q {
            lo[b] = lo[b].min(e[b]);
            hi[b] = hi[b].max(e[b]);
        }
    }
    CompactSet::normalized((0..q).map(|b| [lo[b], hi[b]]).collect()).unwrap().close_gaps(1e-10)
}

#[test]
fn band_edges_match_bloch_phase_sampling() {
    let mut r = rng(7);
    for _ in 0..200 {
        let v: Vec<f64> = (0..3).map(|_| r.gen_range(-3.0..3.0)).collect();
        let p = PeriodicJacobi::new(v).unwrap();
        // the phase grid contains 0 and π, where the band edges are attained
        let d = p.band_edges().unwrap().hausdorff(&bloch_sampled_bands(&p)).unwrap();
        assert!(d < 1e-9, "{:?}: {d}", p.potential());
    }
}

#[test]
fn band_edges_match_bloch_sampling_for_models() {
    for (p, q) in [(1, 3), (2, 5), (3, 7), (5, 12), (7, 16)] {
        let t = Rational::new(p, q).unwrap();
        for op in [almost_mathieu(1.0, 0.0, t).unwrap(), almost_mathieu(0.7, 0.1, t).unwrap(), kohmoto(1.5, 0.0, t).unwrap()] {
            let d = op.band_edges().unwrap().hausdorff(&bloch_sampled_bands(&op)).unwrap();
            assert!(d < 1e-9, "t = {t}: {d}");
        }
    }
}

#[test]
fn discriminant_is_two_at_band_edges() {
    let mut r = rng(8);
    for _ in 0..50 {
        let v: Vec<f64> = (0..4).map(|_| r.gen_range(-2.0..2.0)).collect();
        let p = PeriodicJacobi::new(v).unwrap();
        for iv in p.band_edges().unwrap().intervals() {
            for e in iv {
                assert!((p.discriminant(*e).abs() - 2.0).abs() < 1e-7, "{e}");
            }
        }
    }
}

#[test]
fn filtered_truncation_approaches_bands() {
    let p = almost_mathieu(1.0, 0.0, Rational::new(1, 3).unwrap()).unwrap();
    let bands = p.band_edges().unwrap();
    let mut last = f64::INFINITY;
    for cells in [20, 80, 320] {
        let s = Operator::filtered_truncation_spectrum(&p, cells, 0.05, 0.02).unwrap();
        let d = s.hausdorff(&bands).unwrap();
        assert!(d < last, "{cells}: {d}");
        last = d;
    }
    assert!(last < 0.05, "{last}");
}

#[test]
fn exact_hausdorff_matches_brute_force() {
    let mut r = rng(9);
    for _ in 0..100 {
        let a = random_dyadic_set(&mut r, 6, -4.0, 4.0, 8);
        let b = random_dyadic_set(&mut r, 6, -4.0, 4.0, 8);
        let exact = a.hausdorff(&b).unwrap();
        // every extremum of the distance function lies on the half-step grid
        let brute = brute_hausdorff(&a, &b, 2f64.powi(-9));
        assert!((exact - brute).abs() < 1e-12, "{exact} vs {brute}");
    }
}

#[test]
fn dense_matrix_from_nalgebra_roundtrip() {
    let m = DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0]);
    let a = DenseHermitian::from_real(2, m.as_slice()).unwrap();
    let e = eig(&a);
    assert!((e[0] + 5f64.sqrt()).abs() < 1e-12 && (e[1] - 5f64.sqrt()).abs() < 1e-12);
    assert_eq!(a.eigenvalues().len(), 2);
}
