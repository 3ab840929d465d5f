mod common;

use std::f64::consts::PI;

use drg_norton::families::FamilySpec;
use drg_norton::spectral::krein_reconstruction_residual;
use drg_norton::Tolerance;
use nalgebra::{DMatrix, SymmetricEigen};

use common::{analysis, corpus, max_abs, standard_sequence};

/// Distinct eigenvalues of the full adjacency matrix (descending) with
/// multiplicities and the projector onto each eigenspace.
fn dense_spectrum(a: &DMatrix<f64>) -> Vec<(f64, usize, DMatrix<f64>)> {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[q].total_cmp(&eig.eigenvalues[p]));
    let mut groups: Vec<(f64, usize, DMatrix<f64>)> = Vec::new();
    for idx in order {
        let lambda = eig.eigenvalues[idx];
        let v = eig.eigenvectors.column(idx);
        let outer = v * v.transpose();
        match groups.last_mut() {
            Some((mu, m, p)) if (*mu - lambda).abs() < 1e-6 => {
                *m += 1;
                *p += outer;
            }
            _ => groups.push((lambda, 1, outer)),
        }
    }
    groups
}

#[test]
fn eigenvalues_match_dense_eigensolver() {
    for spec in corpus() {
        let an = analysis(&spec);
        let dense = dense_spectrum(&an.adjacency);
        let theta = an.spectral.theta();
        assert_eq!(dense.len(), theta.len(), "{spec}");
        for (i, (lambda, m, projector)) in dense.iter().enumerate() {
            assert!((theta[i] - lambda).abs() < 1e-9, "{spec} θ_{i}: {} vs {lambda}", theta[i]);
            assert_eq!(an.spectral.integer_multiplicities()[i], *m as u64, "{spec} m_{i}");
            let diff = max_abs((an.spectral.idempotent(i) - projector).iter().copied());
            assert!(diff < 1e-9, "{spec} E_{i} differs from eigenvector projector by {diff}");
        }
    }
}

#[test]
fn cycle_spectra() {
    for n in [5usize, 6, 8, 10] {
        let an = analysis(&FamilySpec::Cycle { n });
        let d = n / 2;
        for (j, &t) in an.spectral.theta().iter().enumerate() {
            assert!((t - 2.0 * (2.0 * PI * j as f64 / n as f64).cos()).abs() < 1e-12, "C{n} θ_{j}");
        }
        let mult: Vec<u64> = (0..=d).map(|j| if j == 0 || 2 * j == n { 1 } else { 2 }).collect();
        assert_eq!(an.spectral.integer_multiplicities(), mult);
    }
}

#[test]
fn petersen_eigenvalues_and_multiplicities() {
    let an = analysis(&FamilySpec::Petersen);
    let theta = an.spectral.theta();
    for (t, want) in theta.iter().zip([3.0, 1.0, -2.0]) {
        assert!((t - want).abs() < 1e-12);
    }
    assert_eq!(an.spectral.integer_multiplicities(), vec![1, 5, 4]);
    for (m, want) in an.spectral.multiplicities().iter().zip([1.0, 5.0, 4.0]) {
        assert!((m - want).abs() < 1e-8);
    }
}

/// m(θ) = n / Σ_i k_i u_i(θ)², with the standard sequence u_i(θ).
#[test]
fn multiplicities_match_standard_sequence_formula() {
    for spec in corpus() {
        let an = analysis(&spec);
        let id = &an.intersection;
        let d = id.diameter();
        let (c, a, b) = (
            (0..=d).map(|i| id.c(i)).collect::<Vec<_>>(),
            (0..=d).map(|i| id.a(i)).collect::<Vec<_>>(),
            (0..=d).map(|i| id.b(i)).collect::<Vec<_>>(),
        );
        let n = an.graph.vertex_count() as f64;
        for (i, &t) in an.spectral.theta().iter().enumerate() {
            let u = standard_sequence(&c, &a, &b, t);
            let norm: f64 = (0..=d).map(|l| id.sphere_size(l) as f64 * u[l] * u[l]).sum();
            let m = n / norm;
            assert!((m - an.spectral.multiplicities()[i]).abs() < 1e-8, "{spec} m_{i}: {m}");
        }
    }
}

#[test]
fn theta0_and_trivial_idempotent() {
    for spec in corpus() {
        let an = analysis(&spec);
        let n = an.graph.vertex_count() as f64;
        assert_eq!(an.spectral.theta()[0], an.intersection.valency() as f64);
        let e0 = an.spectral.idempotent(0);
        assert!(max_abs(e0.iter().map(|v| v - 1.0 / n)) < 1e-12, "{spec}");
    }
}

#[test]
fn spectral_identities_hold() {
    for spec in corpus() {
        let an = analysis(&spec);
        let n = an.graph.vertex_count();
        let e = an.spectral.idempotents();
        let mut sum = DMatrix::<f64>::zeros(n, n);
        let mut recon = DMatrix::<f64>::zeros(n, n);
        for (i, ei) in e.iter().enumerate() {
            sum += ei;
            recon += ei * an.spectral.theta()[i];
            for (j, ej) in e.iter().enumerate() {
                let expected = if i == j { ei.clone() } else { DMatrix::zeros(n, n) };
                assert!(max_abs((ei * ej - expected).iter().copied()) < 1e-8, "{spec} E_{i}E_{j}");
            }
        }
        assert!(max_abs((sum - DMatrix::identity(n, n)).iter().copied()) < 1e-8);
        assert!(max_abs((recon - &an.adjacency).iter().copied()) < 1e-8);
        let total: u64 = an.spectral.integer_multiplicities().iter().sum();
        assert_eq!(total as usize, n);
        assert!(an.spectral.residuals(&an.adjacency).max() < 1e-8);
    }
}

/// Krein parameters through the distance-matrix basis: with
/// E_i = n⁻¹ Σ_l Q_{li} A_l, one gets
/// q^h_{ij} = (n m_h)⁻¹ Σ_l k_l Q_{li} Q_{lj} Q_{lh}.
#[test]
fn krein_parameters_match_distance_basis_route() {
    for spec in corpus() {
        let an = analysis(&spec);
        let n = an.graph.vertex_count();
        let d = an.intersection.diameter();
        let reps: Vec<usize> = (0..=d).map(|l| an.distances.sphere(0, l)[0]).collect();
        let q_matrix: Vec<Vec<f64>> = (0..=d)
            .map(|l| (0..=d).map(|i| n as f64 * an.spectral.idempotent(i)[(0, reps[l])]).collect())
            .collect();
        let m = an.spectral.integer_multiplicities();
        let scale = an.krein.max_entry();
        for h in 0..=d {
            for i in 0..=d {
                for j in 0..=d {
                    let sum: f64 = (0..=d)
                        .map(|l| an.intersection.sphere_size(l) as f64 * q_matrix[l][i] * q_matrix[l][j] * q_matrix[l][h])
                        .sum();
                    let oracle = sum / (n as f64 * m[h] as f64);
                    let got = an.krein.get(h, i, j);
                    assert!(
                        Tolerance::default().accepts(got - oracle, scale),
                        "{spec} q^{h}_{i}{j}: {got} vs {oracle}"
                    );
                }
            }
        }
    }
}

#[test]
fn krein_row_zero_is_diagonal_multiplicities() {
    for spec in corpus() {
        let an = analysis(&spec);
        let d = an.intersection.diameter();
        let m = an.spectral.multiplicities();
        for i in 0..=d {
            for j in 0..=d {
                let want = if i == j { m[i] } else { 0.0 };
                assert!((an.krein.get(0, i, j) - want).abs() < 1e-8, "{spec} q^0_{i}{j}");
            }
        }
    }
}

#[test]
fn krein_symmetry_and_nonnegativity() {
    for spec in corpus() {
        let an = analysis(&spec);
        assert_eq!(an.krein.symmetry_defect(), 0.0, "{spec}");
        assert!(an.krein.min_entry() >= -1e-8, "{spec}");
    }
}

#[test]
fn hypercube_q111_vanishes() {
    let an = analysis(&FamilySpec::Hamming { d: 3, q: 2 });
    // θ = 3, 1, −1, −3; E_1 belongs to θ = 1
    assert!(an.krein.get(1, 1, 1).abs() < 1e-10);
}

#[test]
fn petersen_krein_reconstruction() {
    let an = analysis(&FamilySpec::Petersen);
    assert!(krein_reconstruction_residual(an.spectral.idempotents(), &an.krein) < 1e-10);
}
