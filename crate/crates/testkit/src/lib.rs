//! Slow, obviously-correct oracles used only by tests.
//!
//! Everything here is independent of the production crates: dense matrices,
//! cyclic Jacobi rotations, and the full (unreduced) two-particle product
//! space. Agreement between these and the fast solvers is evidence both are
//! right; shared code would prove nothing.

/// All eigenpairs of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending. Returns `(eigenvalues, eigenvectors)` with `eigenvectors[k]`
/// the unit vector for `eigenvalues[k]`.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|row| row.len() == n), "square matrix");
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (g, h) = (a[i][p], a[i][q]);
                    a[i][p] = c * g - s * h;
                    a[i][q] = s * g + c * h;
                }
                for i in 0..n {
                    let (g, h) = (a[p][i], a[q][i]);
                    a[p][i] = c * g - s * h;
                    a[q][i] = s * g + c * h;
                }
                for row in v.iter_mut() {
                    let (g, h) = (row[p], row[q]);
                    row[p] = c * g - s * h;
                    row[q] = s * g + c * h;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let eigenvalues = order.iter().map(|&k| a[k][k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| v.iter().map(|row| row[k]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

/// Dense two-particle Hamiltonian on the full product space of `m` interior
/// points (no symmetry reduction): state index `p = i*m + j` means particle
/// one at `i`, particle two at `j`. 3-point kinetic stencil, Dirichlet
/// walls, soft interaction `s / (|x_i - x_j| + 1)`.
pub fn dense_pair_hamiltonian(
    v_interior: &[f64],
    dx: f64,
    interaction_strength: f64,
) -> Vec<Vec<f64>> {
    let m = v_interior.len();
    let dim = m * m;
    let inv_dx2 = 1.0 / (dx * dx);
    let mut h = vec![vec![0.0; dim]; dim];
    for i in 0..m {
        for j in 0..m {
            let p = i * m + j;
            let sep = (i as f64 - j as f64).abs() * dx;
            h[p][p] =
                2.0 * inv_dx2 + v_interior[i] + v_interior[j] + interaction_strength / (sep + 1.0);
            if i > 0 {
                h[p][p - m] = -0.5 * inv_dx2;
            }
            if i + 1 < m {
                h[p][p + m] = -0.5 * inv_dx2;
            }
            if j > 0 {
                h[p][p - 1] = -0.5 * inv_dx2;
            }
            if j + 1 < m {
                h[p][p + 1] = -0.5 * inv_dx2;
            }
        }
    }
    h
}

/// Ground energy of the antisymmetric sector, found the brute-force way:
/// diagonalize the full product space, then walk the spectrum upward until
/// an eigenvector survives antisymmetrization. Returns the Rayleigh
/// quotient of the antisymmetrized vector (exact for an exact eigenvector).
pub fn antisymmetric_ground_energy(v_interior: &[f64], dx: f64, interaction_strength: f64) -> f64 {
    let m = v_interior.len();
    let h = dense_pair_hamiltonian(v_interior, dx, interaction_strength);
    let (_, vectors) = jacobi_eigen(h.clone());
    for vec in &vectors {
        let mut anti = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                anti[i * m + j] = 0.5 * (vec[i * m + j] - vec[j * m + i]);
            }
        }
        let norm = anti.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-5 {
            for x in anti.iter_mut() {
                *x /= norm;
            }
            let mut hy = vec![0.0; m * m];
            for (r, row) in h.iter().enumerate() {
                hy[r] = row.iter().zip(&anti).map(|(a, b)| a * b).sum();
            }
            return anti.iter().zip(&hy).map(|(a, b)| a * b).sum();
        }
    }
    panic!("no antisymmetric eigenvector in the spectrum");
}
