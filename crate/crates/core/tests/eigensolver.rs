use num_complex::Complex64;
use paramag_loss::linalg::{diagonalize, ComplexMatrix, HermitianMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Vec<Complex64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        sum += m[0][col] * det(&minor) * sign;
    }
    sum
}

fn char_poly(h: &ComplexMatrix, lambda: f64) -> f64 {
    let n = h.dim();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        h[(i, j)] - lambda
                    } else {
                        h[(i, j)]
                    }
                })
                .collect()
        })
        .collect();
    det(&rows).re
}

/// Roots of det(H - λI) by scanning for sign changes and bisecting.
fn char_poly_roots(h: &ComplexMatrix) -> Vec<f64> {
    let r = h.frobenius_norm() + 1.0;
    let steps = 20_000;
    let mut roots = Vec::new();
    let mut prev_x = -r;
    let mut prev_f = char_poly(h, prev_x);
    for k in 1..=steps {
        let x = -r + 2.0 * r * k as f64 / steps as f64;
        let f = char_poly(h, x);
        if f == 0.0 {
            roots.push(x);
        } else if prev_f.signum() != f.signum() && prev_f != 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev_f);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = char_poly(h, mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    roots
}

#[test]
fn random_4x4_matches_characteristic_polynomial() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed_4444);
    for _ in 0..5 {
        let m = random_hermitian(&mut rng, 4);
        let roots = char_poly_roots(&m);
        assert_eq!(roots.len(), 4, "oracle should bracket four simple roots");
        let eig = diagonalize(&HermitianMatrix::new(m).unwrap()).unwrap();
        for (a, b) in eig.eigenvalues.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

fn residuals(m: &ComplexMatrix) -> (f64, f64) {
    let eig = diagonalize(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
    let v = eig.vectors_matrix();
    let n = m.dim();
    let ortho = (&(&v.adjoint() * &v) - &ComplexMatrix::identity(n)).max_abs();
    let hv = m * &v;
    let mut res: f64 = 0.0;
    for k in 0..n {
        for i in 0..n {
            res = res.max((hv[(i, k)] - v[(i, k)] * eig.eigenvalues[k]).norm());
        }
    }
    (ortho, res / m.max_abs().max(f64::MIN_POSITIVE))
}

#[test]
fn largest_supported_dimension_is_accurate() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(32);
    let m = random_hermitian(&mut rng, 32);
    let (ortho, res) = residuals(&m);
    assert!(ortho < 1e-10, "orthonormality {ortho}");
    assert!(res < 1e-10, "residual {res}");
}

#[test]
fn degenerate_cluster_projector_is_recovered() {
    // diag(1, 1, 3) rotated by a fixed unitary: the projector onto the
    // λ = 1 eigenspace must be I - |u3⟩⟨u3|.
    let s = 1.0 / 2f64.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let u = ComplexMatrix::from_row_major(
        3,
        vec![
            Complex64::new(s, 0.0),
            i * s,
            Complex64::new(0.0, 0.0),
            i * s,
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    )
    .unwrap();
    let mut d = ComplexMatrix::zeros(3);
    d[(0, 0)] = Complex64::new(1.0, 0.0);
    d[(1, 1)] = Complex64::new(3.0, 0.0);
    d[(2, 2)] = Complex64::new(1.0, 0.0);
    let h = &(&u * &d) * &u.adjoint();
    let eig = diagonalize(&HermitianMatrix::new(h).unwrap()).unwrap();
    assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
    assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
    assert!((eig.eigenvalues[2] - 3.0).abs() < 1e-12);

    let proj = ComplexMatrix::from_fn(3, |r, c| {
        (0..2)
            .map(|k| eig.eigenvectors[k][r] * eig.eigenvectors[k][c].conj())
            .sum()
    });
    let expected = ComplexMatrix::from_fn(3, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - u[(r, 1)] * u[(c, 1)].conj()
    });
    assert!((&proj - &expected).max_abs() < 1e-12);
}

/// Unitary from Gram-Schmidt on a random complex matrix.
fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for c in &cols {
            let dot: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_preserved(seed in any::<u64>(), n in 1usize..=12) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, n);
        let eig = diagonalize(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        let tr = m.trace().re;
        prop_assert!((sum - tr).abs() <= 1e-10 * tr.abs().max(1.0));
    }

    #[test]
    fn residual_and_orthonormality_bounds(seed in any::<u64>(), n in 1usize..=16) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let (ortho, res) = residuals(&random_hermitian(&mut rng, n));
        prop_assert!(ortho < 1e-10);
        prop_assert!(res < 1e-10);
    }

    #[test]
    fn unitary_similarity_keeps_spectrum(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, n);
        let u = random_unitary(&mut rng, n);
        let rotated = &(&u.adjoint() * &m) * &u;
        // Round-off leaves rotated Hermitian only to ~1e-16; that is within tolerance.
        let a = diagonalize(&HermitianMatrix::new(m).unwrap()).unwrap();
        let b = diagonalize(&HermitianMatrix::new(rotated).unwrap()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn repeated_calls_are_bit_identical(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let h = HermitianMatrix::new(random_hermitian(&mut rng, n)).unwrap();
        let a = diagonalize(&h).unwrap();
        let b = diagonalize(&h).unwrap();
        prop_assert_eq!(a, b);
    }
}
