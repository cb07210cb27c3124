//! Spin operators, zero-field-splitting + Zeeman Hamiltonians, and
//! magnetic-dipole transition matrix elements.
//!
//! Operators are dimensionless (in units of ħ). The basis is ordered by
//! `m` descending, `|S⟩, |S-1⟩, …, |-S⟩`.

use num_complex::Complex64;

use crate::constants::{BOHR_MAGNETON, HBAR};
use crate::error::{Error, Result};
use crate::linalg::{diagonalize, ComplexMatrix, EigenDecomposition, HermitianMatrix};

/// Total spin, stored as `2S` so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinQuantum {
    two_s: u32,
}

impl SpinQuantum {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidParams(
                "spin must be at least 1/2 (two_s >= 1)".into(),
            ));
        }
        Ok(Self { two_s })
    }

    /// From `S` given as a float such as `1.5`.
    pub fn from_spin(s: f64) -> Result<Self> {
        let two_s = half_integer_twice(s).filter(|&t| t > 0).ok_or_else(|| {
            Error::InvalidParams(format!("S = {s} is not a positive half-integer"))
        })?;
        Self::new(two_s as u32)
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn spin(self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn multiplicity(self) -> usize {
        self.two_s as usize + 1
    }

    /// `S(S+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.spin();
        s * (s + 1.0)
    }

    /// `m` of basis index `k`.
    pub fn m_of(self, k: usize) -> f64 {
        self.spin() - k as f64
    }

    /// Basis index of the sublevel `m`.
    pub fn index_of(self, m: f64) -> Result<usize> {
        let two_m = half_integer_twice(m)
            .ok_or_else(|| Error::InvalidParams(format!("m = {m} is not a half-integer")))?;
        let two_s = self.two_s as i64;
        if two_m.abs() > two_s || (two_s - two_m) % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "m = {m} is not a sublevel of S = {}",
                self.spin()
            )));
        }
        Ok(((two_s - two_m) / 2) as usize)
    }

    /// The pure basis vector `|S, m⟩`.
    pub fn basis_state(self, m: f64) -> Result<Vec<Complex64>> {
        let k = self.index_of(m)?;
        let mut v = vec![Complex64::new(0.0, 0.0); self.multiplicity()];
        v[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

fn half_integer_twice(x: f64) -> Option<i64> {
    let t = 2.0 * x;
    let r = t.round();
    ((t - r).abs() < 1e-9 && r.is_finite()).then_some(r as i64)
}

/// Cartesian spin operator matrices in units of ħ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub spin: SpinQuantum,
    pub sx: HermitianMatrix,
    pub sy: HermitianMatrix,
    pub sz: HermitianMatrix,
}

impl SpinOperators {
    pub fn components(&self) -> [&HermitianMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    pub fn dim(&self) -> usize {
        self.spin.multiplicity()
    }
}

/// Builds `Sx`, `Sy`, `Sz` from the ladder operators.
pub fn spin_operators(s: SpinQuantum) -> SpinOperators {
    let n = s.multiplicity();
    let casimir = s.casimir();
    // ⟨m+1| S+ |m⟩ = sqrt(S(S+1) - m(m+1)); index k-1 holds m+1.
    let mut s_plus = ComplexMatrix::zeros(n);
    for k in 1..n {
        let m = s.m_of(k);
        s_plus[(k - 1, k)] = Complex64::new((casimir - m * (m + 1.0)).sqrt(), 0.0);
    }
    let s_minus = s_plus.adjoint();

    let sx = (&s_plus + &s_minus).scale(0.5);
    let sy = (&s_plus - &s_minus).scale_complex(Complex64::new(0.0, -0.5));
    let sz = ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(s.m_of(i), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    // All three are Hermitian by construction.
    SpinOperators {
        spin: s,
        sx: HermitianMatrix::new(sx).expect("Sx is Hermitian"),
        sy: HermitianMatrix::new(sy).expect("Sy is Hermitian"),
        sz: HermitianMatrix::new(sz).expect("Sz is Hermitian"),
    }
}

/// Parameters of `H = D(Sz² - S(S+1)/3) + E(Sx² - Sy²) + g μB B·S / ħ`.
///
/// `d` and `e` are angular frequencies [rad/s]; `b_field` is in tesla.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHamiltonianParams {
    pub d: f64,
    pub e: f64,
    pub g_e: f64,
    pub b_field: [f64; 3],
}

impl SpinHamiltonianParams {
    /// Axial splitting only, zero field.
    pub fn axial(d: f64, g_e: f64) -> Self {
        Self {
            d,
            e: 0.0,
            g_e,
            b_field: [0.0; 3],
        }
    }

    pub fn with_field(mut self, b_field: [f64; 3]) -> Self {
        self.b_field = b_field;
        self
    }

    pub fn with_rhombic(mut self, e: f64) -> Self {
        self.e = e;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_e > 0.0 && self.g_e.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "g_e must be positive, got {}",
                self.g_e
            )));
        }
        if !self.d.is_finite() || !self.e.is_finite() || self.b_field.iter().any(|b| !b.is_finite())
        {
            return Err(Error::InvalidParams("D, E and B must be finite".into()));
        }
        if self.e.abs() > self.d.abs() / 3.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidParams(format!(
                "|E| = {:e} exceeds |D|/3 = {:e}",
                self.e.abs(),
                self.d.abs() / 3.0
            )));
        }
        Ok(())
    }
}

/// Spin Hamiltonian in angular-frequency units [rad/s].
pub fn build_hamiltonian(s: SpinQuantum, p: &SpinHamiltonianParams) -> Result<HermitianMatrix> {
    p.validate()?;
    let ops = spin_operators(s);
    let (sx, sy, sz) = (ops.sx.matrix(), ops.sy.matrix(), ops.sz.matrix());
    let n = s.multiplicity();

    let sz2 = sz * sz;
    let axial = &sz2 - &ComplexMatrix::identity(n).scale(s.casimir() / 3.0);
    let mut h = axial.scale(p.d);

    if p.e != 0.0 {
        let rhombic = &(sx * sx) - &(sy * sy);
        h = &h + &rhombic.scale(p.e);
    }

    let gyro = p.g_e * BOHR_MAGNETON / HBAR;
    for (op, b) in [sx, sy, sz].into_iter().zip(p.b_field) {
        if b != 0.0 {
            h = &h + &op.scale(gyro * b);
        }
    }
    HermitianMatrix::new(h)
}

/// A diagonalized spin system: Hamiltonian, operators and eigenstates.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    pub spin: SpinQuantum,
    pub params: SpinHamiltonianParams,
    pub operators: SpinOperators,
    pub hamiltonian: HermitianMatrix,
    pub eigen: EigenDecomposition,
}

impl SpinSystem {
    pub fn new(spin: SpinQuantum, params: SpinHamiltonianParams) -> Result<Self> {
        let hamiltonian = build_hamiltonian(spin, &params)?;
        let eigen = diagonalize(&hamiltonian)?;
        Ok(Self {
            spin,
            params,
            operators: spin_operators(spin),
            hamiltonian,
            eigen,
        })
    }

    /// Level energies in rad/s, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    /// `Ω_IF = E_f - E_i` [rad/s] between eigenstates `i` and `f`.
    pub fn transition_frequency(&self, i: usize, f: usize) -> f64 {
        self.eigen.eigenvalues[f] - self.eigen.eigenvalues[i]
    }

    /// Pure-spin moment between eigenstates `i` and `f`.
    pub fn transition_moment(&self, i: usize, f: usize) -> Result<TransitionMoment> {
        transition_moment(
            &self.eigen.eigenvectors[i],
            &self.eigen.eigenvectors[f],
            &self.operators,
            self.params.g_e,
            [Complex64::new(0.0, 0.0); 3],
        )
    }
}

/// Dimensionless magnetic-dipole matrix element `⟨F|(L + g S)/ħ|I⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMoment {
    pub m_vec: [Complex64; 3],
    /// `(|Mx|² + |My|² + |Mz|²)/3`, the orientation-averaged coupling.
    pub coupling_sq_unpol: f64,
}

impl TransitionMoment {
    pub fn new(m_vec: [Complex64; 3]) -> Self {
        let coupling_sq_unpol = m_vec.iter().map(|m| m.norm_sqr()).sum::<f64>() / 3.0;
        Self {
            m_vec,
            coupling_sq_unpol,
        }
    }

    /// `|ξ·M|²` for a given (possibly complex) field-direction vector.
    pub fn polarized_coupling_sq(&self, xi_b: [Complex64; 3]) -> f64 {
        xi_b.iter()
            .zip(&self.m_vec)
            .map(|(x, m)| x.conj() * m)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// `M_α = L_α + g_e ⟨ψ_F| S_α |ψ_I⟩` with `L` supplied by the caller.
pub fn transition_moment(
    psi_i: &[Complex64],
    psi_f: &[Complex64],
    ops: &SpinOperators,
    g_e: f64,
    orbital_moment: [Complex64; 3],
) -> Result<TransitionMoment> {
    let n = ops.dim();
    for psi in [psi_i, psi_f] {
        if psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: psi.len(),
            });
        }
    }
    let mut m_vec = orbital_moment;
    for (m, op) in m_vec.iter_mut().zip(ops.components()) {
        *m += op.matrix().expectation(psi_f, psi_i)? * g_e;
    }
    Ok(TransitionMoment::new(m_vec))
}

/// Orientation-averaged `|M|²` for unpolarized light.
pub fn unpolarized_coupling(t: &TransitionMoment) -> f64 {
    t.m_vec.iter().map(|m| m.norm_sqr()).sum::<f64>() / 3.0
}

/// Unpolarized coupling of the pure-spin transition `|m_i⟩ → |m_f⟩` with no
/// orbital contribution.
pub fn pure_spin_coupling(s: SpinQuantum, m_i: f64, m_f: f64, g_e: f64) -> Result<f64> {
    let ops = spin_operators(s);
    let t = transition_moment(
        &s.basis_state(m_i)?,
        &s.basis_state(m_f)?,
        &ops,
        g_e,
        [Complex64::new(0.0, 0.0); 3],
    )?;
    Ok(unpolarized_coupling(&t))
}
