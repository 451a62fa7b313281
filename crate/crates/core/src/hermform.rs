//! Hermitian forms over `Λ = Z[B(k)]`.
//!
//! Conventions, fixed once for the whole crate: a form on `Λ^n` is a square
//! matrix `A` with `s(e_i, e_j) = A_ij`. Vectors are rows over `Λ` and
//! `s(x, y) = x · A · involute(y)^T`, so `s(λx, y) = λ s(x, y)` and
//! hermitian means `A_ji = involute(A_ij)`. A module map is `x ↦ x · M`; it
//! is an isometry from `f` to `g` exactly when `M · A_g · M* = A_f`, which
//! in terms of `U = M^T` reads `U^T · A_g · involute(U) = A_f`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bsgroup::GroupParam;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElt;
use crate::intlinalg;
use crate::matrix::{IntMatrix, RingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormParity {
    Odd,
    Even,
}

/// Where a form's codimension-two Arf invariant comes from.
///
/// There is no general algorithm for it here, so it travels with the form:
/// forms extended from `Z` have Arf `0`; anything else must be asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArfProvenance {
    ExtendedFromZ,
    Asserted(u8),
}

impl ArfProvenance {
    pub fn value(self) -> u8 {
        match self {
            ArfProvenance::ExtendedFromZ => 0,
            ArfProvenance::Asserted(v) => v,
        }
    }
}

/// A hermitian matrix over `Z[B(k)]`, optionally carrying a verified
/// two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    k: GroupParam,
    matrix: RingMatrix,
    inverse: Option<RingMatrix>,
    arf: Option<ArfProvenance>,
}

pub fn check_hermitian(a: &RingMatrix) -> bool {
    a.is_square() && (0..a.rows()).all(|i| (i..a.cols()).all(|j| a[(j, i)] == a[(i, j)].involute()))
}

impl HermitianForm {
    pub fn new(matrix: RingMatrix, k: GroupParam) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("form matrix is {}x{}", matrix.rows(), matrix.cols())));
        }
        matrix.check_param(k)?;
        if !check_hermitian(&matrix) {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianForm { k, matrix, inverse: None, arf: None })
    }

    /// Attaches an inverse after checking `A · C = C · A = I`.
    pub fn with_certificate(mut self, c: RingMatrix) -> Result<Self> {
        if !verify_inverse(&self, &c)? {
            return Err(Error::Certificate("supplied inverse does not satisfy A·C = C·A = I".into()));
        }
        self.inverse = Some(c);
        Ok(self)
    }

    pub fn with_arf(mut self, arf: ArfProvenance) -> Result<Self> {
        if let ArfProvenance::Asserted(v) = arf {
            if v > 1 {
                return Err(Error::Schema(format!("Arf value must be 0 or 1, got {v}")));
            }
        }
        self.arf = Some(arf);
        Ok(self)
    }

    /// The extension `Z^n ⊗ Λ` of a unimodular symmetric integer form, with
    /// its integral inverse as certificate and Arf provenance "extended".
    pub fn extended_from_integers(m: &IntMatrix, k: GroupParam) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::NotHermitian);
        }
        let inv = intlinalg::unimodular_inverse(m)
            .ok_or_else(|| Error::Certificate("integer form is not unimodular".into()))?;
        HermitianForm::new(RingMatrix::from_integers(m, k), k)?
            .with_certificate(RingMatrix::from_integers(&inv, k))?
            .with_arf(ArfProvenance::ExtendedFromZ)
    }

    /// Diagonal form `⟨d1⟩ ⊥ … ⊥ ⟨dn⟩` over `Z`.
    pub fn diagonal(entries: &[i64], k: GroupParam) -> Result<Self> {
        let n = entries.len();
        let m = IntMatrix::from_fn(n, n, |i, j| if i == j { BigInt::from(entries[i]) } else { BigInt::zero() });
        if entries.iter().all(|e| e.abs() == 1) {
            Self::extended_from_integers(&m, k)
        } else {
            Self::new(RingMatrix::from_integers(&m, k), k)
        }
    }

    pub fn param(&self) -> GroupParam {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> Option<&RingMatrix> {
        self.inverse.as_ref()
    }

    pub fn arf(&self) -> Option<ArfProvenance> {
        self.arf
    }

    /// Drops the certificate, e.g. to exercise the verifier.
    pub fn without_certificate(mut self) -> Self {
        self.inverse = None;
        self
    }

    pub fn parity(&self) -> FormParity {
        parity(self)
    }

    pub fn augmented(&self) -> IntMatrix {
        augment_form(self)
    }

    /// Signature of the augmented integral form.
    pub fn signature(&self) -> i64 {
        intlinalg::signature(&self.augmented()).expect("augmentation of a hermitian form is symmetric")
    }

    /// `s(x, y) = x · A · involute(y)^T` for row vectors over `Λ`.
    pub fn evaluate(&self, x: &[GroupRingElt], y: &[GroupRingElt]) -> Result<GroupRingElt> {
        let n = self.rank();
        if x.len() != n || y.len() != n {
            return Err(Error::Dimension(format!("vectors must have length {n}")));
        }
        let row = RingMatrix::from_rows(vec![x.to_vec()], n)?;
        let col = RingMatrix::from_rows(y.iter().map(|v| vec![v.involute()]).collect(), 1)?;
        let v = row.mul(&self.matrix, self.k)?.mul(&col, self.k)?;
        Ok(v[(0, 0)].clone())
    }

    /// The congruent form `U^T · A · involute(U)`. If this form carries an
    /// inverse and `U` can be inverted by unit pivoting, the result carries
    /// the certificate `involute(U)^-1 · A^-1 · (U^T)^-1`.
    pub fn congruent(&self, u: &RingMatrix) -> Result<HermitianForm> {
        let k = self.k;
        let ut = u.transpose();
        let ubar = u.involute_entries();
        let a = ut.mul(&self.matrix, k)?.mul(&ubar, k)?;
        let mut out = HermitianForm::new(a, k)?;
        if let Some(ainv) = &self.inverse {
            if let (Some(ubar_inv), Some(ut_inv)) = (invert_by_units(&ubar, k), invert_by_units(&ut, k)) {
                let c = ubar_inv.mul(ainv, k)?.mul(&ut_inv, k)?;
                out = out.with_certificate(c)?;
            }
        }
        out.arf = self.arf;
        Ok(out)
    }
}

/// Odd iff some diagonal entry has odd identity coefficient.
///
/// For `x = Σ λ_i e_i`, the identity coefficient of `s(x, x)` is congruent
/// mod 2 to that of `Σ λ_i A_ii λ̄_i`: cross terms come in pairs `μ + μ̄`
/// and `id(μ̄) = id(μ)`. Each `λ A_ii λ̄` in turn has the parity of
/// `ε(λ)^2 · id(A_ii)`.
pub fn parity(f: &HermitianForm) -> FormParity {
    let odd = (0..f.rank()).any(|i| f.matrix[(i, i)].identity_coefficient().is_odd());
    if odd {
        FormParity::Odd
    } else {
        FormParity::Even
    }
}

pub fn augment_form(f: &HermitianForm) -> IntMatrix {
    f.matrix.augment()
}

/// `H(Λ^r)`: `r` blocks `[[0, 1], [1, 0]]`, self-inverse.
pub fn hyperbolic(r: usize, k: GroupParam) -> HermitianForm {
    let m =
        IntMatrix::from_fn(2 * r, 2 * r, |i, j| if i / 2 == j / 2 && i != j { BigInt::one() } else { BigInt::zero() });
    HermitianForm::extended_from_integers(&m, k).expect("hyperbolic form is unimodular")
}

/// Block-diagonal sum. Certificates and Arf data combine when both sides
/// carry them.
pub fn orthogonal_sum(f: &HermitianForm, g: &HermitianForm) -> Result<HermitianForm> {
    if f.k != g.k {
        return Err(Error::ParamMismatch { left: f.k.k(), right: g.k.k() });
    }
    let zero = GroupRingElt::zero(f.k);
    let matrix = f.matrix.block_diag(&g.matrix, &zero);
    let inverse = match (&f.inverse, &g.inverse) {
        (Some(a), Some(b)) => Some(a.block_diag(b, &zero)),
        _ => None,
    };
    let arf = match (f.arf, g.arf) {
        (Some(ArfProvenance::ExtendedFromZ), Some(ArfProvenance::ExtendedFromZ)) => Some(ArfProvenance::ExtendedFromZ),
        (Some(a), Some(b)) => Some(ArfProvenance::Asserted((a.value() + b.value()) % 2)),
        _ => None,
    };
    Ok(HermitianForm { k: f.k, matrix, inverse, arf })
}

/// `true` iff `A · C = C · A = I` exactly.
pub fn verify_inverse(f: &HermitianForm, c: &RingMatrix) -> Result<bool> {
    if c.rows() != f.rank() || c.cols() != f.rank() {
        return Ok(false);
    }
    c.check_param(f.k)?;
    Ok(f.matrix.mul(c, f.k)?.is_identity() && c.mul(&f.matrix, f.k)?.is_identity())
}

/// Outcome of the best-effort inverter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    Inverse(RingMatrix),
    Unknown(String),
}

/// Tries to invert the form matrix by Gauss-Jordan elimination using only
/// trivial units `±g` as pivots. Never returns an unverified inverse.
pub fn try_invert(f: &HermitianForm) -> Inversion {
    if let Some(c) = &f.inverse {
        return Inversion::Inverse(c.clone());
    }
    let det = match intlinalg::determinant(&f.augmented()) {
        Ok(d) => d,
        Err(e) => return Inversion::Unknown(e.to_string()),
    };
    if !det.abs().is_one() {
        return Inversion::Unknown(format!("augmented determinant is {det}, not ±1"));
    }
    if f.matrix.entries().all(|e| e.terms().all(|(g, _)| g.is_identity())) {
        // Integer matrix with determinant ±1: its integral inverse works over Λ.
        if let Some(inv) = intlinalg::unimodular_inverse(&f.augmented()) {
            let c = RingMatrix::from_integers(&inv, f.k);
            if let Ok(true) = verify_inverse(f, &c) {
                return Inversion::Inverse(c);
            }
        }
    }
    match invert_by_units(&f.matrix, f.k) {
        Some(c) => match verify_inverse(f, &c) {
            Ok(true) => Inversion::Inverse(c),
            _ => Inversion::Unknown("elimination result failed verification".into()),
        },
        None => Inversion::Unknown("no trivial-unit pivot available".into()),
    }
}

/// Gauss-Jordan over `Λ` with full pivoting on trivial units. Returns a
/// two-sided inverse or `None`.
pub(crate) fn invert_by_units(m: &RingMatrix, k: GroupParam) -> Option<RingMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = RingMatrix::identity_over(n, k);
    // col_perm[c] = original column now sitting at position c
    let mut col_perm: Vec<usize> = (0..n).collect();
    for c in 0..n {
        // Diagonal first, so triangular matrices never leave the diagonal.
        let (pr, pc, unit_inv) = std::iter::once((c, c))
            .chain((c..n).flat_map(|r| (c..n).map(move |cc| (r, cc))))
            .find_map(|(r, cc)| a[(r, cc)].trivial_unit_inverse().map(|u| (r, cc, u)))?;
        a.swap_rows(c, pr);
        inv.swap_rows(c, pr);
        a.swap_cols(c, pc);
        col_perm.swap(c, pc);
        // row_c ← u^-1 · row_c
        for j in 0..n {
            a[(c, j)] = unit_inv.mul(&a[(c, j)]).ok()?;
            inv[(c, j)] = unit_inv.mul(&inv[(c, j)]).ok()?;
        }
        for i in (0..n).filter(|&i| i != c) {
            let f = a[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let da = f.mul(&a[(c, j)]).ok()?;
                let di = f.mul(&inv[(c, j)]).ok()?;
                a[(i, j)] = a[(i, j)].sub(&da).ok()?;
                inv[(i, j)] = inv[(i, j)].sub(&di).ok()?;
            }
        }
    }
    // E · M · P = I, so M^-1 = P · E: row c of E becomes row col_perm[c].
    let mut out = RingMatrix::zeros_over(n, n, k);
    for c in 0..n {
        for j in 0..n {
            out[(col_perm[c], j)] = inv[(c, j)].clone();
        }
    }
    let id = RingMatrix::identity_over(n, k);
    (m.mul(&out, k).ok()? == id && out.mul(m, k).ok()? == id).then_some(out)
}

/// Checks `U^T · A_g · involute(U) = A_f`, and that `x ↦ x · U^T` is
/// invertible.
///
/// Returns `Ok(false)` when the identity fails. When it holds, the inverse
/// of `U^T` is forced to be `A_g · involute(U) · A_f^-1`; that candidate is
/// checked on both sides and a failure is a certificate error.
pub fn verify_isometry(f: &HermitianForm, g: &HermitianForm, u: &RingMatrix) -> Result<bool> {
    if f.k != g.k {
        return Err(Error::ParamMismatch { left: f.k.k(), right: g.k.k() });
    }
    if f.rank() != g.rank() || u.rows() != f.rank() || u.cols() != f.rank() {
        return Ok(false);
    }
    u.check_param(f.k)?;
    let k = f.k;
    let ut = u.transpose();
    let ubar = u.involute_entries();
    if ut.mul(&g.matrix, k)?.mul(&ubar, k)? != f.matrix {
        return Ok(false);
    }
    isometry_inverse_transpose(f, g, u).map(|_| true)
}

/// For a verified isometry `U` from `f` to `g`, returns `V` with
/// `V^T · A_f · involute(V) = A_g`, i.e. the inverse isometry.
pub fn invert_isometry(f: &HermitianForm, g: &HermitianForm, u: &RingMatrix) -> Result<RingMatrix> {
    if !verify_isometry(f, g, u)? {
        return Err(Error::Certificate("U is not an isometry".into()));
    }
    Ok(isometry_inverse_transpose(f, g, u)?.transpose())
}

fn isometry_inverse_transpose(f: &HermitianForm, g: &HermitianForm, u: &RingMatrix) -> Result<RingMatrix> {
    let k = f.k;
    let finv = match try_invert(f) {
        Inversion::Inverse(c) => c,
        Inversion::Unknown(why) => {
            return Err(Error::Certificate(format!("cannot certify invertibility of U without an inverse of f: {why}")))
        }
    };
    let ut = u.transpose();
    let r = g.matrix.mul(&u.involute_entries(), k)?.mul(&finv, k)?;
    if !ut.mul(&r, k)?.is_identity() || !r.mul(&ut, k)?.is_identity() {
        return Err(Error::Certificate("U is not invertible over the group ring".into()));
    }
    Ok(r)
}
