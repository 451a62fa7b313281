//! Closed-form invariants of `B(k)` and the classification and realization
//! rules for closed oriented 4-manifolds with fundamental group `B(k)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bsgroup::GroupParam;
use crate::error::{Error, Result};
use crate::foxchain::{build_complex, tensor_trivial, Modulus};
use crate::hermform::{try_invert, verify_isometry, FormParity, HermitianForm, Inversion};
use crate::intlinalg::{homology_of_complex, AbelianGroup};
use crate::matrix::RingMatrix;

/// `H_n(B(k); Z)` for `n = 0..=3`.
///
/// `Z/(k-1)` is read as `Z` when `k = 1` and as `0` when `|k - 1| = 1`.
fn integral_homology(k: GroupParam, degree: usize) -> AbelianGroup {
    let kv = k.k();
    match degree {
        0 => AbelianGroup::free(1),
        1 => AbelianGroup::free(1).direct_sum(&AbelianGroup::cyclic(&BigInt::from(kv - 1))),
        2 if kv == 1 => AbelianGroup::free(1),
        _ => AbelianGroup::trivial(),
    }
}

/// `G ⊗ Z/2` and `Tor(G, Z/2)` dimensions.
fn tensor_two_dim(g: &AbelianGroup) -> usize {
    g.free_rank() + g.torsion().iter().filter(|d| d.is_even()).count()
}

fn tor_two_dim(g: &AbelianGroup) -> usize {
    g.torsion().iter().filter(|d| d.is_even()).count()
}

/// Homology of `B(k)` from the closed formulas (degrees `0..=3`), with
/// `Z/2` coefficients obtained by universal coefficients.
pub fn homology_closed_form(k: GroupParam, modulus: Modulus, degree: usize) -> Result<AbelianGroup> {
    if degree > 3 {
        return Err(Error::Precondition(format!("degree {degree} outside 0..=3")));
    }
    Ok(match modulus {
        Modulus::Integers => integral_homology(k, degree),
        Modulus::Two => {
            let tensor = tensor_two_dim(&integral_homology(k, degree));
            let tor = if degree == 0 { 0 } else { tor_two_dim(&integral_homology(k, degree - 1)) };
            AbelianGroup::elementary_two(tensor + tor)
        }
    })
}

/// `H^2(B(k); Z/2)`: `Z/2` for odd `k`, `0` for even `k`.
pub fn cohomology_two_mod2(k: GroupParam) -> AbelianGroup {
    AbelianGroup::elementary_two(usize::from(k.is_odd()))
}

/// `[H0, H1, H2]` from the Fox chain complex.
pub fn homology_from_complex(k: GroupParam, modulus: Modulus) -> Result<[AbelianGroup; 3]> {
    let cx = build_complex(k)?;
    homology_of_complex(&tensor_trivial(&cx, modulus))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LGroupTable {
    pub l4: AbelianGroup,
    pub l5: AbelianGroup,
    pub l0_symmetric: AbelianGroup,
    pub whitehead: AbelianGroup,
}

/// Quadratic L-groups in degrees 4 and 5, the symmetric `L^0`, and the
/// Whitehead group of `B(k)`.
pub fn lgroup_table(k: GroupParam) -> LGroupTable {
    let z = AbelianGroup::free(1);
    let l4 = if k.is_odd() { z.direct_sum(&AbelianGroup::elementary_two(1)) } else { z.clone() };
    let l5 = z.direct_sum(&AbelianGroup::cyclic(&BigInt::from(k.k() - 1)));
    LGroupTable { l4, l5, l0_symmetric: z, whitehead: AbelianGroup::trivial() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum W2Type {
    I,
    II,
    III,
}

impl W2Type {
    pub fn as_str(self) -> &'static str {
        match self {
            W2Type::I => "I",
            W2Type::II => "II",
            W2Type::III => "III",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(W2Type::I),
            "II" => Ok(W2Type::II),
            "III" => Ok(W2Type::III),
            other => Err(Error::Schema(format!("w2 type must be I, II or III, got {other:?}"))),
        }
    }
}

impl fmt::Display for W2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Ω_4` of the normal 1-type for an even `w_2`-type: `8Z ⊕ H_2(π; Z/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableBordism {
    /// The signature lattice `8Z`.
    pub signature_multiple: u32,
    pub h2_mod2: AbelianGroup,
}

impl fmt::Display for StableBordism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h2_mod2.is_trivial() {
            write!(f, "{}Z", self.signature_multiple)
        } else {
            write!(f, "{}Z + {}", self.signature_multiple, self.h2_mod2)
        }
    }
}

pub fn stable_bordism_group(k: GroupParam, w2: W2Type) -> Result<StableBordism> {
    match w2 {
        W2Type::I => Err(Error::Precondition(
            "type I manifolds are classified stably by signature and KS; use stable_classify_type_i".into(),
        )),
        W2Type::III if !k.is_odd() => Err(Error::Inconsistent(format!("type III needs odd k, got k = {k}"))),
        _ => {
            let [_, _, h2] = homology_from_complex(k, Modulus::Two)?;
            Ok(StableBordism { signature_multiple: 8, h2_mod2: h2 })
        }
    }
}

/// Verdict on the Kirby-Siebenmann invariant forced by the other data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KsVerdict {
    Determined(u8),
    /// Independent of the other invariants (type I).
    Free,
    /// Type III with unknown Arf invariant: `KS = sign/8 + Arf`.
    FreeArfUnknown,
    Inconsistent(String),
}

fn sign_over_8_mod2(sign: i64) -> u8 {
    (sign / 8).rem_euclid(2) as u8
}

pub fn ks_constraint(w2: W2Type, sign: i64, arf: Option<u8>) -> KsVerdict {
    if w2 != W2Type::I && sign.rem_euclid(8) != 0 {
        return KsVerdict::Inconsistent(format!("type {w2} needs signature divisible by 8, got {sign}"));
    }
    match w2 {
        W2Type::I => KsVerdict::Free,
        W2Type::II => KsVerdict::Determined(sign_over_8_mod2(sign)),
        W2Type::III => match arf {
            Some(a) => KsVerdict::Determined((sign_over_8_mod2(sign) + a) % 2),
            None => KsVerdict::FreeArfUnknown,
        },
    }
}

/// The Kirby-Siebenmann entry of a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KsValue {
    Known(u8),
    /// Type III with unknown Arf invariant; `KS = sign/8 + Arf`.
    ArfDependent,
}

impl fmt::Display for KsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KsValue::Known(v) => write!(f, "{v}"),
            KsValue::ArfDependent => f.write_str("arf-dependent"),
        }
    }
}

/// The invariant tuple `(k, reduced form, w2-type, KS)` of a manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    form: HermitianForm,
    w2: W2Type,
    ks: KsValue,
}

impl ManifoldDescriptor {
    /// Validates the tuple. A missing inverse is searched for with
    /// [`try_invert`]; descriptors that contradict a forced relation are
    /// rejected with [`Error::Inconsistent`].
    pub fn new(form: HermitianForm, w2: W2Type, ks: KsValue) -> Result<Self> {
        let k = form.param();
        let form = match form.inverse() {
            Some(_) => form,
            None => match try_invert(&form) {
                Inversion::Inverse(c) => form.with_certificate(c)?,
                Inversion::Unknown(why) => {
                    return Err(Error::Certificate(format!(
                        "reduced form must be nonsingular with a certificate: {why}"
                    )))
                }
            },
        };
        let parity = form.parity();
        match (w2, parity) {
            (W2Type::I, FormParity::Even) => {
                return Err(Error::Inconsistent("type I requires an odd form".into()));
            }
            (W2Type::II | W2Type::III, FormParity::Odd) => {
                return Err(Error::Inconsistent(format!("type {w2} requires an even form")));
            }
            _ => {}
        }
        if w2 == W2Type::III && !k.is_odd() {
            return Err(Error::Inconsistent(format!("type III cannot occur for even k = {k}")));
        }
        if let KsValue::Known(v) = ks {
            if v > 1 {
                return Err(Error::Schema(format!("KS must be 0 or 1, got {v}")));
            }
        }
        let arf = form.arf().map(|a| a.value());
        let ks = match ks_constraint(w2, form.signature(), arf) {
            KsVerdict::Inconsistent(why) => return Err(Error::Inconsistent(why)),
            KsVerdict::Determined(v) => match ks {
                KsValue::Known(given) if given != v => {
                    return Err(Error::Inconsistent(format!("type {w2} forces KS = {v}, descriptor has {given}")))
                }
                _ => KsValue::Known(v),
            },
            KsVerdict::Free => match ks {
                KsValue::ArfDependent => return Err(Error::Schema("KS may only be arf-dependent for type III".into())),
                known => known,
            },
            KsVerdict::FreeArfUnknown => ks,
        };
        Ok(ManifoldDescriptor { form, w2, ks })
    }

    pub fn param(&self) -> GroupParam {
        self.form.param()
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn w2(&self) -> W2Type {
        self.w2
    }

    pub fn ks(&self) -> KsValue {
        self.ks
    }

    pub fn summary(&self) -> InvariantSummary {
        InvariantSummary {
            rank: self.form.rank(),
            parity: self.form.parity(),
            signature: self.form.signature(),
            w2: self.w2,
            ks: self.ks,
            arf: self.form.arf().map(|a| a.value()),
        }
    }
}

/// The necessary invariants compared by [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSummary {
    pub rank: usize,
    pub parity: FormParity,
    pub signature: i64,
    pub w2: W2Type,
    pub ks: KsValue,
    pub arf: Option<u8>,
}

/// Two type I manifolds are stably homeomorphic iff signature and KS
/// agree (`H_4(B(k); Z) = 0`, so the fundamental class adds nothing).
pub fn stable_classify_type_i(d1: &ManifoldDescriptor, d2: &ManifoldDescriptor) -> Result<bool> {
    if d1.param() != d2.param() {
        return Err(Error::ParamMismatch { left: d1.param().k(), right: d2.param().k() });
    }
    if d1.w2 != W2Type::I || d2.w2 != W2Type::I {
        return Err(Error::Precondition("stable_classify_type_i needs two type I descriptors".into()));
    }
    Ok(d1.form.signature() == d2.form.signature() && d1.ks == d2.ks)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Homeomorphic,
    NotHomeomorphic(Vec<String>),
    Unknown(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Homeomorphic => "homeomorphic",
            Verdict::NotHomeomorphic(_) => "not-homeomorphic",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn reasons(&self) -> Vec<String> {
        match self {
            Verdict::Homeomorphic => vec!["supplied isometry verified".into()],
            Verdict::NotHomeomorphic(r) => r.clone(),
            Verdict::Unknown(r) => vec![r.clone()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub invariants: [InvariantSummary; 2],
}

/// Compares the necessary invariants; if they agree, a supplied isometry
/// `U` (with `U^T · A_2 · involute(U) = A_1`) that verifies upgrades the
/// verdict to homeomorphic.
pub fn classify(
    d1: &ManifoldDescriptor,
    d2: &ManifoldDescriptor,
    isometry: Option<&RingMatrix>,
) -> Result<Classification> {
    if d1.param() != d2.param() {
        return Err(Error::ParamMismatch { left: d1.param().k(), right: d2.param().k() });
    }
    let (s1, s2) = (d1.summary(), d2.summary());
    let mut reasons = Vec::new();
    if s1.w2 != s2.w2 {
        reasons.push(format!("w2-type differs: {} vs {}", s1.w2, s2.w2));
    }
    if let (KsValue::Known(a), KsValue::Known(b)) = (s1.ks, s2.ks) {
        if a != b {
            reasons.push(format!("Kirby-Siebenmann invariant differs: {a} vs {b}"));
        }
    }
    if s1.rank != s2.rank {
        reasons.push(format!("rank differs: {} vs {}", s1.rank, s2.rank));
    }
    if s1.parity != s2.parity {
        reasons.push(format!("parity differs: {:?} vs {:?}", s1.parity, s2.parity));
    }
    if s1.signature != s2.signature {
        reasons.push(format!("signature differs: {} vs {}", s1.signature, s2.signature));
    }
    if s1.parity == FormParity::Even && s2.parity == FormParity::Even && d1.param().is_odd() {
        if let (Some(a), Some(b)) = (s1.arf, s2.arf) {
            if a != b {
                reasons.push(format!("Arf invariant differs: {a} vs {b}"));
            }
        }
    }
    let verdict = if !reasons.is_empty() {
        Verdict::NotHomeomorphic(reasons)
    } else {
        match isometry {
            None => Verdict::Unknown("invariants agree but no isometry certificate was supplied".into()),
            Some(u) => match verify_isometry(d1.form(), d2.form(), u) {
                Ok(true) => Verdict::Homeomorphic,
                Ok(false) => Verdict::Unknown("supplied isometry does not satisfy U^T·A2·involute(U) = A1".into()),
                Err(e) => Verdict::Unknown(format!("supplied isometry could not be certified: {e}")),
            },
        }
    };
    Ok(Classification { verdict, invariants: [s1, s2] })
}

/// All manifolds, up to homeomorphism, realizing a nonsingular form.
pub fn realize(form: &HermitianForm) -> Result<Vec<ManifoldDescriptor>> {
    let form = match form.inverse() {
        Some(_) => form.clone(),
        None => match try_invert(form) {
            Inversion::Inverse(c) => form.clone().with_certificate(c)?,
            Inversion::Unknown(why) => {
                return Err(Error::Certificate(format!("realization needs a verified inverse: {why}")))
            }
        },
    };
    let k = form.param();
    match form.parity() {
        FormParity::Odd => Ok(vec![
            ManifoldDescriptor::new(form.clone(), W2Type::I, KsValue::Known(0))?,
            ManifoldDescriptor::new(form, W2Type::I, KsValue::Known(1))?,
        ]),
        FormParity::Even => {
            let sign = form.signature();
            if sign.rem_euclid(8) != 0 {
                return Err(Error::Inconsistent(format!(
                    "even nonsingular form with signature {sign} not divisible by 8"
                )));
            }
            let rochlin = sign_over_8_mod2(sign);
            let mut out = vec![ManifoldDescriptor::new(form.clone(), W2Type::II, KsValue::Known(rochlin))?];
            if k.is_odd() {
                let ks = match form.arf() {
                    Some(a) => KsValue::Known((rochlin + a.value()) % 2),
                    None => KsValue::ArfDependent,
                };
                out.push(ManifoldDescriptor::new(form, W2Type::III, ks)?);
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyReport {
    pub k: i64,
    /// `H_0(π; Z) ⊕ H_2(π; Z/2)`.
    pub a4_domain: AbelianGroup,
    pub l4: AbelianGroup,
    pub a4_isomorphic: bool,
    /// `H_1(π; Z)`.
    pub a5_domain: AbelianGroup,
    pub l5: AbelianGroup,
    pub a5_isomorphic: bool,
    /// The domains recomputed from the chain complex agree.
    pub chain_complex_agrees: bool,
    pub whitehead_trivial: bool,
    pub waa_holds: bool,
}

/// Compares the assembly domains in degrees 4 and 5 with the L-groups.
pub fn assembly_status(k: GroupParam) -> Result<AssemblyReport> {
    let h0 = homology_closed_form(k, Modulus::Integers, 0)?;
    let h1 = homology_closed_form(k, Modulus::Integers, 1)?;
    let h2_mod2 = homology_closed_form(k, Modulus::Two, 2)?;
    let a4_domain = h0.direct_sum(&h2_mod2);
    let a5_domain = h1;
    let [c0, c1, _] = homology_from_complex(k, Modulus::Integers)?;
    let [_, _, c2_mod2] = homology_from_complex(k, Modulus::Two)?;
    let chain_complex_agrees = c0.direct_sum(&c2_mod2) == a4_domain && c1 == a5_domain;
    let table = lgroup_table(k);
    let a4_isomorphic = a4_domain == table.l4;
    let a5_isomorphic = a5_domain == table.l5;
    let whitehead_trivial = table.whitehead.is_trivial();
    Ok(AssemblyReport {
        k: k.k(),
        a4_domain,
        l4: table.l4,
        a4_isomorphic,
        a5_domain,
        l5: table.l5,
        a5_isomorphic,
        chain_complex_agrees,
        whitehead_trivial,
        waa_holds: whitehead_trivial && a4_isomorphic && a5_isomorphic,
    })
}

/// Symbolic description of `R(π) = H^2(π; Z[π])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalDescription {
    pub k: i64,
    pub trivial: bool,
    pub free_abelian: bool,
    /// The quotient it surjects onto, e.g. `Z[1/2]`.
    pub surjects_onto: Option<String>,
    pub text: String,
}

pub fn radical_description(k: GroupParam) -> RadicalDescription {
    if k.k() == 0 {
        return RadicalDescription {
            k: 0,
            trivial: true,
            free_abelian: true,
            surjects_onto: None,
            text: "0 (pi = Z, H^2(Z; Z[Z]) = 0)".into(),
        };
    }
    let target = if k.k().abs() == 1 { "Z".to_string() } else { format!("Z[1/{}]", k.k().abs()) };
    RadicalDescription {
        k: k.k(),
        trivial: false,
        free_abelian: true,
        surjects_onto: Some(target.clone()),
        text: format!("free abelian, surjects onto {target}"),
    }
}
