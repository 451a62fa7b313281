//! JSON document types. Integers that may exceed 64 bits travel as decimal
//! strings; group-ring entries may also be given in the human syntax
//! (`"1 - a + 2*b*A"`) on input.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bsgroup::{BsElement, GroupParam};
use crate::error::{Error, Result};
use crate::groupring::GroupRingElt;
use crate::hermform::{ArfProvenance, HermitianForm};
use crate::invariants::{KsValue, ManifoldDescriptor, W2Type};
use crate::matrix::{IntMatrix, RingMatrix};

fn parse_bigint(s: &str, what: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Schema(format!("{what}: {s:?} is not a decimal integer")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub num: String,
    pub pow: u32,
    pub t: String,
}

impl ElementJson {
    pub fn from_element(g: &BsElement) -> Self {
        ElementJson { num: g.num().to_string(), pow: g.pow(), t: g.t().to_string() }
    }

    pub fn to_element(&self, k: GroupParam) -> Result<BsElement> {
        let num = parse_bigint(&self.num, "element num")?;
        let t = self
            .t
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Schema(format!("element t: {:?} is not a 64-bit decimal integer", self.t)))?;
        BsElement::from_parts(num, self.pow, t, k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub elt: ElementJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingEltJson {
    pub k: i64,
    pub terms: Vec<TermJson>,
}

impl RingEltJson {
    pub fn from_elt(x: &GroupRingElt) -> Self {
        RingEltJson {
            k: x.param().k(),
            terms: x
                .terms()
                .map(|(g, c)| TermJson { coeff: c.to_string(), elt: ElementJson::from_element(g) })
                .collect(),
        }
    }

    /// Strict reading: no zero coefficients and no repeated elements.
    pub fn to_elt(&self) -> Result<GroupRingElt> {
        let k = GroupParam::new(self.k);
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let c = parse_bigint(&term.coeff, "coefficient")?;
            if c.is_zero() {
                return Err(Error::Schema("zero coefficients are not stored".into()));
            }
            let g = term.elt.to_element(k)?;
            if !seen.insert(g.clone()) {
                return Err(Error::Schema(format!("element {} listed twice", g.to_human(k))));
            }
            terms.push((g, c));
        }
        Ok(GroupRingElt::from_terms(terms, k))
    }
}

/// A matrix entry: either the structured form or a human-syntax string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Structured(RingEltJson),
    Human(String),
}

impl EntryJson {
    pub fn to_elt(&self, k: GroupParam) -> Result<GroupRingElt> {
        let x = match self {
            EntryJson::Structured(s) => s.to_elt()?,
            EntryJson::Human(s) => GroupRingElt::parse(s, k)?,
        };
        if x.param() != k {
            return Err(Error::ParamMismatch { left: k.k(), right: x.param().k() });
        }
        Ok(x)
    }
}

pub type RingMatrixRows = Vec<Vec<EntryJson>>;

pub fn ring_matrix_to_rows(m: &RingMatrix) -> RingMatrixRows {
    m.to_rows().iter().map(|r| r.iter().map(|x| EntryJson::Structured(RingEltJson::from_elt(x))).collect()).collect()
}

/// Reads a square matrix.
pub fn ring_matrix_from_rows(rows: &RingMatrixRows, k: GroupParam) -> Result<RingMatrix> {
    let parsed =
        rows.iter().map(|r| r.iter().map(|e| e.to_elt(k)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    RingMatrix::square(parsed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArfMode {
    #[serde(rename = "extended-from-Z")]
    ExtendedFromZ,
    #[serde(rename = "asserted")]
    Asserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArfJson {
    pub mode: ArfMode,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub k: i64,
    pub matrix: RingMatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<RingMatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arf: Option<ArfJson>,
}

impl FormJson {
    pub fn from_form(f: &HermitianForm) -> Self {
        FormJson {
            k: f.param().k(),
            matrix: ring_matrix_to_rows(f.matrix()),
            inverse: f.inverse().map(ring_matrix_to_rows),
            arf: f.arf().map(|a| match a {
                ArfProvenance::ExtendedFromZ => ArfJson { mode: ArfMode::ExtendedFromZ, value: 0 },
                ArfProvenance::Asserted(v) => ArfJson { mode: ArfMode::Asserted, value: v },
            }),
        }
    }

    /// Validates hermitian symmetry, the inverse (if given) and the Arf
    /// provenance.
    pub fn to_form(&self) -> Result<HermitianForm> {
        let k = GroupParam::new(self.k);
        let matrix = ring_matrix_from_rows(&self.matrix, k)?;
        let mut form = HermitianForm::new(matrix, k)?;
        // Augmentation is a ring map, so an invertible form has augmented
        // determinant ±1.
        let det = crate::intlinalg::determinant(&form.augmented())?;
        if !det.magnitude().is_one() {
            return Err(Error::Certificate(format!("form is singular: augmented determinant is {det}")));
        }
        if let Some(inv) = &self.inverse {
            let c = ring_matrix_from_rows(inv, k)?;
            if c.rows() != form.rank() {
                return Err(Error::Dimension(format!(
                    "inverse is {}x{}, form has rank {}",
                    c.rows(),
                    c.cols(),
                    form.rank()
                )));
            }
            form = form.with_certificate(c)?;
        }
        if let Some(arf) = self.arf {
            let prov = match arf.mode {
                ArfMode::ExtendedFromZ => {
                    if arf.value != 0 {
                        return Err(Error::Schema("a form extended from Z has Arf value 0".into()));
                    }
                    let integral = form.matrix().entries().all(|e| e.terms().all(|(g, _)| g.is_identity()));
                    if !integral {
                        return Err(Error::Schema("arf mode extended-from-Z needs an integer matrix".into()));
                    }
                    ArfProvenance::ExtendedFromZ
                }
                ArfMode::Asserted => ArfProvenance::Asserted(arf.value),
            };
            form = form.with_arf(prov)?;
        }
        Ok(form)
    }
}

/// `0`, `1`, or `"arf-dependent"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KsJson {
    Known(u8),
    Symbolic(String),
}

impl From<KsValue> for KsJson {
    fn from(v: KsValue) -> Self {
        match v {
            KsValue::Known(b) => KsJson::Known(b),
            KsValue::ArfDependent => KsJson::Symbolic("arf-dependent".into()),
        }
    }
}

impl KsJson {
    pub fn to_value(&self) -> Result<KsValue> {
        match self {
            KsJson::Known(b @ (0 | 1)) => Ok(KsValue::Known(*b)),
            KsJson::Known(b) => Err(Error::Schema(format!("ks must be 0 or 1, got {b}"))),
            KsJson::Symbolic(s) if s == "arf-dependent" => Ok(KsValue::ArfDependent),
            KsJson::Symbolic(s) => Err(Error::Schema(format!("ks must be 0, 1 or \"arf-dependent\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorJson {
    pub k: i64,
    pub form: FormJson,
    pub w2: String,
    pub ks: KsJson,
}

impl DescriptorJson {
    pub fn from_descriptor(d: &ManifoldDescriptor) -> Self {
        DescriptorJson {
            k: d.param().k(),
            form: FormJson::from_form(d.form()),
            w2: d.w2().as_str().into(),
            ks: d.ks().into(),
        }
    }

    pub fn to_descriptor(&self) -> Result<ManifoldDescriptor> {
        if self.form.k != self.k {
            return Err(Error::ParamMismatch { left: self.k, right: self.form.k });
        }
        ManifoldDescriptor::new(self.form.to_form()?, W2Type::parse(&self.w2)?, self.ks.to_value()?)
    }
}

/// A square matrix over `Z[B(k)]`, e.g. an isometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingMatrixJson {
    pub k: i64,
    pub matrix: RingMatrixRows,
}

impl RingMatrixJson {
    pub fn from_matrix(m: &RingMatrix, k: GroupParam) -> Self {
        RingMatrixJson { k: k.k(), matrix: ring_matrix_to_rows(m) }
    }

    pub fn to_matrix(&self) -> Result<RingMatrix> {
        ring_matrix_from_rows(&self.matrix, GroupParam::new(self.k))
    }
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect()
}

pub fn int_matrix_from_json(rows: &[Vec<String>]) -> Result<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_bigint(s, "matrix entry")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(parsed, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermform::hyperbolic;
    use crate::intlinalg::e8_matrix;

    fn k(v: i64) -> GroupParam {
        GroupParam::new(v)
    }

    #[test]
    fn element_round_trip() {
        let g = BsElement::new(BigInt::from(-7), 2, -3, k(2));
        let j = ElementJson::from_element(&g);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"num":"-7","pow":2,"t":"-3"}"#);
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_element(k(2)).unwrap(), g);
    }

    #[test]
    fn non_reduced_element_rejected() {
        let j = ElementJson { num: "2".into(), pow: 1, t: "0".into() };
        assert!(matches!(j.to_element(k(2)), Err(Error::Schema(_))));
        let j = ElementJson { num: "1".into(), pow: 0, t: "99999999999999999999".into() };
        assert!(j.to_element(k(2)).is_err());
    }

    #[test]
    fn ring_elt_round_trip_and_strictness() {
        let x = GroupRingElt::parse("1 - a + 2*b*A", k(3)).unwrap();
        let j = RingEltJson::from_elt(&x);
        let back: RingEltJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_elt().unwrap(), x);
        let mut dup = j.clone();
        dup.terms.push(dup.terms[0].clone());
        assert!(dup.to_elt().is_err());
        let mut zero = j;
        zero.terms[0].coeff = "0".into();
        assert!(zero.to_elt().is_err());
    }

    #[test]
    fn human_entries_accepted() {
        let text = r#"{"k": 2, "matrix": [["0", "1"], ["1", "0"]]}"#;
        let f: FormJson = serde_json::from_str(text).unwrap();
        assert_eq!(f.to_form().unwrap().matrix(), hyperbolic(1, k(2)).matrix());
    }

    #[test]
    fn form_round_trip() {
        let f = HermitianForm::extended_from_integers(&e8_matrix(), k(3)).unwrap();
        let j = FormJson::from_form(&f);
        let back: FormJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_form().unwrap(), f);
    }

    #[test]
    fn bad_forms_rejected() {
        let not_herm: FormJson = serde_json::from_str(r#"{"k": 2, "matrix": [["0", "a"], ["a", "0"]]}"#).unwrap();
        assert!(matches!(not_herm.to_form(), Err(Error::NotHermitian)));
        let wrong_inv: FormJson = serde_json::from_str(r#"{"k": 2, "matrix": [["1"]], "inverse": [["-1"]]}"#).unwrap();
        assert!(matches!(wrong_inv.to_form(), Err(Error::Certificate(_))));
        let lying: FormJson = serde_json::from_str(
            r#"{"k": 2, "matrix": [["0", "a"], ["A", "0"]], "arf": {"mode": "extended-from-Z", "value": 0}}"#,
        )
        .unwrap();
        assert!(lying.to_form().is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let f = HermitianForm::extended_from_integers(&e8_matrix(), k(3)).unwrap();
        let d = ManifoldDescriptor::new(f, W2Type::III, KsValue::Known(1)).unwrap();
        let j = DescriptorJson::from_descriptor(&d);
        let text = serde_json::to_string(&j).unwrap();
        let back: DescriptorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_descriptor().unwrap(), d);
        let sym: KsJson = serde_json::from_str(r#""arf-dependent""#).unwrap();
        assert_eq!(sym.to_value().unwrap(), KsValue::ArfDependent);
        assert!(KsJson::Known(2).to_value().is_err());
    }

    #[test]
    fn int_matrix_round_trip() {
        let m = IntMatrix::from_i64_rows(&[&[1, -2], &[3, 4]]).unwrap();
        assert_eq!(int_matrix_from_json(&int_matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn singular_forms_are_rejected() {
        let doc = FormJson { k: 3, matrix: vec![vec![EntryJson::Human("2".into())]], inverse: None, arf: None };
        assert!(matches!(doc.to_form(), Err(Error::Certificate(_))));
        let doc = FormJson { k: 3, matrix: vec![vec![EntryJson::Human("3 + b + B".into())]], inverse: None, arf: None };
        assert!(matches!(doc.to_form(), Err(Error::Certificate(_))));
    }
}
