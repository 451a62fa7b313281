//! Fox free differential calculus and the cellular chain complex of the
//! universal cover of the presentation 2-complex of `B(k)`.
//!
//! Chains are row vectors and boundary maps act by right multiplication, so
//! the composite `C2 → C1 → C0` is the matrix product `d2 · d1`.

use num_bigint::BigInt;
use num_traits::One;

use crate::bsgroup::{BsElement, FreeWord, Generator, GroupParam};
use crate::error::{Error, Result};
use crate::groupring::{FreeRingElt, GroupRingElt};
use crate::matrix::{IntMatrix, RingMatrix};

/// The left Fox derivative `∂w/∂g` in `Z[F(a, b)]`.
///
/// Uses `∂(uv) = ∂u + u ∂v`, `∂_x x = 1` and `∂_x x^-1 = -x^-1`.
pub fn fox_derivative(w: &FreeWord, g: Generator) -> FreeRingElt {
    let mut out = FreeRingElt::zero();
    let letters = w.letters();
    for (i, &l) in letters.iter().enumerate() {
        if l.generator() != g {
            continue;
        }
        let prefix = FreeWord::from_letters(letters[..i].iter().copied());
        if l.is_inverse() {
            out.add_term(prefix.concat(&FreeWord::letter(l)), -BigInt::one());
        } else {
            out.add_term(prefix, BigInt::one());
        }
    }
    out
}

/// The free chain complex `C2 → C1 → C0` of a presentation, with boundary
/// matrices over `Z[B(k)]`.
///
/// For `k != 0` it comes from `<a, b | a b a^-1 b^-k>`: `d2` is the `1x2` row
/// of Fox derivatives and `d1` the `2x1` column `(1 - a, 1 - b)`. For
/// `k = 0` it is the circle complex `0 → Λ --(1-a)--> Λ`, i.e. `d2` is `0x1`
/// and `d1` is `[1 - a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoxComplex {
    k: GroupParam,
    d2: RingMatrix,
    d1: RingMatrix,
}

impl FoxComplex {
    pub fn param(&self) -> GroupParam {
        self.k
    }

    pub fn d2(&self) -> &RingMatrix {
        &self.d2
    }

    pub fn d1(&self) -> &RingMatrix {
        &self.d1
    }

    /// `d2 · d1`, which must vanish.
    pub fn composition(&self) -> Result<RingMatrix> {
        self.d2.mul(&self.d1, self.k)
    }

    pub fn is_circle(&self) -> bool {
        self.d2.rows() == 0
    }
}

/// The relator row `(∂_a r, ∂_b r)` in the free ring.
pub fn relator_derivatives(k: GroupParam) -> [FreeRingElt; 2] {
    let r = FreeWord::bs_relator(k);
    [fox_derivative(&r, Generator::A), fox_derivative(&r, Generator::B)]
}

pub fn build_complex(k: GroupParam) -> Result<FoxComplex> {
    let one = GroupRingElt::one(k);
    let one_minus = |g: BsElement| one.sub(&GroupRingElt::from_element(g, k));
    let cx = if k.k() == 0 {
        let d1 = RingMatrix::from_rows(vec![vec![one_minus(BsElement::gen_a())?]], 1)?;
        FoxComplex { k, d2: RingMatrix::zeros_over(0, 1, k), d1 }
    } else {
        let [da, db] = relator_derivatives(k);
        let d2 = RingMatrix::from_rows(vec![vec![da.project(k), db.project(k)]], 2)?;
        let d1 = RingMatrix::from_rows(
            vec![vec![one_minus(BsElement::gen_a())?], vec![one_minus(BsElement::gen_b(k))?]],
            1,
        )?;
        FoxComplex { k, d2, d1 }
    };
    let comp = cx.composition()?;
    if comp.entries().any(|e| !e.is_zero()) {
        return Err(Error::Internal(format!("d2 · d1 != 0 for k = {k}")));
    }
    Ok(cx)
}

/// Which coefficients to tensor with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulus {
    Integers,
    Two,
}

impl Modulus {
    pub fn reduce(self, v: &BigInt) -> BigInt {
        match self {
            Modulus::Integers => v.clone(),
            Modulus::Two => num_integer::Integer::mod_floor(v, &BigInt::from(2)),
        }
    }
}

/// The augmented integer complex `C ⊗_Λ Z` (or `⊗ Z/2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntComplex {
    pub d2: IntMatrix,
    pub d1: IntMatrix,
    pub modulus: Modulus,
}

pub fn tensor_trivial(cx: &FoxComplex, modulus: Modulus) -> IntComplex {
    let aug = |m: &RingMatrix| m.augment().map(|v| modulus.reduce(v));
    IntComplex { d2: aug(&cx.d2), d1: aug(&cx.d1), modulus }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: i64) -> GroupParam {
        GroupParam::new(v)
    }

    fn word(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn base_rules() {
        assert_eq!(fox_derivative(&word("a"), Generator::A), FreeRingElt::one());
        assert!(fox_derivative(&word("a"), Generator::B).is_zero());
        assert_eq!(fox_derivative(&word("A"), Generator::A), FreeRingElt::monomial(-BigInt::one(), word("A")));
    }

    #[test]
    fn relator_derivative_in_a() {
        let [da, _] = relator_derivatives(k(5));
        assert_eq!(da, FreeRingElt::one().sub(&FreeRingElt::from_word(word("abA"))));
    }

    #[test]
    fn k_one_complex_is_the_torus() {
        let cx = build_complex(k(1)).unwrap();
        let g = |s: &str| GroupRingElt::parse(s, k(1)).unwrap();
        assert_eq!(cx.d2()[(0, 0)], g("1 - b"));
        assert_eq!(cx.d2()[(0, 1)], g("a - 1"));
    }

    #[test]
    fn k_two_complex_matches_closed_formulas() {
        let cx = build_complex(k(2)).unwrap();
        let g = |s: &str| GroupRingElt::parse(s, k(2)).unwrap();
        assert_eq!(cx.d2()[(0, 0)], g("1 - a*b*A"));
        // a - a b a^-1 b^-2 (1 + b)
        assert_eq!(cx.d2()[(0, 1)], g("a - a*b*A*B^2 - a*b*A*B"));
    }

    #[test]
    fn augmented_boundaries() {
        for kv in (-12..=12).filter(|&v| v != 0) {
            let cx = build_complex(k(kv)).unwrap();
            let t = tensor_trivial(&cx, Modulus::Integers);
            assert_eq!(t.d2, IntMatrix::from_i64_rows(&[&[0, 1 - kv]]).unwrap());
            assert!(t.d1.is_zero());
        }
        let t = tensor_trivial(&build_complex(k(4)).unwrap(), Modulus::Integers);
        assert_eq!(t.d2, IntMatrix::from_i64_rows(&[&[0, -3]]).unwrap());
        let t = tensor_trivial(&build_complex(k(3)).unwrap(), Modulus::Two);
        assert!(t.d2.is_zero());
    }

    #[test]
    fn circle_complex_for_k_zero() {
        let cx = build_complex(k(0)).unwrap();
        assert!(cx.is_circle());
        assert_eq!(cx.d1()[(0, 0)], GroupRingElt::parse("1 - a", k(0)).unwrap());
    }
}
