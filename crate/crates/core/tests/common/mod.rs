//! Random generators and independent oracles shared by the integration
//! tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeMap;

use bsclass_core::bsgroup::{BsElement, FreeWord, GroupParam, Letter};
use bsclass_core::groupring::GroupRingElt;
use bsclass_core::hermform::{hyperbolic, orthogonal_sum, HermitianForm};
use bsclass_core::intlinalg::e8_matrix;
use bsclass_core::invariants::{KsValue, ManifoldDescriptor, W2Type};
use bsclass_core::matrix::{IntMatrix, RingMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn k(v: i64) -> GroupParam {
    GroupParam::new(v)
}

const LETTERS: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

/// A random (not necessarily reduced) letter sequence of length `<= max_len`.
pub fn random_letters(r: &mut impl Rng, max_len: usize) -> Vec<Letter> {
    let n = r.gen_range(0..=max_len);
    (0..n).map(|_| LETTERS[r.gen_range(0..4)]).collect()
}

pub fn random_word(r: &mut impl Rng, max_len: usize) -> FreeWord {
    FreeWord::from_letters(random_letters(r, max_len))
}

/// A random element with `|t| <= 8`, `|num| <= 2^32`, `pow <= 8`.
pub fn random_element(r: &mut impl Rng, kk: GroupParam) -> BsElement {
    let num = BigInt::from(r.gen_range(-(1i64 << 32)..=(1i64 << 32)));
    let pow = r.gen_range(0..=8);
    let t = r.gen_range(-8..=8);
    BsElement::new(num, pow, t, kk)
}

/// A short element, so that products in the group ring stay small.
pub fn small_element(r: &mut impl Rng, kk: GroupParam) -> BsElement {
    BsElement::new(BigInt::from(r.gen_range(-4..=4)), r.gen_range(0..=2), r.gen_range(-2..=2), kk)
}

pub fn random_ring_elt(r: &mut impl Rng, kk: GroupParam, max_support: usize, max_coeff: i64) -> GroupRingElt {
    let n = r.gen_range(0..=max_support);
    let terms = (0..n).map(|_| (small_element(r, kk), BigInt::from(r.gen_range(-max_coeff..=max_coeff))));
    GroupRingElt::from_terms(terms, kk)
}

/// An element as the affine map `v ↦ k^t v + x` over `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub t: i64,
    pub x: BigRational,
}

fn k_pow(kv: i64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(kv));
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    if e < 0 {
        out.recip()
    } else {
        out
    }
}

impl Affine {
    pub fn identity() -> Self {
        Affine { t: 0, x: BigRational::zero() }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Affine, kv: i64) -> Affine {
        Affine { t: self.t + other.t, x: &self.x + k_pow(kv, self.t) * &other.x }
    }

    pub fn letter(l: Letter) -> Affine {
        let one = BigRational::one();
        match l {
            Letter::A => Affine { t: 1, x: BigRational::zero() },
            Letter::AInv => Affine { t: -1, x: BigRational::zero() },
            Letter::B => Affine { t: 0, x: one },
            Letter::BInv => Affine { t: 0, x: -one },
        }
    }
}

/// Composes the affine maps of the letters. For `k = 0` only the
/// `a`-exponent is meaningful and `x` is forced to zero.
pub fn affine_eval(letters: &[Letter], kv: i64) -> Affine {
    if kv == 0 {
        let t = letters
            .iter()
            .map(|l| match l {
                Letter::A => 1,
                Letter::AInv => -1,
                _ => 0,
            })
            .sum();
        return Affine { t, x: BigRational::zero() };
    }
    letters.iter().fold(Affine::identity(), |acc, &l| acc.compose(&Affine::letter(l), kv))
}

/// The element's `(t, x)` with `x = num / |k|^pow`.
pub fn element_affine(g: &BsElement, kv: i64) -> Affine {
    let den = if kv.abs() > 1 { BigInt::from(kv.abs()).pow(g.pow()) } else { BigInt::one() };
    Affine { t: g.t(), x: BigRational::new(g.num().clone(), den) }
}

/// Plain convolution of two group-ring elements, multiplying every pair of
/// terms through the affine oracle.
pub fn convolve_oracle(p: &GroupRingElt, q: &GroupRingElt, kv: i64) -> BTreeMap<(i64, BigRational), BigInt> {
    let mut out: BTreeMap<(i64, BigRational), BigInt> = BTreeMap::new();
    for (g, c) in p.terms() {
        for (h, d) in q.terms() {
            let prod = element_affine(g, kv).compose(&element_affine(h, kv), kv);
            *out.entry((prod.t, prod.x)).or_insert_with(BigInt::zero) += c * d;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn ring_elt_as_oracle(p: &GroupRingElt, kv: i64) -> BTreeMap<(i64, BigRational), BigInt> {
    p.terms()
        .map(|(g, c)| {
            let a = element_affine(g, kv);
            ((a.t, a.x), c.clone())
        })
        .collect()
}

/// A random unit upper-triangular matrix over `Λ` with a few sparse
/// off-diagonal entries.
pub fn random_unit_triangular(r: &mut impl Rng, n: usize, kk: GroupParam) -> RingMatrix {
    let mut u = RingMatrix::identity_over(n, kk);
    if n < 2 {
        return u;
    }
    let fills = r.gen_range(1..=3);
    for _ in 0..fills {
        let i = r.gen_range(0..n - 1);
        let j = r.gen_range(i + 1..n);
        u[(i, j)] = random_ring_elt(r, kk, 2, 2);
    }
    u
}

/// Inverse of a unit upper-triangular matrix by back-substitution.
pub fn unit_triangular_inverse(u: &RingMatrix, kk: GroupParam) -> RingMatrix {
    let n = u.rows();
    let mut inv = RingMatrix::identity_over(n, kk);
    // Solve U X = I column by column, bottom row first.
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = if i == col { GroupRingElt::one(kk) } else { GroupRingElt::zero(kk) };
            for l in i + 1..n {
                acc = acc.sub(&u[(i, l)].mul(&inv[(l, col)]).unwrap()).unwrap();
            }
            inv[(i, col)] = acc;
        }
    }
    inv
}

/// The negative-definite `-E8` block.
pub fn minus_e8() -> IntMatrix {
    e8_matrix().neg()
}

/// An even form with a verified inverse: `H^r` ⊥ an optional `±E8` block,
/// transformed by a random unit-triangular congruence.
pub fn random_even_certified_form(r: &mut impl Rng, kk: GroupParam) -> HermitianForm {
    let hr = hyperbolic(r.gen_range(1..=2), kk);
    let base = match r.gen_range(0..3) {
        0 => hr,
        1 => orthogonal_sum(&hr, &HermitianForm::extended_from_integers(&e8_matrix(), kk).unwrap()).unwrap(),
        _ => orthogonal_sum(&HermitianForm::extended_from_integers(&minus_e8(), kk).unwrap(), &hr).unwrap(),
    };
    let u = random_unit_triangular(r, base.rank(), kk);
    base.congruent(&u).unwrap()
}

fn ring(s: &str, kk: GroupParam) -> GroupRingElt {
    GroupRingElt::parse(s, kk).unwrap()
}

fn ring_matrix(rows: &[&[&str]], kk: GroupParam) -> RingMatrix {
    RingMatrix::square(rows.iter().map(|r| r.iter().map(|s| ring(s, kk)).collect()).collect()).unwrap()
}

/// `[[1, g], [g^-1, 0]]` with inverse `[[0, g], [g^-1, -1]]`.
pub fn odd_twisted(g: &str, kk: GroupParam) -> HermitianForm {
    let gi = ring(g, kk).involute().to_human();
    let m = ring_matrix(&[&["1", g], &[&gi, "0"]], kk);
    let c = ring_matrix(&[&["0", g], &[&gi, "-1"]], kk);
    HermitianForm::new(m, kk).unwrap().with_certificate(c).unwrap()
}

/// `[[g + g^-1, 1], [1, 0]]` with inverse `[[0, 1], [1, -(g + g^-1)]]`.
pub fn even_twisted(g: &str, kk: GroupParam) -> HermitianForm {
    let s = ring(g, kk).add(&ring(g, kk).involute()).unwrap();
    let m = ring_matrix(&[&[&s.to_human(), "1"], &["1", "0"]], kk);
    let c = ring_matrix(&[&["0", "1"], &["1", &s.negate().to_human()]], kk);
    HermitianForm::new(m, kk).unwrap().with_certificate(c).unwrap()
}

/// Certified nonsingular forms over `Λ` for one `k`.
pub fn fixture_forms(kk: GroupParam) -> Vec<HermitianForm> {
    let e8 = HermitianForm::extended_from_integers(&e8_matrix(), kk).unwrap();
    let me8 = HermitianForm::extended_from_integers(&minus_e8(), kk).unwrap();
    let g = if kk.k() == 0 { "a" } else { "a*b" };
    vec![
        HermitianForm::diagonal(&[1], kk).unwrap(),
        HermitianForm::diagonal(&[-1], kk).unwrap(),
        HermitianForm::diagonal(&[1, -1], kk).unwrap(),
        HermitianForm::diagonal(&[1, 1, -1], kk).unwrap(),
        odd_twisted(g, kk),
        hyperbolic(1, kk),
        hyperbolic(2, kk),
        e8.clone(),
        orthogonal_sum(&me8, &hyperbolic(1, kk)).unwrap(),
        orthogonal_sum(&e8, &e8).unwrap(),
        even_twisted(g, kk),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Homeomorphic,
    NotHomeomorphic,
    Unknown,
}

pub struct ClassifyCase {
    pub label: String,
    pub left: ManifoldDescriptor,
    pub right: ManifoldDescriptor,
    pub isometry: Option<RingMatrix>,
    pub expected: Expected,
}

fn desc(f: &HermitianForm, w2: W2Type, ks: u8) -> ManifoldDescriptor {
    ManifoldDescriptor::new(f.clone(), w2, KsValue::Known(ks)).unwrap()
}

/// Pairs of descriptors with the verdict forced by their construction.
pub fn classify_cases(r: &mut impl Rng) -> Vec<ClassifyCase> {
    let mut out = Vec::new();
    let mut push = |label: String, left, right, isometry, expected| {
        out.push(ClassifyCase { label, left, right, isometry, expected });
    };
    for kv in [-3, 2, 3] {
        let kk = k(kv);
        let odd = HermitianForm::diagonal(&[1, -1], kk).unwrap();
        let odd3 = HermitianForm::diagonal(&[1, 1, -1], kk).unwrap();
        let odd_neg = HermitianForm::diagonal(&[-1, -1], kk).unwrap();
        let h = hyperbolic(1, kk);
        let e8h = orthogonal_sum(&HermitianForm::extended_from_integers(&e8_matrix(), kk).unwrap(), &h).unwrap();
        let id2 = RingMatrix::identity_over(2, kk);

        push(
            format!("k={kv} odd reflexive"),
            desc(&odd, W2Type::I, 0),
            desc(&odd, W2Type::I, 0),
            Some(id2.clone()),
            Expected::Homeomorphic,
        );
        push(
            format!("k={kv} odd KS differs"),
            desc(&odd, W2Type::I, 0),
            desc(&odd, W2Type::I, 1),
            Some(id2.clone()),
            Expected::NotHomeomorphic,
        );
        push(
            format!("k={kv} rank differs"),
            desc(&odd, W2Type::I, 0),
            desc(&odd3, W2Type::I, 0),
            None,
            Expected::NotHomeomorphic,
        );
        push(
            format!("k={kv} signature differs"),
            desc(&odd, W2Type::I, 1),
            desc(&odd_neg, W2Type::I, 1),
            None,
            Expected::NotHomeomorphic,
        );
        push(
            format!("k={kv} parity and type differ"),
            desc(&odd, W2Type::I, 0),
            desc(&h, W2Type::II, 0),
            None,
            Expected::NotHomeomorphic,
        );
        push(
            format!("k={kv} no certificate"),
            desc(&odd, W2Type::I, 0),
            desc(&odd, W2Type::I, 0),
            None,
            Expected::Unknown,
        );
        let bad = RingMatrix::from_fn(2, 2, |i, j| GroupRingElt::from_int(if i == j { 2 } else { 0 }, kk));
        push(
            format!("k={kv} certificate fails"),
            desc(&h, W2Type::II, 0),
            desc(&h, W2Type::II, 0),
            Some(bad),
            Expected::Unknown,
        );

        let u = random_unit_triangular(r, e8h.rank(), kk);
        let moved = e8h.congruent(&u).unwrap();
        push(
            format!("k={kv} congruent E8+H"),
            desc(&moved, W2Type::II, 1),
            desc(&e8h, W2Type::II, 1),
            Some(u.clone()),
            Expected::Homeomorphic,
        );
        let not_u = {
            let mut m = u.clone();
            m[(0, 0)] = m[(0, 0)].negate();
            m[(1, 1)] = ring("a", kk);
            m
        };
        push(
            format!("k={kv} wrong isometry"),
            desc(&moved, W2Type::II, 1),
            desc(&e8h, W2Type::II, 1),
            Some(not_u),
            Expected::Unknown,
        );

        let twisted = odd_twisted(if kv == 0 { "a" } else { "a*b" }, kk);
        let swap = ring_matrix(&[&["0", "1"], &["1", "0"]], kk);
        let swapped = twisted.congruent(&swap).unwrap();
        push(
            format!("k={kv} swapped twisted"),
            desc(&swapped, W2Type::I, 1),
            desc(&twisted, W2Type::I, 1),
            Some(swap),
            Expected::Homeomorphic,
        );

        if kk.is_odd() {
            let e8 = HermitianForm::extended_from_integers(&e8_matrix(), kk).unwrap();
            push(
                format!("k={kv} type II vs III"),
                desc(&e8, W2Type::II, 1),
                desc(&e8, W2Type::III, 1),
                None,
                Expected::NotHomeomorphic,
            );
            push(
                format!("k={kv} type III reflexive"),
                desc(&h, W2Type::III, 0),
                desc(&h, W2Type::III, 0),
                Some(id2.clone()),
                Expected::Homeomorphic,
            );
        } else {
            let eh = even_twisted("a*b", kk);
            push(
                format!("k={kv} even twisted vs H, no U"),
                desc(&eh, W2Type::II, 0),
                desc(&h, W2Type::II, 0),
                None,
                Expected::Unknown,
            );
            let u = ring_matrix(&[&["1", "0"], &["a*b", "1"]], kk);
            let target = h.congruent(&u).unwrap();
            push(
                format!("k={kv} H congruence"),
                desc(&target, W2Type::II, 0),
                desc(&h, W2Type::II, 0),
                Some(u),
                Expected::Homeomorphic,
            );
        }
    }
    out
}
