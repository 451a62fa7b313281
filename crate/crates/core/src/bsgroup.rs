//! Normal-form arithmetic in the solvable Baumslag-Solitar group
//! `B(k) = <a, b | a b a^-1 = b^k>`.
//!
//! For `k != 0` the group is the semidirect product `Z[1/k] ⋊ Z`, where the
//! generator `a` acts on `Z[1/k]` by multiplication with the signed `k`.
//! Every element is written uniquely as `b^x a^t` with `x ∈ Z[1/|k|]` and
//! `t ∈ Z`. `B(0)` collapses to the infinite cyclic group on `a`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The Baumslag-Solitar parameter `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupParam(i64);

impl GroupParam {
    pub const fn new(k: i64) -> Self {
        GroupParam(k)
    }

    pub const fn k(self) -> i64 {
        self.0
    }

    /// `|k|`, the base of the stored denominators.
    pub fn modulus(self) -> BigInt {
        BigInt::from(self.0.unsigned_abs())
    }

    pub fn is_odd(self) -> bool {
        self.0.rem_euclid(2) == 1
    }

    /// `|k| >= 2`: the b-part genuinely has denominators.
    fn has_denominators(self) -> bool {
        self.0.unsigned_abs() >= 2
    }

    fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl fmt::Display for GroupParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element `b^x a^t` with `x = num / |k|^pow`, kept in reduced form.
///
/// The stored value does not remember `k`; every operation takes the
/// parameter explicitly and the caller must not mix elements of different
/// groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BsElement {
    num: BigInt,
    pow: u32,
    t: i64,
}

impl Ord for BsElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t.cmp(&other.t).then(self.pow.cmp(&other.pow)).then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for BsElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BsElement {
    pub fn identity() -> Self {
        BsElement { num: BigInt::zero(), pow: 0, t: 0 }
    }

    /// Builds `b^(num/|k|^pow) a^t`, reducing to canonical form.
    pub fn new(num: BigInt, pow: u32, t: i64, k: GroupParam) -> Self {
        normalize(num, pow, t, k)
    }

    /// Builds an element from already-canonical parts, rejecting anything
    /// that is not in reduced form for `k`.
    pub fn from_parts(num: BigInt, pow: u32, t: i64, k: GroupParam) -> Result<Self> {
        let candidate = BsElement { num, pow, t };
        let reduced = normalize(candidate.num.clone(), candidate.pow, candidate.t, k);
        if reduced != candidate {
            return Err(Error::Schema(format!(
                "element (num={}, pow={}, t={}) is not in reduced form for k={}",
                candidate.num, candidate.pow, candidate.t, k
            )));
        }
        Ok(candidate)
    }

    pub fn gen_a() -> Self {
        BsElement { num: BigInt::zero(), pow: 0, t: 1 }
    }

    pub fn gen_b(k: GroupParam) -> Self {
        Self::b_power(BigInt::one(), k)
    }

    pub fn a_power(t: i64) -> Self {
        BsElement { num: BigInt::zero(), pow: 0, t }
    }

    pub fn b_power(n: BigInt, k: GroupParam) -> Self {
        normalize(n, 0, 0, k)
    }

    /// `c_i = a^-i b a^i`, the i-th basis element of the normal closure of `b`.
    pub fn conjugate_basis(i: u32, k: GroupParam) -> Self {
        let b = Self::gen_b(k);
        let a_i = Self::a_power(i as i64);
        let a_inv_i = Self::a_power(-(i as i64));
        a_inv_i.multiply(&b, k).multiply(&a_i, k)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn pow(&self) -> u32 {
        self.pow
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn is_identity(&self) -> bool {
        self.t == 0 && self.num.is_zero()
    }

    /// The group law `(x1, t1)(x2, t2) = (x1 + k^t1 x2, t1 + t2)`.
    pub fn multiply(&self, other: &BsElement, k: GroupParam) -> BsElement {
        let t = self.t.checked_add(other.t).expect("a-exponent overflow in BsElement::multiply");
        if k.k() == 0 {
            return BsElement { num: BigInt::zero(), pow: 0, t };
        }
        let (n2, p2) = scale_by_k_power(&other.num, other.pow, self.t, k);
        let (num, pow) = add_fractions(&self.num, self.pow, &n2, p2, k);
        normalize(num, pow, t, k)
    }

    /// `(x, t)^-1 = (-k^-t x, -t)`.
    pub fn invert(&self, k: GroupParam) -> BsElement {
        let t = self.t.checked_neg().expect("a-exponent overflow in BsElement::invert");
        if k.k() == 0 {
            return BsElement { num: BigInt::zero(), pow: 0, t };
        }
        let (n, p) = scale_by_k_power(&self.num, self.pow, t, k);
        normalize(-n, p, t, k)
    }

    /// Renders the element as a word `a^-p * b^m * a^(p+t)` in exponent
    /// notation, which parses back to the same element.
    pub fn to_human(&self, k: GroupParam) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        let p = self.pow as i64;
        let m = if k.is_negative() && self.pow % 2 == 1 { -self.num.clone() } else { self.num.clone() };
        let mut factors = Vec::new();
        if !m.is_zero() {
            if p != 0 {
                factors.push(power_token('a', &BigInt::from(-p)));
            }
            factors.push(power_token('b', &m));
            if p + self.t != 0 {
                factors.push(power_token('a', &BigInt::from(p + self.t)));
            }
        } else {
            factors.push(power_token('a', &BigInt::from(self.t)));
        }
        factors.join("*")
    }
}

fn power_token(letter: char, e: &BigInt) -> String {
    if e.is_one() {
        letter.to_string()
    } else {
        format!("{letter}^{e}")
    }
}

/// Multiplies `num / |k|^pow` by `k^e`, returning an unreduced fraction.
fn scale_by_k_power(num: &BigInt, pow: u32, e: i64, k: GroupParam) -> (BigInt, u32) {
    if !k.has_denominators() {
        // |k| = 1: k^e is a sign.
        let flip = k.is_negative() && e.rem_euclid(2) == 1;
        return (if flip { -num.clone() } else { num.clone() }, 0);
    }
    let mag = u32::try_from(e.unsigned_abs()).expect("a-exponent too large to scale the b-part");
    let sign_flip = k.is_negative() && mag % 2 == 1;
    let signed = if sign_flip { -num.clone() } else { num.clone() };
    if e >= 0 {
        (signed * k.modulus().pow(mag), pow)
    } else {
        (signed, pow.checked_add(mag).expect("denominator exponent overflow"))
    }
}

fn add_fractions(n1: &BigInt, p1: u32, n2: &BigInt, p2: u32, k: GroupParam) -> (BigInt, u32) {
    if !k.has_denominators() {
        return (n1 + n2, 0);
    }
    let m = k.modulus();
    let p = p1.max(p2);
    let lhs = n1 * m.pow(p - p1);
    let rhs = n2 * m.pow(p - p2);
    (lhs + rhs, p)
}

fn normalize(mut num: BigInt, mut pow: u32, t: i64, k: GroupParam) -> BsElement {
    match k.k().unsigned_abs() {
        0 => BsElement { num: BigInt::zero(), pow: 0, t },
        1 => BsElement { num, pow: 0, t },
        _ => {
            if num.is_zero() {
                return BsElement { num, pow: 0, t };
            }
            let m = k.modulus();
            while pow > 0 {
                let (q, r) = num.div_rem(&m);
                if !r.is_zero() {
                    break;
                }
                num = q;
                pow -= 1;
            }
            BsElement { num, pow, t }
        }
    }
}

/// One of the free generators `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn letter(self) -> Letter {
        match self {
            Generator::A => Letter::A,
            Generator::B => Letter::B,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A => f.write_str("a"),
            Generator::B => f.write_str("b"),
        }
    }
}

/// A letter of the alphabet `{a, a^-1, b, b^-1}`, written `a A b B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn generator(self) -> Generator {
        match self {
            Letter::A | Letter::AInv => Generator::A,
            Letter::B | Letter::BInv => Generator::B,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    pub fn eval(self, k: GroupParam) -> BsElement {
        match self {
            Letter::A => BsElement::a_power(1),
            Letter::AInv => BsElement::a_power(-1),
            Letter::B => BsElement::b_power(BigInt::one(), k),
            Letter::BInv => BsElement::b_power(-BigInt::one(), k),
        }
    }
}

/// A freely reduced word in the free group `F(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord { letters: Vec::new() }
    }

    /// Builds a word, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    pub fn letter(l: Letter) -> Self {
        FreeWord { letters: vec![l] }
    }

    /// `g^n` for a generator and any integer exponent.
    pub fn generator_power(g: Generator, n: i64) -> Self {
        let l = if n >= 0 { g.letter() } else { g.letter().inverse() };
        FreeWord { letters: vec![l; n.unsigned_abs() as usize] }
    }

    /// The relator `a b a^-1 b^-k`.
    pub fn bs_relator(k: GroupParam) -> Self {
        let head = [Letter::A, Letter::B, Letter::AInv];
        FreeWord::from_letters(head).concat(&FreeWord::generator_power(Generator::B, -k.k()))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// The image of the word in `B(k)`.
    pub fn eval(&self, k: GroupParam) -> BsElement {
        self.letters.iter().fold(BsElement::identity(), |acc, l| acc.multiply(&l.eval(k), k))
    }

    /// Exponent-compressed rendering such as `a*b*a^-1*b^-2`; `1` for the
    /// empty word.
    pub fn to_human(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            let e = if l.is_inverse() { -run } else { run };
            let c = l.generator().to_string().chars().next().unwrap_or('a');
            parts.push(power_token(c, &BigInt::from(e)));
            i = j;
        }
        parts.join("*")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Parses the letter syntax over `{a, A, b, B}`; whitespace is ignored
    /// and `1` or the empty string denotes the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed == "1" {
            return Ok(FreeWord::empty());
        }
        let mut letters = Vec::new();
        for c in trimmed.chars().filter(|c| !c.is_whitespace()) {
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in word")))?;
            letters.push(l);
        }
        Ok(FreeWord::from_letters(letters))
    }
}

/// Exact conversion of an element to `(x as a fraction, t)`, mainly for
/// display and comparisons against rational oracles.
pub fn element_x_as_fraction(g: &BsElement, k: GroupParam) -> (BigInt, BigInt) {
    let den = if k.has_denominators() { k.modulus().pow(g.pow) } else { BigInt::one() };
    (g.num.clone(), den)
}
