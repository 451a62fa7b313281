//! The integral group ring `Λ = Z[B(k)]` with the involution `g ↦ g^-1`,
//! and the free-group ring `Z[F(a, b)]` in which Fox derivatives live.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bsgroup::{BsElement, FreeWord, Generator, GroupParam};
use crate::error::{Error, Result};

/// A finitely supported integer combination of elements of `B(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    k: GroupParam,
    terms: BTreeMap<BsElement, BigInt>,
}

impl GroupRingElt {
    pub fn zero(k: GroupParam) -> Self {
        GroupRingElt { k, terms: BTreeMap::new() }
    }

    pub fn one(k: GroupParam) -> Self {
        Self::from_element(BsElement::identity(), k)
    }

    pub fn from_int<N: Into<BigInt>>(n: N, k: GroupParam) -> Self {
        Self::monomial(n.into(), BsElement::identity(), k)
    }

    pub fn from_element(g: BsElement, k: GroupParam) -> Self {
        Self::monomial(BigInt::one(), g, k)
    }

    pub fn monomial(c: BigInt, g: BsElement, k: GroupParam) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        GroupRingElt { k, terms }
    }

    /// Sums the given terms, merging repeated elements.
    pub fn from_terms<I: IntoIterator<Item = (BsElement, BigInt)>>(terms: I, k: GroupParam) -> Self {
        let mut out = GroupRingElt::zero(k);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    pub fn param(&self) -> GroupParam {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BsElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.identity_coefficient().is_one()
    }

    fn add_term(&mut self, g: BsElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_param(&self, other: &GroupRingElt) -> Result<()> {
        if self.k != other.k {
            return Err(Error::ParamMismatch { left: self.k.k(), right: other.k.k() });
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.check_param(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> GroupRingElt {
        GroupRingElt { k: self.k, terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect() }
    }

    /// Convolution product.
    pub fn mul(&self, other: &GroupRingElt) -> Result<GroupRingElt> {
        self.check_param(other)?;
        let mut out = GroupRingElt::zero(self.k);
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(g.multiply(h, self.k), c * d);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, n: &BigInt) -> GroupRingElt {
        if n.is_zero() {
            return GroupRingElt::zero(self.k);
        }
        GroupRingElt { k: self.k, terms: self.terms.iter().map(|(g, c)| (g.clone(), c * n)).collect() }
    }

    /// `Σ n_g g ↦ Σ n_g g^-1`.
    pub fn involute(&self) -> GroupRingElt {
        GroupRingElt::from_terms(self.terms.iter().map(|(g, c)| (g.invert(self.k), c.clone())), self.k)
    }

    /// The augmentation `ε`: sum of coefficients.
    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn identity_coefficient(&self) -> BigInt {
        self.terms.get(&BsElement::identity()).cloned().unwrap_or_else(BigInt::zero)
    }

    /// If this element is a trivial unit `±g`, returns its inverse `±g^-1`.
    pub fn trivial_unit_inverse(&self) -> Option<GroupRingElt> {
        if self.terms.len() != 1 {
            return None;
        }
        let (g, c) = self.terms.iter().next()?;
        if c.abs().is_one() {
            Some(GroupRingElt::monomial(c.clone(), g.invert(self.k), self.k))
        } else {
            None
        }
    }

    /// Reduction of all coefficients modulo 2, kept as `0`/`1`.
    pub fn mod2(&self) -> GroupRingElt {
        GroupRingElt {
            k: self.k,
            terms: self.terms.iter().filter(|(_, c)| c.is_odd()).map(|(g, _)| (g.clone(), BigInt::one())).collect(),
        }
    }

    /// Parses the human syntax, e.g. `1 - a + 2*b*A` or `3*a^-2*b^5`.
    pub fn parse(s: &str, k: GroupParam) -> Result<GroupRingElt> {
        Parser::new(s, k).parse_expr()
    }

    /// Human rendering in canonical term order; parses back to `self`.
    pub fn to_human(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if g.is_identity() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&g.to_human(self.k));
            } else {
                out.push_str(&format!("{}*{}", mag, g.to_human(self.k)));
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

/// A finitely supported integer combination of reduced free words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeRingElt {
    terms: BTreeMap<FreeWord, BigInt>,
}

impl FreeRingElt {
    pub fn zero() -> Self {
        FreeRingElt { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(FreeWord::empty())
    }

    pub fn from_word(w: FreeWord) -> Self {
        Self::monomial(BigInt::one(), w)
    }

    pub fn monomial(c: BigInt, w: FreeWord) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreeRingElt { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: FreeWord, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &FreeRingElt) -> FreeRingElt {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn negate(&self) -> FreeRingElt {
        FreeRingElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &FreeRingElt) -> FreeRingElt {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &FreeRingElt) -> FreeRingElt {
        let mut out = FreeRingElt::zero();
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                out.add_term(u.concat(v), c * d);
            }
        }
        out
    }

    /// The ring map `Z[F(a, b)] → Z[B(k)]`.
    pub fn project(&self, k: GroupParam) -> GroupRingElt {
        GroupRingElt::from_terms(self.terms.iter().map(|(w, c)| (w.eval(k), c.clone())), k)
    }

    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn to_human(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // Shorter words first reads more naturally than the raw key order.
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(u, _), (v, _)| u.len().cmp(&v.len()).then_with(|| u.cmp(v)));
        let mut out = String::new();
        for (i, (w, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&w.to_human());
            } else {
                out.push_str(&format!("{}*{}", mag, w.to_human()));
            }
        }
        out
    }
}

impl fmt::Display for FreeRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

/// `(g^n - 1)/(g - 1)` in `Z[F]`: `1 + g + … + g^(n-1)` for `n > 0`, `0` for
/// `n = 0`, and `-(g^-1 + … + g^n)` for `n < 0`.
pub fn geometric_series(g: Generator, n: i64) -> FreeRingElt {
    let mut out = FreeRingElt::zero();
    if n > 0 {
        for i in 0..n {
            out.add_term(FreeWord::generator_power(g, i), BigInt::one());
        }
    } else {
        for i in n..0 {
            out.add_term(FreeWord::generator_power(g, i), -BigInt::one());
        }
    }
    out
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    k: GroupParam,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, k: GroupParam) -> Self {
        Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, k, src }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<GroupRingElt> {
        if self.chars.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut acc = GroupRingElt::zero(self.k);
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut sign = BigInt::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if !first => return Err(self.err("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let term = self.parse_term()?;
            acc = acc.add(&term.scale(&sign))?;
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<GroupRingElt> {
        let mut coeff = BigInt::one();
        let mut elt = BsElement::identity();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.parse_uint()?,
                Some('a' | 'A' | 'b' | 'B') => {
                    while let Some(c) = self.peek() {
                        let base = match c {
                            'a' => BsElement::a_power(1),
                            'A' => BsElement::a_power(-1),
                            'b' => BsElement::gen_b(self.k),
                            'B' => BsElement::gen_b(self.k).invert(self.k),
                            _ => break,
                        };
                        self.pos += 1;
                        let factor = if self.peek() == Some('^') {
                            self.pos += 1;
                            let e = self.parse_int()?;
                            self.element_power(&base, &e)?
                        } else {
                            base
                        };
                        elt = elt.multiply(&factor, self.k);
                    }
                }
                _ => return Err(self.err("expected an integer or a letter")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(GroupRingElt::monomial(coeff, elt, self.k))
    }

    fn element_power(&self, base: &BsElement, e: &BigInt) -> Result<BsElement> {
        let k = self.k;
        // Generators only: a^e and b^e have closed forms.
        if base.t() != 0 {
            let e: i64 = e.try_into().map_err(|_| self.err("exponent out of range"))?;
            return Ok(BsElement::a_power(base.t() * e));
        }
        Ok(BsElement::b_power(base.num() * e, k))
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|e| self.err(&e.to_string()))
    }

    fn parse_int(&mut self) -> Result<BigInt> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.parse_uint()?;
        Ok(if neg { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: i64) -> GroupParam {
        GroupParam::new(v)
    }

    fn p(s: &str, kv: i64) -> GroupRingElt {
        GroupRingElt::parse(s, k(kv)).unwrap()
    }

    #[test]
    fn one_times_one() {
        let one = GroupRingElt::one(k(2));
        assert_eq!(one.mul(&one).unwrap(), one);
    }

    #[test]
    fn difference_of_squares_in_a() {
        assert_eq!(p("1 - a", 2).mul(&p("1 + a", 2)).unwrap(), p("1 - a^2", 2));
    }

    #[test]
    fn telescoping_in_b() {
        assert_eq!(p("1 - b", 2).mul(&p("1 + b + b^2 + b^3", 2)).unwrap(), p("1 - b^4", 2));
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let err = p("1", 2).add(&p("1", 3)).unwrap_err();
        assert_eq!(err, Error::ParamMismatch { left: 2, right: 3 });
        assert!(p("a", 2).mul(&p("a", 3)).is_err());
    }

    #[test]
    fn involution_examples() {
        let kk = k(3);
        assert_eq!(GroupRingElt::one(kk).involute(), GroupRingElt::one(kk));
        // (b - ab)^bar = b^-1 - (ab)^-1, and (ab)^-1 = b^-1 a^-1 = a^-1 b^-3.
        let lhs = p("b - a*b", 3).involute();
        assert_eq!(lhs, p("B - A*B^3", 3));
        assert_eq!(lhs, p("B - B*A", 3));
    }

    #[test]
    fn augmentation_and_identity_coefficient() {
        assert_eq!(p("1 - a", 2).augment(), BigInt::zero());
        assert_eq!(GroupRingElt::zero(k(2)).augment(), BigInt::zero());
        assert_eq!(p("3 + 2*a", 2).identity_coefficient(), BigInt::from(3));
        assert_eq!(p("a*b + B*A", 2).identity_coefficient(), BigInt::zero());
        assert_eq!(GroupRingElt::zero(k(2)).identity_coefficient(), BigInt::zero());
    }

    #[test]
    fn geometric_series_examples() {
        let b = |e: i64| FreeRingElt::from_word(FreeWord::generator_power(Generator::B, e));
        assert_eq!(geometric_series(Generator::B, 3), b(0).add(&b(1)).add(&b(2)));
        assert!(geometric_series(Generator::B, 0).is_zero());
        let neg = geometric_series(Generator::B, -2);
        assert_eq!(neg, b(-1).add(&b(-2)).negate());
        // (b - 1)(-b^-1 - b^-2) = b^-2 - 1 by direct expansion.
        let lhs = b(1).sub(&b(0)).mul(&neg);
        assert_eq!(lhs, b(-2).sub(&b(0)));
        for n in -6..=6 {
            let lhs = b(1).sub(&b(0)).mul(&geometric_series(Generator::B, n));
            assert_eq!(lhs, b(n).sub(&b(0)), "n = {n}");
        }
    }

    #[test]
    fn human_syntax_round_trips() {
        for (s, kv) in [("1 - a + 2*b*A", 2), ("-3*a^-2*b^5*a^7 + B", 3), ("0 + b", -2), ("a*b*A", -3)] {
            let e = p(s, kv);
            assert_eq!(p(&e.to_human(), kv), e, "{s}");
        }
        assert_eq!(p("1 - 1", 2).to_human(), "0");
        assert!(GroupRingElt::parse("1 +", k(2)).is_err());
        assert!(GroupRingElt::parse("x", k(2)).is_err());
        assert!(GroupRingElt::parse("", k(2)).is_err());
    }

    #[test]
    fn trivial_units() {
        let u = p("-a*b", 2);
        let inv = u.trivial_unit_inverse().unwrap();
        assert!(u.mul(&inv).unwrap().is_one());
        assert!(p("2", 2).trivial_unit_inverse().is_none());
        assert!(p("1 + a", 2).trivial_unit_inverse().is_none());
    }

    #[test]
    fn mod2_reduction() {
        assert_eq!(p("3 + 2*a - b", 2).mod2(), p("1 + b", 2));
    }
}
