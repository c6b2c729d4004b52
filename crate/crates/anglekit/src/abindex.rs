//! Noncommutative ab-polynomials, the ab-index of a graded poset, the
//! derivations and linear operators acting on them, and the spanning
//! experiments over the {E, M∘E} poset families.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use crate::error::Error;
use crate::linalg::{RatMat, RatVec};
use crate::poset::GradedPoset;

/// A word over {a, b}, packed as bits (set bit = letter b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub len: u8,
    pub bits: u32,
}

impl Word {
    pub fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        if s.len() > 32 {
            return Err(Error::Invalid("word too long".into()));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                'a' => {}
                'b' => bits |= 1 << i,
                other => return Err(Error::Invalid(format!("bad letter `{other}`"))),
            }
        }
        Ok(Word { len: s.len() as u8, bits })
    }

    pub fn letter(&self, i: usize) -> char {
        if self.bits >> i & 1 == 1 {
            'b'
        } else {
            'a'
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word {
            len: self.len + other.len,
            bits: self.bits | (other.bits << self.len),
        }
    }

    pub fn b_set(&self) -> Vec<usize> {
        (0..self.len as usize).filter(|&i| self.bits >> i & 1 == 1).collect()
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len as usize {
            write!(f, "{}", self.letter(i))?;
        }
        Ok(())
    }
}

/// Integer combination of ab-words; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbPolynomial {
    terms: BTreeMap<Word, i64>,
}

impl AbPolynomial {
    pub fn zero() -> Self {
        AbPolynomial::default()
    }

    pub fn one() -> Self {
        AbPolynomial::monomial(Word::empty(), 1)
    }

    pub fn monomial(w: Word, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(w, c);
        }
        AbPolynomial { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Word, i64> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous degree, when one exists.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for w in self.terms.keys() {
            match deg {
                None => deg = Some(w.len as usize),
                Some(d) if d != w.len as usize => return None,
                _ => {}
            }
        }
        deg
    }

    fn add_term(&mut self, w: Word, c: i64) {
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &AbPolynomial) -> AbPolynomial {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, *c);
        }
        out
    }

    pub fn sub(&self, other: &AbPolynomial) -> AbPolynomial {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, -c);
        }
        out
    }

    pub fn scale(&self, s: i64) -> AbPolynomial {
        let mut out = AbPolynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, c * s);
        }
        out
    }

    /// Noncommutative product (concatenation on words).
    pub fn mul(&self, other: &AbPolynomial) -> AbPolynomial {
        let mut out = AbPolynomial::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Right/left multiplication by a single letter.
    pub fn times_letter(&self, b: bool) -> AbPolynomial {
        let letter = Word { len: 1, bits: u32::from(b) };
        self.mul(&AbPolynomial::monomial(letter, 1))
    }

    pub fn letter_times(&self, b: bool) -> AbPolynomial {
        let letter = Word { len: 1, bits: u32::from(b) };
        AbPolynomial::monomial(letter, 1).mul(self)
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("ab-polynomial json must be an object".into()))?;
        let mut out = AbPolynomial::zero();
        for (word, coef) in obj {
            let c = coef
                .as_i64()
                .ok_or_else(|| Error::Invalid(format!("bad coefficient for `{word}`")))?;
            out.add_term(Word::parse(word)?, c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        for (w, c) in &self.terms {
            obj.insert(w.to_string(), Value::from(*c));
        }
        Value::Object(obj)
    }
}

/// The derivation sending both letters to `ab` (R) or to `ba` (R'),
/// extended by the Leibniz rule.
pub fn derivation(x: &AbPolynomial, prime: bool) -> AbPolynomial {
    let replacement = if prime {
        Word::parse("ba").unwrap()
    } else {
        Word::parse("ab").unwrap()
    };
    let mut out = AbPolynomial::zero();
    for (w, c) in x.terms() {
        for i in 0..w.len as usize {
            // replace letter i by the two-letter replacement
            let mut bits = 0u32;
            let mut pos = 0usize;
            for j in 0..w.len as usize {
                if j == i {
                    bits |= (replacement.bits & 0b11) << pos;
                    pos += 2;
                } else {
                    bits |= ((w.bits >> j) & 1) << pos;
                    pos += 1;
                }
            }
            out.add_term(Word { len: w.len + 1, bits }, *c);
        }
    }
    out
}

/// P: strips a trailing `a`, kills a trailing `b` (and constants).
pub fn p_operator(x: &AbPolynomial) -> AbPolynomial {
    let mut out = AbPolynomial::zero();
    for (w, c) in x.terms() {
        if w.len == 0 {
            continue;
        }
        let last = w.len as usize - 1;
        if w.bits >> last & 1 == 0 {
            out.add_term(Word { len: w.len - 1, bits: w.bits & !(1 << last) }, *c);
        }
    }
    out
}

/// E(x) = xa + bx + R(x).
pub fn e_operator(x: &AbPolynomial) -> AbPolynomial {
    x.times_letter(false)
        .add(&x.letter_times(true))
        .add(&derivation(x, false))
}

/// The variant of E displayed in the product formula: xb + ax + R'(x).
/// Provably equal to `e_operator` (the difference of the derivations is the
/// commutator with a-b), but kept separate so the consistency report can
/// exercise both.
pub fn e_operator_variant(x: &AbPolynomial) -> AbPolynomial {
    x.times_letter(true)
        .add(&x.letter_times(false))
        .add(&derivation(x, true))
}

/// M = P ∘ E.
pub fn m_operator(x: &AbPolynomial) -> AbPolynomial {
    p_operator(&e_operator(x))
}

/// The ab-index of a graded poset of rank d+1: sum over S of W_S x(S) with
/// x_i = b exactly for i in S and a-b otherwise, expanded into words.
pub fn ab_index(poset: &GradedPoset) -> AbPolynomial {
    let d = poset.height().saturating_sub(1);
    // flag vector over subsets of {1..d}
    let mut flag: BTreeMap<u32, i64> = BTreeMap::new();
    for mask in 0u32..(1 << d) {
        let s: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        flag.insert(mask, poset.flag_whitney_second(&s));
    }
    let mut out = AbPolynomial::zero();
    for wbits in 0u32..(1 << d) {
        // coefficient of the word with b-positions wbits:
        // sum over S subset of b-set of (-1)^(|b-set| - |S|) W_S
        let bcount = wbits.count_ones() as i64;
        let mut coef = 0i64;
        let mut sub = wbits;
        loop {
            let sign = if (bcount - sub.count_ones() as i64) % 2 == 0 { 1 } else { -1 };
            coef += sign * flag[&sub];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & wbits;
        }
        if coef != 0 {
            out.add_term(Word { len: d as u8, bits: wbits }, coef);
        }
    }
    out
}

/// Inverts the ab-index expansion back to the flag vector: W_T = sum over
/// words whose b-set is contained in T of their coefficients.
pub fn flag_vector_from_ab_index(psi: &AbPolynomial, d: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    for tmask in 0u32..(1 << d) {
        let mut w = 0i64;
        let mut sub = tmask;
        loop {
            w += psi.coefficient(&Word { len: d as u8, bits: sub });
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & tmask;
        }
        let t: Vec<usize> = (0..d).filter(|i| tmask >> i & 1 == 1).map(|i| i + 1).collect();
        out.insert(t, w);
    }
    out
}

/// Outcome of checking the product formula Psi(E(poset)) against the two
/// operator candidates.
#[derive(Clone, Debug, Serialize)]
pub struct ProductFormulaReport {
    pub poset_label: String,
    pub direct: String,
    pub textual_formula_matches: bool,
    pub displayed_formula_matches: bool,
}

use serde::Serialize;

/// Computes Psi of the product poset directly and compares against both
/// candidate operator formulas: E(x) = xa + bx + R(x) and the displayed
/// xb + ax + R'(x).
pub fn product_formula_check(poset: &GradedPoset, label: &str) -> ProductFormulaReport {
    let product = poset.product_with_chain2();
    let direct = ab_index(&product);
    let psi = ab_index(poset);
    let textual = e_operator(&psi);
    let displayed = e_operator_variant(&psi);
    ProductFormulaReport {
        poset_label: label.to_string(),
        direct: format_ab(&direct),
        textual_formula_matches: textual == direct,
        displayed_formula_matches: displayed == direct,
    }
}

pub fn format_ab(p: &AbPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .iter()
        .map(|(w, c)| {
            let ws = if w.len == 0 { "1".to_string() } else { w.to_string() };
            format!("{c}{ws}")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The 2^d posets from words over {E, M∘E} applied to the 2-chain, their
/// ab-indices, and the exact rank of the coefficient matrix.
pub struct SpanningExperiment {
    pub dimension: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub indices: Vec<(String, AbPolynomial)>,
}

impl SpanningExperiment {
    pub fn pass(&self) -> bool {
        self.rank == self.expected_rank
    }
}

pub fn spanning_experiment(d: usize) -> Result<SpanningExperiment, Error> {
    if !(1..=6).contains(&d) {
        return Err(Error::Invalid("spanning experiment wants 1 <= d <= 6".into()));
    }
    let mut indices = Vec::new();
    for mask in 0u32..(1 << d) {
        let mut poset: Arc<GradedPoset> = GradedPoset::chain2();
        let mut name = String::new();
        for step in 0..d {
            if mask >> step & 1 == 0 {
                name.push('E');
                poset = Arc::new(poset.product_with_chain2());
            } else {
                name.push_str("M\u{2218}E");
                let e = poset.product_with_chain2();
                poset = Arc::new(e.m_operator()?);
            }
        }
        indices.push((name, ab_index(&poset)));
    }
    // coefficient matrix over all words of length d
    let words: Vec<Word> = (0u32..(1 << d)).map(|bits| Word { len: d as u8, bits }).collect();
    let rows: Vec<RatVec> = indices
        .iter()
        .map(|(_, psi)| {
            RatVec::from_ints(&words.iter().map(|w| psi.coefficient(w)).collect::<Vec<_>>())
        })
        .collect();
    let rank = RatMat::new(rows, words.len()).rank();
    Ok(SpanningExperiment { dimension: d, rank, expected_rank: 1 << d, indices })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn word_round_trip() {
        for s in ["", "a", "b", "ab", "ba", "aabba"] {
            assert_eq!(Word::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn derivation_on_letters() {
        let a = AbPolynomial::monomial(ab("a"), 1);
        let b = AbPolynomial::monomial(ab("b"), 1);
        assert_eq!(derivation(&a, false), AbPolynomial::monomial(ab("ab"), 1));
        assert_eq!(derivation(&b, false), AbPolynomial::monomial(ab("ab"), 1));
        assert_eq!(derivation(&a, true), AbPolynomial::monomial(ab("ba"), 1));
        // derivations kill constants
        assert!(derivation(&AbPolynomial::one(), false).is_zero());
        assert!(derivation(&AbPolynomial::one(), true).is_zero());
    }

    #[test]
    fn derivation_leibniz_on_ab() {
        // R(ab) = ab·b + a·ab = abb + aab
        let x = AbPolynomial::monomial(ab("ab"), 1);
        let expected = AbPolynomial::monomial(ab("abb"), 1)
            .add(&AbPolynomial::monomial(ab("aab"), 1));
        assert_eq!(derivation(&x, false), expected);
    }

    #[test]
    fn leibniz_rule_random_products() {
        // R(xy) = R(x)y + xR(y) for assorted word pairs, both derivations
        let words = ["a", "b", "ab", "ba", "aab", "bab"];
        for prime in [false, true] {
            for w1 in words {
                for w2 in words {
                    let x = AbPolynomial::monomial(ab(w1), 1);
                    let y = AbPolynomial::monomial(ab(w2), 1);
                    let lhs = derivation(&x.mul(&y), prime);
                    let rhs = derivation(&x, prime)
                        .mul(&y)
                        .add(&x.mul(&derivation(&y, prime)));
                    assert_eq!(lhs, rhs, "words {w1},{w2} prime={prime}");
                }
            }
        }
    }

    #[test]
    fn p_operator_cases() {
        assert_eq!(
            p_operator(&AbPolynomial::monomial(ab("aa"), 1)),
            AbPolynomial::monomial(ab("a"), 1)
        );
        assert!(p_operator(&AbPolynomial::monomial(ab("ab"), 1)).is_zero());
    }

    #[test]
    fn e_operator_on_unit() {
        let e = e_operator(&AbPolynomial::one());
        let expected =
            AbPolynomial::monomial(ab("a"), 1).add(&AbPolynomial::monomial(ab("b"), 1));
        assert_eq!(e, expected);
    }

    #[test]
    fn m_on_trailing_letters() {
        // M(xa) = E(x), M(xb) = xb
        let x = AbPolynomial::monomial(ab("b"), 1);
        let xa = x.times_letter(false);
        let xb = x.times_letter(true);
        assert_eq!(m_operator(&xa), e_operator(&x));
        assert_eq!(m_operator(&xb), xb);
        // spec example: M(ba) = E(b) = ba + b² + ab
        let expected = AbPolynomial::monomial(ab("ba"), 1)
            .add(&AbPolynomial::monomial(ab("bb"), 1))
            .add(&AbPolynomial::monomial(ab("ab"), 1));
        assert_eq!(m_operator(&AbPolynomial::monomial(ab("ba"), 1)), expected);
    }

    #[test]
    fn e_variants_agree() {
        // xa + bx + R(x) = xb + ax + R'(x) identically
        for w in ["", "a", "b", "ab", "ba", "abb", "baa"] {
            let x = AbPolynomial::monomial(ab(w), 1);
            assert_eq!(e_operator(&x), e_operator_variant(&x), "word {w}");
        }
    }

    #[test]
    fn ab_index_of_small_posets() {
        // chain: rank 1, d = 0, index 1
        assert_eq!(ab_index(&GradedPoset::chain2()), AbPolynomial::one());
        // B2: (a-b) + 2b = a + b
        let b2 = GradedPoset::boolean(2);
        let expected =
            AbPolynomial::monomial(ab("a"), 1).add(&AbPolynomial::monomial(ab("b"), 1));
        assert_eq!(ab_index(&b2), expected);
        // B3: a² + 2ab + 2ba + b²
        let b3 = GradedPoset::boolean(3);
        let expected = AbPolynomial::monomial(ab("aa"), 1)
            .add(&AbPolynomial::monomial(ab("ab"), 2))
            .add(&AbPolynomial::monomial(ab("ba"), 2))
            .add(&AbPolynomial::monomial(ab("bb"), 1));
        assert_eq!(ab_index(&b3), expected);
    }

    #[test]
    fn flag_vector_round_trip() {
        let b3 = GradedPoset::boolean(3);
        let psi = ab_index(&b3);
        let flags = flag_vector_from_ab_index(&psi, 2);
        assert_eq!(flags[&vec![]], 1);
        assert_eq!(flags[&vec![1]], 3);
        assert_eq!(flags[&vec![2]], 3);
        assert_eq!(flags[&vec![1, 2]], 6);
    }

    #[test]
    fn product_formula_on_chain_and_booleans() {
        for (p, label) in [
            (GradedPoset::chain2(), "C1"),
            (GradedPoset::boolean(2), "B2"),
            (GradedPoset::boolean(3), "B3"),
        ] {
            let rep = product_formula_check(&p, label);
            assert!(rep.textual_formula_matches, "{label}: {rep:?}");
            assert!(rep.displayed_formula_matches, "{label}: {rep:?}");
        }
    }

    #[test]
    fn spanning_ranks() {
        for d in 1..=3 {
            let exp = spanning_experiment(d).unwrap();
            assert_eq!(exp.rank, 1 << d, "dimension {d}");
        }
    }
}
