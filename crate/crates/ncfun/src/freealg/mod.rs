//! Free-algebra core: words over `d` noncommuting letters, sparse polynomials
//! with complex coefficients, matrices of polynomials, symbolic arithmetic and
//! symbolic directional differentiation.
//!
//! Polynomials are kept in canonical sparse form: a map from words to nonzero
//! coefficients, ordered graded-lexicographically. Equality of the term maps
//! is therefore equality of polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CMat, C64};

mod parse;
pub use parse::parse_poly;

const ZERO: C64 = Complex64::new(0.0, 0.0);

/// A word in the free monoid on letters `x1..xd`, stored as 1-based indices.
///
/// The empty word is the monoid identity (the constant word). Words order
/// graded-lexicographically: shorter words first, ties broken by the index
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(var: usize) -> Self {
        Word(vec![var])
    }

    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Largest letter occurring in the word, 0 for the empty word.
    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Number of occurrences of `var`.
    pub fn count(&self, var: usize) -> usize {
        self.0.iter().filter(|&&l| l == var).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A free (noncommutative) polynomial in `num_vars` variables.
///
/// Canonical sparse form: stored coefficients are never exactly zero, so two
/// polynomials are equal iff their term maps are equal.
#[derive(Debug, Clone, PartialEq)]
pub struct NcPoly {
    num_vars: usize,
    terms: BTreeMap<Word, C64>,
}

impl NcPoly {
    pub fn zero(num_vars: usize) -> Self {
        NcPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != ZERO {
            terms.insert(Word::empty(), c);
        }
        NcPoly { num_vars, terms }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, C64::new(1.0, 0.0))
    }

    /// The variable `x{index}` (1-based).
    pub fn var(num_vars: usize, index: usize) -> Result<Self> {
        if index == 0 || index > num_vars {
            return Err(Error::VarOutOfRange {
                var: index,
                num_vars,
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(Word::letter(index), C64::new(1.0, 0.0));
        Ok(NcPoly { num_vars, terms })
    }

    /// Single term `coeff * word`.
    pub fn monomial(num_vars: usize, word: Word, coeff: C64) -> Result<Self> {
        if word.max_letter() > num_vars {
            return Err(Error::VarOutOfRange {
                var: word.max_letter(),
                num_vars,
            });
        }
        let mut terms = BTreeMap::new();
        if coeff != ZERO {
            terms.insert(word, coeff);
        }
        Ok(NcPoly { num_vars, terms })
    }

    /// Build from (word, coefficient) pairs, accumulating repeats and dropping
    /// exact zeros.
    pub fn from_terms<I>(num_vars: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C64)>,
    {
        let mut acc = NcPoly::zero(num_vars);
        for (word, coeff) in pairs {
            if word.max_letter() > num_vars {
                return Err(Error::VarOutOfRange {
                    var: word.max_letter(),
                    num_vars,
                });
            }
            acc.accumulate(word, coeff);
        }
        Ok(acc)
    }

    fn accumulate(&mut self, word: Word, coeff: C64) {
        if coeff == ZERO {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + coeff;
                if sum == ZERO {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> C64 {
        self.terms.get(word).copied().unwrap_or(ZERO)
    }

    /// Maximum word length among the terms; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        // Graded order puts the longest word last.
        self.terms
            .keys()
            .next_back()
            .map(|w| w.len() as i64)
            .unwrap_or(-1)
    }

    /// Maximum number of occurrences of `var` in any single word.
    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|w| w.count(var)).max().unwrap_or(0)
    }

    /// Sum of coefficient magnitudes; the natural scale for evaluation bounds.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn require_same_vars(&self, rhs: &NcPoly) -> Result<()> {
        if self.num_vars != rhs.num_vars {
            return Err(Error::NumVarsMismatch {
                left: self.num_vars,
                right: rhs.num_vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.require_same_vars(rhs)?;
        let mut out = self.clone();
        for (w, &c) in rhs.terms.iter() {
            out.accumulate(w.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcPoly {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect();
        NcPoly {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn sub(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, factor: C64) -> NcPoly {
        if factor == ZERO {
            return NcPoly::zero(self.num_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c * factor))
            .filter(|(_, c)| *c != ZERO)
            .collect();
        NcPoly {
            num_vars: self.num_vars,
            terms,
        }
    }

    /// Product in the free algebra: bilinear extension of word concatenation.
    /// Noncommutative: `x1*x2` and `x2*x1` are distinct words.
    pub fn mul(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.require_same_vars(rhs)?;
        let mut out = NcPoly::zero(self.num_vars);
        for (wl, &cl) in self.terms.iter() {
            for (wr, &cr) in rhs.terms.iter() {
                out.accumulate(wl.concat(wr), cl * cr);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> NcPoly {
        let mut out = NcPoly::one(self.num_vars);
        for _ in 0..exp {
            out = out.mul(self).expect("same num_vars by construction");
        }
        out
    }

    /// Reinterpret in a larger variable set (the terms are unchanged).
    pub fn extend_vars(&self, num_vars: usize) -> Result<NcPoly> {
        if num_vars < self.num_vars {
            return Err(Error::InvalidArgument {
                arg: "num_vars",
                reason: format!("cannot shrink from {} to {}", self.num_vars, num_vars),
            });
        }
        Ok(NcPoly {
            num_vars,
            terms: self.terms.clone(),
        })
    }

    /// Relabel variables: letter `i` becomes `perm[i-1]`. `perm` must be a
    /// permutation of `1..=num_vars`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<NcPoly> {
        if perm.len() != self.num_vars {
            return Err(Error::InvalidArgument {
                arg: "perm",
                reason: format!(
                    "permutation length {} does not match {} variables",
                    perm.len(),
                    self.num_vars
                ),
            });
        }
        let mut seen = vec![false; self.num_vars];
        for &image in perm {
            if image == 0 || image > self.num_vars || seen[image - 1] {
                return Err(Error::InvalidArgument {
                    arg: "perm",
                    reason: "not a permutation of 1..=num_vars".into(),
                });
            }
            seen[image - 1] = true;
        }
        let mut out = NcPoly::zero(self.num_vars);
        for (w, &c) in self.terms.iter() {
            let letters = w.letters().iter().map(|&l| perm[l - 1]).collect();
            out.accumulate(Word::from_letters(letters), c);
        }
        Ok(out)
    }

    /// Symbolic directional derivative in `var`: every word is replaced by the
    /// sum over positions of the word with one occurrence of `var` swapped for
    /// the fresh `placeholder` letter (Leibniz rule). The result lives in
    /// `placeholder` variables and is linear in the placeholder letter.
    pub fn directional_derivative(&self, var: usize, placeholder: usize) -> Result<NcPoly> {
        if var == 0 || var > self.num_vars {
            return Err(Error::VarOutOfRange {
                var,
                num_vars: self.num_vars,
            });
        }
        if placeholder <= self.num_vars {
            return Err(Error::InvalidArgument {
                arg: "placeholder",
                reason: format!(
                    "placeholder x{} collides with the {} existing variables",
                    placeholder, self.num_vars
                ),
            });
        }
        let mut out = NcPoly::zero(placeholder);
        for (w, &c) in self.terms.iter() {
            for (pos, &letter) in w.letters().iter().enumerate() {
                if letter == var {
                    let mut letters = w.letters().to_vec();
                    letters[pos] = placeholder;
                    out.accumulate(Word::from_letters(letters), c);
                }
            }
        }
        Ok(out)
    }
}

/// Shortest decimal representation that round-trips through `f64` parsing.
fn fmt_f64(v: f64) -> String {
    format!("{}", v)
}

fn fmt_word(word: &Word) -> String {
    let mut parts: Vec<String> = Vec::new();
    let letters = word.letters();
    let mut i = 0;
    while i < letters.len() {
        let letter = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == letter {
            run += 1;
        }
        if run == 1 {
            parts.push(format!("x{}", letter));
        } else {
            parts.push(format!("x{}^{}", letter, run));
        }
        i += run;
    }
    parts.join("*")
}

impl fmt::Display for NcPoly {
    /// Canonical text form, parseable by [`parse_poly`]; formatting then
    /// parsing returns the identical polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, coeff) in self.terms.iter() {
            let (negative, body) = if coeff.im == 0.0 {
                let mag = coeff.re.abs();
                let body = if word.is_empty() {
                    fmt_f64(mag)
                } else if mag == 1.0 {
                    fmt_word(word)
                } else {
                    format!("{}*{}", fmt_f64(mag), fmt_word(word))
                };
                (coeff.re < 0.0, body)
            } else {
                let lit = format!(
                    "({}{}{}i)",
                    fmt_f64(coeff.re),
                    if coeff.im < 0.0 { "-" } else { "+" },
                    fmt_f64(coeff.im.abs())
                );
                let body = if word.is_empty() {
                    lit
                } else {
                    format!("{}*{}", lit, fmt_word(word))
                };
                (false, body)
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
                first = false;
            } else {
                write!(f, " {} {}", if negative { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

/// An I-by-J matrix of free polynomials over a shared variable set; the
/// defining matrix of a polynomial polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    entries: Vec<NcPoly>, // row-major
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<NcPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument {
                arg: "rows/cols",
                reason: "matrix of polynomials must be nonempty".into(),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "polynomial matrix entries",
                expected: format!("{}", rows * cols),
                got: format!("{}", entries.len()),
            });
        }
        let num_vars = entries[0].num_vars();
        if entries.iter().any(|p| p.num_vars() != num_vars) {
            return Err(Error::NumVarsMismatch {
                left: num_vars,
                right: entries
                    .iter()
                    .map(|p| p.num_vars())
                    .find(|&v| v != num_vars)
                    .unwrap_or(num_vars),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            num_vars,
            entries,
        })
    }

    /// 1-by-1 matrix holding a single polynomial.
    pub fn scalar(p: NcPoly) -> Self {
        let num_vars = p.num_vars();
        PolyMatrix {
            rows: 1,
            cols: 1,
            num_vars,
            entries: vec![p],
        }
    }

    /// Constant matrix of polynomials from a numeric complex matrix.
    pub fn from_numeric(m: &CMat, num_vars: usize) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| NcPoly::constant(num_vars, m[(i, j)]))
            .collect();
        PolyMatrix {
            rows: m.nrows(),
            cols: m.ncols(),
            num_vars,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[NcPoly] {
        &self.entries
    }

    pub fn max_degree(&self) -> i64 {
        self.entries.iter().map(|p| p.degree()).max().unwrap_or(-1)
    }

    pub fn matmul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.num_vars != rhs.num_vars {
            return Err(Error::NumVarsMismatch {
                left: self.num_vars,
                right: rhs.num_vars,
            });
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "polynomial matrix product",
                expected: format!("{} inner", self.cols),
                got: format!("{} inner", rhs.rows),
            });
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = NcPoly::zero(self.num_vars);
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(i, k).mul(rhs.entry(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, rhs.cols, entries)
    }

    /// Kronecker product with an identity of size `m` on the right: entry
    /// blocks become `p * I_m`, so row `(i, mu)` and column `(j, nu)` hold
    /// `entry(i, j)` when `mu == nu` and zero otherwise.
    pub fn kron_identity(&self, m: usize) -> PolyMatrix {
        let rows = self.rows * m;
        let cols = self.cols * m;
        let mut entries = vec![NcPoly::zero(self.num_vars); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                for mu in 0..m {
                    entries[(i * m + mu) * cols + (j * m + mu)] = self.entry(i, j).clone();
                }
            }
        }
        PolyMatrix {
            rows,
            cols,
            num_vars: self.num_vars,
            entries,
        }
    }
}
