//! `U(g)` in the PBW basis of the declared basis order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::lie::LieAlgebra;
use crate::poly::{self, Monomial, Polynomial};
use crate::scalar::{self, Scalar};

/// Linear combination of ordered monomials `e_1^{a_1} ... e_d^{a_d}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PbwElement {
    dim: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PbwElement {
    pub fn zero(dim: usize) -> Self {
        PbwElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], Scalar::one())
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut m = vec![0; dim];
        m[i] = 1;
        Self::monomial(m, Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut u = Self::zero(m.len());
        u.add_term(m, c);
        u
    }

    /// Reads a polynomial's exponent vectors as PBW monomials.
    pub fn from_exponents(p: &Polynomial) -> Self {
        PbwElement {
            dim: p.dim(),
            terms: p.terms().clone(),
        }
    }

    /// Inverse of [`PbwElement::from_exponents`].
    pub fn to_exponents(&self) -> Polynomial {
        Polynomial::from_terms(self.dim, self.terms.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// PBW filtration degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| poly::degree(m)).max()
    }

    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.len(), self.dim);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> PbwElement {
        let mut out = PbwElement::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    /// Terms of PBW degree exactly `d`.
    pub fn homogeneous_part(&self, d: usize) -> PbwElement {
        PbwElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| poly::degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renders as an ordered product, e.g. `e*h - 2*e`.
    pub fn render(&self, labels: &[String]) -> String {
        self.to_exponents().render(labels)
    }
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exponents())
    }
}

/// Normal-ordering engine for one Lie algebra.
///
/// Caches the products `e_i * e^m` and the symmetrizations of monomials; the
/// caches sit behind mutexes so one instance can be shared across threads.
pub struct Enveloping<'a> {
    alg: &'a LieAlgebra,
    left_cache: Mutex<HashMap<(usize, Monomial), PbwElement>>,
    sym_cache: Mutex<HashMap<Monomial, PbwElement>>,
}

impl<'a> Enveloping<'a> {
    pub fn new(alg: &'a LieAlgebra) -> Self {
        Enveloping {
            alg,
            left_cache: Mutex::new(HashMap::new()),
            sym_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &'a LieAlgebra {
        self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// `e_i * e^m` in normal order. Rewrites `e_i e_j -> e_j e_i + [e_i, e_j]`
    /// for `j < i`; each step lowers the inversion count or the degree.
    fn left_mul_monomial(&self, i: usize, m: &[u32]) -> PbwElement {
        let key = (i, m.to_vec());
        if let Some(hit) = self.left_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let dim = self.dim();
        let first = m.iter().position(|&a| a > 0);
        let out = match first {
            Some(j) if j < i => {
                let mut rest = m.to_vec();
                rest[j] -= 1;
                // e_j (e_i e^rest)
                let inner = self.left_mul_monomial(i, &rest);
                let mut out = self.left_mul_generator(j, &inner);
                // [e_i, e_j] e^rest
                for (k, c) in self.alg.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out.add_scaled(&self.left_mul_monomial(k, &rest), c);
                    }
                }
                out
            }
            _ => {
                let mut n = m.to_vec();
                n[i] += 1;
                PbwElement::monomial(n, Scalar::one())
            }
        };
        debug_assert_eq!(out.dim(), dim);
        self.left_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `e_i * u`
    pub fn left_mul_generator(&self, i: usize, u: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero(self.dim());
        for (m, c) in &u.terms {
            out.add_scaled(&self.left_mul_monomial(i, m), c);
        }
        out
    }

    /// Product of a word of generators (left to right) with `u`.
    pub fn word_times(&self, word: &[usize], u: &PbwElement) -> PbwElement {
        let mut acc = u.clone();
        for &i in word.iter().rev() {
            acc = self.left_mul_generator(i, &acc);
        }
        acc
    }

    pub fn product(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero(self.dim());
        for (m, c) in &a.terms {
            out.add_scaled(&self.word_times(&monomial_word(m), b), c);
        }
        out
    }

    /// `a b - b a`
    pub fn commutator(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        self.product(a, b).sub(&self.product(b, a))
    }

    /// Symmetrization of one monomial: the average of all orderings of the
    /// word, normal-ordered.
    pub fn symmetrize_monomial(&self, m: &[u32]) -> PbwElement {
        if let Some(hit) = self.sym_cache.lock().unwrap().get(m) {
            return hit.clone();
        }
        let dim = self.dim();
        let word = monomial_word(m);
        let arrangements = distinct_arrangements(&word);
        let mut out = PbwElement::zero(dim);
        let one = PbwElement::one(dim);
        for w in &arrangements {
            out.add_scaled(&self.word_times(w, &one), &Scalar::one());
        }
        let out = out.scale(&(Scalar::one() / scalar::int(arrangements.len() as i64)));
        self.sym_cache.lock().unwrap().insert(m.to_vec(), out.clone());
        out
    }

    /// `beta: S(g) -> U(g)`
    pub fn symmetrization(&self, p: &Polynomial) -> PbwElement {
        let mut out = PbwElement::zero(self.dim());
        for (m, c) in p.terms() {
            out.add_scaled(&self.symmetrize_monomial(m), c);
        }
        out
    }

    /// `beta^{-1}` by back-substitution along the PBW filtration.
    pub fn symmetrization_inverse(&self, u: &PbwElement) -> Polynomial {
        let mut rest = u.clone();
        let mut out = Polynomial::zero(self.dim());
        while let Some(d) = rest.degree() {
            let top = rest.homogeneous_part(d).to_exponents();
            rest = rest.sub(&self.symmetrization(&top));
            debug_assert!(rest.homogeneous_part(d).is_zero());
            out = &out + &top;
        }
        out
    }
}

/// `e^m` written as the word `1..1 2..2 ...`.
pub fn monomial_word(m: &[u32]) -> Vec<usize> {
    m.iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
        .collect()
}

/// Distinct permutations of a multiset word, lexicographic.
fn distinct_arrangements(word: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = word.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

pub fn pbw_product(a: &PbwElement, b: &PbwElement, alg: &LieAlgebra) -> PbwElement {
    Enveloping::new(alg).product(a, b)
}

pub fn symmetrization(p: &Polynomial, alg: &LieAlgebra) -> PbwElement {
    Enveloping::new(alg).symmetrization(p)
}

pub fn symmetrization_inverse(u: &PbwElement, alg: &LieAlgebra) -> Polynomial {
    Enveloping::new(alg).symmetrization_inverse(u)
}
