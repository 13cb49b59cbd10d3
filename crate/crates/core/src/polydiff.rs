//! Polydifferential operators and Hochschild cochains on polynomial algebras.
//!
//! Two representations coexist. [`PolyDiffOp`] is symbolic: a finite sum of
//! polynomial coefficients times products of constant-coefficient derivatives,
//! one per argument. [`MultilinearCochain`] is a value table on the space of
//! polynomials of total degree at most `D`; it is what the transported star
//! product lives in, since that product has infinite order.
//!
//! Both implement [`Cochain`], and the Gerstenhaber composition is available
//! on any pair of cochains through [`FunctionalBracket`].

use std::collections::BTreeMap;

use num_traits::One;

use crate::enveloping::{CeCochain, DufloMap};
use crate::error::{Error, Result};
use crate::poly::{self, Monomial, Polynomial};
use crate::polyvector::{permutations, wedge_keys, PolyVector};
use crate::scalar::{self, Scalar};

/// A multilinear map `S(g)^{(x) n} -> S(g)`, possibly defined only on a
/// bounded-degree subspace.
pub trait Cochain {
    fn dim(&self) -> usize;
    fn arity(&self) -> usize;
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial>;
}

impl<T: Cochain + ?Sized> Cochain for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        (**self).eval(args)
    }
}

/// An associative product on (a bounded part of) the polynomial space.
pub trait BilinearProduct {
    fn dim(&self) -> usize;
    fn product(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial>;
}

/// Ordinary multiplication of polynomials.
#[derive(Clone, Copy, Debug)]
pub struct Pointwise {
    pub dim: usize,
}

impl BilinearProduct for Pointwise {
    fn dim(&self) -> usize {
        self.dim
    }
    fn product(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a * b)
    }
}

impl BilinearProduct for DufloMap<'_> {
    fn dim(&self) -> usize {
        self.algebra().dim()
    }
    fn product(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.star(a, b)
    }
}

/// A product seen as a 2-cochain.
pub struct ProductCochain<P>(pub P);

impl<P: BilinearProduct> Cochain for ProductCochain<P> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn arity(&self) -> usize {
        2
    }
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        check_arity(2, args)?;
        self.0.product(&args[0], &args[1])
    }
}

fn check_arity(arity: usize, args: &[Polynomial]) -> Result<()> {
    if args.len() != arity {
        return Err(Error::Precondition(format!(
            "expected {arity} arguments, got {}",
            args.len()
        )));
    }
    Ok(())
}

/// `(-1)^{(m2-1) j}` with `j` counted from zero.
fn insertion_sign(m2: usize, j: usize) -> Scalar {
    scalar::sign((m2 + 1) * j)
}

/// `(-1)^{|a||b|}` with `|a| = arity - 1`.
fn bracket_sign(m1: usize, m2: usize) -> Scalar {
    scalar::sign((m1 + 1) * (m2 + 1))
}

/// Polydifferential operator `sum c(x) D^{a_1} f_1 ... D^{a_m} f_m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, Polynomial>,
}

impl PolyDiffOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        PolyDiffOp {
            dim,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `(f, g) -> f g`
    pub fn multiplication(dim: usize) -> Self {
        let mut op = Self::zero(dim, 2);
        op.add_term(vec![vec![0; dim], vec![0; dim]], Polynomial::one(dim));
        op
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim, 1);
        op.add_term(vec![vec![0; dim]], Polynomial::one(dim));
        op
    }

    /// `f -> c d_i f`
    pub fn vector_field(c: Polynomial, i: usize) -> Self {
        let dim = c.dim();
        let mut alpha = vec![0; dim];
        alpha[i] = 1;
        let mut op = Self::zero(dim, 1);
        op.add_term(vec![alpha], c);
        op
    }

    /// The 0-ary operator returning `h`.
    pub fn constant(h: Polynomial) -> Self {
        let mut op = Self::zero(h.dim(), 0);
        op.add_term(Vec::new(), h);
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Gerstenhaber degree `arity - 1`.
    pub fn degree(&self) -> isize {
        self.arity as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Monomial>, Polynomial> {
        &self.terms
    }

    pub fn add_term(&mut self, alphas: Vec<Monomial>, c: Polynomial) {
        assert_eq!(alphas.len(), self.arity, "multi-index count must equal arity");
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(alphas.clone())
            .or_insert_with(|| Polynomial::zero(self.dim));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&alphas);
        }
    }

    pub fn add_scaled(&mut self, other: &PolyDiffOp, c: &Scalar) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyDiffOp {
        let mut out = PolyDiffOp::zero(self.dim, self.arity);
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &PolyDiffOp) -> PolyDiffOp {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &PolyDiffOp) -> PolyDiffOp {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn apply(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let mut out = Polynomial::zero(self.dim);
        for (alphas, c) in &self.terms {
            let mut acc = c.clone();
            for (alpha, f) in alphas.iter().zip(args) {
                if acc.is_zero() {
                    break;
                }
                acc = &acc * &f.derivative(alpha);
            }
            out = &out + &acc;
        }
        out
    }

    /// `(a o b)(f_1, ...) = sum_j (-1)^{(m2-1)(j-1)} a(f_1, ..., b(f_j, ...), ...)`
    pub fn compose(&self, b: &PolyDiffOp) -> PolyDiffOp {
        assert_eq!(self.dim, b.dim, "dimension mismatch");
        let (m1, m2) = (self.arity, b.arity);
        let mut out = PolyDiffOp::zero(self.dim, (m1 + m2).saturating_sub(1));
        for (alphas, c1) in &self.terms {
            for j in 0..m1 {
                let sign = insertion_sign(m2, j);
                // distribute d^{alpha_j} over b's coefficient and its m2 factors
                let splits = leibniz_splits(&alphas[j], m2 + 1);
                for (betas, c2) in &b.terms {
                    for (parts, mult) in &splits {
                        let coeff = &(c1 * &c2.derivative(&parts[0])).scale(&(mult * &sign));
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut key = Vec::with_capacity(out.arity);
                        key.extend_from_slice(&alphas[..j]);
                        for (beta, gamma) in betas.iter().zip(&parts[1..]) {
                            key.push(beta.iter().zip(gamma).map(|(a, b)| a + b).collect());
                        }
                        key.extend_from_slice(&alphas[j + 1..]);
                        out.add_term(key, coeff.clone());
                    }
                }
            }
        }
        out
    }

    /// `[a, b] = a o b - (-1)^{|a||b|} b o a`
    pub fn gerstenhaber(&self, b: &PolyDiffOp) -> PolyDiffOp {
        let sign = bracket_sign(self.arity, b.arity);
        self.compose(b).sub(&b.compose(self).scale(&sign))
    }

    /// `dA = -[mu, A]`
    pub fn hochschild_differential(&self) -> PolyDiffOp {
        PolyDiffOp::multiplication(self.dim)
            .gerstenhaber(self)
            .scale(&-Scalar::one())
    }
}

impl Cochain for PolyDiffOp {
    fn dim(&self) -> usize {
        self.dim
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        check_arity(self.arity, args)?;
        Ok(self.apply(args))
    }
}

/// All ways to write `alpha = gamma_0 + ... + gamma_{k-1}`, with the
/// multinomial weight `alpha! / prod gamma_t!`.
fn leibniz_splits(alpha: &[u32], k: usize) -> Vec<(Vec<Monomial>, Scalar)> {
    let dim = alpha.len();
    let mut out = vec![(vec![vec![0u32; dim]; k], Scalar::one())];
    if k == 0 {
        return if alpha.iter().all(|&a| a == 0) {
            vec![(Vec::new(), Scalar::one())]
        } else {
            Vec::new()
        };
    }
    for (i, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let comps = compositions(a, k);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (parts, w) in &out {
            for comp in &comps {
                let mut parts = parts.clone();
                let mut weight = w * scalar::factorial(a as usize);
                for (t, &c) in comp.iter().enumerate() {
                    parts[t][i] = c;
                    weight /= scalar::factorial(c as usize);
                }
                next.push((parts, weight));
            }
        }
        out = next;
    }
    out
}

/// Ordered ways to write `n` as a sum of `k` non-negative parts.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn compose(a: &PolyDiffOp, b: &PolyDiffOp) -> PolyDiffOp {
    a.compose(b)
}

pub fn gerstenhaber(a: &PolyDiffOp, b: &PolyDiffOp) -> PolyDiffOp {
    a.gerstenhaber(b)
}

pub fn hochschild_differential(a: &PolyDiffOp) -> PolyDiffOp {
    a.hochschild_differential()
}

/// The antisymmetrized multiderivation of a polyvector field; a function `h`
/// goes to the 0-ary operator returning `h`.
pub fn hkr(alpha: &PolyVector) -> PolyDiffOp {
    let dim = alpha.dim();
    let p = alpha.degree();
    let mut op = PolyDiffOp::zero(dim, p);
    let norm = Scalar::one() / scalar::factorial(p);
    let perms = permutations(p);
    for (key, c) in alpha.terms() {
        for (perm, odd) in &perms {
            let alphas = perm
                .iter()
                .map(|&s| {
                    let mut a = vec![0; dim];
                    a[key[s]] = 1;
                    a
                })
                .collect();
            let sign = if *odd { -norm.clone() } else { norm.clone() };
            op.add_term(alphas, c.scale(&sign));
        }
    }
    op
}

/// Insertion composition of two functional cochains, evaluated pointwise.
pub fn compose_eval(a: &dyn Cochain, b: &dyn Cochain, args: &[Polynomial]) -> Result<Polynomial> {
    let (m1, m2) = (a.arity(), b.arity());
    check_arity((m1 + m2).saturating_sub(1), args)?;
    let mut out = Polynomial::zero(a.dim());
    if m1 == 0 {
        return Ok(out);
    }
    for j in 0..m1 {
        let inner = b.eval(&args[j..j + m2])?;
        let mut new_args = Vec::with_capacity(m1);
        new_args.extend_from_slice(&args[..j]);
        new_args.push(inner);
        new_args.extend_from_slice(&args[j + m2..]);
        out.add_scaled(&a.eval(&new_args)?, &insertion_sign(m2, j));
    }
    Ok(out)
}

/// `[a, b]` in the functional representation.
pub struct FunctionalBracket<A, B> {
    pub a: A,
    pub b: B,
}

impl<A: Cochain, B: Cochain> Cochain for FunctionalBracket<A, B> {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn arity(&self) -> usize {
        (self.a.arity() + self.b.arity()).saturating_sub(1)
    }
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        let ab = compose_eval(&self.a, &self.b, args)?;
        let ba = compose_eval(&self.b, &self.a, args)?;
        let sign = bracket_sign(self.a.arity(), self.b.arity());
        Ok(&ab - &ba.scale(&sign))
    }
}

/// `[*, f]` for a product `*` and a cochain `f`.
pub fn gerstenhaber_with_star<'a, P: BilinearProduct>(
    star: &'a P,
    f: &'a dyn Cochain,
) -> FunctionalBracket<ProductCochain<&'a P>, &'a dyn Cochain> {
    FunctionalBracket {
        a: ProductCochain(star),
        b: f,
    }
}

impl<P: BilinearProduct + ?Sized> BilinearProduct for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn product(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        (**self).product(a, b)
    }
}

/// Tuples of monomials with total degree at most `bound`.
pub fn bounded_tuples(dim: usize, arity: usize, bound: usize) -> Vec<Vec<Monomial>> {
    let monos = poly::monomials_up_to(dim, bound);
    let mut out: Vec<(Vec<Monomial>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..arity {
        let mut next = Vec::new();
        for (tuple, used) in &out {
            for m in &monos {
                let d = poly::degree(m);
                if used + d <= bound {
                    let mut t = tuple.clone();
                    t.push(m.clone());
                    next.push((t, used + d));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

/// A multilinear cochain tabulated on tuples of monomials of total degree at
/// most `bound`. Missing entries inside the domain are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultilinearCochain {
    dim: usize,
    arity: usize,
    bound: usize,
    table: BTreeMap<Vec<Monomial>, Polynomial>,
}

impl MultilinearCochain {
    pub fn zero(dim: usize, arity: usize, bound: usize) -> Self {
        MultilinearCochain {
            dim,
            arity,
            bound,
            table: BTreeMap::new(),
        }
    }

    /// Tabulates `value` on every monomial tuple of the domain.
    pub fn from_fn(
        dim: usize,
        arity: usize,
        bound: usize,
        mut value: impl FnMut(&[Monomial]) -> Result<Polynomial>,
    ) -> Result<Self> {
        let mut out = Self::zero(dim, arity, bound);
        for tuple in bounded_tuples(dim, arity, bound) {
            let v = value(&tuple)?;
            if !v.is_zero() {
                out.table.insert(tuple, v);
            }
        }
        Ok(out)
    }

    /// Restricts any cochain to the bounded domain.
    pub fn materialize(c: &dyn Cochain, bound: usize) -> Result<Self> {
        let dim = c.dim();
        Self::from_fn(dim, c.arity(), bound, |tuple| {
            let args: Vec<Polynomial> = tuple
                .iter()
                .map(|m| Polynomial::monomial(m.clone(), Scalar::one()))
                .collect();
            c.eval(&args)
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn table(&self) -> &BTreeMap<Vec<Monomial>, Polynomial> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }
}

impl Cochain for MultilinearCochain {
    fn dim(&self) -> usize {
        self.dim
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        check_arity(self.arity, args)?;
        let mut out = Polynomial::zero(self.dim);
        let mut partial: Vec<(Vec<Monomial>, Scalar, usize)> =
            vec![(Vec::new(), Scalar::one(), 0)];
        for f in args {
            let mut next = Vec::new();
            for (tuple, c, used) in &partial {
                for (m, a) in f.terms() {
                    let total = used + poly::degree(m);
                    if total > self.bound {
                        return Err(Error::bound("cochain domain", total, self.bound));
                    }
                    let mut t = tuple.clone();
                    t.push(m.clone());
                    next.push((t, c * a, total));
                }
            }
            partial = next;
        }
        for (tuple, c, _) in partial {
            if let Some(v) = self.table.get(&tuple) {
                out.add_scaled(v, &c);
            }
        }
        Ok(out)
    }
}

/// `(a u b)(f_1, ..., f_{m1+m2}) = a(f_1, ..., f_m1) * b(...)`, tabulated on
/// the degree-`bound` domain.
pub fn cup_tangent(
    a: &dyn Cochain,
    b: &dyn Cochain,
    star: &dyn BilinearProduct,
    bound: usize,
) -> Result<MultilinearCochain> {
    let (m1, m2) = (a.arity(), b.arity());
    MultilinearCochain::from_fn(a.dim(), m1 + m2, bound, |tuple| {
        let args: Vec<Polynomial> = tuple
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), Scalar::one()))
            .collect();
        let left = a.eval(&args[..m1])?;
        let right = b.eval(&args[m1..])?;
        let v = star.product(&left, &right)?;
        let d = v.degree_or_zero();
        if d > bound {
            return Err(Error::bound("cup product value", d, bound));
        }
        Ok(v)
    })
}

/// `(Psi f)(e_I) = f(1/n! sum sgn(s) x_{I s(1)} (x) ...)`, with values sent
/// into `U(g)` by the Duflo map. Zero when the arity exceeds `dim g`.
pub fn antisymmetrizer(f: &dyn Cochain, duflo: &DufloMap) -> Result<CeCochain> {
    let dim = f.dim();
    let n = f.arity();
    let perms = permutations(n);
    let norm = Scalar::one() / scalar::factorial(n);
    let mut out = CeCochain::zero(dim, n);
    for key in wedge_keys(dim, n) {
        let mut value = Polynomial::zero(dim);
        for (perm, odd) in &perms {
            let args: Vec<Polynomial> = perm.iter().map(|&s| Polynomial::var(dim, key[s])).collect();
            let v = f.eval(&args)?;
            value.add_scaled(&v, &if *odd { -norm.clone() } else { norm.clone() });
        }
        if !value.is_zero() {
            out.add_term(key, duflo.apply(&value)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::PbwElement;
    use crate::lie::{catalog, CATALOG};
    use crate::polyvector::{kirillov_kostant, PolyVector};
    use crate::scalar::{frac, int};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_deg: usize, terms: usize) -> Polynomial {
        let monos = poly::monomials_up_to(dim, max_deg);
        let mut p = Polynomial::zero(dim);
        for _ in 0..terms {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            p.add_term(m, int(rng.gen_range(-3..=3)));
        }
        p
    }

    fn random_op(rng: &mut ChaCha8Rng, dim: usize, arity: usize, max_deg: usize) -> PolyDiffOp {
        let monos = poly::monomials_up_to(dim, 2);
        let mut op = PolyDiffOp::zero(dim, arity);
        for _ in 0..3 {
            let alphas = (0..arity)
                .map(|_| monos[rng.gen_range(0..monos.len())].clone())
                .collect();
            op.add_term(alphas, random_poly(rng, dim, max_deg, 2));
        }
        op
    }

    fn random_cochain(
        rng: &mut ChaCha8Rng,
        dim: usize,
        arity: usize,
        bound: usize,
    ) -> MultilinearCochain {
        random_cochain_with_values(rng, dim, arity, bound, bound)
    }

    fn random_cochain_with_values(
        rng: &mut ChaCha8Rng,
        dim: usize,
        arity: usize,
        bound: usize,
        value_degree: usize,
    ) -> MultilinearCochain {
        MultilinearCochain::from_fn(dim, arity, bound, |_| {
            Ok(if rng.gen_bool(0.5) {
                random_poly(rng, dim, value_degree, 2)
            } else {
                Polynomial::zero(dim)
            })
        })
        .unwrap()
    }

    fn apply_as_check(op: &PolyDiffOp, oracle: impl Fn(&[Polynomial]) -> Polynomial, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let args: Vec<Polynomial> = (0..op.arity())
                .map(|_| random_poly(&mut rng, op.dim(), 3, 3))
                .collect();
            assert_eq!(op.apply(&args), oracle(&args));
        }
    }

    #[test]
    fn mu_compose_mu_vanishes() {
        for dim in 1..=3 {
            let mu = PolyDiffOp::multiplication(dim);
            let c = mu.compose(&mu);
            assert_eq!(c.arity(), 3);
            assert!(c.is_zero());
            assert!(mu.gerstenhaber(&mu).is_zero());
        }
    }

    #[test]
    fn derivative_after_product_is_leibniz() {
        let d1 = PolyDiffOp::vector_field(Polynomial::one(2), 0);
        let c = d1.compose(&PolyDiffOp::multiplication(2));
        apply_as_check(&c, |a| (&a[0] * &a[1]).partial(0), 1);
        // product after derivative: (f, g) -> d1(f) g - f d1(g)
        let c = PolyDiffOp::multiplication(2).compose(&d1);
        apply_as_check(&c, |a| &(&a[0].partial(0) * &a[1]) + &(&a[0] * &a[1].partial(0)), 2);
    }

    #[test]
    fn arity_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_op(&mut rng, 2, 2, 1);
        let b = random_op(&mut rng, 2, 3, 1);
        assert_eq!(a.compose(&b).arity(), 4);
        assert_eq!(a.gerstenhaber(&b).arity(), 4);
    }

    #[test]
    fn derivations_are_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let c = random_poly(&mut rng, 3, 2, 3);
            let d = PolyDiffOp::vector_field(c, rng.gen_range(0..3));
            assert!(d.gerstenhaber(&PolyDiffOp::multiplication(3)).is_zero());
            assert!(d.hochschild_differential().is_zero());
        }
    }

    #[test]
    fn identity_is_not_a_cocycle() {
        let id = PolyDiffOp::identity(2);
        let mu = PolyDiffOp::multiplication(2);
        // id o mu = mu, mu o id = 2 mu
        assert_eq!(id.gerstenhaber(&mu), mu.scale(&int(-1)));
        assert_eq!(id.hochschild_differential(), mu.scale(&int(-1)));
    }

    #[test]
    fn hkr_examples() {
        let alpha = PolyVector::term(Polynomial::one(2), &[0, 1]);
        let op = hkr(&alpha);
        apply_as_check(
            &op,
            |a| {
                (&(&a[0].partial(0) * &a[1].partial(1)) - &(&a[0].partial(1) * &a[1].partial(0)))
                    .scale(&frac(1, 2))
            },
            3,
        );
        let h = Polynomial::parse("x1^2 - 3", &["x1".into(), "x2".into()]).unwrap();
        let op = hkr(&PolyVector::function(h.clone()));
        assert_eq!(op.arity(), 0);
        assert_eq!(op.apply(&[]), h);
    }

    #[test]
    fn hkr_images_are_cocycles() {
        for name in CATALOG {
            let alg = catalog(name).unwrap();
            let gamma = kirillov_kostant(&alg);
            assert!(hkr(&gamma).hochschild_differential().is_zero(), "{name}");
            let dim = alg.dim();
            for p in 0..=dim {
                for key in wedge_keys(dim, p) {
                    for m in poly::monomials_up_to(dim, 2) {
                        let alpha = PolyVector::term(Polynomial::monomial(m, int(1)), &key);
                        assert!(hkr(&alpha).hochschild_differential().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn hochschild_differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for name in CATALOG {
            let dim = catalog(name).unwrap().dim();
            for arity in 0..=3 {
                let a = random_op(&mut rng, dim, arity, 3);
                let dd = a.hochschild_differential().hochschild_differential();
                assert!(dd.is_zero(), "{name} arity {arity}");
            }
        }
    }

    #[test]
    fn functional_bracket_agrees_with_symbolic() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let a = random_op(&mut rng, 2, 2, 1);
        let b = random_op(&mut rng, 2, 1, 1);
        let symbolic = a.gerstenhaber(&b);
        let functional = FunctionalBracket { a: &a, b: &b };
        for _ in 0..5 {
            let args: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, 2, 3, 3)).collect();
            assert_eq!(functional.eval(&args).unwrap(), symbolic.apply(&args));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bracket_graded_antisymmetry(seed in any::<u64>(), m1 in 0usize..=3, m2 in 0usize..=3) {
            prop_assume!(m1 + m2 > 0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_op(&mut rng, 2, m1, 2);
            let b = random_op(&mut rng, 2, m2, 2);
            let ab = a.gerstenhaber(&b);
            let ba = b.gerstenhaber(&a).scale(&-bracket_sign(m1, m2));
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn compose_matches_functional_evaluation(seed in any::<u64>(), m1 in 1usize..=2, m2 in 0usize..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_op(&mut rng, 2, m1, 2);
            let b = random_op(&mut rng, 2, m2, 2);
            let c = a.compose(&b);
            let args: Vec<Polynomial> = (0..c.arity()).map(|_| random_poly(&mut rng, 2, 3, 3)).collect();
            prop_assert_eq!(c.apply(&args), compose_eval(&a, &b, &args).unwrap());
        }
    }

    #[test]
    fn materialized_cochain_evaluates_like_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let op = random_op(&mut rng, 2, 2, 1);
        let table = MultilinearCochain::materialize(&op, 4).unwrap();
        for _ in 0..5 {
            let args = [random_poly(&mut rng, 2, 2, 3), random_poly(&mut rng, 2, 2, 3)];
            assert_eq!(table.eval(&args).unwrap(), op.apply(&args));
        }
        let big = [random_poly(&mut rng, 2, 0, 1), Polynomial::parse("x1^5", &["x1".into(), "x2".into()]).unwrap()];
        assert!(matches!(table.eval(&big), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn cup_units_and_identity() {
        let alg = catalog("sl2").unwrap();
        let d = DufloMap::new(&alg, 6);
        let one = PolyDiffOp::constant(Polynomial::one(3));
        let c = cup_tangent(&one, &one, &d, 3).unwrap();
        assert_eq!(c.arity(), 0);
        assert_eq!(c.eval(&[]).unwrap(), Polynomial::one(3));

        let id = PolyDiffOp::identity(3);
        let c = cup_tangent(&id, &id, &d, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..4 {
            let f = random_poly(&mut rng, 3, 1, 2);
            let g = random_poly(&mut rng, 3, 2, 2);
            assert_eq!(c.eval(&[f.clone(), g.clone()]).unwrap(), d.star(&f, &g).unwrap());
        }
        // x1^2 * x2 has degree 3 > 2
        let coeff = PolyDiffOp::constant(Polynomial::parse("e^2", alg.labels()).unwrap());
        let err = cup_tangent(&coeff, &id, &d, 2).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { .. }));
    }

    #[test]
    fn cup_is_associative() {
        let alg = catalog("aff1").unwrap();
        let bound = 3;
        let d = DufloMap::new(&alg, bound);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_cochain_with_values(&mut rng, 2, 1, bound, 1);
        let b = random_cochain_with_values(&mut rng, 2, 1, bound, 1);
        let c = random_cochain_with_values(&mut rng, 2, 1, bound, 1);
        let left = cup_tangent(&cup_tangent(&a, &b, &d, bound).unwrap(), &c, &d, bound).unwrap();
        let right = cup_tangent(&a, &cup_tangent(&b, &c, &d, bound).unwrap(), &d, bound).unwrap();
        for tuple in bounded_tuples(2, 3, bound) {
            let args: Vec<Polynomial> = tuple
                .iter()
                .map(|m| Polynomial::monomial(m.clone(), int(1)))
                .collect();
            assert_eq!(left.eval(&args).unwrap(), right.eval(&args).unwrap());
        }
    }

    #[test]
    fn antisymmetrizer_examples() {
        let alg = catalog("aff1").unwrap();
        let d = DufloMap::new(&alg, 4);
        let mu = PolyDiffOp::multiplication(2);
        assert!(antisymmetrizer(&mu, &d).unwrap().is_zero());

        let id = PolyDiffOp::identity(2);
        let psi = antisymmetrizer(&id, &d).unwrap();
        for i in 0..2 {
            assert_eq!(psi.value(&[i]), PbwElement::generator(2, i));
        }

        // 1/2 (hkr(d1^d2)(x1, x2) - hkr(d1^d2)(x2, x1)) = 1/2 (1/2 + 1/2)
        let op = hkr(&PolyVector::term(Polynomial::one(2), &[0, 1]));
        let psi = antisymmetrizer(&op, &d).unwrap();
        assert_eq!(psi.value(&[0, 1]), PbwElement::one(2).scale(&frac(1, 2)));

        let three = random_cochain(&mut ChaCha8Rng::seed_from_u64(1), 2, 3, 3);
        let psi = antisymmetrizer(&three, &d).unwrap();
        assert!(psi.is_zero());
        assert_eq!(psi.degree(), 3);
    }

    /// `Psi([*, f]) = (-1)^{n-1}/(n+1) delta(Psi f)` for an n-cochain `f`.
    fn psi_chain_identity(name: &str, arity: usize, seed: u64) {
        let alg = catalog(name).unwrap();
        let dim = alg.dim();
        let bound = 3;
        let d = DufloMap::new(&alg, bound + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cochain(&mut rng, dim, arity, bound);
        let bracket = gerstenhaber_with_star(&d, &f);
        let left = antisymmetrizer(&bracket, &d).unwrap();
        let right = d.enveloping().ce_differential(&antisymmetrizer(&f, &d).unwrap());
        let factor = scalar::sign(arity + 1) / scalar::int(arity as i64 + 1);
        assert_eq!(left, right.scale(&factor), "{name} arity {arity}");
        if arity > 0 && !right.is_zero() {
            assert_ne!(left, right);
        }
    }

    #[test]
    fn psi_intertwines_differentials() {
        for name in ["aff1", "sl2"] {
            for arity in 0..=2 {
                for seed in 0..3 {
                    psi_chain_identity(name, arity, seed);
                }
            }
        }
    }

    #[test]
    fn bounded_tuple_counts() {
        // monomials of degree <= 2 in 2 variables: 6; pairs with total <= 2: 1*6 + 2*3 + 3*1
        assert_eq!(bounded_tuples(2, 1, 2).len(), 6);
        assert_eq!(bounded_tuples(2, 2, 2).len(), 6 + 2 * 3 + 3);
        assert_eq!(bounded_tuples(3, 0, 5).len(), 1);
    }

    #[test]
    fn leibniz_split_weights() {
        // d^2 over two factors: 1, 2, 1
        let splits = leibniz_splits(&[2], 2);
        let weights: Vec<Scalar> = splits.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(weights, vec![int(1), int(2), int(1)]);
        assert_eq!(leibniz_splits(&[0, 0], 0).len(), 1);
        assert!(leibniz_splits(&[1], 0).is_empty());
    }
}
