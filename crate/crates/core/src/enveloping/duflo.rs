//! The Duflo element `q`, the operator `d(q)`, and the transported product.

use num_traits::Zero;

use super::ce::CeCochain;
use super::pbw::{Enveloping, PbwElement};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::poly::Polynomial;
use crate::polyvector::PolyVector;
use crate::scalar::{self, Scalar};

/// Truncated power series in one variable, coefficients `0..=n`.
fn series_mul(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `log(1 + h)` for a series `h` without constant term.
fn series_log1p(h: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n + 1];
    let mut power = h.to_vec();
    power.resize(n + 1, Scalar::zero());
    for k in 1..=n {
        let c = scalar::sign(k + 1) / scalar::int(k as i64);
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * &c;
        }
        power = series_mul(&power, h, n);
    }
    out
}

/// Coefficients of `log(sinh(u/2) / (u/2))` up to `u^n`.
pub fn log_sinhc_coefficients(n: usize) -> Vec<Scalar> {
    // sinh(u/2)/(u/2) = sum u^{2k} / (4^k (2k+1)!)
    let mut h = vec![Scalar::zero(); n + 1];
    let mut k = 1;
    while 2 * k <= n {
        h[2 * k] = Scalar::from_integer(num_bigint::BigInt::from(4).pow(k as u32)).recip()
            / scalar::factorial(2 * k + 1);
        k += 1;
    }
    series_log1p(&h, n)
}

fn poly_exp(x: &Polynomial, n: usize) -> Polynomial {
    // x has no constant term, so x^k has degree >= k
    let dim = x.dim();
    let mut out = Polynomial::one(dim);
    let mut power = Polynomial::one(dim);
    for k in 1..=n {
        power = (&power * x).truncate(n);
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &(scalar::one() / scalar::factorial(k)));
    }
    out
}

/// The operator `d(q)` on polynomials of degree at most `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DufloTruncation {
    n: usize,
    log_q: Polynomial,
    q: Polynomial,
    q_inv: Polynomial,
}

impl DufloTruncation {
    pub fn new(alg: &LieAlgebra, n: usize) -> Self {
        let dim = alg.dim();
        // ad x with linear entries: (ad x)[k][j] = sum_i x_i c_ijk
        let ad: Vec<Vec<Polynomial>> = (0..dim)
            .map(|k| {
                (0..dim)
                    .map(|j| {
                        let mut p = Polynomial::zero(dim);
                        for i in 0..dim {
                            p.add_scaled(&Polynomial::var(dim, i), alg.c(i, j, k));
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        let coeffs = log_sinhc_coefficients(n);
        let mut log_q = Polynomial::zero(dim);
        let mut power = ad.clone();
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            if k > 1 {
                power = mat_mul(&power, &ad);
            }
            if c.is_zero() {
                continue;
            }
            let mut tr = Polynomial::zero(dim);
            for (i, row) in power.iter().enumerate() {
                tr = &tr + &row[i];
            }
            log_q.add_scaled(&tr, &(c / scalar::int(2)));
        }
        let q = poly_exp(&log_q, n);
        let q_inv = poly_exp(&-&log_q, n);
        DufloTruncation { n, log_q, q, q_inv }
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    /// `q` truncated at degree `n`.
    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    pub fn q_inverse(&self) -> &Polynomial {
        &self.q_inv
    }

    pub fn log_q(&self) -> &Polynomial {
        &self.log_q
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        let d = p.degree_or_zero();
        if d > self.n {
            return Err(Error::bound("Duflo truncation", d, self.n));
        }
        Ok(())
    }

    /// `d(q) p`
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.check(p)?;
        Ok(apply_symbol(&self.q, p))
    }

    /// `d(q^{-1}) p`
    pub fn apply_inverse(&self, p: &Polynomial) -> Result<Polynomial> {
        self.check(p)?;
        Ok(apply_symbol(&self.q_inv, p))
    }
}

/// `sum_a s_a d^a p` for a constant-coefficient symbol `s`.
fn apply_symbol(s: &Polynomial, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(p.dim());
    let d = p.degree_or_zero();
    for (a, c) in s.terms() {
        if crate::poly::degree(a) > d {
            continue;
        }
        out.add_scaled(&p.derivative(a), c);
    }
    out
}

fn mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = a.len();
    let dim = a.first().and_then(|r| r.first()).map_or(0, |p| p.dim());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Polynomial::zero(dim);
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn duflo_truncation(alg: &LieAlgebra, n: usize) -> DufloTruncation {
    DufloTruncation::new(alg, n)
}

/// `D = beta o d(q)` together with everything transported along it.
pub struct DufloMap<'a> {
    env: Enveloping<'a>,
    trunc: DufloTruncation,
}

impl<'a> DufloMap<'a> {
    pub fn new(alg: &'a LieAlgebra, n: usize) -> Self {
        DufloMap {
            env: Enveloping::new(alg),
            trunc: DufloTruncation::new(alg, n),
        }
    }

    pub fn with_truncation(alg: &'a LieAlgebra, trunc: DufloTruncation) -> Self {
        DufloMap {
            env: Enveloping::new(alg),
            trunc,
        }
    }

    pub fn algebra(&self) -> &'a LieAlgebra {
        self.env.algebra()
    }

    pub fn enveloping(&self) -> &Enveloping<'a> {
        &self.env
    }

    pub fn truncation(&self) -> &DufloTruncation {
        &self.trunc
    }

    pub fn bound(&self) -> usize {
        self.trunc.bound()
    }

    pub fn apply(&self, p: &Polynomial) -> Result<PbwElement> {
        Ok(self.env.symmetrization(&self.trunc.apply(p)?))
    }

    /// `D^{-1} = d(q^{-1}) o beta^{-1}`
    pub fn inverse(&self, u: &PbwElement) -> Result<Polynomial> {
        self.trunc.apply_inverse(&self.env.symmetrization_inverse(u))
    }

    /// `f * g = D^{-1}(D f . D g)`
    pub fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let need = f.degree_or_zero() + g.degree_or_zero();
        if need > self.bound() {
            return Err(Error::bound("star product", need, self.bound()));
        }
        let prod = self.env.product(&self.apply(f)?, &self.apply(g)?);
        self.inverse(&prod)
    }

    /// Coefficientwise image of a polyvector field.
    pub fn extension(&self, alpha: &PolyVector) -> Result<CeCochain> {
        let mut out = CeCochain::zero(alpha.dim(), alpha.degree());
        for (key, f) in alpha.terms() {
            out.add_term(key.clone(), self.apply(f)?);
        }
        Ok(out)
    }
}

pub fn duflo_map(p: &Polynomial, alg: &LieAlgebra, trunc: &DufloTruncation) -> Result<PbwElement> {
    Ok(Enveloping::new(alg).symmetrization(&trunc.apply(p)?))
}

pub fn star_product(
    f: &Polynomial,
    g: &Polynomial,
    alg: &LieAlgebra,
    trunc: &DufloTruncation,
) -> Result<Polynomial> {
    DufloMap::with_truncation(alg, trunc.clone()).star(f, g)
}

pub fn duflo_extension(
    alpha: &PolyVector,
    alg: &LieAlgebra,
    trunc: &DufloTruncation,
) -> Result<CeCochain> {
    DufloMap::with_truncation(alg, trunc.clone()).extension(alpha)
}
