//! Chevalley-Eilenberg cochains `Hom(wedge g, U(g))` under the adjoint action.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::pbw::{Enveloping, PbwElement};
use crate::lie::LieAlgebra;
use crate::polyvector::{sort_with_sign, wedge_keys, WedgeKey};
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CeCochain {
    dim: usize,
    degree: usize,
    terms: BTreeMap<WedgeKey, PbwElement>,
}

impl CeCochain {
    pub fn zero(dim: usize, degree: usize) -> Self {
        CeCochain {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// 0-cochain with the given value.
    pub fn constant(u: PbwElement) -> Self {
        let mut c = Self::zero(u.dim(), 0);
        c.add_term(Vec::new(), u);
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<WedgeKey, PbwElement> {
        &self.terms
    }

    /// Value on an increasing key.
    pub fn value(&self, key: &[usize]) -> PbwElement {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| PbwElement::zero(self.dim))
    }

    /// Value on an arbitrary index sequence, antisymmetrically extended.
    pub fn eval(&self, indices: &[usize]) -> PbwElement {
        match sort_with_sign(indices) {
            None => PbwElement::zero(self.dim),
            Some((key, odd)) => {
                let v = self.value(&key);
                if odd {
                    v.scale(&-Scalar::one())
                } else {
                    v
                }
            }
        }
    }

    /// Largest PBW filtration degree among the values.
    pub fn filtration_degree(&self) -> usize {
        self.terms
            .values()
            .map(|u| u.degree_or_zero())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, key: WedgeKey, u: PbwElement) {
        debug_assert_eq!(key.len(), self.degree);
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        if u.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| PbwElement::zero(self.dim));
        *slot = slot.add(&u);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &CeCochain, c: &Scalar) {
        assert_eq!(self.degree, other.degree, "cochain degree mismatch");
        for (k, u) in &other.terms {
            self.add_term(k.clone(), u.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> CeCochain {
        let mut out = CeCochain::zero(self.dim, self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &CeCochain) -> CeCochain {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &CeCochain) -> CeCochain {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, u)| {
                let wedge: Vec<&str> = k.iter().map(|&i| labels[i].as_str()).collect();
                format!("[{}] -> {}", wedge.join("^"), u.render(labels))
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for CeCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.dim).map(|i| format!("e{i}")).collect();
        write!(f, "{}", self.render(&labels))
    }
}

impl Enveloping<'_> {
    /// `e_i . u = e_i u - u e_i`
    pub fn adjoint(&self, i: usize, u: &PbwElement) -> PbwElement {
        self.commutator(&PbwElement::generator(self.dim(), i), u)
    }

    pub fn ce_differential(&self, c: &CeCochain) -> CeCochain {
        let alg = self.algebra();
        let dim = self.dim();
        let p = c.degree();
        let mut out = CeCochain::zero(dim, p + 1);
        if p >= dim {
            return out;
        }
        for key in wedge_keys(dim, p + 1) {
            let mut val = PbwElement::zero(dim);
            for k in 0..=p {
                let mut rest = key.clone();
                let ek = rest.remove(k);
                let inner = c.value(&rest);
                if !inner.is_zero() {
                    val.add_scaled(&self.adjoint(ek, &inner), &scalar::sign(k));
                }
            }
            for k in 0..=p {
                for l in k + 1..=p {
                    let rest: Vec<usize> = key
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != k && t != l)
                        .map(|(_, &x)| x)
                        .collect();
                    let sgn = scalar::sign(k + l);
                    for (m, cm) in alg.bracket_basis(key[k], key[l]).iter().enumerate() {
                        if num_traits::Zero::is_zero(cm) {
                            continue;
                        }
                        let mut idx = Vec::with_capacity(p);
                        idx.push(m);
                        idx.extend_from_slice(&rest);
                        let v = c.eval(&idx);
                        val.add_scaled(&v, &(cm * &sgn));
                    }
                }
            }
            out.add_term(key, val);
        }
        out
    }

    /// Shuffle cup product with the PBW product on values.
    pub fn cup_ce(&self, a: &CeCochain, b: &CeCochain) -> CeCochain {
        let dim = self.dim();
        let (p, q) = (a.degree(), b.degree());
        let mut out = CeCochain::zero(dim, p + q);
        if p + q > dim {
            return out;
        }
        for key in wedge_keys(dim, p + q) {
            let mut val = PbwElement::zero(dim);
            for pos in wedge_keys(p + q, p) {
                let s: Vec<usize> = pos.iter().map(|&t| key[t]).collect();
                let rest: Vec<usize> = (0..p + q)
                    .filter(|t| !pos.contains(t))
                    .map(|t| key[t])
                    .collect();
                let va = a.value(&s);
                if va.is_zero() {
                    continue;
                }
                let vb = b.value(&rest);
                if vb.is_zero() {
                    continue;
                }
                // inversions of the shuffle pos ++ complement
                let inv: usize = pos.iter().enumerate().map(|(r, &t)| t - r).sum();
                val.add_scaled(&self.product(&va, &vb), &scalar::sign(inv));
            }
            out.add_term(key, val);
        }
        out
    }
}

pub fn ce_differential(c: &CeCochain, alg: &LieAlgebra) -> CeCochain {
    Enveloping::new(alg).ce_differential(c)
}

pub fn cup_ce(a: &CeCochain, b: &CeCochain, alg: &LieAlgebra) -> CeCochain {
    Enveloping::new(alg).cup_ce(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{catalog, CATALOG};
    use crate::poly;
    use crate::scalar::int;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain(rng: &mut ChaCha8Rng, dim: usize, p: usize, max_deg: usize) -> CeCochain {
        let monos = poly::monomials_up_to(dim, max_deg);
        let mut c = CeCochain::zero(dim, p);
        for key in wedge_keys(dim, p) {
            let mut u = PbwElement::zero(dim);
            for _ in 0..3 {
                let m = &monos[rng.gen_range(0..monos.len())];
                u.add_term(m.clone(), int(rng.gen_range(-3..=3)));
            }
            c.add_term(key, u);
        }
        c
    }

    #[test]
    fn degree_zero_is_adjoint_action() {
        let alg = catalog("sl2").unwrap();
        let env = Enveloping::new(&alg);
        let e = PbwElement::generator(3, 0);
        let d = env.ce_differential(&CeCochain::constant(e.clone()));
        // delta(e)(h) = h e - e h = [h, e] = 2e
        assert_eq!(d.value(&[1]), e.scale(&int(2)));
        assert!(d.value(&[0]).is_zero());
    }

    #[test]
    fn abelian_differential_vanishes() {
        let alg = catalog("abelian2").unwrap();
        let env = Enveloping::new(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in 0..=2 {
            let c = random_cochain(&mut rng, 2, p, 3);
            let d = env.ce_differential(&c);
            assert!(d.is_zero());
            assert_eq!(d.degree(), p + 1);
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in CATALOG {
            let alg = catalog(name).unwrap();
            let env = Enveloping::new(&alg);
            for p in 0..alg.dim() {
                for _ in 0..3 {
                    let c = random_cochain(&mut rng, alg.dim(), p, 3);
                    let dd = env.ce_differential(&env.ce_differential(&c));
                    assert!(dd.is_zero(), "{name} p={p}");
                }
            }
        }
    }

    #[test]
    fn cup_unit_and_degree_zero() {
        let alg = catalog("sl2").unwrap();
        let env = Enveloping::new(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let one = CeCochain::constant(PbwElement::one(3));
        for p in 0..=3 {
            let c = random_cochain(&mut rng, 3, p, 2);
            assert_eq!(env.cup_ce(&one, &c), c);
            assert_eq!(env.cup_ce(&c, &one), c);
        }
        let a = random_cochain(&mut rng, 3, 0, 2);
        let b = random_cochain(&mut rng, 3, 0, 2);
        assert_eq!(
            env.cup_ce(&a, &b).value(&[]),
            env.product(&a.value(&[]), &b.value(&[]))
        );
    }

    #[test]
    fn cup_of_one_cochains_antisymmetrizes() {
        let alg = catalog("abelian2").unwrap();
        let env = Enveloping::new(&alg);
        let mut a = CeCochain::zero(2, 1);
        a.add_term(vec![0], PbwElement::one(2));
        let mut b = CeCochain::zero(2, 1);
        b.add_term(vec![1], PbwElement::one(2));
        assert_eq!(env.cup_ce(&a, &b).value(&[0, 1]), PbwElement::one(2));
        assert_eq!(env.cup_ce(&b, &a).value(&[0, 1]), PbwElement::one(2).scale(&int(-1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn leibniz(which in 0usize..5, seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
            let alg = catalog(CATALOG[which]).unwrap();
            let dim = alg.dim();
            prop_assume!(p + q < dim);
            let env = Enveloping::new(&alg);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_cochain(&mut rng, dim, p, 2);
            let b = random_cochain(&mut rng, dim, q, 2);
            let left = env.ce_differential(&env.cup_ce(&a, &b));
            let right = env
                .cup_ce(&env.ce_differential(&a), &b)
                .add(&env.cup_ce(&a, &env.ce_differential(&b)).scale(&scalar::sign(p)));
            prop_assert_eq!(left, right);
        }
    }
}
