//! Polyvector fields on `g*` with polynomial coefficients, the
//! Schouten-Nijenhuis bracket, and the Kirillov-Kostant Poisson differential.
//!
//! Storage is in the wedge basis: a key `(i_1 < ... < i_p)` stands for
//! `d_{i_1} ^ ... ^ d_{i_p}`. The identification with antisymmetric tensors puts
//! the `1/p!` on the tensor side, see [`PolyVector::to_tensor`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lie::LieAlgebra;
use crate::poly::Polynomial;
use crate::scalar::{self, Scalar};

/// Strictly increasing index tuple.
pub type WedgeKey = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<WedgeKey, Polynomial>,
}

/// Sorts `idx` and returns the sorted list with the sign of the sorting
/// permutation, or `None` when an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}

/// All strictly increasing `p`-subsets of `0..dim`, lexicographic.
pub fn wedge_keys(dim: usize, p: usize) -> Vec<WedgeKey> {
    fn rec(start: usize, dim: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeKey>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= dim {
        rec(0, dim, p, &mut Vec::new(), &mut out);
    }
    out
}

/// All permutations of `0..n` together with their sign (`true` = odd).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let odd = sort_with_sign(&p).map(|(_, s)| s).unwrap_or(false);
            (p, odd)
        })
        .collect()
}

impl PolyVector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyVector {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A degree-0 polyvector.
    pub fn function(f: Polynomial) -> Self {
        let mut v = Self::zero(f.dim(), 0);
        v.add_term(Vec::new(), f);
        v
    }

    /// `f d_{i_1} ^ ... ^ d_{i_p}` for arbitrary (not necessarily sorted) indices.
    pub fn term(f: Polynomial, indices: &[usize]) -> Self {
        let mut v = Self::zero(f.dim(), indices.len());
        if let Some((key, neg)) = sort_with_sign(indices) {
            v.add_term(key, if neg { -&f } else { f });
        }
        v
    }

    /// The constant field `d_i`.
    pub fn coordinate_field(dim: usize, i: usize) -> Self {
        Self::term(Polynomial::one(dim), &[i])
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

    pub fn terms(&self) -> &BTreeMap<WedgeKey, Polynomial> {
        &self.terms
    }

    pub fn coeff(&self, key: &[usize]) -> Polynomial {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    /// Largest polynomial degree among the coefficients (0 when zero).
    pub fn poly_degree(&self) -> usize {
        self.terms
            .values()
            .map(|p| p.degree_or_zero())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, key: WedgeKey, f: Polynomial) {
        debug_assert_eq!(key.len(), self.degree);
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &f;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PolyVector, c: &Scalar) {
        assert_eq!(self.degree, other.degree, "adding polyvectors of different degree");
        for (k, f) in &other.terms {
            self.add_term(k.clone(), f.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyVector {
        let mut out = PolyVector::zero(self.dim, self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &PolyVector) -> PolyVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn add(&self, other: &PolyVector) -> PolyVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn wedge(&self, other: &PolyVector) -> PolyVector {
        let mut out = PolyVector::zero(self.dim, self.degree + other.degree);
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                let cat: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some((key, neg)) = sort_with_sign(&cat) {
                    let fg = f * g;
                    out.add_term(key, if neg { -&fg } else { fg });
                }
            }
        }
        out
    }

    /// Antisymmetric tensor expansion: key `(i_1 < ... < i_p)` contributes
    /// `sgn(s)/p!` to every permuted tuple.
    pub fn to_tensor(&self) -> BTreeMap<Vec<usize>, Polynomial> {
        let perms = permutations(self.degree);
        let norm = Scalar::one() / scalar::factorial(self.degree);
        let mut out: BTreeMap<Vec<usize>, Polynomial> = BTreeMap::new();
        for (key, f) in &self.terms {
            for (perm, odd) in &perms {
                let tuple: Vec<usize> = perm.iter().map(|&s| key[s]).collect();
                let c = if *odd { -norm.clone() } else { norm.clone() };
                out.insert(tuple, f.scale(&c));
            }
        }
        out
    }

    /// Schouten-Nijenhuis bracket. Result degree is `deg a + deg b - 1`
    /// (zero when that would be negative).
    pub fn schouten(&self, other: &PolyVector) -> PolyVector {
        let (p, q) = (self.degree, other.degree);
        let dim = self.dim;
        if p + q == 0 {
            return PolyVector::zero(dim, 0);
        }
        let mut out = PolyVector::zero(dim, p + q - 1);
        if q == 0 {
            for (i, f) in &self.terms {
                for (j, g) in &other.terms {
                    debug_assert!(j.is_empty());
                    bracket_with_function(f, i, g, &mut out);
                }
            }
            return out;
        }
        if p == 0 {
            // [h, P] = (-1)^q [P, h]
            let flipped = other.schouten(self);
            return flipped.scale(&scalar::sign(q));
        }
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                bracket_fields(f, i, g, j, &mut out);
            }
        }
        out
    }

    /// Renders `sum poly * d_{i1}^...^d_{ip}` with the given labels.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, f)| {
                let coeff = f.render(labels);
                if k.is_empty() {
                    format!("({coeff})")
                } else {
                    let fields: Vec<String> = k
                        .iter()
                        .map(|&i| format!("d_{}", labels.get(i).cloned().unwrap_or_else(|| (i + 1).to_string())))
                        .collect();
                    format!("({coeff})*{}", fields.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `[f d_I, h]` for `|I| >= 1`, accumulated into `out`.
///
/// Expanding `f d_I` as `(f d_{i_0}) ^ d_{i_1} ^ ...`, this is
/// `(-1)^{p-1} sum_r (-1)^r xi_r(h) xi_0 ^ .. ^ xi_r^ .. ^ xi_k`; the prefactor
/// makes `[P, f Q] = [P, f] ^ Q + f [P, Q]` hold with the vector-field formula
/// used in [`bracket_fields`].
fn bracket_with_function(f: &Polynomial, key: &[usize], h: &Polynomial, out: &mut PolyVector) {
    let p = key.len();
    for r in 0..p {
        let rest: Vec<usize> = key
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != r)
            .map(|(_, &i)| i)
            .collect();
        let coeff = f * &h.partial(key[r]);
        let c = scalar::sign(r + p - 1);
        out.add_term(rest, coeff.scale(&c));
    }
}

/// `[f d_I, g d_J]` for `|I|, |J| >= 1` via
/// `sum_{r,s} (-1)^{r+s} [xi_r, eta_s] ^ xi_{I\r} ^ eta_{J\s}`
/// with `xi_0 = f d_{i_0}`, `eta_0 = g d_{j_0}`, other factors constant.
fn bracket_fields(
    f: &Polynomial,
    key_i: &[usize],
    g: &Polynomial,
    key_j: &[usize],
    out: &mut PolyVector,
) {
    let dim = f.dim();
    for r in 0..key_i.len() {
        for s in 0..key_j.len() {
            let a = key_i[r];
            let b = key_j[s];
            // [xi_r, eta_s] as a list of (direction, coefficient)
            let mut field: Vec<(usize, Polynomial)> = Vec::new();
            match (r == 0, s == 0) {
                (true, true) => {
                    field.push((b, f * &g.partial(a)));
                    field.push((a, -&(g * &f.partial(b))));
                }
                (true, false) => field.push((a, -&f.partial(b))),
                (false, true) => field.push((b, g.partial(a))),
                (false, false) => continue,
            }
            let mut extra = Polynomial::one(dim);
            if r != 0 {
                extra = &extra * f;
            }
            if s != 0 {
                extra = &extra * g;
            }
            let sign = scalar::sign(r + s);
            for (dir, coeff) in field {
                if coeff.is_zero() {
                    continue;
                }
                let mut idx = vec![dir];
                idx.extend(key_i.iter().enumerate().filter(|(t, _)| *t != r).map(|(_, &i)| i));
                idx.extend(key_j.iter().enumerate().filter(|(t, _)| *t != s).map(|(_, &j)| j));
                if let Some((key, neg)) = sort_with_sign(&idx) {
                    let mut c = &coeff * &extra;
                    c = c.scale(&sign);
                    if neg {
                        c = -&c;
                    }
                    out.add_term(key, c);
                }
            }
        }
    }
}

/// The linear Poisson bivector `gamma = 1/2 sum_{i,j} [e_i, e_j] e_i* ^ e_j*`,
/// whose `d_i ^ d_j` coefficient (`i < j`) is `sum_k c[i][j][k] x_k`.
pub fn kirillov_kostant(alg: &LieAlgebra) -> PolyVector {
    let d = alg.dim();
    let mut gamma = PolyVector::zero(d, 2);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut coeff = Polynomial::zero(d);
            for k in 0..d {
                let c = alg.c(i, j, k);
                if !c.is_zero() {
                    coeff.add_scaled(&Polynomial::var(d, k), c);
                }
            }
            gamma.add_term(vec![i, j], coeff);
        }
    }
    gamma
}

/// `[gamma, a]`.
pub fn poisson_differential(alg: &LieAlgebra, a: &PolyVector) -> PolyVector {
    kirillov_kostant(alg).schouten(a)
}

/// Poisson differential with a precomputed bivector.
pub struct PoissonDifferential {
    gamma: PolyVector,
}

impl PoissonDifferential {
    pub fn new(alg: &LieAlgebra) -> Self {
        PoissonDifferential {
            gamma: kirillov_kostant(alg),
        }
    }

    pub fn gamma(&self) -> &PolyVector {
        &self.gamma
    }

    pub fn apply(&self, a: &PolyVector) -> PolyVector {
        self.gamma.schouten(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{catalog, CATALOG};
    use crate::poly::monomials_up_to;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn p(text: &str, alg: &LieAlgebra) -> Polynomial {
        Polynomial::parse(text, alg.labels()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let d1 = PolyVector::coordinate_field(3, 0);
        let d2 = PolyVector::coordinate_field(3, 1);
        let w = d1.wedge(&d2);
        assert_eq!(w.terms().len(), 1);
        assert_eq!(w.coeff(&[0, 1]), Polynomial::one(3));
        assert_eq!(d2.wedge(&d1), w.scale(&int(-1)));
        assert!(d1.wedge(&d1).is_zero());
    }

    #[test]
    fn tensor_expansion() {
        let d = |i| PolyVector::coordinate_field(3, i);
        let t = d(0).wedge(&d(1)).to_tensor();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![0, 1]], Polynomial::constant(3, frac(1, 2)));
        assert_eq!(t[&vec![1, 0]], Polynomial::constant(3, frac(-1, 2)));
        let t1 = d(2).to_tensor();
        assert_eq!(t1[&vec![2]], Polynomial::one(3));
        let t3 = d(0).wedge(&d(1)).wedge(&d(2)).to_tensor();
        assert_eq!(t3.len(), 6);
        assert_eq!(t3[&vec![2, 1, 0]], Polynomial::constant(3, frac(-1, 6)));
        assert_eq!(t3[&vec![1, 2, 0]], Polynomial::constant(3, frac(1, 6)));
    }

    #[test]
    fn schouten_examples() {
        let aff = catalog("aff1").unwrap();
        // [x2 d1, x1] = x2
        let xi = PolyVector::term(p("e2", &aff), &[0]);
        let h = PolyVector::function(p("e1", &aff));
        assert_eq!(xi.schouten(&h), PolyVector::function(p("e2", &aff)));
        let gamma = kirillov_kostant(&aff);
        assert!(gamma.schouten(&gamma).is_zero());
        let d1 = PolyVector::coordinate_field(2, 0);
        let d2 = PolyVector::coordinate_field(2, 1);
        assert!(d1.schouten(&d2).is_zero());
        // two functions bracket to zero
        assert!(h.schouten(&h).is_zero());
    }

    #[test]
    fn kirillov_kostant_examples() {
        assert!(kirillov_kostant(&catalog("abelian2").unwrap()).is_zero());
        let aff = catalog("aff1").unwrap();
        let g = kirillov_kostant(&aff);
        assert_eq!(g, PolyVector::term(p("e2", &aff), &[0, 1]));
        let sl2 = catalog("sl2").unwrap();
        let g = kirillov_kostant(&sl2);
        let expected = PolyVector::term(p("h", &sl2), &[0, 2])
            .add(&PolyVector::term(p("2*e", &sl2), &[1, 0]))
            .add(&PolyVector::term(p("-2*f", &sl2), &[1, 2]));
        assert_eq!(g, expected);
    }

    #[test]
    fn gamma_gamma_vanishes_iff_jacobi() {
        for name in CATALOG {
            let alg = catalog(name).unwrap();
            let g = kirillov_kostant(&alg);
            assert!(g.schouten(&g).is_zero(), "{name}");
        }
        let q = int;
        let bad = LieAlgebra::from_brackets(
            "bad",
            vec!["e".into(), "h".into(), "f".into()],
            &[
                (0, 2, vec![q(0), q(1), q(0)]),
                (1, 0, vec![q(3), q(0), q(0)]),
                (1, 2, vec![q(0), q(0), q(-2)]),
            ],
        )
        .unwrap();
        assert!(!bad.validate().is_ok());
        let g = kirillov_kostant(&bad);
        assert!(!g.schouten(&g).is_zero());
    }

    #[test]
    fn poisson_differential_examples() {
        let sl2 = catalog("sl2").unwrap();
        let casimir = PolyVector::function(p("e*f + 1/4*h^2", &sl2));
        assert!(poisson_differential(&sl2, &casimir).is_zero());

        // on aff1, [gamma, x2] = sum_j {x_j, x2} d_j = x2 d_1
        let aff = catalog("aff1").unwrap();
        let x2 = PolyVector::function(p("e2", &aff));
        let dx2 = poisson_differential(&aff, &x2);
        assert_eq!(dx2, PolyVector::term(p("e2", &aff), &[0]));

        let ab = catalog("abelian2").unwrap();
        let a = PolyVector::term(p("x1^2*x2", &ab), &[1]);
        assert!(poisson_differential(&ab, &a).is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_basis() {
        for name in CATALOG {
            let alg = catalog(name).unwrap();
            let d = PoissonDifferential::new(&alg);
            let dim = alg.dim();
            for deg in 0..=dim {
                for key in wedge_keys(dim, deg) {
                    for m in monomials_up_to(dim, 4) {
                        let a = PolyVector::term(Polynomial::monomial(m.clone(), int(1)), &key);
                        let da = d.apply(&a);
                        assert!(d.apply(&da).is_zero(), "{name} {key:?} {m:?}");
                        // polynomial degree preserved
                        if !da.is_zero() {
                            let deg_m = crate::poly::degree(&m);
                            assert!(da.terms().values().all(|c| c.degree() == Some(deg_m)));
                        }
                    }
                }
            }
        }
    }

    fn arb_polyvector(dim: usize, degree: usize) -> impl Strategy<Value = PolyVector> {
        let keys = wedge_keys(dim, degree);
        let monos = monomials_up_to(dim, 2);
        prop::collection::vec(
            (0..keys.len().max(1), 0..monos.len(), -3i64..=3),
            0..4,
        )
        .prop_map(move |entries| {
            let mut v = PolyVector::zero(dim, degree);
            if keys.is_empty() {
                return v;
            }
            for (k, m, c) in entries {
                v.add_term(keys[k].clone(), Polynomial::monomial(monos[m].clone(), int(c)));
            }
            v
        })
    }

    fn arb_pair() -> impl Strategy<Value = (PolyVector, PolyVector)> {
        (0usize..=3, 0usize..=3).prop_flat_map(|(p, q)| (arb_polyvector(3, p), arb_polyvector(3, q)))
    }

    proptest! {
        #[test]
        fn graded_symmetry((a, b) in arb_pair()) {
            let (p, q) = (a.degree() as i64, b.degree() as i64);
            let lhs = a.schouten(&b);
            let e = ((p - 1) * (q - 1)).rem_euclid(2) as usize;
            let rhs = b.schouten(&a).scale(&(-scalar::sign(e)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn leibniz_for_poisson_differential((a, b) in arb_pair(), which in 0usize..3) {
            let alg = catalog(["heisenberg3", "sl2", "so3"][which]).unwrap();
            let d = PoissonDifferential::new(&alg);
            let lhs = d.apply(&a.wedge(&b));
            let rhs = d.apply(&a).wedge(&b).add(&a.wedge(&d.apply(&b)).scale(&scalar::sign(a.degree())));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_jacobi((a, b) in arb_pair(), c in arb_polyvector(3, 1)) {
            // [a,[b,c]] = [[a,b],c] + (-1)^{(|a|-1)(|b|-1)} [b,[a,c]]
            let (p, q) = (a.degree() as i64, b.degree() as i64);
            let lhs = a.schouten(&b.schouten(&c));
            let e = ((p - 1) * (q - 1)).rem_euclid(2) as usize;
            let rhs = a.schouten(&b).schouten(&c).add(&b.schouten(&a.schouten(&c)).scale(&scalar::sign(e)));
            if lhs.degree() == rhs.degree() {
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
