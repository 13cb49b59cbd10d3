//! Graph weights: exact Bernoulli endpoints and Monte-Carlo integration over
//! configuration spaces of points in the upper half-plane.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{KGraph, Vertex};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
fn bernoulli_numbers(n: usize) -> Vec<Scalar> {
    let mut b = vec![Scalar::one()];
    for k in 1..=n {
        let mut acc = Scalar::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += scalar::binomial(k + 1, j) * bj;
        }
        b.push(-acc / scalar::binomial(k + 1, k));
    }
    b
}

/// `b_n(x)`
pub fn bernoulli_polynomial(n: usize, x: &Scalar) -> Scalar {
    let b = bernoulli_numbers(n);
    let mut acc = Scalar::zero();
    let mut pow = Scalar::one();
    // sum over k from n down to 0 of C(n,k) B_k x^(n-k)
    for k in (0..=n).rev() {
        acc += scalar::binomial(n, k) * &b[k] * &pow;
        pow *= x;
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BernoulliWeight {
    pub p: usize,
    /// Deployed Bernoulli graph at `theta = 0`.
    pub at_zero: Scalar,
    /// Deployed Bernoulli graph at `theta = pi`.
    pub at_pi: Scalar,
    /// `at_zero - at_pi`, the weight of the snail with `p` aerial vertices.
    pub difference: Scalar,
}

pub fn bernoulli_weight(p: usize) -> BernoulliWeight {
    let c = scalar::sign(p + 1) / scalar::factorial(p + 1);
    let at_zero = &c * bernoulli_polynomial(p + 1, &Scalar::zero());
    let at_pi = &c * bernoulli_polynomial(p + 1, &Scalar::one());
    let difference = &at_zero - &at_pi;
    BernoulliWeight {
        p,
        at_zero,
        at_pi,
        difference,
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct WeightEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

const BLOCK: u64 = 4096;

// Sign making the wedge graph's weight positive with coordinates ordered
// (x_1, y_1, ..., x_n, y_n, t_2, ..., t_{m-1}).
const ORIENTATION: f64 = 1.0;

/// How one coordinate moves one vertex.
#[derive(Clone, Copy)]
enum Coord {
    X(usize),
    Y(usize),
    Angle(usize),
    Ground(usize),
}

struct Layout {
    coords: Vec<Coord>,
    m: usize,
    n: usize,
}

impl Layout {
    fn new(n: usize, m: usize) -> Layout {
        let mut coords = Vec::new();
        match m {
            0 => {
                // aerial 1 pinned at i
                for a in 1..n {
                    coords.push(Coord::X(a));
                    coords.push(Coord::Y(a));
                }
            }
            1 => {
                // ground 1 at 0, aerial 1 on the unit semicircle
                if n > 0 {
                    coords.push(Coord::Angle(0));
                }
                for a in 1..n {
                    coords.push(Coord::X(a));
                    coords.push(Coord::Y(a));
                }
            }
            _ => {
                for a in 0..n {
                    coords.push(Coord::X(a));
                    coords.push(Coord::Y(a));
                }
                for l in 1..m - 1 {
                    coords.push(Coord::Ground(l));
                }
            }
        }
        Layout { coords, m, n }
    }

    /// Positions for a point of the unit cube, with the Jacobian of the map.
    fn place(&self, u: &[f64], aerial: &mut [Complex64], ground: &mut [f64]) -> f64 {
        let mut jac = 1.0;
        match self.m {
            0 => aerial[0] = Complex64::new(0.0, 1.0),
            1 => ground[0] = 0.0,
            m => {
                ground[0] = 0.0;
                ground[m - 1] = 1.0;
            }
        }
        let mut middle = Vec::new();
        for (c, &t) in self.coords.iter().zip(u) {
            match *c {
                Coord::X(a) => {
                    let x = (PI * (t - 0.5)).tan();
                    jac *= PI * (1.0 + x * x);
                    aerial[a].re = x;
                }
                Coord::Y(a) => {
                    let y = (PI * t / 2.0).tan();
                    jac *= PI / 2.0 * (1.0 + y * y);
                    aerial[a].im = y;
                }
                Coord::Angle(a) => {
                    jac *= PI;
                    aerial[a] = Complex64::from_polar(1.0, PI * t);
                }
                Coord::Ground(_) => middle.push(t),
            }
        }
        if !middle.is_empty() {
            // uniform on the ordered simplex
            middle.sort_by(f64::total_cmp);
            for (k, t) in middle.iter().enumerate() {
                ground[k + 1] = *t;
            }
            jac /= (1..=middle.len()).map(|k| k as f64).product::<f64>();
        }
        jac
    }

    fn velocity(&self, c: Coord, aerial: &[Complex64]) -> (Vertex, Complex64) {
        match c {
            Coord::X(a) => (Vertex::Aerial(a), Complex64::new(1.0, 0.0)),
            Coord::Y(a) => (Vertex::Aerial(a), Complex64::new(0.0, 1.0)),
            Coord::Angle(a) => (Vertex::Aerial(a), Complex64::i() * aerial[a]),
            Coord::Ground(l) => (Vertex::Ground(l), Complex64::new(1.0, 0.0)),
        }
    }
}

fn integrand(g: &KGraph, layout: &Layout, u: &[f64], aerial: &mut [Complex64], ground: &mut [f64]) -> f64 {
    let jac = layout.place(u, aerial, ground);
    let e = g.edges().len();
    let pos = |v: Vertex| match v {
        Vertex::Aerial(a) => aerial[a],
        Vertex::Ground(l) => Complex64::new(ground[l], 0.0),
    };
    let mut mat = DMatrix::<f64>::zeros(e, e);
    for (col, &c) in layout.coords.iter().enumerate() {
        let (moved, dz) = layout.velocity(c, aerial);
        for (row, &(s, t)) in g.edges().iter().enumerate() {
            let (p, q) = (pos(Vertex::Aerial(s)), pos(t));
            let dp = if moved == Vertex::Aerial(s) { dz } else { Complex64::zero() };
            let dq = if moved == t { dz } else { Complex64::zero() };
            // d Arg(w) = Im(dw / w)
            let a = ((dq - dp) / (q - p)).im;
            let b = ((dq - dp.conj()) / (q - p.conj())).im;
            mat[(row, col)] = a - b;
        }
    }
    ORIENTATION * mat.determinant() * jac / (2.0 * PI).powi(e as i32)
}

/// Monte-Carlo estimate of the weight integral of `g`. Graphs without
/// `2n + m - 2` edges get an exact zero.
pub fn weight_mc(g: &KGraph, samples: u64, seed: u64) -> Result<WeightEstimate> {
    if samples == 0 {
        return Err(Error::Parameter("sample count must be positive".into()));
    }
    if !g.has_weight_dimension() {
        return Ok(WeightEstimate {
            mean: 0.0,
            stderr: 0.0,
            samples: 0,
            seed,
        });
    }
    let layout = Layout::new(g.aerial(), g.ground());
    if layout.coords.is_empty() {
        // the configuration space is a point
        return Ok(WeightEstimate {
            mean: 1.0,
            stderr: 0.0,
            samples: 0,
            seed,
        });
    }
    let blocks = samples.div_ceil(BLOCK);
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut u = vec![0.0; layout.coords.len()];
            let mut aerial = vec![Complex64::zero(); layout.n];
            let mut ground = vec![0.0; layout.m];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for x in u.iter_mut() {
                    *x = rng.gen::<f64>();
                }
                let v = integrand(g, &layout, &u, &mut aerial, &mut ground);
                if v.is_finite() {
                    s += v;
                    s2 += v * v;
                }
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let n = samples as f64;
    let mean = s / n;
    let var = if samples > 1 { (s2 - n * mean * mean) / (n - 1.0) } else { 0.0 };
    Ok(WeightEstimate {
        mean,
        stderr: (var.max(0.0) / n).sqrt(),
        samples,
        seed,
    })
}
