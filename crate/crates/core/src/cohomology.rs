//! Bounded-degree cohomology computations for both complexes and the
//! end-to-end verification of the Duflo isomorphism.
//!
//! The Poisson complex is graded by polynomial degree, so each `(p, d)` slice
//! is finite. The Chevalley-Eilenberg complex with adjoint `U(g)` coefficients
//! is only filtered; questions about it are answered inside the subspace of
//! cochains whose values have PBW filtration degree at most a search bound.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enveloping::{CeCochain, DufloMap, Enveloping, PbwElement};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{LinearSolver, Matrix};
use crate::poly::{self, Monomial, Polynomial};
use crate::polyvector::{wedge_keys, PoissonDifferential, PolyVector, WedgeKey};
use crate::scalar::Scalar;

/// Which complex a slice belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Complex {
    Poisson,
    Ce,
}

/// A finite window onto one of the complexes: basis of degree-`p` cochains
/// with polynomial degree `d` (Poisson) or PBW filtration `<= d` (CE).
#[derive(Clone, Debug)]
pub struct GradedSlice {
    pub complex: Complex,
    pub dim: usize,
    pub p: usize,
    pub d: usize,
    basis: Vec<(WedgeKey, Monomial)>,
    index: HashMap<(WedgeKey, Monomial), usize>,
}

impl GradedSlice {
    pub fn poisson(dim: usize, p: usize, d: usize) -> Self {
        let monos = poly::monomials_of_degree(dim, d);
        Self::build(Complex::Poisson, dim, p, d, &monos)
    }

    pub fn ce(dim: usize, p: usize, bound: usize) -> Self {
        let monos = poly::monomials_up_to(dim, bound);
        Self::build(Complex::Ce, dim, p, bound, &monos)
    }

    fn build(complex: Complex, dim: usize, p: usize, d: usize, monos: &[Monomial]) -> Self {
        let mut basis = Vec::new();
        for key in wedge_keys(dim, p) {
            for m in monos {
                basis.push((key.clone(), m.clone()));
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        GradedSlice {
            complex,
            dim,
            p,
            d,
            basis,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[(WedgeKey, Monomial)] {
        &self.basis
    }

    pub fn polyvector(&self, i: usize) -> PolyVector {
        let (key, m) = &self.basis[i];
        PolyVector::term(Polynomial::monomial(m.clone(), Scalar::one()), key)
    }

    pub fn cochain(&self, i: usize) -> CeCochain {
        let (key, m) = &self.basis[i];
        let mut c = CeCochain::zero(self.dim, self.p);
        c.add_term(key.clone(), PbwElement::monomial(m.clone(), Scalar::one()));
        c
    }

    fn lookup(&self, key: &[usize], m: &[u32]) -> Option<usize> {
        self.index.get(&(key.to_vec(), m.to_vec())).copied()
    }

    /// Coordinates of a polyvector, `None` if it leaves the slice.
    pub fn polyvector_coords(&self, a: &PolyVector) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.len()];
        for (key, f) in a.terms() {
            for (m, c) in f.terms() {
                v[self.lookup(key, m)?] = c.clone();
            }
        }
        Some(v)
    }

    pub fn polyvector_from(&self, v: &[Scalar]) -> PolyVector {
        let mut out = PolyVector::zero(self.dim, self.p);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.polyvector(i), c);
            }
        }
        out
    }

    /// Coordinates of a cochain, `None` if a value exceeds the filtration bound.
    pub fn cochain_coords(&self, c: &CeCochain) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.len()];
        for (key, u) in c.terms() {
            for (m, a) in u.terms() {
                v[self.lookup(key, m)?] = a.clone();
            }
        }
        Some(v)
    }

    pub fn cochain_from(&self, v: &[Scalar]) -> CeCochain {
        let mut out = CeCochain::zero(self.dim, self.p);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (key, m) = &self.basis[i];
                out.add_term(key.clone(), PbwElement::monomial(m.clone(), c.clone()));
            }
        }
        out
    }
}

fn poisson_matrix(pd: &PoissonDifferential, src: &GradedSlice, dst: &GradedSlice) -> Matrix {
    let cols: Vec<Vec<Scalar>> = (0..src.len())
        .map(|i| {
            dst.polyvector_coords(&pd.apply(&src.polyvector(i)))
                .expect("the Poisson differential preserves polynomial degree")
        })
        .collect();
    Matrix::from_columns(dst.len(), &cols)
}

/// `H^p` of the Poisson complex in polynomial degree `d`.
#[derive(Clone, Debug)]
pub struct PoissonCohomology {
    pub p: usize,
    pub d: usize,
    pub domain_dim: usize,
    pub kernel_dim: usize,
    pub outgoing_rank: usize,
    pub incoming_rank: usize,
    /// Kernel basis of the outgoing differential.
    pub cocycles: Vec<PolyVector>,
    /// Cocycles independent modulo the image, one per cohomology class.
    pub representatives: Vec<PolyVector>,
    /// Basis of the incoming slice, for coboundary checks.
    pub incoming_basis: Vec<PolyVector>,
    incoming_image: Matrix,
}

impl PoissonCohomology {
    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    /// Whether a cocycle of this slice is a Poisson coboundary.
    pub fn is_coboundary(&self, a: &PolyVector) -> bool {
        let slice = GradedSlice::poisson(a.dim(), self.p, self.d);
        let Some(v) = slice.polyvector_coords(a) else {
            return false;
        };
        LinearSolver::new(&self.incoming_image).solve(&v).is_some()
    }
}

pub fn poisson_cohomology(alg: &LieAlgebra, p: usize, d: usize) -> Result<PoissonCohomology> {
    let dim = alg.dim();
    if p > dim {
        return Err(Error::Parameter(format!(
            "polyvector degree {p} exceeds the dimension {dim}"
        )));
    }
    let pd = PoissonDifferential::new(alg);
    let here = GradedSlice::poisson(dim, p, d);
    let next = GradedSlice::poisson(dim, p + 1, d);
    let out_matrix = poisson_matrix(&pd, &here, &next);
    let kernel = out_matrix.nullspace();
    let (incoming_image, incoming_basis) = if p == 0 {
        (Matrix::zeros(here.len(), 0), Vec::new())
    } else {
        let prev = GradedSlice::poisson(dim, p - 1, d);
        let basis = (0..prev.len()).map(|i| prev.polyvector(i)).collect();
        (poisson_matrix(&pd, &prev, &here), basis)
    };
    let incoming_rank = incoming_image.rank();
    let mut span = incoming_image.clone();
    let mut rank = incoming_rank;
    let mut representatives = Vec::new();
    for v in &kernel {
        let trial = span.hstack(&Matrix::from_columns(here.len(), std::slice::from_ref(v)));
        let r = trial.rank();
        if r > rank {
            span = trial;
            rank = r;
            representatives.push(here.polyvector_from(v));
        }
    }
    let cocycles = kernel.iter().map(|v| here.polyvector_from(v)).collect();
    Ok(PoissonCohomology {
        p,
        d,
        domain_dim: here.len(),
        kernel_dim: kernel.len(),
        outgoing_rank: out_matrix.rank(),
        incoming_rank,
        cocycles,
        representatives,
        incoming_basis,
        incoming_image,
    })
}

/// Outcome of a bounded coboundary search.
#[derive(Clone, Debug, PartialEq)]
pub enum CoboundaryVerdict {
    /// `delta(y) = x`, re-verified exactly.
    Coboundary(CeCochain),
    /// Proven: there is nothing to solve against.
    NotCoboundary,
    /// No preimage with values of filtration at most `bound`.
    Inconclusive { bound: usize },
}

struct CeStep {
    src: GradedSlice,
    dst: GradedSlice,
    matrix: Matrix,
    solver: LinearSolver,
}

/// Coboundary searches in the CE complex at a fixed filtration bound, with
/// the elimination for each degree computed once and shared.
pub struct CoboundarySolver<'e, 'a> {
    env: &'e Enveloping<'a>,
    bound: usize,
    steps: Mutex<BTreeMap<usize, Arc<CeStep>>>,
}

impl<'e, 'a> CoboundarySolver<'e, 'a> {
    pub fn new(env: &'e Enveloping<'a>, bound: usize) -> Self {
        CoboundarySolver {
            env,
            bound,
            steps: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `delta` from degree `p - 1` into degree `p`, both at the bound.
    fn step(&self, p: usize) -> Arc<CeStep> {
        if let Some(s) = self.steps.lock().unwrap().get(&p) {
            return s.clone();
        }
        let dim = self.env.dim();
        let src = GradedSlice::ce(dim, p - 1, self.bound);
        let dst = GradedSlice::ce(dim, p, self.bound);
        let cols: Vec<Vec<Scalar>> = (0..src.len())
            .into_par_iter()
            .map(|i| {
                dst.cochain_coords(&self.env.ce_differential(&src.cochain(i)))
                    .expect("the adjoint differential preserves the PBW filtration")
            })
            .collect();
        let matrix = Matrix::from_columns(dst.len(), &cols);
        let solver = LinearSolver::new(&matrix);
        let step = Arc::new(CeStep {
            src,
            dst,
            matrix,
            solver,
        });
        self.steps.lock().unwrap().insert(p, step.clone());
        step
    }

    pub fn solve(&self, x: &CeCochain) -> Result<CoboundaryVerdict> {
        if !self.env.ce_differential(x).is_zero() {
            return Err(Error::Precondition(
                "coboundary search needs a cocycle".to_string(),
            ));
        }
        let p = x.degree();
        if x.is_zero() {
            return Ok(CoboundaryVerdict::Coboundary(CeCochain::zero(
                x.dim(),
                p.saturating_sub(1),
            )));
        }
        if p == 0 {
            return Ok(CoboundaryVerdict::NotCoboundary);
        }
        if x.filtration_degree() > self.bound {
            return Ok(CoboundaryVerdict::Inconclusive { bound: self.bound });
        }
        let step = self.step(p);
        let rhs = step
            .dst
            .cochain_coords(x)
            .expect("filtration already checked");
        match step.solver.solve(&rhs) {
            Some(sol) => {
                let y = step.src.cochain_from(&sol);
                if self.env.ce_differential(&y) != *x {
                    return Err(Error::Structural(
                        "coboundary certificate failed re-verification".to_string(),
                    ));
                }
                Ok(CoboundaryVerdict::Coboundary(y))
            }
            None => Ok(CoboundaryVerdict::Inconclusive { bound: self.bound }),
        }
    }

    /// Whether the given degree-`p` cochains are linearly independent modulo
    /// coboundaries of cochains within the bound. `None` if one of them
    /// exceeds the bound.
    pub fn independent_mod_image(&self, p: usize, cochains: &[CeCochain]) -> Option<bool> {
        let dim = self.env.dim();
        let (image, slice) = if p == 0 {
            let slice = GradedSlice::ce(dim, 0, self.bound);
            (Matrix::zeros(slice.len(), 0), slice)
        } else {
            let step = self.step(p);
            (step.matrix.clone(), step.dst.clone())
        };
        let cols: Vec<Vec<Scalar>> = cochains
            .iter()
            .map(|c| slice.cochain_coords(c))
            .collect::<Option<_>>()?;
        let base = image.rank();
        let extended = image.hstack(&Matrix::from_columns(slice.len(), &cols));
        Some(extended.rank() == base + cochains.len())
    }
}

pub fn ce_coboundary_solve(
    x: &CeCochain,
    alg: &LieAlgebra,
    bound: usize,
) -> Result<CoboundaryVerdict> {
    let env = Enveloping::new(alg);
    CoboundarySolver::new(&env, bound).solve(x)
}

/// Bounds for [`verify_theorem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub p_max: usize,
    pub d_max: usize,
    pub search_bound: usize,
}

impl VerifyConfig {
    /// `p_max = dim`, `d_max = 3`, search bound `d_max + 2`.
    pub fn defaults(alg: &LieAlgebra) -> Self {
        VerifyConfig {
            p_max: alg.dim(),
            d_max: 3,
            search_bound: 5,
        }
    }

    /// Truncation degree of the Duflo operator: enough for wedge products of
    /// two degree-`d_max` classes.
    pub fn duflo_truncation(&self) -> usize {
        self.search_bound.max(2 * self.d_max)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: usize,
    pub d: usize,
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InconclusiveCase {
    pub p: usize,
    pub d: usize,
    pub input: String,
    pub bound: usize,
}

/// At most this many witnesses are kept per check; counts stay exact.
const MAX_WITNESSES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub name: String,
    /// Informational checks never affect the overall outcome.
    pub gating: bool,
    pub status: Status,
    pub cases: usize,
    pub failed_cases: usize,
    pub inconclusive_cases: usize,
    pub failures: Vec<Witness>,
    pub inconclusive: Vec<InconclusiveCase>,
}

impl CheckReport {
    fn new(id: &str, name: &str, gating: bool) -> Self {
        CheckReport {
            id: id.to_string(),
            name: name.to_string(),
            gating,
            status: Status::Pass,
            cases: 0,
            failed_cases: 0,
            inconclusive_cases: 0,
            failures: Vec::new(),
            inconclusive: Vec::new(),
        }
    }

    fn record(&mut self, outcome: CaseOutcome) {
        self.cases += 1;
        match outcome {
            CaseOutcome::Pass => {}
            CaseOutcome::Fail(w) => {
                self.failed_cases += 1;
                if self.failures.len() < MAX_WITNESSES {
                    self.failures.push(w);
                }
            }
            CaseOutcome::Inconclusive(c) => {
                self.inconclusive_cases += 1;
                if self.inconclusive.len() < MAX_WITNESSES {
                    self.inconclusive.push(c);
                }
            }
        }
    }

    fn finish(mut self) -> Self {
        self.status = if self.failed_cases > 0 {
            Status::Fail
        } else if self.inconclusive_cases > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        self
    }
}

enum CaseOutcome {
    Pass,
    Fail(Witness),
    Inconclusive(InconclusiveCase),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceDims {
    pub p: usize,
    pub d: usize,
    pub domain: usize,
    pub kernel: usize,
    pub incoming_rank: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub p_max: usize,
    pub d_max: usize,
    pub search_bound: usize,
    pub duflo_truncation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub informational_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub algebra: String,
    pub dim: usize,
    pub config: ReportConfig,
    pub cohomology: Vec<SliceDims>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// True when no gating check failed.
    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Duflo verification report ({} {})", self.tool, self.version);
        let _ = writeln!(s, "algebra: {} (dim {})", self.algebra, self.dim);
        let c = &self.config;
        let _ = writeln!(
            s,
            "bounds: p_max={} d_max={} search_bound={} duflo_truncation={}",
            c.p_max, c.d_max, c.search_bound, c.duflo_truncation
        );
        let _ = writeln!(s, "Poisson cohomology dimensions:");
        s.push_str(&render_dims_table(&self.cohomology));
        for check in &self.checks {
            let tag = if check.gating { "" } else { " (informational)" };
            let _ = writeln!(
                s,
                "[{}] {}{}: {} ({} cases, {} failed, {} inconclusive)",
                check.id,
                check.name,
                tag,
                check.status.as_str(),
                check.cases,
                check.failed_cases,
                check.inconclusive_cases
            );
            for w in &check.failures {
                let _ = writeln!(s, "    counterexample p={} d={}: {} ({})", w.p, w.d, w.input, w.detail);
            }
            for i in &check.inconclusive {
                let _ = writeln!(s, "    inconclusive p={} d={}: {} (bound {})", i.p, i.d, i.input, i.bound);
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} inconclusive",
            m.passed, m.failed, m.inconclusive
        );
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

/// Rows `p`, columns `d`.
pub fn render_dims_table(dims: &[SliceDims]) -> String {
    let p_max = dims.iter().map(|x| x.p).max().unwrap_or(0);
    let d_max = dims.iter().map(|x| x.d).max().unwrap_or(0);
    let mut s = String::from("  p\\d");
    for d in 0..=d_max {
        let _ = write!(s, "{d:>5}");
    }
    s.push('\n');
    for p in 0..=p_max {
        let _ = write!(s, "{p:>5}");
        for d in 0..=d_max {
            match dims.iter().find(|x| x.p == p && x.d == d) {
                Some(x) => {
                    let _ = write!(s, "{:>5}", x.dimension);
                }
                None => s.push_str("    -"),
            }
        }
        s.push('\n');
    }
    s
}

/// Cohomology dimensions for `p <= p_max`, `d <= d_max`.
pub fn poisson_cohomology_table(
    alg: &LieAlgebra,
    p_max: usize,
    d_max: usize,
) -> Result<Vec<SliceDims>> {
    let p_max = p_max.min(alg.dim());
    let cells: Vec<(usize, usize)> = (0..=p_max)
        .flat_map(|p| (0..=d_max).map(move |d| (p, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(p, d)| poisson_cohomology(alg, p, d).map(|h| slice_dims(&h)))
        .collect()
}

fn slice_dims(h: &PoissonCohomology) -> SliceDims {
    SliceDims {
        p: h.p,
        d: h.d,
        domain: h.domain_dim,
        kernel: h.kernel_dim,
        incoming_rank: h.incoming_rank,
        dimension: h.dimension(),
    }
}

/// Runs the five checks relating the Poisson and CE complexes through the
/// coefficientwise Duflo map `D`:
///
/// * `i` strict chain map `delta D = D d_gamma` on slice bases (informational);
/// * `ii` `D` sends Poisson cocycles to CE cocycles;
/// * `iii` `D` sends Poisson coboundaries to certified CE coboundaries;
/// * `iv` cup defects `D(a ^ b) - D(a) u D(b)` of representatives are
///   certified CE coboundaries;
/// * `v` `D` is injective on the tested cohomology.
pub fn verify_theorem(alg: &LieAlgebra, config: VerifyConfig) -> Result<VerificationReport> {
    if config.d_max == 0 && config.p_max == 0 {
        return Err(Error::Parameter("bounds must be positive".to_string()));
    }
    let dim = alg.dim();
    let labels = alg.labels();
    let p_top = config.p_max.min(dim);
    let duflo_map = DufloMap::new(alg, config.duflo_truncation());
    let duflo = &duflo_map;
    let env = duflo.enveloping();
    let solver = CoboundarySolver::new(env, config.search_bound);
    let poisson = PoissonDifferential::new(alg);
    let pd = &poisson;

    let cells: Vec<(usize, usize)> = (0..=p_top)
        .flat_map(|p| (0..=config.d_max).map(move |d| (p, d)))
        .collect();
    let slices: Vec<PoissonCohomology> = cells
        .par_iter()
        .map(|&(p, d)| poisson_cohomology(alg, p, d))
        .collect::<Result<_>>()?;
    let show = |a: &PolyVector| a.render(labels);

    // (i) strict chain map
    let mut chain = CheckReport::new("i", "strict chain map", false);
    let outcomes: Vec<CaseOutcome> = cells
        .par_iter()
        .filter(|&&(p, _)| p < p_top)
        .flat_map_iter(|&(p, d)| {
            let slice = GradedSlice::poisson(dim, p, d);
            (0..slice.len())
                .map(|i| {
                    let a = slice.polyvector(i);
                    let left = env.ce_differential(&duflo.extension(&a)?);
                    let right = duflo.extension(&pd.apply(&a))?;
                    Ok(if left == right {
                        CaseOutcome::Pass
                    } else {
                        CaseOutcome::Fail(Witness {
                            p,
                            d,
                            input: show(&a),
                            detail: "delta(D a) differs from D(d_gamma a)".to_string(),
                        })
                    })
                })
                .collect::<Vec<Result<CaseOutcome>>>()
        })
        .collect::<Result<_>>()?;
    outcomes.into_iter().for_each(|o| chain.record(o));

    // (ii) cocycles
    let mut cocycles = CheckReport::new("ii", "cocycle preservation", true);
    let outcomes: Vec<CaseOutcome> = slices
        .par_iter()
        .flat_map_iter(|h| {
            h.cocycles.iter().map(move |z| {
                let image = duflo.extension(z)?;
                let dz = env.ce_differential(&image);
                Ok(if dz.is_zero() {
                    CaseOutcome::Pass
                } else {
                    CaseOutcome::Fail(Witness {
                        p: h.p,
                        d: h.d,
                        input: show(z),
                        detail: format!("delta(D z) = {}", dz.render(labels)),
                    })
                })
            })
        })
        .collect::<Result<_>>()?;
    outcomes.into_iter().for_each(|o| cocycles.record(o));

    // (iii) coboundaries
    let mut coboundaries = CheckReport::new("iii", "coboundary preservation", true);
    let outcomes: Vec<CaseOutcome> = slices
        .par_iter()
        .flat_map_iter(|h| {
            let solver = &solver;
            h.incoming_basis.iter().map(move |b| {
                let x = duflo.extension(&pd.apply(b))?;
                let input = format!("d_gamma({})", show(b));
                verdict_outcome(solver.solve(&x), h.p, h.d, input)
            })
        })
        .collect::<Result<_>>()?;
    outcomes.into_iter().for_each(|o| coboundaries.record(o));

    // (iv) cup compatibility
    let mut cup = CheckReport::new("iv", "cup compatibility", true);
    let reps: Vec<(usize, usize, &PolyVector)> = slices
        .iter()
        .flat_map(|h| h.representatives.iter().map(move |r| (h.p, h.d, r)))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..reps.len())
        .flat_map(|i| (0..reps.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| reps[i].0 + reps[j].0 <= p_top)
        .collect();
    let outcomes: Vec<CaseOutcome> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (p1, d1, a) = reps[i];
            let (p2, d2, b) = reps[j];
            let wedge = duflo.extension(&a.wedge(b))?;
            let product = env.cup_ce(&duflo.extension(a)?, &duflo.extension(b)?);
            let defect = wedge.sub(&product);
            let input = format!("({}) ^ ({})", show(a), show(b));
            let (p, d) = (p1 + p2, d1 + d2);
            if !env.ce_differential(&defect).is_zero() {
                return Ok(CaseOutcome::Fail(Witness {
                    p,
                    d,
                    input,
                    detail: "cup defect is not a cocycle".to_string(),
                }));
            }
            verdict_outcome(solver.solve(&defect), p, d, input)
        })
        .collect::<Result<_>>()?;
    outcomes.into_iter().for_each(|o| cup.record(o));

    // (v) injectivity
    let mut injective = CheckReport::new("v", "injectivity on cohomology", true);
    let outcomes: Vec<CaseOutcome> = slices
        .par_iter()
        .filter(|h| !h.representatives.is_empty())
        .map(|h| {
            let images: Vec<CeCochain> = h
                .representatives
                .iter()
                .map(|r| duflo.extension(r))
                .collect::<Result<_>>()?;
            let input = format!("{} classes of H^({},{})", images.len(), h.p, h.d);
            Ok(match solver.independent_mod_image(h.p, &images) {
                Some(true) => CaseOutcome::Pass,
                Some(false) => CaseOutcome::Fail(Witness {
                    p: h.p,
                    d: h.d,
                    input,
                    detail: "a nonzero class maps to a coboundary".to_string(),
                }),
                None => CaseOutcome::Inconclusive(InconclusiveCase {
                    p: h.p,
                    d: h.d,
                    input,
                    bound: config.search_bound,
                }),
            })
        })
        .collect::<Result<_>>()?;
    outcomes.into_iter().for_each(|o| injective.record(o));

    let checks: Vec<CheckReport> = [chain, cocycles, coboundaries, cup, injective]
        .into_iter()
        .map(CheckReport::finish)
        .collect();
    let gating = checks.iter().filter(|c| c.gating);
    let summary = Summary {
        passed: gating.clone().filter(|c| c.status == Status::Pass).count(),
        failed: gating.clone().filter(|c| c.status == Status::Fail).count(),
        inconclusive: gating.filter(|c| c.status == Status::Inconclusive).count(),
        informational_failures: checks
            .iter()
            .filter(|c| !c.gating && c.status == Status::Fail)
            .count(),
    };
    let notes = vec![
        format!(
            "CE searches use cochains with PBW filtration degree <= {} (default d_max + 2)",
            config.search_bound
        ),
        "check i is informational; ii-v decide the outcome".to_string(),
    ];
    Ok(VerificationReport {
        tool: "duflo".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        algebra: alg.name().to_string(),
        dim,
        config: ReportConfig {
            p_max: config.p_max,
            d_max: config.d_max,
            search_bound: config.search_bound,
            duflo_truncation: config.duflo_truncation(),
        },
        cohomology: slices.iter().map(slice_dims).collect(),
        checks,
        summary,
        notes,
    })
}

fn verdict_outcome(
    verdict: Result<CoboundaryVerdict>,
    p: usize,
    d: usize,
    input: String,
) -> Result<CaseOutcome> {
    Ok(match verdict {
        Ok(CoboundaryVerdict::Coboundary(_)) => CaseOutcome::Pass,
        Ok(CoboundaryVerdict::NotCoboundary) => CaseOutcome::Fail(Witness {
            p,
            d,
            input,
            detail: "nonzero 0-cochain cannot be a coboundary".to_string(),
        }),
        Ok(CoboundaryVerdict::Inconclusive { bound }) => {
            CaseOutcome::Inconclusive(InconclusiveCase { p, d, input, bound })
        }
        Err(Error::Precondition(msg)) => CaseOutcome::Fail(Witness {
            p,
            d,
            input,
            detail: msg,
        }),
        Err(e) => return Err(e),
    })
}
