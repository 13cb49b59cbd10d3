//! Finite-dimensional Lie algebras given by rational structure constants.
//!
//! The basis declaration order is also the PBW order used by
//! [`crate::enveloping`].

use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// The full table is stored (both `i < j` and `i > j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    c: Vec<Vec<Vec<Scalar>>>,
}

/// Outcome of [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum Violation {
    /// `c[i][j][k] != -c[j][i][k]`
    Antisymmetry { i: usize, j: usize, k: usize },
    /// Jacobi fails on `(e_i, e_j, e_k)` in the `e_l` component.
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        value: String,
    },
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // indices are shown 1-based, as in the input format
        match self {
            Violation::Antisymmetry { i, j, k } => write!(
                f,
                "antisymmetry: c[{}][{}][{}] != -c[{}][{}][{}]",
                i + 1,
                j + 1,
                k + 1,
                j + 1,
                i + 1,
                k + 1
            ),
            Violation::Jacobi { i, j, k, l, value } => write!(
                f,
                "jacobi: ({}, {}, {}) has component {} equal to {}",
                i + 1,
                j + 1,
                k + 1,
                l + 1,
                value
            ),
        }
    }
}

impl LieAlgebra {
    /// Builds an algebra from a full table without checking the Lie axioms.
    /// Use [`LieAlgebra::validate`] for that.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        c: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Structural("a Lie algebra needs dim >= 1".into()));
        }
        if c.len() != dim
            || c.iter().any(|row| row.len() != dim)
            || c.iter().flatten().any(|col| col.len() != dim)
        {
            return Err(Error::Structural(format!(
                "structure constant table does not have shape {dim}x{dim}x{dim}"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Structural(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(LieAlgebra {
            name: name.into(),
            labels,
            c,
        })
    }

    /// Builds an algebra from brackets `[e_i, e_j]` for `i != j` (0-based),
    /// filling in the antisymmetric partner. Pairs not mentioned are zero.
    pub fn from_brackets(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: &[(usize, usize, Vec<Scalar>)],
    ) -> Result<Self> {
        let dim = labels.len();
        let mut c = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(Error::Structural(format!(
                    "bracket index ({}, {}) out of range for dimension {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::Structural(format!(
                    "bracket ({}, {}) has {} coefficients, expected {dim}",
                    i + 1,
                    j + 1,
                    coeffs.len()
                )));
            }
            if i == j {
                if coeffs.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Structural(format!(
                        "[e_{0}, e_{0}] must vanish",
                        i + 1
                    )));
                }
                continue;
            }
            for (k, x) in coeffs.iter().enumerate() {
                c[i][j][k] = x.clone();
                c[j][i][k] = -x.clone();
            }
        }
        Self::from_table(name, labels, c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c[i][j][k]`
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[i][j][k]
    }

    /// Coefficients of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.c[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut violations = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        violations.push(Violation::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = Scalar::zero();
                        for m in 0..d {
                            s += &self.c[i][j][m] * &self.c[m][k][l];
                            s += &self.c[j][k][m] * &self.c[m][i][l];
                            s += &self.c[k][i][m] * &self.c[m][j][l];
                        }
                        if !s.is_zero() {
                            violations.push(Violation::Jacobi {
                                i,
                                j,
                                k,
                                l,
                                value: scalar::render(&s),
                            });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Matrix of `ad(sum_i coeffs[i] e_i)`, with `M[k][j]` the `e_k` component
    /// of `[x, e_j]`.
    pub fn ad_matrix(&self, coeffs: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        let d = self.dim();
        if coeffs.len() != d {
            return Err(Error::Structural(format!(
                "ad_matrix expects {d} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut m = vec![vec![Scalar::zero(); d]; d];
        for (i, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    m[k][j] += a * &self.c[i][j][k];
                }
            }
        }
        Ok(m)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        file.into_algebra()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let d = self.dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                if self.c[i][j].iter().any(|x| !x.is_zero()) {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs: self.c[i][j].iter().map(scalar::render).collect(),
                    });
                }
            }
        }
        let file = AlgebraFile {
            name: self.name.clone(),
            labels: self.labels.clone(),
            brackets,
        };
        serde_json::to_string_pretty(&file).expect("algebra serializes")
    }
}

/// On-disk algebra description. Indices are 1-based; omitted pairs are zero.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

impl AlgebraFile {
    /// Entries are written into the table verbatim, so an inconsistent pair
    /// `(i, j)` / `(j, i)` is kept and reported by `validate`.
    pub fn into_algebra(self) -> Result<LieAlgebra> {
        let dim = self.labels.len();
        if dim == 0 {
            return Err(Error::Structural("labels must be non-empty".into()));
        }
        let mut c = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
        let mut explicit = vec![vec![false; dim]; dim];
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > dim || b.j > dim {
                return Err(Error::Structural(format!(
                    "bracket index ({}, {}) out of range 1..={dim}",
                    b.i, b.j
                )));
            }
            if b.coeffs.len() != dim {
                return Err(Error::Structural(format!(
                    "bracket ({}, {}) has {} coefficients, expected {dim}",
                    b.i,
                    b.j,
                    b.coeffs.len()
                )));
            }
            let (i, j) = (b.i - 1, b.j - 1);
            for (k, s) in b.coeffs.iter().enumerate() {
                c[i][j][k] = scalar::parse(s)?;
            }
            explicit[i][j] = true;
        }
        for i in 0..dim {
            for j in 0..dim {
                if explicit[i][j] && !explicit[j][i] {
                    for k in 0..dim {
                        c[j][i][k] = -c[i][j][k].clone();
                    }
                }
            }
        }
        LieAlgebra::from_table(self.name, self.labels, c)
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG: [&str; 5] = ["abelian2", "aff1", "heisenberg3", "sl2", "so3"];

/// The built-in test algebras.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let q = scalar::int;
    let labels = |ls: &[&str]| ls.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let alg = match name {
        "abelian2" => LieAlgebra::from_brackets(name, labels(&["x1", "x2"]), &[])?,
        "aff1" => LieAlgebra::from_brackets(
            name,
            labels(&["e1", "e2"]),
            &[(0, 1, vec![q(0), q(1)])],
        )?,
        "heisenberg3" => LieAlgebra::from_brackets(
            name,
            labels(&["x", "y", "z"]),
            &[(0, 1, vec![q(0), q(0), q(1)])],
        )?,
        // basis (e, h, f)
        "sl2" => LieAlgebra::from_brackets(
            name,
            labels(&["e", "h", "f"]),
            &[
                (0, 2, vec![q(0), q(1), q(0)]),
                (1, 0, vec![q(2), q(0), q(0)]),
                (1, 2, vec![q(0), q(0), q(-2)]),
            ],
        )?,
        "so3" => LieAlgebra::from_brackets(
            name,
            labels(&["e1", "e2", "e3"]),
            &[
                (0, 1, vec![q(0), q(0), q(1)]),
                (1, 2, vec![q(1), q(0), q(0)]),
                (2, 0, vec![q(0), q(1), q(0)]),
            ],
        )?,
        other => return Err(Error::Lookup(format!("no catalog algebra named {other:?}"))),
    };
    debug_assert!(alg.validate().is_ok());
    Ok(alg)
}
