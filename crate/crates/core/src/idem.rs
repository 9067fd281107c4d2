//! Structure of the center: minimal polynomials, orthogonal idempotents, and
//! a description of the center as a product of local algebras.

use std::fmt;

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::center::CenterBasis;
use crate::error::{Error, Result};
use crate::factor::{factor_squarefree, FactorKind};
use crate::matrix::Matrix;
use crate::scalar::{squarefree_class, Field, Radicand, Scalar};
use crate::upoly::UPoly;

/// Evidence attached to results that stop short of a full splitting.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A quadratic factor splits only after adjoining `sqrt(radicand)`.
    NeedsExtension { radicand: String, factor: String },
    /// An irreducible factor of degree at least 3; quadratic extensions cannot split it.
    IrreducibleFactor {
        polynomial: String,
        degree: usize,
        proven: bool,
        note: String,
    },
    /// A nonzero nilpotent element of the center.
    NilpotentWitness { matrix: Vec<Vec<String>> },
    /// A block whose center did not split further and is not known to be a field.
    Unresolved { dim: usize, note: String },
}

impl Certificate {
    pub(crate) fn nilpotent(m: &Matrix) -> Certificate {
        Certificate::NilpotentWitness {
            matrix: m
                .row_vectors()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Semisimplicity {
    Squarefree,
    /// `s(R)` for the squarefree part `s` of the minimal polynomial of `R`.
    NilpotentWitness(Matrix),
}

/// One primitive piece of the splitting.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub idempotent: Matrix,
    pub rank: usize,
    /// Monic irreducible factor of the minimal polynomial.
    pub residue: UPoly,
    pub multiplicity: u32,
    /// Dimension of `ε Z`.
    pub dim: usize,
    pub kind: FactorKind,
    /// Whether `ε Z` is generated by the random element, so the piece is known to be local.
    pub generated: bool,
}

#[derive(Clone, Debug)]
pub struct IdempotentSplit {
    /// The field the idempotents live in, possibly extended.
    pub field: Field,
    pub adjoined: Vec<i64>,
    pub element: Matrix,
    pub min_poly: UPoly,
    pub factors: Vec<LocalFactor>,
    pub semisimple: Semisimplicity,
    pub extension_requests: Vec<Certificate>,
}

impl IdempotentSplit {
    pub fn idempotents(&self) -> Vec<&Matrix> {
        self.factors.iter().map(|f| &f.idempotent).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.rank).collect()
    }

    /// Whether every piece is known to be local, so the split is maximal over `field`.
    pub fn is_complete(&self) -> bool {
        self.factors.iter().all(|f| f.generated)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SplitOptions {
    pub max_adjoin: usize,
    pub retries: usize,
    pub seed: u64,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            max_adjoin: 0,
            retries: 8,
            seed: 0,
        }
    }
}

/// Monic polynomial of least degree annihilating `x`.
pub fn min_poly(x: &Matrix, field: &Field) -> UPoly {
    let n = x.rows();
    let mut powers = vec![Matrix::identity(n, field).vectorize()];
    let mut cur = Matrix::identity(n, field);
    loop {
        cur = &cur * x;
        let target = cur.vectorize();
        if let Some(c) = Matrix::from_columns(&powers).solve(&target, field) {
            let mut coeffs: Vec<Scalar> = c.iter().map(|v| -v).collect();
            coeffs.push(field.one());
            return UPoly::new(coeffs, field);
        }
        powers.push(target);
    }
}

/// True iff `rank(E) = 1` and `trace(E) = 1`.
pub fn is_rank1_trace1(e: &Matrix, field: &Field) -> bool {
    e.rank(field) == 1 && field.eq(&e.trace(), &field.one())
}

/// Structure constants `c[i][j][k]` with `Xᵢ Xⱼ = Σₖ c[i][j][k] Xₖ`.
pub fn mult_table(z: &CenterBasis) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let b = z.basis();
    b.iter()
        .map(|x| {
            b.iter()
                .map(|y| z.coordinates(&(x * y)).ok_or(Error::NotClosed))
                .collect()
        })
        .collect()
}

fn span_dim(z: &CenterBasis, e: &Matrix, field: &Field) -> usize {
    let cols: Vec<Vec<Scalar>> = z.basis().iter().map(|x| (e * x).vectorize()).collect();
    Matrix::from_columns(&cols).rank(field)
}

fn random_coords(z: &CenterBasis, rng: &mut ChaCha8Rng, field: &Field) -> Vec<Scalar> {
    loop {
        let c: Vec<i64> = (0..z.dim()).map(|_| rng.random_range(-5..=5)).collect();
        if z.dim() == 1 || c[1..].iter().any(|&v| v != 0) {
            return c.into_iter().map(|v| field.int(v)).collect();
        }
    }
}

fn trivial_split(z: &CenterBasis, field: &Field) -> IdempotentSplit {
    let n = z.n();
    let id = Matrix::identity(n, field);
    IdempotentSplit {
        field: field.clone(),
        adjoined: Vec::new(),
        element: id.clone(),
        min_poly: UPoly::linear(&field.one(), field),
        factors: vec![LocalFactor {
            idempotent: id,
            rank: n,
            residue: UPoly::linear(&field.one(), field),
            multiplicity: 1,
            dim: z.dim(),
            kind: FactorKind::Linear,
            generated: z.dim() == 1,
        }],
        semisimple: Semisimplicity::Squarefree,
        extension_requests: Vec::new(),
    }
}

/// Complete orthogonal idempotents of the center from the factorization of
/// the minimal polynomial of a random element, retried with fresh elements
/// until the element generates the center.
pub fn split_idempotents(z: &CenterBasis, opts: &SplitOptions) -> IdempotentSplit {
    let field = z.field();
    if z.dim() <= 1 {
        return trivial_split(z, field);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<IdempotentSplit> = None;
    for _ in 0..opts.retries.max(1) {
        let coords = random_coords(z, &mut rng, field);
        let r = z.combine(&coords);
        let split = if field.is_exact() {
            split_exact(z, r, field, opts.max_adjoin)
        } else {
            split_float(z, r, field)
        };
        let done = split.is_complete();
        let better = match &best {
            None => true,
            Some(b) => {
                (split.factors.len(), split.is_complete()) > (b.factors.len(), b.is_complete())
            }
        };
        if better {
            best = Some(split);
        }
        if done {
            break;
        }
    }
    best.expect("at least one attempt")
}

fn split_exact(z: &CenterBasis, r: Matrix, field: &Field, max_adjoin: usize) -> IdempotentSplit {
    let mu = min_poly(&r, field);
    let s = mu.squarefree_part(field);
    let semisimple = if s.degree() < mu.degree() {
        Semisimplicity::NilpotentWitness(s.eval_matrix(&r, field))
    } else {
        Semisimplicity::Squarefree
    };
    let fac = factor_squarefree(&s, field, max_adjoin);
    let k = fac.field.clone();
    let mu_k = mu.lift(&k);
    let mut factors = Vec::new();
    let mut requests = Vec::new();
    for f in fac.factors {
        let mut e = 0u32;
        let mut cof = mu_k.clone();
        while let Some(q) = cof.div_exact(&f.poly, &k) {
            cof = q;
            e += 1;
        }
        let qj = f.poly.pow(e, &k);
        let (_, _, b) = qj.ext_gcd(&cof, &k);
        let g = b.mul(&cof, &k).rem(&mu_k, &k);
        let eps = g.eval_matrix(&r, &k);
        let dim = span_dim(z, &eps, &k);
        match &f.kind {
            FactorKind::Quadratic { needs } => requests.push(Certificate::NeedsExtension {
                radicand: match needs {
                    Radicand::Integer(m) => m.to_string(),
                    Radicand::Element(x) => x.to_string(),
                },
                factor: f.poly.to_string(),
            }),
            FactorKind::Higher { proven } => requests.push(Certificate::IrreducibleFactor {
                polynomial: f.poly.to_string(),
                degree: f.poly.degree(),
                proven: *proven,
                note: "a field factor of degree at least 3 cannot be split by square roots alone"
                    .into(),
            }),
            FactorKind::Linear => {}
        }
        factors.push(LocalFactor {
            rank: eps.rank(&k),
            idempotent: eps,
            generated: dim == qj.degree(),
            residue: f.poly,
            multiplicity: e,
            dim,
            kind: f.kind,
        });
    }
    IdempotentSplit {
        field: k,
        adjoined: fac.adjoined,
        element: r,
        min_poly: mu,
        factors,
        semisimple,
        extension_requests: requests,
    }
}

fn to_dmatrix(m: &Matrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_complex())
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> Matrix {
    Matrix::from_vec(
        m.nrows(),
        m.ncols(),
        (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| Scalar::Float(m[(i, j)])))
            .collect(),
    )
}

fn split_float(z: &CenterBasis, r: Matrix, field: &Field) -> IdempotentSplit {
    let n = r.rows();
    let tol = field.tolerance().max(f64::EPSILON);
    let rm = to_dmatrix(&r);
    let (_, t) = rm.clone().schur().unpack();
    let eigs: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let thr = tol.sqrt() * scale;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &l in &eigs {
        match clusters.iter_mut().find(|(c, _)| (*c - l).norm() < thr) {
            Some((c, k)) => {
                *c = (*c * *k as f64 + l) / (*k as f64 + 1.0);
                *k += 1;
            }
            None => clusters.push((l, 1)),
        }
    }
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut factors = Vec::new();
    let mut witness = None;
    let mut mu = UPoly::one(field);
    for (j, &(cj, mult)) in clusters.iter().enumerate() {
        let mut e = id.clone();
        for (i, &(ci, _)) in clusters.iter().enumerate() {
            if i != j {
                e = e * (&rm - &id * ci) / (cj - ci);
            }
        }
        for _ in 0..100 {
            let e2 = &e * &e;
            if (&e2 - &e).norm() <= tol {
                break;
            }
            e = &e2 * Complex64::new(3.0, 0.0) - &e2 * &e * Complex64::new(2.0, 0.0);
        }
        let nil = (&rm - &id * cj) * &e;
        let mut index = 1u32;
        let mut p = nil.clone();
        while p.norm() > thr && (index as usize) < n {
            p = &p * &nil;
            index += 1;
        }
        if nil.norm() > thr && witness.is_none() {
            witness = Some(from_dmatrix(&nil));
        }
        let eps = from_dmatrix(&e);
        let dim = span_dim(z, &eps, field);
        let residue = UPoly::linear(&Scalar::Float(cj), field);
        mu = mu.mul(&residue.pow(index, field), field);
        factors.push(LocalFactor {
            rank: mult,
            idempotent: eps,
            residue,
            multiplicity: index,
            dim,
            kind: FactorKind::Linear,
            generated: dim == index as usize,
        });
    }
    IdempotentSplit {
        field: field.clone(),
        adjoined: Vec::new(),
        element: r,
        min_poly: mu,
        factors,
        semisimple: match witness {
            Some(w) => Semisimplicity::NilpotentWitness(w),
            None => Semisimplicity::Squarefree,
        },
        extension_requests: Vec::new(),
    }
}

/// One factor of the center viewed as a product of local algebras.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlgebraFactor {
    /// A copy of the working field.
    GroundField { field: String },
    /// `Q(sqrt(D))` for a squarefree integer `D`, with its canonical defining polynomial.
    QuadraticField {
        discriminant: String,
        polynomial: String,
    },
    /// A field extension of the working field by an irreducible factor.
    Extension { polynomial: String, degree: usize, proven: bool },
    /// A local algebra with nilpotents, residue field given by `residue`.
    NonSemisimpleLocal { residue: String, dim: usize },
    /// A factor of the given dimension whose structure the random element did not reveal.
    Unresolved { dim: usize },
}

impl fmt::Display for AlgebraFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraFactor::GroundField { field } => write!(f, "{field}"),
            AlgebraFactor::QuadraticField { discriminant, .. } => {
                write!(f, "Q(sqrt({discriminant}))")
            }
            AlgebraFactor::Extension { polynomial, .. } => write!(f, "K[t]/({polynomial})"),
            AlgebraFactor::NonSemisimpleLocal { residue, dim } => {
                write!(f, "local(dim {dim}, residue {residue})")
            }
            AlgebraFactor::Unresolved { dim } => write!(f, "unresolved(dim {dim})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraDescription {
    pub factors: Vec<AlgebraFactor>,
}

impl AlgebraDescription {
    pub fn ground_field_copies(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| matches!(f, AlgebraFactor::GroundField { .. }))
            .count()
    }

    /// Discriminant classes of the quadratic field factors.
    pub fn quadratic_discriminants(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                AlgebraFactor::QuadraticField { discriminant, .. } => discriminant.parse().ok(),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for AlgebraDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Canonical defining polynomial of `Q(sqrt(d))`: `t² − t + (1−d)/4` when
/// `d ≡ 1 (mod 4)`, else `t² − d`.
pub fn quadratic_canonical_polynomial(d: &BigInt) -> UPoly {
    let q = Field::rationals();
    if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        let c = BigRational::from_integer((BigInt::from(1) - d) / 4);
        UPoly::new(vec![q.rational(c), q.int(-1), q.one()], &q)
    } else {
        UPoly::new(vec![q.rational(BigRational::from_integer(-d)), q.zero(), q.one()], &q)
    }
}

/// Describes the center as a product of the local pieces found by the split.
pub fn classify_algebra(_z: &CenterBasis, split: &IdempotentSplit) -> AlgebraDescription {
    let base = split.field.to_string();
    let factors = split
        .factors
        .iter()
        .map(|f| {
            if !f.generated {
                return AlgebraFactor::Unresolved { dim: f.dim };
            }
            if f.multiplicity > 1 {
                return AlgebraFactor::NonSemisimpleLocal {
                    residue: f.residue.to_string(),
                    dim: f.dim,
                };
            }
            match f.residue.degree() {
                1 => AlgebraFactor::GroundField { field: base.clone() },
                2 if f.residue.is_rational() => {
                    let c = f.residue.rational_coeffs().expect("rational");
                    let disc = &c[1] * &c[1] - BigRational::from_integer(4.into()) * &c[0];
                    let d = squarefree_class(&disc);
                    AlgebraFactor::QuadraticField {
                        polynomial: quadratic_canonical_polynomial(&d).to_string(),
                        discriminant: d.to_string(),
                    }
                }
                deg => AlgebraFactor::Extension {
                    polynomial: f.residue.to_string(),
                    degree: deg,
                    proven: !matches!(f.kind, FactorKind::Higher { proven: false }),
                },
            }
        })
        .collect();
    AlgebraDescription { factors }
}
