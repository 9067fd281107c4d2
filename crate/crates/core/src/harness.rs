//! Expansion oracles and seeded generators for property tests.
//!
//! Expansion here multiplies sparse polynomials term by term and shares no
//! code with the tensor congruence used by the decomposition. Every
//! generator draws from `ChaCha8Rng::seed_from_u64(seed)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::Form;
use crate::matrix::Matrix;
use crate::rank::slicing_rank;
use crate::scalar::{Field, Scalar};

/// Name of the generator algorithm, for reproducing fixtures elsewhere.
pub const PRNG: &str = "ChaCha8Rng::seed_from_u64";

/// Default bound on random integer entries.
pub const ENTRY_BOUND: i64 = 4;

#[derive(Clone, Debug)]
pub struct SparsePoly {
    n: usize,
    terms: HashMap<Vec<u32>, Scalar>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> SparsePoly {
        SparsePoly {
            n,
            terms: HashMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> SparsePoly {
        let mut p = SparsePoly::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// `Σ row[i] xᵢ`.
    pub fn linear(row: &[Scalar]) -> SparsePoly {
        let n = row.len();
        let mut p = SparsePoly::zero(n);
        for (i, c) in row.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_exact_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> SparsePoly {
        let mut out = SparsePoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: u32, one: &Scalar) -> SparsePoly {
        let mut acc = SparsePoly::constant(self.n, one.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn into_form(self, d: u32, field: &Field) -> Form {
        Form::from_terms(self.n, d, field, self.terms).expect("homogeneous by construction")
    }
}

/// `Σ λᵢ lᵢ(x)^d` expanded monomial by monomial.
pub fn expand_powersum(lambdas: &[Scalar], rows: &[Vec<Scalar>], d: u32, field: &Field) -> Form {
    let n = rows.first().map_or(0, Vec::len);
    let one = field.one();
    let mut acc = SparsePoly::zero(n);
    for (lambda, row) in lambdas.iter().zip(rows) {
        acc = acc.add(&SparsePoly::linear(row).pow(d, &one).scale(lambda));
    }
    acc.into_form(d, field)
}

/// `g(l₁(x), …, l_k(x))` for `g` in `k = rows.len()` variables.
pub fn substitute(g: &Form, rows: &[Vec<Scalar>], field: &Field) -> Form {
    assert_eq!(g.n(), rows.len());
    let n = rows.first().map_or(0, Vec::len);
    let one = field.one();
    let linear: Vec<SparsePoly> = rows.iter().map(|r| SparsePoly::linear(r)).collect();
    let mut acc = SparsePoly::zero(n);
    for (e, c) in g.terms() {
        let mut t = SparsePoly::constant(n, c.clone());
        for (l, &k) in linear.iter().zip(e) {
            if k > 0 {
                t = t.mul(&l.pow(k, &one));
            }
        }
        acc = acc.add(&t);
    }
    acc.into_form(g.d(), field)
}

/// A diagonalizable instance together with its construction.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    /// Rows are the generating linear forms.
    pub p: Matrix,
    /// Coefficients for the monic rows.
    pub lambdas: Vec<Scalar>,
    /// Generating rows scaled so the first nonzero entry is 1.
    pub forms: Vec<Vec<Scalar>>,
    pub form: Form,
}

/// Scales `row` so its first nonzero entry is 1; returns that entry.
pub fn monic_row(row: &[Scalar], field: &Field) -> (Vec<Scalar>, Scalar) {
    let c = row
        .iter()
        .find(|x| !field.is_zero(x))
        .cloned()
        .unwrap_or_else(|| field.one());
    let inv = c.inv().expect("nonzero");
    (row.iter().map(|x| x * &inv).collect(), c)
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.random_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng, field: &Field) -> Matrix {
    loop {
        let data = (0..n * n)
            .map(|_| field.int(rng.random_range(-ENTRY_BOUND..=ENTRY_BOUND)))
            .collect();
        let p = Matrix::from_vec(n, n, data);
        if p.rank(field) == n {
            return p;
        }
    }
}

pub fn random_diagonalizable(n: usize, d: u32, seed: u64, field: &Field) -> GroundTruth {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_invertible(n, &mut rng, field);
    let raw: Vec<Scalar> = (0..n).map(|_| field.int(nonzero(&mut rng, ENTRY_BOUND))).collect();
    let form = expand_powersum(&raw, &p.row_vectors(), d, field);
    let mut lambdas = Vec::new();
    let mut forms = Vec::new();
    for (row, l) in p.row_vectors().iter().zip(&raw) {
        let (m, c) = monic_row(row, field);
        lambdas.push(l * &c.pow(d));
        forms.push(m);
    }
    GroundTruth {
        p,
        lambdas,
        forms,
        form,
    }
}

/// Orthogonal matrix over Q from the Cayley transform of a random antisymmetric matrix.
///
/// Entries of `S` avoid 0 and ±1, which would make `Q` a signed permutation for `n = 2`.
pub fn random_orthogonal_rational(n: usize, seed: u64) -> Matrix {
    let q = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Matrix::zeros(n, n, &q);
    for i in 0..n {
        for j in i + 1..n {
            let (num, den) = loop {
                let (a, b) = (rng.random_range(-3i64..=3), rng.random_range(1i64..=2));
                if a != 0 && a.abs() != b {
                    break (a, b);
                }
            };
            let v = q.ratio(num, den);
            s[(i, j)] = v.clone();
            s[(j, i)] = -v;
        }
    }
    cayley(&s)
}

/// `(I − S)(I + S)⁻¹`.
pub fn cayley(s: &Matrix) -> Matrix {
    let q = Field::rationals();
    let id = Matrix::identity(s.rows(), &q);
    let inv = (&id + s).inverse(&q).expect("I + S is invertible for antisymmetric S");
    &(&id - s) * &inv
}

/// A form with every coefficient drawn from `[−bound, bound]`, not identically zero.
pub fn random_dense_form(n: usize, d: u32, seed: u64, field: &Field, bound: i64) -> Form {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let terms: Vec<(Vec<u32>, Scalar)> = crate::form::multisets(n, d as usize)
            .into_iter()
            .map(|idx| {
                let mut e = vec![0u32; n];
                for i in idx {
                    e[i] += 1;
                }
                (e, field.int(rng.random_range(-bound..=bound)))
            })
            .collect();
        let f = Form::from_terms(n, d, field, terms).expect("homogeneous");
        if !f.is_zero() {
            return f;
        }
    }
}

/// A degenerate instance `f = g(l₁, …, l_r)`.
#[derive(Clone, Debug)]
pub struct Degenerate {
    pub form: Form,
    /// Nondegenerate form in `r` variables.
    pub inner: Form,
    /// `r` independent linear forms in `n` variables.
    pub rows: Vec<Vec<Scalar>>,
}

pub fn random_degenerate(n: usize, r: usize, d: u32, seed: u64, field: &Field) -> Degenerate {
    assert!(r <= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inner = loop {
        let g = random_dense_form(r, d, rng.random(), field, 3);
        if slicing_rank(&crate::form::gram_tensor(&g)) == r {
            break g;
        }
    };
    let rows = loop {
        let data = (0..r * n)
            .map(|_| field.int(rng.random_range(-ENTRY_BOUND..=ENTRY_BOUND)))
            .collect();
        let m = Matrix::from_vec(r, n, data);
        if m.rank(field) == r {
            break m.row_vectors();
        }
    };
    Degenerate {
        form: substitute(&inner, &rows, field),
        inner,
        rows,
    }
}
