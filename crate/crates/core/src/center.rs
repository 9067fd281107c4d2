//! The Harrison center `Z(f) = {X : Xᵀ M = M X for every slice M}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::{hessian_at, multisets, Form, SymTensor};
use crate::matrix::Matrix;
use crate::rank::slicing_rank;
use crate::scalar::{Field, Scalar};

/// A basis of the center as a space of `n × n` matrices, identity first.
#[derive(Clone, Debug)]
pub struct CenterBasis {
    n: usize,
    field: Field,
    basis: Vec<Matrix>,
}

impl CenterBasis {
    /// Wraps matrices known to span a commutative algebra containing the identity.
    pub fn from_matrices(n: usize, field: &Field, basis: Vec<Matrix>) -> CenterBasis {
        CenterBasis {
            n,
            field: field.clone(),
            basis,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    fn stacked(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(Matrix::vectorize).collect();
        Matrix::from_columns(&cols)
    }

    /// Coordinates of `x` in the basis, if it lies in the span.
    pub fn coordinates(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return x.is_zero(&self.field).then(Vec::new);
        }
        self.stacked().solve(&x.vectorize(), &self.field)
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.coordinates(x).is_some()
    }

    /// `Σ cᵢ Xᵢ`.
    pub fn combine(&self, coords: &[Scalar]) -> Matrix {
        let mut acc = Matrix::zeros(self.n, self.n, &self.field);
        for (c, x) in coords.iter().zip(&self.basis) {
            acc = &acc + &x.scale(c);
        }
        acc
    }

    /// Whether both bases span the same space.
    pub fn span_equals(&self, other: &[Matrix]) -> bool {
        let mut cols: Vec<Vec<Scalar>> = self.basis.iter().map(Matrix::vectorize).collect();
        let own = self.dim();
        let theirs = Matrix::from_columns(&other.iter().map(Matrix::vectorize).collect::<Vec<_>>())
            .rank(&self.field);
        cols.extend(other.iter().map(Matrix::vectorize));
        let joint = Matrix::from_columns(&cols).rank(&self.field);
        joint == own && joint == theirs
    }
}

/// Nullspace of the stacked system `Xᵀ M − M X = 0` over all sorted tails.
pub fn center_basis(a: &SymTensor) -> Result<CenterBasis> {
    let n = a.n();
    let field = a.field();
    let rank = slicing_rank(a);
    if rank < n {
        return Err(Error::Degenerate { rank, n });
    }
    let unknown = |r: usize, c: usize| r * n + c;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for tail in multisets(n, a.d() as usize - 2) {
        let m = a.slice(&tail)?;
        // (XᵀM − MX) is antisymmetric, so i < j suffices.
        for i in 0..n {
            for j in i + 1..n {
                let mut row = vec![field.zero(); n * n];
                for k in 0..n {
                    // (XᵀM)_{ij} = Σ_k X_{ki} M_{kj}
                    let v = &row[unknown(k, i)] + &m[(k, j)];
                    row[unknown(k, i)] = v;
                    // (MX)_{ij} = Σ_k M_{ik} X_{kj}
                    let v = &row[unknown(k, j)] - &m[(i, k)];
                    row[unknown(k, j)] = v;
                }
                if row.iter().any(|x| !field.is_zero(x)) {
                    rows.push(row);
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..n * n)
            .map(|k| {
                let mut v = vec![field.zero(); n * n];
                v[k] = field.one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace(field)
    };
    let mut cols = vec![Matrix::identity(n, field).vectorize()];
    cols.extend(null);
    let (_, pivots) = Matrix::from_columns(&cols).rref(field);
    let basis = pivots
        .into_iter()
        .map(|p| Matrix::from_vec(n, n, cols[p].clone()))
        .collect();
    Ok(CenterBasis {
        n,
        field: field.clone(),
        basis,
    })
}

pub fn center_dim(a: &SymTensor) -> Result<usize> {
    Ok(center_basis(a)?.dim())
}

/// Checks `(H(p) X)ᵀ = H(p) X` at `trials` random integer points.
pub fn hessian_cross_check(f: &Form, x: &Matrix, trials: usize, seed: u64) -> bool {
    let field = f.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let p: Vec<Scalar> = (0..f.n()).map(|_| field.int(rng.random_range(-5..=5))).collect();
        let hx = &hessian_at(f, &p) * x;
        hx.is_symmetric(field)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{gram_tensor, parse_form};

    fn q() -> Field {
        Field::rationals()
    }

    fn center_of(text: &str) -> CenterBasis {
        center_basis(&gram_tensor(&parse_form(text, &q()).unwrap())).unwrap()
    }

    #[test]
    fn binary_quartics() {
        let z = center_of("x1^4+x2^4+6*x1^2*x2^2");
        assert_eq!(z.dim(), 2);
        assert_eq!(z.basis()[0], Matrix::identity(2, &q()));
        assert!(z.contains(&Matrix::from_i64(&q(), &[&[0, 1], &[1, 0]])));
        assert!(!z.contains(&Matrix::from_i64(&q(), &[&[0, 1], &[0, 0]])));
        assert_eq!(center_of("x1^4+x2^4+x1^2*x2^2").dim(), 1);
    }

    #[test]
    fn center_of_split_cubic() {
        let z = center_of(
            "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3",
        );
        let reference = [
            Matrix::from_i64(&q(), &[&[1, -1, 1], &[0, 0, 0], &[0, 0, 0]]),
            Matrix::from_i64(&q(), &[&[0, 1, -1], &[0, 1, 0], &[0, 0, 1]]),
            Matrix::from_i64(&q(), &[&[0, 1, -5], &[0, 0, 1], &[0, -1, 6]]),
        ];
        assert_eq!(z.dim(), 3);
        assert!(z.span_equals(&reference));
    }

    #[test]
    fn diagonal_forms_have_diagonal_centers() {
        let z = center_of("x1^3+x2^3+x3^3");
        assert_eq!(z.dim(), 3);
        for x in z.basis() {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(x[(i, j)].is_exact_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let a = gram_tensor(&parse_form("(x1+x2)^3", &q()).unwrap());
        assert_eq!(center_basis(&a).unwrap_err(), Error::Degenerate { rank: 1, n: 2 });
    }

    #[test]
    fn hessian_check() {
        let f = parse_form("x1^4+x2^4+6*x1^2*x2^2", &q()).unwrap();
        let s = Matrix::from_i64(&q(), &[&[0, 1], &[1, 0]]);
        assert!(hessian_cross_check(&f, &s, 10, 1));
        let bad = Matrix::from_i64(&q(), &[&[0, 1], &[0, 0]]);
        assert!(!hessian_cross_check(&f, &bad, 10, 1));
        assert!(hessian_cross_check(&f, &Matrix::identity(2, &q()), 10, 1));
    }
}
