//! Slicing rank, radical, and reduction of degenerate forms.

use crate::form::{congruence, multisets, SymTensor};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A change of variables splitting off the radical.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Essential number of variables.
    pub r: usize,
    /// Invertible; columns `r..n` span the radical.
    pub p: Matrix,
    /// The nondegenerate part, on the first `r` new variables.
    pub reduced: SymTensor,
}

/// Matrix whose column `i` lists the entries `a_{i J}` over sorted `J` of length `d − 1`.
fn slice_matrix(a: &SymTensor) -> Matrix {
    let n = a.n();
    let tails = multisets(n, a.d() as usize - 1);
    let mut m = Matrix::zeros(tails.len(), n, a.field());
    let mut idx = vec![0; a.d() as usize];
    for (row, tail) in tails.iter().enumerate() {
        idx[1..].copy_from_slice(tail);
        for i in 0..n {
            idx[0] = i;
            m[(row, i)] = a.get(&idx);
        }
    }
    m
}

/// Basis of `{u : Σ uᵢ Aᵢ = 0}`; empty iff `A` is nondegenerate.
pub fn radical_basis(a: &SymTensor) -> Vec<Vec<Scalar>> {
    slice_matrix(a).nullspace(a.field())
}

/// `n − dim radical`.
pub fn slicing_rank(a: &SymTensor) -> usize {
    slice_matrix(a).rank(a.field())
}

pub fn reduce_nondegenerate(a: &SymTensor) -> Reduction {
    let n = a.n();
    let field = a.field();
    let radical = radical_basis(a);
    if radical.is_empty() {
        return Reduction {
            r: n,
            p: Matrix::identity(n, field),
            reduced: a.clone(),
        };
    }
    let mut chosen = radical.clone();
    let mut complement = Vec::new();
    for j in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut e = vec![field.zero(); n];
        e[j] = field.one();
        chosen.push(e.clone());
        if Matrix::from_columns(&chosen).rank(field) == chosen.len() {
            complement.push(e);
        } else {
            chosen.pop();
        }
    }
    let r = complement.len();
    let mut cols = complement;
    cols.extend(radical);
    let p = Matrix::from_columns(&cols);
    let b = congruence(a, &p).expect("square change of variables");
    let keep: Vec<usize> = (0..r).collect();
    Reduction {
        r,
        p,
        reduced: b.restrict(&keep),
    }
}
