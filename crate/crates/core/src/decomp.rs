//! Classification and decomposition of a form: reduction to the essential
//! variables, block splitting by central idempotents, diagonalization, and
//! orthogonality checks.

use std::fmt;

use serde::Serialize;

use crate::center::{center_basis, CenterBasis};
use crate::error::{Error, Result};
use crate::factor::FactorKind;
use crate::form::{congruence, form_from_gram, gram_tensor, Form, SymTensor};
use crate::harness::{expand_powersum, substitute};
use crate::idem::{
    classify_algebra, split_idempotents, AlgebraDescription, Certificate, Semisimplicity,
    SplitOptions,
};
use crate::matrix::Matrix;
use crate::rank::reduce_nondegenerate;
use crate::scalar::{Field, FieldConfig, Scalar, SqrtResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Diagonalizable,
    DirectSum,
    /// Not a direct sum over the working field, with a proof from the center.
    Indecomposable,
    /// The center is the ground field, so no extension makes the form decomposable.
    CentralIndecomposable,
    UndecidedWithCertificate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Diagonalizable => "diagonalizable",
            Verdict::DirectSum => "direct_sum",
            Verdict::Indecomposable => "indecomposable",
            Verdict::CentralIndecomposable => "central_indecomposable",
            Verdict::UndecidedWithCertificate => "undecided_with_certificate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ortho {
    Orthogonal,
    Unitary,
    Neither,
    NotApplicable,
}

impl Ortho {
    pub fn as_str(&self) -> &'static str {
        match self {
            Ortho::Orthogonal => "orthogonal",
            Ortho::Unitary => "unitary",
            Ortho::Neither => "neither",
            Ortho::NotApplicable => "not_applicable",
        }
    }
}

impl fmt::Display for Ortho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One summand of the final block structure.
#[derive(Clone, Debug)]
pub struct Block {
    /// Indices of the new variables `y` carrying the block, 0-based.
    pub variables: Vec<usize>,
    /// The summand as a form in `y₁..yₙ`.
    pub form: Form,
    /// The same summand in the original variables.
    pub form_in_x: Form,
    pub center_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub verdict: Verdict,
    pub n: usize,
    pub d: u32,
    pub rank: usize,
    /// Working field at the end of the run, including automatic extensions.
    pub field: Field,
    pub auto_adjoined: Vec<i64>,
    pub center_dim: usize,
    pub center_algebra: AlgebraDescription,
    /// Rows `lᵢ`, first nonzero entry 1, when diagonalizable.
    pub forms: Option<Matrix>,
    pub lambdas: Option<Vec<Scalar>>,
    pub blocks: Vec<Block>,
    /// `f(Py)` is the sum of the block forms.
    pub p: Matrix,
    pub ortho: Ortho,
    pub scaling_in_field: Option<bool>,
    pub certificates: Vec<Certificate>,
}

impl Decomposition {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.variables.len()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Random elements tried per center before giving up on a generator.
    pub retries: usize,
    pub seed: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { retries: 8, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum LeafKind {
    Rank1,
    /// Center equal to the ground field.
    Central,
    /// Center local and generated by one element, so the block is indecomposable.
    Local,
    Open,
}

struct Leaf {
    size: usize,
    /// Columns span the block inside the reduced coordinates.
    basis: Matrix,
    center_dim: usize,
    kind: LeafKind,
}

struct Splitter {
    field: Field,
    max_adjoin: usize,
    adjoined: Vec<i64>,
    opts: DecomposeOptions,
    calls: u64,
    certificates: Vec<Certificate>,
}

fn negligible(field: &Field, x: &Scalar, scale: f64) -> bool {
    if field.is_exact() {
        x.is_exact_zero()
    } else {
        field.magnitude(x) <= field.tolerance().sqrt() * scale.max(1.0)
    }
}

fn tensor_scale(t: &SymTensor) -> f64 {
    t.entries().map(|(_, v)| v.to_complex().norm()).fold(0.0, f64::max)
}

/// Whether every entry of `b` touching two different groups vanishes.
fn splits_along(b: &SymTensor, group_of: &[usize]) -> bool {
    let field = b.field();
    let scale = tensor_scale(b);
    b.entries().all(|(idx, v)| {
        let g = group_of[idx[0]];
        idx.iter().all(|&i| group_of[i] == g) || negligible(field, v, scale)
    })
}

impl Splitter {
    fn lift(&self, m: &Matrix) -> Matrix {
        m.map(|x| self.field.coerce(x))
    }

    fn push(&self, out: &mut Vec<Leaf>, size: usize, basis: &Matrix, center_dim: usize, kind: LeafKind) {
        out.push(Leaf {
            size,
            basis: self.lift(basis),
            center_dim,
            kind,
        });
    }

    fn split(&mut self, t: SymTensor, basis: Matrix, z: Option<CenterBasis>, out: &mut Vec<Leaf>) {
        let t = t.lift(&self.field);
        let k = t.n();
        if k == 1 {
            self.push(out, 1, &basis, 1, LeafKind::Rank1);
            return;
        }
        let z = match z.map(Ok).unwrap_or_else(|| center_basis(&t)) {
            Ok(z) => z,
            Err(_) => {
                self.certificates.push(Certificate::Unresolved {
                    dim: 0,
                    note: format!("a block of size {k} became degenerate"),
                });
                self.push(out, k, &basis, 0, LeafKind::Open);
                return;
            }
        };
        if z.dim() == 1 {
            self.push(out, k, &basis, 1, LeafKind::Central);
            return;
        }
        let opts = SplitOptions {
            max_adjoin: self.max_adjoin.saturating_sub(self.adjoined.len()),
            retries: self.opts.retries,
            seed: self.opts.seed.wrapping_add(self.calls),
        };
        self.calls += 1;
        let split = split_idempotents(&z, &opts);
        if !split.adjoined.is_empty() {
            self.field = split.field.clone();
            self.adjoined.extend(&split.adjoined);
        }
        if let Semisimplicity::NilpotentWitness(w) = &split.semisimple {
            self.certificates.push(Certificate::nilpotent(w));
        }
        if split.factors.len() == 1 {
            let f = &split.factors[0];
            let kind = if f.generated && !matches!(f.kind, FactorKind::Higher { proven: false }) {
                LeafKind::Local
            } else {
                LeafKind::Open
            };
            self.certificates.extend(split.extension_requests.iter().cloned());
            if !f.generated {
                self.certificates.push(Certificate::Unresolved {
                    dim: z.dim(),
                    note: format!(
                        "no random element generated the {}-dimensional center of a block of size {k}",
                        z.dim()
                    ),
                });
            }
            self.push(out, k, &basis, z.dim(), kind);
            return;
        }

        let field = self.field.clone();
        let t = t.lift(&field);
        let basis = self.lift(&basis);
        let mut cols = Vec::new();
        let mut groups = Vec::new();
        for f in &split.factors {
            let cb = f.idempotent.column_basis(&field);
            groups.push(cols.len()..cols.len() + cb.len());
            cols.extend(cb);
        }
        let mut group_of = vec![0; cols.len()];
        for (g, range) in groups.iter().enumerate() {
            for i in range.clone() {
                group_of[i] = g;
            }
        }
        let b = (cols.len() == k)
            .then(|| congruence(&t, &Matrix::from_columns(&cols)).ok())
            .flatten();
        let b = match b {
            Some(b) if splits_along(&b, &group_of) => b,
            _ => {
                self.certificates.push(Certificate::Unresolved {
                    dim: z.dim(),
                    note: "the idempotent images did not split the block".into(),
                });
                self.push(out, k, &basis, z.dim(), LeafKind::Open);
                return;
            }
        };
        for range in groups {
            let vars: Vec<usize> = range.clone().collect();
            let q = Matrix::from_columns(&cols[range]);
            self.split(b.restrict(&vars), &basis * &q, None, out);
        }
    }
}

/// The field a run works over: the configured one, widened to the form's tower if needed.
fn working_field(f: &Form, cfg: &FieldConfig) -> Result<Field> {
    let base = cfg.field()?;
    let own = f.field();
    match (base.is_exact(), own.is_exact()) {
        (true, true) => {
            let (b, o) = (base.radicands(), own.radicands());
            if b.starts_with(o) {
                Ok(base)
            } else if o.starts_with(b) {
                Ok(own.clone())
            } else {
                Err(Error::FieldMismatch(format!(
                    "form is over {own}, configuration asks for {base}"
                )))
            }
        }
        (false, _) => Ok(base),
        (true, false) => Err(Error::FieldMismatch(
            "a floating-point form cannot be decomposed exactly".into(),
        )),
    }
}

/// Scales `row` so that its first nonzero entry is 1; returns the new row and that entry.
pub fn monic_normalize(row: &[Scalar], field: &Field) -> (Vec<Scalar>, Scalar) {
    let scale = row.iter().map(|x| field.magnitude(x)).fold(0.0, f64::max);
    let c = row
        .iter()
        .find(|x| !negligible(field, x, scale))
        .cloned()
        .unwrap_or_else(|| field.one());
    let inv = c.inv().expect("nonzero");
    (row.iter().map(|x| x * &inv).collect(), c)
}

pub fn decompose(f: &Form, cfg: &FieldConfig) -> Result<Decomposition> {
    decompose_with(f, cfg, &DecomposeOptions::default())
}

pub fn decompose_with(f: &Form, cfg: &FieldConfig, opts: &DecomposeOptions) -> Result<Decomposition> {
    let (n, d) = (f.n(), f.d());
    if d < 3 {
        return Err(Error::DegreeTooLow(d));
    }
    let base = working_field(f, cfg)?;
    let a = gram_tensor(f).lift(&base);
    let red = reduce_nondegenerate(&a);
    let r = red.r;
    if r == 0 {
        return Ok(Decomposition {
            verdict: Verdict::Diagonalizable,
            n,
            d,
            rank: 0,
            field: base.clone(),
            auto_adjoined: Vec::new(),
            center_dim: 0,
            center_algebra: AlgebraDescription { factors: Vec::new() },
            forms: Some(Matrix::zeros(0, n, &base)),
            lambdas: Some(Vec::new()),
            blocks: Vec::new(),
            p: Matrix::identity(n, &base),
            ortho: Ortho::NotApplicable,
            scaling_in_field: None,
            certificates: Vec::new(),
        });
    }

    let z = center_basis(&red.reduced)?;
    let top = split_idempotents(
        &z,
        &SplitOptions {
            max_adjoin: 0,
            retries: opts.retries,
            seed: opts.seed,
        },
    );
    let center_algebra = classify_algebra(&z, &top);
    let center_dim = z.dim();

    let mut splitter = Splitter {
        field: base.clone(),
        max_adjoin: cfg.max_adjoin,
        adjoined: Vec::new(),
        opts: *opts,
        calls: 1,
        certificates: Vec::new(),
    };
    let mut leaves = Vec::new();
    splitter.split(red.reduced.clone(), Matrix::identity(r, &base), Some(z), &mut leaves);
    leaves.sort_by_key(|l| l.size);
    let field = splitter.field.clone();
    let mut certificates = splitter.certificates;

    let cols: Vec<Vec<Scalar>> = leaves
        .iter()
        .flat_map(|l| {
            let b = l.basis.map(|x| field.coerce(x));
            (0..b.cols()).map(move |j| b.column(j))
        })
        .collect();
    let q = Matrix::from_columns(&cols);
    let q = if r < n {
        Matrix::block_diag(&[q, Matrix::identity(n - r, &field)], &field)
    } else {
        q
    };
    let p = &red.p.map(|x| field.coerce(x)) * &q;
    let p_inv = p.inverse(&field)?;
    let b = congruence(&a.lift(&field), &p)?;

    let mut group_of = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (g, leaf) in leaves.iter().enumerate() {
        let vars: Vec<usize> = (offset..offset + leaf.size).collect();
        for &v in &vars {
            group_of[v] = g;
        }
        let form = form_from_gram(&b.restrict(&vars)).embed(n, &vars);
        let form_in_x = form_from_gram(&congruence(&gram_tensor(&form), &p_inv)?);
        blocks.push(Block {
            variables: vars,
            form,
            form_in_x,
            center_dim: leaf.center_dim,
        });
        offset += leaf.size;
    }
    let consistent = splits_along(&b, &group_of);
    if !consistent {
        certificates.push(Certificate::Unresolved {
            dim: center_dim,
            note: "assembled change of variables does not separate the blocks".into(),
        });
    }

    let verdict = if !consistent {
        Verdict::UndecidedWithCertificate
    } else if leaves.iter().all(|l| l.size == 1) {
        Verdict::Diagonalizable
    } else if leaves.len() >= 2 {
        Verdict::DirectSum
    } else {
        match leaves[0].kind {
            LeafKind::Central => Verdict::CentralIndecomposable,
            LeafKind::Local => Verdict::Indecomposable,
            _ => Verdict::UndecidedWithCertificate,
        }
    };

    let (mut forms, mut lambdas) = (None, None);
    let (mut ortho, mut scaling_in_field) = (Ortho::NotApplicable, None);
    if verdict == Verdict::Diagonalizable {
        let rows = p_inv.row_vectors();
        let mut ls = Vec::new();
        let mut lam = Vec::new();
        for v in 0..r {
            let (m, c) = monic_normalize(&rows[v], &field);
            lam.push(&b.get(&vec![v; d as usize]) * &c.pow(d));
            ls.push(m);
        }
        let l = Matrix::from_rows(ls);
        ortho = row_ortho(&l, &field);
        scaling_in_field = row_scaling(&l, ortho, &field);
        forms = Some(l);
        lambdas = Some(lam);
    }

    Ok(Decomposition {
        verdict,
        n,
        d,
        rank: r,
        field,
        auto_adjoined: splitter.adjoined,
        center_dim,
        center_algebra,
        forms,
        lambdas,
        blocks,
        p,
        ortho,
        scaling_in_field,
        certificates,
    })
}

fn gram(l: &Matrix, conjugate: bool) -> Matrix {
    let t = l.transpose();
    let t = if conjugate { t.map(Scalar::conj) } else { t };
    l * &t
}

fn off_diagonal_vanishes(g: &Matrix, field: &Field) -> bool {
    let scale = (0..g.rows()).map(|i| field.magnitude(&g[(i, i)])).fold(0.0, f64::max);
    (0..g.rows()).all(|i| (0..g.cols()).all(|j| i == j || negligible(field, &g[(i, j)], scale)))
}

fn row_ortho(l: &Matrix, field: &Field) -> Ortho {
    if off_diagonal_vanishes(&gram(l, false), field) {
        Ortho::Orthogonal
    } else if off_diagonal_vanishes(&gram(l, true), field) {
        Ortho::Unitary
    } else {
        Ortho::Neither
    }
}

/// Whether every row norm has a square root in the field, for the applicable Gram matrix.
fn row_scaling(l: &Matrix, ortho: Ortho, field: &Field) -> Option<bool> {
    let g = match ortho {
        Ortho::Orthogonal => gram(l, false),
        Ortho::Unitary => gram(l, true),
        _ => return None,
    };
    Some((0..g.rows()).all(|i| matches!(field.try_sqrt(&g[(i, i)]), SqrtResult::Root(_))))
}

/// Orthogonality of the rows of a square `L` under the bilinear, then the sesquilinear, Gram matrix.
pub fn ortho_check(l: &Matrix, field: &Field) -> Result<Ortho> {
    if !l.is_square() {
        return Err(Error::NotSquare);
    }
    Ok(row_ortho(l, field))
}

/// For a real tensor: true iff all slices pairwise commute.
pub fn odeco_precheck(a: &SymTensor) -> Result<bool> {
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    let field = a.field();
    let slices = a.slices();
    Ok(slices
        .iter()
        .enumerate()
        .all(|(i, x)| slices[i + 1..].iter().all(|y| x.commutes_with(y, field))))
}

/// Re-expands the decomposition by direct polynomial multiplication.
pub fn reexpand(dec: &Decomposition) -> Result<Form> {
    let field = &dec.field;
    if let (Some(l), Some(lambdas)) = (&dec.forms, &dec.lambdas) {
        if lambdas.is_empty() {
            return Ok(Form::zero(dec.n, dec.d, field));
        }
        return Ok(expand_powersum(lambdas, &l.row_vectors(), dec.d, field));
    }
    let rows = dec.p.inverse(field)?.row_vectors();
    let mut acc = Form::zero(dec.n, dec.d, field);
    for b in &dec.blocks {
        let sub: Vec<Vec<Scalar>> = b.variables.iter().map(|&v| rows[v].clone()).collect();
        acc = acc.add(&substitute(&b.form.restrict(&b.variables), &sub, field))?;
    }
    Ok(acc)
}

/// Largest coefficient difference between `f` and the re-expansion, relative to `f`.
pub fn verify_residual(dec: &Decomposition, f: &Form) -> f64 {
    let g = match reexpand(dec) {
        Ok(g) => g,
        Err(_) => return f64::INFINITY,
    };
    let f = f.lift(&dec.field);
    match g.sub(&f) {
        Ok(diff) => diff.max_abs_coeff() / f.max_abs_coeff().max(f64::MIN_POSITIVE),
        Err(_) => f64::INFINITY,
    }
}

/// Exact equality with the re-expansion, or a relative residual within `sqrt(tol)` in float mode.
pub fn verify(dec: &Decomposition, f: &Form) -> bool {
    if dec.field.is_exact() {
        match reexpand(dec) {
            Ok(g) => g == f.lift(&dec.field),
            Err(_) => false,
        }
    } else {
        verify_residual(dec, f) <= dec.field.tolerance().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::parse_form;

    const SPLIT_CUBIC: &str =
        "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3";

    fn q() -> Field {
        Field::rationals()
    }

    fn rows_of(dec: &Decomposition) -> Vec<Vec<Scalar>> {
        dec.forms.as_ref().unwrap().row_vectors()
    }

    #[test]
    fn binary_quartic_is_orthogonally_diagonalizable() {
        let k = q();
        let f = parse_form("x1^4+x2^4+6*x1^2*x2^2", &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert_eq!(dec.lambdas.as_ref().unwrap(), &vec![k.ratio(1, 2), k.ratio(1, 2)]);
        let mut rows = rows_of(&dec);
        rows.sort_by_key(|r| r[1].to_string());
        assert_eq!(rows, vec![vec![k.int(1), k.int(-1)], vec![k.int(1), k.int(1)]]);
        assert_eq!(dec.ortho, Ortho::Orthogonal);
        assert_eq!(dec.scaling_in_field, Some(false));
        assert!(verify(&dec, &f));
        let mut wrong = dec.clone();
        wrong.lambdas = Some(vec![k.one(), k.one()]);
        assert!(!verify(&wrong, &f));
    }

    #[test]
    fn cubic_splitting_over_sqrt2() {
        let k = q();
        let f = parse_form(SPLIT_CUBIC, &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::DirectSum);
        assert_eq!(dec.block_sizes(), vec![1, 2]);
        assert_eq!(
            dec.blocks[0].form_in_x,
            parse_form("(x1-x2+x3)^3", &k).unwrap()
        );
        assert!(verify(&dec, &f));

        let dec = decompose(&f, &FieldConfig::exact(&[2])).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert_eq!(dec.ortho, Ortho::Neither);
        assert!(verify(&dec, &f));

        let dec = decompose(&f, &FieldConfig::rational().with_max_adjoin(1)).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert_eq!(dec.auto_adjoined, vec![2]);
        assert!(verify(&dec, &f));
    }

    #[test]
    fn indecomposable_and_central() {
        let k = q();
        let f = parse_form("x1^4+x2^4-6*x1^2*x2^2", &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::Indecomposable);
        assert!(dec
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::NeedsExtension { radicand, .. } if radicand == "-1")));
        let dec = decompose(&f, &FieldConfig::exact(&[-1])).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert_eq!(dec.ortho, Ortho::Unitary);
        assert!(verify(&dec, &f));

        let f = parse_form("x1^4+x2^4+x1^2*x2^2", &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::CentralIndecomposable);
        assert!(verify(&dec, &f));
    }

    #[test]
    fn degenerate_and_zero_forms() {
        let k = q();
        let f = parse_form("(x1+x2)^3+x3^3", &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.rank, 2);
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert!(verify(&dec, &f));
        let f = parse_form("x1^2*x2", &k).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::Indecomposable);
        assert!(dec
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::NilpotentWitness { .. })));
        assert!(verify(&dec, &f));
        let zero = Form::zero(3, 3, &k);
        let dec = decompose(&zero, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.rank, 0);
        assert!(verify(&dec, &zero));
    }

    #[test]
    fn float_mode_matches_exact() {
        let cfg = FieldConfig::float(1e-9);
        let k = cfg.field().unwrap();
        let f = parse_form("x1^4+x2^4+6*x1^2*x2^2", &k).unwrap();
        let dec = decompose(&f, &cfg).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert_eq!(dec.ortho, Ortho::Orthogonal);
        assert!(verify_residual(&dec, &f) <= 1e-6);
        let f = parse_form(SPLIT_CUBIC, &k).unwrap();
        let dec = decompose(&f, &cfg).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert!(verify_residual(&dec, &f) <= 1e-6);
    }

    #[test]
    fn ortho_flags() {
        let k = q();
        let l = Matrix::from_i64(&k, &[&[1, -1], &[1, 1]]);
        assert_eq!(ortho_check(&l, &k).unwrap(), Ortho::Orthogonal);
        let ki = FieldConfig::exact(&[-1]).field().unwrap();
        let i = ki.sqrt_int(-1).unwrap();
        let l = Matrix::from_rows(vec![vec![ki.one(), -&i], vec![ki.one(), i.clone()]]);
        assert_eq!(ortho_check(&l, &ki).unwrap(), Ortho::Unitary);
        let l = Matrix::from_i64(&k, &[&[1, 1], &[0, 1]]);
        assert_eq!(ortho_check(&l, &k).unwrap(), Ortho::Neither);
        let l = Matrix::from_i64(&k, &[&[1, 1]]);
        assert_eq!(ortho_check(&l, &k).unwrap_err(), Error::NotSquare);
    }

    #[test]
    fn odeco_screen() {
        let k = q();
        let a = gram_tensor(&parse_form("x1^4+x2^4+6*x1^2*x2^2", &k).unwrap());
        assert!(odeco_precheck(&a).unwrap());
        let a = gram_tensor(&parse_form(SPLIT_CUBIC, &k).unwrap());
        assert!(!odeco_precheck(&a).unwrap());
        let ki = FieldConfig::exact(&[-1]).field().unwrap();
        let a = gram_tensor(&parse_form("x1^3+sqrt(-1)*x2^3", &ki).unwrap());
        assert_eq!(odeco_precheck(&a).unwrap_err(), Error::NotReal);
    }

    #[test]
    fn mismatched_fields() {
        let k2 = FieldConfig::exact(&[2]).field().unwrap();
        let f = parse_form("x1^3+sqrt(2)*x2^3", &k2).unwrap();
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        assert_eq!(dec.verdict, Verdict::Diagonalizable);
        assert!(matches!(
            decompose(&f, &FieldConfig::exact(&[3])),
            Err(Error::FieldMismatch(_))
        ));
        let f = parse_form("x1^2+x2^2", &q());
        assert!(f.is_err());
    }
}
