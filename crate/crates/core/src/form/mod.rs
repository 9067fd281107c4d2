//! Homogeneous forms and their symmetric Gram tensors.
//!
//! A form `f = Σ a_{i₁…i_d} x_{i₁}⋯x_{i_d}` is stored sparsely by exponent
//! vector; its Gram tensor is stored by sorted multi-index, one entry per
//! orbit of index permutations. Indices are 0-based in the API and printed as
//! `x1..xn`.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

pub use parse::{parse_form, parse_form_with_vars, parse_linear_form, parse_scalar};

/// A homogeneous polynomial of degree `d` in `n` variables.
#[derive(Clone, Debug)]
pub struct Form {
    n: usize,
    d: u32,
    field: Field,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.terms == other.terms
    }
}

impl Form {
    pub fn zero(n: usize, d: u32, field: &Field) -> Form {
        Form {
            n,
            d,
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponent vector, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        n: usize,
        d: u32,
        field: &Field,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Form> {
        let mut f = Form::zero(n, d, field);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} for {n} variables",
                    e.len()
                )));
            }
            if e.iter().sum::<u32>() != d {
                return Err(Error::NotHomogeneous);
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        self.field = self.field.widen(&c);
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !self.field.is_zero(&sum) {
            self.terms.insert(e, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Scalar {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.n);
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::DimensionMismatch("adding forms of different shape".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.scale(&other.field.int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(self.n, self.d, &self.field.widen(s));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// The same form over `field` (a wider tower, or C).
    pub fn lift(&self, field: &Field) -> Form {
        Form {
            n: self.n,
            d: self.d,
            field: field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.coerce(c)))
                .collect(),
        }
    }

    /// The form in the variables `vars` only, renumbered in order; other variables must not occur.
    pub fn restrict(&self, vars: &[usize]) -> Form {
        let mut out = Form::zero(vars.len(), self.d, &self.field);
        for (e, c) in &self.terms {
            let sub: Vec<u32> = vars.iter().map(|&v| e[v]).collect();
            if sub.iter().sum::<u32>() == self.d {
                out.add_term(sub, c.clone());
            }
        }
        out
    }

    /// Embeds a form in `k` variables into `n` variables at positions `vars`.
    pub fn embed(&self, n: usize, vars: &[usize]) -> Form {
        let mut out = Form::zero(n, self.d, &self.field);
        for (e, c) in &self.terms {
            let mut full = vec![0u32; n];
            for (&v, &k) in vars.iter().zip(e) {
                full[v] = k;
            }
            out.add_term(full, c.clone());
        }
        out
    }

    /// Largest coefficient modulus under the complex embedding.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    /// Coefficientwise comparison using the field's zero test.
    pub fn approx_eq(&self, other: &Form, field: &Field) -> bool {
        if self.n != other.n || self.d != other.d {
            return false;
        }
        match self.sub(other) {
            Ok(diff) => diff.terms.values().all(|c| field.is_zero(c)),
            Err(_) => false,
        }
    }
}

impl Form {
    /// Canonical text with variables named `{var}1..{var}n`.
    pub fn to_text(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let name = |i: usize| format!("{var}{}", i + 1);
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let term = format_term(e, c, &name);
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

pub(crate) fn format_monomial(e: &[u32], name: &dyn Fn(usize) -> String) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                name(i)
            } else {
                format!("{}^{k}", name(i))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn format_term(e: &[u32], c: &Scalar, name: &dyn Fn(usize) -> String) -> String {
    let mono = format_monomial(e, name);
    let coeff = c.to_string();
    if mono.is_empty() {
        return if c.is_compound() { format!("({coeff})") } else { coeff };
    }
    if c.is_compound() {
        format!("({coeff})*{mono}")
    } else if coeff == "1" {
        mono
    } else if coeff == "-1" {
        format!("-{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}

/// Renders `Σ row[i]·x_{i+1}` in the polynomial grammar.
pub fn format_linear_form(row: &[Scalar]) -> String {
    let n = row.len();
    let mut out = String::new();
    for (i, c) in row.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        let mut e = vec![0u32; n];
        e[i] = 1;
        let term = format_term(&e, c, &|i| format!("x{}", i + 1));
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Fully symmetric `d`-tensor on `kⁿ`, keyed by sorted multi-index.
#[derive(Clone, Debug)]
pub struct SymTensor {
    n: usize,
    d: u32,
    field: Field,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl PartialEq for SymTensor {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.entries == other.entries
    }
}

impl SymTensor {
    pub fn zero(n: usize, d: u32, field: &Field) -> SymTensor {
        SymTensor {
            n,
            d,
            field: field.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Stored (nonzero) entries by sorted index.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, index: &[usize]) -> Scalar {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.entries
            .get(&key)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Sets the entry for the orbit of `index`.
    pub fn set(&mut self, index: &[usize], value: Scalar) -> Result<()> {
        if index.len() != self.d as usize {
            return Err(Error::DimensionMismatch(format!(
                "index of length {} for order {}",
                index.len(),
                self.d
            )));
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange(format!("{bad} >= {}", self.n)));
        }
        let mut key = index.to_vec();
        key.sort_unstable();
        self.field = self.field.widen(&value);
        if self.field.is_zero(&value) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// The `n × n` matrix `(a_{i j tail})_{i,j}`.
    pub fn slice(&self, tail: &[usize]) -> Result<Matrix> {
        if tail.len() + 2 != self.d as usize {
            return Err(Error::DimensionMismatch(format!(
                "slice tail of length {} for order {}",
                tail.len(),
                self.d
            )));
        }
        if let Some(&bad) = tail.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange(format!("{bad} >= {}", self.n)));
        }
        let mut m = Matrix::zeros(self.n, self.n, &self.field);
        let mut idx = vec![0; self.d as usize];
        idx[2..].copy_from_slice(tail);
        for i in 0..self.n {
            for j in i..self.n {
                idx[0] = i;
                idx[1] = j;
                let v = self.get(&idx);
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    /// One slice per sorted tail.
    pub fn slices(&self) -> Vec<Matrix> {
        multisets(self.n, self.d as usize - 2)
            .iter()
            .map(|t| self.slice(t).expect("tail in range"))
            .collect()
    }

    /// Restriction to the coordinates in `vars` (renumbered in order).
    pub fn restrict(&self, vars: &[usize]) -> SymTensor {
        let mut pos = vec![None; self.n];
        for (k, &v) in vars.iter().enumerate() {
            pos[v] = Some(k);
        }
        let mut out = SymTensor::zero(vars.len(), self.d, &self.field);
        for (key, v) in &self.entries {
            if let Some(mapped) = key.iter().map(|&i| pos[i]).collect::<Option<Vec<_>>>() {
                out.set(&mapped, v.clone()).expect("restricted index in range");
            }
        }
        out
    }

    /// The same tensor over `field` (a wider tower, or C).
    pub fn lift(&self, field: &Field) -> SymTensor {
        SymTensor {
            n: self.n,
            d: self.d,
            field: field.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), field.coerce(v)))
                .collect(),
        }
    }

    /// Whether all entries are fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.entries.values().all(|v| self.field.is_real(v))
    }

    fn to_dense(&self) -> Vec<Scalar> {
        let d = self.d as usize;
        let mut dense = vec![self.field.zero(); self.n.pow(self.d)];
        for (key, v) in &self.entries {
            for perm in distinct_permutations(key) {
                dense[dense_index(&perm, self.n)] = v.clone();
            }
        }
        debug_assert_eq!(dense.len(), self.n.pow(d as u32));
        dense
    }
}

fn dense_index(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// All sorted multi-indices of length `d` over `0..n`.
pub fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::with_capacity(d), &mut out);
    out
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

pub(crate) fn exponents_of(index: &[usize], n: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for &i in index {
        e[i] += 1;
    }
    e
}

pub(crate) fn index_of(exponents: &[u32]) -> Vec<usize> {
    exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
        .collect()
}

/// `d! / (m₁! ⋯ mₙ!)`.
pub fn multinomial(exponents: &[u32]) -> BigInt {
    let d: u32 = exponents.iter().sum();
    let mut num = factorial(d);
    for &k in exponents {
        num /= factorial(k);
    }
    num
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Gram tensor of `f`: each coefficient divided by its multinomial count.
pub fn gram_tensor(f: &Form) -> SymTensor {
    let mut t = SymTensor::zero(f.n, f.d, &f.field);
    for (e, c) in &f.terms {
        let m = f.field.rational(BigRational::from_integer(multinomial(e)));
        let v = c * &m.inv().expect("multinomial is positive");
        t.set(&index_of(e), v).expect("index in range");
    }
    t
}

/// Inverse of [`gram_tensor`].
pub fn form_from_gram(a: &SymTensor) -> Form {
    let mut f = Form::zero(a.n, a.d, &a.field);
    for (key, v) in &a.entries {
        let e = exponents_of(key, a.n);
        let m = a.field.rational(BigRational::from_integer(multinomial(&e)));
        f.add_term(e, v * &m);
    }
    f
}

/// The `d`-congruence `A P^d`: `B_{j₁…j_d} = Σ a_{i₁…i_d} p_{i₁j₁}⋯p_{i_dj_d}`,
/// i.e. the Gram tensor of `f(P y)`.
pub fn congruence(a: &SymTensor, p: &Matrix) -> Result<SymTensor> {
    let n = a.n;
    if !p.is_square() || p.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} change of variables for {n} variables",
            p.rows(),
            p.cols()
        )));
    }
    let mut field = a.field.clone();
    for x in p.entries() {
        field = field.widen(x);
    }
    let d = a.d as usize;
    let total = n.pow(a.d);
    let zero = field.zero();
    let mut cur = a.to_dense();
    for mode in 0..d {
        let stride = n.pow((d - 1 - mode) as u32);
        let mut next = vec![zero.clone(); total];
        for (idx, v) in cur.iter().enumerate() {
            if v.is_exact_zero() {
                continue;
            }
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            for j in 0..n {
                let pij = &p[(i, j)];
                if pij.is_exact_zero() {
                    continue;
                }
                let slot = base + j * stride;
                next[slot] = &next[slot] + &(v * pij);
            }
        }
        cur = next;
    }
    let mut out = SymTensor::zero(n, a.d, &field);
    for key in multisets(n, d) {
        let v = cur[dense_index(&key, n)].clone();
        out.set(&key, v)?;
    }
    Ok(out)
}

/// Hessian `(∂²f/∂xᵢ∂xⱼ)` evaluated at `p`.
pub fn hessian_at(f: &Form, p: &[Scalar]) -> Matrix {
    assert_eq!(p.len(), f.n);
    let n = f.n;
    let mut h = Matrix::zeros(n, n, &f.field);
    for (e, c) in &f.terms {
        for i in 0..n {
            for j in i..n {
                let mut e2 = e.clone();
                let factor = if i == j {
                    if e[i] < 2 {
                        continue;
                    }
                    e2[i] -= 2;
                    e[i] as i64 * (e[i] as i64 - 1)
                } else {
                    if e[i] == 0 || e[j] == 0 {
                        continue;
                    }
                    e2[i] -= 1;
                    e2[j] -= 1;
                    e[i] as i64 * e[j] as i64
                };
                let mut t = c * &f.field.int(factor);
                for (x, &k) in p.iter().zip(&e2) {
                    if k > 0 {
                        t = &t * &x.pow(k);
                    }
                }
                h[(i, j)] = &h[(i, j)] + &t;
                if i != j {
                    h[(j, i)] = h[(i, j)].clone();
                }
            }
        }
    }
    h
}
