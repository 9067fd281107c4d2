//! Working-field arithmetic.
//!
//! Exact scalars live in a tower `Q(√m₁, …, √m_k)` of quadratic extensions and
//! are stored as `2^k` rational coordinates over the basis `{∏ √mᵢ^eᵢ}`; the
//! coordinate index is the bitmask `e` of radicals present. New radicands are
//! always appended as the highest bit, so an element of a smaller tower embeds
//! into a larger one by zero padding. Binary operations on elements of two
//! nested towers lift the smaller operand automatically.
//!
//! Float scalars are complex doubles; zero tests go through [`Field::is_zero`],
//! which applies the configured absolute tolerance.

use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Selects the working field for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub mode: Mode,
    /// Squarefree integers whose square roots are adjoined to Q (exact mode only).
    pub adjoined: Vec<i64>,
    /// Absolute tolerance for zero tests (float mode only).
    pub tolerance: f64,
    /// How many further square roots the idempotent splitter may adjoin on its own.
    pub max_adjoin: usize,
}

impl FieldConfig {
    pub fn rational() -> Self {
        Self::exact(&[])
    }

    pub fn exact(adjoined: &[i64]) -> Self {
        FieldConfig {
            mode: Mode::Exact,
            adjoined: adjoined.to_vec(),
            tolerance: DEFAULT_TOLERANCE,
            max_adjoin: 0,
        }
    }

    pub fn float(tolerance: f64) -> Self {
        FieldConfig {
            mode: Mode::Float,
            adjoined: Vec::new(),
            tolerance,
            max_adjoin: 0,
        }
    }

    pub fn with_max_adjoin(mut self, max_adjoin: usize) -> Self {
        self.max_adjoin = max_adjoin;
        self
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self)
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self::rational()
    }
}

/// A tower `Q(√m₁, …, √m_k)` with its multiplication table.
#[derive(Debug)]
pub struct Tower {
    radicands: Vec<i64>,
    /// `common[mask]` is the product of the radicands selected by `mask`;
    /// `b_e · b_f = common[e & f] · b_{e ^ f}`.
    common: Vec<BigRational>,
    /// Bits of negative radicands (their roots are imaginary).
    neg_mask: usize,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.radicands == other.radicands
    }
}

impl Eq for Tower {}

impl Tower {
    pub fn new(radicands: Vec<i64>) -> Result<Self> {
        for &m in &radicands {
            if m == 0 || m == 1 {
                return Err(Error::InvalidConfig(format!("cannot adjoin sqrt({m})")));
            }
            if !is_squarefree_i64(m) {
                return Err(Error::InvalidConfig(format!("{m} is not squarefree")));
            }
        }
        let k = radicands.len();
        if k > 16 {
            return Err(Error::InvalidConfig("tower too deep".into()));
        }
        let mut common = Vec::with_capacity(1 << k);
        let mut neg_mask = 0;
        for mask in 0..(1usize << k) {
            let mut prod = BigInt::one();
            for (i, &m) in radicands.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod *= m;
                }
            }
            if mask != 0 && is_perfect_square(&prod) {
                let subset: Vec<i64> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| radicands[i])
                    .collect();
                return Err(Error::InvalidConfig(format!(
                    "radicands {subset:?} multiply to a perfect square"
                )));
            }
            common.push(BigRational::from_integer(prod));
        }
        for (i, &m) in radicands.iter().enumerate() {
            if m < 0 {
                neg_mask |= 1 << i;
            }
        }
        Ok(Tower {
            radicands,
            common,
            neg_mask,
        })
    }

    pub fn radicands(&self) -> &[i64] {
        &self.radicands
    }

    pub fn depth(&self) -> usize {
        self.radicands.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.radicands.len()
    }

    fn basis_value(&self, mask: usize) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for (i, &m) in self.radicands.iter().enumerate() {
            if mask & (1 << i) != 0 {
                v *= Complex64::new(m as f64, 0.0).sqrt();
            }
        }
        v
    }

    fn basis_name(&self, mask: usize) -> String {
        (0..self.depth())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| format!("sqrt({})", self.radicands[i]))
            .collect::<Vec<_>>()
            .join("*")
    }

    fn is_prefix_of(&self, other: &Tower) -> bool {
        other.radicands.len() >= self.radicands.len()
            && other.radicands[..self.radicands.len()] == self.radicands[..]
    }

    fn mul_coords(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len()];
        for (e, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (f, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut term = x * y;
                if e & f != 0 {
                    term *= &self.common[e & f];
                }
                out[e ^ f] += term;
            }
        }
        out
    }

    fn radicand_at(&self, len: usize) -> BigRational {
        let level = len.trailing_zeros() as usize;
        BigRational::from_integer(BigInt::from(self.radicands[level - 1]))
    }

    fn inv_coords(&self, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if a.len() == 1 {
            return if a[0].is_zero() {
                None
            } else {
                Some(vec![a[0].recip()])
            };
        }
        let half = a.len() / 2;
        let (x, y) = a.split_at(half);
        let m = self.radicand_at(a.len());
        let xx = self.mul_coords(x, x);
        let yy = self.mul_coords(y, y);
        let norm: Vec<BigRational> = xx.iter().zip(&yy).map(|(p, q)| p - &m * q).collect();
        let ninv = self.inv_coords(&norm)?;
        let mut out = self.mul_coords(x, &ninv);
        out.extend(self.mul_coords(y, &ninv).into_iter().map(|v| -v));
        Some(out)
    }

    /// Some square root of `a` inside the tower, if one exists.
    fn sqrt_coords(&self, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if a.len() == 1 {
            return rational_sqrt(&a[0]).map(|r| vec![r]);
        }
        let half = a.len() / 2;
        let (x, y) = a.split_at(half);
        let m = self.radicand_at(a.len());
        let zeros = || vec![BigRational::zero(); half];
        if y.iter().all(Zero::is_zero) {
            if let Some(r) = self.sqrt_coords(x) {
                let mut out = r;
                out.extend(zeros());
                return Some(out);
            }
            let scaled: Vec<BigRational> = x.iter().map(|v| v / &m).collect();
            if let Some(s) = self.sqrt_coords(&scaled) {
                let mut out = zeros();
                out.extend(s);
                return Some(out);
            }
            return None;
        }
        let xx = self.mul_coords(x, x);
        let yy = self.mul_coords(y, y);
        let norm: Vec<BigRational> = xx.iter().zip(&yy).map(|(p, q)| p - &m * q).collect();
        let n = self.sqrt_coords(&norm)?;
        let two = BigRational::from_integer(BigInt::from(2));
        for sign in [1i32, -1] {
            let u2: Vec<BigRational> = x
                .iter()
                .zip(&n)
                .map(|(p, q)| if sign > 0 { (p + q) / &two } else { (p - q) / &two })
                .collect();
            let Some(u) = self.sqrt_coords(&u2) else {
                continue;
            };
            if u.iter().all(Zero::is_zero) {
                continue;
            }
            let two_u: Vec<BigRational> = u.iter().map(|v| v * &two).collect();
            let inv = self.inv_coords(&two_u)?;
            let v = self.mul_coords(y, &inv);
            let mut out = u;
            out.extend(v);
            return Some(out);
        }
        None
    }
}

/// Element of a quadratic tower.
#[derive(Clone, Debug)]
pub struct TowerElem {
    tower: Arc<Tower>,
    coords: Vec<BigRational>,
}

impl TowerElem {
    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn nonzero_terms(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }
}

fn pad(coords: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = coords.to_vec();
    out.resize(len, BigRational::zero());
    out
}

type Aligned<'a> = (Arc<Tower>, Cow<'a, [BigRational]>, Cow<'a, [BigRational]>);

fn align<'a>(a: &'a TowerElem, b: &'a TowerElem) -> Aligned<'a> {
    if Arc::ptr_eq(&a.tower, &b.tower) || a.tower == b.tower {
        return (
            a.tower.clone(),
            Cow::Borrowed(&a.coords),
            Cow::Borrowed(&b.coords),
        );
    }
    if a.tower.is_prefix_of(&b.tower) {
        let len = b.tower.dim();
        (
            b.tower.clone(),
            Cow::Owned(pad(&a.coords, len)),
            Cow::Borrowed(&b.coords),
        )
    } else if b.tower.is_prefix_of(&a.tower) {
        let len = a.tower.dim();
        (
            a.tower.clone(),
            Cow::Borrowed(&a.coords),
            Cow::Owned(pad(&b.coords, len)),
        )
    } else {
        panic!(
            "scalars from incompatible towers {:?} and {:?}",
            a.tower.radicands, b.tower.radicands
        )
    }
}

/// An element of the working field.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(TowerElem),
    Float(Complex64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let (_, x, y) = align(a, b);
                x == y
            }
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Zero test without tolerance.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Float(z) => *z == Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(TowerElem {
                tower: e.tower.clone(),
                coords: vec![BigRational::zero(); e.coords.len()],
            }),
            Scalar::Float(_) => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one_like(&self) -> Scalar {
        self.from_i64_like(1)
    }

    pub fn from_i64_like(&self, v: i64) -> Scalar {
        match self {
            Scalar::Exact(e) => {
                let mut coords = vec![BigRational::zero(); e.coords.len()];
                coords[0] = BigRational::from_integer(BigInt::from(v));
                Scalar::Exact(TowerElem {
                    tower: e.tower.clone(),
                    coords,
                })
            }
            Scalar::Float(_) => Scalar::Float(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        match self {
            Scalar::Exact(e) => Some(&e.tower),
            Scalar::Float(_) => None,
        }
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(e) if e.coords[1..].iter().all(Zero::is_zero) => Some(e.coords[0].clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Image under the fixed embedding into C (principal square roots).
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Float(z) => *z,
            Scalar::Exact(e) => e
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(mask, c)| e.tower.basis_value(mask) * c.to_f64().unwrap_or(f64::NAN))
                .sum(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(e) => e
                .tower
                .inv_coords(&e.coords)
                .map(|coords| {
                    Scalar::Exact(TowerElem {
                        tower: e.tower.clone(),
                        coords,
                    })
                })
                .ok_or(Error::DivisionByZero),
            Scalar::Float(z) => {
                if z.norm() == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(z.inv()))
                }
            }
        }
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugate. In a tower this negates every coordinate carrying an
    /// odd number of imaginary radicals.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Float(z) => Scalar::Float(z.conj()),
            Scalar::Exact(e) => self.automorphism(e.tower.neg_mask),
        }
    }

    /// The Galois automorphism flipping the sign of every radical selected by `mask`.
    pub fn automorphism(&self, mask: usize) -> Scalar {
        match self {
            Scalar::Float(_) => self.clone(),
            Scalar::Exact(e) => Scalar::Exact(TowerElem {
                tower: e.tower.clone(),
                coords: e
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if (i & mask).count_ones() % 2 == 1 {
                            -c
                        } else {
                            c.clone()
                        }
                    })
                    .collect(),
            }),
        }
    }

    /// Whether printing this scalar as a coefficient needs parentheses.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.nonzero_terms() > 1,
            Scalar::Float(z) => z.re != 0.0 && z.im != 0.0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write_float_imag(f, z.im, true)
                } else {
                    write!(f, "{}", z.re)?;
                    write_float_imag(f, z.im, false)
                }
            }
            Scalar::Exact(e) => {
                let mut first = true;
                for (mask, c) in e.coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let abs = c.abs();
                    if neg {
                        write!(f, "-")?;
                    } else if !first {
                        write!(f, "+")?;
                    }
                    if mask == 0 {
                        write!(f, "{abs}")?;
                    } else if abs.is_one() {
                        write!(f, "{}", e.tower.basis_name(mask))?;
                    } else {
                        write!(f, "{abs}*{}", e.tower.basis_name(mask))?;
                    }
                    first = false;
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

fn write_float_imag(f: &mut fmt::Formatter<'_>, im: f64, leading: bool) -> fmt::Result {
    if im < 0.0 {
        write!(f, "-")?;
    } else if !leading {
        write!(f, "+")?;
    }
    let a = im.abs();
    if a == 1.0 {
        write!(f, "sqrt(-1)")
    } else {
        write!(f, "{a}*sqrt(-1)")
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&Tower, &[BigRational], &[BigRational]) -> Vec<BigRational>,
    float: impl Fn(Complex64, Complex64) -> Complex64,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => {
            let (tower, p, q) = align(x, y);
            let coords = exact(&tower, &p, &q);
            Scalar::Exact(TowerElem { tower, coords })
        }
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(float(*x, *y)),
        _ => panic!("mixing exact and float scalars"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(
            self,
            rhs,
            |_, p, q| p.iter().zip(q).map(|(x, y)| x + y).collect(),
            |x, y| x + y,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(
            self,
            rhs,
            |_, p, q| p.iter().zip(q).map(|(x, y)| x - y).collect(),
            |x, y| x - y,
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |t, p, q| t.mul_coords(p, q), |x, y| x * y)
    }
}

/// Panics on division by an exact zero; use [`Scalar::inv`] to handle it.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(TowerElem {
                tower: e.tower.clone(),
                coords: e.coords.iter().map(|c| -c).collect(),
            }),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// What must be adjoined for a square root to exist.
#[derive(Clone, Debug, PartialEq)]
pub enum Radicand {
    /// A squarefree integer `m`: adjoining `√m` suffices.
    Integer(i64),
    /// A non-rational tower element; quadratic towers over Q cannot adjoin it.
    Element(Scalar),
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radicand::Integer(m) => write!(f, "{m}"),
            Radicand::Element(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SqrtResult {
    Root(Scalar),
    NeedsExtension(Radicand),
}

/// The working field: a quadratic tower over Q, or C with a tolerance.
#[derive(Clone, Debug)]
pub enum Field {
    Exact(Arc<Tower>),
    Float(f64),
}

impl Field {
    pub fn new(cfg: &FieldConfig) -> Result<Field> {
        match cfg.mode {
            Mode::Exact => Ok(Field::Exact(Arc::new(Tower::new(cfg.adjoined.clone())?))),
            Mode::Float => {
                if !cfg.adjoined.is_empty() {
                    return Err(Error::InvalidConfig(
                        "float mode does not take adjoined radicals".into(),
                    ));
                }
                if !(cfg.tolerance >= 0.0) {
                    return Err(Error::InvalidConfig("tolerance must be nonnegative".into()));
                }
                Ok(Field::Float(cfg.tolerance))
            }
        }
    }

    pub fn rationals() -> Field {
        Field::Exact(Arc::new(Tower::new(Vec::new()).expect("Q is a field")))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Field::Exact(_))
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Field::Exact(_) => 0.0,
            Field::Float(t) => *t,
        }
    }

    pub fn radicands(&self) -> &[i64] {
        match self {
            Field::Exact(t) => t.radicands(),
            Field::Float(_) => &[],
        }
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        match self {
            Field::Exact(t) => Some(t),
            Field::Float(_) => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        self.rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(&self, q: BigRational) -> Scalar {
        match self {
            Field::Exact(t) => {
                let mut coords = vec![BigRational::zero(); t.dim()];
                coords[0] = q;
                Scalar::Exact(TowerElem {
                    tower: t.clone(),
                    coords,
                })
            }
            Field::Float(_) => Scalar::Float(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    pub fn complex(&self, z: Complex64) -> Result<Scalar> {
        match self {
            Field::Float(_) => Ok(Scalar::Float(z)),
            Field::Exact(_) => Err(Error::FieldMismatch(format!("float literal {z} in exact mode"))),
        }
    }

    /// Zero test: exact in a tower, `|z| ≤ tol` in float mode.
    pub fn is_zero(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Float(tol), Scalar::Float(z)) => z.norm() <= *tol,
            _ => s.is_exact_zero(),
        }
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.is_zero(&(a - b))
    }

    /// Magnitude used for pivot selection.
    pub fn magnitude(&self, s: &Scalar) -> f64 {
        s.to_complex().norm()
    }

    /// Whether `s` is fixed by complex conjugation.
    pub fn is_real(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Float(z) => z.im.abs() <= self.tolerance(),
            Scalar::Exact(_) => s.conj() == *s,
        }
    }

    /// The field with `√m` appended to the tower.
    pub fn extend(&self, m: i64) -> Result<Field> {
        match self {
            Field::Exact(t) => {
                let mut r = t.radicands.clone();
                r.push(m);
                Ok(Field::Exact(Arc::new(Tower::new(r)?)))
            }
            Field::Float(_) => Err(Error::InvalidConfig("cannot extend float field".into())),
        }
    }

    /// The smallest of `self` and the tower of `s` that contains both.
    pub fn widen(&self, s: &Scalar) -> Field {
        match (self, s) {
            (Field::Exact(t), Scalar::Exact(e)) if t.depth() < e.tower.depth() => {
                assert!(t.is_prefix_of(&e.tower), "incompatible towers");
                Field::Exact(e.tower.clone())
            }
            _ => self.clone(),
        }
    }

    /// Lift `s` into this field's tower (no-op in float mode).
    pub fn lift(&self, s: &Scalar) -> Scalar {
        match (self, s) {
            (Field::Exact(t), Scalar::Exact(e)) if !Arc::ptr_eq(t, &e.tower) => {
                assert!(e.tower.is_prefix_of(t), "cannot lift into a smaller tower");
                Scalar::Exact(TowerElem {
                    tower: t.clone(),
                    coords: pad(&e.coords, t.dim()),
                })
            }
            _ => s.clone(),
        }
    }

    /// `s` as an element of this field: lifted into a wider tower, or embedded in C.
    pub fn coerce(&self, s: &Scalar) -> Scalar {
        match (self, s) {
            (Field::Float(_), Scalar::Exact(_)) => Scalar::Float(s.to_complex()),
            _ => self.lift(s),
        }
    }

    /// The principal square root of the integer `m`, if it lies in the field.
    pub fn sqrt_int(&self, m: i64) -> Option<Scalar> {
        match self {
            Field::Float(_) => Some(Scalar::Float(Complex64::new(m as f64, 0.0).sqrt())),
            Field::Exact(t) => {
                if m == 0 {
                    return Some(self.zero());
                }
                let coords = t.sqrt_coords(&pad(
                    &[BigRational::from_integer(BigInt::from(m))],
                    t.dim(),
                ))?;
                let root = Scalar::Exact(TowerElem {
                    tower: t.clone(),
                    coords,
                });
                let want = Complex64::new(m as f64, 0.0).sqrt();
                let got = root.to_complex();
                if (got - want).norm() <= (got + want).norm() {
                    Some(root)
                } else {
                    Some(-&root)
                }
            }
        }
    }

    /// A square root of `a` in the current field, or what must be adjoined to get one.
    pub fn try_sqrt(&self, a: &Scalar) -> SqrtResult {
        match (self, a) {
            (Field::Float(_), Scalar::Float(z)) => SqrtResult::Root(Scalar::Float(z.sqrt())),
            (Field::Exact(_), Scalar::Exact(_)) => {
                let a = self.lift(a);
                let Scalar::Exact(e) = &a else { unreachable!() };
                match e.tower.sqrt_coords(&e.coords) {
                    Some(coords) => SqrtResult::Root(Scalar::Exact(TowerElem {
                        tower: e.tower.clone(),
                        coords,
                    })),
                    None => match a.as_rational() {
                        Some(q) => match squarefree_class(&q).to_i64() {
                            Some(m) => SqrtResult::NeedsExtension(Radicand::Integer(m)),
                            None => SqrtResult::NeedsExtension(Radicand::Element(a.clone())),
                        },
                        None => SqrtResult::NeedsExtension(Radicand::Element(a.clone())),
                    },
                }
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    /// Number of Galois automorphisms of the tower over Q.
    pub fn automorphism_count(&self) -> usize {
        match self {
            Field::Exact(t) => t.dim(),
            Field::Float(_) => 1,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Float(tol) => write!(f, "C (tol {tol:e})"),
            Field::Exact(t) => {
                write!(f, "Q")?;
                if !t.radicands.is_empty() {
                    let r: Vec<String> = t.radicands.iter().map(|m| format!("sqrt({m})")).collect();
                    write!(f, "({})", r.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

fn is_squarefree_i64(m: i64) -> bool {
    let mut n = m.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Squarefree part of a nonzero integer, sign included.
///
/// Trial division runs to 10⁶; a leftover cofactor that is not a perfect square
/// is kept whole, so for inputs with two large repeated prime factors the
/// result may not be squarefree.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut odd = false;
        while (&rest % &p).is_zero() {
            rest /= &p;
            odd = !odd;
        }
        if odd {
            out *= &p;
        }
        p += 1u32;
    }
    if !is_perfect_square(&rest) {
        out *= rest;
    }
    sign * out
}

/// Squarefree integer `m` with `q = m · (rational square)`.
pub fn squarefree_class(q: &BigRational) -> BigInt {
    squarefree_part(&(q.numer() * q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn tower(r: &[i64]) -> Field {
        FieldConfig::exact(r).field().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let k = tower(&[2]);
        let s = k.sqrt_int(2).unwrap();
        let a = &k.one() + &s;
        let b = &k.one() - &s;
        assert_eq!(&a * &b, k.int(-1));
    }

    #[test]
    fn defining_relation() {
        let k = tower(&[-3]);
        let s = k.sqrt_int(-3).unwrap();
        assert_eq!(&s * &s, k.int(-3));
    }

    #[test]
    fn omega_squared() {
        let k = tower(&[-3]);
        let s = k.sqrt_int(-3).unwrap();
        let half = k.ratio(1, 2);
        let omega = &(-&half) + &(&half * &s);
        let expected = &(-&half) - &(&half * &s);
        assert_eq!(&omega * &omega, expected);
        assert_eq!(omega.pow(3), k.one());
    }

    #[test]
    fn inverses() {
        assert_eq!(q().int(2).inv().unwrap(), q().ratio(1, 2));
        let k = tower(&[2]);
        let s = k.sqrt_int(2).unwrap();
        assert_eq!(s.inv().unwrap(), &s * &k.ratio(1, 2));
        let a = &k.one() + &s;
        assert_eq!(a.inv().unwrap(), &k.int(-1) + &s);
        assert_eq!(k.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn deep_inverse() {
        let k = tower(&[2, -1, 5]);
        let a = &(&k.sqrt_int(2).unwrap() + &k.sqrt_int(-1).unwrap()) + &k.sqrt_int(10).unwrap();
        let a = &a + &k.ratio(3, 7);
        assert_eq!(&a * &a.inv().unwrap(), k.one());
    }

    #[test]
    fn try_sqrt_examples() {
        assert_eq!(q().try_sqrt(&q().int(4)), SqrtResult::Root(q().int(2)));
        assert_eq!(
            q().try_sqrt(&q().int(2)),
            SqrtResult::NeedsExtension(Radicand::Integer(2))
        );
        assert_eq!(
            q().try_sqrt(&q().ratio(-12, 25)),
            SqrtResult::NeedsExtension(Radicand::Integer(-3))
        );
        let k = tower(&[2]);
        let s = k.sqrt_int(2).unwrap();
        let a = &k.int(3) + &(&k.int(2) * &s);
        match k.try_sqrt(&a) {
            SqrtResult::Root(r) => {
                assert_eq!(&r * &r, a);
                let expected = &k.one() + &s;
                assert!(r == expected || r == -&expected);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sqrt_of_composite_radicand() {
        let k = tower(&[-1, 3]);
        let r = k.sqrt_int(-3).unwrap();
        assert_eq!(&r * &r, k.int(-3));
        let z = r.to_complex();
        assert!(z.re.abs() < 1e-12 && (z.im - 3f64.sqrt()).abs() < 1e-12);
        let r12 = k.sqrt_int(12).unwrap();
        assert!((r12.to_complex().re - 12f64.sqrt()).abs() < 1e-12);
        assert!(k.sqrt_int(5).is_none());
    }

    #[test]
    fn rejects_dependent_radicands() {
        assert!(matches!(Tower::new(vec![2, 8]), Err(Error::InvalidConfig(_))));
        assert!(matches!(Tower::new(vec![2, 3, 6]), Err(Error::InvalidConfig(_))));
        assert!(matches!(Tower::new(vec![2, 2]), Err(Error::InvalidConfig(_))));
        assert!(matches!(Tower::new(vec![1]), Err(Error::InvalidConfig(_))));
        assert!(matches!(Tower::new(vec![-1, -3, 3]), Err(Error::InvalidConfig(_))));
        assert!(Tower::new(vec![-1, 2, 3]).is_ok());
    }

    #[test]
    fn lifting_across_towers() {
        let k1 = tower(&[2]);
        let k2 = k1.extend(3).unwrap();
        let a = k1.sqrt_int(2).unwrap();
        let b = k2.sqrt_int(3).unwrap();
        let p = &a * &b;
        assert_eq!(p, k2.sqrt_int(6).unwrap());
        assert_eq!(p.tower().unwrap().radicands(), &[2, 3]);
    }

    #[test]
    fn conjugation_negates_imaginary_parts() {
        let k = tower(&[-1, 2]);
        let i = k.sqrt_int(-1).unwrap();
        let s = k.sqrt_int(2).unwrap();
        let a = &(&k.one() + &i) + &(&i * &s);
        let c = a.conj();
        assert!((c.to_complex() - a.to_complex().conj()).norm() < 1e-12);
        assert!(k.is_real(&s));
        assert!(!k.is_real(&i));
    }

    #[test]
    fn display_forms() {
        let k = tower(&[2]);
        let s = k.sqrt_int(2).unwrap();
        assert_eq!(format!("{}", &k.one() - &s), "1-sqrt(2)");
        assert_eq!(format!("{}", &k.ratio(3, 2) * &s), "3/2*sqrt(2)");
        assert_eq!(format!("{}", -&s), "-sqrt(2)");
        assert_eq!(format!("{}", k.zero()), "0");
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(72)), BigInt::from(2));
        assert_eq!(squarefree_part(&BigInt::from(-27)), BigInt::from(-3));
        assert_eq!(squarefree_part(&BigInt::from(1)), BigInt::from(1));
    }
}
