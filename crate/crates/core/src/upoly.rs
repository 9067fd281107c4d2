//! Univariate polynomials over the working field.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::complex::Complex64;
use num::{Integer, One, Signed, Zero};

use crate::form::format_term;
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>, field: &Field) -> UPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], field: &Field) -> UPoly {
        UPoly::new(coeffs.iter().map(|&c| field.int(c)).collect(), field)
    }

    pub fn zero() -> UPoly {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> UPoly {
        UPoly {
            coeffs: vec![field.one()],
        }
    }

    /// `t − a`.
    pub fn linear(a: &Scalar, field: &Field) -> UPoly {
        UPoly {
            coeffs: vec![-a, field.one()],
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                UPoly {
                    coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
                }
            }
        }
    }

    pub fn add(&self, other: &UPoly, field: &Field) -> UPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UPoly::new(coeffs, field)
    }

    pub fn sub(&self, other: &UPoly, field: &Field) -> UPoly {
        self.add(&other.scale(&field.int(-1), field), field)
    }

    pub fn scale(&self, s: &Scalar, field: &Field) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * s).collect(), field)
    }

    pub fn mul(&self, other: &UPoly, field: &Field) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out, field)
    }

    pub fn pow(&self, k: u32, field: &Field) -> UPoly {
        (0..k).fold(UPoly::one(field), |acc, _| acc.mul(self, field))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &UPoly, field: &Field) -> (UPoly, UPoly) {
        let lc = divisor.leading().expect("division by the zero polynomial");
        let inv = lc.inv().expect("nonzero leading coefficient");
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_exact_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot, field), UPoly::new(rem, field))
    }

    pub fn rem(&self, divisor: &UPoly, field: &Field) -> UPoly {
        self.divrem(divisor, field).1
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &UPoly, field: &Field) -> Option<UPoly> {
        let (q, r) = self.divrem(divisor, field);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly, field: &Field) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, field);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &UPoly, field: &Field) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(field), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, field);
            let s = s0.sub(&q.mul(&s1, field), field);
            let t = t0.sub(&q.mul(&t1, field), field);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = match r0.leading() {
            Some(lc) => lc.inv().expect("nonzero"),
            None => return (r0, s0, t0),
        };
        (
            r0.scale(&inv, field),
            s0.scale(&inv, field),
            t0.scale(&inv, field),
        )
    }

    pub fn derivative(&self, field: &Field) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &field.int(i as i64))
                .collect(),
            field,
        )
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self, field: &Field) -> UPoly {
        let g = self.gcd(&self.derivative(field), field);
        self.div_exact(&g, field).expect("gcd divides").monic()
    }

    pub fn eval(&self, x: &Scalar, field: &Field) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, x: &Matrix, field: &Field) -> Matrix {
        let n = x.rows();
        let mut acc = Matrix::zeros(n, n, field);
        let id = Matrix::identity(n, field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &id.scale(c);
        }
        acc
    }

    /// Whether every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(Scalar::as_rational).collect()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Option<Vec<BigInt>> {
        let q = self.rational_coeffs()?;
        let lcm = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = q.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return Some(ints);
        }
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Some(ints.iter().map(|c| c / &content * &sign).collect())
    }

    /// Image under a Galois automorphism of the tower.
    pub fn automorphism(&self, mask: usize) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.automorphism(mask)).collect(),
        }
    }

    pub fn lift(&self, field: &Field) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| field.lift(c)).collect(),
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() || (!c.is_exact() && c.to_complex().norm() == 0.0) {
                continue;
            }
            let term = format_term(&[k as u32], c, &|_| "t".to_string());
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn division_and_gcd() {
        let k = q();
        let a = UPoly::from_i64(&[-1, 0, 1], &k);
        let b = UPoly::from_i64(&[-1, 1], &k);
        let (qq, r) = a.divrem(&b, &k);
        assert_eq!(qq, UPoly::from_i64(&[1, 1], &k));
        assert!(r.is_zero());
        let c = UPoly::from_i64(&[1, 2, 1], &k);
        assert_eq!(a.gcd(&c, &k), UPoly::from_i64(&[1, 1], &k));
        let (g, s, t) = a.ext_gcd(&UPoly::from_i64(&[2, 1], &k), &k);
        assert_eq!(g, UPoly::one(&k));
        let combo = s.mul(&a, &k).add(&t.mul(&UPoly::from_i64(&[2, 1], &k), &k), &k);
        assert_eq!(combo, g);
    }

    #[test]
    fn squarefree_parts_and_display() {
        let k = q();
        let p = UPoly::from_i64(&[-1, 1], &k).pow(3, &k).mul(&UPoly::from_i64(&[2, 1], &k), &k);
        assert_eq!(p.squarefree_part(&k), UPoly::from_i64(&[-2, 1, 1], &k));
        assert_eq!(UPoly::from_i64(&[1, -6, 1], &k).to_string(), "t^2-6*t+1");
        assert_eq!(UPoly::from_i64(&[-1, 1], &k).to_string(), "t-1");
    }

    #[test]
    fn primitive_integer_form() {
        let k = q();
        let p = UPoly::new(vec![k.ratio(1, 2), k.ratio(-3, 4), k.int(3)], &k);
        let ints = p.primitive_integer().unwrap();
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(12)]);
    }

    #[test]
    fn matrix_evaluation() {
        let k = q();
        let x = Matrix::from_i64(&k, &[&[0, 1], &[-1, 6]]);
        let mu = UPoly::from_i64(&[1, -6, 1], &k);
        assert!(mu.eval_matrix(&x, &k).is_zero(&k));
    }
}
