//! Factorization of squarefree polynomials over a quadratic tower.
//!
//! Over Q, candidate factors come from subsets of numerically located roots
//! and are confirmed by exact division. Over a tower K, the norm of a
//! shifted polynomial is factored over Q and the factors are recovered by gcds
//! over K. Quadratic factors are split by the quadratic formula, extending
//! the tower by the discriminant when the budget allows.

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};

use crate::scalar::{Field, Radicand, Scalar, SqrtResult};
use crate::upoly::UPoly;

/// Largest number of root subsets tried per subset size.
const SUBSET_LIMIT: u128 = 50_000;

#[derive(Clone, Debug, PartialEq)]
pub enum FactorKind {
    Linear,
    /// Irreducible quadratic whose discriminant has no square root in the field.
    Quadratic { needs: Radicand },
    /// Degree at least 3; `proven` is false when the search was cut short.
    Higher { proven: bool },
}

#[derive(Clone, Debug)]
pub struct Factor {
    /// Monic.
    pub poly: UPoly,
    pub kind: FactorKind,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// The field the factors live in, possibly extended.
    pub field: Field,
    /// Radicands adjoined during factorization, in order.
    pub adjoined: Vec<i64>,
    pub factors: Vec<Factor>,
}

/// Complex roots of a polynomial, from companion-matrix eigenvalues polished by Newton steps.
pub fn numeric_roots(p: &UPoly) -> Vec<Complex64> {
    let deg = p.degree();
    if p.is_zero() || deg == 0 {
        return Vec::new();
    }
    let c: Vec<Complex64> = p.coeffs().iter().map(Scalar::to_complex).collect();
    let lc = c[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lc;
    }
    let (_, t) = m.schur().unpack();
    let dp: Vec<Complex64> = (1..=deg).map(|k| c[k] * k as f64).collect();
    let eval = |cs: &[Complex64], z: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * z + k);
    (0..deg)
        .map(|i| {
            let mut z = t[(i, i)];
            for _ in 0..8 {
                let fz = eval(&c, z);
                let d = eval(&dp, z);
                if d.norm() == 0.0 {
                    break;
                }
                let next = z - fz / d;
                if eval(&c, next).norm() < fz.norm() {
                    z = next;
                } else {
                    break;
                }
            }
            z
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn round_to_rational(x: f64, denom: &BigInt) -> Option<BigRational> {
    let d = denom.to_f64()?;
    let v = (x * d).round();
    if !v.is_finite() {
        return None;
    }
    Some(BigRational::new(BigInt::from(v as i128), denom.clone()))
}

/// Monic factors of a squarefree rational polynomial over Q, with an
/// irreducibility flag per factor.
pub fn factor_rational(p: &UPoly, field: &Field) -> Vec<(UPoly, bool)> {
    let p = p.monic();
    if p.degree() <= 1 {
        return vec![(p, true)];
    }
    let ints = p.primitive_integer().expect("rational coefficients");
    let lead = ints.last().cloned().expect("nonzero polynomial");
    let mut roots = numeric_roots(&p);
    let mut rest = p;
    let mut out = Vec::new();
    let mut complete = true;
    let mut k = 1;
    'sizes: while 2 * k <= rest.degree() {
        let m = roots.len();
        if binomial(m, k) > SUBSET_LIMIT {
            complete = false;
            break;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if let Some(g) = candidate(&roots, &idx, &lead, field) {
                if let Some(q) = rest.div_exact(&g, field) {
                    let mut drop = idx.clone();
                    drop.sort_unstable_by(|a, b| b.cmp(a));
                    for i in drop {
                        roots.remove(i);
                    }
                    out.push((g, true));
                    rest = q;
                    continue 'sizes;
                }
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
        k += 1;
    }
    if rest.degree() > 0 {
        out.push((rest.monic(), complete));
    }
    out
}

/// `∏ (t − rᵢ)` over the chosen roots, rounded to rationals with denominator `lead`.
fn candidate(roots: &[Complex64], idx: &[usize], lead: &BigInt, field: &Field) -> Option<UPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &i in idx {
        let r = roots[i];
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (j, a) in c.iter().enumerate() {
            next[j + 1] += a;
            next[j] -= a * r;
        }
        c = next;
    }
    let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if c.iter().any(|z| z.im.abs() > 1e-6 * scale) {
        return None;
    }
    let coeffs = c
        .iter()
        .map(|z| round_to_rational(z.re, lead).map(|q| field.rational(q)))
        .collect::<Option<Vec<_>>>()?;
    Some(UPoly::new(coeffs, field))
}

/// `p(t + a)`.
fn shift(p: &UPoly, a: &Scalar, field: &Field) -> UPoly {
    let lin = UPoly::new(vec![a.clone(), field.one()], field);
    p.coeffs()
        .iter()
        .rev()
        .fold(UPoly::zero(), |acc, c| acc.mul(&lin, field).add(&UPoly::new(vec![c.clone()], field), field))
}

/// Product of all Galois conjugates; rational when `p` is over the tower.
fn norm(p: &UPoly, field: &Field) -> UPoly {
    (0..field.automorphism_count()).fold(UPoly::one(field), |acc, mask| acc.mul(&p.automorphism(mask), field))
}

/// Sum of the tower generators, a primitive element of the tower.
fn primitive_element(field: &Field) -> Scalar {
    field
        .radicands()
        .iter()
        .map(|&m| field.sqrt_int(m).expect("generator is in the tower"))
        .fold(field.zero(), |acc, r| &acc + &r)
}

/// Factors of a squarefree polynomial over the field, without extending it.
fn split_over(p: &UPoly, field: &Field) -> Vec<(UPoly, bool)> {
    if p.degree() <= 1 {
        return vec![(p.monic(), true)];
    }
    if field.radicands().is_empty() {
        return factor_rational(p, field);
    }
    if p.is_rational() {
        let parts = factor_rational(p, field);
        if parts.len() > 1 {
            return parts
                .into_iter()
                .flat_map(|(g, _)| split_over(&g.lift(field), field))
                .collect();
        }
    }
    let theta = primitive_element(field);
    let start = if p.is_rational() { 1 } else { 0 };
    for c in (start..8).flat_map(|k| [k, -k]).skip(if start == 0 { 1 } else { 0 }) {
        let a = &theta * &field.int(c);
        // p_c(t) = p(t − cθ)
        let pc = shift(p, &(-&a), field);
        let n = norm(&pc, field);
        let rationals = Field::rationals();
        let nq = UPoly::new(
            n.coeffs()
                .iter()
                .map(|x| rationals.rational(x.as_rational().expect("norm is rational")))
                .collect(),
            &rationals,
        );
        if nq.gcd(&nq.derivative(&rationals), &rationals).degree() > 0 {
            continue;
        }
        let mut out = Vec::new();
        for (h, proven) in factor_rational(&nq, &rationals) {
            let g = pc.gcd(&h.lift(field), field);
            if g.degree() > 0 {
                out.push((shift(&g, &a, field).monic(), proven));
            }
        }
        return out;
    }
    vec![(p.monic(), false)]
}

fn classify(g: UPoly, proven: bool, field: &Field, out: &mut Vec<Factor>) {
    match g.degree() {
        0 => {}
        1 => out.push(Factor {
            poly: g,
            kind: FactorKind::Linear,
        }),
        2 => {
            let c = g.coeffs();
            let (c0, c1) = (&c[0], &c[1]);
            let disc = &(c1 * c1) - &(&field.int(4) * c0);
            match field.try_sqrt(&disc) {
                SqrtResult::Root(r) => {
                    let half = field.ratio(1, 2);
                    for root in [&(&(-c1) + &r) * &half, &(&(-c1) - &r) * &half] {
                        out.push(Factor {
                            poly: UPoly::linear(&root, field),
                            kind: FactorKind::Linear,
                        });
                    }
                }
                SqrtResult::NeedsExtension(needs) => out.push(Factor {
                    poly: g,
                    kind: FactorKind::Quadratic { needs },
                }),
            }
        }
        _ => out.push(Factor {
            poly: g,
            kind: FactorKind::Higher { proven },
        }),
    }
}

/// Factors a squarefree polynomial over an exact field, adjoining up to
/// `max_adjoin` square roots of quadratic discriminants.
pub fn factor_squarefree(s: &UPoly, field: &Field, max_adjoin: usize) -> Factorization {
    assert!(field.is_exact(), "exact fields only");
    let mut field = field.clone();
    let mut adjoined = Vec::new();
    let mut pending = vec![s.monic()];
    let mut done: Vec<Factor> = Vec::new();
    loop {
        for p in pending.drain(..) {
            for (g, proven) in split_over(&p, &field) {
                classify(g, proven, &field, &mut done);
            }
        }
        let request = done.iter().find_map(|f| match &f.kind {
            FactorKind::Quadratic {
                needs: Radicand::Integer(m),
            } if adjoined.len() < max_adjoin => field.extend(*m).ok().map(|k| (*m, k)),
            _ => None,
        });
        let Some((m, wider)) = request else { break };
        field = wider;
        adjoined.push(m);
        let (linear, rest): (Vec<Factor>, Vec<Factor>) =
            done.drain(..).partition(|f| f.kind == FactorKind::Linear);
        done = linear;
        pending = rest.into_iter().map(|f| f.poly.lift(&field)).collect();
    }
    for f in &mut done {
        f.poly = f.poly.lift(&field);
    }
    Factorization {
        field,
        adjoined,
        factors: done,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldConfig;

    fn q() -> Field {
        Field::rationals()
    }

    fn degrees(f: &Factorization) -> Vec<usize> {
        let mut d: Vec<usize> = f.factors.iter().map(|x| x.poly.degree()).collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn rational_factorization() {
        let k = q();
        // (t − 1)(t + 2)(t² − 2)(t³ − 2)
        let p = UPoly::from_i64(&[-1, 1], &k)
            .mul(&UPoly::from_i64(&[2, 1], &k), &k)
            .mul(&UPoly::from_i64(&[-2, 0, 1], &k), &k)
            .mul(&UPoly::from_i64(&[-2, 0, 0, 1], &k), &k);
        let parts = factor_rational(&p, &k);
        let mut degs: Vec<usize> = parts.iter().map(|(g, _)| g.degree()).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 3]);
        assert!(parts.iter().all(|(_, proven)| *proven));
        let back = parts.iter().fold(UPoly::one(&k), |acc, (g, _)| acc.mul(g, &k));
        assert_eq!(back, p);
    }

    #[test]
    fn quadratics_request_extensions() {
        let k = q();
        let f = factor_squarefree(&UPoly::from_i64(&[1, -6, 1], &k), &k, 0);
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].kind, FactorKind::Quadratic { needs: Radicand::Integer(2) });
        let f = factor_squarefree(&UPoly::from_i64(&[1, -6, 1], &k), &k, 1);
        assert_eq!(f.adjoined, vec![2]);
        assert_eq!(degrees(&f), vec![1, 1]);
    }

    #[test]
    fn splitting_over_a_tower() {
        let k = FieldConfig::exact(&[-3]).field().unwrap();
        // t² − t + 1 splits over Q(√−3)
        let f = factor_squarefree(&UPoly::from_i64(&[1, -1, 1], &k), &k, 0);
        assert_eq!(degrees(&f), vec![1, 1]);
        // t⁴ − 10t² + 1 = minimal polynomial of √2 + √3, splits into quadratics over Q(√2)
        let k2 = FieldConfig::exact(&[2]).field().unwrap();
        let f = factor_squarefree(&UPoly::from_i64(&[1, 0, -10, 0, 1], &k2), &k2, 0);
        assert_eq!(degrees(&f), vec![2, 2]);
        let f = factor_squarefree(&UPoly::from_i64(&[1, 0, -10, 0, 1], &k2), &k2, 1);
        assert_eq!(f.adjoined, vec![3]);
        assert_eq!(degrees(&f), vec![1, 1, 1, 1]);
    }

    #[test]
    fn non_rational_input() {
        let k = FieldConfig::exact(&[2]).field().unwrap();
        let r2 = k.sqrt_int(2).unwrap();
        // (t − √2)(t − 1)(t² + √2)
        let p = UPoly::linear(&r2, &k)
            .mul(&UPoly::from_i64(&[-1, 1], &k), &k)
            .mul(&UPoly::new(vec![r2.clone(), k.zero(), k.one()], &k), &k);
        let f = factor_squarefree(&p, &k, 0);
        assert_eq!(degrees(&f), vec![1, 1, 2]);
        assert!(f
            .factors
            .iter()
            .any(|x| matches!(x.kind, FactorKind::Quadratic { needs: Radicand::Element(_) })));
    }

    #[test]
    fn cubic_certificates() {
        let k = q();
        let f = factor_squarefree(&UPoly::from_i64(&[-2, 0, 0, 1], &k), &k, 2);
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].kind, FactorKind::Higher { proven: true });
        assert!(f.adjoined.is_empty());
    }
}
