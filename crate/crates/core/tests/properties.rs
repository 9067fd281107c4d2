use formdiag::center::{center_basis, CenterBasis};
use formdiag::form::{congruence, form_from_gram, gram_tensor, multisets, SymTensor};
use formdiag::harness::{
    expand_powersum, random_degenerate, random_dense_form, random_diagonalizable,
    random_orthogonal_rational, substitute,
};
use formdiag::idem::{
    classify_algebra, min_poly, split_idempotents, Semisimplicity, SplitOptions,
};
use formdiag::rank::{radical_basis, reduce_nondegenerate, slicing_rank};
use formdiag::upoly::UPoly;
use formdiag::{
    decompose, decompose_with, odeco_precheck, verify, DecomposeOptions, Field, FieldConfig, Form,
    Matrix, Ortho, Scalar, Verdict,
};
use num::complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q() -> Field {
    Field::rationals()
}

fn tower(radicands: &[i64]) -> Field {
    FieldConfig::exact(radicands).field().unwrap()
}

fn random_invertible(n: usize, seed: u64, k: &Field) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = Matrix::from_vec(n, n, (0..n * n).map(|_| k.int(rng.random_range(-3..=3))).collect());
        if m.rank(k) == n {
            return m;
        }
    }
}

/// `a + b√m₁ + c√m₂ + e√(m₁m₂)` with small rational coordinates.
fn element(k: &Field, coords: &[(i64, i64)]) -> Scalar {
    let r = k.radicands();
    let basis = [
        k.one(),
        k.sqrt_int(r[0]).unwrap(),
        k.sqrt_int(r[1]).unwrap(),
        &k.sqrt_int(r[0]).unwrap() * &k.sqrt_int(r[1]).unwrap(),
    ];
    coords
        .iter()
        .zip(&basis)
        .fold(k.zero(), |acc, (&(a, b), x)| &acc + &(&k.ratio(a, b) * x))
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 4)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

/// Characteristic polynomial by Faddeev–LeVerrier, independent of the minimal polynomial code.
fn charpoly(a: &Matrix, k: &Field) -> UPoly {
    let n = a.rows();
    let id = Matrix::identity(n, k);
    let mut coeffs = vec![k.zero(); n + 1];
    coeffs[n] = k.one();
    let mut m = Matrix::zeros(n, n, k);
    for step in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n - step + 1]);
        coeffs[n - step] = &(a * &m).trace() * &k.ratio(-1, step as i64);
    }
    UPoly::new(coeffs, k)
}

/// A random form that is a direct sum of two dense central blocks, in scrambled coordinates.
fn random_direct_sum(sizes: (usize, usize), d: u32, seed: u64, k: &Field) -> Form {
    let n = sizes.0 + sizes.1;
    let first: Vec<usize> = (0..sizes.0).collect();
    let second: Vec<usize> = (sizes.0..n).collect();
    let g = random_dense_form(sizes.0, d, seed, k, 3)
        .embed(n, &first)
        .add(&random_dense_form(sizes.1, d, seed ^ 0x5eed, k, 3).embed(n, &second))
        .unwrap();
    substitute(&g, &random_invertible(n, seed.wrapping_add(7), k).row_vectors(), k)
}

fn center_elements(z: &CenterBasis, seed: u64) -> Vec<Matrix> {
    let k = z.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..3)
        .map(|_| {
            let c: Vec<Scalar> = (0..z.dim()).map(|_| k.int(rng.random_range(-4..=4))).collect();
            z.combine(&c)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in coords(), b in coords(), c in coords(), towers in 0usize..3) {
        let k = tower([[2, 3], [-1, 5], [-3, 2]][towers].as_slice());
        let (a, b, c) = (element(&k, &a), element(&k, &b), element(&k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_exact_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), k.one());
        }
    }

    #[test]
    fn exact_arithmetic_matches_embedding(a in coords(), b in coords(), c in coords()) {
        let k = tower(&[-1, 5]);
        let (x, y, z) = (element(&k, &a), element(&k, &b), element(&k, &c));
        let exact = &(&(&x * &y) + &z) - &(&x * &z);
        let (xc, yc, zc) = (x.to_complex(), y.to_complex(), z.to_complex());
        prop_assert!(close(exact.to_complex(), xc * yc + zc - xc * zc));
        if !y.is_exact_zero() {
            prop_assert!(close((&x * &y.inv().unwrap()).to_complex(), xc / yc));
        }
    }

    #[test]
    fn gram_round_trip(n in 1usize..=4, d in 3u32..=5, seed in any::<u64>()) {
        let f = random_dense_form(n, d, seed, &q(), 5);
        prop_assert_eq!(form_from_gram(&gram_tensor(&f)), f);
    }

    #[test]
    fn congruence_is_functorial(n in 1usize..=3, d in 3u32..=4, seed in any::<u64>()) {
        let k = q();
        let a = gram_tensor(&random_dense_form(n, d, seed, &k, 3));
        let p = random_invertible(n, seed.wrapping_add(1), &k);
        let r = random_invertible(n, seed.wrapping_add(2), &k);
        let lhs = congruence(&congruence(&a, &p).unwrap(), &r).unwrap();
        let rhs = congruence(&a, &(&p * &r)).unwrap();
        prop_assert_eq!(form_from_gram(&lhs), form_from_gram(&rhs));
    }

    #[test]
    fn slices_are_symmetric(n in 1usize..=4, d in 3u32..=5, seed in any::<u64>()) {
        let k = q();
        let a = gram_tensor(&random_dense_form(n, d, seed, &k, 3));
        for tail in multisets(n, d as usize - 2) {
            let m = a.slice(&tail).unwrap();
            prop_assert!(m.is_symmetric(&k));
            let mut rev = tail.clone();
            rev.reverse();
            prop_assert_eq!(a.slice(&rev).unwrap(), m);
        }
    }

    #[test]
    fn evaluation_consistency(n in 1usize..=4, d in 3u32..=4, seed in any::<u64>()) {
        let k = q();
        let f = random_dense_form(n, d, seed, &k, 3);
        let p = random_invertible(n, seed.wrapping_add(3), &k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Scalar> = (0..n).map(|_| k.int(rng.random_range(-5..=5))).collect();
        let g = form_from_gram(&congruence(&gram_tensor(&f), &p).unwrap());
        prop_assert_eq!(f.eval(&p.mul_vec(&v)), g.eval(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degenerate_constructions(n in 2usize..=4, seed in any::<u64>(), d in 3u32..=4) {
        let k = q();
        let r = 1 + (seed as usize) % (n - 1);
        let g = random_degenerate(n, r, d, seed, &k);
        let a = gram_tensor(&g.form);
        prop_assert_eq!(slicing_rank(&a), r);
        let red = reduce_nondegenerate(&a);
        prop_assert_eq!(red.r, r);
        // f(Py) depends on y₁..y_r only and agrees with the reduced form there.
        let full = form_from_gram(&congruence(&a, &red.p).unwrap());
        let vars: Vec<usize> = (0..r).collect();
        prop_assert_eq!(full.clone(), form_from_gram(&red.reduced).embed(n, &vars));
        // The reduced form and g are congruent: g(l(P y)) for the r×r matrix l·P restricted.
        let lp = &Matrix::from_rows(g.rows.clone()) * &red.p;
        let square = Matrix::from_rows(
            (0..r).map(|i| (0..r).map(|j| lp[(i, j)].clone()).collect()).collect(),
        );
        prop_assert_eq!(square.rank(&k), r);
        prop_assert_eq!(
            substitute(&g.inner, &square.row_vectors(), &k),
            form_from_gram(&red.reduced)
        );
    }

    #[test]
    fn radical_vectors_contract_to_zero(n in 2usize..=4, seed in any::<u64>()) {
        let k = q();
        let g = random_degenerate(n, 1 + (seed as usize) % (n - 1), 3, seed, &k);
        let a = gram_tensor(&g.form);
        for u in radical_basis(&a) {
            for tail in multisets(n, 2) {
                let mut s = k.zero();
                for (i, ui) in u.iter().enumerate() {
                    let mut idx = tail.clone();
                    idx.push(i);
                    s = &s + &(ui * &a.get(&idx));
                }
                prop_assert!(s.is_exact_zero());
            }
        }
    }

    #[test]
    fn slicing_rank_is_congruence_invariant(n in 2usize..=4, seed in any::<u64>()) {
        let k = q();
        let g = random_degenerate(n, 1 + (seed as usize) % n, 3, seed, &k);
        let a = gram_tensor(&g.form);
        let p = random_invertible(n, seed.wrapping_add(9), &k);
        prop_assert_eq!(slicing_rank(&congruence(&a, &p).unwrap()), slicing_rank(&a));
    }

    #[test]
    fn center_covariance_and_commutativity(n in 2usize..=4, seed in any::<u64>(), kind in 0u8..3) {
        let k = q();
        let f = match kind {
            0 => random_diagonalizable(n, 3, seed, &k).form,
            1 if n >= 3 => random_direct_sum((1, n - 1), 3, seed, &k),
            _ => random_dense_form(n, 3, seed, &k, 3),
        };
        let a = gram_tensor(&f);
        prop_assume!(slicing_rank(&a) == n);
        let z = center_basis(&a).unwrap();
        prop_assert!(z.dim() <= n);
        for x in z.basis() {
            for y in z.basis() {
                prop_assert!(x.commutes_with(y, &k));
            }
        }
        let p = random_invertible(n, seed.wrapping_add(5), &k);
        let pi = p.inverse(&k).unwrap();
        let moved: Vec<Matrix> = z.basis().iter().map(|x| &(&pi * x) * &p).collect();
        prop_assert!(center_basis(&congruence(&a, &p).unwrap()).unwrap().span_equals(&moved));

        let k2 = tower(&[2]);
        let z2 = center_basis(&a.lift(&k2)).unwrap();
        prop_assert_eq!(z2.dim(), z.dim());
        for x in z.basis() {
            prop_assert!(z2.contains(&x.map(|v| k2.lift(v))));
        }
    }

    #[test]
    fn idempotent_identities(n in 2usize..=4, seed in any::<u64>(), kind in 0u8..2) {
        let k = q();
        let f = if kind == 0 || n < 3 {
            random_diagonalizable(n, 3, seed, &k).form
        } else {
            random_direct_sum((1, n - 1), 3, seed, &k)
        };
        let z = center_basis(&gram_tensor(&f)).unwrap();
        let split = split_idempotents(&z, &SplitOptions { seed, ..Default::default() });
        let kk = split.field.clone();
        let es = split.idempotents();
        let mut sum = Matrix::zeros(n, n, &kk);
        for (i, e) in es.iter().enumerate() {
            sum = &sum + *e;
            for (j, g) in es.iter().enumerate() {
                let prod = *e * *g;
                if i == j {
                    prop_assert_eq!(&prod, *e);
                } else {
                    prop_assert!(prod.is_zero(&kk));
                }
            }
        }
        prop_assert_eq!(sum, Matrix::identity(n, &kk));
        let alg = classify_algebra(&z, &split);
        if alg.ground_field_copies() == n {
            prop_assert!(split.ranks().iter().all(|&r| r == 1));
        }
    }

    #[test]
    fn min_poly_divides_charpoly(n in 2usize..=4, seed in any::<u64>()) {
        let k = q();
        let f = random_diagonalizable(n, 3, seed, &k).form;
        let z = center_basis(&gram_tensor(&f)).unwrap();
        for r in center_elements(&z, seed) {
            let mu = min_poly(&r, &k);
            prop_assert!(mu.eval_matrix(&r, &k).is_zero(&k));
            prop_assert!(charpoly(&r, &k).div_exact(&mu, &k).is_some());
        }
    }

    #[test]
    fn round_trip_with_higher_degree(n in 1usize..=4, d in 3u32..=5, seed in any::<u64>()) {
        let k = q();
        let truth = random_diagonalizable(n, d, seed, &k);
        let dec = decompose(&truth.form, &FieldConfig::rational()).unwrap();
        prop_assert_eq!(dec.verdict, Verdict::Diagonalizable);
        prop_assert!(verify(&dec, &truth.form));
    }

    #[test]
    fn rows_do_not_depend_on_the_seed(n in 2usize..=4, seed in any::<u64>()) {
        let k = q();
        let f = random_diagonalizable(n, 3, seed, &k).form;
        let cfg = FieldConfig::rational();
        let runs: Vec<Vec<String>> = [0u64, seed | 1]
            .iter()
            .map(|&s| {
                let dec = decompose_with(&f, &cfg, &DecomposeOptions { retries: 8, seed: s }).unwrap();
                let mut rows: Vec<String> = dec
                    .forms
                    .unwrap()
                    .row_vectors()
                    .iter()
                    .map(|r| formdiag::form::format_linear_form(r))
                    .collect();
                rows.sort();
                rows
            })
            .collect();
        prop_assert_eq!(&runs[0], &runs[1]);
    }

    #[test]
    fn direct_sums_split_across_blocks(seed in any::<u64>(), big in 2usize..=3) {
        let k = q();
        let f = random_direct_sum((2, big), 3, seed, &k);
        let dec = decompose(&f, &FieldConfig::rational()).unwrap();
        prop_assume!(dec.verdict == Verdict::DirectSum);
        let b = congruence(&gram_tensor(&f), &dec.p).unwrap();
        let mut group = vec![usize::MAX; f.n()];
        for (g, blk) in dec.blocks.iter().enumerate() {
            for &v in &blk.variables {
                group[v] = g;
            }
        }
        for (idx, v) in b.entries() {
            if idx.iter().any(|&i| group[i] != group[idx[0]]) {
                prop_assert!(v.is_exact_zero(), "cross entry {:?} = {}", idx, v);
            }
        }
        prop_assert!(verify(&dec, &f));
        // Z(f) is the product of the block centers.
        let total: usize = dec.blocks.iter().map(|b| b.center_dim).sum();
        prop_assert_eq!(total, dec.center_dim);
    }

    #[test]
    fn odeco_screen_agrees_with_the_pipeline(n in 2usize..=4, seed in any::<u64>(), kind in 0u8..3) {
        let k = q();
        let f = match kind {
            0 => {
                let o = random_orthogonal_rational(n, seed);
                let lambdas: Vec<Scalar> = (0..n).map(|i| k.int(i as i64 + 1)).collect();
                expand_powersum(&lambdas, &o.row_vectors(), 3, &k)
            }
            1 => random_diagonalizable(n, 3, seed, &k).form,
            _ => random_dense_form(n, 3, seed, &k, 3),
        };
        let a: SymTensor = gram_tensor(&f);
        let screen = odeco_precheck(&a).unwrap();
        let dec = decompose(&f, &FieldConfig::rational().with_max_adjoin(2)).unwrap();
        let full = dec.verdict == Verdict::Diagonalizable && dec.ortho == Ortho::Orthogonal;
        prop_assert_eq!(screen, full);
        if kind == 0 {
            prop_assert!(screen);
        }
    }
}

#[test]
fn dependent_radicands_are_rejected() {
    assert!(FieldConfig::exact(&[2, 8]).field().is_err());
    assert!(FieldConfig::exact(&[2, 3, 6]).field().is_err());
    assert!(FieldConfig::exact(&[2, 3, 5]).field().is_ok());
}

#[test]
fn nilpotent_witness_is_nilpotent() {
    let k = q();
    for text in ["x1^2*x2", "x1^2*x3+x2^3", "x1^3+x1^2*x2+x3^3"] {
        let f = formdiag::form::parse_form(text, &k).unwrap();
        let z = center_basis(&gram_tensor(&f)).unwrap();
        for seed in 0..5 {
            let split = split_idempotents(&z, &SplitOptions { seed, ..Default::default() });
            let mu = &split.min_poly;
            let s = mu.squarefree_part(&k);
            match &split.semisimple {
                Semisimplicity::NilpotentWitness(w) => {
                    assert!(s.degree() < mu.degree());
                    assert!(!w.is_zero(&k), "{text}");
                    assert!(z.contains(w));
                    assert!(w.pow(f.n() as u32, &k).is_zero(&k), "{text}");
                }
                Semisimplicity::Squarefree => assert_eq!(s.degree(), mu.degree()),
            }
        }
    }
}
