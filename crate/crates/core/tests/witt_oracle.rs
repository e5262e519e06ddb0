//! Exhaustive cross-check of the Witt equivalence decider against a
//! Gram-congruence search oracle on every pair of 2- and 3-dimensional
//! diagonal forms with entries in {+-1, +-2, +-3}.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use wittforge::fields::{Element, FieldDesc};
use wittforge::witt::{witt_equivalent, QForm};

fn form(entries: &[i64]) -> QForm {
    QForm::new(
        FieldDesc::Rationals,
        entries.iter().map(|&n| Element::rational(n, 1)).collect(),
    )
    .unwrap()
}

fn find_witness(
    gram: &[Vec<BigRational>],
    b: &BigRational,
    bound: i64,
) -> Option<Vec<BigRational>> {
    let n = gram.len();
    let int_diag: Option<Vec<i64>> = {
        let mut diag = Vec::with_capacity(n);
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if i != j && !gram[i][j].is_zero() {
                    ok = false;
                }
            }
            if !gram[i][i].denom().is_one() {
                ok = false;
            }
            if ok {
                if let Ok(v) = i64::try_from(gram[i][i].numer().clone()) {
                    diag.push(v);
                } else {
                    ok = false;
                }
            }
        }
        if ok {
            Some(diag)
        } else {
            None
        }
    };
    // search by increasing max-norm shells so the first witness found is a
    // small one: its complement basis stays small for the next level
    for shell in 1..=bound {
        let mut idx = vec![-shell; n];
        loop {
            if idx.iter().any(|&x| x.abs() == shell) {
                let ok = if let Some(diag) = &int_diag {
                    let val: i64 = diag.iter().zip(&idx).map(|(&a, &x)| a * x * x).sum();
                    val != 0 && {
                        let ratio = BigRational::from(BigInt::from(val)) / b;
                        !ratio.is_negative() && is_rational_square(&ratio)
                    }
                } else {
                    let mut val = BigRational::zero();
                    for i in 0..n {
                        if idx[i] == 0 {
                            continue;
                        }
                        for j in 0..n {
                            if idx[j] == 0 {
                                continue;
                            }
                            val += &gram[i][j] * BigRational::from(BigInt::from(idx[i] * idx[j]));
                        }
                    }
                    !val.is_zero() && {
                        let ratio = &val / b;
                        !ratio.is_negative() && is_rational_square(&ratio)
                    }
                };
                if ok {
                    return Some(
                        idx.iter()
                            .map(|&v| BigRational::from(BigInt::from(v)))
                            .collect(),
                    );
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                idx[k] += 1;
                if idx[k] <= shell {
                    break;
                }
                idx[k] = -shell;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    None
}

fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let ns = x.numer().sqrt();
    let ds = x.denom().sqrt();
    &ns * &ns == *x.numer() && &ds * &ds == *x.denom()
}

/// One representation witness per level decides the chain (Witt
/// cancellation: the orthogonal complement is unique up to isometry).
fn recurse(gram: Vec<Vec<BigRational>>, target: &[BigRational], bound: i64) -> bool {
    if target.is_empty() {
        return true;
    }
    let n = gram.len();
    let x = match find_witness(&gram, &target[0], bound) {
        Some(x) => x,
        None => return false,
    };
    let pivot = (0..n).find(|&i| !x[i].is_zero()).unwrap();
    let mut qx = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            qx += &gram[i][j] * &x[i] * &x[j];
        }
    }
    let mut basis: Vec<Vec<BigRational>> = vec![];
    for k in 0..n {
        if k == pivot {
            continue;
        }
        let mut e = vec![BigRational::zero(); n];
        e[k] = BigRational::one();
        let mut bx = BigRational::zero();
        for (j, xj) in x.iter().enumerate() {
            bx += &gram[k][j] * xj;
        }
        let coeff = bx / &qx;
        for (i, xi) in x.iter().enumerate() {
            let delta = &coeff * xi;
            e[i] -= delta;
        }
        basis.push(e);
    }
    let m = basis.len();
    let mut sub = vec![vec![BigRational::zero(); m]; m];
    for a in 0..m {
        for c in 0..m {
            let mut s = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    s += &gram[i][j] * &basis[a][i] * &basis[c][j];
                }
            }
            sub[a][c] = s;
        }
    }
    recurse(sub, &target[1..], bound)
}

fn equivalent_bruteforce(q1: &[i64], q2: &[i64], bound: i64) -> bool {
    if q1.len() != q2.len() {
        return false;
    }
    let n = q1.len();
    let mut gram = vec![vec![BigRational::zero(); n]; n];
    for (i, &a) in q1.iter().enumerate() {
        gram[i][i] = BigRational::from(BigInt::from(a));
    }
    let target: Vec<BigRational> = q2
        .iter()
        .map(|&v| BigRational::from(BigInt::from(v)))
        .collect();
    recurse(gram, &target, bound)
}

#[test]
fn decider_matches_search_oracle_on_full_grid() {
    let vals = [1i64, -1, 2, -2, 3, -3];
    let field = FieldDesc::Rationals;

    let mut pairs2 = vec![];
    for &a in &vals {
        for &b in &vals {
            if a <= b {
                pairs2.push(vec![a, b]);
            }
        }
    }
    for f1 in &pairs2 {
        for f2 in &pairs2 {
            let got = witt_equivalent(&field, &form(f1), &form(f2)).unwrap();
            let oracle = equivalent_bruteforce(f1, f2, 10);
            assert_eq!(got, oracle, "dim 2: {f1:?} vs {f2:?}");
        }
    }

    let mut triples = vec![];
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                if a <= b && b <= c {
                    triples.push(vec![a, b, c]);
                }
            }
        }
    }
    assert_eq!(triples.len(), 56);
    for (i, f1) in triples.iter().enumerate() {
        for f2 in triples.iter().skip(i) {
            let got = witt_equivalent(&field, &form(f1), &form(f2)).unwrap();
            let oracle = equivalent_bruteforce(f1, f2, 10);
            assert_eq!(got, oracle, "dim 3: {f1:?} vs {f2:?}");
        }
    }
}

#[test]
fn regression_witness_basis_height() {
    assert!(equivalent_bruteforce(&[-1, -1, 1], &[-2, -1, 2], 10));
}
