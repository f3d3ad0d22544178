use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rat, LinalgError, RatMatrix, RatPoly, Rational};

/// Generalized binomial `C(a, k)` for any integer `a`, via the falling factorial.
pub fn binomial(a: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(a - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// `C(d + shift, k)` as a polynomial in `d`.
pub fn binomial_poly(shift: i64, k: usize) -> RatPoly {
    let mut p = RatPoly::constant(Rational::one());
    for j in 0..k as i64 {
        p = &p * &RatPoly::linear(&rat(j - shift));
    }
    let fact: BigInt = (1..=k as i64).map(BigInt::from).product();
    p.scale(&Rational::new(BigInt::one(), fact))
}

/// `P_{n,i}(d) = C(d+i-1, i) * C(d+n, n-i)`.
pub fn basis_poly(n: usize, i: usize) -> Result<RatPoly, LinalgError> {
    if i > n {
        return Err(LinalgError::IndexOutOfRange { n, i });
    }
    thread_local! {
        static CACHE: RefCell<HashMap<(usize, usize), RatPoly>> = RefCell::new(HashMap::new());
    }
    Ok(CACHE.with(|c| {
        c.borrow_mut()
            .entry((n, i))
            .or_insert_with(|| &binomial_poly(i as i64 - 1, i) * &binomial_poly(n as i64, n - i))
            .clone()
    }))
}

/// `sum a_i P_{n,i}` for integer `a_i`, accumulated over the integer
/// polynomials `n! P_{n,i}` and divided once at the end.
pub fn basis_combination<'a>(n: usize, terms: impl IntoIterator<Item = (usize, &'a BigInt)>) -> Result<RatPoly, LinalgError> {
    thread_local! {
        static SCALED: RefCell<HashMap<(usize, usize), Vec<BigInt>>> = RefCell::new(HashMap::new());
    }
    let fact: BigInt = (1..=n as i64).map(BigInt::from).product();
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, a) in terms {
        if i > n {
            return Err(LinalgError::IndexOutOfRange { n, i });
        }
        if a.is_zero() {
            continue;
        }
        SCALED.with(|c| {
            let mut c = c.borrow_mut();
            let q = c.entry((n, i)).or_insert_with(|| {
                let p = basis_poly(n, i).expect("i <= n").scale(&Rational::from_integer(fact.clone()));
                p.coeffs().iter().map(|x| x.to_integer()).collect()
            });
            for (slot, x) in acc.iter_mut().zip(q.iter()) {
                *slot += a * x;
            }
        });
    }
    Ok(RatPoly::new(acc.into_iter().map(|x| Rational::new(x, fact.clone())).collect()))
}

/// Coordinates `alpha_i = (-1)^i p(-i)` of `p` in the basis `P_{n,0..n}`.
pub fn in_basis(p: &RatPoly, n: usize) -> Result<Vec<Rational>, LinalgError> {
    if let Some(degree) = p.degree() {
        if degree > n {
            return Err(LinalgError::DegreeTooLarge { degree, n });
        }
    }
    Ok((0..=n)
        .map(|i| {
            let v = p.eval_int(-(i as i64));
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect())
}

pub fn from_basis(alpha: &[Rational], n: usize) -> Result<RatPoly, LinalgError> {
    if alpha.len() != n + 1 {
        return Err(LinalgError::Length { expected: n + 1, got: alpha.len() });
    }
    let mut acc = RatPoly::zero();
    for (i, a) in alpha.iter().enumerate() {
        if !a.is_zero() {
            acc = &acc + &basis_poly(n, i)?.scale(a);
        }
    }
    Ok(acc)
}

/// `b` rows `sum_{i=0}^{n-j} alpha_i C(n-j, i) = 0`, `j = 0..b`.
pub fn degree_drop_equations(n: usize, b: usize) -> RatMatrix {
    let rows = (0..b.min(n + 1))
        .map(|j| (0..=n).map(|i| Rational::from_integer(binomial((n - j) as i64, i))).collect())
        .collect();
    RatMatrix::from_rows(rows, n + 1).expect("rectangular by construction")
}

/// Same system written as `sum_{i=j}^{n} alpha_i C(n-j, i-j) = 0`.
pub fn degree_drop_equations_alt(n: usize, b: usize) -> RatMatrix {
    let rows = (0..b.min(n + 1))
        .map(|j| {
            (0..=n)
                .map(|i| if i < j { Rational::zero() } else { Rational::from_integer(binomial((n - j) as i64, i - j)) })
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows, n + 1).expect("rectangular by construction")
}

/// Renders `alpha` as a combination such as `3*P{2,0} - 3*P{2,1} + 2*P{2,2}`.
pub fn render_in_basis(alpha: &[Rational], n: usize) -> String {
    let mut out = String::new();
    for (i, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if out.is_empty() {
            if a.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if a.is_negative() { " - " } else { " + " });
        }
        let m = a.abs();
        if !m.is_one() {
            out.push_str(&format!("{m}*"));
        }
        out.push_str(&format!("P{{{n},{i}}}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
