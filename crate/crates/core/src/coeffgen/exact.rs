//! Exact rational linear algebra used by the coefficient generator.
//!
//! Systems are cleared of denominators row by row and reduced with
//! Bareiss' fraction-free elimination, so every intermediate value is an
//! integer and every division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Rational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(base: &Rational, exp: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Solve the square system `a x = b` exactly. Returns `None` when singular.
pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    // augmented integer matrix
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        assert_eq!(row.len(), n);
        let lcm = row
            .iter()
            .chain(std::iter::once(rhs))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled = row
            .iter()
            .chain(std::iter::once(rhs))
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        m.push(scaled);
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Inverse of a square matrix, column by column.
pub(crate) fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for col in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[col] = Rational::one();
        let x = solve(a, &e)?;
        for row in 0..n {
            inv[row][col] = x[row].clone();
        }
    }
    Some(inv)
}

pub(crate) fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub(crate) fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..inner {
                        s += &row[k] * &b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Matrix mapping the monomial coefficients `a_n` of a polynomial in
/// `ξ = (x - x_i)/Δx` to its cell averages over the cells at the given
/// integer offsets: `A[j][n] = ((ℓ_j+½)^{n+1} - (ℓ_j-½)^{n+1}) / (n+1)`.
pub(crate) fn cell_average_matrix(offsets: &[i64]) -> Vec<Vec<Rational>> {
    let m = offsets.len();
    let half = rat(1, 2);
    offsets
        .iter()
        .map(|&l| {
            let hi = int(l) + &half;
            let lo = int(l) - &half;
            (0..m)
                .map(|n| (pow(&hi, n + 1) - pow(&lo, n + 1)) / int(n as i64 + 1))
                .collect()
        })
        .collect()
}

/// Coefficients `c` with `<c, f>` equal to the value at `ξ = point` of the
/// polynomial whose cell averages over `offsets` are `f`.
pub(crate) fn point_value_coeffs(offsets: &[i64], point: &Rational) -> Vec<Rational> {
    let a = cell_average_matrix(offsets);
    let at = transpose(&a);
    let e: Vec<Rational> = (0..offsets.len()).map(|n| pow(point, n)).collect();
    solve(&at, &e).expect("cell-average matrix is nonsingular for distinct offsets")
}

/// Gram matrix of the derivative seminorm used by the smoothness indicators:
/// `Q[n][m] = Σ_{ℓ=1}^{deg} ∫_{-½}^{½} D^ℓ ξ^n · D^ℓ ξ^m dξ` for monomials up to `deg`.
pub(crate) fn derivative_gram(deg: usize) -> Vec<Vec<Rational>> {
    let size = deg + 1;
    let mut q = vec![vec![Rational::zero(); size]; size];
    for l in 1..=deg {
        for n in l..size {
            for m in l..size {
                let kappa = n + m - 2 * l;
                if kappa % 2 == 1 {
                    continue;
                }
                let fall_n = falling(n, l);
                let fall_m = falling(m, l);
                // ∫_{-½}^{½} ξ^κ dξ = 2^{-κ} / (κ+1) for even κ
                let integral = Rational::new(BigInt::one(), BigInt::from(2u32).pow(kappa as u32) * BigInt::from(kappa + 1));
                q[n][m] += int(fall_n * fall_m) * integral;
            }
        }
    }
    q
}

fn falling(n: usize, l: usize) -> i64 {
    ((n - l + 1)..=n).map(|v| v as i64).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Round-to-nearest conversion. Values here are small, so the
/// correctly-rounded conversion of `num-rational` is used directly.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        // 2x + y = 3, x + 3y = 5 -> x = 4/5, y = 7/5
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn solve_needs_pivoting() {
        let a = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let x = solve(&a, &[int(2), int(3)]).unwrap();
        assert_eq!(x, vec![int(3), int(2)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&a, &[int(1), int(1)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = cell_average_matrix(&[-2, -1, 0, 1]);
        let inv = inverse(&a).unwrap();
        let id = matmul(&a, &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn nearest_conversion() {
        assert_eq!(to_f64(&rat(1, 3)), 1.0 / 3.0);
        assert_eq!(to_f64(&rat(-37, 60)), -37.0 / 60.0);
        assert_eq!(to_f64(&rat(9, 20)), 0.45);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), BigInt::from(252));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }
}
