//! Published coefficient values for the fourth- through tenth-order
//! schemes, transcribed as integer numerators over a common denominator.
//!
//! Entries the source states only through a reversal relation
//! (e.g. `c_{r-k} = rev(c_k)`) are expanded here by that same relation.

use super::exact::{int, rat};
use super::Rational;

/// Fully expanded reference tables for one `r`.
#[derive(Debug, Clone)]
pub struct PublishedTables {
    pub r: usize,
    pub c_full: Vec<Rational>,
    pub c_sub: Vec<Vec<Rational>>,
    pub d_central: Vec<Rational>,
    /// `B_0 … B_{r-1}`, then `B_d`.
    pub b: Vec<Vec<Vec<Rational>>>,
    pub c_tau: Vec<Rational>,
    pub c_tau_prime: Option<Vec<Rational>>,
}

fn vec_over(den: i64, nums: &[i64]) -> Vec<Rational> {
    nums.iter().map(|&n| rat(n, den)).collect()
}

fn mat_over<const N: usize>(den: i64, rows: &[[i64; N]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|row| vec_over(den, row)).collect()
}

fn rev_vec(v: &[Rational]) -> Vec<Rational> {
    v.iter().rev().cloned().collect()
}

fn rev_mat(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    m.iter().rev().map(|row| rev_vec(row)).collect()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| int(n)).collect()
}

/// Reference tables for `r ∈ {2, 3, 4, 5}`; `None` otherwise.
pub fn published(r: usize) -> Option<PublishedTables> {
    match r {
        2 => {
            let c0 = vec_over(2, &[-1, 3]);
            let c1 = vec_over(2, &[1, 1]);
            let b0 = mat_over(1, &[[1, -1], [-1, 1]]);
            let bd = mat_over(1, &[[1, -1], [-1, 1]]);
            Some(PublishedTables {
                r,
                c_full: vec_over(12, &[-1, 7, 7, -1]),
                c_sub: vec![c0.clone(), c1, rev_vec(&c0)],
                d_central: vec_over(6, &[1, 4, 1]),
                b: vec![b0.clone(), rev_mat(&b0), bd],
                c_tau: ints(&[-1, 3, -3, 1]),
                c_tau_prime: None,
            })
        }
        3 => {
            let b0 = mat_over(6, &[[8, -19, 11], [-19, 50, -31], [11, -31, 20]]);
            let b1 = mat_over(6, &[[8, -13, 5], [-13, 26, -13], [5, -13, 8]]);
            let bd = mat_over(6, &[[44, -73, 29], [-73, 122, -49], [29, -49, 20]]);
            Some(PublishedTables {
                r,
                c_full: vec_over(60, &[1, -8, 37, 37, -8, 1]),
                c_sub: vec![
                    vec_over(6, &[2, -7, 11]),
                    vec_over(6, &[-1, 5, 2]),
                    vec_over(6, &[2, 5, -1]),
                    vec_over(6, &[11, -7, 2]),
                ],
                d_central: vec_over(20, &[1, 9, 9, 1]),
                b: vec![b0.clone(), b1, rev_mat(&b0), bd],
                c_tau: ints(&[-1, 5, -10, 10, -5, 1]),
                c_tau_prime: Some(ints(&[1, -4, 6, -4, 1, 0])),
            })
        }
        4 => {
            let c0 = vec_over(12, &[-3, 13, -23, 25]);
            let c1 = vec_over(12, &[1, -5, 13, 3]);
            let c2 = vec_over(12, &[-1, 7, 7, -1]);
            let b0 = mat_over(
                240,
                &[
                    [547, -1941, 2321, -927],
                    [-1941, 7043, -8623, 3521],
                    [2321, -8623, 11003, -4701],
                    [-927, 3521, -4701, 2107],
                ],
            );
            let b1 = mat_over(
                240,
                &[
                    [267, -821, 801, -247],
                    [-821, 2843, -2983, 961],
                    [801, -2983, 3443, -1261],
                    [-247, 961, -1261, 547],
                ],
            );
            let bd = mat_over(
                240,
                &[
                    [7107, -16901, 13521, -3727],
                    [-16901, 40643, -32863, 9121],
                    [13521, -32863, 26843, -7501],
                    [-3727, 9121, -7501, 2107],
                ],
            );
            Some(PublishedTables {
                r,
                c_full: vec_over(840, &[-3, 29, -139, 533, 533, -139, 29, -3]),
                c_sub: vec![c0.clone(), c1.clone(), c2, rev_vec(&c1), rev_vec(&c0)],
                d_central: vec_over(70, &[1, 16, 36, 16, 1]),
                b: vec![b0.clone(), b1.clone(), rev_mat(&b1), rev_mat(&b0), bd],
                c_tau: ints(&[-1, 7, -21, 35, -35, 21, -7, 1]),
                c_tau_prime: None,
            })
        }
        5 => {
            let c0 = vec_over(60, &[12, -63, 137, -163, 137]);
            let c1 = vec_over(60, &[-3, 17, -43, 77, 12]);
            let c2 = vec_over(60, &[2, -13, 47, 27, -3]);
            let b0 = mat_over(
                10080,
                &[
                    [45316, -208501, 364863, -288007, 86329],
                    [-208501, 965926, -1704396, 1358458, -411487],
                    [364863, -1704396, 3042786, -2462076, 758823],
                    [-288007, 1358458, -2462076, 2041126, -649501],
                    [86329, -411487, 758823, -649501, 215836],
                ],
            );
            let b1 = mat_over(
                10080,
                &[
                    [13816, -60871, 99213, -70237, 18079],
                    [-60871, 277126, -464976, 337018, -88297],
                    [99213, -464976, 812586, -611976, 165153],
                    [-70237, 337018, -611976, 485446, -140251],
                    [18079, -88297, 165153, -140251, 45316],
                ],
            );
            let b2 = mat_over(
                10080,
                &[
                    [13816, -51001, 67923, -38947, 8209],
                    [-51001, 209926, -299076, 179098, -38947],
                    [67923, -299076, 462306, -299076, 67923],
                    [-38947, 179098, -299076, 209926, -51001],
                    [8209, -38947, 67923, -51001, 13816],
                ],
            );
            let bd = mat_over(
                10080,
                &[
                    [942016, -2964751, 3597813, -2004757, 429679],
                    [-2964751, 9449926, -11584896, 6499258, -1399537],
                    [3597813, -11584896, 14319786, -8079576, 1746873],
                    [-2004757, 6499258, -8079576, 4577926, -992851],
                    [429679, -1399537, 1746873, -992851, 215836],
                ],
            );
            Some(PublishedTables {
                r,
                c_full: vec_over(2520, &[2, -23, 127, -473, 1627, 1627, -473, 127, -23, 2]),
                c_sub: vec![
                    c0.clone(),
                    c1.clone(),
                    c2.clone(),
                    rev_vec(&c2),
                    rev_vec(&c1),
                    rev_vec(&c0),
                ],
                d_central: vec_over(252, &[1, 25, 100, 100, 25, 1]),
                b: vec![b0.clone(), b1.clone(), b2, rev_mat(&b1), rev_mat(&b0), bd],
                c_tau: ints(&[-1, 9, -36, 84, -126, 126, -84, 36, -9, 1]),
                c_tau_prime: None,
            })
        }
        _ => None,
    }
}
