use std::fmt;

use num_traits::{One, Signed, Zero};

use super::exact::{binomial, int, rat};
use super::published::published;
use super::{tables, CoeffError, Rational, SchemeTables};

/// Outcome of one identity check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Both sides of the first mismatch, as exact fractions.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub r: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, result: Result<(), String>) {
        let (passed, detail) = match result {
            Ok(()) => (true, None),
            Err(d) => (false, Some(d)),
        };
        self.checks.push(Check { name: name.into(), passed, detail });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "[{}] r={} {}", if c.passed { "pass" } else { "FAIL" }, self.r, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn eq(lhs: &Rational, rhs: &Rational, what: &str) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: lhs = {lhs}, rhs = {rhs}"))
    }
}

fn eq_vec(lhs: &[Rational], rhs: &[Rational], what: &str) -> Result<(), String> {
    if lhs.len() != rhs.len() {
        return Err(format!("{what}: length {} vs {}", lhs.len(), rhs.len()));
    }
    for (i, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        eq(a, b, &format!("{what}[{i}]"))?;
    }
    Ok(())
}

fn eq_mat(lhs: &[Vec<Rational>], rhs: &[Vec<Rational>], what: &str) -> Result<(), String> {
    if lhs.len() != rhs.len() {
        return Err(format!("{what}: {} rows vs {}", lhs.len(), rhs.len()));
    }
    for (i, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        eq_vec(a, b, &format!("{what}.row{}", i + 1))?;
    }
    Ok(())
}

fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn reversed(v: &[Rational]) -> Vec<Rational> {
    v.iter().rev().cloned().collect()
}

fn reversed_mat(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    m.iter().rev().map(|row| reversed(row)).collect()
}

/// Exact cell averages of `ξ^m` over the cells at `offsets`.
fn monomial_averages(offsets: impl Iterator<Item = i64>, m: usize) -> Vec<Rational> {
    let half = rat(1, 2);
    offsets
        .map(|l| {
            let hi = int(l) + &half;
            let lo = int(l) - &half;
            let mut ph = Rational::one();
            let mut pl = Rational::one();
            for _ in 0..=m {
                ph *= &hi;
                pl *= &lo;
            }
            (ph - pl) / int(m as i64 + 1)
        })
        .collect()
}

/// Symmetric positive semidefiniteness by exact `LDLᵀ`, plus the rank.
fn psd_rank(m: &[Vec<Rational>]) -> Result<usize, String> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut rank = 0;
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return Err(format!("negative pivot {pivot} at {k}"));
        }
        if pivot.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                return Err(format!("zero pivot at {k} with off-diagonal {}", a[k][j]));
            }
            continue;
        }
        rank += 1;
        for i in k + 1..n {
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let v = &factor * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    Ok(rank)
}

/// Check every identity the tables must satisfy, and compare with the
/// published values where they exist.
pub fn verify_tables(r: usize) -> Result<VerificationReport, CoeffError> {
    let t = tables(r)?;
    let mut rep = VerificationReport { r, checks: Vec::new() };
    structural_checks(t, &mut rep);
    if let Some(p) = published(r) {
        rep.push("published c_full", eq_vec(&t.c_full, &p.c_full, "c_full"));
        for (k, c) in p.c_sub.iter().enumerate() {
            rep.push(format!("published c_sub[{k}]"), eq_vec(&t.c_sub[k], c, &format!("c_sub[{k}]")));
        }
        rep.push("published d", eq_vec(&t.d_central, &p.d_central, "d_central"));
        for (k, b) in p.b.iter().enumerate() {
            let label = if k == r { "B_d".to_string() } else { format!("B_{k}") };
            rep.push(format!("published {label}"), eq_mat(&t.b[k], b, &label));
        }
        rep.push("published c_tau", eq_vec(&t.c_tau, &p.c_tau, "c_tau"));
        if let Some(tp) = &p.c_tau_prime {
            rep.push("published c_tau_prime", eq_vec(&t.c_tau_prime, tp, "c_tau_prime"));
        }
    }
    Ok(rep)
}

fn structural_checks(t: &SchemeTables, rep: &mut VerificationReport) {
    let r = t.r;
    let one = Rational::one();
    let zero = Rational::zero();

    rep.push("c_full sums to 1", eq(&sum(&t.c_full), &one, "sum c_full"));
    rep.push("c_full palindromic", eq_vec(&t.c_full, &reversed(&t.c_full), "c_full vs rev"));
    for m in 0..2 * r {
        let f = monomial_averages(1 - r as i64..=r as i64, m);
        let want = rat(1, 2).pow(m as i32);
        rep.push(format!("c_full exact for degree {m}"), eq(&dot(&t.c_full, &f), &want, "value"));
    }
    for m in 0..2 * r - 1 {
        let f = monomial_averages(1 - r as i64..=r as i64 - 1, m);
        let want = rat(1, 2).pow(m as i32);
        rep.push(format!("c_upwind_full exact for degree {m}"), eq(&dot(&t.c_upwind_full, &f), &want, "value"));
    }

    for (k, c) in t.c_sub.iter().enumerate() {
        rep.push(format!("c_sub[{k}] sums to 1"), eq(&sum(c), &one, "sum"));
        rep.push(
            format!("c_sub[{k}] mirror"),
            eq_vec(c, &reversed(&t.c_sub[r - k]), &format!("c_sub[{k}] vs rev c_sub[{}]", r - k)),
        );
        let first = 1 - r as i64 + k as i64;
        for m in 0..r {
            let f = monomial_averages(first..first + r as i64, m);
            let want = rat(1, 2).pow(m as i32);
            rep.push(format!("c_sub[{k}] exact for degree {m}"), eq(&dot(c, &f), &want, "value"));
        }
    }

    rep.push("d_central sums to 1", eq(&sum(&t.d_central), &one, "sum d"));
    rep.push(
        "d_central positive",
        match t.d_central.iter().position(|d| !d.is_positive()) {
            None => Ok(()),
            Some(k) => Err(format!("d[{k}] = {}", t.d_central[k])),
        },
    );
    let central_binom = Rational::from_integer(binomial(2 * r as u32, r as u32));
    let formula: Vec<Rational> = (0..=r)
        .map(|k| {
            let b = Rational::from_integer(binomial(r as u32, k as u32));
            &b * &b / &central_binom
        })
        .collect();
    rep.push("d_central binomial formula", eq_vec(&t.d_central, &formula, "d_central"));

    rep.push("d_upwind sums to 1", eq(&sum(&t.d_upwind), &one, "sum d_upwind"));
    rep.push(
        "d_upwind positive",
        match t.d_upwind.iter().position(|d| !d.is_positive()) {
            None => Ok(()),
            Some(k) => Err(format!("d_upwind[{k}] = {}", t.d_upwind[k])),
        },
    );

    let combine = |d: &[Rational], len: usize| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (k, dk) in d.iter().enumerate() {
            for (j, c) in t.c_sub[k].iter().enumerate() {
                out[k + j] += dk * c;
            }
        }
        out
    };
    rep.push(
        "central linear-combination identity",
        eq_vec(&combine(&t.d_central, 2 * r), &t.c_full, "Σ d_k c_k"),
    );
    rep.push(
        "upwind linear-combination identity",
        eq_vec(&combine(&t.d_upwind, 2 * r - 1), &t.c_upwind_full, "Σ d_k c_k"),
    );

    if r >= 2 {
        for (k, b) in t.b.iter().enumerate() {
            let label = if k == r { "B_d".to_string() } else { format!("B_{k}") };
            let transposed = super::exact::transpose(b);
            rep.push(format!("{label} symmetric"), eq_mat(b, &transposed, &label));
            let row_sums: Vec<Rational> = b.iter().map(|row| sum(row)).collect();
            rep.push(format!("{label} annihilates constants"), eq_vec(&row_sums, &vec![zero.clone(); r], "row sum"));
            rep.push(
                format!("{label} positive semidefinite with constant null space"),
                psd_rank(b).and_then(|rank| {
                    if rank == r - 1 {
                        Ok(())
                    } else {
                        Err(format!("rank {rank}, expected {}", r - 1))
                    }
                }),
            );
        }
        for k in 0..r {
            rep.push(
                format!("B_{} mirrors B_{k}", r - 1 - k),
                eq_mat(&t.b[r - 1 - k], &reversed_mat(&t.b[k]), &format!("B_{}", r - 1 - k)),
            );
        }
    }

    rep.push("c_tau sums to 0", eq(&sum(&t.c_tau), &zero, "sum c_tau"));
    let neg_rev: Vec<Rational> = t.c_tau.iter().rev().map(|x| -x).collect();
    rep.push("c_tau anti-symmetric", eq_vec(&t.c_tau, &neg_rev, "c_tau vs -rev"));
    let signed_binomial: Vec<Rational> = (0..2 * r as u32)
        .map(|j| {
            let b = Rational::from_integer(binomial(2 * r as u32 - 1, j));
            if (2 * r as u32 - 1 - j) % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect();
    rep.push("c_tau signed binomial row", eq_vec(&t.c_tau, &signed_binomial, "c_tau"));
    for m in 0..2 * r - 1 {
        let samples: Vec<Rational> = (0..2 * r as i64).map(|j| int(j).pow(m as i32)).collect();
        rep.push(format!("c_tau annihilates degree {m}"), eq(&dot(&t.c_tau, &samples), &zero, "c_tau·x^m"));
    }
    rep.push(
        "c_tau_prime trailing zero",
        eq(t.c_tau_prime.last().expect("nonempty"), &zero, "last"),
    );
    for m in 0..2 * r - 2 {
        let samples: Vec<Rational> = (0..2 * r as i64).map(|j| int(j).pow(m as i32)).collect();
        rep.push(
            format!("c_tau_prime annihilates degree {m}"),
            eq(&dot(&t.c_tau_prime, &samples), &zero, "c_tau_prime·x^m"),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_supported_order_verifies() {
        for r in 1..=crate::coeffgen::MAX_R {
            let rep = verify_tables(r).unwrap();
            assert!(rep.all_passed(), "{rep}");
        }
    }

    #[test]
    fn failure_reports_both_sides() {
        let t = tables(3).unwrap();
        let mut bad = t.clone();
        bad.c_full[0] = rat(1, 59);
        let mut rep = VerificationReport { r: 3, checks: Vec::new() };
        structural_checks(&bad, &mut rep);
        let f = rep.first_failure().unwrap();
        let d = f.detail.as_ref().unwrap();
        assert!(d.contains("lhs") && d.contains("rhs"), "{d}");
    }

    #[test]
    fn psd_detects_indefinite() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(1)]];
        assert!(psd_rank(&m).is_err());
    }
}
