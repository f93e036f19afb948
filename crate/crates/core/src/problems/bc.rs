use serde::{Deserialize, Serialize};

use crate::coeffgen::MAX_R;

/// Boundary condition of one side of the domain. States are primitive
/// (`[q]`, `[ρ, u, p]` or `[ρ, u, v, p]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideBc {
    Periodic,
    /// Zeroth-order extrapolation.
    Outflow,
    /// Mirror with the wall-normal momentum negated.
    Reflective,
    /// Pinned state.
    Inflow { state: Vec<f64> },
    /// Inflow where the along-side coordinate is below `split`, reflective beyond.
    SplitInflow { split: f64, state: Vec<f64> },
    /// Ghost cells take `post` left of the oblique shock
    /// `x_s(y, t) = x0 + (y + speed·t)·slope_inv` and `pre` right of it.
    ShockTrack { x0: f64, slope_inv: f64, speed: f64, post: Vec<f64>, pre: Vec<f64> },
}

/// Ghost rule for one end of one grid line, in conserved variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndFill<const N: usize> {
    Periodic,
    Outflow,
    Reflective,
    Fixed([f64; N]),
    /// Explicit ghost states ordered from the interior outward.
    Ghosts([[f64; N]; MAX_R]),
}

/// Mirror with the line-normal momentum (component 1) negated.
#[inline]
pub fn reflect<const N: usize>(q: &[f64; N]) -> [f64; N] {
    let mut m = *q;
    if N > 1 {
        m[1] = -m[1];
    }
    m
}

/// Fill `g` ghost cells on each end of `buf` (`n` interior cells between).
pub fn fill_line<const N: usize>(buf: &mut [[f64; N]], g: usize, left: &EndFill<N>, right: &EndFill<N>) {
    let n = buf.len() - 2 * g;
    for k in 0..g {
        buf[g - 1 - k] = match left {
            EndFill::Periodic => buf[g + (n - 1 - k % n)],
            EndFill::Outflow => buf[g],
            EndFill::Reflective => reflect(&buf[g + k.min(n - 1)]),
            EndFill::Fixed(s) => *s,
            EndFill::Ghosts(s) => s[k],
        };
        buf[g + n + k] = match right {
            EndFill::Periodic => buf[g + k % n],
            EndFill::Outflow => buf[g + n - 1],
            EndFill::Reflective => reflect(&buf[g + n - 1 - k.min(n - 1)]),
            EndFill::Fixed(s) => *s,
            EndFill::Ghosts(s) => s[k],
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, g: usize) -> Vec<[f64; 3]> {
        let mut v = vec![[0.0; 3]; n + 2 * g];
        for i in 0..n {
            v[g + i] = [1.0 + i as f64, 10.0 + i as f64, 100.0 + i as f64];
        }
        v
    }

    #[test]
    fn periodic_wraps() {
        let mut b = line(4, 2);
        fill_line(&mut b, 2, &EndFill::Periodic, &EndFill::Periodic);
        assert_eq!(b[0][0], 3.0);
        assert_eq!(b[1][0], 4.0);
        assert_eq!(b[6][0], 1.0);
        assert_eq!(b[7][0], 2.0);
    }

    #[test]
    fn reflective_negates_normal_momentum() {
        let mut b = line(4, 3);
        fill_line(&mut b, 3, &EndFill::Reflective, &EndFill::Outflow);
        assert_eq!(b[2], [1.0, -10.0, 100.0]);
        assert_eq!(b[1], [2.0, -11.0, 101.0]);
        assert_eq!(b[0], [3.0, -12.0, 102.0]);
        assert_eq!(b[7], b[6]);
        assert_eq!(b[9], [4.0, 13.0, 103.0]);
    }

    #[test]
    fn fixed_and_explicit_ghosts() {
        let mut b = line(5, 2);
        let mut ghosts = [[0.0; 3]; MAX_R];
        ghosts[0] = [7.0, 0.0, 0.0];
        ghosts[1] = [8.0, 0.0, 0.0];
        fill_line(&mut b, 2, &EndFill::Fixed([9.0, 1.0, 2.0]), &EndFill::Ghosts(ghosts));
        assert_eq!(b[0], [9.0, 1.0, 2.0]);
        assert_eq!(b[1], [9.0, 1.0, 2.0]);
        assert_eq!(b[7][0], 7.0);
        assert_eq!(b[8][0], 8.0);
    }

    #[test]
    fn fill_is_idempotent() {
        for (l, r) in [
            (EndFill::Periodic, EndFill::Periodic),
            (EndFill::Reflective, EndFill::Outflow),
            (EndFill::Outflow, EndFill::Fixed([1.0, 2.0, 3.0])),
        ] {
            let mut b = line(6, 3);
            fill_line(&mut b, 3, &l, &r);
            let once = b.clone();
            fill_line(&mut b, 3, &l, &r);
            assert_eq!(b, once);
        }
    }
}
