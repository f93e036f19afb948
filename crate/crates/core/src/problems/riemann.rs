//! Exact solution of the one-dimensional Riemann problem for a polytropic gas.

use thiserror::Error;

/// Primitive state `(ρ, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    fn sound(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiemannError {
    #[error("state {0:?} is not physical")]
    Unphysical(Primitive),
    #[error("initial data generate vacuum: pressure positivity condition {critical} <= {du}")]
    Vacuum { critical: f64, du: f64 },
    #[error("Newton iteration for the star pressure did not converge")]
    NoConvergence,
}

/// Self-similar solution; sample with [`ExactRiemann::sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
}

/// Pressure function of one side and its derivative.
fn side_function(p: f64, s: &Primitive, gamma: f64) -> (f64, f64) {
    let a = s.sound(gamma);
    if p > s.p {
        let ak = 2.0 / ((gamma + 1.0) * s.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let q = (ak / (bk + p)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (bk + p)))
    } else {
        let ratio = p / s.p;
        let e = (gamma - 1.0) / (2.0 * gamma);
        (2.0 * a / (gamma - 1.0) * (ratio.powf(e) - 1.0), ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * a))
    }
}

/// `f_L(p) + f_R(p) + (u_R - u_L)`; the star pressure is its root.
pub fn pressure_function(p: f64, left: &Primitive, right: &Primitive, gamma: f64) -> f64 {
    side_function(p, left, gamma).0 + side_function(p, right, gamma).0 + right.u - left.u
}

impl ExactRiemann {
    pub fn new(left: Primitive, right: Primitive, gamma: f64) -> Result<Self, RiemannError> {
        for s in [left, right] {
            if !(s.rho > 0.0 && s.p > 0.0) {
                return Err(RiemannError::Unphysical(s));
            }
        }
        let (al, ar) = (left.sound(gamma), right.sound(gamma));
        let du = right.u - left.u;
        let critical = 2.0 / (gamma - 1.0) * (al + ar);
        if critical <= du {
            return Err(RiemannError::Vacuum { critical, du });
        }
        // two-rarefaction guess, exact when both waves are rarefactions
        let e = (gamma - 1.0) / (2.0 * gamma);
        let mut p = ((al + ar - 0.5 * (gamma - 1.0) * du) / (al / left.p.powf(e) + ar / right.p.powf(e))).powf(1.0 / e);
        let mut converged = false;
        for _ in 0..100 {
            let (fl, dl) = side_function(p, &left, gamma);
            let (fr, dr) = side_function(p, &right, gamma);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-3 * p);
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < 1e-12 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(RiemannError::NoConvergence);
        }
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (side_function(p, &right, gamma).0 - side_function(p, &left, gamma).0);
        Ok(Self { left, right, gamma, p_star: p, u_star })
    }

    /// Solution at `ξ = x / t`.
    pub fn sample(&self, xi: f64) -> Primitive {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        let gm = (g - 1.0) / (g + 1.0);
        if xi <= us {
            let s = &self.left;
            let a = s.sound(g);
            if ps > s.p {
                let ratio = ps / s.p;
                let speed = s.u - a * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= speed {
                    *s
                } else {
                    Primitive::new(s.rho * (ratio + gm) / (gm * ratio + 1.0), us, ps)
                }
            } else {
                let head = s.u - a;
                let a_star = a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                let tail = us - a_star;
                if xi <= head {
                    *s
                } else if xi > tail {
                    Primitive::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) + gm / a * (s.u - xi);
                    Primitive::new(
                        s.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (a + (g - 1.0) / 2.0 * s.u + xi),
                        s.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        } else {
            let s = &self.right;
            let a = s.sound(g);
            if ps > s.p {
                let ratio = ps / s.p;
                let speed = s.u + a * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= speed {
                    *s
                } else {
                    Primitive::new(s.rho * (ratio + gm) / (gm * ratio + 1.0), us, ps)
                }
            } else {
                let head = s.u + a;
                let a_star = a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                let tail = us + a_star;
                if xi >= head {
                    *s
                } else if xi <= tail {
                    Primitive::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) - gm / a * (s.u - xi);
                    Primitive::new(
                        s.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (-a + (g - 1.0) / 2.0 * s.u + xi),
                        s.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        }
    }

    /// Solution at position `x` and time `t` for an initial jump at `x0`.
    pub fn at(&self, x: f64, t: f64, x0: f64) -> Primitive {
        if t <= 0.0 {
            return if x < x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }
}

/// Post-shock state behind a shock of Mach number `mach` moving in `+x`
/// into gas at rest with density `rho` and pressure `p`.
pub fn moving_shock_state(mach: f64, rho: f64, p: f64, gamma: f64) -> Primitive {
    let m2 = mach * mach;
    let a = (gamma * p / rho).sqrt();
    let rho2 = rho * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
    let p2 = p * (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0);
    let u2 = mach * a * (1.0 - rho / rho2);
    Primitive::new(rho2, u2, p2)
}
