//! Gaussian, square wave, triangle and semi-ellipse advected on `[-1, 1]`.

const DELTA: f64 = 0.005;
const Z: f64 = -0.7;
const ALPHA: f64 = 10.0;
const Y: f64 = 0.5;

fn gauss(x: f64, z: f64) -> f64 {
    let beta = std::f64::consts::LN_2 / (36.0 * DELTA * DELTA);
    (-beta * (x - z) * (x - z)).exp()
}

fn ellipse(x: f64, y: f64) -> f64 {
    (1.0 - ALPHA * ALPHA * (x - y) * (x - y)).max(0.0).sqrt()
}

/// Initial profile on `[-1, 1]`.
pub fn multiwave_initial(x: f64) -> f64 {
    if (-0.8..=-0.6).contains(&x) {
        (gauss(x, Z - DELTA) + 4.0 * gauss(x, Z) + gauss(x, Z + DELTA)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (ellipse(x, Y - DELTA) + 4.0 * ellipse(x, Y) + ellipse(x, Y + DELTA)) / 6.0
    } else {
        0.0
    }
}

/// Exact solution of `q_t + q_x = 0` with periodic wrap onto `[-1, 1)`.
pub fn multiwave_exact(x: f64, t: f64) -> f64 {
    multiwave_initial((x - t + 1.0).rem_euclid(2.0) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landmark_values() {
        assert_eq!(multiwave_exact(-0.3, 0.0), 1.0);
        assert!((multiwave_exact(0.1, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(multiwave_exact(0.9, 0.0), 0.0);
        // the Gaussian peak averages three bumps with half-width 6δ
        let g = |d: f64| (-(std::f64::consts::LN_2 / 36.0) * d * d / (DELTA * DELTA)).exp();
        let peak = (g(1.0 * DELTA) + 4.0 + g(DELTA)) / 6.0;
        assert!((multiwave_exact(-0.7, 0.0) - peak).abs() < 1e-15);
        assert!((multiwave_exact(0.5, 0.0) - (2.0 * (1.0f64 - 0.0025).sqrt() + 4.0) / 6.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_in_time() {
        for k in 0..200 {
            let x = -1.0 + 0.01 * k as f64 + 0.003;
            assert!((multiwave_exact(x, 2.0) - multiwave_exact(x, 0.0)).abs() < 1e-12, "{x}");
            assert!((multiwave_exact(x + 0.25, 0.25) - multiwave_exact(x, 0.0)).abs() < 1e-12 || x + 0.25 > 1.0);
        }
    }
}
