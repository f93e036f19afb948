use super::{FluxError, LineSystem};
use crate::coeffgen::MAX_R;
use crate::weno::Reconstruct;

/// Reusable per-thread storage for one line sweep.
#[derive(Debug, Default, Clone)]
pub struct LineScratch<const N: usize> {
    flux: Vec<[f64; N]>,
}

/// High-order interface fluxes along one line.
///
/// `buf` holds `n` interior cells framed by `g` ghost cells on each side;
/// `out[j]` receives the flux through the face between interior cells
/// `j-1` and `j`, for `j = 0..=n`.
#[allow(clippy::too_many_arguments)]
pub fn interface_fluxes<S, R, const N: usize>(
    sys: &S,
    rec: &R,
    alpha: &[f64; N],
    buf: &[[f64; N]],
    g: usize,
    dx: f64,
    scratch: &mut LineScratch<N>,
    out: &mut [[f64; N]],
) -> Result<(), FluxError>
where
    S: LineSystem<N> + ?Sized,
    R: Reconstruct + ?Sized,
{
    let n = buf.len() - 2 * g;
    debug_assert_eq!(out.len(), n + 1);
    let (a, b) = rec.extent();
    let m = a.max(b);
    assert!(g >= m, "ghost width {g} below stencil half-width {m}");
    let width = a + b;
    let alpha_max = alpha.iter().copied().fold(0.0, f64::max);

    scratch.flux.clear();
    for q in buf {
        scratch.flux.push(sys.flux(q)?);
    }
    let f = &scratch.flux;

    let mut vq = [[0.0; N]; 2 * MAX_R];
    let mut vf = [[0.0; N]; 2 * MAX_R];
    let mut wp = [0.0; 2 * MAX_R];
    let mut wm = [0.0; 2 * MAX_R];
    for (j, face) in out.iter_mut().enumerate() {
        let l = j + g - 1;
        let lo = l + 1 - m;
        let eig = sys.eigen(&buf[l], &buf[l + 1])?;
        match &eig {
            Some(e) => {
                for k in 0..2 * m {
                    vq[k] = e.to_characteristic(&buf[lo + k]);
                    vf[k] = e.to_characteristic(&f[lo + k]);
                }
            }
            None => {
                vq[..2 * m].copy_from_slice(&buf[lo..lo + 2 * m]);
                vf[..2 * m].copy_from_slice(&f[lo..lo + 2 * m]);
            }
        }
        let mut hat = [0.0; N];
        for c in 0..N {
            let al = if eig.is_some() { alpha[c] } else { alpha_max };
            for k in 0..width {
                let s = m - a + k;
                wp[k] = 0.5 * (vf[s][c] + al * vq[s][c]);
                let s = a + m - 1 - k;
                wm[k] = 0.5 * (vf[s][c] - al * vq[s][c]);
            }
            hat[c] = rec.plus(&wp[..width], dx) + rec.plus(&wm[..width], dx);
        }
        *face = match &eig {
            Some(e) => e.to_conserved(&hat),
            None => hat,
        };
    }
    Ok(())
}

/// First-order Lax–Friedrichs fluxes with a single splitting speed.
pub fn lf_interface_fluxes<S, const N: usize>(
    sys: &S,
    alpha: f64,
    buf: &[[f64; N]],
    g: usize,
    out: &mut [[f64; N]],
) -> Result<(), FluxError>
where
    S: LineSystem<N> + ?Sized,
{
    let mut fl = sys.flux(&buf[g - 1])?;
    for (j, face) in out.iter_mut().enumerate() {
        let ql = &buf[j + g - 1];
        let qr = &buf[j + g];
        let fr = sys.flux(qr)?;
        for c in 0..N {
            face[c] = 0.5 * (fl[c] + fr[c] - alpha * (qr[c] - ql[c]));
        }
        fl = fr;
    }
    Ok(())
}

/// `out[i] += -(F_{i+½} - F_{i-½}) / dx`.
pub fn flux_divergence<const N: usize>(fluxes: &[[f64; N]], dx: f64, out: &mut [[f64; N]]) {
    let inv = 1.0 / dx;
    for (i, o) in out.iter_mut().enumerate() {
        for c in 0..N {
            o[c] -= (fluxes[i + 1][c] - fluxes[i][c]) * inv;
        }
    }
}
