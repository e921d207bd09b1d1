use super::{check_cutoff, DesignedFilter, FilterError, FilterSpec, FirWindow, Realization};
use crate::scalar::Real;

/// Zeroth-order modified Bessel function of the first kind, by power series.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= half / k as f64;
        let t2 = term * term;
        sum += t2;
        if t2 < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Window value at tap `k` of `taps`.
pub fn window_coefficient<T: Real>(window: FirWindow<T>, k: usize, taps: usize) -> T {
    if taps == 1 {
        return T::one();
    }
    let span = (taps - 1) as f64;
    let phase = 2.0 * std::f64::consts::PI * k as f64 / span;
    let w = match window {
        FirWindow::Rectangular => 1.0,
        FirWindow::Hamming => 0.54 - 0.46 * phase.cos(),
        FirWindow::Blackman => 0.42 - 0.5 * phase.cos() + 0.08 * (2.0 * phase).cos(),
        FirWindow::Kaiser { beta } => {
            let beta = beta.to_f64_lossy();
            let r = 2.0 * k as f64 / span - 1.0;
            bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / bessel_i0(beta)
        }
    };
    T::lit(w)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Windowed-sinc low-pass, `h[k] = w[k] sinc(2 fc (k - M))`, scaled to unit
/// DC gain. Only the first half is computed, then mirrored, so the taps are
/// exactly symmetric.
pub fn design_fir<T: Real>(spec: &FilterSpec<T>) -> Result<DesignedFilter<T>, FilterError> {
    let FilterSpec::Fir { cutoff, window, taps } = *spec else {
        return Err(FilterError::InvalidSpec("design_fir expects a Fir spec".into()));
    };
    check_cutoff(cutoff)?;
    if taps == 0 || taps % 2 == 0 {
        return Err(FilterError::InvalidSpec(format!("FIR taps must be odd and positive, got {taps}")));
    }
    if let FirWindow::Kaiser { beta } = window {
        if !beta.is_finite() || beta < T::zero() {
            return Err(FilterError::InvalidSpec(format!("Kaiser beta {beta} must be finite and >= 0")));
        }
    }

    let mid = (taps - 1) / 2;
    let fc = cutoff.to_f64_lossy();
    let half: Vec<f64> = (0..=mid)
        .map(|k| {
            let offset = k as f64 - mid as f64;
            window_coefficient::<T>(window, k, taps).to_f64_lossy() * sinc(2.0 * fc * offset)
        })
        .collect();
    let sum = 2.0 * half[..mid].iter().sum::<f64>() + half[mid];
    if sum.abs() < f64::MIN_POSITIVE {
        return Err(FilterError::InvalidSpec("design has zero DC gain".into()));
    }

    let half: Vec<T> = half.iter().map(|&v| T::lit(v / sum)).collect();
    let coeffs = half
        .iter()
        .chain(half[..mid].iter().rev())
        .copied()
        .collect();
    Ok(DesignedFilter {
        spec: *spec,
        realization: Realization::Fir(coeffs),
    })
}
