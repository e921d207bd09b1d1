use num_complex::Complex;

use super::{check_cutoff, Biquad, DesignedFilter, FilterError, FilterSpec, IirDesign, Realization};
use crate::scalar::Real;

/// Left-half-plane poles of the order-`order` prototype with unit band edge,
/// only those with non-negative imaginary part (the rest are conjugates).
fn prototype_poles(design: IirDesign<f64>, order: usize) -> Vec<Complex<f64>> {
    let (sigma, omega) = match design {
        IirDesign::Butterworth => (1.0, 1.0),
        IirDesign::Chebyshev1 { ripple_db } => {
            let eps = (10f64.powf(ripple_db / 10.0) - 1.0).sqrt();
            let mu = (1.0 / eps).asinh() / order as f64;
            (mu.sinh(), mu.cosh())
        }
    };
    (1..=order.div_ceil(2))
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k - 1) as f64 / (2 * order) as f64;
            Complex::new(-sigma * theta.sin(), omega * theta.cos())
        })
        .collect()
}

/// Analog prototype, frequency pre-warp, bilinear transform, then a cascade
/// of second-order sections. Odd orders end with a first-order section.
/// Every section has unit DC gain; even-order Chebyshev cascades are then
/// scaled to the bottom of the ripple band, as the analog prototype is.
pub fn design_iir<T: Real>(spec: &FilterSpec<T>) -> Result<DesignedFilter<T>, FilterError> {
    let FilterSpec::Iir { cutoff, design, order } = *spec else {
        return Err(FilterError::InvalidSpec("design_iir expects an Iir spec".into()));
    };
    check_cutoff(cutoff)?;
    let fc = cutoff.to_f64_lossy();
    if fc >= 0.5 {
        return Err(FilterError::InvalidSpec("IIR cutoff must be below Nyquist".into()));
    }
    if order == 0 {
        return Err(FilterError::InvalidSpec("IIR order must be at least 1".into()));
    }
    let design = match design {
        IirDesign::Butterworth => IirDesign::Butterworth,
        IirDesign::Chebyshev1 { ripple_db } => {
            let r = ripple_db.to_f64_lossy();
            if !r.is_finite() || r <= 0.0 {
                return Err(FilterError::InvalidSpec(format!("ripple {r} dB must be positive")));
            }
            IirDesign::Chebyshev1 { ripple_db: r }
        }
    };

    // bilinear transform with T = 1: s = 2 (z - 1) / (z + 1)
    let warped = 2.0 * (std::f64::consts::PI * fc).tan();
    let to_z = |p: Complex<f64>| (Complex::new(2.0, 0.0) + p) / (Complex::new(2.0, 0.0) - p);

    let mut sections: Vec<Biquad<f64>> = prototype_poles(design, order)
        .into_iter()
        .map(|p| {
            let z = to_z(p * warped);
            if p.im.abs() < 1e-12 {
                let g = (1.0 - z.re) / 2.0;
                Biquad {
                    b0: g,
                    b1: g,
                    b2: 0.0,
                    a1: -z.re,
                    a2: 0.0,
                }
            } else {
                let a1 = -2.0 * z.re;
                let a2 = z.norm_sqr();
                let g = (1.0 + a1 + a2) / 4.0;
                Biquad {
                    b0: g,
                    b1: 2.0 * g,
                    b2: g,
                    a1,
                    a2,
                }
            }
        })
        .collect();

    if let IirDesign::Chebyshev1 { ripple_db } = design {
        if order % 2 == 0 {
            let dc = 1.0 / (10f64.powf(ripple_db / 10.0)).sqrt();
            let s = &mut sections[0];
            s.b0 *= dc;
            s.b1 *= dc;
            s.b2 *= dc;
        }
    }

    let sections = sections
        .into_iter()
        .map(|s| Biquad {
            b0: T::lit(s.b0),
            b1: T::lit(s.b1),
            b2: T::lit(s.b2),
            a1: T::lit(s.a1),
            a2: T::lit(s.a2),
        })
        .collect();
    Ok(DesignedFilter {
        spec: *spec,
        realization: Realization::Iir(sections),
    })
}
