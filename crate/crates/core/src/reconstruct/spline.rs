//! Piecewise cubic interpolation with C2 continuity.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplineError {
    #[error("cubic spline needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("knot positions must be strictly increasing (violated at {0})")]
    UnsortedPositions(usize),
    #[error("{positions} positions but {values} values")]
    LengthMismatch { positions: usize, values: usize },
    #[error("position {position} outside the query grid of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("singular spline system")]
    Singular,
}

/// End conditions of the spline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplineBoundary {
    /// Third derivative continuous across the second and second-to-last
    /// knots. Reproduces cubic polynomials exactly.
    #[default]
    NotAKnot,
    /// Zero second derivative at both ends.
    Natural,
}

const MIN_POINTS: usize = 4;

/// Cubic spline segments over knots `x_0 < ... < x_n`.
///
/// Segment `i` covers `[x_i, x_{i+1}]` and stores `[a, b, c, d]` of
/// `a + b t + c t^2 + d t^3` in the local offset `t = x - x_i`; the offset
/// form keeps the coefficients well scaled for knots far from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T> {
    knots: Vec<T>,
    coeffs: Vec<[T; 4]>,
}

impl<T: Real> CubicSpline<T> {
    pub fn fit(x: &[T], y: &[T], boundary: SplineBoundary) -> Result<Self, SplineError> {
        if x.len() != y.len() {
            return Err(SplineError::LengthMismatch {
                positions: x.len(),
                values: y.len(),
            });
        }
        let n = x.len();
        if n < MIN_POINTS {
            return Err(SplineError::TooFewPoints(n));
        }
        if let Some(i) = x.windows(2).position(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(SplineError::UnsortedPositions(i + 1));
        }

        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<T> = y.windows(2).zip(&h).map(|(w, &hi)| (w[1] - w[0]) / hi).collect();

        // Tridiagonal system for the knot derivatives s_i.
        let three = T::lit(3.0);
        let two = T::lit(2.0);
        let mut lower = vec![T::zero(); n - 1];
        let mut diag = vec![T::zero(); n];
        let mut upper = vec![T::zero(); n - 1];
        let mut rhs = vec![T::zero(); n];
        for i in 1..n - 1 {
            lower[i - 1] = h[i];
            diag[i] = two * (h[i - 1] + h[i]);
            upper[i] = h[i - 1];
            rhs[i] = three * (h[i] * slope[i - 1] + h[i - 1] * slope[i]);
        }
        match boundary {
            SplineBoundary::NotAKnot => {
                let d = x[2] - x[0];
                diag[0] = h[1];
                upper[0] = d;
                rhs[0] = ((h[0] + two * d) * h[1] * slope[0] + h[0] * h[0] * slope[1]) / d;

                let m = n - 1;
                let d = x[m] - x[m - 2];
                diag[m] = h[m - 2];
                lower[m - 1] = d;
                rhs[m] = (h[m - 1] * h[m - 1] * slope[m - 2] + (two * d + h[m - 1]) * h[m - 2] * slope[m - 1]) / d;
            }
            SplineBoundary::Natural => {
                diag[0] = two;
                upper[0] = T::one();
                rhs[0] = three * slope[0];
                diag[n - 1] = two;
                lower[n - 2] = T::one();
                rhs[n - 1] = three * slope[n - 2];
            }
        }
        let s = solve_tridiagonal(lower, diag, upper, rhs)?;

        let coeffs = (0..n - 1)
            .map(|i| {
                let hi = h[i];
                let c = (three * slope[i] - two * s[i] - s[i + 1]) / hi;
                let d = (s[i] + s[i + 1] - two * slope[i]) / (hi * hi);
                [y[i], s[i], c, d]
            })
            .collect();
        Ok(Self {
            knots: x.to_vec(),
            coeffs,
        })
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    /// Local-offset coefficients `[a, b, c, d]` of every segment.
    pub fn segments(&self) -> &[[T; 4]] {
        &self.coeffs
    }

    fn segment_for(&self, x: T) -> usize {
        let idx = self.knots.partition_point(|&k| k <= x);
        idx.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    /// Value, first and second derivative of segment `i` at `x`. Evaluating
    /// outside the segment extends its polynomial.
    pub fn eval_segment(&self, i: usize, x: T) -> (T, T, T) {
        let [a, b, c, d] = self.coeffs[i];
        let t = x - self.knots[i];
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let value = a + t * (b + t * (c + t * d));
        let d1 = b + t * (two * c + three * t * d);
        let d2 = two * c + T::lit(6.0) * d * t;
        (value, d1, d2)
    }

    /// Spline value; outside `[x_0, x_n]` the terminal polynomial is extended.
    pub fn eval(&self, x: T) -> T {
        self.eval_segment(self.segment_for(x), x).0
    }

    /// Values at the integer grid `0..len`.
    pub fn eval_grid(&self, len: usize) -> Vec<T> {
        let mut seg = 0;
        let last = self.coeffs.len() - 1;
        (0..len)
            .map(|i| {
                let x = T::from_usize_lossy(i);
                while seg < last && self.knots[seg + 1] <= x {
                    seg += 1;
                }
                self.eval_segment(seg, x).0
            })
            .collect()
    }
}

/// Gaussian elimination with partial pivoting on a tridiagonal system
/// (the LAPACK `gtsv` scheme). `lower[i]` sits at `(i+1, i)`, `upper[i]` at
/// `(i, i+1)`.
fn solve_tridiagonal<T: Real>(
    mut lower: Vec<T>,
    mut diag: Vec<T>,
    mut upper: Vec<T>,
    mut b: Vec<T>,
) -> Result<Vec<T>, SplineError> {
    let n = diag.len();
    // after elimination `lower[i]` holds the fill-in at (i, i+2)
    for i in 0..n - 1 {
        if diag[i].abs() >= lower[i].abs() {
            if diag[i] == T::zero() {
                return Err(SplineError::Singular);
            }
            let fact = lower[i] / diag[i];
            diag[i + 1] -= fact * upper[i];
            b[i + 1] = b[i + 1] - fact * b[i];
            lower[i] = T::zero();
        } else {
            let fact = diag[i] / lower[i];
            diag[i] = lower[i];
            let temp = diag[i + 1];
            diag[i + 1] = upper[i] - fact * temp;
            if i + 2 < n {
                lower[i] = upper[i + 1];
                upper[i + 1] = -fact * lower[i];
            } else {
                lower[i] = T::zero();
            }
            upper[i] = temp;
            let temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - fact * b[i + 1];
        }
    }
    if diag[n - 1] == T::zero() {
        return Err(SplineError::Singular);
    }
    b[n - 1] /= diag[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - upper[n - 2] * b[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - upper[i] * b[i + 1] - lower[i] * b[i + 2]) / diag[i];
    }
    Ok(b)
}

/// Interpolate samples known at integer `positions` onto the grid
/// `0..query_len`.
pub fn spline_interpolate<T: Real>(
    positions: &[usize],
    values: &[T],
    query_len: usize,
    boundary: SplineBoundary,
) -> Result<Vec<T>, SplineError> {
    if let Some(&position) = positions.iter().find(|&&p| p >= query_len) {
        return Err(SplineError::PositionOutOfRange {
            position,
            len: query_len,
        });
    }
    let x: Vec<T> = positions.iter().map(|&p| T::from_usize_lossy(p)).collect();
    Ok(CubicSpline::fit(&x, values, boundary)?.eval_grid(query_len))
}
