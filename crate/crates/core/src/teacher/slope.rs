//! Least-squares slope of a learning curve.

/// Returned when the points do not determine a slope: fewer than two
/// points, or every abscissa identical. Teachers treat it as zero reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoSlope;

/// Ordinary least-squares slope `sum((t - t_mean)(y - y_mean)) / sum((t - t_mean)^2)`.
pub fn ols_slope<I>(points: I) -> Result<f64, NoSlope>
where
    I: IntoIterator<Item = (f64, f64)>,
    I::IntoIter: Clone,
{
    let it = points.into_iter();
    let (n, sum_t, sum_y) = it
        .clone()
        .fold((0usize, 0.0, 0.0), |(n, st, sy), (t, y)| (n + 1, st + t, sy + y));
    if n < 2 {
        return Err(NoSlope);
    }
    let t_mean = sum_t / n as f64;
    let y_mean = sum_y / n as f64;
    let (sxy, sxx) = it.fold((0.0, 0.0), |(sxy, sxx), (t, y)| {
        let dt = t - t_mean;
        (sxy + dt * (y - y_mean), sxx + dt * dt)
    });
    if sxx == 0.0 {
        return Err(NoSlope);
    }
    Ok(sxy / sxx)
}

/// Slope with [`NoSlope`] mapped to zero.
pub fn slope_or_zero<I>(points: I) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
    I::IntoIter: Clone,
{
    ols_slope(points).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(ols_slope([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]), Ok(1.0));
        assert_eq!(ols_slope([(0.0, 5.0), (1.0, 5.0), (2.0, 5.0)]), Ok(0.0));
        // t_mean = 1, y_mean = 1; sxy = (-1)(-1) + 0 + (1)(0) = 1; sxx = 2.
        assert_eq!(ols_slope([(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]), Ok(0.5));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(ols_slope(std::iter::empty::<(f64, f64)>()), Err(NoSlope));
        assert_eq!(ols_slope([(3.0, 1.0)]), Err(NoSlope));
        assert_eq!(ols_slope([(3.0, 1.0), (3.0, 2.0), (3.0, 0.0)]), Err(NoSlope));
        assert_eq!(slope_or_zero([(3.0, 1.0)]), 0.0);
    }

    #[test]
    fn slope_ignores_offsets() {
        let pts = [(10.0, 0.25), (11.0, 0.5), (12.0, 0.75)];
        assert!((ols_slope(pts).unwrap() - 0.25).abs() < 1e-12);
    }
}
