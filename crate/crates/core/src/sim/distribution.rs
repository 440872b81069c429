use crate::error::{Error, Result};

/// Empirical distribution of a sample set, kept sorted.
///
/// Samples may be `+∞` (e.g. the power needed by an unreachable drone) but
/// never NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "need at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("samples", "NaN sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples `≤ x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Linearly interpolated quantile (Hyndman-Fan type 7), `p ∈ [0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let h = (self.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(self.len() - 1);
        let (a, b) = (self.samples[lo], self.samples[hi]);
        if a == b {
            a
        } else {
            a + (h - lo as f64) * (b - a)
        }
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// CDF evaluated on `grid`, as `(x, F(x))` pairs.
    pub fn table(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, self.cdf(x))).collect()
    }

    /// `points` evenly spaced grid points spanning the finite samples.
    pub fn finite_grid(&self, points: usize) -> Vec<f64> {
        let finite = || self.samples.iter().copied().filter(|x| x.is_finite());
        let (Some(lo), Some(hi)) = (finite().next(), finite().next_back()) else {
            return Vec::new();
        };
        if points < 2 || lo == hi {
            return vec![lo];
        }
        (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_statistics() {
        let d = EmpiricalDistribution::from_samples(vec![3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(d.samples(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.cdf(0.0), 0.0);
        assert_eq!(d.cdf(2.0), 0.5);
        assert_eq!(d.cdf(10.0), 1.0);
        assert_eq!(d.median(), 2.5);
        assert_eq!(d.quantile(0.0), 1.0);
        assert_eq!(d.quantile(1.0), 4.0);
        assert_eq!(d.mean(), 2.5);
        assert!(EmpiricalDistribution::from_samples(vec![]).is_err());
        assert!(EmpiricalDistribution::from_samples(vec![f64::NAN]).is_err());
    }

    #[test]
    fn infinite_samples() {
        let d = EmpiricalDistribution::from_samples(vec![1.0, f64::INFINITY]).unwrap();
        assert_eq!(d.cdf(f64::MAX), 0.5);
        assert_eq!(d.cdf(f64::INFINITY), 1.0);
        assert_eq!(d.finite_grid(5), vec![1.0]);
    }

    proptest! {
        #[test]
        fn cdf_is_monotone_with_correct_limits(xs in proptest::collection::vec(-1e6f64..1e6, 1..200), grid in proptest::collection::vec(-2e6f64..2e6, 1..50)) {
            let d = EmpiricalDistribution::from_samples(xs).unwrap();
            let mut g = grid;
            g.sort_by(f64::total_cmp);
            let t = d.table(&g);
            prop_assert!(t.windows(2).all(|w| w[0].1 <= w[1].1));
            prop_assert!(t.iter().all(|&(_, f)| (0.0..=1.0).contains(&f)));
            prop_assert_eq!(d.cdf(f64::NEG_INFINITY), 0.0);
            prop_assert_eq!(d.cdf(f64::INFINITY), 1.0);
            let qs: Vec<f64> = (0..=10).map(|i| d.quantile(i as f64 / 10.0)).collect();
            prop_assert!(qs.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
