/// Piecewise quintic Hermite interpolant through samples of a function and
/// its first two derivatives.
///
/// Each piece matches value, slope and second derivative at both of its
/// knots, so the interpolant is C² and its second derivative is accurate to
/// fourth order in the knot spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTable {
    name: String,
    knots: Vec<f64>,
    /// Power-basis coefficients in the local coordinate `t = (x - x_i) / h_i`.
    pieces: Vec<[f64; 6]>,
}

impl HermiteTable {
    pub fn new(
        name: impl Into<String>,
        knots: Vec<f64>,
        values: &[f64],
        slopes: &[f64],
        curvatures: &[f64],
    ) -> Result<Self, String> {
        let n = knots.len();
        if n < 2 {
            return Err("need at least two knots".into());
        }
        if values.len() != n || slopes.len() != n || curvatures.len() != n {
            return Err("sample arrays must match the knot count".into());
        }
        if !knots.windows(2).all(|w| w[0] < w[1]) {
            return Err("knots must be strictly increasing".into());
        }
        let all_finite = knots
            .iter()
            .chain(values)
            .chain(slopes)
            .chain(curvatures)
            .all(|x| x.is_finite());
        if !all_finite {
            return Err("samples must be finite".into());
        }

        let pieces = (0..n - 1)
            .map(|i| {
                let h = knots[i + 1] - knots[i];
                let c0 = values[i];
                let c1 = h * slopes[i];
                let c2 = 0.5 * h * h * curvatures[i];
                let a = values[i + 1] - c0 - c1 - c2;
                let b = h * slopes[i + 1] - c1 - 2.0 * c2;
                let c = h * h * curvatures[i + 1] - 2.0 * c2;
                let c3 = 10.0 * a - 4.0 * b + 0.5 * c;
                let c4 = -15.0 * a + 7.0 * b - c;
                let c5 = 6.0 * a - 3.0 * b + 0.5 * c;
                [c0, c1, c2, c3, c4, c5]
            })
            .collect();

        Ok(Self {
            name: name.into(),
            knots,
            pieces,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// `[f, f', f'', f''']` at `x`, or `None` outside the knot range.
    pub fn derivatives(&self, x: f64) -> Option<[f64; 4]> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let i = self
            .knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        let h = self.knots[i + 1] - self.knots[i];
        let t = (x - self.knots[i]) / h;
        let [c0, c1, c2, c3, c4, c5] = self.pieces[i];
        let p = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
        let dp = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
        let ddp = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
        let dddp = 6.0 * c3 + t * (24.0 * c4 + t * 60.0 * c5);
        Some([p, dp / h, ddp / (h * h), dddp / (h * h * h)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quintics_exactly() {
        let f = |x: f64| {
            [
                x.powi(5) - 2.0 * x.powi(3) + x,
                5.0 * x.powi(4) - 6.0 * x * x + 1.0,
                20.0 * x.powi(3) - 12.0 * x,
                60.0 * x * x - 12.0,
            ]
        };
        let knots = vec![0.0, 0.7, 1.5, 2.0];
        let s: Vec<[f64; 4]> = knots.iter().map(|&x| f(x)).collect();
        let t = HermiteTable::new(
            "q",
            knots,
            &s.iter().map(|d| d[0]).collect::<Vec<_>>(),
            &s.iter().map(|d| d[1]).collect::<Vec<_>>(),
            &s.iter().map(|d| d[2]).collect::<Vec<_>>(),
        )
        .unwrap();
        for x in [0.0, 0.3, 0.7, 1.1, 1.99, 2.0] {
            let got = t.derivatives(x).unwrap();
            let want = f(x);
            for k in 0..4 {
                assert!((got[k] - want[k]).abs() < 1e-9, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn outside_range_is_none() {
        let t = HermiteTable::new("z", vec![0.0, 1.0], &[0.0; 2], &[0.0; 2], &[0.0; 2]).unwrap();
        assert!(t.derivatives(-1e-12).is_none());
        assert!(t.derivatives(1.0 + 1e-12).is_none());
        assert!(t.derivatives(f64::NAN).is_none());
        assert_eq!(t.derivatives(1.0), Some([0.0; 4]));
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(HermiteTable::new("z", vec![0.0], &[0.0], &[0.0], &[0.0]).is_err());
        assert!(HermiteTable::new("z", vec![1.0, 0.0], &[0.0; 2], &[0.0; 2], &[0.0; 2]).is_err());
    }
}
