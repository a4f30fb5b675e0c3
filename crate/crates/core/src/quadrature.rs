//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |integral|)`. Breakpoints supplied by
//! the caller seed the initial partition, so kinks and steep regions that are
//! known in advance never straddle a panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (value {value:e}, error estimate {error_estimate:e})"
    )]
    NotConverged {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },
    #[error("invalid integration bounds: {0}")]
    InvalidBounds(String),
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
// Tables keep the published digits.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_15<F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let eval = |f: &mut F, x: f64| -> Result<f64, QuadratureError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { x })
        }
    };

    let fc = eval(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];

    for (j, node) in XGK.iter().take(7).enumerate() {
        let dx = half * node;
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();

    // QUADPACK error rescaling
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Panel {
        lo,
        hi,
        value,
        error,
    })
}

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 4000,
        }
    }
}

impl Integrator {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Integrator {
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64) -> Result<Estimate, QuadratureError>
    where
        F: FnMut(f64) -> f64,
    {
        self.integrate_partitioned(f, &[lo, hi])
    }

    /// Integrates over the partition `points[0] < points[1] < ... < points[n]`.
    ///
    /// Duplicate consecutive points are dropped; a single point (or an empty
    /// partition) integrates to zero.
    pub fn integrate_partitioned<F>(
        &self,
        mut f: F,
        points: &[f64],
    ) -> Result<Estimate, QuadratureError>
    where
        F: FnMut(f64) -> f64,
    {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(QuadratureError::InvalidBounds(
                "non-finite breakpoint".into(),
            ));
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(QuadratureError::InvalidBounds(
                "breakpoints must be non-decreasing".into(),
            ));
        }

        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in points.windows(2) {
            if w[1] > w[0] {
                heap.push(gauss_kronrod_15(&mut f, w[0], w[1])?);
                evaluations += 15;
            }
        }
        if heap.is_empty() {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }

        let mut subdivisions = 0;
        loop {
            let (value, error) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(Estimate {
                    value,
                    error,
                    evaluations,
                });
            }
            if subdivisions >= self.max_subdivisions {
                return Err(QuadratureError::NotConverged {
                    value,
                    error_estimate: error,
                    subdivisions,
                });
            }

            let worst = heap.pop().expect("partition is non-empty");
            let mid = 0.5 * (worst.lo + worst.hi);
            if mid <= worst.lo || mid >= worst.hi {
                // panel can no longer be split in floating point
                return Err(QuadratureError::NotConverged {
                    value,
                    error_estimate: error,
                    subdivisions,
                });
            }
            heap.push(gauss_kronrod_15(&mut f, worst.lo, mid)?);
            heap.push(gauss_kronrod_15(&mut f, mid, worst.hi)?);
            evaluations += 30;
            subdivisions += 1;
        }
    }
}

/// Breakpoints `lo, lo + h, lo + 2h, lo + 4h, ...` capped at `hi`, for
/// integrands that vary on a scale `h` near `lo` and slowly further out.
pub fn geometric_breakpoints(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let mut points = vec![lo];
    if h > 0.0 {
        let mut step = h;
        while lo + step < hi {
            points.push(lo + step);
            step *= 2.0;
        }
    }
    if hi > lo {
        points.push(hi);
    }
    points
}
