//! Sequence alignment operators mapping a `T x F` series to `L_p x F`.
//!
//! Every operator acts on each feature column independently. Inputs longer
//! than `L_p` take the downsampling path; inputs of length at most `L_p` take
//! the upsampling path, which is the identity for `linear` when `T = L_p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Dense time-major matrix: `rows` timesteps by `cols` features.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("series must have at least one row and one column"));
        }
        if data.len() != rows * cols {
            return Err(invalid(format!(
                "series data has {} values, expected {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(invalid("series values must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("series rows differ in length"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Single-feature series.
    pub fn column(values: &[T]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for t in 0..rows {
            data.extend(columns.iter().map(|c| c[t]));
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, t: usize, f: usize) -> T {
        self.data[t * self.cols + f]
    }

    pub fn row(&self, t: usize) -> &[T] {
        &self.data[t * self.cols..(t + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn feature(&self, f: usize) -> Vec<T> {
        (0..self.rows).map(|t| self.get(t, f)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Linear,
    DecimateRepeat,
    Hybrid,
    Pool,
    ConvBlurpool,
    FirLowpass,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::Linear,
        Operator::DecimateRepeat,
        Operator::Hybrid,
        Operator::Pool,
        Operator::ConvBlurpool,
        Operator::FirLowpass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Linear => "linear",
            Operator::DecimateRepeat => "decimate_repeat",
            Operator::Hybrid => "hybrid",
            Operator::Pool => "pool",
            Operator::ConvBlurpool => "conv_blurpool",
            Operator::FirLowpass => "fir_lowpass",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolType {
    Avg,
    Max,
    Median,
    Weighted,
}

impl PoolType {
    pub const ALL: [PoolType; 4] = [PoolType::Avg, PoolType::Max, PoolType::Median, PoolType::Weighted];

    pub fn name(self) -> &'static str {
        match self {
            PoolType::Avg => "avg",
            PoolType::Max => "max",
            PoolType::Median => "median",
            PoolType::Weighted => "weighted",
        }
    }
}

macro_rules! named_enum {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = crate::Error;

            fn from_str(s: &str) -> Result<Self> {
                Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
                    let names: Vec<_> = Self::ALL.iter().map(|v| v.name()).collect();
                    invalid(format!(
                        concat!("unknown ", $what, " {}; expected one of {}"),
                        s,
                        names.join(", ")
                    ))
                })
            }
        }
    };
}

named_enum!(Operator, "resampling operator");
named_enum!(PoolType, "pooling type");

/// Binomial blur kernel, unit sum.
pub const BLUR_KERNEL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];
/// Width of the mean kernel used after FIR upsampling.
pub const UPSAMPLE_MEAN_WIDTH: usize = 3;
const FIR_MAX_LEN: usize = 63;

/// Aligns `x` to `l_p` rows. `pool` is required when and only when
/// `op` is [`Operator::Pool`].
pub fn align<T: Scalar>(x: &Series<T>, l_p: usize, op: Operator, pool: Option<PoolType>) -> Result<Series<T>> {
    if l_p < 2 {
        return Err(invalid(format!("aligned length must be at least 2, got {l_p}")));
    }
    let pool = match (op, pool) {
        (Operator::Pool, Some(p)) => Some(p),
        (Operator::Pool, None) => return Err(invalid("operator pool requires a pooling type")),
        (_, Some(p)) => return Err(invalid(format!("pooling type {p} is only valid with operator pool"))),
        (_, None) => None,
    };
    let columns: Vec<Vec<T>> = (0..x.cols())
        .map(|f| align_column(&x.feature(f), l_p, op, pool))
        .collect();
    Ok(Series::from_columns(l_p, &columns))
}

/// Aligns one feature column. Requires `l_p >= 2` and a non-empty column.
pub fn align_column<T: Scalar>(x: &[T], l_p: usize, op: Operator, pool: Option<PoolType>) -> Vec<T> {
    let t = x.len();
    if t == 1 {
        return vec![x[0]; l_p];
    }
    let down = t > l_p;
    match op {
        Operator::Linear => linear(x, l_p),
        Operator::DecimateRepeat if down => decimate(x, l_p),
        Operator::DecimateRepeat => repeat(x, l_p),
        Operator::Hybrid if down => smooth3(&decimate(x, l_p)),
        Operator::Hybrid => linear(x, l_p),
        Operator::Pool if down => pool_down(x, l_p, pool.unwrap_or(PoolType::Avg)),
        Operator::Pool => repeat(x, l_p),
        Operator::ConvBlurpool => {
            let h: Vec<T> = BLUR_KERNEL.iter().map(|&v| T::lit(v)).collect();
            if down {
                decimate(&convolve_reflect(x, &h), l_p)
            } else {
                convolve_reflect(&linear(x, l_p), &h)
            }
        }
        Operator::FirLowpass => {
            if down {
                decimate(&convolve_reflect(x, &fir_kernel::<T>(t, l_p)), l_p)
            } else {
                let w = T::from_usize_lossy(UPSAMPLE_MEAN_WIDTH);
                convolve_reflect(&linear(x, l_p), &[T::one() / w; UPSAMPLE_MEAN_WIDTH])
            }
        }
    }
}

/// Continuous-time coordinate `u_t = t (T-1) / (L_p-1)`.
fn coordinate<T: Scalar>(t: usize, len: usize, l_p: usize) -> T {
    T::from_usize_lossy(t) * T::from_usize_lossy(len - 1) / T::from_usize_lossy(l_p - 1)
}

/// `min(T-1, max(0, floor(u + 0.5)))`.
pub fn nearest_index<T: Scalar>(u: T, len: usize) -> usize {
    let r = (u + T::lit(0.5)).floor().max(T::zero());
    r.to_usize().unwrap_or(usize::MAX).min(len - 1)
}

fn linear<T: Scalar>(x: &[T], l_p: usize) -> Vec<T> {
    let len = x.len();
    (0..l_p)
        .map(|t| {
            let u: T = coordinate(t, len, l_p);
            let i = u.floor().to_usize().unwrap_or(0).min(len - 1);
            if i >= len - 1 {
                x[len - 1]
            } else {
                let lam = u - T::from_usize_lossy(i);
                (T::one() - lam) * x[i] + lam * x[i + 1]
            }
        })
        .collect()
}

fn decimate<T: Scalar>(x: &[T], l_p: usize) -> Vec<T> {
    (0..l_p)
        .map(|t| x[nearest_index(coordinate::<T>(t, x.len(), l_p), x.len())])
        .collect()
}

/// Repetition padding: the first `s` samples repeat `q+1` times, the rest `q`.
fn repeat<T: Scalar>(x: &[T], l_p: usize) -> Vec<T> {
    let len = x.len();
    let q = l_p / len;
    let s = l_p - q * len;
    let mut out = Vec::with_capacity(l_p);
    for (i, &v) in x.iter().enumerate() {
        let n = if i < s { q + 1 } else { q };
        out.extend(std::iter::repeat_n(v, n));
    }
    out
}

/// Three-point moving average with the endpoints copied.
fn smooth3<T: Scalar>(z: &[T]) -> Vec<T> {
    let n = z.len();
    let three = T::lit(3.0);
    (0..n)
        .map(|t| {
            if t == 0 || t == n - 1 {
                z[t]
            } else {
                (z[t - 1] + z[t] + z[t + 1]) / three
            }
        })
        .collect()
}

fn pool_down<T: Scalar>(x: &[T], l_p: usize, kind: PoolType) -> Vec<T> {
    let len = x.len();
    (0..l_p)
        .map(|t| {
            let lo = t * len / l_p;
            let hi = (t + 1) * len / l_p;
            aggregate(&x[lo..hi], kind)
        })
        .collect()
}

fn aggregate<T: Scalar>(v: &[T], kind: PoolType) -> T {
    let n = v.len();
    let mean = |v: &[T]| v.iter().fold(T::zero(), |a, &b| a + b) / T::from_usize_lossy(v.len());
    match kind {
        PoolType::Avg => mean(v),
        PoolType::Max => v.iter().copied().fold(T::neg_infinity(), T::max),
        PoolType::Median => {
            let mut s = v.to_vec();
            s.sort_by(|a, b| a.partial_cmp(b).expect("finite series"));
            if n % 2 == 1 {
                s[n / 2]
            } else {
                (s[n / 2 - 1] + s[n / 2]) / T::lit(2.0)
            }
        }
        PoolType::Weighted => {
            if n == 1 {
                return v[0];
            }
            let denom = T::from_usize_lossy(n - 1);
            let alpha: Vec<T> = (0..n)
                .map(|k| {
                    let r = T::lit(2.0) * T::from_usize_lossy(k) / denom - T::one();
                    T::one() - r.abs()
                })
                .collect();
            let total = alpha.iter().fold(T::zero(), |a, &b| a + b);
            // two-sample intervals give all-zero triangular weights
            if total <= T::zero() {
                return mean(v);
            }
            v.iter().zip(&alpha).fold(T::zero(), |acc, (&x, &a)| acc + a * x) / total
        }
    }
}

/// Index into `[0, len)` after whole-sample symmetric reflection about the
/// boundary samples.
fn reflect_index(i: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let m = i.rem_euclid(period);
    if m < len as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Same-length centred convolution with reflective padding; `h` has odd length.
pub fn convolve_reflect<T: Scalar>(x: &[T], h: &[T]) -> Vec<T> {
    let half = (h.len() / 2) as isize;
    (0..x.len() as isize)
        .map(|t| {
            h.iter().enumerate().fold(T::zero(), |acc, (j, &w)| {
                acc + w * x[reflect_index(t + j as isize - half, x.len())]
            })
        })
        .collect()
}

/// Hamming-windowed sinc low-pass kernel for decimating `len` samples to
/// `l_p`, normalized to unit sum. Cutoff `f_c = 0.5 L_p / T` cycles per
/// sample; length `2 ceil(2 / f_c) + 1`, capped at `min(T, 63)` and kept odd.
pub fn fir_kernel<T: Scalar>(len: usize, l_p: usize) -> Vec<T> {
    let fc = 0.5 * l_p as f64 / len as f64;
    let mut taps = 2 * (2.0 / fc).ceil() as usize + 1;
    taps = taps.min(len).min(FIR_MAX_LEN);
    if taps.is_multiple_of(2) {
        taps -= 1;
    }
    let m = (taps - 1) as f64;
    let centre = m / 2.0;
    let raw: Vec<f64> = (0..taps)
        .map(|n| {
            let k = n as f64 - centre;
            let sinc = if k == 0.0 {
                2.0 * fc
            } else {
                (2.0 * std::f64::consts::PI * fc * k).sin() / (std::f64::consts::PI * k)
            };
            let window = if taps == 1 {
                1.0
            } else {
                0.54 - 0.46 * (2.0 * std::f64::consts::PI * n as f64 / m).cos()
            };
            sinc * window
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|&v| T::lit(v / total)).collect()
}
