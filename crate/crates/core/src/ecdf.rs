//! Empirical cumulative distribution functions over finite sample lists.
//!
//! An [`Ecdf`] stores its distinct support points together with integer
//! cumulative counts, so `F(x) = count(samples <= x) / total` is held exactly
//! and only converted to floating point when evaluated or integrated.
//!
//! Distances between two ECDFs are computed in closed form: the difference of
//! two step functions is itself a step function whose breakpoints are the
//! merged support, so the L1 integral is a finite sum of rectangle areas.
//! For probability measures on the real line this L1 distance between CDFs is
//! the Wasserstein-1 distance.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty list of finite sample values.
///
/// Negative zero is normalized to positive zero on construction so that
/// bitwise and numeric equality agree for every stored value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SampleList(Vec<f64>);

impl SampleList {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySamples);
        }
        for (position, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteSample {
                    position,
                    value: *v,
                });
            }
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        Ok(SampleList(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Concatenates several lists in iteration order.
    pub fn concat<'a, I>(lists: I) -> Result<SampleList>
    where
        I: IntoIterator<Item = &'a SampleList>,
    {
        let values: Vec<f64> = lists
            .into_iter()
            .flat_map(|l| l.0.iter().copied())
            .collect();
        SampleList::new(values)
    }
}

impl AsRef<[f64]> for SampleList {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SampleList {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        SampleList::new(values)
    }
}

impl From<SampleList> for Vec<f64> {
    fn from(list: SampleList) -> Self {
        list.0
    }
}

/// Right-continuous empirical CDF with exact integer counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EcdfRepr", into = "EcdfRepr")]
pub struct Ecdf {
    support: Vec<f64>,
    cumulative_counts: Vec<u64>,
    total: u64,
}

impl Ecdf {
    pub fn from_samples(samples: &SampleList) -> Ecdf {
        let mut sorted = samples.values().to_vec();
        sorted.sort_by(f64::total_cmp);

        let mut support = Vec::new();
        let mut cumulative_counts = Vec::new();
        for (i, &v) in sorted.iter().enumerate() {
            if support
                .last()
                .is_some_and(|&last: &f64| last.to_bits() == v.to_bits())
            {
                *cumulative_counts.last_mut().unwrap() = i as u64 + 1;
            } else {
                support.push(v);
                cumulative_counts.push(i as u64 + 1);
            }
        }
        Ecdf {
            support,
            cumulative_counts,
            total: sorted.len() as u64,
        }
    }

    /// Distinct sample values in ascending order.
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// Number of samples `<= support[k]` for each `k`.
    pub fn cumulative_counts(&self) -> &[u64] {
        &self.cumulative_counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Cumulative fractions at each support point; the last entry is exactly 1.
    pub fn cumulative(&self) -> Vec<f64> {
        self.cumulative_counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }

    /// Multiplicity of each support point.
    pub fn counts(&self) -> Vec<u64> {
        let mut prev = 0;
        self.cumulative_counts
            .iter()
            .map(|&c| {
                let k = c - prev;
                prev = c;
                k
            })
            .collect()
    }

    /// Number of samples `<= x`.
    pub fn count_at(&self, x: f64) -> u64 {
        let idx = self.support.partition_point(|&s| s <= x);
        if idx == 0 {
            0
        } else {
            self.cumulative_counts[idx - 1]
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.count_at(x) as f64 / self.total as f64
    }

    pub fn min(&self) -> f64 {
        self.support[0]
    }

    pub fn max(&self) -> f64 {
        *self.support.last().unwrap()
    }

    /// Reconstructs the sorted sample list this ECDF was built from.
    pub fn to_samples(&self) -> SampleList {
        let values = self
            .support
            .iter()
            .zip(self.counts())
            .flat_map(|(&x, k)| std::iter::repeat_n(x, k as usize))
            .collect();
        SampleList(values)
    }
}

/// Builds the ECDF of raw values, rejecting empty or non-finite input.
pub fn ecdf_from_samples(values: &[f64]) -> Result<Ecdf> {
    Ok(Ecdf::from_samples(&SampleList::new(values.to_vec())?))
}

/// Serialized form: `(support, count)` pairs plus the total count.
#[derive(Serialize, Deserialize)]
struct EcdfRepr {
    points: Vec<(f64, u64)>,
    total: u64,
}

impl From<Ecdf> for EcdfRepr {
    fn from(e: Ecdf) -> Self {
        let counts = e.counts();
        EcdfRepr {
            points: e.support.into_iter().zip(counts).collect(),
            total: e.total,
        }
    }
}

impl TryFrom<EcdfRepr> for Ecdf {
    type Error = String;

    fn try_from(repr: EcdfRepr) -> std::result::Result<Self, String> {
        if repr.points.is_empty() {
            return Err("ecdf has no support points".into());
        }
        let mut support = Vec::with_capacity(repr.points.len());
        let mut cumulative_counts = Vec::with_capacity(repr.points.len());
        let mut running = 0u64;
        for (x, k) in repr.points {
            if !x.is_finite() {
                return Err(format!("non-finite support point {x}"));
            }
            if k == 0 {
                return Err(format!("zero count at support point {x}"));
            }
            if support.last().is_some_and(|&last| last >= x) {
                return Err("support is not strictly increasing".into());
            }
            running += k;
            support.push(if x == 0.0 { 0.0 } else { x });
            cumulative_counts.push(running);
        }
        if running != repr.total {
            return Err(format!(
                "counts sum to {running} but total is {}",
                repr.total
            ));
        }
        Ok(Ecdf {
            support,
            cumulative_counts,
            total: running,
        })
    }
}

/// Union of both lists with exact duplicates removed, ascending.
pub fn merge_support(a: &SampleList, b: &SampleList) -> SampleList {
    let mut merged: Vec<f64> = a.values().iter().chain(b.values()).copied().collect();
    merged.sort_by(f64::total_cmp);
    merged.dedup_by(|x, y| x.to_bits() == y.to_bits());
    SampleList(merged)
}

/// Walks the merged support of two ECDFs and sums `weight(diff) * width` over
/// each interval, where `diff = count_a * total_b - count_b * total_a` is the
/// exact scaled difference `F_a - F_b` on that interval.
fn integrate_difference(a: &Ecdf, b: &Ecdf, weight: impl Fn(i128) -> i128) -> f64 {
    let ta = a.total as i128;
    let tb = b.total as i128;
    let denom = (ta * tb) as f64;

    let (mut i, mut j) = (0usize, 0usize);
    let (mut ca, mut cb) = (0i128, 0i128);
    let mut prev: Option<(f64, i128)> = None;
    let mut sum = 0.0;
    loop {
        let next = match (a.support.get(i), b.support.get(j)) {
            (Some(&x), Some(&y)) => {
                if x.total_cmp(&y) == Ordering::Greater {
                    y
                } else {
                    x
                }
            }
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        if let Some((left, diff)) = prev {
            let w = weight(diff);
            if w != 0 {
                sum += (w as f64 / denom) * (next - left);
            }
        }
        if a.support.get(i) == Some(&next) {
            ca = a.cumulative_counts[i] as i128;
            i += 1;
        }
        if b.support.get(j) == Some(&next) {
            cb = b.cumulative_counts[j] as i128;
            j += 1;
        }
        prev = Some((next, ca * tb - cb * ta));
    }
    sum
}

/// Exact `∫ |F_a(x) - F_b(x)| dx`, the Wasserstein-1 distance.
pub fn wasserstein_l1(a: &Ecdf, b: &Ecdf) -> f64 {
    if a == b {
        return 0.0;
    }
    integrate_difference(a, b, i128::abs)
}

/// Exact `∫ (F_a(x) - F_b(x)) dx`; negative when `a` sits below `b` on balance,
/// i.e. when `a` carries larger values.
pub fn signed_area(a: &Ecdf, b: &Ecdf) -> f64 {
    if a == b {
        return 0.0;
    }
    integrate_difference(a, b, |d| d)
}
