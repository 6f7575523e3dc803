//! Finite probability distributions, joint distributions, and events.
//!
//! Everything downstream (measures, bounds, the verification harness) is
//! checked against the exact brute-force probabilities computed here, so
//! these types are deliberately dense and simple: probability vectors,
//! row-major matrices, and boolean masks over desk-scale alphabets.

use crate::error::{Error, Result};

/// Tolerance on probability sums when validating a distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Entries in `[-NEG_SNAP, 0)` are snapped to zero before validation.
/// Serialized inputs carry rounding noise at this scale.
pub const NEG_SNAP: f64 = 1e-15;

fn snap(v: f64) -> f64 {
    // Also normalizes -0.0 to +0.0.
    if (-NEG_SNAP..=0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    for (i, &v) in probs.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i, value: v });
        }
        if v < 0.0 {
            return Err(Error::NegativeMass { index: i, value: v });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::SumNotOne {
            sum,
            tol: SUM_TOLERANCE,
        });
    }
    Ok(())
}

/// A probability vector over a finite alphabet `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates and constructs: entries nonnegative, sum 1 within
    /// [`SUM_TOLERANCE`]. Entries in `[-1e-15, 0)` are snapped to 0.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("alphabet must be nonempty", 0.0));
        }
        let probs: Vec<f64> = probs.into_iter().map(snap).collect();
        validate_probs(&probs)?;
        Ok(Pmf { probs })
    }

    pub(crate) fn new_unchecked(probs: Vec<f64>) -> Self {
        Pmf { probs }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "alphabet must be nonempty");
        Pmf {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Two-point distribution `[1 - p, p]`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("bernoulli parameter must lie in [0, 1]", p));
        }
        Ok(Pmf {
            probs: vec![1.0 - p, p],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> Result<f64> {
        self.probs
            .get(i)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.probs.len(),
            })
    }

    /// Probability of the masked subset. The mask must be a vector mask
    /// (a single column) of matching length.
    pub fn event_probability(&self, e: &EventMask) -> Result<f64> {
        if e.ny() != 1 || e.nx() != self.len() {
            return Err(Error::shape(
                format!("{}x1", self.len()),
                format!("{}x{}", e.nx(), e.ny()),
            ));
        }
        Ok(mask_sum(&self.probs, e.bits()))
    }
}

fn mask_sum(probs: &[f64], mask: &[bool]) -> f64 {
    let s: f64 = probs
        .iter()
        .zip(mask.iter())
        .filter(|(_, &m)| m)
        .map(|(&p, _)| p)
        .sum();
    s.min(1.0)
}

/// A joint probability distribution on `X x Y`, stored row-major
/// (`x` indexes rows, `y` indexes columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    probs: Vec<f64>,
    nx: usize,
    ny: usize,
}

impl Joint {
    /// Validates and constructs from a row-major matrix.
    pub fn new(probs: Vec<f64>, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::domain("alphabets must be nonempty", 0.0));
        }
        if probs.len() != nx * ny {
            return Err(Error::shape(
                format!("{}x{} ({} entries)", nx, ny, nx * ny),
                format!("{} entries", probs.len()),
            ));
        }
        let probs: Vec<f64> = probs.into_iter().map(snap).collect();
        validate_probs(&probs)?;
        Ok(Joint { probs, nx, ny })
    }

    pub fn uniform(nx: usize, ny: usize) -> Self {
        assert!(nx > 0 && ny > 0);
        Joint {
            probs: vec![1.0 / (nx * ny) as f64; nx * ny],
            nx,
            ny,
        }
    }

    /// The perfectly dependent joint: `X = Y` uniform over `n` symbols
    /// (mass `1/n` on the diagonal).
    pub fn diagonal_uniform(n: usize) -> Self {
        assert!(n > 0);
        let mut probs = vec![0.0; n * n];
        for i in 0..n {
            probs[i * n + i] = 1.0 / n as f64;
        }
        Joint { probs, nx: n, ny: n }
    }

    /// The independent joint with the given marginals: entry `(x, y)` is
    /// `px(x) * py(y)`.
    pub fn independent(px: &Pmf, py: &Pmf) -> Self {
        let mut probs = Vec::with_capacity(px.len() * py.len());
        for &a in px.probs() {
            for &b in py.probs() {
                probs.push(a * b);
            }
        }
        Joint {
            probs,
            nx: px.len(),
            ny: py.len(),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.ny + y]
    }

    /// Row sums and column sums: the marginals of `X` and `Y`.
    pub fn marginals(&self) -> (Pmf, Pmf) {
        let mut px = vec![0.0; self.nx];
        let mut py = vec![0.0; self.ny];
        for (x, row) in self.probs.chunks(self.ny).enumerate() {
            for (y, &v) in row.iter().enumerate() {
                px[x] += v;
                py[y] += v;
            }
        }
        (Pmf::new_unchecked(px), Pmf::new_unchecked(py))
    }

    /// The product of the marginals: entry `(x, y)` is `P_X(x) * P_Y(y)`.
    pub fn product_of_marginals(&self) -> Joint {
        let (px, py) = self.marginals();
        Joint::independent(&px, &py)
    }

    /// Exact probability of the masked event: the sum of the masked cells.
    pub fn event_probability(&self, e: &EventMask) -> Result<f64> {
        self.check_shape(e)?;
        Ok(mask_sum(&self.probs, e.bits()))
    }

    /// The conditional rows `P_{Y|X}(. | x)`. Rows with `P_X(x) = 0` are
    /// carried as `None` so downstream maxima and minima range only over
    /// supported inputs.
    pub fn conditional_y_given_x(&self) -> Channel {
        let (px, _) = self.marginals();
        let rows = (0..self.nx)
            .map(|x| {
                let mass = px.probs()[x];
                if mass > 0.0 {
                    Some((0..self.ny).map(|y| self.prob(x, y) / mass).collect())
                } else {
                    None
                }
            })
            .collect();
        Channel { rows, ny: self.ny }
    }

    pub(crate) fn check_shape(&self, e: &EventMask) -> Result<()> {
        if e.nx() != self.nx || e.ny() != self.ny {
            return Err(Error::shape(
                format!("{}x{}", self.nx, self.ny),
                format!("{}x{}", e.nx(), e.ny()),
            ));
        }
        Ok(())
    }
}

/// Conditional distribution rows `P_{Y|X}`, with unsupported rows flagged.
#[derive(Debug, Clone)]
pub struct Channel {
    rows: Vec<Option<Vec<f64>>>,
    ny: usize,
}

impl Channel {
    pub fn ny(&self) -> usize {
        self.ny
    }

    /// `None` when `P_X(x) = 0`.
    pub fn row(&self, x: usize) -> Option<&[f64]> {
        self.rows.get(x).and_then(|r| r.as_deref())
    }

    pub fn rows(&self) -> impl Iterator<Item = Option<&[f64]>> {
        self.rows.iter().map(|r| r.as_deref())
    }

    fn column(&self, y: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().filter_map(move |r| r.as_ref().map(|v| v[y]))
    }

    /// Max of column `y` over supported rows. A valid joint always has at
    /// least one supported row.
    pub fn column_max(&self, y: usize) -> f64 {
        self.column(y)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
            .expect("valid joint has at least one supported row")
    }

    /// Min of column `y` over supported rows.
    pub fn column_min(&self, y: usize) -> f64 {
        self.column(y)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
            .expect("valid joint has at least one supported row")
    }
}

/// A boolean mask selecting a subset of `X x Y` (or of a single alphabet,
/// as a one-column mask).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventMask {
    mask: Vec<bool>,
    nx: usize,
    ny: usize,
}

impl EventMask {
    pub fn new(mask: Vec<bool>, nx: usize, ny: usize) -> Result<Self> {
        if mask.len() != nx * ny {
            return Err(Error::shape(
                format!("{}x{} ({} entries)", nx, ny, nx * ny),
                format!("{} entries", mask.len()),
            ));
        }
        Ok(EventMask { mask, nx, ny })
    }

    /// A vector mask over a single alphabet.
    pub fn vector(mask: Vec<bool>) -> Self {
        let nx = mask.len();
        EventMask { mask, nx, ny: 1 }
    }

    /// From row-major 0/1 integers (the serialized form).
    pub fn from_bits(bits: &[u8], nx: usize, ny: usize) -> Result<Self> {
        let mask = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Parse(format!(
                    "event entries must be 0 or 1, got {other}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        EventMask::new(mask, nx, ny)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn bits(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.mask[x * self.ny + y]
    }

    pub fn is_empty_event(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn is_full_event(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    /// Column `y` of the mask: the slice `E_y = { x : (x, y) in E }`.
    pub fn event_slice(&self, y: usize) -> Result<Vec<bool>> {
        if y >= self.ny {
            return Err(Error::IndexOutOfRange {
                index: y,
                len: self.ny,
            });
        }
        Ok((0..self.nx).map(|x| self.contains(x, y)).collect())
    }
}

/// `P_X(E_y)` for one column of the mask.
pub fn slice_probability(px: &Pmf, e: &EventMask, y: usize) -> f64 {
    (0..e.nx())
        .filter(|&x| e.contains(x, y))
        .map(|x| px.probs()[x])
        .sum()
}
