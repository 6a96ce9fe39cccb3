//! Numerical primitives shared by the physics modules.
//!
//! Everything here is a pure function of its inputs. Entropies are in bits.

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with `lo < hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::domain(
                "Interval::new",
                format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Budget for the adaptive quadrature behind [`gaussian_disk_fraction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    absolute_tolerance: f64,
    max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(absolute_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        if !(absolute_tolerance > 0.0) || max_subdivisions < 1 {
            return Err(Error::domain(
                "QuadratureSpec::new",
                format!(
                    "need tolerance > 0 and subdivisions >= 1, got {absolute_tolerance}, {max_subdivisions}"
                ),
            ));
        }
        Ok(Self {
            absolute_tolerance,
            max_subdivisions,
        })
    }

    pub fn absolute_tolerance(&self) -> f64 {
        self.absolute_tolerance
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            absolute_tolerance: 1e-12,
            max_subdivisions: 400,
        }
    }
}

/// Binary Shannon entropy in bits, with `0·log2(0) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(
            "binary_entropy",
            format!("probability {p} outside [0, 1]"),
        ));
    }
    Ok(h2(p))
}

/// Unchecked binary entropy for internally produced probabilities.
///
/// Values a few ulps outside `[0, 1]` (from rounding) are clamped.
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlog2x(p) + xlog2x(1.0 - p)
}

/// `-x·log2(x)` with the limit value at zero.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Location and value of a maximum found by [`maximize_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub max: f64,
}

const GRID_POINTS: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximise `f` on `domain`: a 64-point grid scan picks the best cell, then
/// golden-section search shrinks the neighbouring bracket to width `tol`.
pub fn maximize_1d<F>(mut f: F, domain: Interval, tol: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> f64,
{
    try_maximize_1d(|x| Ok(f(x)), domain, tol)
}

/// Fallible variant of [`maximize_1d`]; the first evaluation error is returned.
pub fn try_maximize_1d<F>(mut f: F, domain: Interval, tol: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::domain(
            "maximize_1d",
            format!("tol must be > 0, got {tol}"),
        ));
    }
    let step = domain.width() / (GRID_POINTS - 1) as f64;
    let node = |i: usize| {
        if i == GRID_POINTS - 1 {
            domain.hi
        } else {
            domain.lo + step * i as f64
        }
    };

    let mut best = Maximum {
        argmax: domain.lo,
        max: f64::NEG_INFINITY,
    };
    let mut best_idx = 0;
    for i in 0..GRID_POINTS {
        let x = node(i);
        let v = f(x)?;
        if v > best.max {
            best = Maximum { argmax: x, max: v };
            best_idx = i;
        }
    }

    let mut a = node(best_idx.saturating_sub(1));
    let mut b = node((best_idx + 1).min(GRID_POINTS - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    // golden section shrinks by 0.618 per step; 200 steps is far below any f64 width
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fmid = f(mid)?;
    if fmid >= best.max {
        best = Maximum {
            argmax: mid,
            max: fmid,
        };
    }
    Ok(best)
}

/// Bisection on a sign-changing bracket until its width is at most `tol`.
/// Returns the midpoint of the final bracket.
pub fn find_root<F>(mut f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root(|x| Ok(f(x)), bracket, tol)
}

/// Fallible variant of [`find_root`].
pub fn try_find_root<F>(mut f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::domain(
            "find_root",
            format!("tol must be > 0, got {tol}"),
        ));
    }
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_KRONROD: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_GAUSS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = GK_KRONROD[7] * fc;
    let mut gauss = GK_GAUSS[3] * fc;
    for (j, &node) in GK_NODES[..7].iter().enumerate() {
        let dx = half * node;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += GK_KRONROD[j] * pair;
        // odd Kronrod nodes coincide with the 7-point Gauss nodes
        if j % 2 == 1 {
            gauss += GK_GAUSS[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: QuadratureSpec,
) -> Result<f64> {
    let (est, err) = gauss_kronrod(&f, a, b);
    let mut segments = vec![(a, b, est, err)];
    let mut total = est;
    let mut residual = err;
    while residual > spec.absolute_tolerance {
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total,
                residual,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("segment list is never empty");
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let left = gauss_kronrod(&f, lo, mid);
        let right = gauss_kronrod(&f, mid, hi);
        segments.push((lo, mid, left.0, left.1));
        segments.push((mid, hi, right.0, right.1));
        total = segments.iter().map(|s| s.2).sum();
        residual = segments.iter().map(|s| s.3).sum();
    }
    Ok(total)
}

/// Fraction of a normalised circular Gaussian beam of `1/e²` radius
/// `beam_radius_w` falling on a disk of radius `disk_radius` whose centre sits
/// `offset` from the beam axis.
///
/// The disk is swept by chords perpendicular to the offset direction. Along
/// each chord the Gaussian integrates to an error function; the outer
/// integral runs over the chord position `x = offset + a·sin θ`, which removes
/// the square-root behaviour at the disk rim.
pub fn gaussian_disk_fraction(
    beam_radius_w: f64,
    offset: f64,
    disk_radius: f64,
    spec: QuadratureSpec,
) -> Result<f64> {
    if !(beam_radius_w > 0.0) || !beam_radius_w.is_finite() {
        return Err(Error::domain(
            "gaussian_disk_fraction",
            format!("beam radius must be positive and finite, got {beam_radius_w}"),
        ));
    }
    if !(offset >= 0.0) || !offset.is_finite() {
        return Err(Error::domain(
            "gaussian_disk_fraction",
            format!("offset must be finite and >= 0, got {offset}"),
        ));
    }
    if !(disk_radius >= 0.0) {
        return Err(Error::domain(
            "gaussian_disk_fraction",
            format!("disk radius must be >= 0, got {disk_radius}"),
        ));
    }
    if disk_radius == f64::INFINITY {
        return Ok(1.0);
    }
    let w = beam_radius_w;
    let a = disk_radius;
    // e^{-2·20²} underflows to zero
    if a == 0.0 || (offset - a) / w > 20.0 {
        return Ok(0.0);
    }
    let sqrt2_over_w = std::f64::consts::SQRT_2 / w;
    let prefactor = (2.0 / std::f64::consts::PI).sqrt() / w;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = offset + a * s;
        let chord_half = a * c;
        let u = sqrt2_over_w * x;
        prefactor * (-u * u).exp() * libm::erf(sqrt2_over_w * chord_half) * a * c
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let value = adaptive_integrate(integrand, -half_pi, half_pi, spec)?;
    Ok(value.clamp(0.0, 1.0))
}
