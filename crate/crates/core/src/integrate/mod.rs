//! Seeded quadrature over the half space, balls and spheres.
//!
//! Samples are generated in fixed-size blocks. Each block draws from its own
//! deterministic stream, blocks are evaluated in parallel, and the per-block
//! moments are merged by a pairwise tree whose shape depends only on the
//! number of blocks. Results are therefore bitwise reproducible for a given
//! spec regardless of the worker count.

mod sobol;
pub mod stats;

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Dim, Element};
use crate::analysis::{Decay, FieldFunction};
use crate::error::{Error, Result};
use crate::kernels::{cauchy_e, omega};
use sobol::DIRECTIONS;
use stats::{tree_merge, Moments};

const BLOCK: u64 = 8192;
const REPLICATES: u64 = 16;
const MIN_SAMPLES: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    /// Digitally shifted Sobol points, 16 independent replicates.
    LowDiscrepancy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
    /// Half-space samples with `|x| > truncation_radius` contribute zero; the
    /// analytic tail bound of the integrand is added to the error instead.
    pub truncation_radius: f64,
    /// Tail exponent of the per-coordinate proposal density
    /// `(1 + |t| / scale)^-(1 + tail_exponent)`.
    pub tail_exponent: f64,
    pub scale: f64,
    /// Optional second proposal component concentrated near a known peak.
    pub focus: Option<Focus>,
}

/// Mixture component of the half-space proposal: `x_0` from a half-line
/// Lomax density of the given scale, and coordinate `i >= 1` centred at
/// `center[i]` with the same scale. Drawn with probability `weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Focus {
    pub center: Element,
    pub scale: f64,
    pub weight: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: Method::MonteCarlo,
            samples: 1_000_000,
            seed: 42,
            truncation_radius: 50.0,
            tail_exponent: 1.0,
            scale: 1.0,
            focus: None,
        }
    }
}

impl QuadratureSpec {
    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        QuadratureSpec {
            samples,
            seed,
            ..Default::default()
        }
    }

    pub fn low_discrepancy(samples: u64, seed: u64) -> Self {
        QuadratureSpec {
            method: Method::LowDiscrepancy,
            samples,
            seed,
            ..Default::default()
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.truncation_radius = radius;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Concentrates half the half-space samples around `center` at the
    /// given scale; the real part of `center` is ignored.
    pub fn with_focus(mut self, center: Element, scale: f64) -> Self {
        self.focus = Some(Focus {
            center,
            scale,
            weight: 0.5,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.samples < MIN_SAMPLES {
            return bad(format!("need at least {MIN_SAMPLES} samples, got {}", self.samples));
        }
        if !(self.truncation_radius > 0.0) {
            return bad(format!("truncation radius must be positive, got {}", self.truncation_radius));
        }
        if !(self.tail_exponent > 0.0 && self.tail_exponent.is_finite()) {
            return bad(format!("tail exponent must be positive, got {}", self.tail_exponent));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("proposal scale must be positive, got {}", self.scale));
        }
        if let Some(f) = &self.focus {
            if !(f.scale > 0.0 && f.scale.is_finite()) {
                return bad(format!("focus scale must be positive, got {}", f.scale));
            }
            if !(f.weight > 0.0 && f.weight < 1.0) {
                return bad(format!("focus weight must lie in (0, 1), got {}", f.weight));
            }
        }
        Ok(())
    }
}

/// A quadrature result. `std_error` is the largest componentwise standard
/// error plus `tail_bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Element,
    pub std_error: f64,
    pub samples_used: u64,
    pub tail_bound: f64,
}

impl Estimate {
    fn scaled(self, s: f64) -> Estimate {
        Estimate {
            value: self.value * s,
            std_error: self.std_error * s.abs(),
            samples_used: self.samples_used,
            tail_bound: self.tail_bound * s.abs(),
        }
    }

    /// Whether `target` lies within `k` standard errors in every component.
    pub fn covers(&self, target: &Element, k: f64) -> bool {
        (self.value - *target).max_abs() <= k * self.std_error
    }
}

/// Square root of an integral, with the error propagated to first order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub std_error: f64,
}

// ---------------------------------------------------------------------------
// Uniform streams

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps 53 random bits into the open interval (0, 1).
#[inline]
fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Fills one block of points in `[0,1)^d` and feeds them to `visit`.
fn for_each_point(
    spec: &QuadratureSpec,
    replicate: u64,
    block: u64,
    count: u64,
    dims: usize,
    mut visit: impl FnMut(&[f64]) -> Result<()>,
) -> Result<()> {
    let mut u = [0.0; sobol::MAX_DIMS];
    let u = &mut u[..dims];
    match spec.method {
        Method::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(block);
            for _ in 0..count {
                for x in u.iter_mut() {
                    *x = open_unit(rng.next_u64());
                }
                visit(u)?;
            }
        }
        Method::LowDiscrepancy => {
            let dirs = &*DIRECTIONS;
            let rep_key = splitmix(spec.seed ^ splitmix(replicate.wrapping_add(1)));
            let shifts: Vec<u32> = (0..dims)
                .map(|d| (splitmix(rep_key ^ (d as u64 + 1)) >> 32) as u32)
                .collect();
            let start = block * BLOCK;
            for i in start..start + count {
                let index = u32::try_from(i).expect("sequence index fits in 32 bits");
                for (d, x) in u.iter_mut().enumerate() {
                    let bits = dirs.coordinate(index, d) ^ shifts[d];
                    let jitter = open_unit(splitmix(rep_key ^ (i << 8) ^ d as u64));
                    *x = (bits as f64 + jitter) * (1.0 / 4_294_967_296.0);
                }
                visit(u)?;
            }
        }
    }
    Ok(())
}

/// Runs `sample` over the point set of `spec`. `sample` maps a point of the unit
/// cube to an integrand value already divided by the sampling density, or
/// `None` for a zero contribution.
fn estimate_mean<F>(spec: &QuadratureSpec, dims: usize, dim: Dim, sample: F) -> Result<Estimate>
where
    F: Fn(&[f64]) -> Result<Option<Element>> + Sync,
{
    spec.validate()?;
    assert!(dims <= sobol::MAX_DIMS);
    let m = dim.get();
    let run_blocks = |replicate: u64, total: u64| -> Result<Moments> {
        let n_blocks = total.div_ceil(BLOCK);
        let parts = (0..n_blocks)
            .into_par_iter()
            .map(|b| {
                let count = BLOCK.min(total - b * BLOCK);
                let mut acc = Moments::EMPTY;
                let zero = [0.0; 8];
                for_each_point(spec, replicate, b, count, dims, |u| {
                    match sample(u)? {
                        Some(v) => acc.push(v.coeffs()),
                        None => acc.push(&zero[..m]),
                    }
                    Ok(())
                })?;
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(tree_merge(&parts))
    };

    match spec.method {
        Method::MonteCarlo => {
            let moments = run_blocks(0, spec.samples)?;
            let value = Element::from_prefix(dim, &moments.mean[..m])?;
            let std_error = (0..m).map(|k| moments.std_error(k)).fold(0.0, f64::max);
            Ok(Estimate {
                value,
                std_error,
                samples_used: moments.count,
                tail_bound: 0.0,
            })
        }
        Method::LowDiscrepancy => {
            let per = spec.samples.div_ceil(REPLICATES);
            let mut across = Moments::EMPTY;
            for r in 0..REPLICATES {
                let moments = run_blocks(r, per)?;
                across.push(&moments.mean[..m]);
            }
            let value = Element::from_prefix(dim, &across.mean[..m])?;
            let std_error = (0..m).map(|k| across.std_error(k)).fold(0.0, f64::max);
            Ok(Estimate {
                value,
                std_error,
                samples_used: per * REPLICATES,
                tail_bound: 0.0,
            })
        }
    }
}

fn check_value(v: Element, x: &Element) -> Result<Element> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample(x.to_vec()))
    }
}

// ---------------------------------------------------------------------------
// Half space

/// Half-space proposal. The base component draws `x_0 >= 0` from a Lomax
/// density and the other coordinates from its symmetric extension; an
/// optional focus component is mixed in.
#[derive(Clone, Copy, Debug)]
struct HalfSpaceProposal {
    kappa: f64,
    scale: f64,
    focus: Option<Focus>,
}

#[inline]
fn lomax_half(u: f64, k: f64, s: f64) -> f64 {
    s * (u.powf(-1.0 / k) - 1.0)
}

#[inline]
fn lomax_half_pdf(t: f64, k: f64, s: f64) -> f64 {
    (k / s) * (1.0 + t / s).powf(-(k + 1.0))
}

#[inline]
fn lomax_sym(u: f64, k: f64, s: f64) -> f64 {
    if u < 0.5 {
        -s * ((2.0 * u).powf(-1.0 / k) - 1.0)
    } else {
        s * ((2.0 * (1.0 - u)).powf(-1.0 / k) - 1.0)
    }
}

#[inline]
fn lomax_sym_pdf(t: f64, k: f64, s: f64) -> f64 {
    (k / (2.0 * s)) * (1.0 + t.abs() / s).powf(-(k + 1.0))
}

impl HalfSpaceProposal {
    fn uniform_dims(&self, dim: Dim) -> usize {
        dim.get() + usize::from(self.focus.is_some())
    }

    fn component_pdf(&self, x: &[f64], center: Option<&Element>, s: f64) -> f64 {
        let k = self.kappa;
        let mut p = lomax_half_pdf(x[0], k, s);
        for (i, &xi) in x.iter().enumerate().skip(1) {
            let c = center.map_or(0.0, |c| c.get(i));
            p *= lomax_sym_pdf(xi - c, k, s);
        }
        p
    }

    /// Returns the point and its density.
    #[inline]
    fn map(&self, u: &[f64], dim: Dim) -> (Element, f64) {
        let m = dim.get();
        let k = self.kappa;
        let mut c = [0.0; 8];
        let (center, s) = match self.focus {
            Some(f) if u[m] < f.weight => (Some(f.center), f.scale),
            _ => (None, self.scale),
        };
        c[0] = lomax_half(u[0], k, s);
        for i in 1..m {
            c[i] = center.map_or(0.0, |z| z.get(i)) + lomax_sym(u[i], k, s);
        }
        let x = &c[..m];
        let density = match self.focus {
            None => self.component_pdf(x, None, self.scale),
            Some(f) => {
                f.weight * self.component_pdf(x, Some(&f.center), f.scale)
                    + (1.0 - f.weight) * self.component_pdf(x, None, self.scale)
            }
        };
        let point = Element::from_prefix(dim, x).expect("finite proposal point");
        (point, density)
    }
}

/// Bound on the part of `int_{x_0 > 0} |h| dV` that
/// lies outside radius `radius`, for `|h|` bounded by the sum of `terms`.
pub fn halfspace_tail_bound(dim: Dim, radius: f64, terms: &[Decay]) -> f64 {
    let m = dim.get() as f64;
    let half_sphere = omega(dim) / 2.0;
    terms
        .iter()
        .map(|d| match *d {
            Decay::Power {
                coeff,
                power,
                offset,
            } => {
                if coeff == 0.0 {
                    0.0
                } else if power <= m || radius <= offset {
                    f64::INFINITY
                } else {
                    let gap = radius - offset;
                    half_sphere * coeff * (radius / gap).powf(m - 1.0) * gap.powf(m - power)
                        / (power - m)
                }
            }
            Decay::Gaussian { coeff, rate } => {
                // int_R^inf rho^(m-1) e^(-rate rho^2) d rho = Gamma(m/2, rate R^2) / (2 rate^(m/2)),
                // with the upper incomplete gamma in closed form for integer m/2.
                let s = dim.get() / 2;
                let x = rate * radius * radius;
                let mut term = 1.0;
                let mut sum = 1.0;
                for j in 1..s {
                    term *= x / j as f64;
                    sum += term;
                }
                let factorial: f64 = (1..s).map(|j| j as f64).product();
                let gamma_upper = factorial * (-x).exp() * sum;
                half_sphere * coeff * gamma_upper / (2.0 * rate.powf(m / 2.0))
            }
        })
        .sum()
}

fn integrate_halfspace_with(
    dim: Dim,
    spec: &QuadratureSpec,
    tail: Option<Vec<Decay>>,
    integrand: impl Fn(&Element) -> Element + Sync,
) -> Result<Estimate> {
    spec.validate()?;
    let proposal = HalfSpaceProposal {
        kappa: spec.tail_exponent,
        scale: spec.scale,
        focus: spec.focus,
    };
    if let Some(f) = &spec.focus {
        if f.center.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim.get(),
                right: f.center.dim().get(),
            });
        }
    }
    let radius = spec.truncation_radius;
    let r2 = radius * radius;
    let mut est = estimate_mean(spec, proposal.uniform_dims(dim), dim, |u| {
        let (x, density) = proposal.map(u, dim);
        if x.norm_sqr() > r2 || !(x.re() > 0.0) {
            return Ok(None);
        }
        let v = check_value(integrand(&x), &x)?;
        Ok(Some(check_value(v / density, &x)?))
    })?;
    let tail = match tail {
        Some(terms) => halfspace_tail_bound(dim, radius, &terms),
        None => 0.0,
    };
    if !tail.is_finite() {
        return Err(Error::InvalidParameter(
            "integrand envelope is not integrable at infinity".into(),
        ));
    }
    est.tail_bound = tail;
    est.std_error += tail;
    Ok(est)
}

/// Importance-sampled `int_{x_0 > 0} g dV`.
pub fn integrate_halfspace(g: &FieldFunction, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_halfspace_with(g.dim(), spec, g.decay().map(|d| vec![d]), |x| g.eval(x))
}

fn same_dim(f: &FieldFunction, g: &FieldFunction) -> Result<Dim> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim().get(),
            right: g.dim().get(),
        });
    }
    Ok(f.dim())
}

/// `(f, g) = (1/omega_m) int_{x_0 > 0} conj(g) f dV`.
pub fn inner_product_halfspace(
    f: &FieldFunction,
    g: &FieldFunction,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let dim = same_dim(f, g)?;
    let tail = match (f.decay(), g.decay()) {
        (Some(a), Some(b)) => Some(vec![a.product(b)]),
        _ => None,
    };
    let est = integrate_halfspace_with(dim, spec, tail, |x| g.eval(x).conj() * f.eval(x))?;
    Ok(est.scaled(1.0 / omega(dim)))
}

/// `sqrt(int_{x_0 > 0} |f - g|^2 dV)`.
pub fn l2_distance_halfspace(
    f: &FieldFunction,
    g: &FieldFunction,
    spec: &QuadratureSpec,
) -> Result<Distance> {
    let dim = same_dim(f, g)?;
    // |f - g|^2 <= 2|f|^2 + 2|g|^2
    let tail = match (f.decay(), g.decay()) {
        (Some(a), Some(b)) => {
            let two = Decay::Power {
                coeff: 2.0,
                power: 0.0,
                offset: 0.0,
            };
            Some(vec![a.squared().product(two), b.squared().product(two)])
        }
        _ => None,
    };
    let est = integrate_halfspace_with(dim, spec, tail, |x| {
        Element::real(dim, (f.eval(x) - g.eval(x)).norm_sqr())
    })?;
    let sq = est.value.re().max(0.0);
    let value = sq.sqrt();
    let std_error = if value > 0.0 {
        est.std_error / (2.0 * value)
    } else {
        est.std_error.sqrt()
    };
    Ok(Distance { value, std_error })
}

// ---------------------------------------------------------------------------
// Spheres and balls

/// Unit direction from `m` uniforms via Box-Muller pairs; `None` in the
/// measure-zero case of a zero Gaussian vector.
#[inline]
fn direction(u: &[f64], dim: Dim) -> Option<Element> {
    let m = dim.get();
    let mut c = [0.0; 8];
    for k in (0..m).step_by(2) {
        let r = (-2.0 * u[k].ln()).sqrt();
        let (s, co) = (2.0 * PI * u[k + 1]).sin_cos();
        c[k] = r * co;
        c[k + 1] = r * s;
    }
    let n = c[..m].iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return None;
    }
    for x in &mut c[..m] {
        *x /= n;
    }
    Element::from_prefix(dim, &c[..m]).ok()
}

fn check_center(center: &Element, radius: f64, dim: Dim) -> Result<()> {
    if center.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim.get(),
            right: center.dim().get(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

/// `int_{|x - center| < radius} g dV` by uniform ball sampling.
pub fn integrate_ball(
    g: &FieldFunction,
    center: &Element,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let dim = g.dim();
    check_center(center, radius, dim)?;
    ball_mean(dim, center, radius, spec, |x, _| g.eval(x), g)
}

fn ball_mean(
    dim: Dim,
    center: &Element,
    radius: f64,
    spec: &QuadratureSpec,
    integrand: impl Fn(&Element, &Element) -> Element + Sync,
    domain: &FieldFunction,
) -> Result<Estimate> {
    let m = dim.get();
    let volume = omega(dim) * radius.powi(m as i32) / m as f64;
    let est = estimate_mean(spec, m + 1, dim, |u| {
        let Some(n) = direction(&u[..m], dim) else {
            return Ok(None);
        };
        let rho = radius * u[m].powf(1.0 / m as f64);
        if rho == 0.0 {
            return Ok(None);
        }
        let x = *center + n * rho;
        if !domain.in_domain(&x) {
            return Err(Error::OutsideDomain(x.to_vec()));
        }
        Ok(Some(check_value(integrand(&x, &n), &x)?))
    })?;
    Ok(est.scaled(volume))
}

/// Weighted ball pairing
/// `(1/omega_m) int (conj(g) conj(n)) (n f) dV` with `n = (x - p) / |x - p|`.
pub fn inner_product_ball(
    f: &FieldFunction,
    g: &FieldFunction,
    center: &Element,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let dim = same_dim(f, g)?;
    check_center(center, radius, dim)?;
    let both = FieldFunction::new(dim, move |_| Element::zero(dim)).with_margin({
        let (f, g) = (f.clone(), g.clone());
        move |x| f.margin(x).min(g.margin(x))
    });
    let est = ball_mean(
        dim,
        center,
        radius,
        spec,
        |x, n| {
            let left = g.eval(x).conj() * n.conj();
            let right = *n * f.eval(x);
            left * right
        },
        &both,
    )?;
    Ok(est.scaled(1.0 / omega(dim)))
}

/// Boundary integral `(1/omega_m) int_{|y - c| = rho} E(y - x) (n(y) f(y)) dS`.
pub fn cauchy_integral(
    f: &FieldFunction,
    center: &Element,
    radius: f64,
    x: &Element,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let dim = f.dim();
    check_center(center, radius, dim)?;
    if x.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim.get(),
            right: x.dim().get(),
        });
    }
    if ((*x - *center).norm() - radius).abs() <= 1e-12 * radius {
        return Err(Error::OnBoundary(x.to_vec()));
    }
    let m = dim.get();
    let est = estimate_mean(spec, m, dim, |u| {
        let Some(n) = direction(u, dim) else {
            return Ok(None);
        };
        let y = *center + n * radius;
        if !f.in_domain(&y) {
            return Err(Error::OutsideDomain(y.to_vec()));
        }
        let kernel = cauchy_e(&(y - *x))?;
        let v = kernel * (n * f.eval(&y));
        Ok(Some(check_value(v, &y)?))
    })?;
    // Surface area omega_m rho^(m-1) cancels the 1/omega_m prefactor.
    Ok(est.scaled(radius.powi(m as i32 - 1)))
}
