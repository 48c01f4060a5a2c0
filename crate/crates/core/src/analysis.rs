//! Finite-difference versions of the generalized Cauchy-Riemann operator
//! `D = sum e_i d/dx_i`, its conjugate, and the Laplacian.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Dim, Element};
use crate::error::{Error, Result};

type EvalFn = dyn Fn(&Element) -> Element + Send + Sync;
type MarginFn = dyn Fn(&Element) -> f64 + Send + Sync;

/// Upper bound on `|f(x)|` far from the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// `|f(x)| <= coeff * (|x| - offset)^(-power)` whenever `|x| > offset`.
    Power { coeff: f64, power: f64, offset: f64 },
    /// `|f(x)| <= coeff * exp(-rate |x|^2)`.
    Gaussian { coeff: f64, rate: f64 },
}

impl Decay {
    /// Envelope of the pointwise product of two functions.
    pub fn product(self, other: Decay) -> Decay {
        match (self, other) {
            (
                Decay::Power {
                    coeff: c1,
                    power: p1,
                    offset: o1,
                },
                Decay::Power {
                    coeff: c2,
                    power: p2,
                    offset: o2,
                },
            ) => Decay::Power {
                coeff: c1 * c2,
                power: p1 + p2,
                offset: o1.max(o2),
            },
            (Decay::Gaussian { coeff, rate }, Decay::Power { coeff: c, power: 0.0, .. })
            | (Decay::Power { coeff: c, power: 0.0, .. }, Decay::Gaussian { coeff, rate }) => {
                Decay::Gaussian {
                    coeff: coeff * c,
                    rate,
                }
            }
            (
                Decay::Gaussian {
                    coeff: c1,
                    rate: r1,
                },
                Decay::Gaussian {
                    coeff: c2,
                    rate: r2,
                },
            ) => Decay::Gaussian {
                coeff: c1 * c2,
                rate: r1 + r2,
            },
            // exp(-r|x|^2) <= 1, so the power envelope survives.
            (Decay::Gaussian { coeff: cg, .. }, Decay::Power { coeff, power, offset })
            | (Decay::Power { coeff, power, offset }, Decay::Gaussian { coeff: cg, .. }) => {
                Decay::Power {
                    coeff: coeff * cg,
                    power,
                    offset,
                }
            }
        }
    }

    /// Envelope of `|f|^2`.
    pub fn squared(self) -> Decay {
        self.product(self)
    }
}

/// An evaluatable map from points of `R^m` (stored as elements) into the
/// algebra.
///
/// `margin(x)` is the distance from `x` to the complement of the domain,
/// including any singular set; it is positive exactly on the domain.
#[derive(Clone)]
pub struct FieldFunction {
    dim: Dim,
    eval: Arc<EvalFn>,
    margin: Arc<MarginFn>,
    decay: Option<Decay>,
}

impl fmt::Debug for FieldFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldFunction")
            .field("dim", &self.dim)
            .field("decay", &self.decay)
            .finish_non_exhaustive()
    }
}

impl FieldFunction {
    /// A function defined on all of `R^m`.
    pub fn new(dim: Dim, eval: impl Fn(&Element) -> Element + Send + Sync + 'static) -> Self {
        FieldFunction {
            dim,
            eval: Arc::new(eval),
            margin: Arc::new(|_| f64::INFINITY),
            decay: None,
        }
    }

    pub fn with_margin(mut self, margin: impl Fn(&Element) -> f64 + Send + Sync + 'static) -> Self {
        self.margin = Arc::new(margin);
        self
    }

    /// Restricts the domain to the open half space `Re x > 0`.
    pub fn on_half_space(self) -> Self {
        self.with_margin(|x| x.re())
    }

    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn decay(&self) -> Option<Decay> {
        self.decay
    }

    #[inline]
    pub fn eval(&self, x: &Element) -> Element {
        (self.eval)(x)
    }

    pub fn margin(&self, x: &Element) -> f64 {
        (self.margin)(x)
    }

    pub fn in_domain(&self, x: &Element) -> bool {
        self.margin(x) > 0.0
    }

    /// `x -> f(x + shift)`, keeping the domain and decay class.
    pub fn shifted(&self, shift: Element) -> FieldFunction {
        let inner = self.clone();
        let inner_margin = self.clone();
        let decay = self.decay.map(|d| match d {
            Decay::Power {
                coeff,
                power,
                offset,
            } => Decay::Power {
                coeff,
                power,
                offset: offset + shift.norm(),
            },
            g @ Decay::Gaussian { .. } => g,
        });
        FieldFunction {
            dim: self.dim,
            eval: Arc::new(move |x| inner.eval(&(*x + shift))),
            margin: Arc::new(move |x| inner_margin.margin(&(*x + shift))),
            decay,
        }
    }
}

/// Central-difference accuracy order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilSpec {
    h: f64,
    order: StencilOrder,
}

impl Default for StencilSpec {
    fn default() -> Self {
        StencilSpec {
            h: 1e-3,
            order: StencilOrder::Fourth,
        }
    }
}

impl StencilSpec {
    pub fn new(h: f64, order: u8) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("stencil step must be positive, got {h}")));
        }
        let order = match order {
            2 => StencilOrder::Second,
            4 => StencilOrder::Fourth,
            o => {
                return Err(Error::InvalidParameter(format!(
                    "stencil order must be 2 or 4, got {o}"
                )))
            }
        };
        Ok(StencilSpec { h, order })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn order(&self) -> StencilOrder {
        self.order
    }

    /// Closest a stencil centre may come to the edge of the domain.
    pub fn min_margin(&self) -> f64 {
        10.0 * self.h
    }
}

fn check_point(f: &FieldFunction, x: &Element, s: &StencilSpec) -> Result<()> {
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim().get(),
            right: x.dim().get(),
        });
    }
    if f.margin(x) < s.min_margin() {
        return Err(Error::OutsideDomain(x.to_vec()));
    }
    Ok(())
}

fn offset(x: &Element, i: usize, t: f64) -> Element {
    let mut c = x.to_vec();
    c[i] += t;
    Element::from_prefix(x.dim(), &c).expect("finite offset point")
}

/// Central first difference along coordinate `i`.
fn partial(f: &FieldFunction, x: &Element, i: usize, s: &StencilSpec) -> Element {
    let h = s.h;
    match s.order {
        StencilOrder::Second => {
            (f.eval(&offset(x, i, h)) - f.eval(&offset(x, i, -h))) / (2.0 * h)
        }
        StencilOrder::Fourth => {
            let p1 = f.eval(&offset(x, i, h));
            let m1 = f.eval(&offset(x, i, -h));
            let p2 = f.eval(&offset(x, i, 2.0 * h));
            let m2 = f.eval(&offset(x, i, -2.0 * h));
            ((p1 - m1) * 8.0 - (p2 - m2)) / (12.0 * h)
        }
    }
}

/// Central second difference along coordinate `i`.
fn second_partial(f: &FieldFunction, x: &Element, i: usize, s: &StencilSpec) -> Element {
    let h = s.h;
    let f0 = f.eval(x);
    match s.order {
        StencilOrder::Second => {
            (f.eval(&offset(x, i, h)) + f.eval(&offset(x, i, -h)) - f0 * 2.0) / (h * h)
        }
        StencilOrder::Fourth => {
            let p1 = f.eval(&offset(x, i, h));
            let m1 = f.eval(&offset(x, i, -h));
            let p2 = f.eval(&offset(x, i, 2.0 * h));
            let m2 = f.eval(&offset(x, i, -2.0 * h));
            ((p1 + m1) * 16.0 - (p2 + m2) - f0 * 30.0) / (12.0 * h * h)
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn apply_d(f: &FieldFunction, x: &Element, s: &StencilSpec, side: Side, conjugate: bool) -> Result<Element> {
    check_point(f, x, s)?;
    let dim = f.dim();
    let mut acc = Element::zero(dim);
    for i in 0..dim.get() {
        let mut unit = Element::basis(dim, i)?;
        if conjugate {
            unit = unit.conj();
        }
        let d = partial(f, x, i, s);
        acc += match side {
            Side::Left => unit * d,
            Side::Right => d * unit,
        };
    }
    Ok(acc)
}

/// `D f = sum_i e_i (df/dx_i)` at `x`.
pub fn apply_left_d(f: &FieldFunction, x: &Element, s: &StencilSpec) -> Result<Element> {
    apply_d(f, x, s, Side::Left, false)
}

/// `f D = sum_i (df/dx_i) e_i` at `x`.
pub fn apply_right_d(f: &FieldFunction, x: &Element, s: &StencilSpec) -> Result<Element> {
    apply_d(f, x, s, Side::Right, false)
}

/// Conjugate operator `sum_i conj(e_i) (df/dx_i)`, acting from the left.
pub fn apply_left_dbar(f: &FieldFunction, x: &Element, s: &StencilSpec) -> Result<Element> {
    apply_d(f, x, s, Side::Left, true)
}

/// Componentwise Laplacian.
pub fn laplacian(f: &FieldFunction, x: &Element, s: &StencilSpec) -> Result<Element> {
    check_point(f, x, s)?;
    let mut acc = Element::zero(f.dim());
    for i in 0..f.dim().get() {
        acc += second_partial(f, x, i, s);
    }
    Ok(acc)
}

/// The field `x -> D f(x)` evaluated by stencil; points where the stencil
/// is not admissible evaluate to NaN.
pub fn left_d_field(f: &FieldFunction, s: StencilSpec) -> FieldFunction {
    let inner = f.clone();
    let margin_src = f.clone();
    let dim = f.dim();
    FieldFunction::new(dim, move |x| {
        apply_left_d(&inner, x, &s).unwrap_or_else(|_| Element::zero(dim).scale(f64::NAN))
    })
    .with_margin(move |x| margin_src.margin(x) - s.min_margin())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResidual {
    pub point: Element,
    /// Largest absolute component of `D f`, or `None` if the point was
    /// rejected.
    pub residual: Option<f64>,
    pub analytic: bool,
    pub error: Option<Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticityReport {
    pub tolerance: f64,
    pub points: Vec<PointResidual>,
}

impl AnalyticityReport {
    pub fn all_analytic(&self) -> bool {
        !self.points.is_empty() && self.points.iter().all(|p| p.analytic)
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| p.residual)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }

    pub fn rejected(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }
}

/// Left-analyticity check at a batch of points. Points the stencil cannot
/// reach are flagged rather than aborting the batch.
pub fn analyticity_report(
    f: &FieldFunction,
    points: &[Element],
    s: &StencilSpec,
    tol: f64,
) -> AnalyticityReport {
    let points = points
        .iter()
        .map(|x| match apply_left_d(f, x, s) {
            Ok(d) => {
                let r = d.max_abs();
                PointResidual {
                    point: *x,
                    residual: Some(r),
                    analytic: r <= tol,
                    error: None,
                }
            }
            Err(e) => PointResidual {
                point: *x,
                residual: None,
                analytic: false,
                error: Some(e),
            },
        })
        .collect();
    AnalyticityReport {
        tolerance: tol,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(dim: Dim) -> FieldFunction {
        FieldFunction::new(dim, |x| *x)
    }

    #[test]
    fn stencil_spec_validation() {
        assert!(StencilSpec::new(0.0, 4).is_err());
        assert!(StencilSpec::new(-1e-3, 2).is_err());
        assert!(StencilSpec::new(1e-3, 3).is_err());
        assert!(StencilSpec::new(1e-3, 2).is_ok());
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let c = Element::basis(Dim::Octonion, 3).unwrap();
        let f = FieldFunction::new(Dim::Octonion, move |_| c);
        let x = Element::from_slice(&[0.3, -0.2, 0.1, 0.0, 0.5, 0.9, -0.4, 0.2]).unwrap();
        let s = StencilSpec::default();
        assert_eq!(apply_left_d(&f, &x, &s).unwrap().max_abs(), 0.0);
        assert_eq!(apply_right_d(&f, &x, &s).unwrap().max_abs(), 0.0);
        assert_eq!(laplacian(&f, &x, &s).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn identity_map_gives_two_minus_m() {
        for dim in Dim::ALL {
            let f = identity(dim);
            let x = Element::real(dim, 0.7);
            let s = StencilSpec::default();
            let expected = Element::real(dim, -(dim.get() as f64 - 2.0));
            let l = apply_left_d(&f, &x, &s).unwrap();
            let r = apply_right_d(&f, &x, &s).unwrap();
            assert!((l - expected).max_abs() < 1e-10, "{l:?}");
            assert!((r - expected).max_abs() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn laplacian_of_norm_squared() {
        let dim = Dim::Octonion;
        let f = FieldFunction::new(dim, move |x| Element::real(dim, x.norm_sqr()));
        let x = Element::from_slice(&[0.5, 0.1, -0.3, 0.2, 0.0, 0.4, -0.1, 0.25]).unwrap();
        let lap = laplacian(&f, &x, &StencilSpec::default()).unwrap();
        assert!((lap - Element::real(dim, 16.0)).max_abs() < 1e-6, "{lap:?}");
    }

    #[test]
    fn rejects_points_near_domain_edge() {
        let f = identity(Dim::Quaternion).on_half_space();
        let s = StencilSpec::default();
        let near = Element::real(Dim::Quaternion, 5e-3);
        assert!(matches!(apply_left_d(&f, &near, &s), Err(Error::OutsideDomain(_))));
        assert!(matches!(laplacian(&f, &near, &s), Err(Error::OutsideDomain(_))));
        let ok = Element::real(Dim::Quaternion, 0.5);
        assert!(apply_left_d(&f, &ok, &s).is_ok());
    }

    #[test]
    fn report_flags_non_analytic_and_rejected_points() {
        let dim = Dim::Octonion;
        let f = identity(dim).on_half_space();
        let pts = vec![Element::real(dim, 1.0), Element::real(dim, -1.0)];
        let rep = analyticity_report(&f, &pts, &StencilSpec::default(), 1e-5);
        assert!(!rep.points[0].analytic);
        assert!((rep.points[0].residual.unwrap() - 6.0).abs() < 1e-9);
        assert!(rep.points[1].error.is_some());
        assert_eq!(rep.rejected(), 1);
        assert!(!rep.all_analytic());

        let c = Element::basis(dim, 3).unwrap();
        let g = FieldFunction::new(dim, move |_| c);
        let rep = analyticity_report(&g, &pts, &StencilSpec::default(), 1e-5);
        assert!(rep.all_analytic());
    }

    #[test]
    fn left_and_right_agree_on_real_valued_fields() {
        let dim = Dim::Octonion;
        let f = FieldFunction::new(dim, move |x| Element::real(dim, (x.re() * x.get(3)).sin() + x.norm_sqr()));
        let x = Element::from_slice(&[0.4, 0.2, -0.1, 0.8, 0.3, -0.6, 0.1, 0.05]).unwrap();
        let s = StencilSpec::default();
        let l = apply_left_d(&f, &x, &s).unwrap();
        let r = apply_right_d(&f, &x, &s).unwrap();
        assert!((l - r).max_abs() < 1e-12);
    }

    #[test]
    fn decay_products() {
        let a = Decay::Power { coeff: 2.0, power: 7.0, offset: 1.0 };
        let b = Decay::Power { coeff: 14.0, power: 8.0, offset: 2.0 };
        assert_eq!(a.product(b), Decay::Power { coeff: 28.0, power: 15.0, offset: 2.0 });
        let g = Decay::Gaussian { coeff: 1.0, rate: 1.0 };
        assert_eq!(g.squared(), Decay::Gaussian { coeff: 1.0, rate: 2.0 });
    }
}
