//! Closed-form Cauchy and Bergman kernels, plus the catalog of analytic test
//! functions used by the verification scenarios.
//!
//! Every product below is written as an explicit pairwise multiplication in
//! the order the formula states it; the algebra is not associative for
//! `m = 8`.

use std::f64::consts::PI;

use crate::algebra::{Dim, Element};
use crate::analysis::{Decay, FieldFunction};
use crate::error::{Error, Result};

/// Surface area of the unit sphere in `R^m`.
pub fn omega(dim: Dim) -> f64 {
    match dim {
        Dim::Complex => 2.0 * PI,
        Dim::Quaternion => 2.0 * PI * PI,
        Dim::Octonion => PI.powi(4) / 3.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    pub dim: Dim,
    pub omega: f64,
}

impl KernelParams {
    pub fn new(dim: Dim) -> Self {
        KernelParams {
            dim,
            omega: omega(dim),
        }
    }
}

const E_GUARD: f64 = 1e-300;
const V_GUARD: f64 = 1e-12;

fn half_m(dim: Dim) -> i32 {
    dim.get() as i32 / 2
}

/// Cauchy kernel `E(x) = conj(x) / |x|^m`.
pub fn cauchy_e(x: &Element) -> Result<Element> {
    let n2 = x.norm_sqr();
    if n2.sqrt() < E_GUARD {
        return Err(Error::SingularPoint(x.to_vec()));
    }
    Ok(x.conj() / n2.powi(half_m(x.dim())))
}

/// Exact `dE/dx_0 = e_0 / |x|^m - m x_0 conj(x) / |x|^(m+2)`.
pub fn de_dx0(x: &Element) -> Result<Element> {
    let n2 = x.norm_sqr();
    if n2.sqrt() < E_GUARD {
        return Err(Error::SingularPoint(x.to_vec()));
    }
    let dim = x.dim();
    let m = dim.get() as f64;
    let nm = n2.powi(half_m(dim));
    Ok(Element::real(dim, 1.0 / nm) - x.conj() * (m * x.re() / (nm * n2)))
}

/// Half-space Bergman kernel `B(x, a)`.
///
/// With `v = a + conj(x)`:
/// `B = ((2(m-2) Re v) e_0 + 2 v) v / |v|^(m+2)`.
pub fn bergman_halfspace(x: &Element, a: &Element) -> Result<Element> {
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim().get(),
            right: a.dim().get(),
        });
    }
    if !(x.re() > 0.0) {
        return Err(Error::OutsideHalfSpace(x.to_vec()));
    }
    if !(a.re() > 0.0) {
        return Err(Error::OutsideHalfSpace(a.to_vec()));
    }
    let dim = x.dim();
    let v = *a + x.conj();
    let n2 = v.norm_sqr();
    if n2.sqrt() < V_GUARD {
        return Err(Error::SingularPoint(v.to_vec()));
    }
    let m = dim.get() as f64;
    let factor = Element::real(dim, 2.0 * (m - 2.0) * v.re()) + v * 2.0;
    let numerator = factor * v;
    Ok(numerator / n2.powi(half_m(dim) + 1))
}

/// Unit-ball octonionic Bergman kernel `B_{0,1}(x, a)`.
///
/// With `w = 1 - conj(x) a`:
/// `B = (6(1 - |a|^2 |x|^2) e_0 + 2 w) w / |w|^10`.
pub fn bergman_ball_unit(x: &Element, a: &Element) -> Result<Element> {
    for p in [x, a] {
        if p.dim() != Dim::Octonion {
            return Err(Error::UnsupportedDimension(p.dim().get()));
        }
    }
    let (x2, a2) = (x.norm_sqr(), a.norm_sqr());
    if !(x2 < 1.0) {
        return Err(Error::OutsideBall(x.to_vec()));
    }
    if !(a2 < 1.0) {
        return Err(Error::OutsideBall(a.to_vec()));
    }
    let dim = Dim::Octonion;
    let w = Element::one(dim) - x.conj() * *a;
    let factor = Element::real(dim, 6.0 * (1.0 - a2 * x2)) + w * 2.0;
    let numerator = factor * w;
    Ok(numerator / w.norm_sqr().powi(5))
}

/// Bergman kernel of the ball with centre `p` and radius `r`:
/// `B_{p,r}(x, a) = r^-8 B_{0,1}((x - p)/r, (a - p)/r)`.
pub fn bergman_ball(p: &Element, r: f64, x: &Element, a: &Element) -> Result<Element> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radius must be positive, got {r}")));
    }
    for q in [p, x, a] {
        if q.dim() != Dim::Octonion {
            return Err(Error::UnsupportedDimension(q.dim().get()));
        }
    }
    if !((*x - *p).norm() < r) {
        return Err(Error::OutsideBall(x.to_vec()));
    }
    if !((*a - *p).norm() < r) {
        return Err(Error::OutsideBall(a.to_vec()));
    }
    let xs = (*x - *p) / r;
    let as_ = (*a - *p) / r;
    Ok(bergman_ball_unit(&xs, &as_)? / r.powi(8))
}

/// Members of the analytic test-function catalog.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `x -> c`.
    Constant(Element),
    /// `x -> E(x - q)` with `Re q < 0`.
    ShiftedCauchy(Element),
    /// `x -> B(x, b)` with `Re b > 0`.
    HalfspaceKernel(Element),
}

impl TestFunction {
    pub fn dim(&self) -> Dim {
        match self {
            TestFunction::Constant(c) => c.dim(),
            TestFunction::ShiftedCauchy(q) => q.dim(),
            TestFunction::HalfspaceKernel(b) => b.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Constant(_) => "constant",
            TestFunction::ShiftedCauchy(_) => "shifted_cauchy",
            TestFunction::HalfspaceKernel(_) => "halfspace_kernel",
        }
    }

    pub fn parameter(&self) -> Element {
        match self {
            TestFunction::Constant(c)
            | TestFunction::ShiftedCauchy(c)
            | TestFunction::HalfspaceKernel(c) => *c,
        }
    }

    /// Direct evaluation, for use as an expected value.
    pub fn value_at(&self, x: &Element) -> Result<Element> {
        match self {
            TestFunction::Constant(c) => Ok(*c),
            TestFunction::ShiftedCauchy(q) => cauchy_e(&(*x - *q)),
            TestFunction::HalfspaceKernel(b) => bergman_halfspace(x, b),
        }
    }

    /// Whether the function is square integrable on the half space.
    pub fn square_integrable(&self) -> bool {
        match self {
            TestFunction::Constant(c) => c.norm_sqr() == 0.0,
            // |E(x - q)|^2 ~ |x|^(2 - 2m), integrable at infinity iff m > 2.
            TestFunction::ShiftedCauchy(q) => q.dim() != Dim::Complex,
            TestFunction::HalfspaceKernel(_) => true,
        }
    }
}

/// Builds the field function for a catalog member. The domain is always the
/// open half space `Re x > 0`.
pub fn make_test_function(kind: TestFunction) -> Result<FieldFunction> {
    let dim = kind.dim();
    let m = dim.get() as f64;
    match kind {
        TestFunction::Constant(c) => Ok(FieldFunction::new(dim, move |_| c)
            .on_half_space()
            .with_decay(Decay::Power {
                coeff: c.norm(),
                power: 0.0,
                offset: 0.0,
            })),
        TestFunction::ShiftedCauchy(q) => {
            if !(q.re() < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "shifted Cauchy pole must have negative real part, got {q:?}"
                )));
            }
            let nan = Element::zero(dim).scale(f64::NAN);
            Ok(FieldFunction::new(dim, move |x| cauchy_e(&(*x - q)).unwrap_or(nan))
                .on_half_space()
                .with_decay(Decay::Power {
                    coeff: 1.0,
                    power: m - 1.0,
                    offset: q.norm(),
                }))
        }
        TestFunction::HalfspaceKernel(b) => {
            if !(b.re() > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "kernel parameter must lie in the half space, got {b:?}"
                )));
            }
            let nan = Element::zero(dim).scale(f64::NAN);
            // |B(x, b)| <= 2(m-1) |b + conj(x)|^-m and |b + conj(x)| >= |x| - |b|.
            Ok(FieldFunction::new(dim, move |x| bergman_halfspace(x, &b).unwrap_or(nan))
                .on_half_space()
                .with_decay(Decay::Power {
                    coeff: 2.0 * (m - 1.0),
                    power: m,
                    offset: b.norm(),
                }))
        }
    }
}

/// `E` as a field function on `R^m \ {0}`.
pub fn cauchy_field(dim: Dim) -> FieldFunction {
    let nan = Element::zero(dim).scale(f64::NAN);
    FieldFunction::new(dim, move |x| cauchy_e(x).unwrap_or(nan)).with_margin(|x| x.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: Dim, i: usize) -> Element {
        Element::basis(dim, i).unwrap()
    }

    fn oct(c: &[f64]) -> Element {
        Element::from_prefix(Dim::Octonion, c).unwrap()
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega(Dim::Complex), 2.0 * PI);
        assert_eq!(omega(Dim::Quaternion), 2.0 * PI * PI);
        assert!((omega(Dim::Octonion) - PI.powi(4) / 3.0).abs() < 1e-15);
        // 2 pi^(m/2) / Gamma(m/2) with Gamma(4) = 6
        assert!((omega(Dim::Octonion) - 2.0 * PI.powi(4) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn cauchy_kernel_values() {
        let o = Dim::Octonion;
        assert_eq!(cauchy_e(&Element::one(o)).unwrap(), Element::one(o));
        assert_eq!(cauchy_e(&Element::real(o, 2.0)).unwrap(), Element::real(o, 1.0 / 128.0));
        assert_eq!(cauchy_e(&e(o, 1)).unwrap(), -e(o, 1));
        assert!(matches!(cauchy_e(&Element::zero(o)), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn cauchy_derivative_values() {
        let o = Dim::Octonion;
        assert_eq!(de_dx0(&Element::one(o)).unwrap(), Element::real(o, -7.0));
        assert_eq!(de_dx0(&e(o, 1)).unwrap(), Element::one(o));
        assert!(de_dx0(&Element::zero(o)).is_err());
    }

    #[test]
    fn cauchy_derivative_matches_central_difference() {
        let x = oct(&[2.0, 0.0, 0.0, 1.0]);
        let h = 1e-4;
        let dx = Element::real(Dim::Octonion, h);
        let fd = (cauchy_e(&(x + dx)).unwrap() - cauchy_e(&(x - dx)).unwrap()) / (2.0 * h);
        let exact = de_dx0(&x).unwrap();
        assert!((fd - exact).max_abs() < 1e-6);
    }

    #[test]
    fn halfspace_kernel_values() {
        let o = Dim::Octonion;
        let one = Element::one(o);
        assert_eq!(bergman_halfspace(&one, &one).unwrap(), Element::real(o, 7.0 / 128.0));
        let c1 = Element::one(Dim::Complex);
        assert_eq!(bergman_halfspace(&c1, &c1).unwrap(), Element::real(Dim::Complex, 0.5));
        let x = oct(&[1.0, 1.0]);
        let lhs = bergman_halfspace(&x, &one).unwrap();
        let rhs = bergman_halfspace(&one, &x).unwrap().conj();
        assert!((lhs - rhs).max_abs() < 1e-15);
    }

    #[test]
    fn halfspace_kernel_rejects_boundary() {
        let o = Dim::Octonion;
        let one = Element::one(o);
        assert!(matches!(
            bergman_halfspace(&e(o, 1), &one),
            Err(Error::OutsideHalfSpace(_))
        ));
        assert!(matches!(
            bergman_halfspace(&one, &Element::real(o, -0.5)),
            Err(Error::OutsideHalfSpace(_))
        ));
    }

    #[test]
    fn ball_kernel_values() {
        let a = oct(&[0.1, -0.3, 0.2, 0.0, 0.1, 0.05, -0.2, 0.3]);
        let zero = Element::zero(Dim::Octonion);
        let eight = Element::real(Dim::Octonion, 8.0);
        assert_eq!(bergman_ball_unit(&zero, &a).unwrap(), eight);
        assert_eq!(bergman_ball_unit(&a, &zero).unwrap(), eight);

        // Independent evaluation on the real line: w = 1 - xa.
        let half = Element::real(Dim::Octonion, 0.5);
        let got = bergman_ball_unit(&half, &half).unwrap();
        let w: f64 = 1.0 - 0.25;
        let expected = (6.0 * (1.0 - 1.0 / 16.0) + 2.0 * w) * w / w.powi(10);
        assert!((got.re() - expected).abs() < 1e-12 * expected);
        assert!((expected - 94.892_852).abs() < 1e-5);
        assert!(got.coeffs()[1..].iter().all(|c| *c == 0.0));

        assert!(matches!(
            bergman_ball_unit(&Element::one(Dim::Octonion), &zero),
            Err(Error::OutsideBall(_))
        ));
        assert!(matches!(
            bergman_ball_unit(&Element::zero(Dim::Quaternion), &Element::zero(Dim::Quaternion)),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn scaled_ball_kernel() {
        let o = Dim::Octonion;
        let zero = Element::zero(o);
        let x = oct(&[0.2, 0.1, 0.0, -0.3]);
        let a = oct(&[-0.1, 0.0, 0.4]);
        assert_eq!(bergman_ball(&zero, 1.0, &x, &a).unwrap(), bergman_ball_unit(&x, &a).unwrap());
        assert_eq!(bergman_ball(&zero, 2.0, &zero, &zero).unwrap(), Element::real(o, 0.03125));
        let r = 100.0;
        let one = Element::one(o);
        let near = bergman_ball(&Element::real(o, r), r, &one, &one).unwrap();
        assert!((near.re() - 7.0 / 128.0).abs() < 5.0 / r);
        assert!(bergman_ball(&zero, 0.0, &zero, &zero).is_err());
        assert!(matches!(
            bergman_ball(&zero, 1.0, &oct(&[2.0]), &zero),
            Err(Error::OutsideBall(_))
        ));
    }

    #[test]
    fn catalog_members() {
        let o = Dim::Octonion;
        let one = Element::one(o);
        let c = make_test_function(TestFunction::Constant(e(o, 3))).unwrap();
        assert_eq!(c.eval(&oct(&[4.0, 2.0])), e(o, 3));
        let f = make_test_function(TestFunction::ShiftedCauchy(-one)).unwrap();
        assert_eq!(f.eval(&one), Element::real(o, 1.0 / 128.0));
        let g = make_test_function(TestFunction::HalfspaceKernel(one)).unwrap();
        assert_eq!(g.eval(&one), Element::real(o, 7.0 / 128.0));
        assert!(make_test_function(TestFunction::ShiftedCauchy(one)).is_err());
        assert!(make_test_function(TestFunction::HalfspaceKernel(-one)).is_err());
        assert!(g.in_domain(&one) && !g.in_domain(&-one));
    }
}
