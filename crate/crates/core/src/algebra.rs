//! Arithmetic in the normed division algebras C, H and O.
//!
//! Elements are stored as eight coefficients with the unused tail zeroed, so
//! the complex numbers and quaternions are literal subalgebras of the
//! octonions: `e_0, e_1` span C and `e_0, ..., e_3` span H. The octonion
//! multiplication table is generated from the seven quaternionic triples
//! listed in [`TRIPLES`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// The seven index triples `(a, b, c)` with `e_a e_b = e_c`.
pub const TRIPLES: [(usize, usize, usize); 7] = [
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
];

/// Dimension of one of the three supported algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Complex,
    Quaternion,
    Octonion,
}

impl Dim {
    pub const ALL: [Dim; 3] = [Dim::Complex, Dim::Quaternion, Dim::Octonion];

    pub const fn get(self) -> usize {
        match self {
            Dim::Complex => 2,
            Dim::Quaternion => 4,
            Dim::Octonion => 8,
        }
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;

    fn try_from(m: usize) -> Result<Self> {
        match m {
            2 => Ok(Dim::Complex),
            4 => Ok(Dim::Quaternion),
            8 => Ok(Dim::Octonion),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Structure constants `e_i e_j = sign[i][j] * e_{index[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    dim: Dim,
    sign: [[i8; 8]; 8],
    index: [[u8; 8]; 8],
}

impl MultiplicationTable {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Returns `(sign, index)` of the product `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> (i8, usize) {
        let m = self.dim.get();
        assert!(i < m && j < m, "basis index out of range for dimension {m}");
        (self.sign[i][j], self.index[i][j] as usize)
    }
}

fn octonion_table() -> MultiplicationTable {
    let mut sign = [[0i8; 8]; 8];
    let mut index = [[0u8; 8]; 8];
    for j in 0..8 {
        sign[0][j] = 1;
        index[0][j] = j as u8;
        sign[j][0] = 1;
        index[j][0] = j as u8;
    }
    for i in 1..8 {
        sign[i][i] = -1;
        index[i][i] = 0;
    }
    for &(a, b, c) in &TRIPLES {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            sign[x][y] = 1;
            index[x][y] = z as u8;
            sign[y][x] = -1;
            index[y][x] = z as u8;
        }
    }
    MultiplicationTable {
        dim: Dim::Octonion,
        sign,
        index,
    }
}

/// Builds the multiplication table for dimension `m`.
///
/// The tables for `m = 2` and `m = 4` are the restriction of the octonion
/// table to the leading basis indices.
pub fn build_table(m: usize) -> Result<MultiplicationTable> {
    let dim = Dim::try_from(m)?;
    let full = octonion_table();
    let mut sign = [[0i8; 8]; 8];
    let mut index = [[0u8; 8]; 8];
    for i in 0..m {
        for j in 0..m {
            sign[i][j] = full.sign[i][j];
            index[i][j] = full.index[i][j];
        }
    }
    Ok(MultiplicationTable { dim, sign, index })
}

static OCTONION_TABLE: LazyLock<MultiplicationTable> = LazyLock::new(octonion_table);

/// A number in C, H or O.
///
/// Coefficient `i` multiplies `e_i`; index 0 is the real part.
#[derive(Clone, Copy, PartialEq)]
pub struct Element {
    dim: Dim,
    c: [f64; 8],
}

impl Element {
    pub fn zero(dim: Dim) -> Self {
        Element { dim, c: [0.0; 8] }
    }

    pub fn one(dim: Dim) -> Self {
        Self::real(dim, 1.0)
    }

    pub fn real(dim: Dim, x: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x;
        Element { dim, c }
    }

    /// The basis unit `e_i`.
    pub fn basis(dim: Dim, i: usize) -> Result<Self> {
        if i >= dim.get() {
            return Err(Error::InvalidParameter(format!(
                "basis index {i} out of range for dimension {dim}"
            )));
        }
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Ok(Element { dim, c })
    }

    /// Builds an element from its coefficients; the slice length fixes the
    /// dimension.
    pub fn from_slice(coeffs: &[f64]) -> Result<Self> {
        let dim = Dim::try_from(coeffs.len())?;
        if let Some(i) = coeffs.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteCoefficient(i));
        }
        let mut c = [0.0; 8];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Element { dim, c })
    }

    /// Like [`Element::from_slice`] but pads a shorter slice with zeros.
    pub fn from_prefix(dim: Dim, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() > dim.get() {
            return Err(Error::DimensionMismatch {
                left: dim.get(),
                right: coeffs.len(),
            });
        }
        let mut c = [0.0; 8];
        c[..coeffs.len()].copy_from_slice(coeffs);
        if let Some(i) = coeffs.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteCoefficient(i));
        }
        Ok(Element { dim, c })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.dim.get()]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coeffs().to_vec()
    }

    /// Real part `x_0`.
    pub fn re(&self) -> f64 {
        self.c[0]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coeffs()[i]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|x| x.is_finite())
    }

    pub fn conj(&self) -> Self {
        let mut c = self.c;
        for x in &mut c[1..] {
            *x = -*x;
        }
        Element { dim: self.dim, c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs().iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n2)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        for x in &mut c {
            *x *= s;
        }
        Element { dim: self.dim, c }
    }

    /// Bilinear product through the multiplication table.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(mul_unchecked(self, other))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(*self + *other)
    }
}

fn check_dims(x: &Element, y: &Element) -> Result<()> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch {
            left: x.dim.get(),
            right: y.dim.get(),
        });
    }
    Ok(())
}

#[inline]
fn mul_unchecked(x: &Element, y: &Element) -> Element {
    let m = x.dim.get();
    let t = &*OCTONION_TABLE;
    let mut out = [0.0; 8];
    for i in 0..m {
        let xi = x.c[i];
        if xi == 0.0 {
            continue;
        }
        for j in 0..m {
            let term = xi * y.c[j];
            let k = t.index[i][j] as usize;
            if t.sign[i][j] > 0 {
                out[k] += term;
            } else {
                out[k] -= term;
            }
        }
    }
    Element { dim: x.dim, c: out }
}

/// `x y`; errors on mismatched dimensions.
pub fn mul(x: &Element, y: &Element) -> Result<Element> {
    x.try_mul(y)
}

pub fn conj(x: &Element) -> Element {
    x.conj()
}

pub fn norm(x: &Element) -> f64 {
    x.norm()
}

pub fn inverse(x: &Element) -> Result<Element> {
    x.inverse()
}

/// `[x, y, z] = (x y) z - x (y z)`.
pub fn associator(x: &Element, y: &Element, z: &Element) -> Result<Element> {
    check_dims(x, y)?;
    check_dims(y, z)?;
    let left = mul_unchecked(&mul_unchecked(x, y), z);
    let right = mul_unchecked(x, &mul_unchecked(y, z));
    Ok(left - right)
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.coeffs())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, x) in self.coeffs().iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *x < 0.0 { '-' } else { '+' })?;
            } else if *x < 0.0 {
                write!(f, "-")?;
            }
            write!(f, "{}e{}", x.abs(), i)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operators panic on mismatched dimensions; use the `try_*` forms when the
// dimensions are not already known to agree.

impl Mul for Element {
    type Output = Element;

    fn mul(self, rhs: Element) -> Element {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        mul_unchecked(&self, &rhs)
    }
}

impl Mul<f64> for Element {
    type Output = Element;

    fn mul(self, rhs: f64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<Element> for f64 {
    type Output = Element;

    fn mul(self, rhs: Element) -> Element {
        rhs.scale(self)
    }
}

impl Div<f64> for Element {
    type Output = Element;

    fn div(self, rhs: f64) -> Element {
        let mut c = self.c;
        for x in &mut c {
            *x /= rhs;
        }
        Element { dim: self.dim, c }
    }
}

impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(rhs.c) {
            *x += y;
        }
        Element { dim: self.dim, c }
    }
}

impl AddAssign for Element {
    fn add_assign(&mut self, rhs: Element) {
        *self = *self + rhs;
    }
}

impl Sub for Element {
    type Output = Element;

    fn sub(self, rhs: Element) -> Element {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(rhs.c) {
            *x -= y;
        }
        Element { dim: self.dim, c }
    }
}

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: Dim, i: usize) -> Element {
        Element::basis(dim, i).unwrap()
    }

    fn assert_close(a: &Element, b: &Element, tol: f64) {
        assert!((*a - *b).max_abs() <= tol, "{a:?} != {b:?}");
    }

    #[test]
    fn rejects_unsupported_dimensions() {
        for m in [0, 1, 3, 5, 16] {
            assert_eq!(build_table(m), Err(Error::UnsupportedDimension(m)));
        }
    }

    #[test]
    fn octonion_table_follows_triples() {
        let t = build_table(8).unwrap();
        assert_eq!(t.product(1, 2), (1, 3));
        assert_eq!(t.product(2, 1), (-1, 3));
        for &(a, b, c) in &TRIPLES {
            assert_eq!(t.product(a, b), (1, c));
            assert_eq!(t.product(b, c), (1, a));
            assert_eq!(t.product(c, a), (1, b));
            assert_eq!(t.product(b, a), (-1, c));
            assert_eq!(t.product(c, b), (-1, a));
            assert_eq!(t.product(a, c), (-1, b));
        }
    }

    #[test]
    fn table_identity_and_squares() {
        for m in [2, 4, 8] {
            let t = build_table(m).unwrap();
            for j in 0..m {
                assert_eq!(t.product(0, j), (1, j));
                assert_eq!(t.product(j, 0), (1, j));
            }
            for i in 1..m {
                assert_eq!(t.product(i, i), (-1, 0));
            }
        }
    }

    #[test]
    fn small_tables_are_restrictions() {
        let full = build_table(8).unwrap();
        for m in [2, 4] {
            let t = build_table(m).unwrap();
            for i in 0..m {
                for j in 0..m {
                    let (s, k) = t.product(i, j);
                    assert_eq!((s, k), full.product(i, j));
                    assert!(k < m, "restriction must close");
                }
            }
        }
        let h = build_table(4).unwrap();
        assert_eq!(h.product(1, 2), (1, 3));
        assert_eq!(h.product(2, 3), (1, 1));
        assert_eq!(h.product(3, 1), (1, 2));
        let c = build_table(2).unwrap();
        assert_eq!(c.product(1, 1), (-1, 0));
    }

    #[test]
    fn basis_products() {
        let o = Dim::Octonion;
        assert_eq!(e(o, 1) * e(o, 2), e(o, 3));
        let lhs = (e(o, 1) + e(o, 4)) * e(o, 2);
        assert_eq!(lhs, e(o, 3) - e(o, 6));
    }

    #[test]
    fn mismatched_dims_error() {
        let x = Element::one(Dim::Quaternion);
        let y = Element::one(Dim::Octonion);
        assert_eq!(
            mul(&x, &y),
            Err(Error::DimensionMismatch { left: 4, right: 8 })
        );
        assert!(associator(&y, &y, &x).is_err());
    }

    #[test]
    fn inverses() {
        let o = Dim::Octonion;
        let two = Element::real(o, 2.0);
        assert_eq!(inverse(&two).unwrap(), Element::real(o, 0.5));
        assert_eq!(inverse(&e(o, 1)).unwrap(), -e(o, 1));
        let x = Element::one(o) + e(o, 1);
        assert_close(&inverse(&x).unwrap(), &((Element::one(o) - e(o, 1)) / 2.0), 0.0);
        assert_eq!(inverse(&Element::zero(o)), Err(Error::DivisionByZero));
    }

    #[test]
    fn associator_of_basis_units() {
        let o = Dim::Octonion;
        let a = associator(&e(o, 1), &e(o, 2), &e(o, 4)).unwrap();
        assert_eq!(a, e(o, 7).scale(2.0));
        let q = Dim::Quaternion;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let a = associator(&e(q, i), &e(q, j), &e(q, k)).unwrap();
                    assert_eq!(a.max_abs(), 0.0);
                }
            }
        }
    }

    #[test]
    fn from_slice_validates() {
        assert!(Element::from_slice(&[1.0, 2.0, 3.0]).is_err());
        assert_eq!(
            Element::from_slice(&[1.0, f64::NAN]),
            Err(Error::NonFiniteCoefficient(1))
        );
        let x = Element::from_slice(&[1.0, -2.0]).unwrap();
        assert_eq!(x.dim(), Dim::Complex);
        assert_eq!(x.conj().coeffs(), &[1.0, 2.0]);
    }
}
