//! Newton polygon of P(∂t,∂z): the convex hull of the quadrants
//! Q(j+α, −j) = {x ≤ j+α, y ≥ −j}, its sides and Gevrey indices, principal
//! parts and Toeplitz symbols.

use crate::expr_parser::Operator;
use crate::numeric::RationalComplex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("Gevrey index s = {0} must be non-negative")]
    InvalidIndex(String),
    #[error("no contact: (j,α) = ({j},{alpha}) is not on the segment of index s = {s}")]
    NoContact { j: u32, alpha: u32, s: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub point: Point,
    pub j: u32,
    pub alpha: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideKind {
    /// Horizontal edge at the lowest y (slope 0, index ∞).
    Horizontal,
    /// Finite positive slope k = Δy/Δx, index s = 1/k.
    Finite { slope: BigRational, s: BigRational },
    /// Vertical edge at the largest x (slope ∞, index 0).
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub kind: SideKind,
    pub from: Point,
    pub to: Point,
    /// Terms (j, α) whose generator lies on the side.
    pub contributing: Vec<(u32, u32)>,
}

impl Side {
    pub fn gevrey_index(&self) -> Option<BigRational> {
        match &self.kind {
            SideKind::Finite { s, .. } => Some(s.clone()),
            SideKind::Vertical => Some(BigRational::zero()),
            SideKind::Horizontal => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub generators: Vec<Generator>,
    /// Boundary vertices from the bottom vertex to the rightmost vertex, increasing x.
    pub vertices: Vec<Point>,
    /// Sides in increasing x: optional horizontal, finite sides, optional vertical.
    pub sides: Vec<Side>,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn build_polygon(op: &Operator) -> NewtonPolygon {
    let generators: Vec<Generator> =
        op.terms().keys().map(|&(j, a)| Generator { point: Point { x: (j + a) as i64, y: -(j as i64) }, j, alpha: a }).collect();
    let mut pts: Vec<Point> = generators.iter().map(|g| g.point).collect();
    pts.sort();
    pts.dedup();
    // bottom: min y, then max x; right: max x, then min y
    let bottom = *pts.iter().min_by(|a, b| a.y.cmp(&b.y).then(b.x.cmp(&a.x))).unwrap();
    let right = *pts.iter().min_by(|a, b| b.x.cmp(&a.x).then(a.y.cmp(&b.y))).unwrap();
    // lower hull (Andrew), then keep the stretch with positive finite slopes
    let mut hull: Vec<Point> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let start = hull.iter().position(|&p| p == bottom).expect("bottom vertex on lower hull");
    let end = hull.iter().position(|&p| p == right).expect("right vertex on lower hull");
    let vertices: Vec<Point> = hull[start..=end].to_vec();

    let on_line = |a: Point, b: Point| -> Vec<(u32, u32)> {
        let mut c: Vec<(u32, u32)> = generators
            .iter()
            .filter(|g| cross(a, b, g.point) == 0 && g.point.x >= a.x && g.point.x <= b.x)
            .map(|g| (g.j, g.alpha))
            .collect();
        c.sort();
        c
    };

    let mut sides = Vec::new();
    let jmax = generators.iter().map(|g| g.j).max().unwrap();
    let bottom_terms: Vec<(u32, u32)> = generators.iter().filter(|g| g.j == jmax).map(|g| (g.j, g.alpha)).collect();
    if bottom_terms.len() >= 2 {
        let minx = generators.iter().filter(|g| g.j == jmax).map(|g| g.point.x).min().unwrap();
        let mut c = bottom_terms;
        c.sort();
        sides.push(Side { kind: SideKind::Horizontal, from: Point { x: minx, y: bottom.y }, to: bottom, contributing: c });
    }
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = rat(b.y - a.y, b.x - a.x);
        let s = rat(b.x - a.x, b.y - a.y);
        sides.push(Side { kind: SideKind::Finite { slope, s }, from: a, to: b, contributing: on_line(a, b) });
    }
    let right_terms: Vec<&Generator> = generators.iter().filter(|g| g.point.x == right.x).collect();
    if right_terms.len() >= 2 {
        let maxy = right_terms.iter().map(|g| g.point.y).max().unwrap();
        let mut c: Vec<(u32, u32)> = right_terms.iter().map(|g| (g.j, g.alpha)).collect();
        c.sort();
        sides.push(Side { kind: SideKind::Vertical, from: right, to: Point { x: right.x, y: maxy }, contributing: c });
    }
    NewtonPolygon { generators, vertices, sides }
}

impl NewtonPolygon {
    /// Gevrey indices of the sides with slope in (0, ∞), descending.
    pub fn positive_slopes(&self) -> Vec<BigRational> {
        self.sides
            .iter()
            .filter_map(|s| match &s.kind {
                SideKind::Finite { s, .. } => Some(s.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn has_vertical_side(&self) -> bool {
        self.sides.iter().any(|s| s.kind == SideKind::Vertical)
    }

    /// Side of Gevrey index s (s = 0 is the vertical side), if any.
    pub fn side_for_index(&self, s: &BigRational) -> Option<&Side> {
        self.sides.iter().find(|side| side.gevrey_index().as_ref() == Some(s))
    }

    /// Whether point p lies in conv ∪ Q(generators): some convex combination
    /// of generator points dominates it (x ≤, y ≥).
    pub fn contains(&self, p: Point) -> bool {
        let pts: Vec<Point> = self.generators.iter().map(|g| g.point).collect();
        if pts.iter().any(|q| p.x <= q.x && p.y >= q.y) {
            return true;
        }
        // boundary chain is monotone; check against each chain edge
        for w in self.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            if p.x >= a.x && p.x <= b.x && p.y >= a.y {
                // above or on the edge line (edge goes up-right)
                if cross(a, b, p) >= 0 {
                    return true;
                }
            }
            if p.x < a.x && p.y >= a.y {
                return true;
            }
        }
        false
    }
}

/// Weight (1+s)j + α of a term; the principal part maximizes it.
fn weight(s: &BigRational, j: u32, a: u32) -> BigRational {
    (s + BigRational::one()) * BigRational::from_integer(j.into()) + BigRational::from_integer(a.into())
}

/// Terms of `op` on the supporting line of index s.
pub fn principal_part(op: &Operator, s: &BigRational) -> Result<Operator, PolygonError> {
    if s.is_negative() {
        return Err(PolygonError::InvalidIndex(s.to_string()));
    }
    let best = op.terms().keys().map(|&(j, a)| weight(s, j, a)).max().unwrap();
    Ok(op.restrict(|j, a| weight(s, j, a) == best).expect("maximum is attained"))
}

/// Whether (j+α, −j) lies on the closed segment conv N̊_s.
pub fn on_segment(op: &Operator, s: &BigRational, j: u32, alpha: u32) -> Result<bool, PolygonError> {
    let pp = principal_part(op, s)?;
    let (&(j0, a0), _) = pp.terms().iter().next().unwrap();
    if weight(s, j, alpha) != weight(s, j0, a0) {
        return Ok(false);
    }
    let jlo = pp.terms().keys().map(|k| k.0).min().unwrap();
    let jhi = pp.terms().keys().map(|k| k.0).max().unwrap();
    Ok(j >= jlo && j <= jhi)
}

pub fn require_contact(op: &Operator, s: &BigRational, j: u32, alpha: u32) -> Result<Operator, PolygonError> {
    if !on_segment(op, s, j, alpha)? {
        return Err(PolygonError::NoContact { j, alpha, s: s.to_string() });
    }
    principal_part(op, s)
}

/// Laurent polynomial Σ f_k z^k with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, RationalComplex>,
}

impl LaurentPoly {
    pub fn new(coeffs: BTreeMap<i64, RationalComplex>) -> Self {
        Self { coeffs: coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_pairs(pairs: &[(i64, RationalComplex)]) -> Self {
        let mut m: BTreeMap<i64, RationalComplex> = BTreeMap::new();
        for (e, v) in pairs {
            *m.entry(*e).or_default() += v;
        }
        Self::new(m)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, RationalComplex> {
        &self.coeffs
    }

    pub fn get(&self, e: i64) -> RationalComplex {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, v)| (e + k, v.clone())).collect() }
    }

    pub fn eval_c64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs.iter().map(|(e, v)| v.to_complex64() * z.powi(*e as i32)).sum()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, v)| match e {
                0 => format!("({v})"),
                1 => format!("({v})*z"),
                _ => format!("({v})*z^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// f_s(z) = Σ_{N̊_s} a_{iγ} z^{−i} and f = z^j f_s.
pub fn toeplitz_symbol(op: &Operator, s: &BigRational, j: u32) -> Result<(LaurentPoly, LaurentPoly), PolygonError> {
    let pp = principal_part(op, s)?;
    let fs = LaurentPoly::from_pairs(&pp.terms().iter().map(|(&(i, _), v)| (-(i as i64), v.clone())).collect::<Vec<_>>());
    let f = fs.shift(j as i64);
    Ok((fs, f))
}
