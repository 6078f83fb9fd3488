//! Exact planar convex hulls of filtration data.

use std::fmt;

use num_traits::{Signed, Zero};

use super::InvariantError;
use crate::ratpoly::{format_rational, Rational};
use crate::sheafmodel::UnweightedFiltration;

pub type Point = (Rational, Rational);

/// Convex polygon with counterclockwise vertices, no collinear vertex, starting
/// at the vertex with smallest `(y, x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polytope2 {
    vertices: Vec<Point>,
}

impl Polytope2 {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn contains(&self, p: &Point) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => v[0] == *p,
            2 => cross(&v[0], &v[1], p).is_zero() && within(&v[0], &v[1], p),
            n => (0..n).all(|k| !cross(&v[k], &v[(k + 1) % n], p).is_negative()),
        }
    }
}

impl fmt::Debug for Polytope2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|(x, y)| format!("({}, {})", format_rational(x), format_rational(y)))
            .collect();
        write!(f, "Polytope2[{}]", pts.join(", "))
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn within(a: &Point, b: &Point, p: &Point) -> bool {
    let between = |u: &Rational, v: &Rational, t: &Rational| (u.min(v) <= t) && (t <= u.max(v));
    between(&a.0, &b.0, &p.0) && between(&a.1, &b.1, &p.1)
}

/// Convex hull of a finite point set.
pub fn convex_hull(points: &[Point]) -> Polytope2 {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return Polytope2 { vertices: pts };
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut hull = lower;
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    let start = (0..hull.len())
        .min_by(|&a, &b| (&hull[a].1, &hull[a].0).cmp(&(&hull[b].1, &hull[b].0)))
        .unwrap_or(0);
    hull.rotate_left(start);
    Polytope2 { vertices: hull }
}

/// Hull of the origin and `(-a_i(G_(m)), rk(G_(m)))` over the chain members.
pub fn polytope(f: &UnweightedFiltration, i: u32) -> Result<Polytope2, InvariantError> {
    let lat = f.lattice();
    let dim = lat.dimension();
    if i >= dim {
        return Err(InvariantError::BadIndex { index: i, dim });
    }
    let mut pts = vec![(Rational::zero(), Rational::zero())];
    for &g in f.chain() {
        let s = lat.stats(g);
        pts.push((-s.a(i).clone(), s.rank().clone()));
    }
    Ok(convex_hull(&pts))
}

/// Whether `p` lies inside `q`.
pub fn polytope_subset(p: &Polytope2, q: &Polytope2) -> bool {
    p.vertices.iter().all(|v| q.contains(v))
}
