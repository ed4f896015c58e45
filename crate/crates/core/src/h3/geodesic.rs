use num_complex::Complex64;
use serde::Serialize;

use super::{dist, minkowski_inner, H3Error, HypIsometry, UHPoint};

/// A point of ∂ℍ³ = ℂ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }
}

/// An oriented geodesic from `p` to `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Geodesic {
    pub p: BoundaryPoint,
    pub q: BoundaryPoint,
}

impl Geodesic {
    pub fn new(p: BoundaryPoint, q: BoundaryPoint) -> Result<Geodesic, H3Error> {
        if p == q {
            return Err(H3Error::DegenerateGeodesic);
        }
        Ok(Geodesic { p, q })
    }

    pub(crate) fn new_unchecked(p: BoundaryPoint, q: BoundaryPoint) -> Geodesic {
        Geodesic { p, q }
    }

    /// The vertical geodesic from 0 to ∞.
    pub fn vertical() -> Geodesic {
        Geodesic {
            p: BoundaryPoint::Finite(Complex64::new(0.0, 0.0)),
            q: BoundaryPoint::Infinity,
        }
    }

    pub fn through_finite(p: Complex64, q: Complex64) -> Result<Geodesic, H3Error> {
        Geodesic::new(BoundaryPoint::Finite(p), BoundaryPoint::Finite(q))
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic { p: self.q, q: self.p }
    }
}

/// The geodesic through two points, oriented from `x` towards `y`.
///
/// Points very close to the boundary are handled without cancellation, so
/// this stays accurate when `x` or `y` sits at a tiny height.
pub fn geodesic_through(x: &UHPoint, y: &UHPoint) -> Result<Geodesic, H3Error> {
    let dz = y.z - x.z;
    let d = dz.norm();
    if d == 0.0 {
        return match x.t.partial_cmp(&y.t) {
            Some(std::cmp::Ordering::Less) => Ok(Geodesic {
                p: BoundaryPoint::Finite(x.z),
                q: BoundaryPoint::Infinity,
            }),
            Some(std::cmp::Ordering::Greater) => Ok(Geodesic {
                p: BoundaryPoint::Infinity,
                q: BoundaryPoint::Finite(x.z),
            }),
            _ => Err(H3Error::CoincidentPoints),
        };
    }
    let u = dz / d;
    // the center x.z + s·u is equidistant from both points
    let s = (d * d + y.t * y.t - x.t * x.t) / (2.0 * d);
    let r = s.hypot(x.t);
    let (back, ahead) = if s >= 0.0 {
        (-x.t * x.t / (s + r), s + r)
    } else {
        (s - r, x.t * x.t / (r - s))
    };
    Ok(Geodesic {
        p: BoundaryPoint::Finite(x.z + u * back),
        q: BoundaryPoint::Finite(x.z + u * ahead),
    })
}

/// An isometry taking `γ.p` to 0 and `γ.q` to ∞.
pub fn standardizing_map(g: &Geodesic) -> Result<HypIsometry, H3Error> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match (g.p, g.q) {
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
            if p == q {
                return Err(H3Error::DegenerateGeodesic);
            }
            let s = (p - q).sqrt();
            Ok(HypIsometry::new(one / s, -p / s, one / s, -q / s))
        }
        (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => {
            Ok(HypIsometry::new(one, -p, zero, one))
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(q)) => {
            Ok(HypIsometry::new(zero, i, i, -i * q))
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(H3Error::DegenerateGeodesic),
    }
}

/// Nearest point of `γ` to `p`.
pub fn project_to_geodesic(p: &UHPoint, g: &Geodesic) -> Result<UHPoint, H3Error> {
    let m = standardizing_map(g)?;
    let q = m.apply(p);
    let foot = UHPoint::on_axis(q.z.norm().hypot(q.t));
    Ok(m.inverse().apply(&foot))
}

/// The shortest segment between two geodesics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Perpendicular {
    pub foot1: UHPoint,
    pub foot2: UHPoint,
    pub length: f64,
}

/// Endpoints of `g2` after the standardizing map of `g1`; fails when the
/// two geodesics share an endpoint.
fn relative_endpoints(g1: &Geodesic, g2: &Geodesic) -> Result<(HypIsometry, Complex64, Complex64), H3Error> {
    let m = standardizing_map(g1)?;
    let pp = m.apply_boundary(g2.p).finite().ok_or(H3Error::NoCommonPerpendicular)?;
    let qq = m.apply_boundary(g2.q).finite().ok_or(H3Error::NoCommonPerpendicular)?;
    if pp.norm() == 0.0 || qq.norm() == 0.0 {
        return Err(H3Error::NoCommonPerpendicular);
    }
    Ok((m, pp, qq))
}

fn acosh_c(w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (w + (w - one).sqrt() * (w + one).sqrt()).ln()
}

/// Distance between two geodesics (0 when they meet or are asymptotic).
pub fn geodesic_distance(g1: &Geodesic, g2: &Geodesic) -> Result<f64, H3Error> {
    match relative_endpoints(g1, g2) {
        Ok((_, p, q)) => Ok(acosh_c((p + q) / (q - p)).re.abs()),
        Err(H3Error::NoCommonPerpendicular) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Common perpendicular of two geodesics that neither meet nor share an
/// endpoint. `foot1` lies on `g1`.
pub fn common_perpendicular(g1: &Geodesic, g2: &Geodesic) -> Result<Perpendicular, H3Error> {
    let (m, p, q) = relative_endpoints(g1, g2)?;
    let length = acosh_c((p + q) / (q - p)).re.abs();
    if length < 1e-14 {
        return Err(H3Error::NoCommonPerpendicular);
    }
    let foot = UHPoint::on_axis((p.norm() * q.norm()).sqrt());
    let g2_std = Geodesic::through_finite(p, q)?;
    let other = project_to_geodesic(&foot, &g2_std)?;
    let back = m.inverse();
    Ok(Perpendicular { foot1: back.apply(&foot), foot2: back.apply(&other), length })
}

/// Angle at `p` between the segments towards `prev` and `next`, via unit
/// tangents in the hyperboloid model.
pub fn vertex_angle(prev: &UHPoint, p: &UHPoint, next: &UHPoint) -> Result<f64, H3Error> {
    if dist(prev, p) < 1e-14 || dist(next, p) < 1e-14 {
        return Err(H3Error::CoincidentPoints);
    }
    // move p to (0, 1), where x = (1, 0, 0, 0) and the tangent formula has
    // no cancellation
    let shift = |q: &UHPoint| UHPoint::new((q.z - p.z) / p.t, q.t / p.t);
    let x = [1.0, 0.0, 0.0, 0.0];
    let tangent = |q: &UHPoint| {
        let y = shift(q).to_hyperboloid().x;
        let s = minkowski_inner(&y, &x);
        let v: [f64; 4] = std::array::from_fn(|i| y[i] + s * x[i]);
        let n = (s * s - 1.0).sqrt();
        v.map(|c| c / n)
    };
    let (m1, m2) = (tangent(prev), tangent(next));
    let cos = minkowski_inner(&m1, &m2).clamp(-1.0, 1.0);
    // both tangents are spatial at x; the cross product gives the sine
    // without the loss of arccos near 0 and π
    let (u, v) = ([m1[1], m1[2], m1[3]], [m2[1], m2[2], m2[3]]);
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let sin = cross.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(sin.atan2(cos))
}
