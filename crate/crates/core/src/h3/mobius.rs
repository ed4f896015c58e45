use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use super::{BoundaryPoint, Geodesic, H3Error, UHPoint};

/// Default tolerance for trace-based classification.
pub const CLASSIFY_TOL: f64 = 1e-10;

const DET_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A matrix `[[a, b], [c, d]]` in SL(2, ℂ), read as an element of PSL(2, ℂ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypIsometry {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl HypIsometry {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> HypIsometry {
        HypIsometry { a, b, c, d }
    }

    pub fn identity() -> HypIsometry {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        HypIsometry::new(one, zero, zero, one)
    }

    /// `z ↦ z + τ`.
    pub fn translation(tau: Complex64) -> HypIsometry {
        let one = c(1.0, 0.0);
        HypIsometry::new(one, tau, c(0.0, 0.0), one)
    }

    /// `diag(e^{λ/2}, e^{−λ/2})`: translation by `Re λ` along (0, ∞) with
    /// rotation `Im λ`.
    pub fn diagonal(lambda: Complex64) -> HypIsometry {
        let h = (lambda / 2.0).exp();
        HypIsometry::new(h, c(0.0, 0.0), c(0.0, 0.0), 1.0 / h)
    }

    /// The affine map `z ↦ α z + β`, as `[[√α, β/√α], [0, 1/√α]]`.
    pub fn affine(alpha: Complex64, beta: Complex64) -> HypIsometry {
        let s = alpha.sqrt();
        HypIsometry::new(s, beta / s, c(0.0, 0.0), 1.0 / s)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Rescales by `1/√det` so the determinant is 1.
    pub fn normalized(&self) -> HypIsometry {
        let s = self.det().sqrt();
        HypIsometry::new(self.a / s, self.b / s, self.c / s, self.d / s)
    }

    /// Inverse, assuming determinant 1.
    pub fn inverse(&self) -> HypIsometry {
        HypIsometry::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> HypIsometry {
        HypIsometry::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn pow(&self, n: i64) -> HypIsometry {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = HypIsometry::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `h g h⁻¹`.
    pub fn conjugate_by(&self, h: &HypIsometry) -> HypIsometry {
        *h * *self * h.inverse()
    }

    pub fn max_abs_entry(&self) -> f64 {
        [self.a, self.b, self.c, self.d].iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Entrywise distance to `other`, minimized over the sign ambiguity.
    pub fn dist_psl(&self, other: &HypIsometry) -> f64 {
        let diff = |s: f64| {
            [
                self.a - other.a * s,
                self.b - other.b * s,
                self.c - other.c * s,
                self.d - other.d * s,
            ]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0))
    }

    /// Distance to ±identity.
    pub fn identity_residual(&self) -> f64 {
        self.dist_psl(&HypIsometry::identity())
    }

    /// Action on the Riemann sphere.
    pub fn apply_boundary(&self, z: BoundaryPoint) -> BoundaryPoint {
        match z {
            BoundaryPoint::Infinity => {
                if self.c.norm() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Poincaré extension to upper half-space.
    pub fn apply(&self, p: &UHPoint) -> UHPoint {
        let cz_d = self.c * p.z + self.d;
        let t2 = p.t * p.t;
        let den = cz_d.norm_sqr() + self.c.norm_sqr() * t2;
        let z = ((self.a * p.z + self.b) * cz_d.conj() + self.a * self.c.conj() * t2) / den;
        UHPoint::new(z, p.t / den)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic::new_unchecked(self.apply_boundary(g.p), self.apply_boundary(g.q))
    }
}

impl Mul for HypIsometry {
    type Output = HypIsometry;

    fn mul(self, r: HypIsometry) -> HypIsometry {
        HypIsometry::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

pub fn mobius_apply(g: &HypIsometry, p: &UHPoint) -> UHPoint {
    g.apply(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Complex translation length `a + ib` with `a ≥ 0` and `b ∈ (−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexLength {
    pub a: f64,
    pub b: f64,
}

impl ComplexLength {
    pub fn new(a: f64, b: f64) -> ComplexLength {
        ComplexLength { a, b }
    }

    pub fn as_complex(&self) -> Complex64 {
        c(self.a, self.b)
    }

    /// Reduces an arbitrary complex length `λ` (defined modulo 2πi and
    /// sign) to the normal form.
    pub fn from_complex(lambda: Complex64) -> ComplexLength {
        let lambda = if lambda.re < 0.0 { -lambda } else { lambda };
        let mut b = lambda.im.rem_euclid(2.0 * PI);
        if b > PI {
            b -= 2.0 * PI;
        }
        if lambda.re == 0.0 && b < 0.0 {
            b = -b;
        }
        ComplexLength { a: lambda.re, b }
    }
}

/// `2 acosh(tr/2)` as a complex length, reduced to normal form.
fn length_from_trace(tr: Complex64) -> ComplexLength {
    let half = tr / 2.0;
    // acosh(w) = log(w + √(w−1)√(w+1)), the branch with Re ≥ 0
    let one = c(1.0, 0.0);
    let l = (half + (half - one).sqrt() * (half + one).sqrt()).ln() * 2.0;
    ComplexLength::from_complex(l)
}

pub fn classify_with_tol(
    g: &HypIsometry,
    tol: f64,
) -> Result<(IsometryClass, ComplexLength), H3Error> {
    let det = g.det();
    let scale = g.max_abs_entry().powi(2).max(1.0);
    if (det - 1.0).norm() > DET_TOL * scale {
        return Err(H3Error::DegenerateMatrix(det));
    }
    let tr = g.trace();
    if g.identity_residual() <= tol {
        return Ok((IsometryClass::Identity, ComplexLength::new(0.0, 0.0)));
    }
    if tr.im.abs() < tol && (tr.re.abs() - 2.0).abs() < tol {
        return Ok((IsometryClass::Parabolic, ComplexLength::new(0.0, 0.0)));
    }
    let len = length_from_trace(tr);
    if tr.im.abs() < tol && tr.re.abs() < 2.0 {
        return Ok((IsometryClass::Elliptic, ComplexLength::new(0.0, len.b)));
    }
    Ok((IsometryClass::Loxodromic, len))
}

pub fn classify_and_length(g: &HypIsometry) -> Result<(IsometryClass, ComplexLength), H3Error> {
    classify_with_tol(g, CLASSIFY_TOL)
}

/// Fixed points of a loxodromic element, repelling first.
pub fn axis_endpoints(g: &HypIsometry) -> Result<Geodesic, H3Error> {
    let (class, _) = classify_and_length(g)?;
    if class != IsometryClass::Loxodromic {
        return Err(H3Error::NotLoxodromic);
    }
    if g.c.norm() == 0.0 {
        let finite = BoundaryPoint::Finite(g.b / (g.d - g.a));
        return Ok(if g.a.norm() > g.d.norm() {
            Geodesic::new_unchecked(finite, BoundaryPoint::Infinity)
        } else {
            Geodesic::new_unchecked(BoundaryPoint::Infinity, finite)
        });
    }
    // roots of c z² + (d − a) z − b; z attracts iff |cz + d| > 1
    // stable quadratic formula: no cancellation in either root
    let disc = (g.trace() * g.trace() - 4.0).sqrt();
    let bq = g.d - g.a;
    let big = if (bq + disc).norm() >= (bq - disc).norm() { bq + disc } else { bq - disc };
    let q = -big / 2.0;
    let z1 = q / g.c;
    let z2 = -g.b / q;
    let (rep, att) = if (g.c * z1 + g.d).norm() > 1.0 { (z2, z1) } else { (z1, z2) };
    Ok(Geodesic::new_unchecked(BoundaryPoint::Finite(rep), BoundaryPoint::Finite(att)))
}

/// Translation by `len` along a geodesic, from its first endpoint
/// towards its second.
pub fn translation_along_axis(axis: &Geodesic, len: Complex64) -> Result<HypIsometry, H3Error> {
    let m = super::standardizing_map(axis)?;
    Ok(HypIsometry::diagonal(len).conjugate_by(&m.inverse()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::h3::dist;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_isometry(rng: &mut ChaCha8Rng) -> HypIsometry {
        let mut e = || c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        HypIsometry::new(e(), e(), e(), e()).normalized()
    }

    #[test]
    fn action_examples() {
        let p = UHPoint::new(c(0.3, -0.2), 1.7);
        let q = HypIsometry::identity().apply(&p);
        assert!((q.z - p.z).norm() < 1e-15 && (q.t - p.t).abs() < 1e-15);
        let moved = HypIsometry::translation(c(1.0, 0.0)).apply(&UHPoint::on_axis(5.0));
        assert_eq!(moved, UHPoint::new(c(1.0, 0.0), 5.0));
    }

    #[test]
    fn isometry_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = random_isometry(&mut rng);
            let p = UHPoint::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), rng.gen_range(0.3..2.0));
            let q = UHPoint::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), rng.gen_range(0.3..2.0));
            let d0 = dist(&p, &q);
            let d1 = dist(&g.apply(&p), &g.apply(&q));
            assert!((d0 - d1).abs() < 1e-10, "{d0} vs {d1}");
        }
    }

    #[test]
    fn classification_examples() {
        let (cls, len) = classify_and_length(&HypIsometry::translation(c(1.0, 0.0))).unwrap();
        assert_eq!(cls, IsometryClass::Parabolic);
        assert_eq!(len, ComplexLength::new(0.0, 0.0));
        let lam = c(0.3, 0.2);
        let (cls, len) = classify_and_length(&HypIsometry::diagonal(lam)).unwrap();
        assert_eq!(cls, IsometryClass::Loxodromic);
        assert!((len.as_complex() - lam).norm() < 1e-14);
        let (cls, len) = classify_and_length(&HypIsometry::diagonal(c(0.0, 1.0))).unwrap();
        assert_eq!(cls, IsometryClass::Elliptic);
        assert!((len.b - 1.0).abs() < 1e-14);
        assert_eq!(classify_and_length(&HypIsometry::identity().neg()).unwrap().0, IsometryClass::Identity);
        let bad = HypIsometry::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(classify_and_length(&bad), Err(H3Error::DegenerateMatrix(_))));
    }

    #[test]
    fn trace_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let g = random_isometry(&mut rng);
            let (_, len) = classify_and_length(&g).unwrap();
            let tr = g.trace();
            let lhs = (len.as_complex() / 2.0).cosh() * 2.0;
            assert!((lhs - tr).norm().min((lhs + tr).norm()) < 1e-9);
            assert!(len.a >= 0.0 && len.b > -PI && len.b <= PI);
        }
    }

    #[test]
    fn axis_examples() {
        let g = HypIsometry::diagonal(c((4.0f64).ln(), 0.0));
        let ax = axis_endpoints(&g).unwrap();
        assert_eq!(ax.p, BoundaryPoint::Finite(c(0.0, 0.0)));
        assert_eq!(ax.q, BoundaryPoint::Infinity);
        let v = HypIsometry::affine(c(0.9, 0.3).exp(), c(0.2, 1.1));
        let ax = axis_endpoints(&v).unwrap();
        let expected = c(0.2, 1.1) / (1.0 - c(0.9, 0.3).exp());
        let ends = [ax.p, ax.q];
        assert!(ends.contains(&BoundaryPoint::Infinity));
        assert!(ends.iter().any(|e| matches!(e, BoundaryPoint::Finite(z) if (z - expected).norm() < 1e-12)));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g = random_isometry(&mut rng);
            let ax = axis_endpoints(&g).unwrap();
            for e in [ax.p, ax.q] {
                if let BoundaryPoint::Finite(z) = e {
                    let gz = (g.a * z + g.b) / (g.c * z + g.d);
                    assert!((gz - z).norm() < 1e-10 * z.norm().max(1.0));
                }
            }
            // the second endpoint attracts
            let (_, l_g) = classify_and_length(&g).unwrap();
            let shift = translation_along_axis(&ax, l_g.as_complex()).unwrap();
            assert!(shift.dist_psl(&g) < 1e-8 * g.max_abs_entry().max(1.0), "{shift:?} vs {g:?}");
        }
    }
}
