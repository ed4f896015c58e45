//! Piecewise geodesics in ℍ³: construction, validation against (B, α)
//! bounds, Hausdorff distance to the chord, and projections to a geodesic.
//!
//! A path is stored as a chain of frames. Vertex `i` has a chart in which
//! it sits at `o = (0, 1)` and the outgoing segment runs straight up; the
//! step `S_i` maps chart `i + 1` into chart `i`. All measurements are made
//! in the chart of a nearby vertex, so long paths never need coordinates
//! far from `o`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::h3::{
    dist, geodesic_through, standardizing_map, vertex_angle, BoundaryPoint, Geodesic, H3Error,
    HypIsometry, UHPoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PwGeoError {
    #[error("a piecewise geodesic needs at least two vertices")]
    TooShort,
    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("non-finite distance; the path is beyond double precision")]
    NonFinite,
    #[error("segment {0} has length {1}, above the supported maximum")]
    SegmentTooLong(usize, f64),
    #[error(transparent)]
    Geometry(#[from] H3Error),
}

const ORIGIN: UHPoint = UHPoint { z: Complex64 { re: 0.0, im: 0.0 }, t: 1.0 };

fn lift(len: f64) -> HypIsometry {
    HypIsometry::diagonal(Complex64::new(len, 0.0))
}

/// Rotation about `o` turning the upward direction by `chi`, followed by a
/// twist `psi` about the vertical axis.
fn turn(chi: f64, psi: f64) -> HypIsometry {
    let (s, c) = (chi / 2.0).sin_cos();
    let bend = HypIsometry::new(
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(c, 0.0),
    );
    HypIsometry::diagonal(Complex64::new(0.0, psi)) * bend
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseGeodesic {
    /// Chart of vertex 0.
    base: HypIsometry,
    /// `S_i`, one per segment.
    steps: Vec<HypIsometry>,
    lengths: Vec<f64>,
}

impl PiecewiseGeodesic {
    pub fn from_vertices(vertices: &[UHPoint]) -> Result<PiecewiseGeodesic, PwGeoError> {
        if vertices.len() < 2 {
            return Err(PwGeoError::TooShort);
        }
        let mut charts = Vec::with_capacity(vertices.len());
        let mut lengths = Vec::with_capacity(vertices.len() - 1);
        for (i, w) in vertices.windows(2).enumerate() {
            let len = dist(&w[0], &w[1]);
            if len < 1e-14 {
                return Err(PwGeoError::CoincidentVertices(i, i + 1));
            }
            let g = geodesic_through(&w[0], &w[1])?;
            let m = standardizing_map(&g)?;
            let h = m.apply(&w[0]).t;
            charts.push(m.inverse() * lift(h.ln()));
            lengths.push(len);
        }
        let last = *charts.last().unwrap() * lift(*lengths.last().unwrap());
        charts.push(last);
        let steps = charts.windows(2).map(|c| c[0].inverse() * c[1]).collect();
        Ok(PiecewiseGeodesic { base: charts[0], steps, lengths })
    }

    /// A path from segment lengths and, at each interior vertex, the
    /// vertex angle `θ` and twist `ψ`.
    pub fn from_turns(
        base: HypIsometry,
        lengths: &[f64],
        turns: &[(f64, f64)],
    ) -> Result<PiecewiseGeodesic, PwGeoError> {
        if lengths.is_empty() {
            return Err(PwGeoError::TooShort);
        }
        assert_eq!(turns.len() + 1, lengths.len(), "one turn per interior vertex");
        let steps = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| match turns.get(i) {
                Some(&(theta, psi)) => lift(len) * turn(PI - theta, psi),
                None => lift(len),
            })
            .collect();
        Ok(PiecewiseGeodesic { base, steps, lengths: lengths.to_vec() })
    }

    pub fn segment_count(&self) -> usize {
        self.steps.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Chart of vertex `i` in global coordinates.
    pub fn chart(&self, i: usize) -> HypIsometry {
        self.steps[..i].iter().fold(self.base, |acc, s| acc * *s)
    }

    /// Vertices in global coordinates. Loses precision for long paths.
    pub fn vertices(&self) -> Vec<UHPoint> {
        (0..=self.segment_count()).map(|i| self.chart(i).apply(&ORIGIN)).collect()
    }

    /// The same path moved by `g`.
    pub fn transformed(&self, g: &HypIsometry) -> PiecewiseGeodesic {
        PiecewiseGeodesic { base: *g * self.base, ..self.clone() }
    }

    /// Interior vertex angles, each measured in its own chart.
    pub fn angles(&self) -> Vec<f64> {
        (1..self.segment_count())
            .map(|i| {
                let prev = self.steps[i - 1].inverse().apply(&ORIGIN);
                let next = self.steps[i].apply(&ORIGIN);
                vertex_angle(&prev, &ORIGIN, &next).unwrap_or(0.0)
            })
            .collect()
    }

    pub fn min_length(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Minimum interior angle; π when there is no interior vertex.
    pub fn min_angle(&self) -> f64 {
        self.angles().into_iter().fold(PI, f64::min)
    }

    /// Vertex `j` seen in the chart of vertex `i`.
    #[cfg(test)]
    fn vertex_in_chart(&self, i: usize, j: usize) -> UHPoint {
        let (lo, hi) = (i.min(j), i.max(j));
        let m = self.steps[lo..hi].iter().fold(HypIsometry::identity(), |acc, s| acc * *s);
        if j >= i { m.apply(&ORIGIN) } else { m.inverse().apply(&ORIGIN) }
    }

    /// The chord from the first to the last vertex.
    fn chord_line(&self) -> Line {
        let k = self.segment_count();
        let mut backward = Vec::with_capacity(k + 1);
        let mut acc = Scaled::identity();
        backward.push(acc);
        for s in &self.steps {
            acc = Scaled::mul(&Scaled::from(s.inverse()), &acc);
            backward.push(acc);
        }
        let mut forward = vec![Scaled::identity(); k + 1];
        for i in (0..k).rev() {
            forward[i] = Scaled::mul(&Scaled::from(self.steps[i]), &forward[i + 1]);
        }
        Line::Chord { backward, forward }
    }

    /// A global geodesic, in each chart.
    fn geodesic_in_charts(&self, beta: &Geodesic) -> Vec<Geodesic> {
        let mut chart = self.base;
        let mut out = Vec::with_capacity(self.segment_count() + 1);
        out.push(chart.inverse().apply_geodesic(beta));
        for s in &self.steps {
            chart = chart * *s;
            out.push(chart.inverse().apply_geodesic(beta));
        }
        out
    }
}

/// A geodesic known in every vertex chart.
enum Line {
    /// The chord, kept as the maps from each chart to vertex 0 and to the
    /// last vertex. The far endpoints are never written as points of ℍ³.
    Chord { backward: Vec<Scaled>, forward: Vec<Scaled> },
    /// A global geodesic moved into each chart.
    Fixed(Vec<Geodesic>),
}

impl Line {
    /// The line in the chart `chart_i · r`, a point of segment `i`, where
    /// `r_next = S_i⁻¹ r`. Each end of the chord is reached from the vertex
    /// chart on the far side, so moving to the sample only contracts the
    /// rounding error in that end.
    fn on_segment(&self, i: usize, r: &HypIsometry, r_next: &HypIsometry, near_next: bool) -> Result<Geodesic, PwGeoError> {
        match self {
            Line::Fixed(betas) if near_next => Ok(r_next.inverse().apply_geodesic(&betas[i + 1])),
            Line::Fixed(betas) => Ok(r.inverse().apply_geodesic(&betas[i])),
            Line::Chord { backward, forward } => chord_between(
                &Scaled::mul(&Scaled::from(r.inverse()), &backward[i]),
                &Scaled::mul(&Scaled::from(r_next.inverse()), &forward[i + 1]),
            ),
        }
    }

    /// The line in the chart of vertex `j`.
    fn at_vertex(&self, j: usize) -> Result<Geodesic, PwGeoError> {
        match self {
            Line::Fixed(betas) => Ok(betas[j]),
            Line::Chord { backward, forward } => chord_between(&backward[j], &forward[j]),
        }
    }

    /// Takes `o` to the foot of the perpendicular from vertex `j` and the
    /// upward vertical axis onto the line.
    fn foot_frame(&self, j: usize) -> Result<HypIsometry, PwGeoError> {
        let g = self.at_vertex(j)?;
        let pos = position_on(&ORIGIN, &g)?;
        Ok(standardizing_map(&g)?.inverse() * lift(pos))
    }
}

type Herm = [[Complex64; 2]; 2];

/// `m` up to a positive scalar, kept at unit size.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    m: HypIsometry,
    /// `ln |det m|`.
    log_det: f64,
}

impl Scaled {
    fn identity() -> Scaled {
        Scaled { m: HypIsometry::identity(), log_det: 0.0 }
    }

    fn from(g: HypIsometry) -> Scaled {
        Scaled::rescale(g, g.det().norm().ln())
    }

    fn rescale(m: HypIsometry, log_det: f64) -> Scaled {
        let s = m.max_abs_entry();
        let inv = Complex64::new(1.0 / s, 0.0);
        Scaled {
            m: HypIsometry::new(m.a * inv, m.b * inv, m.c * inv, m.d * inv),
            log_det: log_det - 2.0 * s.ln(),
        }
    }

    fn mul(x: &Scaled, y: &Scaled) -> Scaled {
        Scaled::rescale(x.m * y.m, x.log_det + y.log_det)
    }

    /// `m m*` and its determinant.
    fn gram(&self) -> (Herm, f64) {
        let HypIsometry { a, b, c, d } = self.m;
        let p00 = Complex64::new(a.norm_sqr() + b.norm_sqr(), 0.0);
        let p11 = Complex64::new(c.norm_sqr() + d.norm_sqr(), 0.0);
        let p01 = a * c.conj() + b * d.conj();
        ([[p00, p01], [p01.conj(), p11]], (2.0 * self.log_det).exp())
    }
}

/// The geodesic through `x(o)` and `y(o)`, oriented towards `y(o)`. Its
/// ends are the null combinations of the Hermitian matrices `x x*` and
/// `y y*`.
fn chord_between(x: &Scaled, y: &Scaled) -> Result<Geodesic, PwGeoError> {
    let (p, dp) = x.gram();
    let (q, dq) = y.gram();
    let c = p[0][0].re * q[1][1].re + p[1][1].re * q[0][0].re - 2.0 * (p[0][1] * q[1][0]).re;
    let m = -0.5 * (c + (c * c - 4.0 * dp * dq).max(0.0).sqrt());
    if m == 0.0 {
        return Err(H3Error::DegenerateGeodesic.into());
    }
    let back = null_to_boundary(&combine(&p, &q, dp / m));
    let front = null_to_boundary(&combine(&q, &p, dq / m));
    Ok(Geodesic::new(back, front)?)
}

fn combine(x: &Herm, y: &Herm, mu: f64) -> Herm {
    let mut out = *x;
    for (row, yrow) in out.iter_mut().zip(y) {
        for (v, w) in row.iter_mut().zip(yrow) {
            *v += w * mu;
        }
    }
    out
}

/// Boundary points beyond this are taken to be `∞`; seen from a chart the
/// chord passes near, the difference is far below rounding.
const FAR_BOUNDARY: f64 = 1e150;

/// The point of `ℂ ∪ {∞}` of a rank-one Hermitian matrix `±v v*`.
fn null_to_boundary(e: &Herm) -> BoundaryPoint {
    if e[1][1].norm() >= e[0][0].norm() {
        BoundaryPoint::Finite(e[0][1] / e[1][1])
    } else {
        let w = e[1][0] / e[0][0];
        let r = w.norm();
        // dividing twice by |w| avoids underflow in |w|²
        let z = w.conj() / r / r;
        if r == 0.0 || !(z.norm() < FAR_BOUNDARY) {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(z)
        }
    }
}

/// Distance from `p` to a geodesic.
fn dist_to_geodesic(p: &UHPoint, g: &Geodesic) -> Result<f64, H3Error> {
    let q = standardizing_map(g)?.apply(p);
    Ok((q.z.norm() / q.t).asinh())
}

/// Signed position of the projection of `p` along `g`, in arclength from
/// the base point of `g`.
fn position_on(p: &UHPoint, g: &Geodesic) -> Result<f64, H3Error> {
    let q = standardizing_map(g)?.apply(p);
    Ok(q.z.norm().hypot(q.t).ln())
}

/// Distance from `p` to the segment from `o` straight up to height `e^len`.
fn dist_to_vertical_segment(p: &UHPoint, len: f64) -> f64 {
    let h = p.z.norm().hypot(p.t).ln();
    dist(p, &UHPoint::on_axis(h.clamp(0.0, len).exp()))
}

pub fn validate(path: &PiecewiseGeodesic, b: f64, alpha: f64) -> bool {
    path.lengths.iter().all(|&l| l >= b) && path.angles().iter().all(|&a| a >= alpha)
}

/// Feet of the vertices on `line` as frames (see [`Line::foot_frame`]),
/// and the signed displacement from each foot to the next.
fn feet(path: &PiecewiseGeodesic, line: &Line) -> Result<(Vec<HypIsometry>, Vec<f64>), PwGeoError> {
    let frames = (0..=path.segment_count()).map(|j| line.foot_frame(j)).collect::<Result<Vec<_>, _>>()?;
    let signed = frames
        .windows(2)
        .zip(&path.steps)
        .map(|(f, s)| {
            // both frames put the line on the vertical axis, so g(o) sits on it
            let g = f[0].inverse() * *s * f[1];
            (g.a.norm().hypot(g.b.norm()) / g.c.norm().hypot(g.d.norm())).ln()
        })
        .collect();
    Ok((frames, signed))
}

/// Segments longer than this would push neighbouring charts past the
/// range of `f64`.
pub const MAX_SEGMENT_LENGTH: f64 = 250.0;

/// Supremum over the path of the distance to the part of `line` between
/// the feet of the two endpoints. Nearest-point projection onto that
/// segment maps the path onto it, so this is also the symmetric Hausdorff
/// distance. Every sample is measured in a chart centred on it.
fn hausdorff_along(path: &PiecewiseGeodesic, line: &Line, samples: usize) -> Result<f64, PwGeoError> {
    if let Some(i) = path.lengths.iter().position(|&l| l > MAX_SEGMENT_LENGTH) {
        return Err(PwGeoError::SegmentTooLong(i, path.lengths[i]));
    }
    let samples = samples.max(2);
    let (_, signed) = feet(path, line)?;
    // position of each foot along the line, from the foot of vertex 0
    let mut foot_pos = vec![0.0];
    for l in &signed {
        foot_pos.push(foot_pos.last().unwrap() + l);
    }
    let end = *foot_pos.last().unwrap();
    let (lo, hi) = (end.min(0.0), end.max(0.0));
    let mut worst: f64 = 0.0;
    for (i, &len) in path.lengths.iter().enumerate() {
        for j in 0..=samples {
            let s = len * j as f64 / samples as f64;
            let r = lift(s);
            let r_next = path.steps[i].inverse() * r;
            let near_next = 2 * j > samples;
            let g = line.on_segment(i, &r, &r_next, near_next)?;
            let (v, base) = if near_next { (r_next, i + 1) } else { (r, i) };
            let vertex = v.inverse().apply(&ORIGIN);
            let u = foot_pos[base] + position_on(&ORIGIN, &g)? - position_on(&vertex, &g)?;
            let over = (lo - u).max(u - hi).max(0.0);
            let perp = dist_to_geodesic(&ORIGIN, &g)?;
            let d = (perp.cosh() * over.cosh()).acosh();
            if !(d.is_finite() && u.is_finite()) {
                return Err(PwGeoError::NonFinite);
            }
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Symmetric Hausdorff distance between the path and the geodesic segment
/// joining its endpoints, sampled `samples_per_segment` times per segment.
pub fn chord_hausdorff(path: &PiecewiseGeodesic, samples_per_segment: usize) -> Result<f64, PwGeoError> {
    hausdorff_along(path, &path.chord_line(), samples_per_segment)
}

/// Hausdorff distance between the path and the part of `beta` between the
/// projections of its endpoints.
pub fn hausdorff_to(path: &PiecewiseGeodesic, beta: &Geodesic, samples_per_segment: usize) -> Result<f64, PwGeoError> {
    hausdorff_along(path, &Line::Fixed(path.geodesic_in_charts(beta)), samples_per_segment)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentProjections {
    /// `d(p_β(x_i), p_β(x_{i+1}))` for each segment.
    pub per_segment: Vec<f64>,
    /// Signed displacement along β of each segment's projection.
    pub signed: Vec<f64>,
    /// `d(p_β(x_0), p_β(x_k))`.
    pub total: f64,
}

/// Projections onto a global geodesic. Charts are reached through global
/// coordinates, so this is only accurate for paths of moderate total
/// length; use [`chord_projections`] for long paths.
pub fn segment_projections(path: &PiecewiseGeodesic, beta: &Geodesic) -> Result<SegmentProjections, PwGeoError> {
    projections_along(path, &Line::Fixed(path.geodesic_in_charts(beta)))
}

/// Projections onto the chord, computed chart by chart.
pub fn chord_projections(path: &PiecewiseGeodesic) -> Result<SegmentProjections, PwGeoError> {
    projections_along(path, &path.chord_line())
}

fn projections_along(path: &PiecewiseGeodesic, line: &Line) -> Result<SegmentProjections, PwGeoError> {
    let (_, signed) = feet(path, line)?;
    let per_segment = signed.iter().map(|s| s.abs()).collect();
    let total = signed.iter().sum::<f64>().abs();
    Ok(SegmentProjections { per_segment, signed, total })
}

/// A random path with `segments` segments of length in `[b, 2b]`, vertex
/// angles uniform in `[alpha, π]` and uniform twists.
pub fn random_path(rng: &mut impl Rng, segments: usize, b: f64, alpha: f64) -> PiecewiseGeodesic {
    let lengths: Vec<f64> = (0..segments).map(|_| b * (1.0 + rng.gen::<f64>())).collect();
    let turns: Vec<(f64, f64)> = (1..segments)
        .map(|_| {
            let theta = alpha + (PI - alpha) * rng.gen::<f64>();
            (theta, 2.0 * PI * rng.gen::<f64>())
        })
        .collect();
    PiecewiseGeodesic::from_turns(HypIsometry::identity(), &lengths, &turns)
        .expect("at least one segment")
}

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_SEGMENTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub b: f64,
    pub alpha: f64,
    pub max_hausdorff: f64,
    pub mean_hausdorff: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathConstantsReport {
    pub xi: f64,
    pub trials: usize,
    pub segments: usize,
    pub samples_per_segment: usize,
    pub seed: u64,
    pub b_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub cells: Vec<GridCell>,
    /// Passing cells not dominated by another passing cell with smaller or
    /// equal `B` and `α`.
    pub pareto: Vec<GridCell>,
    /// Per `B`: whether the maximum is nonincreasing in `α` within 10%.
    pub monotone_in_alpha: Vec<bool>,
}

/// Grid search for `(B, α)` such that random `(B, α)` paths stay within
/// `xi` of their chords.
///
/// Trial `j` uses the same random stream in every cell, so neighboring
/// cells differ only through `B` and `α`.
pub fn empirical_constants(
    xi: f64,
    b_grid: &[f64],
    alpha_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<PathConstantsReport, PwGeoError> {
    empirical_constants_with(xi, b_grid, alpha_grid, trials, seed, DEFAULT_SEGMENTS, DEFAULT_SAMPLES)
}

pub fn empirical_constants_with(
    xi: f64,
    b_grid: &[f64],
    alpha_grid: &[f64],
    trials: usize,
    seed: u64,
    segments: usize,
    samples: usize,
) -> Result<PathConstantsReport, PwGeoError> {
    assert!(!b_grid.is_empty() && !alpha_grid.is_empty(), "grids must be nonempty");
    let mut cells = Vec::new();
    for &b in b_grid {
        for &alpha in alpha_grid {
            let values = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(trial as u64);
                    let path = random_path(&mut rng, segments, b, alpha);
                    chord_hausdorff(&path, samples)
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let max = values.iter().copied().fold(0.0, f64::max);
            let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
            cells.push(GridCell { b, alpha, max_hausdorff: max, mean_hausdorff: mean, passed: max < xi });
        }
    }
    let pareto = cells
        .iter()
        .filter(|c| c.passed)
        .filter(|c| {
            !cells.iter().any(|o| {
                o.passed && o.b <= c.b && o.alpha <= c.alpha && (o.b < c.b || o.alpha < c.alpha)
            })
        })
        .cloned()
        .collect();
    let monotone_in_alpha = b_grid
        .iter()
        .enumerate()
        .map(|(bi, _)| {
            let row = &cells[bi * alpha_grid.len()..(bi + 1) * alpha_grid.len()];
            row.windows(2).all(|w| {
                let (lo, hi) = if w[0].alpha <= w[1].alpha { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
                hi.max_hausdorff <= 1.1 * lo.max_hausdorff + 1e-9
            })
        })
        .collect();
    Ok(PathConstantsReport {
        xi,
        trials,
        segments,
        samples_per_segment: samples,
        seed,
        b_grid: b_grid.to_vec(),
        alpha_grid: alpha_grid.to_vec(),
        cells,
        pareto,
        monotone_in_alpha,
    })
}

/// Distance from `p` to the path, by brute force over all segments in
/// global coordinates. Suitable only for short paths.
pub fn dist_to_path(path: &PiecewiseGeodesic, p: &UHPoint) -> f64 {
    (0..path.segment_count())
        .map(|i| dist_to_vertical_segment(&path.chart(i).inverse().apply(p), path.lengths[i]))
        .fold(f64::INFINITY, f64::min)
}
