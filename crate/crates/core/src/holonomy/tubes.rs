use num_complex::Complex64;
use serde::Serialize;

use super::{CuspData, FilledRep, HolonomyError, TwoBridgeKnot};
use crate::h3::{
    axis_endpoints, geodesic_distance, horosphere_translation, tube_boundary_translation, BoundaryPoint,
    ComplexLength, Geodesic,
};
use crate::words::{words_up_to, Word};

/// Radius of the tube about the core geodesic whose boundary sees the
/// longitude translate by `|l|_{∂H}`; 0 if `|Re v| ≥ |l|_{∂H}`.
pub fn tube_radius(fr: &FilledRep, cusp: &CuspData) -> f64 {
    let lh = horosphere_translation(cusp.tau0, cusp.t0);
    let v = fr.v;
    if v.re.abs() >= lh {
        return 0.0;
    }
    let num = lh.cosh() - v.re.cosh();
    let den = (v.cosh() - 1.0).norm();
    (num / den).sqrt().asinh()
}

/// `cosh(Re z) + sinh²r·|cosh z − 1|`.
fn tube_cosh(z: Complex64, r: f64) -> f64 {
    z.re.cosh() + r.sinh().powi(2) * (z.cosh() - 1.0).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop42Row {
    pub n: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub k: i64,
    pub r_n: f64,
    /// `|l_n^{N−kn}|_{∂N_n}` from the tube formula at `Nv + ku`.
    pub length: f64,
    /// The same length from the complex length `(N − kn)v` reduced mod 2πi.
    pub length_reduced: f64,
    /// `arcosh(1 + |Nτ0 + k|²/(2t0²))`.
    pub limit: f64,
    pub rel_err: f64,
    /// Lower bound on `cosh` of the length; present when its hypotheses hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosh_lower_bound: Option<f64>,
    pub cosh_length: f64,
    /// `|cosh(Nv + ku) − 1| / |cosh v − 1|`.
    pub taylor_lhs: f64,
    /// `|Nτ_n + k|² / |τ_n|²`.
    pub taylor_rhs: f64,
}

pub fn prop42_row(fr: &FilledRep, cusp: &CuspData, big_n: i64, k: i64) -> Prop42Row {
    let r = tube_radius(fr, cusp);
    let (u, v, tau0, t0) = (fr.u, fr.v, cusp.tau0, cusp.t0);
    let z = v * big_n as f64 + u * k as f64;
    let cosh_length = tube_cosh(z, r);
    let length = cosh_length.acosh();
    let total = ComplexLength::from_complex(v * (big_n - k * fr.n) as f64);
    let length_reduced = tube_boundary_translation(total, r);
    let limit = (1.0 + (tau0 * big_n as f64 + k as f64).norm_sqr() / (2.0 * t0 * t0)).acosh();
    let vn = v.norm();
    let hypotheses = (big_n as f64 * v.re / vn).abs() < 1.0
        && vn * r.cosh() >= tau0.norm() / (2.0 * t0)
        && u.re.abs() / vn > 0.5 * tau0.im.abs() / tau0.norm_sqr();
    let cosh_lower_bound = hypotheses.then(|| {
        let gap = ((k as f64) * u.re / vn).abs() - (big_n as f64 * v.re / vn).abs();
        tau0.norm_sqr() / (8.0 * t0 * t0) * gap * gap
    });
    let taylor_lhs = (z.cosh() - 1.0).norm() / (v.cosh() - 1.0).norm();
    let taylor_rhs = (fr.tau * big_n as f64 + k as f64).norm_sqr() / fr.tau.norm_sqr();
    Prop42Row {
        n: fr.n,
        big_n,
        k,
        r_n: r,
        length,
        length_reduced,
        limit,
        rel_err: (length - limit).abs() / limit,
        cosh_lower_bound,
        cosh_length,
        taylor_lhs,
        taylor_rhs,
    }
}

/// Rows ordered by `n`, then `N`, then `k`.
pub fn prop42_table(frs: &[FilledRep], cusp: &CuspData, big_ns: &[i64], ks: &[i64]) -> Vec<Prop42Row> {
    let mut out = Vec::new();
    for fr in frs {
        for &big_n in big_ns {
            for &k in ks {
                out.push(prop42_row(fr, cusp, big_n, k));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticsRow {
    pub n: i64,
    /// `|Re v_n|/|v_n|`, limit 0.
    pub re_v_ratio: f64,
    /// `|Re u_n|/|v_n|`, limit `|Im τ0|/|τ0|²`.
    pub re_u_ratio: f64,
    /// `|v_n| cosh r_n`, limit `|τ0|/t0`.
    pub v_cosh_r: f64,
    pub re_u_rel_err: f64,
    pub v_cosh_r_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticsReport {
    pub rows: Vec<AsymptoticsRow>,
    pub re_u_limit: f64,
    pub v_cosh_r_limit: f64,
    /// Distances to the limits shrink along the sequence.
    pub monotone: bool,
    /// At the largest `n`: `|Re v|/|v| < 0.02` and both other columns
    /// within 2% of their limits.
    pub tail_within_2pct: bool,
}

pub fn asymptotics_check(frs: &[FilledRep], cusp: &CuspData) -> AsymptoticsReport {
    let tau0 = cusp.tau0;
    let re_u_limit = tau0.im.abs() / tau0.norm_sqr();
    let v_cosh_r_limit = tau0.norm() / cusp.t0;
    let mut sorted: Vec<&FilledRep> = frs.iter().collect();
    sorted.sort_by_key(|f| f.n);
    let rows: Vec<AsymptoticsRow> = sorted
        .iter()
        .map(|fr| {
            let vn = fr.v.norm();
            let re_u_ratio = fr.u.re.abs() / vn;
            let v_cosh_r = vn * tube_radius(fr, cusp).cosh();
            AsymptoticsRow {
                n: fr.n,
                re_v_ratio: fr.v.re.abs() / vn,
                re_u_ratio,
                v_cosh_r,
                re_u_rel_err: (re_u_ratio - re_u_limit).abs() / re_u_limit,
                v_cosh_r_rel_err: (v_cosh_r - v_cosh_r_limit).abs() / v_cosh_r_limit,
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| {
        w[1].re_v_ratio <= w[0].re_v_ratio
            && w[1].re_u_rel_err <= w[0].re_u_rel_err
            && w[1].v_cosh_r_rel_err <= w[0].v_cosh_r_rel_err
    });
    let tail_within_2pct = rows
        .last()
        .is_some_and(|r| r.re_v_ratio < 0.02 && r.re_u_rel_err < 0.02 && r.v_cosh_r_rel_err < 0.02);
    AsymptoticsReport { rows, re_u_limit, v_cosh_r_limit, monotone, tail_within_2pct }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub n: i64,
    pub max_word_length: usize,
    pub r_n: f64,
    pub considered: usize,
    /// Elements preserving the core axis.
    pub excluded: usize,
    pub min_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<Word>,
    pub bound: f64,
    pub passed: bool,
}

/// Chordal distance on the Riemann sphere, below `tol`.
fn same_point(x: BoundaryPoint, y: BoundaryPoint, tol: f64) -> bool {
    let chordal = match (x, y) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
        (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
            2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
        }
        (BoundaryPoint::Finite(a), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(a)) => {
            2.0 / (1.0 + a.norm_sqr()).sqrt()
        }
    };
    chordal <= tol
}

fn same_geodesic(g: &Geodesic, h: &Geodesic, tol: f64) -> bool {
    (same_point(g.p, h.p, tol) && same_point(g.q, h.q, tol)) || (same_point(g.p, h.q, tol) && same_point(g.q, h.p, tol))
}

/// The core geodesic of the filled manifold. The longitude and the
/// meridian share it; the meridian matrix fixes ∞ exactly.
pub fn core_axis(fr: &FilledRep) -> Result<Geodesic, HolonomyError> {
    Ok(axis_endpoints(&fr.eval(&Word::a()))?)
}

/// Minimum of `d(N_n, h·N_n)` over words `h` of length at most `max_len`
/// that move the core axis.
pub fn tube_separation(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    cusp: &CuspData,
    max_len: usize,
    bound: f64,
) -> Result<SeparationReport, HolonomyError> {
    let axis = core_axis(fr)?;
    let l = fr.eval(&knot.longitude);
    debug_assert!(same_geodesic(&axis, &l.apply_geodesic(&axis), 1e-8));
    let r = tube_radius(fr, cusp);
    let words = words_up_to(max_len);
    let mut excluded = 0;
    let mut best: Option<(f64, Word)> = None;
    for w in &words {
        let h = fr.eval(w);
        let image = h.apply_geodesic(&axis);
        if same_geodesic(&axis, &image, 1e-7) {
            excluded += 1;
            continue;
        }
        let d = (geodesic_distance(&axis, &image)? - 2.0 * r).max(0.0);
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, w.clone()));
        }
    }
    let (min_distance, argmin) = match best {
        Some((d, w)) => (d, Some(w)),
        None => (f64::INFINITY, None),
    };
    Ok(SeparationReport {
        n: fr.n,
        max_word_length: max_len,
        r_n: r,
        considered: words.len(),
        excluded,
        min_distance,
        argmin,
        bound,
        passed: min_distance >= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::rep::geometric_rep;
    use super::super::{cusp_parameter, solve_filling, two_bridge_presentation};
    use super::*;

    fn setup(ns: &[i64], t0: f64) -> (TwoBridgeKnot, CuspData, Vec<FilledRep>) {
        let k = two_bridge_presentation(5, 3).unwrap();
        let seed = geometric_rep(&k).unwrap();
        let tau0 = cusp_parameter(&seed, &k).unwrap();
        let frs = ns.iter().map(|&n| solve_filling(&k, n, &seed).unwrap()).collect();
        (k, CuspData::new(t0, tau0), frs)
    }

    #[test]
    fn tube_radius_round_trip() {
        let (_, cusp, frs) = setup(&[10, 20, 40, 80], 10.0);
        let lh = horosphere_translation(cusp.tau0, cusp.t0);
        let mut prev = 0.0;
        for fr in &frs {
            let r = tube_radius(fr, &cusp);
            assert!(r > prev);
            prev = r;
            let back = tube_boundary_translation(ComplexLength::from_complex(fr.v), r);
            assert!((back - lh).abs() < 1e-10);
        }
        // a horoball far down makes |l|_{∂H} tiny, below |Re v|
        let low = CuspData::new(1e9, cusp.tau0);
        assert_eq!(tube_radius(&frs[0], &low), 0.0);
    }

    #[test]
    fn reduced_length_agrees() {
        let (_, cusp, frs) = setup(&[20, 80], 10.0);
        let rows = prop42_table(&frs, &cusp, &[1, 2, 3], &[-2, -1, 0, 1, 2]);
        for row in &rows {
            assert!((row.length - row.length_reduced).abs() < 1e-10 * row.length.max(1.0), "{row:?}");
            if let Some(lb) = row.cosh_lower_bound {
                assert!(row.cosh_length >= lb);
            }
        }
        let base = rows.iter().find(|r| r.big_n == 1 && r.k == 0).unwrap();
        let lh = horosphere_translation(cusp.tau0, cusp.t0);
        assert!((base.length - lh).abs() < 1e-12);
    }

    #[test]
    fn separation_excludes_core_powers() {
        let (k, cusp, frs) = setup(&[40], 10.0);
        let rep = tube_separation(&frs[0], &k, &cusp, 3, 0.0).unwrap();
        // a, A and the trivial word preserve the core
        assert!(rep.excluded >= 3, "{rep:?}");
        assert!(rep.min_distance > 0.0);
    }
}
