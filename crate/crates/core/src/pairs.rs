//! The generating pairs `P^N = (m, g·l^N)` of a 2-bridge knot group and
//! numerical evidence separating their Nielsen classes after filling.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::h3::{
    beta_constants, classify_and_length, common_perpendicular, dist, geodesic_through, standardizing_map,
    axis_endpoints, ComplexLength, H3Error, HypIsometry, IsometryClass, UHPoint,
};
use crate::holonomy::{core_axis, prop42_row, tube_radius, CuspData, FilledRep, HolonomyError, TwoBridgeKnot};
use crate::pwgeo::{chord_hausdorff, segment_projections, PiecewiseGeodesic, PwGeoError, DEFAULT_SAMPLES};
use crate::words::{commutator, cyclic_canonical, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairsError {
    #[error("element is not loxodromic ({0:?})")]
    NotLoxodromic(IsometryClass),
    #[error("tube radius is zero")]
    DegenerateTube,
    #[error("no common perpendicular between the tube and its translate")]
    PerpendicularNotFound,
    #[error("no N up to {0} clears the length bound {1}")]
    NoClearingN(i64, f64),
    #[error("positive word needs at least one exponent")]
    EmptySpec,
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
    #[error(transparent)]
    Geometry(#[from] H3Error),
    #[error(transparent)]
    Path(#[from] PwGeoError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingPair {
    pub first: Word,
    pub second: Word,
    #[serde(rename = "N")]
    pub big_n: i64,
}

/// `(a, w⁻¹·l^N)`.
pub fn make_pair(knot: &TwoBridgeKnot, big_n: i64) -> GeneratingPair {
    GeneratingPair { first: Word::a(), second: knot.conjugator().mul(&knot.longitude.pow(big_n)), big_n }
}

impl GeneratingPair {
    /// `‖(g l^N) a (g l^N)⁻¹ − g a g⁻¹‖` under a representation.
    pub fn conjugation_residual(&self, knot: &TwoBridgeKnot, eval: impl Fn(&Word) -> HypIsometry) -> f64 {
        let x = eval(&self.second);
        let g = eval(&knot.conjugator());
        let m = eval(&self.first);
        let lhs = x * m * x.inverse();
        let rhs = g * m * g.inverse();
        lhs.dist_psl(&rhs) / rhs.max_abs_entry().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorRow {
    #[serde(rename = "N")]
    pub big_n: i64,
    /// Cyclically reduced `[a, g l^N]` in the free group.
    pub word: Word,
    pub trace: Complex64,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub n: i64,
    pub base_trace: Complex64,
    pub rows: Vec<CommutatorRow>,
    pub max_diff: f64,
    /// The free-group commutators differ although their traces agree.
    pub distinct_in_free_group: bool,
    pub passed: bool,
}

pub const COMMUTATOR_TOL: f64 = 1e-9;

pub fn commutator_check(fr: &FilledRep, knot: &TwoBridgeKnot, big_ns: &[i64]) -> CommutatorReport {
    let m = fr.eval(&Word::a());
    let g = fr.eval(&knot.conjugator());
    let l = fr.eval(&knot.longitude);
    let tr_comm = |x: HypIsometry| (m * x * m.inverse() * x.inverse()).trace();
    let base_trace = tr_comm(g);
    let rows: Vec<CommutatorRow> = big_ns
        .iter()
        .map(|&big_n| {
            let pair = make_pair(knot, big_n);
            let trace = tr_comm(g * l.pow(big_n));
            CommutatorRow {
                big_n,
                word: cyclic_canonical(&commutator(&pair.first, &pair.second)),
                trace,
                diff: (trace - base_trace).norm(),
            }
        })
        .collect();
    let max_diff = rows.iter().map(|r| r.diff).fold(0.0, f64::max);
    let mut words: Vec<&Word> = rows.iter().map(|r| &r.word).collect();
    words.sort();
    words.dedup();
    CommutatorReport {
        n: fr.n,
        base_trace,
        distinct_in_free_group: words.len() == rows.len(),
        max_diff,
        passed: max_diff < COMMUTATOR_TOL,
        rows,
    }
}

/// Exponents `b_1, …, b_s ≥ 0` of `w = (g l^N) m^{b_1} ··· (g l^N) m^{b_s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveWordSpec {
    pub exponents: Vec<u32>,
}

impl PositiveWordSpec {
    pub fn new(exponents: Vec<u32>) -> Result<PositiveWordSpec, PairsError> {
        if exponents.is_empty() {
            return Err(PairsError::EmptySpec);
        }
        Ok(PositiveWordSpec { exponents })
    }

    pub fn s(&self) -> usize {
        self.exponents.len()
    }

    pub fn word(&self, knot: &TwoBridgeKnot, big_n: i64) -> Word {
        let x = make_pair(knot, big_n).second;
        self.exponents
            .iter()
            .fold(Word::identity(), |acc, &b| acc.mul(&x).mul(&Word::a().pow(b as i64)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositiveWordReport {
    pub spec: PositiveWordSpec,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub length: ComplexLength,
    pub meridian_length: f64,
    pub exceeds_meridian: bool,
}

/// `ρ(g) ρ(l)^N`, with the power taken on the matrix.
fn x_matrix(fr: &FilledRep, knot: &TwoBridgeKnot, big_n: i64) -> HypIsometry {
    fr.eval(&knot.conjugator()) * fr.eval(&knot.longitude).pow(big_n)
}

fn spec_matrix(fr: &FilledRep, knot: &TwoBridgeKnot, big_n: i64, spec: &PositiveWordSpec) -> HypIsometry {
    let x = x_matrix(fr, knot, big_n);
    let m = fr.eval(&Word::a());
    spec.exponents.iter().fold(HypIsometry::identity(), |acc, &b| acc * x * m.pow(b as i64))
}

pub fn positive_word_length(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    big_n: i64,
    spec: &PositiveWordSpec,
) -> Result<PositiveWordReport, PairsError> {
    let (class, length) = classify_and_length(&spec_matrix(fr, knot, big_n, spec))?;
    if class != IsometryClass::Loxodromic {
        return Err(PairsError::NotLoxodromic(class));
    }
    let meridian_length = ComplexLength::from_complex(fr.u).a;
    Ok(PositiveWordReport {
        spec: spec.clone(),
        big_n,
        length,
        meridian_length,
        exceeds_meridian: length.a > meridian_length,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: i64,
    /// `tr ρ(g l^{N' + kn})`; the inverse has the same trace.
    pub trace: Complex64,
    pub trace_inverse: Complex64,
    /// `min_± |tr(g l^N) ∓ tr(g l^{N'+kn})|`.
    pub margin: f64,
    /// Lower bound on `cosh |l^{N'} m^{−k}|` on the tube boundary, when
    /// its hypotheses hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosh_lower_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub n: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    #[serde(rename = "N_prime")]
    pub big_n_prime: i64,
    pub base_trace: Complex64,
    pub rows: Vec<ScanRow>,
    pub min_margin: f64,
}

pub fn conjugacy_trace_scan(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    cusp: Option<&CuspData>,
    big_n: i64,
    big_n_prime: i64,
    ks: &[i64],
) -> ScanReport {
    let base_trace = x_matrix(fr, knot, big_n).trace();
    let rows: Vec<ScanRow> = ks
        .iter()
        .map(|&k| {
            let h = x_matrix(fr, knot, big_n_prime + k * fr.n);
            let (trace, trace_inverse) = (h.trace(), h.inverse().trace());
            let margin = [trace, trace_inverse]
                .iter()
                .flat_map(|t| [(base_trace - t).norm(), (base_trace + t).norm()])
                .fold(f64::INFINITY, f64::min);
            ScanRow {
                k,
                trace,
                trace_inverse,
                margin,
                cosh_lower_bound: cusp.and_then(|c| prop42_row(fr, c, big_n_prime, -k).cosh_lower_bound),
            }
        })
        .collect();
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    ScanReport { n: fr.n, big_n, big_n_prime, base_trace, rows, min_margin }
}

/// Default `β = α − π/2` for the chord-angle guarantee.
pub const GAMMA_BETA: f64 = std::f64::consts::PI / 16.0;

/// Horoball height for the path audit. At `t0 = 10` the tube is too thin
/// for `l^N`-lengths on its boundary to exceed `B + t + κ` at `n = 80`.
pub const GAMMA_T0: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaAudit {
    pub n: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub spec: PositiveWordSpec,
    pub r_n: f64,
    /// `d(N_n, g N_n)`, the length of `[x_n, y_n]`.
    pub perpendicular_length: f64,
    /// `d(g x_n, y_n)`.
    pub t: f64,
    pub beta: f64,
    pub kappa: f64,
    pub b_meas: f64,
    pub alpha_meas: f64,
    pub xi_meas: f64,
    pub validate: bool,
    pub translation_length: f64,
    pub projection_bound: f64,
    /// Displacement of the path's endpoints projected to the axis of `w`.
    pub projected_displacement: f64,
    pub passed: bool,
    pub vertices: Vec<UHPoint>,
}

/// The perpendicular segment `[x_n, y_n]` from the tube `N_n` to `g N_n`.
fn tube_perpendicular(fr: &FilledRep, knot: &TwoBridgeKnot, r: f64) -> Result<(UHPoint, UHPoint), PairsError> {
    let axis = core_axis(fr)?;
    let g = fr.eval(&knot.conjugator());
    let perp = common_perpendicular(&axis, &g.apply_geodesic(&axis)).map_err(|_| PairsError::PerpendicularNotFound)?;
    if perp.length <= 2.0 * r {
        return Err(PairsError::PerpendicularNotFound);
    }
    let m = standardizing_map(&geodesic_through(&perp.foot1, &perp.foot2)?)?;
    let (h1, h2) = (m.apply(&perp.foot1).t, m.apply(&perp.foot2).t);
    let back = m.inverse();
    Ok((back.apply(&UHPoint::on_axis(h1 * r.exp())), back.apply(&UHPoint::on_axis(h2 * (-r).exp()))))
}

/// `x_n, y_n, w_1 x_n, w_1 y_n, …, w_s x_n`, each moved by `prefix`.
pub fn gamma_vertices(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    big_n: i64,
    spec: &PositiveWordSpec,
    x: &UHPoint,
    y: &UHPoint,
    prefix: &HypIsometry,
) -> Vec<UHPoint> {
    let g = fr.eval(&knot.conjugator());
    let l_n = fr.eval(&knot.longitude).pow(big_n);
    let m = fr.eval(&Word::a());
    let mut out = vec![prefix.apply(x), prefix.apply(y)];
    let mut w_i = *prefix;
    for (i, &b) in spec.exponents.iter().enumerate() {
        w_i = w_i * g * l_n * m.pow(b as i64);
        out.push(w_i.apply(x));
        if i + 1 < spec.s() {
            out.push(w_i.apply(y));
        }
    }
    out
}

/// Least `N ≤ max_n` with `|l_n^N m_n^k|_{∂N_n} ≥ bound` for every `k`
/// with `|k| ≤ k_max`.
pub fn least_clearing_n(fr: &FilledRep, cusp: &CuspData, bound: f64, max_n: i64, k_max: i64) -> Option<i64> {
    (1..=max_n).find(|&big_n| (-k_max..=k_max).all(|k| prop42_row(fr, cusp, big_n, k).length >= bound))
}

pub fn build_gamma_w(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    big_n: i64,
    spec: &PositiveWordSpec,
    cusp: &CuspData,
    beta: f64,
) -> Result<GammaAudit, PairsError> {
    let r = tube_radius(fr, cusp);
    if r <= 0.0 {
        return Err(PairsError::DegenerateTube);
    }
    let (x, y) = tube_perpendicular(fr, knot, r)?;
    let g = fr.eval(&knot.conjugator());
    let t = dist(&g.apply(&x), &y);
    let consts = beta_constants(beta);
    let vertices = gamma_vertices(fr, knot, big_n, spec, &x, &y, &HypIsometry::identity());
    let path = PiecewiseGeodesic::from_vertices(&vertices)?;
    let b_meas = path.min_length();
    let alpha_meas = path.min_angle();
    let xi_meas = chord_hausdorff(&path, DEFAULT_SAMPLES)?;
    let w = spec_matrix(fr, knot, big_n, spec);
    let (class, length) = classify_and_length(&w)?;
    if class != IsometryClass::Loxodromic {
        return Err(PairsError::NotLoxodromic(class));
    }
    let projection_bound = 2.0 * spec.s() as f64 * (b_meas - 2.0 * xi_meas);
    let projected_displacement = segment_projections(&path, &axis_endpoints(&w)?)?.total;
    let validate = crate::pwgeo::validate(&path, b_meas, alpha_meas);
    let passed = validate
        && alpha_meas > std::f64::consts::FRAC_PI_2
        && r >= consts.r
        && length.a >= projection_bound;
    Ok(GammaAudit {
        n: fr.n,
        big_n,
        spec: spec.clone(),
        r_n: r,
        perpendicular_length: dist(&x, &y),
        t,
        beta,
        kappa: consts.kappa,
        b_meas,
        alpha_meas,
        xi_meas,
        validate,
        translation_length: length.a,
        projection_bound,
        projected_displacement,
        passed,
        vertices,
    })
}

/// The least `N` whose tube-boundary lengths clear `B + t + κ`, with
/// `B` the perpendicular length, and the audits of `specs` at that `N`.
pub fn gamma_audit_at_least_n(
    fr: &FilledRep,
    knot: &TwoBridgeKnot,
    cusp: &CuspData,
    specs: &[PositiveWordSpec],
    beta: f64,
    max_n: i64,
    k_max: i64,
) -> Result<(i64, Vec<GammaAudit>), PairsError> {
    let r = tube_radius(fr, cusp);
    if r <= 0.0 {
        return Err(PairsError::DegenerateTube);
    }
    let (x, y) = tube_perpendicular(fr, knot, r)?;
    let g = fr.eval(&knot.conjugator());
    let bound = dist(&x, &y) + dist(&g.apply(&x), &y) + beta_constants(beta).kappa;
    let big_n = least_clearing_n(fr, cusp, bound, max_n, k_max).ok_or(PairsError::NoClearingN(max_n, bound))?;
    let audits = specs
        .iter()
        .map(|spec| build_gamma_w(fr, knot, big_n, spec, cusp, beta))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((big_n, audits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{cusp_parameter, geometric_rep, solve_filling, two_bridge_presentation};
    use crate::words::reduce;

    fn fig8(n: i64) -> (TwoBridgeKnot, FilledRep, Complex64) {
        let k = two_bridge_presentation(5, 3).unwrap();
        let seed = geometric_rep(&k).unwrap();
        let tau0 = cusp_parameter(&seed, &k).unwrap();
        let fr = solve_filling(&k, n, &seed).unwrap();
        (k, fr, tau0)
    }

    #[test]
    fn pair_words() {
        let (k, fr, _) = fig8(40);
        let p0 = make_pair(&k, 0);
        assert_eq!(p0.second, k.w.inverse());
        let p3 = make_pair(&k, 3);
        let mut raw: Vec<_> = k.w.inverse().letters().to_vec();
        for _ in 0..3 {
            raw.extend_from_slice(k.longitude.letters());
        }
        assert_eq!(p3.second, reduce(&raw));
        let seed = geometric_rep(&k).unwrap();
        for big_n in 0..5 {
            let pair = make_pair(&k, big_n);
            assert!(pair.conjugation_residual(&k, |w| seed.eval(w)) < 1e-8);
            assert!(pair.conjugation_residual(&k, |w| fr.eval(w)) < 1e-8);
        }
    }

    #[test]
    fn commutators_agree() {
        let (k, fr, _) = fig8(40);
        let rep = commutator_check(&fr, &k, &[0, 1, 2, 5, 9]);
        assert_eq!(rep.rows[0].diff, 0.0);
        assert!(rep.passed, "{rep:?}");
        // N = 0 and N = 1 happen to give conjugate commutators in F(a, b)
        assert_eq!(rep.rows[0].word, rep.rows[1].word);
        assert!(!rep.distinct_in_free_group);
        let mut tail: Vec<_> = rep.rows[1..].iter().map(|r| &r.word).collect();
        tail.dedup();
        assert_eq!(tail.len(), 4);
    }

    #[test]
    fn trace_scan() {
        let (k, fr, tau0) = fig8(40);
        let same = conjugacy_trace_scan(&fr, &k, None, 3, 3, &[0]);
        assert_eq!(same.min_margin, 0.0);
        let cusp = CuspData::new(10.0, tau0);
        let ks: Vec<i64> = (-5..=5).collect();
        let rep = conjugacy_trace_scan(&fr, &k, Some(&cusp), 3, 5, &ks);
        assert!(rep.min_margin > 1e-6, "{}", rep.min_margin);
        for row in &rep.rows {
            assert!((row.trace - row.trace_inverse).norm() < 1e-9 * row.trace.norm().max(1.0));
        }
    }

    #[test]
    fn positive_words_are_long() {
        let (k, fr, _) = fig8(80);
        for e in [vec![0], vec![1], vec![2, 3], vec![1, 1, 1]] {
            let rep = positive_word_length(&fr, &k, 5, &PositiveWordSpec::new(e).unwrap()).unwrap();
            assert!(rep.exceeds_meridian);
        }
        let s: Vec<f64> = (1..=6).map(|s| s as f64).collect();
        let len: Vec<f64> = (1..=6)
            .map(|s| positive_word_length(&fr, &k, 5, &PositiveWordSpec::new(vec![1; s]).unwrap()).unwrap().length.a)
            .collect();
        assert!(ls_slope(&s, &len) > 0.0);
        assert_eq!(PositiveWordSpec::new(vec![]), Err(PairsError::EmptySpec));
    }

    #[test]
    fn word_and_matrix_agree() {
        let (k, fr, _) = fig8(20);
        let spec = PositiveWordSpec::new(vec![2, 0, 1]).unwrap();
        let by_word = fr.eval(&spec.word(&k, 2));
        let by_matrix = spec_matrix(&fr, &k, 2, &spec);
        assert!(by_word.dist_psl(&by_matrix) < 1e-8 * by_matrix.max_abs_entry());
    }

    #[test]
    fn gamma_path_equivariance() {
        let (k, fr, tau0) = fig8(80);
        let cusp = CuspData::new(GAMMA_T0, tau0);
        let r = tube_radius(&fr, &cusp);
        let (x, y) = tube_perpendicular(&fr, &k, r).unwrap();
        let spec = PositiveWordSpec::new(vec![1, 2]).unwrap();
        let h = fr.eval(&Word::b().mul(&Word::a()));
        let plain = gamma_vertices(&fr, &k, 3, &spec, &x, &y, &HypIsometry::identity());
        let moved = gamma_vertices(&fr, &k, 3, &spec, &x, &y, &h);
        for (p, q) in plain.iter().zip(&moved) {
            assert!(dist(&h.apply(p), q) < 1e-8);
        }
        assert_eq!(plain.len(), 2 * spec.s() + 1);
    }

    #[test]
    fn gamma_least_n() {
        let (k, fr, tau0) = fig8(80);
        let specs: Vec<_> = [vec![0], vec![1, 2], vec![1, 0, 3]]
            .into_iter()
            .map(|e| PositiveWordSpec::new(e).unwrap())
            .collect();
        let (big_n, audits) =
            gamma_audit_at_least_n(&fr, &k, &CuspData::new(GAMMA_T0, tau0), &specs, GAMMA_BETA, 200, 10).unwrap();
        assert!(big_n > 1);
        for a in &audits {
            assert!(a.passed, "{a:?}");
            assert!((a.projected_displacement - a.translation_length).abs() < 0.01 * a.translation_length);
        }
        let thin = gamma_audit_at_least_n(&fr, &k, &CuspData::new(10.0, tau0), &specs, GAMMA_BETA, 200, 10);
        assert!(matches!(thin, Err(PairsError::NoClearingN(200, _))));
    }

    #[test]
    fn gamma_single_letter() {
        let (k, fr, tau0) = fig8(80);
        let cusp = CuspData::new(GAMMA_T0, tau0);
        let audit = build_gamma_w(&fr, &k, 6, &PositiveWordSpec::new(vec![0]).unwrap(), &cusp, GAMMA_BETA).unwrap();
        assert_eq!(audit.vertices.len(), 3);
        assert!(audit.b_meas >= audit.perpendicular_length - 1e-9);
        assert!((audit.projected_displacement - audit.translation_length).abs() < 0.01 * audit.translation_length);
    }
}
