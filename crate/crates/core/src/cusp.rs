//! Opinion dynamics `dO/dt = -(O³ - (A - A_crit) O - I)` over the cusp surface.
//!
//! Steady states are the real roots of `O³ - (A - A_crit) O - I = 0`; a root
//! is an attractor when `3O² - (A - A_crit) > 0`. For `A > A_crit` the surface
//! folds: between `±I_sn` there are three roots, and the middle one repels.
//! All values here are unscaled; apply `scale_factor` only when reporting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{discriminant, solve_depressed};
use crate::error::{Error, Result};
use crate::params::PsychParams;

/// Band around zero of `3O² - (A - A_crit)` that counts as a double root.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

/// Largest per-step opinion change the integrator accepts.
pub const MAX_STEP_CHANGE: f64 = 0.1;

pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Marginal => "marginal",
        }
    }
}

impl std::str::FromStr for Stability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stable" => Ok(Stability::Stable),
            "unstable" => Ok(Stability::Unstable),
            "marginal" => Ok(Stability::Marginal),
            other => Err(Error::invalid(format!("unknown stability label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub o: f64,
    pub a: f64,
    pub i: f64,
    pub stability: Stability,
}

impl SteadyState {
    pub fn residual(&self, params: &PsychParams) -> f64 {
        let o = self.o;
        o * o * o - (self.a - params.a_crit) * o - self.i
    }
}

/// Right-hand side of the opinion ODE.
#[inline]
pub fn opinion_rate(o: f64, a: f64, i: f64, params: &PsychParams) -> f64 {
    -(o * o * o - (a - params.a_crit) * o - i)
}

pub fn classify_stability(o: f64, a: f64, params: &PsychParams) -> Stability {
    let s = 3.0 * o * o - (a - params.a_crit);
    if s > MARGINAL_TOLERANCE {
        Stability::Stable
    } else if s < -MARGINAL_TOLERANCE {
        Stability::Unstable
    } else {
        Stability::Marginal
    }
}

/// `4(A - A_crit)³ - 27 I²`: positive inside the fold.
pub fn fold_discriminant(a: f64, i: f64, params: &PsychParams) -> f64 {
    discriminant(-(a - params.a_crit), -i)
}

/// Real steady states at `(a, i)`, sorted ascending.
///
/// Returns three entries inside the fold and one outside it. An exact double
/// root is listed twice and labelled `Marginal`; the cusp point itself
/// (`a = A_crit`, `i = 0`) yields a single marginal root.
pub fn steady_states(a: f64, i: f64, params: &PsychParams) -> Vec<SteadyState> {
    solve_depressed(-(a - params.a_crit), -i)
        .as_slice()
        .iter()
        .map(|&o| SteadyState {
            o,
            a,
            i,
            stability: classify_stability(o, a, params),
        })
        .collect()
}

/// Edge of the fold at attention `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleNode {
    /// Opinion magnitude where a stable and the unstable root merge.
    pub o_sn: f64,
    /// Information magnitude at which that merger happens.
    pub i_sn: f64,
}

pub fn saddle_node(a: f64, params: &PsychParams) -> Option<SaddleNode> {
    let width = a - params.a_crit;
    if !(width > 0.0) {
        return None;
    }
    let o_sn = (width / 3.0).sqrt();
    Some(SaddleNode {
        o_sn,
        i_sn: 2.0 * o_sn * o_sn * o_sn,
    })
}

/// Scaled half-width of the band of opinions with no attractor.
pub fn extent_of_polarization(a: f64, params: &PsychParams, scale_factor: f64) -> f64 {
    saddle_node(a, params).map_or(0.0, |sn| scale_factor * sn.o_sn)
}

/// `1 / max |O|` over `0 ≤ A ≤ A_max`, `-1 ≤ I ≤ 1`.
///
/// The largest root sits at the corner `(A_max, |I| = 1)`; a coarse scan of
/// the domain is kept as a guard on that claim.
pub fn compute_scale_factor(params: &PsychParams) -> f64 {
    let corner = solve_depressed(-(params.a_max - params.a_crit), -1.0)
        .max()
        .abs();
    let scan = (0..=20)
        .flat_map(|ia| (0..=20).map(move |ii| (ia, ii)))
        .map(|(ia, ii)| {
            let a = params.a_max * ia as f64 / 20.0;
            let i = -1.0 + ii as f64 / 10.0;
            solve_depressed(-(a - params.a_crit), -i)
                .as_slice()
                .iter()
                .fold(0.0_f64, |m, o| m.max(o.abs()))
        })
        .fold(0.0_f64, f64::max);
    1.0 / corner.max(scan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_a: usize,
    pub n_i: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_a: 41, n_i: 81 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub a: f64,
    pub i: f64,
    pub states: Vec<SteadyState>,
}

impl SurfacePoint {
    pub fn in_fold(&self) -> bool {
        self.states.len() == 3
            && self.states[0].o < self.states[1].o
            && self.states[1].o < self.states[2].o
    }
}

/// One CSV row of a surface export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "O_scaled")]
    pub o_scaled: f64,
    pub stability: Stability,
}

/// Steady states sampled on a regular `(A, I)` grid, stored row-major by `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSurface {
    pub scale_factor: f64,
    pub grid: GridSpec,
    pub points: Vec<SurfacePoint>,
}

impl ScaledSurface {
    /// All points sharing the `ia`-th attention value.
    pub fn slice(&self, ia: usize) -> &[SurfacePoint] {
        &self.points[ia * self.grid.n_i..(ia + 1) * self.grid.n_i]
    }

    pub fn fold_mask(&self) -> Vec<bool> {
        self.points.iter().map(SurfacePoint::in_fold).collect()
    }

    pub fn rows(&self) -> Vec<SurfaceRow> {
        self.points
            .iter()
            .flat_map(|pt| {
                pt.states.iter().map(move |st| SurfaceRow {
                    a: pt.a,
                    i: pt.i,
                    o_scaled: st.o * self.scale_factor,
                    stability: st.stability,
                })
            })
            .collect()
    }
}

pub fn sample_surface(params: &PsychParams, grid: GridSpec) -> Result<ScaledSurface> {
    if grid.n_a < 2 || grid.n_i < 2 {
        return Err(Error::invalid(format!(
            "surface grid needs at least 2 points per axis, got {}x{}",
            grid.n_a, grid.n_i
        )));
    }
    let scale_factor = compute_scale_factor(params);
    let points = (0..grid.n_a * grid.n_i)
        .into_par_iter()
        .map(|idx| {
            let (ia, ii) = (idx / grid.n_i, idx % grid.n_i);
            let a = params.a_max * ia as f64 / (grid.n_a - 1) as f64;
            let i = -1.0 + 2.0 * ii as f64 / (grid.n_i - 1) as f64;
            SurfacePoint {
                a,
                i,
                states: steady_states(a, i, params),
            }
        })
        .collect();
    Ok(ScaledSurface {
        scale_factor,
        grid,
        points,
    })
}

/// One CSV row of the fold-boundary export. Information is not rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldBoundaryRow {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "I_sn_scaled")]
    pub i_sn: f64,
    #[serde(rename = "E_P")]
    pub e_p: f64,
}

/// `I_sn` and `E_P` on `n` evenly spaced attention values in `[0, A_max]`.
pub fn fold_boundary(params: &PsychParams, scale_factor: f64, n: usize) -> Vec<FoldBoundaryRow> {
    let n = n.max(2);
    (0..n)
        .map(|j| {
            let a = params.a_max * j as f64 / (n - 1) as f64;
            FoldBoundaryRow {
                a,
                i_sn: saddle_node(a, params).map_or(0.0, |sn| sn.i_sn),
                e_p: extent_of_polarization(a, params, scale_factor),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpinionSeries {
    pub points: Vec<(f64, f64)>,
}

impl OpinionSeries {
    pub fn final_value(&self) -> f64 {
        self.points.last().map(|p| p.1).unwrap_or(f64::NAN)
    }
}

/// Classical RK4 step of the opinion ODE with time-varying forcing.
pub(crate) fn rk4_step<FA, FI>(
    o: f64,
    t: f64,
    h: f64,
    a_of_t: &FA,
    i_of_t: &FI,
    params: &PsychParams,
) -> f64
where
    FA: Fn(f64) -> f64,
    FI: Fn(f64) -> f64,
{
    let f = |t: f64, o: f64| opinion_rate(o, a_of_t(t), i_of_t(t), params);
    let k1 = f(t, o);
    let k2 = f(t + 0.5 * h, o + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, o + 0.5 * h * k2);
    let k4 = f(t + h, o + h * k3);
    o + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrates the opinion ODE with fixed-step RK4 and records every step.
///
/// Fails with [`Error::StepRejected`] if a step changes `O` by more than
/// [`MAX_STEP_CHANGE`].
pub fn integrate_opinion<FA, FI>(
    o0: f64,
    a_of_t: FA,
    i_of_t: FI,
    params: &PsychParams,
    dt: f64,
    horizon: f64,
) -> Result<OpinionSeries>
where
    FA: Fn(f64) -> f64,
    FI: Fn(f64) -> f64,
{
    let mut points = Vec::new();
    integrate_with(o0, &a_of_t, &i_of_t, params, dt, horizon, |t, o| {
        points.push((t, o))
    })?;
    Ok(OpinionSeries { points })
}

/// Same integration as [`integrate_opinion`] but only returns the end value.
pub(crate) fn relax_opinion<FA, FI>(
    o0: f64,
    a_of_t: &FA,
    i_of_t: &FI,
    params: &PsychParams,
    dt: f64,
    horizon: f64,
) -> Result<f64>
where
    FA: Fn(f64) -> f64,
    FI: Fn(f64) -> f64,
{
    integrate_with(o0, a_of_t, i_of_t, params, dt, horizon, |_, _| {})
}

fn integrate_with<FA, FI, R>(
    o0: f64,
    a_of_t: &FA,
    i_of_t: &FI,
    params: &PsychParams,
    dt: f64,
    horizon: f64,
    mut record: R,
) -> Result<f64>
where
    FA: Fn(f64) -> f64,
    FI: Fn(f64) -> f64,
    R: FnMut(f64, f64),
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(format!("invalid horizon {horizon}")));
    }
    if !o0.is_finite() {
        return Err(Error::invalid(format!(
            "initial opinion {o0} is not finite"
        )));
    }
    let steps = (horizon / dt - 1e-9).ceil().max(0.0) as u64;
    let mut o = o0;
    record(0.0, o);
    for n in 0..steps {
        let t = n as f64 * dt;
        let h = dt.min(horizon - t);
        let next = rk4_step(o, t, h, a_of_t, i_of_t, params);
        let delta = (next - o).abs();
        if !(delta <= MAX_STEP_CHANGE) {
            return Err(Error::StepRejected {
                t,
                delta,
                limit: MAX_STEP_CHANGE,
            });
        }
        o = next;
        record(t + h, o);
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: PsychParams = PsychParams {
        k: 0.2,
        a_max: 2.0,
        a_crit: 0.5,
    };

    #[test]
    fn below_fold_single_stable_root() {
        let ss = steady_states(0.3, 0.0, &P);
        assert_eq!(ss.len(), 1);
        assert_eq!(ss[0].o, 0.0);
        assert_eq!(ss[0].stability, Stability::Stable);
    }

    #[test]
    fn symmetric_fold_roots() {
        let ss = steady_states(2.0, 0.0, &P);
        let r = 1.5_f64.sqrt();
        assert_eq!(ss.len(), 3);
        assert!((ss[0].o + r).abs() < 1e-14);
        assert!(ss[1].o.abs() < 1e-14);
        assert!((ss[2].o - r).abs() < 1e-14);
        let labels: Vec<_> = ss.iter().map(|s| s.stability).collect();
        assert_eq!(
            labels,
            [Stability::Stable, Stability::Unstable, Stability::Stable]
        );
    }

    #[test]
    fn corner_root_matches_reported_maximum() {
        let ss = steady_states(2.0, 1.0, &P);
        assert_eq!(ss.len(), 1);
        assert!((ss[0].o - 1.475_687).abs() < 1e-6);
        assert!(ss[0].residual(&P).abs() < 1e-12);
    }

    #[test]
    fn stability_examples() {
        assert_eq!(classify_stability(0.0, 2.0, &P), Stability::Unstable);
        assert_eq!(classify_stability(1.224745, 2.0, &P), Stability::Stable);
        for a in [0.6, 1.0, 1.8, 2.0] {
            let o = ((a - P.a_crit) / 3.0).sqrt();
            assert_eq!(classify_stability(o, a, &P), Stability::Marginal);
        }
    }

    #[test]
    fn exact_double_root_is_marginal() {
        // a = 1.25 gives o_sn = 0.5 and i_sn = 0.25 exactly.
        let ss = steady_states(1.25, 0.25, &P);
        assert_eq!(ss.len(), 3);
        assert!((ss[0].o + 0.5).abs() < 1e-15 && (ss[1].o + 0.5).abs() < 1e-15);
        assert_eq!(ss[0].stability, Stability::Marginal);
        assert_eq!(ss[2].stability, Stability::Stable);
        assert!((ss[2].o - 1.0).abs() < 1e-15);
    }

    #[test]
    fn saddle_node_examples() {
        assert!(saddle_node(0.5, &P).is_none());
        assert!(saddle_node(0.3, &P).is_none());
        let sn = saddle_node(1.8, &P).unwrap();
        assert!((sn.o_sn - 0.658_280_588_604_383_3).abs() < 1e-15);
        assert!((3.0 * sn.o_sn * sn.o_sn - 1.3).abs() < 1e-14);
        assert!((sn.i_sn - 2.0 * sn.o_sn.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn saddle_node_is_double_root() {
        for a in [0.7, 1.2, 1.8, 2.0] {
            let sn = saddle_node(a, &P).unwrap();
            let ss = steady_states(a, sn.i_sn, &P);
            // Rounding may push the exact edge either way; both forms carry +2 o_sn.
            let top = ss.last().unwrap().o;
            assert!((top - 2.0 * sn.o_sn).abs() < 1e-7, "a={a}");
            if ss.len() == 3 {
                assert!((ss[0].o + sn.o_sn).abs() < 1e-6);
                assert!((ss[1].o + sn.o_sn).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn root_count_scan_across_fold_edge() {
        // Independent: count sign changes of the cubic on a dense grid.
        let count = |a: f64, i: f64| {
            let f = |o: f64| o * o * o - (a - P.a_crit) * o - i;
            (0..20_000)
                .map(|j| -3.0 + 6.0 * j as f64 / 20_000.0)
                .filter(|&o| f(o).signum() != f(o + 6.0 / 20_000.0).signum())
                .count()
        };
        let sn = saddle_node(1.8, &P).unwrap();
        assert_eq!(count(1.8, sn.i_sn * 0.99), 3);
        assert_eq!(count(1.8, sn.i_sn * 1.01), 1);
        assert_eq!(steady_states(1.8, sn.i_sn - 1e-9, &P).len(), 3);
        assert_eq!(steady_states(1.8, sn.i_sn + 1e-9, &P).len(), 1);
        assert_eq!(steady_states(1.8, -sn.i_sn + 1e-9, &P).len(), 3);
        assert_eq!(steady_states(1.8, -sn.i_sn - 1e-9, &P).len(), 1);
    }

    #[test]
    fn extent_of_polarization_examples() {
        let s = 1.0 / 1.475_687;
        assert_eq!(extent_of_polarization(0.5, &P, s), 0.0);
        assert_eq!(extent_of_polarization(0.3, &P, s), 0.0);
        let e = extent_of_polarization(2.0, &P, s);
        assert!((e - s * 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((e - 0.479_171).abs() < 1e-6);
        let e18 = extent_of_polarization(1.8, &P, s);
        assert!((e18 - 0.446_084).abs() < 1e-6);
    }

    #[test]
    fn scale_factor_defaults() {
        let s = compute_scale_factor(&P);
        assert!((1.0 / s - 1.475_687).abs() < 1e-5);
        assert!((s - 0.677_650).abs() < 1e-5);
    }

    #[test]
    fn scale_factor_without_fold() {
        let flat = PsychParams {
            k: 0.2,
            a_max: 0.5,
            a_crit: 0.5,
        };
        // At (A_crit, 1) the cubic is O³ = 1.
        assert!((compute_scale_factor(&flat) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn surface_is_normalised() {
        let surf = sample_surface(&P, GridSpec { n_a: 21, n_i: 41 }).unwrap();
        let max = surf
            .rows()
            .iter()
            .map(|r| r.o_scaled.abs())
            .fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
        for (pt, in_fold) in surf.points.iter().zip(surf.fold_mask()) {
            if in_fold {
                assert!(pt.a > P.a_crit);
            }
        }
        assert!(surf.fold_mask().iter().any(|&f| f));
    }

    #[test]
    fn surface_slices() {
        // Attention values 0, 0.3, 1.8 sit on a grid with ΔA = 0.1.
        let surf = sample_surface(&P, GridSpec { n_a: 21, n_i: 101 }).unwrap();
        for pt in surf.slice(0) {
            assert_eq!(pt.states.len(), 1);
        }
        let low = surf.slice(3);
        assert!((low[0].a - 0.3).abs() < 1e-12);
        assert!(low
            .iter()
            .all(|pt| pt.states.len() == 1 && pt.states[0].stability == Stability::Stable));
        for w in low.windows(2) {
            assert!(w[1].states[0].o > w[0].states[0].o);
        }
        let high = surf.slice(18);
        let sn = saddle_node(high[0].a, &P).unwrap();
        for pt in high {
            assert_eq!(pt.in_fold(), pt.i.abs() < sn.i_sn, "I={}", pt.i);
        }
    }

    #[test]
    fn surface_rejects_tiny_grid() {
        assert!(sample_surface(&P, GridSpec { n_a: 1, n_i: 5 }).is_err());
    }

    #[test]
    fn fold_boundary_rows() {
        let rows = fold_boundary(&P, compute_scale_factor(&P), 21);
        assert_eq!(rows.len(), 21);
        assert!(rows
            .iter()
            .filter(|r| r.a <= P.a_crit)
            .all(|r| r.e_p == 0.0));
        let rising: Vec<_> = rows.iter().filter(|r| r.a > P.a_crit).collect();
        assert!(rising.windows(2).all(|w| w[1].e_p > w[0].e_p));
    }

    #[test]
    fn integrator_holds_fixed_point() {
        let root = 1.5_f64.sqrt();
        let s = integrate_opinion(root, |_| 2.0, |_| 0.0, &P, DEFAULT_DT, 100.0).unwrap();
        assert!(s.points.iter().all(|&(_, o)| (o - root).abs() < 1e-9));
        assert_eq!(s.points.len(), 10_001);
        assert!((s.points.last().unwrap().0 - 100.0).abs() < 1e-9);
    }

    #[test]
    fn integrator_leaves_unstable_root() {
        let s = integrate_opinion(1e-6, |_| 2.0, |_| 0.0, &P, DEFAULT_DT, 100.0).unwrap();
        assert!((s.final_value() - 1.224_745).abs() < 1e-6);
        let s = integrate_opinion(-1e-6, |_| 2.0, |_| 0.0, &P, DEFAULT_DT, 100.0).unwrap();
        assert!((s.final_value() + 1.224_745).abs() < 1e-6);
    }

    #[test]
    fn integrator_guard_rejects_large_steps() {
        let err = integrate_opinion(10.0, |_| 2.0, |_| 0.0, &P, DEFAULT_DT, 1.0).unwrap_err();
        assert!(matches!(err, Error::StepRejected { .. }));
        assert!(integrate_opinion(0.0, |_| 2.0, |_| 0.0, &P, 0.0, 1.0).is_err());
    }

    #[test]
    fn slow_information_sweep_jumps_across_band() {
        // Hold A = 1.8 and drag I from +0.8 to -0.8; the upper branch survives
        // until -I_sn and then O drops across the unstable band.
        let sn = saddle_node(1.8, &P).unwrap();
        let horizon = 4000.0;
        let i_of_t = |t: f64| 0.8 - 1.6 * t / horizon;
        let start = steady_states(1.8, 0.8, &P)[0].o;
        let s = integrate_opinion(start, |_| 1.8, i_of_t, &P, 0.05, horizon).unwrap();
        // Before the edge the state stays on the upper branch.
        let before: Vec<_> = s
            .points
            .iter()
            .filter(|(t, _)| i_of_t(*t) > -sn.i_sn + 0.02)
            .collect();
        assert!(before.iter().all(|(_, o)| *o > sn.o_sn));
        // The largest single-step drop happens just past -I_sn and spans the band.
        let (idx, drop) = s
            .points
            .windows(2)
            .map(|w| w[0].1 - w[1].1)
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            );
        let t_jump = s.points[idx].0;
        assert!(i_of_t(t_jump) < -sn.i_sn);
        assert!(drop > 0.0);
        assert!(s.final_value() < -sn.o_sn);
    }
}
