//! Articulator trajectories from a gestural score.
//!
//! Each tract variable is a critically damped second-order system,
//! `ẍ = −ω²(x − target) − 2ω·ẋ`, driven by the controlling gesture's target
//! during its activation interval and by the inherent neutral (schwa)
//! position otherwise. State carries across activation boundaries, so
//! overlapping gestures coarticulate without any extra machinery.
//!
//! Integration uses the exact closed form from the most recent activation
//! boundary rather than stepping sample to sample. Trajectories are
//! therefore functions of the score alone: rendering at different sample
//! rates evaluates the same piecewise curve at different points.

use thiserror::Error;

use crate::affine::rat_to_f64;
use crate::timing::{ClipMode, GesturalScore, ParameterTable, ScoreGesture};
use crate::tract::TractVar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("sample rate must be positive")]
    BadRate,
    #[error("eigenperiod must be positive")]
    BadEigenperiod,
    #[error("sample rate {rate} Hz leaves no sample inside the activation of `{gesture}`")]
    RateTooLow { rate: f64, gesture: String },
    #[error("parameter table is missing tract variable data")]
    IncompleteTable,
}

/// Oscillator state: position and velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscState {
    pub x: f64,
    pub v: f64,
}

impl OscState {
    pub fn at_rest(x: f64) -> Self {
        OscState { x, v: 0.0 }
    }
}

/// Angular frequency for an eigenperiod: one full phase cycle (360°) spans
/// one eigenperiod, so ω = 2π / eigenperiod.
pub fn omega(eigenperiod_ms: f64) -> Result<f64, DynamicsError> {
    if !eigenperiod_ms.is_finite() || eigenperiod_ms <= 0.0 {
        return Err(DynamicsError::BadEigenperiod);
    }
    Ok(std::f64::consts::TAU / eigenperiod_ms)
}

/// The invariant phase → relative-distance map of a rest-started critically
/// damped approach: at phase φ the remaining fraction of the initial
/// articulator–target distance is (1 + θ)·e^(−θ) with θ = 2π·φ/360.
pub fn relative_distance(phase_deg: f64) -> f64 {
    let theta = std::f64::consts::TAU * phase_deg / 360.0;
    (1.0 + theta) * (-theta).exp()
}

/// Exact closed-form update over a time step `dt`:
/// with d = x − target and c₂ = v + ω·d,
/// x' = target + (d + c₂·dt)·e^(−ω·dt), v' = (c₂ − ω(d + c₂·dt))·e^(−ω·dt).
pub fn step(state: OscState, target: f64, omega: f64, dt: f64) -> OscState {
    let d = state.x - target;
    let c2 = state.v + omega * d;
    let e = (-omega * dt).exp();
    let lin = d + c2 * dt;
    OscState {
        x: target + lin * e,
        v: (c2 - omega * lin) * e,
    }
}

/// Uniformly sampled control-parameter curves plus the derived voicing
/// annotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub sample_rate: f64,
    pub t0_ms: f64,
    pub values: Vec<Vec<f64>>,
    pub voiced: Vec<bool>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.voiced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voiced.is_empty()
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0_ms + i as f64 * 1000.0 / self.sample_rate
    }

    pub fn of(&self, var: TractVar) -> &[f64] {
        &self.values[var.index()]
    }
}

/// Which gesture controls a tract variable when several are active: the one
/// with the latest start, ties broken by score order (first wins).
pub fn overlap_policy<'a>(active: &[&'a ScoreGesture]) -> Option<&'a ScoreGesture> {
    let mut best: Option<&ScoreGesture> = None;
    for g in active {
        match best {
            None => best = Some(g),
            Some(b) if g.start_ms > b.start_ms => best = Some(g),
            _ => {}
        }
    }
    best
}

struct Span {
    t0: f64,
    t1: f64,
    target: f64,
    omega: f64,
    clip: ClipMode,
}

fn spans_for_var(
    gestures: &[&ScoreGesture],
    span_end: f64,
    neutral: f64,
    neutral_omega: f64,
) -> Vec<Span> {
    let mut cuts: Vec<f64> = vec![0.0, span_end];
    for g in gestures {
        cuts.push(g.start_ms);
        cuts.push(g.end_ms);
    }
    cuts.retain(|t| *t >= 0.0 && *t <= span_end);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    cuts.dedup();

    let mut spans = Vec::new();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 <= t0 {
            continue;
        }
        // Activation intervals are half-open [start, end) for control, so
        // consecutive gestures hand over exactly at the boundary.
        let active: Vec<&ScoreGesture> = gestures
            .iter()
            .copied()
            .filter(|g| g.start_ms <= t0 && t1 <= g.end_ms)
            .collect();
        let span = match overlap_policy(&active) {
            Some(g) => Span {
                t0,
                t1,
                target: g.target,
                omega: std::f64::consts::TAU / g.eigenperiod_ms,
                clip: g.clip,
            },
            None => Span {
                t0,
                t1,
                target: neutral,
                omega: neutral_omega,
                clip: ClipMode::Default,
            },
        };
        spans.push(span);
    }
    if spans.is_empty() {
        spans.push(Span {
            t0: 0.0,
            t1: span_end,
            target: neutral,
            omega: neutral_omega,
            clip: ClipMode::Default,
        });
    }
    spans
}

/// Integrates the score into uniformly sampled trajectories.
pub fn render(
    score: &GesturalScore,
    rate_hz: f64,
    table: &ParameterTable,
) -> Result<Trajectory, DynamicsError> {
    if !rate_hz.is_finite() || rate_hz <= 0.0 {
        return Err(DynamicsError::BadRate);
    }
    let span_end = score.span_ms[1];
    let dt = 1000.0 / rate_hz;
    let mut n_samples = (span_end / dt).floor() as usize + 1;
    // floor(span/dt)·dt can land one ulp past span_end; keep every sample
    // inside the utterance span.
    while n_samples > 1 && (n_samples - 1) as f64 * dt > span_end {
        n_samples -= 1;
    }

    // Every activation interval must contain at least one sample.
    for g in &score.gestures {
        let first_inside = (g.start_ms / dt).ceil() * dt;
        if first_inside >= g.end_ms && g.end_ms > g.start_ms {
            return Err(DynamicsError::RateTooLow {
                rate: rate_hz,
                gesture: format!("{}@{}", g.segment, g.segment_index),
            });
        }
    }

    let neutral_omega =
        omega(rat_to_f64(&table.render.neutral_eigenperiod))?;

    let mut values: Vec<Vec<f64>> = Vec::with_capacity(TractVar::ALL.len());
    for var in TractVar::ALL {
        let params = table.tract(var).ok_or(DynamicsError::IncompleteTable)?;
        let neutral = rat_to_f64(&params.neutral);
        let min = rat_to_f64(&params.min);
        let max = rat_to_f64(&params.max);
        let clip_lo = rat_to_f64(&params.clip_lo);
        let clip_hi = rat_to_f64(&params.clip_hi);

        let gestures: Vec<&ScoreGesture> = score.on_tract(var).collect();
        let spans = spans_for_var(&gestures, span_end, neutral, neutral_omega);

        let mut samples: Vec<f64> = Vec::with_capacity(n_samples);
        let mut state = OscState::at_rest(neutral);
        let mut i = 0usize;
        for (k, span) in spans.iter().enumerate() {
            let last = k + 1 == spans.len();
            // Samples inside [t0, t1), plus t1 itself for the final span:
            // evaluated in closed form from the span's entry state, so the
            // result at a time point is independent of the sample grid.
            loop {
                if i >= n_samples {
                    break;
                }
                let t = i as f64 * dt;
                if t < span.t0 || (t >= span.t1 && !(last && t <= span.t1)) {
                    break;
                }
                let s = if t == span.t0 {
                    state
                } else {
                    step(state, span.target, span.omega, t - span.t0)
                };
                let (lo, hi) = match span.clip {
                    ClipMode::Default => (clip_lo, clip_hi),
                    ClipMode::None => (min, max),
                };
                samples.push(s.x.clamp(lo, hi));
                i += 1;
            }
            state = step(state, span.target, span.omega, span.t1 - span.t0);
        }
        assert_eq!(samples.len(), n_samples, "spans must cover every sample");
        values.push(samples);
    }

    let ga_thr = rat_to_f64(&table.render.ga_threshold);
    let pr_thr = rat_to_f64(&table.render.pr_threshold);
    let ga = &values[TractVar::GA.index()];
    let pr = &values[TractVar::PR.index()];
    let voiced: Vec<bool> = ga
        .iter()
        .zip(pr.iter())
        .map(|(&g, &p)| g < ga_thr && p > pr_thr)
        .collect();

    Ok(Trajectory {
        sample_rate: rate_hz,
        t0_ms: 0.0,
        values,
        voiced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timing::GestureKind;

    fn bare_gesture(
        var: TractVar,
        target: f64,
        start: f64,
        eigenperiod: f64,
        release: f64,
    ) -> ScoreGesture {
        ScoreGesture {
            tract_var: var,
            code: 0,
            class: "test".into(),
            kind: GestureKind::Consonantal,
            target,
            cd_category: "cd".into(),
            cl_category: "cl".into(),
            start_ms: start,
            end_ms: start + eigenperiod * release / 360.0,
            eigenperiod_ms: eigenperiod,
            assoc_deg: 180.0,
            release_deg: release,
            segment: "x".into(),
            segment_index: 0,
            role: "pure_onset".into(),
            clip: ClipMode::Default,
        }
    }

    #[test]
    fn omega_is_tau_over_eigenperiod() {
        let t = std::f64::consts::TAU * 1000.0;
        assert!((omega(t).unwrap() - 0.001).abs() < 1e-15);
        assert!((omega(100.0).unwrap() - 0.06283185307179587).abs() < 1e-12);
        assert!(omega(0.0).is_err());
    }

    #[test]
    fn relative_distance_frozen_values() {
        // (1+θ)e^{−θ} at θ = 2π and 4π, computed independently (awk/libm).
        assert_eq!(relative_distance(0.0), 1.0);
        assert!((relative_distance(360.0) - 1.3600931465574938e-2).abs() < 1e-15);
        assert!((relative_distance(720.0) - 4.731057886348382e-5).abs() < 1e-18);
    }

    #[test]
    fn step_fixed_point_at_target() {
        let s = OscState { x: 0.8, v: 0.0 };
        let s2 = step(s, 0.8, 0.05, 3.0);
        assert!((s2.x - 0.8).abs() < 1e-15);
        assert!(s2.v.abs() < 1e-15);
    }

    #[test]
    fn step_matches_phase_distance_law_after_one_period() {
        let eigenperiod = 150.0;
        let w = omega(eigenperiod).unwrap();
        let s = OscState::at_rest(0.0);
        let s2 = step(s, 1.0, w, eigenperiod);
        let remaining = (s2.x - 1.0).abs();
        assert!((remaining - relative_distance(360.0)).abs() < 1e-12);
    }

    #[test]
    fn approach_from_rest_is_monotone_without_overshoot() {
        let w = omega(120.0).unwrap();
        let mut s = OscState::at_rest(0.0);
        let mut prev = s.x;
        for _ in 0..400 {
            s = step(s, 1.0, w, 1.0);
            assert!(s.x >= prev - 1e-12, "no backward motion");
            assert!(s.x <= 1.0 + 1e-12, "no overshoot");
            prev = s.x;
        }
    }

    #[test]
    fn empty_score_stays_at_neutral() {
        let (_, table, _) = crate::config::default_setup();
        let score = GesturalScore {
            utterance: vec![],
            span_ms: [0.0, 100.0],
            gestures: vec![],
        };
        let traj = render(&score, 1000.0, &table).unwrap();
        for var in TractVar::ALL {
            let neutral = rat_to_f64(&table.tract(var).unwrap().neutral);
            for &x in traj.of(var) {
                assert_eq!(x, neutral, "{var} must sit at neutral");
            }
        }
        // Schwa configuration is phonation-ready.
        assert!(traj.voiced.iter().all(|&v| v));
    }

    #[test]
    fn controlling_gesture_is_latest_start_first_on_tie() {
        let a = bare_gesture(TractVar::LA, 0.1, 0.0, 120.0, 330.0);
        let b = bare_gesture(TractVar::LA, 0.9, 10.0, 120.0, 330.0);
        let c = bare_gesture(TractVar::LA, 0.5, 10.0, 120.0, 330.0);
        assert_eq!(overlap_policy(&[&a]).unwrap().target, 0.1);
        assert_eq!(overlap_policy(&[&a, &b]).unwrap().target, 0.9);
        // Identical starts: first in score order wins.
        assert_eq!(overlap_policy(&[&a, &b, &c]).unwrap().target, 0.9);
        assert!(overlap_policy(&[]).is_none());
    }

    #[test]
    fn rate_too_low_is_detected() {
        let (_, table, _) = crate::config::default_setup();
        let g = bare_gesture(TractVar::LA, 0.5, 3.0, 10.0, 90.0); // 2.5 ms long
        let score = GesturalScore {
            utterance: vec![],
            span_ms: [0.0, 100.0],
            gestures: vec![g],
        };
        assert!(matches!(
            render(&score, 100.0, &table),
            Err(DynamicsError::RateTooLow { .. })
        ));
        assert!(render(&score, 2000.0, &table).is_ok());
        assert!(matches!(
            render(&score, 0.0, &table),
            Err(DynamicsError::BadRate)
        ));
    }

    #[test]
    fn trajectory_is_continuous_across_activation_boundaries() {
        let (_, table, _) = crate::config::default_setup();
        let g1 = bare_gesture(TractVar::LA, 0.9, 0.0, 120.0, 330.0);
        let g2 = bare_gesture(TractVar::LA, 0.2, 80.0, 120.0, 330.0);
        let score = GesturalScore {
            utterance: vec![],
            span_ms: [0.0, 400.0],
            gestures: vec![g1, g2],
        };
        let rate = 2000.0;
        let traj = render(&score, rate, &table).unwrap();
        let xs = traj.of(TractVar::LA);
        let dt = 1000.0 / rate;
        // |x[i+1]−x[i]| bounded by max |v|·Δt; v is bounded by ω·range here,
        // use a generous explicit bound.
        let bound = 0.1;
        for w in xs.windows(2) {
            assert!((w[1] - w[0]).abs() < bound * dt, "jump {} at dt {}", (w[1] - w[0]).abs(), dt);
        }
    }

    #[test]
    fn ebbt_lip_aperture_reaches_closure_continuously() {
        // LA starts at neutral, is driven to (overshooting) closure during
        // /b/, saturates at the contact bound, and never jumps through the
        // vowel-consonant overlap.
        let (lattice, table, inv) = crate::config::default_setup();
        let ids = ["ʔ", "ɛ", "b", "t"];
        let problem = crate::phonology::build_word(&lattice, &inv, &table, &ids).unwrap();
        let solution = crate::solve::solve(&lattice, &problem.constraints).unwrap();
        let utterance: Vec<String> = ids.iter().map(|x| x.to_string()).collect();
        let score = crate::timing::assemble_score(
            &problem.plan,
            &solution,
            &lattice,
            &table,
            &utterance,
        )
        .unwrap();
        let b = score
            .gestures
            .iter()
            .find(|g| g.segment == "b" && g.tract_var == TractVar::LA)
            .unwrap()
            .clone();
        let rate = 1000.0;
        let traj = render(&score, rate, &table).unwrap();
        let la = traj.of(TractVar::LA);
        // Closure by the end of /b/'s activation: the saturated contact bound.
        let at_end = la[b.end_ms as usize];
        assert_eq!(at_end, 0.0, "lip aperture must saturate at contact");
        // Continuity across the whole utterance, activation edges included.
        for w in la.windows(2) {
            assert!((w[1] - w[0]).abs() < 0.05, "jump of {}", (w[1] - w[0]).abs());
        }
    }

    #[test]
    fn awkward_rate_span_combinations_keep_samples_inside_the_span() {
        // 1000/53 · floor(1000·53/1000) rounds one ulp past 1000 ms; the
        // sample count must be clamped so the final sample stays in range.
        let (_, table, _) = crate::config::default_setup();
        let g = bare_gesture(TractVar::LA, 0.5, 0.0, 1000.0, 360.0); // [0, 1000]
        let score = GesturalScore {
            utterance: vec![],
            span_ms: [0.0, 1000.0],
            gestures: vec![g],
        };
        for rate in [53.0, 85.0, 89.0, 95.0, 97.0, 200.0, 1000.0] {
            let traj = render(&score, rate, &table).unwrap();
            let last = traj.time_at(traj.len() - 1);
            assert!(last <= 1000.0, "rate {rate}: last sample at {last}");
        }
    }

    #[test]
    fn clipping_saturates_at_contact_bounds() {
        let (_, table, _) = crate::config::default_setup();
        // Closure target overshoots below the LA contact bound 0.0.
        let g = bare_gesture(TractVar::LA, -0.05, 0.0, 120.0, 720.0);
        let score = GesturalScore {
            utterance: vec![],
            span_ms: [0.0, 240.0],
            gestures: vec![g],
        };
        let traj = render(&score, 1000.0, &table).unwrap();
        let xs = traj.of(TractVar::LA);
        let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, 0.0, "firm closure saturates exactly at contact");
    }
}
