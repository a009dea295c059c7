use std::fmt;

use thiserror::Error;

use super::zone::{in_zone, Placement, Zone};
use crate::config::ConfigError;
use crate::geometry::Detection;

/// The longest a debounced alert may take to raise, in seconds.
pub const ALERT_BUDGET_S: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("timestamp {now_ns} ns precedes previous {previous_ns} ns")]
pub struct ClockError {
    pub previous_ns: u64,
    pub now_ns: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DebounceParams {
    pub k_on: u32,
    pub k_off: u32,
}

impl Default for DebounceParams {
    fn default() -> Self {
        Self { k_on: 3, k_off: 5 }
    }
}

impl DebounceParams {
    /// Both counts must be at least one and `k_on` frames at `frame_rate`
    /// must fit in the two-second budget.
    pub fn validate(&self, frame_rate: f64) -> Result<(), ConfigError> {
        if self.k_on < 1 {
            return Err(ConfigError::invalid("k_on", "must be at least 1"));
        }
        if self.k_off < 1 {
            return Err(ConfigError::invalid("k_off", "must be at least 1"));
        }
        crate::config::require_positive("frame_rate", frame_rate)?;
        let span = self.k_on as f64 / frame_rate;
        if span > ALERT_BUDGET_S {
            return Err(ConfigError::invalid(
                "k_on",
                format!("{} frames at {frame_rate} fps take {span:.3} s, over the {ALERT_BUDGET_S} s budget", self.k_on),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlertMode {
    #[default]
    Idle,
    Tentative,
    Active,
    /// miss-counting sub-phase of `Active`
    Cooldown,
}

impl AlertMode {
    /// Whether an alert is currently raised.
    pub fn is_raised(self) -> bool {
        matches!(self, AlertMode::Active | AlertMode::Cooldown)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlertState {
    pub mode: AlertMode,
    pub consecutive_hits: u32,
    pub consecutive_misses: u32,
    /// time of the last mode change
    pub last_transition_ns: Option<u64>,
    pub last_timestamp_ns: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlertKind {
    Raised,
    Cleared,
}

impl fmt::Display for AlertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlertKind::Raised => "RAISED",
            AlertKind::Cleared => "CLEARED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlertEvent {
    pub kind: AlertKind,
    pub timestamp_ns: u64,
    pub placement: Placement,
    /// the frame's detections when the event fired
    pub detections: Vec<Detection>,
}

/// Advances the debounce machine by one frame. `dets` must be normalized.
pub fn alert_step(
    state: &AlertState,
    dets: &[Detection],
    zone: &Zone,
    now_ns: u64,
    params: DebounceParams,
) -> Result<(AlertState, Vec<AlertEvent>), ClockError> {
    let hit = dets.iter().any(|d| in_zone(d, zone));
    let (next, kind) = step_hit(state, hit, now_ns, params)?;
    let events = kind
        .map(|kind| AlertEvent { kind, timestamp_ns: now_ns, placement: zone.placement(), detections: dets.to_vec() })
        .into_iter()
        .collect();
    Ok((next, events))
}

/// The transition function on the hit/miss signal alone.
pub fn step_hit(
    state: &AlertState,
    hit: bool,
    now_ns: u64,
    params: DebounceParams,
) -> Result<(AlertState, Option<AlertKind>), ClockError> {
    if let Some(previous_ns) = state.last_timestamp_ns {
        if now_ns < previous_ns {
            return Err(ClockError { previous_ns, now_ns });
        }
    }
    let mut s = state.clone();
    s.last_timestamp_ns = Some(now_ns);
    let mut event = None;
    let mode = match (state.mode, hit) {
        (AlertMode::Idle | AlertMode::Tentative, true) => {
            s.consecutive_hits = state.consecutive_hits + 1;
            s.consecutive_misses = 0;
            if s.consecutive_hits >= params.k_on {
                event = Some(AlertKind::Raised);
                AlertMode::Active
            } else {
                AlertMode::Tentative
            }
        }
        (AlertMode::Idle | AlertMode::Tentative, false) => {
            s.consecutive_hits = 0;
            AlertMode::Idle
        }
        (AlertMode::Active | AlertMode::Cooldown, true) => {
            s.consecutive_misses = 0;
            AlertMode::Active
        }
        (AlertMode::Active | AlertMode::Cooldown, false) => {
            s.consecutive_misses = state.consecutive_misses + 1;
            if s.consecutive_misses >= params.k_off {
                event = Some(AlertKind::Cleared);
                s.consecutive_hits = 0;
                s.consecutive_misses = 0;
                AlertMode::Idle
            } else {
                AlertMode::Cooldown
            }
        }
    };
    if mode != state.mode {
        s.last_transition_ns = Some(now_ns);
    }
    s.mode = mode;
    Ok((s, event))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;
    use proptest::prelude::*;

    const P: DebounceParams = DebounceParams { k_on: 3, k_off: 5 };

    fn run(pattern: &[bool], params: DebounceParams) -> Vec<(AlertState, Option<AlertKind>)> {
        let mut s = AlertState::default();
        pattern
            .iter()
            .enumerate()
            .map(|(i, &h)| {
                let (n, e) = step_hit(&s, h, i as u64 * 33_333_333, params).unwrap();
                s = n.clone();
                (n, e)
            })
            .collect()
    }

    fn first_raise(pattern: &[bool], params: DebounceParams) -> Option<usize> {
        run(pattern, params).iter().position(|(_, e)| *e == Some(AlertKind::Raised))
    }

    /// Active after `s` iff the text after the last run of `k_off` misses
    /// contains `k_on` consecutive hits.
    fn oracle_active(s: &str, k_on: usize, k_off: usize) -> bool {
        let off = "m".repeat(k_off);
        let tail = match s.rfind(&off) {
            Some(i) => &s[i + k_off..],
            None => s,
        };
        tail.contains(&"h".repeat(k_on))
    }

    #[test]
    fn exhaustive_oracle_up_to_length_12() {
        for (k_on, k_off) in [(1, 1), (3, 5), (2, 3), (4, 1), (1, 4)] {
            let params = DebounceParams { k_on: k_on as u32, k_off: k_off as u32 };
            for len in 0..=12u32 {
                for bits in 0..(1u32 << len) {
                    let pat: Vec<bool> = (0..len).map(|i| bits >> i & 1 == 1).collect();
                    let text: String = pat.iter().map(|&h| if h { 'h' } else { 'm' }).collect();
                    let trace = run(&pat, params);
                    let mut prev = false;
                    for (i, (state, ev)) in trace.iter().enumerate() {
                        let now = oracle_active(&text[..=i], k_on, k_off);
                        assert_eq!(state.mode.is_raised(), now, "{text} k_on={k_on} k_off={k_off} at {i}");
                        let want = match (prev, now) {
                            (false, true) => Some(AlertKind::Raised),
                            (true, false) => Some(AlertKind::Cleared),
                            _ => None,
                        };
                        assert_eq!(*ev, want, "{text} at {i}");
                        prev = now;
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_debounce_raises_immediately() {
        let t = run(&[true], DebounceParams { k_on: 1, k_off: 1 });
        assert_eq!(t[0].1, Some(AlertKind::Raised));
    }

    #[test]
    fn raises_on_third_frame() {
        let t = run(&[true; 5], P);
        assert_eq!(first_raise(&[true; 5], P), Some(2));
        assert_eq!(t[2].0.mode, AlertMode::Active);
        assert_eq!(t[1].0.mode, AlertMode::Tentative);
    }

    #[test]
    fn miss_resets_tentative_count() {
        assert_eq!(first_raise(&[true, true, false, true], P), None);
    }

    #[test]
    fn state_invariants_hold() {
        let pat: Vec<bool> = (0..200).map(|i| (i * 7919) % 11 < 6).collect();
        for (s, _) in run(&pat, P) {
            match s.mode {
                AlertMode::Tentative => assert!(s.consecutive_hits >= 1 && s.consecutive_hits < P.k_on),
                AlertMode::Active => assert!(s.consecutive_hits >= P.k_on && s.consecutive_misses == 0),
                AlertMode::Cooldown => assert!(s.consecutive_misses >= 1 && s.consecutive_misses < P.k_off),
                AlertMode::Idle => assert_eq!(s.consecutive_hits, 0),
            }
        }
    }

    #[test]
    fn clock_must_not_go_backwards() {
        let (s, _) = step_hit(&AlertState::default(), true, 100, P).unwrap();
        assert_eq!(step_hit(&s, true, 99, P), Err(ClockError { previous_ns: 100, now_ns: 99 }));
        assert!(step_hit(&s, true, 100, P).is_ok());
    }

    #[test]
    fn alert_step_uses_zone_membership() {
        let zone = Zone::new(vec![(0.0, 0.5), (1.0, 0.5), (1.0, 1.0), (0.0, 1.0)], Placement::FrontMirror).unwrap();
        let inside = Detection::new(BoundingBox::new(0.4, 0.2, 0.6, 0.8).unwrap(), 0.9).unwrap();
        let outside = Detection::new(BoundingBox::new(0.4, 0.0, 0.6, 0.3).unwrap(), 0.9).unwrap();
        let params = DebounceParams { k_on: 1, k_off: 1 };
        let (s, ev) = alert_step(&AlertState::default(), &[outside], &zone, 0, params).unwrap();
        assert!(ev.is_empty());
        let (s, ev) = alert_step(&s, &[outside, inside], &zone, 1, params).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, AlertKind::Raised);
        assert_eq!(ev[0].detections.len(), 2);
        assert_eq!(ev[0].placement, Placement::FrontMirror);
        let (_, ev) = alert_step(&s, &[], &zone, 2, params).unwrap();
        assert_eq!(ev[0].kind, AlertKind::Cleared);
    }

    #[test]
    fn budget_validation() {
        assert!(DebounceParams { k_on: 3, k_off: 5 }.validate(30.0).is_ok());
        assert!(DebounceParams { k_on: 60, k_off: 5 }.validate(30.0).is_ok());
        assert!(DebounceParams { k_on: 61, k_off: 5 }.validate(30.0).is_err());
        assert!(DebounceParams { k_on: 3, k_off: 5 }.validate(1.0).is_err());
        assert!(DebounceParams { k_on: 0, k_off: 5 }.validate(30.0).is_err());
        assert!(DebounceParams { k_on: 1, k_off: 0 }.validate(30.0).is_err());
        assert!(DebounceParams { k_on: 1, k_off: 1 }.validate(0.0).is_err());
    }

    proptest! {
        #[test]
        fn events_alternate(pat in proptest::collection::vec(any::<bool>(), 0..300), k_on in 1u32..6, k_off in 1u32..6) {
            let kinds: Vec<AlertKind> = run(&pat, DebounceParams { k_on, k_off }).into_iter().filter_map(|(_, e)| e).collect();
            for (i, k) in kinds.iter().enumerate() {
                prop_assert_eq!(*k, if i % 2 == 0 { AlertKind::Raised } else { AlertKind::Cleared });
            }
        }

        #[test]
        fn extra_hit_never_delays_raise(pat in proptest::collection::vec(any::<bool>(), 1..60), at in any::<prop::sample::Index>(), k_on in 1u32..6) {
            let params = DebounceParams { k_on, k_off: 5 };
            let mut more = pat.clone();
            more[at.index(pat.len())] = true;
            let before = first_raise(&pat, params).unwrap_or(usize::MAX);
            let after = first_raise(&more, params).unwrap_or(usize::MAX);
            prop_assert!(after <= before);
        }
    }
}
