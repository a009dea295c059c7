//! Blind-zone geometry per camera placement and the debounced alert state
//! machine.

mod sink;
mod state;
mod zone;

pub use sink::{AlertSink, ChannelSink, CommandSink, LogSink, OverlayFlag};
pub use state::{
    alert_step, step_hit, AlertEvent, AlertKind, AlertMode, AlertState, ClockError, DebounceParams, ALERT_BUDGET_S,
};
pub use zone::{in_zone, zone_for_placement, Placement, Zone, PRESET_A, PRESET_B, PRESET_C};
