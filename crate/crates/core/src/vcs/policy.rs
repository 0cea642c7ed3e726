//! Which operation mode a set of failures should lead to.

use super::VcsConfig;

/// Lasting consequence of one injected failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    /// Unit `i` (1-based) is lost.
    UnitLost(usize),
    /// Supply `k` (1-based) is unavailable.
    SupplyLost(usize),
    /// Some inter-unit communication failed.
    CommLost,
}

/// Target mode for the combined effects, or `None` when the combination
/// is fatal (both supplies lost).
pub fn target_mode(cfg: &VcsConfig, effects: &[Effect]) -> Option<&'static str> {
    let supply = |k| effects.contains(&Effect::SupplyLost(k));
    if supply(1) && supply(2) {
        return None;
    }
    let alive = |i: &usize| !effects.contains(&Effect::UnitLost(*i));
    let prim_alive = (1..=cfg.primaries()).any(|i| alive(&i));
    let back_alive = (cfg.primaries() + 1..=cfg.n_ecus).any(|i| alive(&i));
    let all_alive = (1..=cfg.n_ecus).all(|i| alive(&i));
    let comm = effects.contains(&Effect::CommLost);
    let power = supply(1) || supply(2);
    Some(if all_alive && !comm && !power {
        "Normal"
    } else if prim_alive && back_alive && !comm && !power {
        "FallbackA"
    } else if back_alive && !power {
        "FallbackB"
    } else if prim_alive || back_alive {
        "FallbackC"
    } else {
        "SafeStop"
    })
}
