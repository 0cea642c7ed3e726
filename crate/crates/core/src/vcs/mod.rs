//! Generator for the vehicle control system demo: a parameterized
//! fail-operational arbitration model plus its failure catalog, target-mode
//! matrix and specification catalog.
//!
//! Architecture of the generated model:
//!
//! * `M_GLOBAL` carries named constants, passed to every module and read as
//!   `Global.NAME`.
//! * `M_ECU` is one control unit with states `Init, Ready, Active,
//!   Passive`. Unit i becomes Ready once its predecessor's state, as
//!   delivered by the bus, is Ready or Active; it then waits
//!   `READY_HOLD` steps before going Active. The last unit goes Active at
//!   step `runup_steps - 1` so `Mode` becomes Normal at `runup_steps`.
//! * `M_BUS` proxies every directed signal sender -> receiver. A dropped
//!   signal keeps its last delivered value; after `debounce_cycles`
//!   consecutive drops the receiver latches a communication failure.
//! * `main` derives the operation mode with a fixed priority cascade
//!   (Normal, FallbackA, FallbackB, FallbackC, SafeStop) and holds the
//!   failure variables inside a marked injection region.
//!
//! The target modes follow one rule: unit outages lead to FallbackA, bus and
//! signal failures to FallbackB, power failures to FallbackC, and losing
//! both supplies is fatal. The content is synthetic; only the structure
//! follows the original system description.

mod generator;
mod policy;

pub use generator::{generate_vcs_model, VcsBundle};
pub use policy::{target_mode, Effect};

pub const MODEL_FILE: &str = "vcs.fsm";
pub const FAILURES_FILE: &str = "failures.csv";
pub const MATRIX_FILE: &str = "target_modes.csv";
pub const SPECS_FILE: &str = "specs.ltl";

/// Operation modes, best first.
pub const MODES: [&str; 6] = [
    "Startup",
    "Normal",
    "FallbackA",
    "FallbackB",
    "FallbackC",
    "SafeStop",
];

/// Marks the start of the region replaced per failure combination.
pub const INJECT_BEGIN: &str = "-- @inject-begin";
pub const INJECT_END: &str = "-- @inject-end";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    None,
    /// FallbackB is tried before FallbackA in the mode cascade.
    SwappedFallbackPriority,
}

impl std::str::FromStr for Mutant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Mutant::None),
            "swapped-fallback-priority" => Ok(Mutant::SwappedFallbackPriority),
            other => Err(format!("unknown mutant `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcsConfig {
    pub n_ecus: usize,
    pub n_buses: usize,
    pub n_power: usize,
    pub debounce_cycles: u32,
    pub runup_steps: u32,
    pub mode_switch_deadline: u32,
    /// Each unit sends to this many successors (cyclically).
    pub p2p_reach: usize,
    pub mutant: Mutant,
}

impl VcsConfig {
    pub fn desk() -> Self {
        VcsConfig {
            n_ecus: 4,
            n_buses: 1,
            n_power: 2,
            debounce_cycles: 3,
            runup_steps: 15,
            mode_switch_deadline: 5,
            p2p_reach: 1,
            mutant: Mutant::None,
        }
    }

    pub fn full() -> Self {
        VcsConfig {
            n_ecus: 7,
            n_buses: 3,
            p2p_reach: 4,
            ..VcsConfig::desk()
        }
    }

    pub fn with_mutant(mut self, mutant: Mutant) -> Self {
        self.mutant = mutant;
        self
    }

    /// Units in the primary channel; the rest form the backup channel.
    pub fn primaries(&self) -> usize {
        self.n_ecus.div_ceil(2)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError(m));
        if self.n_ecus < 2 {
            return fail(format!("n_ecus must be at least 2, got {}", self.n_ecus));
        }
        if self.n_power != 2 {
            return fail(format!("n_power must be 2, got {}", self.n_power));
        }
        if self.n_buses < 1 || self.n_buses > self.n_ecus {
            return fail(format!("n_buses must be in 1..={}, got {}", self.n_ecus, self.n_buses));
        }
        if self.debounce_cycles < 1 {
            return fail("debounce_cycles must be at least 1".into());
        }
        if self.p2p_reach < 1 || self.p2p_reach >= self.n_ecus {
            return fail(format!(
                "p2p_reach must be in 1..{}, got {}",
                self.n_ecus, self.p2p_reach
            ));
        }
        // the chained run-up needs two steps per unit plus the final mode step
        if self.runup_steps < 2 * self.n_ecus as u32 + 1 {
            return fail(format!(
                "runup_steps {} is too short for {} units (need at least {})",
                self.runup_steps,
                self.n_ecus,
                2 * self.n_ecus + 1
            ));
        }
        // the latest effect of a failure is observable debounce + 2 steps
        // after it becomes established; the deadline must leave room within
        // the margin between window end and bound
        let margin = crate::driver::DEFAULT_BOUND - crate::driver::DEFAULT_WINDOW.1;
        if self.mode_switch_deadline as usize >= margin {
            return fail(format!(
                "mode_switch_deadline {} must be below the injection-to-bound margin {margin}",
                self.mode_switch_deadline
            ));
        }
        if self.mode_switch_deadline < self.debounce_cycles.max(2) {
            return fail(format!(
                "mode_switch_deadline {} is shorter than the failure reaction time",
                self.mode_switch_deadline
            ));
        }
        Ok(())
    }

    pub(crate) fn ready_hold(&self) -> u32 {
        self.runup_steps - 1 - 2 * self.n_ecus as u32
    }

    /// Bus carrying the signals of unit `i` (1-based).
    pub(crate) fn bus_of(&self, i: usize) -> usize {
        (i - 1) % self.n_buses + 1
    }

    /// Directed signals `(sender, receiver)`, 1-based, in catalog order.
    pub fn signals(&self) -> Vec<(usize, usize)> {
        let n = self.n_ecus;
        (1..=n)
            .flat_map(|i| (1..=self.p2p_reach).map(move |d| (i, (i - 1 + d) % n + 1)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);
