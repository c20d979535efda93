use serde::{Deserialize, Serialize};

use super::CountMode;

/// Everything that can move the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TriggerKind {
    HighCyclissityRevisit,
    DocSwitchBeforeEdit,
    ValidationLaunch,
    SurvivingEdit,
    Restart,
    OscillateRepetition,
    PoorMansDebuggerRepetition,
    RevertedEdit,
    DebuggerUse,
}

impl TriggerKind {
    pub const ALL: [TriggerKind; 9] = [
        TriggerKind::HighCyclissityRevisit,
        TriggerKind::DocSwitchBeforeEdit,
        TriggerKind::ValidationLaunch,
        TriggerKind::SurvivingEdit,
        TriggerKind::Restart,
        TriggerKind::OscillateRepetition,
        TriggerKind::PoorMansDebuggerRepetition,
        TriggerKind::RevertedEdit,
        TriggerKind::DebuggerUse,
    ];
}

/// Rated transitions. Repetition rules apply their delta once the free
/// allowance for that pattern has been used up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringRules {
    pub high_cyclissity_threshold: f64,
    pub high_cyclissity_revisit: i64,
    pub doc_switch_before_edit: i64,
    pub validation_launch: i64,
    pub surviving_edit: i64,
    pub restart_first: i64,
    pub restart_repeat: i64,
    pub oscillate_free_repeats: u32,
    pub oscillate_repeat: i64,
    pub pmd_free_repeats: u32,
    pub pmd_repeat: i64,
    pub reverted_edit: i64,
    pub debugger_use: i64,
    pub count_mode: CountMode,
}

impl Default for ScoringRules {
    fn default() -> Self {
        ScoringRules {
            high_cyclissity_threshold: 0.5,
            high_cyclissity_revisit: 1,
            doc_switch_before_edit: 1,
            validation_launch: 1,
            surviving_edit: 1,
            restart_first: 0,
            restart_repeat: -1,
            oscillate_free_repeats: 3,
            oscillate_repeat: -1,
            pmd_free_repeats: 2,
            pmd_repeat: -1,
            reverted_edit: -1,
            debugger_use: 0,
            count_mode: CountMode::Visits,
        }
    }
}

impl ScoringRules {
    /// Delta for the `occurrence`-th (1-based) trigger of `kind`, counted per
    /// region pair for oscillations.
    pub fn delta(&self, kind: TriggerKind, occurrence: u32) -> i64 {
        match kind {
            TriggerKind::HighCyclissityRevisit => self.high_cyclissity_revisit,
            TriggerKind::DocSwitchBeforeEdit => self.doc_switch_before_edit,
            TriggerKind::ValidationLaunch => self.validation_launch,
            TriggerKind::SurvivingEdit => self.surviving_edit,
            TriggerKind::Restart if occurrence <= 1 => self.restart_first,
            TriggerKind::Restart => self.restart_repeat,
            TriggerKind::OscillateRepetition if occurrence <= self.oscillate_free_repeats => 0,
            TriggerKind::OscillateRepetition => self.oscillate_repeat,
            TriggerKind::PoorMansDebuggerRepetition if occurrence <= self.pmd_free_repeats => 0,
            TriggerKind::PoorMansDebuggerRepetition => self.pmd_repeat,
            TriggerKind::RevertedEdit => self.reverted_edit,
            TriggerKind::DebuggerUse => self.debugger_use,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_defaults() {
        let r = ScoringRules::default();
        assert_eq!(r.delta(TriggerKind::Restart, 1), 0);
        assert_eq!(r.delta(TriggerKind::Restart, 2), -1);
        assert_eq!(r.delta(TriggerKind::OscillateRepetition, 3), 0);
        assert_eq!(r.delta(TriggerKind::OscillateRepetition, 4), -1);
        assert_eq!(r.delta(TriggerKind::PoorMansDebuggerRepetition, 2), 0);
        assert_eq!(r.delta(TriggerKind::PoorMansDebuggerRepetition, 3), -1);
        assert_eq!(r.delta(TriggerKind::DebuggerUse, 1), 0);
        for k in TriggerKind::ALL {
            let _ = r.delta(k, 1);
        }
    }

    #[test]
    fn overrides_from_toml() {
        let r: ScoringRules = toml::from_str("restart_first = 2\ncount_mode = \"distinct_files\"").unwrap();
        assert_eq!(r.restart_first, 2);
        assert_eq!(r.count_mode, CountMode::DistinctFiles);
        assert_eq!(r.surviving_edit, 1);
    }
}
