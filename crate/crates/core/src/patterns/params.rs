use serde::{Deserialize, Serialize};

use super::PatternError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillateParams {
    pub min_alternations: u32,
    pub region_gap_lines: u32,
    pub window_ms: u64,
}

impl Default for OscillateParams {
    fn default() -> Self {
        OscillateParams {
            min_alternations: 3,
            region_gap_lines: 50,
            window_ms: 300_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RestartParams {
    pub breadth_files: u32,
    pub window_ms: u64,
    pub low_cyclissity: f64,
}

impl Default for RestartParams {
    fn default() -> Self {
        RestartParams {
            breadth_files: 3,
            window_ms: 120_000,
            low_cyclissity: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseParams {
    pub window_ms: u64,
    pub step_ms: u64,
    pub edit_density_low: f64,
    pub edit_density_high: f64,
    pub min_phase_ms: u64,
}

impl Default for PhaseParams {
    fn default() -> Self {
        PhaseParams {
            window_ms: 120_000,
            step_ms: 30_000,
            edit_density_low: 0.05,
            edit_density_high: 0.15,
            min_phase_ms: 60_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorParams {
    pub oscillate: OscillateParams,
    pub restart: RestartParams,
    /// Globs naming instruction and note files.
    pub doc_files: Vec<String>,
    /// Regular expressions recognising inserted output statements.
    pub pmd_regexes: Vec<String>,
    pub phase: PhaseParams,
}

pub const DEFAULT_DOC_GLOBS: &[&str] = &["*.txt", "*.md", "*.markdown", "*.rst", "*.adoc"];

pub const DEFAULT_PMD_REGEXES: &[&str] = &[
    r"System\.(out|err)\.print(ln|f)?\s*\(",
    r"\bconsole\.(log|debug|info|warn|error)\s*\(",
    r"\bprint(ln|f)?!?\s*\(",
    r"\bfmt\.(Print|Fprint|Sprint)(ln|f)?\s*\(",
    r"\b(std::)?(cout|cerr)\s*<<",
    r"\bConsole\.Write(Line)?\s*\(",
    r"\bputs\b",
    r"\becho\b",
    r"\b(e)?println!\s*\(",
    r"\bdbg!\s*\(",
    r"\bvar_dump\s*\(",
];

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            oscillate: OscillateParams::default(),
            restart: RestartParams::default(),
            doc_files: DEFAULT_DOC_GLOBS.iter().map(|s| s.to_string()).collect(),
            pmd_regexes: DEFAULT_PMD_REGEXES.iter().map(|s| s.to_string()).collect(),
            phase: PhaseParams::default(),
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<(), PatternError> {
        let bad = |what: &str| Err(PatternError::InvalidParams(what.to_string()));
        let o = &self.oscillate;
        if o.min_alternations == 0 || o.region_gap_lines == 0 || o.window_ms == 0 {
            return bad("oscillate thresholds must be positive");
        }
        let r = &self.restart;
        if r.breadth_files == 0 || r.window_ms == 0 || r.low_cyclissity <= 0.0 {
            return bad("restart thresholds must be positive");
        }
        let p = &self.phase;
        if p.window_ms == 0 || p.step_ms == 0 || p.min_phase_ms == 0 || p.edit_density_low <= 0.0 {
            return bad("phase thresholds must be positive");
        }
        if p.edit_density_low >= p.edit_density_high {
            return bad("edit_density_low must be below edit_density_high");
        }
        Ok(())
    }
}
