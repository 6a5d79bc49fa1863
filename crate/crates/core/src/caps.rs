use serde::{Deserialize, Serialize};

/// Resource budget. Exceeding any field is reported as an error or as an
/// `Inconclusive` verdict, never as a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Maximum number of group elements held by one ball or product set.
    pub ball_elements: usize,
    /// Maximum number of coordinates in a clopen-set window.
    pub window: usize,
    /// Maximum number of patterns held by one clopen set.
    pub patterns: usize,
    /// Maximum word length used when enumerating subshift languages.
    pub word_length: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ball_elements: 1_000_000,
            window: 24,
            patterns: 1 << 20,
            word_length: 4096,
        }
    }
}
