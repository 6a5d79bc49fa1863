use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::Language;
use crate::verdict::Verdict;

/// The recurrence function `R(n)` of a language, where found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub recurrence: Vec<Option<usize>>,
    pub verdict: Verdict,
}

/// Number of admissible words of each length `1..=n`.
pub fn complexity(lang: &Language, n: usize, caps: &Caps) -> Result<Vec<usize>> {
    (1..=n).map(|k| Ok(lang.words(k, caps)?.len())).collect()
}

fn contains_factor(w: &[u32], u: &[u32]) -> bool {
    w.windows(u.len()).any(|x| x == u)
}

/// Uniform recurrence: every admissible `n`-word occurs in every admissible `R(n)`-word.
pub fn minimality_verdict(lang: &Language, n_max: usize, r_bound: usize, caps: &Caps) -> Result<MinimalityReport> {
    const NAME: &str = "minimality";
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let base = |v: Verdict| v.param("n_max", n_max).param("r_bound", r_bound);
    let mut table = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let short = lang.words(n, caps)?;
        // Exact refutation where avoidance can be decided.
        for u in &short {
            if let Some(w) = lang.avoiding_witness(u, r_bound.max(n))? {
                let word: String = w.iter().map(|s| s.to_string()).collect();
                let missing: String = u.iter().map(|s| s.to_string()).collect();
                table.push(None);
                let verdict = base(Verdict::fails(NAME))
                    .cert("n", n)
                    .cert("missing_word", missing)
                    .cert("witness_prefix", word)
                    .cert("reason", "admissible words of every length avoid this word");
                return Ok(MinimalityReport { recurrence: table, verdict });
            }
        }
        let mut found = None;
        for r in n..=r_bound {
            let long = lang.words(r, caps)?;
            if long.iter().all(|w| short.iter().all(|u| contains_factor(w, u))) {
                found = Some(r);
                break;
            }
        }
        table.push(found);
        if found.is_none() {
            let verdict = base(Verdict::inconclusive(NAME, "recurrence search bound")).cert("n", n).cert("recurrence", &table);
            return Ok(MinimalityReport { recurrence: table, verdict });
        }
    }
    let verdict = base(Verdict::holds(NAME)).cert("recurrence", &table);
    Ok(MinimalityReport { recurrence: table, verdict })
}
