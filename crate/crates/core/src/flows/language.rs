use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// A shift-invariant language, described finitely.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LanguageSpec {
    /// Factors of a primitive substitution `a ↦ rules[a]`.
    Substitution { rules: Vec<Vec<u32>> },
    /// Bi-infinitely extendable words avoiding every listed word.
    Forbidden { alphabet: u32, forbidden: Vec<Vec<u32>> },
    /// Factors of the periodic sequence `word^∞`.
    Periodic { word: Vec<u32> },
}

/// A language together with the data needed to enumerate it.
#[derive(Clone, Debug)]
pub struct Language {
    spec: LanguageSpec,
    /// Admissible two-letter words of a substitution language.
    pairs: BTreeSet<(u32, u32)>,
    /// Essential de Bruijn graph of a forbidden-word language.
    graph: Option<Graph>,
}

#[derive(Clone, Debug)]
struct Graph {
    /// Vertex length `M - 1`.
    width: usize,
    vertices: BTreeSet<Vec<u32>>,
    /// Out-neighbours of each surviving vertex.
    edges: BTreeMap<Vec<u32>, Vec<Vec<u32>>>,
}

impl Language {
    pub fn new(spec: LanguageSpec) -> Result<Self> {
        let mut lang = Language { spec, pairs: BTreeSet::new(), graph: None };
        match &lang.spec {
            LanguageSpec::Substitution { rules } => {
                check_substitution(rules)?;
                lang.pairs = substitution_pairs(rules);
            }
            LanguageSpec::Forbidden { alphabet, forbidden } => {
                if *alphabet == 0 || forbidden.iter().flatten().any(|&s| s >= *alphabet) {
                    return Err(Error::Invalid("forbidden words use symbols outside the alphabet".into()));
                }
                let g = essential_graph(*alphabet, forbidden)?;
                if g.vertices.is_empty() {
                    return Err(Error::Domain("the forbidden words leave an empty subshift".into()));
                }
                lang.graph = Some(g);
            }
            LanguageSpec::Periodic { word } => {
                if word.is_empty() {
                    return Err(Error::Invalid("periodic word must be nonempty".into()));
                }
            }
        }
        Ok(lang)
    }

    pub fn thue_morse() -> Self {
        Self::new(LanguageSpec::Substitution { rules: vec![vec![0, 1], vec![1, 0]] }).expect("primitive")
    }

    pub fn full(alphabet: u32) -> Self {
        Self::new(LanguageSpec::Forbidden { alphabet, forbidden: Vec::new() }).expect("nonempty")
    }

    pub fn spec(&self) -> &LanguageSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> u32 {
        match &self.spec {
            LanguageSpec::Substitution { rules } => rules.len() as u32,
            LanguageSpec::Forbidden { alphabet, .. } => *alphabet,
            LanguageSpec::Periodic { word } => word.iter().max().map_or(1, |m| m + 1),
        }
    }

    /// Whether this is the full shift on its alphabet.
    pub fn is_full(&self) -> bool {
        matches!(&self.spec, LanguageSpec::Forbidden { forbidden, .. } if forbidden.is_empty())
    }

    /// Every admissible word of length `n`.
    pub fn words(&self, n: usize, caps: &Caps) -> Result<BTreeSet<Vec<u32>>> {
        if n > caps.word_length {
            return Err(Error::Resource(format!("word length {n} exceeds the cap {}", caps.word_length)));
        }
        match &self.spec {
            LanguageSpec::Substitution { rules } => {
                if n == 0 {
                    return Ok(BTreeSet::from([Vec::new()]));
                }
                let mut out = BTreeSet::new();
                for &(a, b) in &self.pairs {
                    let (mut u, mut v) = (vec![a], vec![b]);
                    while u.len().min(v.len()) + 1 < n {
                        u = apply(rules, &u);
                        v = apply(rules, &v);
                    }
                    let mut w = u;
                    w.extend(v);
                    for f in w.windows(n) {
                        out.insert(f.to_vec());
                    }
                    if out.len() > caps.patterns {
                        return Err(Error::Resource("language enumeration exceeds the pattern cap".into()));
                    }
                }
                Ok(out)
            }
            LanguageSpec::Forbidden { .. } => self.graph.as_ref().expect("built").words(n, caps),
            LanguageSpec::Periodic { word } => {
                let p = word.len();
                Ok((0..p).map(|i| (0..n).map(|k| word[(i + k) % p]).collect()).collect())
            }
        }
    }

    /// Membership of a finite word.
    pub fn contains(&self, w: &[u32], caps: &Caps) -> Result<bool> {
        if w.iter().any(|&s| s >= self.alphabet()) {
            return Ok(false);
        }
        match &self.spec {
            LanguageSpec::Forbidden { .. } => Ok(self.graph.as_ref().expect("built").contains(w)),
            _ => Ok(self.words(w.len(), caps)?.contains(w)),
        }
    }

    /// An admissible word of length `len` that avoids `u`, if admissible words
    /// avoiding `u` exist at every length. Exact for forbidden-word languages;
    /// `None` otherwise means "not certified".
    pub fn avoiding_witness(&self, u: &[u32], len: usize) -> Result<Option<Vec<u32>>> {
        match &self.spec {
            LanguageSpec::Forbidden { alphabet, forbidden } => {
                let mut more = forbidden.clone();
                more.push(u.to_vec());
                let g = essential_graph(*alphabet, &more)?;
                Ok(g.any_word(len))
            }
            _ => Ok(None),
        }
    }
}

fn apply(rules: &[Vec<u32>], w: &[u32]) -> Vec<u32> {
    w.iter().flat_map(|&a| rules[a as usize].iter().copied()).collect()
}

fn check_substitution(rules: &[Vec<u32>]) -> Result<()> {
    let k = rules.len();
    if k == 0 || rules.iter().any(|r| r.is_empty() || r.iter().any(|&s| s as usize >= k)) {
        return Err(Error::Invalid("substitution images must be nonempty words over the alphabet".into()));
    }
    if rules.iter().all(|r| r.len() == 1) {
        return Err(Error::Domain("substitution never grows, so its language is not extendable".into()));
    }
    // Primitivity: some power of the incidence matrix is positive.
    let mut reach: Vec<BTreeSet<usize>> = rules.iter().map(|r| r.iter().map(|&s| s as usize).collect()).collect();
    for _ in 0..k * k {
        if reach.iter().all(|s| s.len() == k) {
            return Ok(());
        }
        reach = reach
            .iter()
            .map(|s| s.iter().flat_map(|&a| rules[a].iter().map(|&b| b as usize)).collect())
            .collect();
    }
    if reach.iter().all(|s| s.len() == k) {
        Ok(())
    } else {
        Err(Error::Domain("substitution is not primitive".into()))
    }
}

/// Admissible two-letter words: 2-factors of every `τ(a)`, closed under `ab ↦ 2-factors of τ(a)τ(b)`.
fn substitution_pairs(rules: &[Vec<u32>]) -> BTreeSet<(u32, u32)> {
    let mut pairs = BTreeSet::new();
    let mut queue = Vec::new();
    for r in rules {
        for p in r.windows(2) {
            if pairs.insert((p[0], p[1])) {
                queue.push((p[0], p[1]));
            }
        }
    }
    while let Some((a, b)) = queue.pop() {
        let mut w = rules[a as usize].clone();
        w.extend_from_slice(&rules[b as usize]);
        for p in w.windows(2) {
            if pairs.insert((p[0], p[1])) {
                queue.push((p[0], p[1]));
            }
        }
    }
    pairs
}

fn has_forbidden(w: &[u32], forbidden: &[Vec<u32>]) -> bool {
    forbidden.iter().any(|f| !f.is_empty() && f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice()))
}

fn essential_graph(alphabet: u32, forbidden: &[Vec<u32>]) -> Result<Graph> {
    let width = forbidden.iter().map(Vec::len).max().unwrap_or(1).max(2) - 1;
    let count = (alphabet as u64).checked_pow(width as u32).unwrap_or(u64::MAX);
    if count > 1 << 20 {
        return Err(Error::Resource("forbidden words too long for the de Bruijn graph".into()));
    }
    let mut vertices = BTreeSet::new();
    for code in 0..count {
        let mut w = Vec::with_capacity(width);
        let mut c = code;
        for _ in 0..width {
            w.push((c % alphabet as u64) as u32);
            c /= alphabet as u64;
        }
        w.reverse();
        if !has_forbidden(&w, forbidden) {
            vertices.insert(w);
        }
    }
    let edge_ok = |u: &Vec<u32>, s: u32| {
        let mut w = u.clone();
        w.push(s);
        !has_forbidden(&w, forbidden)
    };
    loop {
        let mut edges: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
        let mut has_in: BTreeSet<Vec<u32>> = BTreeSet::new();
        for u in &vertices {
            let outs: Vec<Vec<u32>> = (0..alphabet)
                .filter(|&s| edge_ok(u, s))
                .map(|s| {
                    let mut v = u[1..].to_vec();
                    v.push(s);
                    v
                })
                .filter(|v| vertices.contains(v))
                .collect();
            for v in &outs {
                has_in.insert(v.clone());
            }
            edges.insert(u.clone(), outs);
        }
        let keep: BTreeSet<Vec<u32>> = vertices
            .iter()
            .filter(|u| has_in.contains(*u) && !edges[*u].is_empty())
            .cloned()
            .collect();
        if keep.len() == vertices.len() {
            return Ok(Graph { width, vertices, edges });
        }
        vertices = keep;
    }
}

impl Graph {
    fn words(&self, n: usize, caps: &Caps) -> Result<BTreeSet<Vec<u32>>> {
        if n <= self.width {
            return Ok(self.vertices.iter().map(|v| v[..n].to_vec()).collect());
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<u32>> = self.vertices.iter().cloned().collect();
        while let Some(w) = stack.pop() {
            if w.len() == n {
                out.insert(w);
                if out.len() > caps.patterns {
                    return Err(Error::Resource("language enumeration exceeds the pattern cap".into()));
                }
                continue;
            }
            let tail = w[w.len() - self.width..].to_vec();
            for v in &self.edges[&tail] {
                let mut x = w.clone();
                x.push(*v.last().expect("nonempty vertex"));
                stack.push(x);
            }
        }
        Ok(out)
    }

    fn contains(&self, w: &[u32]) -> bool {
        if w.len() <= self.width {
            return self.vertices.iter().any(|v| v.windows(w.len()).any(|x| x == w) || w.is_empty());
        }
        w.windows(self.width + 1).all(|e| {
            let u = e[..self.width].to_vec();
            let v = e[1..].to_vec();
            self.vertices.contains(&u) && self.edges.get(&u).is_some_and(|outs| outs.contains(&v))
        })
    }

    fn any_word(&self, len: usize) -> Option<Vec<u32>> {
        let mut cur = self.vertices.iter().next()?.clone();
        let mut w = cur.clone();
        while w.len() < len {
            let next = self.edges[&cur].first()?.clone();
            w.push(*next.last().expect("nonempty vertex"));
            cur = next;
        }
        w.truncate(len);
        Some(w)
    }
}

/// `t_n`: parity of the binary digit sum of `n`.
pub fn thue_morse_symbol(n: u64) -> u32 {
    n.count_ones() % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thue_morse_small_words() {
        let tm = Language::thue_morse();
        let caps = Caps::default();
        let w3 = tm.words(3, &caps).unwrap();
        let want: BTreeSet<Vec<u32>> =
            [[0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0]].iter().map(|w| w.to_vec()).collect();
        assert_eq!(w3, want);
        assert!(!tm.contains(&[0, 0, 0], &caps).unwrap());
    }

    #[test]
    fn forbidden_words_prune_dead_ends() {
        // Forbidding 11 gives the golden mean shift.
        let g = Language::new(LanguageSpec::Forbidden { alphabet: 2, forbidden: vec![vec![1, 1]] }).unwrap();
        let caps = Caps::default();
        assert_eq!(g.words(4, &caps).unwrap().len(), 8);
        // Forbidding 01 and 10 leaves only the two fixed points.
        let h = Language::new(LanguageSpec::Forbidden { alphabet: 2, forbidden: vec![vec![0, 1], vec![1, 0]] }).unwrap();
        assert_eq!(h.words(5, &caps).unwrap().len(), 2);
        assert_eq!(Language::full(2).words(6, &caps).unwrap().len(), 64);
    }

    #[test]
    fn non_extendable_substitution_is_a_domain_error() {
        let r = Language::new(LanguageSpec::Substitution { rules: vec![vec![0], vec![1]] });
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = Language::new(LanguageSpec::Substitution { rules: vec![vec![0, 0], vec![1, 1]] });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn avoidance_in_the_full_shift() {
        let full = Language::full(2);
        assert_eq!(full.avoiding_witness(&[1], 5).unwrap(), Some(vec![0, 0, 0, 0, 0]));
        let periodic = Language::new(LanguageSpec::Forbidden { alphabet: 2, forbidden: vec![vec![0, 0], vec![1, 1]] }).unwrap();
        assert_eq!(periodic.avoiding_witness(&[1], 5).unwrap(), None);
    }
}
