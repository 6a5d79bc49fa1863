use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. Element `0` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Arc<Vec<Vec<usize>>>,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Build from a table where `table[a][b] = a·b`. The identity must be element 0.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        if labels.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("table must be square with one label per element".into()));
        }
        if table.iter().flatten().any(|&c| c >= n) {
            return Err(Error::Invalid("table entry out of range".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::Invalid("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inverse[a] = b,
                _ => return Err(Error::Invalid(format!("element {a} has no two-sided inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid("table is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            table: Arc::new(table),
            inverse,
            labels,
        })
    }

    /// The symmetric group on `degree` points. Elements are permutations in
    /// lexicographic order of their images; `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree == 0 || degree > 6 {
            return Err(Error::Invalid("symmetric groups are supported for degree 1..=6".into()));
        }
        let perms = permutations(degree);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&t.iter().map(|&i| s[i]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        Self::from_table(&format!("S{degree}"), table, labels)
    }

    /// The dihedral group of order `2n`; element `k + n·b` is `r^k s^b`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("dihedral groups need n >= 2".into()));
        }
        let order = 2 * n;
        let mut table = vec![vec![0; order]; order];
        for x in 0..order {
            let (a, b) = (x % n, x / n);
            for y in 0..order {
                let (c, d) = (y % n, y / n);
                let k = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table[x][y] = k + n * ((b + d) % 2);
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (k, b) = (x % n, x / n);
                let r = match k {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r^{k}"),
                };
                let s = if b == 1 { "s" } else { "" };
                let label = format!("{r}{s}");
                if label.is_empty() {
                    "e".to_string()
                } else {
                    label
                }
            })
            .collect();
        Self::from_table(&format!("D{n}"), table, labels)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|a| if a == 0 { "e".into() } else { format!("g^{a}") }).collect();
        Self::from_table(&format!("C{n}"), table, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        let wanted: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels.iter().position(|l| {
            let l: String = l.chars().filter(|c| !c.is_whitespace()).collect();
            l == wanted
        })
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&0)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Every subgroup, found by closing `{e}` under "adjoin one element".
    pub fn all_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let trivial = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([trivial.clone()]);
        found.insert(trivial);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.contains(&g) {
                    continue;
                }
                let mut gens: Vec<usize> = h.iter().copied().collect();
                gens.push(g);
                let k = self.generated(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        found.into_iter().collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Cycle notation with 1-based points, e.g. `(12)(34)`; `e` for the identity.
fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}
