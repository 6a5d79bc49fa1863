//! Word-metric geometry on concrete finitely generated groups.
//!
//! Lengths are taken with respect to a finite symmetric generating set Γ
//! containing the identity, with the convention `|e| = 0`. Balls `B_r` never
//! contain the identity; `Γ^n` always does.

mod cone;
mod element;
mod finite;
mod lattice;
mod subgroup;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

pub use cone::{
    cone_approx, is_syndetic_window, is_thick_window, k_set_translate_check, ConeApproximation, ConeStatus, SequenceDescriptor,
    STABILIZATION_REPEATS,
};
pub use element::Element;
pub use finite::FiniteGroup;
pub use subgroup::{
    all_subgroups, intersect_subgroups, is_normal, normal_core, psi_containment_check, psi_generates, psi_set, subgroup_index,
    Subgroup,
};

use element::{parse_word, reduce_word};

/// Serializable description of a group, without its generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    Integers,
    Lattice { dim: usize },
    FreeGroup { rank: usize },
    Symmetric { degree: usize },
    Dihedral { n: usize },
    Cyclic { n: usize },
    Table { name: String, table: Vec<Vec<usize>>, labels: Vec<String> },
    DirectSumCyclic { moduli: Vec<u32> },
}

/// JSON form of a group: the descriptor plus an optional custom generating set
/// written in canonical element syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    #[serde(flatten)]
    pub group: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Integers,
    Lattice(usize),
    Free(usize),
    Finite(FiniteGroup),
    DirectSum(Vec<u32>),
}

/// A group together with its generating set Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    descriptor: GroupDescriptor,
    kind: Kind,
    gens: Vec<Element>,
    default_gens: bool,
}

/// A finite set of elements in canonical order; `radius` is set for balls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSet {
    pub elements: BTreeSet<Element>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
}

impl ElementSet {
    pub fn new(elements: BTreeSet<Element>) -> Self {
        ElementSet { elements, radius: None }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.elements.contains(g)
    }
}

impl GroupSpec {
    pub fn integers() -> Self {
        Self::new(GroupDescriptor::Integers).expect("integers")
    }

    pub fn lattice(dim: usize) -> Self {
        Self::new(GroupDescriptor::Lattice { dim }).expect("lattice dimension must be positive")
    }

    pub fn free_group(rank: usize) -> Self {
        Self::new(GroupDescriptor::FreeGroup { rank }).expect("free group rank must be positive")
    }

    /// Build with the default generating set of the variant.
    pub fn new(descriptor: GroupDescriptor) -> Result<Self> {
        let kind = match &descriptor {
            GroupDescriptor::Integers => Kind::Integers,
            GroupDescriptor::Lattice { dim } if *dim >= 1 => Kind::Lattice(*dim),
            GroupDescriptor::FreeGroup { rank } if *rank >= 1 => Kind::Free(*rank),
            GroupDescriptor::Symmetric { degree } => Kind::Finite(FiniteGroup::symmetric(*degree)?),
            GroupDescriptor::Dihedral { n } => Kind::Finite(FiniteGroup::dihedral(*n)?),
            GroupDescriptor::Cyclic { n } => Kind::Finite(FiniteGroup::cyclic(*n)?),
            GroupDescriptor::Table { name, table, labels } => {
                Kind::Finite(FiniteGroup::from_table(name, table.clone(), labels.clone())?)
            }
            GroupDescriptor::DirectSumCyclic { moduli } if !moduli.is_empty() && moduli.iter().all(|&m| m >= 2) => {
                Kind::DirectSum(moduli.clone())
            }
            other => return Err(Error::Invalid(format!("degenerate group descriptor {other:?}"))),
        };
        let gens = default_generators(&kind);
        Ok(GroupSpec { descriptor, kind, gens, default_gens: true })
    }

    /// Build with a custom generating set, checking that it is finite,
    /// symmetric, contains the identity and generates the group.
    pub fn with_generators(descriptor: GroupDescriptor, gens: Vec<Element>) -> Result<Self> {
        let mut spec = Self::new(descriptor)?;
        let mut set = BTreeSet::new();
        for g in gens {
            spec.validate(&g)?;
            set.insert(g);
        }
        if !set.contains(&spec.identity()) {
            return Err(Error::Invalid("generating set must contain the identity".into()));
        }
        if set.iter().any(|g| !set.contains(&spec.inv(g))) {
            return Err(Error::Invalid("generating set must be closed under inverses".into()));
        }
        let default: BTreeSet<Element> = spec.gens.iter().cloned().collect();
        spec.default_gens = set == default;
        spec.gens = set.into_iter().collect();
        if !spec.default_gens && !spec.generates()? {
            return Err(Error::Invalid("generating set does not generate the group".into()));
        }
        Ok(spec)
    }

    pub fn from_document(doc: &GroupDocument) -> Result<Self> {
        match &doc.generators {
            None => Self::new(doc.group.clone()),
            Some(texts) => {
                let base = Self::new(doc.group.clone())?;
                let gens = texts.iter().map(|t| base.parse(t)).collect::<Result<Vec<_>>>()?;
                Self::with_generators(doc.group.clone(), gens)
            }
        }
    }

    pub fn document(&self) -> GroupDocument {
        GroupDocument {
            group: self.descriptor.clone(),
            generators: if self.default_gens {
                None
            } else {
                Some(self.gens.iter().map(|g| self.render(g)).collect())
            },
        }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn finite(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            Kind::Finite(fg) => Some(fg),
            _ => None,
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.kind, Kind::Integers)
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            Kind::Integers | Kind::Lattice(_) | Kind::DirectSum(_) => true,
            Kind::Free(rank) => *rank == 1,
            Kind::Finite(fg) => (0..fg.order()).all(|a| (0..fg.order()).all(|b| fg.mul(a, b) == fg.mul(b, a))),
        }
    }

    pub fn uses_default_generators(&self) -> bool {
        self.default_gens
    }

    /// The generating set Γ, identity included, in canonical order.
    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            Kind::Integers => Element::Int(0),
            Kind::Lattice(d) => Element::Vector(vec![0; *d]),
            Kind::Free(_) => Element::Word(Vec::new()),
            Kind::Finite(_) => Element::Index(0),
            Kind::DirectSum(m) => Element::Residues(vec![0; m.len()]),
        }
    }

    /// Check that `g` is a canonical element of this group.
    pub fn validate(&self, g: &Element) -> Result<()> {
        let ok = match (&self.kind, g) {
            (Kind::Integers, Element::Int(_)) => true,
            (Kind::Lattice(d), Element::Vector(v)) => v.len() == *d,
            (Kind::Free(rank), Element::Word(w)) => {
                if w.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > *rank) {
                    return Err(Error::Range(format!("letter outside rank {rank} in {g}")));
                }
                reduce_word(w) == *w
            }
            (Kind::Finite(fg), Element::Index(i)) => {
                if *i >= fg.order() {
                    return Err(Error::Range(format!("index {i} outside group of order {}", fg.order())));
                }
                true
            }
            (Kind::DirectSum(m), Element::Residues(r)) => {
                if r.len() != m.len() {
                    return Err(Error::Range(format!(
                        "residue vector {g} exceeds the support bound {}",
                        m.len()
                    )));
                }
                if r.iter().zip(m).any(|(a, b)| a >= b) {
                    return Err(Error::Range(format!("residue vector {g} not reduced")));
                }
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{g} is not a canonical element of {}", self.name())))
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Integers => "Z".into(),
            Kind::Lattice(d) => format!("Z^{d}"),
            Kind::Free(k) => format!("F{k}"),
            Kind::Finite(fg) => fg.name().to_string(),
            Kind::DirectSum(m) => {
                let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("DirectSum[{}]", parts.join(","))
            }
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.kind, a, b) {
            (Kind::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (Kind::Lattice(_), Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Kind::Free(_), Element::Word(x), Element::Word(y)) => {
                let mut w = x.clone();
                w.extend_from_slice(y);
                Element::Word(reduce_word(&w))
            }
            (Kind::Finite(fg), Element::Index(x), Element::Index(y)) => Element::Index(fg.mul(*x, *y)),
            (Kind::DirectSum(m), Element::Residues(x), Element::Residues(y)) => Element::Residues(
                x.iter().zip(y).zip(m).map(|((p, q), md)| (p + q) % md).collect(),
            ),
            _ => panic!("mul: element variant does not match group {}", self.name()),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (&self.kind, a) {
            (Kind::Integers, Element::Int(x)) => Element::Int(-x),
            (Kind::Lattice(_), Element::Vector(x)) => Element::Vector(x.iter().map(|p| -p).collect()),
            (Kind::Free(_), Element::Word(x)) => Element::Word(x.iter().rev().map(|l| -l).collect()),
            (Kind::Finite(fg), Element::Index(x)) => Element::Index(fg.inv(*x)),
            (Kind::DirectSum(m), Element::Residues(x)) => {
                Element::Residues(x.iter().zip(m).map(|(p, md)| (md - p) % md).collect())
            }
            _ => panic!("inv: element variant does not match group {}", self.name()),
        }
    }

    /// Canonical text form used in reports.
    pub fn render(&self, g: &Element) -> String {
        match (&self.kind, g) {
            (Kind::Finite(fg), Element::Index(i)) if *i < fg.order() => fg.label(*i).to_string(),
            _ => g.to_string(),
        }
    }

    /// Parse the canonical text form.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let bad = || Error::Invalid(format!("cannot parse '{text}' as an element of {}", self.name()));
        let t = text.trim();
        let numbers = |s: &str| -> Result<Vec<i64>> {
            s.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let g = match &self.kind {
            Kind::Integers => Element::Int(t.parse().map_err(|_| bad())?),
            Kind::Lattice(_) => {
                let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
                Element::Vector(numbers(inner)?)
            }
            Kind::Free(_) => Element::Word(parse_word(t).ok_or_else(bad)?),
            Kind::Finite(fg) => match fg.index_of(t) {
                Some(i) => Element::Index(i),
                None => {
                    let i = t.strip_prefix('#').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    Element::Index(i)
                }
            },
            Kind::DirectSum(_) => {
                let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
                let v = numbers(inner)?;
                if v.iter().any(|&x| x < 0 || x > u32::MAX as i64) {
                    return Err(bad());
                }
                Element::Residues(v.into_iter().map(|x| x as u32).collect())
            }
        };
        self.validate(&g)?;
        Ok(g)
    }

    fn generates(&self) -> Result<bool> {
        Ok(match &self.kind {
            Kind::Integers => {
                let g = self.gens.iter().filter_map(Element::as_int).fold(0i64, |a, b| num_integer::gcd(a, b));
                g == 1
            }
            Kind::Lattice(d) => {
                let rows: Vec<Vec<i64>> = self
                    .gens
                    .iter()
                    .map(|g| match g {
                        Element::Vector(v) => v.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                lattice::index_of_span(&rows, *d) == Some(1)
            }
            Kind::DirectSum(m) => {
                let k = m.len();
                let mut rows: Vec<Vec<i64>> = self
                    .gens
                    .iter()
                    .map(|g| match g {
                        Element::Residues(r) => r.iter().map(|&x| x as i64).collect(),
                        _ => unreachable!(),
                    })
                    .collect();
                for (i, &md) in m.iter().enumerate() {
                    let mut row = vec![0; k];
                    row[i] = md as i64;
                    rows.push(row);
                }
                lattice::index_of_span(&rows, k) == Some(1)
            }
            Kind::Finite(fg) => {
                let gens: Vec<usize> = self
                    .gens
                    .iter()
                    .map(|g| match g {
                        Element::Index(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                fg.generated(&gens).len() == fg.order()
            }
            Kind::Free(rank) => {
                // Every basis letter must be reachable within a bounded search.
                let caps = Caps::default();
                let mut ok = true;
                for i in 0..*rank {
                    let letter = Element::Word(vec![i as i32 + 1]);
                    if self.word_length_bounded(&letter, 8, &caps)?.is_none() {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        })
    }

    /// Closed-form length for the default generating sets.
    fn closed_form_length(&self, g: &Element) -> usize {
        match (&self.kind, g) {
            (Kind::Integers, Element::Int(n)) => n.unsigned_abs() as usize,
            (Kind::Lattice(_), Element::Vector(v)) => v.iter().map(|c| c.unsigned_abs() as usize).sum(),
            (Kind::Free(_), Element::Word(w)) => w.len(),
            (Kind::Finite(_), Element::Index(i)) => usize::from(*i != 0),
            (Kind::DirectSum(m), Element::Residues(r)) => {
                r.iter().zip(m).map(|(&a, &md)| a.min(md - a) as usize).sum()
            }
            _ => unreachable!("validated"),
        }
    }

    /// `|g|`: the least `r` with `g ∈ Γ^r`.
    pub fn word_length(&self, g: &Element, caps: &Caps) -> Result<usize> {
        self.validate(g)?;
        if self.default_gens {
            Ok(self.closed_form_length(g))
        } else {
            self.word_length_bfs(g, caps)
        }
    }

    /// `|g|` by breadth-first search of the Cayley graph, whatever Γ is.
    pub fn word_length_bfs(&self, g: &Element, caps: &Caps) -> Result<usize> {
        self.validate(g)?;
        match self.word_length_bounded(g, usize::MAX, caps)? {
            Some(n) => Ok(n),
            None => Err(Error::Domain(format!("{} not reachable from the identity", self.render(g)))),
        }
    }

    /// `Some(|g|)` if `|g| ≤ bound`, found by search.
    fn word_length_bounded(&self, g: &Element, bound: usize, caps: &Caps) -> Result<Option<usize>> {
        let e = self.identity();
        if *g == e {
            return Ok(Some(0));
        }
        let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
        let mut frontier = vec![e];
        let mut r = 0;
        while !frontier.is_empty() && r < bound {
            r += 1;
            let mut next = Vec::new();
            for x in &frontier {
                for s in &self.gens {
                    let y = self.mul(x, s);
                    if y == *g {
                        return Ok(Some(r));
                    }
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if seen.len() > caps.ball_elements {
                return Err(Error::Resource(format!(
                    "length search for {} passed {} elements",
                    self.render(g),
                    caps.ball_elements
                )));
            }
            frontier = next;
        }
        Ok(None)
    }

    /// Whether `|g| ≤ bound`.
    pub fn length_at_most(&self, g: &Element, bound: usize, caps: &Caps) -> Result<bool> {
        if self.default_gens {
            Ok(self.closed_form_length(g) <= bound)
        } else {
            Ok(self.word_length_bounded(g, bound, caps)?.is_some())
        }
    }

    /// The spheres `S_0 = {e}, S_1, …, S_r` by breadth-first search.
    pub fn spheres(&self, r: usize, caps: &Caps) -> Result<Vec<Vec<Element>>> {
        let e = self.identity();
        let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
        let mut spheres = vec![vec![e]];
        for _ in 0..r {
            let mut next = BTreeSet::new();
            for x in spheres.last().expect("non-empty") {
                for s in &self.gens {
                    let y = self.mul(x, s);
                    if !seen.contains(&y) {
                        next.insert(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            seen.extend(next.iter().cloned());
            if seen.len() > caps.ball_elements {
                return Err(Error::Resource(format!(
                    "ball of radius {r} in {} exceeds {} elements",
                    self.name(),
                    caps.ball_elements
                )));
            }
            spheres.push(next.into_iter().collect());
        }
        Ok(spheres)
    }

    /// `B_r`: the non-identity elements of length at most `r`.
    pub fn ball(&self, r: usize, caps: &Caps) -> Result<ElementSet> {
        if r == 0 {
            return Err(Error::Precondition("ball radius must be at least 1".into()));
        }
        let spheres = self.spheres(r, caps)?;
        let elements = spheres.into_iter().skip(1).flatten().collect();
        Ok(ElementSet { elements, radius: Some(r) })
    }

    /// `Γ^n = B_n ∪ {e}`, listed by length and then in canonical order.
    pub fn gamma_power(&self, n: usize, caps: &Caps) -> Result<Vec<Element>> {
        Ok(self.spheres(n, caps)?.into_iter().flatten().collect())
    }

    /// `K(g) = Γ^{|g|-1}·g`.
    pub fn k_set(&self, g: &Element, caps: &Caps) -> Result<ElementSet> {
        let n = self.word_length(g, caps)?;
        if n == 0 {
            return Err(Error::Domain("K(g) is defined only for g != e".into()));
        }
        let gamma = self.gamma_power(n - 1, caps)?;
        let elements: BTreeSet<Element> = gamma.iter().map(|h| self.mul(h, g)).collect();
        debug_assert!(!elements.contains(&self.identity()));
        Ok(ElementSet::new(elements))
    }

    /// Product set `A·B`, bounded by the ball cap.
    pub fn product_set(&self, a: &BTreeSet<Element>, b: &BTreeSet<Element>, caps: &Caps) -> Result<BTreeSet<Element>> {
        let mut out = BTreeSet::new();
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
            if out.len() > caps.ball_elements {
                return Err(Error::Resource(format!("product set exceeds {} elements", caps.ball_elements)));
            }
        }
        Ok(out)
    }
}

fn default_generators(kind: &Kind) -> Vec<Element> {
    let mut gens = BTreeSet::new();
    match kind {
        Kind::Integers => {
            gens.extend([Element::Int(-1), Element::Int(0), Element::Int(1)]);
        }
        Kind::Lattice(d) => {
            gens.insert(Element::Vector(vec![0; *d]));
            for i in 0..*d {
                for s in [-1, 1] {
                    let mut v = vec![0; *d];
                    v[i] = s;
                    gens.insert(Element::Vector(v));
                }
            }
        }
        Kind::Free(rank) => {
            gens.insert(Element::Word(Vec::new()));
            for i in 0..*rank as i32 {
                gens.insert(Element::Word(vec![i + 1]));
                gens.insert(Element::Word(vec![-(i + 1)]));
            }
        }
        Kind::Finite(fg) => {
            gens.extend((0..fg.order()).map(Element::Index));
        }
        Kind::DirectSum(m) => {
            gens.insert(Element::Residues(vec![0; m.len()]));
            for (i, &md) in m.iter().enumerate() {
                for r in [1, md - 1] {
                    let mut v = vec![0; m.len()];
                    v[i] = r;
                    gens.insert(Element::Residues(v));
                }
            }
        }
    }
    gens.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn ints(v: &[i64]) -> BTreeSet<Element> {
        v.iter().map(|&n| Element::Int(n)).collect()
    }

    fn vecs(v: &[(i64, i64)]) -> BTreeSet<Element> {
        v.iter().map(|&(a, b)| Element::Vector(vec![a, b])).collect()
    }

    #[test]
    fn word_length_examples() {
        let z = GroupSpec::integers();
        assert_eq!(z.word_length(&Element::Int(5), &caps()).unwrap(), 5);
        assert_eq!(z.word_length(&Element::Int(0), &caps()).unwrap(), 0);
        let l2 = GroupSpec::lattice(2);
        let g = Element::Vector(vec![3, -4]);
        assert_eq!(l2.word_length(&g, &caps()).unwrap(), 7);
        assert_eq!(l2.word_length_bfs(&g, &caps()).unwrap(), 7);
        let f2 = GroupSpec::free_group(2);
        assert_eq!(f2.word_length(&f2.identity(), &caps()).unwrap(), 0);
    }

    #[test]
    fn word_length_range_error_outside_support() {
        let g = GroupSpec::new(GroupDescriptor::DirectSumCyclic { moduli: vec![2, 2] }).unwrap();
        let err = g.word_length(&Element::Residues(vec![0, 1, 1]), &caps()).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn ball_examples() {
        let z = GroupSpec::integers();
        assert_eq!(z.ball(2, &caps()).unwrap().elements, ints(&[-2, -1, 1, 2]));
        assert_eq!(GroupSpec::free_group(2).ball(2, &caps()).unwrap().len(), 16);
        let l2 = GroupSpec::lattice(2);
        assert_eq!(
            l2.ball(1, &caps()).unwrap().elements,
            vecs(&[(1, 0), (-1, 0), (0, 1), (0, -1)])
        );
        assert!(matches!(z.ball(0, &caps()), Err(Error::Precondition(_))));
    }

    #[test]
    fn ball_cap_is_a_resource_error() {
        let tight = Caps { ball_elements: 10, ..Caps::default() };
        assert!(matches!(GroupSpec::free_group(2).ball(3, &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn k_set_examples() {
        let z = GroupSpec::integers();
        assert_eq!(z.k_set(&Element::Int(5), &caps()).unwrap().elements, ints(&[1, 2, 3, 4, 5, 6, 7, 8, 9]));
        let f2 = GroupSpec::free_group(2);
        let a = Element::Word(vec![1]);
        assert_eq!(f2.k_set(&a, &caps()).unwrap().elements, BTreeSet::from([a]));
        let l2 = GroupSpec::lattice(2);
        assert_eq!(
            l2.k_set(&Element::Vector(vec![2, 0]), &caps()).unwrap().elements,
            vecs(&[(1, 0), (2, 0), (3, 0), (2, 1), (2, -1)])
        );
        assert!(matches!(z.k_set(&Element::Int(0), &caps()), Err(Error::Domain(_))));
    }

    #[test]
    fn custom_generators_are_checked() {
        let desc = GroupDescriptor::Integers;
        let gens = vec![Element::Int(-2), Element::Int(0), Element::Int(2)];
        assert!(GroupSpec::with_generators(desc.clone(), gens).is_err());
        let gens = vec![Element::Int(-3), Element::Int(-2), Element::Int(0), Element::Int(2), Element::Int(3)];
        let z = GroupSpec::with_generators(desc.clone(), gens).unwrap();
        assert!(!z.uses_default_generators());
        assert_eq!(z.word_length(&Element::Int(1), &caps()).unwrap(), 2);
        assert_eq!(z.word_length(&Element::Int(7), &caps()).unwrap(), 3);
        let not_symmetric = vec![Element::Int(0), Element::Int(1)];
        assert!(GroupSpec::with_generators(desc, not_symmetric).is_err());
    }

    #[test]
    fn parse_and_render_round_trip() {
        let s3 = GroupSpec::new(GroupDescriptor::Symmetric { degree: 3 }).unwrap();
        let t = s3.parse("(12)").unwrap();
        assert_eq!(s3.render(&t), "(12)");
        let l2 = GroupSpec::lattice(2);
        assert_eq!(l2.parse("(3,-4)").unwrap(), Element::Vector(vec![3, -4]));
        let f2 = GroupSpec::free_group(2);
        assert_eq!(f2.render(&f2.parse("aba^-1").unwrap()), "aba^-1");
        assert!(f2.parse("aa^-1").is_err());
    }

    #[test]
    fn document_round_trip() {
        let doc: GroupDocument = serde_json::from_str(r#"{"kind":"lattice","dim":2}"#).unwrap();
        let g = GroupSpec::from_document(&doc).unwrap();
        assert_eq!(g.document(), doc);
        let doc: GroupDocument =
            serde_json::from_str(r#"{"kind":"integers","generators":["-3","-2","0","2","3"]}"#).unwrap();
        let g = GroupSpec::from_document(&doc).unwrap();
        assert_eq!(g.generators().len(), 5);
    }
}
