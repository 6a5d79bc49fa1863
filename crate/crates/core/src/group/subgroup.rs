use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{lattice, Element, ElementSet, GroupSpec, Kind};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::verdict::{Status, Verdict};

/// A finite-index subgroup, described in the form natural to its group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subgroup {
    /// The whole group.
    Whole,
    /// `κ·Z` inside `Z`.
    Multiples { kappa: u64 },
    /// The sublattice spanned by the rows of `basis`.
    Sublattice { basis: Vec<Vec<i64>> },
    /// An explicit element subset of a finite group, as table indices.
    Elements { members: BTreeSet<usize> },
    /// `⊕ step_i·Z/m_i` inside `⊕ Z/m_i`, each `step_i` dividing `m_i`.
    SubModuli { steps: Vec<u32> },
}

impl Subgroup {
    /// Check the description against `group` and return its canonical form.
    pub fn canonical(&self, group: &GroupSpec) -> Result<Subgroup> {
        match (&group.kind, self) {
            (_, Subgroup::Whole) => Ok(Subgroup::Whole),
            (Kind::Integers, Subgroup::Multiples { kappa }) => {
                if *kappa == 0 {
                    return Err(Error::Domain("0·Z has infinite index".into()));
                }
                Ok(if *kappa == 1 { Subgroup::Whole } else { self.clone() })
            }
            (Kind::Lattice(d), Subgroup::Sublattice { basis }) => {
                if basis.iter().any(|r| r.len() != *d) {
                    return Err(Error::Invalid(format!("basis rows must have {d} coordinates")));
                }
                let h = lattice::hnf(basis, *d);
                match lattice::index_of_span(&h, *d) {
                    None => Err(Error::Domain("sublattice has infinite index".into())),
                    Some(1) => Ok(Subgroup::Whole),
                    Some(_) => Ok(Subgroup::Sublattice { basis: h }),
                }
            }
            (Kind::Finite(fg), Subgroup::Elements { members }) => {
                if members.iter().any(|&i| i >= fg.order()) || !fg.is_subgroup(members) {
                    return Err(Error::Invalid("element subset is not a subgroup".into()));
                }
                Ok(if members.len() == fg.order() { Subgroup::Whole } else { self.clone() })
            }
            (Kind::DirectSum(m), Subgroup::SubModuli { steps }) => {
                if steps.len() != m.len() || steps.iter().zip(m).any(|(&s, &md)| s == 0 || md % s != 0) {
                    return Err(Error::Invalid("each step must divide its modulus".into()));
                }
                Ok(if steps.iter().all(|&s| s == 1) { Subgroup::Whole } else { self.clone() })
            }
            (Kind::Free(_), _) => Err(Error::Domain(
                "only the whole group is supported as a finite-index subgroup of a free group".into(),
            )),
            _ => Err(Error::Invalid(format!("subgroup description does not fit {}", group.name()))),
        }
    }

    /// Membership of `g`, assuming the description is canonical for `g`'s group.
    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (Subgroup::Whole, _) => true,
            (Subgroup::Multiples { kappa }, Element::Int(n)) => n.rem_euclid(*kappa as i64) == 0,
            (Subgroup::Sublattice { basis }, Element::Vector(v)) => {
                lattice::contains(&lattice::hnf(basis, v.len()), v)
            }
            (Subgroup::Elements { members }, Element::Index(i)) => members.contains(i),
            (Subgroup::SubModuli { steps }, Element::Residues(r)) => r.iter().zip(steps).all(|(x, s)| x % s == 0),
            _ => false,
        }
    }

    /// Render for reports.
    pub fn describe(&self, group: &GroupSpec) -> String {
        match self {
            Subgroup::Whole => group.name(),
            Subgroup::Multiples { kappa } => format!("{kappa}Z"),
            Subgroup::Sublattice { basis } => {
                let rows: Vec<String> = basis.iter().map(|r| Element::Vector(r.clone()).to_string()).collect();
                format!("span{{{}}}", rows.join(","))
            }
            Subgroup::Elements { members } => {
                let labels: Vec<String> = members.iter().map(|&i| group.render(&Element::Index(i))).collect();
                format!("{{{}}}", labels.join(","))
            }
            Subgroup::SubModuli { steps } => {
                let parts: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
                format!("steps[{}]", parts.join(","))
            }
        }
    }
}

/// `[G : S]`.
pub fn subgroup_index(group: &GroupSpec, s: &Subgroup) -> Result<u64> {
    Ok(match (&group.kind, s.canonical(group)?) {
        (_, Subgroup::Whole) => 1,
        (_, Subgroup::Multiples { kappa }) => kappa,
        (Kind::Lattice(d), Subgroup::Sublattice { basis }) => {
            lattice::index_of_span(&basis, *d).expect("canonical sublattices have full rank")
        }
        (Kind::Finite(fg), Subgroup::Elements { members }) => (fg.order() / members.len()) as u64,
        (Kind::DirectSum(m), Subgroup::SubModuli { steps }) => {
            m.iter().zip(&steps).map(|(&md, &st)| (md / st) as u64).product()
        }
        _ => unreachable!("canonical form matches the group"),
    })
}

fn intersect_two(group: &GroupSpec, a: &Subgroup, b: &Subgroup) -> Subgroup {
    match (a, b) {
        (Subgroup::Whole, x) | (x, Subgroup::Whole) => x.clone(),
        (Subgroup::Multiples { kappa: p }, Subgroup::Multiples { kappa: q }) => Subgroup::Multiples { kappa: p.lcm(q) },
        (Subgroup::Sublattice { basis: x }, Subgroup::Sublattice { basis: y }) => {
            let d = x[0].len();
            Subgroup::Sublattice { basis: lattice::intersect(x, y, d) }
        }
        (Subgroup::Elements { members: x }, Subgroup::Elements { members: y }) => {
            Subgroup::Elements { members: x.intersection(y).copied().collect() }
        }
        (Subgroup::SubModuli { steps: x }, Subgroup::SubModuli { steps: y }) => {
            Subgroup::SubModuli { steps: x.iter().zip(y).map(|(p, q)| p.lcm(q)).collect() }
        }
        _ => unreachable!("both canonical for {}", group.name()),
    }
}

/// The intersection of finitely many finite-index subgroups.
///
/// The index bound `[G : ⋂ S_i] ≤ ∏ [G : S_i]` is checked on the result.
pub fn intersect_subgroups(group: &GroupSpec, list: &[Subgroup]) -> Result<Subgroup> {
    let mut acc = Subgroup::Whole;
    let mut bound: u128 = 1;
    for s in list {
        let c = s.canonical(group)?;
        bound *= subgroup_index(group, &c)? as u128;
        acc = intersect_two(group, &acc, &c);
    }
    let acc = acc.canonical(group)?;
    let index = subgroup_index(group, &acc)? as u128;
    if index > bound {
        return Err(Error::Invalid(format!("intersection index {index} exceeds the product bound {bound}")));
    }
    Ok(acc)
}

/// Whether `S` is invariant under conjugation by every generator.
pub fn is_normal(group: &GroupSpec, s: &Subgroup) -> Result<bool> {
    let s = s.canonical(group)?;
    match (&group.kind, &s) {
        (_, Subgroup::Whole) => Ok(true),
        (Kind::Finite(fg), Subgroup::Elements { members }) => Ok(group.generators().iter().all(|g| {
            let Element::Index(t) = g else { unreachable!() };
            members.iter().all(|&a| members.contains(&fg.mul(fg.mul(fg.inv(*t), a), *t)))
        })),
        _ => Ok(group.is_abelian()),
    }
}

/// The normal core `⋂_t t⁻¹·A·t`.
pub fn normal_core(group: &GroupSpec, a: &Subgroup) -> Result<Subgroup> {
    let a = a.canonical(group)?;
    let core = match (&group.kind, &a) {
        (Kind::Finite(fg), Subgroup::Elements { members }) => {
            let core: BTreeSet<usize> = members
                .iter()
                .copied()
                .filter(|&x| (0..fg.order()).all(|t| members.contains(&fg.mul(fg.mul(fg.inv(t), x), t))))
                .collect();
            Subgroup::Elements { members: core }.canonical(group)?
        }
        // Abelian groups, and the whole group anywhere.
        _ => a.clone(),
    };
    if !is_normal(group, &core)? {
        return Err(Error::Invalid("computed core is not normal".into()));
    }
    Ok(core)
}

/// Every subgroup of a finite group.
pub fn all_subgroups(group: &GroupSpec) -> Result<Vec<Subgroup>> {
    let fg = group.finite().ok_or_else(|| Error::Domain("subgroup enumeration needs a finite group".into()))?;
    fg.all_subgroups()
        .into_iter()
        .map(|members| Subgroup::Elements { members }.canonical(group))
        .collect()
}

/// `Ψ = Γ³ ∩ S`.
pub fn psi_set(group: &GroupSpec, s: &Subgroup, caps: &Caps) -> Result<ElementSet> {
    let s = s.canonical(group)?;
    let elements = group.gamma_power(3, caps)?.into_iter().filter(|g| s.contains(g)).collect();
    Ok(ElementSet::new(elements))
}

/// Exhaustive check of `Γ^n ∩ S ⊆ Ψ^n` for `1 ≤ n ≤ n_max`.
pub fn psi_containment_check(group: &GroupSpec, s: &Subgroup, n_max: usize, caps: &Caps) -> Result<Verdict> {
    let s = s.canonical(group)?;
    let psi = psi_set(group, &s, caps)?.elements;
    let base = Verdict::holds("psi_containment")
        .param("subgroup", s.describe(group))
        .param("n_max", n_max);
    let spheres = group.spheres(n_max, caps)?;
    let mut gamma_n: BTreeSet<Element> = spheres[0].iter().cloned().collect();
    let mut psi_n: BTreeSet<Element> = psi.clone();
    for n in 1..=n_max {
        if let Some(sphere) = spheres.get(n) {
            gamma_n.extend(sphere.iter().cloned());
        }
        if n > 1 {
            psi_n = group.product_set(&psi_n, &psi, caps)?;
        }
        if let Some(g) = gamma_n.iter().find(|g| s.contains(g) && !psi_n.contains(g)) {
            return Ok(Verdict { status: Status::Fails, ..base }
                .cert("n", n)
                .cert("counterexample", group.render(g)));
        }
    }
    let psi_text: Vec<String> = psi.iter().map(|g| group.render(g)).collect();
    Ok(base.cert("psi", psi_text))
}

/// Whether `⟨Ψ⟩ ⊇ S ∩ B_r`.
///
/// The search walks `Ψ`-steps inside `Γ^{3r}`. A miss is reported as `Fails`
/// when the walk never tried to leave that region (so `⟨Ψ⟩` was fully
/// explored), and as `Inconclusive` otherwise.
pub fn psi_generates(group: &GroupSpec, s: &Subgroup, r: usize, caps: &Caps) -> Result<Verdict> {
    let s = s.canonical(group)?;
    let psi = psi_set(group, &s, caps)?.elements;
    let base = Verdict::holds("psi_generates").param("subgroup", s.describe(group)).param("radius", r);
    let bound = 3 * r;
    let e = group.identity();
    let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
    let mut frontier = vec![e];
    let mut truncated = false;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for p in &psi {
                let y = group.mul(x, p);
                if seen.contains(&y) {
                    continue;
                }
                if !group.length_at_most(&y, bound, caps)? {
                    truncated = true;
                    continue;
                }
                seen.insert(y.clone());
                next.push(y);
            }
        }
        if seen.len() > caps.ball_elements {
            return Ok(Verdict { status: Status::Inconclusive, ..base }.cert("exhausted", "ball_elements"));
        }
        frontier = next;
    }
    let targets = group.ball(r, caps)?.elements;
    let mut covered = 0usize;
    for g in targets.iter().filter(|g| s.contains(g)) {
        if !seen.contains(g) {
            let status = if truncated { Status::Inconclusive } else { Status::Fails };
            let v = Verdict { status, ..base }.cert("unreached", group.render(g));
            return Ok(if truncated { v.cert("exhausted", format!("search region Γ^{bound}")) } else { v });
        }
        covered += 1;
    }
    Ok(base.cert("covered", covered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;

    fn finite_descriptor(name: &str) -> Option<GroupDescriptor> {
        match name {
            "S3" => Some(GroupDescriptor::Symmetric { degree: 3 }),
            "S4" => Some(GroupDescriptor::Symmetric { degree: 4 }),
            "D4" => Some(GroupDescriptor::Dihedral { n: 4 }),
            _ => None,
        }
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn elements(group: &GroupSpec, labels: &[&str]) -> Subgroup {
        let fg = group.finite().unwrap();
        let gens: Vec<usize> = labels.iter().map(|l| fg.index_of(l).unwrap()).collect();
        Subgroup::Elements { members: fg.generated(&gens) }
    }

    #[test]
    fn indices() {
        let z = GroupSpec::integers();
        assert_eq!(subgroup_index(&z, &Subgroup::Multiples { kappa: 4 }).unwrap(), 4);
        let s3 = GroupSpec::new(finite_descriptor("S3").unwrap()).unwrap();
        assert_eq!(subgroup_index(&s3, &elements(&s3, &["(12)"])).unwrap(), 3);
        let l2 = GroupSpec::lattice(2);
        let s = Subgroup::Sublattice { basis: vec![vec![2, 0], vec![0, 2]] };
        assert_eq!(subgroup_index(&l2, &s).unwrap(), 4);
        let degenerate = Subgroup::Sublattice { basis: vec![vec![1, 1], vec![2, 2]] };
        assert!(matches!(subgroup_index(&l2, &degenerate), Err(Error::Domain(_))));
    }

    #[test]
    fn intersections() {
        let z = GroupSpec::integers();
        let two = Subgroup::Multiples { kappa: 2 };
        let three = Subgroup::Multiples { kappa: 3 };
        assert_eq!(intersect_subgroups(&z, &[two.clone(), three]).unwrap(), Subgroup::Multiples { kappa: 6 });
        assert_eq!(intersect_subgroups(&z, &[two.clone(), two.clone()]).unwrap(), two);
        let s3 = GroupSpec::new(finite_descriptor("S3").unwrap()).unwrap();
        let i = intersect_subgroups(&s3, &[elements(&s3, &["(12)"]), elements(&s3, &["(123)"])]).unwrap();
        assert_eq!(i, Subgroup::Elements { members: BTreeSet::from([0]) });
    }

    #[test]
    fn normal_cores() {
        let z = GroupSpec::integers();
        let three = Subgroup::Multiples { kappa: 3 };
        assert_eq!(normal_core(&z, &three).unwrap(), three);
        let s3 = GroupSpec::new(finite_descriptor("S3").unwrap()).unwrap();
        let core = normal_core(&s3, &elements(&s3, &["(12)"])).unwrap();
        assert_eq!(core, Subgroup::Elements { members: BTreeSet::from([0]) });
        let d4 = GroupSpec::new(finite_descriptor("D4").unwrap()).unwrap();
        let rotations = elements(&d4, &["r"]);
        assert_eq!(normal_core(&d4, &rotations).unwrap(), rotations);
    }

    #[test]
    fn psi_examples() {
        let z = GroupSpec::integers();
        let ints = |v: &[i64]| v.iter().map(|&n| Element::Int(n)).collect::<BTreeSet<_>>();
        assert_eq!(psi_set(&z, &Subgroup::Multiples { kappa: 2 }, &caps()).unwrap().elements, ints(&[-2, 0, 2]));
        assert_eq!(psi_set(&z, &Subgroup::Multiples { kappa: 3 }, &caps()).unwrap().elements, ints(&[-3, 0, 3]));
        assert_eq!(psi_set(&z, &Subgroup::Whole, &caps()).unwrap().elements, ints(&[-3, -2, -1, 0, 1, 2, 3]));
        for kappa in [2, 3] {
            let s = Subgroup::Multiples { kappa };
            assert!(psi_containment_check(&z, &s, 12, &caps()).unwrap().is_holds());
            assert!(psi_generates(&z, &s, 50, &caps()).unwrap().is_holds());
        }
    }

    #[test]
    fn psi_needs_the_subgroup_to_meet_gamma_cubed() {
        // Γ³ ∩ 4Z = {0}, so Ψ generates nothing.
        let z = GroupSpec::integers();
        let s = Subgroup::Multiples { kappa: 4 };
        let v = psi_containment_check(&z, &s, 12, &caps()).unwrap();
        assert!(v.is_fails());
        assert_eq!(v.cert_u64("n"), Some(4));
        assert!(psi_generates(&z, &s, 50, &caps()).unwrap().is_fails());
    }

    #[test]
    fn psi_on_symmetric_group() {
        let s3 = GroupSpec::new(finite_descriptor("S3").unwrap()).unwrap();
        let s = elements(&s3, &["(123)"]);
        assert!(psi_containment_check(&s3, &s, 6, &caps()).unwrap().is_holds());
    }
}
