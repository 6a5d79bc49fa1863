//! Finite-horizon analyzers with three-valued, replayable verdicts.
//!
//! A `Z`-flow point with a [`PeriodCertificate`] has an eventually periodic
//! cylinder itinerary, so once the horizon covers the threshold plus two
//! periods on each side the return set is known exactly. Only such exact
//! scans may produce a `Fails`; everything else is horizon-bounded evidence.

mod closure;
mod minimal;
mod modulus;
mod proximal;
mod returns;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cantor::{ClopenSet, CoordinateScheme, IndexSet};
use crate::error::{Error, Result};
use crate::flows::{FlowSystem, PeriodCertificate, State};

pub use closure::{
    invariant_core, orbit_cylinders, orbit_map_usc_verdict, orbit_relation_symmetry_verdict, translate_cover, CoreApprox,
    OrbitClosureApprox, TranslateCover,
};
pub use minimal::{complexity, minimality_verdict, MinimalityReport};
pub use modulus::{equicontinuity_verdict, ModulusTable};
pub use proximal::{proximal_pair_verdict, regional_proximal_check, ProximalityWitness, WitnessEntry};
pub use returns::{
    ap_verdict, escape_length, pointwise_period, recurrent_type1_general, recurrent_type1_verdict,
    recurrent_type2_verdict, regular_ap_verdict, return_times, weak_rigidity_verdict, Escape, ReturnTimeSet,
};

/// Integers ordered `0, 1, -1, 2, -2, …` up to `|n| ≤ h`.
pub(crate) fn z_order(h: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=h).flat_map(|k| [k, -k]))
}

/// Depth of the smallest depth cylinder whose window contains `[lo, lo + len)`.
pub(crate) fn depth_covering(scheme: &CoordinateScheme, lo: i64, len: usize) -> usize {
    if len == 0 {
        return 1;
    }
    let hi = lo + len as i64 - 1;
    match scheme.index {
        IndexSet::TwoSided => lo.unsigned_abs().max(hi.unsigned_abs()) as usize + 1,
        IndexSet::OneSided { start } => (hi - start + 1).max(1) as usize,
    }
}

pub(crate) fn point_of<'a>(flow: &FlowSystem, x: &'a State) -> Result<&'a crate::cantor::Point> {
    x.as_point().ok_or_else(|| Error::Precondition(format!("{} analyzers need a sequence point", flow.id())))
}

pub(crate) fn require_z(flow: &FlowSystem, analyzer: &str) -> Result<()> {
    if flow.is_z_flow() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{analyzer} needs an integer action; {} is a word system", flow.id())))
    }
}

pub(crate) fn require_depth(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::Precondition("depth must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn in_set(flow: &FlowSystem, u: &ClopenSet, x: &State) -> Result<bool> {
    Ok(u.contains(point_of(flow, x)?))
}

/// The set of `n ∈ [-h, h]` where a cylinder-determined predicate holds along
/// the orbit of `x`, together with exactness information.
#[derive(Clone, Debug)]
pub(crate) struct ZScan {
    pub hits: BTreeSet<i64>,
    /// Present when the scan is exact: hits beyond `±threshold` repeat with `period`.
    pub exact: Option<PeriodCertificate>,
}

impl ZScan {
    /// Scan `pred(f^n x)` for `|n| ≤ h`. `depth` must bound the cylinder the predicate reads.
    pub fn run(
        flow: &FlowSystem,
        x: &State,
        depth: usize,
        h: i64,
        mut pred: impl FnMut(&State) -> Result<bool>,
    ) -> Result<ZScan> {
        let mut hits = BTreeSet::new();
        for n in -h..=h {
            if pred(&flow.act_int(n, x)?)? {
                hits.insert(n);
            }
        }
        let exact = flow
            .period_certificate(x, depth)
            .filter(|c| c.threshold.saturating_add(2 * c.period) <= h as u64);
        Ok(ZScan { hits, exact })
    }

    pub fn hits_in(&self, lo: i64, hi: i64) -> impl Iterator<Item = i64> + '_ {
        self.hits.range(lo..=hi).copied()
    }

    /// With an exact scan: whether hits recur forever in the positive and negative directions.
    pub fn recurs(&self) -> Option<(bool, bool)> {
        let c = self.exact?;
        let (t, p) = (c.threshold as i64, c.period as i64);
        let right = self.hits_in(t, t + p - 1).next().is_some();
        let left = self.hits_in(-t - p + 1, -t).next().is_some();
        Some((right, left))
    }

    pub fn span(&self) -> Option<i64> {
        self.exact.map(|c| (c.threshold + 2 * c.period) as i64)
    }
}

#[derive(Serialize)]
pub(crate) struct Exactness {
    pub threshold: u64,
    pub period: u64,
}

impl From<PeriodCertificate> for Exactness {
    fn from(c: PeriodCertificate) -> Self {
        Exactness { threshold: c.threshold, period: c.period }
    }
}
