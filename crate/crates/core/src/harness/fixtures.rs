use super::config::SystemEntry;
use crate::error::Result;
use crate::flows::{FlowSystem, PointSpec, State, SystemSpec};

/// A system with its labelled sample points.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub flow: FlowSystem,
    pub points: Vec<(String, State)>,
}

impl Fixture {
    pub fn named(name: &str) -> Result<Fixture> {
        let flow = FlowSystem::named(name)?;
        let points = default_points(&flow)?;
        Ok(Fixture { flow, points })
    }

    pub fn from_entry(entry: &SystemEntry) -> Result<Fixture> {
        let mut flow = FlowSystem::new(&entry.id, entry.spec.clone())?;
        let meta = flow.metadata_mut();
        if !entry.description.is_empty() {
            meta.description = entry.description.clone();
        }
        meta.expect.extend(entry.expect.iter().cloned());
        meta.assertions.extend(entry.assertions.iter().cloned());
        let points = if entry.points.is_empty() {
            default_points(&flow)?
        } else {
            entry.points.iter().map(|p| Ok((p.label(), p.spec()?.build(&flow)?))).collect::<Result<_>>()?
        };
        Ok(Fixture { flow, points })
    }

    pub fn id(&self) -> &str {
        self.flow.id()
    }
}

fn finite(lo: i64, symbols: &[u32]) -> PointSpec {
    PointSpec::Finite { lo, symbols: symbols.to_vec(), fill: 0, sheet: 0 }
}

/// Sample points for each kind of system.
pub(crate) fn default_points(flow: &FlowSystem) -> Result<Vec<(String, State)>> {
    let specs: Vec<(String, PointSpec)> = match flow.spec() {
        SystemSpec::FullShift { .. } => vec![
            ("single-one".into(), PointSpec::SingleOne { at: 0 }),
            ("zero".into(), PointSpec::Constant { symbol: 0, sheet: 0 }),
        ],
        SystemSpec::ThueMorse | SystemSpec::Substitution { .. } => {
            vec![("thue-morse".into(), PointSpec::ThueMorse { half: 256 })]
        }
        SystemSpec::Periodic { word } => {
            let window: Vec<u32> = word.iter().copied().cycle().take(word.len() * 128).collect();
            let start = -((word.len() * 64) as i64);
            vec![(
                "periodic".into(),
                PointSpec::General { window_start: start, window, left: vec![0], right: vec![0], sheet: 0 },
            )]
        }
        SystemSpec::Forbidden { .. } => vec![("zero".into(), PointSpec::Constant { symbol: 0, sheet: 0 })],
        SystemSpec::Odometer { .. } => vec![
            ("zero".into(), PointSpec::Constant { symbol: 0, sheet: 0 }),
            ("ones".into(), PointSpec::Constant { symbol: 1, sheet: 0 }),
            ("101".into(), finite(0, &[1, 0, 1])),
        ],
        SystemSpec::SuccessorMap => vec![
            ("zero".into(), PointSpec::Constant { symbol: 0, sheet: 0 }),
            ("(1,0,0,...)".into(), finite(2, &[1])),
            ("(0,2,1,0,...)".into(), finite(2, &[0, 2, 1])),
        ],
        SystemSpec::TwoCopy { .. } => vec![
            ("o(+1)".into(), PointSpec::Constant { symbol: 0, sheet: 0 }),
            ("o(-1)".into(), PointSpec::Constant { symbol: 0, sheet: 1 }),
            ("xi(2,+1)".into(), PointSpec::Xi { i: 2, sheet: 0 }),
        ],
        SystemSpec::Mcmahon { .. } => vec![
            ("(o,0)".into(), PointSpec::Constant { symbol: 0, sheet: 0 }),
            ("(y_2,0)".into(), PointSpec::Y { j: 2, primed: false, delta: 0 }),
            ("(y_2',1)".into(), PointSpec::Y { j: 2, primed: true, delta: 1 }),
        ],
        SystemSpec::CircleStack { .. } => vec![
            ("circle(1,0)".into(), PointSpec::Circle { level: 1, angle: (0, 1) }),
            ("circle(3,1/5)".into(), PointSpec::Circle { level: 3, angle: (1, 5) }),
            ("limit(1/3)".into(), PointSpec::Circle { level: 0, angle: (1, 3) }),
        ],
        SystemSpec::ComponentFactor { .. } => Vec::new(),
    };
    specs.into_iter().map(|(label, spec)| Ok((label, spec.build(flow)?))).collect()
}
