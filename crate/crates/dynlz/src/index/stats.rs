use std::cell::{Cell, RefCell};

use serde::{Deserialize, Serialize};

/// Countable index operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Primitive {
    Lcp,
    Lcs,
    Ipm,
    Exists,
    FirstOcc,
    LastOcc,
    Clusters,
    /// Windows scanned inside `clusters`; informational, not a primitive call.
    ClusterWindows,
    Period,
}

/// Which part of the engine issued a call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Build,
    SuperLight,
    Light,
    HeavyL,
    HeavyR,
    Query,
    Other,
}

impl Phase {
    pub const ALL: [Phase; 7] =
        [Phase::Build, Phase::SuperLight, Phase::Light, Phase::HeavyL, Phase::HeavyR, Phase::Query, Phase::Other];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Phase::Build => "build",
            Phase::SuperLight => "superlight",
            Phase::Light => "light",
            Phase::HeavyL => "heavy_l",
            Phase::HeavyR => "heavy_r",
            Phase::Query => "query",
            Phase::Other => "other",
        }
    }
}

/// Per-primitive call counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub lcp: u64,
    pub lcs: u64,
    pub ipm: u64,
    pub exists: u64,
    pub first_occ: u64,
    pub last_occ: u64,
    pub clusters: u64,
    pub cluster_windows: u64,
    pub period: u64,
}

impl Counts {
    /// Calls to the unit-cost primitives the engine is charged for.
    pub fn primitive_calls(&self) -> u64 {
        self.lcp + self.lcs + self.ipm + self.exists + self.first_occ + self.last_occ + self.clusters
    }

    /// Like [`Counts::primitive_calls`] but charging `clusters` per window.
    pub fn weighted_calls(&self) -> u64 {
        self.primitive_calls() - self.clusters + self.cluster_windows
    }

    pub fn add(&mut self, o: &Counts) {
        self.lcp += o.lcp;
        self.lcs += o.lcs;
        self.ipm += o.ipm;
        self.exists += o.exists;
        self.first_occ += o.first_occ;
        self.last_occ += o.last_occ;
        self.clusters += o.clusters;
        self.cluster_windows += o.cluster_windows;
        self.period += o.period;
    }

    fn bump(&mut self, p: Primitive, by: u64) {
        let c = match p {
            Primitive::Lcp => &mut self.lcp,
            Primitive::Lcs => &mut self.lcs,
            Primitive::Ipm => &mut self.ipm,
            Primitive::Exists => &mut self.exists,
            Primitive::FirstOcc => &mut self.first_occ,
            Primitive::LastOcc => &mut self.last_occ,
            Primitive::Clusters => &mut self.clusters,
            Primitive::ClusterWindows => &mut self.cluster_windows,
            Primitive::Period => &mut self.period,
        };
        *c += by;
    }
}

/// Counters broken down by phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexStats {
    pub phases: [Counts; 7],
}

impl IndexStats {
    pub fn phase(&self, phase: Phase) -> &Counts {
        &self.phases[phase.slot()]
    }

    pub fn total(&self) -> Counts {
        let mut t = Counts::default();
        for c in &self.phases {
            t.add(c);
        }
        t
    }

    pub fn add(&mut self, o: &IndexStats) {
        for (a, b) in self.phases.iter_mut().zip(o.phases.iter()) {
            a.add(b);
        }
    }

    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &IndexStats) -> IndexStats {
        let mut out = *self;
        for (a, b) in out.phases.iter_mut().zip(earlier.phases.iter()) {
            a.lcp -= b.lcp;
            a.lcs -= b.lcs;
            a.ipm -= b.ipm;
            a.exists -= b.exists;
            a.first_occ -= b.first_occ;
            a.last_occ -= b.last_occ;
            a.clusters -= b.clusters;
            a.cluster_windows -= b.cluster_windows;
            a.period -= b.period;
        }
        out
    }
}

/// Interior-mutable counters owned by a backend.
#[derive(Debug, Default)]
pub(crate) struct Recorder {
    phase: Cell<Option<Phase>>,
    stats: RefCell<IndexStats>,
}

impl Clone for Recorder {
    fn clone(&self) -> Self {
        Recorder { phase: Cell::new(self.phase.get()), stats: RefCell::new(*self.stats.borrow()) }
    }
}

impl Recorder {
    pub(crate) fn bump(&self, p: Primitive) {
        self.bump_by(p, 1);
    }

    pub(crate) fn bump_by(&self, p: Primitive, by: u64) {
        let phase = self.phase.get().unwrap_or(Phase::Other);
        self.stats.borrow_mut().phases[phase.slot()].bump(p, by);
    }

    pub(crate) fn set_phase(&self, phase: Phase) {
        self.phase.set(Some(phase));
    }

    pub(crate) fn snapshot(&self) -> IndexStats {
        *self.stats.borrow()
    }

    pub(crate) fn reset(&self) {
        *self.stats.borrow_mut() = IndexStats::default();
    }
}
