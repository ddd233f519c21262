use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Estimated,
    Real,
}

/// A configuration (one entry index per node) with its objectives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoEntry {
    /// Maximized.
    pub qor: f64,
    /// Minimized.
    pub area: f64,
    pub choice: Vec<usize>,
    pub provenance: Provenance,
}

/// `(qor_a, area_a)` dominates `(qor_b, area_b)`.
pub fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 >= b.0 && a.1 <= b.1 && (a.0 > b.0 || a.1 < b.1)
}

/// Archive of mutually non-dominated entries, kept sorted by increasing
/// area and hence strictly increasing qor.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParetoSet {
    entries: Vec<ParetoEntry>,
}

impl ParetoSet {
    pub fn new() -> ParetoSet {
        ParetoSet::default()
    }

    /// Non-dominated subset of `entries`; of equal-objective duplicates the
    /// first one is kept.
    pub fn from_entries(entries: impl IntoIterator<Item = ParetoEntry>) -> ParetoSet {
        let mut s = ParetoSet::new();
        for e in entries {
            s.insert_entry(e);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ParetoEntry] {
        &self.entries
    }

    pub fn objectives(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(|e| (e.qor, e.area)).collect()
    }

    /// Inserts the candidate unless an entry dominates or equals it, and
    /// removes every entry it dominates. Returns whether it was inserted.
    pub fn insert(&mut self, qor: f64, area: f64, choice: &[usize], provenance: Provenance) -> bool {
        if !(qor.is_finite() && area.is_finite()) || self.rejects(qor, area) {
            return false;
        }
        self.place(ParetoEntry {
            qor,
            area,
            choice: choice.to_vec(),
            provenance,
        });
        true
    }

    pub fn insert_entry(&mut self, e: ParetoEntry) -> bool {
        if !(e.qor.is_finite() && e.area.is_finite()) || self.rejects(e.qor, e.area) {
            return false;
        }
        self.place(e);
        true
    }

    fn rejects(&self, qor: f64, area: f64) -> bool {
        let j = self.entries.partition_point(|e| e.area <= area);
        j > 0 && self.entries[j - 1].qor >= qor
    }

    fn place(&mut self, e: ParetoEntry) {
        let pos = self.entries.partition_point(|x| x.area < e.area);
        let end = pos + self.entries[pos..].partition_point(|x| x.qor <= e.qor);
        self.entries.splice(pos..end, std::iter::once(e));
    }

    /// Whether no entry dominates or duplicates another.
    pub fn is_antichain(&self) -> bool {
        let o = self.objectives();
        o.iter().enumerate().all(|(i, &a)| {
            o.iter()
                .enumerate()
                .all(|(j, &b)| i == j || (!dominates(a, b) && a != b))
        })
    }

    /// Uniformly chosen entry; the set must be non-empty.
    pub fn pick<R: rand::Rng>(&self, rng: &mut R) -> &ParetoEntry {
        &self.entries[rng.gen_range(0..self.entries.len())]
    }
}
