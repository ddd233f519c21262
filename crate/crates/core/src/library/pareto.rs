use serde::{Deserialize, Serialize};

/// A scored library circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    pub wmed: f64,
    pub area: f64,
}

impl Candidate {
    pub fn new(id: impl Into<String>, wmed: f64, area: f64) -> Candidate {
        Candidate {
            id: id.into(),
            wmed,
            area,
        }
    }

    /// No worse in both objectives and strictly better in one.
    pub fn dominates(&self, other: &Candidate) -> bool {
        self.wmed <= other.wmed && self.area <= other.area && (self.wmed < other.wmed || self.area < other.area)
    }
}

/// Non-dominated subset under minimization of `(wmed, area)`, sorted by
/// increasing wmed. Of several candidates with identical objectives only
/// the lexicographically smallest id survives.
pub fn pareto_filter(candidates: &[Candidate]) -> Vec<Candidate> {
    let mut sorted: Vec<&Candidate> = candidates.iter().collect();
    sorted.sort_by(|x, y| {
        x.wmed
            .total_cmp(&y.wmed)
            .then(x.area.total_cmp(&y.area))
            .then_with(|| x.id.cmp(&y.id))
    });
    let mut out: Vec<Candidate> = Vec::new();
    for c in sorted {
        if out.last().map_or(true, |l| c.area < l.area) {
            out.push(c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(c: &[Candidate]) -> Vec<String> {
        let mut keep: Vec<String> = Vec::new();
        for (i, x) in c.iter().enumerate() {
            let dominated = c.iter().any(|y| y.dominates(x));
            let dup_smaller = c
                .iter()
                .enumerate()
                .any(|(j, y)| j != i && y.wmed == x.wmed && y.area == x.area && y.id < x.id);
            if !dominated && !dup_smaller {
                keep.push(x.id.clone());
            }
        }
        keep.sort();
        keep
    }

    #[test]
    fn small_example() {
        let c = vec![
            Candidate::new("A", 0.0, 100.0),
            Candidate::new("B", 1.0, 50.0),
            Candidate::new("C", 1.0, 60.0),
        ];
        let ids: Vec<_> = pareto_filter(&c).into_iter().map(|c| c.id).collect();
        assert_eq!(ids, ["A", "B"]);
        assert_eq!(pareto_filter(&c[2..]).len(), 1);
    }

    #[test]
    fn duplicate_objectives_keep_smallest_id() {
        let c = vec![Candidate::new("z", 1.0, 1.0), Candidate::new("a", 1.0, 1.0)];
        assert_eq!(pareto_filter(&c)[0].id, "a");
    }

    proptest! {
        #[test]
        fn matches_quadratic_oracle(pts in prop::collection::vec((0u8..20, 0u8..20), 1..200)) {
            let c: Vec<Candidate> = pts
                .iter()
                .enumerate()
                .map(|(i, &(w, a))| Candidate::new(format!("c{i:03}"), f64::from(w) / 4.0, f64::from(a)))
                .collect();
            let out = pareto_filter(&c);
            let mut ids: Vec<String> = out.iter().map(|c| c.id.clone()).collect();
            ids.sort();
            prop_assert_eq!(ids, brute_force(&c));
            for x in &out {
                for y in &out {
                    prop_assert!(!x.dominates(y));
                }
            }
        }
    }
}
