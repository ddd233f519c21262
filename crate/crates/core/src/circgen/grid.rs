use super::{generate, AbsDiffParams, AdderParams, AxCircuit, Family, LowPolicy, MulParams, OpClass, OpKind};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Parameter grid of one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GridSpec {
    /// Every cut below the operand width (both low-bit policies when the cut
    /// is non-zero) times every set of at most `max_boundaries` carry
    /// boundaries at or above the cut.
    Adder { max_boundaries: usize },
    /// As for adders, times both negation variants.
    AbsDiff { max_boundaries: usize },
    /// `h_breaks x v_breaks` broken arrays plus operand truncations
    /// `truncations x trunc_v_breaks`.
    Multiplier {
        h_breaks: Vec<u32>,
        v_breaks: Vec<u32>,
        truncations: Vec<(u32, u32)>,
        trunc_v_breaks: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGrid {
    pub class: OpClass,
    #[serde(flatten)]
    pub grid: GridSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LibrarySpec {
    pub classes: Vec<ClassGrid>,
}

fn subsets(positions: &[u32], max: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| positions.iter().position(|&p| p == l).unwrap() + 1);
            for &p in &positions[start..] {
                let mut t: Vec<u32> = s.clone();
                t.push(p);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn cut_variants(width: u32) -> Vec<(u32, LowPolicy)> {
    let mut v = vec![(0, LowPolicy::Zero)];
    for cut in 1..width {
        v.push((cut, LowPolicy::Zero));
        v.push((cut, LowPolicy::CopyA));
    }
    v
}

impl ClassGrid {
    /// Default grid for a class, sized for a few hundred circuits.
    pub fn default_for(class: OpClass) -> ClassGrid {
        let w = class.operand_width();
        let grid = match class.kind {
            OpKind::Add => GridSpec::Adder {
                max_boundaries: if w <= 10 { 3 } else { 1 },
            },
            OpKind::Sub => GridSpec::AbsDiff { max_boundaries: 1 },
            OpKind::Mul => {
                let wa = class.a_width.min(class.b_width);
                let mut truncations = Vec::new();
                for ta in 0..=wa.min(4) {
                    for tb in 0..=wa.min(4) {
                        if ta + tb > 0 {
                            truncations.push((ta, tb));
                        }
                    }
                }
                GridSpec::Multiplier {
                    h_breaks: (0..class.b_width).collect(),
                    v_breaks: (0..class.out_width - 1).collect(),
                    truncations,
                    trunc_v_breaks: (0..class.out_width - 1).step_by(3).take(4).collect(),
                }
            }
        };
        ClassGrid { class, grid }
    }

    /// Family parameter sets in a fixed order.
    pub fn families(&self) -> Result<Vec<Family>> {
        let w = self.class.operand_width();
        let expect = |k: OpKind| -> Result<()> {
            if self.class.kind != k {
                return Err(Error::InvalidParameter(format!(
                    "grid family does not fit class {}",
                    self.class
                )));
            }
            Ok(())
        };
        let mut out = Vec::new();
        match &self.grid {
            GridSpec::Adder { max_boundaries } => {
                expect(OpKind::Add)?;
                for (cut, policy) in cut_variants(w) {
                    let positions: Vec<u32> = (cut.max(1)..w).collect();
                    for boundaries in subsets(&positions, *max_boundaries) {
                        out.push(Family::Adder(AdderParams {
                            cut,
                            policy,
                            boundaries,
                        }));
                    }
                }
            }
            GridSpec::AbsDiff { max_boundaries } => {
                expect(OpKind::Sub)?;
                for (cut, policy) in cut_variants(w) {
                    let positions: Vec<u32> = (cut.max(1)..w).collect();
                    for boundaries in subsets(&positions, *max_boundaries) {
                        for exact_negate in [true, false] {
                            out.push(Family::AbsDiff(AbsDiffParams {
                                cut,
                                policy,
                                boundaries: boundaries.clone(),
                                exact_negate,
                            }));
                        }
                    }
                }
            }
            GridSpec::Multiplier {
                h_breaks,
                v_breaks,
                truncations,
                trunc_v_breaks,
            } => {
                expect(OpKind::Mul)?;
                for &h_break in h_breaks {
                    for &v_break in v_breaks {
                        out.push(Family::Multiplier(MulParams {
                            h_break,
                            v_break,
                            trunc_a: 0,
                            trunc_b: 0,
                        }));
                    }
                }
                for &(trunc_a, trunc_b) in truncations {
                    for &v_break in trunc_v_breaks {
                        out.push(Family::Multiplier(MulParams {
                            h_break: 0,
                            v_break,
                            trunc_a,
                            trunc_b,
                        }));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl LibrarySpec {
    pub fn default_for(classes: &[OpClass]) -> LibrarySpec {
        LibrarySpec {
            classes: classes.iter().map(|&c| ClassGrid::default_for(c)).collect(),
        }
    }

    /// Default grids for all six benchmark classes.
    pub fn standard() -> LibrarySpec {
        LibrarySpec::default_for(&[
            OpClass::ADD8,
            OpClass::ADD9,
            OpClass::ADD16,
            OpClass::SUB10,
            OpClass::SUB16,
            OpClass::MUL8,
        ])
    }
}

/// Generates and characterizes every grid point; output order follows the
/// spec order.
pub fn build_default_library(spec: &LibrarySpec) -> Result<Vec<AxCircuit>> {
    let mut jobs = Vec::new();
    for g in &spec.classes {
        for f in g.families()? {
            jobs.push((g.class, f));
        }
    }
    jobs.par_iter().map(|(c, f)| generate(*c, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        let p: Vec<u32> = (1..8).collect();
        assert_eq!(subsets(&p, 3).len(), 1 + 7 + 21 + 35);
        assert_eq!(subsets(&[], 3).len(), 1);
    }

    #[test]
    fn grid_sizes() {
        let n = |c| ClassGrid::default_for(c).families().unwrap().len();
        assert_eq!(n(OpClass::ADD8), 386);
        assert_eq!(n(OpClass::ADD9), 601);
        assert_eq!(n(OpClass::SUB10), 236);
        assert_eq!(n(OpClass::MUL8), 216);
        assert!(n(OpClass::ADD16) >= 200);
        assert!(n(OpClass::SUB16) >= 200);
    }

    #[test]
    fn add8_library_has_one_exact_circuit() {
        let lib = build_default_library(&LibrarySpec::default_for(&[OpClass::ADD8])).unwrap();
        assert_eq!(lib.len(), 386);
        assert_eq!(lib.iter().filter(|c| c.is_exact()).count(), 1);
        for c in &lib {
            c.netlist.check_invariants().unwrap();
        }
        let again = build_default_library(&LibrarySpec::default_for(&[OpClass::ADD8])).unwrap();
        let ids: Vec<_> = lib.iter().map(|c| &c.id).collect();
        let ids2: Vec<_> = again.iter().map(|c| &c.id).collect();
        assert_eq!(ids, ids2);
    }

    #[test]
    fn spec_serde_round_trip() {
        let spec = LibrarySpec::default_for(&[OpClass::ADD8, OpClass::MUL8]);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<LibrarySpec>(&json).unwrap(), spec);
    }
}
