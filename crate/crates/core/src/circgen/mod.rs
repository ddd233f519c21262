//! Parametric families of approximate adders, absolute-difference
//! subtractors and multipliers, with full error characterization.

mod arith;
mod catalog;
mod characterize;
mod grid;

pub use arith::{build_abs_diff, build_adder, build_multiplier, ripple_carry_adder};
pub use catalog::Catalog;
pub use characterize::{characterize, error_stats, ErrorStats, InputDistribution, EXHAUSTIVE_LIMIT_BITS, SAMPLE_COUNT};
pub use grid::{build_default_library, ClassGrid, GridSpec, LibrarySpec};

use crate::error::{Error, Result};
use crate::netlist::{simplify, CostTable, GateNetlist};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    Add,
    Sub,
    Mul,
}

impl OpKind {
    fn prefix(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
        }
    }
}

/// An arithmetic operation class: kind plus operand and result widths.
///
/// All arithmetic is unsigned. Subtraction computes the magnitude `|a - b|`.
/// Results are truncated to `out_width` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OpClass {
    pub kind: OpKind,
    pub a_width: u32,
    pub b_width: u32,
    pub out_width: u32,
}

impl OpClass {
    pub const ADD8: OpClass = OpClass::raw(OpKind::Add, 8, 8, 9);
    pub const ADD9: OpClass = OpClass::raw(OpKind::Add, 9, 9, 10);
    pub const ADD16: OpClass = OpClass::raw(OpKind::Add, 16, 16, 16);
    pub const SUB10: OpClass = OpClass::raw(OpKind::Sub, 10, 10, 10);
    pub const SUB16: OpClass = OpClass::raw(OpKind::Sub, 16, 16, 16);
    pub const MUL8: OpClass = OpClass::raw(OpKind::Mul, 8, 8, 16);

    const CANONICAL: [(&'static str, OpClass); 6] = [
        ("add8", OpClass::ADD8),
        ("add9", OpClass::ADD9),
        ("add16", OpClass::ADD16),
        ("sub10", OpClass::SUB10),
        ("sub16", OpClass::SUB16),
        ("mul8", OpClass::MUL8),
    ];

    const fn raw(kind: OpKind, a_width: u32, b_width: u32, out_width: u32) -> OpClass {
        OpClass {
            kind,
            a_width,
            b_width,
            out_width,
        }
    }

    pub fn new(kind: OpKind, a_width: u32, b_width: u32, out_width: u32) -> Result<OpClass> {
        let max = a_width.max(b_width);
        let ok = (1..=32).contains(&a_width)
            && (1..=32).contains(&b_width)
            && match kind {
                OpKind::Add | OpKind::Sub => out_width >= max && out_width <= max + 1,
                OpKind::Mul => out_width == a_width + b_width,
            };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "widths {a_width}x{b_width}->{out_width} are not valid for {}",
                kind.prefix()
            )));
        }
        Ok(OpClass::raw(kind, a_width, b_width, out_width))
    }

    pub fn input_bits(&self) -> u32 {
        self.a_width + self.b_width
    }

    pub fn operand_width(&self) -> u32 {
        self.a_width.max(self.b_width)
    }

    fn out_mask(&self) -> u64 {
        if self.out_width >= 64 {
            u64::MAX
        } else {
            (1u64 << self.out_width) - 1
        }
    }

    /// Reference function.
    pub fn exact(&self, a: u64, b: u64) -> u64 {
        let r = match self.kind {
            OpKind::Add => a + b,
            OpKind::Sub => a.abs_diff(b),
            OpKind::Mul => a * b,
        };
        r & self.out_mask()
    }

    /// Largest representable result, used to express errors relative to
    /// the output range.
    pub fn output_range(&self) -> f64 {
        self.out_mask() as f64
    }
}

impl fmt::Display for OpClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((name, _)) = OpClass::CANONICAL.iter().find(|(_, c)| c == self) {
            return f.write_str(name);
        }
        write!(
            f,
            "{}{}x{}o{}",
            self.kind.prefix(),
            self.a_width,
            self.b_width,
            self.out_width
        )
    }
}

impl FromStr for OpClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<OpClass> {
        if let Some((_, c)) = OpClass::CANONICAL.iter().find(|(n, _)| *n == s) {
            return Ok(*c);
        }
        let bad = || Error::InvalidParameter(format!("unknown operation class `{s}`"));
        let kind = [OpKind::Add, OpKind::Sub, OpKind::Mul]
            .into_iter()
            .find(|k| s.starts_with(k.prefix()))
            .ok_or_else(bad)?;
        let rest = &s[3..];
        let (a, rest) = rest.split_once('x').ok_or_else(bad)?;
        let (b, o) = rest.split_once('o').ok_or_else(bad)?;
        let p = |v: &str| v.parse::<u32>().map_err(|_| bad());
        OpClass::new(kind, p(a)?, p(b)?, p(o)?)
    }
}

impl TryFrom<String> for OpClass {
    type Error = Error;
    fn try_from(s: String) -> Result<OpClass> {
        s.parse()
    }
}

impl From<OpClass> for String {
    fn from(c: OpClass) -> String {
        c.to_string()
    }
}

/// What the bits below a truncation cut are forced to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LowPolicy {
    Zero,
    CopyA,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdderParams {
    /// Result bits below `cut` follow `policy`.
    pub cut: u32,
    pub policy: LowPolicy,
    /// Bit positions whose incoming carry is severed.
    pub boundaries: Vec<u32>,
}

impl AdderParams {
    pub fn exact() -> AdderParams {
        AdderParams {
            cut: 0,
            policy: LowPolicy::Zero,
            boundaries: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbsDiffParams {
    pub cut: u32,
    pub policy: LowPolicy,
    /// Bit positions whose incoming borrow is severed.
    pub boundaries: Vec<u32>,
    /// `false` negates negative differences in ones' complement (drops the +1).
    pub exact_negate: bool,
}

impl AbsDiffParams {
    pub fn exact() -> AbsDiffParams {
        AbsDiffParams {
            cut: 0,
            policy: LowPolicy::Zero,
            boundaries: Vec::new(),
            exact_negate: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MulParams {
    /// Partial-product rows `i < h_break` are removed.
    pub h_break: u32,
    /// Partial-product cells in columns `i + j < v_break` are removed.
    pub v_break: u32,
    /// Low operand bits forced to zero.
    pub trunc_a: u32,
    pub trunc_b: u32,
}

impl MulParams {
    pub fn exact() -> MulParams {
        MulParams {
            h_break: 0,
            v_break: 0,
            trunc_a: 0,
            trunc_b: 0,
        }
    }
}

/// Generation provenance of a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Adder(AdderParams),
    AbsDiff(AbsDiffParams),
    Multiplier(MulParams),
}

fn policy_tag(cut: u32, p: LowPolicy) -> &'static str {
    match (cut, p) {
        (0, _) => "",
        (_, LowPolicy::Zero) => "z",
        (_, LowPolicy::CopyA) => "a",
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Adder(_) => "adder",
            Family::AbsDiff(_) => "absdiff",
            Family::Multiplier(_) => "bam",
        }
    }

    pub fn is_neutral(&self) -> bool {
        match self {
            Family::Adder(p) => *p == AdderParams::exact(),
            Family::AbsDiff(p) => *p == AbsDiffParams::exact(),
            Family::Multiplier(p) => *p == MulParams::exact(),
        }
    }

    /// Short identifier fragment, unique per parameter set.
    pub fn slug(&self) -> String {
        match self {
            Family::Adder(p) => {
                let mut s = format!("c{}{}", p.cut, policy_tag(p.cut, p.policy));
                if !p.boundaries.is_empty() {
                    s += &format!("_s{}", join(&p.boundaries));
                }
                s
            }
            Family::AbsDiff(p) => {
                let mut s = format!("c{}{}", p.cut, policy_tag(p.cut, p.policy));
                if !p.boundaries.is_empty() {
                    s += &format!("_s{}", join(&p.boundaries));
                }
                if !p.exact_negate {
                    s += "_n1";
                }
                s
            }
            Family::Multiplier(p) => {
                let mut s = format!("h{}v{}", p.h_break, p.v_break);
                if p.trunc_a > 0 || p.trunc_b > 0 {
                    s += &format!("_t{}-{}", p.trunc_a, p.trunc_b);
                }
                s
            }
        }
    }

    /// Human-readable `key=value` list (no commas).
    pub fn params_string(&self) -> String {
        let pol = |p: LowPolicy| match p {
            LowPolicy::Zero => "zero",
            LowPolicy::CopyA => "copy_a",
        };
        match self {
            Family::Adder(p) => format!(
                "cut={} policy={} seg={}",
                p.cut,
                pol(p.policy),
                join(&p.boundaries)
            ),
            Family::AbsDiff(p) => format!(
                "cut={} policy={} seg={} negate={}",
                p.cut,
                pol(p.policy),
                join(&p.boundaries),
                if p.exact_negate { "exact" } else { "ones" }
            ),
            Family::Multiplier(p) => format!(
                "h={} v={} trunc_a={} trunc_b={}",
                p.h_break, p.v_break, p.trunc_a, p.trunc_b
            ),
        }
    }

    pub fn parse(family: &str, params: &str) -> Result<Family> {
        let bad = || Error::Format(format!("cannot parse {family} parameters `{params}`"));
        let kv: BTreeMap<&str, &str> = params
            .split_whitespace()
            .map(|t| t.split_once('=').ok_or_else(bad))
            .collect::<Result<_>>()?;
        let num = |k: &str| -> Result<u32> { kv.get(k).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let seg = || -> Result<Vec<u32>> {
            let s = kv.get("seg").ok_or_else(bad)?;
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split('-').map(|x| x.parse().map_err(|_| bad())).collect()
        };
        let policy = || -> Result<LowPolicy> {
            match *kv.get("policy").ok_or_else(bad)? {
                "zero" => Ok(LowPolicy::Zero),
                "copy_a" => Ok(LowPolicy::CopyA),
                _ => Err(bad()),
            }
        };
        match family {
            "adder" => Ok(Family::Adder(AdderParams {
                cut: num("cut")?,
                policy: policy()?,
                boundaries: seg()?,
            })),
            "absdiff" => Ok(Family::AbsDiff(AbsDiffParams {
                cut: num("cut")?,
                policy: policy()?,
                boundaries: seg()?,
                exact_negate: match *kv.get("negate").ok_or_else(bad)? {
                    "exact" => true,
                    "ones" => false,
                    _ => return Err(bad()),
                },
            })),
            "bam" => Ok(Family::Multiplier(MulParams {
                h_break: num("h")?,
                v_break: num("v")?,
                trunc_a: num("trunc_a")?,
                trunc_b: num("trunc_b")?,
            })),
            _ => Err(bad()),
        }
    }
}

/// Hardware and error characterization of one circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Characterization {
    pub area: f64,
    pub delay: f64,
    pub power: f64,
    /// Mean error distance under uniformly distributed inputs.
    pub med: f64,
    /// Worst-case absolute error.
    pub wce: f64,
    pub err_variance: f64,
    /// Application id -> weighted mean error distance.
    pub wmed: BTreeMap<String, f64>,
}

/// One approximate implementation of an operation class.
#[derive(Clone, Debug, PartialEq)]
pub struct AxCircuit {
    pub id: String,
    pub class: OpClass,
    pub family: Family,
    pub netlist: GateNetlist,
    pub characterization: Characterization,
}

impl AxCircuit {
    /// Simplifies `raw`, characterizes it under uniform inputs and assigns
    /// the id `<class>_<slug>`.
    pub fn from_raw(class: OpClass, family: Family, raw: &GateNetlist) -> Result<AxCircuit> {
        let netlist = simplify(raw);
        let characterization = characterize(&netlist, class, &InputDistribution::Uniform, &CostTable::default())?;
        Ok(AxCircuit {
            id: format!("{class}_{}", family.slug()),
            class,
            family,
            netlist,
            characterization,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.characterization.med == 0.0 && self.characterization.wce == 0.0
    }
}

fn check_segments(width: u32, cut: u32, boundaries: &[u32]) -> Result<()> {
    if cut >= width {
        return Err(Error::InvalidParameter(format!(
            "cut {cut} must be below the operand width {width}"
        )));
    }
    if boundaries.windows(2).any(|w| w[0] >= w[1]) || boundaries.iter().any(|&b| b == 0 || b >= width) {
        return Err(Error::InvalidParameter(format!(
            "segment boundaries {boundaries:?} must be strictly increasing within 1..{width}"
        )));
    }
    Ok(())
}

fn expect_kind(class: OpClass, kind: OpKind) -> Result<()> {
    if class.kind != kind {
        return Err(Error::ClassMismatch {
            expected: kind.prefix().into(),
            found: class.to_string(),
        });
    }
    Ok(())
}

pub fn gen_adder(class: OpClass, params: AdderParams) -> Result<AxCircuit> {
    expect_kind(class, OpKind::Add)?;
    check_segments(class.operand_width(), params.cut, &params.boundaries)?;
    let raw = build_adder(class, &params);
    AxCircuit::from_raw(class, Family::Adder(params), &raw)
}

/// `width`-bit adder with a `width + 1`-bit result whose low `cut` bits
/// follow `policy`.
pub fn gen_truncated_adder(width: u32, cut: u32, policy: LowPolicy) -> Result<AxCircuit> {
    let class = OpClass::new(OpKind::Add, width, width, width + 1)?;
    gen_adder(
        class,
        AdderParams {
            cut,
            policy,
            boundaries: Vec::new(),
        },
    )
}

/// `width`-bit adder built from independent sub-adders split at `boundaries`.
pub fn gen_segmented_adder(width: u32, boundaries: &[u32]) -> Result<AxCircuit> {
    let class = OpClass::new(OpKind::Add, width, width, width + 1)?;
    gen_adder(
        class,
        AdderParams {
            cut: 0,
            policy: LowPolicy::Zero,
            boundaries: boundaries.to_vec(),
        },
    )
}

pub fn gen_abs_diff(class: OpClass, params: AbsDiffParams) -> Result<AxCircuit> {
    expect_kind(class, OpKind::Sub)?;
    check_segments(class.operand_width(), params.cut, &params.boundaries)?;
    let raw = build_abs_diff(class, &params);
    AxCircuit::from_raw(class, Family::AbsDiff(params), &raw)
}

pub fn gen_multiplier(class: OpClass, params: MulParams) -> Result<AxCircuit> {
    expect_kind(class, OpKind::Mul)?;
    let limit = class.a_width + class.b_width;
    if params.h_break > limit || params.v_break > limit {
        return Err(Error::InvalidParameter(format!(
            "break lines ({}, {}) must lie within 0..={limit}",
            params.h_break, params.v_break
        )));
    }
    if params.trunc_a > class.a_width || params.trunc_b > class.b_width {
        return Err(Error::InvalidParameter(format!(
            "operand truncation ({}, {}) exceeds operand widths",
            params.trunc_a, params.trunc_b
        )));
    }
    let raw = build_multiplier(class, &params);
    AxCircuit::from_raw(class, Family::Multiplier(params), &raw)
}

/// Broken-array multiplier: partial-product rows below the horizontal break
/// and cells right of the vertical break are omitted.
pub fn gen_broken_array_multiplier(width: u32, h_break: u32, v_break: u32) -> Result<AxCircuit> {
    let class = OpClass::new(OpKind::Mul, width, width, 2 * width)?;
    gen_multiplier(
        class,
        MulParams {
            h_break,
            v_break,
            trunc_a: 0,
            trunc_b: 0,
        },
    )
}

/// The circuit generated with neutral parameters for `class`.
pub fn exact_circuit(class: OpClass) -> Result<AxCircuit> {
    let family = match class.kind {
        OpKind::Add => Family::Adder(AdderParams::exact()),
        OpKind::Sub => Family::AbsDiff(AbsDiffParams::exact()),
        OpKind::Mul => Family::Multiplier(MulParams::exact()),
    };
    generate(class, &family)
}

/// Generates the circuit described by `family` for `class`.
pub fn generate(class: OpClass, family: &Family) -> Result<AxCircuit> {
    match family {
        Family::Adder(p) => gen_adder(class, p.clone()),
        Family::AbsDiff(p) => gen_abs_diff(class, p.clone()),
        Family::Multiplier(p) => gen_multiplier(class, p.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names_round_trip() {
        for (name, c) in OpClass::CANONICAL {
            assert_eq!(c.to_string(), name);
            assert_eq!(name.parse::<OpClass>().unwrap(), c);
        }
        let odd = OpClass::new(OpKind::Add, 2, 2, 3).unwrap();
        assert_eq!(odd.to_string(), "add2x2o3");
        assert_eq!("add2x2o3".parse::<OpClass>().unwrap(), odd);
        assert!(OpClass::new(OpKind::Mul, 8, 8, 9).is_err());
        assert!(OpClass::new(OpKind::Add, 8, 8, 7).is_err());
    }

    #[test]
    fn exact_functions() {
        assert_eq!(OpClass::ADD8.exact(200, 100), 300);
        assert_eq!(OpClass::ADD16.exact(65535, 1), 0);
        assert_eq!(OpClass::SUB10.exact(3, 1000), 997);
        assert_eq!(OpClass::MUL8.exact(200, 250), 50_000);
    }

    #[test]
    fn params_round_trip() {
        let fams = [
            Family::Adder(AdderParams {
                cut: 3,
                policy: LowPolicy::CopyA,
                boundaries: vec![5, 6],
            }),
            Family::AbsDiff(AbsDiffParams::exact()),
            Family::Multiplier(MulParams {
                h_break: 1,
                v_break: 4,
                trunc_a: 2,
                trunc_b: 0,
            }),
        ];
        for f in fams {
            assert_eq!(Family::parse(f.name(), &f.params_string()).unwrap(), f);
        }
    }

    #[test]
    fn truncated_adder_examples() {
        let exact = gen_truncated_adder(8, 0, LowPolicy::Zero).unwrap();
        assert!(exact.is_exact());
        assert_eq!(exact.characterization.med, 0.0);
        let t = gen_truncated_adder(2, 1, LowPolicy::Zero).unwrap();
        assert_eq!(t.characterization.med, 0.5);
        assert_eq!(t.characterization.wce, 1.0);
        assert!(gen_truncated_adder(8, 8, LowPolicy::Zero).is_err());
    }

    #[test]
    fn segmented_adder_errs_exactly_on_carry_across_boundary() {
        let c = gen_segmented_adder(8, &[4]).unwrap();
        for a in 0..256u64 {
            for b in 0..256u64 {
                let got = c.netlist.evaluate(&[a, b]).unwrap()[0];
                let carry_crosses = (a & 15) + (b & 15) > 15;
                assert_eq!(got != a + b, carry_crosses, "{a}+{b}");
            }
        }
        assert!(gen_segmented_adder(8, &[4, 4]).is_err());
        assert!(gen_segmented_adder(8, &[8]).is_err());
    }

    #[test]
    fn abs_diff_exact_and_approximate() {
        let class = OpClass::new(OpKind::Sub, 6, 6, 6).unwrap();
        let exact = gen_abs_diff(class, AbsDiffParams::exact()).unwrap();
        for a in 0..64u64 {
            for b in 0..64u64 {
                assert_eq!(exact.netlist.evaluate(&[a, b]).unwrap()[0], a.abs_diff(b));
            }
        }
        let ones = gen_abs_diff(
            class,
            AbsDiffParams {
                exact_negate: false,
                ..AbsDiffParams::exact()
            },
        )
        .unwrap();
        for a in 0..64u64 {
            for b in 0..64u64 {
                let got = ones.netlist.evaluate(&[a, b]).unwrap()[0];
                let expect = if a >= b { a - b } else { b - a - 1 };
                assert_eq!(got, expect);
            }
        }
        assert!(ones.characterization.area < exact.characterization.area);
    }

    #[test]
    fn multiplier_examples() {
        let exact = gen_broken_array_multiplier(8, 0, 0).unwrap();
        assert!(exact.is_exact());
        assert_eq!(exact.netlist.evaluate(&[200, 250]).unwrap()[0], 50_000);
        // 4-bit BAM with two rows removed: brute-force MED.
        let bam = gen_broken_array_multiplier(4, 2, 0).unwrap();
        let mut total = 0u64;
        for a in 0..16u64 {
            for b in 0..16u64 {
                let got = bam.netlist.evaluate(&[a, b]).unwrap()[0];
                assert_eq!(got, a * (b & !3));
                total += a * b - got;
            }
        }
        assert_eq!(bam.characterization.med, total as f64 / 256.0);
        assert!(gen_broken_array_multiplier(8, 17, 0).is_err());
    }

    #[test]
    fn multiplier_area_monotone_in_horizontal_break() {
        let areas: Vec<f64> = (0..=8)
            .map(|h| gen_broken_array_multiplier(8, h, 0).unwrap().characterization.area)
            .collect();
        assert!(areas.windows(2).all(|w| w[1] <= w[0]), "{areas:?}");
        assert!(areas[8] < areas[0]);
    }
}
