//! Line-oriented netlist interchange format.
//!
//! ```text
//! input a 2 n1 n0
//! input b 2 n3 n2
//! output s 3 n9 n7 n4
//! n4 = XOR n0 n2
//! n5 = AND n0 n2
//! ...
//! ```
//!
//! Port lines list the group width followed by its nets most significant
//! bit first. Every other line defines one gate. Blank lines and lines
//! starting with `#` are ignored.

use super::{Gate, GateKind, GateNetlist, NetId, Port};
use crate::error::{Error, Result};
use std::fmt::Write as _;

fn net_name(n: NetId) -> String {
    format!("n{n}")
}

fn parse_net(tok: &str, line: usize) -> Result<NetId> {
    tok.strip_prefix('n')
        .and_then(|d| d.parse::<NetId>().ok())
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("bad net name `{tok}`"),
        })
}

impl GateNetlist {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (kw, ports) in [("input", &self.inputs), ("output", &self.outputs)] {
            for p in ports {
                write!(s, "{kw} {} {}", p.name, p.width()).unwrap();
                for &b in p.bits.iter().rev() {
                    write!(s, " {}", net_name(b)).unwrap();
                }
                s.push('\n');
            }
        }
        for g in &self.gates {
            write!(s, "{} = {}", net_name(g.output), g.kind).unwrap();
            for &f in g.inputs() {
                write!(s, " {}", net_name(f)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<GateNetlist> {
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[0] {
                kw @ ("input" | "output") => {
                    if toks.len() < 3 {
                        return Err(Error::Parse {
                            line,
                            msg: format!("`{kw}` needs a name and a width"),
                        });
                    }
                    let width: usize = toks[2].parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad width `{}`", toks[2]),
                    })?;
                    if toks.len() != 3 + width {
                        return Err(Error::Parse {
                            line,
                            msg: format!(
                                "port `{}` declares width {width} but lists {} nets",
                                toks[1],
                                toks.len() - 3
                            ),
                        });
                    }
                    let mut bits = toks[3..]
                        .iter()
                        .map(|t| parse_net(t, line))
                        .collect::<Result<Vec<_>>>()?;
                    bits.reverse();
                    let port = Port::new(toks[1], bits);
                    if kw == "input" {
                        inputs.push(port);
                    } else {
                        outputs.push(port);
                    }
                }
                _ => {
                    if toks.len() < 3 || toks[1] != "=" {
                        return Err(Error::Parse {
                            line,
                            msg: "expected `<net> = <KIND> <fanin...>`".into(),
                        });
                    }
                    let out = parse_net(toks[0], line)?;
                    let kind = GateKind::from_name(toks[2]).ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("unknown gate kind `{}`", toks[2]),
                    })?;
                    let fanin = toks[3..]
                        .iter()
                        .map(|t| parse_net(t, line))
                        .collect::<Result<Vec<_>>>()?;
                    if fanin.len() != kind.arity() {
                        return Err(Error::Parse {
                            line,
                            msg: format!(
                                "{kind} takes {} fanins, got {}",
                                kind.arity(),
                                fanin.len()
                            ),
                        });
                    }
                    gates.push(Gate::new(kind, &fanin, out));
                }
            }
        }
        GateNetlist::new(inputs, outputs, gates)
    }
}
