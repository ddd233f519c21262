use super::bench::pixel_input;
use super::graph::{AccelGraph, Configuration, NodeKind};
use super::image::GrayImage;
use crate::bits::{planes_to_values, values_to_planes};
use crate::circgen::Catalog;
use crate::error::{Error, Result};
use crate::netlist::{GateNetlist, PlaneEvaluator};

/// Input vectors of a graph packed as bit planes, 64 vectors per batch.
///
/// Within a batch the planes of the graph inputs follow
/// [`AccelGraph::inputs`] order, least significant bit first.
#[derive(Clone, Debug, PartialEq)]
pub struct Stimulus {
    vectors: usize,
    bits: usize,
    planes: Vec<u64>,
}

impl Stimulus {
    /// One vector per entry of `vectors`, values in graph-input order.
    pub fn from_vectors(graph: &AccelGraph, vectors: &[Vec<u64>]) -> Result<Stimulus> {
        let widths: Vec<usize> = graph.inputs().iter().map(|&i| graph.node(i).width as usize).collect();
        let bits: usize = widths.iter().sum();
        let batches = vectors.len().div_ceil(64);
        let mut planes = vec![0u64; batches * bits];
        let mut lane = [0u64; 64];
        for (b, chunk) in vectors.chunks(64).enumerate() {
            let mut off = 0;
            for (k, &w) in widths.iter().enumerate() {
                for (j, v) in chunk.iter().enumerate() {
                    if v.len() != widths.len() {
                        return Err(Error::LengthMismatch(format!(
                            "input vector has {} values for {} graph inputs",
                            v.len(),
                            widths.len()
                        )));
                    }
                    if w < 64 && v[k] >> w != 0 {
                        return Err(Error::PortWidth {
                            port: graph.node(graph.inputs()[k]).name.clone(),
                            msg: format!("value {} exceeds {w} bits", v[k]),
                        });
                    }
                    lane[j] = v[k];
                }
                let base = b * bits + off;
                values_to_planes(&lane[..chunk.len()], w, &mut planes[base..base + w]);
                off += w;
            }
        }
        Ok(Stimulus {
            vectors: vectors.len(),
            bits,
            planes,
        })
    }

    /// One vector per pixel (row-major): pixel inputs take the replicated
    /// 3x3 neighbourhood, every other input the value given in `constants`.
    pub fn from_image(graph: &AccelGraph, image: &GrayImage, constants: &[(String, u64)]) -> Result<Stimulus> {
        enum Src {
            Pixel(isize, isize),
            Const(u64),
        }
        let mut srcs = Vec::new();
        for &i in graph.inputs() {
            let name = &graph.node(i).name;
            let pixel = (0..9).find(|&n| *name == pixel_input(n / 3, n % 3));
            srcs.push(match pixel {
                Some(n) => Src::Pixel((n % 3) as isize - 1, (n / 3) as isize - 1),
                None => Src::Const(
                    constants
                        .iter()
                        .find(|(k, _)| k == name)
                        .map(|c| c.1)
                        .ok_or_else(|| Error::InvalidParameter(format!("no value for graph input `{name}`")))?,
                ),
            });
        }
        let (w, h) = (image.width(), image.height());
        let mut vectors = Vec::with_capacity(w * h);
        for y in 0..h as isize {
            for x in 0..w as isize {
                vectors.push(
                    srcs.iter()
                        .map(|s| match *s {
                            Src::Pixel(dx, dy) => u64::from(image.get_clamped(x + dx, y + dy)),
                            Src::Const(v) => v,
                        })
                        .collect(),
                );
            }
        }
        Stimulus::from_vectors(graph, &vectors)
    }

    pub fn len(&self) -> usize {
        self.vectors
    }

    pub fn is_empty(&self) -> bool {
        self.vectors == 0
    }

    fn batches(&self) -> usize {
        self.vectors.div_ceil(64)
    }
}

/// Operand values seen by one operation node on one batch.
pub struct Probe<'p> {
    pub op: usize,
    pub a: &'p [u64],
    pub b: &'p [u64],
}

/// Bit-accurate simulator of one configuration.
pub struct Simulator<'a> {
    graph: &'a AccelGraph,
    netlists: Vec<&'a GateNetlist>,
    offsets: Vec<usize>,
    total: usize,
}

impl<'a> Simulator<'a> {
    pub fn new(graph: &'a AccelGraph, catalog: &'a Catalog, config: &Configuration) -> Result<Simulator<'a>> {
        config.validate(graph, catalog)?;
        let netlists = config.0.iter().map(|&i| &catalog.get(i).netlist).collect();
        Ok(Simulator::with_netlists(graph, netlists))
    }

    /// Simulator over explicit per-operation netlists; each must have ports
    /// `a`, `b` and one output matching its node's class.
    pub fn with_netlists(graph: &'a AccelGraph, netlists: Vec<&'a GateNetlist>) -> Simulator<'a> {
        let mut offsets = Vec::with_capacity(graph.nodes().len());
        let mut total = 0;
        for n in graph.nodes() {
            offsets.push(total);
            total += n.width as usize;
        }
        Simulator {
            graph,
            netlists,
            offsets,
            total,
        }
    }

    pub fn graph(&self) -> &'a AccelGraph {
        self.graph
    }

    fn run_batches(&self, stim: &Stimulus, mut probe: Option<&mut dyn FnMut(Probe<'_>)>, mut sink: impl FnMut(&[u64])) {
        let g = self.graph;
        let mut evals: Vec<PlaneEvaluator<'_>> = self.netlists.iter().map(|n| PlaneEvaluator::new(n)).collect();
        let mut planes = vec![0u64; self.total];
        let mut operand = Vec::new();
        let mut av = [0u64; 64];
        let mut bv = [0u64; 64];
        let out_src = g.output_source();
        for b in 0..stim.batches() {
            let lanes = (stim.vectors - b * 64).min(64);
            let mut in_off = b * stim.bits;
            let mut op_k = 0;
            for (i, node) in g.nodes().iter().enumerate() {
                let w = node.width as usize;
                let off = self.offsets[i];
                match node.kind {
                    NodeKind::Input => {
                        planes[off..off + w].copy_from_slice(&stim.planes[in_off..in_off + w]);
                        in_off += w;
                    }
                    NodeKind::Const(v) => {
                        for k in 0..w {
                            planes[off + k] = if (v >> k) & 1 == 1 { u64::MAX } else { 0 };
                        }
                    }
                    NodeKind::Shl { src, amount } => {
                        let (so, sw) = (self.offsets[src], g.node(src).width as usize);
                        for k in 0..w {
                            let s = k.wrapping_sub(amount as usize);
                            planes[off + k] = if k >= amount as usize && s < sw { planes[so + s] } else { 0 };
                        }
                    }
                    NodeKind::Shr { src, amount } => {
                        let (so, sw) = (self.offsets[src], g.node(src).width as usize);
                        for k in 0..w {
                            let s = k + amount as usize;
                            planes[off + k] = if s < sw { planes[so + s] } else { 0 };
                        }
                    }
                    NodeKind::Op { class, a, b: bb } => {
                        let (wa, wb) = (class.a_width as usize, class.b_width as usize);
                        operand.clear();
                        operand.resize(wa + wb, 0);
                        let (ao, aw) = (self.offsets[a], g.node(a).width as usize);
                        let (bo, bw) = (self.offsets[bb], g.node(bb).width as usize);
                        operand[..aw].copy_from_slice(&planes[ao..ao + aw]);
                        operand[wa..wa + bw].copy_from_slice(&planes[bo..bo + bw]);
                        evals[op_k].eval(&operand, &mut planes[off..off + w]);
                        if let Some(p) = probe.as_deref_mut() {
                            planes_to_values(&operand[..wa], &mut av);
                            planes_to_values(&operand[wa..], &mut bv);
                            p(Probe {
                                op: op_k,
                                a: &av[..lanes],
                                b: &bv[..lanes],
                            });
                        }
                        op_k += 1;
                    }
                    NodeKind::Output { .. } => {}
                }
            }
            let so = self.offsets[out_src];
            let sw = g.node(out_src).width as usize;
            let mut vals = [0u64; 64];
            planes_to_values(&planes[so..so + sw], &mut vals);
            sink(&vals[..lanes]);
        }
    }

    /// Value of the output node's source per vector, before clamping.
    pub fn raw_outputs(&self, stim: &Stimulus) -> Vec<u64> {
        let mut out = Vec::with_capacity(stim.len());
        self.run_batches(stim, None, |v| out.extend_from_slice(v));
        out
    }

    /// Output values clamped to the output node width.
    pub fn outputs(&self, stim: &Stimulus) -> Vec<u64> {
        let w = self.graph.node(self.graph.output()).width;
        let max = if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
        let mut out = self.raw_outputs(stim);
        for v in &mut out {
            *v = (*v).min(max);
        }
        out
    }

    /// Runs the simulation and reports the operands of every operation node.
    pub fn probe(&self, stim: &Stimulus, mut f: impl FnMut(Probe<'_>)) {
        self.run_batches(stim, Some(&mut f), |_| {});
    }

    /// Output image for an image stimulus of the given dimensions.
    pub fn image(&self, stim: &Stimulus, width: usize, height: usize) -> Result<GrayImage> {
        let data = self.outputs(stim).into_iter().map(|v| v as u8).collect();
        GrayImage::new(width, height, data)
    }
}

/// Simulates `graph` under `config` on one image.
pub fn simulate(
    graph: &AccelGraph,
    config: &Configuration,
    catalog: &Catalog,
    image: &GrayImage,
    constants: &[(String, u64)],
) -> Result<GrayImage> {
    let sim = Simulator::new(graph, catalog, config)?;
    let stim = Stimulus::from_image(graph, image, constants)?;
    sim.image(&stim, image.width(), image.height())
}
