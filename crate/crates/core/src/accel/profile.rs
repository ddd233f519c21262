use super::bench::{coeff_input, Benchmark};
use super::graph::AccelGraph;
use super::image::GrayImage;
use super::sim::{Simulator, Stimulus};
use crate::circgen::exact_circuit;
use crate::error::{Error, Result};
use crate::library::Pmf;
use rayon::prelude::*;
use std::collections::HashMap;

/// One simulation job: an image, optionally with a runtime kernel.
#[derive(Clone, Debug)]
pub struct WorkItem {
    pub label: String,
    pub image: usize,
    pub width: usize,
    pub height: usize,
    pub stimulus: Stimulus,
}

/// All simulation jobs of a benchmark protocol.
#[derive(Clone, Debug)]
pub struct Workload {
    pub items: Vec<WorkItem>,
}

impl Workload {
    /// One item per image, or per (image, kernel) pair when the graph takes
    /// runtime coefficients.
    pub fn new(graph: &AccelGraph, images: &[GrayImage], kernels: &[[u64; 9]]) -> Result<Workload> {
        if images.is_empty() {
            return Err(Error::Empty("no benchmark images".into()));
        }
        let wants_kernel = graph
            .inputs()
            .iter()
            .any(|&i| graph.node(i).name == coeff_input(0, 0));
        if wants_kernel && kernels.is_empty() {
            return Err(Error::Empty(format!("graph `{}` needs kernels", graph.name())));
        }
        let mut items = Vec::new();
        for (ii, img) in images.iter().enumerate() {
            if wants_kernel {
                for (ki, k) in kernels.iter().enumerate() {
                    let consts: Vec<(String, u64)> =
                        (0..9).map(|n| (coeff_input(n / 3, n % 3), k[n])).collect();
                    items.push(WorkItem {
                        label: format!("img{ii}_k{ki}"),
                        image: ii,
                        width: img.width(),
                        height: img.height(),
                        stimulus: Stimulus::from_image(graph, img, &consts)?,
                    });
                }
            } else {
                items.push(WorkItem {
                    label: format!("img{ii}"),
                    image: ii,
                    width: img.width(),
                    height: img.height(),
                    stimulus: Stimulus::from_image(graph, img, &[])?,
                });
            }
        }
        Ok(Workload { items })
    }

    /// Standard protocol of a benchmark over `images`; generic GF uses
    /// `kernels` Gaussian kernels with sigma in [0.3, 0.8].
    pub fn for_benchmark(bench: Benchmark, graph: &AccelGraph, images: &[GrayImage], kernels: usize) -> Result<Workload> {
        let ks = match bench {
            Benchmark::GenericGf => super::bench::generic_gf_kernels(kernels, 0.3, 0.8),
            _ => Vec::new(),
        };
        Workload::new(graph, images, &ks)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

type Counts = Vec<HashMap<u64, u64>>;

fn merge(mut x: Counts, y: Counts) -> Counts {
    for (m, o) in x.iter_mut().zip(y) {
        for (k, c) in o {
            *m.entry(k).or_insert(0) += c;
        }
    }
    x
}

/// Operand-pair distribution of every operation node under exact circuits,
/// indexed like [`AccelGraph::op_nodes`].
pub fn profile_pmfs(graph: &AccelGraph, workload: &Workload) -> Result<Vec<Pmf>> {
    if workload.is_empty() {
        return Err(Error::Empty("no benchmark images".into()));
    }
    let exact: Vec<_> = (0..graph.op_count())
        .map(|k| exact_circuit(graph.op_class(k)))
        .collect::<Result<_>>()?;
    let sim = Simulator::with_netlists(graph, exact.iter().map(|c| &c.netlist).collect());
    let n = graph.op_count();
    let counts = workload
        .items
        .par_iter()
        .map(|item| {
            let mut c: Counts = vec![HashMap::new(); n];
            sim.probe(&item.stimulus, |p| {
                let m = &mut c[p.op];
                for (&a, &b) in p.a.iter().zip(p.b) {
                    *m.entry(a << 32 | b).or_insert(0) += 1;
                }
            });
            c
        })
        .reduce(|| vec![HashMap::new(); n], merge);
    counts
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            Pmf::from_counts(
                graph.op_class(k),
                m.into_iter().map(|(key, c)| ((key >> 32, key & 0xFFFF_FFFF), c)),
            )
        })
        .collect()
}
