#![allow(dead_code)]

use axdse::accel::*;
use axdse::circgen::{build_default_library, Catalog, LibrarySpec, OpClass};
use axdse::library::{pmf_map, reduce_library, ReducedLibrary};

pub struct Setup {
    pub graph: AccelGraph,
    pub catalog: Catalog,
    pub workload: Workload,
    pub rl: ReducedLibrary,
}

pub fn classes(graph: &AccelGraph) -> Vec<OpClass> {
    graph.class_counts().into_keys().collect()
}

pub fn setup(bench: Benchmark, images: usize, side: usize, kernels: usize) -> Setup {
    let graph = bench.graph();
    let lib = build_default_library(&LibrarySpec::default_for(&classes(&graph))).unwrap();
    let catalog = Catalog::new(lib).unwrap();
    let imgs = synthetic_set(images, side, side, 3);
    let workload = Workload::for_benchmark(bench, &graph, &imgs, kernels).unwrap();
    let pmfs = profile_pmfs(&graph, &workload).unwrap();
    let rl = reduce_library(&catalog, &graph, &pmf_map(&graph, pmfs)).unwrap();
    Setup {
        graph,
        catalog,
        workload,
        rl,
    }
}
