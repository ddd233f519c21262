//! Accelerator dataflow graphs, the three benchmarks, bit-sliced
//! configurable simulation and operand profiling.

mod bench;
mod graph;
mod image;
mod profile;
mod sim;

pub use bench::{
    build_fixed_gf, build_generic_gf, build_sobel, coeff_input, gaussian_kernel, gaussian_weights, generic_gf_kernels,
    pixel_input, quantize_largest_remainder, Benchmark, FIXED_GF_KERNEL,
};
pub use graph::{AccelGraph, Configuration, GraphBuilder, Node, NodeId, NodeKind};
pub use image::{synthetic, synthetic_set, GrayImage, Synthetic};
pub use profile::{profile_pmfs, WorkItem, Workload};
pub use sim::{simulate, Probe, Simulator, Stimulus};
