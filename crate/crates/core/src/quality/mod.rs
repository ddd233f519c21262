//! Output quality: SSIM against the exact accelerator.

mod qor;
mod ssim;

pub use qor::{QorEvaluator, QorReport};
pub use ssim::{ssim, SsimReference, C1, C2, WINDOW, WINDOW_SIGMA};
