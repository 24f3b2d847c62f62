//! Thin wrapper around rustfft with a per-thread plan cache.

use std::cell::RefCell;

pub(crate) use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT (unnormalized).
pub(crate) fn fft(buf: &mut [Complex<f64>]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// In-place inverse DFT, scaled by `1/N` so it inverts [`fft`].
pub(crate) fn ifft(buf: &mut [Complex<f64>]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
    let n = buf.len() as f64;
    for v in buf.iter_mut() {
        v.re /= n;
        v.im /= n;
    }
}
