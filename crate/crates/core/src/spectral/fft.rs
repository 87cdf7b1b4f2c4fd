//! Square 2D complex FFTs built from rustfft row transforms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward and inverse plans for an `n × n` transform.
///
/// Both directions are unnormalized; callers apply the `1/n²` factor.
pub struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("n", &self.n).finish()
    }
}

impl Fft2 {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self { n, forward, inverse, scratch_len }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scratch_len(&self) -> usize {
        self.scratch_len
    }

    pub fn forward(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(&*self.forward, data, scratch);
    }

    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(&*self.inverse, data, scratch);
    }

    fn run(&self, plan: &dyn Fft<f64>, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(data.len(), self.n * self.n);
        if scratch.len() < self.scratch_len {
            scratch.resize(self.scratch_len, Complex64::default());
        }
        let scratch = &mut scratch[..self.scratch_len];
        // rows (x direction), then columns via transpose
        plan.process_with_scratch(data, scratch);
        transpose_in_place(data, self.n);
        plan.process_with_scratch(data, scratch);
        transpose_in_place(data, self.n);
    }
}

fn transpose_in_place(data: &mut [Complex64], n: usize) {
    for j in 0..n {
        for i in (j + 1)..n {
            data.swap(j * n + i, i * n + j);
        }
    }
}

/// Shared plan for grid size `n`. Plans are cached for the process lifetime.
pub fn plan(n: usize) -> Arc<Fft2> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Fft2>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| Arc::new(Fft2::new(n))).clone()
}
