//! Sampled-pdf belief propagation over the Tanner graph of H.
//!
//! Every variable `i` carries pdfs on a local grid `u = x_i - c_i`, uniform
//! with step `grid_step` over `[-w, w]`, `w = grid_halfwidth_sigmas * sigma`.
//! A check `r` with coefficients `h_rk` enforces `sum_k h_rk x_k = b` for an
//! unknown integer `b`. In local coordinates this is
//! `sum_k h_rk u_k = b - beta_r` with `beta_r = sum_k h_rk c_k`, so the
//! message to variable `j` is `sum_b f_V(b - beta_r - h_rj u_j)`, where `V`
//! is the sum of the other stretched inputs. The sum over `b` runs over the
//! `integer_replicas` integers nearest `beta_r`.

use std::sync::Arc;

use realfft::num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use super::{DecodeResult, DecoderConfig};
use crate::error::{param, KemError, Result};
use crate::ldlc::SparseParityCheck;

/// Largest accepted per-variable grid.
const MAX_GRID: usize = 1 << 16;

/// Receives the iteration number and the normalized marginals, laid out as
/// `n` consecutive grids.
pub type MarginalObserver<'a> = &'a mut dyn FnMut(usize, &[f64]);

struct Graph {
    n: usize,
    row_start: Vec<usize>,
    edge_col: Vec<usize>,
    edge_h: Vec<f64>,
    var_edges: Vec<Vec<usize>>,
}

impl Graph {
    fn new(h: &SparseParityCheck) -> Self {
        let n = h.n();
        let checks = h.columns_f64();
        let mut row_start = Vec::with_capacity(n + 1);
        let mut edge_col = Vec::new();
        let mut edge_h = Vec::new();
        let mut var_edges = vec![Vec::new(); n];
        row_start.push(0);
        for check in &checks {
            for &(var, v) in check {
                var_edges[var].push(edge_col.len());
                edge_col.push(var);
                edge_h.push(v);
            }
            row_start.push(edge_col.len());
        }
        Self {
            n,
            row_start,
            edge_col,
            edge_h,
            var_edges,
        }
    }

    fn row(&self, r: usize) -> std::ops::Range<usize> {
        self.row_start[r]..self.row_start[r + 1]
    }
}

fn normalize_sum(v: &mut [f64]) -> bool {
    let s: f64 = v.iter().sum();
    if s > 0.0 && s.is_finite() {
        let inv = 1.0 / s;
        v.iter_mut().for_each(|x| *x *= inv);
        true
    } else {
        false
    }
}

fn normalize_max(v: &mut [f64]) -> bool {
    let m = v.iter().copied().fold(0.0f64, f64::max);
    if m > 0.0 && m.is_finite() {
        let inv = 1.0 / m;
        v.iter_mut().for_each(|x| *x *= inv);
        true
    } else {
        false
    }
}

/// Index of the largest value; ties go to the grid point nearest the
/// channel observation (the center), then to the lower index.
fn argmax_centered(v: &[f64], center: usize) -> usize {
    let mut best = center;
    let mut best_val = v[center];
    for dist in 1..=center {
        for t in [center - dist, center + dist] {
            if v[t] > best_val {
                best = t;
                best_val = v[t];
            }
        }
    }
    best
}

/// Real FFTs of one fixed size; spectra have `size / 2 + 1` bins.
struct Spectral {
    size: usize,
    bins: usize,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral {
    fn new(size: usize) -> Self {
        let mut planner = RealFftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let scratch_len = forward.get_scratch_len().max(inverse.get_scratch_len());
        Self {
            size,
            bins: size / 2 + 1,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
        }
    }
}

/// Decodes `c` against the parity-check matrix `h` for Gaussian noise of
/// standard deviation `sigma`.
pub fn bp_decode(
    c: &[f64],
    h: &SparseParityCheck,
    sigma: f64,
    config: &DecoderConfig,
) -> Result<DecodeResult> {
    bp_decode_observed(c, h, sigma, config, None)
}

/// [`bp_decode`] with a callback receiving the marginals after every
/// iteration.
pub fn bp_decode_observed(
    c: &[f64],
    h: &SparseParityCheck,
    sigma: f64,
    config: &DecoderConfig,
    mut observer: Option<MarginalObserver<'_>>,
) -> Result<DecodeResult> {
    config.validate()?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(param(format!(
            "noise deviation {sigma} must be positive and finite"
        )));
    }
    if c.len() != h.n() {
        return Err(KemError::Input(format!(
            "observation of length {} for n = {}",
            c.len(),
            h.n()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(KemError::Input(
            "observation contains a non-finite value".into(),
        ));
    }
    let step = config.grid_step;
    let half = (config.grid_halfwidth_sigmas * sigma / step).ceil() as usize;
    let gsize = 2 * half + 1;
    if gsize > MAX_GRID {
        return Err(param(format!(
            "decoder grid of {gsize} points is too large"
        )));
    }
    let graph = Graph::new(h);
    let n = graph.n;
    let edges = graph.edge_col.len();
    let kf = half as f64;

    let mut channel: Vec<f64> = (0..gsize)
        .map(|t| {
            let u = (t as f64 - kf) * step;
            (-u * u / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    normalize_sum(&mut channel);

    // Stretched width (in S-grid cells) of every edge.
    let width: Vec<usize> = graph
        .edge_h
        .iter()
        .map(|v| (v.abs() * kf).ceil() as usize + 1)
        .collect();
    let fft_size = (0..n)
        .map(|r| graph.row(r).map(|e| 2 * width[e] + 1).sum::<usize>())
        .max()
        .unwrap_or(1)
        .next_power_of_two();
    let max_deg = (0..n).map(|r| graph.row(r).len()).max().unwrap_or(0);
    let mut spectral = Spectral::new(fft_size);

    let beta: Vec<f64> = (0..n)
        .map(|r| {
            graph
                .row(r)
                .map(|e| graph.edge_h[e] * c[graph.edge_col[e]])
                .sum()
        })
        .collect();
    let replicas = config.integer_replicas;

    let mut q = vec![0.0; edges * gsize];
    for e in 0..edges {
        q[e * gsize..(e + 1) * gsize].copy_from_slice(&channel);
    }
    let mut p = vec![1.0; edges * gsize];
    let bins = spectral.bins;
    let mut spectra = vec![Complex64::default(); max_deg * bins];
    let mut suffix = vec![Complex64::default(); (max_deg + 1) * bins];
    let mut prefix = vec![Complex64::default(); bins];
    let mut work = vec![Complex64::default(); bins];
    let mut real = vec![0.0; fft_size];
    let mut fv = vec![0.0; fft_size];
    let mut msg = vec![0.0; gsize];
    let mut var_suffix = vec![0.0; (max_deg + 1) * gsize];
    let mut var_prefix = vec![0.0; gsize];
    let mut marginals = vec![0.0; n * gsize];
    let mut u_hat = vec![0.0; n];
    let mut history: Vec<Vec<i64>> = Vec::with_capacity(3);
    let mut m_hat = vec![0i64; n];
    let mut converged = false;
    let mut used = 0;

    for iter in 1..=config.iterations {
        used = iter;
        // Check nodes.
        for (r, &beta_r) in beta.iter().enumerate() {
            let row = graph.row(r);
            let deg = row.len();
            let total_w: usize = row.clone().map(|e| width[e]).sum();
            for (k, e) in row.clone().enumerate() {
                real.fill(0.0);
                let hv = graph.edge_h[e];
                let w = width[e] as f64;
                for (t, &val) in q[e * gsize..(e + 1) * gsize].iter().enumerate() {
                    if val == 0.0 {
                        continue;
                    }
                    // Always at least 1 by the choice of width.
                    let pos = w + hv * (t as f64 - kf);
                    let lo = pos as usize;
                    let frac = pos - lo as f64;
                    real[lo] += val * (1.0 - frac);
                    real[lo + 1] += val * frac;
                }
                let spec = &mut spectra[k * bins..(k + 1) * bins];
                spectral
                    .forward
                    .process_with_scratch(&mut real, spec, &mut spectral.scratch)
                    .expect("buffer sizes match the plan");
            }
            suffix[deg * bins..(deg + 1) * bins].fill(Complex64::new(1.0, 0.0));
            for k in (0..deg).rev() {
                let (head, tail) = suffix.split_at_mut((k + 1) * bins);
                let spec = &spectra[k * bins..(k + 1) * bins];
                for ((out, a), b) in head[k * bins..].iter_mut().zip(&tail[..bins]).zip(spec) {
                    *out = a * b;
                }
            }
            prefix.fill(Complex64::new(1.0, 0.0));
            let lo_b = (beta_r - replicas as f64 / 2.0).ceil();
            for (k, e) in row.clone().enumerate() {
                let tail = &suffix[(k + 1) * bins..(k + 2) * bins];
                for ((w, a), b) in work.iter_mut().zip(&prefix).zip(tail) {
                    *w = a * b;
                }
                // The DC and Nyquist bins of a real signal are real.
                work[0].im = 0.0;
                work[bins - 1].im = 0.0;
                spectral
                    .inverse
                    .process_with_scratch(&mut work, &mut fv, &mut spectral.scratch)
                    .expect("buffer sizes match the plan");
                let scale = 1.0 / spectral.size as f64;
                for f in fv.iter_mut() {
                    *f = (*f * scale).max(0.0);
                }
                let offset = (total_w - width[e]) as f64;
                let hv = graph.edge_h[e];
                let top = (fft_size - 2) as f64;
                msg.fill(0.0);
                for j in 0..replicas {
                    // Read position `base - hv * t`, kept inside [0, top].
                    let base = (lo_b + j as f64 - beta_r) / step + offset + hv * kf;
                    let (t_lo, t_hi) = readable_range(base, hv, top, gsize);
                    for (t, out) in msg.iter_mut().enumerate().take(t_hi).skip(t_lo) {
                        let pos = base - hv * t as f64;
                        let lo = (pos.max(0.0) as usize).min(fft_size - 2);
                        let frac = pos - lo as f64;
                        *out += fv[lo] + (fv[lo + 1] - fv[lo]) * frac;
                    }
                }
                if !normalize_max(&mut msg) {
                    msg.fill(1.0);
                }
                let dst = &mut p[e * gsize..(e + 1) * gsize];
                if config.damping > 0.0 && iter > 1 {
                    let a = config.damping;
                    for (d, m) in dst.iter_mut().zip(&msg) {
                        *d = a * *d + (1.0 - a) * m;
                    }
                } else {
                    dst.copy_from_slice(&msg);
                }
                let spec = &spectra[k * bins..(k + 1) * bins];
                for (a, b) in prefix.iter_mut().zip(spec) {
                    *a *= b;
                }
            }
        }

        // Variable nodes.
        for i in 0..n {
            let inc = &graph.var_edges[i];
            let deg = inc.len();
            var_suffix[deg * gsize..(deg + 1) * gsize].fill(1.0);
            for k in (0..deg).rev() {
                let (head, tail) = var_suffix.split_at_mut((k + 1) * gsize);
                let pe = &p[inc[k] * gsize..(inc[k] + 1) * gsize];
                for ((out, a), b) in head[k * gsize..].iter_mut().zip(&tail[..gsize]).zip(pe) {
                    *out = a * b;
                }
            }
            var_prefix.copy_from_slice(&channel);
            for (k, &e) in inc.iter().enumerate() {
                let tail = &var_suffix[(k + 1) * gsize..(k + 2) * gsize];
                let qe = &mut q[e * gsize..(e + 1) * gsize];
                for ((out, a), b) in qe.iter_mut().zip(&var_prefix).zip(tail) {
                    *out = a * b;
                }
                if !normalize_sum(qe) {
                    qe.copy_from_slice(&channel);
                }
                let pe = &p[e * gsize..(e + 1) * gsize];
                for (a, b) in var_prefix.iter_mut().zip(pe) {
                    *a *= b;
                }
                // Keep the running product in range.
                normalize_max(&mut var_prefix);
            }
            let marg = &mut marginals[i * gsize..(i + 1) * gsize];
            marg.copy_from_slice(&var_prefix);
            if !normalize_sum(marg) {
                marg.copy_from_slice(&channel);
            }
            u_hat[i] = (argmax_centered(marg, half) as f64 - kf) * step;
        }
        if let Some(obs) = observer.as_mut() {
            obs(iter, &marginals);
        }

        for (r, m) in m_hat.iter_mut().enumerate() {
            let s: f64 = beta[r]
                + graph
                    .row(r)
                    .map(|e| graph.edge_h[e] * u_hat[graph.edge_col[e]])
                    .sum::<f64>();
            *m = s.round_ties_even() as i64;
        }
        if history.len() == 3 {
            history.remove(0);
        }
        history.push(m_hat.clone());
        if history.len() == 3
            && history.iter().all(|h| *h == m_hat)
            && residual(&graph, &beta, &u_hat, &m_hat) <= config.residual_tolerance
        {
            converged = true;
            break;
        }
    }

    let x_hat = c.iter().zip(&u_hat).map(|(ci, ui)| ci + ui).collect();
    Ok(DecodeResult {
        x_hat,
        m_hat,
        converged,
        iterations_used: used,
    })
}

/// Grid indices `t` in `0..gsize` with `0 <= base - hv * t <= top`, as a
/// half-open range.
fn readable_range(base: f64, hv: f64, top: f64, gsize: usize) -> (usize, usize) {
    let (a, b) = if hv > 0.0 {
        ((base - top) / hv, base / hv)
    } else {
        (base / hv, (base - top) / hv)
    };
    let lo = a.max(0.0).ceil();
    let hi = (b.floor() + 1.0).min(gsize as f64);
    if hi <= lo {
        (0, 0)
    } else {
        (lo as usize, hi as usize)
    }
}

/// Largest distance of a check sum `x_hat * h_r` from its rounded value.
fn residual(graph: &Graph, beta: &[f64], u: &[f64], m: &[i64]) -> f64 {
    (0..graph.n)
        .map(|r| {
            let s: f64 = beta[r]
                + graph
                    .row(r)
                    .map(|e| graph.edge_h[e] * u[graph.edge_col[e]])
                    .sum::<f64>();
            (s - m[r] as f64).abs()
        })
        .fold(0.0, f64::max)
}
