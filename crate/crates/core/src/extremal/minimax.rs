//! Complex Chebyshev approximation on a finite point set:
//! `min_c max_i |(Bc)_i − f_i|`.
//!
//! A Lawson reweighting pass gives a cheap warm start; a log-barrier Newton method on the
//! second-order-cone form then polishes it. Every weighted least-squares minimum is a lower
//! bound on the optimum, so each result carries a certified bracket `[lower, upper]`.

use nalgebra::{DMatrix, DVector};

use crate::Complex;

#[derive(Clone, Debug)]
pub struct MinimaxOptions {
    /// Stop once `(upper − lower)/upper` falls below this.
    pub gap_tol: f64,
    pub lawson_iters: usize,
    pub max_newton: usize,
    pub weight_floor: f64,
    /// Residuals below `exact_tol·‖f‖` count as an exact fit.
    pub exact_tol: f64,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-9,
            lawson_iters: 40,
            max_newton: 200,
            weight_floor: 1e-14,
            exact_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimaxSolution {
    pub coeffs: DVector<Complex>,
    /// `max|Bc − f|` at `coeffs`.
    pub upper: f64,
    /// Certified lower bound on the optimum.
    pub lower: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stalled: bool,
    /// Best upper value after each iteration.
    pub history: Vec<f64>,
}

impl MinimaxSolution {
    pub fn gap(&self) -> f64 {
        if self.upper == 0.0 {
            0.0
        } else {
            (self.upper - self.lower) / self.upper
        }
    }
}

struct Best {
    coeffs: DVector<Complex>,
    upper: f64,
    lower: f64,
}

impl Best {
    fn offer_primal(&mut self, c: &DVector<Complex>, upper: f64) -> bool {
        if upper < self.upper {
            self.upper = upper;
            self.coeffs = c.clone();
            true
        } else {
            false
        }
    }

    fn offer_lower(&mut self, lower: f64) -> bool {
        if lower > self.lower && lower.is_finite() {
            self.lower = lower;
            true
        } else {
            false
        }
    }

    fn gap(&self) -> f64 {
        (self.upper - self.lower) / self.upper
    }
}

fn max_abs(v: &DVector<Complex>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Weighted least squares `min Σ w_i |(Bc)_i − f_i|²` by Householder QR of the rows with
/// positive weight.
struct WeightedLs {
    coeffs: Option<DVector<Complex>>,
    /// `‖(I − P) f_w‖` with `P` the projector onto the first `k` Householder vectors. Their
    /// span contains the range of `B_w` even when it is rank-deficient, so this never exceeds
    /// the least-squares minimum whatever the conditioning: with `Σw ≤ 1` it is a lower bound
    /// on the minimax error.
    lower: f64,
}

fn weighted_ls(b: &DMatrix<Complex>, f: &DVector<Complex>, w: &[f64]) -> WeightedLs {
    let k = b.ncols();
    let rows: Vec<usize> = (0..b.nrows()).filter(|&i| w[i] > 0.0).collect();
    let m = rows.len();
    let mut bw = DMatrix::from_fn(m, k, |i, j| b[(rows[i], j)] * w[rows[i]].sqrt());
    let mut fw = DVector::from_fn(m, |i, _| f[rows[i]] * w[rows[i]].sqrt());
    if m <= k {
        return WeightedLs {
            coeffs: normal_equations(&mut bw, &fw),
            lower: 0.0,
        };
    }
    let qr = bw.clone().qr();
    qr.q_tr_mul(&mut fw);
    let lower = fw.rows(k, m - k).norm();
    let r = qr.r();
    let diag: Vec<f64> = (0..k).map(|i| r[(i, i)].norm()).collect();
    let dmax = diag.iter().copied().fold(0.0, f64::max);
    let well_posed = diag.iter().all(|&d| d > 1e-12 * dmax);
    let coeffs = if well_posed {
        r.solve_upper_triangular(&fw.rows(0, k).into_owned())
    } else {
        None
    };
    let coeffs = coeffs
        .filter(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .or_else(|| {
            let fw = DVector::from_fn(m, |i, _| f[rows[i]] * w[rows[i]].sqrt());
            normal_equations(&mut bw, &fw)
        });
    WeightedLs {
        coeffs,
        lower: if lower.is_finite() { lower } else { 0.0 },
    }
}

/// Regularized normal equations with one refinement step, for rank-deficient systems.
fn normal_equations(bw: &mut DMatrix<Complex>, fw: &DVector<Complex>) -> Option<DVector<Complex>> {
    let mut g = bw.ad_mul(bw);
    let k = g.nrows();
    let tr: f64 = (0..k).map(|i| g[(i, i)].re).sum::<f64>() / k.max(1) as f64;
    let chol = match g.clone().cholesky() {
        Some(c) => c,
        None => {
            for i in 0..k {
                g[(i, i)] += Complex::new(1e-13 * tr.max(f64::MIN_POSITIVE), 0.0);
            }
            g.cholesky()?
        }
    };
    let mut c = chol.solve(&bw.ad_mul(fw));
    let r = fw - &*bw * &c;
    c += chol.solve(&bw.ad_mul(&r));
    c.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(c)
}

pub fn complex_minimax(
    b: &DMatrix<Complex>,
    f: &DVector<Complex>,
    opts: &MinimaxOptions,
) -> MinimaxSolution {
    let m = b.nrows();
    let k = b.ncols();
    let fnorm = max_abs(f);
    if k == 0 || fnorm == 0.0 {
        return MinimaxSolution {
            coeffs: DVector::zeros(k),
            upper: fnorm,
            lower: fnorm,
            iterations: 0,
            converged: true,
            stalled: false,
            history: vec![fnorm],
        };
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut w = vec![1.0 / m as f64; m];
    let first = weighted_ls(b, f, &w);
    let Some(c0) = first.coeffs else {
        return MinimaxSolution {
            coeffs: DVector::zeros(k),
            upper: fnorm,
            lower: 0.0,
            iterations: 0,
            converged: false,
            stalled: true,
            history: vec![fnorm],
        };
    };
    let r0 = b * &c0 - f;
    let u0 = max_abs(&r0);
    let mut best = Best {
        coeffs: c0.clone(),
        upper: u0,
        lower: first.lower,
    };
    best.offer_primal(&DVector::zeros(k), fnorm);
    if u0 <= opts.exact_tol * fnorm {
        return MinimaxSolution {
            coeffs: c0,
            upper: u0,
            lower: 0.0,
            iterations: 1,
            converged: true,
            stalled: false,
            history: vec![u0],
        };
    }

    // Lawson: w ← w·|r|, with a floor against frozen weights
    let mut floor = opts.weight_floor;
    let mut floor_doubled = false;
    let mut stale = 0;
    let mut r = r0;
    let mut stalled = false;
    for _ in 0..opts.lawson_iters {
        if best.gap() <= opts.gap_tol {
            break;
        }
        let mut sum = 0.0;
        for (wi, ri) in w.iter_mut().zip(r.iter()) {
            *wi *= ri.norm();
            sum += *wi;
        }
        if sum == 0.0 || !sum.is_finite() {
            break;
        }
        for wi in w.iter_mut() {
            *wi = (*wi / sum).max(floor);
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        iterations += 1;
        let ls = weighted_ls(b, f, &w);
        let Some(c) = ls.coeffs else {
            break;
        };
        r = b * &c - f;
        let improved_u = best.upper;
        best.offer_primal(&c, max_abs(&r));
        best.offer_lower(ls.lower);
        history.push(best.upper);
        if best.upper > improved_u * (1.0 - 1e-4) {
            stale += 1;
        } else {
            stale = 0;
        }
        if stale >= 5 {
            if floor_doubled {
                break;
            }
            floor *= 2.0;
            floor_doubled = true;
            stale = 0;
        }
    }

    if best.gap() > opts.gap_tol {
        stalled = !barrier_polish(b, f, opts, &mut best, &mut history, &mut iterations);
    }
    let converged = best.gap() <= opts.gap_tol;
    MinimaxSolution {
        coeffs: best.coeffs,
        upper: best.upper,
        lower: best.lower,
        iterations,
        converged,
        stalled: stalled && !converged,
        history,
    }
}

fn realify(z: &DVector<Complex>) -> DVector<f64> {
    let k = z.len();
    DVector::from_fn(2 * k, |i, _| if i < k { z[i].re } else { z[i - k].im })
}

/// Change of the barrier objective between two strictly feasible points; computed as a
/// difference so the large `t·s` term does not swamp it.
fn barrier_change(
    t: f64,
    s: f64,
    r: &DVector<Complex>,
    s2: f64,
    r2: &DVector<Complex>,
) -> Option<f64> {
    let mut v = t * (s2 - s);
    for (z, z2) in r.iter().zip(r2.iter()) {
        let (a, a2) = (z.norm(), z2.norm());
        if s2 <= a2 {
            return None;
        }
        v -= (((s2 - a2) * (s2 + a2)) / ((s - a) * (s + a))).ln();
    }
    Some(v)
}

/// Dual bound from barrier multipliers: project `y` onto `ker Bᴴ`, rescale into the unit
/// dual ball and evaluate `−Re yᴴf`.
fn projected_dual_bound(
    f: &DVector<Complex>,
    q: &DMatrix<Complex>,
    y: &DVector<Complex>,
    lambda: &[f64],
) -> f64 {
    let yp = y - q * q.ad_mul(y);
    let mass: f64 = yp
        .iter()
        .zip(lambda)
        .map(|(z, &l)| z.norm().max(l))
        .sum();
    let val = -yp.iter().zip(f.iter()).map(|(y, f)| y.conj() * f).sum::<Complex>().re;
    val / mass
}

/// Newton's method on `t·s − Σ log(s² − |r_i|²)` along an increasing `t` path.
/// Returns false when progress stopped before the gap target.
fn barrier_polish(
    b: &DMatrix<Complex>,
    f: &DVector<Complex>,
    opts: &MinimaxOptions,
    best: &mut Best,
    history: &mut Vec<f64>,
    iterations: &mut usize,
) -> bool {
    let m = b.nrows();
    let k = b.ncols();
    let n = 2 * k + 1;
    let mut c = best.coeffs.clone();
    // start near the central path: duality gap 2m/t comparable to the current bracket
    let spread = (best.upper - best.lower).max(1e-12 * best.upper);
    let mut s = best.upper + spread;
    let mut t = m as f64 / (s - best.lower);
    // orthonormal basis of a space containing range(B)
    let q0 = (m > k).then(|| b.clone().qr().q());
    let mut newton = 0;
    while newton < opts.max_newton {
        // centering
        let mut centered = false;
        let mut steps = 0;
        while newton < opts.max_newton && steps < 40 {
            steps += 1;
            let r = b * &c - f;
            if r.iter().any(|z| z.norm() >= s) {
                return false;
            }
            let mut grad_s = t;
            let mut h_ss = 0.0;
            let mut alpha = vec![0.0; m];
            let mut gam = DVector::<Complex>::zeros(m);
            let mut mix = DVector::<Complex>::zeros(m);
            let mut x = DMatrix::<f64>::zeros(m, 2 * k);
            for i in 0..m {
                let a = r[i].norm();
                let d = (s - a) * (s + a);
                let inv = 1.0 / d;
                grad_s -= 2.0 * s * inv;
                h_ss += -2.0 * inv + 4.0 * s * s * inv * inv;
                alpha[i] = 2.0 * inv;
                gam[i] = r[i] * (2.0 * inv);
                mix[i] = r[i] * (-4.0 * s * inv * inv);
                let sb = 2.0 * inv;
                for j in 0..k {
                    let y = b[(i, j)].conj() * r[i] * sb;
                    x[(i, j)] = y.re;
                    x[(i, j + k)] = y.im;
                }
            }
            let mut bw = b.clone();
            for (i, mut row) in bw.row_iter_mut().enumerate() {
                row *= Complex::new(alpha[i].sqrt(), 0.0);
            }
            let gram = bw.ad_mul(&bw);
            let rank1 = x.tr_mul(&x);
            let mut h = DMatrix::<f64>::zeros(n, n);
            for p in 0..k {
                for q in 0..k {
                    let gpq = gram[(p, q)];
                    h[(p, q)] = gpq.re + rank1[(p, q)];
                    h[(p, q + k)] = -gpq.im + rank1[(p, q + k)];
                    h[(p + k, q)] = gpq.im + rank1[(p + k, q)];
                    h[(p + k, q + k)] = gpq.re + rank1[(p + k, q + k)];
                }
            }
            let hcs = realify(&b.ad_mul(&mix));
            for p in 0..2 * k {
                h[(p, 2 * k)] = hcs[p];
                h[(2 * k, p)] = hcs[p];
            }
            h[(2 * k, 2 * k)] = h_ss;
            let gc = realify(&b.ad_mul(&gam));
            let mut g = DVector::<f64>::zeros(n);
            g.rows_mut(0, 2 * k).copy_from(&gc);
            g[2 * k] = grad_s;

            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    let tr = (0..n).map(|i| h[(i, i)].abs()).sum::<f64>() / n as f64;
                    for i in 0..n {
                        h[(i, i)] += 1e-12 * tr;
                    }
                    match h.cholesky() {
                        Some(ch) => ch.solve(&(-&g)),
                        None => return false,
                    }
                }
            };
            newton += 1;
            *iterations += 1;
            let decrement = -g.dot(&step);
            if !(decrement.is_finite()) {
                return false;
            }
            if decrement < 1e-9 {
                centered = true;
                break;
            }
            let dc = DVector::from_fn(k, |j, _| Complex::new(step[j], step[j + k]));
            let ds = step[2 * k];
            let mut lam = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let c2 = &c + &dc * Complex::new(lam, 0.0);
                let s2 = s + lam * ds;
                let r2 = b * &c2 - f;
                if let Some(dv) = barrier_change(t, s, &r, s2, &r2) {
                    if dv <= -0.25 * lam * decrement {
                        c = c2;
                        s = s2;
                        moved = true;
                        break;
                    }
                }
                lam *= 0.5;
            }
            if !moved {
                // numerically centered as far as the arithmetic allows
                centered = true;
                break;
            }
            if decrement < 1e-7 {
                centered = true;
                break;
            }
        }
        if !centered {
            break;
        }
        // primal bound at the centre, dual bound from the barrier weights 1/D_i
        let r = b * &c - f;
        let up = best.upper;
        let lo = best.lower;
        best.offer_primal(&c, max_abs(&r));
        let w: Vec<f64> = r
            .iter()
            .map(|z| {
                let a = z.norm();
                1.0 / ((s - a) * (s + a))
            })
            .collect();
        let sum: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / sum).collect();
        if let Some(q0) = &q0 {
            let y = DVector::from_fn(m, |i, _| r[i] * (2.0 * w[i] / (2.0 * s)));
            let lam: Vec<f64> = w.clone();
            best.offer_lower(projected_dual_bound(f, q0, &y, &lam));
        }
        let ls = weighted_ls(b, f, &w);
        best.offer_lower(ls.lower);
        if let Some(cw) = ls.coeffs {
            let rw = b * &cw - f;
            best.offer_primal(&cw, max_abs(&rw));
        }
        // Weights on points below the maximum cost first-order accuracy in the bound;
        // restricted to the near-extremal set the loss is second order.
        let rmax = max_abs(&r);
        for eta in [1e-3, 1e-5, 1e-7] {
            let wp: Vec<f64> = w
                .iter()
                .zip(r.iter())
                .map(|(&wi, z)| if z.norm() >= rmax * (1.0 - eta) { wi } else { 0.0 })
                .collect();
            let sp: f64 = wp.iter().sum();
            if sp > 0.0 {
                let wp: Vec<f64> = wp.iter().map(|x| x / sp).collect();
                best.offer_lower(weighted_ls(b, f, &wp).lower);
            }
        }
        history.push(best.upper);
        if best.gap() <= opts.gap_tol {
            return true;
        }
        if best.upper >= up && best.lower <= lo && 2.0 * m as f64 / t < 1e-3 * opts.gap_tol * best.upper {
            return false;
        }
        t *= 8.0;
        if 2.0 * m as f64 / t < 1e-16 * best.upper {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn grid(m: usize) -> Vec<Complex> {
        (0..m)
            .map(|i| Complex::new(-1.0 + 2.0 * i as f64 / (m - 1) as f64, 0.0))
            .collect()
    }

    #[test]
    fn chebyshev_t3_error() {
        // best approximation of x³ by degree ≤ 2 on [-1,1] has error 1/4
        let x = grid(2001);
        let b = DMatrix::from_fn(x.len(), 3, |i, j| x[i].powu(j as u32));
        let f = DVector::from_iterator(x.len(), x.iter().map(|z| z.powu(3)));
        let sol = complex_minimax(&b, &f, &MinimaxOptions::default());
        assert!(sol.converged, "gap {}", sol.gap());
        assert!((sol.upper - 0.25).abs() < 1e-8);
        assert!(sol.lower <= sol.upper);
    }

    #[test]
    fn circle_inverse_power() {
        // 1/(2 − z) on the unit circle: best error 2^{-n}/3 with degree n
        let m = 256;
        let x: Vec<Complex> = (0..m)
            .map(|i| Complex::from_polar(1.0, 2.0 * PI * i as f64 / m as f64))
            .collect();
        let n = 5;
        let b = DMatrix::from_fn(m, n + 1, |i, j| x[i].powu(j as u32));
        let f = DVector::from_iterator(m, x.iter().map(|z| 1.0 / (2.0 - z)));
        let sol = complex_minimax(&b, &f, &MinimaxOptions::default());
        let want = 0.5f64.powi(n as i32) / 3.0;
        assert!((sol.upper - want).abs() < 1e-7 * want, "{} vs {want}", sol.upper);
        assert!(sol.lower <= want * (1.0 + 1e-9));
    }

    #[test]
    fn exact_fit_short_circuits() {
        let x = grid(50);
        let b = DMatrix::from_fn(x.len(), 4, |i, j| x[i].powu(j as u32));
        let f = DVector::from_iterator(x.len(), x.iter().map(|z| z * z - 3.0 * z + 1.0));
        let sol = complex_minimax(&b, &f, &MinimaxOptions::default());
        assert!(sol.converged && sol.upper < 1e-10);
    }
}
