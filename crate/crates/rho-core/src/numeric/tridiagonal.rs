//! Symmetric tridiagonal eigenvalue extraction: Sturm-sequence bisection for
//! the lowest eigenvalues and inverse iteration for eigenvectors.

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e`
/// (`e.len() == d.len() - 1`).
#[derive(Debug, Clone)]
pub(crate) struct SymTridiag {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiag {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        debug_assert_eq!(e.len() + 1, d.len());
        Self { d, e }
    }

    fn pivmin(&self) -> f64 {
        let emax2 = self
            .e
            .iter()
            .fold(1.0_f64, |acc, &v| acc.max(v * v));
        f64::MIN_POSITIVE * emax2
    }

    /// Number of eigenvalues strictly below `sigma` (LDLᵀ pivot count).
    pub fn count_below(&self, sigma: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.d[0] - sigma;
        if q <= pivmin {
            q = q.min(-pivmin);
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.d.len() {
            q = self.d[i] - sigma - self.e[i - 1] * self.e[i - 1] / q;
            if q <= pivmin {
                q = q.min(-pivmin);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
            let right = if i < n - 1 { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - left - right);
            hi = hi.max(self.d[i] + left + right);
        }
        (lo, hi)
    }

    /// Eigenvalue counts below several shifts in a single streaming pass.
    pub fn count_below_multi(&self, sigmas: &[f64]) -> Vec<usize> {
        let m = sigmas.len();
        let pivmin = self.pivmin();
        let mut q = vec![0.0_f64; m];
        let mut counts = vec![0_usize; m];
        for (j, &sigma) in sigmas.iter().enumerate() {
            let mut v = self.d[0] - sigma;
            if v <= pivmin {
                v = v.min(-pivmin);
            }
            if v < 0.0 {
                counts[j] += 1;
            }
            q[j] = v;
        }
        for i in 1..self.d.len() {
            let di = self.d[i];
            let e2 = self.e[i - 1] * self.e[i - 1];
            for j in 0..m {
                let mut v = di - sigmas[j] - e2 / q[j];
                if v <= pivmin {
                    v = v.min(-pivmin);
                }
                if v < 0.0 {
                    counts[j] += 1;
                }
                q[j] = v;
            }
        }
        counts
    }

    /// The `k` smallest eigenvalues by simultaneous bisection: every sweep
    /// advances all targets with one matrix pass. Optional per-index bracket
    /// hints are count-verified and fall back to the Gershgorin interval.
    pub fn lowest_eigenvalues_multi(&self, k: usize, hints: Option<&[(f64, f64)]>) -> Vec<f64> {
        if k == 0 {
            return Vec::new();
        }
        let (glo, ghi) = self.gershgorin();
        let mut lo = vec![glo; k];
        let mut hi = vec![ghi; k];
        if let Some(hints) = hints {
            let los: Vec<f64> = hints.iter().take(k).map(|b| b.0).collect();
            let his: Vec<f64> = hints.iter().take(k).map(|b| b.1).collect();
            if los.len() == k {
                let c_lo = self.count_below_multi(&los);
                let c_hi = self.count_below_multi(&his);
                for i in 0..k {
                    if los[i] < his[i] && c_lo[i] <= i && c_hi[i] > i {
                        lo[i] = los[i];
                        hi[i] = his[i];
                    }
                }
            }
        }
        let mut active: Vec<usize> = (0..k).collect();
        for _ in 0..130 {
            active.retain(|&i| {
                let mid = 0.5 * (lo[i] + hi[i]);
                mid > lo[i]
                    && mid < hi[i]
                    && (hi[i] - lo[i]).abs() > 1e-14 * lo[i].abs().max(hi[i].abs()).max(1.0)
            });
            if active.is_empty() {
                break;
            }
            let mids: Vec<f64> = active.iter().map(|&i| 0.5 * (lo[i] + hi[i])).collect();
            let counts = self.count_below_multi(&mids);
            for (slot, &i) in active.iter().enumerate() {
                if counts[slot] > i {
                    hi[i] = mids[slot];
                } else {
                    lo[i] = mids[slot];
                }
            }
        }
        (0..k).map(|i| 0.5 * (lo[i] + hi[i])).collect()
    }

    /// Eigenvector for an eigenvalue approximation by inverse iteration,
    /// normalized to unit Euclidean length.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.d.len();
        // slight shift keeps the factorization of T - λI nonsingular
        let shift = lambda * (1.0 + 1e-13) + 1e-300;
        let mut v: Vec<f64> = (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { 0.5 })
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            let mut w = self.solve_shifted(shift, &v);
            normalize(&mut w);
            v = w;
        }
        // fix the overall sign: first significant component positive
        if let Some(first) = v.iter().find(|c| c.abs() > 1e-8) {
            if *first < 0.0 {
                v.iter_mut().for_each(|c| *c = -*c);
            }
        }
        v
    }

    /// Solve (T - σI)w = b: banded LU with partial pivoting (the row swap
    /// widens the band by one superdiagonal), then two triangular sweeps.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut d: Vec<f64> = self.d.iter().map(|&v| v - sigma).collect();
        let mut dl = self.e.clone(); // multipliers after factorization
        let mut du = self.e.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut rhs = b.to_vec();

        let fix = |v: f64| {
            if v.abs() < 1e-300 {
                1e-300_f64.copysign(if v == 0.0 { 1.0 } else { v })
            } else {
                v
            }
        };

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let fact = dl[i] / fix(d[i]);
                d[i + 1] -= fact * du[i];
                dl[i] = fact;
            } else {
                swapped[i] = true;
                let fact = d[i] / fix(dl[i]);
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                du[i] = temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                dl[i] = fact;
            }
        }
        // forward sweep
        for i in 0..n.saturating_sub(1) {
            if swapped[i] {
                let temp = rhs[i];
                rhs[i] = rhs[i + 1];
                rhs[i + 1] = temp - dl[i] * rhs[i];
            } else {
                rhs[i + 1] -= dl[i] * rhs[i];
            }
        }
        // back substitution
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= du2[i] * x[i + 2];
            }
            x[i] = acc / fix(d[i]);
        }
        x
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|c| *c /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Discrete 1D Laplacian eigenvalues are 4 sin²(kπ/(2(n+1))).
    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn laplacian_eigenvalues() {
        let n = 60;
        let t = laplacian(n);
        let lowest = t.lowest_eigenvalues_multi(5, None);
        for (k, &got) in lowest.iter().enumerate() {
            let exact =
                4.0 * ((k as f64 + 1.0) * std::f64::consts::PI / (2.0 * (n as f64 + 1.0)))
                    .sin()
                    .powi(2);
            assert_relative_eq!(got, exact, max_relative = 1e-12);
        }
        // ascending order
        for pair in lowest.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn count_below_is_consistent() {
        let t = laplacian(40);
        let evs = t.lowest_eigenvalues_multi(6, None);
        for (k, &ev) in evs.iter().enumerate() {
            assert_eq!(t.count_below(ev - 1e-9), k);
            assert_eq!(t.count_below(ev + 1e-9), k + 1);
        }
        // multi-shift counting agrees with one-at-a-time counting
        let sigmas: Vec<f64> = evs.iter().map(|ev| ev + 1e-9).collect();
        let multi = t.count_below_multi(&sigmas);
        for (k, &c) in multi.iter().enumerate() {
            assert_eq!(c, k + 1);
        }
    }

    #[test]
    fn bracket_hints_match_full_search() {
        let t = laplacian(50);
        let full = t.lowest_eigenvalues_multi(3, None);
        let hints: Vec<(f64, f64)> = full.iter().map(|ev| (ev - 1e-3, ev + 1e-3)).collect();
        let hinted = t.lowest_eigenvalues_multi(3, Some(&hints));
        for (a, b) in full.iter().zip(&hinted) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        // wrong hints silently fall back to the Gershgorin interval
        let wrong: Vec<(f64, f64)> = full.iter().map(|ev| (ev + 0.1, ev + 0.2)).collect();
        let fallback = t.lowest_eigenvalues_multi(3, Some(&wrong));
        for (a, b) in full.iter().zip(&fallback) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn eigenvector_matches_analytic_mode() {
        let n = 80;
        let t = laplacian(n);
        let ev = t.lowest_eigenvalues_multi(2, None)[1]; // second mode: one interior node
        let v = t.eigenvector(ev);
        // residual ‖(T-λ)v‖ small
        let mut res: f64 = 0.0;
        for i in 0..n {
            let mut r = (t.d[i] - ev) * v[i];
            if i > 0 {
                r += t.e[i - 1] * v[i - 1];
            }
            if i < n - 1 {
                r += t.e[i] * v[i + 1];
            }
            res = res.max(r.abs());
        }
        assert!(res < 1e-10, "residual {res}");
        // one sign change
        let flips = v
            .windows(2)
            .filter(|w| w[0] * w[1] < 0.0)
            .count();
        assert_eq!(flips, 1);
        // matches sin(2πj/(n+1)) up to normalization
        let exact: Vec<f64> = (1..=n)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / (n as f64 + 1.0)).sin())
            .collect();
        let norm = exact.iter().map(|c| c * c).sum::<f64>().sqrt();
        for (a, b) in v.iter().zip(&exact) {
            assert_abs_diff_eq!(*a, b / norm, epsilon = 1e-9);
        }
    }
}
