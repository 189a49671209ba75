//! Numerical search for the minimum average concurrence over decompositions.
//!
//! With `ρ = Σⱼ |wⱼ⟩⟨wⱼ|` (`wⱼ = √λⱼ vⱼ` over the nonzero spectrum), every
//! `K`-member decomposition is `|ψᵢ⟩ = Σⱼ Uᵢⱼ |wⱼ⟩` for a `K × r` isometry `U`.
//! For an unnormalized member, `pᵢ C(ψᵢ/√pᵢ) = 2 |ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀|`, a quadratic
//! form in the rows of `U`, so the average concurrence is cheap to evaluate and
//! the search never touches the spin-flip used by the closed form.

use rayon::prelude::*;

use super::require_two_qubits;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, validate_density, DensityOperator, Subsystems, C64};
use crate::random::{random_isometry, seeded_rng};

const RANK_CUTOFF: f64 = 1e-12;
const SWEEP_IMPROVEMENT: f64 = 1e-9;
const MAX_SWEEPS: usize = 2000;
const GRID: usize = 8;
/// Coarse stage applied to every restart.
const SCREEN: Stage = Stage {
    eps: 1e-3,
    tol: 1e-6,
    max_sweeps: 25,
};
/// Restarts carried from the screening stage into full refinement.
const FINALISTS: usize = 6;
const POLISH: [f64; 3] = [1e-4, 1e-6, 0.0];

struct Stage {
    eps: f64,
    tol: f64,
    max_sweeps: usize,
}

/// Approximate infimum of `Σ pᵢ C(ψᵢ)` over decompositions of `rho` with
/// `ensemble_size` members.
///
/// Every restart draws a Haar isometry from its own stream of `seed` and is
/// screened with a short smoothed descent; the best few are then refined by
/// coordinate descent on `Σ √(|qᵢ|² + ε²)` with ε shrinking to zero, each stage
/// stopping once a sweep improves by less than 1e-9. The result is deterministic
/// in `(seed, restarts)`.
pub fn decomposition_infimum_oracle(
    rho: &DensityOperator,
    restarts: usize,
    ensemble_size: usize,
    seed: u64,
) -> Result<f64> {
    require_two_qubits(rho.layout().num_qubits())?;
    let report = validate_density(rho);
    if !report.passed {
        return Err(Error::InvalidDensity(report));
    }
    if restarts == 0 {
        return Err(Error::OutOfRange {
            what: "restarts",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let eig = hermitian_eigen(rho.matrix());
    let rank = eig.values.iter().filter(|&&x| x > RANK_CUTOFF).count();
    if ensemble_size < rank {
        return Err(Error::EnsembleTooSmall {
            size: ensemble_size,
            rank,
        });
    }
    let w: Vec<Vec<C64>> = (0..rank)
        .map(|j| {
            let s = eig.values[j].sqrt();
            eig.vector(j).into_iter().map(|z| z * s).collect()
        })
        .collect();
    let tau = (0..rank * rank)
        .map(|jk| determinant_form(&w[jk / rank], &w[jk % rank]))
        .collect();
    let problem = Problem {
        tau,
        rank,
        members: ensemble_size,
    };

    let mut screened: Vec<(f64, u64, Vec<C64>)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(seed, r);
            let mut u = random_isometry(ensemble_size, rank, &mut rng);
            let v = problem.descend(&mut u, &SCREEN);
            (v, r, u)
        })
        .collect();
    screened.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    screened.truncate(FINALISTS);

    let best = screened
        .into_par_iter()
        .map(|(_, _, mut u)| {
            for eps in POLISH {
                let stage = Stage {
                    eps,
                    tol: SWEEP_IMPROVEMENT,
                    max_sweeps: MAX_SWEEPS,
                };
                problem.descend(&mut u, &stage);
            }
            problem.objective(&u, 0.0)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

/// Symmetric bilinear form with `B(ψ, ψ) = 2(ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀)`.
fn determinant_form(u: &[C64], v: &[C64]) -> C64 {
    u[0] * v[3] + u[3] * v[0] - u[1] * v[2] - u[2] * v[1]
}

struct Problem {
    /// `τⱼₖ = B(wⱼ, wₖ)`, complex symmetric, row-major `rank × rank`.
    tau: Vec<C64>,
    rank: usize,
    members: usize,
}

impl Problem {
    /// `uᵀ τ v` for rows of the isometry.
    fn bilinear(&self, u: &[C64], v: &[C64]) -> C64 {
        let r = self.rank;
        u.iter()
            .zip(self.tau.chunks_exact(r))
            .map(|(&uj, row)| uj * row.iter().zip(v).map(|(&t, &vk)| t * vk).sum::<C64>())
            .sum()
    }

    fn objective(&self, u: &[C64], eps: f64) -> f64 {
        let r = self.rank;
        (0..self.members)
            .map(|i| {
                let row = &u[i * r..(i + 1) * r];
                smoothed_abs(self.bilinear(row, row), eps)
            })
            .sum()
    }

    /// Sweeps of exact line searches along the two off-diagonal generators of
    /// every row-pair rotation. Returns the smoothed objective reached.
    fn descend(&self, u: &mut [C64], stage: &Stage) -> f64 {
        let r = self.rank;
        let eps = stage.eps;
        let mut current = self.objective(u, eps);
        for _ in 0..stage.max_sweeps {
            let start = current;
            for a in 0..self.members {
                for b in a + 1..self.members {
                    for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                        let ua = u[a * r..(a + 1) * r].to_vec();
                        let ub = u[b * r..(b + 1) * r].to_vec();
                        let qaa = self.bilinear(&ua, &ua);
                        let qab = self.bilinear(&ua, &ub);
                        let qbb = self.bilinear(&ub, &ub);
                        let before = smoothed_abs(qaa, eps) + smoothed_abs(qbb, eps);
                        let pair = |theta: f64| {
                            let (s, c) = theta.sin_cos();
                            // rows a' = c·a − z·s·b and b' = z̄·s·a + c·b
                            let za = -phase * s;
                            let zb = phase.conj() * s;
                            let new_a = qaa * (c * c) + qab * (2.0 * c) * za + qbb * za * za;
                            let new_b = qaa * zb * zb + qab * (2.0 * c) * zb + qbb * (c * c);
                            smoothed_abs(new_a, eps) + smoothed_abs(new_b, eps)
                        };
                        let (theta, value) = line_minimize(pair);
                        if value < before - 1e-15 {
                            let (s, c) = theta.sin_cos();
                            for j in 0..r {
                                u[a * r + j] = ua[j] * c - phase * s * ub[j];
                                u[b * r + j] = phase.conj() * s * ua[j] + ub[j] * c;
                            }
                        }
                    }
                }
            }
            current = self.objective(u, eps);
            if start - current < stage.tol {
                break;
            }
        }
        current
    }
}

#[inline]
fn smoothed_abs(z: C64, eps: f64) -> f64 {
    if eps == 0.0 {
        z.norm()
    } else {
        (z.norm_sqr() + eps * eps).sqrt()
    }
}

/// Minimizes a π-periodic function of one angle: grid scan, then golden section
/// around the best grid point.
fn line_minimize(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let step = std::f64::consts::PI / GRID as f64;
    let (mut best_t, mut best_v) = (0.0, f(0.0));
    for k in 1..GRID {
        let t = -std::f64::consts::FRAC_PI_2 + k as f64 * step;
        let v = f(t);
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let (t, v) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if v < best_v {
        (t, v)
    } else {
        (best_t, best_v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_form_is_pure_concurrence() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)];
        assert!((determinant_form(&bell, &bell).norm() - 1.0).abs() < 1e-15);
        let prod = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        assert_eq!(determinant_form(&prod, &prod).norm(), 0.0);
    }

    #[test]
    fn line_search_finds_interior_minimum() {
        let (t, v) = line_minimize(|t| (t - 0.3).powi(2) + 1.0);
        assert!((t - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
