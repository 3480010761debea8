//! Brute-force verification of the distance degrees.
//!
//! The degrees are defined as extrema over the set of unpolarized states,
//! i.e. over the simplex of manifold weights `π`. This module minimizes the
//! three defining objectives numerically, without using the analytic
//! optima, so the closed forms and series elsewhere in the crate can be
//! checked against an independent route:
//!
//! * Hilbert–Schmidt: `Σ_(N,n) (μ_(N,n) − π_N/(N+1))²` over each manifold's
//!   full dimension;
//! * Bures: `1 − sqrt(F)` with the commuting-state fidelity
//!   `F = (Σ_(N,n) sqrt(μ_(N,n) π_N/(N+1)))²`;
//! * relative entropy: `Σ μ ln μ − Σ_N p_N ln(π_N/(N+1))`.
//!
//! The quadratic objective is minimized by projected gradient descent with
//! Duchi simplex projection; the Bures and entropy objectives, whose optima
//! span many orders of magnitude across manifolds, use multiplicative
//! (exponentiated-gradient) updates, which are scale free. Both methods
//! stop on the KKT residual of the simplex-constrained problem.
//!
//! Intended for verification scales (tens of manifolds, up to a few
//! hundred); production evaluation always goes through the series and
//! closed forms.

use crate::state::{ManifoldSpectrum, ModeDistribution, UnpolarizedWeights};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which defining objective to minimize over the unpolarized simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexObjective {
    HilbertSchmidt,
    BuresFidelity,
    RelativeEntropy,
}

/// One minimization instance.
#[derive(Debug, Clone)]
pub struct SimplexProblem<'a> {
    pub objective: SimplexObjective,
    pub spectrum: &'a ManifoldSpectrum,
}

/// Result of a simplex minimization.
#[derive(Debug, Clone)]
pub struct SimplexSolution {
    /// Minimized objective: the HS degree, the Bures degree, or the minimal
    /// relative entropy (callers map the latter to `s / (1 + s)`).
    pub value: f64,
    pub weights: UnpolarizedWeights,
    pub iterations: usize,
    pub kkt_residual: f64,
}

const MAX_ITERATIONS: usize = 500_000;
/// Components below this are treated as at the simplex boundary in the KKT
/// residual.
const ACTIVE_FLOOR: f64 = 1e-12;
/// Guard against division by an exactly zero weight in gradients.
const WEIGHT_FLOOR: f64 = 1e-300;

struct Objective {
    dims: Vec<f64>,
    p: Vec<f64>,
    /// `Σ μ²` over the whole grid (Hilbert–Schmidt constant term).
    sum_mu_sq: f64,
    /// `(Σ_n sqrt μ) / sqrt(N+1)` per manifold (Bures coefficients).
    bures_coeff: Vec<f64>,
    /// `Σ μ ln μ` over the whole grid (relative-entropy constant term).
    mu_ln_mu: f64,
    kind: SimplexObjective,
}

impl Objective {
    fn new(problem: &SimplexProblem) -> Self {
        let ms = problem.spectrum;
        let dims: Vec<f64> = (0..ms.len()).map(|n| (n + 1) as f64).collect();
        let p = ms.probabilities().to_vec();
        let mut sum_mu_sq = 0.0;
        let mut mu_ln_mu = 0.0;
        let mut bures_coeff = Vec::with_capacity(ms.len());
        for n in 0..ms.len() {
            let row = ms.eigenvalues(n);
            sum_mu_sq += row.iter().map(|&m| m * m).sum::<f64>();
            mu_ln_mu += row.iter().map(|&m| if m > 0.0 { m * m.ln() } else { 0.0 }).sum::<f64>();
            let root_sum: f64 = row.iter().map(|&m| m.sqrt()).sum();
            bures_coeff.push(root_sum / dims[n].sqrt());
        }
        Self { dims, p, sum_mu_sq, bures_coeff, mu_ln_mu, kind: problem.objective }
    }

    fn value(&self, pi: &[f64]) -> f64 {
        match self.kind {
            SimplexObjective::HilbertSchmidt => {
                // Expanded over the full manifold dimensions, so implicit
                // zero eigenvalues are accounted for.
                let mut acc = self.sum_mu_sq;
                for i in 0..pi.len() {
                    acc += (pi[i] * pi[i] - 2.0 * pi[i] * self.p[i]) / self.dims[i];
                }
                acc
            }
            SimplexObjective::BuresFidelity => {
                let root_f: f64 =
                    (0..pi.len()).map(|i| self.bures_coeff[i] * pi[i].sqrt()).sum();
                1.0 - root_f
            }
            SimplexObjective::RelativeEntropy => {
                let mut acc = self.mu_ln_mu;
                for i in 0..pi.len() {
                    if self.p[i] > 0.0 {
                        if pi[i] <= 0.0 {
                            return f64::INFINITY;
                        }
                        acc -= self.p[i] * (pi[i].ln() - self.dims[i].ln());
                    }
                }
                acc
            }
        }
    }

    fn gradient(&self, pi: &[f64], grad: &mut [f64]) {
        match self.kind {
            SimplexObjective::HilbertSchmidt => {
                for i in 0..pi.len() {
                    grad[i] = 2.0 * (pi[i] - self.p[i]) / self.dims[i];
                }
            }
            SimplexObjective::BuresFidelity => {
                for i in 0..pi.len() {
                    grad[i] = if self.bures_coeff[i] == 0.0 {
                        0.0
                    } else {
                        -self.bures_coeff[i] / (2.0 * pi[i].max(WEIGHT_FLOOR).sqrt())
                    };
                }
            }
            SimplexObjective::RelativeEntropy => {
                for i in 0..pi.len() {
                    grad[i] =
                        if self.p[i] == 0.0 { 0.0 } else { -self.p[i] / pi[i].max(WEIGHT_FLOOR) };
                }
            }
        }
    }
}

/// KKT residual of `min f` over the simplex: interior components must share
/// the multiplier, boundary components must not undercut it.
fn kkt_residual(pi: &[f64], grad: &[f64]) -> f64 {
    let lambda: f64 = pi.iter().zip(grad).map(|(&w, &g)| w * g).sum();
    let mut residual: f64 = 0.0;
    for (&w, &g) in pi.iter().zip(grad) {
        let r = if w > ACTIVE_FLOOR { (g - lambda).abs() } else { (lambda - g).max(0.0) };
        residual = residual.max(r);
    }
    residual
}

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("no NaN in projection input"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    let mut support = 0usize;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            threshold = t;
            support = i + 1;
        }
    }
    debug_assert!(support > 0);
    v.iter().map(|&u| (u - threshold).max(0.0)).collect()
}

fn solve_projected_gradient(obj: &Objective, tol: f64) -> Result<SimplexSolution> {
    // The Hessian is diagonal with entries 2/(N+1), so the Lipschitz
    // constant of the gradient is 2 and the fixed step 1/2 makes projected
    // gradient descent monotone with no line search.
    let step = 0.5;
    let n = obj.p.len();
    let mut pi = vec![1.0 / n as f64; n];
    let mut grad = vec![0.0; n];
    for iter in 0..MAX_ITERATIONS {
        obj.gradient(&pi, &mut grad);
        let residual = kkt_residual(&pi, &grad);
        if residual < tol {
            return Ok(finish(obj, pi, iter, residual));
        }
        let moved: Vec<f64> = pi.iter().zip(&grad).map(|(&w, &g)| w - step * g).collect();
        pi = project_to_simplex(&moved);
    }
    obj.gradient(&pi, &mut grad);
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual: kkt_residual(&pi, &grad) })
}

fn solve_multiplicative(obj: &Objective, tol: f64) -> Result<SimplexSolution> {
    // Multiplicative update `π ← π · (−∇f) / norm`. Both objectives have
    // componentwise nonpositive gradients, so the update keeps the iterate
    // on the simplex and contracts toward the KKT point where every
    // carried component shares the multiplier; components whose gradient
    // vanishes identically (no eigenvalue mass) decay to zero.
    let n = obj.p.len();
    let mut pi = vec![1.0 / n as f64; n];
    let mut grad = vec![0.0; n];
    for iter in 0..MAX_ITERATIONS {
        obj.gradient(&pi, &mut grad);
        let residual = kkt_residual(&pi, &grad);
        if residual < tol {
            return Ok(finish(obj, pi, iter, residual));
        }
        let mut total = 0.0;
        for (w, &g) in pi.iter_mut().zip(&grad) {
            debug_assert!(g <= 0.0);
            *w *= -g;
            total += *w;
        }
        debug_assert!(total > 0.0);
        for w in pi.iter_mut() {
            *w /= total;
        }
    }
    obj.gradient(&pi, &mut grad);
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual: kkt_residual(&pi, &grad) })
}

fn finish(obj: &Objective, pi: Vec<f64>, iterations: usize, kkt_residual: f64) -> SimplexSolution {
    let total: f64 = pi.iter().sum();
    let normalized: Vec<f64> = pi.iter().map(|&w| w / total).collect();
    let value = obj.value(&normalized);
    SimplexSolution {
        value,
        weights: UnpolarizedWeights::new(normalized).expect("normalized simplex point"),
        iterations,
        kkt_residual,
    }
}

/// Minimizes the problem's objective over the unpolarized simplex.
///
/// `tol` is the KKT residual at which the iteration is declared converged.
pub fn minimize_over_unpolarized(problem: &SimplexProblem, tol: f64) -> Result<SimplexSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("convergence tolerance must be positive, got {tol}")));
    }
    let obj = Objective::new(problem);
    match problem.objective {
        SimplexObjective::HilbertSchmidt => solve_projected_gradient(&obj, tol),
        SimplexObjective::BuresFidelity | SimplexObjective::RelativeEntropy => {
            solve_multiplicative(&obj, tol)
        }
    }
}

/// Ground-truth manifold probabilities `p_N = Σ_k a_k b_(N-k)` by direct
/// convolution of two single-mode distributions.
pub fn convolve_distributions(a: &ModeDistribution, b: &ModeDistribution) -> Vec<f64> {
    let xs = a.probs();
    let ys = b.probs();
    let mut out = vec![0.0; xs.len() + ys.len() - 1];
    for (i, &x) in xs.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in ys.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A reproducible random Fock-diagonal spectrum: every block eigenvalue is
/// drawn uniformly, then the grid is normalized to unit trace.
pub fn random_spectrum(n_max: usize, seed: u64) -> ManifoldSpectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mu: Vec<Vec<f64>> =
        (0..=n_max).map(|n| (0..=n).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let total: f64 = mu.iter().flatten().sum();
    for row in &mut mu {
        for value in row {
            *value /= total;
        }
    }
    ManifoldSpectrum::from_eigenvalues(mu, 0.0).expect("normalized random grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::{
        closest_unpolarized, p_bures_series, p_hs_series, p_re, DistanceMeasure,
    };
    use crate::state::TwoModeState;

    #[test]
    fn projection_basics() {
        let p = project_to_simplex(&[0.2, 0.3, 0.5]);
        for (a, b) in p.iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        let p = project_to_simplex(&[10.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0]);
        let p = project_to_simplex(&[-5.0, -5.0]);
        assert_eq!(p, vec![0.5, 0.5]);
        let p = project_to_simplex(&[0.4, 0.4, 0.4]);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unpolarized_input_is_its_own_optimum() {
        let weights = UnpolarizedWeights::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let ms = ManifoldSpectrum::su2_invariant(&weights);
        for objective in [
            SimplexObjective::HilbertSchmidt,
            SimplexObjective::BuresFidelity,
            SimplexObjective::RelativeEntropy,
        ] {
            let problem = SimplexProblem { objective, spectrum: &ms };
            let sol = minimize_over_unpolarized(&problem, 1e-10).unwrap();
            assert!(sol.value.abs() < 1e-9, "{objective:?} value {}", sol.value);
            assert!(sol.weights.total_variation(&weights) < 1e-7, "{objective:?}");
        }
    }

    #[test]
    fn hilbert_schmidt_optimum_keeps_the_photon_distribution() {
        let ms = random_spectrum(10, 7);
        let problem = SimplexProblem { objective: SimplexObjective::HilbertSchmidt, spectrum: &ms };
        let sol = minimize_over_unpolarized(&problem, 1e-10).unwrap();
        let analytic = closest_unpolarized(&ms, DistanceMeasure::HilbertSchmidt);
        assert!(sol.weights.total_variation(&analytic) < 1e-7);
        assert!((sol.value - p_hs_series(&ms)).abs() < 1e-9);
    }

    #[test]
    fn bures_on_a_fock_pair_finds_the_point_mass() {
        let state = TwoModeState::product(
            crate::state::ModeDistribution::fock(2),
            crate::state::ModeDistribution::fock(1),
        );
        let ms = state.manifold_spectrum();
        let problem = SimplexProblem { objective: SimplexObjective::BuresFidelity, spectrum: &ms };
        let sol = minimize_over_unpolarized(&problem, 1e-10).unwrap();
        assert!((sol.value - 0.5).abs() < 1e-9);
        assert!((sol.weights.weights()[3] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn all_objectives_match_series_on_random_spectra() {
        for seed in [1u64, 2, 3] {
            let ms = random_spectrum(8, seed);
            let entropy = ms.entropy();
            let targets = [
                (SimplexObjective::HilbertSchmidt, p_hs_series(&ms)),
                (SimplexObjective::BuresFidelity, p_bures_series(&ms)),
            ];
            for (objective, expected) in targets {
                let problem = SimplexProblem { objective, spectrum: &ms };
                let sol = minimize_over_unpolarized(&problem, 1e-10).unwrap();
                assert!(
                    (sol.value - expected).abs() < 1e-8,
                    "{objective:?} seed {seed}: {} vs {expected}",
                    sol.value
                );
            }
            let problem =
                SimplexProblem { objective: SimplexObjective::RelativeEntropy, spectrum: &ms };
            let sol = minimize_over_unpolarized(&problem, 1e-10).unwrap();
            let degree = sol.value / (1.0 + sol.value);
            assert!((degree - p_re(&ms, entropy).unwrap()).abs() < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn convolution_examples() {
        let vac = ModeDistribution::vacuum();
        assert_eq!(convolve_distributions(&vac, &vac), vec![1.0]);

        let policy = crate::state::TruncationPolicy::default();
        let a = ModeDistribution::thermal(1.0, &policy).unwrap();
        let conv = convolve_distributions(&a, &a);
        for (n, &p) in conv.iter().take(30).enumerate() {
            let expected = (n + 1) as f64 * 0.25 * 0.5f64.powi(n as i32);
            assert!((p - expected).abs() < 1e-13, "p_{n}");
        }
    }

    #[test]
    fn random_spectrum_is_reproducible() {
        let a = random_spectrum(6, 42);
        let b = random_spectrum(6, 42);
        assert_eq!(a.probabilities(), b.probabilities());
        let c = random_spectrum(6, 43);
        assert_ne!(a.probabilities(), c.probabilities());
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let ms = random_spectrum(3, 1);
        let problem = SimplexProblem { objective: SimplexObjective::HilbertSchmidt, spectrum: &ms };
        assert!(minimize_over_unpolarized(&problem, 0.0).is_err());
    }
}
