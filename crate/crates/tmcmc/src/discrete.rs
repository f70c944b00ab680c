//! Discrete-state transformation chains and exact finite-kernel oracles.
//!
//! Two chains:
//!
//! - sign chain on `{-1, +1}^k`: the forward map sets a coordinate to +1,
//!   the backward map to -1 (any innovation above 1 gives the same map, so
//!   its value never matters). No Jacobian appears in discrete state
//!   spaces.
//! - integer lattice chain on `Z^k`: joint moves add `+/- floor(eps)` to
//!   every coordinate with a single innovation. Joint moves alone preserve
//!   the parity of coordinate differences, so with probability `r` a single
//!   uniformly chosen coordinate is updated instead, which restores
//!   irreducibility.
//!
//! For small state spaces the full transition matrix can be assembled by
//! enumerating every (innovation, move type, accept/reject) outcome, giving
//! machine-precision stationarity and detailed-balance checks.

use nalgebra::DMatrix;
use rand::{Rng, RngCore};

use crate::moves::{log_move_prob_ratio, sample_move, MoveProbabilities};
use crate::transforms::MoveIndicator;
use crate::{Error, Result};

/// States an exact kernel may enumerate before the oracle refuses.
pub const MAX_ORACLE_STATES: usize = 10_000;

/// Point in `{-1, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignState(Vec<i8>);

impl SignState {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|s| !matches!(s, -1 | 1)) {
            return Err(Error::InvalidConfig(
                "sign state entries must be -1 or +1".into(),
            ));
        }
        Ok(SignState(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

/// Point in `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeState(pub Vec<i64>);

/// Finite-support innovation laws used by the chains and oracles. Supports
/// must stay within `[1, inf)` so that the integer step `floor(eps)` is at
/// least 1 and the sign map always flips.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscreteEps {
    PointMass(f64),
    /// Evenly weighted grid of `points` values across `[lo, hi)`.
    UniformGrid { lo: f64, hi: f64, points: usize },
}

impl DiscreteEps {
    /// The lattice default: innovations in `[1, 2)`, so the integer step is
    /// 1 almost surely and small boxes stay exactly enumerable.
    pub fn unit_step() -> Self {
        DiscreteEps::UniformGrid {
            lo: 1.0,
            hi: 2.0,
            points: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DiscreteEps::PointMass(v) => v >= 1.0 && v.is_finite(),
            DiscreteEps::UniformGrid { lo, hi, points } => {
                lo >= 1.0 && hi > lo && hi.is_finite() && points > 0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "innovation law {self:?} must be supported on [1, inf)"
            )))
        }
    }

    /// (value, probability) pairs of the support.
    pub fn support(&self) -> Vec<(f64, f64)> {
        match *self {
            DiscreteEps::PointMass(v) => vec![(v, 1.0)],
            DiscreteEps::UniformGrid { lo, hi, points } => {
                let w = 1.0 / points as f64;
                (0..points)
                    .map(|i| (lo + (hi - lo) * (i as f64 + 0.5) / points as f64, w))
                    .collect()
            }
        }
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match *self {
            DiscreteEps::PointMass(v) => v,
            DiscreteEps::UniformGrid { lo, hi, points } => {
                let i = rng.random_range(0..points);
                lo + (hi - lo) * (i as f64 + 0.5) / points as f64
            }
        }
    }
}

/// Applies a move indicator to a sign state: forward sets +1, backward
/// sets -1, holds keep the coordinate. Deterministic because any innovation
/// above 1 pushes `sgn(x +/- eps)` to the same value.
pub fn sign_move(state: &SignState, z: &MoveIndicator) -> SignState {
    SignState(
        state
            .0
            .iter()
            .zip(z.signs())
            .map(|(&s, &zi)| if zi == 0 { s } else { zi })
            .collect(),
    )
}

/// One sign-chain transition. The innovation draw is elided because every
/// admissible innovation induces the same map; the acceptance ratio carries
/// the move-probability ratio and the target ratio only.
pub fn sign_tmcmc_step<F: Fn(&[i8]) -> f64>(
    state: &mut SignState,
    log_weight: F,
    probs: &MoveProbabilities,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    if probs.dim() != state.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "probabilities dim {} vs state dim {}",
            probs.dim(),
            state.0.len()
        )));
    }
    let z = sample_move(probs, rng)?;
    let proposal = sign_move(state, &z);
    let log_ratio =
        log_move_prob_ratio(&z, probs)? + log_weight(&proposal.0) - log_weight(&state.0);
    let accepted = rng.random::<f64>().ln() < log_ratio.min(0.0);
    if accepted {
        *state = proposal;
    }
    Ok(accepted)
}

/// One lattice-chain transition.
///
/// With probability `single_site_prob` one uniformly chosen coordinate
/// moves by `+/- floor(eps)`; otherwise all coordinates move jointly with a
/// shared innovation. The move probabilities must have no holds (the
/// additive analogue).
pub fn lattice_tmcmc_step<F: Fn(&[i64]) -> f64>(
    state: &mut LatticeState,
    log_weight: F,
    single_site_prob: f64,
    probs: &MoveProbabilities,
    eps_law: &DiscreteEps,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    if !(0.0..=1.0).contains(&single_site_prob) {
        return Err(Error::InvalidConfig(format!(
            "single-site probability {single_site_prob} outside [0, 1]"
        )));
    }
    if probs.dim() != state.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "probabilities dim {} vs state dim {}",
            probs.dim(),
            state.0.len()
        )));
    }
    if !probs.has_no_holds() {
        return Err(Error::InvalidConfig(
            "lattice moves require p_i + q_i = 1 on every coordinate".into(),
        ));
    }
    eps_law.validate()?;
    let step = eps_law.sample(rng).floor() as i64;

    let (proposal, log_move_ratio) = if rng.random::<f64>() < single_site_prob {
        // single-site branch: fair direction, symmetric by construction
        let j = rng.random_range(0..state.0.len());
        let dir: i64 = if rng.random::<f64>() < 0.5 { 1 } else { -1 };
        let mut v = state.0.clone();
        v[j] += dir * step;
        (v, 0.0)
    } else {
        let z = sample_move(probs, rng)?;
        let v = state
            .0
            .iter()
            .zip(z.signs())
            .map(|(&x, &zi)| x + i64::from(zi) * step)
            .collect();
        (v, log_move_prob_ratio(&z, probs)?)
    };

    let log_ratio = log_move_ratio + log_weight(&proposal) - log_weight(&state.0);
    let accepted = rng.random::<f64>().ln() < log_ratio.min(0.0);
    if accepted {
        state.0 = proposal;
    }
    Ok(accepted)
}

/// Exactly assembled transition matrix over an enumerated state space.
#[derive(Debug, Clone)]
pub struct ExactKernel<S> {
    pub states: Vec<S>,
    pub matrix: DMatrix<f64>,
}

impl<S: PartialEq> ExactKernel<S> {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, s: &S) -> Option<usize> {
        self.states.iter().position(|t| t == s)
    }

    /// Largest deviation of a row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.n_states())
            .map(|i| (self.matrix.row(i).sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn normalized_weights(&self, log_weights: &[f64]) -> Vec<f64> {
        let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let unnorm: Vec<f64> = log_weights.iter().map(|lw| (lw - max).exp()).collect();
        let total: f64 = unnorm.iter().sum();
        unnorm.into_iter().map(|w| w / total).collect()
    }

    /// `max_j |(pi K)_j - pi_j|` for the distribution with the given
    /// log-weights.
    pub fn stationarity_gap(&self, log_weights: &[f64]) -> f64 {
        let pi = self.normalized_weights(log_weights);
        let mut gap: f64 = 0.0;
        for j in 0..self.n_states() {
            let flow: f64 = (0..self.n_states())
                .map(|i| pi[i] * self.matrix[(i, j)])
                .sum();
            gap = gap.max((flow - pi[j]).abs());
        }
        gap
    }

    /// `max_{i,j} |pi_i K_ij - pi_j K_ji|`.
    pub fn detailed_balance_gap(&self, log_weights: &[f64]) -> f64 {
        let pi = self.normalized_weights(log_weights);
        let n = self.n_states();
        let mut gap: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                gap = gap
                    .max((pi[i] * self.matrix[(i, j)] - pi[j] * self.matrix[(j, i)]).abs());
            }
        }
        gap
    }

    /// The two-step kernel `K^2`.
    pub fn two_step(&self) -> DMatrix<f64> {
        &self.matrix * &self.matrix
    }
}

/// Assembles the exact sign-chain kernel over all of `{-1, +1}^k` by
/// enumerating every admissible move type with its renormalized
/// probability (the all-hold type is excluded, matching the sampler's
/// rejection loop).
pub fn build_exact_sign_kernel<F: Fn(&[i8]) -> f64>(
    dim: usize,
    log_weight: F,
    probs: &MoveProbabilities,
) -> Result<ExactKernel<SignState>> {
    if probs.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "probabilities dim {} vs chain dim {dim}",
            probs.dim()
        )));
    }
    let n_states = 1usize
        .checked_shl(dim as u32)
        .filter(|&n| n <= MAX_ORACLE_STATES)
        .ok_or(Error::StateSpaceTooLarge {
            got: usize::MAX,
            cap: MAX_ORACLE_STATES,
        })?;

    let states: Vec<SignState> = (0..n_states)
        .map(|bits| {
            SignState(
                (0..dim)
                    .map(|b| if bits >> b & 1 == 1 { 1 } else { -1 })
                    .collect(),
            )
        })
        .collect();
    let index_of = |signs: &[i8]| -> usize {
        signs
            .iter()
            .enumerate()
            .map(|(b, &s)| if s == 1 { 1 << b } else { 0 })
            .sum()
    };

    // enumerate move types and their renormalized probabilities
    let mut moves: Vec<(MoveIndicator, f64)> = Vec::new();
    let mut total = 0.0;
    let mut signs = vec![0i8; dim];
    enumerate_ternary(&mut signs, 0, &mut |s: &[i8]| {
        if s.iter().all(|&v| v == 0) {
            return;
        }
        let p: f64 = s
            .iter()
            .zip(probs.forward().iter().zip(probs.backward()))
            .map(|(&zi, (&pf, &pb))| match zi {
                1 => pf,
                -1 => pb,
                _ => 1.0 - pf - pb,
            })
            .product();
        if p > 0.0 {
            total += p;
            moves.push((MoveIndicator::new(s.to_vec()).expect("non-hold"), p));
        }
    });

    let mut matrix = DMatrix::zeros(n_states, n_states);
    for (from, state) in states.iter().enumerate() {
        let lw_from = log_weight(&state.0);
        for (z, p_raw) in &moves {
            let p = p_raw / total;
            let proposal = sign_move(state, z);
            let log_ratio =
                log_move_prob_ratio(z, probs)? + log_weight(&proposal.0) - lw_from;
            let alpha = log_ratio.min(0.0).exp();
            let to = index_of(&proposal.0);
            matrix[(from, to)] += p * alpha;
            matrix[(from, from)] += p * (1.0 - alpha);
        }
    }
    Ok(ExactKernel { states, matrix })
}

fn enumerate_ternary(signs: &mut [i8], at: usize, visit: &mut impl FnMut(&[i8])) {
    if at == signs.len() {
        visit(signs);
        return;
    }
    for s in [-1i8, 0, 1] {
        signs[at] = s;
        enumerate_ternary(signs, at + 1, visit);
    }
}

/// Assembles the exact lattice kernel on the box `[lo, hi]^k`. Proposals
/// leaving the box are rejected (the chain stays), which truncates the
/// target to the box.
pub fn build_exact_lattice_kernel<F: Fn(&[i64]) -> f64>(
    lo: i64,
    hi: i64,
    dim: usize,
    log_weight: F,
    single_site_prob: f64,
    probs: &MoveProbabilities,
    eps_law: &DiscreteEps,
) -> Result<ExactKernel<LatticeState>> {
    if hi < lo {
        return Err(Error::InvalidConfig("empty lattice box".into()));
    }
    if !(0.0..=1.0).contains(&single_site_prob) {
        return Err(Error::InvalidConfig(
            "single-site probability outside [0, 1]".into(),
        ));
    }
    if probs.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "probabilities dim {} vs chain dim {dim}",
            probs.dim()
        )));
    }
    if !probs.has_no_holds() {
        return Err(Error::InvalidConfig(
            "lattice moves require p_i + q_i = 1 on every coordinate".into(),
        ));
    }
    eps_law.validate()?;

    let side = (hi - lo + 1) as usize;
    let n_states = side
        .checked_pow(dim as u32)
        .filter(|&n| n <= MAX_ORACLE_STATES)
        .ok_or(Error::StateSpaceTooLarge {
            got: usize::MAX,
            cap: MAX_ORACLE_STATES,
        })?;

    let states: Vec<LatticeState> = (0..n_states)
        .map(|mut idx| {
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                v.push(lo + (idx % side) as i64);
                idx /= side;
            }
            LatticeState(v)
        })
        .collect();
    let index_of = |v: &[i64]| -> Option<usize> {
        let mut idx = 0usize;
        for &c in v.iter().rev() {
            if c < lo || c > hi {
                return None;
            }
            idx = idx * side + (c - lo) as usize;
        }
        Some(idx)
    };

    // joint move types over {-1, +1}^k with their product probabilities
    let mut joint_moves: Vec<(MoveIndicator, f64)> = Vec::new();
    let mut signs = vec![0i8; dim];
    enumerate_ternary(&mut signs, 0, &mut |s: &[i8]| {
        if s.contains(&0) {
            return;
        }
        let p: f64 = s
            .iter()
            .zip(probs.forward().iter().zip(probs.backward()))
            .map(|(&zi, (&pf, &pb))| if zi == 1 { pf } else { pb })
            .product();
        if p > 0.0 {
            joint_moves.push((MoveIndicator::new(s.to_vec()).expect("non-hold"), p));
        }
    });

    let mut matrix = DMatrix::zeros(n_states, n_states);
    for (from, state) in states.iter().enumerate() {
        let lw_from = log_weight(&state.0);
        for &(eps, w_eps) in &eps_law.support() {
            let step = eps.floor() as i64;

            // single-site branch
            for j in 0..dim {
                for dir in [1i64, -1] {
                    let weight = single_site_prob * w_eps / (dim as f64 * 2.0);
                    let mut v = state.0.clone();
                    v[j] += dir * step;
                    accumulate(
                        &mut matrix,
                        from,
                        index_of(&v),
                        weight,
                        (v_log_weight(&log_weight, &v, index_of(&v)) - lw_from).min(0.0),
                    );
                }
            }

            // joint branch
            for (z, p_z) in &joint_moves {
                let weight = (1.0 - single_site_prob) * w_eps * p_z;
                let v: Vec<i64> = state
                    .0
                    .iter()
                    .zip(z.signs())
                    .map(|(&x, &zi)| x + i64::from(zi) * step)
                    .collect();
                let to = index_of(&v);
                let log_ratio = log_move_prob_ratio(z, probs)?
                    + v_log_weight(&log_weight, &v, to)
                    - lw_from;
                accumulate(&mut matrix, from, to, weight, log_ratio.min(0.0));
            }
        }
    }
    return Ok(ExactKernel { states, matrix });

    fn v_log_weight<F: Fn(&[i64]) -> f64>(f: &F, v: &[i64], in_box: Option<usize>) -> f64 {
        if in_box.is_some() {
            f(v)
        } else {
            f64::NEG_INFINITY
        }
    }

    fn accumulate(
        matrix: &mut DMatrix<f64>,
        from: usize,
        to: Option<usize>,
        weight: f64,
        log_alpha: f64,
    ) {
        let alpha = log_alpha.exp();
        if let Some(to) = to {
            matrix[(from, to)] += weight * alpha;
            matrix[(from, from)] += weight * (1.0 - alpha);
        } else {
            matrix[(from, from)] += weight;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ising_weight(coupling: f64) -> impl Fn(&[i8]) -> f64 {
        move |s: &[i8]| coupling * f64::from(s[0]) * f64::from(s[1])
    }

    #[test]
    fn sign_forward_move_is_deterministic_in_one_dimension() {
        // from -1 the forward move always lands on +1, whatever the
        // innovation would have been
        let from = SignState::new(vec![-1]).unwrap();
        let forward = MoveIndicator::new(vec![1]).unwrap();
        assert_eq!(sign_move(&from, &forward).signs(), &[1]);
        let backward = MoveIndicator::new(vec![-1]).unwrap();
        assert_eq!(sign_move(&from, &backward).signs(), &[-1]);

        // a one-sided move design cannot form the acceptance ratio: the
        // conjugate move has probability zero
        let probs = MoveProbabilities::new(vec![1.0], vec![0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut s = SignState::new(vec![-1]).unwrap();
        assert!(matches!(
            sign_tmcmc_step(&mut s, |_| 0.0, &probs, &mut rng),
            Err(Error::UnbalancedMoves(_))
        ));
    }

    #[test]
    fn flat_weights_and_symmetric_moves_accept_everything() {
        let probs = MoveProbabilities::symmetric(3);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut s = SignState::new(vec![1, -1, 1]).unwrap();
        for _ in 0..500 {
            assert!(sign_tmcmc_step(&mut s, |_| 0.0, &probs, &mut rng).unwrap());
        }
    }

    #[test]
    fn ising_kernel_is_stationary_and_reversible() {
        let probs = MoveProbabilities::symmetric(2);
        let kernel = build_exact_sign_kernel(2, ising_weight(0.5), &probs).unwrap();
        assert!(kernel.max_row_sum_error() < 1e-14);
        let log_weights: Vec<f64> = kernel
            .states
            .iter()
            .map(|s| ising_weight(0.5)(s.signs()))
            .collect();
        assert!(kernel.stationarity_gap(&log_weights) < 1e-12);
        assert!(kernel.detailed_balance_gap(&log_weights) < 1e-12);
    }

    #[test]
    fn sign_kernel_with_holds_is_still_stationary_when_conjugate_symmetric() {
        // p_i = q_i < 1/2 leaves hold mass; conjugate symmetry keeps
        // reversibility exact
        let probs = MoveProbabilities::new(vec![0.3, 0.4], vec![0.3, 0.4]).unwrap();
        let kernel = build_exact_sign_kernel(2, ising_weight(0.8), &probs).unwrap();
        let log_weights: Vec<f64> = kernel
            .states
            .iter()
            .map(|s| ising_weight(0.8)(s.signs()))
            .collect();
        assert!(kernel.max_row_sum_error() < 1e-14);
        assert!(kernel.stationarity_gap(&log_weights) < 1e-12);
        assert!(kernel.detailed_balance_gap(&log_weights) < 1e-12);
    }

    fn geometric_weight(theta: f64) -> impl Fn(&[i64]) -> f64 {
        move |v: &[i64]| theta.ln() * v.iter().map(|c| c.abs()).sum::<i64>() as f64
    }

    #[test]
    fn lattice_kernel_is_stationary_on_a_truncated_geometric_target() {
        let probs = MoveProbabilities::symmetric(2);
        let kernel = build_exact_lattice_kernel(
            -4,
            4,
            2,
            geometric_weight(0.5),
            0.3,
            &probs,
            &DiscreteEps::unit_step(),
        )
        .unwrap();
        assert_eq!(kernel.n_states(), 81);
        assert!(kernel.max_row_sum_error() < 1e-14);
        let log_weights: Vec<f64> = kernel
            .states
            .iter()
            .map(|s| geometric_weight(0.5)(&s.0))
            .collect();
        assert!(kernel.stationarity_gap(&log_weights) < 1e-12);
        assert!(kernel.detailed_balance_gap(&log_weights) < 1e-12);
    }

    #[test]
    fn joint_only_lattice_chain_has_the_parity_obstruction() {
        let probs = MoveProbabilities::symmetric(2);
        let kernel = build_exact_lattice_kernel(
            -3,
            3,
            2,
            |_| 0.0,
            0.0, // no single-site branch
            &probs,
            &DiscreteEps::unit_step(),
        )
        .unwrap();
        let two = kernel.two_step();
        let from = kernel
            .state_index(&LatticeState(vec![1, 2]))
            .expect("state in box");
        let mut blocked = 0;
        for (j, state) in kernel.states.iter().enumerate() {
            let same_parity = (state.0[0] - state.0[1]).rem_euclid(2) == 0;
            if same_parity {
                assert_eq!(
                    two[(from, j)],
                    0.0,
                    "reached same-parity state {:?} from (1,2)",
                    state.0
                );
                blocked += 1;
            }
        }
        assert!(blocked > 0);
    }

    #[test]
    fn single_site_branch_restores_two_step_reachability() {
        let probs = MoveProbabilities::symmetric(2);
        let kernel = build_exact_lattice_kernel(
            -2,
            2,
            2,
            geometric_weight(0.5),
            0.3,
            &probs,
            &DiscreteEps::unit_step(),
        )
        .unwrap();
        let two = kernel.two_step();
        let from = kernel.state_index(&LatticeState(vec![0, 0])).unwrap();
        for j in 0..kernel.n_states() {
            assert!(
                two[(from, j)] > 0.0,
                "state {:?} unreachable in two steps",
                kernel.states[j].0
            );
        }
    }

    #[test]
    fn single_site_only_chain_moves_one_coordinate_at_a_time() {
        let probs = MoveProbabilities::symmetric(2);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut v = LatticeState(vec![0, 0]);
        for _ in 0..200 {
            let before = v.0.clone();
            lattice_tmcmc_step(
                &mut v,
                |_| 0.0,
                1.0,
                &probs,
                &DiscreteEps::unit_step(),
                &mut rng,
            )
            .unwrap();
            let changed = before.iter().zip(&v.0).filter(|(a, b)| a != b).count();
            assert!(changed <= 1, "joint move under r = 1");
        }
    }

    #[test]
    fn empirical_frequencies_match_the_stationary_law() {
        // 10^6 steps of the 4-state Ising sign chain; occupancy compared to
        // pi by chi-squared on draws thinned enough to be near-independent
        let coupling = 0.5;
        let probs = MoveProbabilities::symmetric(2);
        let kernel = build_exact_sign_kernel(2, ising_weight(coupling), &probs).unwrap();
        let log_weights: Vec<f64> = kernel
            .states
            .iter()
            .map(|s| ising_weight(coupling)(s.signs()))
            .collect();
        let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut pi: Vec<f64> = log_weights.iter().map(|lw| (lw - max).exp()).collect();
        let total: f64 = pi.iter().sum();
        for p in &mut pi {
            *p /= total;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let mut s = SignState::new(vec![1, 1]).unwrap();
        let mut counts = [0u64; 4];
        let steps = 1_000_000;
        let thin = 10;
        let mut kept = 0u64;
        for t in 0..steps {
            sign_tmcmc_step(&mut s, ising_weight(coupling), &probs, &mut rng).unwrap();
            if t % thin == 0 {
                let idx = kernel
                    .state_index(&SignState::new(s.signs().to_vec()).unwrap())
                    .unwrap();
                counts[idx] += 1;
                kept += 1;
            }
        }
        let mut chi2 = 0.0;
        for (c, p) in counts.iter().zip(&pi) {
            let expected = p * kept as f64;
            chi2 += (*c as f64 - expected).powi(2) / expected;
        }
        // 0.999 quantile of chi-squared with 3 degrees of freedom
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn oversized_state_spaces_are_refused() {
        let probs = MoveProbabilities::symmetric(20);
        assert!(matches!(
            build_exact_sign_kernel(20, |_| 0.0, &probs),
            Err(Error::StateSpaceTooLarge { .. })
        ));
    }
}
