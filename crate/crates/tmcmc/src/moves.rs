//! Move-indicator sampling and move-probability ratios.
//!
//! Two specification modes:
//!
//! - [`MoveProbabilities`]: per-coordinate forward/backward probabilities
//!   `(p_i, q_i)`. Indicators are drawn coordinate-wise and the all-hold
//!   outcome is rejected and redrawn, so the implied normalizing constant
//!   never needs to be computed — it cancels in the acceptance ratio.
//!   Scales to hundreds of coordinates.
//! - [`MoveTable`]: explicit probabilities over whole move types, for small
//!   dimension. Used when a design assigns probabilities to joint moves
//!   directly rather than per coordinate.

use std::collections::HashMap;

use rand::{Rng, RngCore};

use crate::transforms::MoveIndicator;
use crate::{Error, Result};

/// Cap on redraws of the all-hold indicator before giving up. The rejection
/// region is the single point z = 0, so hitting this cap means the
/// configuration makes holds overwhelmingly likely and should be fixed.
pub const MOVE_REJECTION_CAP: u64 = 1_000_000;

/// Per-coordinate forward (+1) and backward (-1) probabilities; the hold
/// probability is the complement `1 - p_i - q_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveProbabilities {
    forward: Vec<f64>,
    backward: Vec<f64>,
}

impl MoveProbabilities {
    pub fn new(forward: Vec<f64>, backward: Vec<f64>) -> Result<Self> {
        if forward.is_empty() || forward.len() != backward.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} forward vs {} backward probabilities",
                forward.len(),
                backward.len()
            )));
        }
        for (i, (&p, &q)) in forward.iter().zip(&backward).enumerate() {
            if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || p + q > 1.0 + 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "coordinate {i}: p={p}, q={q} must satisfy 0 <= p, q and p + q <= 1"
                )));
            }
        }
        if forward.iter().zip(&backward).all(|(&p, &q)| p + q == 0.0) {
            return Err(Error::InvalidConfig(
                "all coordinates hold with probability 1".into(),
            ));
        }
        Ok(MoveProbabilities { forward, backward })
    }

    /// Fair forward/backward choice on every coordinate, no holds. This is
    /// the pure-additive default where every indicator entry is +1 or -1.
    pub fn symmetric(dim: usize) -> Self {
        MoveProbabilities {
            forward: vec![0.5; dim],
            backward: vec![0.5; dim],
        }
    }

    /// Direction-biased probabilities from a correlation sign pattern.
    ///
    /// Coordinates marked +1 get forward probability `bias`, coordinates
    /// marked -1 get backward probability `bias`, so positively correlated
    /// coordinates tend to move together and anti-correlated ones tend to
    /// move in opposition. No holds.
    pub fn correlated(signs: &[i8], bias: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bias) {
            return Err(Error::InvalidConfig(format!("bias {bias} outside [0, 1]")));
        }
        if signs.iter().any(|s| !matches!(s, -1 | 1)) {
            return Err(Error::InvalidConfig(
                "correlation pattern entries must be -1 or +1".into(),
            ));
        }
        let forward = signs
            .iter()
            .map(|&s| if s > 0 { bias } else { 1.0 - bias })
            .collect();
        let backward = signs
            .iter()
            .map(|&s| if s > 0 { 1.0 - bias } else { bias })
            .collect();
        MoveProbabilities::new(forward, backward)
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[f64] {
        &self.forward
    }

    pub fn backward(&self) -> &[f64] {
        &self.backward
    }

    /// True when every coordinate always moves (`p_i + q_i = 1`).
    pub fn has_no_holds(&self) -> bool {
        self.forward
            .iter()
            .zip(&self.backward)
            .all(|(&p, &q)| (p + q - 1.0).abs() <= 1e-12)
    }

    /// Unnormalized probability of a given indicator under the product law.
    fn unnorm_prob(&self, z: &MoveIndicator) -> f64 {
        z.signs()
            .iter()
            .zip(self.forward.iter().zip(&self.backward))
            .map(|(&s, (&p, &q))| match s {
                1 => p,
                -1 => q,
                _ => 1.0 - p - q,
            })
            .product()
    }
}

/// Draws an indicator coordinate-wise, redrawing on the all-hold outcome.
pub fn sample_move(probs: &MoveProbabilities, rng: &mut dyn RngCore) -> Result<MoveIndicator> {
    for _ in 0..MOVE_REJECTION_CAP {
        let mut any = false;
        let mut signs = Vec::with_capacity(probs.dim());
        for (&p, &q) in probs.forward.iter().zip(&probs.backward) {
            let u: f64 = rng.random();
            let s = if u < p {
                1
            } else if u < p + q {
                -1
            } else {
                0
            };
            any |= s != 0;
            signs.push(s);
        }
        if any {
            return Ok(MoveIndicator::new(signs).expect("non-hold indicator"));
        }
    }
    Err(Error::MoveRejectionCap(MOVE_REJECTION_CAP))
}

/// Log of `P(conjugate(z)) / P(z)` under the product law.
///
/// Forward coordinates contribute `ln(q_i/p_i)`, backward ones `ln(p_i/q_i)`,
/// holds nothing; the rejection normalizer cancels and is never computed.
pub fn log_move_prob_ratio(z: &MoveIndicator, probs: &MoveProbabilities) -> Result<f64> {
    if z.dim() != probs.dim() {
        return Err(Error::DimensionMismatch(format!(
            "indicator dim {} vs probabilities dim {}",
            z.dim(),
            probs.dim()
        )));
    }
    let mut total = 0.0;
    for (i, (&s, (&p, &q))) in z
        .signs()
        .iter()
        .zip(probs.forward.iter().zip(&probs.backward))
        .enumerate()
    {
        let (num, den) = match s {
            1 => (q, p),
            -1 => (p, q),
            _ => continue,
        };
        if den == 0.0 {
            return Err(Error::UnbalancedMoves(format!(
                "coordinate {i} was moved although its selection probability is 0"
            )));
        }
        if num == 0.0 {
            return Err(Error::UnbalancedMoves(format!(
                "conjugate of the move at coordinate {i} has probability 0"
            )));
        }
        // ln(num) - ln(den) rather than ln(num/den): term-by-term negation
        // is exact, so the ratio is exactly antisymmetric under conjugation
        total += num.ln() - den.ln();
    }
    Ok(total)
}

/// Explicit probabilities over whole move types.
///
/// Every listed move must come paired with its conjugate (both with positive
/// probability), otherwise the acceptance ratio would be undefined. The
/// listed moves need not cover all sign patterns: a sparse table with a few
/// handpicked pairs is how strongly coupled directions (which no
/// per-coordinate product law can make likely in both orientations) get
/// their mass.
#[derive(Debug, Clone)]
pub struct MoveTable {
    dim: usize,
    moves: Vec<MoveIndicator>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
    index: HashMap<MoveIndicator, usize>,
}

/// Largest dimension whose full move-type enumeration stays tractable.
pub const MOVE_TABLE_MAX_DIM: usize = 16;

/// Cap on explicitly listed table entries.
pub const MOVE_TABLE_MAX_ENTRIES: usize = 1 << 16;

impl MoveTable {
    pub fn new(entries: Vec<(MoveIndicator, f64)>) -> Result<Self> {
        let Some(dim) = entries.first().map(|(z, _)| z.dim()) else {
            return Err(Error::InvalidConfig("empty move table".into()));
        };
        if entries.len() > MOVE_TABLE_MAX_ENTRIES {
            return Err(Error::InvalidConfig(format!(
                "move table with {} entries exceeds {MOVE_TABLE_MAX_ENTRIES}",
                entries.len()
            )));
        }
        let mut moves = Vec::with_capacity(entries.len());
        let mut probs = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (z, p) in entries {
            if z.dim() != dim {
                return Err(Error::DimensionMismatch(
                    "move table entries of mixed dimension".into(),
                ));
            }
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "move probability {p} must be positive"
                )));
            }
            if index.insert(z.clone(), moves.len()).is_some() {
                return Err(Error::InvalidConfig("duplicate move table entry".into()));
            }
            moves.push(z);
            probs.push(p);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "move table probabilities sum to {total}, expected 1"
            )));
        }
        for z in &moves {
            if !index.contains_key(&z.conjugate()) {
                return Err(Error::UnbalancedMoves(format!(
                    "move {:?} has no conjugate entry",
                    z.signs()
                )));
            }
        }
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        Ok(MoveTable {
            dim,
            moves,
            probs,
            cumulative,
            index,
        })
    }

    /// Enumerates the product law implied by per-coordinate probabilities.
    /// Only feasible in low dimension; intended for cross-checking the two
    /// specification modes against each other.
    pub fn from_probabilities(probs: &MoveProbabilities) -> Result<Self> {
        let k = probs.dim();
        if k > MOVE_TABLE_MAX_DIM {
            return Err(Error::InvalidConfig(format!(
                "cannot enumerate move types for dimension {k}"
            )));
        }
        let mut entries = Vec::new();
        let mut signs = vec![0i8; k];
        enumerate_signs(&mut signs, 0, &mut |s| {
            if s.iter().all(|&v| v == 0) {
                return;
            }
            let z = MoveIndicator::new(s.to_vec()).expect("non-hold");
            let p = probs.unnorm_prob(&z);
            if p > 0.0 {
                entries.push((z, p));
            }
        });
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        for (_, p) in &mut entries {
            *p /= total;
        }
        MoveTable::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn moves(&self) -> impl Iterator<Item = (&MoveIndicator, f64)> {
        self.moves.iter().zip(self.probs.iter().copied())
    }

    pub fn prob(&self, z: &MoveIndicator) -> Option<f64> {
        self.index.get(z).map(|&i| self.probs[i])
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> MoveIndicator {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c < u);
        self.moves[i.min(self.moves.len() - 1)].clone()
    }

    /// Log of `P(conjugate(z)) / P(z)` under the table.
    pub fn log_prob_ratio(&self, z: &MoveIndicator) -> Result<f64> {
        let p = self
            .prob(z)
            .ok_or_else(|| Error::UnbalancedMoves("move not present in table".into()))?;
        let pc = self
            .prob(&z.conjugate())
            .ok_or_else(|| Error::UnbalancedMoves("conjugate move not in table".into()))?;
        Ok(pc.ln() - p.ln())
    }
}

fn enumerate_signs(signs: &mut [i8], at: usize, visit: &mut impl FnMut(&[i8])) {
    if at == signs.len() {
        visit(signs);
        return;
    }
    for s in [-1i8, 0, 1] {
        signs[at] = s;
        enumerate_signs(signs, at + 1, visit);
    }
}

/// Either specification mode, used interchangeably by the TMCMC kernel.
#[derive(Debug, Clone)]
pub enum MoveLaw {
    PerCoordinate(MoveProbabilities),
    Table(MoveTable),
}

impl MoveLaw {
    pub fn dim(&self) -> usize {
        match self {
            MoveLaw::PerCoordinate(p) => p.dim(),
            MoveLaw::Table(t) => t.dim(),
        }
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<MoveIndicator> {
        match self {
            MoveLaw::PerCoordinate(p) => sample_move(p, rng),
            MoveLaw::Table(t) => Ok(t.sample(rng)),
        }
    }

    pub fn log_prob_ratio(&self, z: &MoveIndicator) -> Result<f64> {
        match self {
            MoveLaw::PerCoordinate(p) => log_move_prob_ratio(z, p),
            MoveLaw::Table(t) => t.log_prob_ratio(z),
        }
    }
}
