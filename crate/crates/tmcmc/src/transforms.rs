//! Per-coordinate deterministic transformation families.
//!
//! Each coordinate carries a forward map `T(x, eps)` and a backward map
//! `T_b(x, eps)` that are mutual inverses for fixed `eps`:
//!
//! - additive: `x + a*eps` / `x - a*eps`, innovation domain `(0, inf)`
//! - multiplicative: `x*eps` / `x/eps` on all of R, domain `(-1, 1) \ {0}`
//! - log-additive: `x*eps` / `x/eps` on `(0, inf)`, domain `(0, 1)`
//!
//! A joint move applies, per coordinate, the forward map, the backward map,
//! or no change, as selected by a [`MoveIndicator`]. All coordinates share
//! one scalar innovation, so the innovation domain of a mixed family is the
//! intersection of the per-coordinate domains. Jacobians are returned in
//! log-domain: each multiplicative or log-additive coordinate contributes
//! `z_i * ln|eps|`, additive coordinates contribute nothing.

use crate::{Error, Result};

/// Transformation rule applied to a single coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Additive,
    Multiplicative,
    LogAdditive,
}

impl CoordKind {
    fn eps_domain(self) -> EpsDomain {
        match self {
            CoordKind::Additive => EpsDomain::new(0.0, f64::INFINITY, false),
            CoordKind::Multiplicative => EpsDomain::new(-1.0, 1.0, true),
            CoordKind::LogAdditive => EpsDomain::new(0.0, 1.0, false),
        }
    }
}

/// Open interval of admissible innovations, optionally minus {0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsDomain {
    lo: f64,
    hi: f64,
    excludes_zero: bool,
}

impl EpsDomain {
    fn new(lo: f64, hi: f64, excludes_zero: bool) -> Self {
        EpsDomain {
            lo,
            hi,
            excludes_zero,
        }
    }

    pub fn contains(&self, eps: f64) -> bool {
        eps > self.lo && eps < self.hi && !(self.excludes_zero && eps == 0.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn intersect(self, other: EpsDomain) -> EpsDomain {
        EpsDomain {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
            excludes_zero: self.excludes_zero || other.excludes_zero,
        }
    }
}

/// Per-coordinate transformation kinds and scales.
///
/// Scales act on additive coordinates only (`x + a*eps`); the map for
/// multiplicative and log-additive coordinates is `x*eps` with no scale, so
/// their Jacobian stays exactly `eps^{z_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformFamily {
    kinds: Vec<CoordKind>,
    scales: Vec<f64>,
}

impl TransformFamily {
    /// Mixed per-coordinate family. Every scale must be positive.
    pub fn new(kinds: Vec<CoordKind>, scales: Vec<f64>) -> Result<Self> {
        if kinds.is_empty() {
            return Err(Error::InvalidConfig(
                "transformation family needs at least one coordinate".into(),
            ));
        }
        if kinds.len() != scales.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} kinds vs {} scales",
                kinds.len(),
                scales.len()
            )));
        }
        if let Some(a) = scales.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-positive scale {a}")));
        }
        Ok(TransformFamily { kinds, scales })
    }

    /// All-additive family with the given scales.
    pub fn additive(scales: Vec<f64>) -> Result<Self> {
        let kinds = vec![CoordKind::Additive; scales.len()];
        TransformFamily::new(kinds, scales)
    }

    /// All-multiplicative family in `dim` coordinates.
    pub fn multiplicative(dim: usize) -> Result<Self> {
        TransformFamily::new(vec![CoordKind::Multiplicative; dim], vec![1.0; dim])
    }

    /// All-log-additive family in `dim` coordinates.
    pub fn log_additive(dim: usize) -> Result<Self> {
        TransformFamily::new(vec![CoordKind::LogAdditive; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[CoordKind] {
        &self.kinds
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Innovation domain shared by all coordinates.
    pub fn eps_domain(&self) -> EpsDomain {
        self.kinds
            .iter()
            .map(|k| k.eps_domain())
            .reduce(EpsDomain::intersect)
            .expect("family is non-empty")
    }

    /// Checks that `x` lies in the family's state space.
    ///
    /// Multiplicative coordinates exclude exactly 0 (a null set of the
    /// construction; perturbing silently would hide caller bugs), and
    /// log-additive coordinates live on the positive half-line.
    pub fn check_state(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} coordinates, family has {}",
                x.len(),
                self.dim()
            )));
        }
        for (i, (&xi, kind)) in x.iter().zip(&self.kinds).enumerate() {
            match kind {
                CoordKind::Additive => {}
                CoordKind::Multiplicative => {
                    if xi == 0.0 {
                        return Err(Error::DomainViolation(format!(
                            "multiplicative coordinate {i} is exactly 0"
                        )));
                    }
                }
                CoordKind::LogAdditive => {
                    if xi <= 0.0 {
                        return Err(Error::DomainViolation(format!(
                            "log-additive coordinate {i} is {xi}, must be positive"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-coordinate move selection: +1 forward, -1 backward, 0 hold.
///
/// The all-hold indicator is invalid; the identity move is rejected at
/// sampling time and never represented.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoveIndicator(Vec<i8>);

impl MoveIndicator {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidConfig("empty move indicator".into()));
        }
        if signs.iter().any(|s| !matches!(s, -1..=1)) {
            return Err(Error::InvalidConfig(
                "move indicator entries must be -1, 0, or +1".into(),
            ));
        }
        if signs.iter().all(|&s| s == 0) {
            return Err(Error::InvalidConfig(
                "move indicator must have at least one non-hold coordinate".into(),
            ));
        }
        Ok(MoveIndicator(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Swaps forward and backward on every active coordinate.
    pub fn conjugate(&self) -> MoveIndicator {
        MoveIndicator(self.0.iter().map(|s| -s).collect())
    }
}

/// See [`MoveIndicator::conjugate`].
pub fn conjugate(z: &MoveIndicator) -> MoveIndicator {
    z.conjugate()
}

/// Applies the joint move selected by `z` and returns the new state together
/// with the log-Jacobian of the map `(x, eps) -> (x', eps)`.
pub fn apply_move(
    x: &[f64],
    eps: f64,
    z: &MoveIndicator,
    family: &TransformFamily,
) -> Result<(Vec<f64>, f64)> {
    family.check_state(x)?;
    if z.dim() != family.dim() {
        return Err(Error::DimensionMismatch(format!(
            "move indicator has {} coordinates, family has {}",
            z.dim(),
            family.dim()
        )));
    }
    if !family.eps_domain().contains(eps) {
        return Err(Error::EpsOutsideDomain { eps });
    }

    let mut out = Vec::with_capacity(x.len());
    let mut log_jacobian = 0.0;
    for i in 0..x.len() {
        let s = z.signs()[i];
        let xi = x[i];
        let next = match (family.kinds[i], s) {
            (_, 0) => xi,
            (CoordKind::Additive, 1) => xi + family.scales[i] * eps,
            (CoordKind::Additive, -1) => xi - family.scales[i] * eps,
            (CoordKind::Multiplicative | CoordKind::LogAdditive, 1) => {
                log_jacobian += eps.abs().ln();
                xi * eps
            }
            (CoordKind::Multiplicative | CoordKind::LogAdditive, -1) => {
                log_jacobian -= eps.abs().ln();
                xi / eps
            }
            _ => unreachable!("indicator entries are validated to -1/0/+1"),
        };
        out.push(next);
    }
    Ok((out, log_jacobian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ind(signs: &[i8]) -> MoveIndicator {
        MoveIndicator::new(signs.to_vec()).unwrap()
    }

    #[test]
    fn additive_move_matches_hand_values() {
        let fam = TransformFamily::additive(vec![1.0, 1.0]).unwrap();
        let (x, lj) = apply_move(&[1.0, 2.0], 0.5, &ind(&[1, -1]), &fam).unwrap();
        assert_eq!(x, vec![1.5, 1.5]);
        assert_eq!(lj, 0.0);
    }

    #[test]
    fn multiplicative_conjugate_factors_cancel() {
        let fam = TransformFamily::multiplicative(2).unwrap();
        let (x, lj) = apply_move(&[2.0, 3.0], 0.5, &ind(&[1, -1]), &fam).unwrap();
        assert_eq!(x, vec![1.0, 6.0]);
        // log(0.5) + log(2) = 0
        assert_eq!(lj, 0.0);
    }

    #[test]
    fn challenger_scaled_forward_move() {
        let fam = TransformFamily::additive(vec![7.3773, 4.3227]).unwrap();
        let (x, lj) = apply_move(&[0.0, 0.0], 1.0, &ind(&[1, 1]), &fam).unwrap();
        assert_eq!(x, vec![7.3773, 4.3227]);
        assert_eq!(lj, 0.0);
    }

    #[test]
    fn conjugate_flips_signs_and_keeps_holds() {
        assert_eq!(conjugate(&ind(&[1, -1])), ind(&[-1, 1]));
        assert_eq!(conjugate(&ind(&[1, 0, -1])), ind(&[-1, 0, 1]));
        let z = ind(&[1, 1]);
        assert_eq!(conjugate(&conjugate(&z)), z);
    }

    #[test]
    fn all_hold_indicator_is_rejected() {
        assert!(MoveIndicator::new(vec![0, 0]).is_err());
        assert!(MoveIndicator::new(vec![]).is_err());
        assert!(MoveIndicator::new(vec![2, 0]).is_err());
    }

    #[test]
    fn multiplicative_zero_is_a_domain_error() {
        let fam = TransformFamily::multiplicative(2).unwrap();
        let err = apply_move(&[0.0, 1.0], 0.5, &ind(&[1, 1]), &fam).unwrap_err();
        assert!(matches!(err, Error::DomainViolation(_)));
    }

    #[test]
    fn eps_outside_domain_is_rejected() {
        let fam = TransformFamily::additive(vec![1.0]).unwrap();
        assert!(matches!(
            apply_move(&[0.0], -0.5, &ind(&[1]), &fam),
            Err(Error::EpsOutsideDomain { .. })
        ));
        let fam = TransformFamily::log_additive(1).unwrap();
        assert!(matches!(
            apply_move(&[1.0], 1.5, &ind(&[1]), &fam),
            Err(Error::EpsOutsideDomain { .. })
        ));
    }

    #[test]
    fn mixed_family_domain_is_the_intersection() {
        let fam = TransformFamily::new(
            vec![CoordKind::Additive, CoordKind::Multiplicative],
            vec![1.0, 1.0],
        )
        .unwrap();
        let dom = fam.eps_domain();
        assert!(dom.contains(0.5));
        assert!(!dom.contains(-0.5)); // additive coordinate needs eps > 0
        assert!(!dom.contains(1.5)); // multiplicative needs |eps| < 1
    }

    #[test]
    fn mixed_family_jacobian_only_counts_scaling_coordinates() {
        let fam = TransformFamily::new(
            vec![CoordKind::Additive, CoordKind::LogAdditive],
            vec![2.0, 1.0],
        )
        .unwrap();
        let (x, lj) = apply_move(&[1.0, 4.0], 0.25, &ind(&[1, -1]), &fam).unwrap();
        assert_eq!(x, vec![1.5, 16.0]);
        assert_relative_eq!(lj, -(0.25f64.ln()), epsilon = 1e-15);
    }

    /// Forward and backward 1-D images never meet while eps ranges over the
    /// innovation domain.
    #[test]
    fn forward_and_backward_ranges_are_disjoint() {
        let cases = [
            (TransformFamily::additive(vec![1.3]).unwrap(), 2.0),
            (TransformFamily::multiplicative(1).unwrap(), 2.0),
            (TransformFamily::multiplicative(1).unwrap(), -0.7),
            (TransformFamily::log_additive(1).unwrap(), 2.0),
        ];
        for (fam, x0) in cases {
            let dom = fam.eps_domain();
            let lo = dom.lo().max(-0.999);
            let hi = dom.hi().min(3.0);
            let mut fwd = Vec::new();
            let mut bwd = Vec::new();
            for i in 0..400 {
                let eps = lo + (hi - lo) * (i as f64 + 0.5) / 400.0;
                if !dom.contains(eps) {
                    continue;
                }
                fwd.push(apply_move(&[x0], eps, &ind(&[1]), &fam).unwrap().0[0]);
                bwd.push(apply_move(&[x0], eps, &ind(&[-1]), &fam).unwrap().0[0]);
            }
            for f in &fwd {
                for b in &bwd {
                    assert!(
                        (f - b).abs() > 1e-9,
                        "forward image {f} collides with backward image {b} at x0={x0}"
                    );
                }
            }
        }
    }

    fn arb_family_and_state(k: usize) -> impl Strategy<Value = (TransformFamily, Vec<f64>)> {
        let kinds = proptest::collection::vec(
            prop_oneof![
                Just(CoordKind::Additive),
                Just(CoordKind::Multiplicative),
                Just(CoordKind::LogAdditive),
            ],
            k,
        );
        let scales = proptest::collection::vec(0.1f64..10.0, k);
        let raw_state = proptest::collection::vec(0.1f64..20.0, k);
        let flips = proptest::collection::vec(any::<bool>(), k);
        (kinds, scales, raw_state, flips).prop_map(|(kinds, scales, raw, flips)| {
            let state: Vec<f64> = kinds
                .iter()
                .zip(raw.iter().zip(flips))
                .map(|(kind, (&v, flip))| match kind {
                    // multiplicative coordinates may be negative, the others
                    // stay in their natural domains
                    CoordKind::Multiplicative if flip => -v,
                    CoordKind::Additive if flip => -v,
                    _ => v,
                })
                .collect();
            (TransformFamily::new(kinds, scales).unwrap(), state)
        })
    }

    fn arb_indicator(k: usize) -> impl Strategy<Value = MoveIndicator> {
        proptest::collection::vec(-1i8..=1, k)
            .prop_filter("needs one active coordinate", |v| v.iter().any(|&s| s != 0))
            .prop_map(|v| MoveIndicator::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        /// Applying the conjugate move with the same eps returns to the start
        /// and the two log-Jacobians cancel exactly.
        #[test]
        fn conjugacy_round_trip_and_jacobian_reciprocity(
            (fam, x) in (1usize..5).prop_flat_map(arb_family_and_state),
            eps_raw in 0.01f64..0.99,
            seed in any::<u64>(),
        ) {
            let k = fam.dim();
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let signs: Vec<i8> = (0..k).map(|_| [-1i8, 0, 1][rng.random_range(0..3)]).collect();
            prop_assume!(signs.iter().any(|&s| s != 0));
            let z = MoveIndicator::new(signs).unwrap();
            prop_assume!(fam.eps_domain().contains(eps_raw));

            let (y, lj_fwd) = apply_move(&x, eps_raw, &z, &fam).unwrap();
            let (back, lj_rev) = apply_move(&y, eps_raw, &z.conjugate(), &fam).unwrap();
            for (a, b) in x.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "round trip {a} -> {b}");
            }
            prop_assert_eq!(lj_fwd + lj_rev, 0.0);
        }

        /// Additive families have identically zero log-Jacobian.
        #[test]
        fn additive_jacobian_is_zero(
            scales in proptest::collection::vec(0.1f64..10.0, 1..6),
            x in proptest::collection::vec(-50.0f64..50.0, 6),
            z in arb_indicator(6),
            eps in 0.001f64..100.0,
        ) {
            let k = scales.len();
            let fam = TransformFamily::additive(scales).unwrap();
            let z = MoveIndicator::new(z.signs()[..k].to_vec());
            prop_assume!(z.is_ok());
            let (_, lj) = apply_move(&x[..k], eps, &z.unwrap(), &fam).unwrap();
            prop_assert_eq!(lj, 0.0);
        }
    }
}
