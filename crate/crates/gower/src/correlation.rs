//! Correlation between the overall weighted dissimilarity and each
//! per-variable dissimilarity.
//!
//! Four modes pair an estimator for continuous per-variable dissimilarities
//! with one for dichotomous (0/1) ones. Dichotomy is decided by value
//! inspection: a variable whose defined `d` values are all exactly 0 or 1
//! gets the biserial estimator in the biserial modes. Every estimator
//! works over a mask so that pairs with a missing contribution are
//! excluded variable by variable.

use crate::dissim::PerVariableDissimilarity;
use crate::error::{Error, Result};
use crate::matrix::gower_weighted_values;
use crate::ranks::average_ranks;
use crate::weights::WeightVector;

/// Correlation estimator pairing, named `wPG` / `wPbG` / `wSG` / `wSbG` in
/// reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationMode {
    /// Pearson for every variable.
    Pearson,
    /// Pearson for continuous variables, Brogden's biserial estimator for
    /// dichotomous ones.
    PearsonBrogden,
    /// Spearman for every variable.
    Spearman,
    /// Spearman for continuous variables, rank biserial for dichotomous
    /// ones.
    SpearmanRankBiserial,
}

impl CorrelationMode {
    pub const ALL: [CorrelationMode; 4] = [
        CorrelationMode::Pearson,
        CorrelationMode::PearsonBrogden,
        CorrelationMode::Spearman,
        CorrelationMode::SpearmanRankBiserial,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CorrelationMode::Pearson => "wPG",
            CorrelationMode::PearsonBrogden => "wPbG",
            CorrelationMode::Spearman => "wSG",
            CorrelationMode::SpearmanRankBiserial => "wSbG",
        }
    }

    /// Whether the mode ranks the weighted dissimilarity.
    pub fn rank_based(self) -> bool {
        matches!(
            self,
            CorrelationMode::Spearman | CorrelationMode::SpearmanRankBiserial
        )
    }
}

impl std::str::FromStr for CorrelationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<CorrelationMode> {
        match s {
            "wPG" => Ok(CorrelationMode::Pearson),
            "wPbG" => Ok(CorrelationMode::PearsonBrogden),
            "wSG" => Ok(CorrelationMode::Spearman),
            "wSbG" => Ok(CorrelationMode::SpearmanRankBiserial),
            other => Err(Error::InvalidConfig(format!(
                "unknown correlation mode {other:?} (expected wPG, wPbG, wSG or wSbG)"
            ))),
        }
    }
}

/// Dissimilarity weighting selector: the plain unweighted coefficient or a
/// correlation-balanced weighting under one of the four modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GowerMode {
    Unweighted,
    Weighted(CorrelationMode),
}

impl GowerMode {
    pub const ALL: [GowerMode; 5] = [
        GowerMode::Unweighted,
        GowerMode::Weighted(CorrelationMode::Pearson),
        GowerMode::Weighted(CorrelationMode::PearsonBrogden),
        GowerMode::Weighted(CorrelationMode::Spearman),
        GowerMode::Weighted(CorrelationMode::SpearmanRankBiserial),
    ];

    pub fn label(self) -> &'static str {
        match self {
            GowerMode::Unweighted => "unwG",
            GowerMode::Weighted(mode) => mode.label(),
        }
    }
}

impl std::str::FromStr for GowerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<GowerMode> {
        if s == "unwG" {
            Ok(GowerMode::Unweighted)
        } else {
            s.parse().map(GowerMode::Weighted).map_err(|_| {
                Error::InvalidConfig(format!(
                    "unknown mode {s:?} (expected unwG, wPG, wPbG, wSG or wSbG)"
                ))
            })
        }
    }
}

/// Which `h` the Brogden estimator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BrogdenHRule {
    /// `h = floor(m * max(mean0, mean1))` where the means are group means
    /// of the continuous variable.
    #[default]
    GroupMeans,
    /// `h = floor(m * proportion of ones)`, the classical choice.
    Proportion,
}

/// Options for the Brogden estimator.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrogdenOptions {
    pub h_rule: BrogdenHRule,
    /// Clip the estimate into `[-1, 1]`. Off by default: the estimator can
    /// legitimately exceed 1 under the group-means `h` rule.
    pub clip: bool,
}

/// Per-variable correlations with the weighted dissimilarity. Undefined
/// entries are flagged, never silently zero.
#[derive(Debug, Clone)]
pub struct CorrelationProfile {
    pub values: Vec<f64>,
    pub defined: Vec<bool>,
}

impl CorrelationProfile {
    pub fn defined_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.defined)
            .filter_map(|(&v, &def)| def.then_some(v))
    }

    pub fn defined_count(&self) -> usize {
        self.defined.iter().filter(|&&d| d).count()
    }

    /// `max - min` over defined entries.
    pub fn spread(&self) -> Option<f64> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in self.defined_values() {
            min = min.min(v);
            max = max.max(v);
        }
        (min <= max).then_some(max - min)
    }
}

fn compact2(x: &[f64], y: &[f64], mask: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let mut cx = Vec::new();
    let mut cy = Vec::new();
    for k in 0..mask.len() {
        if mask[k] {
            cx.push(x[k]);
            cy.push(y[k]);
        }
    }
    (cx, cy)
}

fn pearson_dense(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for k in 0..n {
        let dx = x[k] - mean_x;
        let dy = y[k] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Sample product-moment correlation over the masked-in points. `None`
/// when fewer than two points remain or either variance is zero.
pub fn pearson(x: &[f64], y: &[f64], mask: &[bool]) -> Option<f64> {
    let (cx, cy) = compact2(x, y, mask);
    pearson_dense(&cx, &cy)
}

/// Pearson correlation of the average ranks of the masked-in points.
pub fn spearman(x: &[f64], y: &[f64], mask: &[bool]) -> Option<f64> {
    let (cx, cy) = compact2(x, y, mask);
    pearson_dense(&average_ranks(&cx), &average_ranks(&cy))
}

/// Point biserial correlation of a continuous vector against a 0/1 vector:
/// `(mean1 - mean0) / s * sqrt(m/(m-1) * pbar * (1 - pbar))` with `s` the
/// sample standard deviation and `pbar` the proportion of ones. Equals
/// Pearson on the same data.
pub fn point_biserial(dwg: &[f64], dt: &[f64], mask: &[bool]) -> Option<f64> {
    let (x, groups) = compact2(dwg, dt, mask);
    let m = x.len();
    if m < 2 {
        return None;
    }
    let mut sum1 = 0.0;
    let mut n1 = 0usize;
    let mut sum0 = 0.0;
    let mut n0 = 0usize;
    for k in 0..m {
        if groups[k] == 1.0 {
            sum1 += x[k];
            n1 += 1;
        } else {
            sum0 += x[k];
            n0 += 1;
        }
    }
    if n1 == 0 || n0 == 0 {
        return None;
    }
    let mf = m as f64;
    let mean = (sum1 + sum0) / mf;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (mf - 1.0);
    if var == 0.0 {
        return None;
    }
    let pbar = n1 as f64 / mf;
    let r = (sum1 / n1 as f64 - sum0 / n0 as f64) / var.sqrt()
        * (mf / (mf - 1.0) * pbar * (1.0 - pbar)).sqrt();
    Some(r.clamp(-1.0, 1.0))
}

/// Brogden's biserial estimator: `(mean1 - mean0) / D_h`, where `D_h`
/// contrasts the mean of the `h` largest continuous values against the
/// mean of the rest. Not bounded by 1 under the default `h` rule.
pub fn brogden_biserial(
    dwg: &[f64],
    dt: &[f64],
    mask: &[bool],
    opts: &BrogdenOptions,
) -> Option<f64> {
    let (x, groups) = compact2(dwg, dt, mask);
    let m = x.len();
    if m < 2 {
        return None;
    }
    let mut sum1 = 0.0;
    let mut n1 = 0usize;
    let mut sum0 = 0.0;
    let mut n0 = 0usize;
    for k in 0..m {
        if groups[k] == 1.0 {
            sum1 += x[k];
            n1 += 1;
        } else {
            sum0 += x[k];
            n0 += 1;
        }
    }
    if n1 == 0 || n0 == 0 {
        return None;
    }
    let mean1 = sum1 / n1 as f64;
    let mean0 = sum0 / n0 as f64;

    let h_target = match opts.h_rule {
        BrogdenHRule::GroupMeans => m as f64 * mean0.max(mean1),
        BrogdenHRule::Proportion => m as f64 * (n1 as f64 / m as f64),
    };
    let h = (h_target.floor() as i64).clamp(1, m as i64 - 1) as usize;

    let mut sorted = x;
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let top: f64 = sorted[..h].iter().sum();
    let rest: f64 = sorted[h..].iter().sum();
    let d_h = top / h as f64 - rest / (m - h) as f64;
    if d_h == 0.0 {
        return None;
    }
    let r = (mean1 - mean0) / d_h;
    Some(if opts.clip { r.clamp(-1.0, 1.0) } else { r })
}

/// Rank biserial correlation: `2 * (mean rank in group 1 - mean rank in
/// group 0) / m`, with average ranks of the continuous vector over the
/// masked-in points.
pub fn rank_biserial(dwg: &[f64], dt: &[f64], mask: &[bool]) -> Option<f64> {
    let (x, groups) = compact2(dwg, dt, mask);
    let m = x.len();
    if m < 2 {
        return None;
    }
    let ranks = average_ranks(&x);
    let mut sum1 = 0.0;
    let mut n1 = 0usize;
    let mut sum0 = 0.0;
    let mut n0 = 0usize;
    for k in 0..m {
        if groups[k] == 1.0 {
            sum1 += ranks[k];
            n1 += 1;
        } else {
            sum0 += ranks[k];
            n0 += 1;
        }
    }
    if n1 == 0 || n0 == 0 {
        return None;
    }
    let r = 2.0 * (sum1 / n1 as f64 - sum0 / n0 as f64) / m as f64;
    Some(r.clamp(-1.0, 1.0))
}

/// Correlation of a given weighted-dissimilarity vector against every
/// variable's dissimilarity column. Each variable is masked to the pairs
/// where it is defined and the weighted dissimilarity is defined.
pub fn profile_against(
    pvd: &PerVariableDissimilarity,
    dwg: &[f64],
    mode: CorrelationMode,
    brogden: &BrogdenOptions,
) -> CorrelationProfile {
    debug_assert_eq!(dwg.len(), pvd.m());
    let m = pvd.m();
    let mut values = Vec::with_capacity(pvd.p());
    let mut defined = Vec::with_capacity(pvd.p());
    let mut mask = vec![false; m];
    for t in 0..pvd.p() {
        let delta = pvd.delta_column(t);
        for k in 0..m {
            mask[k] = delta[k] && !dwg[k].is_nan();
        }
        let dt = pvd.d_column(t);
        let r = match mode {
            CorrelationMode::Pearson => pearson(dwg, dt, &mask),
            CorrelationMode::PearsonBrogden => {
                if pvd.is_dichotomous(t) {
                    brogden_biserial(dwg, dt, &mask, brogden)
                } else {
                    pearson(dwg, dt, &mask)
                }
            }
            CorrelationMode::Spearman => spearman(dwg, dt, &mask),
            CorrelationMode::SpearmanRankBiserial => {
                if pvd.is_dichotomous(t) {
                    rank_biserial(dwg, dt, &mask)
                } else {
                    spearman(dwg, dt, &mask)
                }
            }
        };
        values.push(r.unwrap_or(f64::NAN));
        defined.push(r.is_some());
    }
    CorrelationProfile { values, defined }
}

/// Profile of the weighted Gower dissimilarity built from `weights`.
pub fn correlation_profile(
    pvd: &PerVariableDissimilarity,
    weights: &WeightVector,
    mode: CorrelationMode,
    brogden: &BrogdenOptions,
) -> Result<CorrelationProfile> {
    let dwg = gower_weighted_values(pvd, weights)?;
    Ok(profile_against(pvd, &dwg, mode, brogden))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissim::per_variable_matrix;
    use crate::dissim::OrdinalOptions;
    use crate::table::{ColumnValues, DataTable};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all(m: usize) -> Vec<bool> {
        vec![true; m]
    }

    #[test]
    fn pearson_perfect_linear() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let up: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let down: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &up, &all(10)).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&x, &down, &all(10)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_matches_definitional_oracle() {
        // Oracle on a different algebraic route: raw moments and sample
        // standard deviations.
        fn oracle(x: &[f64], y: &[f64]) -> f64 {
            let n = x.len() as f64;
            let mx = x.iter().sum::<f64>() / n;
            let my = y.iter().sum::<f64>() / n;
            let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() - n * mx * my;
            let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            sxy / ((n - 1.0) * sx * sy)
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
            let got = pearson(&x, &y, &all(20)).unwrap();
            assert!((got - oracle(&x, &y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn pearson_undefined_cases() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], &all(3)).is_none());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0], &[true, false]).is_none());
    }

    #[test]
    fn masking_excludes_points() {
        let x = [0.0, 1.0, 2.0, 100.0];
        let y = [0.0, 1.0, 2.0, -50.0];
        let mask = [true, true, true, false];
        assert!((pearson(&x, &y, &mask).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_monotone_transform_gives_one() {
        let x: Vec<f64> = (0..15).map(|i| i as f64 / 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        assert!((spearman(&x, &y, &all(15)).unwrap() - 1.0).abs() < 1e-12);
        let rev: Vec<f64> = x.iter().rev().cloned().collect();
        assert!((spearman(&x, &rev, &all(15)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_with_ties_matches_rank_then_pearson() {
        let x = [1.0, 2.0, 2.0, 3.0, 5.0, 5.0, 5.0];
        let y = [0.1, 0.4, 0.3, 0.3, 0.9, 0.8, 0.8];
        let oracle =
            pearson_dense(&average_ranks(&x), &average_ranks(&y)).unwrap();
        assert!((spearman(&x, &y, &all(7)).unwrap() - oracle).abs() <= 1e-12);
    }

    #[test]
    fn point_biserial_zero_when_group_means_equal() {
        let dwg = [0.2, 0.8, 0.8, 0.2];
        let dt = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(point_biserial(&dwg, &dt, &all(4)).unwrap(), 0.0);
    }

    #[test]
    fn point_biserial_equals_pearson() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = rng.random_range(4..40);
            let dwg: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
            let dt: Vec<f64> = (0..m)
                .map(|_| if rng.random_range(0.0..1.0) < 0.4 { 1.0 } else { 0.0 })
                .collect();
            let mask = all(m);
            match (point_biserial(&dwg, &dt, &mask), pearson(&dwg, &dt, &mask)) {
                (Some(pb), Some(pe)) => {
                    assert!((pb - pe).abs() <= 1e-12, "pb {pb} vs pearson {pe}")
                }
                (None, None) => {}
                (pb, pe) => panic!("definedness mismatch: {pb:?} vs {pe:?}"),
            }
        }
    }

    #[test]
    fn brogden_hand_case() {
        let dwg = [0.9, 0.8, 0.2, 0.1];
        let dt = [1.0, 1.0, 0.0, 0.0];
        let r = brogden_biserial(&dwg, &dt, &all(4), &BrogdenOptions::default()).unwrap();
        assert!((r - 1.3125).abs() <= 1e-12, "got {r}");
    }

    #[test]
    fn brogden_zero_numerator() {
        let dwg = [0.5, 0.1, 0.5, 0.1];
        let dt = [1.0, 1.0, 0.0, 0.0];
        let r = brogden_biserial(&dwg, &dt, &all(4), &BrogdenOptions::default()).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn brogden_shift_invariant_while_h_unchanged() {
        // Both the numerator and D_h are mean differences; a shift small
        // enough to keep h fixed leaves the estimate unchanged.
        let dwg = [0.9, 0.8, 0.2, 0.1];
        let shifted: Vec<f64> = dwg.iter().map(|v| v + 0.025).collect();
        let dt = [1.0, 1.0, 0.0, 0.0];
        let opts = BrogdenOptions::default();
        let a = brogden_biserial(&dwg, &dt, &all(4), &opts).unwrap();
        let b = brogden_biserial(&shifted, &dt, &all(4), &opts).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn brogden_clip_and_h_rule_options() {
        let dwg = [0.9, 0.8, 0.2, 0.1];
        let dt = [1.0, 1.0, 0.0, 0.0];
        let clipped = brogden_biserial(
            &dwg,
            &dt,
            &all(4),
            &BrogdenOptions {
                clip: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(clipped, 1.0);
        // Proportion rule: h = floor(4 * 0.5) = 2, D_h = 0.85 - 0.15 = 0.7.
        let prop = brogden_biserial(
            &dwg,
            &dt,
            &all(4),
            &BrogdenOptions {
                h_rule: BrogdenHRule::Proportion,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((prop - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rank_biserial_hand_case() {
        let dwg = [0.1, 0.2, 0.3, 0.4];
        let dt = [0.0, 0.0, 1.0, 1.0];
        assert_eq!(rank_biserial(&dwg, &dt, &all(4)).unwrap(), 1.0);
    }

    #[test]
    fn rank_biserial_zero_and_antisymmetry() {
        let dwg = [0.1, 0.4, 0.2, 0.3];
        let dt = [0.0, 0.0, 1.0, 1.0];
        let r = rank_biserial(&dwg, &dt, &all(4)).unwrap();
        let flipped: Vec<f64> = dt.iter().map(|v| 1.0 - v).collect();
        let s = rank_biserial(&dwg, &flipped, &all(4)).unwrap();
        assert_eq!(r, -s);

        let even = [0.1, 0.4, 0.2, 0.3];
        let groups = [1.0, 0.0, 0.0, 1.0];
        // Mean ranks: group 1 holds ranks {1, 3}, group 0 holds {4, 2}.
        let r = rank_biserial(&even, &groups, &all(4)).unwrap();
        assert_eq!(r, -0.5);
    }

    #[test]
    fn profile_single_variable_is_one() {
        let table = DataTable::from_columns(
            vec![crate::schema::ColumnSchema::numeric("x")],
            vec![ColumnValues::Numeric(vec![
                Some(0.0),
                Some(1.0),
                Some(3.0),
                Some(7.0),
            ])],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &OrdinalOptions::default()).unwrap();
        let profile = correlation_profile(
            &pvd,
            &WeightVector::uniform(1),
            CorrelationMode::Pearson,
            &BrogdenOptions::default(),
        )
        .unwrap();
        assert!(profile.defined[0]);
        assert!((profile.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_matches_per_column_pearson_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 9;
        let cols: Vec<Option<f64>> = (0..n).map(|_| Some(rng.random_range(0.0..10.0))).collect();
        let cols2: Vec<Option<f64>> =
            (0..n).map(|_| Some(rng.random_range(0.0..10.0))).collect();
        let table = DataTable::from_columns(
            vec![
                crate::schema::ColumnSchema::numeric("a"),
                crate::schema::ColumnSchema::numeric("b"),
            ],
            vec![ColumnValues::Numeric(cols), ColumnValues::Numeric(cols2)],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &OrdinalOptions::default()).unwrap();
        let w = WeightVector::uniform(2);
        let profile = correlation_profile(
            &pvd,
            &w,
            CorrelationMode::Pearson,
            &BrogdenOptions::default(),
        )
        .unwrap();
        let dwg = gower_weighted_values(&pvd, &w).unwrap();
        for t in 0..2 {
            let oracle = pearson(&dwg, pvd.d_column(t), &all(pvd.m())).unwrap();
            assert!((profile.values[t] - oracle).abs() <= 1e-12);
        }
    }

    #[test]
    fn biserial_mode_matches_pearson_mode_on_numeric_only_data() {
        let table = DataTable::from_columns(
            vec![
                crate::schema::ColumnSchema::numeric("a"),
                crate::schema::ColumnSchema::numeric("b"),
            ],
            vec![
                ColumnValues::Numeric(vec![Some(0.1), Some(2.0), Some(3.5), Some(9.0)]),
                ColumnValues::Numeric(vec![Some(4.0), Some(1.0), Some(2.5), Some(6.0)]),
            ],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &OrdinalOptions::default()).unwrap();
        let w = WeightVector::new(vec![0.4, 0.6]).unwrap();
        let brogden = BrogdenOptions::default();
        let pg = correlation_profile(&pvd, &w, CorrelationMode::Pearson, &brogden).unwrap();
        let pbg =
            correlation_profile(&pvd, &w, CorrelationMode::PearsonBrogden, &brogden).unwrap();
        assert_eq!(pg.values, pbg.values);
    }

    #[test]
    fn mode_labels_round_trip() {
        for mode in GowerMode::ALL {
            let parsed: GowerMode = mode.label().parse().unwrap();
            assert_eq!(parsed, mode);
        }
        assert!("wXG".parse::<GowerMode>().is_err());
    }
}
