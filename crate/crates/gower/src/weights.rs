//! Variable weights and the correlation-balancing objective.
//!
//! The objective is the sample standard deviation of the per-variable
//! correlations with the weighted dissimilarity; minimizing it balances
//! how much each variable drives the overall measure. Complete Pearson
//! problems admit an exact linear-system solution; everything else goes
//! through the genetic search in [`crate::ga`].

use crate::correlation::{
    correlation_profile, profile_against, BrogdenHRule, BrogdenOptions, CorrelationMode,
    CorrelationProfile,
};
use crate::dissim::{OrdinalOptions, PerVariableDissimilarity};
use crate::error::{Error, Result};
use crate::ga::{search_ga, GaConfig};
use crate::matrix::weighted_into;
use crate::ranks::average_ranks_into;
use crate::seed::{derive_rng, SeedDomain};
use crate::table::DataTable;

/// `p` non-negative weights normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
}

impl WeightVector {
    /// Normalizes `raw` to sum 1. Entries must be non-negative and finite
    /// with a positive sum.
    pub fn new(raw: Vec<f64>) -> Result<WeightVector> {
        if raw.is_empty() || raw.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidWeights);
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidWeights);
        }
        Ok(WeightVector {
            w: raw.into_iter().map(|x| x / sum).collect(),
        })
    }

    pub fn uniform(p: usize) -> WeightVector {
        assert!(p > 0, "a weight vector needs at least one entry");
        WeightVector {
            w: vec![1.0 / p as f64; p],
        }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn is_uniform(&self) -> bool {
        self.w.iter().all(|&x| x == self.w[0])
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.w[i]
    }
}

/// Knobs of the weight-search objective.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Balance absolute correlations instead of signed ones.
    pub absolute_correlations: bool,
    pub brogden: BrogdenOptions,
    /// Added to the objective per undefined profile entry during search,
    /// discouraging weights that collapse a variable's variance.
    pub undefined_penalty: f64,
    /// Fit on a seeded uniform subsample of this many pairs when the pair
    /// set is larger.
    pub max_pairs: usize,
    /// Allow the exact linear-system path when eligible.
    pub allow_analytic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            absolute_correlations: false,
            brogden: BrogdenOptions::default(),
            undefined_penalty: 0.5,
            max_pairs: 200_000,
            allow_analytic: true,
        }
    }
}

/// Objective outcome: the correlation spread plus a counter of profile
/// entries that had to be excluded as undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    /// Sample standard deviation over the defined profile entries.
    pub spread: f64,
    /// Number of undefined profile entries excluded from the spread.
    pub undefined: usize,
}

impl ObjectiveValue {
    /// Search fitness: the spread plus a fixed penalty per undefined entry.
    pub fn penalized(&self, penalty: f64) -> f64 {
        self.spread + penalty * self.undefined as f64
    }
}

fn spread_of(values: &[f64], absolute: bool) -> Option<f64> {
    let q = values.len();
    if q < 2 {
        return None;
    }
    let qf = q as f64;
    let adj = |v: f64| if absolute { v.abs() } else { v };
    let mean = values.iter().map(|&v| adj(v)).sum::<f64>() / qf;
    let ss: f64 = values.iter().map(|&v| (adj(v) - mean).powi(2)).sum();
    Some((ss / (qf - 1.0)).sqrt())
}

/// Standard deviation of the correlation profile at `weights`. Undefined
/// profile entries are excluded and counted; fewer than two defined
/// entries make the objective undefined.
pub fn objective(
    pvd: &PerVariableDissimilarity,
    weights: &WeightVector,
    mode: CorrelationMode,
    opts: &SearchOptions,
) -> Result<ObjectiveValue> {
    let profile = correlation_profile(pvd, weights, mode, &opts.brogden)?;
    let defined: Vec<f64> = profile.defined_values().collect();
    match spread_of(&defined, opts.absolute_correlations) {
        Some(spread) => Ok(ObjectiveValue {
            spread,
            undefined: profile.values.len() - defined.len(),
        }),
        None => Err(Error::UndefinedObjective {
            defined: defined.len(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Search evaluator
// ---------------------------------------------------------------------------

/// Precomputed column statistics for repeated objective evaluations over a
/// fixed pair set. Complete pair sets (every `delta` true) get a fused fast
/// path; anything else falls back to the reference estimators.
pub(crate) struct FitContext<'a> {
    pvd: &'a PerVariableDissimilarity,
    mode: CorrelationMode,
    opts: SearchOptions,
    fast: Option<FastColumns>,
}

struct FastColumns {
    /// Per-column mean and centered sum of squares of the raw `d` values.
    mean_d: Vec<f64>,
    sxx_d: Vec<f64>,
    /// Average ranks of each column (rank modes only), column-major.
    rank_d: Vec<f64>,
    mean_rank: Vec<f64>,
    sxx_rank: Vec<f64>,
    /// Count of `d == 1` per column (meaningful for dichotomous columns).
    ones: Vec<usize>,
}

/// Reused allocations for one evaluation thread.
#[derive(Default)]
pub(crate) struct FitScratch {
    dwg: Vec<f64>,
    ranks: Vec<f64>,
    order: Vec<usize>,
    sorted: Vec<f64>,
    prefix: Vec<f64>,
    profile: Vec<Option<f64>>,
}

impl<'a> FitContext<'a> {
    pub fn new(
        pvd: &'a PerVariableDissimilarity,
        mode: CorrelationMode,
        opts: &SearchOptions,
    ) -> FitContext<'a> {
        let fast = pvd.all_complete().then(|| {
            let m = pvd.m();
            let p = pvd.p();
            let mut mean_d = vec![0.0; p];
            let mut sxx_d = vec![0.0; p];
            let mut ones = vec![0usize; p];
            let mut rank_d = Vec::new();
            let mut mean_rank = vec![0.0; p];
            let mut sxx_rank = vec![0.0; p];
            let mut order = Vec::new();
            let mut ranks = Vec::new();
            for t in 0..p {
                let col = pvd.d_column(t);
                let mean = col.iter().sum::<f64>() / m as f64;
                mean_d[t] = mean;
                sxx_d[t] = col.iter().map(|&v| (v - mean) * (v - mean)).sum();
                ones[t] = col.iter().filter(|&&v| v == 1.0).count();
                if mode.rank_based() {
                    average_ranks_into(col, &mut order, &mut ranks);
                    let mean = ranks.iter().sum::<f64>() / m as f64;
                    mean_rank[t] = mean;
                    sxx_rank[t] = ranks.iter().map(|&v| (v - mean) * (v - mean)).sum();
                    rank_d.extend_from_slice(&ranks);
                }
            }
            FastColumns {
                mean_d,
                sxx_d,
                rank_d,
                mean_rank,
                sxx_rank,
                ones,
            }
        });
        FitContext {
            pvd,
            mode,
            opts: *opts,
            fast,
        }
    }

    pub fn pvd(&self) -> &PerVariableDissimilarity {
        self.pvd
    }

    /// Penalized objective of a normalized weight slice; `f64::INFINITY`
    /// when undefined.
    pub fn penalized(&self, weights: &[f64], scratch: &mut FitScratch) -> f64 {
        match self.objective_value(weights, scratch) {
            Some(v) => v.penalized(self.opts.undefined_penalty),
            None => f64::INFINITY,
        }
    }

    pub fn objective_value(
        &self,
        weights: &[f64],
        scratch: &mut FitScratch,
    ) -> Option<ObjectiveValue> {
        let m = self.pvd.m();
        scratch.dwg.clear();
        scratch.dwg.resize(m, 0.0);
        weighted_into(self.pvd, weights, &mut scratch.dwg);

        scratch.profile.clear();
        match &self.fast {
            Some(fast) if !scratch.dwg.iter().any(|v| v.is_nan()) => {
                self.profile_fast(fast, scratch);
            }
            _ => {
                let profile = profile_against(self.pvd, &scratch.dwg, self.mode, &self.opts.brogden);
                scratch.profile.extend(
                    profile
                        .values
                        .iter()
                        .zip(&profile.defined)
                        .map(|(&v, &def)| def.then_some(v)),
                );
            }
        }

        let defined: Vec<f64> = scratch.profile.iter().flatten().copied().collect();
        spread_of(&defined, self.opts.absolute_correlations).map(|spread| ObjectiveValue {
            spread,
            undefined: scratch.profile.len() - defined.len(),
        })
    }

    fn profile_fast(&self, fast: &FastColumns, scratch: &mut FitScratch) {
        let m = self.pvd.m();
        let mf = m as f64;
        let dwg: &[f64] = &scratch.dwg;

        // Continuous side: either the raw dwg or its average ranks.
        let (x, x_mean, x_sxx);
        if self.mode.rank_based() {
            average_ranks_into(dwg, &mut scratch.order, &mut scratch.ranks);
            let mean = scratch.ranks.iter().sum::<f64>() / mf;
            let sxx = scratch
                .ranks
                .iter()
                .map(|&v| (v - mean) * (v - mean))
                .sum::<f64>();
            x = scratch.ranks.as_slice();
            x_mean = mean;
            x_sxx = sxx;
        } else {
            let mean = dwg.iter().sum::<f64>() / mf;
            let sxx = dwg.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>();
            x = dwg;
            x_mean = mean;
            x_sxx = sxx;
        }

        // Descending prefix sums of dwg, built lazily for Brogden columns.
        let mut prefix_ready = false;

        for t in 0..self.pvd.p() {
            let dichotomous = self.pvd.is_dichotomous(t);
            let col = self.pvd.d_column(t);
            let r = match self.mode {
                CorrelationMode::Pearson => {
                    pearson_fused(x, x_mean, x_sxx, col, fast.mean_d[t], fast.sxx_d[t])
                }
                CorrelationMode::PearsonBrogden => {
                    if dichotomous {
                        if !prefix_ready {
                            build_desc_prefix(dwg, &mut scratch.sorted, &mut scratch.prefix);
                            prefix_ready = true;
                        }
                        brogden_fused(
                            dwg,
                            col,
                            fast.ones[t],
                            &scratch.prefix,
                            &self.opts.brogden,
                        )
                    } else {
                        pearson_fused(x, x_mean, x_sxx, col, fast.mean_d[t], fast.sxx_d[t])
                    }
                }
                CorrelationMode::Spearman => {
                    let rank_col = &fast.rank_d[t * m..(t + 1) * m];
                    pearson_fused(x, x_mean, x_sxx, rank_col, fast.mean_rank[t], fast.sxx_rank[t])
                }
                CorrelationMode::SpearmanRankBiserial => {
                    if dichotomous {
                        rank_biserial_fused(x, col, fast.ones[t])
                    } else {
                        let rank_col = &fast.rank_d[t * m..(t + 1) * m];
                        pearson_fused(
                            x,
                            x_mean,
                            x_sxx,
                            rank_col,
                            fast.mean_rank[t],
                            fast.sxx_rank[t],
                        )
                    }
                }
            };
            scratch.profile.push(r);
        }
    }
}

fn pearson_fused(
    x: &[f64],
    x_mean: f64,
    x_sxx: f64,
    y: &[f64],
    y_mean: f64,
    y_sxx: f64,
) -> Option<f64> {
    if x_sxx == 0.0 || y_sxx == 0.0 || x.len() < 2 {
        return None;
    }
    let mut sxy = 0.0;
    for k in 0..x.len() {
        sxy += (x[k] - x_mean) * (y[k] - y_mean);
    }
    Some((sxy / (x_sxx * y_sxx).sqrt()).clamp(-1.0, 1.0))
}

fn build_desc_prefix(dwg: &[f64], sorted: &mut Vec<f64>, prefix: &mut Vec<f64>) {
    sorted.clear();
    sorted.extend_from_slice(dwg);
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    prefix.clear();
    prefix.reserve(sorted.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in sorted.iter() {
        acc += v;
        prefix.push(acc);
    }
}

fn brogden_fused(
    dwg: &[f64],
    col: &[f64],
    n1: usize,
    desc_prefix: &[f64],
    opts: &BrogdenOptions,
) -> Option<f64> {
    let m = dwg.len();
    if m < 2 || n1 == 0 || n1 == m {
        return None;
    }
    // col is exactly 0/1, so the dot product is the group-1 sum.
    let mut sum1 = 0.0;
    for k in 0..m {
        sum1 += col[k] * dwg[k];
    }
    let total = desc_prefix[m];
    let mean1 = sum1 / n1 as f64;
    let mean0 = (total - sum1) / (m - n1) as f64;
    let h_target = match opts.h_rule {
        BrogdenHRule::GroupMeans => m as f64 * mean0.max(mean1),
        BrogdenHRule::Proportion => n1 as f64,
    };
    let h = (h_target.floor() as i64).clamp(1, m as i64 - 1) as usize;
    let d_h = desc_prefix[h] / h as f64 - (total - desc_prefix[h]) / (m - h) as f64;
    if d_h == 0.0 {
        return None;
    }
    let r = (mean1 - mean0) / d_h;
    Some(if opts.clip { r.clamp(-1.0, 1.0) } else { r })
}

fn rank_biserial_fused(ranks: &[f64], col: &[f64], n1: usize) -> Option<f64> {
    let m = ranks.len();
    if m < 2 || n1 == 0 || n1 == m {
        return None;
    }
    let mut sum1 = 0.0;
    let mut total = 0.0;
    for k in 0..m {
        sum1 += col[k] * ranks[k];
        total += ranks[k];
    }
    let mean1 = sum1 / n1 as f64;
    let mean0 = (total - sum1) / (m - n1) as f64;
    Some((2.0 * (mean1 - mean0) / m as f64).clamp(-1.0, 1.0))
}

// ---------------------------------------------------------------------------
// Analytic path
// ---------------------------------------------------------------------------

/// Raw solution of the equal-correlation linear system. Weights may be
/// negative, in which case the solution is infeasible and the genetic
/// search must be used.
#[derive(Debug, Clone)]
pub struct AnalyticSolution {
    pub weights: Vec<f64>,
    pub feasible: bool,
}

impl AnalyticSolution {
    /// Normalized weight vector when feasible.
    pub fn weight_vector(&self) -> Option<WeightVector> {
        self.feasible
            .then(|| WeightVector::new(self.weights.iter().map(|&w| w.max(0.0)).collect()).ok())
            .flatten()
    }
}

/// Solves for weights that equalize the Pearson correlation of the
/// weighted dissimilarity with every variable.
///
/// With complete contributions the weighted dissimilarity is the linear
/// combination `sum_s w_s d_s`, so its covariance with column `t` is
/// `sum_s w_s cov(d_s, d_t)`. Equal correlations mean
/// `sum_s w_s cov(d_s, d_t) / sigma_t = kappa` for every `t`; together
/// with `sum_t w_t = 1` this is a linear system in `(w, kappa)`.
pub fn solve_analytic(pvd: &PerVariableDissimilarity) -> Result<AnalyticSolution> {
    let p = pvd.p();
    let m = pvd.m();
    if p < 2 {
        return Err(Error::AnalyticIneligible(
            "at least two variables".to_string(),
        ));
    }
    if !pvd.all_complete() {
        return Err(Error::AnalyticIneligible(
            "complete contributions (no missing cells, no asymmetric double absence)".to_string(),
        ));
    }
    if m < 2 {
        return Err(Error::AnalyticIneligible("at least two pairs".to_string()));
    }

    let means: Vec<f64> = (0..p)
        .map(|t| pvd.d_column(t).iter().sum::<f64>() / m as f64)
        .collect();
    let mut cov = vec![0.0; p * p];
    for s in 0..p {
        let ds = pvd.d_column(s);
        for t in s..p {
            let dt = pvd.d_column(t);
            let mut acc = 0.0;
            for k in 0..m {
                acc += (ds[k] - means[s]) * (dt[k] - means[t]);
            }
            let c = acc / (m as f64 - 1.0);
            cov[s * p + t] = c;
            cov[t * p + s] = c;
        }
    }
    let sigma: Vec<f64> = (0..p).map(|t| cov[t * p + t].sqrt()).collect();
    if sigma.iter().any(|&s| s == 0.0) {
        return Err(Error::AnalyticIneligible(
            "positive variance in every variable".to_string(),
        ));
    }

    // Unknowns: (w_0, ..., w_{p-1}, kappa).
    let dim = p + 1;
    let mut a = vec![0.0; dim * dim];
    let mut rhs = vec![0.0; dim];
    for t in 0..p {
        for s in 0..p {
            a[t * dim + s] = cov[s * p + t] / sigma[t];
        }
        a[t * dim + p] = -1.0;
    }
    for s in 0..p {
        a[p * dim + s] = 1.0;
    }
    rhs[p] = 1.0;

    let solution = solve_linear(&mut a, &mut rhs, dim)?;
    let weights = solution[..p].to_vec();
    let feasible = weights.iter().all(|&w| w >= -1e-12);
    Ok(AnalyticSolution { weights, feasible })
}

/// Gaussian elimination with partial pivoting; `a` is `dim x dim`
/// row-major and both buffers are consumed.
fn solve_linear(a: &mut [f64], rhs: &mut [f64], dim: usize) -> Result<Vec<f64>> {
    for col in 0..dim {
        let pivot_row = (col..dim)
            .max_by(|&r1, &r2| a[r1 * dim + col].abs().total_cmp(&a[r2 * dim + col].abs()))
            .unwrap();
        if a[pivot_row * dim + col].abs() < 1e-12 {
            return Err(Error::SingularSystem);
        }
        if pivot_row != col {
            for k in 0..dim {
                a.swap(col * dim + k, pivot_row * dim + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = a[col * dim + col];
        for row in col + 1..dim {
            let factor = a[row * dim + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..dim {
                a[row * dim + k] -= factor * a[col * dim + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; dim];
    for row in (0..dim).rev() {
        let mut acc = rhs[row];
        for k in row + 1..dim {
            acc -= a[row * dim + k] * x[k];
        }
        x[row] = acc / a[row * dim + row];
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Front door
// ---------------------------------------------------------------------------

/// Which route produced the fitted weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitPath {
    /// Single variable; the weight is trivially 1.
    SingleVariable,
    /// Exact linear-system solution.
    Analytic,
    /// Genetic search.
    GeneticSearch,
}

impl FitPath {
    pub fn label(self) -> &'static str {
        match self {
            FitPath::SingleVariable => "single-variable",
            FitPath::Analytic => "analytic",
            FitPath::GeneticSearch => "genetic",
        }
    }
}

/// Options for [`fit_weights`].
#[derive(Debug, Clone, Copy, Default)]
pub struct FitOptions {
    pub ordinal: OrdinalOptions,
    pub search: SearchOptions,
}

/// Fitted weights plus everything a report needs.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub weights: WeightVector,
    pub mode: CorrelationMode,
    pub path: FitPath,
    /// Penalized objective at uniform weights on the fitted pair set.
    pub objective_uniform: Option<f64>,
    /// Penalized objective at the fitted weights on the fitted pair set.
    pub objective_fitted: Option<f64>,
    /// Correlation profile at the fitted weights on the fitted pair set.
    pub profile: CorrelationProfile,
    /// Best penalized objective per generation (empty off the GA path).
    pub trace: Vec<f64>,
    /// Number of pairs fitted on, when subsampled.
    pub subsampled_pairs: Option<usize>,
}

/// Fits weights on a table: builds the per-variable dissimilarities, takes
/// the analytic path when eligible, otherwise runs the genetic search.
pub fn fit_weights(
    table: &DataTable,
    mode: CorrelationMode,
    ga: &GaConfig,
    opts: &FitOptions,
) -> Result<FitReport> {
    let pvd = crate::dissim::per_variable_matrix(table, &opts.ordinal)?;
    fit_weights_on(&pvd, mode, ga, &opts.search)
}

/// [`fit_weights`] on an already-built pair set.
pub fn fit_weights_on(
    pvd: &PerVariableDissimilarity,
    mode: CorrelationMode,
    ga: &GaConfig,
    opts: &SearchOptions,
) -> Result<FitReport> {
    let p = pvd.p();
    if p == 1 {
        let weights = WeightVector::uniform(1);
        let profile = correlation_profile(pvd, &weights, mode, &opts.brogden)?;
        return Ok(FitReport {
            weights,
            mode,
            path: FitPath::SingleVariable,
            objective_uniform: None,
            objective_fitted: None,
            profile,
            trace: Vec::new(),
            subsampled_pairs: None,
        });
    }

    // Subsample the pair set when it is too large to fit on directly.
    let sub;
    let (fit_pvd, subsampled_pairs) = if pvd.m() > opts.max_pairs {
        let mut rng = derive_rng(ga.seed, SeedDomain::Subsample, 0, 0);
        let mut offsets = rand::seq::index::sample(&mut rng, pvd.m(), opts.max_pairs).into_vec();
        offsets.sort_unstable();
        sub = pvd.subsample_pairs(&offsets);
        (&sub, Some(opts.max_pairs))
    } else {
        (pvd, None)
    };

    let ctx = FitContext::new(fit_pvd, mode, opts);
    let mut scratch = FitScratch::default();
    let uniform = WeightVector::uniform(p);
    let objective_uniform = ctx
        .objective_value(uniform.as_slice(), &mut scratch)
        .map(|v| v.penalized(opts.undefined_penalty));

    if mode == CorrelationMode::Pearson && opts.allow_analytic && fit_pvd.all_complete() {
        match solve_analytic(fit_pvd) {
            Ok(solution) => {
                if let Some(weights) = solution.weight_vector() {
                    let objective_fitted = ctx
                        .objective_value(weights.as_slice(), &mut scratch)
                        .map(|v| v.penalized(opts.undefined_penalty));
                    let profile = correlation_profile(fit_pvd, &weights, mode, &opts.brogden)?;
                    return Ok(FitReport {
                        weights,
                        mode,
                        path: FitPath::Analytic,
                        objective_uniform,
                        objective_fitted,
                        profile,
                        trace: Vec::new(),
                        subsampled_pairs,
                    });
                }
            }
            Err(Error::SingularSystem) | Err(Error::AnalyticIneligible(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let outcome = search_ga(fit_pvd, mode, ga, opts)?;
    let profile = correlation_profile(fit_pvd, &outcome.weights, mode, &opts.brogden)?;
    Ok(FitReport {
        weights: outcome.weights,
        mode,
        path: FitPath::GeneticSearch,
        objective_uniform,
        objective_fitted: outcome.objective,
        profile,
        trace: outcome.trace,
        subsampled_pairs,
    })
}

// ---------------------------------------------------------------------------
// Weight report serialization
// ---------------------------------------------------------------------------

/// `variable,weight,correlation` CSV; undefined correlations print as `NA`.
pub fn weights_to_csv(
    names: &[String],
    weights: &WeightVector,
    profile: &CorrelationProfile,
) -> String {
    let mut out = String::from("variable,weight,correlation\n");
    for (t, name) in names.iter().enumerate() {
        let corr = if profile.defined[t] {
            profile.values[t].to_string()
        } else {
            "NA".to_string()
        };
        out.push_str(&format!("{name},{},{corr}\n", weights[t]));
    }
    out
}

/// Reads weights back from [`weights_to_csv`] output (extra columns are
/// ignored), matching entries to `names` by variable.
pub fn weights_from_csv(text: &str, names: &[String]) -> Result<WeightVector> {
    let mut by_name = std::collections::HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let name = fields
            .next()
            .ok_or_else(|| Error::InvalidConfig(format!("weights line {i}: empty")))?;
        let weight: f64 = fields
            .next()
            .and_then(|f| f.trim().parse().ok())
            .ok_or_else(|| {
                Error::InvalidConfig(format!("weights line {i}: missing or bad weight"))
            })?;
        by_name.insert(name.trim().to_string(), weight);
    }
    let raw: Vec<f64> = names
        .iter()
        .map(|n| {
            by_name
                .get(n)
                .copied()
                .ok_or_else(|| Error::InvalidConfig(format!("no weight for variable {n:?}")))
        })
        .collect::<Result<_>>()?;
    WeightVector::new(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissim::per_variable_matrix;
    use crate::schema::ColumnSchema;
    use crate::table::{ColumnValues, DataTable};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weight_vector_normalizes_and_validates() {
        let w = WeightVector::new(vec![2.0, 6.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
        assert!(WeightVector::new(vec![0.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![1.0, -0.1]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::uniform(3).is_uniform());
    }

    fn random_numeric_table(seed: u64, n: usize, p: usize) -> DataTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schema: Vec<ColumnSchema> = (0..p)
            .map(|t| ColumnSchema::numeric(format!("x{t}")))
            .collect();
        let cols = (0..p)
            .map(|_| {
                ColumnValues::Numeric(
                    (0..n).map(|_| Some(rng.random_range(0.0..10.0))).collect(),
                )
            })
            .collect();
        DataTable::from_columns(schema, cols).unwrap()
    }

    #[test]
    fn objective_zero_for_duplicated_variable() {
        // Two identical columns correlate identically with any weighting.
        let table = random_numeric_table(3, 8, 1);
        let col: Vec<Option<f64>> = (0..8).map(|r| table.numeric_value(r, 0)).collect();
        let dup = DataTable::from_columns(
            vec![ColumnSchema::numeric("a"), ColumnSchema::numeric("b")],
            vec![
                ColumnValues::Numeric(col.clone()),
                ColumnValues::Numeric(col),
            ],
        )
        .unwrap();
        let pvd = per_variable_matrix(&dup, &Default::default()).unwrap();
        let value = objective(
            &pvd,
            &WeightVector::uniform(2),
            CorrelationMode::Pearson,
            &SearchOptions::default(),
        )
        .unwrap();
        assert!(value.spread <= 1e-12);
        assert_eq!(value.undefined, 0);
    }

    #[test]
    fn objective_undefined_for_single_variable() {
        let table = random_numeric_table(4, 6, 1);
        let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
        assert!(matches!(
            objective(
                &pvd,
                &WeightVector::uniform(1),
                CorrelationMode::Pearson,
                &SearchOptions::default()
            ),
            Err(Error::UndefinedObjective { defined: 1 })
        ));
    }

    #[test]
    fn objective_matches_profile_std_dev_oracle() {
        let table = random_numeric_table(9, 10, 3);
        let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
        let opts = SearchOptions::default();
        for mode in CorrelationMode::ALL {
            let w = WeightVector::new(vec![0.5, 0.2, 0.3]).unwrap();
            let got = objective(&pvd, &w, mode, &opts).unwrap();
            let profile = correlation_profile(&pvd, &w, mode, &opts.brogden).unwrap();
            let rs: Vec<f64> = profile.defined_values().collect();
            let mean = rs.iter().sum::<f64>() / rs.len() as f64;
            let oracle = (rs.iter().map(|r| (r - mean).powi(2)).sum::<f64>()
                / (rs.len() as f64 - 1.0))
                .sqrt();
            assert!((got.spread - oracle).abs() <= 1e-12);
        }
    }

    #[test]
    fn fit_context_agrees_with_reference_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let opts = SearchOptions::default();
        for seed in 0..6u64 {
            // Mixed table with a categorical column; every other seed adds
            // missing cells to exercise the slow path.
            let n = 10;
            let with_missing = seed % 2 == 1;
            let maybe = |rng: &mut ChaCha8Rng, v: f64| {
                if with_missing && rng.random_range(0.0..1.0) < 0.15 {
                    None
                } else {
                    Some(v)
                }
            };
            let xs: Vec<Option<f64>> = (0..n)
                .map(|_| {
                    let v = rng.random_range(0.0..5.0);
                    maybe(&mut rng, v)
                })
                .collect();
            let ys: Vec<Option<f64>> = (0..n)
                .map(|_| {
                    let v = rng.random_range(0.0..5.0);
                    maybe(&mut rng, v)
                })
                .collect();
            let cats: Vec<Option<u32>> = (0..n)
                .map(|_| Some(rng.random_range(0..3u32)))
                .collect();
            let table = DataTable::from_columns(
                vec![
                    ColumnSchema::numeric("x"),
                    ColumnSchema::numeric("y"),
                    ColumnSchema::nominal("c", &["a", "b", "c"]).unwrap(),
                ],
                vec![
                    ColumnValues::Numeric(xs),
                    ColumnValues::Numeric(ys),
                    ColumnValues::Categorical(cats),
                ],
            )
            .unwrap();
            let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
            for mode in CorrelationMode::ALL {
                let ctx = FitContext::new(&pvd, mode, &opts);
                let mut scratch = FitScratch::default();
                for _ in 0..4 {
                    let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..1.0)).collect();
                    let w = WeightVector::new(raw).unwrap();
                    let fast = ctx.objective_value(w.as_slice(), &mut scratch);
                    let reference = objective(&pvd, &w, mode, &opts).ok();
                    match (fast, reference) {
                        (Some(a), Some(b)) => {
                            assert!(
                                (a.spread - b.spread).abs() <= 1e-12,
                                "mode {mode:?}: fast {} vs reference {}",
                                a.spread,
                                b.spread
                            );
                            assert_eq!(a.undefined, b.undefined);
                        }
                        (None, None) => {}
                        (a, b) => panic!("definedness mismatch: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn analytic_symmetric_two_column_case() {
        // Mirror-image columns have equal variances and a symmetric system.
        let table = DataTable::from_columns(
            vec![ColumnSchema::numeric("a"), ColumnSchema::numeric("b")],
            vec![
                ColumnValues::Numeric(vec![
                    Some(0.0),
                    Some(0.2),
                    Some(0.8),
                    Some(0.4),
                    Some(1.0),
                ]),
                ColumnValues::Numeric(vec![
                    Some(1.0),
                    Some(0.8),
                    Some(0.2),
                    Some(0.6),
                    Some(0.0),
                ]),
            ],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
        let solution = solve_analytic(&pvd).unwrap();
        assert!(solution.feasible);
        let w = solution.weight_vector().unwrap();
        assert!((w[0] - 0.5).abs() <= 1e-9, "weights {:?}", w.as_slice());
    }

    #[test]
    fn analytic_solution_equalizes_the_profile() {
        for seed in [1u64, 2, 3] {
            let table = random_numeric_table(seed, 12, 3);
            let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
            let solution = solve_analytic(&pvd).unwrap();
            if let Some(w) = solution.weight_vector() {
                let profile = correlation_profile(
                    &pvd,
                    &w,
                    CorrelationMode::Pearson,
                    &BrogdenOptions::default(),
                )
                .unwrap();
                let spread = profile.spread().unwrap();
                assert!(spread <= 1e-8, "seed {seed}: spread {spread}");
            }
        }
    }

    #[test]
    fn analytic_detects_infeasible_redundant_column() {
        // The third column is nearly the average of the first two; pushing
        // all three correlations together forces a negative weight on it.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let n = 14;
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let c: Vec<f64> = (0..n)
            .map(|i| 0.5 * (a[i] + b[i]) + rng.random_range(-0.05..0.05))
            .collect();
        let table = DataTable::from_columns(
            vec![
                ColumnSchema::numeric("a"),
                ColumnSchema::numeric("b"),
                ColumnSchema::numeric("c"),
            ],
            vec![
                ColumnValues::Numeric(a.into_iter().map(Some).collect()),
                ColumnValues::Numeric(b.into_iter().map(Some).collect()),
                ColumnValues::Numeric(c.into_iter().map(Some).collect()),
            ],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
        let solution = solve_analytic(&pvd).unwrap();
        assert!(
            solution.weights.iter().any(|&w| w < 0.0),
            "expected a negative weight, got {:?}",
            solution.weights
        );
        assert!(!solution.feasible);
    }

    #[test]
    fn analytic_requires_complete_contributions() {
        let table = DataTable::from_columns(
            vec![ColumnSchema::numeric("a"), ColumnSchema::numeric("b")],
            vec![
                ColumnValues::Numeric(vec![Some(1.0), None, Some(3.0), Some(0.5)]),
                ColumnValues::Numeric(vec![Some(2.0), Some(1.0), Some(0.0), Some(4.0)]),
            ],
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &Default::default()).unwrap();
        assert!(matches!(
            solve_analytic(&pvd),
            Err(Error::AnalyticIneligible(_))
        ));
    }

    #[test]
    fn weights_csv_round_trip() {
        let names = vec!["a".to_string(), "b".to_string()];
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let profile = CorrelationProfile {
            values: vec![0.5, f64::NAN],
            defined: vec![true, false],
        };
        let text = weights_to_csv(&names, &w, &profile);
        assert!(text.contains("NA"));
        let back = weights_from_csv(&text, &names).unwrap();
        assert_eq!(back.as_slice(), w.as_slice());
        assert!(weights_from_csv(&text, &["a".into(), "z".into()]).is_err());
    }
}
