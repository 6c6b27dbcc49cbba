//! Aggregation of per-variable dissimilarities into pairwise matrices.
//!
//! The weighted Gower dissimilarity of a pair is
//! `sum_t(delta_t * d_t * w_t) / sum_t(delta_t * w_t)`. A pair whose
//! denominator is zero (every contributing variable missing or weightless)
//! is undefined and carries a NaN sentinel; nearest-neighbor consumers
//! treat it as farther than any defined value.

use crate::dissim::{OrdinalOptions, PerVariableDissimilarity, PreparedTable};
use crate::error::{Error, Result};
use crate::pairs::{pair_count, pair_offset};
use crate::table::DataTable;
use crate::weights::WeightVector;

/// Condensed symmetric dissimilarity matrix over `n` units.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    pub(crate) fn new(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), pair_count(n));
        DissimilarityMatrix { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Condensed values; NaN marks undefined pairs.
    pub fn condensed(&self) -> &[f64] {
        &self.values
    }

    /// Dissimilarity between units `i` and `j` (0 on the diagonal).
    pub fn value(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            self.values[pair_offset(self.n, a, b)]
        }
    }

    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        !self.value(i, j).is_nan()
    }

    /// Square CSV with unit identifiers as header and row labels;
    /// undefined pairs are written as `NA`.
    pub fn to_square_csv(&self, ids: &[String]) -> String {
        assert_eq!(ids.len(), self.n);
        let mut out = String::from("unit");
        for id in ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for i in 0..self.n {
            out.push_str(&ids[i]);
            for j in 0..self.n {
                out.push(',');
                push_value(&mut out, self.value(i, j));
            }
            out.push('\n');
        }
        out
    }

    /// Compact binary dump: magic `GWDM`, a version byte, `n` and `m` as
    /// 64-bit little-endian integers, then the condensed values as 64-bit
    /// little-endian floats.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 1 + 16 + 8 * self.values.len());
        out.extend_from_slice(b"GWDM");
        out.push(1);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.values.len() as u64).to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<DissimilarityMatrix> {
        let bad = |msg: &str| Error::BadMatrixFile(msg.to_string());
        if bytes.len() < 21 || &bytes[..4] != b"GWDM" {
            return Err(bad("missing GWDM magic"));
        }
        if bytes[4] != 1 {
            return Err(bad("unsupported version"));
        }
        let n = u64::from_le_bytes(bytes[5..13].try_into().unwrap()) as usize;
        let m = u64::from_le_bytes(bytes[13..21].try_into().unwrap()) as usize;
        if m != pair_count(n) || bytes.len() != 21 + 8 * m {
            return Err(bad("inconsistent sizes"));
        }
        let values = bytes[21..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(DissimilarityMatrix { n, values })
    }
}

/// Rectangular dissimilarities: rows are query units, columns reference
/// units.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangularDissimilarity {
    n_query: usize,
    n_reference: usize,
    values: Vec<f64>,
}

impl RectangularDissimilarity {
    pub fn n_query(&self) -> usize {
        self.n_query
    }

    pub fn n_reference(&self) -> usize {
        self.n_reference
    }

    pub fn value(&self, query: usize, reference: usize) -> f64 {
        self.values[query * self.n_reference + reference]
    }

    /// Dissimilarities of one query unit against every reference unit.
    pub fn row(&self, query: usize) -> &[f64] {
        &self.values[query * self.n_reference..(query + 1) * self.n_reference]
    }

    pub fn to_csv(&self, query_ids: &[String], reference_ids: &[String]) -> String {
        assert_eq!(query_ids.len(), self.n_query);
        assert_eq!(reference_ids.len(), self.n_reference);
        let mut out = String::from("unit");
        for id in reference_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for q in 0..self.n_query {
            out.push_str(&query_ids[q]);
            for r in 0..self.n_reference {
                out.push(',');
                push_value(&mut out, self.value(q, r));
            }
            out.push('\n');
        }
        out
    }
}

fn push_value(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("NA");
    } else {
        out.push_str(&v.to_string());
    }
}

/// Unweighted Gower dissimilarity: the mean of the defined per-variable
/// values of each pair.
pub fn gower_unweighted(pvd: &PerVariableDissimilarity) -> DissimilarityMatrix {
    let mut values = vec![0.0; pvd.m()];
    unweighted_into(pvd, &mut values);
    DissimilarityMatrix::new(pvd.n(), values)
}

/// Weighted Gower dissimilarity. Equal weights reproduce the unweighted
/// matrix exactly.
pub fn gower_weighted(
    pvd: &PerVariableDissimilarity,
    weights: &WeightVector,
) -> Result<DissimilarityMatrix> {
    if weights.len() != pvd.p() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: pvd.p(),
        });
    }
    let mut values = vec![0.0; pvd.m()];
    weighted_into(pvd, weights.as_slice(), &mut values);
    Ok(DissimilarityMatrix::new(pvd.n(), values))
}

/// Weighted Gower dissimilarities as a condensed vector, without the
/// matrix wrapper.
pub fn gower_weighted_values(
    pvd: &PerVariableDissimilarity,
    weights: &WeightVector,
) -> Result<Vec<f64>> {
    if weights.len() != pvd.p() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: pvd.p(),
        });
    }
    let mut values = vec![0.0; pvd.m()];
    weighted_into(pvd, weights.as_slice(), &mut values);
    Ok(values)
}

pub(crate) fn unweighted_into(pvd: &PerVariableDissimilarity, out: &mut [f64]) {
    let m = pvd.m();
    debug_assert_eq!(out.len(), m);
    let mut count = vec![0u32; m];
    out.fill(0.0);
    for t in 0..pvd.p() {
        let d = pvd.d_column(t);
        let delta = pvd.delta_column(t);
        for k in 0..m {
            if delta[k] {
                out[k] += d[k];
                count[k] += 1;
            }
        }
    }
    for k in 0..m {
        out[k] = if count[k] == 0 {
            f64::NAN
        } else {
            out[k] / count[k] as f64
        };
    }
}

/// Accumulates per pair in ascending variable order, skipping undefined
/// slots, so dropping a variable from a pair changes that pair only.
pub(crate) fn weighted_into(pvd: &PerVariableDissimilarity, weights: &[f64], out: &mut [f64]) {
    // Equal weights cancel from the ratio; use the unweighted path so the
    // reduction is exact.
    if weights.iter().all(|&w| w == weights[0]) {
        unweighted_into(pvd, out);
        return;
    }
    let m = pvd.m();
    debug_assert_eq!(out.len(), m);
    let mut den = vec![0.0; m];
    out.fill(0.0);
    for t in 0..pvd.p() {
        let w = weights[t];
        if w == 0.0 {
            continue;
        }
        let d = pvd.d_column(t);
        let delta = pvd.delta_column(t);
        for k in 0..m {
            if delta[k] {
                out[k] += d[k] * w;
                den[k] += w;
            }
        }
    }
    for k in 0..m {
        out[k] = if den[k] == 0.0 {
            f64::NAN
        } else {
            out[k] / den[k]
        };
    }
}

/// Weighted Gower dissimilarity between every query unit and every
/// reference unit. Ranges and ordinal transforms come from the reference
/// table; numeric contributions of out-of-range query values clamp at 1.
pub fn cross_dissimilarity(
    reference: &DataTable,
    query: &DataTable,
    weights: &WeightVector,
    opts: &OrdinalOptions,
) -> Result<RectangularDissimilarity> {
    if weights.len() != reference.p() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: reference.p(),
        });
    }
    let prepared_ref = PreparedTable::build(reference, opts)?;
    let prepared_query = prepared_ref.map_query(reference, query, opts)?;

    let w = weights.as_slice();
    let uniform = w.iter().all(|&x| x == w[0]);
    let n_query = query.n();
    let n_reference = reference.n();
    let mut values = Vec::with_capacity(n_query * n_reference);
    for q in 0..n_query {
        for r in 0..n_reference {
            let mut num = 0.0;
            let mut den = 0.0;
            for (t, &wt) in w.iter().enumerate() {
                if wt == 0.0 {
                    continue;
                }
                let (d, defined) = prepared_query.cols[t].cross(q, &prepared_ref.cols[t], r);
                if defined {
                    if uniform {
                        num += d;
                        den += 1.0;
                    } else {
                        num += d * wt;
                        den += wt;
                    }
                }
            }
            values.push(if den == 0.0 { f64::NAN } else { num / den });
        }
    }
    Ok(RectangularDissimilarity {
        n_query,
        n_reference,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissim::per_variable_matrix;
    use crate::schema::parse_schema;

    fn smoker_age_table() -> DataTable {
        let schema =
            parse_schema("smoke = binary-symmetric [levels: no, yes]\nage = numeric\n").unwrap();
        DataTable::from_csv(
            "smoke,age\nyes,15\nyes,78\nyes,100\nyes,24\nno,24\n",
            schema,
        )
        .unwrap()
    }

    #[test]
    fn unweighted_matches_worked_examples() {
        let pvd = per_variable_matrix(&smoker_age_table(), &OrdinalOptions::default()).unwrap();
        let matrix = gower_unweighted(&pvd);
        // Same smoking behavior, ages 15 vs 78.
        assert!((matrix.value(0, 1) - 0.3706).abs() < 5e-5);
        // Same age, different smoking behavior.
        assert_eq!(matrix.value(3, 4), 0.5);
        // Same smoking behavior, ages at the range extremes.
        assert_eq!(matrix.value(0, 2), 0.5);
        // Identical units.
        assert_eq!(matrix.value(1, 1), 0.0);
    }

    #[test]
    fn uniform_weights_reduce_to_unweighted_exactly() {
        let pvd = per_variable_matrix(&smoker_age_table(), &OrdinalOptions::default()).unwrap();
        let unweighted = gower_unweighted(&pvd);
        let weighted = gower_weighted(&pvd, &WeightVector::uniform(2)).unwrap();
        assert_eq!(unweighted.condensed(), weighted.condensed());
    }

    #[test]
    fn degenerate_weight_selects_single_variable() {
        let pvd = per_variable_matrix(&smoker_age_table(), &OrdinalOptions::default()).unwrap();
        let w = WeightVector::new(vec![1.0, 0.0]).unwrap();
        let matrix = gower_weighted(&pvd, &w).unwrap();
        // Only the smoking variable counts.
        assert_eq!(matrix.value(0, 1), 0.0);
        assert_eq!(matrix.value(3, 4), 1.0);
    }

    #[test]
    fn undefined_pairs_carry_a_sentinel() {
        let d = vec![0.2, 0.4, 0.6];
        let delta = vec![true, false, true];
        let pvd = PerVariableDissimilarity::from_raw(3, 1, d, delta);
        let matrix = gower_unweighted(&pvd);
        assert!(matrix.is_defined(0, 1));
        assert!(!matrix.is_defined(0, 2));
        assert!(matrix.to_square_csv(&ids(3)).contains("NA"));
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let pvd = per_variable_matrix(&smoker_age_table(), &OrdinalOptions::default()).unwrap();
        let matrix = gower_unweighted(&pvd);
        let bytes = matrix.to_binary();
        let back = DissimilarityMatrix::from_binary(&bytes).unwrap();
        assert_eq!(matrix.n(), back.n());
        for (a, b) in matrix.condensed().iter().zip(back.condensed()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(DissimilarityMatrix::from_binary(&bytes[..10]).is_err());
    }

    #[test]
    fn cross_against_itself_matches_condensed() {
        let table = smoker_age_table();
        let pvd = per_variable_matrix(&table, &OrdinalOptions::default()).unwrap();
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let condensed = gower_weighted(&pvd, &w).unwrap();
        let rect =
            cross_dissimilarity(&table, &table, &w, &OrdinalOptions::default()).unwrap();
        for i in 0..table.n() {
            for j in 0..table.n() {
                if i != j {
                    assert_eq!(rect.value(i, j), condensed.value(i, j));
                }
            }
        }
    }

    #[test]
    fn out_of_range_query_values_clamp_to_one() {
        let schema = parse_schema("x = numeric\n").unwrap();
        let reference = DataTable::from_csv("x\n0\n10\n", schema.clone()).unwrap();
        let query = DataTable::from_csv("x\n25\n", schema).unwrap();
        let rect = cross_dissimilarity(
            &reference,
            &query,
            &WeightVector::uniform(1),
            &OrdinalOptions::default(),
        )
        .unwrap();
        assert_eq!(rect.value(0, 0), 1.0);
        assert_eq!(rect.value(0, 1), 1.0);
    }

    #[test]
    fn single_query_row_gives_unweighted_row() {
        let table = smoker_age_table();
        let query = table.select_rows(&[0]);
        let rect = cross_dissimilarity(
            &table,
            &query,
            &WeightVector::uniform(2),
            &OrdinalOptions::default(),
        )
        .unwrap();
        let pvd = per_variable_matrix(&table, &OrdinalOptions::default()).unwrap();
        let condensed = gower_unweighted(&pvd);
        for j in 1..table.n() {
            assert_eq!(rect.value(0, j), condensed.value(0, j));
        }
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let table = smoker_age_table();
        let other = DataTable::from_csv(
            "x\n1\n2\n",
            parse_schema("x = numeric\n").unwrap(),
        )
        .unwrap();
        assert!(matches!(
            cross_dissimilarity(
                &table,
                &other,
                &WeightVector::uniform(2),
                &OrdinalOptions::default()
            ),
            Err(Error::SchemaMismatch(_))
        ));
    }

    fn ids(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("u{i}")).collect()
    }
}
