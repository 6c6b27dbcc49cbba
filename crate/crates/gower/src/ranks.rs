//! Average ranks with the usual tie convention.

/// 1-based ranks of `values`; tied values share the mean of the rank
/// positions they occupy.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order = Vec::new();
    let mut ranks = Vec::new();
    average_ranks_into(values, &mut order, &mut ranks);
    ranks
}

/// [`average_ranks`] writing into caller-owned buffers.
pub(crate) fn average_ranks_into(values: &[f64], order: &mut Vec<usize>, out: &mut Vec<f64>) {
    order.clear();
    order.extend(0..values.len());
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));

    out.clear();
    out.resize(values.len(), 0.0);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Mean of positions start+1 ..= end.
        let shared = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            out[idx] = shared;
        }
        start = end;
    }
}
