//! Least-squares isotonic regression by pool-adjacent-violators.

/// Projects `values` onto the non-decreasing sequences in the L2 sense.
pub fn pava(values: &[f64]) -> Vec<f64> {
    // (block mean, block length)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        let mut mean = v;
        let mut len = 1usize;
        while let Some(&(prev_mean, prev_len)) = blocks.last() {
            if prev_mean <= mean {
                break;
            }
            blocks.pop();
            let total = prev_len + len;
            mean = (prev_mean * prev_len as f64 + mean * len as f64) / total as f64;
            len = total;
        }
        blocks.push((mean, len));
    }
    let mut out = Vec::with_capacity(values.len());
    for (mean, len) in blocks {
        out.extend(std::iter::repeat_n(mean, len));
    }
    out
}
