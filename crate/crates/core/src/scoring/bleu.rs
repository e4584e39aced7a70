use std::collections::HashMap;

pub const DEFAULT_MAX_N: usize = 4;

/// Lower-cased tokens split on whitespace and punctuation.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Sentence BLEU against a single reference, without smoothing.
///
/// Orders above the candidate's length are left out of the geometric mean
/// (their precision would be 0/0), so `bleu(x, x) == 1` for any `x` that has
/// at least one token. An empty candidate or reference scores 0.
pub fn bleu(candidate: &str, reference: &str, max_n: usize) -> f64 {
    assert!(max_n >= 1, "max_n must be at least 1");
    let cand = tokenize(candidate);
    let refs = tokenize(reference);
    if cand.is_empty() || refs.is_empty() {
        return 0.0;
    }
    let orders = max_n.min(cand.len());
    let mut log_sum = 0.0;
    for n in 1..=orders {
        let ref_counts = ngram_counts(&refs, n);
        let clipped: usize = ngram_counts(&cand, n)
            .iter()
            .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        if clipped == 0 {
            return 0.0;
        }
        let total = cand.len() + 1 - n;
        log_sum += (clipped as f64 / total as f64).ln();
    }
    let (c, r) = (cand.len() as f64, refs.len() as f64);
    let brevity = if c < r { (1.0 - r / c).exp() } else { 1.0 };
    (brevity * (log_sum / orders as f64).exp()).clamp(0.0, 1.0)
}
