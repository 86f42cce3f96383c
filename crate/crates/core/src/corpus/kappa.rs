use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use super::Corpus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("label lists are empty")]
    EmptyInput,
    #[error("chance agreement is 1 but the lists differ")]
    DegenerateAgreement,
    #[error("annotations are not aligned: {0}")]
    Misaligned(String),
}

/// Cohen's kappa between two aligned label sequences.
///
/// `p_o` is the observed agreement and `p_e` the agreement expected from
/// each annotator's marginal label frequencies.
pub fn cohen_kappa<L: Eq + Hash>(labels_a: &[L], labels_b: &[L]) -> Result<f64, KappaError> {
    if labels_a.len() != labels_b.len() {
        return Err(KappaError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(KappaError::EmptyInput);
    }
    let n = labels_a.len() as u128;
    let mut agree = 0u128;
    let mut marginals: HashMap<&L, (u128, u128)> = HashMap::new();
    for (a, b) in labels_a.iter().zip(labels_b) {
        if a == b {
            agree += 1;
        }
        marginals.entry(a).or_default().0 += 1;
        marginals.entry(b).or_default().1 += 1;
    }
    // p_o = agree*n / n^2, p_e = sum(ca*cb) / n^2, exact in integers
    let chance: u128 = marginals.values().map(|&(ca, cb)| ca * cb).sum();
    let total = n * n;
    if chance == total {
        return if agree == n {
            Ok(1.0)
        } else {
            Err(KappaError::DegenerateAgreement)
        };
    }
    let observed = agree * n;
    Ok((observed as f64 - chance as f64) / (total - chance) as f64)
}

/// Aligns two annotations of the same entries by (entry id, triplet index)
/// and returns the tag label each annotator assigned.
///
/// Entries are matched by id; entries missing from either side, or with
/// a different number of triplets, are reported as misaligned.
pub fn aligned_tag_labels(a: &Corpus, b: &Corpus) -> Result<(Vec<String>, Vec<String>), KappaError> {
    let index: HashMap<&str, &super::Entry> = b.iter().map(|e| (e.id.as_str(), e)).collect();
    let mut la = Vec::new();
    let mut lb = Vec::new();
    for ea in a {
        let eb = index
            .get(ea.id.as_str())
            .ok_or_else(|| KappaError::Misaligned(format!("entry {} missing from second annotation", ea.id)))?;
        if ea.triplets.len() != eb.triplets.len() {
            return Err(KappaError::Misaligned(format!(
                "entry {} has {} vs {} triplets",
                ea.id,
                ea.triplets.len(),
                eb.triplets.len()
            )));
        }
        for (ta, tb) in ea.triplets.iter().zip(&eb.triplets) {
            la.push(ta.tag.clone());
            lb.push(tb.tag.clone());
        }
    }
    Ok((la, lb))
}
