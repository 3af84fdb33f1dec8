use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Family, LinearSpec, ParamSet, TfidfEstimator};
use crate::corpus::{kfold_split, Label};
use crate::error::{Error, Result};
use crate::eval::{cross_validate_folds, CvResult, Estimator, Objective};
use crate::features::TfidfConfig;
use crate::math;

/// Named axes whose Cartesian product forms the candidates. Candidates are
/// enumerated with the last axis varying fastest.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamGrid {
    pub axes: Vec<(String, Vec<f64>)>,
}

impl ParamGrid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn axis(mut self, name: &str, values: &[f64]) -> Self {
        self.axes.push((name.to_string(), values.to_vec()));
        self
    }

    pub fn candidates(&self) -> Vec<ParamSet> {
        let mut out = alloc::vec![ParamSet::default()];
        for (name, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|base| values.iter().map(move |&v| base.clone().with(name, v)))
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CandidateResult {
    pub params: ParamSet,
    pub fold_scores: Vec<f64>,
    pub mean_score: f64,
    pub cv: CvResult,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSearchResult {
    pub best_params: ParamSet,
    pub best_score: f64,
    pub best_index: usize,
    pub objective: Objective,
    pub per_candidate: Vec<CandidateResult>,
}

impl GridSearchResult {
    pub fn best(&self) -> &CandidateResult {
        &self.per_candidate[self.best_index]
    }
}

/// Evaluates every candidate on the same stratified folds and keeps the
/// highest mean objective; ties go to the earliest candidate.
pub fn grid_search_with<E, F, D>(
    make_estimator: F,
    grid: &ParamGrid,
    docs: &[D],
    labels: &[Label],
    k: usize,
    seed: u64,
    objective: Objective,
) -> Result<GridSearchResult>
where
    E: Estimator,
    F: Fn(&ParamSet) -> Result<E>,
    D: AsRef<[String]>,
{
    let candidates = grid.candidates();
    if grid.axes.iter().any(|(_, v)| v.is_empty()) || candidates.is_empty() {
        return Err(Error::InvalidParameter("parameter grid is empty".into()));
    }
    if docs.len() != labels.len() {
        return Err(Error::LengthMismatch(docs.len(), labels.len()));
    }
    let folds = kfold_split(labels, k, seed, true)?;
    let mut per_candidate: Vec<CandidateResult> = Vec::with_capacity(candidates.len());
    let mut best_index = 0;
    for (i, params) in candidates.into_iter().enumerate() {
        let estimator = make_estimator(&params)?;
        let cv = cross_validate_folds(&estimator, docs, labels, &folds)?;
        let fold_scores: Vec<f64> = cv.folds.iter().map(|r| objective.score(r)).collect();
        let mean_score = math::mean(&fold_scores);
        if i > 0 && mean_score > per_candidate[best_index].mean_score {
            best_index = i;
        }
        per_candidate.push(CandidateResult {
            params,
            fold_scores,
            mean_score,
            cv,
        });
    }
    Ok(GridSearchResult {
        best_params: per_candidate[best_index].params.clone(),
        best_score: per_candidate[best_index].mean_score,
        best_index,
        objective,
        per_candidate,
    })
}

/// Grid search over one linear family with TF-IDF refitted on every
/// training fold.
#[allow(clippy::too_many_arguments)]
pub fn grid_search<D: AsRef<[String]>>(
    family: Family,
    grid: &ParamGrid,
    docs: &[D],
    labels: &[Label],
    k: usize,
    seed: u64,
    objective: Objective,
    tfidf: TfidfConfig,
) -> Result<GridSearchResult> {
    grid_search_with(
        |params| {
            Ok(TfidfEstimator {
                spec: LinearSpec::from_params(family, params, seed)?,
                tfidf,
            })
        },
        grid,
        docs,
        labels,
        k,
        seed,
        objective,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_order_last_axis_fastest() {
        let g = ParamGrid::new().axis("a", &[1.0, 2.0]).axis("b", &[10.0, 20.0, 30.0]);
        let c = g.candidates();
        assert_eq!(c.len(), 6);
        assert_eq!(c[0].0, alloc::vec![("a".to_string(), 1.0), ("b".to_string(), 10.0)]);
        assert_eq!(c[1].get("b"), Some(20.0));
        assert_eq!(c[3].get("a"), Some(2.0));
    }

    #[test]
    fn empty_grid_rejected() {
        let docs: Vec<Vec<String>> = alloc::vec![alloc::vec!["a".into()]; 4];
        let labels = [Label::Bullying, Label::NonBullying, Label::Bullying, Label::NonBullying];
        let g = ParamGrid::new().axis("alpha", &[]);
        assert!(grid_search(Family::NaiveBayes, &g, &docs, &labels, 2, 1, Objective::WeightedF1, TfidfConfig::default()).is_err());
    }
}
