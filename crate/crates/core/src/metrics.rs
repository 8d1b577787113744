//! Classification reports shared by language identification and tagging.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassScores {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-class scores, averages and the confusion matrix. Rows of
/// `confusion` are gold labels, columns are predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub labels: Vec<String>,
    pub classes: Vec<ClassScores>,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
    pub accuracy: f64,
    pub confusion: Vec<Vec<usize>>,
    pub total: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl ClassificationReport {
    /// Builds a report from a confusion matrix over `labels`.
    pub fn from_confusion(labels: Vec<String>, confusion: Vec<Vec<usize>>) -> Result<Self> {
        let k = labels.len();
        if confusion.len() != k || confusion.iter().any(|r| r.len() != k) {
            return Err(Error::LengthMismatch {
                left: k,
                right: confusion.len(),
            });
        }
        let total: usize = confusion.iter().flatten().sum();
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        let mut classes = Vec::with_capacity(k);
        for (i, label) in labels.iter().enumerate() {
            let tp = confusion[i][i];
            let support: usize = confusion[i].iter().sum();
            let predicted: usize = confusion.iter().map(|r| r[i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            classes.push(ClassScores {
                label: label.clone(),
                precision,
                recall,
                f1: f1(precision, recall),
                support,
            });
        }
        let kf = k as f64;
        let macro_avg = Averages {
            precision: classes.iter().map(|c| c.precision).sum::<f64>() / kf,
            recall: classes.iter().map(|c| c.recall).sum::<f64>() / kf,
            f1: classes.iter().map(|c| c.f1).sum::<f64>() / kf,
        };
        let w = |f: fn(&ClassScores) -> f64| {
            classes
                .iter()
                .map(|c| f(c) * c.support as f64)
                .sum::<f64>()
                / total as f64
        };
        let weighted_avg = Averages {
            precision: w(|c| c.precision),
            recall: w(|c| c.recall),
            f1: w(|c| c.f1),
        };
        let trace: usize = (0..k).map(|i| confusion[i][i]).sum();
        Ok(ClassificationReport {
            labels,
            classes,
            macro_avg,
            weighted_avg,
            accuracy: ratio(trace, total),
            confusion,
            total,
        })
    }

    /// Builds a report from parallel gold and predicted label lists.
    /// Predictions outside `labels` are rejected, as are unknown gold
    /// labels.
    pub fn from_pairs<S: AsRef<str>>(labels: &[S], gold: &[S], predicted: &[S]) -> Result<Self> {
        if gold.len() != predicted.len() {
            return Err(Error::LengthMismatch {
                left: gold.len(),
                right: predicted.len(),
            });
        }
        let names: Vec<String> = labels.iter().map(|s| String::from(s.as_ref())).collect();
        let index = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownLabel(String::from(s)))
        };
        let mut confusion = vec![vec![0usize; names.len()]; names.len()];
        for (g, p) in gold.iter().zip(predicted) {
            confusion[index(g.as_ref())?][index(p.as_ref())?] += 1;
        }
        Self::from_confusion(names, confusion)
    }

    pub fn class(&self, label: &str) -> Option<&ClassScores> {
        self.classes.iter().find(|c| c.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn labels() -> Vec<String> {
        vec!["a".to_string(), "b".to_string()]
    }

    #[test]
    fn two_class_formulas() {
        let r = ClassificationReport::from_confusion(labels(), vec![vec![9, 1], vec![0, 10]]).unwrap();
        let a = r.class("a").unwrap();
        let b = r.class("b").unwrap();
        assert_eq!(a.precision, 1.0);
        assert!((a.recall - 0.9).abs() < 1e-12);
        assert!((a.f1 - 18.0 / 19.0).abs() < 1e-12);
        assert!((b.precision - 10.0 / 11.0).abs() < 1e-12);
        assert_eq!(b.recall, 1.0);
        assert!((r.accuracy - 0.95).abs() < 1e-12);
        assert!((r.weighted_avg.recall - r.accuracy).abs() < 1e-12);
    }

    #[test]
    fn perfect_predictions() {
        let g = ["a", "b", "b"];
        let r = ClassificationReport::from_pairs(&["a", "b"], &g, &g).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert!(r.classes.iter().all(|c| c.f1 == 1.0));
    }

    #[test]
    fn zero_division_is_zero() {
        let r = ClassificationReport::from_confusion(labels(), vec![vec![3, 0], vec![2, 0]]).unwrap();
        assert_eq!(r.class("b").unwrap().precision, 0.0);
        assert_eq!(r.class("b").unwrap().f1, 0.0);
    }

    #[test]
    fn unknown_gold_label() {
        let e = ClassificationReport::from_pairs(&["a"], &["z"], &["a"]).unwrap_err();
        assert_eq!(e, Error::UnknownLabel("z".to_string()));
    }
}
