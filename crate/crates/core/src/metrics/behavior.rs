use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphView};

/// Recommender behavior derived from the out/in balance of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BehaviorClass {
    HighlyRecommended,
    Usual,
    GoodRecommender,
    Disseminator,
}

impl BehaviorClass {
    pub const ALL: [BehaviorClass; 4] = [
        BehaviorClass::HighlyRecommended,
        BehaviorClass::Usual,
        BehaviorClass::GoodRecommender,
        BehaviorClass::Disseminator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BehaviorClass::HighlyRecommended => "highly_recommended",
            BehaviorClass::Usual => "usual",
            BehaviorClass::GoodRecommender => "good_recommender",
            BehaviorClass::Disseminator => "disseminator",
        }
    }
}

/// Class boundaries on the ratio axis: `r <= low` is highly recommended,
/// `(low, mid]` usual, `(mid, high]` good recommender, `> high` disseminator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BehaviorThresholds {
    pub low: f64,
    pub mid: f64,
    pub high: f64,
}

impl Default for BehaviorThresholds {
    fn default() -> Self {
        BehaviorThresholds {
            low: 0.1,
            mid: 0.75,
            high: 0.9,
        }
    }
}

impl BehaviorThresholds {
    pub fn new(low: f64, mid: f64, high: f64) -> Result<Self> {
        let t = BehaviorThresholds { low, mid, high };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.low && self.low < self.mid && self.mid < self.high && self.high < 1.0;
        if !ok {
            return Err(Error::Config(format!(
                "behavior thresholds must satisfy 0 < low < mid < high < 1, got ({}, {}, {})",
                self.low, self.mid, self.high
            )));
        }
        Ok(())
    }

    pub fn classify(&self, ratio: f64) -> BehaviorClass {
        if ratio <= self.low {
            BehaviorClass::HighlyRecommended
        } else if ratio <= self.mid {
            BehaviorClass::Usual
        } else if ratio <= self.high {
            BehaviorClass::GoodRecommender
        } else {
            BehaviorClass::Disseminator
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioMode {
    /// `out / (out + in)`, always in `[0, 1]`.
    #[default]
    Normalized,
    /// `out / in`; infinite when `in == 0`.
    Raw,
}

impl RatioMode {
    pub fn ratio(self, out: usize, inc: usize) -> f64 {
        match self {
            RatioMode::Normalized => out as f64 / (out + inc) as f64,
            RatioMode::Raw if inc == 0 => f64::INFINITY,
            RatioMode::Raw => out as f64 / inc as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviorSummary {
    /// `None` for isolated nodes.
    pub classes: Vec<Option<BehaviorClass>>,
    pub ratios: Vec<Option<f64>>,
    /// Counts in [`BehaviorClass::ALL`] order.
    pub counts: [usize; 4],
    pub fractions: [f64; 4],
    pub isolated: usize,
    pub classified: usize,
    /// ECDF over finite ratios, ascending.
    pub ratio_ecdf: Vec<(f64, f64)>,
    pub infinite_ratios: usize,
}

pub fn classify_behavior(
    g: &DirectedGraph,
    thresholds: BehaviorThresholds,
    mode: RatioMode,
) -> Result<BehaviorSummary> {
    thresholds.validate()?;
    let n = g.node_count();
    let mut classes = Vec::with_capacity(n);
    let mut ratios = Vec::with_capacity(n);
    let mut counts = [0usize; 4];
    let mut isolated = 0;
    for u in 0..n {
        let (out, inc) = (g.out_degree(u), g.in_degree(u));
        if out + inc == 0 {
            isolated += 1;
            classes.push(None);
            ratios.push(None);
            continue;
        }
        let r = mode.ratio(out, inc);
        let class = thresholds.classify(r);
        counts[class as usize] += 1;
        classes.push(Some(class));
        ratios.push(Some(r));
    }
    let classified = n - isolated;
    let fractions = if classified == 0 {
        [0.0; 4]
    } else {
        counts.map(|c| c as f64 / classified as f64)
    };

    let mut finite: Vec<f64> = ratios.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    let infinite_ratios = classified - finite.len();
    finite.sort_by(f64::total_cmp);
    let mut ratio_ecdf: Vec<(f64, f64)> = Vec::new();
    let total = finite.len() as f64;
    for (i, &r) in finite.iter().enumerate() {
        let p = (i + 1) as f64 / total;
        match ratio_ecdf.last_mut() {
            Some(last) if last.0 == r => last.1 = p,
            _ => ratio_ecdf.push((r, p)),
        }
    }

    Ok(BehaviorSummary {
        classes,
        ratios,
        counts,
        fractions,
        isolated,
        classified,
        ratio_ecdf,
        infinite_ratios,
    })
}
