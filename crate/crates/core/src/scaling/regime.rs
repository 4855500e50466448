use serde::{Deserialize, Serialize};

use super::fit::{Axis, RegimeBounds};
use super::Unit;
use crate::error::{Error, Result};
use crate::ingest::CorpusKind;
use crate::textprep::MacroClass;

/// Start/end log10 bounds per macro-class, in noun, verb, other, func, intj order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRegimes {
    pub start: [f64; 5],
    pub end: [f64; 5],
}

/// Scaling regimes: one corpus-level window plus per-class windows per corpus kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeMatrix {
    /// `[lo, hi]` used for whole-vocabulary fits.
    pub corpus_level: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candor: Option<ClassRegimes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub movies_individual: Option<ClassRegimes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub movies_grouped: Option<ClassRegimes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<ClassRegimes>,
}

impl Default for RegimeMatrix {
    /// Visually selected windows for the three conversational corpora.
    fn default() -> Self {
        // columns: candor, movies (individual), movies (grouped)
        const START: [[f64; 3]; 5] = [
            [1.4, 1.0, 1.4],
            [1.5, 1.3, 1.5],
            [1.5, 1.45, 1.45],
            [1.25, 1.15, 1.25],
            [1.2, 0.9, 1.4],
        ];
        const END: [[f64; 3]; 5] = [
            [3.2, 3.2, 3.2],
            [3.0, 3.0, 3.2],
            [3.0, 2.6, 3.2],
            [1.9, 1.9, 1.9],
            [2.1, 2.2, 2.4],
        ];
        let column = |j: usize| ClassRegimes {
            start: std::array::from_fn(|i| START[i][j]),
            end: std::array::from_fn(|i| END[i][j]),
        };
        RegimeMatrix {
            corpus_level: [2.0, 3.4],
            candor: Some(column(0)),
            movies_individual: Some(column(1)),
            movies_grouped: Some(column(2)),
            generic: None,
        }
    }
}

impl RegimeMatrix {
    pub fn per_class(&self, kind: CorpusKind) -> Option<&ClassRegimes> {
        match kind {
            CorpusKind::Candor => self.candor.as_ref(),
            CorpusKind::MoviesIndividual => self.movies_individual.as_ref(),
            CorpusKind::MoviesGrouped => self.movies_grouped.as_ref(),
            CorpusKind::Generic => self.generic.as_ref(),
        }
    }

    pub fn bounds(&self, unit: Unit, kind: CorpusKind, axis: Axis) -> Result<RegimeBounds> {
        let (lo, hi) = match unit {
            Unit::All => (self.corpus_level[0], self.corpus_level[1]),
            Unit::Class(class) => {
                let cells = self.per_class(kind).ok_or_else(|| Error::MissingRegime {
                    class: class.to_string(),
                    kind: kind.to_string(),
                })?;
                (cells.start[class.index()], cells.end[class.index()])
            }
        };
        RegimeBounds::new(lo, hi, axis)
    }

    /// Check that every configured cell has start < end.
    pub fn validate(&self) -> Result<()> {
        RegimeBounds::new(self.corpus_level[0], self.corpus_level[1], Axis::X)?;
        for kind in CorpusKind::ALL {
            if let Some(cells) = self.per_class(kind) {
                for class in MacroClass::ALL {
                    let i = class.index();
                    if cells.start[i].partial_cmp(&cells.end[i]) != Some(std::cmp::Ordering::Less) {
                        return Err(Error::InvalidParam(format!(
                            "regime for {class} on {kind}: start {} not below end {}",
                            cells.start[i], cells.end[i]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
