use std::collections::HashMap;
use std::hash::Hash;

use super::Unit;
use crate::error::{Error, Result};
use crate::ingest::Corpus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEntry {
    pub rank: usize,
    pub form: String,
    pub count: u64,
}

/// Types ordered by descending count with ranks 1..K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// `(rank, count)` pairs.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .map(|e| (e.rank as f64, e.count as f64))
            .collect()
    }
}

/// Count items and sort by descending count; ties go to the earlier first
/// occurrence, then to the smaller item.
pub fn count_ranks<T, I>(items: I) -> Vec<(T, u64)>
where
    T: Hash + Eq + Ord,
    I: IntoIterator<Item = T>,
{
    let mut tally: HashMap<T, (u64, usize)> = HashMap::new();
    for (pos, item) in items.into_iter().enumerate() {
        tally.entry(item).or_insert((0, pos)).0 += 1;
    }
    let mut rows: Vec<(T, u64, usize)> = tally.into_iter().map(|(k, (c, p))| (k, c, p)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)).then_with(|| a.0.cmp(&b.0)));
    rows.into_iter().map(|(k, c, _)| (k, c)).collect()
}

pub fn rank_frequency<I, S>(forms: I) -> Result<RankTable>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let ranked = count_ranks(forms.into_iter().map(|s| s.as_ref().to_string()));
    if ranked.is_empty() {
        return Err(Error::Empty("rank table of an empty stream".into()));
    }
    Ok(RankTable {
        entries: ranked
            .into_iter()
            .enumerate()
            .map(|(i, (form, count))| RankEntry {
                rank: i + 1,
                form,
                count,
            })
            .collect(),
    })
}

/// Rank table over the whole corpus (conversations concatenated in order).
pub fn corpus_rank_frequency(corpus: &Corpus, unit: Unit) -> Result<RankTable> {
    if let Unit::Class(_) = unit {
        corpus.require_tagged("per-class rank table")?;
    }
    rank_frequency(corpus.conversations.iter().flat_map(|c| unit.forms(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn direct_count() {
        let t = rank_frequency(["a", "b", "b"]).unwrap();
        assert_eq!(
            t.entries,
            vec![
                RankEntry { rank: 1, form: "b".into(), count: 2 },
                RankEntry { rank: 2, form: "a".into(), count: 1 },
            ]
        );
    }

    #[test]
    fn ties_break_on_first_occurrence() {
        let t = rank_frequency(["z", "a", "a", "z", "m"]).unwrap();
        let forms: Vec<_> = t.entries.iter().map(|e| e.form.as_str()).collect();
        assert_eq!(forms, ["z", "a", "m"]);
    }

    #[test]
    fn empty_is_error() {
        assert!(rank_frequency(Vec::<String>::new()).is_err());
    }

    proptest! {
        #[test]
        fn conservation_and_order(stream in prop::collection::vec(0u8..30, 1..400)) {
            let forms: Vec<String> = stream.iter().map(|b| format!("t{b}")).collect();
            let table = rank_frequency(&forms).unwrap();
            prop_assert_eq!(table.total(), forms.len() as u64);
            // independent tally
            let mut tally = std::collections::BTreeMap::new();
            for f in &forms { *tally.entry(f.clone()).or_insert(0u64) += 1; }
            prop_assert_eq!(table.entries.len(), tally.len());
            for (i, e) in table.entries.iter().enumerate() {
                prop_assert_eq!(e.rank, i + 1);
                prop_assert_eq!(tally[&e.form], e.count);
                if i > 0 { prop_assert!(table.entries[i - 1].count >= e.count); }
            }
        }
    }
}
