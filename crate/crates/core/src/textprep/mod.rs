//! Text cleaning, tokenization and POS recoding.

mod clean;
mod tokenize;
mod upos;

pub use clean::{clean_text, CleanProfile, CleanRules, Cleaner, ProfileName, RuleSpec};
pub use tokenize::{form_of, tokenize, tokenize_surfaces, tokenize_with, FormPolicy};
pub use upos::{recode_tag, recode_upos, MacroClass, Upos};
