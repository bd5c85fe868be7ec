//! Heavy/light splits, light-pattern rules, derived decoders and amplifiers.

mod amplify;
mod derived;
mod pattern;
mod split;

pub use amplify::{amplify_ldc_majority, amplify_rldc_repeat, DEFAULT_ENTRY_BUDGET};
pub use derived::{
    derive_ldc_decoder, derive_ldc_decoder_unchecked, tq_decoder, DerivedDecoder, DerivedEntry, TiePolicy,
};
pub use pattern::{classify_light_pattern, derive_rule, is_smoothable_global, BadReason, DerivedRule, PatternClass};
pub use split::{heavy_light_split, query_probability, HeavyLightSplit};
