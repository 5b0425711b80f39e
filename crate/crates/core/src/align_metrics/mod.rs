//! Alignment-based metrics: TER, METEOR (with pluggable language
//! resources) and RIBES, plus the rank-correlation primitives RIBES uses.

mod meteor;
pub mod rank;
mod resources;
mod ribes;
mod ter;

pub use meteor::{
    count_chunks, meteor, meteor_align, meteor_multi, meteor_pl, MatchStage, MeteorAlignment, MeteorScore,
    WordMatch, DEFAULT_PENALTY_EXPONENT,
};
pub use rank::{kendall_nkt, kendall_tau, spearman_nsr, spearman_rho};
pub use resources::{LanguageResources, DEFAULT_FUNCTION_WORD_WEIGHT};
pub use ribes::{ribes, ribes_alignment, ribes_multi, RibesScore, RibesVariant, DEFAULT_ALPHA};
pub use ter::{shift_edits, ter, ter_multi, word_edit_distance, TerScore, MAX_SHIFT_LEN};
