//! Facet detection over generated responses: converts one stored model
//! response into a binary facet-presence vector under the rater contract,
//! with a deterministic keyword backend for hermetic runs.

pub mod parse;
pub mod rate;
pub mod rater;

pub use parse::{parse_facet_list, ParseMode};
pub use rate::{
    rate_corpus, rate_response, read_ratings_jsonl, write_ratings_jsonl, QuarantinedRating,
    RateError, RateReport, RatingRecord,
};
pub use rater::{HttpRater, KeywordRater, Rater, RaterError};
