//! Corpus ingestion and series construction: post loading, lexicon
//! filtering, topic-label joins, monthly counts, indicator and interruption
//! series.

mod aggregate;
mod indicator;
mod lexicon;
mod posts;

pub use aggregate::{aggregate_grid, aggregate_monthly, build_interruption, InterruptionSpec, TopicCounts};
pub use indicator::{indicator_from_observations, load_indicator, read_indicator, IndicatorKind};
pub use lexicon::{lexicon_filter, normalize_text, Lexicon, MatchMode};
pub use posts::{
    apply_labels, load_labels, load_posts, parse_timestamp, read_labels, read_posts, Post, PostFilter,
};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::MonthStamp;

/// Inclusive range of calendar months under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyWindow {
    first: MonthStamp,
    last: MonthStamp,
}

impl StudyWindow {
    pub fn new(first: MonthStamp, last: MonthStamp) -> Result<Self> {
        if last < first {
            return Err(Error::Config(format!("study window {first}..{last} is empty")));
        }
        Ok(Self { first, last })
    }

    pub fn first(&self) -> MonthStamp {
        self.first
    }

    pub fn last(&self) -> MonthStamp {
        self.last
    }

    pub fn len(&self) -> usize {
        self.first.months_until(self.last) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        let m = MonthStamp::of_date(date);
        self.first <= m && m <= self.last
    }

    /// Position of `month` within the window.
    pub fn index_of(&self, month: MonthStamp) -> Option<usize> {
        (self.first <= month && month <= self.last).then(|| self.first.months_until(month) as usize)
    }
}
