use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::posts::Post;
use super::StudyWindow;
use crate::error::{Error, Result};
use crate::series::{MonthStamp, SeriesRole, TimeSeries};

/// Monthly post counts keyed by (page, topic).
pub type TopicCounts = BTreeMap<(String, String), TimeSeries>;

/// Counts per month for every page x topic pair of the grid, zeros
/// included. Posts whose page or topic lies outside the grid are ignored.
pub fn aggregate_grid(
    posts: &[Post],
    window: &StudyWindow,
    pages: &[String],
    topics: &[String],
) -> Result<TopicCounts> {
    let missing: Vec<String> = posts
        .iter()
        .filter(|p| p.topic_label.is_none())
        .map(|p| p.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingLabel { ids: missing });
    }
    let mut counts: BTreeMap<(String, String), Vec<f64>> = pages
        .iter()
        .flat_map(|p| topics.iter().map(move |t| ((p.clone(), t.clone()), vec![0.0; window.len()])))
        .collect();
    for post in posts {
        let month = MonthStamp::of_date(post.timestamp.date());
        let i = window.index_of(month).ok_or_else(|| {
            Error::Domain(format!("post `{}` dated {month} is outside the study window", post.id))
        })?;
        let key = (post.page.clone(), post.topic_label.clone().unwrap_or_default());
        if let Some(v) = counts.get_mut(&key) {
            v[i] += 1.0;
        }
    }
    counts
        .into_iter()
        .map(|((page, topic), values)| {
            let ts = TimeSeries::new(format!("{page} | {topic}"), window.first(), values, SeriesRole::TopicCount)?;
            Ok(((page, topic), ts))
        })
        .collect()
}

/// [`aggregate_grid`] over the pages and topics that occur in `posts`.
pub fn aggregate_monthly(posts: &[Post], window: &StudyWindow) -> Result<TopicCounts> {
    let pages: BTreeSet<String> = posts.iter().map(|p| p.page.clone()).collect();
    let topics: BTreeSet<String> = posts.iter().filter_map(|p| p.topic_label.clone()).collect();
    let pages: Vec<String> = pages.into_iter().collect();
    let topics: Vec<String> = topics.into_iter().collect();
    aggregate_grid(posts, window, &pages, &topics)
}

/// Event after which a step dummy switches on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterruptionSpec {
    pub name: String,
    pub cutoff: NaiveDate,
}

/// Monthly step dummy: a month is 1 when its last day is on or after the
/// cutoff, so the cutoff month itself is 1.
pub fn build_interruption(window: &StudyWindow, spec: &InterruptionSpec) -> Result<TimeSeries> {
    if !window.contains(spec.cutoff) {
        return Err(Error::Config(format!(
            "interruption `{}` cutoff {} is outside the study window {}..{}",
            spec.name,
            spec.cutoff,
            window.first(),
            window.last()
        )));
    }
    let values = (0..window.len())
        .map(|i| {
            let month = window.first().add_months(i as i64);
            if month.last_day() >= spec.cutoff {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    TimeSeries::new(spec.name.clone(), window.first(), values, SeriesRole::Dummy)
}
