use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use super::StudyWindow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Post {
    pub id: String,
    pub page: String,
    pub timestamp: NaiveDateTime,
    pub text: String,
    pub language: String,
    pub topic_label: Option<String>,
}

/// Constraints checked while loading posts.
#[derive(Debug, Clone, Default)]
pub struct PostFilter {
    pub pages: Option<BTreeSet<String>>,
    pub window: Option<StudyWindow>,
}

const POST_COLUMNS: [&str; 6] = ["id", "page", "date", "language", "text", "topic_label"];

/// ISO-8601 date or date-time. Offsets are dropped so the calendar month is
/// the one written in the file.
pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return d.and_hms_opt(0, 0, 0);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t);
        }
    }
    DateTime::parse_from_rfc3339(s).ok().map(|t| t.naive_local())
}

pub(crate) fn column_index(
    headers: &csv::StringRecord,
    wanted: &[&str],
    source: &str,
) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|w| {
            headers
                .iter()
                .position(|h| h.trim() == *w)
                .ok_or_else(|| Error::Row {
                    source_name: source.to_string(),
                    row: 1,
                    column: w.to_string(),
                    message: "missing column in header".into(),
                })
        })
        .collect()
}

pub(crate) fn row_error(source: &str, record: &csv::StringRecord, column: &str, message: impl Into<String>) -> Error {
    Error::Row {
        source_name: source.to_string(),
        row: record.position().map_or(0, |p| p.line() as usize),
        column: column.to_string(),
        message: message.into(),
    }
}

pub(crate) fn csv_reader<R: Read>(rdr: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().flexible(false).from_reader(rdr)
}

/// Parse posts from CSV with header `id,page,date,language,text,topic_label`.
/// Rows are numbered by file line, the header being line 1.
pub fn read_posts<R: Read>(rdr: R, source: &str, filter: &PostFilter) -> Result<Vec<Post>> {
    let mut rdr = csv_reader(rdr);
    let idx = column_index(rdr.headers()?, &POST_COLUMNS, source)?;
    let mut posts = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let field = |i: usize| record.get(idx[i]).unwrap_or("");
        let id = field(0).trim();
        if id.is_empty() {
            return Err(row_error(source, &record, "id", "empty id"));
        }
        let page = field(1).trim();
        if let Some(pages) = &filter.pages {
            if !pages.contains(page) {
                return Err(row_error(source, &record, "page", format!("unknown page `{page}`")));
            }
        }
        let timestamp = parse_timestamp(field(2))
            .ok_or_else(|| row_error(source, &record, "date", format!("unparseable date `{}`", field(2))))?;
        if let Some(w) = &filter.window {
            if !w.contains(timestamp.date()) {
                return Err(row_error(
                    source,
                    &record,
                    "date",
                    format!("{} is outside the study window {}..{}", timestamp.date(), w.first(), w.last()),
                ));
            }
        }
        let language = field(3).trim().to_lowercase();
        if language.is_empty() {
            return Err(row_error(source, &record, "language", "empty language tag"));
        }
        let label = field(5).trim();
        posts.push(Post {
            id: id.to_string(),
            page: page.to_string(),
            timestamp,
            text: field(4).to_string(),
            language,
            topic_label: (!label.is_empty()).then(|| label.to_string()),
        });
    }
    Ok(posts)
}

pub fn load_posts(path: &Path, filter: &PostFilter) -> Result<Vec<Post>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    read_posts(file, &path.display().to_string(), filter)
}

/// Topic labels keyed by post id, from CSV with header `id,topic_label`.
pub fn load_labels(path: &Path) -> Result<HashMap<String, String>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    read_labels(file, &path.display().to_string())
}

pub fn read_labels<R: Read>(rdr: R, source: &str) -> Result<HashMap<String, String>> {
    let mut rdr = csv_reader(rdr);
    let idx = column_index(rdr.headers()?, &["id", "topic_label"], source)?;
    let mut labels = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let id = record.get(idx[0]).unwrap_or("").trim().to_string();
        let label = record.get(idx[1]).unwrap_or("").trim().to_string();
        if id.is_empty() || label.is_empty() {
            return Err(row_error(source, &record, "topic_label", "empty id or label"));
        }
        if labels.insert(id.clone(), label).is_some() {
            return Err(row_error(source, &record, "id", format!("duplicate id `{id}`")));
        }
    }
    Ok(labels)
}

/// Join external labels onto posts by id; a joined label replaces any label
/// already present.
pub fn apply_labels(posts: &mut [Post], labels: &HashMap<String, String>) {
    for post in posts {
        if let Some(l) = labels.get(&post.id) {
            post.topic_label = Some(l.clone());
        }
    }
}
