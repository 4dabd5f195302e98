//! Synthetic study shared by the integration tests and the `demo_study` example.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use varflow::series::MonthStamp;

pub const PAGES: [&str; 2] = ["RT", "RT DE"];
pub const TOPICS: [&str; 2] = ["Recent News Headlines", "US-Russia-Ukraine Sanctions"];

const EN_ECON: [&str; 4] = ["New sanctions hit the ruble", "Inflation and the central bank", "Oil money flows", "The dollar and the euro"];
const DE_ECON: [&str; 3] = ["Der Rubel fällt", "Sanktionen und Inflation", "Die Zentralbank hebt den Zinssatz"];
const EN_OTHER: [&str; 2] = ["The sanctimonious speech", "Weather report for Sunday"];
const DE_OTHER: [&str; 1] = ["Fußball am Wochenende"];

pub fn start() -> MonthStamp {
    MonthStamp::new(2018, 9).unwrap()
}

pub const MONTHS: usize = 61;

/// Write a synthetic study: posts, labels, lexicon, two indicators and a
/// config. Economic post counts respond to last month's ruble rate.
pub fn write_study(dir: &Path, seed: u64, extra_config: &str) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();

    // ruble rate (RUB per USD) as a mean-reverting walk, daily rows
    let mut rate = vec![0.0; MONTHS];
    let mut oil = vec![0.0; MONTHS];
    let (mut r, mut o) = (70.0f64, 60.0f64);
    for m in 0..MONTHS {
        r = 70.0 + 0.6 * (r - 70.0) + 4.0 * noise.sample(&mut rng);
        o = 60.0 + 0.5 * (o - 60.0) + 5.0 * noise.sample(&mut rng);
        rate[m] = r.max(30.0);
        oil[m] = o.max(10.0);
    }
    let mut ruble_csv = String::from("date,value\n");
    let mut oil_csv = String::from("date,value\n");
    // one month of runway before the window
    for m in 0..MONTHS + 1 {
        let month = start().add_months(m as i64 - 1);
        let base = rate[m.saturating_sub(1)];
        for day in [3, 10, 17, 24] {
            let v = base * (1.0 + 0.01 * noise.sample(&mut rng));
            writeln!(ruble_csv, "{}-{:02}-{day:02},{v}", month.year(), month.month()).unwrap();
        }
        if day_blank(m) {
            writeln!(ruble_csv, "{}-{:02}-28,", month.year(), month.month()).unwrap();
        }
        writeln!(oil_csv, "{},{}", month, oil[m.saturating_sub(1)]).unwrap();
    }

    let mut posts = String::from("id,page,date,language,text,topic_label\n");
    let mut labels = String::from("id,topic_label\n");
    let mut id = 0;
    for (pi, page) in PAGES.iter().enumerate() {
        for (ti, topic) in TOPICS.iter().enumerate() {
            for m in 0..MONTHS {
                let prev = if m == 0 { 70.0 } else { rate[m - 1] };
                let mean = 15.0 + 3.0 * pi as f64 + 2.0 * ti as f64 + 0.4 * (70.0 - prev);
                let count = (mean + 2.5 * noise.sample(&mut rng)).round().max(0.0) as usize;
                let month = start().add_months(m as i64);
                for c in 0..count + 2 {
                    id += 1;
                    let day = 1 + (c % 27);
                    let economic = c >= 2;
                    let (lang, text) = match (*page, economic) {
                        ("RT DE", true) => ("de", DE_ECON[rng.random_range(0..DE_ECON.len())]),
                        ("RT DE", false) => ("de", DE_OTHER[0]),
                        (_, true) => ("en", EN_ECON[rng.random_range(0..EN_ECON.len())]),
                        (_, false) => ("en", EN_OTHER[c % 2]),
                    };
                    // every third post takes its label from the label file
                    let inline = if id % 3 == 0 { "" } else { topic };
                    if inline.is_empty() {
                        writeln!(labels, "p{id},{topic}").unwrap();
                    }
                    writeln!(
                        posts,
                        "p{id},{page},{}-{:02}-{day:02}T12:00:00,{lang},{text},{inline}",
                        month.year(),
                        month.month()
                    )
                    .unwrap();
                }
            }
        }
    }
    // a page outside the config, in a language missing from the lexicon
    writeln!(posts, "x1,RT Arabic,2020-01-01,ar,نص,{}", TOPICS[0]).unwrap();

    fs::create_dir_all(dir.join("data")).unwrap();
    fs::write(dir.join("data/posts.csv"), posts).unwrap();
    fs::write(dir.join("data/labels.csv"), labels).unwrap();
    fs::write(dir.join("data/ruble.csv"), ruble_csv).unwrap();
    fs::write(dir.join("data/urals.csv"), oil_csv).unwrap();
    fs::write(
        dir.join("data/lexicon.tsv"),
        "# test lexicon\nen\tsanctions\nen\truble\nen\tinflation\nen\tcentral bank\nen\tmoney\nen\tdollar\n\
         de\tRubel\nde\tSanktionen\nde\tZentralbank\nde\tZinssatz\n",
    )
    .unwrap();
    let config = format!(
        "posts = data/posts.csv\nlabels = data/labels.csv\nlexicon = data/lexicon.tsv\n\
         indicator.ruble = data/ruble.csv\nindicator.oil = data/urals.csv\nindicator.oil.label = Oil\n\
         window_start = 2018-09\nwindow_end = 2023-09\npages = {}\ntopics = {}\n\
         interruption = Interruption 1 @ 2021-03-11\ninterruption = Interruption 2 @ 2022-02-24\n\
         max_lag = 4\nirf_reps = 60\nirf_horizon = 8\nseed = {seed}\nout = out\n{extra_config}",
        PAGES.join(", "),
        TOPICS.join(", ")
    );
    let path = dir.join("study.conf");
    fs::write(&path, config).unwrap();
    path
}

fn day_blank(m: usize) -> bool {
    m.is_multiple_of(5)
}
