use midas_core::corpus::{
    filter_eligible, generate_synthetic, load_corpus, parse_csv, parse_jsonl, save_corpus, write_csv, write_jsonl,
    Continent, Corpus, CorpusFormat, EligibilityRule, Gender, Publication, Researcher, SyntheticConfig,
};
use proptest::prelude::*;

const REF: i32 = 2022;

fn publication_strategy() -> impl Strategy<Value = (i32, bool, Vec<u64>)> {
    (1990..=REF, any::<bool>(), prop::collection::vec(0u64..50, 1..8)).prop_map(|(year, core, incs)| {
        let max_len = (REF - year + 1) as usize;
        let series = incs
            .iter()
            .take(max_len)
            .scan(0u64, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        (year, core, series)
    })
}

fn researcher_strategy() -> impl Strategy<Value = (String, usize, usize, Vec<(i32, bool, Vec<u64>)>, bool)> {
    (
        "[A-Za-z ,\"']{1,12}",
        0usize..3,
        0usize..Continent::ALL.len(),
        prop::collection::vec(publication_strategy(), 0..6),
        any::<bool>(),
    )
}

fn build(specs: Vec<(String, usize, usize, Vec<(i32, bool, Vec<u64>)>, bool)>) -> Corpus {
    let genders = [Gender::Male, Gender::Female, Gender::Unknown];
    let researchers = specs
        .into_iter()
        .enumerate()
        .map(|(i, (name, g, c, pubs, awarded))| {
            let id = format!("r{i}");
            let publications: Vec<Publication> = pubs
                .into_iter()
                .enumerate()
                .map(|(j, (year, is_field_core, citation_series))| Publication {
                    pub_id: format!("{id}-p{j}"),
                    year,
                    is_field_core,
                    citation_series,
                })
                .collect();
            let award_years = match publications.iter().map(|p| p.year).min() {
                Some(first) if awarded => vec![first, REF],
                _ => vec![],
            };
            Researcher {
                researcher_id: id,
                name,
                gender: genders[g],
                continent: Continent::ALL[c],
                award_years,
                publications,
            }
        })
        .collect();
    Corpus::new(researchers, REF).unwrap()
}

proptest! {
    #[test]
    fn jsonl_and_csv_round_trip(specs in prop::collection::vec(researcher_strategy(), 0..6)) {
        let corpus = build(specs);
        let mut buf = Vec::new();
        write_jsonl(&corpus, &mut buf).unwrap();
        prop_assert_eq!(&parse_jsonl(buf.as_slice(), Some(REF)).unwrap(), &corpus);

        let mut buf = Vec::new();
        write_csv(&corpus, &mut buf).unwrap();
        prop_assert_eq!(&parse_csv(buf.as_slice(), Some(REF)).unwrap(), &corpus);
    }

    #[test]
    fn eligibility_filter_is_idempotent(
        specs in prop::collection::vec(researcher_strategy(), 0..10),
        min_pubs in 1usize..5,
        frac in 0.01f64..=1.0,
        span in 1i32..10,
    ) {
        let corpus = build(specs);
        let rule = EligibilityRule::new(min_pubs, frac, span).unwrap();
        let once = filter_eligible(&corpus, &rule);
        prop_assert_eq!(&filter_eligible(&once, &rule), &once);
        prop_assert!(once.researchers().iter().all(|r| rule.accepts(r)));
        prop_assert!(once.len() <= corpus.len());
    }
}

#[test]
fn synthetic_corpus_survives_files() {
    let c = generate_synthetic(
        &SyntheticConfig {
            researchers: 50,
            awardees: 5,
            ..Default::default()
        },
        17,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, fmt) in [("c.jsonl", CorpusFormat::Jsonl), ("c.csv", CorpusFormat::Csv)] {
        let path = dir.path().join(name);
        save_corpus(&c, &path, fmt).unwrap();
        assert_eq!(load_corpus(&path, fmt, Some(c.reference_year())).unwrap(), c);
    }
}
