use std::time::Duration;

use lgx_core::concept::{ClassId, Vocabulary};
use lgx_core::dataset::{write_jsonl, Dataset, InstanceRecord};
use lgx_core::oracle::{ExternalOracle, OracleError};
use lgx_core::search::{beam_add, SearchConfig};
use lgx_core::{ConceptSet, Oracle, ScoreQuery};

const ECHO: &str = env!("CARGO_BIN_EXE_lgx-echo-oracle");

struct Fixture {
    _dir: tempfile::TempDir,
    path: String,
    dataset: Dataset,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.jsonl");
    let records = vec![
        InstanceRecord {
            id: "img1".into(),
            objects: vec!["bed".into(), "wall".into()],
            predicted_class: "Bedroom".into(),
            true_class: None,
            scores: None,
        },
        InstanceRecord {
            id: "img2".into(),
            objects: vec!["bed".into(), "wall".into(), "lamp".into(), "rug".into()],
            predicted_class: "Bedroom".into(),
            true_class: None,
            scores: None,
        },
    ];
    write_jsonl(&path, records.clone()).unwrap();
    let vocab = Vocabulary::new(["bed", "wall", "lamp", "rug"]).unwrap();
    let dataset = Dataset::from_records(vocab, records, &["Street".into()]).unwrap();
    Fixture { path: path.to_string_lossy().into_owned(), dataset, _dir: dir }
}

fn spawn(f: &Fixture, mode: &str, timeout: Duration) -> ExternalOracle {
    ExternalOracle::spawn(
        ECHO,
        &[f.path.clone(), mode.to_string()],
        f.dataset.vocabulary.clone(),
        f.dataset.classes.clone(),
        timeout,
    )
    .unwrap()
}

fn query(f: &Fixture, id: &str, names: &[&str]) -> ScoreQuery {
    let x = f.dataset.find(id).unwrap();
    ScoreQuery::new(x, ClassId(0), f.dataset.vocabulary.set_from_names(names).unwrap()).unwrap()
}

#[test]
fn half_the_objects_scores_half() {
    let f = fixture();
    let o = spawn(&f, "normal", Duration::from_secs(10));
    assert_eq!(o.score(&query(&f, "img1", &["bed"])).unwrap(), 0.5);
    assert_eq!(o.score(&query(&f, "img1", &[])).unwrap(), 0.0);
}

#[test]
fn batch_round_trip_preserves_order() {
    let f = fixture();
    let o = spawn(&f, "normal", Duration::from_secs(10));
    let qs = vec![
        query(&f, "img2", &["bed"]),
        query(&f, "img2", &["bed", "wall", "lamp"]),
        query(&f, "img1", &["bed", "wall"]),
    ];
    assert_eq!(o.score_batch(&qs).unwrap(), vec![0.25, 0.75, 1.0]);
}

#[test]
fn beam_search_through_the_adapter() {
    // with a 0.5 ratio on 4 equal objects, every pair is minimally sufficient
    let f = fixture();
    let o = spawn(&f, "normal", Duration::from_secs(10));
    let x = f.dataset.find("img2").unwrap();
    let cfg = SearchConfig { tau_p: 0.5, max_successors: None, beam_width: 16, ..SearchConfig::default() };
    let e = beam_add(&o, x, ClassId(0), &cfg).unwrap();
    assert_eq!(e.mscxs.len(), 6);
    assert!(e.sets().all(|s: &ConceptSet| s.len() == 2));
}

#[test]
fn adapter_errors_are_reported_and_recoverable() {
    let f = fixture();
    let o = spawn(&f, "error", Duration::from_secs(10));
    assert!(matches!(o.score(&query(&f, "img1", &["bed"])), Err(OracleError::Adapter(_))));
    assert!(matches!(o.score(&query(&f, "img1", &["bed"])), Err(OracleError::Adapter(_))));
}

#[test]
fn unknown_instance_is_an_adapter_error() {
    let f = fixture();
    let o = spawn(&f, "normal", Duration::from_secs(10));
    let bogus =
        lgx_core::Instance::new("nope", f.dataset.vocabulary.set_from_names(&["bed"]).unwrap(), ClassId(0), None, None)
            .unwrap();
    let q = ScoreQuery::new(&bogus, ClassId(0), bogus.objects().clone()).unwrap();
    assert!(matches!(o.score(&q), Err(OracleError::Adapter(_))));
    assert_eq!(o.score(&query(&f, "img1", &["bed"])).unwrap(), 0.5);
}

#[test]
fn missing_score_breaks_the_oracle() {
    let f = fixture();
    let o = spawn(&f, "missing-score", Duration::from_secs(10));
    assert!(matches!(o.score(&query(&f, "img1", &["bed"])), Err(OracleError::Protocol(_))));
    assert!(matches!(o.score(&query(&f, "img1", &["bed"])), Err(OracleError::Protocol(_))));
}

#[test]
fn slow_adapter_times_out() {
    let f = fixture();
    let o = spawn(&f, "sleep", Duration::from_millis(200));
    assert!(matches!(o.score(&query(&f, "img1", &["bed"])), Err(OracleError::Timeout(_))));
}

#[test]
fn dead_adapter_is_detected() {
    let f = fixture();
    let o = spawn(&f, "die", Duration::from_secs(10));
    let err = o.score(&query(&f, "img1", &["bed"])).unwrap_err();
    assert!(matches!(err, OracleError::ProcessExited | OracleError::Io(_)), "{err:?}");
}
