//! Datasets and their on-disk formats.
//!
//! The vocabulary file is a JSON array of concept names (id = position). The
//! dataset file is JSON lines:
//!
//! ```text
//! {"id":"img1","objects":["bed","wall"],"predicted_class":"Bedroom","true_class":null,"scores":{"Bedroom":0.9}}
//! ```
//!
//! Class ids are assigned in ascending name order over every class name seen.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::concept::{ClassId, ClassLabels, Vocabulary};
use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub vocabulary: Vocabulary,
    pub classes: ClassLabels,
    pub instances: Vec<Instance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub objects: Vec<String>,
    pub predicted_class: String,
    #[serde(default)]
    pub true_class: Option<String>,
    #[serde(default)]
    pub scores: Option<BTreeMap<String, f64>>,
}

impl Dataset {
    pub fn find(&self, id: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.id() == id)
    }

    /// Converts name-based records, validating every name against the
    /// vocabulary. `extra_classes` joins the class table (e.g. classes that
    /// only a model knows about).
    pub fn from_records(
        vocabulary: Vocabulary,
        records: Vec<InstanceRecord>,
        extra_classes: &[String],
    ) -> Result<Self> {
        let mut names: BTreeSet<String> = extra_classes.iter().cloned().collect();
        for r in &records {
            names.insert(r.predicted_class.clone());
            names.extend(r.true_class.iter().cloned());
            if let Some(scores) = &r.scores {
                names.extend(scores.keys().cloned());
            }
        }
        let classes = ClassLabels::new(names);
        let mut seen = BTreeSet::new();
        let mut instances = Vec::with_capacity(records.len());
        for r in records {
            if !seen.insert(r.id.clone()) {
                return Err(Error::InvalidInstance { id: r.id, reason: "duplicate instance id".into() });
            }
            let objects = vocabulary.set_from_names(&r.objects)?;
            let predicted = classes.id(&r.predicted_class)?;
            let true_class = r.true_class.as_deref().map(|c| classes.id(c)).transpose()?;
            let scores = r
                .scores
                .map(|m| {
                    m.into_iter().map(|(k, v)| Ok((classes.id(&k)?, v))).collect::<Result<BTreeMap<ClassId, f64>>>()
                })
                .transpose()?;
            instances.push(Instance::new(r.id, objects, predicted, true_class, scores)?);
        }
        Ok(Dataset { vocabulary, classes, instances })
    }

    pub fn to_records(&self) -> Vec<InstanceRecord> {
        self.instances
            .iter()
            .map(|i| InstanceRecord {
                id: i.id().to_string(),
                objects: self.vocabulary.names_of(i.objects()),
                predicted_class: self.classes.name(i.predicted_class()).to_string(),
                true_class: i.true_class().map(|c| self.classes.name(c).to_string()),
                scores: i
                    .reference_scores()
                    .map(|m| m.iter().map(|(&c, &s)| (self.classes.name(c).to_string(), s)).collect()),
            })
            .collect()
    }

    pub fn load(dataset: &Path, vocabulary: &Path, extra_classes: &[String]) -> Result<Self> {
        let vocab = read_vocabulary(vocabulary)?;
        let records = read_jsonl::<InstanceRecord>(dataset)?;
        Dataset::from_records(vocab, records, extra_classes)
    }

    pub fn save(&self, dataset: &Path, vocabulary: &Path) -> Result<()> {
        write_json(vocabulary, &self.vocabulary.names())?;
        write_jsonl(dataset, self.to_records())
    }
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let names: Vec<String> = serde_json::from_str(&text).map_err(|e| Error::parse(path, e.line(), e))?;
    Vocabulary::new(names)
}

/// Reads a JSON-lines file, skipping blank lines.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::parse(path, n + 1, e))?);
    }
    Ok(out)
}

pub fn write_jsonl<T, I>(path: &Path, items: I) -> Result<()>
where
    T: Serialize,
    I: IntoIterator<Item = T>,
{
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e.line(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, objects: &[&str], pred: &str) -> InstanceRecord {
        InstanceRecord {
            id: id.into(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            predicted_class: pred.into(),
            true_class: None,
            scores: None,
        }
    }

    #[test]
    fn records_resolve_names() {
        let vocab = Vocabulary::new(["bed", "wall", "lamp"]).unwrap();
        let ds = Dataset::from_records(
            vocab,
            vec![record("a", &["wall", "bed", "bed"], "Bedroom"), record("b", &["lamp"], "Attic")],
            &[],
        )
        .unwrap();
        assert_eq!(ds.classes.names(), &["Attic".to_string(), "Bedroom".to_string()]);
        assert_eq!(ds.instances[0].objects().len(), 2);
        assert_eq!(ds.instances[0].predicted_class(), ClassId(1));
        assert_eq!(ds.to_records()[0].objects, vec!["bed".to_string(), "wall".to_string()]);
    }

    #[test]
    fn unknown_concept_and_duplicate_ids_rejected() {
        let vocab = Vocabulary::new(["bed"]).unwrap();
        assert!(matches!(
            Dataset::from_records(vocab.clone(), vec![record("a", &["sofa"], "X")], &[]),
            Err(Error::UnknownConcept(_))
        ));
        assert!(
            Dataset::from_records(vocab, vec![record("a", &["bed"], "X"), record("a", &["bed"], "X")], &[]).is_err()
        );
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let vocab = Vocabulary::new(["bed", "wall"]).unwrap();
        let mut r = record("a", &["bed", "wall"], "Bedroom");
        r.scores = Some(BTreeMap::from([("Bedroom".into(), 0.75), ("Street".into(), 0.25)]));
        r.true_class = Some("Street".into());
        let ds = Dataset::from_records(vocab, vec![r], &[]).unwrap();
        let (d, v) = (dir.path().join("d.jsonl"), dir.path().join("v.json"));
        ds.save(&d, &v).unwrap();
        assert_eq!(Dataset::load(&d, &v, &[]).unwrap(), ds);
        let line = fs::read_to_string(&d).unwrap();
        assert_eq!(
            line,
            "{\"id\":\"a\",\"objects\":[\"bed\",\"wall\"],\"predicted_class\":\"Bedroom\",\"true_class\":\"Street\",\"scores\":{\"Bedroom\":0.75,\"Street\":0.25}}\n"
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.jsonl");
        fs::write(&p, "{\"id\":\"a\",\"objects\":[],\"predicted_class\":\"X\"}\n\nnot json\n").unwrap();
        match read_jsonl::<InstanceRecord>(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
