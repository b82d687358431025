//! On-disk formats: instance files, dialogue JSONL, prediction JSONL,
//! ground-truth maps, and evaluation reports.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use orforge_core::dialogue::DialogueRecord;
use orforge_core::instance::ProblemInstance;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Reads one tagged instance file (`{"type": ..., "data": {...}}`).
pub fn read_instance(path: &Path) -> anyhow::Result<ProblemInstance> {
    read_json(path)
}

pub fn write_instance(path: &Path, instance: &ProblemInstance) -> anyhow::Result<()> {
    write_json(path, instance)
}

/// Reads any pretty- or compact-JSON file into a typed value.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

/// Writes a value as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Streams dialogue records to a JSONL file one line at a time, so builds
/// never hold a whole dataset in memory.
pub struct JsonlWriter {
    inner: BufWriter<File>,
    lines: u64,
}

impl JsonlWriter {
    pub fn create(path: &Path) -> anyhow::Result<Self> {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        Ok(JsonlWriter {
            inner: BufWriter::new(file),
            lines: 0,
        })
    }

    pub fn write_record(&mut self, record: &DialogueRecord) -> anyhow::Result<()> {
        self.inner.write_all(record.to_json_line().as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.lines += 1;
        Ok(())
    }

    pub fn lines(&self) -> u64 {
        self.lines
    }

    pub fn finish(mut self) -> anyhow::Result<u64> {
        self.inner.flush()?;
        Ok(self.lines)
    }
}

/// Calls `visit` on each record of a dialogue JSONL file without loading
/// the whole file. Parse failures name the offending line.
pub fn visit_dialogue_records(
    path: &Path,
    mut visit: impl FnMut(u64, DialogueRecord) -> anyhow::Result<()>,
) -> anyhow::Result<u64> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut count = 0u64;
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line_number = index as u64 + 1;
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = DialogueRecord::from_json_line(&line)
            .with_context(|| format!("{}:{line_number}: bad dialogue record", path.display()))?;
        visit(line_number, record)?;
        count += 1;
    }
    Ok(count)
}

pub fn read_dialogue_records(path: &Path) -> anyhow::Result<Vec<DialogueRecord>> {
    let mut records = Vec::new();
    visit_dialogue_records(path, |_, record| {
        records.push(record);
        Ok(())
    })?;
    Ok(records)
}

#[derive(Serialize, Deserialize)]
struct PredictionLine {
    id: String,
    output: String,
}

/// Reads a predictions JSONL file (`{"id": ..., "output": ...}` per line)
/// in file order.
pub fn read_predictions(path: &Path) -> anyhow::Result<Vec<(String, String)>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut predictions = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: PredictionLine = serde_json::from_str(&line).with_context(|| {
            format!("{}:{}: bad prediction line", path.display(), index + 1)
        })?;
        predictions.push((parsed.id, parsed.output));
    }
    Ok(predictions)
}

pub fn write_predictions(path: &Path, predictions: &[(String, String)]) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    for (id, output) in predictions {
        let line = serde_json::to_string(&PredictionLine {
            id: id.clone(),
            output: output.clone(),
        })?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a ground-truth file: a JSON object mapping instance ids to their
/// acceptable objective values.
pub fn read_ground_truth(path: &Path) -> anyhow::Result<BTreeMap<String, Vec<f64>>> {
    read_json(path)
}

pub fn write_ground_truth(
    path: &Path,
    truth: &BTreeMap<String, Vec<f64>>,
) -> anyhow::Result<()> {
    write_json(path, truth)
}
