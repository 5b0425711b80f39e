use std::collections::HashMap;
use std::fs::{self, File};

use serde::{Deserialize, Serialize};

use respeak_core::ner::{ner_accuracy, parse_ner_annotations, reduction_rate};
use respeak_core::stats::backward_eliminate;
use respeak_core::{fixtures, DataTable, Error, LinearEquation, RegressionModel};

use crate::args::{FixtureArgs, Format, NerArgs, PredictArgs, RegressArgs};
use crate::error::{CliError, CliResult};
use crate::output::{cell, Sink};

#[derive(Serialize)]
struct NerRow {
    record: &'static str,
    row: usize,
    tokens: u64,
    edition_errors: f64,
    recognition_errors: f64,
    ner: f64,
    red: Option<f64>,
}

pub fn ner(args: &NerArgs, format: Format, sink: &mut Sink) -> CliResult<()> {
    let file = File::open(&args.annotations).map_err(|e| CliError::io(&args.annotations, e))?;
    let records = parse_ner_annotations(file)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.annotations.display())))?;
    let rows = records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(NerRow {
                record: "ner",
                row: i + 1,
                tokens: r.tokens,
                edition_errors: r.edition_errors.weighted(),
                recognition_errors: r.recognition_errors,
                ner: ner_accuracy(r)?,
                red: r.lengths.map(|(o, s)| reduction_rate(o, s)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    match format {
        Format::Jsonl => {
            for r in &rows {
                sink.record(r)?;
            }
        }
        Format::Text => {
            sink.line(format!(
                "{:<6}{:>8}{:>8}{:>8}{:>9}{:>9}",
                "ROW", "N", "E", "R", "NER", "RED."
            ))?;
            for r in &rows {
                sink.line(format!(
                    "{:<6}{:>8}{}{}{}{}",
                    r.row,
                    r.tokens,
                    cell(Some(r.edition_errors), 8, 2),
                    cell(Some(r.recognition_errors), 8, 2),
                    cell(Some(r.ner), 9, 2),
                    cell(r.red, 9, 2)
                ))?;
            }
            if !rows.is_empty() {
                let mean = rows.iter().map(|r| r.ner).sum::<f64>() / rows.len() as f64;
                sink.line(format!("# {} rows, mean NER {mean:.2}", rows.len()))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct StageRecord {
    record: String,
    step: usize,
    alpha: f64,
    removed: Option<String>,
    model: RegressionModel,
}

pub fn regress(args: &RegressArgs, format: Format, sink: &mut Sink) -> CliResult<()> {
    let table = match (&args.fixture, &args.csv) {
        (Some(name), _) => fixtures::table(name.as_str())?,
        (None, Some(path)) => {
            let file = File::open(path).map_err(|e| CliError::io(path, e))?;
            DataTable::from_csv(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(CliError::Input("give a CSV file or --fixture".into())),
    };
    table.column_index(&args.response)?;
    let candidates: Vec<String> = if args.candidates.is_empty() {
        let metrics: Vec<String> = fixtures::METRIC_COLUMNS
            .iter()
            .filter(|c| table.column_index(c).is_ok())
            .map(|c| c.to_string())
            .collect();
        if metrics.is_empty() {
            table
                .columns()
                .iter()
                .filter(|c| **c != args.response)
                .cloned()
                .collect()
        } else {
            metrics
        }
    } else {
        args.candidates.iter().map(|c| c.trim().to_owned()).collect()
    };
    let names: Vec<&str> = candidates.iter().map(String::as_str).collect();
    let trace = backward_eliminate(&table, &args.response, &names, args.alpha)?;
    for step in &trace.steps {
        match format {
            Format::Jsonl => sink.record(&StageRecord {
                record: "stage".into(),
                step: step.step,
                alpha: trace.alpha,
                removed: step.removed.clone(),
                model: step.model.clone(),
            })?,
            Format::Text => write_stage(sink, step.step, &step.model, step.removed.as_deref())?,
        }
    }
    if format == Format::Text {
        sink.line(format!("Final: {:.3}", trace.final_model().equation()))?;
    }
    Ok(())
}

fn write_stage(sink: &mut Sink, step: usize, m: &RegressionModel, removed: Option<&str>) -> CliResult<()> {
    sink.line(format!(
        "Model {step}: {} on {} (n = {}, R-square {:.3}, adjusted R-square {:.3})",
        m.response,
        m.predictors.join(", "),
        m.n,
        m.r2,
        m.adjusted_r2
    ))?;
    sink.line(format!(
        "  {:<12}{:>10}{:>12}{:>9}{:>9}{:>8}",
        "", "B", "Std. Error", "Beta", "t", "Sig."
    ))?;
    let names = std::iter::once("(Constant)").chain(m.predictors.iter().map(String::as_str));
    for (j, name) in names.enumerate() {
        let beta = (j > 0).then(|| m.standardized_betas[j - 1]);
        sink.line(format!(
            "  {name:<12}{}{}{}{}{}",
            cell(Some(m.coefficients[j]), 10, 3),
            cell(Some(m.std_errors[j]), 12, 3),
            cell(beta, 9, 3),
            cell(Some(m.t_stats[j]), 9, 3),
            cell(Some(m.p_values[j]), 8, 3)
        ))?;
    }
    match removed {
        Some(name) => sink.line(format!("  removed {name}\n")),
        None => sink.line(""),
    }
}

#[derive(Serialize)]
struct PredictionRecord {
    record: &'static str,
    equation: LinearEquation,
    value: f64,
}

fn load_model(path: &std::path::Path) -> CliResult<RegressionModel> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut last = None;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let value: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if value.get("record").and_then(|r| r.as_str()) == Some("stage") {
            let stage: StageRecord = serde_json::from_value(value)
                .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
            last = Some(stage.model);
        }
    }
    last.ok_or_else(|| CliError::Input(format!("{}: no model stage records", path.display())))
}

pub fn predict(args: &PredictArgs, format: Format, sink: &mut Sink) -> CliResult<()> {
    let equation = match &args.model {
        Some(path) => load_model(path)?.equation(),
        None => LinearEquation::reference_ner(),
    };
    let scores: HashMap<String, f64> = args.scores.iter().cloned().collect();
    let value = equation.predict(&scores)?;
    match format {
        Format::Jsonl => sink.record(&PredictionRecord {
            record: "prediction",
            equation,
            value,
        }),
        Format::Text => {
            sink.line(format!("{equation}"))?;
            sink.line(format!("{value:.4}"))
        }
    }
}

pub fn fixture(args: &FixtureArgs, sink: &mut Sink) -> CliResult<()> {
    let text = fixtures::csv(args.fixture.as_str())?;
    sink.line(text.trim_end_matches('\n'))
}
