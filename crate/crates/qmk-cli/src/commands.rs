//! Command implementations. Each returns the process exit code and the
//! report text: 0 when every check passed, 1 when a check failed.
//! Diagnostics (malformed input, wrong chart shape) are surfaced as errors
//! and exit with code 2.

use anyhow::{anyhow, bail, Result};

use qmk_core::algebroid::{verify_algebroid_axioms, AlgebroidChart};
use qmk_core::derived::{verify_two_layer, HigherAlgebroid};
use qmk_core::field::HomologyCheck;
use qmk_core::linfty::{linfty_brackets, recover_q, Lifting};
use qmk_core::report::{CheckLine, CheckReport};
use qmk_core::samples;
use qmk_core::twolayer::TwoLayerStructure;
use qmk_core::{check_f_related, VectorField};

use crate::document::ChartDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

fn ok(output: String) -> Outcome {
    Outcome {
        exit_code: 0,
        output,
    }
}

fn from_report(report: CheckReport, format: Format) -> Outcome {
    let output = match format {
        Format::Text => report.to_string(),
        Format::Structured => report.to_json(),
    };
    Outcome {
        exit_code: if report.all_passed() { 0 } else { 1 },
        output,
    }
}

fn algebroid_for(doc: &ChartDocument, field: &str) -> Result<HigherAlgebroid> {
    let q = doc.field(field).map_err(|e| anyhow!(e))?;
    HigherAlgebroid::new_unchecked(&doc.context, q.clone())
        .map_err(|e| anyhow!("field `{field}` is not usable here: {e}"))
}

pub fn check_q2(doc: &ChartDocument, field: &str, format: Format) -> Result<Outcome> {
    let q = doc.field(field).map_err(|e| anyhow!(e))?;
    if q.is_zero() {
        return Ok(render_q2(None, format));
    }
    let check = q.is_homological()?;
    match check {
        HomologyCheck::Homological => Ok(render_q2(None, format)),
        HomologyCheck::Failed {
            coordinate,
            residual,
        } => Ok(render_q2(
            Some((doc.context.name(coordinate).to_string(), residual.to_string())),
            format,
        )),
    }
}

fn render_q2(failure: Option<(String, String)>, format: Format) -> Outcome {
    match (&failure, format) {
        (None, Format::Text) => Outcome {
            exit_code: 0,
            output: "Q2 OK\n".to_string(),
        },
        (Some((witness, residual)), Format::Text) => Outcome {
            exit_code: 1,
            output: format!("Q2 FAIL witness={witness} residual={residual}\n"),
        },
        (None, Format::Structured) => Outcome {
            exit_code: 0,
            output: "{\n  \"q2\": \"ok\"\n}".to_string(),
        },
        (Some((witness, residual)), Format::Structured) => Outcome {
            exit_code: 1,
            output: serde_json::to_string_pretty(&serde_json::json!({
                "q2": "fail",
                "witness": witness,
                "residual": residual,
            }))
            .expect("json"),
        },
    }
}

pub fn two_layer(doc: &ChartDocument, field: &str, format: Format) -> Result<Outcome> {
    let a = algebroid_for(doc, field)?;
    let tables = TwoLayerStructure::from_algebroid(&a)?;
    Ok(ok(match format {
        Format::Text => tables.to_string(),
        Format::Structured => tables.to_json(),
    }))
}

pub fn verify_identities(
    doc: &ChartDocument,
    field: &str,
    seed: u64,
    format: Format,
) -> Result<Outcome> {
    let a = algebroid_for(doc, field)?;
    let mut tuples = samples::basis_tuples(&a)?;
    tuples.extend(samples::random_tuples(&a, seed, 50)?);
    let report = verify_two_layer(&a, &tuples)?;
    Ok(from_report(report, format))
}

pub fn axioms(doc: &ChartDocument, field: &str, format: Format) -> Result<Outcome> {
    if doc.context.degree().unwrap_or(0) > 1 || doc.context.has_negative_weights() {
        bail!("`axioms` requires a chart whose coordinates have weights 0 and 1 only");
    }
    let q = doc.field(field).map_err(|e| anyhow!(e))?;
    let chart = AlgebroidChart::new(&doc.context, q.clone())
        .map_err(|e| anyhow!("field `{field}` is not usable here: {e}"))?;
    let report = verify_algebroid_axioms(&chart)?;
    Ok(from_report(report, format))
}

pub fn morphism(
    doc: &ChartDocument,
    map: &str,
    q1: &str,
    q2: &str,
    format: Format,
) -> Result<Outcome> {
    let sigma = doc.map(map).map_err(|e| anyhow!(e))?;
    let first = doc.field(q1).map_err(|e| anyhow!(e))?;
    let second = doc.field(q2).map_err(|e| anyhow!(e))?;
    let result = check_f_related(sigma, first, second)?;
    let mut report = CheckReport::new();
    for (id, residual) in &result.residuals {
        let name = doc.context.name(*id);
        if residual.is_zero() {
            report.push(CheckLine::ok("MORPHISM", name));
        } else {
            report.push(CheckLine::fail(
                "MORPHISM",
                name,
                format!("map={map}"),
                residual.to_string(),
            ));
        }
    }
    Ok(from_report(report, format))
}

pub fn linfty(doc: &ChartDocument, field: &str, format: Format) -> Result<Outcome> {
    let a = algebroid_for(doc, field)?;
    let structure = linfty_brackets(&a, &Lifting::default_for(&doc.context))?;
    let output = match format {
        Format::Text => structure.to_string(),
        Format::Structured => {
            let mut entries = Vec::new();
            for (k, table) in structure.tables.iter().enumerate() {
                for (tuple, value) in table {
                    entries.push(serde_json::json!({
                        "arity": k + 1,
                        "arguments": tuple
                            .iter()
                            .map(|c| doc.context.name(*c))
                            .collect::<Vec<_>>(),
                        "value": value.render(&doc.context),
                    }));
                }
            }
            serde_json::to_string_pretty(&serde_json::json!({
                "lifting": structure.lifting,
                "brackets": entries,
            }))
            .expect("json")
        }
    };
    Ok(ok(output))
}

pub fn recover(tables_text: &str, format: Format) -> Result<Outcome> {
    let tables = TwoLayerStructure::from_json(tables_text)?;
    let q = recover_q(&tables)?;
    Ok(ok(render_field("Q", &q, format)))
}

fn render_field(name: &str, field: &VectorField, format: Format) -> String {
    match format {
        Format::Text => format!("field {name} {field}\n"),
        Format::Structured => {
            let ctx = field.context();
            let components: serde_json::Map<String, serde_json::Value> = field
                .components()
                .map(|(id, p)| (ctx.name(id).to_string(), p.to_string().into()))
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({ "field": components }))
                .expect("json")
        }
    }
}
