//! Report model and its CSV / JSON encodings.
//!
//! CSV layout: `#`-prefixed metadata lines (`schema`, `version`, `config`,
//! optional `adequacy`) followed by a header row and one row per tracked
//! state and step. Floats use 17 significant digits in lowercase scientific
//! notation. Wall time is reported in JSON only, so identical runs give
//! identical CSV bytes.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use spuridium_core::diagnostics::{classify, ClassifyConfig, DeltaRecord, Trend, Verdict};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const REPORT_SCHEMA: &str = "spuridium-report/1";
pub const SUMRULE_SCHEMA: &str = "spuridium-sumrule/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const REPORT_COLUMNS: [&str; 9] =
    ["track_id", "iteration", "energy", "delta", "delta_rel", "op_norm", "trend", "verdict", "forbidden_fraction"];
const SUMRULE_COLUMNS: [&str; 3] = ["n_basis", "trk_sum", "deviation"];

fn as_text<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

fn from_text<'de, T, D>(d: D) -> Result<T, D::Error>
where
    T: FromStr<Err = String>,
    D: Deserializer<'de>,
{
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}

fn opt_as_text<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

fn opt_from_text<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
where
    T: FromStr<Err = String>,
    D: Deserializer<'de>,
{
    Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub track_id: usize,
    /// Basis size (dense scans) or Lanczos step.
    pub iteration: usize,
    pub energy: f64,
    pub delta: f64,
    pub delta_rel: f64,
    pub op_norm: f64,
    #[serde(serialize_with = "opt_as_text", deserialize_with = "opt_from_text")]
    pub trend: Option<Trend>,
    #[serde(serialize_with = "as_text", deserialize_with = "from_text")]
    pub verdict: Verdict,
    pub forbidden_fraction: Option<f64>,
}

impl Row {
    pub fn record(&self) -> DeltaRecord {
        DeltaRecord::new(Some(self.track_id), self.iteration, self.energy, self.delta, self.op_norm)
    }
}

/// Basis adequacy from the dipole sum rule at the largest basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adequacy {
    pub n_basis: usize,
    pub trk_sum: f64,
    pub trk_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub config: RunConfig,
    pub wall_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub metadata: Metadata,
    pub adequacy: Option<Adequacy>,
    pub rows: Vec<Row>,
}

/// Group records by track, classify, and emit rows sorted by
/// `(track_id, iteration)`. `forbidden` maps `(track_id, iteration)` to the
/// forbidden-region fraction where one was computed.
pub fn classified_rows(
    records: &[DeltaRecord],
    forbidden: &BTreeMap<(usize, usize), f64>,
    config: &ClassifyConfig,
) -> Vec<Row> {
    let mut by_track: BTreeMap<usize, Vec<DeltaRecord>> = BTreeMap::new();
    for r in records {
        by_track.entry(r.track_id.expect("records are tracked")).or_default().push(*r);
    }
    for series in by_track.values_mut() {
        series.sort_by_key(|r| r.iteration);
    }
    let ids: Vec<usize> = by_track.keys().copied().collect();
    let series: Vec<Vec<DeltaRecord>> = by_track.into_values().collect();
    let verdicts = classify(&series, config);

    let mut rows = Vec::with_capacity(records.len());
    for ((id, records), c) in ids.iter().zip(&series).zip(&verdicts) {
        for r in records {
            rows.push(Row {
                track_id: *id,
                iteration: r.iteration,
                energy: r.value,
                delta: r.delta,
                delta_rel: r.delta_rel,
                op_norm: r.op_norm,
                trend: c.trend,
                verdict: c.verdict,
                forbidden_fraction: forbidden.get(&(*id, r.iteration)).copied(),
            });
        }
    }
    rows
}

impl Report {
    pub fn new(config: RunConfig, adequacy: Option<Adequacy>, rows: Vec<Row>) -> Self {
        Self {
            schema: REPORT_SCHEMA.into(),
            metadata: Metadata { version: VERSION.into(), config, wall_time_seconds: None },
            adequacy,
            rows,
        }
    }

    /// Final row of each track, in track order.
    pub fn final_rows(&self) -> Vec<&Row> {
        let mut last: BTreeMap<usize, &Row> = BTreeMap::new();
        for row in &self.rows {
            last.insert(row.track_id, row);
        }
        last.into_values().collect()
    }

    pub fn encode(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema={REPORT_SCHEMA}\n# version={}\n", self.metadata.version);
        out.push_str(&format!("# config={}\n", self.metadata.config.to_json()));
        if let Some(a) = &self.adequacy {
            out.push_str(&format!("# adequacy={}\n", serde_json::to_string(a).expect("adequacy serializes")));
        }
        let rows = self.rows.iter().map(|r| {
            vec![
                r.track_id.to_string(),
                r.iteration.to_string(),
                float(r.energy),
                float(r.delta),
                float(r.delta_rel),
                float(r.op_norm),
                r.trend.map(|t| t.to_string()).unwrap_or_default(),
                r.verdict.to_string(),
                r.forbidden_fraction.map(float).unwrap_or_default(),
            ]
        });
        out.push_str(&csv_table(&REPORT_COLUMNS, rows));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let (meta, body) = split_metadata(text);
        let schema = meta.get("schema").copied().unwrap_or_default();
        if schema != REPORT_SCHEMA {
            return Err(CliError::Config(format!("unsupported report schema {schema:?}")));
        }
        let config = RunConfig::from_json(meta.get("config").copied().unwrap_or_default())?;
        let adequacy = meta
            .get("adequacy")
            .map(|a| serde_json::from_str(a).map_err(|e| CliError::Config(format!("adequacy: {e}"))))
            .transpose()?;
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let headers = reader.headers().map_err(parse_error)?.clone();
        if headers.iter().ne(REPORT_COLUMNS) {
            return Err(CliError::Config(format!("unexpected columns: {headers:?}")));
        }
        let rows = reader.deserialize().collect::<Result<Vec<Row>, _>>().map_err(parse_error)?;
        let version = meta.get("version").copied().unwrap_or_default().to_string();
        Ok(Self {
            schema: schema.to_string(),
            metadata: Metadata { version, config, wall_time_seconds: None },
            adequacy,
            rows,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let report: Self = serde_json::from_str(text).map_err(|e| CliError::Config(format!("report: {e}")))?;
        if report.schema != REPORT_SCHEMA {
            return Err(CliError::Config(format!("unsupported report schema {:?}", report.schema)));
        }
        Ok(report)
    }

    /// Parse either encoding, recognising JSON by its leading brace.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRuleRow {
    pub n_basis: usize,
    pub trk_sum: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub rows: Vec<SumRuleRow>,
}

impl SumRuleReport {
    pub fn new(config: RunConfig, rows: Vec<SumRuleRow>) -> Self {
        Self { schema: SUMRULE_SCHEMA.into(), version: VERSION.into(), config, rows }
    }

    pub fn encode(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = format!("# schema={SUMRULE_SCHEMA}\n# version={}\n", self.version);
                out.push_str(&format!("# config={}\n", self.config.to_json()));
                let rows = self
                    .rows
                    .iter()
                    .map(|r| vec![r.n_basis.to_string(), float(r.trk_sum), float(r.deviation)]);
                out.push_str(&csv_table(&SUMRULE_COLUMNS, rows));
                out
            }
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }
}

/// 17 significant digits, lowercase scientific.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_table(columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(columns).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn split_metadata(text: &str) -> (BTreeMap<&str, &str>, &str) {
    let mut meta = BTreeMap::new();
    let mut rest = text;
    while let Some(line) = rest.strip_prefix('#') {
        let (line, tail) = line.split_once('\n').unwrap_or((line, ""));
        if let Some((key, value)) = line.trim().split_once('=') {
            meta.insert(key.trim(), value.trim());
        }
        rest = tail;
    }
    (meta, rest)
}

fn parse_error(e: csv::Error) -> CliError {
    CliError::Config(format!("report: {e}"))
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        std::io::stdout().write_all(contents.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
