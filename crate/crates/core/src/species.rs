//! Species catalogs: the bridge from user-supplied ground-state energies to
//! [`DomainSpec`].
//!
//! Two encodings are supported, JSON (`{"species": [...]}`) and CSV with the
//! fixed header
//!
//! ```text
//! label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units
//! ```
//!
//! A record carries either absolute sector energies (`mode = absolute`) or
//! the neutral energy with `I^q` and `A^q` (`mode = descriptor`). Cells of the
//! unused mode are empty (CSV) or `null` (JSON). Units are an uninterpreted
//! tag defaulting to `eV`.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CatalogError, DomainError};
use crate::simplex::DomainSpec;

pub const CSV_HEADER: [&str; 10] = [
    "label",
    "n_electrons",
    "q",
    "mode",
    "e_neutral",
    "e_anion",
    "e_cation",
    "i_q",
    "a_q",
    "units",
];

pub const DEFAULT_UNITS: &str = "eV";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    Absolute,
    Descriptor,
}

impl EnergyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyMode::Absolute => "absolute",
            EnergyMode::Descriptor => "descriptor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energies {
    Absolute {
        e_neutral: f64,
        e_anion: f64,
        e_cation: f64,
    },
    Descriptor {
        e_neutral: f64,
        i_q: f64,
        a_q: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRecord {
    pub label: String,
    pub n_electrons: u32,
    pub q: u32,
    pub energies: Energies,
    pub units: String,
}

impl SpeciesRecord {
    pub fn absolute(
        label: impl Into<String>,
        n_electrons: u32,
        q: u32,
        e_neutral: f64,
        e_anion: f64,
        e_cation: f64,
    ) -> Self {
        Self {
            label: label.into(),
            n_electrons,
            q,
            energies: Energies::Absolute {
                e_neutral,
                e_anion,
                e_cation,
            },
            units: DEFAULT_UNITS.to_string(),
        }
    }

    pub fn descriptor(
        label: impl Into<String>,
        n_electrons: u32,
        q: u32,
        e_neutral: f64,
        i_q: f64,
        a_q: f64,
    ) -> Self {
        Self {
            label: label.into(),
            n_electrons,
            q,
            energies: Energies::Descriptor { e_neutral, i_q, a_q },
            units: DEFAULT_UNITS.to_string(),
        }
    }

    pub fn mode(&self) -> EnergyMode {
        match self.energies {
            Energies::Absolute { .. } => EnergyMode::Absolute,
            Energies::Descriptor { .. } => EnergyMode::Descriptor,
        }
    }

    /// Absolute-mode record of an existing domain.
    pub fn from_domain(domain: &DomainSpec) -> Self {
        Self::absolute(
            domain.label(),
            domain.n_electrons(),
            domain.q(),
            domain.e_neutral(),
            domain.e_anion(),
            domain.e_cation(),
        )
    }
}

/// Reconstructs the three sector energies and validates the domain.
/// Descriptor mode inverts `I^q = E(N-q) - E(N)` and `A^q = E(N) - E(N+q)`.
pub fn to_domain(record: &SpeciesRecord) -> Result<DomainSpec, DomainError> {
    let (e_neutral, e_anion, e_cation) = match record.energies {
        Energies::Absolute {
            e_neutral,
            e_anion,
            e_cation,
        } => (e_neutral, e_anion, e_cation),
        Energies::Descriptor { e_neutral, i_q, a_q } => {
            if i_q.is_nan() || i_q <= 0.0 {
                return Err(DomainError::NonPositiveIonization {
                    label: record.label.clone(),
                    i_q,
                });
            }
            (e_neutral, e_neutral - a_q, e_neutral + i_q)
        }
    };
    DomainSpec::new(
        record.label.clone(),
        record.n_electrons,
        record.q,
        e_neutral,
        e_anion,
        e_cation,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFormat {
    Json,
    Csv,
}

impl CatalogFormat {
    /// Guesses the format from a file extension; anything but `.csv` is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CatalogFormat::Csv,
            _ => CatalogFormat::Json,
        }
    }
}

impl FromStr for CatalogFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(CatalogFormat::Json),
            "csv" => Ok(CatalogFormat::Csv),
            other => Err(format!("unknown catalog format `{other}` (expected json or csv)")),
        }
    }
}

impl fmt::Display for CatalogFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogFormat::Json => "json",
            CatalogFormat::Csv => "csv",
        })
    }
}

/// Flat record layout shared by both encodings; field order is the CSV
/// column order.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    label: String,
    n_electrons: u32,
    q: u32,
    mode: String,
    e_neutral: Option<f64>,
    e_anion: Option<f64>,
    e_cation: Option<f64>,
    i_q: Option<f64>,
    a_q: Option<f64>,
    units: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonCatalog {
    species: Vec<RawRecord>,
}

impl From<&SpeciesRecord> for RawRecord {
    fn from(r: &SpeciesRecord) -> Self {
        let mut raw = RawRecord {
            label: r.label.clone(),
            n_electrons: r.n_electrons,
            q: r.q,
            mode: r.mode().as_str().to_string(),
            units: Some(r.units.clone()),
            ..Default::default()
        };
        match r.energies {
            Energies::Absolute {
                e_neutral,
                e_anion,
                e_cation,
            } => {
                raw.e_neutral = Some(e_neutral);
                raw.e_anion = Some(e_anion);
                raw.e_cation = Some(e_cation);
            }
            Energies::Descriptor { e_neutral, i_q, a_q } => {
                raw.e_neutral = Some(e_neutral);
                raw.i_q = Some(i_q);
                raw.a_q = Some(a_q);
            }
        }
        raw
    }
}

impl RawRecord {
    fn into_record(self, line: Option<u64>) -> Result<SpeciesRecord, CatalogError> {
        let mode = match self.mode.as_str() {
            "absolute" => EnergyMode::Absolute,
            "descriptor" => EnergyMode::Descriptor,
            other => {
                return Err(CatalogError::Parse {
                    line,
                    field: Some("mode".into()),
                    message: format!("unknown mode `{other}` for `{}`", self.label),
                })
            }
        };
        for (field, value) in [
            ("e_neutral", self.e_neutral),
            ("e_anion", self.e_anion),
            ("e_cation", self.e_cation),
            ("i_q", self.i_q),
            ("a_q", self.a_q),
        ] {
            if value.is_some_and(|v| !v.is_finite()) {
                return Err(CatalogError::Parse {
                    line,
                    field: Some(field.into()),
                    message: format!("non-finite energy for `{}`", self.label),
                });
            }
        }
        let label = self.label;
        let required = |field: &'static str, value: Option<f64>| {
            value.ok_or_else(|| CatalogError::MissingField {
                label: label.clone(),
                field,
                mode: mode.as_str(),
            })
        };
        let energies = match mode {
            EnergyMode::Absolute => {
                if self.i_q.is_some() || self.a_q.is_some() {
                    return Err(CatalogError::ModeConflict { label });
                }
                Energies::Absolute {
                    e_neutral: required("e_neutral", self.e_neutral)?,
                    e_anion: required("e_anion", self.e_anion)?,
                    e_cation: required("e_cation", self.e_cation)?,
                }
            }
            EnergyMode::Descriptor => {
                if self.e_anion.is_some() || self.e_cation.is_some() {
                    return Err(CatalogError::ModeConflict { label });
                }
                Energies::Descriptor {
                    e_neutral: required("e_neutral", self.e_neutral)?,
                    i_q: required("i_q", self.i_q)?,
                    a_q: required("a_q", self.a_q)?,
                }
            }
        };
        let units = match self.units {
            Some(u) if !u.is_empty() => u,
            _ => DEFAULT_UNITS.to_string(),
        };
        Ok(SpeciesRecord {
            label,
            n_electrons: self.n_electrons,
            q: self.q,
            energies,
            units,
        })
    }
}

/// Parses a catalog, preserving document order. Physical validation is left
/// to [`to_domain`].
pub fn parse_catalog(mut input: impl Read, format: CatalogFormat) -> Result<Vec<SpeciesRecord>, CatalogError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let records = match format {
        CatalogFormat::Json => parse_json(&bytes)?,
        CatalogFormat::Csv => parse_csv(&bytes)?,
    };
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.label.as_str()) {
            return Err(CatalogError::DuplicateLabel(r.label.clone()));
        }
    }
    Ok(records)
}

fn parse_json(bytes: &[u8]) -> Result<Vec<SpeciesRecord>, CatalogError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(Vec::new());
    }
    let catalog: JsonCatalog = serde_json::from_slice(bytes).map_err(|e| CatalogError::Parse {
        line: Some(e.line() as u64),
        field: None,
        message: e.to_string(),
    })?;
    catalog
        .species
        .into_iter()
        .map(|raw| raw.into_record(None))
        .collect()
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<SpeciesRecord>, CatalogError> {
    if bytes.is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes);
    let csv_error = |e: csv::Error| CatalogError::Parse {
        line: e.position().map(|p| p.line()),
        field: None,
        message: e.to_string(),
    };
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(CatalogError::Parse {
            line: Some(1),
            field: None,
            message: format!("expected header `{}`", CSV_HEADER.join(",")),
        });
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line());
        let cell = |i: usize| row.get(i).unwrap_or("");
        let parse_err = |i: usize, message: String| CatalogError::Parse {
            line,
            field: Some(CSV_HEADER[i].into()),
            message,
        };
        let int = |i: usize| {
            cell(i)
                .parse::<u32>()
                .map_err(|e| parse_err(i, format!("`{}`: {e}", cell(i))))
        };
        let float = |i: usize| -> Result<Option<f64>, CatalogError> {
            let s = cell(i);
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| parse_err(i, format!("`{s}`: {e}")))
        };
        let raw = RawRecord {
            label: cell(0).to_string(),
            n_electrons: int(1)?,
            q: int(2)?,
            mode: cell(3).to_string(),
            e_neutral: float(4)?,
            e_anion: float(5)?,
            e_cation: float(6)?,
            i_q: float(7)?,
            a_q: float(8)?,
            units: Some(cell(9).to_string()),
        };
        records.push(raw.into_record(line)?);
    }
    Ok(records)
}

/// Serializes records; energies use the shortest decimal that parses back
/// to the same `f64`.
pub fn write_catalog(records: &[SpeciesRecord], format: CatalogFormat) -> Vec<u8> {
    match format {
        CatalogFormat::Json => {
            let catalog = JsonCatalog {
                species: records.iter().map(RawRecord::from).collect(),
            };
            let mut out = serde_json::to_vec_pretty(&catalog).expect("catalog serializes");
            out.push(b'\n');
            out
        }
        CatalogFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            writer.write_record(CSV_HEADER).expect("in-memory write");
            let num = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            for r in records {
                let raw = RawRecord::from(r);
                writer
                    .write_record([
                        raw.label,
                        raw.n_electrons.to_string(),
                        raw.q.to_string(),
                        raw.mode,
                        num(raw.e_neutral),
                        num(raw.e_anion),
                        num(raw.e_cation),
                        num(raw.i_q),
                        num(raw.a_q),
                        raw.units.unwrap_or_default(),
                    ])
                    .expect("in-memory write");
            }
            writer.into_inner().expect("in-memory flush")
        }
    }
}

/// Reads a catalog file and converts every record into a validated domain.
pub fn load_domains(path: &Path) -> Result<Vec<DomainSpec>, CatalogError> {
    let file = std::fs::File::open(path)?;
    let records = parse_catalog(std::io::BufReader::new(file), CatalogFormat::from_path(path))?;
    records
        .iter()
        .map(|r| to_domain(r).map_err(CatalogError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(s: &str, format: CatalogFormat) -> Result<Vec<SpeciesRecord>, CatalogError> {
        parse_catalog(s.as_bytes(), format)
    }

    const FIXTURE_JSON: &str = r#"{"species": [
        {"label": "fixture", "n_electrons": 6, "q": 1, "mode": "absolute",
         "e_neutral": -100, "e_anion": -99, "e_cation": -90, "units": "eV"}
    ]}"#;

    #[test]
    fn one_absolute_record() {
        let records = parse_str(FIXTURE_JSON, CatalogFormat::Json).unwrap();
        assert_eq!(
            records,
            vec![SpeciesRecord::absolute("fixture", 6, 1, -100.0, -99.0, -90.0)]
        );
        let domain = to_domain(&records[0]).unwrap();
        assert_eq!(
            domain,
            DomainSpec::new("fixture", 6, 1, -100.0, -99.0, -90.0).unwrap()
        );
    }

    #[test]
    fn descriptor_record_reconstructs_energies() {
        let csv = "label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units\n\
                   fixture,6,1,descriptor,-100,,,10,-1,eV\n";
        let records = parse_str(csv, CatalogFormat::Csv).unwrap();
        let domain = to_domain(&records[0]).unwrap();
        assert_eq!(domain.e_cation(), -90.0);
        assert_eq!(domain.e_anion(), -99.0);
        assert_eq!(
            domain,
            DomainSpec::new("fixture", 6, 1, -100.0, -99.0, -90.0).unwrap()
        );
    }

    #[test]
    fn empty_documents() {
        assert!(parse_str("", CatalogFormat::Json).unwrap().is_empty());
        assert!(parse_str("  \n", CatalogFormat::Json).unwrap().is_empty());
        assert!(parse_str(r#"{"species": []}"#, CatalogFormat::Json).unwrap().is_empty());
        assert!(parse_str("", CatalogFormat::Csv).unwrap().is_empty());
        for format in [CatalogFormat::Json, CatalogFormat::Csv] {
            let bytes = write_catalog(&[], format);
            assert!(parse_catalog(&bytes[..], format).unwrap().is_empty());
        }
        assert_eq!(
            write_catalog(&[], CatalogFormat::Csv),
            b"label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units\n"
        );
    }

    #[test]
    fn to_domain_errors() {
        let bad = SpeciesRecord::descriptor("bad", 6, 1, -100.0, -2.0, -1.0);
        assert_eq!(
            to_domain(&bad),
            Err(DomainError::NonPositiveIonization {
                label: "bad".into(),
                i_q: -2.0
            })
        );
        let under = SpeciesRecord::absolute("h", 1, 2, -1.0, -1.5, 0.0);
        assert!(matches!(
            to_domain(&under),
            Err(DomainError::ElectronCountUnderflow { .. })
        ));
    }

    #[test]
    fn structural_errors() {
        let dup = r#"{"species": [
            {"label": "a", "n_electrons": 6, "q": 1, "mode": "absolute", "e_neutral": -1, "e_anion": -1, "e_cation": 0},
            {"label": "a", "n_electrons": 6, "q": 1, "mode": "absolute", "e_neutral": -1, "e_anion": -1, "e_cation": 0}
        ]}"#;
        assert!(matches!(
            parse_str(dup, CatalogFormat::Json),
            Err(CatalogError::DuplicateLabel(l)) if l == "a"
        ));

        let missing = r#"{"species": [{"label": "m", "n_electrons": 6, "q": 1, "mode": "absolute", "e_neutral": -1, "e_cation": 0}]}"#;
        assert!(matches!(
            parse_str(missing, CatalogFormat::Json),
            Err(CatalogError::MissingField { field: "e_anion", .. })
        ));

        let conflict = "label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units\n\
                        c,6,1,absolute,-100,-99,-90,10,,eV\n";
        assert!(matches!(
            parse_str(conflict, CatalogFormat::Csv),
            Err(CatalogError::ModeConflict { label }) if label == "c"
        ));

        let bad_number = "label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units\n\
                          ok,6,1,absolute,-100,-99,-90,,,eV\n\
                          x,6,1,absolute,-100,abc,-90,,,eV\n";
        match parse_str(bad_number, CatalogFormat::Csv) {
            Err(CatalogError::Parse { line, field, .. }) => {
                assert_eq!(line, Some(3));
                assert_eq!(field.as_deref(), Some("e_anion"));
            }
            other => panic!("{other:?}"),
        }

        let nan = "label,n_electrons,q,mode,e_neutral,e_anion,e_cation,i_q,a_q,units\n\
                   x,6,1,absolute,NaN,-99,-90,,,eV\n";
        assert!(matches!(
            parse_str(nan, CatalogFormat::Csv),
            Err(CatalogError::Parse { .. })
        ));

        let bad_header = "label,n,q\nx,6,1\n";
        assert!(matches!(
            parse_str(bad_header, CatalogFormat::Csv),
            Err(CatalogError::Parse { line: Some(1), .. })
        ));

        match parse_str("{\"species\": [\n{\"label\": 3}]}", CatalogFormat::Json) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, Some(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unicode_labels_survive() {
        let mut r = SpeciesRecord::descriptor("Ω-C=O, \"carbonyl\" ∂", 14, 2, -3.25e2, 11.5, -0.75);
        r.units = "kcal/mol".into();
        for format in [CatalogFormat::Json, CatalogFormat::Csv] {
            let bytes = write_catalog(std::slice::from_ref(&r), format);
            let back = parse_catalog(&bytes[..], format).unwrap();
            assert_eq!(back, vec![r.clone()]);
            assert_eq!(back[0].label.as_bytes(), r.label.as_bytes());
        }
    }

    #[test]
    fn missing_units_default_to_ev() {
        let json = r#"{"species": [{"label": "u", "n_electrons": 2, "q": 1, "mode": "descriptor", "e_neutral": -1, "i_q": 1, "a_q": 0}]}"#;
        assert_eq!(parse_str(json, CatalogFormat::Json).unwrap()[0].units, "eV");
    }

    #[test]
    fn format_detection() {
        assert_eq!(CatalogFormat::from_path(Path::new("a/b.CSV")), CatalogFormat::Csv);
        assert_eq!(CatalogFormat::from_path(Path::new("a/b.json")), CatalogFormat::Json);
        assert_eq!("csv".parse::<CatalogFormat>(), Ok(CatalogFormat::Csv));
        assert!("xml".parse::<CatalogFormat>().is_err());
    }
}
