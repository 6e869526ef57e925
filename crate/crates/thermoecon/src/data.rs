//! Historical series files.
//!
//! Comma-separated, header row required, `#` lines ignored. Columns:
//! `year`, `gdp_billion_2005usd`, `energy_tw`, and optionally `deflator` and
//! `wealth_billion_2005usd`. Empty cells mean "not available".

use std::fmt;
use std::io::Read;
use std::path::Path;

use thermoecon_core::calibration::{HistoricalRecord, HistoricalSeries};

pub const YEAR: &str = "year";
pub const GDP: &str = "gdp_billion_2005usd";
pub const ENERGY: &str = "energy_tw";
pub const DEFLATOR: &str = "deflator";
pub const WEALTH: &str = "wealth_billion_2005usd";

#[derive(Debug)]
pub struct DataError {
    /// `(line, message)`; line 0 for file-level problems.
    pub problems: Vec<(u64, String)>,
}

impl DataError {
    fn file(msg: impl Into<String>) -> Self {
        DataError { problems: vec![(0, msg.into())] }
    }
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (line, msg)) in self.problems.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            if *line == 0 {
                write!(f, "{msg}")?;
            } else {
                write!(f, "line {line}: {msg}")?;
            }
        }
        Ok(())
    }
}

impl std::error::Error for DataError {}

pub fn load(path: &Path) -> Result<HistoricalSeries, DataError> {
    let file = std::fs::File::open(path).map_err(|e| DataError::file(format!("{}: {e}", path.display())))?;
    read(file)
}

pub fn read(input: impl Read) -> Result<HistoricalSeries, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| DataError::file(format!("header: {e}")))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(DataError::file("empty file: header row required"));
    }
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (Some(year_col), Some(gdp_col)) = (column(YEAR), column(GDP)) else {
        return Err(DataError::file(format!("header must name '{YEAR}' and '{GDP}'")));
    };
    let energy_col = column(ENERGY);
    let deflator_col = column(DEFLATOR);
    let wealth_col = column(WEALTH);
    if let Some(unknown) = headers.iter().find(|h| ![YEAR, GDP, ENERGY, DEFLATOR, WEALTH].contains(h)) {
        return Err(DataError::file(format!("unknown column '{unknown}'")));
    }

    let mut records = Vec::new();
    let mut problems = Vec::new();
    let mut lines = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                problems.push((line, e.to_string()));
                continue;
            }
        };
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != headers.len() {
            problems.push((line, format!("expected {} fields, found {}", headers.len(), row.len())));
            continue;
        }
        let mut bad = Vec::new();
        let mut value = |col: Option<usize>, name: &str| -> Option<f64> {
            let cell = row.get(col?)?;
            if cell.is_empty() {
                return None;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Some(v),
                _ => {
                    bad.push(format!("{name} '{cell}' must be a positive number"));
                    None
                }
            }
        };
        let gdp = value(Some(gdp_col), GDP);
        let energy = value(energy_col, ENERGY);
        let deflator = value(deflator_col, DEFLATOR);
        let wealth = value(wealth_col, WEALTH);
        let year = row.get(year_col).unwrap_or("");
        let year = match year.parse::<i32>() {
            Ok(y) => Some(y),
            Err(_) => {
                bad.push(format!("year '{year}' is not an integer"));
                None
            }
        };
        if !bad.is_empty() {
            problems.push((line, bad.join("; ")));
            continue;
        }
        records.push(HistoricalRecord { year: year.unwrap(), gdp, energy, deflator, wealth });
        lines.push(line);
    }
    if !problems.is_empty() {
        return Err(DataError { problems });
    }
    if records.is_empty() {
        return Err(DataError::file("no data rows"));
    }
    HistoricalSeries::new(records.clone()).map_err(|e| {
        let line = match e {
            thermoecon_core::Error::DuplicateYear { year } => {
                records.iter().zip(&lines).filter(|(r, _)| r.year == year).nth(1).map(|(_, l)| *l).unwrap_or(0)
            }
            _ => 0,
        };
        DataError { problems: vec![(line, e.to_string())] }
    })
}
