use std::fmt;

use ddm_core::{DiscountContext, DividendSchedule, Field};

use super::{validate, IoError, RawInputs};

/// Stage pairs a batch row can carry; longer schedules need a document file.
pub const MAX_BATCH_STAGES: usize = 8;

const FIXED_COLUMNS: [&str; 5] = [
    "name",
    "initial_dividend",
    "required_return",
    "terminal_growth",
    "market_price",
];

/// One validated valuation task from a batch table.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    /// Data row number, counting from 1 after the header.
    pub row: usize,
    /// Security label.
    pub name: String,
    /// D₀, stages and terminal growth.
    pub schedule: DividendSchedule,
    /// Required return.
    pub context: DiscountContext,
    /// Observed price, when given.
    pub market_price: Option<f64>,
}

/// A row that could not be turned into a [`BatchRow`].
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// Data row number, counting from 1 after the header.
    pub row: usize,
    /// Header name of the offending column.
    pub column: String,
    /// What is wrong with the cell.
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {}, column {}: {}",
            self.row, self.column, self.message
        )
    }
}

/// Everything parsed from a batch table. Good rows are kept even when others fail.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchTable {
    /// Valid rows in input order.
    pub rows: Vec<BatchRow>,
    /// Failed rows in input order.
    pub errors: Vec<RowError>,
}

/// Parses a comma-separated batch table.
///
/// The header must be `name,initial_dividend,required_return,terminal_growth,
/// market_price` followed by up to eight `gK,tK` column pairs. A stage pair
/// left blank ends the row's stage list; every later pair must also be blank.
/// Only a malformed header fails the whole table.
pub fn parse_batch(text: &str) -> Result<BatchTable, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| IoError::Parse(format!("header: {e}")))?
        .clone();
    let columns: Vec<&str> = header.iter().collect();
    let stage_count = check_header(&columns)?;

    let mut table = BatchTable::default();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let outcome = match record {
            Ok(record) => parse_row(row, &columns, stage_count, &record),
            Err(e) => Err(RowError {
                row,
                column: "record".to_string(),
                message: e.to_string(),
            }),
        };
        match outcome {
            Ok(parsed) => table.rows.push(parsed),
            Err(e) => table.errors.push(e),
        }
    }
    Ok(table)
}

fn check_header(columns: &[&str]) -> Result<usize, IoError> {
    if columns.len() == 1 && columns[0].is_empty() {
        return Err(IoError::Parse("missing header row".to_string()));
    }
    if columns.len() < FIXED_COLUMNS.len() || columns[..FIXED_COLUMNS.len()] != FIXED_COLUMNS {
        return Err(IoError::Parse(format!(
            "header must start with {}",
            FIXED_COLUMNS.join(",")
        )));
    }
    let stage_columns = &columns[FIXED_COLUMNS.len()..];
    if !stage_columns.len().is_multiple_of(2) || stage_columns.len() / 2 > MAX_BATCH_STAGES {
        return Err(IoError::Parse(format!(
            "header must continue with up to {MAX_BATCH_STAGES} g/t column pairs"
        )));
    }
    for (k, pair) in stage_columns.chunks(2).enumerate() {
        let (g, t) = (format!("g{}", k + 1), format!("t{}", k + 1));
        if pair[0] != g || pair[1] != t {
            return Err(IoError::Parse(format!(
                "expected columns {g},{t} but found {},{}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(stage_columns.len() / 2)
}

fn parse_row(
    row: usize,
    columns: &[&str],
    stage_count: usize,
    record: &csv::StringRecord,
) -> Result<BatchRow, RowError> {
    let error = |column: &str, message: String| RowError {
        row,
        column: column.to_string(),
        message,
    };
    if record.len() > columns.len() {
        return Err(error(
            "record",
            format!(
                "{} cells but the header has {}",
                record.len(),
                columns.len()
            ),
        ));
    }
    let cell = |i: usize| record.get(i).unwrap_or("");
    let number = |i: usize| -> Result<f64, RowError> {
        let text = cell(i);
        if text.is_empty() {
            return Err(error(columns[i], "missing value".to_string()));
        }
        text.parse::<f64>()
            .map_err(|_| error(columns[i], format!("not a number: {text:?}")))
    };

    let name = cell(0).to_string();
    let initial_dividend = number(1)?;
    let required_return = number(2)?;
    let terminal_growth = number(3)?;
    let market_price = if cell(4).is_empty() {
        None
    } else {
        Some(number(4)?)
    };

    let mut stages = Vec::new();
    let mut ended = false;
    for k in 0..stage_count {
        let (gi, ti) = (5 + 2 * k, 6 + 2 * k);
        match (cell(gi).is_empty(), cell(ti).is_empty()) {
            (true, true) => ended = true,
            (false, false) if ended => {
                return Err(error(
                    columns[gi],
                    "stage follows a blank stage pair".to_string(),
                ))
            }
            (false, false) => {
                let growth = number(gi)?;
                let text = cell(ti);
                let years = text
                    .parse::<i64>()
                    .map_err(|_| error(columns[ti], format!("not a whole number: {text:?}")))?;
                stages.push((growth, years));
            }
            (true, false) => return Err(error(columns[gi], "missing value".to_string())),
            (false, true) => return Err(error(columns[ti], "missing value".to_string())),
        }
    }

    let (schedule, context) = validate(&RawInputs {
        initial_dividend,
        stages: &stages,
        terminal_growth,
        required_return,
        market_price,
    })
    .map_err(|(field, message)| error(&column_of(field), message))?;

    Ok(BatchRow {
        row,
        name,
        schedule,
        context,
        market_price,
    })
}

fn column_of(field: Field) -> String {
    match field {
        Field::StageGrowth(i) => format!("g{}", i + 1),
        Field::StageDuration(i) => format!("t{}", i + 1),
        other => other.to_string(),
    }
}
