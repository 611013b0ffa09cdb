use serde::{Deserialize, Serialize};

use super::IoError;

/// Ordered `(label, price)` rows from a delimited file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceTable {
    pub column: String,
    pub labels: Vec<String>,
    pub prices: Vec<f64>,
}

impl PriceTable {
    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

/// Read the column named `column` from comma-separated text with a header.
///
/// Each row's label is its first cell, or its line number when the price
/// column is the first one. Rows are reported by their 1-based line number
/// in the input (the header is line 1).
pub fn ingest_prices(text: &str, column: &str) -> Result<PriceTable, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IoError::Csv(e.to_string()))?
        .clone();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| IoError::MissingColumn {
            name: column.to_string(),
            available: headers.iter().map(str::to_string).collect(),
        })?;

    let mut labels = Vec::new();
    let mut prices = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IoError::Csv(e.to_string()))?;
        let row = record.position().map_or(0, |p| p.line());
        let cell = record.get(idx).unwrap_or("");
        let price: f64 = cell
            .parse()
            .ok()
            .filter(|p: &f64| p.is_finite())
            .ok_or_else(|| IoError::NonNumeric {
                row,
                cell: cell.to_string(),
            })?;
        let label = if idx == 0 {
            row.to_string()
        } else {
            record.get(0).unwrap_or("").to_string()
        };
        labels.push(label);
        prices.push(price);
    }
    if prices.len() < 2 {
        return Err(IoError::TooFewRows(prices.len()));
    }
    Ok(PriceTable {
        column: column.to_string(),
        labels,
        prices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_named_column() {
        let t = ingest_prices("date,close\n2020-01-01,100\n2020-01-02,101", "close").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.prices, vec![100.0, 101.0]);
        assert_eq!(t.labels, vec!["2020-01-01", "2020-01-02"]);
    }

    #[test]
    fn blank_cell_names_row() {
        let mut text = String::from("date,close\n");
        for i in 2..=6 {
            text.push_str(&format!("d{i},{}\n", 100 + i));
        }
        text.push_str("d7,\nd8,99\n");
        match ingest_prices(&text, "close").unwrap_err() {
            IoError::NonNumeric { row, cell } => {
                assert_eq!(row, 7);
                assert_eq!(cell, "");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_row_rejected() {
        assert!(matches!(
            ingest_prices("date,close\n2020-01-01,100\n", "close"),
            Err(IoError::TooFewRows(1))
        ));
    }

    #[test]
    fn missing_column() {
        let err = ingest_prices("date,close\nx,1\ny,2\n", "open").unwrap_err();
        assert!(err.to_string().contains("`open` not found"), "{err}");
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            ingest_prices("p\n1\ninf\n", "p"),
            Err(IoError::NonNumeric { row: 3, .. })
        ));
    }
}
