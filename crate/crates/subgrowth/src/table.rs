//! Number-field table files.
//!
//! ```text
//! #subgrowth-field-table v1
//! label,degree,disc,zeta2_form,zeta2_value,class_number,prime_norms
//! Q,1,1,exact,1/6,1,2;3;5;7
//! Q(sqrt5),2,5,exact,2/75,1,2:4;sqrt5:5;3:9;11a:11;11b:11
//! K,3,49,interval,1.0208:1.0209,1,7:7;2:8
//! ```
//!
//! `zeta2_form` is `exact` (the value is `q` with `zeta_k(2) = q pi^{2d} / sqrt(disc)`)
//! or `interval` (the value is `lo:hi`, each a decimal or fraction).
//! `prime_norms` lists `label:norm` or bare `norm` entries separated by `;`.
//! Further lines starting with `#` are comments.

use std::collections::HashSet;
use std::io::{self, BufRead, BufReader, Read, Write};

use num_bigint::BigUint;
use num_rational::BigRational;
use subgrowth_core::borel::{NumberFieldInvariants, PrimeIdeal, Zeta2};
use subgrowth_core::interval::parse_decimal;
use subgrowth_core::Interval;
use thiserror::Error;

pub const TABLE_HEADER: &str = "#subgrowth-field-table v1";
pub const TABLE_COLUMNS: [&str; 7] =
    ["label", "degree", "disc", "zeta2_form", "zeta2_value", "class_number", "prime_norms"];

/// A malformed table. `row` is the 1-based line number in the file.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("field table line {row}{}: {message}", column.as_ref().map(|c| format!(", column {c}")).unwrap_or_default())]
pub struct TableFormatError {
    pub row: usize,
    pub column: Option<String>,
    pub message: String,
}

impl TableFormatError {
    fn at(row: usize, column: Option<&str>, message: impl Into<String>) -> Self {
        Self { row, column: column.map(String::from), message: message.into() }
    }
}

/// `Q` with primes up to `prime_bound` and `Q(sqrt 5)`.
pub fn builtin_fields(prime_bound: u64) -> Vec<NumberFieldInvariants> {
    vec![NumberFieldInvariants::rationals(prime_bound), NumberFieldInvariants::q_sqrt5()]
}

pub fn read_field_table<R: Read>(reader: R) -> Result<Vec<NumberFieldInvariants>, TableFormatError> {
    let mut buffered = BufReader::new(reader);
    let mut first = String::new();
    buffered
        .read_line(&mut first)
        .map_err(|e| TableFormatError::at(1, None, format!("unreadable: {e}")))?;
    if first.trim_end() != TABLE_HEADER {
        return Err(TableFormatError::at(1, None, format!("expected version line '{TABLE_HEADER}'")));
    }
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(buffered);
    let headers = csv.headers().map_err(|e| csv_error(&e))?.clone();
    if headers.iter().ne(TABLE_COLUMNS) {
        let row = headers.position().map_or(2, |p| p.line() as usize + 1);
        return Err(TableFormatError::at(row, None, format!("expected columns {}", TABLE_COLUMNS.join(","))));
    }
    let mut fields = Vec::new();
    let mut labels = HashSet::new();
    for record in csv.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let row = record.position().map_or(0, |p| p.line() as usize + 1);
        let field = parse_row(&record, row)?;
        if !labels.insert(field.label.clone()) {
            return Err(TableFormatError::at(row, Some("label"), format!("duplicate label {}", field.label)));
        }
        fields.push(field);
    }
    Ok(fields)
}

fn csv_error(e: &csv::Error) -> TableFormatError {
    let row = e.position().map_or(0, |p| p.line() as usize + 1);
    TableFormatError::at(row, None, e.to_string())
}

fn parse_row(record: &csv::StringRecord, row: usize) -> Result<NumberFieldInvariants, TableFormatError> {
    let cell = |i: usize| record.get(i).unwrap_or_default();
    let fail = |i: usize, message: String| TableFormatError::at(row, Some(TABLE_COLUMNS[i]), message);
    let label = cell(0);
    if label.is_empty() {
        return Err(fail(0, "empty label".into()));
    }
    let degree: u32 = cell(1).parse().map_err(|_| fail(1, format!("'{}' is not a positive integer", cell(1))))?;
    let disc: BigUint = cell(2).parse().map_err(|_| fail(2, format!("'{}' is not a positive integer", cell(2))))?;
    let number = |i: usize| parse_decimal(cell(i)).map_err(|_| fail(i, format!("'{}' is not a number", cell(i))));
    let zeta2 = match cell(3) {
        "exact" => Zeta2::Exact(number(4)?),
        "interval" => {
            let (lo, hi) = cell(4).split_once(':').ok_or_else(|| fail(4, "expected lo:hi".into()))?;
            let parse = |s: &str| parse_decimal(s).map_err(|_| fail(4, format!("'{s}' is not a number")));
            let (lo, hi): (BigRational, BigRational) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(fail(4, "lower end above upper end".into()));
            }
            Zeta2::Interval(Interval::new(lo, hi))
        }
        other => return Err(fail(3, format!("'{other}' is neither 'exact' nor 'interval'"))),
    };
    let class_number: BigUint =
        cell(5).parse().map_err(|_| fail(5, format!("'{}' is not a positive integer", cell(5))))?;
    let mut primes = Vec::new();
    for entry in cell(6).split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let (name, norm) = entry.rsplit_once(':').unwrap_or((entry, entry));
        let norm: u64 = norm.trim().parse().map_err(|_| fail(6, format!("bad norm in '{entry}'")))?;
        primes.push(PrimeIdeal::new(name.trim(), norm).map_err(|e| fail(6, e.to_string()))?);
    }
    NumberFieldInvariants::new(label, degree, disc, zeta2, class_number, primes)
        .map_err(|e| TableFormatError::at(row, None, e.to_string()))
}

pub fn write_field_table<W: Write>(fields: &[NumberFieldInvariants], mut out: W) -> io::Result<()> {
    writeln!(out, "{TABLE_HEADER}")?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(TABLE_COLUMNS)?;
    for field in fields {
        let (form, value) = match &field.zeta2 {
            Zeta2::Exact(q) => ("exact", q.to_string()),
            Zeta2::Interval(i) => ("interval", format!("{}:{}", i.lo(), i.hi())),
        };
        let primes: Vec<String> = field
            .primes
            .iter()
            .map(|p| if p.label == p.norm.to_string() { p.label.clone() } else { format!("{}:{}", p.label, p.norm) })
            .collect();
        csv.write_record([
            field.label.clone(),
            field.degree.to_string(),
            field.disc.to_string(),
            form.to_string(),
            value,
            field.class_number.to_string(),
            primes.join(";"),
        ])?;
    }
    csv.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<Vec<NumberFieldInvariants>, TableFormatError> {
        read_field_table(text.as_bytes())
    }

    const HEAD: &str = "#subgrowth-field-table v1\nlabel,degree,disc,zeta2_form,zeta2_value,class_number,prime_norms\n";

    #[test]
    fn builtin_rows_round_trip() {
        let fields = builtin_fields(50);
        let mut buffer = Vec::new();
        write_field_table(&fields, &mut buffer).unwrap();
        assert_eq!(read_field_table(buffer.as_slice()).unwrap(), fields);
    }

    #[test]
    fn interval_rows_and_comments() {
        let text = format!("{HEAD}# cubic field\nK,3,49,interval,1.0208:1.0209,1,7;2:8\n");
        let fields = read(&text).unwrap();
        assert_eq!(fields[0].primes.len(), 2);
        assert!(matches!(fields[0].zeta2, Zeta2::Interval(_)));
    }

    #[test]
    fn errors_point_at_the_cell() {
        let err = read(&format!("{HEAD}Q,1,1,exact,1/6,1,2;6\n")).unwrap_err();
        assert_eq!((err.row, err.column.as_deref()), (3, Some("prime_norms")));

        let err = read(&format!("{HEAD}Q,1,1,exact,1/6,1,2\nK,two,5,exact,1,1,\n")).unwrap_err();
        assert_eq!((err.row, err.column.as_deref()), (4, Some("degree")));

        let err = read(&format!("{HEAD}Q,1,1,guess,1/6,1,2\n")).unwrap_err();
        assert_eq!(err.column.as_deref(), Some("zeta2_form"));

        let err = read(&format!("{HEAD}K,2,5,interval,0.5:0.6,1,\n")).unwrap_err();
        assert_eq!(err.row, 3);

        assert_eq!(read("label,degree\n").unwrap_err().row, 1);
        assert_eq!(read("#subgrowth-field-table v1\nlabel,degree\n").unwrap_err().row, 2);
        let err = read(&format!("{HEAD}Q,1,1,exact\n")).unwrap_err();
        assert_eq!(err.row, 3);
        let err = read(&format!("{HEAD}Q,1,1,exact,1/6,1,\nQ,1,1,exact,1/6,1,\n")).unwrap_err();
        assert_eq!((err.row, err.column.as_deref()), (4, Some("label")));
    }
}
