//! Barcodes: multisets of intervals tagged with a homology degree.

use std::collections::BTreeMap;
use std::io;

use thiserror::Error;

use crate::interval::Interval;
use crate::scalar::ExtendedRational;

pub const CSV_HEADER: [&str; 6] = ["degree", "lo", "hi", "lo_closed", "hi_closed", "multiplicity"];

#[derive(Debug, Error)]
pub enum BarcodeError {
    #[error("barcode csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("barcode csv: expected header `{}`", CSV_HEADER.join(","))]
    Header,
    #[error("barcode csv line {line}: {message}")]
    Row { line: u64, message: String },
}

/// A finite multiset of `(degree, interval)` in canonical order. Empty
/// intervals are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    entries: BTreeMap<(usize, Interval), usize>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars(degree: usize, bars: impl IntoIterator<Item = Interval>) -> Self {
        let mut b = Self::new();
        for i in bars {
            b.insert(degree, i, 1);
        }
        b
    }

    pub fn insert(&mut self, degree: usize, interval: Interval, multiplicity: usize) {
        if multiplicity > 0 && !interval.is_empty() {
            *self.entries.entry((degree, interval)).or_default() += multiplicity;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of bars counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    /// `(degree, interval, multiplicity)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Interval, usize)> {
        self.entries.iter().map(|((d, i), &m)| (*d, i, m))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.entries.keys().map(|(d, _)| *d).collect();
        d.dedup();
        d
    }

    /// The bars of one degree, repeated by multiplicity.
    pub fn bars(&self, degree: usize) -> Vec<Interval> {
        self.iter()
            .filter(|(d, _, _)| *d == degree)
            .flat_map(|(_, i, m)| std::iter::repeat_n(i.clone(), m))
            .collect()
    }

    pub fn restrict(&self, degree: usize) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|((d, _), _)| *d == degree)
                .map(|(k, &m)| (k.clone(), m))
                .collect(),
        }
    }

    /// Multiset union.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, i, m) in other.iter() {
            out.insert(d, i.clone(), m);
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), BarcodeError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for (d, i, m) in self.iter() {
            w.write_record([
                d.to_string(),
                i.lo().expect("stored bars are non-empty").to_string(),
                i.hi().expect("stored bars are non-empty").to_string(),
                i.lo_closed().to_string(),
                i.hi_closed().to_string(),
                m.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self, BarcodeError> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        if r.headers()?.iter().ne(CSV_HEADER) {
            return Err(BarcodeError::Header);
        }
        let mut out = Self::new();
        for record in r.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let bad = |message: String| BarcodeError::Row { line, message };
            if record.len() != CSV_HEADER.len() {
                return Err(bad(format!("expected {} fields", CSV_HEADER.len())));
            }
            let degree: usize = record[0]
                .parse()
                .map_err(|_| bad(format!("bad degree `{}`", &record[0])))?;
            let lo: ExtendedRational = record[1].parse().map_err(|e| bad(format!("{e}")))?;
            let hi: ExtendedRational = record[2].parse().map_err(|e| bad(format!("{e}")))?;
            let flag = |s: &str| match s {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(bad(format!("bad flag `{other}`"))),
            };
            let lo_closed = flag(&record[3])?;
            let hi_closed = flag(&record[4])?;
            let multiplicity: usize = record[5]
                .parse()
                .map_err(|_| bad(format!("bad multiplicity `{}`", &record[5])))?;
            let interval = Interval::new(lo, hi, lo_closed, hi_closed).map_err(|e| bad(e.to_string()))?;
            if interval.is_empty() {
                return Err(bad("empty interval".into()));
            }
            out.insert(degree, interval, multiplicity);
        }
        Ok(out)
    }

    pub fn from_csv_str(s: &str) -> Result<Self, BarcodeError> {
        Self::read_csv(s.as_bytes())
    }
}
