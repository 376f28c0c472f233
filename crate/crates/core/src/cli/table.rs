use std::str::FromStr;

use csv::{Terminator, WriterBuilder};

/// Delimited text layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format '{other}' (expected csv or tsv)")),
        }
    }
}

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Accumulates `#` comment lines and delimited records.
pub struct Table {
    format: Format,
    out: Vec<u8>,
}

impl Table {
    pub fn new(format: Format) -> Self {
        Table { format, out: Vec::new() }
    }

    pub fn comment(&mut self, text: &str) {
        self.out.extend_from_slice(b"# ");
        self.out.extend_from_slice(text.as_bytes());
        self.out.push(b'\n');
    }

    /// Comment line whose body is itself a delimited record.
    pub fn comment_record<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line = self.encode(fields);
        self.out.extend_from_slice(b"# ");
        self.out.extend_from_slice(&line);
    }

    pub fn record<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line = self.encode(fields);
        self.out.extend_from_slice(&line);
    }

    fn encode<S: AsRef<str>>(&self, fields: &[S]) -> Vec<u8> {
        let mut w = WriterBuilder::new()
            .delimiter(self.format.delimiter())
            .terminator(Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(fields.iter().map(|f| f.as_ref())).expect("writing to memory");
        w.into_inner().expect("flushing to memory")
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.out).expect("records are UTF-8")
    }
}
