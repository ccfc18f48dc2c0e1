//! Deterministic numeric formatting and the CSV / JSON-lines record
//! encoders shared by the table and verify streams.

/// Shortest decimal at the requested number of significant digits;
/// prec >= 17 falls back to Rust's shortest round-trip form. Non-finite
/// values print as NaN / inf / -inf (CSV) and are encoded as null in
/// JSON lines.
pub fn fmt_sig(v: f64, prec: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if prec >= 17 {
        return format!("{v}");
    }
    let s = format!("{:.*e}", prec.saturating_sub(1), v);
    // trim trailing zeros of the mantissa: 1.230000e-2 -> 1.23e-2
    match s.split_once('e') {
        Some((mant, exp)) => {
            let mant = if mant.contains('.') {
                mant.trim_end_matches('0').trim_end_matches('.')
            } else {
                mant
            };
            format!("{mant}e{exp}")
        }
        None => s,
    }
}

/// The same value as a JSON fragment: a plain number when finite, null
/// otherwise.
pub fn json_num(v: f64, prec: usize) -> String {
    if v.is_finite() {
        fmt_sig(v, prec)
    } else {
        "null".into()
    }
}

#[derive(Default)]
pub struct Record {
    fields: Vec<(&'static str, Field)>,
}

pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn num(mut self, key: &'static str, v: f64) -> Self {
        self.fields.push((key, Field::Num(v)));
        self
    }

    pub fn int(mut self, key: &'static str, v: u64) -> Self {
        self.fields.push((key, Field::Int(v)));
        self
    }

    pub fn flag(mut self, key: &'static str, v: bool) -> Self {
        self.fields.push((key, Field::Bool(v)));
        self
    }

    pub fn text(mut self, key: &'static str, v: String) -> Self {
        self.fields.push((key, Field::Text(v)));
        self
    }

    pub fn csv_header(&self) -> String {
        self.fields
            .iter()
            .map(|(k, _)| *k)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self, prec: usize) -> String {
        self.fields
            .iter()
            .map(|(_, f)| match f {
                Field::Num(v) => fmt_sig(*v, prec),
                Field::Int(v) => v.to_string(),
                Field::Bool(v) => v.to_string(),
                Field::Text(t) => t.clone(),
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn json_line(&self, prec: usize) -> String {
        let body = self
            .fields
            .iter()
            .map(|(k, f)| {
                let value = match f {
                    Field::Num(v) => json_num(*v, prec),
                    Field::Int(v) => v.to_string(),
                    Field::Bool(v) => v.to_string(),
                    Field::Text(t) => format!("\"{}\"", t.replace('\\', "\\\\").replace('"', "\\\"")),
                };
                format!("\"{k}\":{value}")
            })
            .collect::<Vec<_>>()
            .join(",");
        format!("{{{body}}}")
    }
}
