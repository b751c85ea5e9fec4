//! Deterministic output formatting.
//!
//! Every floating-point value is printed with 12 significant digits
//! (round-half-even, `%.12g` style), so identical invocations produce
//! byte-identical output and CSV and JSON runs carry identical numerics.

use superosc::Interval;

/// `%.12g`: fixed notation for decimal exponents in `[-4, 12)`, scientific
/// otherwise, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("e-notation");
    let exponent: i32 = exponent.parse().expect("exponent");
    if (-4..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Ordered JSON object builder.
#[derive(Default)]
pub struct JsonObj {
    parts: Vec<String>,
}

impl JsonObj {
    pub fn new() -> Self {
        JsonObj::default()
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.parts
            .push(format!("\"{}\":\"{}\"", json_escape(key), json_escape(value)));
        self
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.parts
            .push(format!("\"{}\":{}", json_escape(key), fmt_sig(value)));
        self
    }

    pub fn int(mut self, key: &str, value: usize) -> Self {
        self.parts.push(format!("\"{}\":{value}", json_escape(key)));
        self
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.parts.push(format!("\"{}\":{value}", json_escape(key)));
        self
    }

    pub fn raw(mut self, key: &str, value: String) -> Self {
        self.parts.push(format!("\"{}\":{value}", json_escape(key)));
        self
    }

    pub fn finish(self) -> String {
        format!("{{{}}}", self.parts.join(","))
    }
}

pub fn json_interval(i: &Interval) -> String {
    JsonObj::new()
        .num("b1", i.lower())
        .num("b2", i.upper())
        .finish()
}

pub fn json_array(items: impl IntoIterator<Item = String>) -> String {
    let items: Vec<String> = items.into_iter().collect();
    format!("[{}]", items.join(","))
}

/// RFC-4180 field quoting: quote when the field holds a comma, quote, or
/// line break.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}
