//! CSV emission with a fixed header and 9 significant digits.

use std::fmt::Write;

/// `v` with 9 significant digits, trailing zeros trimmed.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let s = if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, v)
    } else {
        format!("{v:.8e}")
    };
    trim(s)
}

fn trim(s: String) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => (s[..i].to_string(), s[i..].to_string()),
        None => (s, String::new()),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        mantissa
    };
    // rounding can leave "-0"
    let mantissa = if mantissa == "-0" { "0".to_string() } else { mantissa };
    mantissa + &exp
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(0.5145247), "0.5145247");
        assert_eq!(num(1.0 / 3.0), "0.333333333");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(123456789.4), "123456789");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(-2.5e10), "-2.5e10");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(-1e-300 * 1e-300), "0");
    }
}
