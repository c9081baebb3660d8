//! Artifact serialization: fixed-format CSV, pretty JSON with a trailing
//! newline, and plain text passthrough. Everything is written with LF line
//! endings and a "." decimal point regardless of locale, so reruns of the
//! same campaign produce byte-identical files.

use std::fs;
use std::path::Path;

use crate::campaign::CampaignError;

/// All floating-point artifact columns use `{:.16e}`: 17 significant digits,
/// enough to reconstruct the exact f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV buffer with a fixed header row.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut buf = String::with_capacity(256);
        buf.push_str(header);
        buf.push('\n');
        Self { buf }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(f.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn json_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes an artifact file; I/O failures are usage errors (bad --out), not
/// numeric ones.
pub fn write_file(path: &Path, content: &str) -> Result<(), CampaignError> {
    fs::write(path, content)
        .map_err(|e| CampaignError::Config(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_the_column_format() {
        for v in [
            0.0,
            -1.0 / 3.0,
            6.02214076e23,
            f64::MIN_POSITIVE,
            -44.326801388273756,
        ] {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "{v}");
        }
    }

    #[test]
    fn csv_layout_is_lf_terminated() {
        let mut csv = Csv::new("a,b");
        csv.row(&["1", "2"]);
        csv.row(&[fmt_f64(0.5), fmt_f64(-1.0)]);
        let text = csv.finish();
        assert_eq!(text, "a,b\n1,2\n5.0000000000000000e-1,-1.0000000000000000e0\n");
    }

    #[test]
    fn json_gets_a_trailing_newline() {
        let v = serde_json::json!({"k": 1});
        let s = json_pretty(&v);
        assert!(s.ends_with("}\n"));
    }
}
