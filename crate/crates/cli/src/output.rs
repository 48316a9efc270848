use std::io::{ErrorKind, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

/// `1 + 4t + 10t^2 - 14t^7`.
pub fn series(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        let mag = c.unsigned_abs();
        let body = if mag == 1 && i > 0 { mono } else { format!("{mag}{mono}") };
        if out.is_empty() {
            out = if c < 0 { format!("-{body}") } else { body };
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn list<T: ToString>(v: &[T]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

/// `(1-t)^3` or `(1-t^2)(1-t^3)`.
pub fn denominator(degrees: &[u32]) -> String {
    if degrees.is_empty() {
        return "1".into();
    }
    if degrees.iter().all(|&d| d == degrees[0]) && degrees.len() > 1 {
        let f = if degrees[0] == 1 { "(1-t)".to_string() } else { format!("(1-t^{})", degrees[0]) };
        return format!("{f}^{}", degrees.len());
    }
    degrees
        .iter()
        .map(|&d| if d == 1 { "(1-t)".to_string() } else { format!("(1-t^{d})") })
        .collect()
}

/// Write `value` to `path` (stdout for `-`); print `text` unless JSON went to stdout.
pub fn emit(json: Option<&Path>, value: &Value, text: &str) -> Result<()> {
    match json {
        Some(p) if p.as_os_str() == "-" => stdout(&(serde_json::to_string_pretty(value)? + "\n")),
        Some(p) => {
            std::fs::write(p, serde_json::to_string_pretty(value)? + "\n")
                .with_context(|| format!("writing {}", p.display()))?;
            log::info!("wrote {}", p.display());
            stdout(text)
        }
        None => stdout(text),
    }
}

/// A closed pipe (`acm ... | head`) is not an error.
fn stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing stdout"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_format() {
        assert_eq!(series(&[1, 4, 0, -1]), "1 + 4t - t^3");
        assert_eq!(series(&[0, 1, 1]), "t + t^2");
        assert_eq!(series(&[0]), "0");
    }

    #[test]
    fn denominator_format() {
        assert_eq!(denominator(&[1, 1, 1]), "(1-t)^3");
        assert_eq!(denominator(&[2, 3]), "(1-t^2)(1-t^3)");
    }
}
