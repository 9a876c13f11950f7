//! JSON and CSV rendering. CSV numbers carry 17 significant digits so
//! values round-trip exactly; non-finite values are spelled out.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use mixsmooth_core::embedding::{format_rational, BigRational, EmbeddingVerdict, ExtRational};
use mixsmooth_core::space_norms::{NormReport, Theta};
use serde_json::{json, Value};

/// CSV cell with full precision.
pub fn csv_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// JSON number, or a string for values JSON cannot hold.
pub fn json_num(v: f64) -> Value {
    match serde_json::Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => Value::String(csv_num(v)),
    }
}

pub fn json_nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json_num(x)).collect())
}

pub fn theta_json(t: Theta) -> Value {
    match t {
        Theta::Finite(x) => json_num(x),
        Theta::Infinite => Value::String("inf".into()),
    }
}

pub fn norm_report_json(r: &NormReport) -> Value {
    json!({
        "value": json_num(r.value),
        "base_norm": json_num(r.base_norm),
        "series": json_num(r.series),
        "truncation_tail_estimate": json_num(r.truncation_tail_estimate),
        "terms": r.terms.iter().map(|t| json!({ "index": t.index, "value": json_num(t.value) })).collect::<Vec<_>>(),
    })
}

fn rat(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

fn rat_f64(q: &BigRational) -> Value {
    json_num(ExtRational::Finite(q.clone()).to_f64())
}

pub fn verdict_json(v: &EmbeddingVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "family": w.family.as_str(),
            "axis": w.axis,
            "delta": rat(&w.delta),
            "delta_value": rat_f64(&w.delta),
            "window": [rat(&w.window.0), rat(&w.window.1)],
            "t": w.aux_t.as_ref().map(rat),
            "xi": w.xi.as_ref().map(|x| x.iter().map(rat).collect::<Vec<_>>()),
            "epsilon": w.epsilon.as_ref().map(rat),
        })
    });
    json!({
        "status": v.status.as_str(),
        "rule": v.rule.as_str(),
        "witness": witness,
        "reason": v.reason,
        "notes": v.notes,
    })
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn emit_json(path: Option<&Path>, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(path, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5e17] {
            let s = csv_num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(csv_num(f64::INFINITY), "inf");
        assert_eq!(json_num(f64::INFINITY), Value::String("inf".into()));
    }
}
