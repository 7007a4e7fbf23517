use crate::CliError;
use porism_core::centers::CenterId;
use porism_core::chain::chain_at_with;
use porism_core::invariants::{half_tangent_sum, SignRule};
use porism_core::locus::{LocusResult, LocusSweep};
use porism_core::{PorismConfig, ToleranceSet};
use serde::Serialize;

/// Shortest decimal that round-trips; empty for non-finite values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn sweep_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 1..=n {
        h.push(format!("x{i}"));
        h.push(format!("y{i}"));
    }
    for i in 1..=n {
        h.push(format!("cx{i}"));
        h.push(format!("cy{i}"));
    }
    h.extend(["ix", "iy", "r", "tau"].map(String::from));
    h.extend((2..n).map(|k| format!("p{k}")));
    h
}

/// One row per sample phase. A phase where the chain degenerates keeps its
/// `t` and leaves the other cells empty.
pub fn sweep_csv(cfg: &PorismConfig, samples: usize, tol: &ToleranceSet) -> Result<String, CliError> {
    let n = cfg.n();
    let header = sweep_header(n);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(|e| CliError::Runtime(e.to_string()))?;
    for j in 0..samples {
        let t = cfg.sample_phase(j, samples);
        let mut row = vec![num(t)];
        if let Ok(ch) = chain_at_with(cfg, t, tol) {
            for c in &ch.circles {
                row.push(num(c.center.x));
                row.push(num(c.center.y));
            }
            for p in &ch.contacts {
                row.push(num(p.x));
                row.push(num(p.y));
            }
            row.push(num(ch.caustic.center.x));
            row.push(num(ch.caustic.center.y));
            row.push(num(ch.caustic.radius));
            for k in 1..n as i32 {
                row.push(half_tangent_sum(&ch, k, SignRule::default()).map(num).unwrap_or_default());
            }
        }
        row.resize(header.len(), String::new());
        w.write_record(&row).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    finish(w)
}

#[derive(Serialize)]
struct Header<'a> {
    center: u32,
    #[serde(flatten)]
    result: &'a LocusResult,
}

pub fn classification_json(id: CenterId, result: &LocusResult) -> String {
    serde_json::to_string(&Header { center: id.index(), result }).expect("classification serializes")
}

/// `t,x,y` per phase, gaps left empty, optionally preceded by the
/// classification as a `#` comment line.
pub fn locus_csv(sweep: &LocusSweep, classification: Option<&LocusResult>) -> Result<String, CliError> {
    let mut out = String::new();
    if let Some(c) = classification {
        out.push_str("# ");
        out.push_str(&classification_json(sweep.id, c));
        out.push('\n');
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "x", "y"]).map_err(|e| CliError::Runtime(e.to_string()))?;
    for (t, p) in sweep.phases.iter().zip(&sweep.points) {
        let (x, y) = p.map(|p| (num(p.x), num(p.y))).unwrap_or_default();
        w.write_record([num(*t), x, y]).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    out.push_str(&finish(w)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-17, 1e300, 3f64.sqrt()] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(f64::NAN), "");
        assert_eq!(num(2.0), "2");
    }

    #[test]
    fn header_width() {
        assert_eq!(sweep_header(3).len(), 1 + 6 + 6 + 3 + 2);
        assert_eq!(sweep_header(5).last().unwrap(), "p4");
    }
}
