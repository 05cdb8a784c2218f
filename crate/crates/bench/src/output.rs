use std::io::Write;
use std::path::Path;

use sr2fista::TraceRecord;

use crate::error::BenchError;

pub const CSV_HEADER: [&str; 7] = [
    "k",
    "f_gap",
    "lyapunov",
    "schedule_residual",
    "eta",
    "bound_sublinear",
    "bound_linear",
];

/// 17 significant digits; `NaN` for unavailable fields.
pub fn format_real(v: Option<f64>) -> String {
    match v {
        Some(x) if !x.is_nan() => format!("{x:.16e}"),
        _ => "NaN".to_string(),
    }
}

pub fn trace_row(r: &TraceRecord) -> [String; 7] {
    [
        r.k.to_string(),
        format_real(Some(r.f_gap)),
        format_real(r.lyapunov),
        format_real(r.schedule_residual),
        format_real(r.eta),
        format_real(r.bound_sublinear),
        format_real(r.bound_linear),
    ]
}

pub fn write_trace_csv<W: Write>(out: W, trace: &[TraceRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in trace {
        w.write_record(trace_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trace_csv(path: &Path, trace: &[TraceRecord]) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(BenchError::io(path))?;
    write_trace_csv(std::io::BufWriter::new(file), trace).map_err(BenchError::csv(path))
}
