use std::fmt::Write as _;

use super::runner::{BenchMethod, BenchReport, Deviation, RunRow};
use super::suite::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

/// `v` with `digits` significant digits, in `%g` style: positional for
/// moderate exponents, scientific otherwise. Trailing zeros are kept.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (_, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn deviation_text(d: Deviation) -> String {
    match d {
        Deviation::Count(n) if n > 0 => format!("+{n}"),
        Deviation::Count(n) => n.to_string(),
        Deviation::LabelMatch => "label".into(),
        Deviation::WrongRoot => "WRONG_ROOT".into(),
        Deviation::StatusMismatch => "mismatch".into(),
    }
}

fn csv_report(report: &BenchReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = "writing to memory cannot fail";
    w.write_record([
        "problem",
        "start",
        "method",
        "status",
        "root",
        "iterations",
        "final_rate",
        "expected",
        "deviation",
    ])
    .expect(io);
    for row in &report.rows {
        let o = &row.outcome;
        w.write_record([
            row.problem.to_string(),
            row.start.to_string(),
            row.method.as_str().to_string(),
            o.status.to_string(),
            format_sig(o.root, 15),
            o.iterations.to_string(),
            row.final_rate.map(|c| format_sig(c, 15)).unwrap_or_default(),
            row.expected.to_string(),
            deviation_text(row.deviation),
        ])
        .expect(io);
    }
    String::from_utf8(w.into_inner().expect(io)).expect("csv output is utf-8")
}

fn cell(row: Option<&RunRow>) -> String {
    let Some(row) = row else {
        return String::new();
    };
    let got = match row.deviation {
        Deviation::Count(_) => row.outcome.iterations.to_string(),
        Deviation::WrongRoot => format!("{} (wrong root)", row.outcome.iterations),
        _ if row.outcome.status.is_converged() => row.outcome.iterations.to_string(),
        _ => row.outcome.status.to_string(),
    };
    format!("{got} [{}]", row.expected)
}

fn markdown_report(report: &BenchReport) -> String {
    // column order of the published tables
    const COLUMNS: [(BenchMethod, &str); 4] = [
        (BenchMethod::Secant, "Secant"),
        (BenchMethod::Newton, "Newton"),
        (BenchMethod::Lsq3Fixed, "N = 1"),
        (BenchMethod::Lsq3Variable, "N variable"),
    ];
    let present: Vec<_> = COLUMNS
        .iter()
        .filter(|(m, _)| report.rows.iter().any(|r| r.method == *m))
        .collect();
    let mut out = String::new();
    let mut i = 0;
    while i < report.rows.len() {
        let problem = report.rows[i].problem;
        let end = i + report.rows[i..].iter().take_while(|r| r.problem == problem).count();
        let rows = &report.rows[i..end];
        let table = match rows[0].table {
            Table::Comparison => "comparison",
            Table::Failures => "failure cases",
        };
        let _ = writeln!(out, "### {problem} ({table})\n");
        out.push_str("| start |");
        for (_, title) in &present {
            let _ = write!(out, " {title} |");
        }
        out.push_str("\n|---:|");
        out.push_str(&"---:|".repeat(present.len()));
        out.push('\n');
        let mut starts: Vec<f64> = Vec::new();
        for r in rows {
            if !starts.contains(&r.start) {
                starts.push(r.start);
            }
        }
        for s in starts {
            let _ = write!(out, "| {s} |");
            for (m, _) in &present {
                let row = rows.iter().find(|r| r.start == s && r.method == *m);
                let _ = write!(out, " {} |", cell(row));
            }
            out.push('\n');
        }
        out.push('\n');
        i = end;
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "Runs: {}, converged: {}, within ±{} of published: {}, wrong root: {}. \
         Cells read `got [published]`.",
        s.runs, s.converged, report.count_band, s.within_band, s.wrong_root
    );
    out
}

pub fn emit_report(report: &BenchReport, format: Format) -> String {
    match format {
        Format::Csv => csv_report(report),
        Format::Markdown => markdown_report(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.3652300134140969, 15), "1.36523001341410");
        assert_eq!(format_sig(-1.4044916482153412, 15), "-1.40449164821534");
        assert_eq!(format_sig(2.0, 15), "2.00000000000000");
        assert_eq!(format_sig(1e-22, 15), "1.00000000000000e-22");
        assert_eq!(format_sig(0.0, 3), "0.00");
        assert_eq!(format_sig(123456.0, 3), "1.23e5");
        assert_eq!(format_sig(0.000123, 3), "0.000123");
    }
}
