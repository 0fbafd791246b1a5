//! CSV tables: `# key = value` header comments, a column header, numeric
//! body rows, then `key,value` footer rows.

use mlosc_core::bounds::{fit_decay, BoundReport, Theorem2Report};

use crate::error::CliError;
use crate::svg::LogLogPlot;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<(String, String)>,
}

/// Shortest representation that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

impl CsvTable {
    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn footer_value(&self, key: &str) -> Option<&str> {
        self.footer.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        if !self.columns.is_empty() {
            w.write_record(&self.columns)?;
        }
        for row in &self.rows {
            w.write_record(row.iter().map(|v| num(*v)))?;
        }
        for (k, v) in &self.footer {
            w.write_record([k, v])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        Ok(out)
    }

    pub fn from_csv(src: &str) -> Result<Self, CliError> {
        let mut table = CsvTable::default();
        let mut body = String::new();
        for line in src.lines() {
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| CliError::Input(format!("malformed header comment '{line}'")))?;
                table.header.push((k.trim().to_string(), v.trim().to_string()));
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut r = csv::ReaderBuilder::new()
            .flexible(true)
            .has_headers(false)
            .from_reader(body.as_bytes());
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let fields: Vec<&str> = rec.iter().collect();
            let numeric: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
            match numeric {
                Some(vals) if i > 0 && !table.columns.is_empty() && table.footer.is_empty() => {
                    if vals.len() != table.columns.len() {
                        return Err(CliError::Input(format!(
                            "row {} has {} fields, expected {}",
                            i + 1,
                            vals.len(),
                            table.columns.len()
                        )));
                    }
                    table.rows.push(vals);
                }
                _ if i == 0 && fields.len() > 2 => {
                    table.columns = fields.iter().map(|s| s.to_string()).collect();
                }
                _ if fields.len() == 2 => table.footer.push((fields[0].to_string(), fields[1].to_string())),
                _ => return Err(CliError::Input(format!("unexpected CSV record {}", i + 1))),
            }
        }
        Ok(table)
    }

    /// Log-log plot of `measured` against the `plot_x` column with a fitted
    /// power law.
    pub fn plot(&self) -> LogLogPlot {
        let x_name = self.header_value("plot_x").unwrap_or("mu").to_string();
        let y_name = self.header_value("plot_y").unwrap_or("measured").to_string();
        let points: Vec<(f64, f64)> = match (self.column(&x_name), self.column(&y_name)) {
            (Some(xs), Some(ys)) => xs.into_iter().zip(ys).collect(),
            _ => Vec::new(),
        };
        let usable: Vec<(f64, f64)> = points
            .iter()
            .copied()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .collect();
        let title = match self.header_value("theorem") {
            Some(t) => format!("{t}: {y_name} vs {x_name}"),
            None => format!("{y_name} vs {x_name}"),
        };
        LogLogPlot {
            title,
            x_label: x_name,
            y_label: y_name,
            points,
            fit: fit_decay(&usable).ok(),
            linear_x: false,
        }
    }
}

fn summary_footer(r: &BoundReport, suffix: &str) -> Vec<(String, String)> {
    let mut out = vec![
        (format!("c_fit{suffix}"), num(r.c_fit)),
        (format!("c_fit_refined{suffix}"), num(r.c_fit_refined)),
        (format!("drift{suffix}"), num(r.drift)),
        (
            format!("slope_fit{suffix}"),
            r.slope_fit.map_or_else(|| "none".into(), num),
        ),
        (format!("skipped{suffix}"), r.skipped.to_string()),
        (format!("verdict{suffix}"), r.verdict.as_str().into()),
    ];
    out.extend(r.notes.iter().map(|(k, v)| (format!("note{suffix}:{k}"), v.clone())));
    out
}

pub fn report_table(header: Vec<(String, String)>, r: &BoundReport) -> CsvTable {
    let mut columns = r.param_names.clone();
    columns.extend(["measured", "rhs", "ratio"].map(String::from));
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let mut v = row.params.clone();
            v.extend([row.measured, row.rhs, row.ratio]);
            v
        })
        .collect();
    CsvTable {
        header,
        columns,
        rows,
        footer: summary_footer(r, ""),
    }
}

/// Both exponents side by side; the 1/α columns and footers carry an
/// `_alpha` suffix.
pub fn theorem2_table(header: Vec<(String, String)>, r: &Theorem2Report) -> CsvTable {
    let mut t = report_table(header, &r.by_degree);
    t.columns.extend(["rhs_alpha", "ratio_alpha"].map(String::from));
    for (row, a) in t.rows.iter_mut().zip(&r.by_alpha.rows) {
        row.extend([a.rhs, a.ratio]);
    }
    t.footer.extend(summary_footer(&r.by_alpha, "_alpha"));
    for (f, (g, m)) in r.alpha_growth.iter().zip(&r.alpha_monotone).enumerate() {
        t.footer.push((format!("alpha_growth:{f}"), num(*g)));
        t.footer.push((format!("alpha_monotone:{f}"), m.to_string()));
    }
    t
}
