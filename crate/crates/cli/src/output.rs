use fracseries::series::Sign;
use fracseries::EvalResult;

/// Seventeen significant digits with a dot separator, independent of locale.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_value(v: &EvalResult) -> String {
    match v {
        EvalResult::Finite(x) => fmt_num(*x),
        EvalResult::Infinite(Sign::Minus) => "-inf".into(),
        EvalResult::Infinite(_) => "inf".into(),
        EvalResult::SingularTransform(_) => "singular".into(),
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    /// CSV with a header row, or space-aligned columns.
    pub fn render(&self, csv: bool) -> String {
        let all = std::iter::once(&self.header).chain(&self.rows);
        if csv {
            return all.map(|r| r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n").collect();
        }
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| all.clone().map(|r| r.get(i).map_or(0, |c| c.len())).max().unwrap_or(0))
            .collect();
        all.map(|r| {
            let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            line.join("  ").trim_end().to_string() + "\n"
        })
        .collect()
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
