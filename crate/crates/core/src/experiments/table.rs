//! Rectangular result tables with a key=value metadata block, rendered as
//! CSV or as an SVG line chart.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ToolError;

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Real(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // shortest representation that parses back to the same value
            Cell::Real(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Which columns an SVG rendering plots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x: String,
    pub y: String,
    /// Columns whose values together identify one polyline.
    pub series: Vec<String>,
    /// Keep only rows whose column equals the given text.
    pub filter: Option<(String, String)>,
}

/// A table of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    metadata: Vec<(String, String)>,
    chart: Option<ChartSpec>,
}

/// Output format for [`ResultTable::emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, ToolError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(ToolError::Config(format!("unknown output format '{other}'"))),
        }
    }
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
            chart: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.metadata.push((key, value)),
        }
    }

    pub fn with_chart(mut self, chart: ChartSpec) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn chart(&self) -> Option<&ChartSpec> {
        self.chart.as_ref()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows whose rendered cells equal the given values.
    pub fn rows_where<'a>(&'a self, conditions: &[(&str, &str)]) -> Vec<&'a [Cell]> {
        let idx: Vec<(usize, &str)> = conditions
            .iter()
            .filter_map(|(c, v)| self.column(c).map(|i| (i, *v)))
            .collect();
        if idx.len() != conditions.len() {
            return Vec::new();
        }
        self.rows
            .iter()
            .filter(|r| idx.iter().all(|(i, v)| r[*i].render() == *v))
            .map(Vec::as_slice)
            .collect()
    }

    /// Numeric value of `column` in the single row matching `conditions`.
    pub fn value(&self, conditions: &[(&str, &str)], column: &str) -> Option<f64> {
        let c = self.column(column)?;
        match self.rows_where(conditions).as_slice() {
            [row] => row[c].as_f64(),
            _ => None,
        }
    }

    /// CSV text: `# key=value` lines, a header row, then data rows.
    pub fn to_csv(&self) -> Result<String, ToolError> {
        if self.rows.is_empty() {
            return Err(ToolError::Config("refusing to emit an empty table".into()));
        }
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| ToolError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ToolError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| ToolError::Io(e.to_string()))?);
        Ok(out)
    }

    /// SVG line chart of the table's [`ChartSpec`], one polyline per series.
    pub fn to_svg(&self) -> Result<String, ToolError> {
        if self.rows.is_empty() {
            return Err(ToolError::Config("refusing to emit an empty table".into()));
        }
        let chart = self
            .chart
            .as_ref()
            .ok_or_else(|| ToolError::Config("this table has no chart layout; use csv".into()))?;
        let col = |name: &str| {
            self.column(name)
                .ok_or_else(|| ToolError::Config(format!("chart column '{name}' missing")))
        };
        let (xi, yi) = (col(&chart.x)?, col(&chart.y)?);
        let si: Vec<usize> = chart.series.iter().map(|s| col(s)).collect::<Result<_, _>>()?;
        let keep = match &chart.filter {
            Some((c, v)) => Some((col(c)?, v.as_str())),
            None => None,
        };
        let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        let mut order = Vec::new();
        for row in &self.rows {
            if let Some((c, v)) = keep {
                if row[c].render() != v {
                    continue;
                }
            }
            let (Some(x), Some(y)) = (row[xi].as_f64(), row[yi].as_f64()) else { continue };
            let key = si.iter().map(|&i| row[i].render()).collect::<Vec<_>>().join(" ");
            if !series.contains_key(&key) {
                order.push(key.clone());
            }
            series.entry(key).or_default().push((x, y));
        }
        if series.is_empty() {
            return Err(ToolError::Config("no plottable rows".into()));
        }
        let pts = series.values().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const L: f64 = 70.0;
        const R: f64 = 160.0;
        const T: f64 = 40.0;
        const B: f64 = 50.0;
        let sx = |x: f64| L + (x - x0) / (x1 - x0) * (W - L - R);
        let sy = |y: f64| H - B - (y - y0) / (y1 - y0) * (H - T - B);
        const PALETTE: [&str; 8] = [
            "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
        ];

        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W:.0}\" height=\"{H:.0}\" viewBox=\"0 0 {W:.0} {H:.0}\">"
        );
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            (W - R + L) / 2.0,
            escape(&chart.title)
        );
        let _ = writeln!(
            s,
            "<path d=\"M {:.3} {:.3} L {:.3} {:.3} L {:.3} {:.3}\" fill=\"none\" stroke=\"black\"/>",
            L,
            T,
            L,
            H - B,
            W - R,
            H - B
        );
        for (v, x, anchor) in [(x0, sx(x0), "start"), (x1, sx(x1), "end")] {
            let _ = writeln!(
                s,
                "<text x=\"{x:.3}\" y=\"{:.3}\" font-size=\"11\" text-anchor=\"{anchor}\">{v:.3}</text>",
                H - B + 16.0
            );
        }
        for (v, y) in [(y0, sy(y0)), (y1, sy(y1))] {
            let _ = writeln!(
                s,
                "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" text-anchor=\"end\">{v:.3}</text>",
                L - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            (L + W - R) / 2.0,
            H - 12.0,
            escape(&chart.x)
        );
        let _ = writeln!(
            s,
            "<text x=\"18\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.3})\">{}</text>",
            (T + H - B) / 2.0,
            (T + H - B) / 2.0,
            escape(&chart.y)
        );
        for (k, key) in order.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let points: Vec<String> = series[key]
                .iter()
                .map(|(x, y)| format!("{:.3},{:.3}", sx(*x), sy(*y)))
                .collect();
            let _ = writeln!(
                s,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"><title>{}</title></polyline>",
                points.join(" "),
                escape(key)
            );
            let ly = T + 14.0 * k as f64;
            let _ = writeln!(
                s,
                "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" fill=\"{color}\">{}</text>",
                W - R + 10.0,
                ly + 4.0,
                escape(key)
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String, ToolError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Svg => self.to_svg(),
        }
    }

    /// Writes the rendered table to `path`.
    pub fn emit(&self, format: Format, path: impl AsRef<Path>) -> Result<(), ToolError> {
        let text = self.render(format)?;
        let path = path.as_ref();
        fs::write(path, text).map_err(|e| ToolError::Io(format!("{}: {e}", path.display())))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Reads the `# key=value` block at the top of a result CSV.
pub fn parse_metadata(csv_text: &str) -> Vec<(String, String)> {
    csv_text
        .lines()
        .map_while(|l| l.strip_prefix('#'))
        .filter_map(|l| {
            let (k, v) = l.trim_start().split_once('=')?;
            Some((k.to_string(), v.to_string()))
        })
        .collect()
}
