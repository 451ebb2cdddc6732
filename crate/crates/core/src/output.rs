//! Tabular output: CSV with `#` metadata lines, JSON, and tables for SVG.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Nine significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if x == 0.0 {
        // Folds −0 into 0 so sign-of-zero noise never reaches the output.
        "0.00000000e0".into()
    } else {
        format!("{x:.8e}")
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Bool(b) => Some(f64::from(u8::from(*b))),
            _ => None,
        }
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric values of a column, `None` where the cell is empty or text.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        match self.column(name) {
            Some(k) => self.rows.iter().map(|r| r[k].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self, meta: &[String]) -> String {
        let mut s = String::new();
        for m in meta {
            s.push_str("# ");
            s.push_str(m);
            s.push('\n');
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// `{"config": …, "data": …}`, pretty-printed with a trailing newline.
pub fn to_json<C: Serialize, D: Serialize>(config: &C, data: &D) -> String {
    #[derive(Serialize)]
    struct Doc<'a, C, D> {
        config: &'a C,
        data: &'a D,
    }
    let mut s = serde_json::to_string_pretty(&Doc { config, data }).expect("output serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_num(388.18395), "3.88183950e2");
        assert_eq!(fmt_num(-0.0), "0.00000000e0");
        assert_eq!(Cell::from("a,b").render(), "\"a,b\"");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "flag"]);
        t.push(vec![1.5.into(), true.into()]);
        t.push(vec![Cell::Empty, false.into()]);
        assert_eq!(
            t.to_csv(&["k: v".into()]),
            "# k: v\nx,flag\n1.50000000e0,true\n,false\n"
        );
    }
}
