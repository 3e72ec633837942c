use std::fmt::Write as _;

use super::CliError;

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Num(x) => x,
            Cell::Int(n) => n as f64,
            Cell::Bool(b) => b as u8 as f64,
        }
    }

    fn write(&self, out: &mut String) {
        // `{:?}` on f64 is the shortest representation that round-trips.
        let _ = match self {
            Cell::Num(x) => write!(out, "{x:?}"),
            Cell::Int(n) => write!(out, "{n}"),
            Cell::Bool(b) => write!(out, "{b}"),
        };
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Rectangular table of finite cells with `#` metadata lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::assertion(format!(
                "row of {} cells for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some((i, c)) = row.iter().enumerate().find(|(_, c)| !c.as_f64().is_finite()) {
            return Err(CliError::non_convergence(format!(
                "non-finite value {:?} in column {}",
                c.as_f64(),
                self.columns[i]
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn annotate(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Header and data rows only.
    pub fn body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {}", v.replace('\n', " "));
        }
        out + &self.body()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(&["x", "n", "ok"]);
        t.annotate("command", "test");
        t.push(vec![0.1.into(), 3usize.into(), true.into()]).unwrap();
        t.push(vec![1e-300.into(), 0usize.into(), false.into()]).unwrap();
        assert_eq!(t.to_csv(), "# command: test\nx,n,ok\n0.1,3,true\n1e-300,0,false\n");
        assert_eq!(t.column("n"), Some(vec![3.0, 0.0]));
        assert!(t.column("y").is_none());
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        let mut t = ResultTable::new(&["x"]);
        assert!(t.push(vec![1.0.into(), 2.0.into()]).is_err());
        assert!(t.push(vec![f64::NAN.into()]).is_err());
        assert!(t.is_empty());
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1 + 0.2, std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -0.0] {
            let mut s = String::new();
            Cell::Num(x).write(&mut s);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
