//! CSV emission. Numbers carry 17 significant digits in scientific form,
//! rows end in `\n`, and nothing depends on the locale.

use std::fmt::Write;

use singlet_core::analysis::SweepGrid;
use singlet_core::dynamics::EvolutionResult;

/// `{:.16e}` of `x`: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "row width");
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(&num(*v));
        }
        self.buf.push('\n');
    }

    /// A `quantity,value` row.
    pub fn labelled(&mut self, label: &str, value: f64) {
        let _ = writeln!(self.buf, "{label},{}", num(value));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn sweep_csv(grid: &SweepGrid) -> String {
    let mut csv = Csv::new(&["x", "y", "fidelity"]);
    for (ix, x) in grid.x_values.iter().enumerate() {
        for (iy, y) in grid.y_values.iter().enumerate() {
            csv.row(&[*x, *y, grid.get(ix, iy)]);
        }
    }
    csv.finish()
}

pub fn evolution_csv(r: &EvolutionResult) -> String {
    let mut csv = Csv::new(&["t", "fidelity", "trace", "purity"]);
    for i in 0..r.times.len() {
        csv.row(&[r.times[i], r.fidelities[i], r.traces[i], r.purities[i]]);
    }
    csv.finish()
}
