use std::fmt;
use std::io::Write;

use crate::error::Result;

use super::data::SolutionErrors;

/// Column order of the error tables.
pub const COLUMNS: [&str; 5] = ["E_v", "E_u_L2", "E_psi_L2", "E_u_H1", "E_psi_H1"];

/// One refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub h: f64,
    pub kappa: Option<f64>,
    /// Relative errors in [`COLUMNS`] order.
    pub errors: [f64; 5],
}

impl TableRow {
    pub fn new(h: f64, kappa: Option<f64>, e: &SolutionErrors) -> Self {
        TableRow {
            h,
            kappa,
            errors: [e.v.relative(), e.u.l2.relative(), e.psi.l2.relative(), e.u.h1.relative(), e.psi.h1.relative()],
        }
    }
}

/// `log₂(coarse / fine)`.
pub fn ecr(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Relative errors and estimated convergence rates over a refinement ladder.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<TableRow>,
}

impl ConvergenceTable {
    pub fn push(&mut self, row: TableRow) {
        self.rows.push(row);
    }

    /// Rates of row `i` against row `i - 1`; `None` for the first row.
    pub fn rates(&self, i: usize) -> Option<[f64; 5]> {
        if i == 0 || i >= self.rows.len() {
            return None;
        }
        let (a, b) = (&self.rows[i - 1].errors, &self.rows[i].errors);
        Some(std::array::from_fn(|k| ecr(a[k], b[k])))
    }

    /// Rates at the finest level.
    pub fn final_rates(&self) -> Option<[f64; 5]> {
        self.rates(self.rows.len().saturating_sub(1))
    }

    /// CSV with an error and a rate column per quantity; rates of the first
    /// row are `-`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let time = self.rows.iter().any(|r| r.kappa.is_some());
        write!(w, "h")?;
        if time {
            write!(w, ",kappa")?;
        }
        for c in COLUMNS {
            write!(w, ",{c},ecr_{c}")?;
        }
        writeln!(w)?;
        for (i, r) in self.rows.iter().enumerate() {
            write!(w, "{}", r.h)?;
            if time {
                write!(w, ",{}", r.kappa.unwrap_or(f64::NAN))?;
            }
            let rates = self.rates(i);
            for k in 0..5 {
                write!(w, ",{:.6e}", r.errors[k])?;
                match rates {
                    Some(q) => write!(w, ",{:.4}", q[k])?,
                    None => write!(w, ",-")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>8} {:>10}", "h", "kappa")?;
        for c in COLUMNS {
            write!(f, " {c:>10} {:>6}", "ecr")?;
        }
        writeln!(f)?;
        for (i, r) in self.rows.iter().enumerate() {
            let kappa = r.kappa.map(|k| format!("{k:.3e}")).unwrap_or_else(|| "-".into());
            write!(f, "{:>8.4} {:>10}", r.h, kappa)?;
            let rates = self.rates(i);
            for k in 0..5 {
                let q = rates.map(|q| format!("{:.3}", q[k])).unwrap_or_else(|| "-".into());
                write!(f, " {:>10.3e} {q:>6}", r.errors[k])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
