use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::fock::{DensityMatrix, SpaceDescriptor, StateVector};

/// Populations sampled along an evolution, thinned to at most one row per
/// `interval` seconds.
#[derive(Debug, Clone)]
pub struct Trajectory {
    space: SpaceDescriptor,
    interval: f64,
    last: Option<f64>,
    rows: Vec<(f64, Vec<f64>)>,
}

impl Trajectory {
    pub fn new(space: SpaceDescriptor, interval: f64) -> Self {
        Self { space, interval, last: None, rows: Vec::new() }
    }

    fn due(&mut self, t: f64) -> bool {
        match self.last {
            Some(prev) if t - prev < self.interval => false,
            _ => {
                self.last = Some(t);
                true
            }
        }
    }

    pub fn record_state(&mut self, t: f64, state: &StateVector) {
        if self.due(t) {
            let pops = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
            self.rows.push((t, pops));
        }
    }

    pub fn record_density(&mut self, t: f64, rho: &DensityMatrix) {
        if self.due(t) {
            let pops = rho.entries().diag().iter().map(|z| z.re).collect();
            self.rows.push((t, pops));
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[(f64, Vec<f64>)] {
        &self.rows
    }

    /// Columns: `time_ns`, one population per basis label, then their sum.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let mut header = vec!["time_ns".to_string()];
        header.extend(self.space.labels().map(|l| {
            let q = if l.qubit == crate::fock::Qubit::Ground { 'g' } else { 'e' };
            format!("p_{}_{}_{}", l.n1, l.n2, q)
        }));
        header.push("total".into());
        writeln!(out, "{}", header.join(","))?;
        for (t, pops) in &self.rows {
            let mut line = format!("{:.6}", t * 1e9);
            for p in pops {
                line.push_str(&format!(",{p:.9e}"));
            }
            line.push_str(&format!(",{:.12}", pops.iter().sum::<f64>()));
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut f)?;
        f.flush()?;
        Ok(())
    }
}
