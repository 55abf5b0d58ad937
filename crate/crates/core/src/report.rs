//! Small report structures shared by the diagnostic operations.

/// One checked quantity: a Monte-Carlo or quadrature estimate next to the
/// tolerance it was held to.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub quantity: String,
    pub estimate: f64,
    pub std_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(
        quantity: impl Into<String>,
        estimate: f64,
        std_error: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        CheckRow {
            quantity: quantity.into(),
            estimate,
            std_error,
            tolerance,
            pass,
        }
    }
}

/// A batch of check rows; passes iff every row passes.
#[derive(Debug, Clone, Default)]
pub struct DiagnosticReport {
    pub rows: Vec<CheckRow>,
}

impl DiagnosticReport {
    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn row(&self, quantity: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

/// Mean, sample standard deviation based standard error, and RMS of a batch.
#[derive(Debug, Clone, Copy)]
pub struct BatchStats {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub rms: f64,
}

impl BatchStats {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        assert!(n > 0, "empty sample batch");
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0)
        } else {
            0.0
        };
        let rms = (xs.iter().map(|x| x * x).sum::<f64>() / nf).sqrt();
        BatchStats {
            n,
            mean,
            std_error: (var / nf).sqrt(),
            rms,
        }
    }
}
