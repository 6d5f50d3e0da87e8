use super::diagnostics::DiagnosticsReport;
use super::moments::MomentReport;
use crate::record::Record;

impl MomentReport {
    /// Columns `q, N, second, third, fourth, gamma_statistic, nu_hat`.
    pub fn record(&self) -> Record {
        let mut r = Record::new();
        r.push("q", self.q);
        r.push("N", self.n);
        r.push("second", self.second);
        r.push("third", self.third);
        r.push("fourth", self.fourth);
        r.push("gamma_statistic", self.gamma_statistic);
        r.push("nu_hat", self.nu_hat);
        r
    }
}

impl DiagnosticsReport {
    /// One `c_r_l` column per contraction norm, then `l4, middle_dev,
    /// middle_dev_reflected, a_prime, r_term`.
    pub fn record(&self) -> Record {
        let mut r = Record::new();
        for ((a, b), v) in &self.contraction_norms {
            r.push(&format!("c_{a}_{b}"), *v);
        }
        r.push("l4", self.l4);
        r.push("middle_dev", self.middle_deviation);
        r.push("middle_dev_reflected", self.middle_deviation_reflected);
        r.push("a_prime", self.a_prime);
        r.push("r_term", self.r_term);
        r
    }
}

/// Moments followed by diagnostics in one row.
pub fn report_record(m: &MomentReport, d: &DiagnosticsReport) -> Record {
    let mut r = m.record();
    r.append(d.record());
    r
}
