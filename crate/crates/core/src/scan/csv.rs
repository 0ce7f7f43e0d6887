//! CSV emission for scan rows.
//!
//! Fixed column order; absent fields are empty cells; floats carry 12
//! significant digits so re-reading reproduces values to well below 1e-10.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{ScanMode, ScanRow};

pub const CSV_HEADER: &str = "r_bohr,theta_deg,e_rhf,e_uhf,e_fci,e_c_rhf,e_c_uhf,\
s_rho1_cisd,s_nso,s_int,e_c_int,converged";

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.11e}"),
        None => String::new(),
    }
}

/// Render rows to CSV text. All rows must come from the same scan mode.
pub fn csv_string(rows: &[ScanRow]) -> Result<String> {
    if rows.windows(2).any(|w| w[0].mode != w[1].mode) {
        return Err(Error::ColumnSetMismatch);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let rep = &row.report;
        let theta = match row.mode {
            ScanMode::Dissociation => None,
            _ => row.theta,
        };
        let fields = [
            cell(Some(row.r)),
            cell(theta),
            cell(rep.e_hf_rhf),
            cell(rep.e_hf_uhf),
            cell(rep.e_fci),
            cell(rep.e_c_rhf),
            cell(rep.e_c_uhf),
            cell(rep.s_rho1_cisd),
            cell(rep.s_nso),
            cell(row.s_int),
            cell(row.e_c_int),
            row.converged.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Write rows to `path`; header line plus one line per scan point.
pub fn write_csv(rows: &[ScanRow], path: &Path) -> Result<()> {
    let text = csv_string(rows)?;
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{MethodSet, ScanMode, ScanRow};
    use super::*;
    use crate::entanglement::EntropyReport;

    fn row(mode: ScanMode, r: f64) -> ScanRow {
        ScanRow {
            mode,
            r,
            theta: Some(30.0),
            report: EntropyReport {
                basis: "STO-3G".into(),
                methods: MethodSet::default().label(),
                e_hf_rhf: Some(-1.1167143250625697),
                e_hf_uhf: Some(-1.1167143250625697),
                e_fci: Some(-1.1372759436170652),
                e_c_rhf: Some(-0.020561618554),
                e_c_uhf: Some(-0.020561618554),
                s_rho1_cisd: Some(0.0982331515700),
                s_nso: Some(0.0982331515700),
                rho1_raw_trace: Some(1.0),
                rhf_converged: Some(true),
                uhf_converged: Some(true),
                spin_contamination: Some(0.0),
            },
            s_int: None,
            e_c_int: None,
            converged: true,
            note: None,
        }
    }

    #[test]
    fn single_row_scan_is_two_lines() {
        let text = csv_string(&[row(ScanMode::Dissociation, 1.4)]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        // dissociation rows leave theta (and interaction columns) empty
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 12);
        assert_eq!(fields[1], "");
        assert_eq!(fields[9], "");
        assert_eq!(fields[11], "true");
    }

    #[test]
    fn round_trip_preserves_values() {
        let original = row(ScanMode::Fragments, 5.0);
        let text = csv_string(&[original.clone()]).unwrap();
        let line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        let back: f64 = fields[4].parse().unwrap();
        assert!((back - original.report.e_fci.unwrap()).abs() < 1e-10);
        let theta: f64 = fields[1].parse().unwrap();
        assert!((theta - 30.0).abs() < 1e-10);
    }

    #[test]
    fn mixed_modes_rejected() {
        let rows = vec![row(ScanMode::Dissociation, 1.0), row(ScanMode::Fragments, 2.0)];
        assert!(matches!(
            csv_string(&rows),
            Err(Error::ColumnSetMismatch)
        ));
    }

    #[test]
    fn unwritable_path_errors() {
        let rows = vec![row(ScanMode::Dissociation, 1.0)];
        let bad = Path::new("/nonexistent-dir-entcorr/out.csv");
        assert!(matches!(write_csv(&rows, bad), Err(Error::Io(_))));
    }
}
