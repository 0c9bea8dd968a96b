//! Grid scans of the simplex diagram.
//!
//! The grid covers the bounding rectangle `[-1, 1] x [0, 1]` with
//! `(grid + 1)^2` points; points outside the triangle are kept and marked.
//! Rows are ordered by `omega_N`, with `x` varying fastest.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::descriptors::{delta_h, energy};
use crate::error::SimplexError;
use crate::exec::Exec;
use crate::simplex::{
    classify, weights_from_omega_n, ChargeFraction, DomainSpec, ReferenceFraction, Region,
    SimplexPoint, DEFAULT_CLASSIFY_TOL,
};

pub const SCAN_HEADER: &str = "x,omega_n,w_minus,w_plus,region,energy,delta_h";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub w_zero: f64,
    /// `(w_minus, w_plus)`; `None` outside the triangle.
    pub ionic_weights: Option<(f64, f64)>,
    pub region: Region,
    pub energy: Option<f64>,
    /// Only for interior, axis and origin points.
    pub delta_h: Option<f64>,
}

/// Abscissa of column `i` on a grid of `grid` intervals.
pub fn grid_x(i: usize, grid: usize) -> f64 {
    (2.0 * i as f64 - grid as f64) / grid as f64
}

/// Ordinate of row `j`.
pub fn grid_w(j: usize, grid: usize) -> f64 {
    j as f64 / grid as f64
}

fn scan_point(domain: &DomainSpec, x: f64, w_zero: f64) -> Result<ScanRow, SimplexError> {
    let region = classify(SimplexPoint::new(x, w_zero), DEFAULT_CLASSIFY_TOL);
    let mut row = ScanRow {
        x,
        w_zero,
        ionic_weights: None,
        region,
        energy: None,
        delta_h: None,
    };
    if region == Region::Outside {
        return Ok(row);
    }
    let w = weights_from_omega_n(x, w_zero)?;
    row.ionic_weights = Some((w.w_minus(), w.w_plus()));
    row.energy = Some(energy(domain, w));
    if !(region.is_vertex() || region.is_edge()) {
        let q = domain.q();
        let qf = f64::from(q);
        let side = if x < 0.0 { -1.0 } else { 1.0 };
        let nu = ChargeFraction::new(x * qf, q)?;
        let nu0 = ReferenceFraction::new(side * qf * (1.0 - w_zero), q)?;
        row.delta_h = Some(delta_h(domain, nu, nu0)?);
    }
    Ok(row)
}

/// Evaluates every grid point; rows of constant `omega_N` are the unit of
/// parallel work.
pub fn scan(domain: &DomainSpec, grid: usize, exec: Exec) -> Result<Vec<ScanRow>, SimplexError> {
    if grid < 2 {
        return Err(SimplexError::OutOfRange {
            what: "grid",
            value: grid as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let rows = exec.map_range(grid + 1, |j| {
        let w = grid_w(j, grid);
        (0..=grid)
            .map(|i| scan_point(domain, grid_x(i, grid), w))
            .collect::<Result<Vec<_>, _>>()
    });
    let mut out = Vec::with_capacity((grid + 1) * (grid + 1));
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

pub fn region_counts(rows: &[ScanRow]) -> BTreeMap<Region, usize> {
    let mut counts = BTreeMap::new();
    for r in rows {
        *counts.entry(r.region).or_insert(0) += 1;
    }
    counts
}

/// Writes the scan as CSV with LF line endings; empty cells stand for
/// missing values.
pub fn write_scan_csv(rows: &[ScanRow], mut out: impl Write) -> io::Result<()> {
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    writeln!(out, "{SCAN_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.x,
            r.w_zero,
            opt(r.ionic_weights.map(|w| w.0)),
            opt(r.ionic_weights.map(|w| w.1)),
            r.region,
            opt(r.energy),
            opt(r.delta_h),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> DomainSpec {
        DomainSpec::new("fixture", 6, 1, -100.0, -99.0, -90.0).unwrap()
    }

    #[test]
    fn smallest_grid() {
        let rows = scan(&fixture(), 2, Exec::Sequential).unwrap();
        assert_eq!(rows.len(), 9);
        let inside = rows.iter().filter(|r| r.region != Region::Outside).count();
        assert_eq!(inside, 5);
        let labels: Vec<_> = rows.iter().map(|r| r.region).collect();
        assert_eq!(
            labels,
            vec![
                Region::VertexCation,
                Region::Origin,
                Region::VertexAnion,
                Region::Outside,
                Region::NeutralAxis,
                Region::Outside,
                Region::Outside,
                Region::VertexNeutral,
                Region::Outside,
            ]
        );
        let origin = rows[1];
        assert_eq!(origin.energy, Some(-94.5));
        assert!(origin.delta_h.is_some());
        assert_eq!(rows[0].delta_h, None);
        assert_eq!(rows[3].energy, None);
        assert!(scan(&fixture(), 1, Exec::Sequential).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = scan(&fixture(), 2, Exec::Sequential).unwrap();
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], SCAN_HEADER);
        assert_eq!(lines[1], "-1,0,1,0,VertexCation,-90,");
        assert_eq!(lines[4], "-1,0.5,,,Outside,,");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn sequential_and_default_agree() {
        let d = fixture();
        assert_eq!(
            scan(&d, 60, Exec::Sequential).unwrap(),
            scan(&d, 60, Exec::default()).unwrap()
        );
    }

    #[test]
    fn rows_match_classify() {
        for r in scan(&fixture(), 50, Exec::default()).unwrap() {
            assert_eq!(
                r.region,
                classify(SimplexPoint::new(r.x, r.w_zero), DEFAULT_CLASSIFY_TOL)
            );
        }
    }
}
