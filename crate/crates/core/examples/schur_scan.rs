//! Space-form constant at seeded chart points; a real space form gives the
//! same constant everywhere.

use hermitian_lab::{schur_scan, space_form_defect, Space};

fn main() -> hermitian_lab::Result<()> {
    for space in [
        Space::Sphere { c: 1.0, dim: 4 },
        Space::RealHyperbolic { c: 2.0, dim: 4 },
        Space::FubiniStudy { c: 4.0, m: 2 },
    ] {
        let chart = space.chart()?;
        let points = chart
            .sample_points(10, 3)
            .iter()
            .map(|u| chart.hermitian_point(u))
            .collect::<hermitian_lab::Result<Vec<_>>>()?;
        match schur_scan(&points, chart.tolerance()) {
            Ok(report) => println!(
                "{:<20} c = {:.8}  spread {:.2e}",
                space.to_string(),
                report.c_values[0],
                report.spread
            ),
            Err(e) => println!(
                "{:<20} {e} (c* = {:.4})",
                space.to_string(),
                space_form_defect(&points[0])?.c_star
            ),
        }
    }
    Ok(())
}
