//! Builds the two algebraic model tensors at a point, validates them and
//! compares their curvature profiles.

use hermitian_lab::linalg::standard_complex_structure;
use hermitian_lab::{
    complex_space_form_tensor, constancy_scan, real_space_form_tensor, space_form_defect,
    HermitianPoint, Matrix, PlaneKind,
};

fn main() -> hermitian_lab::Result<()> {
    let dim = 4;
    let g = Matrix::identity(dim, dim);
    let j = standard_complex_structure(dim);

    for (label, r) in [
        ("real space form c = 1", real_space_form_tensor(1.0, &g)?),
        (
            "complex space form c = 4",
            complex_space_form_tensor(4.0, &g, &j)?,
        ),
    ] {
        let p = HermitianPoint::from_parts(g.clone(), j.clone(), r)?;
        let report = p.validate(1e-12)?;
        let holo = constancy_scan(&p, PlaneKind::Holomorphic, 500, 1)?;
        let anti = constancy_scan(&p, PlaneKind::Antiholomorphic, 500, 1)?;
        let defect = space_form_defect(&p)?;
        println!("{label}");
        println!(
            "  valid                 {} (max residual {:.1e})",
            report.valid,
            report.max_residual()
        );
        println!(
            "  RK identity           {}",
            p.curvature().rk_check(&j, 1e-12).holds
        );
        println!(
            "  H(x)                  {:.6} ± {:.1e}",
            holo.mean, holo.max_deviation
        );
        println!(
            "  K(antiholomorphic)    {:.6} ± {:.1e}",
            anti.mean, anti.max_deviation
        );
        println!(
            "  c* / defect           {:.6} / {:.3e}",
            defect.c_star, defect.defect_norm
        );
    }

    let bad = HermitianPoint::from_parts(g.clone(), &j * 2.0, real_space_form_tensor(1.0, &g)?)?;
    let report = bad.validate(1e-12)?;
    println!("J scaled by 2");
    for (name, value) in &report.residuals {
        println!("  {name:<26} {value:.3e}");
    }
    Ok(())
}
