//! Residuals of the θ-plane conditions for a real space form, a complex space
//! form and a generic curvature tensor, followed by the theorem check.

use hermitian_lab::linalg::standard_complex_structure;
use hermitian_lab::sampling::{random_curvature_tensor, stream_rng, Sampler};
use hermitian_lab::{
    complex_space_form_tensor, necessary_residuals, real_space_form_tensor, theorem_check,
    HermitianPoint, Matrix, TheoremOutcome,
};

fn main() -> hermitian_lab::Result<()> {
    let g = Matrix::identity(4, 4);
    let j = standard_complex_structure(4);
    let theta = std::f64::consts::FRAC_PI_4;
    let cases = [
        ("real space form", real_space_form_tensor(2.5, &g)?),
        (
            "complex space form",
            complex_space_form_tensor(4.0, &g, &j)?,
        ),
        (
            "generic tensor",
            random_curvature_tensor(4, 6, &mut stream_rng(1, 0)),
        ),
    ];
    for (label, r) in cases {
        let p = HermitianPoint::from_parts(g.clone(), j.clone(), r)?;
        let sampler = Sampler::new(p.structure()).expect("positive metric");
        let (x, y) = sampler.admissible_pair(&mut stream_rng(2, 0));
        let rec = necessary_residuals(&p, theta, &x, &y)?;
        println!("{label}");
        println!(
            "  eq1 {:+.3e}  eq2 {:+.3e}  eq3 {:+.3e}  eq4 {:+.3e}  eq5 {:+.3e}",
            rec.eq1, rec.eq2, rec.eq3, rec.eq4, rec.eq5
        );
        let report = theorem_check(&p, theta, 1000, 0, 1e-10, None)?;
        println!(
            "  holds {}  max residual {:.3e}  c* {:.4}  defect {:.3e}  theorem {}",
            report.scan.holds,
            report.scan.max_residual,
            report.defect.c_star,
            report.defect.defect_norm,
            match report.theorem {
                TheoremOutcome::Confirmed => "confirmed",
                TheoremOutcome::Violated => "violated",
                TheoremOutcome::Contrapositive { .. } => "contrapositive (axiom fails)",
            }
        );
    }
    Ok(())
}
