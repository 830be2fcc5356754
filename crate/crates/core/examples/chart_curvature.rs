//! Curvature of catalog charts by finite differences, compared with the
//! algebraic model, plus the Kähler residual.

use hermitian_lab::linalg::standard_complex_structure;
use hermitian_lab::{complex_space_form_tensor, real_space_form_tensor, DiffConfig, Matrix, Space};

fn main() -> hermitian_lab::Result<()> {
    let id = Matrix::identity(4, 4);
    let u = [0.3, -0.2, 0.1, 0.25];

    let sphere = Space::Sphere { c: 1.0, dim: 4 }.chart()?;
    let model = real_space_form_tensor(1.0, &id)?;
    println!("sphere:1 at {u:?}");
    for (h, order) in [(0.02, 2), (0.01, 2), (0.01, 4), (1e-4, 2)] {
        let chart = sphere.clone().with_diff(DiffConfig::new(h, order)?);
        let err = chart.riemann_tensor(&u)?.sub(&model).max_abs();
        println!("  step {h:<7} order {order}  max error {err:.3e}");
    }

    let fs = Space::FubiniStudy { c: 4.0, m: 2 }.chart()?;
    let p = fs.hermitian_point(&u)?;
    let model = complex_space_form_tensor(4.0, &id, &standard_complex_structure(4))?;
    println!(
        "fubini_study:4  max error {:.3e}",
        p.curvature().sub(&model).max_abs()
    );

    for space in [
        Space::Flat { dim: 4 },
        Space::FubiniStudy { c: 4.0, m: 2 },
        Space::Sphere { c: 1.0, dim: 4 },
        Space::NonKahlerFlatJ,
    ] {
        let chart = space.chart()?;
        println!(
            "|∇J| on {:<18} {:.3e}",
            space.to_string(),
            chart.nabla_j_residual(&u)?
        );
    }
    Ok(())
}
