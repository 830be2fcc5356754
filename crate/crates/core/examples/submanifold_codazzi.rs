//! Second fundamental form, Weingarten split and Codazzi residual for the
//! built-in patches.

use hermitian_lab::{patch, PATCH_NAMES};

fn main() -> hermitian_lab::Result<()> {
    println!(
        "{:<14} {:>10} {:>10} {:>10} {:>10}",
        "patch", "|H|", "umbilic", "codazzi", "R normal"
    );
    for name in PATCH_NAMES {
        let p = patch(name, &[])?;
        let t = p.reference_point();
        let h = p.mean_curvature(&t)?;
        let hn = (h.transpose() * p.ambient().metric_at(&p.position(&t)) * &h)[(0, 0)].sqrt();
        println!(
            "{name:<14} {hn:>10.6} {:>10.2e} {:>10.2e} {:>10.2e}",
            p.umbilic_residual(&t)?,
            p.max_codazzi_residual(&t)?,
            p.normal_curvature_residual(&t)?
        );
    }

    let r = 0.5;
    let sphere = patch("round_sphere", &[r])?;
    let t = sphere.reference_point();
    let outward = |t: &[f64]| hermitian_lab::Vector::from_vec(sphere.position(t)) / r;
    let split = sphere.weingarten_split(&t, &outward)?;
    let a = &split.shape_operator;
    println!(
        "outward normal of the radius {r} sphere: A = [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        a[(0, 0)],
        a[(0, 1)],
        a[(1, 0)],
        a[(1, 1)]
    );
    let h = |s: &[f64]| sphere.mean_curvature(s).expect("inside the patch");
    println!(
        "parallel mean curvature residual {:.3e}",
        sphere.parallel_normal_residual(&t, &h)?
    );
    Ok(())
}
