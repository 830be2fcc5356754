//! θ-planes: construction, Kähler angle, canonical decomposition and
//! principal angles against the holomorphic plane through the same vector.

use hermitian_lab::sampling::{stream_rng, Sampler};
use hermitian_lab::{make_theta_plane, principal_angles, HermitianStructure, TwoPlane};

fn main() -> hermitian_lab::Result<()> {
    let s = HermitianStructure::standard(4)?;
    let sampler = Sampler::new(&s).expect("standard metric is positive");
    let (x, y) = sampler.admissible_pair(&mut stream_rng(7, 0));
    let holo = TwoPlane::new(&s, x.clone(), s.apply_j(&x))?;

    println!(
        "{:>8} {:>14} {:>14} {:>14}",
        "theta", "kahler angle", "phi", "angle to {x,Jx}"
    );
    for k in 0..=8 {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
        let plane = make_theta_plane(&s, &x, &y, theta)?;
        let cb = plane.canonical_basis()?;
        let angles = principal_angles(&plane, &holo)?;
        println!(
            "{theta:>8.4} {:>14.10} {:>14.10} {:>14.10}",
            plane.kahler_angle()?,
            cb.phi,
            angles[1]
        );
    }
    Ok(())
}
