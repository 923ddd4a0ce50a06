//! Carlson's symmetric integral of the first kind for complex arguments.

use num_complex::Complex64;

/// R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z)).
///
/// Arguments may be complex as long as none lies on the closed negative real
/// axis (conjugate pairs are fine) and at most one is zero. Uses the
/// duplication theorem followed by the fifth-order Taylor tail.
pub fn rf(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..64 {
        let a = (x + y + z) / 3.0;
        let dx = 1.0 - x / a;
        let dy = 1.0 - y / a;
        let dz = 1.0 - z / a;
        let dmax = dx.norm().max(dy.norm()).max(dz.norm());
        if dmax < 1.5e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
            return series / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = (x + lambda) / 4.0;
        y = (y + lambda) / 4.0;
        z = (z + lambda) / 4.0;
    }
    Complex64::new(f64::NAN, f64::NAN)
}
