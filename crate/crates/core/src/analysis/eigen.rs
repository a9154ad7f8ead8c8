//! Closed-form spectra of real 3x3 matrices.

use num_complex::Complex64;

use crate::models::Matrix3;

/// Coefficients `(c2, c1, c0)` of `λ³ + c2 λ² + c1 λ + c0 = det(λI - A)`.
pub fn characteristic_polynomial(a: &Matrix3) -> [f64; 3] {
    let trace = a[0][0] + a[1][1] + a[2][2];
    let minors = (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
        + (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
    [-trace, minors, -determinant(a)]
}

pub fn determinant(a: &Matrix3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn eval_cubic(c: &[f64; 3], z: Complex64) -> Complex64 {
    ((z + c[0]) * z + c[1]) * z + c[2]
}

fn eval_cubic_derivative(c: &[f64; 3], z: Complex64) -> Complex64 {
    (3.0 * z + 2.0 * c[0]) * z + c[1]
}

/// One Newton step, kept only if it lowers the residual.
fn polish(c: &[f64; 3], z: Complex64) -> Complex64 {
    let d = eval_cubic_derivative(c, z);
    if d.norm() == 0.0 {
        return z;
    }
    let candidate = z - eval_cubic(c, z) / d;
    if candidate.is_finite() && eval_cubic(c, candidate).norm() < eval_cubic(c, z).norm() {
        candidate
    } else {
        z
    }
}

/// A real root of the cubic from the depressed form (Cardano or trigonometric).
fn real_root(c: &[f64; 3]) -> f64 {
    let [c2, c1, c0] = *c;
    let shift = c2 / 3.0;
    let a = c1 - c2 * c2 / 3.0;
    let b = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = (b / 2.0).powi(2) + (a / 3.0).powi(3);
    let t = if disc > 0.0 {
        let s = disc.sqrt();
        (-b / 2.0 + s).cbrt() + (-b / 2.0 - s).cbrt()
    } else if a == 0.0 {
        0.0
    } else {
        let m = 2.0 * (-a / 3.0).sqrt();
        let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        m * (arg.acos() / 3.0).cos()
    };
    t - shift
}

/// Roots of `λ² + bλ + c`, complex pair returned as exact conjugates.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = -0.5 * (b + b.signum() * disc.sqrt());
        if s == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(s, 0.0), Complex64::new(c / s, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(-0.5 * b, im), Complex64::new(-0.5 * b, -im)]
    }
}

/// All three roots of the monic cubic, sorted by descending real part and
/// then descending imaginary part.
pub fn cubic_roots(c: &[f64; 3]) -> [Complex64; 3] {
    let r = polish(c, Complex64::new(real_root(c), 0.0)).re;
    // deflate: (λ - r)(λ² + bλ + k)
    let b = c[0] + r;
    let k = c[1] + r * b;
    let [mut z1, mut z2] = quadratic_roots(b, k);
    if z1.im == 0.0 {
        z1 = Complex64::new(polish(c, z1).re, 0.0);
        z2 = Complex64::new(polish(c, z2).re, 0.0);
    } else {
        z1 = polish(c, z1);
        z2 = z1.conj();
    }
    let mut roots = [Complex64::new(r, 0.0), z1, z2];
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    roots
}

pub fn eigenvalues(a: &Matrix3) -> [Complex64; 3] {
    cubic_roots(&characteristic_polynomial(a))
}
