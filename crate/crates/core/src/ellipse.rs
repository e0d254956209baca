//! Bernstein ellipse geometry and the max-modulus estimate M.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// ρ > 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipseRadius(f64);

impl EllipseRadius {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 1.0) || !rho.is_finite() {
            return domain(format!("ellipse radius must be a finite value > 1, got {rho}"));
        }
        Ok(EllipseRadius(rho))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeometry {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    /// Distance from the ellipse to [-1, 1].
    pub d: f64,
    /// π√(ρ²+ρ⁻²), an upper bound for the perimeter.
    pub perimeter_bound: f64,
}

pub fn geometry(r: EllipseRadius) -> EllipseGeometry {
    let rho = r.0;
    let inv = 1.0 / rho;
    EllipseGeometry {
        rho,
        a: 0.5 * (rho + inv),
        b: 0.5 * (rho - inv),
        // (ρ-1)²/(2ρ), free of cancellation near ρ = 1
        d: (rho - 1.0) * (rho - 1.0) / (2.0 * rho),
        perimeter_bound: std::f64::consts::PI * (rho * rho + inv * inv).sqrt(),
    }
}

/// Joukowski map w ↦ (w + 1/w)/2.
pub fn map_to_ellipse(w: Complex64) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return domain("map_to_ellipse needs w != 0");
    }
    Ok((w + w.inv()) * 0.5)
}

pub type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A function analytic inside every ℰ_ρ with ρ < rho_max.
#[derive(Clone)]
pub struct AnalyticFunction {
    pub name: String,
    pub evaluator: Evaluator,
    /// Largest admissible ρ; `f64::INFINITY` for entire functions.
    pub rho_max: f64,
    /// Real coefficients, so |u(conj z)| = |u(z)| and half the ellipse suffices.
    pub conjugate_symmetric: bool,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("name", &self.name)
            .field("rho_max", &self.rho_max)
            .field("conjugate_symmetric", &self.conjugate_symmetric)
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new(
        name: impl Into<String>,
        rho_max: f64,
        conjugate_symmetric: bool,
        evaluator: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticFunction {
            name: name.into(),
            evaluator: Arc::new(evaluator),
            rho_max,
            conjugate_symmetric,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    /// Real part of u at a real point.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0)).re
    }
}

pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-10;

/// M = max |u| on ℰ_ρ: grid sampling in θ, then golden-section on the best bracket.
pub fn max_modulus(f: &AnalyticFunction, r: EllipseRadius, grid_size: usize, tol: f64) -> Result<f64> {
    let rho = r.0;
    if rho >= f.rho_max {
        return Err(Error::Analyticity { rho, rho_max: f.rho_max });
    }
    if grid_size < 64 {
        return domain(format!("max_modulus needs grid_size >= 64, got {grid_size}"));
    }
    let modulus = |theta: f64| {
        let w = Complex64::from_polar(rho, theta);
        f.eval((w + w.inv()) * 0.5).norm()
    };
    let (span, count) = if f.conjugate_symmetric {
        (std::f64::consts::PI, grid_size - 1)
    } else {
        (2.0 * std::f64::consts::PI, grid_size)
    };
    let h = span / count as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..grid_size {
        let v = modulus(i as f64 * h);
        if !v.is_finite() {
            return Err(Error::Numerical(format!("{} is not finite on the ellipse rho = {rho}", f.name)));
        }
        if v > best.1 {
            best = (i, v);
        }
    }
    let centre = best.0 as f64 * h;
    let (mut lo, mut hi) = (centre - h, centre + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (modulus(x1), modulus(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = modulus(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = modulus(x1);
        }
    }
    Ok(best.1.max(f1).max(f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::{catalog, TestFunction};

    #[test]
    fn map_examples() {
        let one = map_to_ellipse(Complex64::new(1.0, 0.0)).unwrap();
        assert!((one - 1.0).norm() < 1e-15);
        let rho = 1.7;
        let g = geometry(EllipseRadius::new(rho).unwrap());
        assert!((map_to_ellipse(Complex64::new(rho, 0.0)).unwrap() - g.a).norm() < 1e-15);
        let top = map_to_ellipse(Complex64::new(0.0, rho)).unwrap();
        assert!((top - Complex64::new(0.0, g.b)).norm() < 1e-15);
        assert!(map_to_ellipse(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn geometry_examples() {
        let g = geometry(EllipseRadius::new(2.0).unwrap());
        assert_eq!((g.a, g.b, g.d), (1.25, 0.75, 0.25));
        assert!((g.perimeter_bound - std::f64::consts::PI * 4.25f64.sqrt()).abs() < 1e-14);
        assert!((g.perimeter_bound - 6.4766).abs() < 1e-4);
        let near = geometry(EllipseRadius::new(1.0 + 1e-8).unwrap());
        assert!(near.d > 0.0 && near.d < 1e-15);
        assert!(EllipseRadius::new(1.0).is_err());
        assert!(EllipseRadius::new(0.5).is_err());
    }

    #[test]
    fn image_lies_on_ellipse() {
        for &rho in &[1.01, 1.3, 2.0, 4.5] {
            let g = geometry(EllipseRadius::new(rho).unwrap());
            assert!((g.a * g.a - g.b * g.b - 1.0).abs() < 1e-12);
            for i in 0..64 {
                let z = map_to_ellipse(Complex64::from_polar(rho, i as f64 * 0.1)).unwrap();
                let q = (z.re / g.a).powi(2) + (z.im / g.b).powi(2);
                assert!((q - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn distance_increases_with_rho() {
        let mut prev = 0.0;
        for i in 0..400 {
            let d = geometry(EllipseRadius::new(1.01 + 0.01 * i as f64).unwrap()).d;
            assert!(d > prev);
            prev = d;
        }
    }

    #[test]
    fn max_modulus_examples() {
        let c = AnalyticFunction::new("const", f64::INFINITY, true, |_| Complex64::new(-2.5, 0.0));
        assert_eq!(max_modulus(&c, EllipseRadius::new(3.0).unwrap(), 64, 1e-10).unwrap(), 2.5);
        let u1 = catalog(TestFunction::U1);
        let r = EllipseRadius::new(1.5).unwrap();
        let m = max_modulus(&u1, r, DEFAULT_GRID, DEFAULT_TOL).unwrap();
        assert!((m - 4.5).abs() < 1e-12);
        let u2 = catalog(TestFunction::U2);
        let m = max_modulus(&u2, r, DEFAULT_GRID, DEFAULT_TOL).unwrap();
        assert!((m - 6f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            max_modulus(&u1, EllipseRadius::new(2.0).unwrap(), DEFAULT_GRID, DEFAULT_TOL),
            Err(Error::Analyticity { .. })
        ));
        assert!(max_modulus(&u1, r, 32, 1e-10).is_err());
    }

    #[test]
    fn u2_max_matches_dense_grid() {
        let u2 = catalog(TestFunction::U2);
        for &rho in &[1.1, 1.5, 1.9] {
            let dense = (0..(1 << 16))
                .map(|i| {
                    let w = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * i as f64 / 65536.0);
                    u2.eval((w + w.inv()) * 0.5).norm()
                })
                .fold(0.0, f64::max);
            let m = max_modulus(&u2, EllipseRadius::new(rho).unwrap(), DEFAULT_GRID, DEFAULT_TOL).unwrap();
            assert!(m >= dense * (1.0 - 1e-12) && m <= dense * (1.0 + 1e-6));
        }
    }

    #[test]
    fn u1_max_matches_closed_form() {
        let u1 = catalog(TestFunction::U1);
        for &rho in &[1.1, 1.5, 1.9, 1.98] {
            let m = max_modulus(&u1, EllipseRadius::new(rho).unwrap(), DEFAULT_GRID, DEFAULT_TOL).unwrap();
            let want = 3.0 * rho / ((2.0 * rho - 1.0) * (2.0 - rho));
            assert!(((m - want) / want).abs() < 1e-6);
        }
    }
}
