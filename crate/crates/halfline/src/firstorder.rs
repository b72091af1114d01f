//! The homogeneous first-order operators `A_α = -i d/dx + iα/x`: their
//! resolvents on the appropriate half-planes, the contraction semigroups
//! they generate, and the factorization `L_m = A*_{m+1/2} A_{m+1/2}` of the
//! second-order expression through them.

use crate::grid::{
    apply_derivative, band_relative_deviation, GridError, GridFunction, BAND_MARGIN, STENCIL,
};
use crate::specfun::Order;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FirstOrderError {
    #[error("parameter outside validity half-plane: {0}")]
    Range(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Spectral parameter restricted to the half-plane where the corresponding
/// resolvent exists: lower for the maximal operator, upper for the minimal.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlaneSpectralParam {
    lambda: Complex64,
    side: HalfPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

impl HalfPlaneSpectralParam {
    pub fn new(lambda: Complex64, side: HalfPlane) -> Result<Self, FirstOrderError> {
        match side {
            HalfPlane::Lower if lambda.im >= 0.0 => Err(FirstOrderError::Range(format!(
                "maximal-operator resolvent needs Im λ < 0, got {lambda}"
            ))),
            HalfPlane::Upper if lambda.im <= 0.0 => Err(FirstOrderError::Range(format!(
                "minimal-operator resolvent needs Im λ > 0, got {lambda}"
            ))),
            _ => Ok(HalfPlaneSpectralParam { lambda, side }),
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn side(&self) -> HalfPlane {
        self.side
    }
}

/// `-i f' + i c f / x` by finite differences (interior band validity).
pub(crate) fn apply_first_order(c: Complex64, f: &GridFunction) -> GridFunction {
    let df = apply_derivative(f);
    let i = Complex64::i();
    let mut out = GridFunction::zeros(f.grid());
    for (idx, &x) in f.grid().nodes().iter().enumerate() {
        out.values_mut()[idx] = -i * df.values()[idx] + i * c * f.values()[idx] / x;
    }
    out
}

/// Samples of `A_α f = -i f' + iα f / x`.
pub fn apply_aalpha(alpha: Order, f: &GridFunction) -> GridFunction {
    apply_first_order(alpha.value(), f)
}

fn lagrange_eval(nodes: &[f64], values: &[Complex64], t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, &va) in values.iter().enumerate() {
        let mut l = 1.0;
        for (b, &xb) in nodes.iter().enumerate() {
            if a != b {
                l *= (t - xb) / (nodes[a] - xb);
            }
        }
        acc += l * va;
    }
    acc
}

/// Running integrals of the sampled integrand `h` over `[x_i, x_max]`
/// (`upper`) or `[x_min, x_i]` (lower): whole panels are summed with their
/// own weights, and the broken panel containing `x_i` is integrated by a
/// fresh rule applied to the panel's Lagrange interpolant. The triangular
/// kernels are separable, so this realizes their application without the
/// O(panel width) error a half-weighted diagonal would commit on
/// Gauss-Legendre nodes.
fn triangular_integrals(
    g: &GridFunction,
    h: &[Complex64],
    upper: bool,
) -> Result<Vec<Complex64>, FirstOrderError> {
    let grid = g.grid();
    let edges = grid.panel_edges();
    if edges.is_empty() {
        return Err(FirstOrderError::Range(
            "triangular resolvents need a panel grid".into(),
        ));
    }
    let ord = grid.panel_order();
    let npan = edges.len() - 1;
    let mut panel_sum = vec![Complex64::new(0.0, 0.0); npan];
    for (p, s) in panel_sum.iter_mut().enumerate() {
        for j in p * ord..(p + 1) * ord {
            *s += grid.weights()[j] * h[j];
        }
    }
    // Sum of whole panels strictly beyond/before panel p.
    let mut beyond = vec![Complex64::new(0.0, 0.0); npan];
    if upper {
        for p in (0..npan - 1).rev() {
            beyond[p] = beyond[p + 1] + panel_sum[p + 1];
        }
    } else {
        for p in 1..npan {
            beyond[p] = beyond[p - 1] + panel_sum[p - 1];
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for p in 0..npan {
        let nodes_p = &grid.nodes()[p * ord..(p + 1) * ord];
        let h_p = &h[p * ord..(p + 1) * ord];
        for il in 0..ord {
            let i = p * ord + il;
            let x = grid.nodes()[i];
            let (lo, hi) = if upper { (x, edges[p + 1]) } else { (edges[p], x) };
            let (tq, vq) = grid.subinterval_rule(lo, hi);
            let mut part = Complex64::new(0.0, 0.0);
            for (t, v) in tq.iter().zip(&vq) {
                part += v * lagrange_eval(nodes_p, h_p, *t);
            }
            out[i] = part + beyond[p];
        }
    }
    Ok(out)
}

/// Resolvent of the maximal operator: for `Re α > -1/2`, `Im λ < 0`,
/// `(A_α^max - λ)^{-1} g (x) = -i ∫_x^∞ e^{iλ(x-y)} (x/y)^α g(y) dy`.
pub fn resolvent_amax(
    alpha: Order,
    lambda: Complex64,
    g: &GridFunction,
) -> Result<GridFunction, FirstOrderError> {
    if alpha.value().re <= -0.5 {
        return Err(FirstOrderError::Range(format!(
            "maximal resolvent needs Re α > -1/2, got {}",
            alpha.value()
        )));
    }
    let lam = HalfPlaneSpectralParam::new(lambda, HalfPlane::Lower)?;
    triangular_resolvent(alpha.value(), lam.lambda(), g, true)
}

/// Resolvent of the minimal operator: for `Re α < 1/2`, `Im λ > 0`,
/// `(A_α^min - λ)^{-1} g (x) = i ∫_0^x e^{iλ(x-y)} (x/y)^α g(y) dy`.
pub fn resolvent_amin(
    alpha: Order,
    lambda: Complex64,
    g: &GridFunction,
) -> Result<GridFunction, FirstOrderError> {
    if alpha.value().re >= 0.5 {
        return Err(FirstOrderError::Range(format!(
            "minimal resolvent needs Re α < 1/2, got {}",
            alpha.value()
        )));
    }
    let lam = HalfPlaneSpectralParam::new(lambda, HalfPlane::Upper)?;
    triangular_resolvent(alpha.value(), lam.lambda(), g, false)
}

fn triangular_resolvent(
    alpha: Complex64,
    lambda: Complex64,
    g: &GridFunction,
    upper: bool,
) -> Result<GridFunction, FirstOrderError> {
    // Kernel separation: e^{iλ(x-y)} (x/y)^α = φ(x) ψ(y).
    let i = Complex64::i();
    let h: Vec<Complex64> = g
        .grid()
        .nodes()
        .iter()
        .zip(g.values())
        .map(|(&y, &gy)| (-i * lambda * y).exp() * Complex64::new(y, 0.0).powc(-alpha) * gy)
        .collect();
    let t = triangular_integrals(g, &h, upper)?;
    let sign = if upper { -i } else { i };
    let values = g
        .grid()
        .nodes()
        .iter()
        .zip(t)
        .map(|(&x, ti)| sign * (i * lambda * x).exp() * Complex64::new(x, 0.0).powc(alpha) * ti)
        .collect();
    Ok(GridFunction::from_values(g.grid().clone(), values)?)
}

/// Contraction semigroup of the maximal operator, `Re α >= 0`, `t >= 0`:
/// `(e^{itA_α^max} f)(x) = x^α (x+t)^{-α} f(x+t)`.
pub fn semigroup_amax(
    alpha: Order,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction, FirstOrderError> {
    if alpha.value().re < 0.0 {
        return Err(FirstOrderError::Range(format!(
            "maximal semigroup needs Re α >= 0, got {}",
            alpha.value()
        )));
    }
    if t < 0.0 {
        return Err(FirstOrderError::Range(format!("t = {t} must be >= 0")));
    }
    let a = alpha.value();
    let values = f
        .grid()
        .nodes()
        .iter()
        .map(|&x| {
            let ratio = Complex64::new(x / (x + t), 0.0).powc(a);
            ratio * f.interp_log_cubic(x + t)
        })
        .collect();
    Ok(GridFunction::from_values(f.grid().clone(), values)?)
}

/// Contraction semigroup of the minimal operator, `Re α <= 0`, `t >= 0`:
/// `(e^{-itA_α^min} f)(x) = x^α (x-t)^{-α} f(x-t)`, with `f` extended by
/// zero below the origin.
pub fn semigroup_amin(
    alpha: Order,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction, FirstOrderError> {
    if alpha.value().re > 0.0 {
        return Err(FirstOrderError::Range(format!(
            "minimal semigroup needs Re α <= 0, got {}",
            alpha.value()
        )));
    }
    if t < 0.0 {
        return Err(FirstOrderError::Range(format!("t = {t} must be >= 0")));
    }
    let a = alpha.value();
    let values = f
        .grid()
        .nodes()
        .iter()
        .map(|&x| {
            let y = x - t;
            if y <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                // Below the grid the interpolation returns zero, matching
                // the zero extension.
                Complex64::new(x / y, 0.0).powc(a) * f.interp_log_cubic(y)
            }
        })
        .collect();
    Ok(GridFunction::from_values(f.grid().clone(), values)?)
}

/// Interior-band discrepancy between `L_m f` and the first-order
/// composition `A*_{m+1/2} A_{m+1/2} f` (both by finite differences),
/// relative to the scale of `L_m f`'s building blocks. Contract: < 1e-6
/// on the test family.
pub fn factorization_residual(m: Order, f: &GridFunction) -> f64 {
    let c = m.value() + 0.5;
    let lhs = crate::grid::apply_lm(m, f);
    let inner = apply_first_order(c, f);
    let rhs = apply_first_order(-c, &inner);
    // Two sequential stencils: trim twice the width.
    let band = f.grid().interior_band(BAND_MARGIN, 2 * STENCIL);
    let scale = {
        let d = apply_derivative(f);
        let dd = apply_derivative(&d);
        let v = f.map(|x, v| (m.value() * m.value() - 0.25) * v / (x * x));
        (dd.norm_on(band.clone()).powi(2) + v.norm_on(band.clone()).powi(2)).sqrt()
    };
    if scale < 1e-300 {
        return lhs.sub(&rhs).unwrap().norm_on(band);
    }
    lhs.sub(&rhs).unwrap().norm_on(band) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::grid::{inner, standard_family, RadialGrid, TestFunction};

    fn residual_grid() -> std::sync::Arc<RadialGrid> {
        RadialGrid::graded(1e-4, 40.0, 120, 8).unwrap()
    }

    #[test]
    fn aalpha_annihilates_power() {
        // A_α x^α = 0.
        let g = residual_grid();
        let alpha = c64(0.6, 0.3);
        let f = GridFunction::sample(&g, |x| c64(x, 0.0).powc(alpha) * (-x / 8.0).exp());
        // Use the pure power on a band where the damping is negligible:
        let fpow = GridFunction::sample(&g, |x| c64(x, 0.0).powc(alpha));
        let af = apply_aalpha(Order::new(alpha).unwrap(), &fpow);
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        let scale = apply_derivative(&fpow).norm_on(band.clone());
        assert!(af.norm_on(band) / scale < 1e-7);
        drop(f);
    }

    #[test]
    fn aalpha_eigenfunction() {
        // f = x^α e^{iλx} satisfies A_α f = λ f.
        let g = residual_grid();
        let alpha = c64(0.4, 0.0);
        let lambda = c64(1.3, 0.7);
        let f = GridFunction::sample(&g, |x| {
            c64(x, 0.0).powc(alpha) * (Complex64::i() * lambda * x).exp()
        });
        let af = apply_aalpha(Order::new(alpha).unwrap(), &f);
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        let rel = band_relative_deviation(&af, &f.scale(lambda), band);
        assert!(rel < 1e-6, "eigen residual {rel:.3e}");
    }

    #[test]
    fn aalpha_at_zero_is_momentum() {
        let g = residual_grid();
        let f = GridFunction::sample(&g, |x| c64(x * (-x).exp(), 0.0));
        let af = apply_aalpha(Order::real(0.0), &f);
        let want = GridFunction::sample(&g, |x| {
            -Complex64::i() * c64((1.0 - x) * (-x).exp(), 0.0)
        });
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        assert!(band_relative_deviation(&af, &want, band) < 1e-8);
    }

    #[test]
    fn resolvent_amax_residual_oracle() {
        // (A_α - λ) R(λ) g = g on the interior band.
        let g = residual_grid();
        let alpha = Order::real(0.3);
        let lambda = c64(0.0, -1.0);
        let rhs = GridFunction::sample(&g, |x| c64(x * (-x).exp(), 0.0));
        let u = resolvent_amax(alpha, lambda, &rhs).unwrap();
        let au = apply_aalpha(alpha, &u).sub(&u.scale(lambda)).unwrap();
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        let rel = band_relative_deviation(&au, &rhs, band);
        assert!(rel < 1e-6, "amax residual {rel:.3e}");
    }

    #[test]
    fn resolvent_amin_residual_oracle() {
        let g = residual_grid();
        let alpha = Order::real(-0.3);
        let lambda = c64(0.5, 1.0);
        let rhs = GridFunction::sample(&g, |x| c64(x * (-x).exp(), 0.0));
        let u = resolvent_amin(alpha, lambda, &rhs).unwrap();
        let au = apply_aalpha(alpha, &u).sub(&u.scale(lambda)).unwrap();
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        let rel = band_relative_deviation(&au, &rhs, band);
        assert!(rel < 1e-6, "amin residual {rel:.3e}");
    }

    #[test]
    fn resolvent_amax_closed_form() {
        // α = 0, λ = -i, g = e^{-y}: R g = -(i/2) e^{-x}.
        let g = residual_grid();
        let rhs = GridFunction::sample(&g, |x| c64((-x).exp(), 0.0));
        let u = resolvent_amax(Order::real(0.0), c64(0.0, -1.0), &rhs).unwrap();
        let want = GridFunction::sample(&g, |x| c64(0.0, -0.5) * (-x).exp());
        let band = g.interior_band(BAND_MARGIN, 0);
        let rel = band_relative_deviation(&u, &want, band);
        assert!(rel < 1e-8, "closed form deviation {rel:.3e}");
    }

    #[test]
    fn resolvent_amax_is_upper_triangular() {
        // Kernel carries 1_+(y - x): a source supported in [1, 2] cannot
        // influence x > 2.
        let g = residual_grid();
        let rhs = GridFunction::sample(&g, |x| {
            if (1.0..=2.0).contains(&x) {
                c64(((x - 1.0) * (2.0 - x)).powi(2), 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        let u = resolvent_amax(Order::real(0.3), c64(0.0, -1.0), &rhs).unwrap();
        // Beyond the panel containing the support edge the result is exactly
        // zero (inside that panel the panel-polynomial interpolation of the
        // integrand leaves harmless ~1e-7 wiggle).
        let above: f64 = u
            .grid()
            .nodes()
            .iter()
            .zip(u.values())
            .filter(|(&x, _)| x > 2.5)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(above < 1e-14, "leak above the support: {above:.3e}");
        // And it does influence x < 1.
        let below: f64 = u
            .grid()
            .nodes()
            .iter()
            .zip(u.values())
            .filter(|(&x, _)| x < 0.9)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(below > 1e-4);
    }

    #[test]
    fn resolvent_identity() {
        // R(λ1) - R(λ2) = (λ1 - λ2) R(λ1) R(λ2) on a test vector.
        let g = residual_grid();
        let alpha = Order::real(0.2);
        let (l1, l2) = (c64(0.3, -0.8), c64(-0.5, -1.5));
        let f = TestFunction::new(1.0, 1.0).unwrap().sample(&g);
        let lhs = resolvent_amax(alpha, l1, &f)
            .unwrap()
            .sub(&resolvent_amax(alpha, l2, &f).unwrap())
            .unwrap();
        let rhs = resolvent_amax(alpha, l1, &resolvent_amax(alpha, l2, &f).unwrap())
            .unwrap()
            .scale(l1 - l2);
        let band = g.interior_band(BAND_MARGIN, 0);
        let rel = band_relative_deviation(&lhs, &rhs, band);
        assert!(rel < 1e-6, "resolvent identity residual {rel:.3e}");
    }

    /// Denser grid for interpolation-bound checks (semigroup evaluation is
    /// cubic-in-log off node; the 1e-8 group-law budget needs ~0.01 spacing).
    fn semigroup_grid() -> std::sync::Arc<RadialGrid> {
        RadialGrid::graded(1e-4, 30.0, 600, 8).unwrap()
    }

    #[test]
    fn semigroup_identity_translation_and_law() {
        let g = semigroup_grid();
        let f = TestFunction::new(1.0, 1.0).unwrap().sample(&g);
        // t = 0 is the identity.
        let id = semigroup_amax(Order::real(0.5), 0.0, &f).unwrap();
        assert!(band_relative_deviation(&id, &f, 0..g.len()) < 1e-12);
        // α = 0 is a pure left translation.
        let tr = semigroup_amax(Order::real(0.0), 0.5, &f).unwrap();
        let want = GridFunction::sample(&g, |x| {
            c64(TestFunction::new(1.0, 1.0).unwrap().eval(x + 0.5), 0.0)
        });
        assert!(band_relative_deviation(&tr, &want, 0..g.len()) < 1e-7);
        // Group law T_s T_t = T_{s+t} at (s, t) = (0.3, 0.7).
        let a = Order::new(c64(1.0, 0.3)).unwrap();
        let two_step = semigroup_amax(a, 0.3, &semigroup_amax(a, 0.7, &f).unwrap()).unwrap();
        let one_step = semigroup_amax(a, 1.0, &f).unwrap();
        let rel = band_relative_deviation(&two_step, &one_step, 0..g.len());
        assert!(rel < 1e-8, "group law residual {rel:.3e}");
        // Mirror trio on the minimal side. Real order here: a complex α
        // makes the amplitude factor oscillate like (x-t)^{-i Im α} at the
        // zero-fill edge, which no polynomial interpolation resolves.
        let am = Order::real(-0.8);
        let id = semigroup_amin(am, 0.0, &f).unwrap();
        assert!(band_relative_deviation(&id, &f, 0..g.len()) < 1e-12);
        let two_step = semigroup_amin(am, 0.3, &semigroup_amin(am, 0.7, &f).unwrap()).unwrap();
        let one_step = semigroup_amin(am, 1.0, &f).unwrap();
        let rel = band_relative_deviation(&two_step, &one_step, 0..g.len());
        assert!(rel < 1e-8, "amin group law residual {rel:.3e}");
    }

    #[test]
    fn semigroups_contract_on_family() {
        // Contraction up to interpolation tolerance; at α = 0 the true
        // margin is zero (pure shift), so the budget is the acceptance-level
        // 1e-8 rather than exact arithmetic.
        let g = semigroup_grid();
        for tf in standard_family() {
            let f = tf.sample(&g);
            for a in [c64(0.0, 0.0), c64(0.5, 0.0), c64(1.0, 0.3)] {
                let out = semigroup_amax(Order::new(a).unwrap(), 0.4, &f).unwrap();
                assert!(
                    out.norm() <= f.norm() * (1.0 + 1e-8),
                    "amax contraction at {a}"
                );
                let out = semigroup_amin(Order::new(-a).unwrap(), 0.4, &f).unwrap();
                assert!(
                    out.norm() <= f.norm() * (1.0 + 1e-8),
                    "amin contraction at {a}"
                );
            }
        }
    }

    #[test]
    fn amin_has_no_upper_eigenfunctions_in_family() {
        // ‖(A_α - λ) f‖ stays bounded away from zero over the normalized
        // family for Im λ > 0, Re α < 1/2 (sample-level check).
        let g = residual_grid();
        let alpha = Order::real(0.2);
        let lambda = c64(0.7, 0.9);
        let band = g.interior_band(BAND_MARGIN, STENCIL);
        let mut min_res = f64::INFINITY;
        for tf in standard_family() {
            let f = tf.sample(&g);
            let f = f.scale(c64(1.0 / f.norm(), 0.0));
            let r = apply_aalpha(alpha, &f).sub(&f.scale(lambda)).unwrap();
            min_res = min_res.min(r.norm_on(band.clone()));
        }
        assert!(min_res > 0.05, "family too close to an eigenfunction: {min_res:.3e}");
    }

    #[test]
    fn factorization_residual_on_family() {
        let g = residual_grid();
        let f1 = GridFunction::sample(&g, |x| c64(x * (-x).exp(), 0.0));
        assert!(factorization_residual(Order::real(0.5), &f1) < 1e-6);
        let f2 = GridFunction::sample(&g, |x| c64(x.powf(0.9) * (-x * x / 2.0).exp(), 0.0));
        assert!(factorization_residual(Order::new(c64(0.3, 0.2)).unwrap(), &f2) < 1e-6);
        // The factorization's kernel function makes both sides vanish.
        let m = c64(0.35, 0.0);
        let zeta = GridFunction::sample(&g, |x| c64(x, 0.0).powc(m + 0.5));
        let lhs = crate::grid::apply_lm(Order::new(m).unwrap(), &zeta);
        let band = g.interior_band(BAND_MARGIN, 2 * STENCIL);
        let scale = GridFunction::sample(&g, |x| c64(x, 0.0).powc(m + 0.5) / (x * x));
        assert!(lhs.norm_on(band.clone()) / scale.norm_on(band).max(1e-300) < 1e-6);
    }

    #[test]
    fn half_plane_param_validation() {
        assert!(HalfPlaneSpectralParam::new(c64(1.0, -0.1), HalfPlane::Lower).is_ok());
        assert!(HalfPlaneSpectralParam::new(c64(1.0, 0.1), HalfPlane::Lower).is_err());
        assert!(HalfPlaneSpectralParam::new(c64(1.0, 0.1), HalfPlane::Upper).is_ok());
        assert!(resolvent_amax(Order::real(-0.6), c64(0.0, -1.0), &zero_fn()).is_err());
        assert!(resolvent_amin(Order::real(0.6), c64(0.0, 1.0), &zero_fn()).is_err());
    }

    fn zero_fn() -> GridFunction {
        GridFunction::zeros(&residual_grid())
    }

    #[test]
    fn adjoint_pairing_between_min_and_max() {
        // ⟨A_α^max f, g⟩ = ⟨f, A_{-ᾱ}^min... sampled as the formal-adjoint
        // pairing ⟨A_α f, g⟩ = ⟨f, A_{-ᾱ} g⟩ on rapidly decaying functions.
        let g = residual_grid();
        let alpha = c64(0.4, 0.2);
        let f1 = GridFunction::sample(&g, |x| c64(x.powf(1.2) * (-x * x / 2.0).exp(), 0.0));
        let f2 = GridFunction::sample(&g, |x| {
            c64(x.powf(1.4), 0.1 * x) * (-x * x / 1.5).exp()
        });
        let lhs = inner(&apply_aalpha(Order::new(alpha).unwrap(), &f1), &f2).unwrap();
        let rhs = inner(&f1, &apply_aalpha(Order::new(-alpha.conj()).unwrap(), &f2)).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-6 * lhs.norm().max(1.0),
            "adjoint pairing deviation {:.3e}",
            (lhs - rhs).norm()
        );
    }
}
