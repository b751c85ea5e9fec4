//! Compilation of expressions into evaluatable bandlimited functions.
//!
//! `compile` walks the tree once, certifying a band edge for every node:
//! sums take the max, products add, integer powers multiply, `sin`/`cos`/
//! `sinc` of an affine argument `a*x + b` contribute `|a|`, projections keep
//! the inner edge, and catalog entries declare their own. A bare `x`
//! contributes band edge 0 (its spectrum is a distribution supported at the
//! origin), which is what makes polynomial envelopes like `x * sinc(x)` and
//! polynomial reference subtraction compile. Anything whose band edge cannot
//! be certified this way is rejected here rather than misbehaving later.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::catalog::{default_registry, CatalogFunction, CatalogRegistry};
use crate::expr::{const_fold, Builtin, Expr, FunctionExpr};
use crate::special;
use crate::trigpoly::TrigPolynomial;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CompileError {
    #[error("cannot certify `{what}` as bandlimited")]
    NotBandlimited { what: String },
    #[error("invalid parameters for catalog entry `{name}`: {reason}")]
    InvalidCatalogParams { name: String, reason: String },
    #[error("unknown catalog entry `{name}`")]
    UnknownCatalog { name: String },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation of `{label}` failed at x = {x}: non-finite value")]
    NonFinite { label: String, x: f64 },
}

#[derive(Clone)]
enum Node {
    Const(f64),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Scale(Box<Node>, f64),
    Pow(Box<Node>, u32),
    /// sin/cos/sinc of `a*x + b`
    Osc(Builtin, f64, f64),
    Catalog(Arc<dyn CatalogFunction>, Vec<f64>),
    Re(Box<Node>),
    Im(Box<Node>),
}

impl Node {
    fn eval(&self, x: f64) -> Complex64 {
        match self {
            Node::Const(v) => Complex64::new(*v, 0.0),
            Node::Var => Complex64::new(x, 0.0),
            Node::Add(l, r) => l.eval(x) + r.eval(x),
            Node::Sub(l, r) => l.eval(x) - r.eval(x),
            Node::Mul(l, r) => l.eval(x) * r.eval(x),
            Node::Scale(inner, s) => inner.eval(x) * *s,
            Node::Pow(inner, n) => inner.eval(x).powu(*n),
            Node::Osc(b, a, off) => {
                let t = a * x + off;
                let v = match b {
                    Builtin::Sin => t.sin(),
                    Builtin::Cos => t.cos(),
                    Builtin::Sinc => special::sinc(t),
                };
                Complex64::new(v, 0.0)
            }
            Node::Catalog(entry, params) => entry.eval(params, x),
            Node::Re(inner) => Complex64::new(inner.eval(x).re, 0.0),
            Node::Im(inner) => Complex64::new(inner.eval(x).im, 0.0),
        }
    }

    fn derivative(&self, x: f64) -> Complex64 {
        match self {
            Node::Const(_) => Complex64::new(0.0, 0.0),
            Node::Var => Complex64::new(1.0, 0.0),
            Node::Add(l, r) => l.derivative(x) + r.derivative(x),
            Node::Sub(l, r) => l.derivative(x) - r.derivative(x),
            Node::Mul(l, r) => l.derivative(x) * r.eval(x) + l.eval(x) * r.derivative(x),
            Node::Scale(inner, s) => inner.derivative(x) * *s,
            Node::Pow(inner, n) => {
                inner.eval(x).powu(*n - 1) * inner.derivative(x) * (*n as f64)
            }
            Node::Osc(b, a, off) => {
                let t = a * x + off;
                let v = match b {
                    Builtin::Sin => t.cos(),
                    Builtin::Cos => -t.sin(),
                    Builtin::Sinc => special::sinc_deriv(t),
                };
                Complex64::new(a * v, 0.0)
            }
            Node::Catalog(entry, params) => entry.derivative(params, x),
            Node::Re(inner) => Complex64::new(inner.derivative(x).re, 0.0),
            Node::Im(inner) => Complex64::new(inner.derivative(x).im, 0.0),
        }
    }

    fn trig_polynomial(&self) -> Option<TrigPolynomial> {
        match self {
            Node::Const(v) => Some(TrigPolynomial::constant(*v)),
            Node::Var => None,
            Node::Add(l, r) => Some(l.trig_polynomial()?.add(&r.trig_polynomial()?)),
            Node::Sub(l, r) => Some(l.trig_polynomial()?.sub(&r.trig_polynomial()?)),
            Node::Mul(l, r) => Some(l.trig_polynomial()?.mul(&r.trig_polynomial()?)),
            Node::Scale(inner, s) => Some(inner.trig_polynomial()?.scale(*s)),
            Node::Pow(inner, n) => Some(inner.trig_polynomial()?.powi(*n)),
            Node::Osc(Builtin::Sinc, ..) => None,
            Node::Osc(b, a, off) => {
                // sin(a x + b) = sin(b) cos(a x) + cos(b) sin(a x), etc.
                let (s, c) = off.sin_cos();
                Some(match b {
                    Builtin::Sin => TrigPolynomial::from_terms(0.0, [(*a, s, c)]),
                    Builtin::Cos => TrigPolynomial::from_terms(0.0, [(*a, c, -s)]),
                    Builtin::Sinc => unreachable!(),
                })
            }
            Node::Catalog(entry, params) => entry.trig_polynomial(params),
            // Projections of a real trig polynomial: re is the identity,
            // im is identically zero. Complex-valued subtrees (g, F) have no
            // finite trig-polynomial form in the first place.
            Node::Re(inner) => inner.trig_polynomial(),
            Node::Im(inner) => inner.trig_polynomial().map(|_| TrigPolynomial::constant(0.0)),
        }
    }
}

/// An evaluatable function with a certified band edge `B`: the Fourier
/// support is contained in `[-B, B]` (the bandlimit parameter `W` of the
/// criteria is `B / pi`).
#[derive(Clone)]
pub struct BandlimitedFunction {
    expr: FunctionExpr,
    node: Node,
    band_edge: f64,
    real_valued: bool,
    label: String,
    band_caveat: bool,
}

impl fmt::Debug for BandlimitedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BandlimitedFunction")
            .field("label", &self.label)
            .field("band_edge", &self.band_edge)
            .field("real_valued", &self.real_valued)
            .field("band_caveat", &self.band_caveat)
            .finish()
    }
}

/// Compile against the default catalog registry.
pub fn compile(expr: &FunctionExpr) -> Result<BandlimitedFunction, CompileError> {
    compile_with(expr, default_registry())
}

/// Compile, resolving catalog names against `registry`.
pub fn compile_with(
    expr: &FunctionExpr,
    registry: &CatalogRegistry,
) -> Result<BandlimitedFunction, CompileError> {
    let (node, band_edge, real_valued) = lower(expr.root(), registry)?;
    Ok(BandlimitedFunction {
        expr: expr.clone(),
        node,
        band_edge,
        real_valued,
        label: expr.source().to_string(),
        band_caveat: false,
    })
}

fn lower(
    expr: &Expr,
    registry: &CatalogRegistry,
) -> Result<(Node, f64, bool), CompileError> {
    match expr {
        Expr::Number(v) => Ok((Node::Const(*v), 0.0, true)),
        Expr::Var => Ok((Node::Var, 0.0, true)),
        Expr::Add(l, r) => {
            let (ln, lb, lr) = lower(l, registry)?;
            let (rn, rb, rr) = lower(r, registry)?;
            Ok((Node::Add(Box::new(ln), Box::new(rn)), lb.max(rb), lr && rr))
        }
        Expr::Sub(l, r) => {
            let (ln, lb, lr) = lower(l, registry)?;
            let (rn, rb, rr) = lower(r, registry)?;
            Ok((Node::Sub(Box::new(ln), Box::new(rn)), lb.max(rb), lr && rr))
        }
        Expr::Mul(l, r) => {
            let (ln, lb, lr) = lower(l, registry)?;
            let (rn, rb, rr) = lower(r, registry)?;
            Ok((Node::Mul(Box::new(ln), Box::new(rn)), lb + rb, lr && rr))
        }
        Expr::Div(l, r) => {
            let (ln, lb, lr) = lower(l, registry)?;
            let divisor = const_fold(r).filter(|d| *d != 0.0).ok_or_else(|| {
                CompileError::NotBandlimited {
                    what: format!("quotient with non-constant divisor `{r}`"),
                }
            })?;
            Ok((Node::Scale(Box::new(ln), 1.0 / divisor), lb, lr))
        }
        Expr::Pow(base, n) => {
            let (bn, bb, br) = lower(base, registry)?;
            Ok((Node::Pow(Box::new(bn), *n), bb * f64::from(*n), br))
        }
        Expr::Call(builtin, arg) => {
            let (a, b) = as_affine(arg).ok_or_else(|| CompileError::NotBandlimited {
                what: format!("{}({arg}) with a non-affine argument", builtin.name()),
            })?;
            Ok((Node::Osc(*builtin, a, b), a.abs(), true))
        }
        Expr::Catalog(name, params) => {
            let entry = registry
                .lookup(name)
                .ok_or_else(|| CompileError::UnknownCatalog { name: name.clone() })?;
            entry.validate(params)?;
            Ok((
                Node::Catalog(Arc::clone(entry), params.clone()),
                entry.band_edge(params),
                entry.real_valued(params),
            ))
        }
        Expr::Re(inner) => {
            let (n, b, _) = lower(inner, registry)?;
            Ok((Node::Re(Box::new(n)), b, true))
        }
        Expr::Im(inner) => {
            let (n, b, _) = lower(inner, registry)?;
            Ok((Node::Im(Box::new(n)), b, true))
        }
    }
}

/// Read a subtree as `a*x + b` over literals and arithmetic.
fn as_affine(expr: &Expr) -> Option<(f64, f64)> {
    match expr {
        Expr::Number(v) => Some((0.0, *v)),
        Expr::Var => Some((1.0, 0.0)),
        Expr::Add(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            Some((la + ra, lb + rb))
        }
        Expr::Sub(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            Some((la - ra, lb - rb))
        }
        Expr::Mul(l, r) => {
            let (la, lb) = as_affine(l)?;
            let (ra, rb) = as_affine(r)?;
            if la == 0.0 {
                Some((lb * ra, lb * rb))
            } else if ra == 0.0 {
                Some((la * rb, lb * rb))
            } else {
                None
            }
        }
        Expr::Div(l, r) => {
            let (la, lb) = as_affine(l)?;
            let d = const_fold(r)?;
            if d == 0.0 {
                None
            } else {
                Some((la / d, lb / d))
            }
        }
        Expr::Pow(base, n) => {
            let (ba, bb) = as_affine(base)?;
            if ba == 0.0 {
                Some((0.0, bb.powi(*n as i32)))
            } else if *n == 1 {
                Some((ba, bb))
            } else {
                None
            }
        }
        _ => None,
    }
}

impl BandlimitedFunction {
    pub fn band_edge(&self) -> f64 {
        self.band_edge
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expr(&self) -> &FunctionExpr {
        &self.expr
    }

    /// Set when the declared band edge is inherited rather than exact, e.g.
    /// after subtracting a non-constant polynomial reference.
    pub fn band_caveat(&self) -> bool {
        self.band_caveat
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        let v = self.node.eval(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite {
                label: self.label.clone(),
                x,
            })
        }
    }

    /// Real-path evaluation; meaningful when [`Self::is_real_valued`].
    pub fn eval_real(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(x).map(|v| v.re)
    }

    pub fn derivative(&self, x: f64) -> Result<Complex64, EvalError> {
        let v = self.node.derivative(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite {
                label: self.label.clone(),
                x,
            })
        }
    }

    pub fn derivative_real(&self, x: f64) -> Result<f64, EvalError> {
        self.derivative(x).map(|v| v.re)
    }

    /// Exact trigonometric-polynomial form, when every piece has one.
    pub fn as_trig_polynomial(&self) -> Option<TrigPolynomial> {
        self.node.trig_polynomial()
    }

    /// Subtract a polynomial reference `p(x) = coeffs[0] + coeffs[1] x + ...`.
    ///
    /// The returned function keeps this function's band edge; when `p` is not
    /// constant the result is no longer strictly bandlimited and the band
    /// caveat flag is set.
    pub fn subtract_polynomial(&self, coeffs: &[f64]) -> Result<BandlimitedFunction, CompileError> {
        assert!(coeffs.len() <= 9, "polynomial reference degree is capped at 8");
        let mut poly: Option<Expr> = None;
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let term = match k {
                0 => Expr::Number(c),
                1 => Expr::Mul(Box::new(Expr::Number(c)), Box::new(Expr::Var)),
                _ => Expr::Mul(
                    Box::new(Expr::Number(c)),
                    Box::new(Expr::Pow(Box::new(Expr::Var), k as u32)),
                ),
            };
            poly = Some(match poly {
                None => term,
                Some(acc) => Expr::Add(Box::new(acc), Box::new(term)),
            });
        }
        let Some(poly) = poly else {
            return Ok(self.clone());
        };
        let caveat = coeffs.iter().skip(1).any(|&c| c != 0.0);
        let root = Expr::Sub(Box::new(self.expr.root().clone()), Box::new(poly));
        let expr = FunctionExpr::from_root(root);
        let mut f = compile_with(&expr, default_registry())?;
        f.band_edge = self.band_edge;
        f.band_caveat = self.band_caveat || caveat;
        Ok(f)
    }

    /// Wrap a trigonometric polynomial as a compiled function.
    pub fn from_trig_polynomial(p: &TrigPolynomial) -> BandlimitedFunction {
        let mut root = Expr::Number(p.constant_term());
        for t in p.terms() {
            let arg = Expr::Mul(Box::new(Expr::Number(t.freq)), Box::new(Expr::Var));
            if t.cos_amp != 0.0 {
                let term = Expr::Mul(
                    Box::new(Expr::Number(t.cos_amp)),
                    Box::new(Expr::Call(Builtin::Cos, Box::new(arg.clone()))),
                );
                root = Expr::Add(Box::new(root), Box::new(term));
            }
            if t.sin_amp != 0.0 {
                let term = Expr::Mul(
                    Box::new(Expr::Number(t.sin_amp)),
                    Box::new(Expr::Call(Builtin::Sin, Box::new(arg))),
                );
                root = Expr::Add(Box::new(root), Box::new(term));
            }
        }
        let expr = FunctionExpr::from_root(root);
        compile(&expr).expect("trig polynomials always compile")
    }
}

/// Sup-norm distance between `g(x, a, N)` and `e^{iax}` over a 4096-point
/// uniform grid on `[lo, hi]` (a single point when `lo == hi`). A convergence
/// diagnostic for the power-wave family: it decreases toward zero as `N`
/// grows with `[lo, hi]` fixed.
pub fn sequence_distance(a: f64, n: u32, lo: f64, hi: f64) -> Result<f64, EvalError> {
    assert!(n >= 1, "N must be >= 1");
    assert!(lo <= hi, "empty interval");
    let entry = default_registry().lookup("g").expect("builtin g");
    let params = [a, f64::from(n)];
    let samples = if lo == hi { 1 } else { 4096 };
    let mut sup: f64 = 0.0;
    for i in 0..samples {
        let x = if samples == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (samples - 1) as f64
        };
        let v = entry.eval(&params, x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(EvalError::NonFinite {
                label: format!("g({a}, {n})"),
                x,
            });
        }
        let target = Complex64::from_polar(1.0, a * x);
        sup = sup.max((v - target).norm());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn f(text: &str) -> BandlimitedFunction {
        compile(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn declared_band_edges() {
        assert_eq!(f("h(1,2)").band_edge(), 3.0);
        assert_eq!(f("cos(x)^2").band_edge(), 2.0);
        assert_eq!(f("g(2,10)").band_edge(), 1.0);
        assert_eq!(f("hs(0.5,1)").band_edge(), 2.0);
        assert_eq!(f("F(1,0.2)").band_edge(), 1.0);
        assert_eq!(f("G(1,1)").band_edge(), 1.0);
        assert_eq!(f("sinc(x)").band_edge(), 1.0);
        assert_eq!(f("sinc(x)^2").band_edge(), 2.0);
    }

    #[test]
    fn inferred_band_edges() {
        assert_eq!(f("sin(3*x)").band_edge(), 3.0);
        assert_eq!(f("cos(x)*cos(2*x)").band_edge(), 3.0);
        assert_eq!(f("sin(x) + 0.1*x").band_edge(), 1.0);
        assert_eq!(f("x * sinc(x)").band_edge(), 1.0);
        assert_eq!(f("(cos(x)-0.5)^2").band_edge(), 2.0);
        assert_eq!(f("sin(x/2 - 1)").band_edge(), 0.5);
        assert_eq!(f("im(g(2,20))").band_edge(), 1.0);
        assert_eq!(f("sin(2)*cos(x)").band_edge(), 1.0);
    }

    #[test]
    fn rejects_non_bandlimited() {
        let e = compile(&parse("sin(sin(x))").unwrap());
        assert!(matches!(e, Err(CompileError::NotBandlimited { .. })));
        let e = compile(&parse("cos(x^2)").unwrap());
        assert!(matches!(e, Err(CompileError::NotBandlimited { .. })));
    }

    #[test]
    fn rejects_invalid_catalog_parameters() {
        assert!(matches!(
            compile(&parse("g(2, 0)").unwrap()),
            Err(CompileError::InvalidCatalogParams { .. })
        ));
        assert!(matches!(
            compile(&parse("G(1, 0.25)").unwrap()),
            Err(CompileError::InvalidCatalogParams { .. })
        ));
    }

    #[test]
    fn real_valuedness() {
        assert!(f("h(1,2)").is_real_valued());
        assert!(f("im(g(2,10))").is_real_valued());
        assert!(f("re(F(1,0.2))").is_real_valued());
        assert!(!f("g(2,10)").is_real_valued());
        assert!(!f("F(1,0.2)").is_real_valued());
        assert!(f("G(1,1)").is_real_valued());
    }

    #[test]
    fn eval_examples() {
        let g = f("g(2,10)");
        assert_eq!(g.eval(0.0).unwrap(), Complex64::new(1.0, 0.0));
        let h = f("h(1,2)");
        assert!(h.eval_real(std::f64::consts::FRAC_PI_2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let s3 = f("sin(3*x)");
        assert!((s3.derivative_real(0.0).unwrap() - 3.0).abs() < 1e-15);

        // hs'(x) = -2 sin(x)(cos(x) - 1/2) vanishes where cos x = 1/2
        let hs = f("hs(0.5,1)");
        assert!(hs.derivative_real(std::f64::consts::FRAC_PI_3).unwrap().abs() < 1e-14);

        // d/dx Im g(2,10) at 0 is 2; finite-difference oracle at h = 1e-6
        let img = f("im(g(2,10))");
        let h = 1e-6;
        let fd = (img.eval_real(h).unwrap() - img.eval_real(-h).unwrap()) / (2.0 * h);
        let an = img.derivative_real(0.0).unwrap();
        assert!((an - 2.0).abs() < 1e-12, "analytic {an}");
        assert!((fd - an).abs() < 1e-9, "fd {fd} vs analytic {an}");
    }

    #[test]
    fn product_and_power_derivatives_match_finite_differences() {
        let cases = ["cos(x)*cos(2*x)", "(cos(x)-0.5)^2", "x * sinc(x)", "sin(x)/4 - 2"];
        let h = 1e-5;
        for text in cases {
            let func = f(text);
            for i in 0..25 {
                let x = -3.0 + 0.25 * i as f64;
                let fd = (func.eval_real(x + h).unwrap() - func.eval_real(x - h).unwrap())
                    / (2.0 * h);
                let an = func.derivative_real(x).unwrap();
                assert!((fd - an).abs() < 1e-6, "{text} at {x}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn trig_polynomial_extraction() {
        let p = f("cos(x)*cos(2*x)").as_trig_polynomial().unwrap();
        assert_eq!(p.band_edge(), 3.0);
        let q = f("h(1,2)").as_trig_polynomial().unwrap();
        assert_eq!(p, q);
        assert!(f("g(2,10)").as_trig_polynomial().is_none());
        assert!(f("sinc(x)").as_trig_polynomial().is_none());
        assert!(f("F(1,0.2)").as_trig_polynomial().is_none());
        // scalar quotient and powers survive
        let r = f("(cos(x)-0.5)^2 / 2").as_trig_polynomial().unwrap();
        assert!((r.eval(0.3) - f("hs(0.5,1)").eval_real(0.3).unwrap() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn subtract_polynomial_keeps_band_edge_and_flags_caveat() {
        let base = f("sin(x) + 0.1*x");
        let tilted = base.subtract_polynomial(&[0.0, 0.1]).unwrap();
        assert_eq!(tilted.band_edge(), 1.0);
        assert!(tilted.band_caveat());
        for i in 0..20 {
            let x = -2.0 + 0.2 * i as f64;
            assert!((tilted.eval_real(x).unwrap() - x.sin()).abs() < 1e-12);
        }
        // constant-only subtraction carries no caveat
        let shifted = base.subtract_polynomial(&[0.25]).unwrap();
        assert!(!shifted.band_caveat());
        // p = 0 is the identity
        let same = base.subtract_polynomial(&[]).unwrap();
        assert_eq!(same.label(), base.label());
    }

    #[test]
    fn sequence_distance_examples() {
        // pointwise at the anchor: exact
        assert_eq!(sequence_distance(2.0, 10, 0.0, 0.0).unwrap(), 0.0);
        // strictly decreasing in N on [-1, 1]
        let d: Vec<f64> = [10, 20, 40, 80]
            .iter()
            .map(|&n| sequence_distance(2.0, n, -1.0, 1.0).unwrap())
            .collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] > d[3], "{d:?}");
        // same behaviour at a = 3
        assert!(
            sequence_distance(3.0, 20, -1.0, 1.0).unwrap()
                > sequence_distance(3.0, 40, -1.0, 1.0).unwrap()
        );
    }

    #[test]
    fn power_wave_matches_binomial_series_oracle() {
        // Binomial exponential-sum form of g, for N <= 30; test oracle only.
        // Returns the sum and the total coefficient mass: the alternating
        // coefficients cancel massively, so the oracle's own rounding noise
        // scales with the mass and bounds how tightly it can be asserted.
        fn series(x: f64, a: f64, n: u32) -> (Complex64, f64) {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut mass = 0.0;
            let mut coeff = ((1.0 + a) / 2.0).powi(n as i32); // j = 0
            for j in 0..=n {
                let freq = 1.0 - 2.0 * j as f64 / n as f64;
                sum += coeff * Complex64::from_polar(1.0, freq * x);
                mass += coeff.abs();
                if j < n {
                    coeff *= (n - j) as f64 / (j + 1) as f64 * (1.0 - a) / (1.0 + a);
                }
            }
            (sum, mass)
        }
        for (a, n) in [(2.0, 10_u32), (2.0, 20), (2.0, 30), (3.0, 8)] {
            let g = f(&format!("g({a},{n})"));
            for i in 0..=40 {
                let x = -10.0 + 0.5 * i as f64;
                let got = g.eval(x).unwrap();
                let (want, mass) = series(x, a, n);
                let noise = mass * (n + 1) as f64 * f64::EPSILON;
                let tol = (1e-10 * want.norm().max(1.0)).max(noise);
                assert!(
                    (got - want).norm() <= tol,
                    "g({a},{n}) at {x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn evaluation_is_thread_safe() {
        let func = std::sync::Arc::new(f("im(g(2,20))"));
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let func = std::sync::Arc::clone(&func);
                std::thread::spawn(move || {
                    let mut acc = 0.0;
                    for i in 0..1000 {
                        acc += func.eval_real(t as f64 + i as f64 * 1e-3).unwrap();
                    }
                    acc
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
    }
}
