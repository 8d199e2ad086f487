//! Closed-form scalar fields on ℝⁿ and the named phantom catalogue.
//!
//! A phantom description is text of the form
//! `kind(key=value, ...)`, with several components joined by `;` to form a
//! sum. Example: `mode-bump(m=2, l=1, center=1.6, width=0.5); kernel-element(m=1, i=0, c=1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::harmonics::{check_dim, solid_harmonic, ModeIndex};

/// Where a field is allowed to be nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Entire,
    /// Closed shell `inner ≤ |x| ≤ outer`; zero elsewhere.
    Annulus {
        inner: f64,
        outer: f64,
    },
}

impl Support {
    fn contains(&self, r: f64) -> bool {
        match *self {
            Support::Entire => true,
            Support::Annulus { inner, outer } => r >= inner && r <= outer,
        }
    }
}

/// Monomial `coeff · x1^e1 · x2^e2 · x3^e3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: [u32; 3],
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Zero,
    /// Even-symmetrized Gaussian shell, smooth at the origin.
    Ring {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    /// `b(r) r^m Y_ml(θ)` with `b` an even-symmetrized Gaussian shell.
    ModeBump {
        mode: ModeIndex,
        center: f64,
        width: f64,
        amplitude: f64,
    },
    /// `c r^{-n-2i} r^m Y_ml(θ)`, singular at the origin.
    KernelElement {
        mode: ModeIndex,
        power: usize,
        coeff: f64,
    },
    Polynomial(Vec<Monomial>),
    Sum(Vec<ScalarField>),
    Custom(Evaluator),
}

/// An evaluatable function on ℝⁿ with a declared support.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    support: Support,
    kind: Kind,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.kind {
            Kind::Zero => "zero",
            Kind::Ring { .. } => "radial-gaussian-ring",
            Kind::ModeBump { .. } => "mode-bump",
            Kind::KernelElement { .. } => "kernel-element",
            Kind::Polynomial(_) => "harmonic-polynomial",
            Kind::Sum(_) => "sum-of",
            Kind::Custom(_) => "custom",
        };
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("kind", &name)
            .field("support", &self.support)
            .finish()
    }
}

/// Even Gaussian shell profile `A (e^{-((r-c)/w)²} + e^{-((r+c)/w)²})`.
pub fn shell_profile(r: f64, center: f64, width: f64, amplitude: f64) -> f64 {
    let a = (r - center) / width;
    let b = (r + center) / width;
    amplitude * ((-a * a).exp() + (-b * b).exp())
}

impl ScalarField {
    fn build(dim: usize, kind: Kind) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            support: Support::Entire,
            kind,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::build(dim, Kind::Zero)
    }

    pub fn radial_ring(dim: usize, center: f64, width: f64, amplitude: f64) -> Result<Self> {
        check_width(width)?;
        Self::build(
            dim,
            Kind::Ring {
                center,
                width,
                amplitude,
            },
        )
    }

    pub fn mode_bump(mode: ModeIndex, center: f64, width: f64, amplitude: f64) -> Result<Self> {
        check_width(width)?;
        Self::build(
            mode.dim(),
            Kind::ModeBump {
                mode,
                center,
                width,
                amplitude,
            },
        )
    }

    /// Null-space element `c r^{-n-2i} r^m Y_ml`; requires `m ≥ 1`, `i < m`.
    pub fn kernel_element(mode: ModeIndex, power: usize, coeff: f64) -> Result<Self> {
        if mode.degree() == 0 {
            return Err(Error::invalid("kernel elements need degree m >= 1"));
        }
        if power >= mode.degree() {
            return Err(Error::invalid(format!(
                "kernel power index i = {power} must be below m = {}",
                mode.degree()
            )));
        }
        Self::build(mode.dim(), Kind::KernelElement { mode, power, coeff })
    }

    pub fn polynomial(dim: usize, terms: Vec<Monomial>) -> Result<Self> {
        for t in &terms {
            if dim == 2 && t.exponents[2] != 0 {
                return Err(Error::invalid("x3 used in a two-dimensional polynomial"));
            }
        }
        Self::build(dim, Kind::Polynomial(terms))
    }

    pub fn sum(dim: usize, parts: Vec<ScalarField>) -> Result<Self> {
        if let Some(p) = parts.iter().find(|p| p.dim != dim) {
            return Err(Error::invalid(format!(
                "cannot sum a {}-dimensional field into dimension {dim}",
                p.dim
            )));
        }
        Self::build(dim, Kind::Sum(parts))
    }

    pub fn from_fn(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::build(dim, Kind::Custom(Arc::new(f)))
    }

    /// Same field, but zero outside `inner ≤ |x| ≤ outer`.
    pub fn restricted(mut self, inner: f64, outer: f64) -> Self {
        self.support = Support::Annulus { inner, outer };
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Value at `x` (length `dim`).
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        if let Support::Annulus { .. } = self.support {
            let r = norm(x);
            if !self.support.contains(r) {
                return 0.0;
            }
        }
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Ring {
                center,
                width,
                amplitude,
            } => shell_profile(norm(x), *center, *width, *amplitude),
            Kind::ModeBump {
                mode,
                center,
                width,
                amplitude,
            } => shell_profile(norm(x), *center, *width, *amplitude) * solid_harmonic(*mode, x),
            Kind::KernelElement { mode, power, coeff } => {
                let r = norm(x);
                let p = -(self.dim as i32) - 2 * *power as i32;
                coeff * r.powi(p) * solid_harmonic(*mode, x)
            }
            Kind::Polynomial(terms) => terms
                .iter()
                .map(|t| {
                    t.coeff
                        * x.iter()
                            .zip(t.exponents)
                            .map(|(xi, e)| xi.powi(e as i32))
                            .product::<f64>()
                })
                .sum(),
            Kind::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
            Kind::Custom(f) => f(x),
        }
    }
}

fn check_width(width: f64) -> Result<()> {
    if width > 0.0 && width.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "width must be positive, got {width}"
        )))
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Parameters of one phantom component.
pub type PhantomParams = BTreeMap<String, String>;

/// Construct a named phantom.
///
/// Kinds and parameters (defaults in brackets):
/// - `radial-gaussian-ring`: `center`, `width`, `amplitude` [1]
/// - `mode-bump`: `m`, `l` [1], `center`, `width`, `amplitude` [1]
/// - `kernel-element`: `m`, `l` [1], `i` [0], `c` [1]
/// - `harmonic-polynomial`: `p`, a polynomial in `x1, x2, x3` such as `x1*x2 - 2*x1^2`
/// - `sum-of`: `components`, a `;`-separated list of component descriptions
/// - `zero`
///
/// Every kind accepts `support = inner:outer` to zero the field outside a shell.
pub fn phantom(dim: usize, kind: &str, params: &PhantomParams) -> Result<ScalarField> {
    check_dim(dim).map_err(|e| Error::config(e.to_string()))?;
    let mut p = ParamReader::new(kind, params);
    let field = match kind {
        "zero" => ScalarField::zero(dim)?,
        "radial-gaussian-ring" => {
            let center = p.f64("center", None)?;
            let width = p.f64("width", None)?;
            let amplitude = p.f64("amplitude", Some(1.0))?;
            ScalarField::radial_ring(dim, center, width, amplitude)?
        }
        "mode-bump" => {
            let mode = p.mode(dim)?;
            let center = p.f64("center", None)?;
            let width = p.f64("width", None)?;
            let amplitude = p.f64("amplitude", Some(1.0))?;
            ScalarField::mode_bump(mode, center, width, amplitude)?
        }
        "kernel-element" => {
            let mode = p.mode(dim)?;
            let power = p.usize("i", Some(0))?;
            let coeff = p.f64("c", Some(1.0))?;
            ScalarField::kernel_element(mode, power, coeff)
                .map_err(|e| Error::config(e.to_string()))?
        }
        "harmonic-polynomial" => {
            let text = p.string("p")?;
            let terms = parse_polynomial(&text)?;
            ScalarField::polynomial(dim, terms).map_err(|e| Error::config(e.to_string()))?
        }
        "sum-of" => {
            let text = p.string("components")?;
            parse_phantom(dim, &text)?
        }
        other => return Err(Error::config(format!("unknown phantom kind {other:?}"))),
    };
    let support = p.take("support");
    p.finish()?;
    match support {
        None => Ok(field),
        Some(s) => {
            let (lo, hi) = s
                .split_once(':')
                .ok_or_else(|| Error::config(format!("support must be inner:outer, got {s:?}")))?;
            let lo = parse_num("support", lo)?;
            let hi = parse_num("support", hi)?;
            if !(lo >= 0.0 && hi > lo) {
                return Err(Error::config(format!(
                    "support needs 0 <= inner < outer, got {s}"
                )));
            }
            Ok(field.restricted(lo, hi))
        }
    }
}

/// Parse a phantom description (see the module docs).
pub fn parse_phantom(dim: usize, text: &str) -> Result<ScalarField> {
    let parts = split_top_level(text, ';');
    let mut fields = Vec::new();
    for part in parts.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let (kind, params) = parse_component(part)?;
        fields.push(phantom(dim, &kind, &params)?);
    }
    match fields.len() {
        0 => Err(Error::config("empty phantom description")),
        1 => Ok(fields.pop().unwrap()),
        _ => ScalarField::sum(dim, fields),
    }
}

fn parse_component(text: &str) -> Result<(String, PhantomParams)> {
    let Some(open) = text.find('(') else {
        return Ok((text.trim().to_string(), PhantomParams::new()));
    };
    if !text.ends_with(')') {
        return Err(Error::config(format!("unbalanced parentheses in {text:?}")));
    }
    let kind = text[..open].trim().to_string();
    let inner = &text[open + 1..text.len() - 1];
    let mut params = PhantomParams::new();
    for item in split_top_level(inner, ',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::config(format!("expected key=value, got {item:?}")))?;
        let v = v.trim();
        let v = v
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .unwrap_or(v);
        params.insert(k.trim().to_string(), v.to_string());
    }
    Ok((kind, params))
}

/// Split on `sep` outside of `()` and `[]`.
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("parameter {key}: not a number: {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::config(format!("parameter {key}: non-finite value")));
    }
    Ok(x)
}

struct ParamReader<'a> {
    kind: &'a str,
    params: PhantomParams,
}

impl<'a> ParamReader<'a> {
    fn new(kind: &'a str, params: &PhantomParams) -> Self {
        Self {
            kind,
            params: params.clone(),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.params.remove(key)
    }

    fn string(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| {
            Error::config(format!("phantom {}: missing parameter {key:?}", self.kind))
        })
    }

    fn f64(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match (self.take(key), default) {
            (Some(v), _) => parse_num(key, &v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::config(format!(
                "phantom {}: missing parameter {key:?}",
                self.kind
            ))),
        }
    }

    fn usize(&mut self, key: &str, default: Option<usize>) -> Result<usize> {
        match (self.take(key), default) {
            (Some(v), _) => v.trim().parse().map_err(|_| {
                Error::config(format!(
                    "parameter {key}: expected a nonnegative integer, got {v:?}"
                ))
            }),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::config(format!(
                "phantom {}: missing parameter {key:?}",
                self.kind
            ))),
        }
    }

    fn mode(&mut self, dim: usize) -> Result<ModeIndex> {
        let m = self.usize("m", None)?;
        let l = self.usize("l", Some(1))?;
        ModeIndex::new(dim, m, l).map_err(|e| Error::config(e.to_string()))
    }

    fn finish(self) -> Result<()> {
        match self.params.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::config(format!(
                "phantom {}: unknown parameter {k:?}",
                self.kind
            ))),
        }
    }
}

/// Parse a real polynomial such as `0.5 + x1*x2 - 2*x1^2*x3` (also `x, y, z`).
pub fn parse_polynomial(text: &str) -> Result<Vec<Monomial>> {
    let mut terms = Vec::new();
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::config("empty polynomial"));
    }
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut i = 0;
    let mut pieces = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        // split at +/- that are not part of an exponent like 1e-3
        if (c == '+' || c == '-') && i > start {
            let prev = bytes[i - 1] as char;
            let in_exponent =
                (prev == 'e' || prev == 'E') && i >= 2 && (bytes[i - 2] as char).is_ascii_digit();
            if !in_exponent && prev != '*' && prev != '^' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        i += 1;
    }
    pieces.push(&s[start..]);
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'+' => (1.0, &piece[1..]),
            b'-' => (-1.0, &piece[1..]),
            _ => (1.0, piece),
        };
        if body.is_empty() {
            return Err(Error::config(format!(
                "dangling sign in polynomial {text:?}"
            )));
        }
        let mut coeff = sign;
        let mut exps = [0u32; 3];
        for factor in body.split('*') {
            let (base, power) = match factor.split_once('^') {
                Some((b, p)) => (
                    b,
                    p.parse::<u32>()
                        .map_err(|_| Error::config(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let var = match base {
                "x1" | "x" => Some(0),
                "x2" | "y" => Some(1),
                "x3" | "z" => Some(2),
                _ => None,
            };
            match var {
                Some(v) => exps[v] += power,
                None => coeff *= parse_num("p", base)?.powi(power as i32),
            }
        }
        terms.push(Monomial {
            coeff,
            exponents: exps,
        });
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_phantom() {
        let f = parse_phantom(2, "harmonic-polynomial(p=x1)").unwrap();
        assert_eq!(f.eval(&[0.3, -2.0]), 0.3);
        let f = parse_phantom(3, "harmonic-polynomial(p = 2*x1*x2 - z^2 + 1.5e-1)").unwrap();
        let v = f.eval(&[1.0, 2.0, 3.0]);
        assert!((v - (4.0 - 9.0 + 0.15)).abs() < 1e-14);
    }

    #[test]
    fn kernel_element_closed_form() {
        let f = parse_phantom(2, "kernel-element(m=1, i=0, c=1)").unwrap();
        let x = [0.7, -1.3];
        let r2 = x[0] * x[0] + x[1] * x[1];
        assert!((f.eval(&x) - x[0] / (PI.sqrt() * r2)).abs() < 1e-15);
    }

    #[test]
    fn support_zeroes_outside() {
        let f = parse_phantom(
            2,
            "radial-gaussian-ring(center=1, width=0.5, support=0.5:1.5)",
        )
        .unwrap();
        assert_eq!(f.eval(&[2.0, 0.0]), 0.0);
        assert!(f.eval(&[1.0, 0.0]) > 0.9);
    }

    #[test]
    fn sums_and_errors() {
        let f = parse_phantom(
            2,
            "sum-of(components=[harmonic-polynomial(p=1); harmonic-polynomial(p=x)])",
        )
        .unwrap();
        assert_eq!(f.eval(&[2.0, 5.0]), 3.0);
        let g = parse_phantom(2, "harmonic-polynomial(p=1); harmonic-polynomial(p=x)").unwrap();
        assert_eq!(g.eval(&[2.0, 5.0]), 3.0);

        for bad in [
            "nope(m=1)",
            "mode-bump(m=1)",
            "mode-bump(m=1, center=1, width=0.3, bogus=2)",
            "kernel-element(m=0)",
            "kernel-element(m=2, i=2)",
            "mode-bump(m=1, l=3, center=1, width=1)",
        ] {
            let err = parse_phantom(2, bad).unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{bad}: {err}");
        }
    }

    #[test]
    fn shell_is_even() {
        for r in [0.0, 0.2, 1.0] {
            assert_eq!(
                shell_profile(r, 1.5, 0.5, 1.0),
                shell_profile(-r, 1.5, 0.5, 1.0)
            );
        }
    }
}
