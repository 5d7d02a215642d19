//! Gaussian densities, the normal CDF, and closed-form L² inner products
//! between Gaussian bumps and interval indicators.
//!
//! Every Gram entry in the crate comes from these formulas; nothing here
//! uses quadrature. The bump-by-bump case rests on the product identity
//!
//! ```text
//! p_a(u - s) p_b(u - t) = p_{a+b}(s - t) p_v(u - m),
//! v = ab / (a + b),  m = (b s + a t) / (a + b)
//! ```
//!
//! so an integral over `[lo, hi]` is a prefactor times a normal mass.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointproc::Window;

/// Exponents below this evaluate to exactly zero.
pub const UNDERFLOW_EXPONENT: f64 = -700.0;

/// Normal density with mean zero and the given variance.
pub fn density(variance: f64, x: f64) -> Result<f64> {
    check_variance(variance)?;
    Ok(pdf(variance, x))
}

#[inline]
pub(crate) fn pdf(variance: f64, x: f64) -> f64 {
    let exponent = -x * x / (2.0 * variance);
    if exponent < UNDERFLOW_EXPONENT {
        0.0
    } else {
        exponent.exp() / (2.0 * PI * variance).sqrt()
    }
}

fn check_variance(variance: f64) -> Result<()> {
    if variance.is_finite() && variance > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "variance must be positive and finite, got {variance}"
        )))
    }
}

/// Standard normal CDF Φ(x).
///
/// Negative arguments go through `erfc` directly; positive ones are
/// reflected, so `Φ(x) + Φ(-x) = 1` up to one rounding.
pub fn normal_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        lower_tail(x)
    } else {
        1.0 - lower_tail(-x)
    }
}

#[inline]
fn lower_tail(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `Φ(hi) - Φ(lo)` without cancellation in either tail. Accepts infinities.
pub fn normal_mass(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if lo >= 0.0 {
        lower_tail(-lo) - lower_tail(-hi)
    } else if hi <= 0.0 {
        lower_tail(hi) - lower_tail(lo)
    } else {
        1.0 - lower_tail(lo) - lower_tail(-hi)
    }
}

/// A scaled shifted normal density `coefficient * p_variance(· - center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBump", into = "RawBump")]
pub struct GaussianBump {
    center: f64,
    variance: f64,
    coefficient: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBump {
    center: f64,
    variance: f64,
    #[serde(default = "one")]
    coefficient: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawBump> for GaussianBump {
    type Error = Error;
    fn try_from(r: RawBump) -> Result<Self> {
        GaussianBump::new(r.center, r.variance, r.coefficient)
    }
}

impl From<GaussianBump> for RawBump {
    fn from(b: GaussianBump) -> Self {
        RawBump {
            center: b.center,
            variance: b.variance,
            coefficient: b.coefficient,
        }
    }
}

impl GaussianBump {
    pub fn new(center: f64, variance: f64, coefficient: f64) -> Result<Self> {
        check_variance(variance)?;
        if !center.is_finite() || !coefficient.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bump center and coefficient must be finite, got {center}, {coefficient}"
            )));
        }
        Ok(GaussianBump {
            center,
            variance,
            coefficient,
        })
    }

    /// Unit-coefficient bump. Panics on a non-positive variance.
    pub fn unit(center: f64, variance: f64) -> Self {
        GaussianBump::new(center, variance, 1.0).expect("valid bump")
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn with_coefficient(self, coefficient: f64) -> Self {
        GaussianBump {
            coefficient,
            ..self
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficient * pdf(self.variance, x - self.center)
    }
}

/// `coefficient * 1_[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIndicator", into = "RawIndicator")]
pub struct IndicatorAtom {
    lo: f64,
    hi: f64,
    coefficient: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIndicator {
    lo: f64,
    hi: f64,
    #[serde(default = "one")]
    coefficient: f64,
}

impl TryFrom<RawIndicator> for IndicatorAtom {
    type Error = Error;
    fn try_from(r: RawIndicator) -> Result<Self> {
        IndicatorAtom::new(r.lo, r.hi, r.coefficient)
    }
}

impl From<IndicatorAtom> for RawIndicator {
    fn from(a: IndicatorAtom) -> Self {
        RawIndicator {
            lo: a.lo,
            hi: a.hi,
            coefficient: a.coefficient,
        }
    }
}

impl IndicatorAtom {
    pub fn new(lo: f64, hi: f64, coefficient: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && coefficient.is_finite()) || lo > hi {
            return Err(Error::InvalidParameter(format!(
                "indicator needs finite lo <= hi and coefficient, got [{lo}, {hi}), {coefficient}"
            )));
        }
        Ok(IndicatorAtom {
            lo,
            hi,
            coefficient,
        })
    }

    /// Unit-coefficient indicator. Panics unless `lo <= hi`.
    pub fn unit(lo: f64, hi: f64) -> Self {
        IndicatorAtom::new(lo, hi, 1.0).expect("valid indicator")
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.lo <= x && x < self.hi {
            self.coefficient
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    Bump(GaussianBump),
    Indicator(IndicatorAtom),
}

impl Atom {
    pub fn coefficient(&self) -> f64 {
        match self {
            Atom::Bump(b) => b.coefficient,
            Atom::Indicator(i) => i.coefficient,
        }
    }

    pub fn with_coefficient(self, c: f64) -> Self {
        match self {
            Atom::Bump(b) => Atom::Bump(b.with_coefficient(c)),
            Atom::Indicator(i) => Atom::Indicator(IndicatorAtom {
                coefficient: c,
                ..i
            }),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Atom::Bump(b) => b.eval(x),
            Atom::Indicator(i) => i.eval(x),
        }
    }

    /// Points where the atom is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Atom::Bump(_) => Vec::new(),
            Atom::Indicator(i) => vec![i.lo, i.hi],
        }
    }
}

impl From<GaussianBump> for Atom {
    fn from(b: GaussianBump) -> Self {
        Atom::Bump(b)
    }
}

impl From<IndicatorAtom> for Atom {
    fn from(i: IndicatorAtom) -> Self {
        Atom::Indicator(i)
    }
}

/// Integration domain: the whole line or a finite interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    FullLine,
    Interval(Window),
}

impl Domain {
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Domain::FullLine => (f64::NEG_INFINITY, f64::INFINITY),
            Domain::Interval(w) => (w.lo(), w.hi()),
        }
    }
}

impl From<Window> for Domain {
    fn from(w: Window) -> Self {
        Domain::Interval(w)
    }
}

/// Full-line inner product of two bumps: `c1 c2 p_{ε1+ε2}(center1 - center2)`.
pub fn inner_full(b1: &GaussianBump, b2: &GaussianBump) -> f64 {
    b1.coefficient * b2.coefficient * pdf(b1.variance + b2.variance, b1.center - b2.center)
}

/// `∫_interval a1(u) a2(u) du` in closed form.
pub fn inner_restricted(a1: &Atom, a2: &Atom, interval: Window) -> f64 {
    inner(a1, a2, Domain::Interval(interval))
}

/// `∫_domain a1(u) a2(u) du` in closed form.
pub fn inner(a1: &Atom, a2: &Atom, domain: Domain) -> f64 {
    let (a, b) = domain.bounds();
    let base = match (a1, a2) {
        (Atom::Bump(x), Atom::Bump(y)) => bump_bump(x, y, a, b),
        (Atom::Bump(x), Atom::Indicator(i)) | (Atom::Indicator(i), Atom::Bump(x)) => {
            bump_mass(x, a.max(i.lo), b.min(i.hi))
        }
        (Atom::Indicator(i), Atom::Indicator(j)) => {
            let lo = a.max(i.lo).max(j.lo);
            let hi = b.min(i.hi).min(j.hi);
            (hi - lo).max(0.0)
        }
    };
    a1.coefficient() * a2.coefficient() * base
}

/// Unit-coefficient bump product integrated over `[a, b]`.
fn bump_bump(x: &GaussianBump, y: &GaussianBump, a: f64, b: f64) -> f64 {
    let total = x.variance + y.variance;
    let prefactor = pdf(total, x.center - y.center);
    if prefactor == 0.0 || b <= a {
        return 0.0;
    }
    let v = x.variance * y.variance / total;
    let m = (y.variance * x.center + x.variance * y.center) / total;
    let sd = v.sqrt();
    prefactor * normal_mass((a - m) / sd, (b - m) / sd)
}

/// Mass of a unit-coefficient bump on `[lo, hi]`.
fn bump_mass(x: &GaussianBump, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let sd = x.variance.sqrt();
    normal_mass((lo - x.center) / sd, (hi - x.center) / sd)
}

/// A finite linear combination of bumps and indicators.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetFunction {
    atoms: Vec<Atom>,
}

impl TargetFunction {
    pub fn new(atoms: Vec<Atom>) -> Self {
        TargetFunction { atoms }
    }

    pub fn zero() -> Self {
        TargetFunction::default()
    }

    pub fn single(atom: impl Into<Atom>) -> Self {
        TargetFunction {
            atoms: vec![atom.into()],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn push(&mut self, atom: impl Into<Atom>) {
        self.atoms.push(atom.into());
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.atoms.iter().map(|a| a.eval(x)).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        TargetFunction {
            atoms: self
                .atoms
                .iter()
                .map(|a| a.with_coefficient(a.coefficient() * s))
                .collect(),
        }
    }

    /// Sorted, deduplicated breakpoints of all indicator atoms.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.atoms.iter().flat_map(|a| a.breakpoints()).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// `⟨f, g⟩` over `domain`.
pub fn inner_product(f: &TargetFunction, g: &TargetFunction, domain: Domain) -> f64 {
    f.atoms
        .iter()
        .map(|a| g.atoms.iter().map(|b| inner(a, b, domain)).sum::<f64>())
        .sum()
}

/// `⟨f, atom⟩` over `domain`.
pub fn inner_with_atom(f: &TargetFunction, atom: &Atom, domain: Domain) -> f64 {
    f.atoms.iter().map(|a| inner(a, atom, domain)).sum()
}

/// `‖f‖²` over `domain`, clamped at zero.
pub fn norm_sq(f: &TargetFunction, domain: Domain) -> f64 {
    let atoms = &f.atoms;
    let mut total = 0.0;
    for (i, a) in atoms.iter().enumerate() {
        total += inner(a, a, domain);
        for b in &atoms[i + 1..] {
            total += 2.0 * inner(a, b, domain);
        }
    }
    total.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2_ZERO: f64 = 0.28209479177387814;

    #[test]
    fn density_values() {
        assert_eq!(density(1.0 / (2.0 * PI), 0.0).unwrap(), 1.0);
        assert_eq!(density(1.0, 0.0).unwrap(), 0.3989422804014327);
        assert!(density(0.0, 1.0).is_err());
        assert!(density(-1.0, 1.0).is_err());
        for (v, x) in [(0.3, 1.7), (2.0, -4.0), (9.0, 0.01)] {
            assert_eq!(density(v, x).unwrap(), density(v, -x).unwrap());
        }
    }

    #[test]
    fn density_underflows_to_zero() {
        assert_eq!(pdf(1.0, 40.0), 0.0);
        assert!(pdf(1.0, 37.0) > 0.0);
    }

    #[test]
    fn cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) - 0.8413447460685429).abs() < 1e-15);
        assert_eq!(normal_cdf(f64::INFINITY), 1.0);
        assert_eq!(normal_cdf(f64::NEG_INFINITY), 0.0);
        for x in [0.1, 0.5, 1.3, 2.9, 5.5, 9.0, 20.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn mass_is_accurate_in_the_far_tail() {
        // Φ(-10) - Φ(-11) vs the mirrored upper tail
        let lower = normal_mass(-11.0, -10.0);
        let upper = normal_mass(10.0, 11.0);
        assert!(lower > 7e-24 && lower < 8e-24, "{lower}");
        assert!(((lower - upper) / lower).abs() < 1e-14);
        assert_eq!(normal_mass(f64::NEG_INFINITY, f64::INFINITY), 1.0);
        assert_eq!(normal_mass(1.0, 1.0), 0.0);
    }

    #[test]
    fn full_line_bump_products() {
        let a = GaussianBump::unit(0.0, 1.0);
        assert!((inner_full(&a, &a) - P2_ZERO).abs() < 1e-16);
        let l = GaussianBump::unit(-1.0, 1.0);
        let r = GaussianBump::unit(1.0, 1.0);
        assert_eq!(inner_full(&l, &r), inner_full(&r, &l));
        assert!((inner_full(&l, &r) - P2_ZERO * (-1.0f64).exp()).abs() < 1e-16);
        let full = inner(&l.into(), &r.into(), Domain::FullLine);
        assert_eq!(full, inner_full(&l, &r));
    }

    #[test]
    fn restricted_matches_full_when_tails_negligible() {
        let a = GaussianBump::unit(0.4, 2.0);
        let b = GaussianBump::new(-1.1, 0.5, 3.0).unwrap();
        let win = Window::new(-30.0, 30.0).unwrap();
        let r = inner_restricted(&a.into(), &b.into(), win);
        let f = inner_full(&a, &b);
        assert!(((r - f) / f).abs() < 1e-12);
    }

    #[test]
    fn indicator_overlap() {
        let i = IndicatorAtom::unit(0.0, 1.0);
        let j = IndicatorAtom::unit(0.5, 2.0);
        let win = Window::new(0.0, 1.0).unwrap();
        assert_eq!(inner_restricted(&i.into(), &j.into(), win), 0.5);
        assert_eq!(norm_sq(&TargetFunction::single(i), Domain::FullLine), 1.0);
    }

    #[test]
    fn norm_sq_cases() {
        let b = GaussianBump::unit(0.0, 1.0);
        assert!((norm_sq(&TargetFunction::single(b), Domain::FullLine) - P2_ZERO).abs() < 1e-16);
        let cancel = TargetFunction::new(vec![b.into(), b.with_coefficient(-1.0).into()]);
        assert_eq!(norm_sq(&cancel, Domain::FullLine), 0.0);
        assert_eq!(norm_sq(&TargetFunction::zero(), Domain::FullLine), 0.0);
    }

    #[test]
    fn atoms_parse_from_json() {
        let f: TargetFunction = serde_json::from_str(
            r#"[{"bump":{"center":0.3,"variance":0.7}},{"indicator":{"lo":0,"hi":1,"coefficient":2}}]"#,
        )
        .unwrap();
        assert_eq!(f.atoms().len(), 2);
        assert_eq!(f.atoms()[1].coefficient(), 2.0);
        assert!(
            serde_json::from_str::<TargetFunction>(r#"[{"bump":{"center":0,"variance":0}}]"#)
                .is_err()
        );
        assert!(
            serde_json::from_str::<TargetFunction>(r#"[{"indicator":{"lo":1,"hi":0}}]"#).is_err()
        );
    }
}
