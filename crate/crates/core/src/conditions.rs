//! Effective classes, decompositions and the numeric side of the conditions
//! (A1), (A2), (A3) on a curve class `L`.
//!
//! The geometric parts of (A2) and (A3) are replaced by dimension counts:
//! "no subscheme of positive genus" becomes "every effective sub-class has
//! genus <= 0", and "non-integral curves lie in codimension 2" becomes
//! `l1 + l2 <= l - 2` over every two-part split. Reports computed this way are
//! marked as proxies.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohom::{h0, linear_system_dim};
use crate::error::{Error, Result};
use crate::picard::{
    arithmetic_genus, canonical_class, intersect, DivisorClass, Surface, SurfaceKind,
};
use crate::scalar::Scalar;

/// Largest coefficient sum accepted by [`enumerate_decompositions`].
pub const DECOMPOSITION_WEIGHT_CAP: u64 = 24;

/// Largest candidate box scanned by [`enumerate_effective_below`].
pub const EFFECTIVE_BOX_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    /// Every effective sub-class has genus <= 0; the moduli space is `|L|` itself.
    GenusNonPositive,
    /// Positive genus with the conditions verified, but only `r = 1` is described.
    PositiveGenusGeneral,
    GenusOne,
    GenusTwo,
    Unsupported,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A multiset of at least two nonzero effective classes, sorted in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition<T> {
    parts: Vec<DivisorClass<T>>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn new(mut parts: Vec<DivisorClass<T>>) -> Self {
        parts.sort();
        Decomposition { parts }
    }

    pub fn parts(&self) -> &[DivisorClass<T>] {
        &self.parts
    }

    pub fn sum(&self, s: &Surface) -> DivisorClass<T> {
        self.parts.iter().fold(s.zero_class(), |acc, p| &acc + p)
    }

    pub fn format(&self, s: &Surface) -> String {
        let parts: Vec<String> = self.parts.iter().map(|p| s.format_class(p)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    A1,
    A2,
    A3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness<T> {
    Class(DivisorClass<T>),
    Decomposition(Decomposition<T>),
}

impl<T: Scalar> Witness<T> {
    pub fn format(&self, s: &Surface) -> String {
        match self {
            Witness::Class(c) => s.format_class(c),
            Witness::Decomposition(d) => d.format(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport<T> {
    pub condition: Condition,
    pub passed: bool,
    /// Always present on failure; on success, the tightest case when one exists.
    pub witness: Option<Witness<T>>,
    pub details: Vec<String>,
    /// The report checks a numeric stand-in for a geometric statement.
    pub proxy: bool,
}

fn check_effective<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<()> {
    if is_effective(s, l)? {
        Ok(())
    } else {
        Err(Error::NotEffective(s.format_class(l)))
    }
}

/// `h^0(D) > 0`.
pub fn is_effective<T: Scalar>(s: &Surface, d: &DivisorClass<T>) -> Result<bool> {
    Ok(h0(s, d)?.is_positive())
}

/// `lower <= upper`, i.e. `upper - lower` is zero or effective. On the blowup a
/// difference outside the verified `h^0` scope counts as not comparable.
fn is_below<T: Scalar>(s: &Surface, lower: &DivisorClass<T>, upper: &DivisorClass<T>) -> bool {
    let diff = upper - lower;
    diff.is_zero() || is_effective(s, &diff).unwrap_or(false)
}

fn to_u64<T: Scalar>(v: &T) -> Option<u64> {
    v.to_u64()
}

fn range_inclusive<T: Scalar>(lo: T, hi: T) -> impl Iterator<Item = T> {
    let mut next = lo;
    std::iter::from_fn(move || {
        if next > hi {
            return None;
        }
        let out = next.clone();
        next = next.clone() + T::one();
        Some(out)
    })
}

/// All `D` with `0 < D <= L`, in canonical order.
///
/// On the blowup, the exceptional coefficient of `D` ranges over the values
/// for which both `D` and `L - D` stay inside the verified `h^0` scope.
pub fn enumerate_effective_below<T: Scalar>(
    s: &Surface,
    l: &DivisorClass<T>,
) -> Result<Vec<DivisorClass<T>>> {
    check_effective(s, l)?;
    let box_size = l
        .coeffs()
        .iter()
        .try_fold(1u64, |acc, c| {
            to_u64(&(c.abs() + T::from_int(3))).and_then(|w| acc.checked_mul(w))
        })
        .filter(|&n| n <= EFFECTIVE_BOX_CAP)
        .ok_or_else(|| {
            Error::EnumerationCap(format!(
                "effective sub-classes of {} exceed the scan limit of {EFFECTIVE_BOX_CAP} candidates",
                s.format_class(l)
            ))
        })?;
    let mut out = Vec::with_capacity(box_size as usize);
    let zero = T::zero;
    match s.kind() {
        SurfaceKind::ProjectivePlane => {
            for d in range_inclusive(T::one(), l.coeff(0).clone()) {
                out.push(DivisorClass::new(vec![d]));
            }
        }
        SurfaceKind::Hirzebruch(_) => {
            for a in range_inclusive(zero(), l.coeff(0).clone()) {
                for b in range_inclusive(zero(), l.coeff(1).clone()) {
                    let d = DivisorClass::new(vec![a.clone(), b]);
                    if !d.is_zero() {
                        out.push(d);
                    }
                }
            }
        }
        SurfaceKind::BlowupHirzebruch(_) => {
            let k_hi = l.coeff(2).clone() + T::one();
            for a in range_inclusive(zero(), l.coeff(0).clone()) {
                for b in range_inclusive(zero(), l.coeff(1).clone()) {
                    for k in range_inclusive(-T::one(), k_hi.clone()) {
                        let d = DivisorClass::new(vec![a.clone(), b.clone(), k]);
                        if d.is_zero() || !is_effective(s, &d)? {
                            continue;
                        }
                        let rest = l - &d;
                        if rest.is_zero() || is_effective(s, &rest)? {
                            out.push(d);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All multisets of at least two nonzero effective classes summing to `L`.
pub fn enumerate_decompositions<T: Scalar>(
    s: &Surface,
    l: &DivisorClass<T>,
) -> Result<Vec<Decomposition<T>>> {
    check_effective(s, l)?;
    let weight = l.weight();
    match to_u64(&weight) {
        Some(w) if w <= DECOMPOSITION_WEIGHT_CAP => {}
        _ => return Err(Error::EnumerationCap(format!(
            "decompositions of {} need coefficient sum <= {DECOMPOSITION_WEIGHT_CAP}, got {weight}",
            s.format_class(l)
        ))),
    }
    // Parts are chosen in non-increasing canonical order.
    let mut candidates = enumerate_effective_below(s, l)?;
    candidates.reverse();

    fn go<T: Scalar>(
        s: &Surface,
        candidates: &[DivisorClass<T>],
        start: usize,
        remaining: &DivisorClass<T>,
        stack: &mut Vec<DivisorClass<T>>,
        out: &mut Vec<Decomposition<T>>,
    ) {
        if remaining.is_zero() {
            if stack.len() >= 2 {
                out.push(Decomposition::new(stack.clone()));
            }
            return;
        }
        for (i, part) in candidates.iter().enumerate().skip(start) {
            if !is_below(s, part, remaining) {
                continue;
            }
            let rest = remaining - part;
            stack.push(part.clone());
            go(s, candidates, i, &rest, stack, out);
            stack.pop();
        }
    }

    let mut out = Vec::new();
    go(s, &candidates, 0, l, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Toric numeric very-ampleness: `d >= 1` on the plane, `a >= 1` and `b >= ae + 1` on `F_e`.
pub fn is_very_ample<T: Scalar>(s: &Surface, h: &DivisorClass<T>) -> Result<bool> {
    s.check(h)?;
    match s.kind() {
        SurfaceKind::ProjectivePlane => Ok(h.coeff(0) >= &T::one()),
        SurfaceKind::Hirzebruch(e) => {
            let (a, b) = (h.coeff(0), h.coeff(1));
            Ok(a >= &T::one() && b.clone() >= a.clone() * T::from_int(i64::from(e)) + T::one())
        }
        SurfaceKind::BlowupHirzebruch(_) => Err(Error::UnsupportedSurface(format!(
            "very ampleness is not decided on {s}"
        ))),
    }
}

/// `H` on the plane, `G + (e+1)F` on `F_e`.
pub fn default_very_ample<T: Scalar>(s: &Surface) -> Result<DivisorClass<T>> {
    match s.kind() {
        SurfaceKind::ProjectivePlane => s.class(&[1]),
        SurfaceKind::Hirzebruch(e) => s.class(&[1, i64::from(e) + 1]),
        SurfaceKind::BlowupHirzebruch(_) => Err(Error::UnsupportedSurface(format!(
            "no very ample class is provided on {s}"
        ))),
    }
}

/// (A1): every `0 < L' <= L` has `L'.(K+H) < 0`, except `L' = G, 2G` on `F_1`.
pub fn check_a1<T: Scalar>(
    s: &Surface,
    l: &DivisorClass<T>,
    h: &DivisorClass<T>,
) -> Result<ConditionReport<T>> {
    if let SurfaceKind::BlowupHirzebruch(_) = s.kind() {
        return Err(Error::UnsupportedSurface(format!(
            "(A1) is not checked on {s}"
        )));
    }
    if !is_very_ample(s, h)? {
        return Err(Error::NotVeryAmple(s.format_class(h)));
    }
    check_effective(s, l)?;
    let k_plus_h = &canonical_class::<T>(s) + h;
    let exceptions: Vec<DivisorClass<T>> = if s.kind() == SurfaceKind::Hirzebruch(1) {
        vec![s.class(&[1, 0])?, s.class(&[2, 0])?]
    } else {
        Vec::new()
    };
    let mut details = vec![format!(
        "H = {}, K + H = {}",
        s.format_class(h),
        s.format_class(&k_plus_h)
    )];
    let below = enumerate_effective_below(s, l)?;
    let mut worst: Option<(T, DivisorClass<T>)> = None;
    for sub in &below {
        let v = intersect(s, sub, &k_plus_h)?;
        if v.is_negative() {
            if worst.as_ref().is_none_or(|(w, _)| &v > w) {
                worst = Some((v, sub.clone()));
            }
            continue;
        }
        if exceptions.contains(sub) {
            details.push(format!(
                "{}.(K+H) = {v} allowed by the exception on F_1",
                s.format_class(sub)
            ));
            continue;
        }
        details.push(format!("{}.(K+H) = {v} >= 0", s.format_class(sub)));
        return Ok(ConditionReport {
            condition: Condition::A1,
            passed: false,
            witness: Some(Witness::Class(sub.clone())),
            details,
            proxy: false,
        });
    }
    details.push(format!("{} effective sub-classes checked", below.len()));
    if let Some((v, _)) = &worst {
        details.push(format!("largest negative pairing {v}"));
    }
    Ok(ConditionReport {
        condition: Condition::A1,
        passed: true,
        witness: worst.map(|(_, c)| Witness::Class(c)),
        details,
        proxy: false,
    })
}

/// Genus and `dim |D|` of each class, cached.
struct ClassData<'a, T> {
    surface: &'a Surface,
    cache: HashMap<DivisorClass<T>, (T, T)>,
}

impl<'a, T: Scalar> ClassData<'a, T> {
    fn new(surface: &'a Surface) -> Self {
        ClassData {
            surface,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, d: &DivisorClass<T>) -> Result<(T, T)> {
        if let Some(v) = self.cache.get(d) {
            return Ok(v.clone());
        }
        let v = (
            arithmetic_genus(self.surface, d)?,
            linear_system_dim(self.surface, d)?,
        );
        self.cache.insert(d.clone(), v.clone());
        Ok(v)
    }

    fn genus(&mut self, d: &DivisorClass<T>) -> Result<T> {
        Ok(self.get(d)?.0)
    }

    fn dim(&mut self, d: &DivisorClass<T>) -> Result<T> {
        Ok(self.get(d)?.1)
    }
}

/// (A2), numerically: (i) genus <= 0 is inherited by effective sub-classes,
/// (ii) `sum l_i + sum max(g_i, 0) + 2 <= l + g_L` over every decomposition.
pub fn check_a2<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<ConditionReport<T>> {
    check_effective(s, l)?;
    let decompositions = enumerate_decompositions(s, l)?;
    let below = enumerate_effective_below(s, l)?;
    let mut data = ClassData::new(s);
    let mut details = Vec::new();

    for outer in &below {
        if data.genus(outer)?.is_positive() {
            continue;
        }
        for inner in &below {
            if !is_below(s, inner, outer) {
                continue;
            }
            let g = data.genus(inner)?;
            if g.is_positive() {
                details.push(format!(
                    "{} has genus <= 0 but contains {} of genus {g}",
                    s.format_class(outer),
                    s.format_class(inner)
                ));
                return Ok(ConditionReport {
                    condition: Condition::A2,
                    passed: false,
                    witness: Some(Witness::Class(inner.clone())),
                    details,
                    proxy: true,
                });
            }
        }
    }
    details.push("non-positive genus is inherited by all effective sub-classes".into());

    let (g_l, dim_l) = data.get(l)?;
    let bound = dim_l.clone() + g_l.clone();
    let mut tightest: Option<(T, Decomposition<T>)> = None;
    for dec in &decompositions {
        let mut lhs = T::from_int(2);
        for part in dec.parts() {
            let (g, dim) = data.get(part)?;
            lhs = lhs + dim + if g.is_positive() { g } else { T::zero() };
        }
        let slack = bound.clone() - lhs.clone();
        if slack.is_negative() {
            details.push(format!(
                "{}: sum l_i + sum max(g_i,0) + 2 = {lhs} > l + g_L = {bound}",
                dec.format(s)
            ));
            return Ok(ConditionReport {
                condition: Condition::A2,
                passed: false,
                witness: Some(Witness::Decomposition(dec.clone())),
                details,
                proxy: true,
            });
        }
        if tightest.as_ref().is_none_or(|(t, _)| &slack < t) {
            tightest = Some((slack, dec.clone()));
        }
    }
    details.push(format!(
        "{} decompositions satisfy the bound l + g_L = {dim_l} + {g_l}",
        decompositions.len()
    ));
    if let Some((slack, dec)) = &tightest {
        details.push(format!("tightest: {} with slack {slack}", dec.format(s)));
    }
    Ok(ConditionReport {
        condition: Condition::A2,
        passed: true,
        witness: tightest.map(|(_, d)| Witness::Decomposition(d)),
        details,
        proxy: true,
    })
}

/// Nef test against the curves that generate the effective cone.
fn is_nef<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<bool> {
    let curves: Vec<DivisorClass<T>> = match s.kind() {
        SurfaceKind::ProjectivePlane => vec![s.class(&[1])?],
        SurfaceKind::Hirzebruch(_) => vec![s.class(&[1, 0])?, s.class(&[0, 1])?],
        SurfaceKind::BlowupHirzebruch(0) => {
            vec![
                s.class(&[1, 0, -1])?,
                s.class(&[0, 1, -1])?,
                s.class(&[0, 0, 1])?,
            ]
        }
        SurfaceKind::BlowupHirzebruch(_) => {
            vec![
                s.class(&[1, 0, 0])?,
                s.class(&[0, 1, -1])?,
                s.class(&[0, 0, 1])?,
            ]
        }
    };
    for c in &curves {
        if intersect(s, l, c)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (A3), numerically: every two-part split and every multiple structure
/// `L = m L0` has a locus of codimension >= 2 in `|L|`, `g_L >= 1`, and `L` is nef.
pub fn check_a3<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<ConditionReport<T>> {
    check_effective(s, l)?;
    let mut data = ClassData::new(s);
    let (g_l, dim_l) = data.get(l)?;
    let limit = dim_l.clone() - T::from_int(2);
    let mut details = vec![format!(
        "l = {dim_l}, so split loci need dimension <= {limit}"
    )];
    let fail = |witness: Witness<T>, details: Vec<String>| ConditionReport {
        condition: Condition::A3,
        passed: false,
        witness: Some(witness),
        details,
        proxy: true,
    };

    if !g_l.is_positive() {
        details.push(format!(
            "g_L = {g_l} < 1: no connected smooth curve of positive genus"
        ));
        return Ok(fail(Witness::Class(l.clone()), details));
    }
    if !is_nef(s, l)? {
        details.push("L is not nef, so |L| has a fixed component".into());
        return Ok(fail(Witness::Class(l.clone()), details));
    }

    let below = enumerate_effective_below(s, l)?;
    let mut tightest: Option<(T, Decomposition<T>)> = None;
    for first in &below {
        let second = l - first;
        if second.is_zero() || &second > first || !is_effective(s, &second).unwrap_or(false) {
            continue;
        }
        let split = Decomposition::new(vec![first.clone(), second.clone()]);
        let locus = data.dim(first)? + data.dim(&second)?;
        let slack = limit.clone() - locus.clone();
        if slack.is_negative() {
            details.push(format!(
                "split {}: l1 + l2 = {locus} > {limit}",
                split.format(s)
            ));
            return Ok(fail(Witness::Decomposition(split), details));
        }
        if tightest.as_ref().is_none_or(|(t, _)| &slack < t) {
            tightest = Some((slack, split));
        }
    }

    let content = l.coeffs().iter().fold(T::zero(), |acc, c| acc.gcd(c));
    for m in range_inclusive(T::from_int(2), content.clone()) {
        if !content.is_multiple_of(&m) {
            continue;
        }
        let reduced = DivisorClass::new(l.coeffs().iter().map(|c| c.clone() / m.clone()).collect());
        let locus = data.dim(&reduced)?;
        if locus > limit {
            details.push(format!(
                "multiple {m}({}): l0 = {locus} > {limit}",
                s.format_class(&reduced)
            ));
            return Ok(fail(Witness::Class(reduced), details));
        }
    }

    details.push(format!("g_L = {g_l} >= 1 and L is nef"));
    if let Some((slack, dec)) = &tightest {
        details.push(format!(
            "tightest split {} with slack {slack}",
            dec.format(s)
        ));
    }
    Ok(ConditionReport {
        condition: Condition::A3,
        passed: true,
        witness: tightest.map(|(_, d)| Witness::Decomposition(d)),
        details,
        proxy: true,
    })
}

/// `L = dH` with `d >= 3` on the plane.
fn is_plane_curve_family<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> bool {
    s.kind() == SurfaceKind::ProjectivePlane && l.coeff(0) >= &T::from_int(3)
}

/// `L = 2G + nF` with `n > max(1, 2e)` on `F_0` or `F_1`.
fn is_bisection_family<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> bool {
    match s.kind() {
        SurfaceKind::Hirzebruch(e) if e <= 1 => {
            let floor = T::from_int(i64::from((2 * e).max(1)));
            l.coeff(0) == &T::from_int(2) && l.coeff(1) > &floor
        }
        _ => false,
    }
}

/// `L = 2G + (e+3)F` on `F_0` or `F_1`.
fn is_genus_two_family<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> bool {
    match s.kind() {
        SurfaceKind::Hirzebruch(e) if e <= 1 => {
            l.coeff(0) == &T::from_int(2) && l.coeff(1) == &T::from_int(i64::from(e) + 3)
        }
        _ => false,
    }
}

pub fn classify_branch<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<Branch> {
    check_effective(s, l)?;
    let below = enumerate_effective_below(s, l)?;
    let mut nonpositive = true;
    for sub in &below {
        if arithmetic_genus(s, sub)?.is_positive() {
            nonpositive = false;
            break;
        }
    }
    if nonpositive {
        return Ok(Branch::GenusNonPositive);
    }
    if is_genus_two_family(s, l) {
        return Ok(Branch::GenusTwo);
    }
    if is_plane_curve_family(s, l) || is_bisection_family(s, l) {
        let g = arithmetic_genus(s, l)?;
        return Ok(if g.is_one() {
            Branch::GenusOne
        } else {
            Branch::PositiveGenusGeneral
        });
    }
    Ok(Branch::Unsupported)
}
