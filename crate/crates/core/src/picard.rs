//! Picard lattices of the supported rational surfaces.
//!
//! Three families are supported: the projective plane with basis `[H]`, the
//! Hirzebruch surfaces `F_e` with basis `[G, F]` (`G` the section with
//! `G.G = -e`, `F` the fiber), and the blowup of `F_e` at one general point
//! with basis `[G, F, E]` where `G`, `F` are pullbacks and `E` is exceptional.
//!
//! Divisor classes are plain coefficient vectors in the surface basis; every
//! operation taking a class checks its length against the surface.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceKind {
    ProjectivePlane,
    Hirzebruch(u32),
    BlowupHirzebruch(u32),
}

/// A supported rational surface together with its intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surface {
    kind: SurfaceKind,
    basis: Vec<&'static str>,
    gram: Vec<Vec<i64>>,
}

impl Surface {
    pub fn projective_plane() -> Self {
        Surface {
            kind: SurfaceKind::ProjectivePlane,
            basis: vec!["H"],
            gram: vec![vec![1]],
        }
    }

    pub fn hirzebruch(e: u32) -> Self {
        let e = i64::from(e);
        Surface {
            kind: SurfaceKind::Hirzebruch(e as u32),
            basis: vec!["G", "F"],
            gram: vec![vec![-e, 1], vec![1, 0]],
        }
    }

    pub fn blowup_hirzebruch(e: u32) -> Self {
        let e = i64::from(e);
        Surface {
            kind: SurfaceKind::BlowupHirzebruch(e as u32),
            basis: vec!["G", "F", "E"],
            gram: vec![vec![-e, 1, 0], vec![1, 0, 0], vec![0, 0, -1]],
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn basis(&self) -> &[&'static str] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The `e` of `F_e` or of the blown-up `F_e`.
    pub fn hirzebruch_e(&self) -> Option<u32> {
        match self.kind {
            SurfaceKind::ProjectivePlane => None,
            SurfaceKind::Hirzebruch(e) | SurfaceKind::BlowupHirzebruch(e) => Some(e),
        }
    }

    /// Holomorphic Euler characteristic of the structure sheaf; 1 on every rational surface.
    pub fn chi_structure_sheaf<T: Scalar>(&self) -> T {
        T::one()
    }

    pub fn check<T: Scalar>(&self, d: &DivisorClass<T>) -> Result<()> {
        if d.coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: d.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn zero_class<T: Scalar>(&self) -> DivisorClass<T> {
        DivisorClass::zero(self.rank())
    }

    /// Class given by small integer coefficients, checked against the basis length.
    pub fn class<T: Scalar>(&self, coeffs: &[i64]) -> Result<DivisorClass<T>> {
        let d = DivisorClass::from_ints(coeffs);
        self.check(&d)?;
        Ok(d)
    }

    /// The generator with the given basis name, e.g. `"F"`.
    pub fn generator<T: Scalar>(&self, name: &str) -> Result<DivisorClass<T>> {
        let idx = self
            .basis
            .iter()
            .position(|b| *b == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?} for {self}")))?;
        let mut d = self.zero_class();
        d.coeffs[idx] = T::one();
        Ok(d)
    }

    /// Parses `"3H"`, `"2G+5F"`, `"2F-E"`, `"-G+F"` or `"0"`.
    pub fn parse_class<T: Scalar>(&self, s: &str) -> Result<DivisorClass<T>> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty class".into()));
        }
        let mut d = self.zero_class::<T>();
        if compact == "0" {
            return Ok(d);
        }
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                negative = true;
                rest = r;
            } else if !first {
                return Err(Error::Parse(format!("expected '+' or '-' in {s:?}")));
            }
            let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            let coeff = if digits == 0 {
                T::one()
            } else {
                T::from_str_radix(&rest[..digits], 10)
                    .map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?
            };
            rest = &rest[digits..];
            let name_len =
                rest.chars().next().map(char::len_utf8).ok_or_else(|| {
                    Error::Parse(format!("coefficient without generator in {s:?}"))
                })?;
            let name = &rest[..name_len];
            rest = &rest[name_len..];
            let idx =
                self.basis.iter().position(|b| *b == name).ok_or_else(|| {
                    Error::Parse(format!("unknown generator {name:?} for {self}"))
                })?;
            let coeff = if negative { -coeff } else { coeff };
            d.coeffs[idx] = d.coeffs[idx].clone() + coeff;
            first = false;
        }
        Ok(d)
    }

    /// Inverse of [`Surface::parse_class`]; zero terms are omitted.
    pub fn format_class<T: Scalar>(&self, d: &DivisorClass<T>) -> String {
        let mut out = String::new();
        for (c, name) in d.coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::ProjectivePlane => write!(f, "p2"),
            SurfaceKind::Hirzebruch(e) => write!(f, "f{e}"),
            SurfaceKind::BlowupHirzebruch(e) => write!(f, "bl{e}"),
        }
    }
}

impl FromStr for Surface {
    type Err = Error;

    /// Accepts `p2`, `f<e>` and `bl<e>` (blowup of `F_e` at a point).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let parse_e = |digits: &str| {
            digits
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad Hirzebruch index in surface {s:?}")))
        };
        if lower == "p2" {
            Ok(Surface::projective_plane())
        } else if let Some(d) = lower.strip_prefix("bl") {
            Ok(Surface::blowup_hirzebruch(parse_e(
                d.trim_start_matches('f'),
            )?))
        } else if let Some(d) = lower.strip_prefix('f') {
            Ok(Surface::hirzebruch(parse_e(d)?))
        } else {
            Err(Error::Parse(format!(
                "unknown surface {s:?} (expected p2, f<e> or bl<e>)"
            )))
        }
    }
}

/// Integer divisor class in a surface basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        DivisorClass {
            coeffs: vec![T::zero(); len],
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass {
            coeffs: coeffs.iter().map(|&c| T::from_int(c)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(T::is_zero)
    }

    pub fn scale(&self, k: &T) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    /// Sum of absolute values of the coefficients.
    pub fn weight(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    /// Order used for sorting lists of classes and the parts of decompositions.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl<T: Scalar> Add for DivisorClass<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Add for &DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn add(self, rhs: Self) -> DivisorClass<T> {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "basis length mismatch");
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for DivisorClass<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Sub for &DivisorClass<T> {
    type Output = DivisorClass<T>;
    fn sub(self, rhs: Self) -> DivisorClass<T> {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "basis length mismatch");
        DivisorClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for DivisorClass<T> {
    type Output = Self;
    fn neg(self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

/// K-theory class of a sheaf, recorded by rank, first Chern class and Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheafClass<T> {
    pub rank: T,
    pub c1: DivisorClass<T>,
    pub chi: T,
}

impl<T: Scalar> SheafClass<T> {
    /// `u = (0, L, 0)`: pure one-dimensional sheaves supported on curves in `|L|`.
    pub fn supported_on(l: DivisorClass<T>) -> Self {
        SheafClass {
            rank: T::zero(),
            c1: l,
            chi: T::zero(),
        }
    }

    /// `c^r_n = r[O_X] - n[O_pt]`, with `chi = r chi(O_X) - n`.
    pub fn trivial_minus_points(surface: &Surface, r: T, n: T) -> Self {
        let chi = r.clone() * surface.chi_structure_sheaf::<T>() - n;
        SheafClass {
            rank: r,
            c1: surface.zero_class(),
            chi,
        }
    }
}

/// `D1 . D2` under the surface intersection form.
pub fn intersect<T: Scalar>(s: &Surface, d1: &DivisorClass<T>, d2: &DivisorClass<T>) -> Result<T> {
    s.check(d1)?;
    s.check(d2)?;
    let mut total = T::zero();
    for (i, row) in s.gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g != 0 {
                total = total + d1.coeffs[i].clone() * T::from_int(g) * d2.coeffs[j].clone();
            }
        }
    }
    Ok(total)
}

/// `-3H` on the plane, `-2G-(e+2)F` on `F_e`, and the pullback plus `E` on the blowup.
pub fn canonical_class<T: Scalar>(s: &Surface) -> DivisorClass<T> {
    match s.kind {
        SurfaceKind::ProjectivePlane => DivisorClass::from_ints(&[-3]),
        SurfaceKind::Hirzebruch(e) => DivisorClass::from_ints(&[-2, -(i64::from(e) + 2)]),
        SurfaceKind::BlowupHirzebruch(e) => DivisorClass::from_ints(&[-2, -(i64::from(e) + 2), 1]),
    }
}

/// Arithmetic genus by adjunction, `1 + L.(L+K)/2`.
pub fn arithmetic_genus<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<T> {
    let k = canonical_class(s);
    let twice = intersect(s, l, &(l + &k))?;
    debug_assert!(twice.is_even(), "L.(L+K) is always even");
    Ok(T::one() + twice / T::from_int(2))
}

/// Riemann-Roch: `chi(O_X(D)) = chi(O_X) + D.(D-K)/2`.
pub fn euler_char<T: Scalar>(s: &Surface, d: &DivisorClass<T>) -> Result<T> {
    let k = canonical_class(s);
    let twice = intersect(s, d, &(d - &k))?;
    debug_assert!(twice.is_even(), "D.(D-K) is always even");
    Ok(s.chi_structure_sheaf::<T>() + twice / T::from_int(2))
}

/// `chi(u (x) c)` for a one-dimensional class `u`: `rank(c) chi(u) + c1(c).c1(u)`.
///
/// Zero exactly when `u` and `c` are orthogonal.
pub fn euler_pairing<T: Scalar>(s: &Surface, u: &SheafClass<T>, c: &SheafClass<T>) -> Result<T> {
    if !u.rank.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "euler pairing is implemented for rank-0 classes u only, got rank {}",
            u.rank
        )));
    }
    let cross = intersect(s, &c.c1, &u.c1)?;
    Ok(c.rank.clone() * u.chi.clone() + cross)
}

/// Dimension `L.L + 1` of the stable locus of the moduli space of sheaves of class `(0, L, 0)`.
pub fn moduli_dimension<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<T> {
    Ok(intersect(s, l, l)? + T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn d(s: &Surface, c: &str) -> DivisorClass<i64> {
        s.parse_class(c).unwrap()
    }

    #[test]
    fn gram_entries() {
        let f1 = Surface::hirzebruch(1);
        assert_eq!(intersect(&f1, &d(&f1, "G"), &d(&f1, "G")).unwrap(), -1);
        for e in 0..5 {
            let fe = Surface::hirzebruch(e);
            assert_eq!(intersect(&fe, &d(&fe, "F"), &d(&fe, "F")).unwrap(), 0);
            assert_eq!(intersect(&fe, &d(&fe, "G"), &d(&fe, "F")).unwrap(), 1);
            assert_eq!(
                intersect(&fe, &d(&fe, "G"), &d(&fe, "G")).unwrap(),
                -(e as i64)
            );
        }
        let p2 = Surface::projective_plane();
        assert_eq!(intersect(&p2, &d(&p2, "3H"), &d(&p2, "3H")).unwrap(), 9);
        let bl = Surface::blowup_hirzebruch(2);
        assert_eq!(intersect(&bl, &d(&bl, "E"), &d(&bl, "E")).unwrap(), -1);
        assert_eq!(intersect(&bl, &d(&bl, "E"), &d(&bl, "G")).unwrap(), 0);
        assert_eq!(intersect(&bl, &d(&bl, "E"), &d(&bl, "F")).unwrap(), 0);
        assert_eq!(intersect(&bl, &d(&bl, "G"), &d(&bl, "G")).unwrap(), -2);
    }

    #[test]
    fn gram_is_symmetric() {
        for s in [
            Surface::projective_plane(),
            Surface::hirzebruch(3),
            Surface::blowup_hirzebruch(1),
        ] {
            let g = s.gram();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert_eq!(*v, g[j][i]);
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let f0 = Surface::hirzebruch(0);
        let bad = DivisorClass::<i64>::from_ints(&[1]);
        assert_eq!(
            intersect(&f0, &bad, &bad),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn canonical_classes() {
        let p2 = Surface::projective_plane();
        assert_eq!(canonical_class::<i64>(&p2), d(&p2, "-3H"));
        let f0 = Surface::hirzebruch(0);
        assert_eq!(canonical_class::<i64>(&f0), d(&f0, "-2G-2F"));
        let f1 = Surface::hirzebruch(1);
        assert_eq!(canonical_class::<i64>(&f1), d(&f1, "-2G-3F"));
        let bl = Surface::blowup_hirzebruch(1);
        assert_eq!(canonical_class::<i64>(&bl), d(&bl, "-2G-3F+E"));
    }

    #[test]
    fn canonical_class_f1_is_forced_by_genus_two() {
        // Brute force over candidate K = xG + yF: adjunction must give g(2G+4F) = 2,
        // and K.K = 8 holds on every rational ruled surface. Only -2G-3F survives.
        let f1 = Surface::hirzebruch(1);
        let l = d(&f1, "2G+4F");
        let mut hits = Vec::new();
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                let k = DivisorClass::from_ints(&[x, y]);
                let lk = intersect(&f1, &l, &(&l + &k)).unwrap();
                let kk = intersect(&f1, &k, &k).unwrap();
                let g_fiber = intersect(&f1, &d(&f1, "F"), &(&d(&f1, "F") + &k)).unwrap();
                if lk == 2 && kk == 8 && g_fiber == -2 {
                    hits.push((x, y));
                }
            }
        }
        assert_eq!(hits, vec![(-2, -3)]);
    }

    #[test]
    fn genus_examples() {
        for e in 0..=1 {
            let fe = Surface::hirzebruch(e);
            let l = fe.class::<i64>(&[2, e as i64 + 3]).unwrap();
            assert_eq!(arithmetic_genus(&fe, &l).unwrap(), 2);
            for n in 1..10 {
                let nf = fe.class::<i64>(&[0, n]).unwrap();
                assert_eq!(arithmetic_genus(&fe, &nf).unwrap(), 1 - n);
            }
        }
        let p2 = Surface::projective_plane();
        for deg in 1..12i64 {
            // degree-genus formula
            let g = arithmetic_genus(&p2, &p2.class::<i64>(&[deg]).unwrap()).unwrap();
            assert_eq!(g, (deg - 1) * (deg - 2) / 2);
        }
    }

    #[test]
    fn euler_char_anchors() {
        for e in 0..=1 {
            let fe = Surface::hirzebruch(e);
            let g1 = fe.class::<i64>(&[-2, -(e as i64 + 2)]).unwrap();
            assert_eq!(euler_char(&fe, &g1).unwrap(), 1);
            let g2 = fe.class::<i64>(&[-2, -(e as i64 + 3)]).unwrap();
            assert_eq!(euler_char(&fe, &g2).unwrap(), 2);
        }
        let p2 = Surface::projective_plane();
        assert_eq!(euler_char(&p2, &p2.zero_class::<i64>()).unwrap(), 1);
    }

    #[test]
    fn pairing() {
        let p2 = Surface::projective_plane();
        let l = d(&p2, "3H");
        let u = SheafClass::supported_on(l.clone());
        for r in 1..=10 {
            for n in 0..=10 {
                let c = SheafClass::trivial_minus_points(&p2, r, n);
                assert_eq!(euler_pairing(&p2, &u, &c).unwrap(), 0);
            }
        }
        let c = SheafClass {
            rank: 1,
            c1: d(&p2, "H"),
            chi: 0,
        };
        assert_eq!(euler_pairing(&p2, &u, &c).unwrap(), 3);
        let u5 = SheafClass {
            rank: 0,
            c1: l.clone(),
            chi: 5,
        };
        let c2 = SheafClass {
            rank: 2,
            c1: p2.zero_class(),
            chi: 0,
        };
        assert_eq!(euler_pairing(&p2, &u5, &c2).unwrap(), 10);
        assert!(matches!(
            euler_pairing(&p2, &c2, &u5),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn moduli_dimensions() {
        let p2 = Surface::projective_plane();
        assert_eq!(moduli_dimension(&p2, &d(&p2, "3H")).unwrap(), 10);
        assert_eq!(moduli_dimension(&p2, &d(&p2, "H")).unwrap(), 2);
    }

    #[test]
    fn parse_and_format() {
        let bl = Surface::blowup_hirzebruch(0);
        let c = d(&bl, "2F-E");
        assert_eq!(c.coeffs(), &[0, 2, -1]);
        assert_eq!(bl.format_class(&c), "2F-E");
        assert_eq!(bl.format_class(&d(&bl, "G + F - E")), "G+F-E");
        assert_eq!(bl.format_class(&bl.zero_class::<i64>()), "0");
        let f0 = Surface::hirzebruch(0);
        assert_eq!(f0.format_class(&d(&f0, "-G-F")), "-G-F");
        assert_eq!(f0.format_class(&d(&f0, "G+G+3F")), "2G+3F");
        assert!(f0.parse_class::<i64>("2H").is_err());
        assert!(f0.parse_class::<i64>("2").is_err());
        assert!(f0.parse_class::<i64>("2G3F").is_err());
        assert!(f0.parse_class::<i64>("").is_err());
        let big: DivisorClass<BigInt> = f0.parse_class("123456789012345678901234567890G").unwrap();
        assert_eq!(f0.format_class(&big), "123456789012345678901234567890G");
    }

    #[test]
    fn parse_surfaces() {
        assert_eq!(
            "p2".parse::<Surface>().unwrap(),
            Surface::projective_plane()
        );
        assert_eq!("F1".parse::<Surface>().unwrap(), Surface::hirzebruch(1));
        assert_eq!(
            "bl0".parse::<Surface>().unwrap(),
            Surface::blowup_hirzebruch(0)
        );
        assert_eq!(
            "blf2".parse::<Surface>().unwrap(),
            Surface::blowup_hirzebruch(2)
        );
        assert!("p3".parse::<Surface>().is_err());
        assert!("f-1".parse::<Surface>().is_err());
        for s in ["p2", "f3", "bl1"] {
            assert_eq!(s.parse::<Surface>().unwrap().to_string(), s);
        }
    }
}
