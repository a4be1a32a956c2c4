//! Pushforwards of powers of the theta bundle along the support map
//! `pi: M -> |L|` and the generating functions they determine.
//!
//! For a class `u = (0, L, 0)` and `c^r_n = r[O_X] - n[O_pt]`, the determinant
//! bundle of `c^r_n` is `Theta^r (x) pi^* O(n)`, so
//!
//! ```text
//! Z^r(t) = sum_n h^0(M, Theta^r(n)) t^n = sum_n h^0(|L|, pi_* Theta^r (x) O(n)) t^n.
//! ```
//!
//! Whenever `pi_* Theta^r` splits as a sum of `O(-i)`, `Z^r` is a polynomial
//! over `(1 - t)^(l+1)` with `l = dim |L|`. The splittings known here:
//!
//! | branch            | `pi_* Theta^r`                                            |
//! |-------------------|-----------------------------------------------------------|
//! | genus <= 0, r = 1 | `O`                                                       |
//! | genus 1           | `O + sum_{i=2..r} O(-i)`                                  |
//! | genus 2           | `O + O(-2)^3 + sum_{i=3..r} (O(-i)^(i+1) + O(-i-1)^(i-2))` |
//!
//! Every other positive-genus case with `r >= 2` is refused.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohom::{cohomology_hirzebruch, cohomology_projective_space, linear_system_dim};
use crate::conditions::{classify_branch, Branch};
use crate::error::{Error, Result};
use crate::picard::{arithmetic_genus, canonical_class, intersect, DivisorClass, Surface};
use crate::powerseries::{binomial_polynomial, expand_rational_gf, Polynomial, SeriesCoefficients};
use crate::scalar::Scalar;

/// `sum O(twist)^mult` on a projective space, twists descending, equal twists merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedBundle {
    summands: Vec<(i64, u64)>,
}

impl GradedBundle {
    pub fn new(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut merged: BTreeMap<i64, u64> = BTreeMap::new();
        for (twist, mult) in pairs {
            if mult > 0 {
                *merged.entry(twist).or_default() += mult;
            }
        }
        GradedBundle {
            summands: merged.into_iter().rev().collect(),
        }
    }

    pub fn structure_sheaf() -> Self {
        GradedBundle::new([(0, 1)])
    }

    pub fn summands(&self) -> &[(i64, u64)] {
        &self.summands
    }

    /// Multiset union.
    pub fn union(&self, other: &GradedBundle) -> GradedBundle {
        GradedBundle::new(self.summands.iter().chain(&other.summands).copied())
    }

    pub fn min_twist(&self) -> Option<i64> {
        self.summands.last().map(|&(t, _)| t)
    }
}

impl fmt::Display for GradedBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|&(t, m)| {
                let sheaf = if t == 0 {
                    "O".to_string()
                } else {
                    format!("O({t})")
                };
                if m == 1 {
                    sheaf
                } else {
                    format!("{sheaf}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Total rank.
pub fn rank(gb: &GradedBundle) -> u64 {
    gb.summands.iter().map(|&(_, m)| m).sum()
}

/// Surface, curve class and the invariants of `|L|` needed for the series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaContext<T> {
    pub surface: Surface,
    pub class: DivisorClass<T>,
    /// Arithmetic genus of curves in `|L|`.
    pub genus: T,
    /// `dim |L|`.
    pub dim: T,
    pub branch: Branch,
}

impl<T: Scalar> ThetaContext<T> {
    pub fn new(surface: Surface, class: DivisorClass<T>) -> Result<Self> {
        let branch = classify_branch(&surface, &class)?;
        let genus = arithmetic_genus(&surface, &class)?;
        let dim = linear_system_dim(&surface, &class)?;
        Ok(ThetaContext {
            surface,
            class,
            genus,
            dim,
            branch,
        })
    }
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    Ok(())
}

fn refuse(branch: Branch, r: u32) -> Error {
    Error::UnsupportedBranch {
        branch: branch.to_string(),
        r,
    }
}

/// Splitting of `pi_* Theta^r` for a branch.
///
/// `Unsupported` classes are refused for every `r`: without the conditions
/// (A1)-(A3) not even `pi_* Theta = O` is available.
pub fn decomposition_for_branch(branch: Branch, r: u32) -> Result<GradedBundle> {
    check_r(r)?;
    let r = i64::from(r);
    match branch {
        Branch::Unsupported => Err(refuse(branch, r as u32)),
        Branch::GenusNonPositive => Ok(GradedBundle::structure_sheaf()),
        _ if r == 1 => Ok(GradedBundle::structure_sheaf()),
        Branch::PositiveGenusGeneral => Err(refuse(branch, r as u32)),
        Branch::GenusOne => Ok(GradedBundle::new(
            std::iter::once((0, 1)).chain((2..=r).map(|i| (-i, 1))),
        )),
        Branch::GenusTwo => {
            let mut pairs = vec![(0, 1), (-2, 3)];
            for i in 3..=r {
                pairs.push((-i, (i + 1) as u64));
                pairs.push((-i - 1, (i - 2) as u64));
            }
            Ok(GradedBundle::new(pairs))
        }
    }
}

pub fn pushforward_decomposition<T: Scalar>(ctx: &ThetaContext<T>, r: u32) -> Result<GradedBundle> {
    decomposition_for_branch(ctx.branch, r)
}

/// Numerator of `Z^r(t)` over `(1 - t)^(l+1)`.
pub fn numerator<T: Scalar>(branch: Branch, r: u32) -> Result<Polynomial<T>> {
    check_r(r)?;
    let ru = r as usize;
    match branch {
        Branch::Unsupported => Err(refuse(branch, r)),
        Branch::GenusNonPositive => Ok(Polynomial::one()),
        _ if r == 1 => Ok(Polynomial::one()),
        Branch::PositiveGenusGeneral => Err(refuse(branch, r)),
        Branch::GenusOne => {
            let mut p = Polynomial::one();
            for i in 2..=ru {
                p.add_term(T::one(), i);
            }
            Ok(p)
        }
        Branch::GenusTwo => {
            let mut p = Polynomial::one();
            p.add_term(T::from_int(3), 2);
            for i in 3..=ru {
                p.add_term(T::from_usize(i + 1).expect("small"), i);
                p.add_term(T::from_usize(i - 2).expect("small"), i + 1);
            }
            Ok(p)
        }
    }
}

/// `Z^r(t)` from the closed form, through `t^trunc`.
pub fn z_series<T: Scalar>(
    ctx: &ThetaContext<T>,
    r: u32,
    trunc: usize,
) -> Result<SeriesCoefficients<T>> {
    let num = numerator::<T>(ctx.branch, r)?;
    expand_rational_gf(&num, &ctx.dim, trunc)
}

fn projective_h0<T: Scalar>(l: &T, m: i64) -> Result<T> {
    if l.is_zero() {
        return Ok(if m >= 0 { T::one() } else { T::zero() });
    }
    Ok(cohomology_projective_space(l, &T::from_int(m))?.0)
}

/// `Z^r(t)` summand by summand: `[t^n] = sum m h^0(P^l, O(n + twist))`.
pub fn z_from_decomposition<T: Scalar>(
    gb: &GradedBundle,
    l: &T,
    trunc: usize,
) -> Result<SeriesCoefficients<T>> {
    if l.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "dim |L| must be >= 0, got {l}"
        )));
    }
    let mut out = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc as i64 {
        let mut total = T::zero();
        for &(twist, mult) in gb.summands() {
            let h = projective_h0(l, n + twist)?;
            total = total + T::from_u64(mult).expect("multiplicity fits") * h;
        }
        out.push(total);
    }
    Ok(SeriesCoefficients::new(trunc, out))
}

/// `h^0(M, lambda_{c^r_n})`; zero for `n < 0`.
pub fn h0_lambda<T: Scalar>(ctx: &ThetaContext<T>, r: u32, n: i64) -> Result<T> {
    // Refuse unsupported requests even when n < 0.
    let num = numerator::<T>(ctx.branch, r)?;
    if n < 0 {
        return Ok(T::zero());
    }
    let series = expand_rational_gf(&num, &ctx.dim, n as usize)?;
    Ok(series.coeffs()[n as usize].clone())
}

/// `chi(M, lambda_{c^r_n}) = sum m chi(P^l, O(n + twist))`, defined for every integer `n`.
pub fn euler_char_lambda<T: Scalar>(ctx: &ThetaContext<T>, r: u32, n: i64) -> Result<T> {
    let gb = pushforward_decomposition(ctx, r)?;
    let l = ctx
        .dim
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument(format!("dim |L| = {} too large", ctx.dim)))?;
    let lt = ctx.dim.clone();
    let mut total = T::zero();
    for &(twist, mult) in gb.summands() {
        let x = T::from_int(n + twist) + lt.clone();
        total = total + T::from_u64(mult).expect("multiplicity fits") * binomial_polynomial(&x, l);
    }
    Ok(total)
}

/// True when `sum O(n + twist)` has no cohomology in degree `l` (the only
/// possible higher cohomology on `P^l`).
pub fn higher_cohomology_vanishes<T: Scalar>(gb: &GradedBundle, l: &T, n: i64) -> bool {
    gb.summands()
        .iter()
        .all(|&(twist, _)| T::from_int(n + twist) >= -l.clone())
}

/// The genus-two step `pi_* Theta^{r+1} = pi_* Theta^r + O(-(r+1))^(r+2) + O(-(r+2))^(r-1)`.
pub fn recursion_check_g2(r: u32) -> Result<bool> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "the genus-two step needs r >= 2, got {r}"
        )));
    }
    let lower = decomposition_for_branch(Branch::GenusTwo, r)?;
    let upper = decomposition_for_branch(Branch::GenusTwo, r + 1)?;
    let ri = i64::from(r);
    let quotient =
        GradedBundle::new([(-(ri + 1), u64::from(r) + 2), (-(ri + 2), u64::from(r) - 1)]);
    Ok(upper == lower.union(&quotient))
}

/// The genus-one step `pi_* Theta^{r+1} = pi_* Theta^r + O(-(r+1))`.
pub fn sequence_additivity_g1(r: u32) -> Result<bool> {
    let lower = decomposition_for_branch(Branch::GenusOne, r)?;
    let upper = decomposition_for_branch(Branch::GenusOne, r + 1)?;
    let quotient = GradedBundle::new([(theta_restriction_twist(i64::from(r) + 1), 1)]);
    Ok(upper == lower.union(&quotient))
}

/// Twist of `Theta^r` restricted to the theta divisor in genus one: `O(-r)`.
pub fn theta_restriction_twist(r: i64) -> i64 {
    -r
}

/// `L.K`, the power of `pi^* O(1)` in the relative dualizing sheaf.
///
/// Its restriction to any fiber is trivial whatever the value.
pub fn dualizing_twist<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<T> {
    intersect(s, l, &canonical_class(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtsecCheck<T> {
    /// `h^0(r(L+K))`.
    pub h0_pos: T,
    /// `h^1(r(L+K) - L)`.
    pub h1_neg: T,
    pub ok: bool,
}

/// Cohomology of `r(L+K)` and `r(L+K) - L` for `L = 2G + (e+3)F` on `F_0`, `F_1`.
pub fn verify_gtsec_cohomology<T: Scalar>(e: u32, r: u32) -> Result<GtsecCheck<T>> {
    if e > 1 {
        return Err(Error::InvalidArgument(format!("e must be 0 or 1, got {e}")));
    }
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be >= 2, got {r}")));
    }
    let s = Surface::hirzebruch(e);
    let l: DivisorClass<T> = s.class(&[2, i64::from(e) + 3])?;
    let rt = T::from_u64(u64::from(r)).expect("small");
    let pos = (&l + &canonical_class(&s)).scale(&rt);
    let neg = &pos - &l;
    let cp = cohomology_hirzebruch(e, pos.coeff(0), pos.coeff(1));
    let cn = cohomology_hirzebruch(e, neg.coeff(0), neg.coeff(1));
    let ok = cp.h0 == rt.clone() + T::one()
        && cn.h1 == rt - T::from_int(2)
        && cn.h0.is_zero()
        && cn.h2.is_zero()
        && cp.h1.is_zero()
        && cp.h2.is_zero();
    Ok(GtsecCheck {
        h0_pos: cp.h0,
        h1_neg: cn.h1,
        ok,
    })
}
