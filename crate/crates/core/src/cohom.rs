//! Cohomology of line bundles.
//!
//! On `P^2` and `F_e`, `h^0` is exact (monomial count, resp. the splitting of
//! the pushforward along the ruling), `h^2` comes from Serre duality and `h^1`
//! from Riemann-Roch. On projective spaces `P^l` only `h^0` and `h^l` can be
//! nonzero. The blown-up `F_e` only gets `h^0`, and only for classes that
//! subtract the exceptional curve at most once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{canonical_class, euler_char, DivisorClass, Surface, SurfaceKind};
use crate::powerseries::binom;
use crate::scalar::{clamp_nonneg, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyTable<T> {
    pub h0: T,
    pub h1: T,
    pub h2: T,
    pub chi: T,
}

impl<T: Scalar> CohomologyTable<T> {
    fn from_h0_h2_chi(h0: T, h2: T, chi: T) -> Self {
        let h1 = h0.clone() + h2.clone() - chi.clone();
        debug_assert!(!h1.is_negative(), "h1 computed negative");
        CohomologyTable { h0, h1, h2, chi }
    }
}

fn p2_h0<T: Scalar>(d: &T) -> T {
    if d.is_negative() {
        return T::zero();
    }
    let two = T::from_int(2);
    (d.clone() + T::one()) * (d.clone() + two.clone()) / two
}

/// Cohomology of `O(dH)` on the plane.
pub fn cohomology_p2<T: Scalar>(d: &T) -> CohomologyTable<T> {
    let h0 = p2_h0(d);
    let h2 = p2_h0(&(-d.clone() - T::from_int(3)));
    // chi(dH) = (d+1)(d+2)/2 as a polynomial in d.
    let two = T::from_int(2);
    let chi = (d.clone() + T::one()) * (d.clone() + two.clone()) / two;
    CohomologyTable::from_h0_h2_chi(h0, h2, chi)
}

/// `h^0(F_e, aG + bF) = sum_{k=0}^{a} max(0, b - ke + 1)`, in closed form.
pub fn hirzebruch_h0<T: Scalar>(e: u32, a: &T, b: &T) -> T {
    if a.is_negative() || b.is_negative() {
        return T::zero();
    }
    let one = T::one();
    if e == 0 {
        return (a.clone() + one.clone()) * (b.clone() + one);
    }
    let et = T::from_int(i64::from(e));
    // Terms with k > b/e vanish.
    let last_positive = b.div_floor(&et);
    let kmax = if &last_positive < a {
        last_positive
    } else {
        a.clone()
    };
    let count = kmax.clone() + one.clone();
    count.clone() * (b.clone() + one.clone()) - et * kmax * count / T::from_int(2)
}

/// Cohomology of `O(aG + bF)` on `F_e`.
pub fn cohomology_hirzebruch<T: Scalar>(e: u32, a: &T, b: &T) -> CohomologyTable<T> {
    let s = Surface::hirzebruch(e);
    let d = DivisorClass::new(vec![a.clone(), b.clone()]);
    let dual = &canonical_class::<T>(&s) - &d;
    let h0 = hirzebruch_h0(e, a, b);
    let h2 = hirzebruch_h0(e, dual.coeff(0), dual.coeff(1));
    let chi = euler_char(&s, &d).expect("class built in the F_e basis");
    CohomologyTable::from_h0_h2_chi(h0, h2, chi)
}

/// `(h^0, h^l)` of `O(m)` on `P^l`; all intermediate cohomology vanishes.
pub fn cohomology_projective_space<T: Scalar>(l: &T, m: &T) -> Result<(T, T)> {
    if l < &T::one() {
        return Err(Error::InvalidArgument(format!(
            "projective space dimension must be >= 1, got {l}"
        )));
    }
    let h0 = if m.is_negative() {
        T::zero()
    } else {
        binom(&(m.clone() + l.clone()), l)?
    };
    let top_arg = -m.clone() - T::one();
    let htop = if top_arg >= *l {
        binom(&top_arg, l)?
    } else {
        T::zero()
    };
    Ok((h0, htop))
}

/// `h^0` of `aG + bF - cE` on the blowup of `F_e` at a general point.
///
/// A general point imposes one condition on a nonempty system, and `E` is a
/// fixed component of `pullback + kE` for `k > 0`. Vanishing to order two or
/// more (`c >= 2`) is rejected.
pub fn h0_blowup<T: Scalar>(e: u32, a: &T, b: &T, c: &T) -> Result<T> {
    if c > &T::one() {
        return Err(Error::OutOfScope(format!(
            "h0 on the blowup is only computed for at most one exceptional subtraction (got {c}E)"
        )));
    }
    let base = hirzebruch_h0(e, a, b);
    if c.is_one() {
        Ok(clamp_nonneg(base - T::one()))
    } else {
        Ok(base)
    }
}

/// Full cohomology table; not available on the blowup.
pub fn cohomology<T: Scalar>(s: &Surface, d: &DivisorClass<T>) -> Result<CohomologyTable<T>> {
    s.check(d)?;
    match s.kind() {
        SurfaceKind::ProjectivePlane => Ok(cohomology_p2(d.coeff(0))),
        SurfaceKind::Hirzebruch(e) => Ok(cohomology_hirzebruch(e, d.coeff(0), d.coeff(1))),
        SurfaceKind::BlowupHirzebruch(_) => Err(Error::UnsupportedSurface(format!(
            "only h0 is available on {s}"
        ))),
    }
}

/// `h^0(D)` on any supported surface.
pub fn h0<T: Scalar>(s: &Surface, d: &DivisorClass<T>) -> Result<T> {
    s.check(d)?;
    match s.kind() {
        SurfaceKind::ProjectivePlane => Ok(p2_h0(d.coeff(0))),
        SurfaceKind::Hirzebruch(e) => Ok(hirzebruch_h0(e, d.coeff(0), d.coeff(1))),
        SurfaceKind::BlowupHirzebruch(e) => {
            h0_blowup(e, d.coeff(0), d.coeff(1), &-d.coeff(2).clone())
        }
    }
}

/// `dim |L| = h^0(L) - 1`.
pub fn linear_system_dim<T: Scalar>(s: &Surface, l: &DivisorClass<T>) -> Result<T> {
    let h = h0(s, l)?;
    if h.is_zero() {
        return Err(Error::NotEffective(s.format_class(l)));
    }
    Ok(h - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::euler_char;
    use proptest::prelude::*;

    /// Sum over the ruling, term by term.
    fn ruling_h0_oracle(e: i64, a: i64, b: i64) -> i64 {
        if a < 0 {
            return 0;
        }
        (0..=a).map(|k| (b - k * e + 1).max(0)).sum()
    }

    /// Leray along the ruling for a >= -1: H^1 = sum_k h^1(P^1, O(b - ke)).
    fn ruling_h1_oracle(e: i64, a: i64, b: i64) -> Option<i64> {
        match a {
            -1 => Some(0),
            a if a >= 0 => Some((0..=a).map(|k| (k * e - b - 1).max(0)).sum()),
            _ => None,
        }
    }

    /// Number of monomials of degree `m` in `n` variables.
    fn monomial_count(n: usize, m: usize) -> i64 {
        fn go(vars: usize, left: usize) -> i64 {
            if vars == 1 {
                return 1;
            }
            (0..=left).map(|x| go(vars - 1, left - x)).sum()
        }
        go(n, m)
    }

    #[test]
    fn plane_examples() {
        let c = cohomology_p2(&3i64);
        assert_eq!((c.h0, c.h1, c.h2), (10, 0, 0));
        assert_eq!(monomial_count(3, 3), 10);
        let c = cohomology_p2(&-1i64);
        assert_eq!((c.h0, c.h1, c.h2, c.chi), (0, 0, 0, 0));
        let c = cohomology_p2(&-3i64);
        assert_eq!((c.h0, c.h1, c.h2), (0, 0, 1));
        for d in -20i64..20 {
            assert_eq!(cohomology_p2(&d).h1, 0);
        }
    }

    #[test]
    fn hirzebruch_examples() {
        assert_eq!(cohomology_hirzebruch(1, &1i64, &0).h0, 1);
        for e in 0..4 {
            for n in 0..10i64 {
                assert_eq!(cohomology_hirzebruch(e, &0i64, &n).h0, n + 1);
            }
        }
        let c = cohomology_hirzebruch(0, &2i64, &3);
        assert_eq!((c.h0, c.h1, c.h2), (12, 0, 0));
        assert_eq!(c.h0, (2 + 1) * (3 + 1));
    }

    #[test]
    fn closed_form_matches_ruling_sum() {
        for e in 0..6 {
            for a in -3i64..15 {
                for b in -5i64..25 {
                    assert_eq!(
                        hirzebruch_h0(e, &a, &b),
                        ruling_h0_oracle(e as i64, a, b),
                        "e={e} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn projective_space() {
        assert_eq!(cohomology_projective_space(&9i64, &2).unwrap(), (55, 0));
        for l in 1..6i64 {
            assert_eq!(cohomology_projective_space(&l, &0).unwrap().0, 1);
        }
        assert_eq!(cohomology_projective_space(&3i64, &-4).unwrap(), (0, 1));
        assert_eq!(cohomology_projective_space(&3i64, &-3).unwrap(), (0, 0));
        assert!(cohomology_projective_space(&0i64, &1).is_err());
        for l in 1..=10usize {
            for m in 0..=8usize {
                let (h0, _) = cohomology_projective_space(&(l as i64), &(m as i64)).unwrap();
                assert_eq!(h0, monomial_count(l + 1, m), "l={l} m={m}");
            }
        }
    }

    #[test]
    fn blowup_examples() {
        for e in 0..3 {
            assert_eq!(h0_blowup(e, &0i64, &2, &1).unwrap(), 2);
        }
        assert_eq!(h0_blowup(1, &1i64, &0, &0).unwrap(), 1);
        assert_eq!(h0_blowup(0, &1i64, &1, &1).unwrap(), 3);
        assert!(matches!(
            h0_blowup(0, &2i64, &2, &2),
            Err(Error::OutOfScope(_))
        ));
        // E itself is rigid.
        assert_eq!(h0_blowup(0, &0i64, &0, &-1).unwrap(), 1);
        let bl = Surface::blowup_hirzebruch(0);
        assert!(cohomology(&bl, &bl.class::<i64>(&[1, 1, -1]).unwrap()).is_err());
        assert_eq!(
            h0(&bl, &bl.parse_class::<i64>("G+F-E").unwrap()).unwrap(),
            3
        );
    }

    #[test]
    fn linear_system_dims() {
        let p2 = Surface::projective_plane();
        assert_eq!(
            linear_system_dim(&p2, &p2.parse_class::<i64>("3H").unwrap()).unwrap(),
            9
        );
        assert!(matches!(
            linear_system_dim(&p2, &p2.parse_class::<i64>("-H").unwrap()),
            Err(Error::NotEffective(_))
        ));
        let f1 = Surface::hirzebruch(1);
        for n in 3..=12i64 {
            let l = f1.class::<i64>(&[2, n]).unwrap();
            assert_eq!(linear_system_dim(&f1, &l).unwrap(), 3 * n - 1);
        }
        for e in 0..=1i64 {
            let fe = Surface::hirzebruch(e as u32);
            let l = fe.class::<i64>(&[2, e + 3]).unwrap();
            assert_eq!(linear_system_dim(&fe, &l).unwrap(), 11);
        }
    }

    fn surface_and_class() -> impl Strategy<Value = (Surface, DivisorClass<i64>)> {
        prop_oneof![
            (-10i64..=10)
                .prop_map(|d| (Surface::projective_plane(), DivisorClass::from_ints(&[d]))),
            (0u32..5, -10i64..=10, -10i64..=10)
                .prop_map(|(e, a, b)| (Surface::hirzebruch(e), DivisorClass::from_ints(&[a, b]))),
        ]
    }

    proptest! {
        #[test]
        fn chi_consistency((s, d) in surface_and_class()) {
            let c = cohomology(&s, &d).unwrap();
            prop_assert!(!c.h0.is_negative() && !c.h1.is_negative() && !c.h2.is_negative());
            prop_assert_eq!(c.h0 - c.h1 + c.h2, euler_char(&s, &d).unwrap());
        }

        #[test]
        fn serre_duality((s, d) in surface_and_class()) {
            let dual = &canonical_class::<i64>(&s) - &d;
            let c = cohomology(&s, &d).unwrap();
            let cd = cohomology(&s, &dual).unwrap();
            prop_assert_eq!(c.h2, cd.h0);
            prop_assert_eq!(c.h1, cd.h1);
            prop_assert_eq!(c.h0, cd.h2);
        }

        #[test]
        fn h1_matches_leray(e in 0u32..5, a in -1i64..=10, b in -10i64..=10) {
            let c = cohomology_hirzebruch(e, &a, &b);
            prop_assert_eq!(Some(c.h1), ruling_h1_oracle(e as i64, a, b));
        }

        #[test]
        fn h0_monotone(e in 0u32..5, a in -10i64..=10, b in -10i64..=10, d in -10i64..=10) {
            prop_assert!(hirzebruch_h0(e, &a, &b) <= hirzebruch_h0(e, &a, &(b + 1)));
            prop_assert!(cohomology_p2(&d).h0 <= cohomology_p2(&(d + 1)).h0);
        }
    }
}
