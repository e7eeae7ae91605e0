use std::fmt;

use super::{ExactError, Polynomial, Rational};

/// A reduced quotient of polynomials with a monic denominator.
///
/// Canonical form makes structural equality coincide with equality of the
/// functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numer: Polynomial,
    denom: Polynomial,
}

impl RationalFunction {
    /// Removes the polynomial gcd and makes the denominator monic.
    pub fn canonical(numer: Polynomial, denom: Polynomial) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if numer.is_zero() {
            return Ok(RationalFunction {
                numer,
                denom: Polynomial::one(),
            });
        }
        let g = numer.gcd(&denom);
        let numer = numer.div_rem(&g)?.0;
        let denom = denom.div_rem(&g)?.0;
        let lc_inv = denom.leading().expect("nonzero").recip()?;
        Ok(RationalFunction {
            numer: numer.scale(&lc_inv),
            denom: denom.scale(&lc_inv),
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            numer: p,
            denom: Polynomial::one(),
        }
    }

    /// The identity function `x`.
    pub fn x() -> Self {
        Self::from_polynomial(Polynomial::x())
    }

    pub fn numer(&self) -> &Polynomial {
        &self.numer
    }

    pub fn denom(&self) -> &Polynomial {
        &self.denom
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, ExactError> {
        let den = self.denom.eval(x);
        if den.is_zero() {
            return Err(ExactError::Pole { at: x.clone() });
        }
        Ok(&self.numer.eval(x) / &den)
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let numer = &(&self.numer * &other.denom) + &(&other.numer * &self.denom);
        let denom = &self.denom * &other.denom;
        Self::canonical(numer, denom).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        let numer = &(&self.numer * &other.denom) - &(&other.numer * &self.denom);
        let denom = &self.denom * &other.denom;
        Self::canonical(numer, denom).expect("product of nonzero denominators")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == Polynomial::one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({}) / ({})", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn lin(a: Rational, b: Rational) -> Polynomial {
        Polynomial::linear(a, b)
    }

    #[test]
    fn canonical_examples() {
        // 1 - (3/2)/(x-5) = (2x - 13)/(2x - 10), cleared by hand
        let f = RationalFunction::canonical(
            Polynomial::from_ints(&[-13, 2]),
            Polynomial::from_ints(&[-10, 2]),
        )
        .unwrap();
        assert_eq!(f.numer(), &lin(1.into(), q(-13, 2)));
        assert_eq!(f.denom(), &lin(1.into(), (-5).into()));

        let g = RationalFunction::canonical(Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[-1, 1]))
            .unwrap();
        assert_eq!(g.numer(), &Polynomial::from_ints(&[1, 1]));
        assert_eq!(g.denom(), &Polynomial::one());

        let z = RationalFunction::canonical(Polynomial::zero(), Polynomial::x()).unwrap();
        assert!(z.numer().is_zero());
        assert_eq!(z.denom(), &Polynomial::one());

        assert!(matches!(
            RationalFunction::canonical(Polynomial::x(), Polynomial::zero()),
            Err(ExactError::ZeroDenominator)
        ));
    }

    #[test]
    fn eval_pole() {
        let f = RationalFunction::canonical(Polynomial::one(), lin(1.into(), (-5).into())).unwrap();
        assert!(matches!(f.eval(&5.into()), Err(ExactError::Pole { .. })));
        assert_eq!(f.eval(&6.into()).unwrap(), Rational::one());
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-6i64..=6, 1i64..=3), 0..4)
            .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent_and_preserves_values(
            n in small_poly(),
            d in small_poly(),
            common in small_poly(),
            points in prop::collection::vec((-50i64..=50, 1i64..=9), 100),
        ) {
            prop_assume!(!d.is_zero() && !common.is_zero());
            let num = &n * &common;
            let den = &d * &common;
            let f = RationalFunction::canonical(num.clone(), den.clone()).unwrap();
            let again = RationalFunction::canonical(f.numer().clone(), f.denom().clone()).unwrap();
            prop_assert_eq!(&again, &f);
            for (pn, pd) in points {
                let x = q(pn, pd);
                let parent_den = den.eval(&x);
                if parent_den.is_zero() {
                    continue;
                }
                prop_assert_eq!(f.eval(&x).unwrap(), &num.eval(&x) / &parent_den);
            }
        }
    }
}
