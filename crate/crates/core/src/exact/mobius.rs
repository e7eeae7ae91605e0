use std::fmt;

use super::{ExactError, Polynomial, Rational, RationalFunction};

/// The map `y ↦ (a·y + b)/(c·y + d)` with `a·d − b·c ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl MobiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, ExactError> {
        if (&(&a * &d) - &(&b * &c)).is_zero() {
            return Err(ExactError::DegenerateMap);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    /// `y ↦ k − y`
    pub fn reflect(k: Rational) -> Self {
        MobiusMap {
            a: Rational::integer(-1),
            b: k,
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    /// `y ↦ k / y`, `k ≠ 0`.
    pub fn inverse_scaled(k: Rational) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), k, Rational::one(), Rational::zero())
    }

    /// `y ↦ 1 / y`
    pub fn reciprocal() -> Self {
        Self::inverse_scaled(Rational::one()).expect("1/y is invertible")
    }

    pub fn coefficients(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> Rational {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Evaluates the map at `x`; a vanishing denominator is a pole.
    pub fn apply(&self, x: &Rational) -> Result<Rational, ExactError> {
        let den = &(&self.c * x) + &self.d;
        if den.is_zero() {
            return Err(ExactError::Pole { at: x.clone() });
        }
        Ok(&(&(&self.a * x) + &self.b) / &den)
    }

    /// `self ∘ inner`, i.e. the map `y ↦ self(inner(y))`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&inner.a, &inner.b, &inner.c, &inner.d);
        let m = MobiusMap {
            a: &(a * e) + &(b * g),
            b: &(a * f) + &(b * h),
            c: &(c * e) + &(d * g),
            d: &(c * f) + &(d * h),
        };
        debug_assert!(!m.determinant().is_zero());
        m.normalized()
    }

    /// Rescales the coefficient quadruple so the first nonzero of `(c, d)` is 1.
    /// Two maps are equal as functions iff their normalized forms are equal.
    pub fn normalized(&self) -> MobiusMap {
        let k = if !self.c.is_zero() { &self.c } else { &self.d };
        let inv = k.recip().expect("c and d cannot both vanish");
        MobiusMap {
            a: &self.a * &inv,
            b: &self.b * &inv,
            c: &self.c * &inv,
            d: &self.d * &inv,
        }
    }

    /// `(a·x + b)/(c·x + d)` as a canonical rational function.
    pub fn to_rational_function(&self) -> RationalFunction {
        RationalFunction::canonical(
            Polynomial::linear(self.a.clone(), self.b.clone()),
            Polynomial::linear(self.c.clone(), self.d.clone()),
        )
        .expect("c and d cannot both vanish")
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y -> ({}·y + {})/({}·y + {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MobiusMap[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}
