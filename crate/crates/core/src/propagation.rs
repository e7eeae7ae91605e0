//! Arm propagation along the two gadget loops, the loop-conservation
//! polynomial, and the admissible fiber parameters.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{q, ExactError, MobiusMap, Polynomial, Rational, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropagationError {
    #[error("{chain} chain hits a pole at step {step} (input {input})")]
    Pole {
        chain: LoopName,
        step: usize,
        input: Rational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LoopName {
    LeftLoop,
    RightLoop,
}

impl fmt::Display for LoopName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopName::LeftLoop => write!(f, "left"),
            LoopName::RightLoop => write!(f, "right"),
        }
    }
}

/// An ordered list of Möbius steps. The trace of a chain at `x` is `x`
/// followed by the value after each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepChain {
    pub name: LoopName,
    pub steps: Vec<MobiusMap>,
}

/// Left loop (three quads): `7−y, 1/y, 2−y, 6/y, 4−y, 1/y`.
pub fn left_chain() -> StepChain {
    StepChain {
        name: LoopName::LeftLoop,
        steps: vec![
            MobiusMap::reflect(7.into()),
            MobiusMap::reciprocal(),
            MobiusMap::reflect(2.into()),
            MobiusMap::inverse_scaled(6.into()).unwrap(),
            MobiusMap::reflect(4.into()),
            MobiusMap::reciprocal(),
        ],
    }
}

/// Right loop (switch, two quads, switch):
/// `7−y, y, 7−y, 1/y, 1−y, (3/2)/y, 7/2−y, y`.
pub fn right_chain() -> StepChain {
    StepChain {
        name: LoopName::RightLoop,
        steps: vec![
            MobiusMap::reflect(7.into()),
            MobiusMap::identity(),
            MobiusMap::reflect(7.into()),
            MobiusMap::reciprocal(),
            MobiusMap::reflect(1.into()),
            MobiusMap::inverse_scaled(q(3, 2)).unwrap(),
            MobiusMap::reflect(q(7, 2)),
            MobiusMap::identity(),
        ],
    }
}

impl StepChain {
    /// Trace of length `steps + 1`, starting with `x`.
    pub fn eval(&self, x: &Rational) -> Result<Vec<Rational>, PropagationError> {
        let mut trace = Vec::with_capacity(self.steps.len() + 1);
        trace.push(x.clone());
        for (step, m) in self.steps.iter().enumerate() {
            let input = trace.last().unwrap();
            let next = m.apply(input).map_err(|_| PropagationError::Pole {
                chain: self.name,
                step,
                input: input.clone(),
            })?;
            trace.push(next);
        }
        Ok(trace)
    }

    /// The composite of all steps as one map.
    pub fn composite(&self) -> MobiusMap {
        self.steps
            .iter()
            .fold(MobiusMap::identity(), |acc, step| step.compose(&acc))
    }

    pub fn closed_form(&self) -> RationalFunction {
        self.composite().to_rational_function()
    }

    /// Returns a copy with step `index` replaced.
    pub fn with_step(&self, index: usize, step: MobiusMap) -> StepChain {
        let mut out = self.clone();
        out.steps[index] = step;
        out
    }
}

pub fn chain_eval(chain: &StepChain, x: &Rational) -> Result<Vec<Rational>, PropagationError> {
    chain.eval(x)
}

pub fn chain_closed_form(chain: &StepChain) -> RationalFunction {
    chain.closed_form()
}

/// Numerator of `L(x) + R(x) − x` in lowest terms, made monic. Reducing
/// first keeps a shared pole of `L` and `R` from showing up as a root.
pub fn conservation_polynomial(left: &RationalFunction, right: &RationalFunction) -> Polynomial {
    left.add(right).sub(&RationalFunction::x()).numer().monic()
}

/// Roots of the conservation polynomial, split into those that give a valid
/// (pole-free, strictly positive) propagation on both loops and those that
/// do not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityCertificate {
    pub polynomial: String,
    pub degree: Option<usize>,
    pub real_root_count: usize,
    pub rational_roots: Vec<Rational>,
    pub admissible: Vec<Rational>,
}

impl ArityCertificate {
    pub fn arity(&self) -> usize {
        self.admissible.len()
    }

    /// True when every real root is rational, so positivity was checked on the
    /// full real fiber rather than a subset of it.
    pub fn all_real_roots_rational(&self) -> bool {
        self.real_root_count == self.rational_roots.len()
    }
}

/// Both traces at `x`, if pole-free and strictly positive throughout.
pub fn admissible_traces(
    left: &StepChain,
    right: &StepChain,
    x: &Rational,
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let lt = left.eval(x).ok()?;
    let rt = right.eval(x).ok()?;
    let all_positive = lt.iter().chain(&rt).all(Rational::is_positive);
    all_positive.then_some((lt, rt))
}

pub fn certify(left: &StepChain, right: &StepChain) -> Result<ArityCertificate, ExactError> {
    certify_loops(left, Some(right))
}

/// Certificate for a single loop that must return its own input, `L(x) = x`.
pub fn certify_single(left: &StepChain) -> Result<ArityCertificate, ExactError> {
    certify_loops(left, None)
}

fn certify_loops(left: &StepChain, right: Option<&StepChain>) -> Result<ArityCertificate, ExactError> {
    let right_form = match right {
        Some(r) => r.closed_form(),
        None => RationalFunction::from_polynomial(Polynomial::zero()),
    };
    let poly = conservation_polynomial(&left.closed_form(), &right_form);
    let rational_roots: Vec<Rational> = poly.rational_roots()?.into_iter().collect();
    let admissible = rational_roots
        .iter()
        .filter(|x| {
            let Ok(lt) = left.eval(x) else { return false };
            let rt = match right {
                Some(r) => match r.eval(x) {
                    Ok(t) => t,
                    Err(_) => return false,
                },
                None => vec![Rational::zero()],
            };
            let positive = lt.iter().all(Rational::is_positive)
                && (right.is_none() || rt.iter().all(Rational::is_positive));
            // loop conservation, checked on the traces themselves
            positive && &(lt.last().unwrap() + rt.last().unwrap()) == *x
        })
        .cloned()
        .collect();
    Ok(ArityCertificate {
        polynomial: poly.to_string(),
        degree: poly.degree(),
        real_root_count: poly.sturm_real_root_count()?,
        rational_roots,
        admissible,
    })
}

/// Admissible roots of the conservation polynomial for the given chains.
pub fn fiber_parameters_for(left: &StepChain, right: &StepChain) -> BTreeSet<Rational> {
    match certify(left, right) {
        Ok(cert) => cert.admissible.into_iter().collect(),
        Err(_) => BTreeSet::new(),
    }
}

/// Admissible fiber parameters of the two-loop instance.
pub fn fiber_parameters() -> BTreeSet<Rational> {
    fiber_parameters_for(&left_chain(), &right_chain())
}

/// Both propagation tables rendered as aligned text, one row per `x`.
pub fn render_tables(xs: &[Rational]) -> Result<String, PropagationError> {
    let mut out = String::new();
    for (chain, header) in [
        (
            left_chain(),
            vec!["x", "7-x", "1/(7-x)", "2-1/(7-x)", "6/(..)", "4-6/(..)", "1/(..)"],
        ),
        (
            right_chain(),
            vec!["x", "7-x", "7-x", "x", "1/x", "1-1/x", "(3/2)/(..)", "7/2-(..)", "7/2-(..)"],
        ),
    ] {
        let closed = chain.closed_form();
        let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for x in xs {
            rows.push(chain.eval(x)?.iter().map(Rational::to_string).collect());
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        out.push_str(&format!("{} loop (closed form {closed})\n", chain.name));
        for row in rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn left_traces() {
        let c = left_chain();
        assert_eq!(c.steps.len(), 6);
        assert_eq!(
            c.eval(&2.into()).unwrap(),
            ints(&[(2, 1), (5, 1), (1, 5), (9, 5), (10, 3), (2, 3), (3, 2)])
        );
        assert_eq!(
            c.eval(&6.into()).unwrap(),
            ints(&[(6, 1), (1, 1), (1, 1), (1, 1), (6, 1), (-2, 1), (-1, 2)])
        );
    }

    #[test]
    fn right_traces() {
        let c = right_chain();
        assert_eq!(c.steps.len(), 8);
        assert_eq!(
            c.eval(&3.into()).unwrap(),
            ints(&[(3, 1), (4, 1), (4, 1), (3, 1), (1, 3), (2, 3), (9, 4), (5, 4), (5, 4)])
        );
    }

    #[test]
    fn pole_names_step() {
        // 7-5 = 2, 1/2, 3/2, 4, 0, then 1/0
        let err = left_chain().eval(&5.into()).unwrap_err();
        assert_eq!(
            err,
            PropagationError::Pole {
                chain: LoopName::LeftLoop,
                step: 5,
                input: Rational::zero()
            }
        );
        // right chain is singular at x = 0 (1/x) and x = 1 (3/2 over 0)
        assert!(matches!(right_chain().eval(&Rational::zero()), Err(PropagationError::Pole { step: 3, .. })));
        assert!(matches!(right_chain().eval(&1.into()), Err(PropagationError::Pole { step: 5, .. })));
    }

    #[test]
    fn closed_forms() {
        let l = RationalFunction::canonical(Polynomial::from_ints(&[-13, 2]), Polynomial::from_ints(&[-10, 2])).unwrap();
        let r = RationalFunction::canonical(Polynomial::from_ints(&[-7, 4]), Polynomial::from_ints(&[-2, 2])).unwrap();
        assert_eq!(left_chain().closed_form(), l);
        assert_eq!(right_chain().closed_form(), r);

        let involutions = StepChain {
            name: LoopName::LeftLoop,
            steps: vec![MobiusMap::reflect(7.into()), MobiusMap::reflect(7.into())],
        };
        assert_eq!(involutions.closed_form(), RationalFunction::x());
    }

    #[test]
    fn conservation_cubic() {
        let p = conservation_polynomial(&left_chain().closed_form(), &right_chain().closed_form());
        assert_eq!(p, Polynomial::from_ints(&[-24, 26, -9, 1]));
        assert_eq!(p.degree(), Some(3));
        let degenerate = conservation_polynomial(&RationalFunction::x(), &RationalFunction::from_polynomial(Polynomial::zero()));
        assert!(degenerate.is_zero());
    }

    #[test]
    fn fiber_is_two_three_four() {
        let got: Vec<_> = fiber_parameters().into_iter().collect();
        assert_eq!(got, ints(&[(2, 1), (3, 1), (4, 1)]));
        for x in got {
            let l = left_chain().eval(&x).unwrap();
            let r = right_chain().eval(&x).unwrap();
            assert_eq!(l.last().unwrap() + r.last().unwrap(), x);
        }
    }

    #[test]
    fn perturbed_left_chain_breaks_conservation() {
        let perturbed = left_chain().with_step(4, MobiusMap::reflect(5.into()));
        let p = conservation_polynomial(&perturbed.closed_form(), &right_chain().closed_form());
        let at: Vec<bool> = [2, 3, 4].iter().map(|&x| p.eval(&x.into()).is_zero()).collect();
        assert!(at.iter().any(|z| !z));
        let params = fiber_parameters_for(&perturbed, &right_chain());
        assert_ne!(params, fiber_parameters());
    }

    #[test]
    fn certificate_for_instance() {
        let cert = certify(&left_chain(), &right_chain()).unwrap();
        assert_eq!(cert.polynomial, "x^3 - 9x^2 + 26x - 24");
        assert_eq!(cert.real_root_count, 3);
        assert_eq!(cert.arity(), 3);
        assert!(cert.all_real_roots_rational());
    }

    #[test]
    fn tables_render() {
        let t = render_tables(&[2.into(), 3.into(), 4.into()]).unwrap();
        assert!(t.contains("left loop"));
        assert!(t.contains("24/7"));
        assert!(t.contains("9/4"));
        assert_eq!(t.lines().count(), 12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn trace_end_matches_closed_form(n in -500i64..=500, d in 1i64..=40) {
                let x = q(n, d);
                for chain in [left_chain(), right_chain()] {
                    if let Ok(trace) = chain.eval(&x) {
                        prop_assert_eq!(chain.closed_form().eval(&x).unwrap(), trace.last().unwrap().clone());
                    }
                }
            }
        }
    }
}
