//! Population formulas for the quad, switch and multiplexor (quad # switch)
//! stars.
//!
//! Each gadget is a star around one interior vertex. Populating it yields a
//! multiplier `m` and a weight per slot; the conductivity on a slot is
//! `m × weight`. Slots are named by their position around the hub, so the
//! instance wiring (slot → neighbour) lives with the topology.

use serde::Serialize;
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("gadget parameter {name} = {value} must be positive")]
    NonPositiveParameter { name: &'static str, value: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    Quad,
    Switch,
    Multiplexor,
}

/// Slot positions around the hub.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    NorthEast,
    NorthWest,
    SouthEast,
    SouthWest,
    TopLeft,
    TopRight,
    Left,
    Right,
    BottomLeft,
    BottomRight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetAssignment {
    pub kind: GadgetKind,
    pub multiplier: Rational,
    pub weights: Vec<(Slot, Rational)>,
    /// Auxiliary chords between slots; their conductivities are chosen later.
    pub chords: Vec<(Slot, Slot)>,
}

impl GadgetAssignment {
    pub fn conductivities(&self) -> Vec<(Slot, Rational)> {
        self.weights
            .iter()
            .map(|(slot, w)| (*slot, &self.multiplier * w))
            .collect()
    }

    pub fn conductivity(&self, slot: Slot) -> Option<Rational> {
        self.weights
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|(_, w)| &self.multiplier * w)
    }
}

fn positive(name: &'static str, value: &Rational) -> Result<(), GadgetError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(GadgetError::NonPositiveParameter {
            name,
            value: value.clone(),
        })
    }
}

/// Quad: `m = 1/s + 2 + t`, weights `(1, s, s·t, s)` on NE, NW, SE, SW.
pub fn populate_quad(s: &Rational, t: &Rational) -> Result<GadgetAssignment, GadgetError> {
    positive("s", s)?;
    positive("t", t)?;
    let multiplier = &(&s.recip().unwrap() + &Rational::integer(2)) + t;
    Ok(GadgetAssignment {
        kind: GadgetKind::Quad,
        multiplier,
        weights: vec![
            (Slot::NorthEast, Rational::one()),
            (Slot::NorthWest, s.clone()),
            (Slot::SouthEast, s * t),
            (Slot::SouthWest, s.clone()),
        ],
        chords: Vec::new(),
    })
}

/// Switch: `m = s + 2 + t/s`, weights `(1, t/s, 1, s)` on NW, NE, SW, SE,
/// with one chord NW–SE.
pub fn populate_switch(s: &Rational, t: &Rational) -> Result<GadgetAssignment, GadgetError> {
    positive("s", s)?;
    positive("t", t)?;
    let t_over_s = t / s;
    let multiplier = &(s + &Rational::integer(2)) + &t_over_s;
    Ok(GadgetAssignment {
        kind: GadgetKind::Switch,
        multiplier,
        weights: vec![
            (Slot::NorthWest, Rational::one()),
            (Slot::NorthEast, t_over_s),
            (Slot::SouthWest, Rational::one()),
            (Slot::SouthEast, s.clone()),
        ],
        chords: vec![(Slot::NorthWest, Slot::SouthEast)],
    })
}

/// Multiplexor: `m = s + t₁ + 3 + t₂/s`, weights `(1, 1, t₁, t₂/s, 1, s)` on
/// top-left, top-right, left, right, bottom-left, bottom-right.
pub fn populate_multiplexor(s: &Rational, t1: &Rational, t2: &Rational) -> Result<GadgetAssignment, GadgetError> {
    positive("s", s)?;
    positive("t1", t1)?;
    positive("t2", t2)?;
    let t2_over_s = t2 / s;
    let multiplier = &(&(s + t1) + &Rational::integer(3)) + &t2_over_s;
    Ok(GadgetAssignment {
        kind: GadgetKind::Multiplexor,
        multiplier,
        weights: vec![
            (Slot::TopLeft, Rational::one()),
            (Slot::TopRight, Rational::one()),
            (Slot::Left, t1.clone()),
            (Slot::Right, t2_over_s),
            (Slot::BottomLeft, Rational::one()),
            (Slot::BottomRight, s.clone()),
        ],
        chords: vec![
            (Slot::Right, Slot::Left),
            (Slot::Left, Slot::BottomLeft),
            (Slot::TopLeft, Slot::BottomRight),
            (Slot::BottomRight, Slot::TopRight),
            (Slot::TopRight, Slot::Left),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn values(g: &GadgetAssignment) -> Vec<Rational> {
        g.conductivities().into_iter().map(|(_, c)| c).collect()
    }

    fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
        v.sort();
        v
    }

    #[test]
    fn quad_examples() {
        let g = populate_quad(&q(9, 5), &q(10, 3)).unwrap();
        assert_eq!(g.multiplier, q(53, 9));
        assert_eq!(values(&g), vec![q(53, 9), q(53, 5), q(106, 3), q(53, 5)]);

        let g = populate_quad(&1.into(), &1.into()).unwrap();
        assert_eq!(g.multiplier, Rational::integer(4));
        assert_eq!(values(&g), vec![Rational::integer(4); 4]);

        let g = populate_quad(&q(5, 3), &q(18, 5)).unwrap();
        assert_eq!(g.multiplier, q(31, 5));
        assert_eq!(values(&g), vec![q(31, 5), q(31, 3), q(186, 5), q(31, 3)]);
    }

    #[test]
    fn switch_examples() {
        let g = populate_switch(&q(1, 2), &q(1, 2)).unwrap();
        assert_eq!(g.multiplier, q(7, 2));
        assert_eq!(sorted(values(&g)), sorted(vec![q(7, 2), q(7, 4), q(7, 2), q(7, 2)]));
        assert_eq!(g.chords.len(), 1);

        let g = populate_switch(&1.into(), &1.into()).unwrap();
        assert_eq!(values(&g), vec![Rational::integer(4); 4]);

        let g = populate_switch(&q(3, 2), &q(3, 2)).unwrap();
        assert_eq!(g.multiplier, q(9, 2));
        assert_eq!(values(&g), vec![q(9, 2), q(9, 2), q(9, 2), q(27, 4)]);
    }

    #[test]
    fn multiplexor_examples() {
        let g = populate_multiplexor(&5.into(), &q(1, 5), &5.into()).unwrap();
        assert_eq!(g.multiplier, q(46, 5));
        assert_eq!(values(&g), vec![q(46, 5), q(46, 5), q(46, 25), q(46, 5), q(46, 5), Rational::integer(46)]);

        let g = populate_multiplexor(&4.into(), &q(1, 4), &4.into()).unwrap();
        assert_eq!(g.multiplier, q(33, 4));
        assert_eq!(values(&g), vec![q(33, 4), q(33, 4), q(33, 16), q(33, 4), q(33, 4), Rational::integer(33)]);

        let g = populate_multiplexor(&3.into(), &q(1, 3), &3.into()).unwrap();
        assert_eq!(g.multiplier, q(22, 3));
        assert_eq!(values(&g), vec![q(22, 3), q(22, 3), q(22, 9), q(22, 3), q(22, 3), Rational::integer(22)]);
        assert_eq!(g.chords.len(), 5);
    }

    #[test]
    fn alternative_multiplexor_factorization_matches_at_x2() {
        // (5, 1, 1) gives the same multiset as (5, 1/5, 5) at x = 2
        let a = populate_multiplexor(&5.into(), &1.into(), &1.into()).unwrap();
        let b = populate_multiplexor(&5.into(), &q(1, 5), &5.into()).unwrap();
        assert_eq!(sorted(values(&a)), sorted(values(&b)));
    }

    #[test]
    fn rejects_non_positive() {
        assert!(matches!(
            populate_quad(&Rational::zero(), &1.into()),
            Err(GadgetError::NonPositiveParameter { name: "s", .. })
        ));
        assert!(populate_switch(&1.into(), &q(-1, 2)).is_err());
        assert!(populate_multiplexor(&1.into(), &1.into(), &Rational::zero()).is_err());
    }

    #[test]
    fn quad_and_switch_agree_at_unit_s() {
        for t in [q(1, 3), q(2, 1), q(7, 5)] {
            let a = populate_quad(&1.into(), &t).unwrap();
            let b = populate_switch(&1.into(), &t).unwrap();
            assert_eq!(a.multiplier, b.multiplier);
            assert_eq!(sorted(values(&a)), sorted(values(&b)));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pos() -> impl Strategy<Value = Rational> {
            (1i64..=100, 1i64..=100).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #[test]
            fn conductivities_positive_and_scaled(s in pos(), t in pos(), t2 in pos()) {
                for g in [
                    populate_quad(&s, &t).unwrap(),
                    populate_switch(&s, &t).unwrap(),
                    populate_multiplexor(&s, &t, &t2).unwrap(),
                ] {
                    prop_assert!(g.multiplier.is_positive());
                    for ((slot, c), (wslot, w)) in g.conductivities().iter().zip(&g.weights) {
                        prop_assert_eq!(slot, wslot);
                        prop_assert!(c.is_positive());
                        prop_assert_eq!(c, &(&g.multiplier * w));
                    }
                    let mut slots: Vec<_> = g.weights.iter().map(|(s, _)| *s).collect();
                    slots.sort();
                    slots.dedup();
                    prop_assert_eq!(slots.len(), g.weights.len());
                }
            }
        }
    }
}
