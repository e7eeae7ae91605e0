//! The 18-vertex two-loop cactus: topology, population at a fiber parameter,
//! auxiliary-edge solving and exact fiber verification.
//!
//! Vertex labels: interior hubs 1, 16 (left-loop quads), 4, 12 (right-loop
//! quads), 17 (right-loop switch) and 11 (the multiplexor joining both
//! loops); the other twelve vertices are boundary.

// Errors carry the exact offending values; these paths are cold, so the
// larger Err variant is preferred over boxing.
#![allow(clippy::result_large_err)]

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, Rational};
use crate::gadgets::{populate_multiplexor, populate_quad, populate_switch, GadgetError, GadgetKind, Slot};
use crate::network::{ordered, Edge, EdgeRole, Network, NetworkError, VertexId, VertexKind};
use crate::propagation::{self, left_chain, right_chain, ArityCertificate, PropagationError, StepChain};
use crate::response::{response_by_dirichlet, schur_response, ResponseError, ResponseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error(transparent)]
    Pole(#[from] PropagationError),
    #[error("x = {x}: {chain} trace entry {index} is {value}, conductivities must be positive")]
    NonPositiveConductivity {
        x: Rational,
        chain: propagation::LoopName,
        index: usize,
        value: Rational,
    },
    #[error("gadget at hub {hub}: {source}")]
    Gadget { hub: u32, source: GadgetError },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("infeasible fiber: response entry ({}, {}) differs between networks: {}", .pair.0, .pair.1, join(.values))]
    InfeasibleFiber {
        pair: (VertexId, VertexId),
        values: Vec<Rational>,
    },
    #[error("slack must be positive, got {0}")]
    NonPositiveSlack(Rational),
    #[error("networks do not share one boundary set")]
    BoundaryMismatch,
    #[error("auxiliary pair {0}-{1} is not a pair of boundary vertices")]
    BadAuxiliaryPair(VertexId, VertexId),
    #[error("no networks given")]
    Empty,
    #[error("x = {x}: response entry ({}, {}) differs from the common response", .pair.0, .pair.1)]
    ResponseMismatch { x: Rational, pair: (VertexId, VertexId) },
    #[error("x = {x}: Schur response disagrees with the Dirichlet oracle at ({}, {})", .pair.0, .pair.1)]
    OracleMismatch { x: Rational, pair: (VertexId, VertexId) },
    #[error("x = {x}: response violates {property}")]
    InvalidResponse { x: Rational, property: &'static str },
    #[error("fiber of size {given} does not match the certified real-root count {certified}")]
    ArityMismatch { given: usize, certified: usize },
    #[error("{x} is not an admissible root of the conservation polynomial")]
    NotAFiberParameter { x: Rational },
}

fn join(values: &[Rational]) -> String {
    values.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

/// Which trace entry feeds a gadget parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceRef {
    Left(usize),
    Right(usize),
}

/// One gadget star: its hub, its kind, where its parameters come from and
/// which neighbour sits on each slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSpec {
    pub hub: u32,
    pub kind: GadgetKind,
    pub params: Vec<TraceRef>,
    pub wiring: Vec<(Slot, u32)>,
}

impl StarSpec {
    pub fn neighbour(&self, slot: Slot) -> Option<u32> {
        self.wiring.iter().find(|(s, _)| *s == slot).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusTopology {
    pub interior: Vec<u32>,
    pub boundary: Vec<u32>,
    pub stars: Vec<StarSpec>,
    pub auxiliary: Vec<(u32, u32)>,
}

pub const INTERIOR: [u32; 6] = [1, 4, 11, 12, 16, 17];
pub const BOUNDARY: [u32; 12] = [2, 3, 5, 6, 7, 8, 9, 10, 13, 14, 15, 18];
pub const AUXILIARY: [(u32, u32); 6] = [(6, 7), (3, 6), (6, 13), (2, 14), (3, 14), (14, 18)];

/// The cactus skeleton with its slot wiring.
pub fn build_topology() -> CactusTopology {
    use Slot::*;
    use TraceRef::{Left as L, Right as R};
    let quad = |hub, params: [TraceRef; 2], [ne, nw, se, sw]: [u32; 4]| StarSpec {
        hub,
        kind: GadgetKind::Quad,
        params: params.to_vec(),
        wiring: vec![(NorthEast, ne), (NorthWest, nw), (SouthEast, se), (SouthWest, sw)],
    };
    let stars = vec![
        quad(1, [L(3), L(4)], [10, 2, 9, 6]),
        quad(16, [L(5), L(6)], [13, 9, 14, 10]),
        StarSpec {
            hub: 11,
            kind: GadgetKind::Multiplexor,
            params: vec![L(1), L(2), R(2)],
            wiring: vec![
                (TopLeft, 2),
                (TopRight, 3),
                (Left, 6),
                (Right, 7),
                (BottomLeft, 13),
                (BottomRight, 14),
            ],
        },
        quad(4, [R(4), R(3)], [7, 5, 14, 8]),
        quad(12, [R(5), R(6)], [14, 5, 15, 8]),
        StarSpec {
            hub: 17,
            kind: GadgetKind::Switch,
            params: vec![R(7), R(8)],
            wiring: vec![(NorthWest, 18), (NorthEast, 13), (SouthWest, 15), (SouthEast, 14)],
        },
    ];
    let topology = CactusTopology {
        interior: INTERIOR.to_vec(),
        boundary: BOUNDARY.to_vec(),
        stars,
        auxiliary: AUXILIARY.to_vec(),
    };
    topology.validate().expect("built-in topology is valid");
    topology
}

impl CactusTopology {
    pub fn star_edges(&self) -> Vec<(u32, u32)> {
        self.stars
            .iter()
            .flat_map(|s| s.wiring.iter().map(move |(_, v)| (s.hub, *v)))
            .collect()
    }

    /// Every edge with its role, endpoints ordered, sorted.
    pub fn all_edges(&self) -> Vec<(u32, u32, EdgeRole)> {
        let mut out: Vec<_> = self
            .star_edges()
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b), EdgeRole::Star))
            .chain(self.auxiliary.iter().map(|&(a, b)| (a.min(b), a.max(b), EdgeRole::Auxiliary)))
            .collect();
        out.sort();
        out
    }

    pub fn degree(&self, v: u32) -> usize {
        self.all_edges().iter().filter(|(a, b, _)| *a == v || *b == v).count()
    }

    pub fn vertex_kinds(&self) -> Vec<(VertexId, VertexKind)> {
        let mut out: Vec<_> = self
            .interior
            .iter()
            .map(|&v| (VertexId(v), VertexKind::Interior))
            .chain(self.boundary.iter().map(|&v| (VertexId(v), VertexKind::Boundary)))
            .collect();
        out.sort();
        out
    }

    pub fn auxiliary_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.auxiliary
            .iter()
            .map(|&(a, b)| ordered(VertexId(a), VertexId(b)))
            .collect()
    }

    /// Checks the structural invariants: stars join an interior hub to
    /// boundary leaves, auxiliary edges join boundary vertices, no pair is
    /// used twice, and every gadget chord is one of the auxiliary edges.
    pub fn validate(&self) -> Result<(), String> {
        let interior: BTreeSet<u32> = self.interior.iter().copied().collect();
        let boundary: BTreeSet<u32> = self.boundary.iter().copied().collect();
        if interior.intersection(&boundary).next().is_some() {
            return Err("vertex both interior and boundary".into());
        }
        let mut seen = BTreeSet::new();
        for (a, b, role) in self.all_edges() {
            if !seen.insert((a, b)) {
                return Err(format!("duplicate edge {a}-{b}"));
            }
            match role {
                EdgeRole::Star => {
                    let ok = (interior.contains(&a) && boundary.contains(&b))
                        || (interior.contains(&b) && boundary.contains(&a));
                    if !ok {
                        return Err(format!("star edge {a}-{b} is not interior-boundary"));
                    }
                }
                EdgeRole::Auxiliary => {
                    if !(boundary.contains(&a) && boundary.contains(&b)) {
                        return Err(format!("auxiliary edge {a}-{b} is not boundary-boundary"));
                    }
                }
            }
        }
        let aux: BTreeSet<(u32, u32)> = self.auxiliary.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        for star in &self.stars {
            let unit = Rational::one();
            let gadget = match star.kind {
                GadgetKind::Quad => populate_quad(&unit, &unit),
                GadgetKind::Switch => populate_switch(&unit, &unit),
                GadgetKind::Multiplexor => populate_multiplexor(&unit, &unit, &unit),
            }
            .expect("unit parameters are positive");
            let slots: BTreeSet<Slot> = gadget.weights.iter().map(|(s, _)| *s).collect();
            let wired: BTreeSet<Slot> = star.wiring.iter().map(|(s, _)| *s).collect();
            if slots != wired || wired.len() != star.wiring.len() {
                return Err(format!("hub {} wiring does not cover its gadget slots", star.hub));
            }
            for (sa, sb) in gadget.chords {
                let (a, b) = (star.neighbour(sa).unwrap(), star.neighbour(sb).unwrap());
                if !aux.contains(&(a.min(b), a.max(b))) {
                    return Err(format!("chord {a}-{b} of hub {} is not an auxiliary edge", star.hub));
                }
            }
        }
        Ok(())
    }

    /// Skeleton document in the network JSON schema, with `null`
    /// conductivities.
    pub fn skeleton_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct V {
            id: u32,
            kind: VertexKind,
        }
        #[derive(Serialize)]
        struct E {
            u: u32,
            v: u32,
            conductivity: Option<Rational>,
            role: EdgeRole,
        }
        #[derive(Serialize)]
        struct Doc {
            vertices: Vec<V>,
            edges: Vec<E>,
        }
        let doc = Doc {
            vertices: self
                .vertex_kinds()
                .into_iter()
                .map(|(id, kind)| V { id: id.0, kind })
                .collect(),
            edges: self
                .all_edges()
                .into_iter()
                .map(|(u, v, role)| E {
                    u,
                    v,
                    conductivity: None,
                    role,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("skeleton serializes")
    }
}

/// Star-only network at fiber parameter `x`; auxiliary edges are left out.
pub fn populate(x: &Rational) -> Result<Network, CactusError> {
    populate_on(&build_topology(), x)
}

pub fn populate_on(topology: &CactusTopology, x: &Rational) -> Result<Network, CactusError> {
    let left = left_chain().eval(x)?;
    let right = right_chain().eval(x)?;
    for (chain, trace) in [(propagation::LoopName::LeftLoop, &left), (propagation::LoopName::RightLoop, &right)] {
        if let Some((index, value)) = trace.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(CactusError::NonPositiveConductivity {
                x: x.clone(),
                chain,
                index,
                value: value.clone(),
            });
        }
    }
    let pick = |r: &TraceRef| match *r {
        TraceRef::Left(i) => left[i].clone(),
        TraceRef::Right(i) => right[i].clone(),
    };
    let mut edges = Vec::new();
    for star in &topology.stars {
        let p: Vec<Rational> = star.params.iter().map(pick).collect();
        let gadget = match star.kind {
            GadgetKind::Quad => populate_quad(&p[0], &p[1]),
            GadgetKind::Switch => populate_switch(&p[0], &p[1]),
            GadgetKind::Multiplexor => populate_multiplexor(&p[0], &p[1], &p[2]),
        }
        .map_err(|source| CactusError::Gadget { hub: star.hub, source })?;
        for (slot, c) in gadget.conductivities() {
            let leaf = star.neighbour(slot).expect("validated wiring");
            edges.push(Edge::star(star.hub, leaf, c));
        }
    }
    Ok(Network::build(topology.vertex_kinds(), edges)?)
}

pub type AuxiliarySolution = BTreeMap<(VertexId, VertexId), Rational>;

/// Chooses auxiliary conductivities that make all responses equal.
///
/// Every boundary pair outside `auxiliary` must already agree across the
/// star-only responses. For an auxiliary pair with star responses `λ_k`, the
/// common target is `min_k λ_k − slack` and network `k` gets `λ_k − target`.
pub fn solve_auxiliary(
    networks: &[Network],
    auxiliary: &[(VertexId, VertexId)],
    slack: &Rational,
) -> Result<Vec<AuxiliarySolution>, CactusError> {
    if !slack.is_positive() {
        return Err(CactusError::NonPositiveSlack(slack.clone()));
    }
    let first = networks.first().ok_or(CactusError::Empty)?;
    let boundary = first.boundary();
    if networks.iter().any(|n| n.boundary() != boundary) {
        return Err(CactusError::BoundaryMismatch);
    }
    let aux: BTreeSet<(VertexId, VertexId)> = auxiliary.iter().map(|&(a, b)| ordered(a, b)).collect();
    for &(a, b) in &aux {
        if a == b || !boundary.contains(&a) || !boundary.contains(&b) {
            return Err(CactusError::BadAuxiliaryPair(a, b));
        }
    }
    let responses = networks
        .iter()
        .map(schur_response)
        .collect::<Result<Vec<_>, _>>()?;

    for (i, a) in boundary.iter().enumerate() {
        for b in &boundary[i + 1..] {
            if aux.contains(&(*a, *b)) {
                continue;
            }
            let values: Vec<Rational> = responses.iter().map(|r| r.get(a.0, b.0).unwrap().clone()).collect();
            if values.iter().any(|v| v != &values[0]) {
                return Err(CactusError::InfeasibleFiber { pair: (*a, *b), values });
            }
        }
    }

    let mut out = vec![AuxiliarySolution::new(); networks.len()];
    for &(a, b) in &aux {
        let values: Vec<&Rational> = responses.iter().map(|r| r.get(a.0, b.0).unwrap()).collect();
        let target = values.iter().min().copied().unwrap() - slack;
        for (sol, v) in out.iter_mut().zip(values) {
            let c = v - &target;
            debug_assert!(c.is_positive());
            sol.insert((a, b), c);
        }
    }
    Ok(out)
}

pub fn with_auxiliary(network: &Network, solution: &AuxiliarySolution) -> Result<Network, CactusError> {
    Ok(network.with_edges(
        solution
            .iter()
            .map(|(&(a, b), c)| Edge::new(a.0, b.0, c.clone(), EdgeRole::Auxiliary)),
    )?)
}

/// Replaces one star conductivity of the network populated at `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOverride {
    pub x: Rational,
    pub u: u32,
    pub v: u32,
    pub conductivity: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub parameters: Vec<Rational>,
    pub slack: Rational,
    /// Complete networks, auxiliary edges included, one per parameter.
    pub networks: Vec<Network>,
    pub auxiliary_solution: Vec<AuxiliarySolution>,
    pub common_response: ResponseMatrix,
    pub certificate: Option<ArityCertificate>,
    pub arity: usize,
}

pub fn verify_fiber(xs: &[Rational], slack: &Rational) -> Result<FiberReport, CactusError> {
    verify_fiber_with_overrides(xs, slack, &[])
}

/// Populates every `x`, applies the overrides, solves the auxiliary edges and
/// checks that all responses coincide exactly and agree with the Dirichlet
/// oracle. For more than one parameter, the fiber size must also equal the
/// certified real-root count of the conservation polynomial.
pub fn verify_fiber_with_overrides(
    xs: &[Rational],
    slack: &Rational,
    overrides: &[EdgeOverride],
) -> Result<FiberReport, CactusError> {
    let parameters: Vec<Rational> = xs.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if parameters.is_empty() {
        return Err(CactusError::Empty);
    }
    let topology = build_topology();
    let mut star_networks = Vec::with_capacity(parameters.len());
    for x in &parameters {
        let mut n = populate_on(&topology, x)?;
        for o in overrides.iter().filter(|o| &o.x == x) {
            n = n.with_conductivity(o.u, o.v, o.conductivity.clone())?;
        }
        star_networks.push(n);
    }
    let auxiliary_solution = solve_auxiliary(&star_networks, &topology.auxiliary_pairs(), slack)?;

    let mut networks = Vec::with_capacity(parameters.len());
    let mut responses = Vec::with_capacity(parameters.len());
    for ((x, n), sol) in parameters.iter().zip(&star_networks).zip(&auxiliary_solution) {
        let full = with_auxiliary(n, sol)?;
        let response = schur_response(&full)?;
        let oracle = response_by_dirichlet(&full)?;
        if let Some(&pair) = response.differing_pairs(&oracle).first() {
            return Err(CactusError::OracleMismatch { x: x.clone(), pair });
        }
        for (ok, property) in [
            (response.is_symmetric(), "symmetry"),
            (response.has_zero_row_sums(), "zero row sums"),
            (response.has_nonpositive_off_diagonal(), "nonpositive off-diagonals"),
        ] {
            if !ok {
                return Err(CactusError::InvalidResponse { x: x.clone(), property });
            }
        }
        networks.push(full);
        responses.push(response);
    }
    let common_response = responses[0].clone();
    for (x, r) in parameters.iter().zip(&responses) {
        if let Some(&pair) = common_response.differing_pairs(r).first() {
            return Err(CactusError::ResponseMismatch { x: x.clone(), pair });
        }
    }

    let certificate = if parameters.len() > 1 {
        let cert = propagation::certify(&left_chain(), &right_chain())?;
        if cert.real_root_count != parameters.len() {
            return Err(CactusError::ArityMismatch {
                given: parameters.len(),
                certified: cert.real_root_count,
            });
        }
        if let Some(x) = parameters.iter().find(|x| !cert.admissible.contains(x)) {
            return Err(CactusError::NotAFiberParameter { x: x.clone() });
        }
        Some(cert)
    } else {
        None
    };

    Ok(FiberReport {
        arity: parameters.len(),
        parameters,
        slack: slack.clone(),
        networks,
        auxiliary_solution,
        common_response,
        certificate,
    })
}

impl FiberReport {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct AuxEdge<'a> {
            u: VertexId,
            v: VertexId,
            conductivity: &'a Rational,
        }
        #[derive(Serialize)]
        struct AuxDoc<'a> {
            x: &'a Rational,
            edges: Vec<AuxEdge<'a>>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            parameters: &'a [Rational],
            slack: &'a Rational,
            networks: Vec<serde_json::Value>,
            auxiliary_solution: Vec<AuxDoc<'a>>,
            common_response: &'a ResponseMatrix,
            certificate: &'a Option<ArityCertificate>,
            arity: usize,
        }
        let doc = Doc {
            parameters: &self.parameters,
            slack: &self.slack,
            networks: self.networks.iter().map(Network::to_json).collect(),
            auxiliary_solution: self
                .parameters
                .iter()
                .zip(&self.auxiliary_solution)
                .map(|(x, sol)| AuxDoc {
                    x,
                    edges: sol
                        .iter()
                        .map(|(&(u, v), c)| AuxEdge { u, v, conductivity: c })
                        .collect(),
                })
                .collect(),
            common_response: &self.common_response,
            certificate: &self.certificate,
            arity: self.arity,
        };
        serde_json::to_value(doc).expect("report serializes")
    }
}

/// Number of admissible fiber parameters of the instance: rational roots of
/// the conservation polynomial with positive traces on both loops that also
/// populate to a network with positive conductivities.
pub fn arity() -> usize {
    let Ok(cert) = propagation::certify(&left_chain(), &right_chain()) else {
        return 0;
    };
    let topology = build_topology();
    cert.admissible
        .iter()
        .filter(|x| populate_on(&topology, x).is_ok())
        .count()
}

/// Arity certificate for alternative chains. With `right = None` only the
/// left loop is conserved (`L(x) = x`).
pub fn arity_for(left: &StepChain, right: Option<&StepChain>) -> Result<ArityCertificate, ExactError> {
    match right {
        Some(r) => propagation::certify(left, r),
        None => propagation::certify_single(left),
    }
}
