//! Dirichlet-to-Neumann (response) matrices.
//!
//! [`schur_response`] eliminates the interior block of the Kirchhoff matrix by
//! exact Gauss-Jordan elimination. [`dirichlet_solve`] is an independent
//! route: it assembles the harmonic equations straight from the edge list and
//! solves them by Cramer's rule with fraction-free determinants. The two
//! share no linear-algebra code.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::exact::Rational;
use crate::network::{Network, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error("interior block is singular: some interior vertex has no path to the boundary")]
    SingularInterior,
    #[error("boundary potential missing for vertex {0}")]
    MissingPotential(VertexId),
    #[error("vertex {0} is not a boundary vertex")]
    NotBoundary(VertexId),
}

/// Exact response matrix indexed by boundary vertices in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResponseMatrix {
    pub boundary: Vec<VertexId>,
    pub entries: Vec<Vec<Rational>>,
}

impl ResponseMatrix {
    pub fn dim(&self) -> usize {
        self.boundary.len()
    }

    pub fn index_of(&self, v: u32) -> Option<usize> {
        self.boundary.iter().position(|b| b.0 == v)
    }

    pub fn get(&self, a: u32, b: u32) -> Option<&Rational> {
        Some(&self.entries[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn has_zero_row_sums(&self) -> bool {
        self.entries.iter().all(|row| row.iter().sum::<Rational>().is_zero())
    }

    pub fn has_nonpositive_off_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || !x.is_positive()))
    }

    /// Boundary pairs `(a, b)` with `a < b` whose entries differ.
    pub fn differing_pairs(&self, other: &ResponseMatrix) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (i, a) in self.boundary.iter().enumerate() {
            for (j, b) in self.boundary.iter().enumerate().skip(i) {
                let theirs = other.get(a.0, b.0);
                if theirs != Some(&self.entries[i][j]) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Header row of boundary ids, then one row of `p/q` entries per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.boundary.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

/// `Λ = K_BB − K_BI · K_II⁻¹ · K_IB`.
pub fn schur_response(network: &Network) -> Result<ResponseMatrix, ResponseError> {
    let k = network.kirchhoff_matrix();
    let nb = k.boundary_len;
    let ni = k.dim() - nb;
    // Augmented system [K_II | K_IB]; reducing K_II to the identity leaves
    // K_II⁻¹ K_IB on the right.
    let mut aug: Vec<Vec<Rational>> = (0..ni)
        .map(|r| {
            let row = &k.entries[nb + r];
            row[nb..].iter().chain(row[..nb].iter()).cloned().collect()
        })
        .collect();
    gauss_jordan(&mut aug, ni)?;
    let mut entries = vec![vec![Rational::zero(); nb]; nb];
    for (i, out_row) in entries.iter_mut().enumerate() {
        for (j, slot) in out_row.iter_mut().enumerate() {
            let mut acc = k.entries[i][j].clone();
            for (kbi, row) in k.entries[i][nb..].iter().zip(&aug) {
                if kbi.is_zero() {
                    continue;
                }
                acc = &acc - &(kbi * &row[ni + j]);
            }
            *slot = acc;
        }
    }
    Ok(ResponseMatrix {
        boundary: k.order[..nb].to_vec(),
        entries,
    })
}

/// Reduces the leading `n × n` block of `rows` to the identity in place.
fn gauss_jordan(rows: &mut [Vec<Rational>], n: usize) -> Result<(), ResponseError> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(ResponseError::SingularInterior)?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip().expect("pivot is nonzero");
        for x in rows[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletSolution {
    pub interior_potentials: BTreeMap<VertexId, Rational>,
    /// Net current flowing out of the network at each boundary vertex.
    pub boundary_currents: BTreeMap<VertexId, Rational>,
}

/// Solves for the harmonic extension of `boundary_potentials` and the
/// resulting boundary currents.
pub fn dirichlet_solve(
    network: &Network,
    boundary_potentials: &BTreeMap<VertexId, Rational>,
) -> Result<DirichletSolution, ResponseError> {
    let boundary = network.boundary();
    for v in boundary_potentials.keys() {
        if !boundary.contains(v) {
            return Err(ResponseError::NotBoundary(*v));
        }
    }
    for v in &boundary {
        if !boundary_potentials.contains_key(v) {
            return Err(ResponseError::MissingPotential(*v));
        }
    }
    let interior = network.interior();
    let slot: BTreeMap<VertexId, usize> = interior.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let n = interior.len();

    // Row r: Σ_{w~v} γ_vw (u_v − u_w) = 0 for interior v, with known boundary
    // potentials moved to the right-hand side.
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut rhs = vec![Rational::zero(); n];
    for e in network.edges() {
        for (me, other) in [(e.u, e.v), (e.v, e.u)] {
            let Some(&r) = slot.get(&me) else { continue };
            let g = &e.conductivity;
            a[r][r] = &a[r][r] + g;
            match slot.get(&other) {
                Some(&c) => a[r][c] = &a[r][c] - g,
                None => rhs[r] = &rhs[r] + &(g * &boundary_potentials[&other]),
            }
        }
    }

    let det = bareiss_determinant(a.clone());
    if det.is_zero() {
        return Err(ResponseError::SingularInterior);
    }
    let mut potentials: BTreeMap<VertexId, Rational> = boundary_potentials.clone();
    let mut interior_potentials = BTreeMap::new();
    for (c, v) in interior.iter().enumerate() {
        let mut ac = a.clone();
        for (row, b) in ac.iter_mut().zip(&rhs) {
            row[c] = b.clone();
        }
        let value = &bareiss_determinant(ac) / &det;
        potentials.insert(*v, value.clone());
        interior_potentials.insert(*v, value);
    }

    let mut boundary_currents: BTreeMap<VertexId, Rational> =
        boundary.iter().map(|v| (*v, Rational::zero())).collect();
    for e in network.edges() {
        let drop = &potentials[&e.u] - &potentials[&e.v];
        let flow = &e.conductivity * &drop;
        if let Some(cur) = boundary_currents.get_mut(&e.u) {
            *cur = &*cur + &flow;
        }
        if let Some(cur) = boundary_currents.get_mut(&e.v) {
            *cur = &*cur - &flow;
        }
    }
    Ok(DirichletSolution {
        interior_potentials,
        boundary_currents,
    })
}

/// Response matrix assembled column by column from unit-potential Dirichlet
/// solves.
pub fn response_by_dirichlet(network: &Network) -> Result<ResponseMatrix, ResponseError> {
    let boundary = network.boundary();
    let n = boundary.len();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for (j, vj) in boundary.iter().enumerate() {
        let potentials = boundary
            .iter()
            .map(|v| (*v, if v == vj { Rational::one() } else { Rational::zero() }))
            .collect();
        let sol = dirichlet_solve(network, &potentials)?;
        for (i, vi) in boundary.iter().enumerate() {
            entries[i][j] = sol.boundary_currents[vi].clone();
        }
    }
    Ok(ResponseMatrix { boundary, entries })
}

/// Determinant by Bareiss fraction-free elimination. Entries are scaled to
/// integers first so every intermediate division is exact.
fn bareiss_determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = Rational::one();
    for row in m.iter_mut() {
        let lcm = row
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let k = Rational::from_bigint(lcm);
        for x in row.iter_mut() {
            *x = &*x * &k;
        }
        scale = &scale * &k;
    }
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    &(&sign * &m[n - 1][n - 1]) / &scale
}
