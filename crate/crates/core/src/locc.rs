//! Multi-round LOCC protocols as explicit outcome trees.
//!
//! Every step is a quantum instrument on a single party. Outcomes are
//! broadcast, so the child chosen for an outcome label may act on any
//! party. Pure inputs stay vectors on every branch; mixed inputs propagate
//! as density operators.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::measures::{Bipartition, RootMeasure};
use crate::qmath::{apply_local, hermitian_eigenvalues, inner, ComplexMatrix, StateVector, NEGATIVE_EIG_TOL};
use crate::states::{DensityOperator, PartySpace, PureState};
use crate::{Error, Result, C64};

/// Branches with probability below this are pruned.
pub const ZERO_PROBABILITY: f64 = 1e-14;
const COMPLETENESS_TOL: f64 = 1e-9;
/// Leaves whose cut-reduced purity is below `1 - PURITY_TOL` count as mixed.
pub const PURITY_TOL: f64 = 1e-9;

/// Labelled Kraus operators on one party with `sum K^dagger K = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    party: String,
    operators: Vec<(String, ComplexMatrix)>,
}

impl Instrument {
    pub fn new(party: impl Into<String>, operators: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        let party = party.into();
        let dim = operators
            .first()
            .map(|(_, k)| k.rows())
            .ok_or_else(|| Error::MalformedProtocol(format!("instrument on {party} has no operators")))?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, (label, k)) in operators.iter().enumerate() {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.rows().max(k.cols()),
                });
            }
            if operators[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::MalformedProtocol(format!("duplicate outcome label `{label}`")));
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::Incomplete { deviation });
        }
        Ok(Self { party, operators })
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn projective(party: impl Into<String>, basis: &[(&str, Vec<C64>)]) -> Result<Self> {
        Self::new(
            party,
            basis
                .iter()
                .map(|(l, v)| (String::from(*l), ComplexMatrix::outer(v, v)))
                .collect(),
        )
    }

    /// Projectors onto blocks of computational basis states.
    pub fn block_projective(party: impl Into<String>, dim: usize, blocks: &[(&str, &[usize])]) -> Result<Self> {
        let ops = blocks
            .iter()
            .map(|(l, idx)| {
                let mut p = ComplexMatrix::zeros(dim, dim);
                for &i in idx.iter() {
                    p[(i, i)] = C64::new(1.0, 0.0);
                }
                (String::from(*l), p)
            })
            .collect();
        Self::new(party, ops)
    }

    pub fn party(&self) -> &str {
        &self.party
    }

    pub fn operators(&self) -> &[(String, ComplexMatrix)] {
        &self.operators
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.operators.iter().map(|(l, _)| l.as_str())
    }

    pub fn dim(&self) -> usize {
        self.operators[0].1.rows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolNode {
    Leaf,
    Step {
        instrument: Instrument,
        children: BTreeMap<String, ProtocolNode>,
    },
}

impl ProtocolNode {
    fn validate(&self) -> Result<()> {
        match self {
            Self::Leaf => Ok(()),
            Self::Step { instrument, children } => {
                for label in instrument.labels() {
                    if !children.contains_key(label) {
                        return Err(Error::MalformedProtocol(format!(
                            "no child for outcome `{label}` of the instrument on {}",
                            instrument.party()
                        )));
                    }
                }
                if let Some(extra) = children.keys().find(|k| !instrument.labels().any(|l| l == *k)) {
                    return Err(Error::MalformedProtocol(format!("child `{extra}` matches no outcome")));
                }
                children.values().try_for_each(Self::validate)
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            Self::Leaf => 0,
            Self::Step { children, .. } => 1 + children.values().map(Self::depth).max().unwrap_or(0),
        }
    }
}

/// A finite tree of instrument steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    root: ProtocolNode,
}

impl Protocol {
    pub fn new(root: ProtocolNode) -> Result<Self> {
        root.validate()?;
        Ok(Self { root })
    }

    /// The protocol that does nothing.
    pub fn empty() -> Self {
        Self {
            root: ProtocolNode::Leaf,
        }
    }

    pub fn root(&self) -> &ProtocolNode {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }
}

/// Pure or mixed state of the whole system.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl SystemState {
    pub fn space(&self) -> &PartySpace {
        match self {
            Self::Pure(p) => p.space(),
            Self::Mixed(r) => r.space(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            Self::Pure(p) => p.to_density(),
            Self::Mixed(r) => r.clone(),
        }
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        match self {
            Self::Pure(p) => p.reduced(keep),
            Self::Mixed(r) => r.partial_trace(keep),
        }
    }

    pub fn purity(&self) -> f64 {
        match self {
            Self::Pure(_) => 1.0,
            Self::Mixed(r) => r.purity(),
        }
    }
}

impl From<PureState> for SystemState {
    fn from(p: PureState) -> Self {
        Self::Pure(p)
    }
}

impl From<DensityOperator> for SystemState {
    fn from(r: DensityOperator) -> Self {
        Self::Mixed(r)
    }
}

/// One branch of a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOutcome {
    pub probability: f64,
    pub state: SystemState,
    pub transcript: Vec<String>,
}

/// `K rho K^dagger` with `K` acting on one party.
fn conjugate_local(rho: &ComplexMatrix, dims: &[usize], party: usize, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = rho.rows();
    let mut left = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let col = apply_local(&rho.column(c), dims, party, k)?;
        for (r, z) in col.into_iter().enumerate() {
            left[(r, c)] = z;
        }
    }
    // (K (K rho)^dagger)^dagger = K rho K^dagger
    let adj = left.adjoint();
    let mut out = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let col = apply_local(&adj.column(c), dims, party, k)?;
        for (r, z) in col.into_iter().enumerate() {
            out[(c, r)] = z.conj();
        }
    }
    Ok(out)
}

/// One instrument step: every outcome with nonzero probability, with the
/// renormalized post-measurement state.
pub fn apply_instrument(state: &SystemState, instrument: &Instrument) -> Result<Vec<BranchOutcome>> {
    let space = state.space();
    let party = space.index_of(instrument.party())?;
    let dims = space.dims();
    if dims[party] != instrument.dim() {
        return Err(Error::DimensionMismatch {
            expected: dims[party],
            found: instrument.dim(),
        });
    }
    let mut out = Vec::with_capacity(instrument.operators().len());
    for (label, k) in instrument.operators() {
        let (p, next) = match state {
            SystemState::Pure(psi) => {
                let v = apply_local(psi.amplitudes(), dims, party, k)?;
                let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if p < ZERO_PROBABILITY {
                    continue;
                }
                let s = PureState::new(space.clone(), StateVector::normalize(v)?)?;
                (p, SystemState::Pure(s))
            }
            SystemState::Mixed(rho) => {
                let m = conjugate_local(rho.matrix(), dims, party, k)?;
                let p = m.trace().re;
                if p < ZERO_PROBABILITY {
                    continue;
                }
                let r = DensityOperator::from_parts(space.clone(), m.scale_real(1.0 / p));
                (p, SystemState::Mixed(r))
            }
        };
        out.push(BranchOutcome {
            probability: p,
            state: next,
            transcript: vec![label.clone()],
        });
    }
    Ok(out)
}

/// `sum_b K_b rho K_b^dagger`, the non-selective action of an instrument.
pub fn channel_output(state: &SystemState, instrument: &Instrument) -> Result<DensityOperator> {
    let space = state.space();
    let party = space.index_of(instrument.party())?;
    let rho = state.to_density();
    let n = space.total_dim();
    let mut sum = ComplexMatrix::zeros(n, n);
    for (_, k) in instrument.operators() {
        sum = &sum + &conjugate_local(rho.matrix(), space.dims(), party, k)?;
    }
    Ok(DensityOperator::from_parts(space.clone(), sum))
}

/// Expands the protocol tree depth-first. Leaves come out in lexicographic
/// order of their transcripts.
pub fn run_protocol(initial: &SystemState, protocol: &Protocol) -> Result<Vec<BranchOutcome>> {
    let mut leaves = Vec::new();
    expand(
        BranchOutcome {
            probability: 1.0,
            state: initial.clone(),
            transcript: Vec::new(),
        },
        protocol.root(),
        &mut leaves,
    )?;
    Ok(leaves)
}

fn expand(branch: BranchOutcome, node: &ProtocolNode, leaves: &mut Vec<BranchOutcome>) -> Result<()> {
    match node {
        ProtocolNode::Leaf => leaves.push(branch),
        ProtocolNode::Step { instrument, children } => {
            let mut outcomes = apply_instrument(&branch.state, instrument)?;
            outcomes.sort_by(|a, b| a.transcript.cmp(&b.transcript));
            for o in outcomes {
                let label = &o.transcript[0];
                let child = children
                    .get(label)
                    .ok_or_else(|| Error::MalformedProtocol(format!("no child for `{label}`")))?;
                let mut transcript = branch.transcript.clone();
                transcript.push(label.clone());
                let next = BranchOutcome {
                    probability: branch.probability * o.probability,
                    state: o.state,
                    transcript,
                };
                if next.probability >= ZERO_PROBABILITY {
                    expand(next, child, leaves)?;
                }
            }
        }
    }
    Ok(())
}

/// The pure state a leaf leaves on the parties of `cut`, with the cut
/// re-indexed onto those parties. Fails if that reduced state is mixed.
pub fn leaf_cut_state(leaf: &BranchOutcome, cut: &Bipartition) -> Result<(PureState, Bipartition)> {
    let space = leaf.state.space();
    match &leaf.state {
        SystemState::Pure(p) if cut.covers(space) => Ok((p.clone(), cut.clone())),
        state => {
            let reduced = state.reduced(&cut.parties())?;
            Ok((reduced.as_pure(PURITY_TOL)?, cut.restricted()))
        }
    }
}

/// `sum_leaf p_leaf E(leaf state on the cut)`.
pub fn average_final_entanglement(
    leaves: &[BranchOutcome],
    cut: &Bipartition,
    measure: &dyn RootMeasure,
) -> Result<f64> {
    leaves
        .iter()
        .map(|leaf| {
            let (psi, c) = leaf_cut_state(leaf, cut)?;
            Ok(leaf.probability * measure.evaluate(&psi, &c)?)
        })
        .sum()
}

fn basis(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn qubit(a: C64, b: C64) -> Vec<C64> {
    vec![a, b]
}

/// Alice separates `{|0..3>}` from `{|4..7>}` and announces the result;
/// Charlie then measures `{|0>, |1>}` or `{|+i>, |-i>}` accordingly.
pub fn phi_collaboration_protocol() -> Protocol {
    let h = FRAC_1_SQRT_2;
    let alice = Instrument::block_projective("A", 8, &[("0", &[0, 1, 2, 3]), ("1", &[4, 5, 6, 7])]).expect("complete");
    let charlie_z = Instrument::projective("C", &[("0", basis(2, 0)), ("1", basis(2, 1))]).expect("complete");
    let charlie_y = Instrument::projective(
        "C",
        &[
            ("+i", qubit(C64::new(h, 0.0), C64::new(0.0, h))),
            ("-i", qubit(C64::new(h, 0.0), C64::new(0.0, -h))),
        ],
    )
    .expect("complete");
    two_round(alice, charlie_z, charlie_y)
}

/// Alice separates `{|0>,|1>}` from `{|2>,|3>}`; Charlie then measures
/// `{|0>, |1>}` or `{|+>, |->}`.
pub fn mixed_collaboration_protocol() -> Protocol {
    let h = FRAC_1_SQRT_2;
    let alice = Instrument::block_projective("A", 4, &[("0", &[0, 1]), ("1", &[2, 3])]).expect("complete");
    let charlie_z = Instrument::projective("C", &[("0", basis(2, 0)), ("1", basis(2, 1))]).expect("complete");
    let charlie_x = Instrument::projective(
        "C",
        &[
            ("+", qubit(C64::new(h, 0.0), C64::new(h, 0.0))),
            ("-", qubit(C64::new(h, 0.0), C64::new(-h, 0.0))),
        ],
    )
    .expect("complete");
    two_round(alice, charlie_z, charlie_x)
}

fn two_round(first: Instrument, on_zero: Instrument, on_one: Instrument) -> Protocol {
    let leafs = |i: &Instrument| -> BTreeMap<String, ProtocolNode> {
        i.labels().map(|l| (String::from(l), ProtocolNode::Leaf)).collect()
    };
    let mut children = BTreeMap::new();
    children.insert(
        String::from("0"),
        ProtocolNode::Step {
            children: leafs(&on_zero),
            instrument: on_zero,
        },
    );
    children.insert(
        String::from("1"),
        ProtocolNode::Step {
            children: leafs(&on_one),
            instrument: on_one,
        },
    );
    Protocol::new(ProtocolNode::Step {
        instrument: first,
        children,
    })
    .expect("well-formed")
}

/// Threshold for a nonzero weight in [`charlie_weight_support`].
pub const WEIGHT_SUPPORT_TOL: f64 = 1e-12;

/// Number of nonzero `<c|E|c>` over `c in {|0>, |1>, |+>, |->}` for a
/// positive element `E` on a qubit.
pub fn charlie_weight_support(element: &ComplexMatrix) -> Result<usize> {
    if element.rows() != 2 || element.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: element.rows(),
        });
    }
    let values = hermitian_eigenvalues(element)?;
    if values[1] < -NEGATIVE_EIG_TOL {
        return Err(Error::NotPositive { eigenvalue: values[1] });
    }
    let tr = element.trace().re;
    if tr <= WEIGHT_SUPPORT_TOL {
        return Err(Error::ZeroVector);
    }
    Ok(mixed_example_weights(element)?
        .iter()
        .filter(|&&w| w > WEIGHT_SUPPORT_TOL)
        .count())
}

/// `<c_i|E|c_i>` for `c = |0>, |1>, |+>, |->`.
pub fn mixed_example_weights(element: &ComplexMatrix) -> Result<[f64; 4]> {
    let h = FRAC_1_SQRT_2;
    let cs = [
        basis(2, 0),
        basis(2, 1),
        qubit(C64::new(h, 0.0), C64::new(h, 0.0)),
        qubit(C64::new(h, 0.0), C64::new(-h, 0.0)),
    ];
    let mut w = [0.0; 4];
    for (wi, c) in w.iter_mut().zip(&cs) {
        *wi = inner(c, &element.mul_vec(c)?).re;
    }
    Ok(w)
}

/// Outcome of the last party applying POVM element `E` to a (possibly
/// mixed) state: the probability and the normalized state on the others,
/// `Tr_C[(I ⊗ E) rho] / p`. `None` if the probability vanishes.
pub fn assisted_outcome(rho: &DensityOperator, element: &ComplexMatrix) -> Result<Option<(f64, DensityOperator)>> {
    let dims = rho.space().dims();
    let last = dims.len() - 1;
    let dc = dims[last];
    if element.rows() != dc || element.cols() != dc {
        return Err(Error::DimensionMismatch {
            expected: dc,
            found: element.rows(),
        });
    }
    let nab = rho.space().total_dim() / dc;
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(nab, nab);
    for i in 0..nab {
        for j in 0..nab {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..dc {
                for c2 in 0..dc {
                    acc += m[(i * dc + c, j * dc + c2)] * element[(c2, c)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    let p = out.trace().re;
    if p < ZERO_PROBABILITY {
        return Ok(None);
    }
    let keep: Vec<usize> = (0..last).collect();
    let space = rho.space().subspace(&keep)?;
    Ok(Some((p, DensityOperator::from_parts(space, out.scale_real(1.0 / p)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::EntropyOfEntanglement;
    use crate::states::make_bell;

    #[test]
    fn incomplete_instrument_rejected() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            Instrument::new("A", vec![("x".into(), half)]),
            Err(Error::Incomplete { .. })
        ));
    }

    #[test]
    fn unknown_party_rejected() {
        let i = Instrument::new("Z", vec![("id".into(), ComplexMatrix::identity(2))]).unwrap();
        let s = SystemState::Pure(make_bell(0).unwrap());
        assert!(matches!(apply_instrument(&s, &i), Err(Error::UnknownParty(_))));
    }

    #[test]
    fn missing_child_rejected() {
        let i = Instrument::projective("A", &[("0", basis(2, 0)), ("1", basis(2, 1))]).unwrap();
        let mut children = BTreeMap::new();
        children.insert(String::from("0"), ProtocolNode::Leaf);
        assert!(matches!(
            Protocol::new(ProtocolNode::Step {
                instrument: i,
                children
            }),
            Err(Error::MalformedProtocol(_))
        ));
    }

    #[test]
    fn measuring_bell_qubit() {
        let s = SystemState::Pure(make_bell(0).unwrap());
        let i = Instrument::projective("A", &[("0", basis(2, 0)), ("1", basis(2, 1))]).unwrap();
        let out = apply_instrument(&s, &i).unwrap();
        assert_eq!(out.len(), 2);
        let cut = Bipartition::first_vs_rest(s.space()).unwrap();
        for o in &out {
            assert!((o.probability - 0.5).abs() < 1e-14);
            let avg = average_final_entanglement(core::slice::from_ref(o), &cut, &EntropyOfEntanglement).unwrap();
            assert!(avg.abs() < 1e-12);
        }
    }

    #[test]
    fn weight_support_examples() {
        let e0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        assert_eq!(charlie_weight_support(&e0).unwrap(), 3);
        assert_eq!(charlie_weight_support(&ComplexMatrix::identity(2)).unwrap(), 4);
        assert!(charlie_weight_support(&ComplexMatrix::zeros(2, 2)).is_err());
        assert!(charlie_weight_support(&ComplexMatrix::from_diagonal(&[1.0, -0.5])).is_err());
    }
}
