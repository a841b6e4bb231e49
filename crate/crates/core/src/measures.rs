//! Bipartite pure-state entanglement quantities and root measures.
//!
//! A root measure is the bipartite pure-state quantity that the assisted
//! and collaborative averages are built from. Measures are defined as
//! functions of the Schmidt probabilities, which makes them invariant under
//! local unitaries by construction. Only the entropy of entanglement ships.
//! Measures that assign different values to maximally and non-maximally
//! entangled states (as the entropy does, and the Schmidt number does not)
//! are the ones for which the collaboration advantage shows up.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::qmath::{permute_subsystems, schmidt_probabilities, shannon_bits};
use crate::states::{DensityOperator, PartySpace, PureState};
use crate::{Error, Result, C64};

/// Two disjoint nonempty groups of parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(space: &PartySpace, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidCut("both sides must be nonempty".into()));
        }
        let mut seen = alloc::vec![false; space.len()];
        for &p in left.iter().chain(&right) {
            if p >= space.len() {
                return Err(Error::InvalidSubsystem(p));
            }
            if seen[p] {
                return Err(Error::InvalidCut(alloc::format!(
                    "party {} appears twice",
                    space.labels()[p]
                )));
            }
            seen[p] = true;
        }
        Ok(Self { left, right })
    }

    /// First party against all others.
    pub fn first_vs_rest(space: &PartySpace) -> Result<Self> {
        Self::new(space, alloc::vec![0], (1..space.len()).collect())
    }

    /// Parses `"A:B"`, `"AB:C"` (single-character labels) or
    /// `"Alice,Bob:Charlie"`.
    pub fn parse(space: &PartySpace, text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidCut(alloc::format!("`{text}` has no ':'")))?;
        Self::new(space, parse_side(space, l)?, parse_side(space, r)?)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// All parties of the union, in the space's order.
    pub fn parties(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn covers(&self, space: &PartySpace) -> bool {
        self.left.len() + self.right.len() == space.len()
    }

    /// The same cut re-indexed onto `space.subspace(self.parties())`.
    pub fn restricted(&self) -> Self {
        let all = self.parties();
        let pos = |p: &usize| all.iter().position(|q| q == p).expect("member");
        Self {
            left: self.left.iter().map(pos).collect(),
            right: self.right.iter().map(pos).collect(),
        }
    }
}

fn parse_side(space: &PartySpace, side: &str) -> Result<Vec<usize>> {
    let side = side.trim();
    if side.is_empty() {
        return Err(Error::InvalidCut("empty side".into()));
    }
    if side.contains(',') {
        return side.split(',').map(|l| space.index_of(l.trim())).collect();
    }
    if let Ok(i) = space.index_of(side) {
        return Ok(alloc::vec![i]);
    }
    let mut buf = [0u8; 4];
    side.chars().map(|c| space.index_of(c.encode_utf8(&mut buf))).collect()
}

/// Amplitudes of a pure state regrouped as a `dA x dB` matrix (row-major)
/// for a cut that covers every party.
pub fn bipartite_amplitudes(psi: &PureState, cut: &Bipartition) -> Result<(Vec<C64>, usize, usize)> {
    let space = psi.space();
    if !cut.covers(space) {
        return Err(Error::InvalidCut(
            "a pure-state measure needs a cut covering every party".into(),
        ));
    }
    let order: Vec<usize> = cut.left.iter().chain(&cut.right).copied().collect();
    let dims = space.dims();
    let da = cut.left.iter().map(|&p| dims[p]).product();
    let db = cut.right.iter().map(|&p| dims[p]).product();
    let amps = if order.iter().enumerate().all(|(i, &p)| i == p) {
        psi.amplitudes().to_vec()
    } else {
        permute_subsystems(psi.amplitudes(), dims, &order)?
    };
    Ok((amps, da, db))
}

/// Squared Schmidt coefficients across the cut (descending, `min(dA, dB)`).
pub fn schmidt_spectrum(psi: &PureState, cut: &Bipartition) -> Result<Vec<f64>> {
    let (amps, da, db) = bipartite_amplitudes(psi, cut)?;
    schmidt_probabilities(&amps, da, db)
}

/// Bipartite pure-state entanglement measure.
pub trait RootMeasure: Send + Sync {
    fn name(&self) -> &str;

    /// Value on a pure state with the given squared Schmidt coefficients.
    fn evaluate_schmidt(&self, probabilities: &[f64]) -> f64;

    /// Whether [`RootMeasure::evaluate_mixed`] is implemented.
    fn mixed_capable(&self) -> bool {
        false
    }

    fn evaluate(&self, psi: &PureState, cut: &Bipartition) -> Result<f64> {
        Ok(self.evaluate_schmidt(&schmidt_spectrum(psi, cut)?))
    }

    /// Evaluates a `dA x dB` amplitude block (need not be normalized).
    fn evaluate_amplitudes(&self, amps: &[C64], dim_a: usize, dim_b: usize) -> Result<f64> {
        Ok(self.evaluate_schmidt(&schmidt_probabilities(amps, dim_a, dim_b)?))
    }

    fn evaluate_mixed(&self, rho: &DensityOperator, _cut: &Bipartition) -> Result<f64> {
        Err(Error::MixedState { purity: rho.purity() })
    }
}

/// Von Neumann entropy of either reduced state, in bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct EntropyOfEntanglement;

impl RootMeasure for EntropyOfEntanglement {
    fn name(&self) -> &str {
        "entropy"
    }

    fn evaluate_schmidt(&self, probabilities: &[f64]) -> f64 {
        shannon_bits(probabilities)
    }
}

/// Names accepted by [`measure_by_name`].
pub const MEASURE_NAMES: &[&str] = &["entropy"];

pub fn measure_by_name(name: &str) -> Result<Box<dyn RootMeasure>> {
    match name {
        "entropy" => Ok(Box::new(EntropyOfEntanglement)),
        other => Err(Error::UnknownMeasure(other.to_string())),
    }
}

/// `S(Tr_right |psi><psi|)` in bits.
pub fn entropy_of_entanglement(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    EntropyOfEntanglement.evaluate(psi, cut)
}

/// Spread `max - min` of the `min(dA, dB)` squared Schmidt coefficients
/// (zeros included); zero exactly for maximally entangled states.
pub fn max_ent_deficit(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    Ok(spread(&schmidt_spectrum(psi, cut)?))
}

/// `max - min` of a (descending) probability list.
pub fn spread(probabilities: &[f64]) -> f64 {
    let max = probabilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = probabilities.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min).max(0.0)
}

pub const MAX_ENT_TOL: f64 = 1e-9;

pub fn is_max_entangled(psi: &PureState, cut: &Bipartition, tol: f64) -> Result<bool> {
    Ok(max_ent_deficit(psi, cut)? <= tol)
}

/// Label of a cut such as `A:B`.
pub fn cut_label(space: &PartySpace, cut: &Bipartition) -> String {
    let side = |s: &[usize]| -> String {
        s.iter()
            .map(|&p| space.labels()[p].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    alloc::format!("{}:{}", side(&cut.left), side(&cut.right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_bell, make_max_entangled};

    #[test]
    fn parse_cuts() {
        let s = PartySpace::with_dims(&[8, 4, 2]).unwrap();
        let c = Bipartition::parse(&s, "AB:C").unwrap();
        assert_eq!(c.left(), &[0, 1]);
        assert_eq!(c.right(), &[2]);
        assert!(Bipartition::parse(&s, "A:A").is_err());
        assert!(Bipartition::parse(&s, "A:D").is_err());
        assert!(Bipartition::parse(&s, "AB").is_err());
        assert!(!Bipartition::parse(&s, "A:B").unwrap().covers(&s));
        assert_eq!(cut_label(&s, &c), "A,B:C");
    }

    #[test]
    fn bell_values() {
        let b = make_bell(3).unwrap();
        let cut = Bipartition::first_vs_rest(b.space()).unwrap();
        assert!((entropy_of_entanglement(&b, &cut).unwrap() - 1.0).abs() < 1e-12);
        assert!(max_ent_deficit(&b, &cut).unwrap() < 1e-12);
    }

    #[test]
    fn max_entangled_flags() {
        let m = make_max_entangled(4, 2).unwrap();
        let cut = Bipartition::first_vs_rest(m.space()).unwrap();
        assert!(is_max_entangled(&m, &cut, MAX_ENT_TOL).unwrap());
        let m84 = make_max_entangled(8, 4).unwrap();
        assert!(
            (entropy_of_entanglement(&m84, &Bipartition::first_vs_rest(m84.space()).unwrap()).unwrap() - 2.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn unknown_measure() {
        assert!(measure_by_name("entropy").is_ok());
        assert!(matches!(measure_by_name("negativity"), Err(Error::UnknownMeasure(_))));
    }

    #[test]
    fn uncovered_cut_rejected() {
        let s = crate::states::make_phi();
        let cut = Bipartition::parse(s.space(), "A:B").unwrap();
        assert!(matches!(entropy_of_entanglement(&s, &cut), Err(Error::InvalidCut(_))));
    }
}
