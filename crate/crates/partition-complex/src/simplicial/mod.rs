//! Collapsed-nerve models and the normalized chain complexes of their strict
//! orbit quotients.
//!
//! A model is a product of bounded posets. Its non-collapsed strict chains
//! all run from the global bottom to the global top, so enumeration is a
//! walk through the successor graph of the product. Under a group action
//! only the lexicographically least chain of every orbit is visited.

mod complex;
mod model;

use std::sync::Arc;

use sha2::{Digest, Sha256};

pub use complex::{Basis, ChainComplex, DEFAULT_CHAIN_BOUND};
pub use model::{CollapsedNerveModel, LinearRole, NerveEnds, OrderComponent};

use crate::error::Result;
use crate::homology::Field;
use crate::poset_core::FiniteLattice;
use complex::{count_chains, Compiled, Engine};

/// Version tag mixed into every complex fingerprint; bump whenever basis
/// order or boundary conventions change.
pub const CODE_VERSION: &str = "partcx-complex-3";

/// Which chains span the orbit complex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ChainBasis {
    /// Strict chains of the whole product poset.
    ProductChains,
    /// Tensor products of chains of the factors: one factor per order
    /// component, one for the permuted linear coordinates and one per fixed
    /// linear coordinate. The Eilenberg–Zilber equivalence is natural in
    /// each factor, so it commutes with the diagonal group action and the
    /// coinvariants have the same homology as the product chains.
    #[default]
    FactorTensor,
}

impl std::str::FromStr for ChainBasis {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(ChainBasis::ProductChains),
            "tensor" => Ok(ChainBasis::FactorTensor),
            other => Err(crate::Error::arg(format!(
                "unknown chain basis {other:?}; expected product or tensor"
            ))),
        }
    }
}

fn factor_models(model: &CollapsedNerveModel, basis: ChainBasis) -> Vec<CollapsedNerveModel> {
    let sub = |orders: Vec<OrderComponent>, linear: Vec<(usize, LinearRole)>| {
        let mut m = model.clone();
        m.orders = orders;
        m.linear = linear;
        m
    };
    if basis == ChainBasis::ProductChains {
        return vec![model.clone()];
    }
    let mut out: Vec<CollapsedNerveModel> = model.orders.iter().map(|o| sub(vec![o.clone()], Vec::new())).collect();
    let permuted: Vec<(usize, LinearRole)> = model
        .linear
        .iter()
        .copied()
        .filter(|(_, r)| *r != LinearRole::Fixed)
        .collect();
    if !permuted.is_empty() {
        out.push(sub(Vec::new(), permuted));
    }
    for &(l, r) in &model.linear {
        if r == LinearRole::Fixed {
            out.push(sub(Vec::new(), vec![(l, r)]));
        }
    }
    if out.is_empty() {
        out.push(model.clone());
    }
    out
}

fn engine(model: &CollapsedNerveModel, basis: ChainBasis) -> Result<Engine> {
    let factors = factor_models(model, basis)
        .iter()
        .map(Compiled::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(Engine::new(factors))
}

/// Order complex of `l` (or of part of it, per `ends`).
pub fn nerve_model(l: Arc<FiniteLattice>, ends: NerveEnds) -> CollapsedNerveModel {
    CollapsedNerveModel::nerve(l, ends)
}

/// Model of `Σ|Π_n|^◇ ∧ (S^ℓ)^{∧n}` with its `Σ_n`-action.
pub fn atom_model(n: usize, ell: usize) -> Result<CollapsedNerveModel> {
    CollapsedNerveModel::atom(n, ell)
}

/// Hex digest identifying a model's chain complex.
pub fn fingerprint(model: &CollapsedNerveModel, basis: ChainBasis) -> String {
    let mut h = Sha256::new();
    h.update(CODE_VERSION.as_bytes());
    h.update([0]);
    h.update(model.parameters().as_bytes());
    h.update(format!(";basis={basis:?}").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Non-collapsed strict chains of one reported degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainsOfDegree {
    pub degree: i64,
    /// For nerve models each chain lists lattice element indices with the
    /// ends removed; otherwise each entry is a product element, decoded by
    /// [`element_coordinates`].
    pub chains: Vec<Vec<usize>>,
}

/// All non-collapsed strict chains up to the model's degree cap, without
/// identifying orbits. The empty chain of a nerve is excluded.
pub fn enumerate_strict_chains(model: &CollapsedNerveModel) -> Result<Vec<ChainsOfDegree>> {
    enumerate_strict_chains_bounded(model, DEFAULT_CHAIN_BOUND)
}

pub fn enumerate_strict_chains_bounded(model: &CollapsedNerveModel, bound: usize) -> Result<Vec<ChainsOfDegree>> {
    let e = engine(model, ChainBasis::ProductChains)?;
    let cap = internal_cap(model);
    let e = e.enumerate(cap, false, bound)?;
    let mut out = Vec::new();
    for (m, basis) in e.by_degree.iter().enumerate() {
        let degree = m as i64 + model.degree_shift;
        if basis.is_empty() || (model.is_nerve && degree < 0) {
            continue;
        }
        let mut chains: Vec<Vec<usize>> = basis
            .iter()
            .map(|ch| {
                if model.is_nerve {
                    let o = &model.orders[0];
                    ch[1..ch.len() - 1]
                        .iter()
                        .map(|&x| o.source_index[x as usize].unwrap())
                        .collect()
                } else {
                    ch.iter().map(|&x| x as usize).collect()
                }
            })
            .collect();
        chains.sort();
        out.push(ChainsOfDegree { degree, chains });
    }
    Ok(out)
}

/// Coordinates of a product element: one local index per order factor,
/// followed by one value per linear factor.
pub fn element_coordinates(model: &CollapsedNerveModel, element: usize) -> Vec<usize> {
    let mut radix: Vec<usize> = model.orders.iter().map(|o| o.len()).collect();
    radix.extend(model.linear.iter().map(|(l, _)| l + 1));
    let mut out = vec![0; radix.len()];
    let mut x = element;
    for k in (0..radix.len()).rev() {
        out[k] = x % radix[k];
        x /= radix[k];
    }
    out
}

/// Number of non-collapsed strict chains (all degrees, no orbits), computed
/// by path counting.
pub fn count_strict_chains(model: &CollapsedNerveModel) -> Result<u128> {
    Ok(count_chains(&Compiled::new(model)?))
}

fn internal_cap(model: &CollapsedNerveModel) -> usize {
    let h = model.height();
    match model.degree_cap {
        Some(cap) => {
            let internal = cap - model.degree_shift;
            if internal < 0 {
                0
            } else {
                (internal as usize).min(h)
            }
        }
        None => h,
    }
}

/// Normalized chain complex of the strict orbit quotient of `model`, spanned
/// by orbits of non-collapsed strict chains of the product poset.
pub fn orbit_chain_complex(model: &CollapsedNerveModel, field: Field) -> Result<ChainComplex> {
    orbit_chain_complex_with(model, field, ChainBasis::ProductChains, DEFAULT_CHAIN_BOUND)
}

/// Orbit complex over the chosen basis, failing with a resource error once
/// more than `bound` orbit representatives have been produced.
pub fn orbit_chain_complex_with(
    model: &CollapsedNerveModel,
    field: Field,
    basis: ChainBasis,
    bound: usize,
) -> Result<ChainComplex> {
    let engine = engine(model, basis)?;
    let cap = internal_cap(model);
    let e = engine.enumerate(cap, true, bound)?;
    let mut bases = e.by_degree;
    for b in bases.iter_mut() {
        sort_chains(b);
    }
    let boundaries = engine.boundaries(&bases)?;
    let complex = ChainComplex {
        field,
        degree_shift: model.degree_shift,
        bases,
        boundaries,
        truncated_from: if e.truncated { Some(cap) } else { None },
        fingerprint: fingerprint(model, basis),
    };
    complex.check_boundary_squared()?;
    Ok(complex)
}

fn sort_chains(b: &mut Basis) {
    let w = b.width;
    if w == 0 || b.data.is_empty() {
        return;
    }
    let mut chunks: Vec<&[u32]> = b.data.chunks(w).collect();
    chunks.sort_unstable();
    b.data = chunks.concat();
}

/// Human-readable label of a chain of product elements.
pub fn describe_chain(model: &CollapsedNerveModel, chain: &[u32]) -> String {
    let parts: Vec<String> = chain
        .iter()
        .map(|&x| {
            let coords = element_coordinates(model, x as usize);
            let mut items: Vec<String> = Vec::new();
            for (k, o) in model.orders.iter().enumerate() {
                items.push(o.label(coords[k]));
            }
            for v in &coords[model.orders.len()..] {
                items.push(v.to_string());
            }
            if items.len() == 1 {
                items.pop().unwrap()
            } else {
                format!("({})", items.join(","))
            }
        })
        .collect();
    parts.join(" < ")
}
