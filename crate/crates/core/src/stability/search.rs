use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::filtration::{Filtration, WeightProfile};
use super::{hm_pairing, validate_parameter, StabilityError, StabilityParameter};
use crate::algebra::{GradedAlgebra, GradedIdeal};
use crate::graded::GradedSubspace;
use crate::linalg::{enumerate_subspaces, Field, Subspace};

/// Smallest admissible family with `I^{(k)}_1 ⊇ V^{(k)}` for a descending flag of `A_1`.
pub fn admissible_closure(a: &GradedAlgebra, flag: &[Subspace]) -> Result<Filtration, StabilityError> {
    check_flag(a, flag)?;
    let (space, field) = (a.space(), a.field());
    let bound = flag.len() * a.q();
    let mut ideals: Vec<GradedIdeal> = (1..=bound)
        .map(|k| match flag.get(k - 1) {
            Some(v) => {
                let mut gens = GradedSubspace::zero(space, field);
                *gens.piece_mut(1) = v.clone();
                a.ideal_generated_by(&gens)
            }
            None => Ok(GradedIdeal::zero(a)),
        })
        .collect::<Result<_, _>>()?;
    loop {
        let mut grew = false;
        for k in 1..bound {
            for l in 1..=bound - k {
                if ideals[k - 1].is_zero() || ideals[l - 1].is_zero() {
                    continue;
                }
                let product = a.ideal_product(&ideals[k - 1], &ideals[l - 1])?;
                if !product.is_subideal_of(&ideals[k + l - 1])? {
                    ideals[k + l - 1] = ideals[k + l - 1].sum(&product)?;
                    grew = true;
                }
            }
        }
        for k in (1..bound).rev() {
            if !ideals[k].is_subideal_of(&ideals[k - 1])? {
                ideals[k - 1] = ideals[k - 1].sum(&ideals[k])?;
                grew = true;
            }
        }
        if !grew {
            return Filtration::from_ideals(a, &ideals);
        }
    }
}

/// `I^{(k)} = (A_{>0})^k`.
pub fn powers_family(a: &GradedAlgebra) -> Filtration {
    let first = GradedIdeal::at_least(a, 1);
    let mut ideals = vec![first.clone()];
    while !ideals.last().expect("nonempty").is_zero() && ideals.len() <= a.q() {
        let next = a.ideal_product(ideals.last().expect("nonempty"), &first).expect("same algebra");
        ideals.push(next);
    }
    Filtration::from_ideals(a, &ideals).expect("same algebra")
}

fn check_flag(a: &GradedAlgebra, flag: &[Subspace]) -> Result<(), StabilityError> {
    let d1 = a.dim(1);
    for (k, v) in flag.iter().enumerate() {
        if v.field() != a.field() {
            return Err(StabilityError::BadFlag(format!("V^({}) is over {}, the algebra over {}", k + 1, v.field(), a.field())));
        }
        if v.ambient_dim() != d1 {
            return Err(StabilityError::BadFlag(format!("V^({}) lives in dimension {}, but d_1 = {d1}", k + 1, v.ambient_dim())));
        }
        if k > 0 && !v.is_subspace_of(&flag[k - 1]).expect("same ambient") {
            return Err(StabilityError::BadFlag(format!("V^({}) is not contained in V^({k})", k + 1)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every flag of `A_1` of length `≤ r_max` over a finite field.
    Exhaustive,
    /// Coordinate flags and `samples` random flags drawn from a seeded generator.
    Heuristic { seed: u64, samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Longest flag tried; defaults to `q·max d_i`.
    pub r_max: Option<usize>,
    /// Extra flags tried under either strategy.
    pub user_flags: Vec<Vec<Subspace>>,
}

impl SearchConfig {
    pub fn exhaustive(r_max: Option<usize>) -> SearchConfig {
        SearchConfig { strategy: Strategy::Exhaustive, r_max, user_flags: Vec::new() }
    }

    pub fn heuristic(seed: u64, samples: usize, r_max: Option<usize>) -> SearchConfig {
        SearchConfig { strategy: Strategy::Heuristic { seed, samples }, r_max, user_flags: Vec::new() }
    }

    pub fn with_flags(mut self, flags: Vec<Vec<Subspace>>) -> SearchConfig {
        self.user_flags = flags;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    #[serde(rename = "UNSTABLE")]
    Unstable,
    #[serde(rename = "STRICTLY-SEMISTABLE-WITNESS")]
    StrictlySemistableWitness,
    #[serde(rename = "NO-DESTABILIZER-FOUND")]
    NoDestabilizerFound,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Unstable => "UNSTABLE",
            VerdictKind::StrictlySemistableWitness => "STRICTLY-SEMISTABLE-WITNESS",
            VerdictKind::NoDestabilizerFound => "NO-DESTABILIZER-FOUND",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSource {
    /// Powers of the augmentation ideal.
    Powers,
    Flag,
    UserFlag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub source: CandidateSource,
    /// The generating flag of `A_1`, absent for the powers family.
    pub flag: Option<Vec<Subspace>>,
    pub filtration: Filtration,
    pub weights: WeightProfile,
    pub pairing: i64,
}

impl Certificate {
    /// Recomputes everything the certificate claims from its ideals alone.
    pub fn recheck(&self, a: &GradedAlgebra, theta: &StabilityParameter) -> bool {
        let weights = self.filtration.weights();
        self.filtration.is_admissible(a)
            && self.filtration.is_standard_nontrivial()
            && weights == self.weights
            && hm_pairing(theta, &weights) == self.pairing
    }

    fn canonical_cmp(&self, other: &Certificate) -> Ordering {
        let (x, y) = (self.filtration.ideals(), other.filtration.ideals());
        for (u, v) in x.iter().zip(&y) {
            for (s, t) in u.pieces().iter().zip(v.pieces()) {
                let o = s.canonical_cmp(t);
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
        x.len().cmp(&y.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchDescriptor {
    pub strategy: String,
    pub r_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub user_flags: usize,
    /// Families examined, including the powers family.
    pub candidates: usize,
    /// Of those, the standard nontrivial ones.
    pub standard_candidates: usize,
}

/// Outcome of a bounded search. Only `Unstable` is a proof; the other kinds describe what the
/// searched region contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub field: Field,
    pub dims: Vec<usize>,
    pub theta: Vec<i64>,
    pub search: SearchDescriptor,
    pub certificate: Option<Certificate>,
}

struct Search<'a> {
    a: &'a GradedAlgebra,
    theta: &'a StabilityParameter,
    candidates: usize,
    standard: usize,
    best: Option<Certificate>,
}

impl Search<'_> {
    fn consider(&mut self, source: CandidateSource, flag: Option<Vec<Subspace>>, filtration: Filtration) {
        self.candidates += 1;
        if !filtration.is_standard_nontrivial() {
            return;
        }
        self.standard += 1;
        let weights = filtration.weights();
        let pairing = hm_pairing(self.theta, &weights);
        let cert = Certificate { source, flag, filtration, weights, pairing };
        let better = match &self.best {
            None => true,
            Some(b) => pairing.cmp(&b.pairing).then_with(|| cert.canonical_cmp(b)) == Ordering::Less,
        };
        if better {
            self.best = Some(cert);
        }
    }

    fn flag(&mut self, source: CandidateSource, flag: &[Subspace]) -> Result<(), StabilityError> {
        let closure = admissible_closure(self.a, flag)?;
        self.consider(source, Some(flag.to_vec()), closure);
        Ok(())
    }
}

/// Searches standard nontrivial admissible families for the smallest Hilbert–Mumford pairing.
///
/// The candidates are the powers of the augmentation ideal and the admissible closures of flags
/// `A_1 ⊋ V^{(1)} ⊇ … ⊇ V^{(r)} ⊋ 0` with `r ≤ r_max`. Ties in the pairing go to the
/// certificate whose ideals come first in canonical order.
pub fn check_q_stability(a: &GradedAlgebra, theta: &StabilityParameter, config: &SearchConfig) -> Result<Verdict, StabilityError> {
    let dims = a.dims();
    if !validate_parameter(theta.theta(), dims) {
        return Err(StabilityError::InvalidParameter { theta: theta.theta().to_vec(), dims: dims.to_vec() });
    }
    let d1 = a.dim(1);
    if d1 == 0 {
        return Err(StabilityError::NoDegreeOneGenerators);
    }
    let field = a.field();
    if config.strategy == Strategy::Exhaustive && field == Field::Rational {
        return Err(StabilityError::UnsupportedExhaustive(field));
    }
    for flag in &config.user_flags {
        check_flag(a, flag)?;
    }
    let r_max = config.r_max.unwrap_or_else(|| a.q() * dims.iter().copied().max().unwrap_or(0));
    let mut search = Search { a, theta, candidates: 0, standard: 0, best: None };
    search.consider(CandidateSource::Powers, None, powers_family(a));
    let (strategy, seed, samples) = match config.strategy {
        Strategy::Exhaustive => {
            let mut chain = Vec::new();
            exhaustive_flags(&mut search, &mut chain, d1, r_max, field)?;
            ("exhaustive", None, None)
        }
        Strategy::Heuristic { seed, samples } => {
            heuristic_flags(&mut search, d1, r_max, field, seed, samples)?;
            ("heuristic", Some(seed), Some(samples))
        }
    };
    for flag in &config.user_flags {
        search.flag(CandidateSource::UserFlag, flag)?;
    }
    let kind = match &search.best {
        Some(c) if c.pairing < 0 => VerdictKind::Unstable,
        Some(c) if c.pairing == 0 => VerdictKind::StrictlySemistableWitness,
        _ => VerdictKind::NoDestabilizerFound,
    };
    let certificate = if kind == VerdictKind::NoDestabilizerFound { None } else { search.best };
    Ok(Verdict {
        kind,
        field,
        dims: dims.to_vec(),
        theta: theta.theta().to_vec(),
        search: SearchDescriptor {
            strategy: strategy.into(),
            r_max,
            seed,
            samples,
            user_flags: config.user_flags.len(),
            candidates: search.candidates,
            standard_candidates: search.standard,
        },
        certificate,
    })
}

/// Subspaces of `outer` of dimension `k`, through coordinates in its echelon basis.
fn subspaces_within(outer: &Subspace, k: usize) -> Result<Vec<Subspace>, StabilityError> {
    let field = outer.field();
    let inner = enumerate_subspaces(outer.dim(), k, field).map_err(crate::graded::GradedError::from)?;
    Ok(inner
        .map(|s| {
            let vectors: Vec<_> = s.basis().iter().map(|c| outer.combine(c)).collect();
            Subspace::span(field, outer.ambient_dim(), &vectors).expect("combinations live in the ambient space")
        })
        .collect())
}

fn exhaustive_flags(
    search: &mut Search<'_>,
    chain: &mut Vec<Subspace>,
    d1: usize,
    r_max: usize,
    field: Field,
) -> Result<(), StabilityError> {
    if chain.len() == r_max {
        return Ok(());
    }
    let options = match chain.last() {
        None => (1..d1).map(|k| subspaces_within(&Subspace::full(field, d1), k)).collect::<Result<Vec<_>, _>>()?,
        Some(last) => (1..=last.dim()).map(|k| subspaces_within(last, k)).collect::<Result<Vec<_>, _>>()?,
    };
    for v in options.into_iter().flatten() {
        chain.push(v);
        search.flag(CandidateSource::Flag, chain)?;
        exhaustive_flags(search, chain, d1, r_max, field)?;
        chain.pop();
    }
    Ok(())
}

/// Non-increasing dimension sequences in `1..d1` of length `1..=r_max`.
fn profiles(d1: usize, r_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (1..d1).map(|k| vec![k]).collect();
    while let Some(p) = stack.pop() {
        if p.len() < r_max {
            for k in 1..=*p.last().expect("nonempty") {
                let mut next = p.clone();
                next.push(k);
                stack.push(next);
            }
        }
        out.push(p);
    }
    out.sort();
    out
}

fn heuristic_flags(
    search: &mut Search<'_>,
    d1: usize,
    r_max: usize,
    field: Field,
    seed: u64,
    samples: usize,
) -> Result<(), StabilityError> {
    let shapes = profiles(d1, r_max);
    for p in &shapes {
        let prefix: Vec<Subspace> = p.iter().map(|&k| Subspace::coordinate(field, d1, &(0..k).collect::<Vec<_>>())).collect();
        let suffix: Vec<Subspace> = p.iter().map(|&k| Subspace::coordinate(field, d1, &(d1 - k..d1).collect::<Vec<_>>())).collect();
        search.flag(CandidateSource::Flag, &prefix)?;
        if suffix != prefix {
            search.flag(CandidateSource::Flag, &suffix)?;
        }
    }
    if d1 <= 10 {
        for mask in 1..(1u32 << d1) - 1 {
            let coords: Vec<usize> = (0..d1).filter(|&i| mask & (1 << i) != 0).collect();
            search.flag(CandidateSource::Flag, &[Subspace::coordinate(field, d1, &coords)])?;
        }
    }
    if shapes.is_empty() {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let shape = shapes.choose(&mut rng).expect("nonempty");
        let mut chain: Vec<Subspace> = Vec::with_capacity(shape.len());
        let mut outer = Subspace::full(field, d1);
        for &k in shape {
            let v = loop {
                let vectors: Vec<_> = (0..k)
                    .map(|_| outer.combine(&(0..outer.dim()).map(|_| field.random(&mut rng)).collect::<Vec<_>>()))
                    .collect();
                let v = Subspace::span(field, d1, &vectors).expect("vectors live in the ambient space");
                if v.dim() == k {
                    break v;
                }
            };
            chain.push(v.clone());
            outer = v;
        }
        search.flag(CandidateSource::Flag, &chain)?;
    }
    Ok(())
}
