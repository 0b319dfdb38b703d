//! Contexts, structural modes and mode-restricted renamings.
//!
//! A context is just its size `n`; its positions are `1..=n`. A renaming is a
//! total map between positions, and the mode decides which maps are allowed:
//! functions (cartesian), bijections (linear), injections (affine) or
//! surjections (relevant).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest context size accepted by [`enumerate_renamings`].
pub const RENAMING_LIMIT: usize = 6;
/// Largest context size accepted by [`generated_closure`].
pub const CLOSURE_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cartesian,
    Linear,
    Affine,
    Relevant,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Cartesian, Mode::Linear, Mode::Affine, Mode::Relevant];

    /// Exchange is available in every mode.
    pub fn has_exchange(self) -> bool {
        true
    }

    pub fn has_weakening(self) -> bool {
        matches!(self, Mode::Cartesian | Mode::Affine)
    }

    pub fn has_contraction(self) -> bool {
        matches!(self, Mode::Cartesian | Mode::Relevant)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Cartesian => "cartesian",
            Mode::Linear => "linear",
            Mode::Affine => "affine",
            Mode::Relevant => "relevant",
        }
    }

    /// Whether a single position used `count` times is acceptable.
    pub fn admits_count(self, count: usize) -> bool {
        match self {
            Mode::Cartesian => true,
            Mode::Linear => count == 1,
            Mode::Affine => count <= 1,
            Mode::Relevant => count >= 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mode '{0}' (expected cartesian, linear, affine or relevant)")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cartesian" => Ok(Mode::Cartesian),
            "linear" => Ok(Mode::Linear),
            "affine" => Ok(Mode::Affine),
            "relevant" => Ok(Mode::Relevant),
            _ => Err(UnknownMode(s.to_string())),
        }
    }
}

/// A structural rule a generator realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structural {
    Exchange,
    Weakening,
    Contraction,
}

impl fmt::Display for Structural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structural::Exchange => "exchange",
            Structural::Weakening => "weakening",
            Structural::Contraction => "contraction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("position {position} is outside the codomain 1..={codomain}")]
    OutOfRange { position: usize, codomain: usize },
    #[error("map is not a valid {mode} renaming ({reason})")]
    InvalidForMode { mode: Mode, reason: &'static str },
    #[error("cannot compose: first codomain is {first_codomain}, second domain is {second_domain}")]
    DomainMismatch { first_codomain: usize, second_domain: usize },
    #[error("cannot compose renamings of different modes ({0} and {1})")]
    ModeMismatch(Mode, Mode),
    #[error("{rule} is not available in {mode} mode")]
    Capability { mode: Mode, rule: Structural },
    #[error("generator position {at} is out of range for ambient context {ambient}")]
    BadGeneratorPosition { at: usize, ambient: usize },
    #[error("context size {size} exceeds the limit {limit}")]
    LimitExceeded { size: usize, limit: usize },
    #[error("malformed renaming text: {0}")]
    Syntax(String),
}

/// A mode-valid total map from positions `1..=domain` to `1..=codomain`.
///
/// The fields are private so that every value in circulation has passed the
/// mode check in [`Renaming::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Renaming {
    mode: Mode,
    domain: usize,
    codomain: usize,
    map: Vec<usize>,
}

impl Renaming {
    /// `map[i - 1]` is the image of position `i`; the domain is `map.len()`.
    pub fn new(mode: Mode, codomain: usize, map: Vec<usize>) -> Result<Self, ContextError> {
        if let Some(&position) = map.iter().find(|&&p| p == 0 || p > codomain) {
            return Err(ContextError::OutOfRange { position, codomain });
        }
        let mut hits = vec![0usize; codomain];
        for &p in &map {
            hits[p - 1] += 1;
        }
        let injective = hits.iter().all(|&h| h <= 1);
        let surjective = hits.iter().all(|&h| h >= 1);
        let reason = match mode {
            Mode::Cartesian => None,
            Mode::Linear if !(injective && surjective) => Some("not a bijection"),
            Mode::Affine if !injective => Some("not injective"),
            Mode::Relevant if !surjective => Some("not surjective"),
            _ => None,
        };
        if let Some(reason) = reason {
            return Err(ContextError::InvalidForMode { mode, reason });
        }
        Ok(Renaming {
            mode,
            domain: map.len(),
            codomain,
            map,
        })
    }

    pub fn identity(n: usize, mode: Mode) -> Self {
        Renaming {
            mode,
            domain: n,
            codomain: n,
            map: (1..=n).collect(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Image of the 1-based position `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Renaming) -> Result<Renaming, ContextError> {
        if self.mode != first.mode {
            return Err(ContextError::ModeMismatch(self.mode, first.mode));
        }
        if first.codomain != self.domain {
            return Err(ContextError::DomainMismatch {
                first_codomain: first.codomain,
                second_domain: self.domain,
            });
        }
        let map = first.map.iter().map(|&i| self.apply(i)).collect();
        // Functions, bijections, injections and surjections are closed under
        // composition, so re-validating is only a consistency check.
        Renaming::new(self.mode, self.codomain, map)
    }

    /// The same map viewed in another mode, if valid there.
    pub fn with_mode(&self, mode: Mode) -> Result<Renaming, ContextError> {
        Renaming::new(mode, self.codomain, self.map.clone())
    }

    /// `self ⊗ id_k`: extend with the identity on `k` appended positions.
    pub fn extend(&self, k: usize) -> Renaming {
        let mut map = self.map.clone();
        map.extend((1..=k).map(|j| self.codomain + j));
        Renaming {
            mode: self.mode,
            domain: self.domain + k,
            codomain: self.codomain + k,
            map,
        }
    }

    /// Block sum `self ⊕ other` acting on `[self.domain][other.domain]`.
    pub fn sum(&self, other: &Renaming) -> Result<Renaming, ContextError> {
        if self.mode != other.mode {
            return Err(ContextError::ModeMismatch(self.mode, other.mode));
        }
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&j| self.codomain + j));
        Renaming::new(self.mode, self.codomain + other.codomain, map)
    }

    /// Parse the textual form `[2 1 3]`; the codomain defaults to the
    /// largest of the domain size and the largest image.
    pub fn parse(text: &str, mode: Mode, codomain: Option<usize>) -> Result<Renaming, ContextError> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| ContextError::Syntax(format!("expected '[...]', found '{text}'")))?;
        let map = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| ContextError::Syntax(format!("'{s}' is not a position"))))
            .collect::<Result<Vec<_>, _>>()?;
        let codomain = codomain.unwrap_or_else(|| map.iter().copied().max().unwrap_or(0).max(map.len()));
        Renaming::new(mode, codomain, map)
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Swap,
    Weaken,
    Contract,
}

/// Structural generator acting at the 1-based position `at`.
///
/// * `Swap` exchanges `at` and `at + 1` in `ambient`.
/// * `Weaken` maps `ambient` into `ambient + 1`, skipping the new position `at`.
/// * `Contract` maps `ambient` onto `ambient - 1`, merging `at` and `at + 1`.
pub fn generator(kind: GeneratorKind, at: usize, ambient: usize, mode: Mode) -> Result<Renaming, ContextError> {
    let bad = ContextError::BadGeneratorPosition { at, ambient };
    match kind {
        GeneratorKind::Swap => {
            if at == 0 || at + 1 > ambient {
                return Err(bad);
            }
            let mut map: Vec<usize> = (1..=ambient).collect();
            map.swap(at - 1, at);
            Renaming::new(mode, ambient, map)
        }
        GeneratorKind::Weaken => {
            if !mode.has_weakening() {
                return Err(ContextError::Capability {
                    mode,
                    rule: Structural::Weakening,
                });
            }
            if at == 0 || at > ambient + 1 {
                return Err(bad);
            }
            let map = (1..=ambient).map(|i| if i < at { i } else { i + 1 }).collect();
            Renaming::new(mode, ambient + 1, map)
        }
        GeneratorKind::Contract => {
            if !mode.has_contraction() {
                return Err(ContextError::Capability {
                    mode,
                    rule: Structural::Contraction,
                });
            }
            if at == 0 || at + 1 > ambient {
                return Err(bad);
            }
            let map = (1..=ambient).map(|i| if i <= at { i } else { i - 1 }).collect();
            Renaming::new(mode, ambient - 1, map)
        }
    }
}

/// Every mode-valid renaming from `m` to `n`, in lexicographic order of maps.
pub fn enumerate_renamings(m: usize, n: usize, mode: Mode) -> Result<Vec<Renaming>, ContextError> {
    for size in [m, n] {
        if size > RENAMING_LIMIT {
            return Err(ContextError::LimitExceeded { size, limit: RENAMING_LIMIT });
        }
    }
    let mut out = Vec::new();
    if m > 0 && n == 0 {
        return Ok(out);
    }
    let mut map = vec![1usize; m];
    loop {
        if let Ok(r) = Renaming::new(mode, n, map.clone()) {
            out.push(r);
        }
        // odometer increment, last digit fastest
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if map[k] < n {
                map[k] += 1;
                break;
            }
            map[k] = 1;
        }
    }
}

/// Generators of `mode` whose domain and codomain both stay within `max_size`.
fn generators_upto(mode: Mode, max_size: usize) -> Vec<Renaming> {
    let mut gens = Vec::new();
    for ambient in 0..=max_size {
        for at in 1..ambient {
            gens.extend(generator(GeneratorKind::Swap, at, ambient, mode).ok());
            gens.extend(generator(GeneratorKind::Contract, at, ambient, mode).ok());
        }
        if ambient < max_size {
            for at in 1..=ambient + 1 {
                gens.extend(generator(GeneratorKind::Weaken, at, ambient, mode).ok());
            }
        }
    }
    gens
}

/// Closure of identities and the mode's generators under composition, over
/// contexts of size at most `max_size`.
pub fn generated_closure(mode: Mode, max_size: usize) -> Result<BTreeSet<Renaming>, ContextError> {
    if max_size > CLOSURE_LIMIT {
        return Err(ContextError::LimitExceeded {
            size: max_size,
            limit: CLOSURE_LIMIT,
        });
    }
    let gens = generators_upto(mode, max_size);
    let mut seen: BTreeSet<Renaming> = BTreeSet::new();
    let mut queue: VecDeque<Renaming> = VecDeque::new();
    for n in 0..=max_size {
        let id = Renaming::identity(n, mode);
        seen.insert(id.clone());
        queue.push_back(id);
    }
    while let Some(r) = queue.pop_front() {
        for g in gens.iter().filter(|g| g.domain() == r.codomain()) {
            let next = g.compose(&r).expect("generator composition is well-typed");
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
