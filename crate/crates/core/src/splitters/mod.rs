//! Fold planners for plain, stratified and rebalanced leave-P-out schemes.
//!
//! Each scheme implements [`Splitter`] and is registered by name in a
//! [`SplitterRegistry`]; callers resolve a scheme at runtime from a string
//! such as `"rlpocv"`.

mod leave_out;
mod rebalanced;
mod stratified;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use leave_out::{loocv_plan, lpocv_plan, LeaveOneOut, LeavePOut};
pub use rebalanced::{rloocv_plan, rlpocv_plan, RebalancedLeaveOneOut, RebalancedLeavePOut};
pub use stratified::{
    stratification_counts, stratified_lpocv_plan, StratificationCounts, StratifiedLeavePOut,
};

use crate::error::{Error, Result};
use crate::plan::FoldPlan;
use crate::rng::RngStream;

/// A cross-validation scheme that turns labels into a [`FoldPlan`].
pub trait Splitter: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// Whether the scheme reads `p`. Leave-one-out schemes ignore it.
    fn uses_p(&self) -> bool {
        true
    }

    fn plan(&self, labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    #[serde(rename = "loocv")]
    Loocv,
    #[serde(rename = "lpocv")]
    Lpocv,
    #[serde(rename = "stratified-lpocv")]
    StratifiedLpocv,
    #[serde(rename = "rloocv")]
    Rloocv,
    #[serde(rename = "rlpocv")]
    Rlpocv,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Loocv,
        SchemeKind::Lpocv,
        SchemeKind::StratifiedLpocv,
        SchemeKind::Rloocv,
        SchemeKind::Rlpocv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Loocv => "loocv",
            SchemeKind::Lpocv => "lpocv",
            SchemeKind::StratifiedLpocv => "stratified-lpocv",
            SchemeKind::Rloocv => "rloocv",
            SchemeKind::Rlpocv => "rlpocv",
        }
    }

    pub fn fixed_p(self) -> bool {
        matches!(self, SchemeKind::Loocv | SchemeKind::Rloocv)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let kind = match key.as_str() {
            "loocv" => SchemeKind::Loocv,
            "lpocv" => SchemeKind::Lpocv,
            "stratified-lpocv" | "stratified_lpocv" | "slpocv" | "stratified" => {
                SchemeKind::StratifiedLpocv
            }
            "rloocv" => SchemeKind::Rloocv,
            "rlpocv" => SchemeKind::Rlpocv,
            _ => return Err(Error::Parse(format!("unknown scheme '{s}'"))),
        };
        Ok(kind)
    }
}

/// A scheme plus its fold size. `p` is normalized to 1 for leave-one-out kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub p: usize,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("p must be at least 1".into()));
        }
        let p = if kind.fixed_p() { 1 } else { p };
        Ok(SchemeSpec { kind, p })
    }

    pub fn loocv() -> Self {
        SchemeSpec {
            kind: SchemeKind::Loocv,
            p: 1,
        }
    }

    pub fn rloocv() -> Self {
        SchemeSpec {
            kind: SchemeKind::Rloocv,
            p: 1,
        }
    }

    /// Builds the plan with the built-in splitter for this kind.
    pub fn plan(&self, labels: &[u8], rng: &mut RngStream) -> Result<FoldPlan> {
        builtin_splitter(self.kind).plan(labels, self.p, rng)
    }
}

fn builtin_splitter(kind: SchemeKind) -> &'static dyn Splitter {
    match kind {
        SchemeKind::Loocv => &LeaveOneOut,
        SchemeKind::Lpocv => &LeavePOut,
        SchemeKind::StratifiedLpocv => &StratifiedLeavePOut,
        SchemeKind::Rloocv => &RebalancedLeaveOneOut,
        SchemeKind::Rlpocv => &RebalancedLeavePOut,
    }
}

/// Name-keyed collection of splitters.
pub struct SplitterRegistry {
    entries: BTreeMap<String, Box<dyn Splitter>>,
}

impl SplitterRegistry {
    pub fn empty() -> Self {
        SplitterRegistry {
            entries: BTreeMap::new(),
        }
    }

    /// All five built-in schemes.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(LeaveOneOut));
        reg.register(Box::new(LeavePOut));
        reg.register(Box::new(StratifiedLeavePOut));
        reg.register(Box::new(RebalancedLeaveOneOut));
        reg.register(Box::new(RebalancedLeavePOut));
        reg
    }

    /// Adds a splitter, replacing any previous one with the same name.
    pub fn register(&mut self, splitter: Box<dyn Splitter>) {
        self.entries.insert(splitter.name().to_string(), splitter);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Splitter> {
        let key = match name.parse::<SchemeKind>() {
            Ok(kind) => kind.name().to_string(),
            Err(_) => name.to_string(),
        };
        self.entries
            .get(&key)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Parse(format!("unknown scheme '{name}'")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl Default for SplitterRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

pub(crate) fn check_divisible(n: usize, p: usize) -> Result<usize> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    if !n.is_multiple_of(p) {
        return Err(Error::IndivisibleFold { n, p });
    }
    let groups = n / p;
    if groups < 2 {
        return Err(Error::TooFewSamples(format!(
            "n={n} with p={p} gives {groups} fold(s); need at least 2"
        )));
    }
    Ok(groups)
}
