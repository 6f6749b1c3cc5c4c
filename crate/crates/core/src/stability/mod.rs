//! Morse stability of deformations, decided edge family by edge family.

mod deform;
mod family;

use serde::Serialize;

pub use deform::{
    check_deformation, family_from_mpoly, tschirnhausen_clear, verify_fundamental_lemma,
    CriticalPointStability, EdgeFamilyReport, LemmaReport, SampleCheck, StabilityReport, TFamily,
    TschirnhausenResult,
};
pub use family::{check_poly_family, Carrier, CriticalBranchReport, PolyFamily, PolyFamilyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    MorseStable,
    AlmostMorseStable,
    Unstable,
    Inconclusive,
}

impl Verdict {
    fn rank(self) -> u8 {
        match self {
            Verdict::MorseStable => 0,
            Verdict::AlmostMorseStable => 1,
            Verdict::Inconclusive => 2,
            Verdict::Unstable => 3,
        }
    }

    /// The weaker of two verdicts; a definite instability dominates.
    pub fn meet(self, o: Verdict) -> Verdict {
        if self.rank() >= o.rank() {
            self
        } else {
            o
        }
    }

    pub fn is_almost_stable(self) -> bool {
        matches!(self, Verdict::MorseStable | Verdict::AlmostMorseStable)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::MorseStable => "Morse stable",
            Verdict::AlmostMorseStable => "almost Morse stable",
            Verdict::Unstable => "unstable",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}
