//! Token classification by security locus and trust locus.
//!
//! A token sits in one of four quadrants depending on whether its value rests
//! on consuming a resource outside the ledger (security locus) and whether
//! anything outside the ledger guarantees finality (trust locus). Trust locus
//! follows the ledger a token *currently* lives on, so bridging a token can
//! move it between quadrants.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Whether a property is internal or external to the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    Endogenous,
    Exogenous,
}

impl Locus {
    pub const ALL: [Locus; 2] = [Locus::Endogenous, Locus::Exogenous];
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Endogenous => f.write_str("endogenous"),
            Locus::Exogenous => f.write_str("exogenous"),
        }
    }
}

/// The governance class of the ledger hosting a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerKind {
    PublicPermissionless,
    PrivateOrConsortium,
}

impl LedgerKind {
    /// Trust locus implied by hosting on this kind of ledger.
    pub fn trust_locus(self) -> Locus {
        match self {
            LedgerKind::PublicPermissionless => Locus::Endogenous,
            LedgerKind::PrivateOrConsortium => Locus::Exogenous,
        }
    }

    /// Canonical host for a given trust locus (inverse of [`LedgerKind::trust_locus`]).
    pub fn for_trust(trust: Locus) -> LedgerKind {
        match trust {
            Locus::Endogenous => LedgerKind::PublicPermissionless,
            Locus::Exogenous => LedgerKind::PrivateOrConsortium,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueBacking {
    /// The token is the thing of value.
    ObjectBased,
    /// The token is a claim on something held elsewhere.
    ClaimBased,
}

/// When a token's value is established relative to its issuance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueTiming {
    ExAnte,
    ExPost,
    AtRedemption,
}

/// A token as seen from the ledger it currently depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenProfile {
    pub security_locus: Locus,
    pub trust_locus: Locus,
    pub value_backing: ValueBacking,
    pub value_timing: ValueTiming,
    pub host_ledger: LedgerKind,
}

impl TokenProfile {
    /// Builds a profile hosted on `host`. The trust locus is taken from the
    /// host and the value timing from [`value_timing_heuristic`].
    pub fn new(security_locus: Locus, value_backing: ValueBacking, host_ledger: LedgerKind) -> Self {
        let mut profile = TokenProfile {
            security_locus,
            trust_locus: host_ledger.trust_locus(),
            value_backing,
            value_timing: ValueTiming::ExAnte,
            host_ledger,
        };
        profile.value_timing = value_timing_heuristic(&profile);
        profile
    }

    /// Native token of a proof-of-stake chain.
    pub fn proof_of_stake() -> Self {
        Self::new(Locus::Endogenous, ValueBacking::ObjectBased, LedgerKind::PublicPermissionless)
    }

    /// Native token of a proof-of-work chain.
    pub fn proof_of_work() -> Self {
        Self::new(Locus::Exogenous, ValueBacking::ObjectBased, LedgerKind::PublicPermissionless)
    }

    /// Privately operated, claim-backed stablecoin on its operator's ledger.
    pub fn private_stablecoin() -> Self {
        Self::new(Locus::Endogenous, ValueBacking::ClaimBased, LedgerKind::PrivateOrConsortium)
    }

    /// Cash-like central bank digital currency.
    pub fn cash_like_cbdc() -> Self {
        Self::new(Locus::Exogenous, ValueBacking::ClaimBased, LedgerKind::PrivateOrConsortium)
    }

    pub fn quadrant(&self) -> Quadrant {
        classify(self.security_locus, self.trust_locus)
    }
}

/// Position of a quadrant in the classification matrix. Rows are security
/// locus (endogenous on top), columns are trust locus (endogenous on the left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadrantPosition {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl fmt::Display for QuadrantPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadrantPosition::TopLeft => "top-left",
            QuadrantPosition::TopRight => "top-right",
            QuadrantPosition::BottomLeft => "bottom-left",
            QuadrantPosition::BottomRight => "bottom-right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Quadrant {
    pub position: QuadrantPosition,
    pub security_locus: Locus,
    pub trust_locus: Locus,
    pub exemplar: &'static str,
    pub attack_effect: &'static str,
}

pub const COLLAPSE_EFFECT: &str = "Rewrite causes collapse";

pub const POS_EXEMPLAR: &str =
    "Typical Proof-of-Stake chain (e.g. Cosmos chain) with \u{201c}object based\u{201d} value backing";
pub const STABLECOIN_EXEMPLAR: &str = "Privately operated stablecoin with \u{201c}claim-based\u{201d} value backing, operated on private or consortium ledger.";
pub const STABLECOIN_EFFECT: &str =
    "Operator or consortium retain control of finality subject to enforcement (e.g. regulation)";
pub const POW_EXEMPLAR: &str = "Typical Proof-of-Work chain (e.g. Bitcoin)";
pub const CBDC_EXEMPLAR: &str = "Cash-like CBDC";
pub const CBDC_EFFECT: &str = "Individual notes are hard to target, meaning they are fungible even if stolen (in the case of digital cash) and there is a system-level cost in switching off the system. Thus any attack is likely causally reversed, i.e. an attack on the currency exogenously results in effects on the CBDC.";

const QUADRANTS: [Quadrant; 4] = [
    Quadrant {
        position: QuadrantPosition::TopLeft,
        security_locus: Locus::Endogenous,
        trust_locus: Locus::Endogenous,
        exemplar: POS_EXEMPLAR,
        attack_effect: COLLAPSE_EFFECT,
    },
    Quadrant {
        position: QuadrantPosition::TopRight,
        security_locus: Locus::Endogenous,
        trust_locus: Locus::Exogenous,
        exemplar: STABLECOIN_EXEMPLAR,
        attack_effect: STABLECOIN_EFFECT,
    },
    Quadrant {
        position: QuadrantPosition::BottomLeft,
        security_locus: Locus::Exogenous,
        trust_locus: Locus::Endogenous,
        exemplar: POW_EXEMPLAR,
        attack_effect: COLLAPSE_EFFECT,
    },
    Quadrant {
        position: QuadrantPosition::BottomRight,
        security_locus: Locus::Exogenous,
        trust_locus: Locus::Exogenous,
        exemplar: CBDC_EXEMPLAR,
        attack_effect: CBDC_EFFECT,
    },
];

/// Looks up the quadrant for a (security, trust) pair. Total over all four inputs.
pub fn classify(security: Locus, trust: Locus) -> Quadrant {
    let row = match security {
        Locus::Endogenous => 0,
        Locus::Exogenous => 2,
    };
    let col = match trust {
        Locus::Endogenous => 0,
        Locus::Exogenous => 1,
    };
    QUADRANTS[row + col]
}

/// Moves a token to a ledger of kind `destination`.
///
/// Only the host and the trust locus change; the trust locus is re-derived
/// from the destination's governance. Security locus, backing and value
/// timing travel with the token unchanged.
pub fn bridge(profile: &TokenProfile, destination: LedgerKind) -> TokenProfile {
    TokenProfile {
        host_ledger: destination,
        trust_locus: destination.trust_locus(),
        ..*profile
    }
}

/// When is the value of the token established?
///
/// Claim-based tokens are valued when redeemed. Object-based tokens with an
/// exogenous security locus consumed outside resources before minting, so
/// their value is established ex post; object-based tokens minted without
/// consuming anything outside the system are issued ex ante.
pub fn value_timing_heuristic(profile: &TokenProfile) -> ValueTiming {
    match (profile.value_backing, profile.security_locus) {
        (ValueBacking::ClaimBased, _) => ValueTiming::AtRedemption,
        (ValueBacking::ObjectBased, Locus::Exogenous) => ValueTiming::ExPost,
        (ValueBacking::ObjectBased, Locus::Endogenous) => ValueTiming::ExAnte,
    }
}

/// Collapses runs of whitespace to single spaces and trims the ends.
pub fn canonicalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
