use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ledger::{Multiplier, Order};
use crate::localideal::RadicalCertificate;
use crate::polyring::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Init,
    Radical,
    Row,
    Finish,
    /// First multiplier of the effective chain.
    Entry,
    Derivative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// Id of the multiplier the certificate introduced.
    pub multiplier: usize,
    #[serde(flatten)]
    pub certificate: RadicalCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipCheck {
    pub poly: Poly,
    pub ideal: String,
    pub holds: bool,
}

/// Smallest power of the distinguished element found in an ideal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorRecord {
    pub element: Poly,
    pub ideal: String,
    pub cap: u32,
    pub floor: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEvent {
    pub step: u32,
    pub action: Action,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multipliers: Vec<Multiplier>,
    /// Ids generating the ideal this event starts from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideal: Vec<usize>,
    /// Minimum order over `ideal`; radical events only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_order: Option<Order>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_radical_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebraic_floor: Option<FloorRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub memberships: Vec<MembershipCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TraceEvent {
    pub fn new(step: u32, action: Action) -> Self {
        Self {
            step,
            action,
            multipliers: Vec::new(),
            ideal: Vec::new(),
            base_order: None,
            certificates: Vec::new(),
            max_radical_order: None,
            algebraic_floor: None,
            memberships: Vec::new(),
            outcome: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KohnTrace {
    pub events: Vec<TraceEvent>,
}

impl KohnTrace {
    pub fn outcome(&self) -> Option<&Outcome> {
        self.events.iter().rev().find_map(|e| e.outcome.as_ref())
    }

    pub fn multipliers(&self) -> impl Iterator<Item = &Multiplier> {
        self.events.iter().flat_map(|e| e.multipliers.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Success {
        step: u32,
        /// Certified order: the smaller of `unit_order` and the least order
        /// among the multipliers of the last radical ideal.
        order: Order,
        /// Order at which the unit itself was certified.
        unit_order: Order,
        max_radical_order: Option<u32>,
    },
    Stalled {
        step: u32,
        reason: String,
    },
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success { .. })
    }

    pub fn order(&self) -> Option<&Order> {
        match self {
            Outcome::Success { order, .. } => Some(order),
            Outcome::Stalled { .. } => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Success { step, order, max_radical_order, .. } => {
                write!(f, "unit found, step {step}, order {order}, max radical order ")?;
                match max_radical_order {
                    Some(k) => write!(f, "{k}"),
                    None => f.write_str("none"),
                }
            }
            Outcome::Stalled { step, reason } => write!(f, "stalled at step {step}: {reason}"),
        }
    }
}
