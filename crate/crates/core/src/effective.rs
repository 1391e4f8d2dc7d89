//! The effective variant: pick the `f` component of least vanishing order
//! along the `w` axis and differentiate it in `w` until it becomes a unit.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::domain::{type_lower_bound, ContactOrder, DomainSpec, TypeBound};
use crate::error::{Error, Result};
use crate::kohn::{Action, KohnTrace, Outcome, TraceEvent};
use crate::ledger::{Multiplier, Order, Provenance};
use crate::polyring::{GaussRational, Poly, Var};

/// Status of the hypothesis `|g_w|^2 <= delta |f_w|^2` with `delta < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypoStatus {
    VerifiedNumerically,
    Asserted,
    Failed,
}

impl fmt::Display for HypoStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypoStatus::VerifiedNumerically => "verified numerically",
            HypoStatus::Asserted => "asserted",
            HypoStatus::Failed => "failed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentChoice {
    pub index: usize,
    pub tau: u32,
    /// More than one component attains `tau`.
    pub multi_minima: bool,
}

/// Vanishing order of `p(0, t)` at `t = 0`, `None` when it is identically zero.
fn order_on_w_axis(p: &Poly) -> Option<u32> {
    p.terms().filter(|(m, c)| m.exp(Var::Z) == 0 && !c.is_zero()).map(|(m, _)| m.exp(Var::W)).min()
}

pub fn select_component(spec: &DomainSpec) -> Result<ComponentChoice> {
    let orders: Vec<Option<u32>> = spec.f.iter().map(|f| order_on_w_axis(f.as_poly())).collect();
    let tau = orders.iter().flatten().copied().min().ok_or(Error::InfiniteTypeAlongLine)?;
    let index = orders.iter().position(|o| *o == Some(tau)).expect("minimum is attained");
    let multi_minima = orders.iter().filter(|o| **o == Some(tau)).count() > 1;
    Ok(ComponentChoice { index, tau, multi_minima })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRun {
    pub selected_component: usize,
    pub tau: u32,
    pub multi_minima: bool,
    /// `zeta_1, ..., zeta_tau`.
    pub chain: Vec<Multiplier>,
    pub final_order: Order,
    pub hypo_status: HypoStatus,
    /// False when the run was forced past a failed hypothesis.
    pub sound: bool,
}

impl EffectiveRun {
    pub fn outcome(&self) -> Outcome {
        Outcome::Success {
            step: self.tau,
            order: self.final_order.clone(),
            unit_order: self.final_order.clone(),
            max_radical_order: Some(2),
        }
    }

    /// The run in the classic trace format: one event per chain element
    /// and a closing event with the outcome.
    pub fn trace(&self) -> KohnTrace {
        let mut events = Vec::new();
        for (j, m) in self.chain.iter().enumerate() {
            let action = if j == 0 { Action::Entry } else { Action::Derivative };
            let mut ev = TraceEvent::new(j as u32 + 1, action);
            ev.multipliers.push(m.clone());
            if j == 0 {
                ev.max_radical_order = Some(2);
                ev.notes.push(format!("hypothesis on g_w: {}", self.hypo_status));
                if !self.sound {
                    ev.notes.push("forced past a failed hypothesis: result is unsound".into());
                }
                if self.multi_minima {
                    ev.notes.push(format!(
                        "several components vanish to order {} on the w axis; component {} was used",
                        self.tau, self.selected_component
                    ));
                }
            }
            events.push(ev);
        }
        let mut fin = TraceEvent::new(self.tau, Action::Finish);
        fin.outcome = Some(self.outcome());
        events.push(fin);
        KohnTrace { events }
    }
}

/// Builds the chain `zeta_1 = d_w f_k` at order 1/4, `zeta_j = d_w zeta_{j-1}`
/// at half the previous order. Refuses a failed hypothesis unless `force`.
pub fn zeta_chain(spec: &DomainSpec, hypo_status: HypoStatus, force: bool) -> Result<EffectiveRun> {
    if hypo_status == HypoStatus::Failed && !force {
        return Err(Error::HypothesisFailed(format!(
            "|g_w|^2 <= delta |f_w|^2 with delta < 1 does not hold on {}",
            spec.name
        )));
    }
    let choice = select_component(spec)?;
    let f = spec.f[choice.index].as_poly();
    let mut chain: Vec<Multiplier> = Vec::with_capacity(choice.tau as usize);
    let mut cur = f.wirtinger(Var::W);
    let mut order = Order::new(1, 4);
    chain.push(Multiplier {
        id: 0,
        poly: cur.clone(),
        order: order.clone(),
        provenance: Provenance::EntryStep { component: choice.index },
    });
    for j in 1..choice.tau as usize {
        cur = cur.wirtinger(Var::W);
        order = order.halved();
        chain.push(Multiplier {
            id: j,
            poly: cur.clone(),
            order: order.clone(),
            provenance: Provenance::Derivative { source: j - 1 },
        });
    }
    if cur.constant_term().is_zero() {
        return Err(Error::Inconsistent(format!("zeta_{} = {cur} is not a unit", choice.tau)));
    }
    let expected = Order::pow2_inv(choice.tau + 1);
    if order != expected {
        return Err(Error::Inconsistent(format!("final order {order} differs from {expected}")));
    }
    Ok(EffectiveRun {
        selected_component: choice.index,
        tau: choice.tau,
        multi_minima: choice.multi_minima,
        chain,
        final_order: order,
        hypo_status,
        sound: hypo_status != HypoStatus::Failed,
    })
}

/// Re-derives an effective trace from `spec` and checks every recorded
/// element and order.
pub fn replay(spec: &DomainSpec, trace: &KohnTrace) -> Result<Outcome> {
    let bad = |msg: String| Error::Inconsistent(format!("replay: {msg}"));
    let mut polys: Vec<Poly> = Vec::new();
    let mut orders: Vec<Order> = Vec::new();
    for ev in &trace.events {
        if ev.action == Action::Finish {
            let recorded = ev.outcome.clone().ok_or_else(|| bad("finish event without outcome".into()))?;
            let (last, order) = polys.last().zip(orders.last()).ok_or_else(|| bad("empty chain".into()))?;
            if last.constant_term().is_zero() {
                return Err(bad(format!("{last} is not a unit")));
            }
            let again = Outcome::Success {
                step: polys.len() as u32,
                order: order.clone(),
                unit_order: order.clone(),
                max_radical_order: Some(2),
            };
            if again != recorded {
                return Err(bad(format!("recorded outcome '{recorded}' but ledger gives '{again}'")));
            }
            return Ok(again);
        }
        for m in &ev.multipliers {
            if m.id != polys.len() {
                return Err(bad(format!("multiplier id {} out of sequence", m.id)));
            }
            let expected_poly = match (&ev.action, &m.provenance) {
                (Action::Entry, Provenance::EntryStep { component }) => spec
                    .f
                    .get(*component)
                    .map(|f| f.as_poly().wirtinger(Var::W))
                    .ok_or_else(|| bad(format!("component {component} does not exist")))?,
                (Action::Derivative, Provenance::Derivative { source }) => polys
                    .get(*source)
                    .map(|p| p.wirtinger(Var::W))
                    .ok_or_else(|| bad(format!("multiplier {} cites a missing source", m.id)))?,
                _ => {
                    return Err(bad(format!(
                        "multiplier {} has rule {} in a {:?} event",
                        m.id,
                        m.provenance.rule_name(),
                        ev.action
                    )))
                }
            };
            if expected_poly != m.poly {
                return Err(bad(format!("multiplier {} should be {expected_poly}", m.id)));
            }
            let order = m.provenance.implied_order(&orders, None).expect("sources checked");
            if order != m.order {
                return Err(bad(format!("multiplier {} has order {} but its rule gives {order}", m.id, m.order)));
            }
            polys.push(m.poly.clone());
            orders.push(order);
        }
    }
    Err(bad("trace has no finish event".into()))
}

/// Type, the optimal order it suggests, and the two certified orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderComparison {
    pub name: String,
    #[serde(rename = "type")]
    pub type_bound: ContactOrder,
    pub optimal: Option<Order>,
    pub classic: Option<Order>,
    pub effective: Option<Order>,
}

pub fn compare_orders(
    spec: &DomainSpec,
    type_bound: &TypeBound,
    classic: &Outcome,
    effective: &EffectiveRun,
) -> OrderComparison {
    let optimal = match type_bound.value {
        ContactOrder::Finite(t) if !t.is_zero() => {
            let r = num_rational::BigRational::new((*t.denom()).into(), (*t.numer()).into());
            Some(Order::from(r))
        }
        _ => None,
    };
    OrderComparison {
        name: spec.name.clone(),
        type_bound: type_bound.value,
        optimal,
        classic: classic.order().cloned(),
        effective: Some(effective.final_order.clone()),
    }
}

/// Runs everything [`compare_orders`] needs with the given settings.
pub fn compare(
    spec: &DomainSpec,
    config: &crate::kohn::KohnConfig,
    degree_cap: u32,
    coeffs: &[GaussRational],
    hypo_status: HypoStatus,
    force: bool,
) -> Result<OrderComparison> {
    let bound = type_lower_bound(spec, degree_cap, coeffs)?;
    let classic = crate::kohn::run(spec, config)?;
    let eff = zeta_chain(spec, hypo_status, force)?;
    Ok(compare_orders(spec, &bound, &classic.outcome, &eff))
}

impl fmt::Display for OrderComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: &Option<Order>| o.as_ref().map_or_else(|| "-".to_string(), Order::to_string);
        writeln!(f, "{:<20} {:>6} {:>8} {:>8} {:>10}", "domain", "type", "optimal", "classic", "effective")?;
        write!(
            f,
            "{:<20} {:>6} {:>8} {:>8} {:>10}",
            self.name,
            self.type_bound.to_string(),
            show(&self.optimal),
            show(&self.classic),
            show(&self.effective)
        )
    }
}
