//! Kohn's algorithm in C^2 as a state machine over local ideals, with an
//! exact ledger of certified orders.
//!
//! One cycle `j` is a radical step `I_j^# -> I_j` followed by a row step
//! `I_j -> I_{j+1}^#`. The initial ideal `(r, lambda)` belongs to step 1.

mod trace;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use trace::{Action, CertificateRecord, FloorRecord, KohnTrace, MembershipCheck, Outcome, TraceEvent};

use crate::domain::{apply_l, DomainSpec, LeviData};
use crate::error::{Error, Result};
use crate::ledger::{Multiplier, Order, Provenance};
use crate::localideal::{
    hermitian_root, min_algebraic_radical_order, radical_extend, LocalIdeal, RadicalCertificate, Witness,
};
use crate::polyring::{Poly, Var};

const NOTE_SURROGATE: &str = "row multipliers are r_z*L(h) = r_z*h_w - r_w*h_z; r_z is a local unit";
const NOTE_ALGEBRAIC: &str = "radical orders are algebraic certificates only";
const NOTE_INCLUSION: &str =
    "the radical ideal is shown to contain the certified elements; the reverse inclusion is unverified";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KohnConfig {
    pub max_steps: u32,
    pub radical_cap: u32,
}

impl Default for KohnConfig {
    fn default() -> Self {
        Self { max_steps: 16, radical_cap: 32 }
    }
}

/// State between steps. `ideal_sharp` and `ideal` are generated by the
/// multiplier polynomials in id order.
#[derive(Clone, Debug)]
pub struct KohnState {
    pub step: u32,
    pub multipliers: Vec<Multiplier>,
    pub ideal_sharp: LocalIdeal,
    pub ideal: LocalIdeal,
    pub radical_orders_used: Vec<u32>,
    pub trace: KohnTrace,
    levi: LeviData,
    differentiated: Vec<bool>,
    /// Multipliers belonging to the last completed radical ideal.
    radical_mark: usize,
}

#[derive(Clone, Debug)]
pub struct KohnRun {
    pub outcome: Outcome,
    pub trace: KohnTrace,
    pub multipliers: Vec<Multiplier>,
}

impl KohnState {
    pub fn init(spec: &DomainSpec) -> Result<Self> {
        let levi = spec.levi_data()?;
        let r =
            Multiplier { id: 0, poly: levi.r.clone(), order: Order::one(), provenance: Provenance::DefiningFunction };
        let lambda = Multiplier {
            id: 1,
            poly: levi.lambda.clone(),
            order: Order::half(),
            provenance: Provenance::LeviDeterminant,
        };
        let ideal_sharp = LocalIdeal::new(vec![r.poly.clone(), lambda.poly.clone()])?;
        let mut event = TraceEvent::new(1, Action::Init);
        event.multipliers = vec![r.clone(), lambda.clone()];
        event.notes.push(NOTE_SURROGATE.to_string());
        Ok(Self {
            step: 1,
            multipliers: vec![r, lambda],
            ideal: ideal_sharp.clone(),
            ideal_sharp,
            radical_orders_used: Vec::new(),
            trace: KohnTrace { events: vec![event] },
            levi,
            differentiated: vec![false, false],
            radical_mark: 2,
        })
    }

    pub fn levi(&self) -> &LeviData {
        &self.levi
    }

    fn orders(&self) -> Vec<Order> {
        self.multipliers.iter().map(|m| m.order.clone()).collect()
    }

    /// Appends a multiplier unless it is zero or a scalar multiple of one
    /// already present with at least the same order.
    fn push(
        &mut self,
        poly: Poly,
        provenance: Provenance,
        base: Option<&Order>,
        event: &mut TraceEvent,
    ) -> Option<usize> {
        if poly.is_zero() {
            return None;
        }
        let order = provenance.implied_order(&self.orders(), base).expect("provenance refers to existing multipliers");
        let key = poly.primitive();
        if let Some(dup) = self.multipliers.iter().find(|m| m.poly.primitive() == key) {
            if dup.order >= order {
                return None;
            }
            event.notes.push(format!("{} repeats multiplier {} at a higher order", poly, dup.id));
        }
        let id = self.multipliers.len();
        let m = Multiplier { id, poly, order, provenance };
        event.multipliers.push(m.clone());
        self.multipliers.push(m);
        self.differentiated.push(false);
        Some(id)
    }

    /// `I_j = rad I_j^#` by the certificate rules. Returns the number of
    /// certified elements.
    pub fn radical_step(&mut self, radical_cap: u32) -> Result<usize> {
        let j = self.step;
        let mut event = TraceEvent::new(j, Action::Radical);
        let n_gens = self.multipliers.len();
        event.ideal = (0..n_gens).collect();
        let base = base_order(&polys_of(&self.multipliers), &self.orders(), &event.ideal);
        event.base_order = Some(base.clone());
        event.notes.push(NOTE_ALGEBRAIC.to_string());
        event.notes.push(NOTE_INCLUSION.to_string());

        let ext = radical_extend(&self.ideal_sharp, radical_cap)?;
        let mut cert_ids: Vec<usize> = Vec::new();
        let sharp_label = format!("I_{j}#");
        for cert in &ext.certificates {
            let src = |i: usize| if i < n_gens { i } else { cert_ids[i - n_gens] };
            let provenance = match &cert.witness {
                Witness::Conjugate { source } => Provenance::Conjugation { source: src(*source) },
                Witness::Square { source, .. } => Provenance::HermitianSquare { source: src(*source) },
                Witness::Monomial { monomial } => {
                    match self.ideal_sharp.contains_monomial(monomial) {
                        Ok(holds) => event.memberships.push(MembershipCheck {
                            poly: Poly::term(num_traits::One::one(), *monomial),
                            ideal: sharp_label.clone(),
                            holds,
                        }),
                        Err(Error::Undecided(_)) => {
                            event.notes.push(format!("membership of {monomial} in {sharp_label} undecided"))
                        }
                        Err(e) => return Err(e),
                    }
                    Provenance::MonomialRoot { k: cert.order }
                }
                Witness::Power { source, .. } => Provenance::AlgebraicPower { source: src(*source), k: cert.order },
            };
            let id = self
                .push(cert.element.clone(), provenance, Some(&base), &mut event)
                .ok_or_else(|| Error::Inconsistent(format!("certificate {} already present", cert.element)))?;
            cert_ids.push(id);
            event.certificates.push(CertificateRecord { multiplier: id, certificate: cert.clone() });
        }
        let max = ext.certificates.iter().map(|c| c.order).max();
        event.max_radical_order = max;
        if let Some(k) = max {
            self.radical_orders_used.push(k);
        }

        let z = Poly::var(Var::Z);
        let (floor_ideal, label) = match ext.certificates.iter().position(|c| c.element == z) {
            Some(i) => (&ext.stages[i], stage_label(j, i)),
            None => (&ext.ideal, format!("I_{j}")),
        };
        if ext.undecided > 0 {
            event.notes.push(format!(
                "{} membership queries exceeded the reduction budget and gave no certificate",
                ext.undecided
            ));
        }
        let floor = match min_algebraic_radical_order(&z, floor_ideal, radical_cap) {
            Ok(f) => f,
            Err(Error::Undecided(reason)) => {
                event.notes.push(format!("algebraic floor undecided: {reason}"));
                None
            }
            Err(e) => return Err(e),
        };
        event.algebraic_floor = Some(FloorRecord { floor, element: z, ideal: label, cap: radical_cap });

        self.ideal = ext.ideal;
        self.radical_mark = self.multipliers.len();
        self.trace.events.push(event);
        Ok(ext.certificates.len())
    }

    /// `I_{j+1}^# = I_j + (L h : h a generator of I_j not yet used)`.
    /// Returns the number of new multipliers.
    pub fn row_step(&mut self) -> Result<usize> {
        let j = self.step;
        let mut event = TraceEvent::new(j, Action::Row);
        event.ideal = (0..self.multipliers.len()).collect();
        let r_w = self.levi.r_w.clone();
        let holds = self.ideal.contains(&r_w)?;
        event.memberships.push(MembershipCheck { poly: r_w.clone(), ideal: format!("I_{j}"), holds });
        let threshold = if holds { Some(self.threshold(&r_w)?) } else { None };

        let mut new_polys = Vec::new();
        for id in 0..self.multipliers.len() {
            if self.differentiated[id] {
                continue;
            }
            self.differentiated[id] = true;
            let h = self.multipliers[id].poly.clone();
            let (poly, provenance) = match &threshold {
                Some(t) => (h.wirtinger(Var::W), Provenance::RowDirect { source: id, threshold: t.clone() }),
                None => (apply_l(&h, &self.levi), Provenance::Row { source: id }),
            };
            if let Some(new) = self.push(poly, provenance, None, &mut event) {
                new_polys.push(self.multipliers[new].poly.clone());
            }
        }
        let added = new_polys.len();
        self.ideal_sharp = self.ideal.extend(&new_polys)?;
        self.trace.events.push(event);
        Ok(added)
    }

    /// Largest `θ` with `p` in the ideal of multipliers of order `>= θ`.
    fn threshold(&self, p: &Poly) -> Result<Order> {
        let orders = class_orders(&polys_of(&self.multipliers), &self.orders());
        let mut levels: Vec<Order> = orders.clone();
        levels.sort();
        levels.dedup();
        let mut ideal: Option<LocalIdeal> = None;
        let mut taken = vec![false; orders.len()];
        for level in levels.into_iter().rev() {
            let mut gens = Vec::new();
            for i in 0..orders.len() {
                if !taken[i] && orders[i] >= level {
                    taken[i] = true;
                    gens.push(self.multipliers[i].poly.clone());
                }
            }
            let next = match &ideal {
                Some(i) => i.extend(&gens)?,
                None => LocalIdeal::new(gens)?,
            };
            if next.contains(p)? {
                return Ok(level);
            }
            ideal = Some(next);
        }
        Err(Error::Inconsistent(format!("{p} is not in the multiplier ideal")))
    }

    fn finish(&mut self, outcome: Outcome) {
        let mut event = TraceEvent::new(self.step, Action::Finish);
        event.outcome = Some(outcome);
        self.trace.events.push(event);
    }

    fn success(&self) -> Outcome {
        let max = self.radical_orders_used.iter().copied().max();
        success_outcome(&polys_of(&self.multipliers), &self.orders(), self.radical_mark, self.step, max)
            .expect("unit ideal has a unit multiplier")
    }
}

fn stage_label(step: u32, i: usize) -> String {
    match i {
        0 => format!("I_{step}#"),
        1 => format!("I_{step}# + 1 earlier certificate"),
        n => format!("I_{step}# + {n} earlier certificates"),
    }
}

fn polys_of(ms: &[Multiplier]) -> Vec<Poly> {
    ms.iter().map(|m| m.poly.clone()).collect()
}

/// Each multiplier's order raised to the best order among its scalar
/// multiples.
fn class_orders(polys: &[Poly], orders: &[Order]) -> Vec<Order> {
    let keys: Vec<Poly> = polys.iter().map(Poly::primitive).collect();
    let mut best: HashMap<&Poly, Order> = HashMap::new();
    for (k, o) in keys.iter().zip(orders) {
        let e = best.entry(k).or_insert_with(|| o.clone());
        if *o > *e {
            *e = o.clone();
        }
    }
    keys.iter().map(|k| best[k].clone()).collect()
}

fn base_order(polys: &[Poly], orders: &[Order], ids: &[usize]) -> Order {
    let classes = class_orders(polys, orders);
    ids.iter().map(|&i| classes[i].clone()).min().unwrap_or_else(Order::one)
}

fn success_outcome(polys: &[Poly], orders: &[Order], mark: usize, step: u32, max: Option<u32>) -> Option<Outcome> {
    let classes = class_orders(polys, orders);
    let unit_order = polys
        .iter()
        .zip(&classes)
        .filter(|(p, _)| !num_traits::Zero::is_zero(&p.constant_term()))
        .map(|(_, o)| o.clone())
        .max()?;
    let least = base_order(&polys[..mark], &orders[..mark], &(0..mark).collect::<Vec<_>>());
    Some(Outcome::Success { step, order: unit_order.clone().min(least), unit_order, max_radical_order: max })
}

/// Runs alternating radical and row steps until the ideal is the unit
/// ideal, nothing new appears, or `max_steps` cycles have run.
pub fn run(spec: &DomainSpec, config: &KohnConfig) -> Result<KohnRun> {
    let mut st = KohnState::init(spec)?;
    let outcome = drive(&mut st, config)?;
    st.finish(outcome.clone());
    Ok(KohnRun { outcome, trace: st.trace, multipliers: st.multipliers })
}

fn drive(st: &mut KohnState, config: &KohnConfig) -> Result<Outcome> {
    if st.ideal_sharp.is_unit() {
        return Ok(st.success());
    }
    for j in 1..=config.max_steps {
        st.step = j;
        let certified = match st.radical_step(config.radical_cap) {
            Ok(n) => n,
            Err(Error::Undecided(reason)) => return Ok(Outcome::Stalled { step: j, reason }),
            Err(e) => return Err(e),
        };
        let rows = match st.row_step() {
            Ok(n) => n,
            Err(Error::Undecided(reason)) => return Ok(Outcome::Stalled { step: j, reason }),
            Err(e) => return Err(e),
        };
        if st.ideal_sharp.is_unit() {
            return Ok(st.success());
        }
        if certified == 0 && rows == 0 {
            return Ok(Outcome::Stalled { step: j, reason: "no new multipliers".to_string() });
        }
    }
    Ok(Outcome::Stalled { step: config.max_steps, reason: format!("step cap {} reached", config.max_steps) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadicalOrderReport {
    pub step: u32,
    pub max_order: Option<u32>,
    pub algebraic_floor: Option<u32>,
}

/// Per radical step: the largest certificate order used and the smallest
/// power of `z` lying in the ideal the `z` certificate was found in.
pub fn report_radical_orders(trace: &KohnTrace) -> Vec<RadicalOrderReport> {
    trace
        .events
        .iter()
        .filter(|e| e.action == Action::Radical)
        .map(|e| RadicalOrderReport {
            step: e.step,
            max_order: e.max_radical_order,
            algebraic_floor: e.algebraic_floor.as_ref().and_then(|f| f.floor),
        })
        .collect()
}

/// The ideal in force when `element` was certified in the radical step
/// `step`: `I_step^#` plus the certificates committed before it.
pub fn radical_stage_ideal(trace: &KohnTrace, step: u32, element: &Poly) -> Result<Option<LocalIdeal>> {
    let all: Vec<&Multiplier> = trace.multipliers().collect();
    let Some(event) = trace.events.iter().find(|e| e.action == Action::Radical && e.step == step) else {
        return Ok(None);
    };
    let Some(pos) = event.certificates.iter().position(|c| c.certificate.element == *element) else {
        return Ok(None);
    };
    let mut gens: Vec<Poly> = event.ideal.iter().map(|&i| all[i].poly.clone()).collect();
    gens.extend(event.certificates[..pos].iter().map(|c| c.certificate.element.clone()));
    LocalIdeal::new(gens).map(Some)
}

/// Re-derives every order in `trace` from its provenance, checks each
/// recorded polynomial against the rule that produced it, and recomputes
/// the outcome.
pub fn replay(spec: &DomainSpec, trace: &KohnTrace) -> Result<Outcome> {
    let levi = spec.levi_data()?;
    let mut polys: Vec<Poly> = Vec::new();
    let mut orders: Vec<Order> = Vec::new();
    let mut mark = 0;
    let mut max_radical: Option<u32> = None;
    let bad = |msg: String| Error::Inconsistent(format!("replay: {msg}"));
    for ev in &trace.events {
        let base = match ev.action {
            Action::Radical => {
                let b = base_order(&polys, &orders, &ev.ideal);
                if ev.base_order.as_ref() != Some(&b) {
                    return Err(bad(format!("step {} base order differs", ev.step)));
                }
                Some(b)
            }
            _ => None,
        };
        for m in &ev.multipliers {
            if m.id != polys.len() {
                return Err(bad(format!("multiplier id {} out of sequence", m.id)));
            }
            let expected = m
                .provenance
                .implied_order(&orders, base.as_ref())
                .ok_or_else(|| bad(format!("multiplier {} cites a missing source", m.id)))?;
            if expected != m.order {
                return Err(bad(format!("multiplier {} has order {} but its rule gives {}", m.id, m.order, expected)));
            }
            check_rule(&m.poly, &m.provenance, &polys, &levi, ev)
                .map_err(|e| bad(format!("multiplier {}: {e}", m.id)))?;
            polys.push(m.poly.clone());
            orders.push(m.order.clone());
        }
        match ev.action {
            Action::Init => mark = polys.len(),
            Action::Radical => {
                mark = polys.len();
                let k = ev.certificates.iter().map(|c| c.certificate.order).max();
                if k != ev.max_radical_order {
                    return Err(bad(format!("step {} max radical order differs", ev.step)));
                }
                max_radical = max_radical.max(k);
            }
            Action::Row => {}
            Action::Entry | Action::Derivative => {
                return Err(bad("effective-chain event in a classic trace".into()));
            }
            Action::Finish => {
                let recorded = ev.outcome.clone().ok_or_else(|| bad("finish event without outcome".into()))?;
                return match recorded {
                    Outcome::Success { step, .. } => {
                        let again = success_outcome(&polys, &orders, mark, step, max_radical)
                            .ok_or_else(|| bad("no unit multiplier".into()))?;
                        if again != recorded {
                            return Err(bad(format!("recorded outcome '{recorded}' but ledger gives '{again}'")));
                        }
                        Ok(again)
                    }
                    stalled => Ok(stalled),
                };
            }
        }
    }
    Err(bad("trace has no finish event".into()))
}

fn check_rule(
    poly: &Poly,
    prov: &Provenance,
    polys: &[Poly],
    levi: &LeviData,
    ev: &TraceEvent,
) -> std::result::Result<(), String> {
    let ok = match prov {
        Provenance::DefiningFunction => *poly == levi.r,
        Provenance::LeviDeterminant => *poly == levi.lambda,
        Provenance::Conjugation { source } => *poly == polys[*source].conj(),
        Provenance::HermitianSquare { source } => {
            hermitian_root(&polys[*source]).is_some_and(|(h, _)| h.primitive() == poly.primitive())
        }
        Provenance::MonomialRoot { k } => {
            let var = Var::ALL.iter().any(|v| *poly == Poly::var(*v));
            let cert = find_cert(ev, poly);
            var && cert.is_some_and(|c| {
                c.order == *k && matches!(&c.witness, Witness::Monomial { monomial } if monomial.degree() == *k)
            })
        }
        Provenance::AlgebraicPower { source, k } => {
            let cert = find_cert(ev, poly);
            crate::localideal::content_radical(&polys[*source]).is_some_and(|(c, _)| c == *poly)
                && cert.is_some_and(|c| matches!(&c.witness, Witness::Power { exponent, .. } if 2 * exponent == *k))
        }
        Provenance::Row { source } => *poly == apply_l(&polys[*source], levi),
        Provenance::RowDirect { source, .. } => *poly == polys[*source].wirtinger(Var::W),
        Provenance::EntryStep { .. } | Provenance::Derivative { .. } => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{poly} does not follow from rule {}", prov.rule_name()))
    }
}

fn find_cert<'a>(ev: &'a TraceEvent, poly: &Poly) -> Option<&'a RadicalCertificate> {
    ev.certificates.iter().map(|c| &c.certificate).find(|c| c.element == *poly)
}
