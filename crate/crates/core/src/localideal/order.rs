use std::cmp::Ordering;

use crate::polyring::{GaussRational, Monomial, Poly};

/// Anti-graded local order: lower total degree is larger, ties broken
/// lexicographically with `z > zb > w > wb`. The constant monomial is the
/// largest of all.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LocalOrder;

impl LocalOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        b.degree().cmp(&a.degree()).then_with(|| a.exps().cmp(&b.exps()))
    }

    /// Leading term under the local order.
    pub fn leading<'a>(&self, p: &'a Poly) -> Option<(&'a Monomial, &'a GaussRational)> {
        // The canonical print order puts the local maximum first.
        let lt = p.first_term();
        debug_assert!(lt.is_none_or(|(m, _)| p.terms().all(|(k, _)| self.cmp(m, k).is_ge())));
        lt
    }

    pub fn leading_monomial(&self, p: &Poly) -> Option<Monomial> {
        self.leading(p).map(|(m, _)| *m)
    }

    /// `deg(p) - deg(LM(p))`.
    pub fn ecart(&self, p: &Poly) -> u32 {
        match (p.degree(), self.leading_monomial(p)) {
            (Some(d), Some(m)) => d - m.degree(),
            _ => 0,
        }
    }
}
