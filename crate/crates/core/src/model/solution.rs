use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::jet::{Jet, JetResult};
use crate::equivalence::EquivTransform;

pub type FieldFn = dyn Fn(f64, f64) -> JetResult + Send + Sync;
pub type ValidityFn = dyn Fn(f64, f64) -> bool + Send + Sync;

/// A closed-form solution `u(t, x)`: a jet-valued field with a regularity
/// predicate and the chain of transforms it was pulled back through.
#[derive(Clone)]
pub struct Solution {
    family_id: String,
    params: BTreeMap<String, f64>,
    field: Arc<FieldFn>,
    validity: Arc<ValidityFn>,
    provenance: Vec<EquivTransform>,
}

impl Solution {
    pub fn new(
        family_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        field: Arc<FieldFn>,
        validity: Arc<ValidityFn>,
    ) -> Self {
        Solution { family_id: family_id.into(), params, field, validity, provenance: Vec::new() }
    }

    /// A solution regular wherever `field` evaluates.
    pub fn from_fn<F>(family_id: impl Into<String>, field: F) -> Self
    where
        F: Fn(f64, f64) -> JetResult + Send + Sync + 'static,
    {
        Solution::new(family_id, BTreeMap::new(), Arc::new(field), Arc::new(|_, _| true))
    }

    pub fn family_id(&self) -> &str {
        &self.family_id
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn provenance(&self) -> &[EquivTransform] {
        &self.provenance
    }

    pub fn field(&self) -> &Arc<FieldFn> {
        &self.field
    }

    pub fn validity(&self) -> &Arc<ValidityFn> {
        &self.validity
    }

    /// `u, u_t, u_x, u_xx` at `(t, x)`.
    pub fn jet(&self, t: f64, x: f64) -> JetResult {
        (self.field)(t, x)
    }

    pub fn value(&self, t: f64, x: f64) -> Option<f64> {
        if !self.is_regular(t, x) {
            return None;
        }
        self.jet(t, x).ok().map(|j| j.u)
    }

    /// False near a pole, by the margin built into the family.
    pub fn is_regular(&self, t: f64, x: f64) -> bool {
        (self.validity)(t, x)
    }

    /// `-u`, a solution of the same equation since the cubic term is odd.
    pub fn negated(&self) -> Solution {
        let field = self.field.clone();
        Solution {
            family_id: self.family_id.clone(),
            params: self.params.clone(),
            field: Arc::new(move |t, x| field(t, x).map(|j: Jet| -j)),
            validity: self.validity.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub(crate) fn with_parts(
        mut self,
        field: Arc<FieldFn>,
        validity: Arc<ValidityFn>,
        transform: EquivTransform,
    ) -> Solution {
        self.field = field;
        self.validity = validity;
        self.provenance.push(transform);
        self
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solution")
            .field("family_id", &self.family_id)
            .field("params", &self.params)
            .field("provenance", &self.provenance.len())
            .finish()
    }
}
