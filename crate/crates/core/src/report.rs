//! Verification reports shared by the library checks and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    /// Number of individual coefficients or cases compared.
    #[serde(default)]
    pub checked: usize,
    /// Cases skipped because the truncation could not determine them.
    #[serde(default)]
    pub excluded: usize,
}

impl IdentityReport {
    pub fn new(identity: &str, instance: &str) -> Self {
        Self {
            identity_name: identity.into(),
            instance: instance.into(),
            lhs: String::new(),
            rhs: String::new(),
            equal: true,
            checked: 0,
            excluded: 0,
        }
    }

    /// Records one comparison; the first failure is kept as the witness.
    pub fn record(&mut self, lhs: String, rhs: String, equal: bool) {
        self.checked += 1;
        if self.equal && (!equal || self.lhs.is_empty()) {
            self.lhs = lhs;
            self.rhs = rhs;
        }
        self.equal &= equal;
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable report")
    }
}
