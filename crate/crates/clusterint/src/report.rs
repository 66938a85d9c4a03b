use serde::{Deserialize, Serialize};

/// Machine-readable certificate for an extracted integrable system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrableSystemReport {
    pub variables: Vec<String>,
    pub functions: Vec<String>,
    pub involutive: bool,
    pub independent_count: usize,
    pub magic_number: usize,
    pub seed: u64,
    pub construction: String,
}

impl IntegrableSystemReport {
    pub fn passes(&self) -> bool {
        self.involutive && self.independent_count == self.magic_number && self.functions.len() == self.magic_number
    }
}
