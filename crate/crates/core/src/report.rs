use serde::Serialize;

/// A verified divergence between a printed value and the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub id: String,
    pub printed: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
}

impl Discrepancy {
    pub fn new(id: &str, printed: impl Into<String>, computed: impl Into<String>) -> Self {
        Discrepancy { id: id.into(), printed: printed.into(), computed: computed.into(), resolution: None }
    }

    pub fn resolved(mut self, resolution: impl Into<String>) -> Self {
        self.resolution = Some(resolution.into());
        self
    }
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DISCREPANCY {}: printed {}; computed {}", self.id, self.printed, self.computed)?;
        if let Some(r) = &self.resolution {
            write!(f, "; resolution {r}")?;
        }
        Ok(())
    }
}
