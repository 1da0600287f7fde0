use serde::Serialize;

/// Outcome of one verification pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub identity: String,
    pub exact: bool,
    pub max_residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ResidualReport {
    /// Passing iff the residual is exactly zero.
    pub fn new(identity: impl Into<String>, exact: bool, max_residual: f64) -> Self {
        ResidualReport {
            identity: identity.into(),
            exact,
            max_residual,
            pass: max_residual == 0.0,
            detail: None,
        }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}
