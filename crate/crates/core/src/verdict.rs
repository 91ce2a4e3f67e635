use serde::Serialize;

/// Outcome of an exhaustive identity check over a finite window.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub checked: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub at: String,
    pub residual: String,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, at: impl Into<String>, residual: impl Into<String>) {
        self.failures.push(Failure { at: at.into(), residual: residual.into() });
    }

    pub fn merge(&mut self, other: Verdict) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    /// First witness, if any.
    pub fn witness(&self) -> Option<&Failure> {
        self.failures.first()
    }
}
