/// Cumulative query counts (in applications of the state-preparation
/// operator) at one point of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LedgerPoint {
    pub m: usize,
    pub sampling: u64,
    pub variational: u64,
    pub loose: u64,
}

impl LedgerPoint {
    pub fn total(&self) -> u64 {
        self.sampling + self.variational + self.loose
    }
}

/// Oracle-call accounting split by purpose.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    sampling: u64,
    variational: u64,
    loose: u64,
    history: Vec<LedgerPoint>,
}

impl QueryLedger {
    pub fn charge_sampling(&mut self, queries: u64) {
        self.sampling += queries;
    }

    pub fn charge_variational(&mut self, queries: u64) {
        self.variational += queries;
    }

    pub fn charge_loose(&mut self, queries: u64) {
        self.loose += queries;
    }

    pub fn sampling_queries(&self) -> u64 {
        self.sampling
    }

    pub fn variational_queries(&self) -> u64 {
        self.variational
    }

    pub fn loose_queries(&self) -> u64 {
        self.loose
    }

    pub fn total(&self) -> u64 {
        self.sampling + self.variational + self.loose
    }

    pub fn current(&self, m: usize) -> LedgerPoint {
        LedgerPoint {
            m,
            sampling: self.sampling,
            variational: self.variational,
            loose: self.loose,
        }
    }

    /// Records the cumulative counts as the cost of reaching step `m`.
    pub fn snapshot(&mut self, m: usize) -> LedgerPoint {
        let point = self.current(m);
        self.history.push(point);
        point
    }

    pub fn history(&self) -> &[LedgerPoint] {
        &self.history
    }
}
