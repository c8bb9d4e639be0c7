use serde::{Deserialize, Serialize};

/// Elementary search agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuckerState {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub personal_best: Vec<f64>,
    pub personal_best_fitness: f64,
    /// Set after (re)initialization until the current position has been
    /// evaluated. A pending sucker's next move is evaluating where it stands.
    pub pending: bool,
}

impl SuckerState {
    /// A freshly placed sucker with zero velocity that has not been evaluated.
    pub fn unevaluated(position: Vec<f64>) -> Self {
        let d = position.len();
        Self {
            personal_best: position.clone(),
            position,
            velocity: vec![0.0; d],
            personal_best_fitness: f64::INFINITY,
            pending: true,
        }
    }

    /// Records an evaluation of the current position.
    pub fn observe(&mut self, fitness: f64) {
        self.pending = false;
        if fitness < self.personal_best_fitness {
            self.personal_best_fitness = fitness;
            self.personal_best.clone_from(&self.position);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Master,
    Slave,
}

/// Regional sub-optimizer owning a swarm of suckers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TentacleState {
    pub center: Vec<f64>,
    pub radius: f64,
    pub role: Role,
    pub local_best: Vec<f64>,
    pub local_best_fitness: f64,
    pub stagnation: usize,
    pub suckers: Vec<SuckerState>,
}

impl TentacleState {
    /// Polls the suckers' personal bests. The lowest sucker index wins ties.
    /// Resets the stagnation counter on strict improvement and increments it
    /// otherwise.
    pub fn update_best(&mut self) {
        let mut best: Option<usize> = None;
        for (j, s) in self.suckers.iter().enumerate() {
            let better = match best {
                None => s.personal_best_fitness < f64::INFINITY,
                Some(b) => s.personal_best_fitness < self.suckers[b].personal_best_fitness,
            };
            if better {
                best = Some(j);
            }
        }
        match best {
            Some(j) if self.suckers[j].personal_best_fitness < self.local_best_fitness => {
                self.local_best_fitness = self.suckers[j].personal_best_fitness;
                self.local_best.clone_from(&self.suckers[j].personal_best);
                self.stagnation = 0;
            }
            _ => self.stagnation += 1,
        }
    }
}

/// Functional form of [`TentacleState::update_best`].
pub fn update_tentacle_best(mut tentacle: TentacleState) -> TentacleState {
    tentacle.update_best();
    tentacle
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliteEntry {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Bounded archive of the best distinct solutions seen, sorted ascending by
/// fitness. Among equal fitness values, earlier insertions rank first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliteMemory {
    capacity: usize,
    entries: Vec<EliteEntry>,
}

impl EliteMemory {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            entries: Vec::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EliteEntry] {
        &self.entries
    }

    pub fn best(&self) -> Option<&EliteEntry> {
        self.entries.first()
    }

    /// Offers a candidate; returns whether it was stored.
    pub fn offer(&mut self, position: &[f64], fitness: f64) -> bool {
        if self.capacity == 0 || fitness.is_nan() {
            return false;
        }
        if self.entries.len() == self.capacity
            && !(fitness < self.entries[self.capacity - 1].fitness)
        {
            return false;
        }
        if self.entries.iter().any(|e| e.position == position) {
            return false;
        }
        let at = self.entries.partition_point(|e| e.fitness <= fitness);
        self.entries.insert(
            at,
            EliteEntry {
                position: position.to_vec(),
                fitness,
            },
        );
        self.entries.truncate(self.capacity);
        true
    }
}

/// Functional form of [`EliteMemory::offer`].
pub fn maintain_elite(mut elite: EliteMemory, candidate: (&[f64], f64)) -> EliteMemory {
    elite.offer(candidate.0, candidate.1);
    elite
}

/// Top-level search state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OctopusState {
    pub tentacles: Vec<TentacleState>,
    pub global_best: Vec<f64>,
    pub global_best_fitness: f64,
    pub elite: EliteMemory,
    pub evaluations_used: usize,
}

impl OctopusState {
    /// Pulls every tentacle's local best into the global best. The lowest
    /// tentacle index wins ties.
    pub fn refresh_global_best(&mut self) {
        for t in &self.tentacles {
            if t.local_best_fitness < self.global_best_fitness {
                self.global_best_fitness = t.local_best_fitness;
                self.global_best.clone_from(&t.local_best);
            }
        }
    }

    /// Ranks tentacles by local best (stable, index order on ties) and makes
    /// the first `masters` of them masters.
    pub fn assign_roles(&mut self, masters: usize) {
        for (rank, i) in self.ranking().into_iter().enumerate() {
            self.tentacles[i].role = if rank < masters {
                Role::Master
            } else {
                Role::Slave
            };
        }
    }

    /// Tentacle indices ordered best first.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.tentacles.len()).collect();
        order.sort_by(|a, b| {
            self.tentacles[*a]
                .local_best_fitness
                .total_cmp(&self.tentacles[*b].local_best_fitness)
        });
        order
    }

    pub fn sucker_count(&self) -> usize {
        self.tentacles.iter().map(|t| t.suckers.len()).sum()
    }
}
