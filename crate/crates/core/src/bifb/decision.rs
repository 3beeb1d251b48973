use std::collections::VecDeque;

use super::WindowPick;
use crate::metrics::DetectionResult;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecisionStatus {
    Pending,
    Detected { frequency: f64, time: f64 },
    TimedOut,
}

impl DecisionStatus {
    pub fn into_result(self) -> Option<DetectionResult> {
        match self {
            DecisionStatus::Pending => None,
            DecisionStatus::Detected { frequency, time } => {
                Some(DetectionResult::Detected { frequency, time })
            }
            DecisionStatus::TimedOut => Some(DetectionResult::TimedOut),
        }
    }
}

/// Rolling vote over the most recent window picks. A frequency is detected
/// once it wins `required` of the last `horizon` windows (3 of 4 by default);
/// the trial times out when a pick at or past `deadline` still leaves it
/// undecided. The first terminal status is latched.
#[derive(Debug, Clone)]
pub struct DecisionState {
    history: VecDeque<WindowPick>,
    required: usize,
    horizon: usize,
    deadline: f64,
    outcome: Option<DecisionStatus>,
}

impl DecisionState {
    pub fn new(deadline: f64) -> Self {
        Self {
            history: VecDeque::with_capacity(4),
            required: 3,
            horizon: 4,
            deadline,
            outcome: None,
        }
    }

    pub fn history(&self) -> impl Iterator<Item = &WindowPick> {
        self.history.iter()
    }

    pub fn deadline(&self) -> f64 {
        self.deadline
    }

    pub fn update(&mut self, pick: WindowPick) -> Result<DecisionStatus> {
        if let Some(last) = self.history.back() {
            if !(pick.end_time > last.end_time) {
                return Err(Error::OutOfOrder {
                    got: pick.end_time,
                    last: last.end_time,
                });
            }
        }
        if let Some(done) = self.outcome {
            return Ok(done);
        }
        self.history.push_back(pick);
        if self.history.len() > self.horizon {
            self.history.pop_front();
        }
        let status = if let Some(frequency) = self.winner() {
            DecisionStatus::Detected {
                frequency,
                time: pick.end_time,
            }
        } else if pick.end_time >= self.deadline - 1e-9 {
            DecisionStatus::TimedOut
        } else {
            DecisionStatus::Pending
        };
        if status != DecisionStatus::Pending {
            self.outcome = Some(status);
        }
        Ok(status)
    }

    fn winner(&self) -> Option<f64> {
        if self.history.len() < self.required {
            return None;
        }
        self.history
            .iter()
            .map(|p| p.frequency)
            .find(|f| self.history.iter().filter(|p| p.frequency == *f).count() >= self.required)
    }
}

/// Free-function form of [`DecisionState::update`].
pub fn update_decision(state: &mut DecisionState, pick: WindowPick) -> Result<DecisionStatus> {
    state.update(pick)
}
