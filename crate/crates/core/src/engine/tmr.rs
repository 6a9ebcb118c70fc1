//! Re-execution baseline: three executions, each under its own transient
//! fault map, with a majority vote on the predicted label.

use super::inference::{Engine, EngineConfig};
use super::policy::{MitigationKind, MitigationPolicy, TMR_COPIES};
use crate::cost::{estimate_cost, CostReport};
use crate::fault::generate_fault_map_stream;
use crate::snn::{SpikeTrain, TrainedModel};
use crate::Result;

/// Label held by at least two executions; the first execution's label when
/// all three disagree.
pub fn majority_vote(votes: &[Option<usize>; TMR_COPIES]) -> Option<usize> {
    if votes[0] == votes[1] || votes[0] == votes[2] {
        votes[0]
    } else if votes[1] == votes[2] {
        votes[1]
    } else {
        votes[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmrOutcome {
    pub votes: [Option<usize>; TMR_COPIES],
    pub prediction: Option<usize>,
    pub cost: CostReport,
}

/// Three engines loaded with fault maps drawn from streams 0, 1 and 2 of
/// `seed`, all without mitigation.
#[derive(Debug, Clone)]
pub struct TmrEngine {
    copies: Vec<Engine>,
    cost_per_step: CostReport,
}

impl TmrEngine {
    pub fn prepare(model: &TrainedModel, fault_rate: f64, seed: u64, config: &EngineConfig) -> Result<Self> {
        let policy = MitigationPolicy::no_mitigation();
        let copies = (0..TMR_COPIES as u64)
            .map(|stream| {
                let map = generate_fault_map_stream(model.dims(), fault_rate, seed, stream)?;
                Engine::prepare(model, &map, &policy, config)
            })
            .collect::<Result<Vec<_>>>()?;
        let cost_per_step = estimate_cost(
            MitigationKind::ReExecutionTMR,
            model.dims(),
            config.crossbar(),
            1,
            &config.cost,
        )?;
        Ok(Self { copies, cost_per_step })
    }

    pub fn infer(&mut self, input: &SpikeTrain) -> Result<TmrOutcome> {
        let mut votes = [None; TMR_COPIES];
        for (vote, engine) in votes.iter_mut().zip(self.copies.iter_mut()) {
            *vote = engine.infer(input)?.prediction;
        }
        let steps = input.duration();
        let c = self.cost_per_step;
        Ok(TmrOutcome {
            votes,
            prediction: majority_vote(&votes),
            cost: CostReport {
                latency: c.latency * steps as f64,
                energy: c.energy * steps as f64,
                cycles: c.cycles * steps as u64,
                ..c
            },
        })
    }
}

pub fn run_tmr(
    model: &TrainedModel,
    input: &SpikeTrain,
    fault_rate: f64,
    config: &EngineConfig,
    seed: u64,
) -> Result<TmrOutcome> {
    TmrEngine::prepare(model, fault_rate, seed, config)?.infer(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn votes() {
        assert_eq!(majority_vote(&[Some(5), Some(5), Some(7)]), Some(5));
        assert_eq!(majority_vote(&[Some(7), Some(5), Some(5)]), Some(5));
        assert_eq!(majority_vote(&[Some(5), Some(7), Some(5)]), Some(5));
        assert_eq!(majority_vote(&[Some(1), Some(2), Some(3)]), Some(1));
        assert_eq!(majority_vote(&[None, Some(2), None]), None);
    }
}
