//! Rough agent-steps-per-second measurement for each policy.

use std::time::Instant;

use gossip_bandits::{
    sample_grid, uniform_grid_means, Gossip, IndexKind, Instance, PhaseSchedule, Policy,
    RewardStream, Simulation, UpdateRule,
};

fn main() {
    let inst = Instance::new(uniform_grid_means(0.9, 0.2, 0.8, 20).unwrap(), 10).unwrap();
    let matrix = Gossip::complete(10).unwrap();
    let stream = RewardStream::new(1, inst.means());
    let horizon = 100_000;
    for policy in [
        Policy::new(UpdateRule::Aogb, IndexKind::kl(1.0).unwrap()),
        Policy::new(UpdateRule::gosine(), IndexKind::kl(1.0).unwrap()),
        Policy::new(UpdateRule::Aogb, IndexKind::hoeffding(1.0).unwrap()),
        Policy::new(UpdateRule::gosine(), IndexKind::hoeffding(1.0).unwrap()),
    ] {
        let sim = Simulation::new(&inst, &matrix, policy, PhaseSchedule::cubic(), &stream, horizon, sample_grid(horizon, 0))
            .unwrap();
        let start = Instant::now();
        let trace = sim.run(0);
        let secs = start.elapsed().as_secs_f64();
        let avg: f64 = trace.node_averaged().last().copied().unwrap();
        println!(
            "{:<18} {:>6.1} ns/agent-step  final node-avg regret {avg:.1}",
            policy.label(),
            secs * 1e9 / (horizon as f64 * 10.0)
        );
    }
}
