//! POMCP over one target's history tree.
//!
//! Each simulation samples a state from the root belief and descends with
//! UCB1, branching on (action, discretized observation). The first history not
//! yet in the tree is added and valued by a uniform-random rollout, so a tree
//! grows by at most one node per simulation.

use rand::Rng;
use std::collections::HashMap;

use super::belief::BeliefSet;
use super::generator::{Action, GeneratorState};
use crate::detection::ObsKey;
use crate::scenario::{PlannerConfig, TargetState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub n_sim: usize,
    pub c_ucb: f64,
    pub discount: f64,
    /// Maximum simulated depth below the root.
    pub horizon: usize,
    pub reuse_tree: bool,
}

impl SearchConfig {
    pub fn new(n_sim: usize, c_ucb: f64) -> Self {
        Self { n_sim, c_ucb, discount: 0.95, horizon: 5, reuse_tree: false }
    }
}

impl From<&PlannerConfig> for SearchConfig {
    fn from(p: &PlannerConfig) -> Self {
        Self {
            n_sim: p.n_sim,
            c_ucb: p.c_ucb,
            discount: p.discount,
            horizon: p.rollout_depth,
            reuse_tree: p.reuse_tree,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ActionStats {
    pub visits: u32,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub visits: u32,
    pub actions: Vec<ActionStats>,
    children: HashMap<(usize, ObsKey), usize>,
    /// States that reached this history during simulation.
    pub particles: Vec<TargetState>,
}

impl SearchNode {
    fn new(num_actions: usize) -> Self {
        Self {
            visits: 0,
            actions: vec![ActionStats::default(); num_actions],
            children: HashMap::new(),
            particles: Vec::new(),
        }
    }

    pub fn child(&self, action: Action, key: ObsKey) -> Option<usize> {
        self.children.get(&(action.0, key)).copied()
    }

    pub fn num_children(&self) -> usize {
        self.children.len()
    }

    /// UCB1 choice; unvisited actions first, ties to the lowest index.
    pub fn select(&self, c_ucb: f64) -> Action {
        if let Some(a) = self.actions.iter().position(|s| s.visits == 0) {
            return Action(a);
        }
        let ln_n = (self.visits.max(1) as f64).ln();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (a, s) in self.actions.iter().enumerate() {
            let score = s.value + c_ucb * (ln_n / s.visits as f64).sqrt();
            if score > best_score {
                best = a;
                best_score = score;
            }
        }
        Action(best)
    }

    /// `argmax_a Q(h, a)`, lowest index on ties.
    pub fn best_action(&self) -> Action {
        let mut best = 0;
        for (a, s) in self.actions.iter().enumerate() {
            if s.value > self.actions[best].value {
                best = a;
            }
        }
        Action(best)
    }
}

#[derive(Debug, Clone)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
    num_actions: usize,
}

impl SearchTree {
    pub fn new(num_actions: usize) -> Self {
        Self { nodes: vec![SearchNode::new(num_actions)], num_actions }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &SearchNode {
        &self.nodes[0]
    }

    pub fn node(&self, idx: usize) -> &SearchNode {
        &self.nodes[idx]
    }

    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    fn reset(&mut self) {
        self.nodes.clear();
        self.nodes.push(SearchNode::new(self.num_actions));
    }

    /// Re-root at the child reached by `(action, key)`, keeping its subtree.
    /// Falls back to an empty tree when that branch was never simulated.
    pub fn advance(&mut self, action: Action, key: ObsKey) {
        let Some(new_root) = self.nodes[0].child(action, key) else {
            self.reset();
            return;
        };
        let mut old = std::mem::take(&mut self.nodes);
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![new_root];
        remap.insert(new_root, 0);
        let mut i = 0;
        while i < order.len() {
            let mut kids: Vec<usize> = old[order[i]].children.values().copied().collect();
            kids.sort_unstable();
            for c in kids {
                remap.insert(c, order.len());
                order.push(c);
            }
            i += 1;
        }
        self.nodes = order
            .iter()
            .map(|&o| {
                let mut n = std::mem::replace(&mut old[o], SearchNode::new(0));
                n.children = n.children.into_iter().map(|(k, v)| (k, remap[&v])).collect();
                n
            })
            .collect();
    }

    fn add_node(&mut self) -> usize {
        self.nodes.push(SearchNode::new(self.num_actions));
        self.nodes.len() - 1
    }
}

/// One target's planner: a search tree plus its configuration.
#[derive(Debug, Clone)]
pub struct Planner {
    tree: SearchTree,
    config: SearchConfig,
}

impl Planner {
    pub fn new(num_actions: usize, config: SearchConfig) -> Self {
        Self { tree: SearchTree::new(num_actions), config }
    }

    pub fn tree(&self) -> &SearchTree {
        &self.tree
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Runs `n_sim` simulations from the belief and returns the best root action.
    pub fn plan<R: Rng + ?Sized>(&mut self, belief: &BeliefSet, generator: &GeneratorState, rng: &mut R) -> Action {
        if !self.config.reuse_tree {
            self.tree.reset();
        }
        for _ in 0..self.config.n_sim {
            let s = *belief.sample(rng);
            self.simulate(0, s, 0, generator, rng);
        }
        self.tree.root().best_action()
    }

    /// Root actions ordered by value, best first (lowest index on ties).
    pub fn ranked_actions(&self) -> Vec<Action> {
        let stats = &self.tree.root().actions;
        let mut idx: Vec<usize> = (0..stats.len()).collect();
        idx.sort_by(|&a, &b| stats[b].value.total_cmp(&stats[a].value).then(a.cmp(&b)));
        idx.into_iter().map(Action).collect()
    }

    /// Moves past the realized step: re-roots when reusing trees, else clears.
    pub fn advance(&mut self, action: Action, key: ObsKey) {
        if self.config.reuse_tree {
            self.tree.advance(action, key);
        } else {
            self.tree.reset();
        }
    }

    fn simulate<R: Rng + ?Sized>(
        &mut self,
        node: usize,
        s: TargetState,
        depth: usize,
        generator: &GeneratorState,
        rng: &mut R,
    ) -> f64 {
        if depth >= self.config.horizon {
            return 0.0;
        }
        let action = self.tree.nodes[node].select(self.config.c_ucb);
        let tr = generator.generate(&s, action, rng);
        let key = (action.0, tr.observation.key());
        let future = match self.tree.nodes[node].children.get(&key).copied() {
            Some(child) => {
                self.tree.nodes[child].particles.push(tr.state);
                self.simulate(child, tr.state, depth + 1, generator, rng)
            }
            None => {
                let child = self.tree.add_node();
                self.tree.nodes[child].particles.push(tr.state);
                self.tree.nodes[node].children.insert(key, child);
                self.rollout(tr.state, depth + 1, generator, rng)
            }
        };
        let ret = tr.reward + self.config.discount * future;

        let n = &mut self.tree.nodes[node];
        n.visits += 1;
        let stats = &mut n.actions[action.0];
        stats.visits += 1;
        stats.value += (ret - stats.value) / stats.visits as f64;
        ret
    }

    fn rollout<R: Rng + ?Sized>(&self, mut s: TargetState, depth: usize, generator: &GeneratorState, rng: &mut R) -> f64 {
        let mut total = 0.0;
        let mut weight = 1.0;
        for _ in depth..self.config.horizon {
            let a = Action(rng.random_range(0..generator.num_actions()));
            let tr = generator.generate(&s, a, rng);
            total += weight * tr.reward;
            weight *= self.config.discount;
            s = tr.state;
        }
        total
    }
}

/// Fresh-tree POMCP solve with the default discount and horizon.
pub fn plan<R: Rng + ?Sized>(
    belief: &BeliefSet,
    generator: &GeneratorState,
    n_sim: usize,
    c_ucb: f64,
    rng: &mut R,
) -> Action {
    let mut planner = Planner::new(generator.num_actions(), SearchConfig::new(n_sim, c_ucb));
    planner.plan(belief, generator, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::AngleGrid;
    use crate::detection::threshold_for;
    use crate::rng::stream;
    use crate::scenario::{MotionModel, RadarEquationMap};

    fn generator(bins: usize, sigma: f64, sigma_s: f64) -> GeneratorState {
        GeneratorState::new(
            sigma,
            MotionModel::new(1.0, sigma_s).unwrap(),
            RadarEquationMap::new(2500.0).unwrap(),
            threshold_for(1e-3).unwrap(),
            AngleGrid::new(bins).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn unvisited_action_preferred() {
        let mut node = SearchNode::new(4);
        for a in [0, 1, 3] {
            node.actions[a] = ActionStats { visits: 100, value: 10.0 };
        }
        node.visits = 300;
        assert_eq!(node.select(1.0), Action(2));
    }

    #[test]
    fn best_action_ties_to_lowest() {
        let mut node = SearchNode::new(4);
        node.actions[1].value = 0.5;
        node.actions[3].value = 0.5;
        assert_eq!(node.best_action(), Action(1));
    }

    #[test]
    fn single_simulation_returns_valid_bin() {
        let g = generator(20, 0.1, 0.0);
        let b = BeliefSet::new(0, vec![TargetState { x: 50.0, vx: 0.0, y: 5.0, vy: 0.0 }]).unwrap();
        let a = plan(&b, &g, 1, 2f64.sqrt(), &mut stream(51, 0));
        assert!(a.0 < 20);
    }

    #[test]
    fn tree_growth_bounded() {
        let g = generator(20, 0.1, 0.01);
        let b = BeliefSet::new(0, vec![TargetState { x: 50.0, vx: 0.0, y: 5.0, vy: 0.0 }]).unwrap();
        for n_sim in [1, 10, 100, 500] {
            let mut p = Planner::new(20, SearchConfig::new(n_sim, 2f64.sqrt()));
            p.plan(&b, &g, &mut stream(52, n_sim as u64));
            assert!(p.tree().len() <= n_sim + 1);
            let root = p.tree().root();
            assert_eq!(root.visits as usize, n_sim);
            assert_eq!(root.visits, root.actions.iter().map(|s| s.visits).sum::<u32>());
        }
    }

    #[test]
    fn degenerate_belief_finds_true_bin() {
        let g = generator(20, 1e-3, 0.0);
        let s = TargetState { x: 50.0, vx: 0.0, y: 5.0, vy: 0.0 };
        let truth = g.grid.bin_of_state(&g.motion.propagate(&s)).unwrap();
        let b = BeliefSet::new(0, vec![s; 10]).unwrap();
        let hits = (0..100)
            .filter(|&i| plan(&b, &g, 300, 2f64.sqrt(), &mut stream(53, i)) == Action(truth))
            .count();
        assert!(hits >= 99, "{hits}");
    }

    #[test]
    fn straddling_belief_stays_on_support() {
        let g = generator(20, 1e-6, 0.0);
        let (lo, hi) = g.grid.edges_deg(10);
        let at = |deg: f64| {
            let r = 50.0;
            TargetState { x: r * deg.to_radians().cos(), vx: 0.0, y: r * deg.to_radians().sin(), vy: 0.0 }
        };
        let particles = vec![at(lo + 0.5), at(hi + 0.5)];
        let b = BeliefSet::new(0, particles).unwrap();
        for i in 0..30 {
            let a = plan(&b, &g, 400, 2f64.sqrt(), &mut stream(54, i));
            assert!(a == Action(10) || a == Action(11), "{a:?}");
        }
    }

    #[test]
    fn advance_keeps_subtree() {
        let g = generator(5, 0.05, 0.0);
        let s = TargetState { x: 50.0, vx: 0.0, y: 1.0, vy: 0.0 };
        let b = BeliefSet::new(0, vec![s]).unwrap();
        let mut cfg = SearchConfig::new(400, 2f64.sqrt());
        cfg.reuse_tree = true;
        let mut p = Planner::new(5, cfg);
        let a = p.plan(&b, &g, &mut stream(55, 0));
        let child = p.tree().root().child(a, ObsKey::Empty);
        let mut keys: Vec<ObsKey> = p
            .tree()
            .root()
            .children
            .keys()
            .filter(|(act, _)| *act == a.0)
            .map(|(_, k)| *k)
            .collect();
        keys.sort();
        let key = *keys.last().unwrap();
        let expected_visits = p.tree().node(p.tree().root().child(a, key).unwrap()).visits;
        p.advance(a, key);
        assert_eq!(p.tree().root().visits, expected_visits);
        for n in p.tree().nodes() {
            for &c in n.children.values() {
                assert!(c < p.tree().len());
            }
        }
        let _ = child;
        p.advance(Action(4), ObsKey::Bin(999));
        assert_eq!(p.tree().len(), 1);
    }

    #[test]
    fn seeded_plans_repeat() {
        let g = generator(20, 0.1, 0.01);
        let b = BeliefSet::new(0, vec![TargetState { x: 40.0, vx: 0.1, y: -8.0, vy: 0.0 }; 4]).unwrap();
        let a1 = plan(&b, &g, 200, 1.0, &mut stream(56, 0));
        let a2 = plan(&b, &g, 200, 1.0, &mut stream(56, 0));
        assert_eq!(a1, a2);
    }
}
