//! Deterministic velocity-integrated force layout: pairwise many-body
//! repulsion, springs along edges and a pull toward the origin, all scaled
//! by a geometrically decaying `alpha`.
//!
//! Nodes are processed in id order and forces are accumulated in a fixed
//! order, so a given (graph, params) pair always yields the same bits.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{PI, TAU};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("edge endpoint {0:?} is not a node")]
    DanglingEdge(String),
    #[error("node id {0:?} appears twice")]
    DuplicateNode(String),
    #[error("invalid layout parameter {name}: {value}")]
    InvalidParam { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams {
    pub seed: u64,
    /// Many-body strength; negative values repel.
    pub repulsion_strength: f64,
    pub link_distance: f64,
    pub centering_strength: f64,
    /// Fraction of velocity removed each step.
    pub velocity_decay: f64,
    pub alpha_start: f64,
    pub alpha_min: f64,
    pub alpha_decay: f64,
    pub max_iterations: usize,
}

impl Default for LayoutParams {
    fn default() -> Self {
        Self {
            seed: 42,
            repulsion_strength: -30.0,
            link_distance: 60.0,
            centering_strength: 0.1,
            velocity_decay: 0.6,
            alpha_start: 1.0,
            alpha_min: 0.001,
            alpha_decay: 0.0228,
            max_iterations: 300,
        }
    }
}

impl LayoutParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn check(&self) -> Result<(), LayoutError> {
        let bad = |name, value| Err(LayoutError::InvalidParam { name, value });
        if !(self.repulsion_strength < 0.0 && self.repulsion_strength.is_finite()) {
            return bad("repulsion_strength", self.repulsion_strength);
        }
        if !(self.link_distance > 0.0 && self.link_distance.is_finite()) {
            return bad("link_distance", self.link_distance);
        }
        if !(self.centering_strength > 0.0 && self.centering_strength <= 1.0) {
            return bad("centering_strength", self.centering_strength);
        }
        if !(self.velocity_decay > 0.0 && self.velocity_decay < 1.0) {
            return bad("velocity_decay", self.velocity_decay);
        }
        if !(self.alpha_decay > 0.0 && self.alpha_decay < 1.0) {
            return bad("alpha_decay", self.alpha_decay);
        }
        if !(self.alpha_min > 0.0 && self.alpha_start > 0.0 && self.alpha_start.is_finite()) {
            return bad("alpha_min", self.alpha_min);
        }
        if self.max_iterations == 0 {
            return bad("max_iterations", 0.0);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    pub positions: BTreeMap<String, (f64, f64)>,
    pub iterations: usize,
    pub final_alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Link {
    source: usize,
    target: usize,
    strength: f64,
    bias: f64,
}

/// Simulation state between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutState {
    ids: Vec<String>,
    links: Vec<Link>,
    /// Deterministic unit vectors for coincident pairs, keyed by (i, j), i < j.
    jitter_seed: u64,
    pub positions: Vec<[f64; 2]>,
    pub velocities: Vec<[f64; 2]>,
    pub alpha: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    bytes.iter().fold(state, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Maps 64 random bits to an angle in [0, 2π).
fn unit_angle(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64 * TAU
}

const COINCIDENT: f64 = 1e-6;
const INITIAL_RADIUS: f64 = 10.0;

impl LayoutState {
    /// Validates the graph and places node `i` (in id order) on a
    /// phyllotaxis spiral of radius `10·√i`, rotated by a seed-derived angle.
    pub fn new<'a>(
        node_ids: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str)>,
        p: &LayoutParams,
    ) -> Result<Self, LayoutError> {
        p.check()?;
        let mut ids: Vec<String> = node_ids.into_iter().map(str::to_string).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(LayoutError::DuplicateNode(w[0].clone()));
        }
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

        let mut pairs = Vec::new();
        for (s, t) in edges {
            let si = *index.get(s).ok_or_else(|| LayoutError::DanglingEdge(s.to_string()))?;
            let ti = *index.get(t).ok_or_else(|| LayoutError::DanglingEdge(t.to_string()))?;
            pairs.push((si, ti));
        }
        pairs.sort_unstable();

        let mut degree = vec![0usize; ids.len()];
        for &(s, t) in &pairs {
            degree[s] += 1;
            degree[t] += 1;
        }
        let links = pairs
            .into_iter()
            .map(|(source, target)| {
                let (ds, dt) = (degree[source] as f64, degree[target] as f64);
                Link { source, target, strength: 1.0 / ds.min(dt), bias: ds / (ds + dt) }
            })
            .collect();

        let rotation = unit_angle(splitmix64(p.seed));
        let golden = PI * (3.0 - 5f64.sqrt());
        let positions = (0..ids.len())
            .map(|i| {
                let r = INITIAL_RADIUS * (i as f64).sqrt();
                let theta = rotation + i as f64 * golden;
                [r * theta.cos(), r * theta.sin()]
            })
            .collect();

        Ok(Self {
            velocities: vec![[0.0; 2]; ids.len()],
            ids,
            links,
            jitter_seed: p.seed,
            positions,
            alpha: p.alpha_start,
            iterations: 0,
            converged: false,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Overrides positions (in id order), e.g. to resume from a saved layout.
    pub fn set_positions(&mut self, positions: Vec<[f64; 2]>) {
        assert_eq!(positions.len(), self.ids.len());
        self.positions = positions;
        self.velocities = vec![[0.0; 2]; self.ids.len()];
    }

    /// Unit vector separating nodes `i < j` when they coincide.
    fn jitter(&self, i: usize, j: usize) -> [f64; 2] {
        let h = fnv1a(0xcbf2_9ce4_8422_2325 ^ self.jitter_seed, self.ids[i].as_bytes());
        let h = fnv1a(h ^ 0xff, self.ids[j].as_bytes());
        let a = unit_angle(splitmix64(h));
        [a.cos(), a.sin()]
    }

    fn apply_links(&mut self, p: &LayoutParams) {
        for k in 0..self.links.len() {
            let Link { source: s, target: t, strength, bias } = self.links[k];
            let mut dx = self.positions[t][0] + self.velocities[t][0] - self.positions[s][0] - self.velocities[s][0];
            let mut dy = self.positions[t][1] + self.velocities[t][1] - self.positions[s][1] - self.velocities[s][1];
            let mut len = (dx * dx + dy * dy).sqrt();
            if len < COINCIDENT {
                let (i, j) = if s < t { (s, t) } else { (t, s) };
                let [ux, uy] = self.jitter(i, j);
                let sign = if s < t { 1.0 } else { -1.0 };
                dx = sign * ux * COINCIDENT;
                dy = sign * uy * COINCIDENT;
                len = COINCIDENT;
            }
            let l = (len - p.link_distance) / len * self.alpha * strength;
            dx *= l;
            dy *= l;
            self.velocities[t][0] -= dx * bias;
            self.velocities[t][1] -= dy * bias;
            self.velocities[s][0] += dx * (1.0 - bias);
            self.velocities[s][1] += dy * (1.0 - bias);
        }
    }

    fn apply_many_body(&mut self, p: &LayoutParams) {
        let n = self.ids.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut dx = self.positions[j][0] - self.positions[i][0];
                let mut dy = self.positions[j][1] - self.positions[i][1];
                let mut d2 = dx * dx + dy * dy;
                if d2 < COINCIDENT * COINCIDENT {
                    let [ux, uy] = self.jitter(i, j);
                    dx = ux * COINCIDENT;
                    dy = uy * COINCIDENT;
                    d2 = COINCIDENT * COINCIDENT;
                }
                // Below unit distance the force magnitude is capped at |strength|·alpha.
                if d2 < 1.0 {
                    d2 = d2.sqrt();
                }
                let w = p.repulsion_strength * self.alpha / d2;
                self.velocities[i][0] += dx * w;
                self.velocities[i][1] += dy * w;
                self.velocities[j][0] -= dx * w;
                self.velocities[j][1] -= dy * w;
            }
        }
    }

    fn apply_centering(&mut self, p: &LayoutParams) {
        let k = p.centering_strength * self.alpha;
        for (v, x) in self.velocities.iter_mut().zip(&self.positions) {
            v[0] -= x[0] * k;
            v[1] -= x[1] * k;
        }
    }

    fn integrate(&mut self, p: &LayoutParams) {
        let keep = 1.0 - p.velocity_decay;
        for (v, x) in self.velocities.iter_mut().zip(self.positions.iter_mut()) {
            v[0] *= keep;
            v[1] *= keep;
            x[0] += v[0];
            x[1] += v[1];
        }
    }

    pub fn result(&self) -> LayoutResult {
        LayoutResult {
            positions: self
                .ids
                .iter()
                .zip(&self.positions)
                .map(|(id, p)| (id.clone(), (p[0], p[1])))
                .collect(),
            iterations: self.iterations,
            final_alpha: self.alpha,
        }
    }
}

/// One force pass plus integration. Alpha first decays geometrically toward
/// zero (`alpha *= 1 - alpha_decay`); a state whose alpha is already below
/// `alpha_min` comes back unchanged and marked converged.
pub fn layout_step(mut state: LayoutState, p: &LayoutParams) -> LayoutState {
    if state.alpha < p.alpha_min {
        state.converged = true;
        return state;
    }
    state.alpha += (0.0 - state.alpha) * p.alpha_decay;
    state.apply_links(p);
    state.apply_many_body(p);
    state.apply_centering(p);
    state.integrate(p);
    state.iterations += 1;
    if state.alpha < p.alpha_min {
        state.converged = true;
    }
    state
}

/// Runs the simulation until alpha drops below `alpha_min` or
/// `max_iterations` steps have run.
pub fn layout<'a>(
    node_ids: impl IntoIterator<Item = &'a str>,
    edges: impl IntoIterator<Item = (&'a str, &'a str)>,
    p: &LayoutParams,
) -> Result<LayoutResult, LayoutError> {
    let mut state = LayoutState::new(node_ids, edges, p)?;
    if state.ids.is_empty() {
        return Ok(state.result());
    }
    while !state.converged && state.iterations < p.max_iterations {
        state = layout_step(state, p);
    }
    Ok(state.result())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    #[test]
    fn empty_graph() {
        let r = layout([], [], &LayoutParams::default()).unwrap();
        assert!(r.positions.is_empty());
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn single_node_sits_at_origin() {
        let r = layout(["a"], [], &LayoutParams::default()).unwrap();
        assert_eq!(r.positions["a"], (0.0, 0.0));
    }

    #[test]
    fn two_linked_nodes_settle_near_link_distance() {
        let p = LayoutParams::with_seed(42);
        let r = layout(["a", "b"], [("a", "b")], &p).unwrap();
        let d = dist(r.positions["a"], r.positions["b"]);
        assert!((0.5 * p.link_distance..=1.5 * p.link_distance).contains(&d), "distance {d}");
        assert!(r.iterations <= p.max_iterations);
        assert!(r.final_alpha < p.alpha_min);
    }

    #[test]
    fn dangling_edge_is_rejected() {
        let err = layout(["a"], [("a", "zz")], &LayoutParams::default()).unwrap_err();
        assert_eq!(err, LayoutError::DanglingEdge("zz".into()));
        let dup = layout(["a", "a"], [], &LayoutParams::default()).unwrap_err();
        assert_eq!(dup, LayoutError::DuplicateNode("a".into()));
    }

    #[test]
    fn below_alpha_min_is_a_no_op() {
        let p = LayoutParams::default();
        let mut s = LayoutState::new(["a", "b"], [("a", "b")], &p).unwrap();
        s.alpha = p.alpha_min / 2.0;
        let before = s.clone();
        let after = layout_step(s, &p);
        assert!(after.converged);
        assert_eq!(after.positions, before.positions);
        assert_eq!(after.iterations, before.iterations);
    }

    #[test]
    fn symmetric_pair_stays_symmetric() {
        let p = LayoutParams::default();
        let mut s = LayoutState::new(["a", "b"], [("a", "b")], &p).unwrap();
        s.set_positions(vec![[-7.0, 3.0], [7.0, -3.0]]);
        let s = layout_step(s, &p);
        assert_eq!(s.positions[0][0], -s.positions[1][0]);
        assert_eq!(s.positions[0][1], -s.positions[1][1]);
    }

    #[test]
    fn replay_is_bitwise_identical() {
        let p = LayoutParams::with_seed(7);
        let ids = ["i", "u1", "u2", "c1", "c2", "f1"];
        let edges = [("i", "u1"), ("i", "c1"), ("i", "c2"), ("c1", "u2"), ("c2", "u2"), ("c1", "f1"), ("c2", "f1")];
        let run = || {
            let mut s = LayoutState::new(ids, edges, &p).unwrap();
            for _ in 0..10 {
                s = layout_step(s, &p);
            }
            s.positions.iter().flat_map(|p| p.map(f64::to_bits)).collect::<Vec<u64>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn seed_changes_positions_only() {
        let ids = ["a", "b", "c"];
        let edges = [("a", "b"), ("b", "c")];
        let r1 = layout(ids, edges, &LayoutParams::with_seed(1)).unwrap();
        let r2 = layout(ids, edges, &LayoutParams::with_seed(2)).unwrap();
        assert_eq!(r1.positions.keys().collect::<Vec<_>>(), r2.positions.keys().collect::<Vec<_>>());
        assert_ne!(r1.positions, r2.positions);
    }

    #[test]
    fn coincident_nodes_separate() {
        let p = LayoutParams::default();
        let mut s = LayoutState::new(["a", "b", "c"], [], &p).unwrap();
        s.set_positions(vec![[5.0, 5.0], [5.0, 5.0], [5.0, 5.0]]);
        for _ in 0..5 {
            s = layout_step(s, &p);
        }
        assert!(s.positions.iter().flatten().all(|v| v.is_finite()));
        assert_ne!(s.positions[0], s.positions[1]);
        assert_ne!(s.positions[1], s.positions[2]);
    }

    #[test]
    fn lone_node_drifts_to_origin() {
        let p = LayoutParams::default();
        let mut s = LayoutState::new(["a"], [], &p).unwrap();
        s.set_positions(vec![[40.0, -30.0]]);
        let mut last = 50.0;
        while !s.converged {
            s = layout_step(s, &p);
            let d = (s.positions[0][0].powi(2) + s.positions[0][1].powi(2)).sqrt();
            assert!(d <= last, "distance grew from {last} to {d}");
            last = d;
        }
        assert!(last < 50.0);
    }

    #[test]
    fn alpha_strictly_decreases() {
        let p = LayoutParams::default();
        let mut s = LayoutState::new(["a", "b"], [("a", "b")], &p).unwrap();
        let mut prev = s.alpha;
        while !s.converged {
            s = layout_step(s, &p);
            assert!(s.alpha < prev);
            prev = s.alpha;
        }
        assert_eq!(s.iterations, 300);
    }

    #[test]
    fn rejects_bad_params() {
        let p = LayoutParams { velocity_decay: 1.0, ..Default::default() };
        assert!(matches!(p.check(), Err(LayoutError::InvalidParam { name: "velocity_decay", .. })));
        let p = LayoutParams { repulsion_strength: 5.0, ..Default::default() };
        assert!(p.check().is_err());
    }
}
