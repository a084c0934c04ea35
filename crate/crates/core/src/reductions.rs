//! Parameterized reductions used as instance generators.
//!
//! * Hitting Set to planning with restrictions B and S and no preconditions,
//!   with plan bound `k' = k`.
//! * Partitioned Clique to planning with restrictions U, B and S, every
//!   action having at most one precondition and exactly one effect, with
//!   plan bound `k' = 7 * C(k, 2) + k`.
//!
//! Both constructions are deterministic: variable layout and action names
//! depend only on the source instance.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::format;
use crate::oracle::{self, BfsConfig, OracleError};
use crate::sas::{Action, DomainSpec, PartialState, SasInstance, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("set {0} of the collection is empty")]
    EmptySet(usize),
    #[error("element {element} out of range (|S| = {set_size})")]
    ElementOutOfRange { element: usize, set_size: usize },
    #[error("k = {k} exceeds |C| = {sets}")]
    KTooLarge { k: usize, sets: usize },
    #[error("part count must be at least 1")]
    NoParts,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("edge {0}-{1} lies inside one part")]
    IntraPartEdge(Vertex, Vertex),
    #[error("the clique reduction needs k >= 2, got k = {0}")]
    TooFewParts(usize),
}

/// `<S, C, k>`: elements of `S` are `0..set_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    set_size: usize,
    collection: Vec<BTreeSet<usize>>,
    k: usize,
}

impl HittingSetInstance {
    pub fn new(set_size: usize, collection: Vec<BTreeSet<usize>>, k: usize) -> Result<Self, InstanceError> {
        for (i, c) in collection.iter().enumerate() {
            if c.is_empty() {
                return Err(InstanceError::EmptySet(i));
            }
            if let Some(&element) = c.iter().find(|&&e| e >= set_size) {
                return Err(InstanceError::ElementOutOfRange { element, set_size });
            }
        }
        if k > collection.len() {
            return Err(InstanceError::KTooLarge {
                k,
                sets: collection.len(),
            });
        }
        Ok(Self {
            set_size,
            collection,
            k,
        })
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn collection(&self) -> &[BTreeSet<usize>] {
        &self.collection
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_hitting_set(&self, candidate: &BTreeSet<usize>) -> bool {
        self.collection.iter().all(|c| !c.is_disjoint(candidate))
    }
}

/// Vertex `index` of part `part`, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub part: usize,
    pub index: usize,
}

impl Vertex {
    pub fn new(part: usize, index: usize) -> Self {
        Self { part, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.part, self.index)
    }
}

/// A `k`-partite graph whose parts all have `n` vertices. Edges are stored
/// with the lower part first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedGraph {
    k: usize,
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl PartitionedGraph {
    pub fn new(k: usize, n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, InstanceError> {
        if k == 0 {
            return Err(InstanceError::NoParts);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w.part >= k || w.index >= n {
                    return Err(InstanceError::VertexOutOfRange(w));
                }
            }
            if u.part == v.part {
                return Err(InstanceError::IntraPartEdge(u, v));
            }
            set.insert(if u.part < v.part { (u, v) } else { (v, u) });
        }
        Ok(Self { k, n, edges: set })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let key = if u.part < v.part { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// All vertices in lexicographic `(part, index)` order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.k).flat_map(move |part| (0..self.n).map(move |index| Vertex::new(part, index)))
    }

    /// A copy of the graph without the given edge.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Self {
        let mut g = self.clone();
        g.edges.remove(&(u, v));
        g.edges.remove(&(v, u));
        g
    }
}

/// A generated planning instance, its plan-length bound, and labels
/// describing the gadget role of every variable and action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: SasInstance,
    pub k_prime: usize,
    /// One label per variable, in index order.
    pub variables: Vec<String>,
    /// `(action name, role)` in action order.
    pub trace: Vec<(String, String)>,
}

impl ReductionOutput {
    /// The instance in `.sas` format with the bound and trace as comments.
    pub fn to_sas_text(&self) -> String {
        let mut comments = vec![format!("k' = {}", self.k_prime)];
        comments.extend(self.variables.iter().enumerate().map(|(i, l)| format!("var {i} {l}")));
        comments.extend(self.trace.iter().map(|(name, role)| format!("action {name} {role}")));
        format::serialize_sas_with_comments(&self.instance, &comments)
    }
}

/// Name, role, preconditions, effects.
type GadgetAction = (String, String, Vec<(usize, u32)>, Vec<(usize, u32)>);

struct Builder {
    variables: Vec<String>,
    actions: Vec<GadgetAction>,
}

impl Builder {
    fn var(&mut self, label: String) -> usize {
        self.variables.push(label);
        self.variables.len() - 1
    }

    fn action(&mut self, name: String, role: String, pre: Vec<(usize, u32)>, eff: Vec<(usize, u32)>) {
        self.actions.push((name, role, pre, eff));
    }

    fn finish(self, goal: Vec<(usize, u32)>, k_prime: usize) -> ReductionOutput {
        let n = self.variables.len();
        let mut trace = Vec::with_capacity(self.actions.len());
        let mut actions = Vec::with_capacity(self.actions.len());
        for (name, role, pre, eff) in self.actions {
            actions.push(
                Action::new(name.clone(), PartialState::from_pairs(n, pre), PartialState::from_pairs(n, eff))
                    .expect("gadget actions have matching lengths"),
            );
            trace.push((name, role));
        }
        let instance = SasInstance::new(
            DomainSpec::new(2).expect("binary domain"),
            State::new(vec![0; n]),
            PartialState::from_pairs(n, goal),
            actions,
        )
        .expect("reduction output is well-formed");
        ReductionOutput {
            instance,
            k_prime,
            variables: self.variables,
            trace,
        }
    }
}

pub fn hitting_set_to_planning(hs: &HittingSetInstance) -> ReductionOutput {
    let mut b = Builder {
        variables: Vec::new(),
        actions: Vec::new(),
    };
    let vars: Vec<usize> = (0..hs.collection.len()).map(|c| b.var(format!("set:{c}"))).collect();
    for e in 0..hs.set_size {
        let eff = hs
            .collection
            .iter()
            .zip(&vars)
            .filter(|(c, _)| c.contains(&e))
            .map(|(_, &v)| (v, 1))
            .collect();
        b.action(format!("pick:{e}"), format!("element {e}"), Vec::new(), eff);
    }
    let goal = vars.iter().map(|&v| (v, 1)).collect();
    b.finish(goal, hs.k)
}

/// `7 * C(k, 2) + k`.
pub fn clique_plan_bound(k: usize) -> usize {
    7 * (k * k.saturating_sub(1) / 2) + k
}

pub fn partitioned_clique_to_planning(g: &PartitionedGraph) -> Result<ReductionOutput, InstanceError> {
    let k = g.k;
    if k < 2 {
        return Err(InstanceError::TooFewParts(k));
    }
    let others = |i: usize| (0..k).filter(move |&j| j != i);
    // Dense position of a vertex and of the pair (i, j), j in J_i.
    let vpos = |v: Vertex| v.part * g.n + v.index;
    let jidx = |i: usize, j: usize| if j < i { j } else { j - 1 };
    let jpos = |i: usize, j: usize| i * (k - 1) + jidx(i, j);

    let mut b = Builder {
        variables: Vec::new(),
        actions: Vec::new(),
    };
    let edge_vars: Vec<usize> = g
        .edges
        .iter()
        .map(|(u, v)| b.var(format!("edge:{u}:{v}")))
        .collect();
    let mut vertex_vars = Vec::with_capacity(k * g.n * (k - 1));
    for v in g.vertices() {
        for j in others(v.part) {
            vertex_vars.push(b.var(format!("vert:{v}:{j}")));
        }
    }
    let x_vj = |v: Vertex, j: usize| vertex_vars[vpos(v) * (k - 1) + jidx(v.part, j)];
    let mut check_vars = Vec::with_capacity(k * (k - 1));
    for i in 0..k {
        for j in others(i) {
            check_vars.push(b.var(format!("chk:{i}:{j}")));
        }
    }
    let clean_vars: Vec<usize> = g.vertices().map(|v| b.var(format!("clean:{v}"))).collect();

    // Group 1: select an edge.
    for ((u, v), &xe) in g.edges.iter().zip(&edge_vars) {
        b.action(format!("sel:{u}:{v}"), format!("A1 select edge {u}:{v}"), vec![], vec![(xe, 1)]);
    }
    // Group 2: a selected edge marks both endpoints towards the other part.
    for ((u, v), &xe) in g.edges.iter().zip(&edge_vars) {
        b.action(
            format!("mark:{u}:{v}/{}", u.part),
            format!("A2 edge {u}:{v} sets vert:{u}:{}", v.part),
            vec![(xe, 1)],
            vec![(x_vj(*u, v.part), 1)],
        );
        b.action(
            format!("mark:{u}:{v}/{}", v.part),
            format!("A2 edge {u}:{v} sets vert:{v}:{}", u.part),
            vec![(xe, 1)],
            vec![(x_vj(*v, u.part), 1)],
        );
    }
    // Group 3: a marked vertex satisfies the checking variable of its part.
    for v in g.vertices() {
        for j in others(v.part) {
            b.action(
                format!("check:{v}:{j}"),
                format!("A3 vert:{v}:{j} sets chk:{}:{j}", v.part),
                vec![(x_vj(v, j), 1)],
                vec![(check_vars[jpos(v.part, j)], 1)],
            );
        }
    }
    // Group 4: enable the cleaner of a vertex.
    for v in g.vertices() {
        b.action(
            format!("cleaner:{v}"),
            format!("A4 enable cleaner of {v}"),
            vec![],
            vec![(clean_vars[vpos(v)], 1)],
        );
    }
    // Group 5: reset a vertex variable once its cleaner is enabled.
    for v in g.vertices() {
        for j in others(v.part) {
            b.action(
                format!("reset:{v}:{j}"),
                format!("A5 reset vert:{v}:{j}"),
                vec![(clean_vars[vpos(v)], 1)],
                vec![(x_vj(v, j), 0)],
            );
        }
    }

    let mut goal: Vec<(usize, u32)> = check_vars.iter().map(|&x| (x, 1)).collect();
    goal.extend(vertex_vars.iter().map(|&x| (x, 0)));
    Ok(b.finish(goal, clique_plan_bound(k)))
}

/// A reduction source paired with its solver.
#[derive(Debug, Clone, Copy)]
pub enum ReductionSource<'a> {
    HittingSet(&'a HittingSetInstance),
    Clique(&'a PartitionedGraph),
}

/// Whether the brute-force source solver and the bounded-plan oracle give
/// the same yes/no answer.
pub fn reduction_roundtrip_check(source: ReductionSource<'_>, output: &ReductionOutput) -> Result<bool, OracleError> {
    let source_yes = match source {
        ReductionSource::HittingSet(hs) => oracle::brute_force_hitting_set(hs)?.is_some(),
        ReductionSource::Clique(g) => oracle::brute_force_partitioned_clique(g)?.is_some(),
    };
    let plan_yes = oracle::bfs_bounded_plan_with(&output.instance, output.k_prime, &BfsConfig::unbounded())?
        .plan
        .is_some();
    Ok(source_yes == plan_yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::restrictions::check_restrictions;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn hitting_set_shape() {
        let hs = HittingSetInstance::new(3, vec![set(&[0, 1]), set(&[1, 2])], 1).unwrap();
        let out = hitting_set_to_planning(&hs);
        assert_eq!(out.instance.num_vars(), 2);
        assert_eq!(out.instance.actions().len(), 3);
        assert_eq!(out.k_prime, 1);
        let a1 = out.instance.action(1);
        assert_eq!(a1.eff(), &PartialState::new(vec![Some(1), Some(1)]));
        assert_eq!(a1.preconditions(), &[]);
        let prof = check_restrictions(&out.instance);
        assert!(prof.b && prof.s);
        assert_eq!(prof.m_p, 0);
    }

    #[test]
    fn hitting_set_validation() {
        assert_eq!(
            HittingSetInstance::new(2, vec![set(&[])], 0),
            Err(InstanceError::EmptySet(0))
        );
        assert_eq!(
            HittingSetInstance::new(2, vec![set(&[2])], 0),
            Err(InstanceError::ElementOutOfRange { element: 2, set_size: 2 })
        );
        assert_eq!(
            HittingSetInstance::new(2, vec![set(&[0])], 2),
            Err(InstanceError::KTooLarge { k: 2, sets: 1 })
        );
        let empty = HittingSetInstance::new(0, vec![], 0).unwrap();
        assert_eq!(hitting_set_to_planning(&empty).instance.num_vars(), 0);
    }

    #[test]
    fn clique_counts() {
        let g = PartitionedGraph::new(2, 1, [(Vertex::new(0, 0), Vertex::new(1, 0))]).unwrap();
        let out = partitioned_clique_to_planning(&g).unwrap();
        assert_eq!(out.instance.num_vars(), 7);
        assert_eq!(out.instance.actions().len(), 9);
        assert_eq!(out.k_prime, 9);
        let prof = check_restrictions(&out.instance);
        assert!(prof.u && prof.b && prof.s);
        assert!(prof.m_p <= 1);
        assert_eq!(prof.m_e, 1);
    }

    #[test]
    fn clique_general_counts() {
        // k = 3, n = 2 with a handful of edges.
        let e = |a: (usize, usize), b: (usize, usize)| (Vertex::new(a.0, a.1), Vertex::new(b.0, b.1));
        let g = PartitionedGraph::new(3, 2, [e((0, 0), (1, 1)), e((1, 0), (2, 1)), e((2, 0), (0, 1)), e((0, 0), (2, 0))])
            .unwrap();
        let (k, nv, ne) = (3, 6, 4);
        let out = partitioned_clique_to_planning(&g).unwrap();
        assert_eq!(out.instance.num_vars(), ne + nv * (k - 1) + k * (k - 1) + nv);
        assert_eq!(out.instance.actions().len(), 3 * ne + nv * (k - 1) + nv + nv * (k - 1));
        assert_eq!(out.k_prime, 24);
        // Layout: edge block first, clean-up block last.
        assert!(out.variables[0].starts_with("edge:"));
        assert!(out.variables.last().unwrap().starts_with("clean:"));
        // Every group-3 action sets the checking variable of its own part.
        for (name, action) in out.trace.iter().map(|(n, _)| n).zip(out.instance.actions()) {
            assert_eq!(name, action.name());
            if name.starts_with("check:") {
                let (var, _) = action.effects()[0];
                assert!(out.variables[var].starts_with("chk:"));
            }
        }
    }

    #[test]
    fn clique_parameter_error() {
        let g = PartitionedGraph::new(1, 3, []).unwrap();
        assert_eq!(partitioned_clique_to_planning(&g), Err(InstanceError::TooFewParts(1)));
    }

    #[test]
    fn graph_validation() {
        let v = Vertex::new;
        assert!(matches!(
            PartitionedGraph::new(2, 1, [(v(0, 0), v(0, 0))]),
            Err(InstanceError::IntraPartEdge(..))
        ));
        assert!(matches!(
            PartitionedGraph::new(2, 1, [(v(0, 0), v(2, 0))]),
            Err(InstanceError::VertexOutOfRange(_))
        ));
        let g = PartitionedGraph::new(2, 2, [(v(1, 1), v(0, 0))]).unwrap();
        assert!(g.has_edge(v(0, 0), v(1, 1)));
        assert!(g.edges().contains(&(v(0, 0), v(1, 1))));
    }
}
