//! SAS+ data model and execution semantics.
//!
//! Variables are dense indices `0..n`, domain values are integers `0..d`, and
//! the undefined marker is `None` in a [`PartialState`]. Total states get their
//! own type, [`State`], so that the "must be total" preconditions of the
//! semantics are carried by the type system.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// A domain value. Always `< d` for the owning instance.
pub type Value = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SasError {
    #[error("domain size must be at least 2, got {0}")]
    DomainTooSmall(u32),
    #[error("length mismatch: expected {expected} variables, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("variable {var} has value {value}, outside the domain 0..{domain}")]
    ValueOutOfRange { var: usize, value: Value, domain: u32 },
    #[error("duplicate action name `{0}`")]
    DuplicateActionName(String),
    #[error("action index {index} out of range ({count} actions)")]
    ActionIndex { index: usize, count: usize },
}

/// Finite domain `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    size: u32,
}

impl DomainSpec {
    pub fn new(size: u32) -> Result<Self, SasError> {
        if size < 2 {
            return Err(SasError::DomainTooSmall(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, value: Value) -> bool {
        value < self.size
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        0..self.size
    }
}

/// An assignment of a value or "undefined" (`None`) to every variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialState(Vec<Option<Value>>);

impl PartialState {
    pub fn new(values: Vec<Option<Value>>) -> Self {
        Self(values)
    }

    /// The everywhere-undefined partial state over `n` variables.
    pub fn undefined(n: usize) -> Self {
        Self(vec![None; n])
    }

    /// Builds a partial state from `(variable, value)` pairs; later pairs win.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, Value)>) -> Self {
        let mut values = vec![None; n];
        for (var, value) in pairs {
            values[var] = Some(value);
        }
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> Option<Value> {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, value: Option<Value>) {
        self.0[var] = value;
    }

    pub fn values(&self) -> &[Option<Value>] {
        &self.0
    }

    /// Defined entries in variable order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, Value)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(var, value)| value.map(|x| (var, x)))
    }

    pub fn count_defined(&self) -> usize {
        self.0.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn to_total(&self) -> Option<State> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(State)
    }

    fn check_range(&self, domain: DomainSpec) -> Result<(), SasError> {
        match self.defined().find(|&(_, x)| !domain.contains(x)) {
            Some((var, value)) => Err(SasError::ValueOutOfRange {
                var,
                value,
                domain: domain.size(),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PartialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, value) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match value {
                Some(x) => write!(f, "{x}")?,
                None => write!(f, "_")?,
            }
        }
        write!(f, ")")
    }
}

/// A total state: every variable carries a domain value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct State(Vec<Value>);

impl State {
    pub fn new(values: Vec<Value>) -> Self {
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> Value {
        self.0[var]
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn to_partial(&self) -> PartialState {
        PartialState(self.0.iter().copied().map(Some).collect())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_partial().fmt(f)
    }
}

/// A ground action. The sparse lists of defined precondition and effect
/// entries are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    name: String,
    pre: PartialState,
    eff: PartialState,
    pre_list: Vec<(usize, Value)>,
    eff_list: Vec<(usize, Value)>,
}

impl Action {
    pub fn new(name: impl Into<String>, pre: PartialState, eff: PartialState) -> Result<Self, SasError> {
        if pre.len() != eff.len() {
            return Err(SasError::LengthMismatch {
                expected: pre.len(),
                found: eff.len(),
            });
        }
        let pre_list = pre.defined().collect();
        let eff_list = eff.defined().collect();
        Ok(Self {
            name: name.into(),
            pre,
            eff,
            pre_list,
            eff_list,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pre(&self) -> &PartialState {
        &self.pre
    }

    pub fn eff(&self) -> &PartialState {
        &self.eff
    }

    /// Defined precondition entries, ascending by variable.
    pub fn preconditions(&self) -> &[(usize, Value)] {
        &self.pre_list
    }

    /// Defined effect entries, ascending by variable.
    pub fn effects(&self) -> &[(usize, Value)] {
        &self.eff_list
    }
}

/// A SAS+ instance `<V, D, A, I, G>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasInstance {
    domain: DomainSpec,
    actions: Vec<Action>,
    init: State,
    goal: PartialState,
    goal_list: Vec<(usize, Value)>,
}

impl SasInstance {
    /// Checks every structural invariant: matching lengths, values inside the
    /// domain and unique action names. The variable count is taken from `init`.
    pub fn new(
        domain: DomainSpec,
        init: State,
        goal: PartialState,
        actions: Vec<Action>,
    ) -> Result<Self, SasError> {
        let n = init.len();
        if let Some((var, &value)) = init.values().iter().enumerate().find(|(_, &x)| !domain.contains(x)) {
            return Err(SasError::ValueOutOfRange {
                var,
                value,
                domain: domain.size(),
            });
        }
        check_len(n, goal.len())?;
        goal.check_range(domain)?;
        let mut names = HashSet::with_capacity(actions.len());
        for action in &actions {
            check_len(n, action.pre.len())?;
            check_len(n, action.eff.len())?;
            action.pre.check_range(domain)?;
            action.eff.check_range(domain)?;
            if !names.insert(action.name.as_str()) {
                return Err(SasError::DuplicateActionName(action.name.clone()));
            }
        }
        let goal_list = goal.defined().collect();
        Ok(Self {
            domain,
            actions,
            init,
            goal,
            goal_list,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.init.len()
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, index: usize) -> &Action {
        &self.actions[index]
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &PartialState {
        &self.goal
    }

    /// Defined goal entries, ascending by variable.
    pub fn goal_entries(&self) -> &[(usize, Value)] {
        &self.goal_list
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    /// Returns a copy of this instance with `extra` appended to the actions.
    pub fn with_action(&self, extra: Action) -> Result<Self, SasError> {
        let mut actions = self.actions.clone();
        actions.push(extra);
        Self::new(self.domain, self.init.clone(), self.goal.clone(), actions)
    }

    pub fn plan_names<'a>(&'a self, plan: &'a Plan) -> impl Iterator<Item = &'a str> + 'a {
        plan.steps().iter().map(move |&i| self.actions[i].name())
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), SasError> {
    if expected == found {
        Ok(())
    } else {
        Err(SasError::LengthMismatch { expected, found })
    }
}

/// A sequence of action indices; repetition is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Plan(Vec<usize>);

impl Plan {
    pub fn new(steps: Vec<usize>) -> Self {
        Self(steps)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<usize> for Plan {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

pub fn is_valid(state: &State, action: &Action) -> Result<bool, SasError> {
    check_len(state.len(), action.pre.len())?;
    Ok(action.preconditions().iter().all(|&(var, x)| state.get(var) == x))
}

/// Result of `action` in `state`; applicability is not checked.
pub fn apply(state: &State, action: &Action) -> Result<State, SasError> {
    check_len(state.len(), action.eff.len())?;
    let mut next = state.0.clone();
    for &(var, x) in action.effects() {
        next[var] = x;
    }
    Ok(State(next))
}

pub fn is_goal_state(state: &State, goal: &PartialState) -> Result<bool, SasError> {
    check_len(state.len(), goal.len())?;
    Ok(goal.defined().all(|(var, x)| state.get(var) == x))
}

/// Why a plan was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanFailure {
    /// Step `step` (0-based) is not valid in its predecessor state.
    Inapplicable { step: usize, action: usize },
    /// Every step applied but the final state misses the goal.
    GoalNotReached { final_state: State },
}

impl fmt::Display for PlanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanFailure::Inapplicable { step, action } => {
                write!(f, "step {} (action #{action}) is not applicable", step + 1)
            }
            PlanFailure::GoalNotReached { final_state } => {
                write!(f, "final state {final_state} is not a goal state")
            }
        }
    }
}

/// Executes `plan` from the initial state and reports the first failure.
pub fn check_plan(inst: &SasInstance, plan: &Plan) -> Result<Result<State, PlanFailure>, SasError> {
    let mut state = inst.init.clone();
    for (step, &index) in plan.steps().iter().enumerate() {
        let action = inst.actions.get(index).ok_or(SasError::ActionIndex {
            index,
            count: inst.actions.len(),
        })?;
        if !is_valid(&state, action)? {
            return Ok(Err(PlanFailure::Inapplicable { step, action: index }));
        }
        state = apply(&state, action)?;
    }
    if is_goal_state(&state, &inst.goal)? {
        Ok(Ok(state))
    } else {
        Ok(Err(PlanFailure::GoalNotReached { final_state: state }))
    }
}

pub fn validate_plan(inst: &SasInstance, plan: &Plan) -> Result<bool, SasError> {
    Ok(check_plan(inst, plan)?.is_ok())
}
