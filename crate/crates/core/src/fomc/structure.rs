use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};

use crate::sas::{Action, PartialState, SasInstance, Value};

/// Name of the no-op action added by [`add_dummy`].
pub const DUMMY_NAME: &str = "$dummy";

/// Returns `inst` extended with an action that has no preconditions and no
/// effects. Instances that already contain such an action are returned as is.
pub fn add_dummy(inst: &SasInstance) -> SasInstance {
    if inst
        .actions()
        .iter()
        .any(|a| a.preconditions().is_empty() && a.effects().is_empty())
    {
        return inst.clone();
    }
    let mut name = DUMMY_NAME.to_string();
    while inst.action_index(&name).is_some() {
        name.push('\'');
    }
    let n = inst.num_vars();
    let dummy = Action::new(name, PartialState::undefined(n), PartialState::undefined(n)).expect("matching lengths");
    inst.with_action(dummy).expect("fresh name")
}

/// An element of the universe `V ∪ A ∪ D ∪ {u}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    Var(usize),
    Action(usize),
    Value(Value),
    Undefined,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Var(v) => write!(f, "v{v}"),
            Element::Action(a) => write!(f, "a{a}"),
            Element::Value(x) => write!(f, "{x}"),
            Element::Undefined => write!(f, "_"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    /// Tuples of universe indices.
    pub tuples: HashSet<Vec<usize>>,
}

impl Relation {
    fn new(arity: usize) -> Self {
        Self {
            arity,
            tuples: HashSet::new(),
        }
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// The finite structure of a planning instance. The universe lists variables,
/// then actions, then domain values, then the undefined marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    universe: Vec<Element>,
    relations: BTreeMap<String, Relation>,
    num_vars: usize,
    num_actions: usize,
}

impl RelationalStructure {
    pub fn universe(&self) -> &[Element] {
        &self.universe
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn var_index(&self, var: usize) -> usize {
        var
    }

    pub fn action_index(&self, action: usize) -> usize {
        self.num_vars + action
    }

    pub fn value_index(&self, value: Value) -> usize {
        self.num_vars + self.num_actions + value as usize
    }

    pub fn undefined_index(&self) -> usize {
        self.universe.len() - 1
    }

    /// Relation listings, one `name(arity): tuple ...` line per relation in
    /// name order, tuples sorted.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let universe: Vec<String> = self.universe.iter().map(Element::to_string).collect();
        let _ = writeln!(out, "universe ({}): {}", universe.len(), universe.join(" "));
        for (name, rel) in &self.relations {
            let mut tuples: Vec<&Vec<usize>> = rel.tuples.iter().collect();
            tuples.sort();
            let _ = write!(out, "{name}/{}:", rel.arity);
            for t in tuples {
                let items: Vec<String> = t.iter().map(|&i| self.universe[i].to_string()).collect();
                let _ = write!(out, " ({})", items.join(","));
            }
            out.push('\n');
        }
        out
    }
}

pub fn build_structure(inst: &SasInstance) -> RelationalStructure {
    let n = inst.num_vars();
    let actions = inst.actions();
    let d = inst.domain().size();
    let mut universe: Vec<Element> = (0..n).map(Element::Var).collect();
    universe.extend((0..actions.len()).map(Element::Action));
    universe.extend((0..d).map(Element::Value));
    universe.push(Element::Undefined);

    let mut s = RelationalStructure {
        universe,
        relations: BTreeMap::new(),
        num_vars: n,
        num_actions: actions.len(),
    };
    let mut rels: BTreeMap<String, Relation> = [
        ("var", 1),
        ("act", 1),
        ("dom", 1),
        ("init", 2),
        ("goalv", 2),
        ("pre", 2),
        ("post", 2),
        ("prev", 3),
        ("postv", 3),
    ]
    .into_iter()
    .map(|(name, arity)| (name.to_string(), Relation::new(arity)))
    .collect();
    let mut add = |name: &str, tuple: Vec<usize>| {
        rels.get_mut(name).expect("declared relation").tuples.insert(tuple);
    };

    for v in 0..n {
        add("var", vec![s.var_index(v)]);
        add("init", vec![s.var_index(v), s.value_index(inst.init().get(v))]);
    }
    for x in 0..d {
        add("dom", vec![s.value_index(x)]);
    }
    add("dom", vec![s.undefined_index()]);
    for &(v, x) in inst.goal_entries() {
        add("goalv", vec![s.var_index(v), s.value_index(x)]);
    }
    for (i, action) in actions.iter().enumerate() {
        let a = s.action_index(i);
        add("act", vec![a]);
        for &(v, x) in action.preconditions() {
            add("pre", vec![a, s.var_index(v)]);
            add("prev", vec![a, s.var_index(v), s.value_index(x)]);
        }
        for &(v, x) in action.effects() {
            add("post", vec![a, s.var_index(v)]);
            add("postv", vec![a, s.var_index(v), s.value_index(x)]);
        }
    }
    s.relations = rels;
    s
}
