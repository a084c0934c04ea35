use std::fmt;

use super::FomcError;

/// Quantifier-free formula over relation atoms whose arguments are variable
/// names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matrix {
    Atom { relation: String, args: Vec<String> },
    Not(Box<Matrix>),
    And(Vec<Matrix>),
    Or(Vec<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn atom(relation: &str, args: &[&str]) -> Self {
        Matrix::Atom {
            relation: relation.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Matrix) -> Self {
        Matrix::Not(Box::new(inner))
    }

    pub fn implies(lhs: Matrix, rhs: Matrix) -> Self {
        Matrix::Implies(Box::new(lhs), Box::new(rhs))
    }

    /// Node count of the fully expanded tree.
    pub fn size(&self) -> usize {
        match self {
            Matrix::Atom { .. } => 1,
            Matrix::Not(m) => 1 + m.size(),
            Matrix::And(ms) | Matrix::Or(ms) => 1 + ms.iter().map(Matrix::size).sum::<usize>(),
            Matrix::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a [String])) {
        match self {
            Matrix::Atom { relation, args } => f(relation, args),
            Matrix::Not(m) => m.visit_atoms(f),
            Matrix::And(ms) | Matrix::Or(ms) => ms.iter().for_each(|m| m.visit_atoms(f)),
            Matrix::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matrix::Atom { relation, args } => {
                write!(f, "({relation}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Matrix::Not(m) => write!(f, "(not {m})"),
            Matrix::And(ms) | Matrix::Or(ms) => {
                write!(f, "({}", if matches!(self, Matrix::And(_)) { "and" } else { "or" })?;
                for m in ms {
                    write!(f, " {m}")?;
                }
                write!(f, ")")
            }
            Matrix::Implies(a, b) => write!(f, "(implies {a} {b})"),
        }
    }
}

/// A prenex formula `∃ exists ∀ forall . matrix`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub exists: Vec<String>,
    pub forall: Vec<String>,
    pub matrix: Matrix,
}

impl Formula {
    pub fn size(&self) -> usize {
        self.exists.len() + self.forall.len() + self.matrix.size()
    }

    /// Existential block, then at most `universals` universal variables,
    /// distinct names, and every atom argument bound by the prefix.
    pub fn is_sigma2(&self, universals: usize) -> bool {
        if self.forall.len() > universals {
            return false;
        }
        let mut bound: Vec<&str> = self.exists.iter().chain(&self.forall).map(String::as_str).collect();
        let total = bound.len();
        bound.sort_unstable();
        bound.dedup();
        if bound.len() != total {
            return false;
        }
        let mut closed = true;
        self.matrix
            .visit_atoms(&mut |_, args| closed &= args.iter().all(|a| bound.binary_search(&a.as_str()).is_ok()));
        closed
    }

    /// The Σ₂,₂ shape: all existentials first and exactly two universals.
    pub fn is_sigma22(&self) -> bool {
        self.forall.len() == 2 && self.is_sigma2(2)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(exists ({}) (forall ({}) {}))", self.exists.join(" "), self.forall.join(" "), self.matrix)
    }
}

fn action_var(i: usize) -> String {
    format!("a{i}")
}

/// Holds iff executing the actions bound to `action_vars[..i]` from the
/// initial state leaves variable `v` at value `x`:
/// `fvalue(0) = init(v, x)` and
/// `fvalue(i) = (fvalue(i-1) ∧ ¬post(a_i, v)) ∨ postv(a_i, v, x)`.
pub fn build_fvalue(i: usize, action_vars: &[String]) -> Matrix {
    (0..i).fold(Matrix::atom("init", &["v", "x"]), |prev, step| {
        let a = action_vars[step].as_str();
        Matrix::Or(vec![
            Matrix::And(vec![prev, Matrix::not(Matrix::atom("post", &[a, "v"]))]),
            Matrix::atom("postv", &[a, "v", "x"]),
        ])
    })
}

/// The sentence that holds in the structure of an instance (with a no-op
/// action) iff the instance has a plan of length at most `k`.
///
/// It only mentions relation symbols, so it depends on `k` alone. `k = 0` is
/// rejected: the existential prefix needs at least one action variable.
pub fn build_phi(k: usize) -> Result<Formula, FomcError> {
    if k == 0 {
        return Err(FomcError::ZeroBound);
    }
    let actions: Vec<String> = (1..=k).map(action_var).collect();
    let are_actions = Matrix::And(actions.iter().map(|a| Matrix::atom("act", &[a])).collect());
    // Preconditions of a_i hold after a_1 .. a_{i-1}.
    let check_pre_all = Matrix::And(
        (1..=k)
            .map(|i| {
                Matrix::implies(
                    Matrix::atom("prev", &[&actions[i - 1], "v", "x"]),
                    build_fvalue(i - 1, &actions),
                )
            })
            .collect(),
    );
    let check_goal = Matrix::implies(Matrix::atom("goalv", &["v", "x"]), build_fvalue(k, &actions));
    let matrix = Matrix::And(vec![
        are_actions,
        Matrix::implies(
            Matrix::And(vec![Matrix::atom("var", &["v"]), Matrix::atom("dom", &["x"])]),
            Matrix::And(vec![check_pre_all, check_goal]),
        ),
    ]);
    Ok(Formula {
        exists: actions,
        forall: vec!["v".into(), "x".into()],
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (1..=k).map(action_var).collect()
    }

    #[test]
    fn fvalue_unrolling() {
        assert_eq!(build_fvalue(0, &names(2)).to_string(), "(init v x)");
        assert_eq!(
            build_fvalue(1, &names(2)).to_string(),
            "(or (and (init v x) (not (post a1 v))) (postv a1 v x))"
        );
        let sizes: Vec<usize> = (0..5).map(|i| build_fvalue(i, &names(4)).size()).collect();
        let steps: Vec<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|&s| s == steps[0]));
    }

    #[test]
    fn phi_shape() {
        assert_eq!(build_phi(0), Err(FomcError::ZeroBound));
        for k in 1..=4 {
            let phi = build_phi(k).unwrap();
            assert!(phi.is_sigma22());
            assert_eq!(phi.exists.len(), k);
        }
        let phi2 = build_phi(2).unwrap().to_string();
        assert!(phi2.contains("(implies (prev a1 v x) (init v x))"));
        assert!(phi2.contains("(implies (prev a2 v x) (or (and (init v x) (not (post a1 v))) (postv a1 v x)))"));
        assert!(phi2.starts_with("(exists (a1 a2) (forall (v x) "));
    }

    #[test]
    fn shape_checks_reject_bad_prefixes() {
        let mut phi = build_phi(1).unwrap();
        phi.forall.push("y".into());
        assert!(!phi.is_sigma22());
        let mut unbound = build_phi(1).unwrap();
        unbound.exists.clear();
        assert!(!unbound.is_sigma22());
    }
}
