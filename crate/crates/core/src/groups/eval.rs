use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::words::{Var, WordExpr};

use super::group::{Elem, FiniteGroup, IDENTITY};

/// Value of `w` when each variable takes the element given by `assignment`.
pub fn evaluate(w: &WordExpr, group: &FiniteGroup, assignment: &BTreeMap<Var, Elem>) -> Result<Elem> {
    Ok(match w {
        WordExpr::Var(v) => {
            let &e = assignment.get(v).ok_or(Error::UnassignedVariable(*v))?;
            if e >= group.order() {
                return Err(Error::BadIndex { index: e, order: group.order() });
            }
            e
        }
        WordExpr::Inverse(a) => group.inv(evaluate(a, group, assignment)?),
        WordExpr::Product(parts) => {
            let mut acc = IDENTITY;
            for p in parts {
                acc = group.mul(acc, evaluate(p, group, assignment)?);
            }
            acc
        }
        WordExpr::Commutator(a, b) => group.comm(evaluate(a, group, assignment)?, evaluate(b, group, assignment)?),
        WordExpr::Power(a, n) => group.pow(evaluate(a, group, assignment)?, *n),
    })
}

#[derive(Clone, Debug)]
enum Node {
    Slot(usize),
    Inverse(Box<Node>),
    Product(Vec<Node>),
    Commutator(Box<Node>, Box<Node>),
    Power(Box<Node>, i64),
}

/// A word with its variables resolved to argument slots, for evaluating the
/// same word over many tuples. Slot `i` is the `i`-th variable in sorted
/// order (`x` variables by index, then `y` variables).
#[derive(Clone, Debug)]
pub struct CompiledWord {
    vars: Vec<Var>,
    root: Node,
}

impl CompiledWord {
    pub fn new(w: &WordExpr) -> CompiledWord {
        let vars = w.variables();
        let root = compile(w, &vars);
        CompiledWord { vars, root }
    }

    pub fn variables(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Evaluates at `args`, which must have one element per variable.
    pub fn eval(&self, group: &FiniteGroup, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.vars.len());
        run(&self.root, group, args)
    }
}

fn compile(w: &WordExpr, vars: &[Var]) -> Node {
    match w {
        WordExpr::Var(v) => Node::Slot(vars.binary_search(v).expect("variable list is complete")),
        WordExpr::Inverse(a) => Node::Inverse(Box::new(compile(a, vars))),
        WordExpr::Product(parts) => Node::Product(parts.iter().map(|p| compile(p, vars)).collect()),
        WordExpr::Commutator(a, b) => Node::Commutator(Box::new(compile(a, vars)), Box::new(compile(b, vars))),
        WordExpr::Power(a, n) => Node::Power(Box::new(compile(a, vars)), *n),
    }
}

fn run(node: &Node, g: &FiniteGroup, args: &[Elem]) -> Elem {
    match node {
        Node::Slot(i) => args[*i],
        Node::Inverse(a) => g.inv(run(a, g, args)),
        Node::Product(parts) => parts.iter().fold(IDENTITY, |acc, p| g.mul(acc, run(p, g, args))),
        Node::Commutator(a, b) => g.comm(run(a, g, args), run(b, g, args)),
        Node::Power(a, n) => g.pow(run(a, g, args), *n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, DEFAULT_ORDER_CAP};
    use crate::words::{delta, gamma, parse_word};

    #[test]
    fn commutator_at_identity_and_quaternions() {
        let q = builtin_group("quat:8", DEFAULT_ORDER_CAP).unwrap();
        let w = gamma(2).to_expr();
        let at = |a, b| BTreeMap::from([(Var::x(1), a), (Var::x(2), b)]);
        assert_eq!(evaluate(&w, &q, &at(IDENTITY, IDENTITY)).unwrap(), IDENTITY);
        let (i, j) = (q.find_named("i").unwrap(), q.find_named("j").unwrap());
        assert_eq!(q.name(evaluate(&w, &q, &at(i, j)).unwrap()), "-1");
        assert_eq!(evaluate(&delta(0).to_expr(), &q, &BTreeMap::from([(Var::x(1), 5)])).unwrap(), 5);
    }

    #[test]
    fn missing_variable() {
        let q = builtin_group("quat:8", DEFAULT_ORDER_CAP).unwrap();
        let err = evaluate(&gamma(2).to_expr(), &q, &BTreeMap::from([(Var::x(1), 1)])).unwrap_err();
        assert_eq!(err, Error::UnassignedVariable(Var::x(2)));
    }

    #[test]
    fn compiled_matches_direct() {
        let s4 = builtin_group("sym:4", DEFAULT_ORDER_CAP).unwrap();
        let w = parse_word("x2^-3 [x1, y1]^2 (x3 x1)^-1").unwrap();
        let c = CompiledWord::new(&w);
        assert_eq!(c.variables(), [Var::x(1), Var::x(2), Var::x(3), Var::y(1)]);
        for seed in 0..200usize {
            let args = [seed % 24, (seed * 7) % 24, (seed * 13 + 5) % 24, (seed * 17 + 3) % 24];
            let assignment = c.variables().iter().copied().zip(args).collect();
            assert_eq!(c.eval(&s4, &args), evaluate(&w, &s4, &assignment).unwrap());
        }
    }
}
