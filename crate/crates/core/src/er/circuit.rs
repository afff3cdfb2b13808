//! Boolean circuits with fan-in at most two, and their extension axioms.

use std::collections::BTreeSet;

use super::{ExtAxiom, ExtensionBlock};
use crate::syntax::{Lit, Var, VarAlloc};

/// A reference to a node, possibly negated. Nodes `0..inputs` are the
/// circuit inputs; node `inputs + g` is gate `g`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeLit {
    pub node: usize,
    pub negated: bool,
}

impl NodeLit {
    pub fn pos(node: usize) -> NodeLit {
        NodeLit { node, negated: false }
    }
}

impl std::ops::Not for NodeLit {
    type Output = NodeLit;
    fn not(self) -> NodeLit {
        NodeLit {
            node: self.node,
            negated: !self.negated,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GateOp {
    And(NodeLit, NodeLit),
    /// Copy of a (possibly negated) node; a NOT gate is an alias of the negation.
    Alias(NodeLit),
    Const(bool),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitDesc {
    pub inputs: usize,
    pub gates: Vec<GateOp>,
    pub outputs: Vec<NodeLit>,
    /// The distinguished output, when there is one.
    pub out: Option<NodeLit>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit has {expected} inputs but {given} variables were supplied")]
    Arity { expected: usize, given: usize },
    #[error("gate {0} refers to a later node")]
    Cyclic(usize),
}

/// A circuit instantiated on concrete variables.
#[derive(Clone, Debug)]
pub struct CircuitInstance {
    pub block: ExtensionBlock,
    /// Literal carrying the value of each node.
    pub nodes: Vec<Lit>,
    pub out: Option<Lit>,
}

impl CircuitInstance {
    pub fn lit(&self, n: NodeLit) -> Lit {
        let l = self.nodes[n.node];
        if n.negated {
            !l
        } else {
            l
        }
    }
}

impl CircuitDesc {
    pub fn new(inputs: usize) -> CircuitDesc {
        CircuitDesc {
            inputs,
            ..CircuitDesc::default()
        }
    }

    pub fn input(&self, i: usize) -> NodeLit {
        assert!(i < self.inputs);
        NodeLit::pos(i)
    }

    fn push(&mut self, op: GateOp) -> NodeLit {
        self.gates.push(op);
        NodeLit::pos(self.inputs + self.gates.len() - 1)
    }

    pub fn and(&mut self, a: NodeLit, b: NodeLit) -> NodeLit {
        self.push(GateOp::And(a, b))
    }

    /// a ∨ b as the negation of ¬a ∧ ¬b; no extra gate.
    pub fn or(&mut self, a: NodeLit, b: NodeLit) -> NodeLit {
        !self.and(!a, !b)
    }

    pub fn alias(&mut self, a: NodeLit) -> NodeLit {
        self.push(GateOp::Alias(a))
    }

    pub fn constant(&mut self, b: bool) -> NodeLit {
        self.push(GateOp::Const(b))
    }

    /// a ↔ b
    pub fn iff(&mut self, a: NodeLit, b: NodeLit) -> NodeLit {
        let both = self.and(a, b);
        let neither = self.and(!a, !b);
        self.or(both, neither)
    }

    pub fn xor(&mut self, a: NodeLit, b: NodeLit) -> NodeLit {
        !self.iff(a, b)
    }

    /// if s then a else b
    pub fn mux(&mut self, s: NodeLit, a: NodeLit, b: NodeLit) -> NodeLit {
        let left = self.and(s, a);
        let right = self.and(!s, b);
        self.or(left, right)
    }

    pub fn and_all(&mut self, xs: &[NodeLit]) -> NodeLit {
        match xs {
            [] => self.constant(true),
            [x] => *x,
            _ => {
                let mut acc = self.and(xs[0], xs[1]);
                for &x in &xs[2..] {
                    acc = self.and(acc, x);
                }
                acc
            }
        }
    }

    pub fn or_all(&mut self, xs: &[NodeLit]) -> NodeLit {
        let negs: Vec<NodeLit> = xs.iter().map(|&x| !x).collect();
        !self.and_all(&negs)
    }

    pub fn node_count(&self) -> usize {
        self.inputs + self.gates.len()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (g, op) in self.gates.iter().enumerate() {
            let here = self.inputs + g;
            let ok = match op {
                GateOp::And(a, b) => a.node < here && b.node < here,
                GateOp::Alias(a) => a.node < here,
                GateOp::Const(_) => true,
            };
            if !ok {
                return Err(CircuitError::Cyclic(g));
            }
        }
        Ok(())
    }

    /// Values of every node.
    pub fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.inputs);
        let mut vals = inputs.to_vec();
        for op in &self.gates {
            let get = |n: NodeLit| vals[n.node] ^ n.negated;
            let v = match *op {
                GateOp::And(a, b) => get(a) && get(b),
                GateOp::Alias(a) => get(a),
                GateOp::Const(b) => b,
            };
            vals.push(v);
        }
        vals
    }

    pub fn eval_lit(vals: &[bool], n: NodeLit) -> bool {
        vals[n.node] ^ n.negated
    }
}

/// One extension axiom per gate, in gate order, on fresh variables.
pub fn circuit_axioms(
    c: &CircuitDesc,
    inputs: &[Var],
    alloc: &mut VarAlloc,
) -> Result<CircuitInstance, CircuitError> {
    if inputs.len() != c.inputs {
        return Err(CircuitError::Arity {
            expected: c.inputs,
            given: inputs.len(),
        });
    }
    c.validate()?;
    let mut nodes: Vec<Lit> = inputs.iter().map(|&v| Lit::Pos(v)).collect();
    let mut axioms = Vec::with_capacity(c.gates.len());
    for op in &c.gates {
        let y = alloc.fresh();
        let l = |n: NodeLit| if n.negated { !nodes[n.node] } else { nodes[n.node] };
        axioms.push(match *op {
            GateOp::And(a, b) => ExtAxiom::And { y, u: l(a), v: l(b) },
            GateOp::Alias(a) => ExtAxiom::Alias { y, u: l(a) },
            GateOp::Const(value) => ExtAxiom::Const { y, value },
        });
        nodes.push(Lit::Pos(y));
    }
    let block = ExtensionBlock {
        base: inputs.iter().copied().collect::<BTreeSet<_>>(),
        axioms,
    };
    let out = c.out.map(|n| if n.negated { !nodes[n.node] } else { nodes[n.node] });
    Ok(CircuitInstance { block, nodes, out })
}
