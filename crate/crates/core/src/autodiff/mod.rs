//! Minimal reverse-mode automatic differentiation on dense tensors.
//!
//! A [`Tape`] is an append-only list of nodes holding `ndarray` values plus
//! the backward rule that maps an output cotangent to parent cotangents.
//! Backward walks the tape in reverse insertion order, which is a reverse
//! topological order by construction.
//!
//! The tape is generic over [`Scalar`], so the same graph code runs in
//! `f32`/`f64` and in [`crate::scalar::Dual`] numbers. Running a forward and
//! backward pass over dual scalars yields exact mixed second derivatives
//! (forward-over-reverse), which the WGAN-GP trainer uses for the parameter
//! gradient of the gradient-penalty term.

mod conv;
mod ops;

pub use conv::{conv2d_fwd, conv2d_grad_input, conv2d_grad_weight, same_pad};
pub use ops::CropRect;

use ndarray::ArrayD;

use crate::scalar::Scalar;

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(pub(crate) usize);

/// Backward rule of one operation.
///
/// `grad` is the cotangent of the node output; `inputs` are the parent
/// values, `output` the node's own value. Implementations return one
/// optional cotangent per parent and may skip parents whose `needs` flag is
/// false.
pub(crate) trait Vjp<S: Scalar> {
    fn vjp(
        &self,
        grad: &ArrayD<S>,
        inputs: &[&ArrayD<S>],
        output: &ArrayD<S>,
        needs: &[bool],
    ) -> Vec<Option<ArrayD<S>>>;
}

struct Node<S: Scalar> {
    value: ArrayD<S>,
    parents: Vec<usize>,
    op: Option<Box<dyn Vjp<S>>>,
    needs_grad: bool,
}

/// Dynamic computation tape.
pub struct Tape<S: Scalar> {
    nodes: Vec<Node<S>>,
}

impl<S: Scalar> Default for Tape<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Tape<S> {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    /// Number of nodes recorded so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Insert a differentiable leaf (parameters, inputs under analysis).
    pub fn leaf(&mut self, value: ArrayD<S>, requires_grad: bool) -> Var {
        self.push(value, Vec::new(), None, requires_grad)
    }

    /// Insert a constant; gradients never flow into it.
    pub fn constant(&mut self, value: ArrayD<S>) -> Var {
        self.leaf(value, false)
    }

    pub fn value(&self, v: Var) -> &ArrayD<S> {
        &self.nodes[v.0].value
    }

    pub(crate) fn push(
        &mut self,
        value: ArrayD<S>,
        parents: Vec<usize>,
        op: Option<Box<dyn Vjp<S>>>,
        leaf_requires_grad: bool,
    ) -> Var {
        let needs_grad = if op.is_none() {
            leaf_requires_grad
        } else {
            parents.iter().any(|&p| self.nodes[p].needs_grad)
        };
        self.nodes.push(Node {
            value,
            parents,
            op,
            needs_grad,
        });
        Var(self.nodes.len() - 1)
    }

    /// Reverse pass from a scalar root. Returns cotangents for every node
    /// reached; unreachable or grad-free nodes have none.
    pub fn backward(&self, root: Var) -> Grads<S> {
        let node = &self.nodes[root.0];
        assert_eq!(node.value.len(), 1, "backward root must be scalar");
        let mut g: Vec<Option<ArrayD<S>>> = (0..self.nodes.len()).map(|_| None).collect();
        g[root.0] = Some(ArrayD::ones(node.value.raw_dim()));

        for id in (0..=root.0).rev() {
            let node = &self.nodes[id];
            let Some(op) = node.op.as_ref() else { continue };
            if !node.needs_grad {
                continue;
            }
            let Some(gout) = g[id].take() else { continue };
            let inputs: Vec<&ArrayD<S>> =
                node.parents.iter().map(|&p| &self.nodes[p].value).collect();
            let needs: Vec<bool> = node
                .parents
                .iter()
                .map(|&p| self.nodes[p].needs_grad)
                .collect();
            let contribs = op.vjp(&gout, &inputs, &node.value, &needs);
            debug_assert_eq!(contribs.len(), node.parents.len());
            g[id] = Some(gout);
            for (contrib, &p) in contribs.into_iter().zip(node.parents.iter()) {
                let Some(c) = contrib else { continue };
                match &mut g[p] {
                    Some(acc) => *acc += &c,
                    slot => *slot = Some(c),
                }
            }
        }
        Grads { g }
    }
}

/// Result of a backward pass.
pub struct Grads<S: Scalar> {
    g: Vec<Option<ArrayD<S>>>,
}

impl<S: Scalar> Grads<S> {
    /// Cotangent of `v`, if any gradient reached it.
    pub fn wrt(&self, v: Var) -> Option<&ArrayD<S>> {
        self.g.get(v.0).and_then(|o| o.as_ref())
    }

    pub fn take(&mut self, v: Var) -> Option<ArrayD<S>> {
        self.g.get_mut(v.0).and_then(|o| o.take())
    }
}
