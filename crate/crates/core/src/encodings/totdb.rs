//! Arena of totalizer nodes shared by the totalizer and the DPW encoding.
//!
//! Output `o_v` of a node means "at least `v` of the node's (scaled) inputs
//! are true". Outputs are created and defined lazily, one value and one
//! direction at a time, so only the cone of influence of requested outputs
//! is ever encoded.

use crate::{
    encodings::CollectClauses,
    instances::ManageVars,
    types::{Clause, Lit},
};

pub(crate) type NodeId = usize;

/// Connection to a child node. The child's values are divided by `divisor`
/// (rounding down) before being summed in the parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct NodeCon {
    pub id: NodeId,
    pub divisor: usize,
}

impl NodeCon {
    pub fn full(id: NodeId) -> Self {
        NodeCon { id, divisor: 1 }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Leaf(Lit),
    Internal(Internal),
}

#[derive(Clone, Debug)]
pub(crate) struct Internal {
    left: NodeCon,
    right: NodeCon,
    max_val: usize,
    outs: Vec<Option<Lit>>,
    ub_def: Vec<bool>,
    lb_def: Vec<bool>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct TotDb {
    nodes: Vec<Node>,
}

impl TotDb {
    pub fn leaf(&mut self, lit: Lit) -> NodeId {
        self.nodes.push(Node::Leaf(lit));
        self.nodes.len() - 1
    }

    pub fn internal(&mut self, left: NodeCon, right: NodeCon) -> NodeId {
        let max_val = self.con_len(left) + self.con_len(right);
        self.nodes.push(Node::Internal(Internal {
            left,
            right,
            max_val,
            outs: vec![None; max_val],
            ub_def: vec![false; max_val],
            lb_def: vec![false; max_val],
        }));
        self.nodes.len() - 1
    }

    /// Builds a balanced tree over `lits`, splitting each sequence in half
    pub fn tree(&mut self, lits: &[Lit]) -> Option<NodeId> {
        match lits.len() {
            0 => None,
            1 => Some(self.leaf(lits[0])),
            n => {
                let left = self.tree(&lits[..n / 2]).unwrap();
                let right = self.tree(&lits[n / 2..]).unwrap();
                Some(self.internal(NodeCon::full(left), NodeCon::full(right)))
            }
        }
    }

    pub fn max_val(&self, id: NodeId) -> usize {
        match &self.nodes[id] {
            Node::Leaf(_) => 1,
            Node::Internal(node) => node.max_val,
        }
    }

    pub fn con_len(&self, con: NodeCon) -> usize {
        self.max_val(con.id) / con.divisor
    }

    /// The output literal for `val`, if it exists
    pub fn out(&self, id: NodeId, val: usize) -> Option<Lit> {
        debug_assert!(val >= 1);
        match &self.nodes[id] {
            Node::Leaf(lit) => (val == 1).then_some(*lit),
            Node::Internal(node) => node.outs.get(val - 1).copied().flatten(),
        }
    }

    pub fn ub_defined(&self, id: NodeId, val: usize) -> bool {
        match &self.nodes[id] {
            Node::Leaf(_) => val == 1,
            Node::Internal(node) => node.ub_def.get(val - 1).copied().unwrap_or(false),
        }
    }

    pub fn lb_defined(&self, id: NodeId, val: usize) -> bool {
        match &self.nodes[id] {
            Node::Leaf(_) => val == 1,
            Node::Internal(node) => node.lb_def.get(val - 1).copied().unwrap_or(false),
        }
    }

    fn get_or_new_out(&mut self, id: NodeId, val: usize, vm: &mut dyn ManageVars) -> Lit {
        match &mut self.nodes[id] {
            Node::Leaf(lit) => *lit,
            Node::Internal(node) => *node.outs[val - 1].get_or_insert_with(|| vm.new_var().pos_lit()),
        }
    }

    fn children(&self, id: NodeId) -> Option<(NodeCon, NodeCon)> {
        match &self.nodes[id] {
            Node::Leaf(_) => None,
            Node::Internal(node) => Some((node.left, node.right)),
        }
    }

    /// Defines output `val` of the connection in the upper-bounding direction
    /// (`count >= val` implies the output) and returns it
    pub fn define_ub_con<Col: CollectClauses>(
        &mut self,
        con: NodeCon,
        val: usize,
        col: &mut Col,
        vm: &mut dyn ManageVars,
    ) -> Lit {
        self.define_ub(con.id, val * con.divisor, col, vm)
    }

    pub fn define_ub<Col: CollectClauses>(
        &mut self,
        id: NodeId,
        val: usize,
        col: &mut Col,
        vm: &mut dyn ManageVars,
    ) -> Lit {
        debug_assert!(val >= 1 && val <= self.max_val(id));
        let Some((left, right)) = self.children(id) else {
            return self.get_or_new_out(id, val, vm);
        };
        if self.ub_defined(id, val) {
            return self.out(id, val).unwrap();
        }
        let lmax = self.con_len(left);
        let rmax = self.con_len(right);
        let a_lo = val.saturating_sub(rmax);
        let a_hi = val.min(lmax);
        let mut lefts = Vec::with_capacity(a_hi + 1 - a_lo);
        for a in a_lo.max(1)..=a_hi {
            lefts.push(self.define_ub_con(left, a, col, vm));
        }
        let mut rights = Vec::with_capacity(a_hi + 1 - a_lo);
        for a in a_lo..=a_hi {
            let b = val - a;
            rights.push((b > 0).then(|| self.define_ub_con(right, b, col, vm)));
        }
        let out = self.get_or_new_out(id, val, vm);
        for (i, a) in (a_lo..=a_hi).enumerate() {
            let mut cl = Clause::with_capacity(3);
            if a > 0 {
                cl.add(!lefts[a - a_lo.max(1)]);
            }
            if let Some(r) = rights[i] {
                cl.add(!r);
            }
            cl.add(out);
            col.add_clause(cl);
        }
        if let Node::Internal(node) = &mut self.nodes[id] {
            node.ub_def[val - 1] = true;
        }
        out
    }

    /// Defines output `val` of the connection in the lower-bounding direction
    /// (the output implies `count >= val`) and returns it
    pub fn define_lb_con<Col: CollectClauses>(
        &mut self,
        con: NodeCon,
        val: usize,
        col: &mut Col,
        vm: &mut dyn ManageVars,
    ) -> Lit {
        self.define_lb(con.id, val * con.divisor, col, vm)
    }

    pub fn define_lb<Col: CollectClauses>(
        &mut self,
        id: NodeId,
        val: usize,
        col: &mut Col,
        vm: &mut dyn ManageVars,
    ) -> Lit {
        debug_assert!(val >= 1 && val <= self.max_val(id));
        let Some((left, right)) = self.children(id) else {
            return self.get_or_new_out(id, val, vm);
        };
        if self.lb_defined(id, val) {
            return self.out(id, val).unwrap();
        }
        let lmax = self.con_len(left);
        let rmax = self.con_len(right);
        // splits a + b = val - 1 of "at most" counts; one side must exceed its share
        let a_lo = (val - 1).saturating_sub(rmax);
        let a_hi = (val - 1).min(lmax);
        let mut lefts = Vec::with_capacity(a_hi + 1 - a_lo);
        let mut rights = Vec::with_capacity(a_hi + 1 - a_lo);
        for a in a_lo..=a_hi {
            lefts.push((a < lmax).then(|| self.define_lb_con(left, a + 1, col, vm)));
        }
        for a in a_lo..=a_hi {
            let b = val - 1 - a;
            rights.push((b < rmax).then(|| self.define_lb_con(right, b + 1, col, vm)));
        }
        let out = self.get_or_new_out(id, val, vm);
        for i in 0..lefts.len() {
            let mut cl = Clause::with_capacity(3);
            cl.add(!out);
            cl.extend(lefts[i]);
            cl.extend(rights[i]);
            col.add_clause(cl);
        }
        if let Node::Internal(node) = &mut self.nodes[id] {
            node.lb_def[val - 1] = true;
        }
        out
    }
}
