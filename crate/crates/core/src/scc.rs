//! Iterative Tarjan SCC over an arbitrary node subset.

use std::collections::HashMap;

use crate::graph::NodeId;

/// Strongly connected components of the subgraph induced by `nodes`, where
/// `succ(x)` lists the successors of `x` (successors outside `nodes` are
/// ignored). Components come out in reverse topological order.
pub fn strongly_connected_components<F, I>(nodes: &[NodeId], mut succ: F) -> Vec<Vec<NodeId>>
where
    F: FnMut(NodeId) -> I,
    I: IntoIterator<Item = NodeId>,
{
    let local: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // flat adjacency: successors of i are targets[offsets[i]..offsets[i + 1]]
    let mut offsets = Vec::with_capacity(nodes.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &x in nodes {
        targets.extend(succ(x).into_iter().filter_map(|y| local.get(&y).copied()));
        offsets.push(targets.len());
    }
    let adj = |v: usize| &targets[offsets[v]..offsets[v + 1]];

    const UNSEEN: usize = usize::MAX;
    let n = nodes.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;
    // (node, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(v, pos)) = call.last() {
            if pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj(v).get(pos) {
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(nodes[w]);
                    if w == v {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }
    components
}
