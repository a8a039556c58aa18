//! Iterative Tarjan over an adjacency-list graph restricted to a node mask.

/// Strongly connected components of the subgraph induced by `active`.
///
/// Returns `(component_of, components)`. `component_of[v]` is `None` for inactive nodes.
/// Components are listed in reverse topological order: if an edge goes from component `a` to
/// a different component `b`, then `b` appears before `a`.
pub fn tarjan<F, I>(n: usize, active: &[bool], successors: F) -> (Vec<Option<usize>>, Vec<Vec<usize>>)
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut component_of = vec![None; n];
    let mut components = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if !active[root] || index[root] != UNVISITED {
            continue;
        }
        // Each frame holds a node and the successors not yet examined.
        let mut call: Vec<(usize, Vec<usize>)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, successors(root).filter(|&w| active[w]).collect::<Vec<_>>().into_iter().rev().collect()));

        while let Some((v, pending)) = call.last_mut() {
            let v = *v;
            if let Some(w) = pending.pop() {
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let succ: Vec<usize> = successors(w).filter(|&x| active[x]).collect();
                    call.push((w, succ.into_iter().rev().collect()));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _)) = call.last() {
                low[*parent] = low[*parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = Some(id);
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }
    (component_of, components)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(adj: &[Vec<usize>]) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
        let active = vec![true; adj.len()];
        tarjan(adj.len(), &active, |v| adj[v].iter().copied())
    }

    #[test]
    fn finds_cycles_and_orders_components() {
        // 0 -> 1 -> 2 -> 0, 2 -> 3, 3 -> 4 -> 3
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3]];
        let (of, comps) = run(&adj);
        assert_eq!(of[0], of[1]);
        assert_eq!(of[1], of[2]);
        assert_eq!(of[3], of[4]);
        assert_ne!(of[0], of[3]);
        // sink component first
        assert_eq!(comps[0], vec![3, 4]);
        assert_eq!(comps[1], vec![0, 1, 2]);
    }

    #[test]
    fn respects_mask() {
        let adj = [vec![1], vec![0]];
        let (of, comps) = tarjan(2, &[true, false], |v| adj[v].iter().copied());
        assert_eq!(of, vec![Some(0), None]);
        assert_eq!(comps, vec![vec![0]]);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|v| if v + 1 < n { vec![v + 1] } else { vec![0] }).collect();
        let (_, comps) = run(&adj);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), n);
    }
}
