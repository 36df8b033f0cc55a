/// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
///
/// `adj[l]` lists the right vertices adjacent to left vertex `l`, tried in order, so
/// the result is deterministic. Returns `mate[l] = r` when every left vertex is
/// matched and the sides have equal size, `None` otherwise.
pub fn perfect_matching(n_right: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    if adj.len() != n_right {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    for l in 0..adj.len() {
        let mut seen = vec![false; n_right];
        if !augment(l, adj, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut mate = vec![0; adj.len()];
    for (r, o) in owner.iter().enumerate() {
        mate[o.expect("perfect")] = r;
    }
    Some(mate)
}

fn augment(l: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].map_or(true, |o| augment(o, adj, owner, seen)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_the_only_perfect_matching() {
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(perfect_matching(2, &adj), Some(vec![1, 0]));
    }

    #[test]
    fn rejects_hall_violation() {
        let adj = vec![vec![0], vec![0]];
        assert_eq!(perfect_matching(2, &adj), None);
    }

    #[test]
    fn unequal_sides() {
        assert_eq!(perfect_matching(1, &[vec![0], vec![0]]), None);
        assert_eq!(perfect_matching(0, &[]), Some(vec![]));
    }
}
