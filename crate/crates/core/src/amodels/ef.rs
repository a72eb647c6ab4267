//! Ehrenfeucht–Fraïssé games on finite digraphs.
//!
//! Two pointed digraphs agree on every formula of quantifier depth `d`
//! over `{∈, =}` exactly when the duplicator survives the `d`-round game
//! starting from the given tuples.

/// Adjacency matrix; `adj[x][y]` means `x ∈ y`.
pub type Adj = [Vec<bool>];

/// Whether `xs ↦ ys` is a partial isomorphism.
pub fn partial_iso(a: &Adj, b: &Adj, xs: &[usize], ys: &[usize]) -> bool {
    for p in 0..xs.len() {
        for q in 0..xs.len() {
            if (xs[p] == xs[q]) != (ys[p] == ys[q]) || a[xs[p]][xs[q]] != b[ys[p]][ys[q]] {
                return false;
            }
        }
    }
    true
}

/// Duplicator wins the `depth`-round game from `(xs, ys)`.
pub fn ef_equivalent(
    a: &Adj,
    b: &Adj,
    xs: &mut Vec<usize>,
    ys: &mut Vec<usize>,
    depth: usize,
) -> bool {
    if !partial_iso(a, b, xs, ys) {
        return false;
    }
    if depth == 0 {
        return true;
    }
    let forth = (0..a.len()).all(|x| {
        xs.push(x);
        let ok = (0..b.len()).any(|y| {
            ys.push(y);
            let r = ef_equivalent(a, b, xs, ys, depth - 1);
            ys.pop();
            r
        });
        xs.pop();
        ok
    });
    forth
        && (0..b.len()).all(|y| {
            ys.push(y);
            let ok = (0..a.len()).any(|x| {
                xs.push(x);
                let r = ef_equivalent(a, b, xs, ys, depth - 1);
                xs.pop();
                r
            });
            ys.pop();
            ok
        })
}

/// The first tuple of length `max(depth, 2)` over the source on which
/// `f` fails the `depth`-round game, or `None` if `f` is elementary to
/// that depth.
pub fn elementarity_witness(a: &Adj, b: &Adj, f: &[usize], depth: usize) -> Option<Vec<usize>> {
    let len = depth.max(2);
    let n = a.len();
    if n == 0 {
        return (!ef_equivalent(a, b, &mut Vec::new(), &mut Vec::new(), depth)).then(Vec::new);
    }
    let mut tuple = vec![0usize; len];
    loop {
        let mut xs = tuple.clone();
        let mut ys: Vec<usize> = tuple.iter().map(|&x| f[x]).collect();
        if !ef_equivalent(a, b, &mut xs, &mut ys, depth) {
            return Some(tuple);
        }
        let mut k = len;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}
