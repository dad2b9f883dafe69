/// Ordered tuple of positive parts `i_1, …, i_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// All compositions of `total` into exactly `count` positive parts, in
/// lexicographic order. There are `binomial(total-1, count-1)` of them.
pub fn compositions(total: usize, count: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    if count == 0 {
        if total == 0 {
            out.push(Composition { parts: Vec::new() });
        }
        return out;
    }
    let mut buf = Vec::with_capacity(count);
    fill(total, count, &mut buf, &mut out);
    out
}

fn fill(remaining: usize, slots: usize, buf: &mut Vec<usize>, out: &mut Vec<Composition>) {
    if slots == 1 {
        if remaining >= 1 {
            buf.push(remaining);
            out.push(Composition { parts: buf.clone() });
            buf.pop();
        }
        return;
    }
    // leave at least one unit for each later slot
    for first in 1..=remaining.saturating_sub(slots - 1) {
        buf.push(first);
        fill(remaining - first, slots - 1, buf, out);
        buf.pop();
    }
}
