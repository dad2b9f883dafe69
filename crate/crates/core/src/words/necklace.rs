use super::{BinaryWord, Letter};

/// Cyclic-equivalence class of binary words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NecklaceClass {
    /// Lexicographically least rotation (`A < B`).
    pub representative: BinaryWord,
    /// Number of distinct rotations, i.e. the smallest period of the word.
    pub orbit_size: usize,
}

/// Smallest `t` such that rotating `w` by `t` reproduces it.
pub fn smallest_period(w: &BinaryWord) -> usize {
    let p = w.len();
    (1..=p)
        .filter(|t| p % t == 0)
        .find(|&t| (0..p).all(|i| w.letters[i] == w.letters[(i + t) % p]))
        .unwrap_or(p.max(1))
}

pub fn least_rotation(w: &BinaryWord) -> BinaryWord {
    (0..w.len().max(1))
        .map(|k| w.rotate(k))
        .min()
        .unwrap_or_else(|| w.clone())
}

/// Necklaces by canonicalizing every word of the lexicographic enumeration.
pub fn necklaces_by_canonicalization(p: usize, r: usize) -> Vec<NecklaceClass> {
    super::WordStream::new(p, r)
        .filter(|w| least_rotation(w) == *w)
        .map(|w| NecklaceClass {
            orbit_size: smallest_period(&w),
            representative: w,
        })
        .collect()
}

/// Fixed-weight necklaces by the Fredricksen–Kessler–Maiorana recursion,
/// pruned on the number of `B`s. Output is in lexicographic order.
pub fn necklaces_fkm(p: usize, r: usize) -> Vec<NecklaceClass> {
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    // 1-indexed prenecklace buffer, a[0] is a sentinel.
    let mut a = vec![0u8; p + 1];
    fkm(1, 1, 0, p, r, &mut a, &mut out);
    out
}

fn fkm(t: usize, period: usize, ones: usize, p: usize, r: usize, a: &mut [u8], out: &mut Vec<NecklaceClass>) {
    if ones > r || ones + (p + 1 - t) < r {
        return;
    }
    if t > p {
        if p % period == 0 {
            let letters = a[1..=p]
                .iter()
                .map(|&x| if x == 0 { Letter::A } else { Letter::B })
                .collect();
            out.push(NecklaceClass {
                representative: BinaryWord::new(letters),
                orbit_size: period,
            });
        }
        return;
    }
    a[t] = a[t - period];
    fkm(t + 1, period, ones + a[t] as usize, p, r, a, out);
    if a[t - period] == 0 {
        a[t] = 1;
        fkm(t + 1, t, ones + 1, p, r, a, out);
        a[t] = 0;
    }
}
