//! Small named frames used throughout the crate and its tests.

use super::Frame;

fn reflexive_closure_of(n: usize, pairs: &[(usize, usize)], labels: &[&str]) -> Frame {
    Frame::new(n, pairs.iter().copied().chain((0..n).map(|i| (i, i))))
        .and_then(|f| f.with_labels(labels.iter().copied()))
        .expect("builtin frame is well formed")
        .reflexive_transitive_closure()
}

/// The two-pronged fork: `u ≤ v`, `u ≤ w`.
pub fn fork() -> Frame {
    reflexive_closure_of(3, &[(0, 1), (0, 2)], &["u", "v", "w"])
}

/// The W-shaped frame: `u ≤ t`, `u ≤ v`, `u' ≤ v`, `u' ≤ w`.
///
/// Points are ordered `u, u', t, v, w`.
pub fn w_frame() -> Frame {
    reflexive_closure_of(
        5,
        &[(0, 2), (0, 3), (1, 3), (1, 4)],
        &["u", "u'", "t", "v", "w"],
    )
}

/// One reflexive point; its complex algebra is the two-element algebra.
pub fn single_point() -> Frame {
    reflexive_closure_of(1, &[], &["x"])
}

/// Two minimal points below one maximal point.
pub fn cofork() -> Frame {
    reflexive_closure_of(3, &[(0, 2), (1, 2)], &["a", "b", "c"])
}

/// Chain `c0 < c1 < … < c(n-1)`.
pub fn chain(n: usize) -> Frame {
    let labels: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    reflexive_closure_of(n, &pairs, &refs)
}

/// `n` pairwise unrelated reflexive points.
pub fn antichain(n: usize) -> Frame {
    let labels: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    reflexive_closure_of(n, &[], &refs)
}

/// A root `r` below `m` maximal points `p0 … p(m-1)`.
pub fn prongs(m: usize) -> Frame {
    let mut labels = vec!["r".to_string()];
    labels.extend((0..m).map(|i| format!("p{i}")));
    let pairs: Vec<(usize, usize)> = (1..=m).map(|i| (0, i)).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    reflexive_closure_of(m + 1, &pairs, &refs)
}
