//! Systems shared by the benchmarks.

use gkz::rational::{frac, int};
use gkz::{GkzSystem, IntMatrix};

pub fn gauss() -> GkzSystem {
    let m = IntMatrix::from_i64(&[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, -1]])
        .expect("valid matrix");
    let (a, b) = (frac(1, 2), frac(1, 3));
    let v = vec![-a.clone(), -b.clone(), int(0), int(0)];
    GkzSystem::new(m, vec![-a, -b, int(0)], v).expect("consistent system")
}

pub fn sst() -> GkzSystem {
    let m = IntMatrix::from_i64(&[
        vec![1, 1, 1, 1, 1],
        vec![-1, 1, 1, -1, 0],
        vec![-1, -1, 1, 1, 0],
    ])
    .expect("valid matrix");
    let v = [0, 0, 0, 0, 1].map(int).to_vec();
    GkzSystem::new(m, [1, 0, 0].map(int).to_vec(), v).expect("consistent system")
}
