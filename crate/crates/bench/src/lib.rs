//! Instance builders shared by the benchmarks.

use lyzero_core::{CouplingMatrix, HierarchySpec, ModelInstance, SpinMeasure};

pub fn chain_instance(n: usize, theta: f64) -> ModelInstance {
    ModelInstance::new(
        SpinMeasure::blume_capel(theta).unwrap(),
        CouplingMatrix::chain(n, 1.0, false).unwrap(),
        1.0,
    )
    .unwrap()
}

pub fn hierarchy(levels: usize, theta: f64) -> (ModelInstance, HierarchySpec) {
    let spec = HierarchySpec::new((0..levels).map(|m| 1.0 / (1 << m) as f64).collect()).unwrap();
    let m = ModelInstance::new(
        SpinMeasure::blume_capel(theta).unwrap(),
        CouplingMatrix::hierarchical(&spec),
        1.0,
    )
    .unwrap();
    (m, spec)
}

pub fn dense_instance(n: usize, theta: f64) -> ModelInstance {
    // deterministic pseudo-random ferromagnetic couplings
    let mut entries = vec![0.0; n * n];
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let v = next();
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    ModelInstance::new(
        SpinMeasure::blume_capel(theta).unwrap(),
        CouplingMatrix::new(n, entries).unwrap(),
        1.0,
    )
    .unwrap()
}
