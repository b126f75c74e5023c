//! Every duality occurring in the corpus is reachable, up to a
//! dimension-preserving relabelling, from the representatives the type
//! search enumerates.

use std::collections::BTreeMap;

use fusionforge::corpus_cli::corpus;
use fusionforge::ring_core::{fp_dimensions, type_signature, RingType, INTEGER_TOL};
use fusionforge::search::enumerate_involutions;

/// Number of non-self-dual pairs in each dimension block.
fn pair_profile(dims: &[u64], dual: &[usize]) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for (i, &j) in dual.iter().enumerate() {
        if i < j {
            assert_eq!(dims[i], dims[j], "dual pair with different dimensions");
            *out.entry(dims[i]).or_insert(0) += 1;
        }
    }
    out
}

#[test]
fn corpus_dualities_are_enumerated() {
    let mut checked = 0;
    for e in corpus() {
        let RingType::Integral(ty) = type_signature(&e.ring, INTEGER_TOL).unwrap() else { continue };
        let dims: Vec<u64> = fp_dimensions(&e.ring).unwrap().iter().map(|d| d.round() as u64).collect();
        let target = pair_profile(&dims, e.ring.dual());
        let sorted = ty.dims();
        let reachable = enumerate_involutions(&ty).iter().any(|inv| pair_profile(&sorted, inv) == target);
        assert!(reachable, "{}: duality {:?} not among the representatives", e.id, e.ring.dual());
        checked += 1;
    }
    assert!(checked >= 50);
}
