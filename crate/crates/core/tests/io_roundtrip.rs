use std::path::Path;

use matchkit::io::{format_matrix_csv, format_permutation_csv, parse_labels, parse_matrix_csv, parse_permutation_csv};
use matchkit::linalg::DenseMatrix;
use matchkit::Permutation;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
    ]
}

proptest! {
    #[test]
    fn matrices_round_trip_bit_exactly((rows, cols, data) in (1usize..12, 1usize..12)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(finite(), r * c))))
    {
        let m = DenseMatrix::from_vec(rows, cols, data).unwrap();
        let back = parse_matrix_csv(&format_matrix_csv(&m), Path::new("m")).unwrap();
        prop_assert_eq!(back.shape(), m.shape());
        for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn permutations_round_trip(map in (1usize..200).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let pi = Permutation::new(map).unwrap();
        let back = parse_permutation_csv(&format_permutation_csv(&pi), Path::new("p")).unwrap();
        prop_assert_eq!(back, pi);
    }

    #[test]
    fn labels_round_trip(labels in prop::collection::vec("[^\r\n]{1,16}", 1..40)) {
        let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
        prop_assert_eq!(parse_labels(&text, Path::new("l")).unwrap(), labels);
    }
}
