use fgv::diagnostics::{classify_type, FgvType};
use fgv::dirichlet::{convolve, invert, lemma1_check};
use fgv::{Exact, Scalar, Sequence};
use proptest::prelude::*;

fn exact_seq(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 1..=max_len)
}

fn to_seq(v: &[(i64, i64)], label: &str) -> Sequence {
    Sequence::exact(v.iter().map(|&(p, q)| Exact::from_ratio(p as i128, q as i128)).collect(), label).unwrap()
}

fn same(a: &Sequence, b: &Sequence) -> bool {
    a.len() == b.len() && (1..=a.len()).all(|k| a.get_exact(k) == b.get_exact(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn convolution_commutes_and_associates(x in exact_seq(512), y in exact_seq(512), z in exact_seq(512)) {
        let n = x.len().min(y.len()).min(z.len());
        let (x, y, z) = (to_seq(&x, "x"), to_seq(&y, "y"), to_seq(&z, "z"));
        prop_assert!(same(&convolve(&x, &y, n).unwrap(), &convolve(&y, &x, n).unwrap()));
        let left = convolve(&convolve(&x, &y, n).unwrap(), &z, n).unwrap();
        let right = convolve(&x, &convolve(&y, &z, n).unwrap(), n).unwrap();
        prop_assert!(same(&left, &right));
    }

    #[test]
    fn inversion_is_an_involution(mut c in exact_seq(512), lead in prop::bool::ANY) {
        c[0] = (if lead { 1 } else { -1 }, 1);
        let n = c.len();
        let c = to_seq(&c, "c");
        let back = invert(&invert(&c, n).unwrap(), n).unwrap();
        prop_assert!(same(&back, &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn floor_sum_identity(x in exact_seq(1000), z in exact_seq(1000), seed in 0usize..1000) {
        let t = 1 + seed % x.len().min(z.len());
        let r = lemma1_check(&to_seq(&x, "x"), &to_seq(&z, "z"), t).unwrap();
        prop_assert!(r.exact && r.equal, "t = {t}: {} vs {}", r.lhs, r.rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classify_matches_construction(
        alpha in 0.2f64..0.9,
        amp in 0.5f64..5.0,
        delta in 0.15f64..0.4,
        freq in 1.0f64..3.0,
        kind in 0usize..3,
    ) {
        let n = 1 << 16;
        let v: Vec<f64> = (1..=n)
            .map(|k| {
                let x = k as f64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * amp * match kind {
                    0 => x.powf(-alpha) * (1.0 + 0.5 * (freq * x).cos()),
                    1 => x.powf(delta - alpha),
                    _ => x.powf(-alpha - delta),
                }
            })
            .collect();
        let want = [FgvType::Type1, FgvType::Type2, FgvType::Type3][kind];
        let got = classify_type(&Sequence::float(v, "synthetic").unwrap(), alpha).unwrap();
        prop_assert_eq!(got, want);
    }
}
