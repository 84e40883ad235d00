//! Builtin group corpus and the embedded golden tables the binary verifies
//! itself against.

/// Group expressions covering soluble, unsoluble, odd-order, abelian and
/// nonabelian cases across orders 2..=360.
pub const BUILTIN_CORPUS: [&str; 40] = [
    "C(2)",
    "C(3)",
    "C(4)",
    "C(2) x C(2)",
    "C(5)",
    "S(3)",
    "C(6)",
    "C(7)",
    "D(8)",
    "Q8",
    "C(2) x C(2) x C(2)",
    "C(9)",
    "C(3) x C(3)",
    "D(10)",
    "A(4)",
    "C(2) x S(3)",
    "D(12)",
    "C(15)",
    "C(2) x D(8)",
    "Gn(8)",
    "C(4) x C(4)",
    // C_7 : C_3, the smallest nonabelian group of odd order
    "gens[(0 1 2 3 4 5 6),(1 2 4)(3 6 5)]@7",
    "S(4)",
    "Gn(9)",
    "C(5) x C(5)",
    // C_5 : C_4, the affine group of the line over five points
    "gens[(0 1 2 3 4),(1 2 4 3)]@5",
    "C(3) x S(3)",
    "H([2,3],2)",
    "S(3) x S(3)",
    "D(8) x S(3)",
    "C(2) x C(2) x S(3)",
    "S(4) x C(2)",
    // C_3 wr C_3, an order-81 group with two-generated Sylow subgroup
    "gens[(0 1 2),(3 4 5),(0 3 6)(1 4 7)(2 5 8)]@9",
    "A(5)",
    "S(5)",
    "A(5) x C(2)",
    "A(6)",
    "A(5) x C(2) x C(2)",
    "H([2,5],1)",
    "Gn(11)",
];

/// The exceptional small permutation groups: each entry is
/// (degree, order, expression, e numerator, e denominator).
pub const SMALL_DEGREE_EXCEPTIONS: [(u32, usize, &str, i64, i64); 8] = [
    (3, 6, "S(3)", 29, 10),
    (4, 4, "C(2) x C(2)", 10, 3),
    (4, 8, "D(8)", 10, 3),
    (5, 12, "C(2) x S(3)", 1181, 330),
    (6, 8, "C(2) x C(2) x C(2)", 94, 21),
    (6, 16, "C(2) x D(8)", 94, 21),
    (7, 24, "C(2) x C(2) x S(3)", 241789, 53130),
    (7, 48, "D(8) x S(3)", 241789, 53130),
];

/// Exact e(G_n) for the extremal permutation family, n = 2..=15.
pub const EXTREMAL_FAMILY_TABLE: [(u32, i64, i64); 14] = [
    (2, 2, 1),
    (3, 29, 10),
    (4, 10, 3),
    (5, 1181, 330),
    (6, 94, 21),
    (7, 241789, 53130),
    (8, 194, 35),
    (9, 4633553, 832370),
    (10, 7134, 1085),
    (11, 3227369181, 490265930),
    (12, 74126, 9765),
    (13, 6399598043131, 842767133670),
    (14, 10663922, 1240155),
    (15, 70505670417749503, 8198607229768494),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupspec::parse_group;
    use crate::perm::DEFAULT_ORDER_CAP;

    #[test]
    fn corpus_parses_with_expected_orders() {
        let mut odd = 0;
        let mut unsoluble_candidates = 0;
        for spec in BUILTIN_CORPUS {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            assert!(g.order() >= 2 && g.order() <= 400, "{spec}");
            if g.order() % 2 == 1 {
                odd += 1;
            }
            if g.order() % 60 == 0 {
                unsoluble_candidates += 1;
            }
        }
        assert!(BUILTIN_CORPUS.len() >= 25);
        assert!(odd >= 5, "need odd-order members");
        assert!(unsoluble_candidates >= 4);
    }

    #[test]
    fn exception_table_groups_exist() {
        for (degree, order, spec, _, _) in SMALL_DEGREE_EXCEPTIONS {
            let g = parse_group(spec, DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(g.order(), order, "{spec}");
            assert!(g.degree() >= degree as usize, "{spec}");
        }
    }
}
