use sheafwc_core::blowup::Blowup;
use sheafwc_core::invariants;
use sheafwc_core::{DivisorClass, Polarization, QExponent, Rational, Surface, Unrefined, WallCrossing};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

// Coefficients of prod (1 - q^n)^(-k) through q^len-1.
fn coloured_partitions(k: usize, len: usize) -> Vec<i64> {
    let mut p = vec![0i64; len];
    p[0] = 1;
    for _ in 0..k {
        for n in 1..len {
            for m in n..len {
                p[m] += p[m - n];
            }
        }
    }
    p
}

// Hurwitz class number from reduced forms of discriminant -n.
fn hurwitz_reduced(n: i64) -> Rational {
    if n == 0 {
        return int(-1) / int(12);
    }
    if n % 4 == 1 || n % 4 == 2 {
        return int(0);
    }
    let mut h = int(0);
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += if a == c && b == 0 {
                int(1) / int(2)
            } else if a == b && b == c {
                int(1) / int(3)
            } else {
                int(1)
            };
        }
        a += 1;
    }
    h
}

#[test]
fn rank_one_is_a_coloured_partition_count() {
    let wc = WallCrossing::<Unrefined>::new();
    for (surface, colours, base) in [(Surface::RuledP2Tilde, 4, -4), (Surface::P2, 3, -3)] {
        let h = wc.h1(surface, QExponent(base + 24 * 7)).unwrap();
        let want = coloured_partitions(colours, 8);
        for (n, w) in want.iter().enumerate() {
            assert_eq!(h.series.coefficient(QExponent(base + 24 * n as i64)).unwrap(), int(*w));
        }
    }
}

#[test]
fn rank_two_on_p2_through_the_blowup() {
    // sum_c2 chi q^(c2 - 1/4) = 3 sum_n H(4n - 1) q^(n - 1/4) / eta^6
    let steps = 6;
    let p = coloured_partitions(6, steps + 1);
    let mut want = vec![int(0); steps + 1];
    for n in 1..=steps {
        for m in 0..=steps - n {
            want[n + m] += hurwitz_reduced(4 * n as i64 - 1) * int(3 * p[m]);
        }
    }
    let cut = QExponent(-12 + 24 * steps as i64);
    let wc = WallCrossing::<Unrefined>::new();
    let up = wc.h2_at(DivisorClass::ruled(-1, -1), Polarization::J10, cut).unwrap();
    let down = Blowup::<Unrefined>::to_p2(&up).unwrap();
    assert!(down.warnings.is_empty());
    assert_eq!(down.series.c1, DivisorClass::p2(-1));
    for (k, w) in want.iter().enumerate().skip(1) {
        let e = QExponent(-12 + 24 * k as i64);
        if e > down.series.series.cutoff() {
            break;
        }
        assert_eq!(down.series.series.coefficient(e).unwrap(), *w, "c2 = {k}");
        assert!(w.is_integer());
    }
}

#[test]
fn betti_rows_are_consistent() {
    let h = invariants::p2_rank3_refined(invariants::p2_rank3_exponent(5)).unwrap();
    let table = invariants::betti_table(&h, &[2, 3, 4, 5]).unwrap();
    for row in &table.rows {
        assert_eq!(row.dim as i64, invariants::p2_rank3_dim(row.c2));
        assert_eq!(row.half[0], 1);
        assert!(row.half.windows(2).all(|w| w[0] <= w[1]), "unimodal: {:?}", row.half);
        let full = row.full();
        assert_eq!(full.len() as i64, 2 * row.dim as i64 + 1);
        assert!(full.iter().eq(full.iter().rev()));
        assert_eq!(full.iter().sum::<u64>(), row.chi);
    }
    let csv = table.to_csv();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == table.width() + 2));
}

#[test]
fn euler_numbers_are_integral_off_walls() {
    let wc = WallCrossing::<Unrefined>::new();
    let cut = QExponent(24 * 5);
    for (m, n) in [(3, 2), (4, 1), (1, 4)] {
        let j = Polarization::new(m, n).unwrap();
        let h = wc.h3(j, cut).unwrap();
        assert!(h.series.terms().all(|(_, c)| c.is_integer()), "J = ({m},{n})");
        let h = wc.h2_at(DivisorClass::ruled(-1, -1), j, cut).unwrap();
        assert!(h.series.terms().all(|(_, c)| c.is_integer()), "J = ({m},{n})");
    }
}

#[test]
fn hurwitz_agrees_with_reduced_forms() {
    for n in 0..200 {
        assert_eq!(sheafwc_core::modular::hurwitz(n).unwrap(), hurwitz_reduced(n), "H({n})");
    }
}
