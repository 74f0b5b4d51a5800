//! Independent oracles. Nothing here calls the library's linear algebra; the
//! expected values are recomputed from scratch and compared with it.

use num_bigint::BigInt;
use obembed::intlinalg::{smith_normal_form, IntMatrix};
use obembed::surface::Surface;
use obembed::{identify_known, word_action, AbstractOpenBook, TwistLetter, TwistWord};
use proptest::prelude::*;

type M2 = [[i64; 2]; 2];

fn mul2(a: M2, b: M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Trefoil monodromy on `H1(Σ_{1,1}) = Z<A, B>`, `<A, B> = 1`, twist rule
/// `x ↦ x + <x, c> c`: `T_a` fixes A and sends B to B - A; `T_b` sends A to A + B.
#[test]
fn trefoil_two_by_two() {
    let ta: M2 = [[1, -1], [0, 1]];
    let tb: M2 = [[1, 0], [1, 1]];
    let phi = mul2(ta, tb);
    assert_eq!(phi, [[0, -1], [1, 1]]);

    let mut p = [[1, 0], [0, 1]];
    for k in 1..=6 {
        p = mul2(p, phi);
        assert_eq!(p == [[1, 0], [0, 1]], k == 6, "order of Φ is exactly 6");
    }
    // |det(Φ - I)| = 1, so the closed manifold is a homology sphere.
    let det = (phi[0][0] - 1) * (phi[1][1] - 1) - phi[0][1] * phi[1][0];
    assert_eq!(det.abs(), 1);

    let ob = AbstractOpenBook::new(Surface::new(1, 1), "t(a1) t(b1)".parse().unwrap()).unwrap();
    let lib = word_action(&ob.monodromy, ob.curves()).unwrap();
    assert_eq!(lib, IntMatrix::from_rows(&[vec![0, -1], vec![1, 1]]));
    assert!(ob.closed_h1().is_trivial());
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Fraction-free (Bareiss) elimination on a copy of `m`.
fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let (mut sign, mut prev) = (1, 1i128);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `Z^rows / (column span)` as (free rank, torsion ≥ 2 ascending), from the
/// determinantal divisors `d_k = gcd of k×k minors`.
fn cokernel_by_minors(m: &[Vec<i128>], rows: usize, cols: usize) -> (usize, Vec<i128>) {
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut d = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        divisors.push(d);
    }
    let rank = divisors.len() - 1;
    let torsion = divisors.windows(2).map(|w| w[1] / w[0]).filter(|&f| f != 1).collect();
    (rows - rank, torsion)
}

fn as_pair(g: &obembed::AbelianGroup) -> (usize, Vec<i128>) {
    (g.free_rank, g.torsion.iter().map(|t| i128::try_from(t.clone()).unwrap()).collect())
}

#[test]
fn minors_oracle_on_known_matrix() {
    let m = vec![vec![2, 4], vec![6, 8]];
    assert_eq!(cokernel_by_minors(&m, 2, 2), (0, vec![2, 4]));
    let m = vec![vec![0, 0, 0]];
    assert_eq!(cokernel_by_minors(&m, 1, 3), (1, vec![]));
}

/// Holes enclosed by each standard curve of the planar page Σ_{0,n}, drawn as
/// a disk (outer boundary = component n) with holes 1..n-1.
fn enclosed_holes(n: usize, curve: &str) -> Vec<usize> {
    let (kind, index): (char, usize) = (curve.chars().next().unwrap(), curve[1..].parse().unwrap());
    match kind {
        't' if index == n => (1..n).collect(),
        't' => vec![index],
        'e' if index + 1 < n => vec![index, index + 1],
        'e' => (1..n - 1).collect(),
        _ => panic!("not a planar curve: {curve}"),
    }
}

/// Surgery presentation of the planar open book: 0-framed unknots for the
/// holes, and one copy of each twist curve per unit of exponent with framing
/// `-sign(e)` relative to the page.
fn planar_linking_matrix(n: usize, word: &TwistWord) -> Vec<Vec<i128>> {
    let mut twists = Vec::new();
    for l in word.letters() {
        for _ in 0..l.exponent.unsigned_abs() {
            twists.push((enclosed_holes(n, &l.curve), -l.exponent.signum() as i128));
        }
    }
    let size = n - 1 + twists.len();
    let mut m = vec![vec![0i128; size]; size];
    for (k, (holes, framing)) in twists.iter().enumerate() {
        let c = n - 1 + k;
        m[c][c] = *framing;
        for &h in holes {
            m[c][h - 1] = 1;
            m[h - 1][c] = 1;
        }
    }
    m
}

#[test]
fn lens_spaces_match_surgery() {
    for k in 0..=6i64 {
        let word = if k == 0 { TwistWord::empty() } else { TwistWord::letter("t1", k) };
        let m = planar_linking_matrix(2, &word);
        let oracle = cokernel_by_minors(&m, m.len(), m.len());
        let ob = AbstractOpenBook::new(Surface::annulus(), word).unwrap();
        assert_eq!(as_pair(&ob.closed_h1()), oracle, "k = {k}");
    }
    // π1(L(k,1)) = Z/k is abelian, so H1 = Z/k; the catalog agrees.
    for k in 2..=20i64 {
        let ob = AbstractOpenBook::new(Surface::annulus(), TwistWord::letter("t1", k)).unwrap();
        assert_eq!(as_pair(&ob.closed_h1()), (0, vec![k as i128]));
        assert_eq!(identify_known(&ob).as_deref(), Some(format!("L({k},1)").as_str()));
    }
}

fn planar_curves(n: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..=n).map(|j| format!("t{j}")).collect();
    if n >= 3 {
        out.extend((1..n).map(|j| format!("e{j}")));
    }
    out
}

fn arb_planar() -> impl Strategy<Value = (usize, TwistWord)> {
    (2usize..=4).prop_flat_map(|n| {
        let curves = planar_curves(n);
        prop::collection::vec((any::<prop::sample::Index>(), prop_oneof![Just(-1i64), Just(1), Just(2)]), 0..=3)
            .prop_map(move |raw| {
                let letters = raw
                    .into_iter()
                    .map(|(i, e)| TwistLetter::new(curves[i.index(curves.len())].clone(), e))
                    .collect();
                (n, TwistWord::new(letters))
            })
    })
}

#[test]
fn pants_examples_match_surgery() {
    for word in ["t(t1) t(t2) t(t3)", "t(t1)^2 t(t2)^2", "t(e1) t(e2)^-1 t(t3)", ""] {
        let w: TwistWord = word.parse().unwrap();
        let m = planar_linking_matrix(3, &w);
        let oracle = cokernel_by_minors(&m, m.len(), m.len());
        let ob = AbstractOpenBook::new(Surface::new(0, 3), w).unwrap();
        assert_eq!(as_pair(&ob.closed_h1()), oracle, "{word}");
    }
}

fn to_matrix(rows: usize, cols: usize, data: &[i64]) -> (IntMatrix, Vec<Vec<i128>>) {
    let plain: Vec<Vec<i128>> = (0..rows).map(|i| (0..cols).map(|j| data[i * cols + j] as i128).collect()).collect();
    let m = if rows == 0 {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(&plain.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>())
    };
    (m, plain)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn planar_pages_match_surgery((n, word) in arb_planar()) {
        let m = planar_linking_matrix(n, &word);
        let oracle = cokernel_by_minors(&m, m.len(), m.len());
        let ob = AbstractOpenBook::new(Surface::new(0, n), word).unwrap();
        prop_assert_eq!(as_pair(&ob.closed_h1()), oracle);
    }

    #[test]
    fn snf_matches_determinantal_divisors(
        rows in 1usize..=4,
        cols in 1usize..=4,
        data in prop::collection::vec(-12i64..=12, 16),
    ) {
        let (m, plain) = to_matrix(rows, cols, &data);
        let snf = smith_normal_form(&m);
        let (free, torsion) = cokernel_by_minors(&plain, rows, cols);
        let diag: Vec<BigInt> = snf.d.diagonal().into_iter().filter(|d| *d != BigInt::from(0)).collect();
        prop_assert_eq!(rows - diag.len(), free);
        let lib_torsion: Vec<i128> = diag
            .iter()
            .map(|d| i128::try_from(d.clone()).unwrap().abs())
            .filter(|&d| d != 1)
            .collect();
        prop_assert_eq!(lib_torsion, torsion);
    }
}
