use flagsoc::quadric::*;
use proptest::prelude::*;
use std::collections::HashMap;

/// Dense monomial enumeration, no torus splitting: `dim R_j - rank(q R_{j-2})`.
fn oracle(n: usize, p: u64, j: usize) -> usize {
    let nv = n + 2;
    let monos = |d: usize| -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut e = vec![0u64; nv];
        loop {
            if e.iter().sum::<u64>() as usize == d {
                out.push(e.clone());
            }
            let mut i = 0;
            while i < nv && e[i] == p - 1 {
                e[i] = 0;
                i += 1;
            }
            if i == nv {
                return out;
            }
            e[i] += 1;
        }
    };
    let tgt = monos(j);
    if j < 2 {
        return tgt.len();
    }
    let idx: HashMap<Vec<u64>, usize> = tgt.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let m = n / 2;
    let mut q_terms: Vec<Vec<u64>> = (0..=m)
        .map(|k| {
            let mut v = vec![0; nv];
            v[2 * k] = 1;
            v[2 * k + 1] = 1;
            v
        })
        .collect();
    if n % 2 == 1 {
        let mut v = vec![0; nv];
        v[nv - 1] = 2;
        q_terms.push(v);
    }
    let mut mat: Vec<Vec<u64>> = Vec::new();
    for e in monos(j - 2) {
        let mut row = vec![0u64; tgt.len()];
        for t in &q_terms {
            let f: Vec<u64> = e.iter().zip(t).map(|(a, b)| a + b).collect();
            if let Some(&i) = idx.get(&f) {
                row[i] = (row[i] + 1) % p;
            }
        }
        mat.push(row);
    }
    // dense elimination mod p
    let mut r = 0;
    let cols = tgt.len();
    for c in 0..cols {
        let Some(piv) = (r..mat.len()).find(|&i| mat[i][c] != 0) else { continue };
        mat.swap(r, piv);
        let inv = (1..p).find(|x| x * mat[r][c] % p == 1).unwrap();
        for x in mat[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (a, b) in row.iter_mut().zip(&pr) {
                    *a = (*a + p * p - f * b) % p;
                }
            }
        }
        r += 1;
    }
    tgt.len() - r
}

#[test]
fn abar_matches_oracle_at_3_3() {
    let q = QuadricParams::new(3, 3).unwrap();
    let ring = TruncatedRing::new(q);
    for j in 0..=q.top_degree() {
        assert_eq!(ring.abar_dim(j), oracle(3, 3, j), "degree {j}");
    }
}

#[test]
fn abar_low_degrees() {
    for (n, p) in [(3, 3), (4, 5), (5, 7)] {
        let q = QuadricParams::new(n, p).unwrap();
        assert_eq!(abar_dim(0, &q), 1);
        assert_eq!(abar_dim(1, &q), n + 2);
        for j in 0..p as usize {
            assert_eq!(abar_dim(j, &q) as i64, abar_series(j, &q), "({n},{p}) degree {j}");
        }
    }
}

#[test]
fn series_is_not_a_hilbert_function() {
    let q = QuadricParams::new(3, 3).unwrap();
    assert!((0..=q.top_degree()).any(|j| abar_series(j, &q) < 0));
}

#[test]
fn spin_rank_data() {
    let r3 = spin_ranks(&QuadricParams::new(3, 5).unwrap()).unwrap();
    assert_eq!(r3.sheaves.iter().map(|s| s.1).collect::<Vec<_>>(), vec![2]);
    assert_eq!(r3.denominator, 4);
    let r4 = spin_ranks(&QuadricParams::new(4, 5).unwrap()).unwrap();
    assert_eq!(r4.sheaves.iter().map(|s| s.1).collect::<Vec<_>>(), vec![2, 2]);
    assert_eq!(r4.denominator, 8);
    let r5 = spin_ranks(&QuadricParams::new(5, 7).unwrap()).unwrap();
    assert_eq!(r5.sheaves[0].1, 4);
    assert_eq!(r5.denominator, 8);
}

#[test]
fn conservation_in_the_summand_range() {
    for n in 3..=5 {
        for p in [3u64, 5, 7] {
            let q = QuadricParams::new(n, p).unwrap();
            let t = multiplicities(&q).unwrap();
            assert!(t.rows.iter().all(|r| r.rank > 0));
            if p as usize >= n + 1 {
                assert!(!t.formula_only);
                assert_eq!(t.rank_sum(), p.pow(n as u32), "({n},{p})");
            } else {
                assert!(t.formula_only);
            }
        }
    }
}

#[test]
fn decomposition_example_3_5() {
    let t = multiplicities(&QuadricParams::new(3, 5).unwrap()).unwrap();
    let labels: Vec<&str> = t.rows.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["O(-0)", "O(-1)", "O(-2)", "S(w2)(-2)"]);
    assert_eq!(t.rank_sum(), 125);
    assert!(t.to_csv().starts_with("summand,rank,multiplicity\nO(-0),1,1\n"));
}

#[test]
fn catalog_sizes_and_n3_agreement() {
    let c3 = quadric_catalog_check(3).unwrap();
    assert!(c3.pass());
    assert_eq!(c3.size, 4);
    assert_eq!(c3.matches.len(), 4);
    let c4 = quadric_catalog_check(4).unwrap();
    assert!(c4.pass());
    assert_eq!(c4.size, 6);
}

#[test]
fn rejects_bad_parameters() {
    assert!(QuadricParams::new(2, 5).is_err());
    assert!(QuadricParams::new(3, 2).is_err());
    assert!(QuadricParams::new(3, 9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn hilbert_function_bounded_by_truncated_ring(n in 3usize..5, pi in 0usize..2, j in 0usize..20) {
        let p = [3u64, 5][pi];
        let q = QuadricParams::new(n, p).unwrap();
        let ring = TruncatedRing::new(q);
        prop_assert!(ring.abar_dim(j) <= ring.dim(j));
        if j >= 2 {
            prop_assert!(ring.abar_dim(j) as i64 >= ring.dim(j) as i64 - ring.dim(j - 2) as i64);
        }
    }
}
