use flagsoc::alcovekl::{KlModule, RestrictedSimples};
use flagsoc::charring::{hv_char_product, hv_char_sum};
use flagsoc::hverma::{epsilon_layer_check, q_one_check, socle_table};
use flagsoc::modcat::*;
use flagsoc::quadric::{multiplicities, QuadricParams, TruncatedRing};
use flagsoc::sheafcoh::ledger::{ledger_check, parse, G2_PA2_SCRIPT};
use flagsoc::sheafcoh::*;
use flagsoc::{ParabolicSpec, RootDatum, RootType, Weight};
use std::collections::BTreeMap;
use std::time::Instant;

type Outcome = (bool, String);

fn smallest_prime_at_least(h: i64) -> i64 {
    (h.max(2)..).find(|&n| (2..n).all(|k| n % k != 0)).unwrap()
}

fn proper_parabolics(kind: RootType) -> Vec<ParabolicSpec> {
    ParabolicSpec::all_proper(kind.rank())
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for kind in RootType::small() {
        let d = RootDatum::of(kind);
        for par in proper_parabolics(kind) {
            for p in [2, 3, 5, 7] {
                for nu in [Weight::ZERO, par.lambda_p_generator(&d)] {
                    cases += 1;
                    let ok = match (hv_char_product(&d, &nu, &par, p), hv_char_sum(&d, &nu, &par, p)) {
                        (Ok(a), Ok(b)) => a == b,
                        _ => false,
                    };
                    if !ok {
                        bad.push(format!("{kind} {} p={p} nu={nu}", par.name()));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (bad.is_empty() && secs < 10.0, format!("{cases} cases in {secs:.2}s, mismatches {bad:?}"))
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    let mut tables = 0;
    for kind in RootType::small() {
        let d = RootDatum::of(kind);
        let mut primes = vec![smallest_prime_at_least(d.coxeter_number()), 7];
        primes.dedup();
        for p in primes {
            let kl = match KlModule::new(kind, p) {
                Ok(k) => k,
                Err(e) => {
                    bad.push(format!("{kind} p={p}: {e}"));
                    continue;
                }
            };
            let simples = RestrictedSimples::compute(&kl).unwrap();
            for par in proper_parabolics(kind) {
                tables += 1;
                let t = socle_table(&kl, &par, &Weight::ZERO).unwrap();
                let wp = d.longest_elements(&par).unwrap().2;
                let tag = format!("{kind} {} p={p}", par.name());
                if t.loewy_length() != wp.len() as i64 + 1 {
                    bad.push(format!("{tag}: Loewy length {}", t.loewy_length()));
                }
                let mass = t.mass(&simples, d.rank).unwrap();
                if mass != p.pow(par.unipotent_roots(&d).len() as u32) {
                    bad.push(format!("{tag}: mass {mass}"));
                }
                if !q_one_check(&t, &kl, &simples).unwrap() {
                    bad.push(format!("{tag}: q=1"));
                }
                if !epsilon_layer_check(&kl, &par).unwrap().iter().all(|x| x.1) {
                    bad.push(format!("{tag}: epsilon layers"));
                }
            }
        }
    }
    (bad.is_empty(), format!("{tables} tables, failures {bad:?}"))
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut skipped = Vec::new();
    for kind in RootType::small() {
        let d = RootDatum::of(kind);
        let mut primes = vec![smallest_prime_at_least(d.coxeter_number()), 7];
        primes.dedup();
        for p in primes {
            let kl = KlModule::new(kind, p).unwrap();
            for (k, par) in supported(Family::Socle) {
                if k != kind {
                    continue;
                }
                if !classes_separated(&kl.geometry, &par).unwrap() {
                    skipped.push(format!("{kind} {} p={p}", par.name()));
                    continue;
                }
                let cat = catalog(kind, &par, Family::Socle).unwrap();
                for (w, ok) in soc1_check(&kl, &cat).unwrap() {
                    checked += 1;
                    if !ok {
                        bad.push(format!("{kind} {} p={p} {w}", par.name()));
                    }
                }
            }
        }
    }
    let g = catalog(RootType::G2, &ParabolicSpec::borel(), Family::Socle).unwrap();
    let top = g.datum().find_element(&[0, 1, 0, 1, 0]).unwrap();
    let two = g.entry(&top).map(|f| f.layers.len() == 1 && f.layers[0].len() == 2).unwrap_or(false);
    (
        bad.is_empty() && two && checked > 0,
        format!("{checked} entries, G2/B top has 2 summands: {two}, colliding classes skipped {skipped:?}, failures {bad:?}"),
    )
}

fn c4() -> Outcome {
    let cat = catalog(RootType::A2, &ParabolicSpec::borel(), Family::Kapranov).unwrap();
    let d = cat.datum();
    let table = ext_table(&cat).unwrap();
    let names: Vec<String> = cat.sheaves().iter().map(|(w, _)| w.name()).collect();
    let n = names.len();
    let nonzero = |x: usize, y: usize| table[x][y].degree_dim(&d, 0).unwrap() != 0;
    let homs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| x != y && nonzero(x, y)).count();
    let idx = |w: &[u8]| names.iter().position(|s| *s == d.find_element(w).unwrap().name()).unwrap();
    let e = idx(&[]);
    let top = idx(&[1, 0, 1]);
    let rho = table[e][top].parts.get(&0) == Some(&BTreeMap::from([(Weight::new(&[1, 1]), 1)]));
    let dim = table[e][top].degree_dim(&d, 0).unwrap();
    let s1s2 = idx(&[0, 1]);
    let into = (0..n).filter(|&x| x != s1s2 && nonzero(x, s1s2)).count();
    let higher = table.iter().flatten().all(|h| h.is_exact() && h.parts.keys().all(|k| *k == 0));
    (
        homs == 14 && rho && dim == 8 && into == 4 && higher,
        format!("{homs} nonzero Homs, Hom(E_e, E_s2s1s2) = chi(rho): {rho}, dim {dim}, into E_s1s2: {into}"),
    )
}

struct Tables {
    g2b: Option<(Catalog, Vec<Vec<CohomProfile>>)>,
}

fn c5(store: &mut Tables) -> Outcome {
    let mut bad = Vec::new();
    let mut g2b_pairs = 0;
    for (kind, par) in supported(Family::Socle) {
        let cat = catalog(kind, &par, Family::Socle).unwrap();
        let d = cat.datum();
        let sheaves = cat.sheaves();
        let table = ext_table(&cat).unwrap();
        let r = poset_report(&d, &sheaves, &table).unwrap();
        if !r.pass {
            bad.push(format!("{kind} {}: {:?}", par.name(), r.failures));
        }
        if kind == RootType::G2 && par.subset.is_empty() {
            g2b_pairs = r.euler_consistent;
            store.g2b = Some((cat, table));
        }
    }
    (bad.is_empty() && g2b_pairs == 144, format!("G2/B Euler-consistent pairs {g2b_pairs}, failures {bad:?}"))
}

fn c6(store: &Tables) -> Outcome {
    let (cat, table) = store.g2b.as_ref().unwrap();
    let d = cat.datum();
    let names: Vec<String> = cat.sheaves().iter().map(|(w, _)| w.name()).collect();
    let idx = |w: &[u8]| names.iter().position(|s| *s == d.find_element(w).unwrap().name()).unwrap();
    let h = &table[idx(&[0, 1, 0, 1, 0])][idx(&[0, 1, 0, 1])];
    let ok = h.is_exact() && h.parts == BTreeMap::from([(0, BTreeMap::from([(Weight::ZERO, 1)]))]);
    (ok, format!("Ext profile {:?}", h.parts))
}

fn c7() -> Outcome {
    let mut dets = Vec::new();
    let mut all = true;
    let mut cats = Vec::new();
    for fam in [Family::Socle, Family::Kapranov, Family::Quadric] {
        for (kind, p) in supported(fam) {
            cats.push(catalog(kind, &p, fam).unwrap());
        }
    }
    for cat in &cats {
        let m = euler_matrix(cat).unwrap();
        all &= m.unimodular();
        dets.push(m.det);
    }
    let script = parse(G2_PA2_SCRIPT).unwrap();
    let replay = ledger_check(&script).unwrap().pass();
    // two mutations, each must stop at the step it breaks
    let dropped = G2_PA2_SCRIPT.replace("axiom s1s2s1\n", "");
    let first_use = dropped.lines().position(|l| !l.starts_with("axiom") && l.contains("E(s1s2s1)")).unwrap() + 1;
    let r1 = ledger_check(&parse(&dropped).unwrap()).unwrap();
    let m1 = r1.failure.as_deref().is_some_and(|f| f.starts_with(&format!("line {first_use}:")));
    let target = "cone B delta(2; -5 2) = [line(1 -2) / line(-2 0) / line(-5 2)]";
    let broken_line = G2_PA2_SCRIPT.lines().position(|l| l == target).unwrap() + 1;
    let skewed = G2_PA2_SCRIPT.replace(target, "cone B delta(2; -5 2) = [line(1 -2) / line(-2 1) / line(-5 2)]");
    let r2 = ledger_check(&parse(&skewed).unwrap()).unwrap();
    let m2 = r2.failure.as_deref().is_some_and(|f| f.starts_with(&format!("line {broken_line}:")));
    (
        all && replay && m1 && m2,
        format!("{} catalogs, dets {dets:?}, shipped script replays: {replay}, mutations stop at their step: {m1} {m2}", cats.len()),
    )
}

fn c8() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=5 {
        for p in [3u64, 5, 7] {
            let q = QuadricParams::new(n, p).unwrap();
            match multiplicities(&q) {
                Ok(t) if t.conserved() => {}
                Ok(t) => bad.push(format!("({n},{p}) rank sum {} != {}", t.rank_sum(), p.pow(n as u32))),
                Err(e) if p as usize >= n + 1 => bad.push(format!("({n},{p}) {e}")),
                Err(e) => bad.push(format!("({n},{p}) formula only: {e}")),
            }
        }
    }
    let q = QuadricParams::new(3, 3).unwrap();
    let ring = TruncatedRing::new(q);
    let oracle_ok = (0..=q.top_degree()).all(|j| ring.abar_dim(j) == monomial_oracle(3, 3, j));
    if !oracle_ok {
        bad.push("abar_dim disagrees with the monomial oracle at (3,3)".into());
    }
    (bad.is_empty(), format!("failures {bad:?}"))
}

/// `dim R_j - rank(q R_{j-2})` by dense elimination over every monomial.
fn monomial_oracle(n: usize, p: u64, j: usize) -> usize {
    let nv = n + 2;
    let mut all = Vec::new();
    let mut e = vec![0u64; nv];
    'outer: loop {
        all.push(e.clone());
        for i in 0..nv {
            if e[i] + 1 < p {
                e[i] += 1;
                continue 'outer;
            }
            e[i] = 0;
        }
        break;
    }
    let deg = |m: &Vec<u64>| m.iter().sum::<u64>() as usize;
    let tgt: Vec<&Vec<u64>> = all.iter().filter(|m| deg(m) == j).collect();
    if j < 2 {
        return tgt.len();
    }
    let src: Vec<&Vec<u64>> = all.iter().filter(|m| deg(m) + 2 == j).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for s in src {
        let mut row = vec![0u64; tgt.len()];
        let mut bump = |a: usize, b: usize| {
            let mut t = s.clone();
            t[a] += 1;
            t[b] += 1;
            if let Some(i) = tgt.iter().position(|m| **m == t) {
                row[i] = (row[i] + 1) % p;
            }
        };
        for k in 0..=n / 2 {
            bump(2 * k, 2 * k + 1);
        }
        if n % 2 == 1 {
            bump(nv - 1, nv - 1);
        }
        rows.push(row);
    }
    let mut r = 0;
    for c in 0..tgt.len() {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = (1..p).find(|x| x * rows[r][c] % p == 1).unwrap();
        rows[r].iter_mut().for_each(|x| *x = *x * inv % p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                row.iter_mut().zip(&pr).for_each(|(a, b)| *a = (*a + p * p - f * b) % p);
            }
        }
        r += 1;
    }
    tgt.len() - r
}

fn main() {
    let mut store = Tables { g2b: None };
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "HV character identity", c1()),
        (2, "socle tables", c2()),
        (3, "first socle layer of the catalogs", c3()),
        (4, "Kapranov Hom table", c4()),
        (5, "strongly exceptional posets", c5(&mut store)),
        (6, "G2/B top pair", c6(&store)),
        (7, "unimodular Euler forms and ledger replay", c7()),
        (8, "quadric rank conservation", c8()),
    ];
    let mut failed = 0;
    for (k, name, (ok, detail)) in &results {
        println!("criterion {k} {}: {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
