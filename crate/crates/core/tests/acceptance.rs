//! Acceptance criteria 1-15. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use thmon::circuits::{
    c_gadget, corpus, count_sat, factor_product, id_power, id_power_factors, inv_d_reduction, inv_d_table,
    is_tautology, lift_alphabet, taut_reduction, BoolFormula, DEFAULT_CAP,
};
use thmon::counting::{
    add_one, disjointify, exists_sat_counts, normalize_pattern, np_embed, oplus_exists_sat, slice_count, times_m,
    FinRel,
};
use thmon::gen::{self, SeededRng};
use thmon::green::{
    equiv_l, equiv_r, dclass_index, leq_j, multiplier_search, pivot_search, OracleBudget, Preorder, WitnessOracle,
};
use thmon::morphisms::{enumerate_elements, for_each_element};
use thmon::structure::{embed_e, eta, in_max_subgroup, subgroup_to_higman};
use thmon::{Alphabet, Element, Word};

const SEED: u64 = 0x7468_6d6f_6e;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64) -> SeededRng {
    gen::rng(SEED ^ (criterion << 32))
}

fn a(k: u8) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn c1() -> Check {
    let mut checked = 0usize;
    let mut err = None;
    for (k, entries) in [(2u8, 4usize), (3, 2)] {
        for_each_element(a(k), 3, entries, |e| {
            let m = e.entries().len();
            if m > 0 && err.is_none() {
                let split = e.restrict(checked % m, 1).unwrap().into_canonical();
                if split != *e {
                    err = Some(format!("split of entry {} of {e} canonicalizes to {split}", checked % m));
                }
            }
            checked += 1;
        });
    }
    if let Some(e) = err {
        return Err(e);
    }
    let mut r = rng(1);
    for _ in 0..1000 {
        let k = r.gen_range(2..=3);
        let e = gen::element(&mut r, a(k), 4, 3);
        let mut t = e.table().clone();
        for _ in 0..r.gen_range(1..=4) {
            if t.is_empty() {
                break;
            }
            let i = r.gen_range(0..t.len());
            t = t.restrict(i, r.gen_range(1..=2)).unwrap();
        }
        ensure(t.canonicalize() == e, || format!("split sequence {t} does not return to {e}"))?;
    }
    Ok(format!("{checked} canonical tables (k=2 <=4 entries, k=3 <=2 entries, words <=3), 1000 random split sequences"))
}

fn alphabets() -> [Alphabet; 4] {
    [a(2), a(3), a(4), Alphabet::with_heads(3, 2).unwrap()]
}

fn c2() -> Check {
    let mut r = rng(2);
    for n in 0..1000 {
        let al = alphabets()[n % 4];
        let x = gen::element(&mut r, al, 4, 3);
        let y = gen::element(&mut r, al, 4, 3);
        let z = gen::element(&mut r, al, 4, 3);
        let l = x.compose(&y).unwrap().compose(&z).unwrap();
        let rr = x.compose(&y.compose(&z).unwrap()).unwrap();
        ensure(l == rr, || format!("({x} {y}) {z} = {l} but {x} ({y} {z}) = {rr}"))?;
        let id = Element::identity(al);
        let zero = Element::zero(al);
        ensure(x.compose(&id).unwrap() == x && id.compose(&x).unwrap() == x, || format!("identity fails on {x}"))?;
        ensure(x.compose(&zero).unwrap().is_zero() && zero.compose(&x).unwrap().is_zero(), || format!("zero fails on {x}"))?;
    }
    Ok("1000 triples over A* (k=2,3,4) and B A* (k=3, |B|=2)".into())
}

fn c3() -> Check {
    let mut r = rng(3);
    for k in [3u8, 4] {
        let mut done = 0;
        while done < 1000 {
            let t = gen::table(&mut r, a(k), 5, 3);
            if t.is_empty() {
                continue;
            }
            let before = t.image_code().len() % (k as usize - 1);
            let s = t.restrict(r.gen_range(0..t.len()), r.gen_range(1..=2)).unwrap();
            let after = s.image_code().len() % (k as usize - 1);
            ensure(before == after, || format!("k={k}: |imC| mod (k-1) of {t} is {before}, of its restriction {s} is {after}"))?;
            let canon = t.canonicalize().imc_size() % (k as usize - 1);
            ensure(before == canon, || format!("k={k}: canonical form of {t} changes the residue"))?;
            done += 1;
        }
    }
    Ok("1000 random tables each for k=3,4".into())
}

fn c4() -> Check {
    let fam = enumerate_elements(a(2), 2, 2);
    let mut oracle = WitnessOracle::new(a(2), OracleBudget::new(2, 4, 2).unwrap()).map_err(|e| e.to_string())?;
    let mut positive = 0;
    for psi in &fam {
        for phi in &fam {
            let v = leq_j(psi, phi).unwrap();
            ensure(v.holds == v.witness.is_some() && v.verify(psi, phi), || format!("bad witness for {psi} <=_J {phi}"))?;
            let o = oracle.search(psi, phi, Preorder::J).unwrap().is_some();
            ensure(v.holds == o, || format!("{psi} <=_J {phi}: decider {} oracle {o}", v.holds))?;
            positive += usize::from(o);
        }
    }
    Ok(format!("{} elements, {} pairs, {positive} positive; oracle budget 2 entries, domain words <=4, image words <=2", fam.len(), fam.len() * fam.len()))
}

fn c5() -> Check {
    let mut r = rng(5);
    for n in 0..1000 {
        let al = alphabets()[n % 4];
        let psi = gen::nonzero_element(&mut r, al, 4, 3);
        let phi = gen::nonzero_element(&mut r, al, 4, 3);
        let (beta, alpha) = multiplier_search(&psi, &phi).map_err(|e| e.to_string())?;
        let got = beta.compose(&phi.compose(&alpha).unwrap()).unwrap();
        ensure(got == psi, || format!("beta {beta}, alpha {alpha} give {got}, not {psi}"))?;
    }
    Ok("1000 nonzero pairs".into())
}

fn c6() -> Check {
    let mut r = rng(6);
    let mut done = 0;
    while done < 500 {
        let psi = gen::nonzero_element(&mut r, a(3), 4, 3);
        let phi = gen::nonzero_element(&mut r, a(3), 4, 3);
        if dclass_index(&psi) != dclass_index(&phi) {
            continue;
        }
        let chi = pivot_search(&psi, &phi).map_err(|e| e.to_string())?;
        let l = equiv_l(&psi, &chi).unwrap();
        let rr = equiv_r(&chi, &phi).unwrap();
        ensure(l.holds && l.witness.is_some() && l.verify(&psi, &chi), || format!("pivot {chi} not L-equivalent to {psi}"))?;
        ensure(rr.holds && rr.witness.is_some() && rr.verify(&chi, &phi), || format!("pivot {chi} not R-equivalent to {phi}"))?;
        done += 1;
    }
    Ok("500 D-equivalent pairs, k=3".into())
}

fn c7() -> Check {
    let mut r = rng(7);
    for i in [1u8, 2] {
        let e = eta(i, 3).unwrap();
        let h = |x: &Element| subgroup_to_higman(x, i).map_err(|e| e.to_string());
        let mut prev = gen::subgroup_member(&mut r, 3, i, 4);
        for _ in 0..500 {
            let x = gen::subgroup_member(&mut r, 3, i, 4);
            ensure(in_max_subgroup(&x, i).unwrap(), || format!("{x} not in the subgroup at eta_{i}"))?;
            let xy = x.compose(&prev).unwrap();
            let inv = x.invert().unwrap();
            ensure(in_max_subgroup(&xy, i).unwrap(), || format!("product {xy} leaves the subgroup"))?;
            ensure(in_max_subgroup(&inv, i).unwrap(), || format!("inverse {inv} leaves the subgroup"))?;
            ensure(x.compose(&inv).unwrap() == e && inv.compose(&x).unwrap() == e, || format!("{x} {inv} is not eta_{i}"))?;
            ensure(x.compose(&e).unwrap() == x && e.compose(&x).unwrap() == x, || format!("eta_{i} not neutral on {x}"))?;
            let (hx, hy, hxy) = (h(&x)?, h(&prev)?, h(&xy)?);
            ensure(hxy == hx.compose(&hy).unwrap(), || format!("relabeling not multiplicative on {x}, {prev}"))?;
            ensure(hx.is_unit(), || format!("relabeling of {x} is not a unit"))?;
            ensure(h(&inv)? == hx.invert().unwrap(), || format!("relabeling does not commute with inverse on {x}"))?;
            prev = x;
        }
    }
    Ok("500 members each for i=1,2 (k=3)".into())
}

fn c8() -> Check {
    let mut r = rng(8);
    let mut collisions = 0;
    for (k, n) in [(2u8, 2u8), (3, 3)] {
        let al = Alphabet::with_heads(k, n).unwrap();
        for _ in 0..500 {
            let x = gen::element(&mut r, al, 4, 3);
            let y = gen::element(&mut r, al, 4, 3);
            let (ex, ey) = (embed_e(&x).unwrap(), embed_e(&y).unwrap());
            let exy = embed_e(&x.compose(&y).unwrap()).unwrap();
            ensure(exy == ex.compose(&ey).unwrap(), || format!("E not multiplicative on {x}, {y}"))?;
            ensure((ex == ey) == (x == y), || format!("E identifies {x} and {y}"))?;
            collisions += usize::from(x == y);
        }
    }
    Ok(format!("500 pairs each for (k,n)=(2,2),(3,3); {collisions} equal pairs"))
}

fn corpus9() -> Vec<(BoolFormula, usize, usize)> {
    let mut out: Vec<_> = corpus::exhaustive(6, 2).into_iter().map(|b| (b, 3, 3)).collect();
    let mut r = rng(9);
    for m in 0..=3 {
        for n in 0..=3 {
            if m + n == 0 {
                continue;
            }
            for _ in 0..1000 {
                out.push((gen::formula(&mut r, m + n, 4), m, n));
            }
        }
    }
    out
}

fn c9() -> Check {
    let c = corpus9();
    for (b, m, n) in &c {
        let img = c_gadget(b, *m, *n).unwrap().image_size(DEFAULT_CAP).unwrap();
        let (sat, _) = exists_sat_counts(b, *m, *n, DEFAULT_CAP).unwrap();
        ensure(img == sat, || format!("{b} (m={m}, n={n}): |Im| = {img}, projections = {sat}"))?;
    }
    Ok(format!("{} formulas: all depth <=2 over 3+3 variables, 15000 random depth <=4 over m,n <=3", c.len()))
}

fn corpus4() -> Vec<BoolFormula> {
    let mut c = corpus::exhaustive(4, 2);
    let mut r = rng(10);
    for vars in 1..=4 {
        for _ in 0..500 {
            c.push(gen::formula(&mut r, vars, 4));
        }
    }
    c
}

fn c10() -> Check {
    let c = corpus4();
    for b in &c {
        let t = inv_d_table(b, 4).unwrap();
        let s = count_sat(b, 4);
        ensure(t.image_code().len() as u64 == s, || format!("{b}: |imC| = {} but #sat = {s}", t.image_code().len()))?;
        ensure(inv_d_reduction(b, 4).unwrap().is_injective(), || format!("{b}: reduction is not injective"))?;
    }
    Ok(format!("{} formulas over 4 variables", c.len()))
}

fn c11() -> Check {
    let c = corpus4();
    let mut tautologies = 0;
    for b in &c {
        let z = taut_reduction(b, 4).unwrap().is_zero();
        let t = is_tautology(b, 4);
        ensure(z == t, || format!("{b}: zero {z}, tautology {t}"))?;
        tautologies += usize::from(t);
    }
    Ok(format!("{} formulas, {tautologies} tautologies", c.len()))
}

fn random_finrel(r: &mut SeededRng) -> FinRel {
    let al = a(2);
    let xs: Vec<Word> = (0..4).map(|_| gen::word(r, al, 2)).collect();
    let n = r.gen_range(0..14);
    let pairs: Vec<(Word, Word)> = (0..n).map(|_| (xs[r.gen_range(0..4)].clone(), gen::word(r, al, 3))).collect();
    FinRel::new(al, pairs).unwrap()
}

fn probes(rels: &[&FinRel]) -> Vec<Word> {
    let mut p: BTreeSet<Word> = rels.iter().flat_map(|r| r.firsts()).collect();
    p.insert(Word::letters(&[1, 1, 1, 1, 1, 1]));
    p.into_iter().collect()
}

/// Slices `≡ i` on `members` and `≡ j` elsewhere on `universe`.
fn pattern_rel(r: &mut SeededRng, universe: &[Word], members: &BTreeSet<Word>, i: u64, j: u64, h: u64) -> FinRel {
    let mut pairs = Vec::new();
    for x in universe {
        let c = if members.contains(x) { i } else { j } + h * r.gen_range(0..3);
        pairs.extend((0..c).map(|t| (x.clone(), Word::letters(&vec![1; t as usize]).child(0))));
    }
    FinRel::new(a(2), pairs).unwrap()
}

fn c12() -> Check {
    let mut r = rng(12);
    let mut normalized = 0;
    for _ in 0..1000 {
        let r1 = random_finrel(&mut r);
        let r2 = random_finrel(&mut r);
        let p = probes(&[&r1, &r2]);
        let plus = add_one(&r1, &p).unwrap();
        for x in &p {
            ensure(slice_count(&plus, x) == slice_count(&r1, x) + 1, || format!("add_one at {x}"))?;
        }
        let m = r.gen_range(1..=6);
        let times = times_m(&r1, m).unwrap();
        for x in &p {
            ensure(slice_count(&times, x) == m * slice_count(&r1, x), || format!("times_m({m}) at {x}"))?;
        }
        let (d1, d2) = disjointify(&r1, &r2).unwrap();
        ensure(d1.intersection(&d2).is_empty(), || "disjointify left a common pair".into())?;
        let u = d1.union(&d2).unwrap();
        for x in &p {
            ensure(slice_count(&d1, x) == slice_count(&r1, x) && slice_count(&d2, x) == slice_count(&r2, x), || format!("disjointify changed the slice at {x}"))?;
            ensure(slice_count(&u, x) == slice_count(&r1, x) + slice_count(&r2, x), || format!("union slice at {x}"))?;
        }
        for h in [2u64, 3, 5] {
            let l: BTreeSet<Word> = p.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
            let direct = np_embed(a(2), &l, &p, h as usize, false).unwrap();
            let comp = np_embed(a(2), &l, &p, h as usize, true).unwrap();
            for x in &p {
                let member = l.contains(x);
                ensure(slice_count(&direct, x) == usize::from(member), || format!("direct embedding at {x}"))?;
                ensure(slice_count(&comp, x) == if member { h as usize } else { 1 }, || format!("complement embedding at {x}"))?;
                let res = |c: usize| c as u64 % h;
                ensure(res(slice_count(&direct, x)) == u64::from(member), || "direct residue pattern".into())?;
                ensure(res(slice_count(&comp, x)) == u64::from(!member), || "complement residue pattern".into())?;
            }
            let counts: BTreeSet<u64> = (0..h).map(|c| c * m as u64 % h).collect();
            let coprime = num_integer::gcd(m as u64, h) == 1;
            ensure((counts.len() == h as usize) == coprime, || format!("residues times {m} mod {h}"))?;
            if h > 2 {
                let i = r.gen_range(0..h);
                let j = (i + r.gen_range(1..h)) % h;
                let members: BTreeSet<Word> = p.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
                let rel = pattern_rel(&mut r, &p, &members, i, j, h);
                let n = normalize_pattern(&rel, i, j, h, &p).unwrap();
                for x in &p {
                    let want = u64::from(members.contains(x));
                    ensure(slice_count(&n, x) as u64 % h == want, || format!("({i},{j}) pattern mod {h} not normalized at {x}"))?;
                }
                normalized += 1;
            }
        }
    }
    Ok(format!("1000 relation pairs, h in {{2,3,5}}, {normalized} (i,j) normalizations"))
}

fn c13() -> Check {
    let c = corpus9();
    for (b, m, n) in &c {
        let g = c_gadget(b, *m, *n).unwrap();
        for h in [2u64, 3] {
            let o = oplus_exists_sat(b, *m, *n, h, 1, DEFAULT_CAP).unwrap();
            let i = g.image_size_mod(h, DEFAULT_CAP).unwrap();
            ensure(o == i, || format!("{b} (m={m}, n={n}), h={h}: counting {o}, image {i}"))?;
        }
    }
    Ok(format!("{} formulas, h in {{2,3}}", c.len()))
}

fn c14() -> Check {
    for l in 1..=4 {
        let direct = id_power(l, 3).unwrap();
        let f = factor_product(&id_power_factors(l, true), 3).unwrap();
        ensure(f == direct, || format!("l={l}: factor product {f}, direct {direct}"))?;
        let g = factor_product(&id_power_factors(l, false), 3).unwrap();
        ensure(g != direct, || format!("l={l}: product without the position-1 factor already matches"))?;
    }
    let mut r = rng(14);
    let mut zeros = 0;
    for n in 0..200 {
        let e = gen::element(&mut r, a(2), 4, 3);
        let k = if n % 2 == 0 { 3 } else { 4 };
        let lifted = lift_alphabet(&e, k, e.max_len().max(1)).unwrap();
        ensure(lifted.is_zero() == e.is_zero(), || format!("lift of {e} to k={k} is {lifted}"))?;
        zeros += usize::from(e.is_zero());
    }
    Ok(format!("factorization for l<=4 (k=3); 200 lifts, {zeros} zero"))
}

fn c15() -> Check {
    let fam = enumerate_elements(a(2), 2, 2);
    let probes = a(2).words_upto(4);
    let len2: Vec<Word> = a(2).words_upto(2).into_iter().filter(|w| w.len() == 2).collect();
    let (mut injective, mut units) = (0, 0);
    for e in &fam {
        let mut seen = BTreeSet::new();
        let mut brute = true;
        for w in &probes {
            if let Some(v) = e.apply(w) {
                brute &= seen.insert(v);
            }
        }
        ensure(brute == e.is_injective(), || format!("{e}: brute-force injective {brute}"))?;
        let covers = |ws: Vec<Word>| len2.iter().all(|u| ws.iter().any(|w| w.is_prefix_of(u)));
        let bimax = covers(e.entries().iter().map(|x| x.0.clone()).collect())
            && covers(e.entries().iter().map(|x| x.1.clone()).collect());
        ensure(e.is_unit() == (brute && bimax), || format!("{e}: unit {} vs injective {brute}, bi-maximal {bimax}", e.is_unit()))?;
        injective += usize::from(brute);
        units += usize::from(brute && bimax);
    }
    Ok(format!("{} elements, {injective} injective, {units} units", fam.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check, Option<Duration>);
    let criteria: [Criterion; 15] = [
        ("canonical-form confluence", c1, Some(Duration::from_secs(10))),
        ("monoid laws", c2, Some(Duration::from_secs(10))),
        ("D-class residue under restriction", c3, None),
        ("J-order against the witness oracle", c4, Some(Duration::from_secs(60))),
        ("multiplier search", c5, None),
        ("pivot search", c6, None),
        ("maximal subgroups", c7, None),
        ("embedding E", c8, None),
        ("image-size parsimony", c9, Some(Duration::from_secs(120))),
        ("satisfying-count parsimony", c10, None),
        ("tautology reduction", c11, None),
        ("counting lemmas", c12, None),
        ("modular counting bridge", c13, None),
        ("alphabet lifting gadgets", c14, None),
        ("injectivity and units", c15, None),
    ];
    println!("acceptance seed {SEED:#x}");
    let mut failed = 0;
    for (n, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let out = match (out, limit) {
            (Ok(_), Some(l)) if took > *l => Err(format!("took {took:.1?}, limit {l:?}")),
            (o, _) => o,
        };
        match out {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{took:.1?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{took:.1?}]", n + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
