//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use segre_core::invariants::{
    alpha, beta_from_alpha, beta_from_descents, beta_from_mobius, euler_oracle, mobius, MobiusTable,
};
use segre_core::labeling::{ascent_descent, is_decreasing, is_increasing, label_chain, lex_precedes, LabeledPoset};
use segre_core::lattices::{boolean_lattice, bundled_poset, f_set, rref_canonical, subspace_lattice};
use segre_core::perm_stats::{w_q_tuples, w_tuples};
use segre_core::poset::{product, segre_power, RankSelection};
use segre_core::shellability::{decreasing_chains, el_counts, maximal_chains, verify_el, weighted_tuple_sum};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn boolean(n: usize) -> LabeledPoset {
    let (poset, lab) = boolean_lattice(n).unwrap();
    LabeledPoset { name: format!("B_{n}"), poset, labeling: Some(lab) }
}

fn subspace(n: usize, q: u64) -> LabeledPoset {
    subspace_lattice(n, q).unwrap().into_labeled(format!("B_{n}({q})"))
}

fn fig3() -> LabeledPoset {
    bundled_poset("fig3").unwrap()
}

fn chain_names(lp: &LabeledPoset, chain: &[usize]) -> Vec<String> {
    chain.iter().map(|&x| lp.poset.name(x).to_string()).collect()
}

fn chain_by_names(lp: &LabeledPoset, names: &[&str]) -> Result<Vec<usize>, String> {
    names.iter().map(|n| lp.poset.index_of(n).ok_or(format!("no element {n} in {}", lp.name))).collect()
}

fn decreasing_count(lp: &LabeledPoset) -> u64 {
    decreasing_chains(&lp.poset, lp.labeling.as_ref().unwrap(), false).count
}

fn el_matrix() -> Vec<LabeledPoset> {
    let mut out: Vec<LabeledPoset> = (1..=5).map(boolean).collect();
    out.extend((1..=4).map(|n| subspace(n, 2)));
    out.push(subspace(3, 3));
    out.push(fig3());
    for t in 2..=3 {
        out.push(boolean(3).segre(t).unwrap());
    }
    out.push(boolean(4).segre(2).unwrap());
    for t in 2..=3 {
        out.push(subspace(2, 2).segre(t).unwrap());
    }
    out.push(subspace(3, 2).segre(2).unwrap());
    out.push(fig3().segre(2).unwrap());
    out
}

fn fig3_square() -> Outcome {
    let sq = fig3().segre(2).unwrap();
    let recursion = ok(mobius(&sq.poset))?;
    let euler = ok(euler_oracle(&sq.poset))?;
    let dec = decreasing_chains(&sq.poset, sq.labeling.as_ref().unwrap(), true);
    let via_chains = -(dec.count as i64);
    ensure!(recursion == -2 && euler == -2 && via_chains == -2, "μ = {recursion}, χ̃ = {euler}, -#dec = {via_chains}");
    let got: BTreeSet<Vec<String>> = dec.chains.unwrap().iter().map(|c| chain_names(&sq, c)).collect();
    let expected: BTreeSet<Vec<String>> = [["(0̂,0̂)", "(a,b)", "(d,d)", "(1̂,1̂)"], ["(0̂,0̂)", "(b,a)", "(d,d)", "(1̂,1̂)"]]
        .iter()
        .map(|c| c.iter().map(|s| s.to_string()).collect())
        .collect();
    ensure!(got == expected, "decreasing chains {got:?}");
    Ok("μ = -2 by recursion, Euler characteristic and decreasing chains".into())
}

fn boolean_cube_chains() -> Outcome {
    let b4 = boolean(4);
    let cube = b4.segre(3).unwrap();
    let power = ok(segre_power(&b4.poset, 3))?;
    let lab = cube.labeling.as_ref().unwrap();
    let lp = lab.label_poset();
    let c = chain_by_names(&cube, &["(∅,∅,∅)", "(1,3,3)", "(12,23,13)", "(123,123,134)", "(1234,1234,1234)"])?;
    let d = chain_by_names(&cube, &["(∅,∅,∅)", "(1,3,3)", "(12,34,34)", "(123,134,134)", "(1234,1234,1234)"])?;
    let wc = ok(label_chain(&cube.poset, lab, &c))?.letters;
    let wd = ok(label_chain(&cube.poset, lab, &d))?.letters;
    let shown: Vec<String> = wc.iter().map(|&l| lp.display(l)).collect();
    ensure!(shown == ["(1,3,3)", "(2,2,1)", "(3,1,4)", "(4,4,2)"], "λ(C) = {shown:?}");
    let ac = ascent_descent(&wc, lp).ascents;
    let ad = ascent_descent(&wd, lp).ascents;
    ensure!(ac.is_empty() && is_decreasing(&wc, lp), "C ascents {ac:?}");
    ensure!(ad == [1, 3], "D ascents {ad:?}");
    ensure!(ok(lex_precedes(&wc, &wd, lp))?, "λ(C) does not precede λ(D)");

    let base_lab = b4.labeling.as_ref().unwrap();
    let components = |chain: &[usize]| -> Result<Vec<String>, String> {
        (0..3)
            .map(|i| {
                let ci: Vec<usize> = chain.iter().map(|&x| power.components[x][i]).collect();
                let w = ok(label_chain(&b4.poset, base_lab, &ci))?;
                Ok(base_lab.label_poset().display_word(&w.letters))
            })
            .collect()
    };
    let pc = components(&c)?;
    let pd = components(&d)?;
    ensure!(pc == ["1234", "3214", "3142"], "components of C {pc:?}");
    ensure!(pd == ["1234", "3412", "3412"], "components of D {pd:?}");
    Ok("C decreasing, D ascents {1,3}, λ(C) precedes λ(D)".into())
}

fn fig1_square() -> Outcome {
    let fig1 = bundled_poset("fig1").unwrap().poset;
    let sq = ok(segre_power(&fig1, 2))?.poset;
    let kept: BTreeSet<&str> = sq.names().iter().map(String::as_str).collect();
    let expected: BTreeSet<&str> =
        ["(0̂,0̂)", "(a,a)", "(a,b)", "(b,a)", "(b,b)", "(c,c)", "(c,d)", "(d,c)", "(d,d)", "(1̂,1̂)"].into();
    ensure!(kept == expected, "elements {kept:?}");

    let full = product(&fig1, &fig1);
    let missing: BTreeSet<&str> = full.names().iter().map(String::as_str).filter(|n| !kept.contains(n)).collect();
    let mut listed: BTreeSet<String> =
        ["(a,c)", "(a,d)", "(b,c)", "(b,d)", "(c,a)", "(c,b)", "(d,a)", "(d,b)"].iter().map(|s| s.to_string()).collect();
    for y in ["a", "b", "c", "d", "1̂"] {
        listed.insert(format!("(0̂,{y})"));
        listed.insert(format!("({y},0̂)"));
    }
    for x in ["0̂", "a", "b", "c", "d"] {
        listed.insert(format!("({x},1̂)"));
        listed.insert(format!("(1̂,{x})"));
    }
    let listed: BTreeSet<&str> = listed.iter().map(String::as_str).collect();
    ensure!(missing == listed, "excluded {missing:?}");

    let edges: BTreeSet<(&str, &str)> = sq.covers().iter().map(|&(x, y)| (sq.name(x), sq.name(y))).collect();
    let drawn: BTreeSet<(&str, &str)> = [
        ("(0̂,0̂)", "(a,a)"), ("(a,a)", "(c,c)"), ("(c,c)", "(1̂,1̂)"), ("(c,d)", "(1̂,1̂)"),
        ("(a,a)", "(c,d)"), ("(a,a)", "(d,c)"), ("(d,c)", "(1̂,1̂)"), ("(a,a)", "(d,d)"),
        ("(a,b)", "(c,d)"), ("(b,a)", "(d,c)"), ("(0̂,0̂)", "(a,b)"), ("(a,b)", "(d,d)"),
        ("(d,d)", "(1̂,1̂)"), ("(0̂,0̂)", "(b,a)"), ("(b,a)", "(d,d)"), ("(0̂,0̂)", "(b,b)"),
        ("(b,b)", "(d,d)"),
    ]
    .into();
    ensure!(edges == drawn, "covers {edges:?}");
    Ok(format!("10 elements, {} excluded, 17 covers", missing.len()))
}

fn el_verification(matrix: &[LabeledPoset]) -> Outcome {
    let mut bad = Vec::new();
    for lp in matrix {
        let report = verify_el(&lp.poset, lp.labeling.as_ref().unwrap());
        if !report.ok || !report.failures.is_empty() {
            bad.push(format!("{} ({} failures)", lp.name, report.failures.len()));
        }
    }
    ensure!(bad.is_empty(), "not EL: {}", bad.join(", "));
    Ok(format!("{} labeled posets verified", matrix.len()))
}

fn decreasing_vs_mobius(matrix: &[LabeledPoset]) -> Outcome {
    for lp in matrix {
        let mu = ok(mobius(&lp.poset))?;
        let n = lp.poset.rank() as i64;
        let signed = if (n - 2).rem_euclid(2) == 0 { mu } else { -mu };
        let count = decreasing_count(lp) as i64;
        ensure!(count == signed, "{}: {count} decreasing chains, μ = {mu}", lp.name);
    }
    Ok(format!("{} posets", matrix.len()))
}

fn boolean_four_way() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        for t in 1..=3 {
            let lp = if t == 1 { boolean(n) } else { boolean(n).segre(t).unwrap() };
            let lab = lp.labeling.as_ref().unwrap();
            let report = verify_el(&lp.poset, lab);
            let w = ok(w_tuples(n, t, None))?;
            let dec = decreasing_count(&lp);
            ensure!(w == dec, "B_{n}^({t}): w = {w}, decreasing = {dec}");
            for j in RankSelection::all(n) {
                let wj = ok(w_tuples(n, t, Some(&j)))? as i64;
                let by_descents = ok(beta_from_descents(&lp.poset, lab, &j, Some(&report)))?;
                let by_alpha = ok(beta_from_alpha(&lp.poset, &j))?;
                let by_mu = ok(beta_from_mobius(&lp.poset, &j))?;
                ensure!(
                    wj == by_descents && wj == by_alpha && wj == by_mu,
                    "B_{n}^({t}) J={j}: w = {wj}, descents = {by_descents}, α̃ = {by_alpha}, μ = {by_mu}"
                );
                checked += 1;
            }
        }
    }
    let w22 = ok(w_tuples(2, 2, None))?;
    ensure!(w22 == 3, "w_2^(2) = {w22}");
    Ok(format!("{checked} (n, t, J) cases agree, w_2^(2) = 3"))
}

fn subspace_cross_check() -> Outcome {
    let mut parts = Vec::new();
    for (n, q, t) in [(2, 2, 1), (2, 2, 2), (2, 3, 2), (3, 2, 1), (3, 2, 2)] {
        let base = subspace(n, q);
        let lp = if t == 1 { base } else { base.segre(t).unwrap() };
        let w = ok(w_q_tuples(n, t, q, None))?;
        let dec = decreasing_count(&lp);
        ensure!(w == dec, "B_{n}({q})^({t}): W = {w}, decreasing = {dec}");
        parts.push(format!("W_{n}^({t})({q}) = {w}"));
    }
    let a = ok(w_q_tuples(2, 2, 2, None))?;
    let b = ok(w_q_tuples(3, 1, 2, None))?;
    ensure!(a == 8 && b == 8, "W_2^(2)(2) = {a}, W_3^(1)(2) = {b}");
    Ok(parts.join(", "))
}

fn f_label_example() -> Outcome {
    let l = ok(subspace_lattice(4, 3))?;
    let x = rref_canonical(4, 3, &[vec![1, 0, 1, 0], vec![2, 1, 0, 0]]);
    let y = x.extend(&[1, 0, 0, 1]);
    let fx: Vec<usize> = f_set(&x).0.into_iter().collect();
    ensure!(fx == [2, 3], "f(X) = {fx:?}");
    let xi = l.index_of(&x).ok_or("X missing")?;
    let yi = l.index_of(&y).ok_or("Y missing")?;
    let label = l.labeling.label_between(&l.poset, xi, yi).ok_or("X ⋖ Y is not a cover")?;
    let shown = l.labeling.label_poset().display(label);
    ensure!(shown == "4", "label {shown}");
    Ok("f(X) = {2,3}, λ(X ⋖ Y) = 4".into())
}

fn fig4_chain() -> Outcome {
    let l = ok(subspace_lattice(3, 2))?;
    let e1 = l.index_of(&rref_canonical(3, 2, &[vec![1, 0, 0]])).ok_or("span<1,0,0> missing")?;
    let e12 = l.index_of(&rref_canonical(3, 2, &[vec![1, 0, 0], vec![0, 1, 0]])).ok_or("plane missing")?;
    let lp = l.into_labeled("B_3(2)".into());
    let lab = lp.labeling.as_ref().unwrap();
    let words: Vec<(Vec<usize>, String, bool, bool)> = ok(maximal_chains(&lp.poset, lp.poset.bottom(), lp.poset.top()))?
        .map(|c| {
            let w = label_chain(&lp.poset, lab, &c).unwrap().letters;
            let inc = is_increasing(&w, lab.label_poset());
            let dec = is_decreasing(&w, lab.label_poset());
            (c, lab.label_poset().display_word(&w), inc, dec)
        })
        .collect();
    let increasing: Vec<_> = words.iter().filter(|w| w.2).collect();
    ensure!(increasing.len() == 1, "{} increasing chains", increasing.len());
    let (chain, word, _, _) = increasing[0];
    ensure!(word == "123", "increasing word {word}");
    ensure!(chain[1] == e1 && chain[2] == e12, "increasing chain {:?}", chain_names(&lp, chain));
    let decreasing: Vec<_> = words.iter().filter(|w| w.3).collect();
    ensure!(decreasing.iter().all(|w| w.1 == "321"), "decreasing word other than 321");
    ensure!(decreasing.len() == 8, "{} decreasing chains", decreasing.len());
    Ok("unique increasing chain 123 through span<100>, 8 decreasing chains 321".into())
}

fn weighted_tuples() -> Outcome {
    let mut checked = 0;
    for base in [fig3(), boolean(3), subspace(2, 2)] {
        let lab = base.labeling.as_ref().unwrap();
        let wm = el_counts(&base.poset, lab);
        for t in 2..=3 {
            let power = ok(segre_power(&base.poset, t))?.poset;
            for j in RankSelection::all(base.poset.rank()) {
                let sum = ok(weighted_tuple_sum(&wm, t, &j, lab.label_poset()))? as i64;
                let via_mu = ok(beta_from_mobius(&power, &j))?;
                ensure!(sum == via_mu, "{}^({t}) J={j}: sum = {sum}, μ route = {via_mu}", base.name);
                let a = ok(alpha(&power, &j))?;
                ensure!(a >= sum.unsigned_abs(), "α̃ below β̃");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (P, t, J) cases"))
}

fn oracle_consistency(matrix: &[LabeledPoset]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5e97e);
    for lp in matrix {
        let p = &lp.poset;
        let (mu, chi) = (ok(mobius(p))?, ok(euler_oracle(p))?);
        ensure!(mu == chi, "{}: μ = {mu}, χ̃ = {chi}", lp.name);
        let table = ok(MobiusTable::new(p))?;
        let lower: Vec<usize> = (0..p.len()).filter(|&x| x != p.top()).collect();
        for _ in 0..1000 {
            let x = lower[rng.gen_range(0..lower.len())];
            let above: Vec<usize> = p.up_set(x).filter(|&y| y != x).collect();
            let y = above[rng.gen_range(0..above.len())];
            let sum: i64 = p.up_set(x).filter(|&z| p.less_or_equal(z, y)).map(|z| table.get(x, z)).sum();
            ensure!(sum == 0, "{}: Σ μ({}, z) over [x, {}] = {sum}", lp.name, p.name(x), p.name(y));
        }
    }
    Ok(format!("{} posets, 1000 pairs each", matrix.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let matrix = el_matrix();
    let criteria: Vec<Criterion> = vec![
        ("fig3 Segre square Möbius number", Box::new(fig3_square)),
        ("B_4^(3) chains C and D", Box::new(boolean_cube_chains)),
        ("fig1 Segre square structure", Box::new(fig1_square)),
        ("EL verification matrix", Box::new(|| el_verification(&matrix))),
        ("decreasing chains vs Möbius", Box::new(|| decreasing_vs_mobius(&matrix))),
        ("Boolean four-way agreement", Box::new(boolean_four_way)),
        ("subspace q-weighted tuple counts", Box::new(subspace_cross_check)),
        ("f-labeling worked example", Box::new(f_label_example)),
        ("B_3(2) increasing and decreasing chains", Box::new(fig4_chain)),
        ("weighted tuple formula", Box::new(weighted_tuples)),
        ("Möbius oracle consistency", Box::new(|| oracle_consistency(&matrix))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
