//! Exact acceptance criteria. Prints one line per criterion and exits with
//! a failure status if any of them fails.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use schurhopf::hopf::{
    check_coassociativity, check_counit, coproduct, image_cocommutativity, removable_ribbons,
    shape_classes_of_size,
};
use schurhopf::schur::{connected_ribbons_of_size, ribbon_product};
use schurhopf::shapes::{connected_skew_shapes, skew_shapes_in_box};
use schurhopf::verifier::{check_scalar_multiple_lemma, check_signed_sum_class};
use schurhopf::wow::{catalog, has_loose_end_ribbons, loose_end_ribbon};
use schurhopf::{
    compose, detect_wow, key_ribbons, monomial_expansion, multiply, proof_trace, ribbon_basis,
    schur_equal, schur_expand, verify_corollary, verify_main_theorem, Cell, Partition, Side,
    SkewShape, WowStructure,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn shape(s: &str) -> SkewShape {
    s.parse().unwrap()
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn worked() -> Result<WowStructure, String> {
    let found = detect_wow(&shape("4,4,2,2/2,1"));
    let s = found.first().ok_or("no structure on (4,4,2,2)/(2,1)")?;
    if *s.w() != shape("1,1") {
        return Err(format!("first structure has W = {}", s.w()));
    }
    Ok(s.clone())
}

fn counterexample() -> Result<WowStructure, String> {
    detect_wow(&shape("8,7,2/3,1"))
        .into_iter()
        .next()
        .ok_or_else(|| "no structure on (8,7,2)/(3,1)".to_string())
}

fn oracle_cross_validation() -> Outcome {
    let shapes = skew_shapes_in_box(6, 6, 6);
    let bad: Vec<String> = shapes
        .par_iter()
        .filter(|s| {
            let k = s.size();
            schur_expand(s).to_monomials(k) != monomial_expansion(s, k)
        })
        .map(|s| s.to_string())
        .collect();
    if bad.is_empty() {
        Ok(format!(
            "{} shapes agree with the filling oracle",
            shapes.len()
        ))
    } else {
        Err(format!("mismatch on {}", bad.join(" ")))
    }
}

fn hopf_axioms() -> Outcome {
    let shapes: Vec<SkewShape> = (1..=6).flat_map(connected_skew_shapes).collect();
    let bad: Vec<String> = shapes
        .par_iter()
        .filter(|s| !(check_coassociativity(s) && check_counit(s) && image_cocommutativity(s)))
        .map(|s| s.to_string())
        .collect();
    if !bad.is_empty() {
        return Err(format!("axioms fail on {}", bad.join(" ")));
    }
    let witness = coproduct(&shape("2,1"));
    if witness.is_symmetric() {
        return Err("Δ(2,1) is symmetric".into());
    }
    Ok(format!(
        "{} connected shapes; Δ(2,1) is not symmetric",
        shapes.len()
    ))
}

fn rotation() -> Outcome {
    let mut shapes: Vec<SkewShape> = (1..=7).flat_map(connected_skew_shapes).collect();
    shapes.extend(skew_shapes_in_box(7, 7, 7));
    let bad: Vec<String> = shapes
        .par_iter()
        .filter(|s| !schur_equal(s, &s.rotate180()))
        .map(|s| s.to_string())
        .collect();
    if bad.is_empty() {
        Ok(format!("{} shapes equal their rotations", shapes.len()))
    } else {
        Err(format!("rotation changes {}", bad.join(" ")))
    }
}

fn ribbon_rule() -> Outcome {
    let mut pairs = 0;
    for total in 2..=6u32 {
        for na in 1..total {
            for a in connected_ribbons_of_size(na) {
                for b in connected_ribbons_of_size(total - na) {
                    let (merged, stacked) = ribbon_product(&a, &b);
                    let lhs = multiply(&schur_expand(&a.to_shape()), &schur_expand(&b.to_shape()));
                    let rhs =
                        &schur_expand(&merged.to_shape()) + &schur_expand(&stacked.to_shape());
                    if lhs != rhs {
                        return Err(format!(
                            "r[{a}]·r[{b}] differs from r[{merged}] + r[{stacked}]"
                        ));
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} ribbon pairs"))
}

fn signed_sum() -> Outcome {
    let mut checked = 0;
    for n in 4..=6u32 {
        let basis = ribbon_basis(n, &[]).map_err(|e| e.to_string())?;
        for class in shape_classes_of_size(n as usize) {
            if class.as_connected_ribbon().is_some() {
                continue;
            }
            if !check_signed_sum_class(&class, &basis).map_err(|e| e.to_string())? {
                return Err(format!("signed sum nonzero for {class}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} shapes of sizes 4 to 6"))
}

fn scalar_multiple() -> Outcome {
    match (1..=6).find(|&n| !check_scalar_multiple_lemma(n)) {
        None => Ok("n = 1..6".into()),
        Some(n) => Err(format!("violated at n = {n}")),
    }
}

fn key_ribbon_sizes(cat: &[WowStructure]) -> Outcome {
    for s in cat {
        let k = key_ribbons(s).map_err(|e| format!("{s}: {e}"))?;
        let (t, b) = (&k.top.ribbon, &k.bottom.ribbon);
        if t.size() != b.size()
            || t.row_count() != b.row_count()
            || t.column_count() != b.column_count()
        {
            return Err(format!("{s}: top {t} vs bottom {b}"));
        }
    }
    Ok(format!("{} structures", cat.len()))
}

fn positive_instance() -> Outcome {
    let s = worked()?;
    if has_loose_end_ribbons(&s).map_err(|e| e.to_string())? {
        return Err("loose end ribbon found".into());
    }
    let r = verify_main_theorem(&part("2,1"), &s, true).map_err(|e| e.to_string())?;
    if r.equal {
        Ok(format!(
            "W = {}, {} boxes, equal",
            s.w(),
            r.lhs_shape.size()
        ))
    } else {
        Err(format!("unequal: {} vs {}", r.lhs, r.rhs))
    }
}

fn negative_instance() -> Outcome {
    let s = counterexample()?;
    let keys = key_ribbons(&s).map_err(|e| e.to_string())?;
    if keys.size() != 6 {
        return Err(format!("key ribbons have size {}", keys.size()));
    }
    let loose = loose_end_ribbon(&s)
        .map_err(|e| e.to_string())?
        .ok_or("no loose end ribbon")?;
    if loose.cells.len() != 6 {
        return Err(format!("loose end ribbon has size {}", loose.cells.len()));
    }
    let r = verify_main_theorem(&part("2,1"), &s, false).map_err(|e| e.to_string())?;
    if r.equal {
        return Err("compositions are equal".into());
    }
    Ok(format!(
        "keys {} / {}, loose end {}, unequal",
        keys.top.ribbon, keys.bottom.ribbon, loose.ribbon
    ))
}

fn one_key(cat: &[WowStructure]) -> Outcome {
    let lambdas: Vec<Partition> = (1..=3).flat_map(Partition::all_of_size).collect();
    let clean: Vec<&WowStructure> = cat
        .iter()
        .filter(|s| !has_loose_end_ribbons(s).unwrap())
        .collect();
    let failures: Vec<String> = clean
        .par_iter()
        .flat_map_iter(|s| lambdas.iter().map(move |l| (*s, l)))
        .filter_map(|(s, l)| one_key_instance(s, l).err())
        .collect();
    if failures.is_empty() {
        Ok(format!(
            "{} structures, {} partitions, both sides",
            clean.len(),
            lambdas.len()
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn one_key_instance(s: &WowStructure, lambda: &Partition) -> Result<(), String> {
    let keys = key_ribbons(s).map_err(|e| e.to_string())?;
    let n = keys.size();
    let a = SkewShape::from_partition(lambda.clone());
    let left = compose(&a, s).map_err(|e| e.to_string())?;
    let found = removable_ribbons(&left.shape, n, Side::Left);
    let place = keys
        .top
        .footprint
        .translated(left.offsets[&Cell::new(0, 0)]);
    if found.len() != 1 || found[0].0 != keys.top.ribbon || found[0].1 != place {
        return Err(format!("{s}, λ = {lambda}: left removals {found:?}"));
    }
    let rot = a.rotate180();
    let corner = rot.cells().iter().max().unwrap();
    let right = compose(&rot, s).map_err(|e| e.to_string())?;
    let found = removable_ribbons(&right.shape, n, Side::Right);
    let place = keys.bottom.footprint.translated(right.offsets[&corner]);
    if found.len() != 1 || found[0].0 != keys.bottom.ribbon || found[0].1 != place {
        return Err(format!("{s}, λ* = {rot}: right removals {found:?}"));
    }
    Ok(())
}

fn trace() -> Outcome {
    let s = worked()?;
    let beta = part("2,1");
    let t = proof_trace(&beta, &s, true).map_err(|e| e.to_string())?;
    let verdict = verify_main_theorem(&beta, &s, true)
        .map_err(|e| e.to_string())?
        .equal;
    if !t.non_key_columns_equal {
        return Err(format!("columns {:?} differ", t.unequal_columns));
    }
    if !t.all_checks_hold() {
        return Err(format!("trace checks fail:\n{t}"));
    }
    if t.derived_equal != verdict {
        return Err(format!(
            "trace gives {} but verdict is {verdict}",
            t.derived_equal
        ));
    }
    let full = image_cocommutativity(&t.composite);
    if full != t.image_cocommutative {
        return Err(format!(
            "trace cocommutativity {} vs full {full}",
            t.image_cocommutative
        ));
    }
    Ok(format!(
        "{} columns balance on {} boxes, key column gives {}",
        t.basis.len(),
        t.composite.size(),
        if verdict { "equal" } else { "unequal" }
    ))
}

fn corollary() -> Outcome {
    let s = worked()?;
    let r = verify_corollary(&part("2,1"), &s, true).map_err(|e| e.to_string())?;
    if r.equal {
        Ok("β∘γ equals β∘γ*".into())
    } else {
        Err(format!("unequal: {} vs {}", r.lhs, r.rhs))
    }
}

fn main() -> ExitCode {
    let cat = catalog(10);
    let criteria: Vec<Criterion> = vec![
        ("oracle cross-validation", Box::new(oracle_cross_validation)),
        ("Hopf axioms", Box::new(hopf_axioms)),
        ("rotation", Box::new(rotation)),
        ("ribbon rule", Box::new(ribbon_rule)),
        ("signed sum", Box::new(signed_sum)),
        ("scalar multiple", Box::new(scalar_multiple)),
        ("key ribbon sizes", Box::new(|| key_ribbon_sizes(&cat))),
        ("positive instance", Box::new(positive_instance)),
        ("negative instance", Box::new(negative_instance)),
        ("one key ribbon", Box::new(|| one_key(&cat))),
        ("proof trace", Box::new(trace)),
        ("corollary", Box::new(corollary)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
