//! The twelve end-to-end checks, each reduced to a pass flag and a one-line detail.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::correspondence::{distinguished_report, kernel_pencil, mermin_line_isomorphism, quad_shell_check, reproduce_table};
use crate::finite_ring::{direct_product_ring, maximal_ideals, principal_ideal, FiniteRing};
use crate::fixtures::Fixtures;
use crate::pauli::{
    compare_printed_eigenbases, cube_structure, matrix_product, mermin_squares, mub_partition, phased_product,
    shell_coupling, verify_tables, PauliOp,
};
use crate::projective_line::{array_3x3, ProjectiveLineModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<(bool, String), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn table_regeneration(fx: &Fixtures) -> Check {
    let reports = verify_tables(fx).map_err(err)?;
    let checked: usize = reports.iter().map(|r| r.cells_checked).sum();
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.discrepancies
                .iter()
                .map(move |d| format!("table {} ({}*{}) printed {} computed {}", r.table, d.row, d.col, d.expected, d.computed))
        })
        .collect();
    let ok = reports.iter().all(|r| r.passed());
    Ok((ok, format!("{}/{} cells match{}{}", checked - bad.len(), checked, if bad.is_empty() { "" } else { "; " }, bad.join("; "))))
}

fn oracle_agreement() -> Check {
    let agree = PauliOp::all()
        .flat_map(|a| PauliOp::all().map(move |b| (a, b)))
        .filter(|&(a, b)| matrix_product(a, b) == Some(phased_product(a, b)))
        .count();
    Ok((agree == 256, format!("{agree}/256 ordered pairs agree")))
}

fn mubs() -> Check {
    let r = mub_partition().map_err(err)?;
    let unbiased = r.unbiased_pairs.iter().filter(|p| p.2).count();
    let ok = r.pairs_checked == 10 && r.all_unbiased && r.entangled_rows == [3, 5];
    Ok((ok, format!("{unbiased}/{} pairs unbiased; entangled rows {:?}", r.pairs_checked, r.entangled_rows)))
}

fn mermin() -> Check {
    let reports = mermin_squares();
    let good = reports.iter().filter(|r| r.has_expected_signs()).count();
    Ok((good == 4, format!("{good}/4 squares give (+,+,+) on rows and (+,+,-) on columns")))
}

fn eigenbases() -> Check {
    let cmps = compare_printed_eigenbases().map_err(err)?;
    let vectors: usize = cmps.iter().map(|c| c.vectors_matched).sum();
    let full: usize = cmps.iter().map(|c| c.matched).sum();
    let bad: Vec<String> = cmps
        .iter()
        .flat_map(|c| {
            c.mismatches.iter().map(move |m| {
                format!(
                    "{:?} {} printed {} computed {}{}",
                    c.triple,
                    m.vector,
                    m.printed,
                    m.computed.map_or("none".to_string(), |s| s.to_string()),
                    if m.printed_consistent { "" } else { " (printed signature violates the product rule)" }
                )
            })
        })
        .collect();
    let ok = cmps.iter().all(|c| c.passed());
    let mut detail = format!("{vectors}/28 vectors found; {full}/28 with printed signature");
    if !bad.is_empty() {
        detail.push_str("; ");
        detail.push_str(&bad.join("; "));
    }
    Ok((ok, detail))
}

fn cardinalities() -> Check {
    let mut counts = Vec::new();
    for n in 2..=4 {
        counts.push(ProjectiveLineModel::new(direct_product_ring(n).map_err(err)?).map_err(err)?.len());
    }
    Ok((counts == [9, 27, 81], format!("point counts {counts:?}")))
}

fn perp_fine_structure() -> Check {
    let m = ProjectiveLineModel::new(direct_product_ring(2).map_err(err)?).map_err(err)?;
    let pts = m.points().to_vec();
    let nb: Vec<BTreeSet<_>> =
        pts.iter().map(|&p| m.neighbourhood(p).map(|v| v.into_iter().collect())).collect::<Result<_, _>>().map_err(err)?;
    let sizes_ok = nb.iter().all(|s| s.len() == 4);
    let mut pairs_ok = true;
    let mut triples_ok = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !m.is_distant(pts[i], pts[j]) {
                continue;
            }
            pairs_ok &= nb[i].intersection(&nb[j]).count() == 2;
            for k in j + 1..pts.len() {
                if m.is_distant(pts[i], pts[k]) && m.is_distant(pts[j], pts[k]) {
                    triples_ok &= nb[i].intersection(&nb[j]).filter(|p| nb[k].contains(p)).count() == 0;
                }
            }
        }
    }
    let array = array_3x3(&m).map_err(err)?;
    let dist: BTreeSet<String> = array.distinguished.iter().map(|&p| m.name(p)).collect();
    let want: BTreeSet<String> = ["(1,1)", "(x,x+1)", "(x+1,x)"].iter().map(|s| s.to_string()).collect();
    let ok = sizes_ok && pairs_ok && triples_ok && dist == want;
    Ok((
        ok,
        format!(
            "neighbourhoods of size 4: {sizes_ok}; distant pairs share 2: {pairs_ok}; distant triples share 0: {triples_ok}; distinguished {:?}",
            dist
        ),
    ))
}

fn mermin_line() -> Check {
    let r = mermin_line_isomorphism().map_err(err)?;
    Ok((
        r.passed(),
        format!("isomorphism found, Bell column on distinguished triple: {}; search minimum {}", r.bell_column_on_distinguished, r.min_mismatch),
    ))
}

fn tables_6_to_9(fx: &Fixtures) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in 6..=9 {
        let r = reproduce_table(t, fx).map_err(err)?;
        ok &= r.passed();
        parts.push(format!(
            "table {t}: fixture diffs {}, mismatches {} (flags match: {})",
            r.fixture_differences.len(),
            r.correspondence.mismatch_count,
            r.flags_match
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn ideal_names(ring: &FiniteRing, set: &BTreeSet<usize>) -> BTreeSet<String> {
    set.iter().map(|&i| ring.name(ring.element(i)).to_string()).collect()
}

fn ideal_structure() -> Check {
    let r = direct_product_ring(3).map_err(err)?;
    let got: BTreeSet<BTreeSet<String>> = maximal_ideals(&r).iter().map(|m| ideal_names(&r, &m.elements)).collect();
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<String>>();
    let want: BTreeSet<BTreeSet<String>> = [set(&["0", "r", "g", "y"]), set(&["0", "b", "g", "c"]), set(&["0", "b", "r", "m"])].into();
    let ideal = |n: &str| -> Result<BTreeSet<usize>, String> {
        Ok(principal_ideal(&r, r.by_name(n).map_err(err)?).map_err(err)?.elements)
    };
    let meet = |a: &str, b: &str| -> Result<BTreeSet<usize>, String> { Ok(ideal(a)?.intersection(&ideal(b)?).copied().collect()) };
    let identities = ideal("b")? == meet("c", "m")?
        && ideal("r")? == meet("y", "m")?
        && ideal("g")? == meet("y", "c")?
        && ideal_names(&r, &ideal("b")?) == set(&["0", "b"])
        && ideal_names(&r, &ideal("r")?) == set(&["0", "r"])
        && ideal_names(&r, &ideal("g")?) == set(&["0", "g"]);
    let d = distinguished_report(&direct_product_ring(4).map_err(err)?).map_err(err)?;
    let ok = got == want && identities && d.passed();
    Ok((
        ok,
        format!(
            "three maximal ideals as stated: {}; intersection identities: {identities}; four-coordinate ring: {} maximal ideals, distinguished {:?}, radical {:?}",
            got == want,
            d.maximal_ideals.len(),
            d.distinguished,
            d.radical
        ),
    ))
}

fn kernel_and_cube() -> Check {
    let pencil = kernel_pencil(3).map_err(err)?;
    let full = pencil.iter().filter(|l| l.commuting).count();
    let entangled = pencil.iter().filter(|l| l.entangled == Some(true)).count();
    let cube = cube_structure();
    let coupling = shell_coupling();
    let ok = full == 3 && entangled == 2 && cube.is_cube() && coupling.matches_expected();
    Ok((
        ok,
        format!(
            "pencil through 3: {full} full lines, {entangled} entangled; cube: {}; full graph degree {:?}, {} edges; complementary pairs {:?}",
            cube.is_cube(),
            coupling.full_graph_degree,
            coupling.full_graph_edges,
            coupling.qualifying_pairs
        ),
    ))
}

fn shell_failure() -> Check {
    let r = quad_shell_check().map_err(err)?;
    Ok((
        r.passed(),
        format!(
            "cube subset isomorphic: {}; kernel subset isomorphic: {}; distant cross pairs {}/{} vs commuting operator pairs {}",
            r.cube_isomorphic, r.kernel_isomorphic, r.distant_cross_pairs, r.cross_pairs, r.commuting_cross_pairs
        ),
    ))
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "multiplication tables regenerate"),
    (2, "symbolic product matches matrix product"),
    (3, "five row bases are mutually unbiased"),
    (4, "Mermin square signs"),
    (5, "printed eigenbases reproduce"),
    (6, "projective line cardinalities"),
    (7, "fine structure of the nine-point line"),
    (8, "Mermin square matches the nine-point line"),
    (9, "distant tables over GF(2)^3"),
    (10, "ideal structure"),
    (11, "kernel pencil, cube and coupling"),
    (12, "shell coupling fails over GF(2)^4"),
];

pub fn run_criterion(id: u8, fx: &Fixtures) -> Option<CriterionResult> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let outcome = match id {
        1 => table_regeneration(fx),
        2 => oracle_agreement(),
        3 => mubs(),
        4 => mermin(),
        5 => eigenbases(),
        6 => cardinalities(),
        7 => perp_fine_structure(),
        8 => mermin_line(),
        9 => tables_6_to_9(fx),
        10 => ideal_structure(),
        11 => kernel_and_cube(),
        12 => shell_failure(),
        _ => return None,
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CriterionResult { id, name, passed, detail })
}

pub fn run_all(fx: &Fixtures) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|&(id, _)| run_criterion(id, fx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_criterion_runs() {
        let results = run_all(&Fixtures::embedded());
        assert_eq!(results.len(), 12);
        assert!(results.iter().all(|r| !r.detail.starts_with("error")));
        assert!(run_criterion(13, &Fixtures::embedded()).is_none());
    }

    #[test]
    fn missing_fixtures_fail_cleanly() {
        let fx = Fixtures::from_dir(std::path::Path::new("/nonexistent"));
        let r = run_criterion(1, &fx).unwrap();
        assert!(!r.passed);
        assert!(r.detail.starts_with("error"));
    }
}
