use prg_core::correspondence::{fano_cross_check, quad_shell_check, reproduce_table};
use prg_core::finite_ring::{direct_product_ring, quotient_ring_gf2};
use prg_core::fixtures::Fixtures;
use prg_core::pauli::{verify_table, TableSet};
use prg_core::projective_line::{ProjectiveLineModel, ShellTag};
use prg_core::verify::run_all;

#[test]
fn distant_tables_reproduce_with_stated_counts() {
    let fx = Fixtures::embedded();
    let counts: Vec<usize> = (6..=9).map(|t| reproduce_table(t, &fx).unwrap().correspondence.mismatch_count).collect();
    assert_eq!(counts, [0, 0, 4, 14]);
    for t in 6..=9 {
        let r = reproduce_table(t, &fx).unwrap();
        assert!(r.fixture_differences.is_empty(), "table {t}");
        assert!(r.flags_match, "table {t}");
    }
}

#[test]
fn only_the_transcription_errata_fail() {
    let fx = Fixtures::embedded();
    let failing: Vec<u8> = run_all(&fx).into_iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(failing, [1, 5]);
    assert!(verify_table(TableSet::B, &fx).unwrap().passed());
    assert_eq!(verify_table(TableSet::A, &fx).unwrap().discrepancies.len(), 2);
    assert_eq!(verify_table(TableSet::AB, &fx).unwrap().discrepancies.len(), 1);
}

#[test]
fn line_sizes_and_shells() {
    let m = ProjectiveLineModel::new(direct_product_ring(3).unwrap()).unwrap();
    assert_eq!(m.len(), 27);
    let counts = m.shell_counts();
    assert_eq!(counts.values().sum::<usize>(), 27);
    assert_eq!(counts.get(&ShellTag::Nucleus).copied(), Some(3));
    assert_eq!(counts.get(&ShellTag::Mixed).copied(), Some(12));
    assert_eq!(counts.get(&ShellTag::Outer).copied(), Some(12));
    for modulus in [0b111u64, 0b1011] {
        let field = quotient_ring_gf2(modulus).unwrap();
        let q = field.order();
        assert_eq!(ProjectiveLineModel::new(field).unwrap().len(), q + 1);
    }
}

#[test]
fn shells_and_fano_cross_checks() {
    assert!(quad_shell_check().unwrap().passed());
    let fano = fano_cross_check().unwrap();
    assert!(fano.agree);
    assert_eq!(fano.lines.len(), 7);
}

#[test]
fn fixture_override_directory_is_honoured() {
    let dir = std::env::temp_dir().join(format!("prg-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(&src).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
    }
    let table2 = dir.join("table2.txt");
    let text = std::fs::read_to_string(&table2).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let row = lines.iter().position(|l| !l.starts_with('#') && !l.trim().is_empty()).unwrap() + 1;
    let mut cells: Vec<String> = lines[row].split_whitespace().map(str::to_owned).collect();
    cells[1] = if cells[1] == "0" { "1".into() } else { "0".into() };
    lines[row] = cells.join(" ");
    std::fs::write(&table2, lines.join("\n")).unwrap();
    let fx = Fixtures::from_dir(&dir);
    assert_eq!(verify_table(TableSet::B, &fx).unwrap().discrepancies.len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
