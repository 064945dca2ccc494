use std::path::Path;

use rbq_core::exactmath::{parse_poly, rat, Rational};
use rbq_core::operator::{
    compare_with_transcription, generate_system, theorem31_residuals, Corpus, CorpusKind, MatrixJson, OperatorMatrix,
    RbVerdict, WeightMode,
};

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn corpus_files_load_from_disk() {
    let a = Corpus::load(CorpusKind::A, &data("system_a.txt")).unwrap();
    assert_eq!(a, Corpus::shipped(CorpusKind::A));
    assert_eq!(a.equations[0].label, "(a1)");
    assert_eq!(
        a.equations[0].poly,
        parse_poly("-a11^2+a21^2-2*a12*a21-2*a13*a31-2*a14*a41").unwrap()
    );
    let b = Corpus::load(CorpusKind::B, &data("system_b.txt")).unwrap();
    assert_eq!(b.equations.len(), 58);
    assert!(b.equations[34].text.contains("a35"));
}

#[test]
fn typo_is_not_patched_in_the_shipped_file() {
    let text = std::fs::read_to_string(data("system_b.txt")).unwrap();
    assert!(text.contains("a35^2-a13^2"));
}

#[test]
fn sign_duplicates_collapse() {
    let a = Corpus::shipped(CorpusKind::A);
    let sys = generate_system(WeightMode::Zero);
    assert!(sys.len() < a.equations.len());
    let diff = compare_with_transcription(&sys, &a);
    assert!(diff.is_empty());
}

#[test]
fn generated_system_decides_membership() {
    let sys = generate_system(WeightMode::Zero);
    let mut p = OperatorMatrix::<Rational>::zero(rat(0));
    for (r, c, v) in [(2, 0, 1), (2, 1, 2), (3, 0, 3), (3, 1, 4)] {
        p.set_entry(r, c, rat(v));
    }
    assert!(sys.vanishes_at(&p));
    assert!(p.is_rota_baxter().holds());
    p.set_entry(0, 0, rat(1));
    assert!(!sys.vanishes_at(&p));
    assert!(!p.is_rota_baxter().holds());
    assert!(theorem31_residuals(&p).iter().flatten().flatten().any(|x| *x != rat(0)));
}

#[test]
fn matrix_file_round_trip() {
    let text = r#"{"lambda": "-2", "entries": [["2","0","0","0"],["0","2","0","0"],["0","0","2","0"],["0","0","0","2"]]}"#;
    let m = MatrixJson::from_json_str(text).unwrap().to_rational_matrix().unwrap();
    assert_eq!(m, OperatorMatrix::scalar(&rat(2), rat(-2)));
    assert!(matches!(m.is_rota_baxter(), RbVerdict::Holds));
    let json = serde_json::to_string(&m.to_json()).unwrap();
    let back: MatrixJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back.to_rational_matrix().unwrap(), m);
}
