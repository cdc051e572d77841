//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Numeric tolerances are exact (rational arithmetic, integer
//! matrices); wall-clock limits are stated per criterion.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use spark_forge::report::strip_timing;
use spark_forge::spark_bruteforce;
use spark_forge_core::audit::{construction_checks, dictionary_checks, kernel_check};
use spark_forge_core::designs::{
    a_matrix, build_net, latin_family, verify_a_matrix, verify_mols, verify_net,
};
use spark_forge_core::dict::{
    apply, build_dictionary, build_null_vector, coherence, spark_certify, Family, Rational,
    ScaledDictionary, SparkCertificate, SparseVector, Verdict,
};
use spark_forge_core::gf::{ExtensionField, Field, FieldElement};
use spark_forge_core::hadamard::{
    permuted_hadamard, sylvester, verify_extension_structure, verify_permuted_structure,
};
use spark_forge_core::search::{BruteForceOutcome, ColumnSet, DEFAULT_BUDGET};

const BIN: &str = env!("CARGO_BIN_EXE_spark-forge");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e(i: u16) -> FieldElement {
    FieldElement::new(i)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {:.2?}, limit {:.0?}", t, limit);
    Ok(())
}

fn dict_and_vector(family: Family, q: usize) -> Result<(ScaledDictionary, SparseVector), String> {
    let d = build_dictionary(family, q).map_err(|e| e.to_string())?;
    let x = build_null_vector(family, q).map_err(|e| e.to_string())?;
    Ok((d, x))
}

fn certify(d: &ScaledDictionary, x: &SparseVector) -> Result<SparkCertificate, String> {
    spark_certify(d, x).map_err(|e| e.to_string())
}

fn in_kernel(d: &ScaledDictionary, x: &SparseVector) -> Result<(), String> {
    let r = apply(d, x).map_err(|e| e.to_string())?;
    ensure!(r.iter().all(|&v| v == 0), "residual {:?} is not zero", r);
    Ok(())
}

fn search(d: &ScaledDictionary, k_max: usize, workers: usize) -> Result<BruteForceOutcome, String> {
    let cols = ColumnSet::from_sign_columns(d.columns());
    spark_bruteforce(&cols, k_max, workers, DEFAULT_BUDGET).map_err(|e| e.to_string())
}

fn all_pass(d: &ScaledDictionary, family: Family, q: usize) -> Result<usize, String> {
    let mut checks = construction_checks(family, q).map_err(|e| e.to_string())?;
    checks.extend(dictionary_checks(d));
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.to_string()).collect();
    ensure!(failed.is_empty(), "failed checks: {}", failed.join("; "));
    Ok(checks.len())
}

fn elements(rows: &[&[u16]]) -> Vec<Vec<FieldElement>> {
    rows.iter().map(|r| r.iter().map(|&v| e(v)).collect()).collect()
}

fn criterion_q2_base() -> Outcome {
    let start = Instant::now();
    let (d, x) = dict_and_vector(Family::Base, 2)?;
    let golden: [[i8; 12]; 4] = [
        [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0],
        [0, 0, 1, 1, 0, 0, 1, 1, 1, -1, 0, 0],
        [1, -1, 0, 0, 0, 0, 1, -1, 0, 0, 1, 1],
        [0, 0, 1, -1, 1, -1, 0, 0, 0, 0, 1, -1],
    ];
    let dense = d.columns().to_dense();
    ensure!(d.scale_sq() == 2, "scale^2 = {}", d.scale_sq());
    ensure!(dense == golden.map(|r| r.to_vec()).to_vec(), "sqrt(2)·D = {:?}", dense);
    ensure!(
        x.to_dense() == [1, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0],
        "x = {:?}",
        x.to_dense()
    );
    in_kernel(&d, &x)?;
    let mu = coherence(&d).map_err(|e| e.to_string())?.value;
    ensure!(mu == Rational::new(1, 2), "mu = {mu}");
    let out = search(&d, 3, 1)?;
    ensure!(out.spark() == Some(3), "brute-force spark {:?}", out.spark());
    let cert = certify(&d, &x)?.with_search(&out);
    ensure!(cert.exact_spark() == Some(3), "verdict {:?}", cert.verdict);
    ensure!(cert.tightness_product() == Rational::new(3, 2), "eta·mu = {}", cert.tightness_product());
    within(start, Duration::from_secs(1), "q=2 run")?;
    Ok(format!(
        "4x12 golden, mu = 1/2, spark 3 (witness {:?}), eta·mu = 3/2",
        out.witness.unwrap_or_default()
    ))
}

fn criterion_q4_base() -> Outcome {
    let f = Field::new(2).map_err(|e| e.to_string())?;
    let mul = elements(&[&[0, 0, 0, 0], &[0, 1, 2, 3], &[0, 2, 3, 1], &[0, 3, 1, 2]]);
    ensure!(f.mul_table() == mul, "multiplication table {:?}", f.mul_table());
    for a in f.elements() {
        for b in f.elements() {
            ensure!(f.add(a, b) == e(a.index() as u16 ^ b.index() as u16), "{a} + {b}");
        }
    }
    let squares = [
        elements(&[&[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1, 2, 3]]),
        elements(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 0, 1], &[3, 2, 1, 0]]),
        elements(&[&[0, 1, 2, 3], &[2, 3, 0, 1], &[3, 2, 1, 0], &[1, 0, 3, 2]]),
        elements(&[&[0, 1, 2, 3], &[3, 2, 1, 0], &[1, 0, 3, 2], &[2, 3, 0, 1]]),
    ];
    for (r, (sq, want)) in latin_family(&f).iter().zip(&squares).enumerate() {
        let got: Vec<Vec<FieldElement>> = f.elements().map(|i| sq.row(i).to_vec()).collect();
        ensure!(&got == want, "L^{r} = {:?}", got);
    }
    let a = a_matrix(&f);
    let want_a = elements(&[&[0, 1, 3, 2], &[0, 0, 1, 1], &[0, 3, 0, 3], &[0, 2, 2, 0]]);
    let got_a: Vec<Vec<FieldElement>> = f.elements().map(|i| a.row(i).to_vec()).collect();
    ensure!(got_a == want_a, "A = {:?}", got_a);
    let h = sylvester(2).map_err(|e| e.to_string())?.to_dense();
    ensure!(
        h == [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]],
        "H = {:?}",
        h
    );
    let ht = permuted_hadamard(2).map_err(|e| e.to_string())?.to_dense();
    ensure!(
        ht == [[1, 1, 1, 1], [1, -1, -1, 1], [1, 1, -1, -1], [1, -1, 1, -1]],
        "permuted H = {:?}",
        ht
    );

    let (d, x) = dict_and_vector(Family::Base, 4)?;
    let mu = coherence(&d).map_err(|e| e.to_string())?.value;
    ensure!(mu == Rational::new(1, 4), "mu = {mu}");
    ensure!(x.support() == [0, 21, 46, 59, 64], "support {:?}", x.support());
    in_kernel(&d, &x)?;

    let start = Instant::now();
    let out = search(&d, 4, 1)?;
    let single = start.elapsed();
    ensure!(single < Duration::from_secs(300), "single-threaded search took {single:.2?}");
    ensure!(out.witness.is_none(), "dependent subset {:?}", out.witness);
    ensure!(out.level_sizes.last() == Some(&(4, 1_581_580)), "levels {:?}", out.level_sizes);
    let start = Instant::now();
    let wide = search(&d, 4, 8)?;
    let parallel = start.elapsed();
    ensure!(parallel < Duration::from_secs(60), "8-worker search took {parallel:.2?}");
    ensure!(wide == out, "8-worker outcome differs");

    let cert = certify(&d, &x)?.with_search(&out);
    ensure!(
        cert.verdict == Verdict::Exact { spark: 5, by_bound: true, by_search: true },
        "verdict {:?}",
        cert.verdict
    );
    ensure!(cert.tightness_product() == Rational::new(5, 4), "eta·mu = {}", cert.tightness_product());
    Ok(format!(
        "tables, squares, A, H match; no dependent 4-subset of 1581580; spark 5, eta·mu = 5/4 \
         (search {single:.2?} on 1 worker, {parallel:.2?} on 8)"
    ))
}

fn criterion_q2_extension() -> Outcome {
    // labels 0, 1, 2, 3 name the bit words 00, 10, 01, 11
    const LABEL: [usize; 4] = [0b00, 0b10, 0b01, 0b11];
    let relabel = |m: &[Vec<i8>]| -> Vec<Vec<i8>> {
        (0..4).map(|i| (0..4).map(|j| m[LABEL[i]][LABEL[j]]).collect()).collect()
    };
    let h = relabel(&sylvester(2).map_err(|e| e.to_string())?.to_dense());
    ensure!(
        h == [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]],
        "relabeled H = {:?}",
        h
    );
    let ht = relabel(&permuted_hadamard(2).map_err(|e| e.to_string())?.to_dense());
    ensure!(
        ht == [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]],
        "relabeled permuted H = {:?}",
        ht
    );

    let base = Field::new(1).map_err(|e| e.to_string())?;
    let ext = ExtensionField::new(&base).map_err(|e| e.to_string())?;
    let members = |b: u16| -> Vec<usize> {
        ext.coset_members(ext.xi(e(b))).iter().map(|m| m.index()).collect()
    };
    ensure!(members(0) == [LABEL[0], LABEL[1]], "xi(0) = {:?}", members(0));
    ensure!(members(1) == [LABEL[2], LABEL[3]], "xi(1) = {:?}", members(1));
    ensure!(ext.iota(e(0)).index() == 0b00, "iota(0) = {}", ext.iota(e(0)));
    ensure!(ext.iota(e(1)).index() == 0b01, "iota(1) = {}", ext.iota(e(1)));

    let (d, y) = dict_and_vector(Family::Extension, 2)?;
    ensure!((d.dimension(), d.n_cols()) == (16, 48), "shape {}x{}", d.dimension(), d.n_cols());
    let mu = coherence(&d).map_err(|e| e.to_string())?.value;
    ensure!(mu == Rational::new(1, 4), "mu = {mu}");
    ensure!(y.support() == [0, 8, 21, 29, 32, 40], "support {:?}", y.support());
    in_kernel(&d, &y)?;

    let start = Instant::now();
    let out = search(&d, 5, 1)?;
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(300), "search took {t:.2?}");
    ensure!(out.witness.is_none(), "dependent subset {:?}", out.witness);
    ensure!(out.level_sizes.last() == Some(&(5, 1_712_304)), "levels {:?}", out.level_sizes);
    let cert = certify(&d, &y)?.with_search(&out);
    ensure!(cert.exact_spark() == Some(6), "verdict {:?}", cert.verdict);
    ensure!(cert.coherence_bound == Rational::from_integer(5), "1 + 1/mu = {}", cert.coherence_bound);
    ensure!(cert.tightness_product() == Rational::new(3, 2), "eta·mu = {}", cert.tightness_product());
    Ok(format!(
        "relabeled H, xi, iota match; 16x48, mu = 1/4; no dependent 5-subset of 1712304; \
         spark 6 > 5, eta·mu = 3/2 (search {t:.2?})"
    ))
}

fn criterion_large_base() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (q, rows, cols) in [(8usize, 64usize, 576usize), (16, 256, 4352)] {
        let (d, x) = dict_and_vector(Family::Base, q)?;
        ensure!((d.dimension(), d.n_cols()) == (rows, cols), "q={q}: shape {}x{}", d.dimension(), d.n_cols());
        let n = all_pass(&d, Family::Base, q)?;
        let c = coherence(&d).map_err(|e| e.to_string())?;
        ensure!(c.max_abs_inner == 1, "q={q}: max cross product {}", c.max_abs_inner);
        ensure!(c.value == Rational::new(1, q as u64), "q={q}: mu = {}", c.value);
        ensure!(kernel_check(&d, &x).passed(), "q={q}: {}", kernel_check(&d, &x));
        let cert = certify(&d, &x)?;
        ensure!(
            cert.verdict == Verdict::Exact { spark: q + 1, by_bound: true, by_search: false },
            "q={q}: verdict {:?}",
            cert.verdict
        );
        notes.push(format!("q={q} {rows}x{cols} {n} checks, spark {}", q + 1));
    }
    within(start, Duration::from_secs(30), "q=8 and q=16")?;
    Ok(format!("{} ({:.2?})", notes.join("; "), start.elapsed()))
}

fn criterion_q4_extension() -> Outcome {
    let start = Instant::now();
    let (d, y) = dict_and_vector(Family::Extension, 4)?;
    ensure!((d.dimension(), d.n_cols()) == (256, 1280), "shape {}x{}", d.dimension(), d.n_cols());
    let n = all_pass(&d, Family::Extension, 4)?;
    let mu = coherence(&d).map_err(|e| e.to_string())?.value;
    ensure!(mu == Rational::new(1, 16), "mu = {mu}");
    ensure!(y.support_size() == 20, "support size {}", y.support_size());
    ensure!(kernel_check(&d, &y).passed(), "{}", kernel_check(&d, &y));
    let cert = certify(&d, &y)?;
    ensure!(cert.union_bound == Some(Rational::from_integer(20)), "union bound {:?}", cert.union_bound);
    ensure!(
        cert.verdict == Verdict::Exact { spark: 20, by_bound: true, by_search: false },
        "verdict {:?}",
        cert.verdict
    );
    ensure!(cert.coherence_bound == Rational::from_integer(17), "1 + 1/mu = {}", cert.coherence_bound);
    within(start, Duration::from_secs(60), "thm2 q=4")?;
    Ok(format!(
        "256x1280, {n} checks, mu = 1/16, spark 20 > 17 ({:.2?})",
        start.elapsed()
    ))
}

fn field_axioms(f: &Field, a: FieldElement, b: FieldElement, c: FieldElement) -> bool {
    f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        && f.mul(a, b) == f.mul(b, a)
        && f.add(a, b) == f.add(b, a)
        && f.mul(f.one(), a) == a
        && f.add(FieldElement::ZERO, a) == a
        && f.add(a, a) == FieldElement::ZERO
        && (a == FieldElement::ZERO || f.inv(a).is_some_and(|i| f.mul(a, i) == f.one()))
}

fn criterion_properties() -> Outcome {
    let start = Instant::now();
    let mut fields = Vec::new();
    for m in 1..=8 {
        fields.push(Field::new(m).map_err(|e| e.to_string())?);
    }
    for bm in 1..=2 {
        let base = Field::new(bm).map_err(|e| e.to_string())?;
        fields.push(ExtensionField::new(&base).map_err(|e| e.to_string())?.field().clone());
    }
    let mut exhaustive = 0u64;
    for f in fields.iter().filter(|f| f.order() <= 16) {
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    ensure!(field_axioms(f, a, b, c), "axiom fails on GF({}) at {a},{b},{c}", f.order());
                    exhaustive += 1;
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for f in fields.iter().filter(|f| f.degree() <= 8) {
        let q = f.order() as u16;
        for _ in 0..10_000 {
            let [a, b, c] = [0; 3].map(|_| e(rng.gen_range(0..q)));
            ensure!(field_axioms(f, a, b, c), "axiom fails on GF({q}) at {a},{b},{c}");
        }
    }
    for f in &fields[..8] {
        let mut seen = vec![false; f.order()];
        for a in f.elements() {
            seen[f.square(a).index()] = true;
        }
        ensure!(seen.iter().all(|&s| s), "squaring is not onto GF({})", f.order());
    }
    for f in &fields[..4] {
        let mols = verify_mols(f, &latin_family(f));
        ensure!(mols.passed(), "q={}: {:?}", f.order(), mols.checks().map(|c| c.to_string()));
        let a = verify_a_matrix(f, &a_matrix(f));
        ensure!(a.passed(), "q={}: {} / {}", f.order(), a.row_zero_permutation, a.collision_law);
        let net = verify_net(&build_net(f));
        ensure!(net.passed(), "q={}: net {}", f.order(), net.across_families);
    }
    for f in &fields[..8] {
        let h = permuted_hadamard(f.degree()).map_err(|e| e.to_string())?;
        let r = verify_permuted_structure(f, &h).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "m={}: {} / {}", f.degree(), r.unit_border, r.sign_flip);
    }
    for bm in 1..=4 {
        let base = Field::new(bm).map_err(|e| e.to_string())?;
        let ext = ExtensionField::new(&base).map_err(|e| e.to_string())?;
        let h = permuted_hadamard(2 * bm).map_err(|e| e.to_string())?;
        let r = verify_extension_structure(&ext, &h).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "base m={bm}: {} / {}", r.subfield_rows, r.paired_columns);
    }
    Ok(format!(
        "{exhaustive} exhaustive triples, 10000 random triples per field, squaring, MOLS, \
         collision law, net over q<=16, Hadamard structure m<=8 and base m<=4 ({:.2?})",
        start.elapsed()
    ))
}

fn cli(args: &[&str]) -> Result<String, String> {
    let o = Command::new(BIN)
        .args(args)
        .env_remove("SPARK_FORGE_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        o.status.success(),
        "{args:?} exited {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    Ok(String::from_utf8_lossy(&o.stdout).into_owned())
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        let mut bytes = fs::read(&p).map_err(|e| e.to_string())?;
        if name.ends_with(".report.json") {
            let v: Value = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
            bytes = serde_json::to_vec(&strip_timing(v)).unwrap();
        }
        files.push((name, bytes));
    }
    files.sort();
    Ok(files)
}

fn criterion_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for workers in ["1", "2", "8"] {
        let dir = tmp.path().join(workers);
        let d = dir.to_str().unwrap();
        for (family, q) in [("thm1", "4"), ("thm2", "2")] {
            cli(&["construct", "--family", family, "--q", q, "--out-dir", d])?;
            cli(&["construct", "--family", family, "--q", q, "--out-dir", d, "--format", "json"])?;
        }
        let mut sparks = Vec::new();
        for (family, q, k) in [("thm1", "2", "3"), ("thm1", "4", "5"), ("thm2", "2", "6")] {
            let out = cli(&[
                "spark", "--family", family, "--q", q, "--brute-force", "--k-max", k,
                "--workers", workers, "--format", "json",
            ])?;
            let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
            sparks.push(strip_timing(v));
        }
        runs.push((read_dir_sorted(&dir)?, sparks));
    }
    for (i, run) in runs.iter().enumerate().skip(1) {
        ensure!(run.0 == runs[0].0, "artifacts differ between run 0 and run {i}");
        ensure!(run.1 == runs[0].1, "spark reports differ between run 0 and run {i}");
    }
    let witnesses: Vec<String> =
        runs[0].1.iter().map(|v| v["brute_force"]["witness"].to_string()).collect();
    ensure!(
        witnesses == ["[0,4,11]", "[0,16,37,53,69]", "[0,1,16,17,42,43]"],
        "witnesses {:?}",
        witnesses
    );
    Ok(format!(
        "{} files identical across --workers 1/2/8; witnesses {}",
        runs[0].0.len(),
        witnesses.join(" ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("q=2 base dictionary, null vector and spark", criterion_q2_base),
        ("q=4 base tables, designs and exhaustive spark", criterion_q4_base),
        ("q=2 extension labels, maps and exhaustive spark", criterion_q2_extension),
        ("q=8 and q=16 base families certified without search", criterion_large_base),
        ("q=4 extension family certified above 1 + 1/mu", criterion_q4_extension),
        ("property suites", criterion_properties),
        ("deterministic CLI artifacts", criterion_determinism),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
