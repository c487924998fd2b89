//! Hot paths: the enumeration kernel and the per-record string metrics.
//! The (2,2) class is small enough to enumerate per iteration; the
//! per-string metrics run over a representative 196-bit payload (an
//! answer-sized text re-encoded at 7 bits per byte).

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use seqbench_core::ctm::{build_table, simulate_run, BuildOptions};
use seqbench_core::metrics::{bdm, deflate_length, lzw_length, shannon_entropy, BdmConfig};
use seqbench_core::predict::levenshtein;

fn payload_bits() -> String {
    "print([0, 1, 0, 1, 0, 1, 0, 1, 0, 1])"
        .bytes()
        .map(|b| format!("{b:07b}"))
        .collect()
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("build_table_2_2", |b| {
        let opts = BuildOptions::new(2, 6);
        b.iter(|| black_box(build_table(&opts).unwrap()))
    });
    c.bench_function("simulate_single_machine", |b| {
        b.iter(|| black_box(simulate_run(2, 1234, 6)))
    });
}

fn string_metrics(c: &mut Criterion) {
    let table = build_table(&BuildOptions::new(2, 6)).unwrap();
    let cfg = BdmConfig::for_table(&table);
    let bits = payload_bits();
    c.bench_function("bdm_196_bits", |b| {
        b.iter(|| black_box(bdm(&bits, &cfg).unwrap()))
    });
    c.bench_function("entropy_196_bits", |b| {
        b.iter(|| black_box(shannon_entropy(&bits, 2).unwrap()))
    });
    c.bench_function("lzw_196_bits", |b| b.iter(|| black_box(lzw_length(&bits))));
    c.bench_function("deflate_196_bits", |b| b.iter(|| black_box(deflate_length(&bits))));
    c.bench_function("levenshtein_98x98", |b| {
        let (a, z) = bits.split_at(bits.len() / 2);
        b.iter(|| black_box(levenshtein(a, z)))
    });
}

criterion_group!(benches, enumeration, string_metrics);
criterion_main!(benches);
