//! Parallel-vs-sequential throughput of the two hot loops: the per-packet
//! simulate-and-decode pipeline and neural batch inference. With the
//! `parallel` feature (default) the indexed map runs on rayon; the `_seq`
//! variant is the sequential fallback, so the pair measures the speedup on
//! the host.

use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_core::par;
use axphy_dataset::{simulate_packet, PacketSimConfig};
use axphy_frame::plan::TonePlan;
use axphy_frame::Mcs;
use axphy_harness::receiver::{decode_packet, Receiver};
use axphy_neural::model::Architecture;
use axphy_neural::{extract_features, NeuralReceiver};
use axphy_rx::ReceiverConfig;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn packet_job(i: usize) -> u64 {
    let plan = TonePlan::new();
    let cfg = PacketSimConfig {
        mcs: Mcs::Mcs7,
        n_symbols: 4,
        model: ChannelModelId::D,
        imp_type: ImpairmentType::TypeIII,
        snr_db: 30.0,
        master_seed: 5,
        packet_index: i as u64,
    };
    let (pkt, cap) = simulate_packet(&cfg, &plan).unwrap();
    let rx = Receiver::Conventional(ReceiverConfig::NoSmoothing);
    let out = decode_packet(&rx, &pkt, &cap, &plan).unwrap();
    out.prefec_bit_errors
}

fn bench_packet_pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("packet_pipeline");
    g.sample_size(10);
    let n = 8;
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(par::map_indexed(n, packet_job)))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(par::map_indexed_seq(n, packet_job)))
    });
    g.finish();
}

fn bench_neural_inference(c: &mut Criterion) {
    let plan = TonePlan::new();
    let cfg = PacketSimConfig {
        mcs: Mcs::Mcs7,
        n_symbols: 16,
        model: ChannelModelId::B,
        imp_type: ImpairmentType::TypeII,
        snr_db: 35.0,
        master_seed: 6,
        packet_index: 0,
    };
    let (_, cap) = simulate_packet(&cfg, &plan).unwrap();
    let fvs: Vec<_> = (0..16)
        .map(|m| extract_features(&cap, m, &plan).unwrap())
        .collect();
    let arch = Architecture {
        clusters: 13,
        hidden_layers: 3,
        hidden_units: 64,
    };
    let model = NeuralReceiver::new(Mcs::Mcs7, arch, 9).unwrap();
    let mut g = c.benchmark_group("neural_inference");
    g.sample_size(20);
    g.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(par::map_indexed(fvs.len(), |i| {
                model.predict_symbol(&fvs[i]).len()
            }))
        })
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(par::map_indexed_seq(fvs.len(), |i| {
                model.predict_symbol(&fvs[i]).len()
            }))
        })
    });
    g.finish();
}

criterion_group!(benches, bench_packet_pipeline, bench_neural_inference);
criterion_main!(benches);
