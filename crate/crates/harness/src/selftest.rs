//! Fast invariant suite behind `axphy selftest`: the cheap cross-module
//! checks, each printed as one pass/fail line. Budget well under a minute.

use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_core::{fft, field::normalize_field, rng::SeededRng, Cx};
use axphy_dataset::{simulate_packet, PacketSimConfig};
use axphy_fec::{ldpc_decode_minsum, LdpcCode};
use axphy_frame::plan::TonePlan;
use axphy_frame::{ltf, pilot, qam, CodeRate, Mcs};
use axphy_rx::ReceiverConfig;

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> std::result::Result<(), String>) -> CheckResult {
    match f() {
        Ok(()) => CheckResult {
            name,
            pass: true,
            detail: String::new(),
        },
        Err(detail) => CheckResult {
            name,
            pass: false,
            detail,
        },
    }
}

fn expect(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

pub fn run_selftest() -> Vec<CheckResult> {
    let plan = TonePlan::new();
    vec![
        check("fft-impulse-and-roundtrip", || {
            let x = [Cx::new(1.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0)];
            let y = fft::fft(&x, 4).map_err(|e| e.to_string())?;
            expect(y.iter().all(|v| (v - Cx::new(1.0, 0.0)).norm() < 1e-12), "impulse")?;
            let mut rng = SeededRng::new(1, 1);
            let z: Vec<Cx> = (0..64).map(|_| rng.complex_gaussian(1.0)).collect();
            let back = fft::ifft(&fft::fft(&z, 64).unwrap(), 64).unwrap();
            expect(
                z.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-12),
                "roundtrip",
            )
        }),
        check("field-normalization", || {
            let mut rng = SeededRng::new(2, 1);
            let x: Vec<Cx> = (0..242).map(|_| rng.complex_gaussian(2.0)).collect();
            let y = normalize_field(&x).map_err(|e| e.to_string())?;
            let nsq: f64 = y.iter().map(|v| v.norm_sqr()).sum();
            expect((nsq - 242.0).abs() < 1e-9, &format!("norm^2 {nsq}"))
        }),
        check("qam-gray-roundtrip", || {
            for order in [2usize, 64, 256, 1024] {
                let pts = qam::constellation(order).map_err(|e| e.to_string())?;
                for (v, p) in pts.iter().enumerate() {
                    let bits = qam::demap(*p, order).map_err(|e| e.to_string())?;
                    let back: u32 = bits.iter().fold(0, |a, &b| (a << 1) | b as u32);
                    expect(back == v as u32, &format!("order {order} point {v}"))?;
                }
            }
            Ok(())
        }),
        check("lltf-repetitions-identical", || {
            let t = ltf::build_lltf();
            expect(t[32..96] == t[96..160], "repetitions differ")
        }),
        check("pilot-polarity-period-127", || {
            expect(
                (0..127).all(|m| pilot::pilot_sequence(m) == pilot::pilot_sequence(m + 127)),
                "period",
            )?;
            let s: f64 = pilot::polarity_sequence().iter().sum();
            expect(s == -1.0, &format!("balance sum {s}"))
        }),
        check("ldpc-parity-and-single-flip", || {
            let code = LdpcCode::for_rate(CodeRate::R56);
            let mut rng = SeededRng::new(3, 1);
            let info = rng.fill_bits(code.k);
            let cw = code.encode(&info).map_err(|e| e.to_string())?;
            expect(code.parity_ok(&cw), "H*c != 0")?;
            let mut llrs: Vec<f64> =
                cw.iter().map(|&b| if b == 0 { 40.0 } else { -40.0 }).collect();
            llrs[100] = -llrs[100];
            let (out, conv) = ldpc_decode_minsum(&llrs, &code, 20).map_err(|e| e.to_string())?;
            expect(conv && out == info, "single flip not corrected")
        }),
        check("mmse-hand-case", || {
            // h = 0.5, sigma^2 = 0.25 gives a coefficient of exactly 1.
            let h = Cx::new(0.5, 0.0);
            let c = h.conj() / (h.norm_sqr() + 0.25);
            expect((c - Cx::new(1.0, 0.0)).norm() < 1e-15, &format!("C_eq {c}"))
        }),
        check("loopback-packet-zero-errors", || {
            let cfg = PacketSimConfig {
                mcs: Mcs::Mcs7,
                n_symbols: 4,
                model: ChannelModelId::A,
                imp_type: ImpairmentType::Off,
                snr_db: f64::INFINITY,
                master_seed: 4,
                packet_index: 0,
            };
            let plan = TonePlan::new();
            let (pkt, cap) = simulate_packet(&cfg, &plan).map_err(|e| e.to_string())?;
            let rx = crate::receiver::Receiver::Conventional(ReceiverConfig::NoSmoothing);
            let out =
                crate::receiver::decode_packet(&rx, &pkt, &cap, &plan).map_err(|e| e.to_string())?;
            expect(
                out.prefec_bit_errors == 0 && !out.packet_error,
                &format!("{} bit errors", out.prefec_bit_errors),
            )
        }),
        check("channel-models-table-rows", || {
            let d = axphy_channel::ChannelModelSpec::for_model(ChannelModelId::D);
            let counts: Vec<usize> = d.clusters.iter().map(|c| c.tap_count).collect();
            expect(counts == vec![16, 7, 4], "model d clusters")?;
            let f = axphy_channel::ChannelModelSpec::for_model(ChannelModelId::F);
            expect(f.power_profile().len() == 41, "model f tap positions")
        }),
        check("dataset-shard-roundtrip", {
            let plan = plan.clone();
            move || {
                let dir = std::env::temp_dir().join("axphy_selftest_shard");
                std::fs::remove_dir_all(&dir).ok();
                let spec = axphy_dataset::DatasetSpec {
                    plans: vec![axphy_dataset::McsPlan {
                        mcs: Mcs::Mcs7,
                        grid: vec![axphy_dataset::SnrQuota {
                            snr_db: 30.0,
                            packets_per_setting: 1,
                        }],
                    }],
                    models: vec![ChannelModelId::B],
                    imp_types: vec![ImpairmentType::TypeII],
                    symbols_per_packet: 4,
                    master_seed: 11,
                    };
                let paths = axphy_dataset::generate(&spec, &dir).map_err(|e| e.to_string())?;
                let mut set = axphy_dataset::ShardSet::open(&paths).map_err(|e| e.to_string())?;
                expect(set.record_count() == 4, "record count")?;
                let rec = set.read(0).map_err(|e| e.to_string())?;
                let nsq: f64 = rec.features.rx_heltf.iter().map(|v| v * v).sum();
                std::fs::remove_dir_all(&dir).ok();
                // f32 storage keeps the normalization to about 1e-4.
                expect((nsq - 242.0).abs() < 0.01, &format!("stored heltf norm^2 {nsq}"))?;
                let _ = plan;
                Ok(())
            }
        }),
    ]
}

pub fn print_and_summarize(results: &[CheckResult]) -> bool {
    let mut all = true;
    for r in results {
        if r.pass {
            println!("selftest {:<32} PASS", r.name);
        } else {
            println!("selftest {:<32} FAIL  {}", r.name, r.detail);
            all = false;
        }
    }
    all
}
