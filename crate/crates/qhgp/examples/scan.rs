//! Dev-time scan: sizes, seeds, and timing estimates for the acceptance suite.

use qhgp::hgp::{build_hprime_nonnoisy, logical_distance};
use qhgp::qdecode::{
    decode_noisy_version, noisy_in_promise, noisy_quantum_code, nonnoisy_in_promise,
    nonnoisy_quantum_code, observed_syndrome, QuantumNoisyInstance, QuantumNonNoisyInstance,
};
use qhgp::{
    build_hgp, certify_expansion, decode_nonnoisy_version, frs_code, hgp_params, logical_equiv,
    rs_code, single_parity_code, BipartiteGraph, ExpanderCode, Field, Gf, LinearCode, Mat,
    PolyDecoder, Side, DISTANCE_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn rep_code(n: usize) -> LinearCode {
    let f = Field::canonical(1);
    let rows: Vec<Vec<Gf>> = (0..n - 1)
        .map(|i| {
            let mut row = vec![Gf::ZERO; n];
            row[i] = Gf::ONE;
            row[i + 1] = Gf::ONE;
            row
        })
        .collect();
    LinearCode::from_parity(Mat::from_rows(f, rows), format!("rep[{n},1]")).unwrap()
}

fn hamming74() -> LinearCode {
    let f = Field::canonical(1);
    let rows = vec![
        vec![1u16, 0, 1, 0, 1, 0, 1],
        vec![0, 1, 1, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 1, 1, 1],
    ];
    let rows: Vec<Vec<Gf>> = rows.into_iter().map(|r| r.into_iter().map(Gf).collect()).collect();
    LinearCode::from_parity(Mat::from_rows(f, rows), "hamming[7,4]").unwrap()
}

fn sample_bits(rng: &mut ChaCha8Rng, len: usize, w: usize) -> Vec<Gf> {
    let mut v = vec![Gf::ZERO; len];
    let mut placed = 0;
    while placed < w {
        let p = rng.random_range(0..len);
        if v[p].is_zero() {
            v[p] = Gf::ONE;
            placed += 1;
        }
    }
    v
}

fn section_noisy_dims_and_timing() {
    println!("== noisy product (affine plane) ==");
    let inner = single_parity_code(Field::canonical(1), 4);
    let exp = ExpanderCode::new(BipartiteGraph::affine_plane(), &inner).unwrap();
    println!("expander code: [{}, {}]", exp.code.n(), exp.code.k());
    for smax in 1..=6 {
        match certify_expansion(&exp.graph, smax) {
            Ok(c) => println!(
                "  smax={smax}: delta={}/{} radius={}",
                c.delta_num, c.delta_den, c.radius
            ),
            Err(e) => println!("  smax={smax}: {e}"),
        }
    }
    let qc = noisy_quantum_code(exp).unwrap();
    let s = qc.n_slices();
    let nq = qc.code.n_qubits();
    println!("h' is {s}x{s}, product [[{nq}]], positions qubits={} syn={}", 2 * s * s, s * s);

    // timing: in-promise radius-1 pairs
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t0 = Instant::now();
    let mut done = 0;
    let mut tried = 0;
    while done < 500 {
        tried += 1;
        let qw = rng.random_range(1..=2);
        let sw = rng.random_range(0..=1);
        let e_q = sample_bits(&mut rng, 2 * s * s, qw);
        let e_s = sample_bits(&mut rng, s * s, sw);
        let (x, y) = e_q.split_at(s * s);
        if !noisy_in_promise(&qc.hp.h_prime, x, y, &e_s, 1) {
            continue;
        }
        let s_obs = observed_syndrome(&qc.hp.h_prime, x, y, &e_s);
        let inst = QuantumNoisyInstance { code: &qc, s_obs, weight_budget: 6 };
        let res = decode_noisy_version(&inst).unwrap();
        let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
        assert!(logical_equiv(&qc.code, &guess, &e_q, Side::One));
        done += 1;
    }
    let el = t0.elapsed();
    println!(
        "500 in-promise decodes (of {tried} sampled) in {:?} => {:.1} us/decode",
        el,
        el.as_micros() as f64 / 500.0
    );
    let total_pairs = (3 * s * s) * (3 * s * s - 1) / 2 + 3 * s * s;
    println!(
        "exhaustive <=2-position sweep would be ~{total_pairs} patterns => ~{:.0} s",
        total_pairs as f64 * el.as_secs_f64() / 500.0 * (500.0 / tried as f64)
    );
}

fn section_seed_scan() {
    let (nl, nr, dl, dr): (usize, usize, usize, usize) = match std::env::var("SCAN_SIZE").as_deref()
    {
        Ok("40") => (40, 30, 3, 4),
        Ok("48") => (48, 36, 3, 4),
        Ok("3020") => (30, 20, 4, 6),
        _ => (32, 24, 3, 4),
    };
    let seed_lo: u64 =
        std::env::var("SCAN_SEED_LO").ok().and_then(|v| v.parse().ok()).unwrap_or(0);
    let seed_hi: u64 =
        std::env::var("SCAN_SEED_HI").ok().and_then(|v| v.parse().ok()).unwrap_or(24);
    println!("== uncertified random graph seed scan ({nl}, {nr}, {dl}, {dr}) ==");
    let inner = single_parity_code(Field::canonical(1), dr);
    for seed in seed_lo..seed_hi {
        let graph = match BipartiteGraph::random_biregular(nl, nr, dl, dr, seed) {
            Ok(g) => g,
            Err(e) => {
                println!("seed {seed}: graph failed: {e}");
                continue;
            }
        };
        let exp = match ExpanderCode::new(graph, &inner) {
            Ok(x) => x,
            Err(e) => {
                println!("seed {seed}: code failed: {e}");
                continue;
            }
        };
        let nk = (exp.code.n(), exp.code.k());
        let qc = match noisy_quantum_code(exp) {
            Ok(q) => q,
            Err(e) => {
                println!("seed {seed}: hprime failed: {e}");
                continue;
            }
        };
        let s = qc.n_slices();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let t0 = Instant::now();
        let mut results = Vec::new();
        for radius in 1..=2usize {
            let mut ok = 0;
            let trials = 400;
            for _ in 0..trials {
                let (e_q, e_s) = loop {
                    let qw = rng.random_range(1..=2 * radius);
                    let sw = rng.random_range(0..=radius);
                    let e_q = sample_bits(&mut rng, 2 * s * s, qw);
                    let e_s = sample_bits(&mut rng, s * s, sw);
                    let (x, y) = e_q.split_at(s * s);
                    if noisy_in_promise(&qc.hp.h_prime, x, y, &e_s, radius) {
                        break (e_q, e_s);
                    }
                };
                let (x, y) = e_q.split_at(s * s);
                let s_obs = observed_syndrome(&qc.hp.h_prime, x, y, &e_s);
                let inst =
                    QuantumNoisyInstance { code: &qc, s_obs, weight_budget: 6 * radius };
                if let Ok(res) = decode_noisy_version(&inst) {
                    let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
                    if logical_equiv(&qc.code, &guess, &e_q, Side::One) {
                        ok += 1;
                    }
                }
            }
            results.push((radius, ok, trials));
        }
        let el = t0.elapsed();
        print!("seed {seed}: code [{}, {}] h'={s} ", nk.0, nk.1);
        for (r, ok, tr) in &results {
            print!("r{r}: {ok}/{tr} ");
        }
        println!("({el:?})");
    }
}

fn section_frs_timing() {
    println!("== frs scaling (criterion 10 shape) ==");
    let f16 = Field::canonical(4);
    let g15 = f16.root_of_order(15).unwrap();
    let small = frs_code(f16, g15, 3, 5, 4).unwrap();
    let dec_small = PolyDecoder::new(&small.base).unwrap();
    println!("small: sn=15 promise={}", dec_small.promise_radius());

    let f256 = Field::canonical(8);
    let g255 = f256.root_of_order(255).unwrap();
    let big = frs_code(f256, g255, 3, 85, 68).unwrap();
    let dec_big = PolyDecoder::new(&big.base).unwrap();
    println!("big: sn=255 promise={}", dec_big.promise_radius());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let time_one = |code: &qhgp::FoldedCode, dec: &PolyDecoder, t: usize, reps: usize, rng: &mut ChaCha8Rng| {
        let sn = code.s * code.n;
        let mut total = std::time::Duration::ZERO;
        for _ in 0..reps {
            let mut e = vec![Gf::ZERO; sn];
            let mut blocks: Vec<usize> = (0..code.n).collect();
            for i in 0..t {
                let j = rng.random_range(i..code.n);
                blocks.swap(i, j);
            }
            for &b in &blocks[..t] {
                for off in 0..code.s {
                    e[b * code.s + off] = code.base.field().sample(rng);
                }
                let off = rng.random_range(0..code.s);
                e[b * code.s + off] = code.base.field().sample_nonzero(rng);
            }
            let s = code.base.syndrome(&e);
            let t0 = Instant::now();
            let got = dec.decode(&s).unwrap();
            total += t0.elapsed();
            assert_eq!(got, e);
        }
        total.as_secs_f64() / reps as f64
    };
    let ts = time_one(&small, &dec_small, 2, 200, &mut rng);
    let tb = time_one(&big, &dec_big, 31, 10, &mut rng);
    let bound = (255.0f64 / 15.0).powf(2.5);
    println!(
        "small {:.1} us, big {:.1} us, ratio {:.1} (bound {:.1})",
        ts * 1e6,
        tb * 1e6,
        tb / ts,
        bound
    );
}

fn section_hgp_formula() {
    println!("== hgp formula vs brute force (criterion 2 prep) ==");
    let f4 = Field::canonical(2);
    let g3 = f4.root_of_order(3).unwrap();
    let mut codes: Vec<LinearCode> = vec![
        rep_code(2),
        rep_code(3),
        rep_code(4),
        rep_code(5),
        single_parity_code(Field::canonical(1), 3),
        single_parity_code(Field::canonical(1), 4),
        single_parity_code(Field::canonical(1), 5),
        hamming74(),
    ];
    codes.push(rs_code(f4.clone(), g3, 3, 1).unwrap());
    codes.push(LinearCode::random(f4.clone(), 4, 2, 11));
    codes.push(LinearCode::random(f4, 3, 1, 5));

    let mut count = 0;
    for a in &codes {
        for b in &codes {
            if a.field() != b.field() {
                continue;
            }
            let code = build_hgp(a.parity_check(), b.parity_check());
            if code.n_qubits() > 40 {
                continue;
            }
            let params = hgp_params(&code, DISTANCE_BUDGET);
            let brute_k = code.n_qubits()
                - code.parity(Side::One).rank()
                - code.parity(Side::Two).rank();
            let brute_d = match logical_distance(&code, DISTANCE_BUDGET) {
                Ok(d) => d,
                Err(e) => {
                    println!(
                        "  {} x {}: [[{}]] brute too big: {e}",
                        a.label(),
                        b.label(),
                        code.n_qubits()
                    );
                    continue;
                }
            };
            count += 1;
            let ok = params.k == brute_k && params.d == Some(brute_d);
            println!(
                "  {} x {} ({}): [[{}, {} vs {}, {:?} vs {}]] {}",
                a.label(),
                b.label(),
                a.field().order(),
                params.n,
                params.k,
                brute_k,
                params.d,
                brute_d,
                if ok { "ok" } else { "MISMATCH" }
            );
        }
    }
    println!("  {count} instances checked");
}

fn section_hprime_distance() {
    println!("== h' distance vs min(d, d_perp) (criterion 5 prep) ==");
    let f8 = Field::canonical(3);
    let g7 = f8.root_of_order(7).unwrap();
    let f16 = Field::canonical(4);
    let g5 = f16.root_of_order(5).unwrap();
    let f4 = Field::canonical(2);
    let codes: Vec<LinearCode> = vec![
        hamming74(),
        rs_code(f8.clone(), g7, 7, 3).unwrap(),
        rep_code(3),
        rep_code(5),
        single_parity_code(Field::canonical(1), 4),
        single_parity_code(Field::canonical(1), 6),
        rs_code(f8.clone(), g7, 7, 5).unwrap(),
        rs_code(f8, g7, 7, 1).unwrap(),
        rs_code(f16, g5, 5, 2).unwrap(),
        LinearCode::random(Field::canonical(1), 6, 2, 3),
        LinearCode::random(f4, 5, 3, 9),
    ];
    for c in &codes {
        let hp = match build_hprime_nonnoisy(c) {
            Ok(h) => h,
            Err(e) => {
                println!("  {}: {e}", c.label());
                continue;
            }
        };
        let d = qhgp::brute_force_distance(c, DISTANCE_BUDGET).unwrap();
        let dd = qhgp::brute_force_distance(&c.dual(), DISTANCE_BUDGET).unwrap();
        let rr = hp.h_prime.rref();
        let basis_rows: Vec<Vec<Gf>> =
            (0..rr.pivots.len()).map(|i| rr.r.row_vec(i)).collect();
        let basis = Mat::from_rows(hp.h_prime.field().clone(), basis_rows);
        let hcode = LinearCode::from_parity(basis, "h'").unwrap();
        let dh = qhgp::brute_force_distance(&hcode, DISTANCE_BUDGET).unwrap();
        println!(
            "  {}: d={d} d_perp={dd} min={} | h' [{}({}), {}] d={}",
            c.label(),
            d.min(dd),
            hcode.n(),
            hp.h_prime.rows(),
            hcode.k(),
            if dh == usize::MAX { "inf".to_string() } else { dh.to_string() }
        );
    }
}

fn section_rs_mc_timing() {
    println!("== rs[7,3] end-to-end MC timing (criterion 6 prep) ==");
    let f = Field::canonical(3);
    let g = f.root_of_order(7).unwrap();
    let qc = nonnoisy_quantum_code(rs_code(f, g, 7, 3).unwrap()).unwrap();
    let dec_c = PolyDecoder::new(&qc.base).unwrap();
    let dual = qc.base.dual();
    let dec_d = PolyDecoder::new(&dual).unwrap();
    let (rb, rd) = (dec_c.promise_radius(), dec_d.promise_radius());
    println!("radii: base {rb} dual {rd}, h' {}x{}", qc.hp.h_prime.rows(), qc.hp.h_prime.cols());
    let s = qc.n_slices();
    let field = qc.base.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t0 = Instant::now();
    let n_trials = 2000;
    let mut tried = 0;
    for _ in 0..n_trials {
        let (e_q, e_s) = loop {
            tried += 1;
            let qw = rng.random_range(0..=2);
            let sw = rng.random_range(0..=1);
            let mut e_q = vec![Gf::ZERO; 2 * s * s];
            let mut placed = 0;
            while placed < qw {
                let p = rng.random_range(0..2 * s * s);
                if e_q[p].is_zero() {
                    e_q[p] = field.sample_nonzero(&mut rng);
                    placed += 1;
                }
            }
            let mut e_s = vec![Gf::ZERO; s * s];
            let mut placed = 0;
            while placed < sw {
                let p = rng.random_range(0..s * s);
                if e_s[p].is_zero() {
                    e_s[p] = field.sample_nonzero(&mut rng);
                    placed += 1;
                }
            }
            let (x, y) = e_q.split_at(s * s);
            if nonnoisy_in_promise(&qc.hp, 1, 1, x, y, &e_s, rb, rd) {
                break (e_q, e_s);
            }
        };
        let (x, y) = e_q.split_at(s * s);
        let s_obs = observed_syndrome(&qc.hp.h_prime, x, y, &e_s);
        let inst = QuantumNonNoisyInstance { code: &qc, s_obs, weight_budget: 3 };
        let res = decode_nonnoisy_version(&inst, &dec_c, &dec_d).unwrap();
        let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
        assert!(logical_equiv(&qc.code, &guess, &e_q, Side::One));
    }
    let el = t0.elapsed();
    println!(
        "{n_trials} in-promise trials ({tried} sampled) in {el:?} => 1e4 would take {:.1} s",
        el.as_secs_f64() * 1e4 / n_trials as f64
    );
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let want = |name: &str| args.is_empty() || args.iter().any(|a| a == name);
    if want("noisy") {
        section_noisy_dims_and_timing();
    }
    if want("seeds") {
        section_seed_scan();
    }
    if want("frs") {
        section_frs_timing();
    }
    if want("formula") {
        section_hgp_formula();
    }
    if want("hprime") {
        section_hprime_distance();
    }
    if want("rsmc") {
        section_rs_mc_timing();
    }
}
