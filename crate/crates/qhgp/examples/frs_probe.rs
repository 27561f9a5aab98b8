use qhgp::{frs_code, Field, Gf, PolyDecoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let f = Field::canonical(8);
    let g = f.root_of_order(255).unwrap();
    let big = frs_code(f, g, 3, 85, 68).unwrap();
    let dec = PolyDecoder::new(&big.base).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut bad = 0;
    let mut n = 0;
    for t in [1usize, 5, 10, 15, 20, 25, 28, 29, 30, 31] {
        for _ in 0..40 {
            let mut e = vec![Gf::ZERO; 255];
            let mut blocks: Vec<usize> = (0..85).collect();
            for i in 0..t {
                let j = rng.random_range(i..85);
                blocks.swap(i, j);
            }
            for &b in &blocks[..t] {
                for off in 0..3 {
                    e[b * 3 + off] = big.base.field().sample(&mut rng);
                }
                let off = rng.random_range(0..3);
                e[b * 3 + off] = big.base.field().sample_nonzero(&mut rng);
            }
            let s = big.base.syndrome(&e);
            n += 1;
            match dec.decode(&s) {
                Ok(got) if got == e => {}
                other => {
                    bad += 1;
                    println!("t={t}: {:?}", other.map(|_| "wrong value"));
                }
            }
        }
    }
    // heavy partial-block mix: every corrupted block keeps a single symbol
    for t in [10usize, 20, 31] {
        for _ in 0..40 {
            let mut e = vec![Gf::ZERO; 255];
            let mut blocks: Vec<usize> = (0..85).collect();
            for i in 0..t {
                let j = rng.random_range(i..85);
                blocks.swap(i, j);
            }
            for &b in &blocks[..t] {
                let off = rng.random_range(0..3);
                e[b * 3 + off] = big.base.field().sample_nonzero(&mut rng);
            }
            let s = big.base.syndrome(&e);
            n += 1;
            match dec.decode(&s) {
                Ok(got) if got == e => {}
                other => {
                    bad += 1;
                    println!("sparse t={t}: {:?}", other.map(|_| "wrong value"));
                }
            }
        }
    }
    println!("{bad} failures / {n}");
}
