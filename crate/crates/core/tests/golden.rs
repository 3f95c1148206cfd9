use cohdistill_core::densmat::json::{from_json_str, to_json_string};
use cohdistill_core::states::random_density;

#[derive(serde::Deserialize)]
struct Golden {
    seed: u64,
    n_qubits: usize,
    rank: usize,
    re_bits: Vec<String>,
    im_bits: Vec<String>,
}

fn parse_bits(s: &str) -> f64 {
    f64::from_bits(u64::from_str_radix(s, 16).unwrap())
}

#[test]
fn random_density_is_bit_reproducible() {
    let golden: Golden = serde_json::from_str(include_str!("data/random_density_seed42.json")).unwrap();
    let rho = random_density(golden.n_qubits, golden.rank, golden.seed).unwrap();
    for (k, z) in rho.matrix().entries().iter().enumerate() {
        assert_eq!(z.re.to_bits(), parse_bits(&golden.re_bits[k]).to_bits(), "re[{k}]");
        assert_eq!(z.im.to_bits(), parse_bits(&golden.im_bits[k]).to_bits(), "im[{k}]");
    }
}

#[test]
fn json_round_trip_is_exact() {
    for seed in 0..5 {
        let rho = random_density(3, 3, seed).unwrap();
        let back = from_json_str(&to_json_string(&rho)).unwrap();
        assert_eq!(back.labels(), rho.labels());
        assert_eq!(back.matrix().max_abs_diff(rho.matrix()), 0.0);
    }
}
