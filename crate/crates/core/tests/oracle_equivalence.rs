use ninf::field::FieldSpec;
use ninf::fpmod::Evaluator;
use ninf::homology::resolution;
use ninf::verify::{oracle_homology_upto, random_module, Profile};

fn compare(profile: &Profile, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        let v = random_module(seed, profile).unwrap();
        let region = v.poset().clone();
        let engine = resolution(&v, 3, Some(&region)).unwrap();
        let oracle = oracle_homology_upto(&Evaluator::new(&v), &region, 3).unwrap();
        for i in 0..=3 {
            assert_eq!(engine.support(i), oracle[i], "seed {seed}, H_{i}, module {}", v.to_json());
        }
    }
}

#[test]
fn grid_modules_agree_with_bar_complex_mod_p() {
    let t = std::time::Instant::now();
    compare(&Profile::grid(3, 3), 0..10);
    eprintln!("grid mod p: {:?}", t.elapsed());
}

#[test]
fn grid_modules_agree_with_bar_complex_over_q() {
    let t = std::time::Instant::now();
    compare(&Profile::grid(3, 3).with_field(FieldSpec::Rational), 100..110);
    eprintln!("grid over Q: {:?}", t.elapsed());
}

#[test]
fn young_modules_agree_with_bar_complex() {
    let t = std::time::Instant::now();
    compare(&Profile::young(6), 0..10);
    compare(&Profile::young(6).with_field(FieldSpec::Rational), 10..20);
    eprintln!("young: {:?}", t.elapsed());
}
