use permshatter::checkers::{coverage, satisfies_partial, satisfies_total};
use permshatter::constructions::{
    choose_sides, fractional_family, fractional_guarantee, greedy_shattering_family, kcube_step, kcube_step_sides,
    little_construction, perfect_family, q34, shatter_family, ConstructionTrace, Guarantee, Recipe,
};
use permshatter::oracle::{min_family_size, SearchConfig};
use permshatter::separators::separating_system;
use permshatter::{binomial, Family};

fn four_orders_base(n: usize) -> Family {
    min_family_size(n, 3, 4, &SearchConfig::default()).unwrap().witness.unwrap()
}

#[test]
fn little_from_four() {
    let base = four_orders_base(4);
    assert_eq!(base.len(), 4);
    let c = little_construction(&base).unwrap();
    assert_eq!(c.family.n(), 256);
    assert_eq!(c.family.len(), 9);
    assert_eq!(c.family.len(), base.len() + separating_system(4).unwrap().len() + 1);
    assert!(satisfies_partial(&c.family, 3, 4).unwrap().holds());
    assert!(c.trace.verify(&c.family).unwrap().holds());
}

#[test]
fn little_from_five() {
    // 5^5 = 3125 elements; check a sample of triples across block levels
    let base = four_orders_base(5);
    let c = little_construction(&base).unwrap();
    assert_eq!(c.family.n(), 3125);
    assert_eq!(c.family.len(), base.len() + separating_system(5).unwrap().len() + 1);
    let sample = c.family.restrict_to_prefix(150).unwrap();
    assert!(satisfies_partial(&sample, 3, 4).unwrap().holds());
}

#[test]
fn kcube_doubles_as_lattice_step() {
    let c = kcube_step(&q34(), 2, 3).unwrap();
    assert_eq!((c.family.n(), c.family.len()), (8, 18));
    assert_eq!(coverage(&c.family, 3).unwrap().shattered_count, binomial(8, 3));
    let p4 = perfect_family(4).unwrap().family;
    let sides = choose_sides(8, 4, 16).unwrap();
    let seed = greedy_shattering_family(8, 4).unwrap();
    let step = kcube_step_sides(&seed, &sides).unwrap();
    assert_eq!(step.family.len(), 4 * seed.len());
    assert!(satisfies_total(&step.family, 4).unwrap().holds());
    assert!(kcube_step(&p4, 2, 4).is_err());
}

#[test]
fn shatter_chain_k3() {
    let c = shatter_family(3, 64).unwrap();
    assert_eq!(c.family.n(), 64);
    // 6 -> 18 -> 54 -> 162
    assert_eq!(c.family.len(), 162);
    assert!(satisfies_total(&c.family, 3).unwrap().holds());
    let c = shatter_family(3, 20).unwrap();
    assert_eq!(c.family.n(), 20);
    assert!(satisfies_total(&c.family, 3).unwrap().holds());
}

#[test]
fn shatter_chain_k4() {
    let c = shatter_family(4, 16).unwrap();
    assert_eq!(c.family.n(), 16);
    assert!(satisfies_total(&c.family, 4).unwrap().holds());
    let c = shatter_family(4, 5).unwrap();
    assert_eq!(c.family.len(), 24);
    assert!(satisfies_total(&c.family, 4).unwrap().holds());
}

#[test]
fn perfect_families() {
    for k in 2..=4 {
        let f = perfect_family(k).unwrap().family;
        assert_eq!(f.n(), k + 1);
        assert_eq!(f.len(), (1..=k).product::<usize>());
        assert!(satisfies_total(&f, k).unwrap().holds());
    }
}

#[test]
fn fractional_counts() {
    let c = fractional_family(2).unwrap();
    assert_eq!((c.family.n(), c.family.len()), (16, 6));
    let r = coverage(&c.family, 3).unwrap();
    assert!(r.shattered_count >= 272);
    assert!(r.fraction() * 5 >= 2.into());
    let c = fractional_family(3).unwrap();
    let r = coverage(&c.family, 3).unwrap();
    assert!(r.shattered_count >= fractional_guarantee(3));
    assert!(c.trace.verify(&c.family).unwrap().holds());
}

#[test]
fn trace_json_round_trip() {
    let c = fractional_family(2).unwrap();
    let text = serde_json::to_string(&c.trace).unwrap();
    let back: ConstructionTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c.trace);
    assert_eq!(back.recipe, Recipe::Fractional);
    assert_eq!(
        back.claimed_guarantee,
        Guarantee::Fraction {
            k: 3,
            shattered_at_least: 272,
            total: 560
        }
    );
}

#[test]
fn constructed_families_round_trip() {
    for f in [q34(), kcube_step(&q34(), 2, 3).unwrap().family, fractional_family(2).unwrap().family] {
        assert_eq!(Family::parse(&f.to_string()).unwrap(), f);
    }
}
