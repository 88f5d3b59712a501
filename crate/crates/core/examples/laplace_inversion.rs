// Laplace inversion with built-in pairs and a registered vector-valued pair.

use std::collections::BTreeMap;

use subpade::laplace::{inversion_error, invert, Registry, TransformPair};
use subpade::partial_fractions::partial_fraction_form;
use subpade::C64;

pub fn run_example() -> subpade::Result<f64> {
    let mut registry = Registry::default();
    println!("pairs: {}", registry.names().join(", "));

    for name in ["exp1", "sin1", "recip1p"] {
        let pair = registry.get(name).expect("builtin");
        for n in [2, 8, 32] {
            let r = inversion_error(pair, n, 1.0)?;
            println!("{name:8} n = {n:2}: value {:.15}, error {:.2e}, bounds {:?}", r.value[0].re, r.error, r.bounds);
        }
    }

    // (e^{-t}, cos t) with transform (1/(λ+1), λ/(λ²+1))
    let mut seminorms = BTreeMap::new();
    seminorms.insert(1, 2f64.sqrt());
    registry.register(TransformPair::from_double(
        "exp_cos",
        2,
        |t| vec![C64::new((-t).exp(), 0.0), C64::new(t.cos(), 0.0)],
        |l| Ok(vec![1.0 / (l + 1.0), l / (l * l + 1.0)]),
        seminorms,
    ));
    let pf = partial_fraction_form(12)?;
    let v = invert(&pf, registry.get("exp_cos").expect("registered"), 2.0)?;
    let exact = [(-2.0f64).exp(), 2.0f64.cos()];
    println!("exp_cos at t = 2: {:?} vs {:?}", v, exact);
    Ok((v[0].re - exact[0]).abs().max((v[1].re - exact[1]).abs()))
}

#[allow(dead_code)]
fn main() -> subpade::Result<()> {
    run_example()?;
    Ok(())
}
