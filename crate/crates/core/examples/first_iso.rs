//! The canonical map from coimage to image is an isomorphism for
//! bijections but not for strictly partial kernels.

use effectus::prob::{first_iso_probe, KernelMap, SubDist};
use effectus::scalar::Rational01;

fn main() -> effectus::Result<()> {
    let swap = KernelMap::function(2, 2, |x| 1 - x)?;
    println!("swap: iso = {}", first_iso_probe(&swap)?.is_iso);

    for den in [2, 3, 5] {
        let r = Rational01::new(1, den)?;
        let f = KernelMap::new(2, 2, vec![SubDist::point(0, r.clone()), SubDist::point(1, r.clone())])?;
        let probe = first_iso_probe(&f)?;
        println!("{r} · id: iso = {}, canonical rows {:?}", probe.is_iso, (0..2).map(|x| probe.canonical.row(x).clone()).collect::<Vec<_>>());
    }
    Ok(())
}
