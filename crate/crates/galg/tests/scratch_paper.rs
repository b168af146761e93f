//! Timing scratch for the large subring example; removed before release.

use galg::exthom::ExtComputer;
use galg::groebner::kernel_of_monomial_map;
use galg::limits::Limits;
use galg::polycore::field::PrimeField;
use galg::polycore::monomial::Monomial;
use galg::polycore::poly::PolyRing;
use galg::polycore::quotient::{QRingRc, QuotientRing};
use galg::resolve::PresentedModule;

fn toric(exps: &[&[u16]], base_vars: &[&str]) -> QRingRc<PrimeField> {
    let r = PolyRing::standard(PrimeField::new(32003).unwrap(), base_vars).unwrap();
    let mons: Vec<Monomial> = exps.iter().map(|e| r.mono_from_exps(e)).collect();
    let names: Vec<String> = (1..=exps.len()).map(|i| format!("g{i}")).collect();
    kernel_of_monomial_map(&r, &mons, &names, &Limits::none()).unwrap()
}

fn series_vs_exact(q: &QRingRc<PrimeField>, up_to: usize, label: &str) {
    let lim = Limits::none();
    let ambient = QuotientRing::polynomial_ring(q.ambient.clone());
    let module = PresentedModule::cyclic(&ambient, &q.ideal_gens).unwrap();
    let scalars = PresentedModule::ring_module(&ambient);
    let mut comp = ExtComputer::new(&module, &scalars, &lim).unwrap();
    for n in 0..=up_to {
        let t0 = std::time::Instant::now();
        let series = comp.zero_by_series(n, &lim).unwrap();
        let ts = t0.elapsed();
        let t1 = std::time::Instant::now();
        let exact = comp.ext(n, &lim).unwrap().is_zero(&lim).unwrap();
        let te = t1.elapsed();
        let mark = if series == Some(exact) { "ok" } else { "MISMATCH" };
        eprintln!("{label} n={n}: series={series:?} ({ts:?}) exact={exact} ({te:?}) {mark}");
    }
}

#[test]
fn veronese_series_cross_check() {
    // All degree-2 monomials in three variables: a 6-variable presentation.
    let q = toric(
        &[&[2, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 2, 0], &[0, 1, 1], &[0, 0, 2]],
        &["x", "y", "z"],
    );
    eprintln!("veronese: {} gens", q.ideal_gens.len());
    series_vs_exact(&q, 4, "veronese");

    let lim = Limits::none();
    let ambient = QuotientRing::polynomial_ring(q.ambient.clone());
    let module = PresentedModule::cyclic(&ambient, &q.ideal_gens).unwrap();
    let scalars = PresentedModule::ring_module(&ambient);
    let mut comp = ExtComputer::new(&module, &scalars, &lim).unwrap();
    comp.debug_series_parts(2, &lim).unwrap();
}

#[test]
fn paper_example_n1_probe() {
    let q = toric(
        &[
            &[3, 0, 0],
            &[2, 1, 0],
            &[2, 0, 1],
            &[1, 2, 0],
            &[1, 0, 2],
            &[0, 3, 0],
            &[0, 2, 1],
            &[0, 1, 2],
            &[0, 0, 3],
        ],
        &["x", "y", "z"],
    );
    eprintln!("paper: {} gens", q.ideal_gens.len());
    let lim = Limits::none();
    let ambient = QuotientRing::polynomial_ring(q.ambient.clone());
    let module = PresentedModule::cyclic(&ambient, &q.ideal_gens).unwrap();
    let scalars = PresentedModule::ring_module(&ambient);
    let mut comp = ExtComputer::new(&module, &scalars, &lim).unwrap();
    for len in 1..=9 {
        let t0 = std::time::Instant::now();
        comp.extend(len, &lim).unwrap();
        eprintln!(
            "extend({len}) in {:?}; ranks {:?} complete {}",
            t0.elapsed(),
            comp.resolution().ranks,
            comp.resolution().complete
        );
        if comp.resolution().complete {
            break;
        }
    }
    for n in 0..=3 {
        let t0 = std::time::Instant::now();
        let s = comp.zero_by_series(n, &lim).unwrap();
        eprintln!("series({n}) = {s:?} in {:?}", t0.elapsed());
    }
}
