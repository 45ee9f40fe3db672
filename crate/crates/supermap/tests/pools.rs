use std::time::Instant;

use supermap::classify::{osp12_pool, sl21_pool, twisted_sl21_pool, verify_twisted, verify_untwisted, Report};

fn show(r: &Report, t: Instant) {
    println!("{}", r.to_text());
    for f in r.failures() {
        println!("FAIL {} {}", f.name, f.witness);
    }
    println!("elapsed {:?}", t.elapsed());
}

#[test]
fn osp12_pool_passes() {
    let t = Instant::now();
    let pool = osp12_pool().unwrap();
    assert!(pool.probes.len() >= 10);
    let r = verify_untwisted(&pool);
    show(&r, t);
    assert!(r.passed());
}

#[test]
fn sl21_pool_passes() {
    let t = Instant::now();
    let pool = sl21_pool().unwrap();
    assert!(pool.probes.len() >= 10);
    let r = verify_untwisted(&pool);
    show(&r, t);
    assert!(r.passed());
}

#[test]
fn twisted_pool_passes() {
    let t = Instant::now();
    let pool = twisted_sl21_pool().unwrap();
    assert!(pool.probes.len() >= 10);
    let r = verify_twisted(&pool);
    show(&r, t);
    assert!(r.passed());
}
